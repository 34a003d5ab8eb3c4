//! Acceptance suite: one test per acceptance criterion, each printing a
//! `criterion N: PASS` line on success. The sweep scale is p in {3, 5, 7},
//! conductor exponents <= 2, character orders <= 12; deeper cases run at
//! p = 3 only, and the most expensive newform-side averages are tiered to the
//! optimal side only (the sweep's `newform` flag), to keep the suite fast.

use rsperiods::chars::{
    antinorm, classify_case, epsilon_factor, epsilon_factor_f, inert_unit_generators,
    sweep_cases, AddChar, CaseKind, FChar, MultChar, SweepCase,
};
use rsperiods::exact::{rat, rat_int, CycQ, LaurentPoly, RatFunX, Rat};
use rsperiods::global::{
    c_rs, euler_identity_check, index_gamma0, m_bound, ring_class_index, AlphaSource,
    GlobalFormSpec, LocalDatum,
};
use rsperiods::localring::{
    make_algebra, norm_one_reps, rat_pow_p, unit_reps, val_p, Kind, PadicElem, QuadAlgebra,
    RingClassOrder,
};
use rsperiods::weil::{p_residue_reps, phi_opt};
use rsperiods::zeta::{
    alpha_global_table, alpha_local_table, alpha_oracle_from_series, e_factor, known_tension,
    l_adjoint_satake, rs_zeta_unramified, zeta_new_closed_value, zeta_new_series,
    zeta_opt_closed, zeta_opt_series, RatioResult, RatioStatus,
};

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rsperiods::exact::LaurentSeriesX;

/// Enumeration depth for algebras: deep enough for every series in the sweep.
const PREC: i64 = 26;

fn cval(n: i64, d: i64) -> CycQ {
    CycQ::from_rat(1, rat(n, d))
}

fn sweep() -> Vec<SweepCase> {
    sweep_cases(&[3, 5, 7], 12, PREC).expect("sweep generation")
}

fn case_n_max(alg: &QuadAlgebra, chi: &MultChar) -> i64 {
    let o = antinorm(alg, chi).expect("antinorm").o_xi as i64;
    4 * o + 12
}

fn divisors_upto(n: u64, cap: u64) -> Vec<u64> {
    (1..=cap.min(n)).filter(|d| n % d == 0).collect()
}

/// Per-case series caches: the oracle series (the newform one in particular,
/// whose `SL_2(O_F)` average dominates the suite's runtime) are computed once
/// and shared between the criteria that consume them.
type SeriesCache = Mutex<HashMap<String, Arc<OnceLock<LaurentSeriesX>>>>;

fn cache_slot(cache: &SeriesCache, key: &str) -> Arc<OnceLock<LaurentSeriesX>> {
    cache.lock().unwrap().entry(key.to_string()).or_default().clone()
}

/// Optimal-form oracle series for one sweep case (criteria 2 and 6).
fn opt_series_cached(c: &SweepCase) -> LaurentSeriesX {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    cache_slot(CACHE.get_or_init(Default::default), &c.label)
        .get_or_init(|| {
            let t = std::time::Instant::now();
            let xi = antinorm(&c.alg, &c.chi).unwrap();
            let order = RingClassOrder::new(&c.alg, xi.o_xi).unwrap();
            let s = zeta_opt_series(&c.alg, &order, &c.chi, case_n_max(&c.alg, &c.chi)).unwrap();
            eprintln!("opt-series {}: {:.1}s", c.label, t.elapsed().as_secs_f64());
            s
        })
        .clone()
}

/// Newform oracle series for one sweep case (criteria 3 and 7).
fn new_series_cached(c: &SweepCase) -> LaurentSeriesX {
    static CACHE: OnceLock<SeriesCache> = OnceLock::new();
    cache_slot(CACHE.get_or_init(Default::default), &c.label)
        .get_or_init(|| {
            let t = std::time::Instant::now();
            let psi = AddChar::standard(c.alg.p);
            let s = zeta_new_series(&c.alg, &c.chi, &psi, case_n_max(&c.alg, &c.chi)).unwrap();
            eprintln!("new-series {}: {:.1}s", c.label, t.elapsed().as_secs_f64());
            s
        })
        .clone()
}

/// `val_p(x) >= k`, with `val_p(0) = +infinity`.
fn val_ge(x: &Rat, p: u64, k: i64) -> bool {
    use num_traits::Zero;
    x.is_zero() || val_p(x, p).map_or(true, |v| v >= k)
}

// ---------------------------------------------------------------------------
// Criterion 1: the Gauss-sum product identity
// eps(chi, psi) eps(chi^{-1}, psi^{-1}) = q_E^{-o(chi)}.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_epsilon_product_identity() {
    let mut checked = 0usize;
    for p in [3u64, 5, 7] {
        let q = p as i64;
        let psi = AddChar::standard(p);
        // E = F: every ramified unit character of conductor 1, plus conductor 2
        // at p = 3 (the deep tier runs at the smallest prime only).
        let mut levels = vec![1u32];
        if p == 3 {
            levels.push(2);
        }
        for level in levels.clone() {
            for chi in FChar::all_unit_characters(p, level).unwrap() {
                if chi.conductor() != level {
                    continue;
                }
                let lhs = &epsilon_factor_f(&chi, &psi).unwrap()
                    * &epsilon_factor_f(&chi.inverse(), &psi.inverse()).unwrap();
                let rhs = CycQ::from_rat(1, rat_pow_p(p, -(level as i64)));
                assert_eq!(lhs, rhs, "E = F identity failed at p = {p}, o = {level}");
                checked += 1;
                // E split: the factor is the product of the two component
                // factors, so chi = (chi, chi) covers the split identity too.
                let split_lhs = &lhs * &lhs;
                let split_rhs = CycQ::from_rat(1, rat_pow_p(p, -2 * level as i64));
                assert_eq!(split_lhs, split_rhs);
            }
        }
        // E inert: conductor 1 via a residue-field generator (all value orders
        // d | q^2 - 1 with d <= 12), conductor 2 at p = 3 only.
        let alg = make_algebra(p, Kind::Inert, 8).unwrap();
        let gens1 = inert_unit_generators(&alg, 1).unwrap();
        let (g, g_ord) = &gens1[0];
        for d in divisors_upto(*g_ord, 12) {
            if d == 1 {
                continue;
            }
            let chi = MultChar::field_from_generators(
                &alg,
                1,
                &[(g.clone(), CycQ::root_of_unity(d, 1))],
                CycQ::one(1),
            )
            .unwrap();
            assert_eq!(chi.conductor(&alg).unwrap(), 1);
            let lhs = &epsilon_factor(&alg, &chi, &psi).unwrap()
                * &epsilon_factor(&alg, &chi.inverse(), &psi.inverse()).unwrap();
            assert_eq!(
                lhs,
                CycQ::from_rat(1, rat(1, q * q)),
                "inert identity failed at p = {p}, order {d}"
            );
            checked += 1;
        }
        if p == 3 {
            let gens2 = inert_unit_generators(&alg, 2).unwrap();
            let pairs: Vec<(PadicElem, CycQ)> = gens2
                .iter()
                .map(|(gen, ord)| {
                    let im = if *ord == p {
                        CycQ::root_of_unity(p, 1)
                    } else {
                        CycQ::root_of_unity(2, 1)
                    };
                    (gen.clone(), im)
                })
                .collect();
            let chi = MultChar::field_from_generators(&alg, 2, &pairs, CycQ::one(1)).unwrap();
            assert_eq!(chi.conductor(&alg).unwrap(), 2);
            let lhs = &epsilon_factor(&alg, &chi, &psi).unwrap()
                * &epsilon_factor(&alg, &chi.inverse(), &psi.inverse()).unwrap();
            assert_eq!(lhs, CycQ::from_rat(1, rat_pow_p(p, -4)));
            checked += 1;
        }
    }
    println!("criterion 1: PASS — epsilon product identity holds for {checked} characters");
}

// ---------------------------------------------------------------------------
// Criterion 2: optimal-form closed forms against the brute-force series.
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_optimal_closed_forms() {
    let mut matched = 0usize;
    let mut flagged = 0usize;
    for c in sweep() {
        let xi = antinorm(&c.alg, &c.chi).unwrap();
        let n_max = case_n_max(&c.alg, &c.chi);
        let oracle = opt_series_cached(&c);
        let closed = zeta_opt_closed(&c.alg, &c.chi).unwrap().series_expand(n_max);
        if oracle.agrees_with(&closed) {
            matched += 1;
        } else {
            let case = classify_case(&c.alg, &c.chi).unwrap();
            assert!(
                known_tension(case).is_some(),
                "unexpected optimal-form mismatch in {}",
                c.label
            );
            // The stated closed form keeps only the leading shell; its leading
            // coefficient must still agree with the oracle.
            let lead = -2 * xi.o_xi as i64;
            assert_eq!(
                oracle.coeff(lead),
                closed.coeff(lead),
                "leading coefficient differs in {}",
                c.label
            );
            flagged += 1;
        }
    }
    // The ramified-extension value q(1 + q^{-1}) / (2 (1 - q^{-1})) gives 3 at q = 3.
    let alg = make_algebra(3, Kind::Ramified, 8).unwrap();
    let chi = MultChar::field_unramified(CycQ::one(1));
    let v = zeta_opt_closed(&alg, &chi)
        .unwrap()
        .eval_at(&cval(1, 3))
        .unwrap();
    assert_eq!(v, CycQ::from_int(1, 3));
    println!(
        "criterion 2: PASS — {matched} cases match exactly, {flagged} known-discrepancy cases \
         (leading term verified)"
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: newform values at s = 1 and the ramified-extension relation.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_newform_values() {
    let mut matched = 0usize;
    let mut flagged = 0usize;
    for c in sweep() {
        if !c.newform {
            continue;
        }
        let q = c.alg.p as i64;
        let series = new_series_cached(&c);
        let f = series.reconstruct(6).expect("newform series reconstructs");
        let v = f.eval_at(&cval(1, q)).unwrap();
        let expected = zeta_new_closed_value(&c.alg, &c.chi).unwrap();
        let case = classify_case(&c.alg, &c.chi).unwrap();
        if v == expected {
            matched += 1;
        } else {
            // The one stated value that contradicts its own derivation: the
            // split semiramified xi^2-ramified case, off by exactly q^2.
            assert_eq!(case, CaseKind::SplitSemiSquareRam, "unexpected mismatch in {}", c.label);
            assert_eq!(
                &v * &CycQ::from_int(1, q * q),
                expected,
                "discrepancy in {} is not the known q^2 factor",
                c.label
            );
            flagged += 1;
        }
    }
    // Ramified extension: e . Z_new = 4 (q + 1)^{-1} . Z_opt as series.
    for p in [3u64, 5, 7] {
        let q = p as i64;
        let alg = make_algebra(p, Kind::Ramified, 8).unwrap();
        let psi = AddChar::standard(p);
        for sign in [1i64, -1] {
            let chi = MultChar::field_unramified(CycQ::from_int(1, sign));
            let order = RingClassOrder::new(&alg, 0).unwrap();
            let lhs = zeta_new_series(&alg, &chi, &psi, 12)
                .unwrap()
                .scale(&CycQ::from_int(1, e_factor(&alg)));
            let rhs = zeta_opt_series(&alg, &order, &chi, 12)
                .unwrap()
                .scale(&cval(4, q + 1));
            assert!(lhs.agrees_with(&rhs), "ramified relation failed at p = {p}");
        }
    }
    println!(
        "criterion 3: PASS — {matched} newform values exact, {flagged} known-discrepancy; \
         ramified relation holds as a series identity"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: lemma-level checks by enumeration.
// ---------------------------------------------------------------------------

/// The optimal lattice decomposes as claimed: the two-variable characteristic
/// function equals the membership test `x + y in O_c` and `delta y in O_c`.
fn check_lattice_decomposition(alg: &QuadAlgebra, o: u32) {
    let order = RingClassOrder::new(alg, o).unwrap();
    let phi = phi_opt(alg, &order).unwrap();
    let delta = order.delta(alg);
    let mut pts = Vec::new();
    for r in p_residue_reps(alg, 2) {
        for m in 0..=(o as i64 + 1) {
            pts.push(alg.mul(&r, &alg.uniformizer_pow(-m)));
        }
    }
    let one = CycQ::one(1);
    let zero = CycQ::zero(1);
    for x in &pts {
        for y in &pts {
            let member = order.contains(alg, &alg.add(x, y))
                && order.contains(alg, &alg.mul(&delta, y));
            let got = phi.eval(alg, x, y);
            assert_eq!(
                got,
                if member { one.clone() } else { zero.clone() },
                "lattice decomposition failed at p = {}, o = {o}",
                alg.p
            );
        }
    }
}

/// Norm-one coset identity: `(1 + pi^i O_E)^1 = (1 + pi^i eps O_i)^1` for the
/// trace-zero unit `eps` of the inert extension.
fn check_norm_one_cosets() {
    let alg = make_algebra(3, Kind::Inert, 8).unwrap();
    let eps = alg.elem_int(0, 1);
    for i in 1u32..=2 {
        let oi = RingClassOrder::new(&alg, i).unwrap();
        let pie = alg.mul(&alg.uniformizer_pow(i as i64), &eps);
        let pie_inv = alg.inv(&pie).unwrap();
        for t in norm_one_reps(&alg, i + 2).unwrap() {
            let d = alg.sub(&t, &alg.one());
            let lhs = if d.is_zero() {
                true
            } else {
                alg.val_pi(&d).map_or(true, |v| v >= i as i64)
            };
            let rhs = oi.contains(&alg, &alg.mul(&d, &pie_inv));
            assert_eq!(lhs, rhs, "norm-one coset identity failed at i = {i}");
        }
    }
}

/// The split norm-one inner integral over `(1 + (pi^a, pi^b) O_E)^1` of a
/// ramified antinorm character, by enumeration against the closed value.
fn check_split_inner_integral(mu: &FChar) {
    let p = mu.p;
    let q = p as i64;
    let o = mu.conductor() as i64;
    assert!(o >= 1);
    for a in -2i64..=3 {
        for b in -2i64..=3 {
            let l = o.max(a).max(b).max(1);
            let pl = p.pow(l as u32);
            // Multiplicative measure with vol(O_F^x) = 1: each shell has total
            // measure one and each unit class at level L has measure
            // 1 / ((q - 1) q^{L - 1}).
            let class_vol = CycQ::from_rat(
                1,
                rat_int(1) / (&rat_int(q - 1) * &rat_pow_p(p, l - 1)),
            );
            let mut acc = CycQ::zero(1);
            for ell in -3i64..=3 {
                for u in 1..pl {
                    if u % p == 0 {
                        continue;
                    }
                    let v = &rat_int(u as i64) * &rat_pow_p(p, ell);
                    let v_inv = rat_int(1) / v.clone();
                    let c1 = val_ge(&(&v - &rat_int(1)), p, a);
                    let c2 = val_ge(&(&v_inv - &rat_int(1)), p, b);
                    if c1 && c2 {
                        acc = &acc + &(&mu.eval(&v).unwrap() * &class_vol);
                    }
                }
            }
            let expected = if a.max(b) >= o {
                // q^{-max(a,b)} (1 - q^{-1})^{-1}
                CycQ::from_rat(1, &rat_pow_p(p, -a.max(b)) * &rat(q, q - 1))
            } else {
                CycQ::zero(1)
            };
            assert_eq!(
                acc, expected,
                "split inner integral failed at p = {p}, o = {o}, (a, b) = ({a}, {b})"
            );
        }
    }
}

/// Order of a rational under `val_p`, where every sample point is nonzero.
fn ord_q(x: &Rat, p: u64) -> i64 {
    val_p(x, p).expect("nonzero sample point")
}

/// The inert averaged-function decomposition at conductor one (k = 2): the
/// restricted Fourier transform equals the stated sum of character-weighted
/// shells, checked pointwise by brute-force integration.
fn check_inert_decomposition() {
    let p = 3u64;
    let q = p as i64;
    let k = 2i64;
    let alg = make_algebra(p, Kind::Inert, 10).unwrap();
    let psi = AddChar::standard(p);
    let (g, _) = inert_unit_generators(&alg, 1).unwrap().remove(0);
    let chi = MultChar::field_from_generators(
        &alg,
        1,
        &[(g, CycQ::root_of_unity(8, 1))],
        CycQ::one(1),
    )
    .unwrap();
    let m = 2i64;
    let units = unit_reps(&alg, m as u32).unwrap();
    // Precompute per class: the shifted representative pi^{-k/2} u, chi(u),
    // and the norm of u.
    let pih = alg.uniformizer_pow(-k / 2);
    let pre: Vec<(PadicElem, CycQ, Rat)> = units
        .iter()
        .map(|u| (alg.mul(&pih, u), chi.eval(&alg, u).unwrap(), alg.norm(u)))
        .collect();
    // Additive measure with vol(O_E) = 1: each class pi^{-k/2}(u + pi^m O_E)
    // has volume q^{k - 2m}; one factor per variable.
    let wt = CycQ::from_rat(1, rat_pow_p(p, 2 * (k - 2 * m)));
    let omegas = FChar::all_unit_characters(p, (k - 1) as u32).unwrap();
    let norm_units = rat_int((q * q - 1) * q.pow((k - 2) as u32));

    let lhs = |x: &PadicElem, y: &PadicElem| -> CycQ {
        let mut acc = CycQ::zero(1);
        for (u, chi_u, nu) in &pre {
            let xu = alg.mul(x, u);
            for (v, chi_v, nv) in &pre {
                // Norm condition N(u/v) in 1 + pi^{k-1} O_F.
                if !val_ge(&(&(nu / nv) - &rat_int(1)), p, k - 1) {
                    continue;
                }
                let ph = psi.eval_e(&alg, &alg.sub(&xu, &alg.mul(y, v)));
                acc = &acc + &(&(&(chi_u * &chi_v.conj()) * &ph) * &wt);
            }
        }
        acc
    };
    let rhs = |x: &PadicElem, y: &PadicElem| -> CycQ {
        let (ox, oy) = (alg.val_pi(x).unwrap(), alg.val_pi(y).unwrap());
        if ox != oy {
            return CycQ::zero(1);
        }
        let n = -ox;
        let r = alg.mul(y, &alg.inv(x).unwrap());
        let nr = alg.norm(&r);
        let mut f = CycQ::zero(1);
        for w in &omegas {
            let o_tw = chi.twist_by_norm(&alg, w).unwrap().conductor(&alg).unwrap() as i64;
            if o_tw == k / 2 + n {
                f = &f + &w.eval(&nr).unwrap();
            }
        }
        let scale = CycQ::from_rat(1, &rat_pow_p(p, k - 2 * n) / &norm_units);
        &(&chi.eval(&alg, &r).unwrap() * &f) * &scale
    };
    let g2 = alg.elem_int(1, 1);
    let mut pts = Vec::new();
    for n in -1i64..=1 {
        for u0 in [alg.one(), g2.clone()] {
            pts.push(alg.mul(&u0, &alg.uniformizer_pow(-n)));
        }
    }
    for x in &pts {
        for y in &pts {
            assert_eq!(lhs(x, y), rhs(x, y), "inert decomposition failed");
        }
    }
}

/// The split fully-ramified decomposition at (o1, o2) = (1, 1), so k = 2,
/// with chi1 = chi2 the quadratic character at p = 3.
fn check_split_fully_ramified_decomposition() {
    let p = 3u64;
    let q = p as i64;
    let (o1, o2) = (1i64, 1i64);
    let k = o1 + o2;
    let psi = AddChar::standard(p);
    let chi1 = FChar::from_generator(p, 1, CycQ::from_int(1, -1), CycQ::one(1)).unwrap();
    let chi2 = chi1.clone();
    let m = 2i64;
    let pm = p.pow(m as u32);
    let units: Vec<Rat> = (1..pm).filter(|u| u % p != 0).map(|u| rat_int(u as i64)).collect();
    let omegas = FChar::all_unit_characters(p, (k - 1) as u32).unwrap();
    let norm_units = rat_int((q - 1) * q.pow((k - 2) as u32));
    // Additive volume of each class pi^{-o_i}(u + pi^m O_F) is q^{o_i - m}.
    let wt = CycQ::from_rat(1, rat_pow_p(p, 2 * (o1 - m) + 2 * (o2 - m)));

    let lhs = |x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat| -> CycQ {
        let mut acc = CycQ::zero(1);
        for u1 in &units {
            for u2 in &units {
                for v1 in &units {
                    for v2 in &units {
                        let ratio = &(u1 * u2) / &(v1 * v2);
                        if !val_ge(&(&ratio - &rat_int(1)), p, k - 1) {
                            continue;
                        }
                        let arg = &(&(&(u1 * x1) * &rat_pow_p(p, -o1)
                            + &(u2 * x2) * &rat_pow_p(p, -o2))
                            - &(&(v1 * y1) * &rat_pow_p(p, -o1)))
                            - &(&(v2 * y2) * &rat_pow_p(p, -o2));
                        let c = &(&chi1.eval(&(u1 / v1)).unwrap()
                            * &chi2.eval(&(u2 / v2)).unwrap())
                            * &psi.eval(&arg);
                        acc = &acc + &(&c * &wt);
                    }
                }
            }
        }
        acc
    };
    let rhs = |x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat| -> CycQ {
        let mut acc = CycQ::zero(1);
        for w in &omegas {
            let mm = chi1.mul(w).unwrap().conductor() as i64 - o1;
            let nn = chi2.mul(w).unwrap().conductor() as i64 - o2;
            let on_support = ord_q(x1, p) == -mm
                && ord_q(y1, p) == -mm
                && ord_q(x2, p) == -nn
                && ord_q(y2, p) == -nn;
            if !on_support {
                continue;
            }
            let term = &(&chi1.eval(&(y1 / x1)).unwrap() * &chi2.eval(&(y2 / x2)).unwrap())
                * &w.eval(&(&(y1 * y2) / &(x1 * x2))).unwrap();
            let scale = CycQ::from_rat(1, &rat_pow_p(p, k - mm - nn) / &norm_units);
            acc = &acc + &(&term * &scale);
        }
        acc
    };
    let vals: Vec<Rat> = vec![rat_int(1), rat_int(2), rat(1, 3), rat(2, 3), rat_int(3)];
    for x1 in &vals {
        for y1 in &vals {
            for x2 in &vals {
                // One y2 slice per x2 keeps the point count reasonable.
                for y2 in [x2.clone(), rat_int(2) * x2] {
                    assert_eq!(
                        lhs(x1, x2, y1, &y2),
                        rhs(x1, x2, y1, &y2),
                        "split fully-ramified decomposition failed"
                    );
                }
            }
        }
    }
}

/// The split semiramified decomposition at k = o(chi1) = 2 with chi2
/// unramified, p = 3 (chi1 of order 6, conductor 2).
fn check_split_semiramified_decomposition() {
    let p = 3u64;
    let q = p as i64;
    let k = 2i64;
    let psi = AddChar::standard(p);
    let chi1 = FChar::from_generator(p, 2, CycQ::root_of_unity(6, 1), CycQ::one(1)).unwrap();
    assert_eq!(chi1.conductor(), 2);
    let m = 2i64;
    let pm = p.pow(m as u32);
    let units: Vec<Rat> = (1..pm).filter(|u| u % p != 0).map(|u| rat_int(u as i64)).collect();
    let residues: Vec<Rat> = (0..pm).map(|u| rat_int(u as i64)).collect();
    // u1, v1 run over pi^{-k} O_F^x (class volume q^{k - m}); u2, v2 over O_F
    // (class volume q^{-m}).
    let wt = CycQ::from_rat(1, rat_pow_p(p, 2 * (k - m) - 2 * m));

    let lhs = |x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat| -> CycQ {
        let mut acc = CycQ::zero(1);
        for u1 in &units {
            for v1 in &units {
                let chi_r = chi1.eval(&(u1 / v1)).unwrap();
                for u2 in &residues {
                    for v2 in &residues {
                        if !val_ge(&(&(u1 * u2) - &(v1 * v2)), p, k - 1) {
                            continue;
                        }
                        let arg = &(&(&(u1 * x1) * &rat_pow_p(p, -k) + u2 * x2)
                            - &(&(v1 * y1) * &rat_pow_p(p, -k)))
                            - &(v2 * y2);
                        acc = &acc + &(&(&chi_r * &psi.eval(&arg)) * &wt);
                    }
                }
            }
        }
        acc
    };
    let rhs = |x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat| -> CycQ {
        if ord_q(x1, p) != 0 || ord_q(y1, p) != 0 {
            return CycQ::zero(1);
        }
        let mut acc = CycQ::zero(1);
        for mm in 0..=(k - 1) {
            for nn in mm..=(k - 1) {
                if ord_q(x2, p) != -nn || ord_q(y2, p) != -nn {
                    continue;
                }
                let level = (k - 1 - mm) as u32;
                let arg = &(y1 * y2) / &(x1 * x2);
                let f = if level == 0 {
                    if nn == mm { CycQ::one(1) } else { CycQ::zero(1) }
                } else {
                    let group = rat_int((q - 1) * q.pow(level - 1));
                    let mut s = CycQ::zero(1);
                    for w in FChar::all_unit_characters(p, level).unwrap() {
                        if w.conductor() as i64 == nn - mm {
                            s = &s + &w.eval(&arg).unwrap();
                        }
                    }
                    &s * &CycQ::from_rat(1, rat_int(1) / group)
                };
                let term = &(&chi1.eval(&(y1 / x1)).unwrap() * &f)
                    * &CycQ::from_rat(1, rat_pow_p(p, k - mm - nn));
                acc = &acc + &term;
            }
        }
        acc
    };
    let units_small: Vec<Rat> = vec![rat_int(1), rat_int(2)];
    let tails: Vec<Rat> = vec![rat_int(1), rat_int(2), rat(1, 3), rat(2, 3), rat_int(3)];
    for x1 in &units_small {
        for y1 in &units_small {
            for x2 in &tails {
                for y2 in &tails {
                    assert_eq!(
                        lhs(x1, x2, y1, y2),
                        rhs(x1, x2, y1, y2),
                        "split semiramified decomposition failed at \
                         ({x1}, {x2}, {y1}, {y2})"
                    );
                }
            }
        }
    }
    // Off-support in the first coordinate: the transform vanishes.
    assert_eq!(
        lhs(&rat_int(3), &rat_int(1), &rat_int(1), &rat_int(1)),
        CycQ::zero(1)
    );
}

/// Character-count identity behind the semiramified diagonal values:
/// the number of conductor-exactly-j characters at each level matches the
/// unit-group count difference, and the piecewise closed form follows.
fn check_character_counts() {
    let unit_count = |q: i64, j: i64| -> i64 {
        if j > 0 {
            (q - 1) * q.pow((j - 1) as u32)
        } else if j == 0 {
            1
        } else {
            0
        }
    };
    for q in [3i64, 5] {
        for k in [3i64, 4] {
            for m in 1..=(k - 2) {
                for n in m..=(k - 1) {
                    let level = (k - 1 - m) as u32;
                    let count = FChar::all_unit_characters(q as u64, level)
                        .unwrap()
                        .iter()
                        .filter(|w| w.conductor() as i64 == n - m)
                        .count() as i64;
                    assert_eq!(
                        count,
                        unit_count(q, n - m) - unit_count(q, n - m - 1),
                        "character count failed at q = {q}, k = {k}, (m, n) = ({m}, {n})"
                    );
                    let f = rat(count, unit_count(q, k - 1 - m));
                    let expected = if n > m + 1 {
                        &rat_pow_p(q as u64, n - k) * &rat_int(q - 1)
                    } else if n == m + 1 {
                        &rat(q - 2, q - 1) * &rat_pow_p(q as u64, -k + n + 1)
                    } else {
                        &rat(1, q - 1) * &rat_pow_p(q as u64, -k + n + 2)
                    };
                    assert_eq!(f, expected, "piecewise value failed at q = {q}, k = {k}");
                }
            }
        }
    }
}

#[test]
fn criterion_4_lemma_checks() {
    check_lattice_decomposition(&make_algebra(3, Kind::Inert, 8).unwrap(), 1);
    check_lattice_decomposition(&make_algebra(3, Kind::Ramified, 8).unwrap(), 0);
    check_lattice_decomposition(&make_algebra(3, Kind::Split, 8).unwrap(), 1);
    check_norm_one_cosets();
    let mu3 = FChar::from_generator(3, 1, CycQ::from_int(1, -1), CycQ::one(1)).unwrap();
    let mu5 = FChar::from_generator(5, 1, CycQ::root_of_unity(4, 1), CycQ::one(1)).unwrap();
    let mu9 = FChar::from_generator(3, 2, CycQ::root_of_unity(6, 1), CycQ::one(1)).unwrap();
    check_split_inner_integral(&mu3);
    check_split_inner_integral(&mu5);
    check_split_inner_integral(&mu9);
    check_inert_decomposition();
    check_split_fully_ramified_decomposition();
    check_split_semiramified_decomposition();
    check_character_counts();
    println!(
        "criterion 4: PASS — lattice decomposition, norm-one cosets, split inner integrals, \
         three averaged-function decompositions, and character counts all verified by enumeration"
    );
}

// ---------------------------------------------------------------------------
// Criterion 5: the unramified Rankin-Selberg normalization and the adjoint
// Euler-factor identity at good primes.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_unramified_rankin_selberg() {
    let one_plus_x = RatFunX::new(
        LaurentPoly::from_terms(&[(0, CycQ::one(1)), (1, CycQ::one(1))]),
        LaurentPoly::one(),
    )
    .unwrap();
    let mut pairs = 0usize;
    for d1 in 1u64..=12 {
        for d2 in d1..=12 {
            let a1 = CycQ::root_of_unity(d1, 1);
            let a2 = CycQ::root_of_unity(d2, 1);
            let b1 = a1.inv().unwrap();
            let b2 = a2.inv().unwrap();
            let rs = rs_zeta_unramified(&a1, &a2, &b1, &b2).unwrap();
            let lad = l_adjoint_satake(&a1, &a2).unwrap();
            let rhs = &one_plus_x * &lad;
            // Both sides have denominator degree <= 5, so agreement through
            // degree 16 pins down equality of rational functions.
            assert!(
                rs.series_expand(16).agrees_with(&rhs.series_expand(16)),
                "normalized pairing is not 1 at orders ({d1}, {d2})"
            );
            assert!(
                euler_identity_check(&a1, &a2).unwrap(),
                "adjoint Euler identity failed at orders ({d1}, {d2})"
            );
            pairs += 1;
        }
    }
    println!(
        "criterion 5: PASS — normalized unramified pairing equals 1 and the adjoint Euler \
         identity holds for {pairs} Satake pairs"
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: rationality and reality of the optimal-form period.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_period_rationality() {
    let mut checked = 0usize;
    for c in sweep() {
        let xi = antinorm(&c.alg, &c.chi).unwrap();
        let q = c.alg.p as i64;
        let series = opt_series_cached(&c);
        let f = series.reconstruct(6).expect("optimal series reconstructs");
        let p_opt = f.eval_at(&cval(1, q)).unwrap();
        assert!(!p_opt.is_zero(), "optimal period vanishes in {}", c.label);
        // Values of xi on the compact part of the norm-one torus generate the
        // field the period must be symmetric over.
        let level = xi.o_xi.max(1) + 1;
        let xi_vals: Vec<CycQ> = norm_one_reps(&c.alg, level)
            .unwrap()
            .iter()
            .map(|t| xi.eval(&c.alg, t).unwrap())
            .collect();
        let mut big = p_opt.order();
        for v in &xi_vals {
            big = num_integer::lcm(big, v.order());
        }
        let embed = CycQ::one(big);
        let p_big = &p_opt * &embed;
        let vals_big: Vec<CycQ> = xi_vals.iter().map(|v| v * &embed).collect();
        let mut gal_checked = 0usize;
        for t in 1..=big as i64 {
            if num_integer::gcd(t as u64, big) != 1 {
                continue;
            }
            let fixes_symmetric_values = vals_big.iter().all(|v| {
                let vt = v.galois_apply(t).unwrap();
                &vt + &vt.inv().unwrap() == &v.clone() + &v.inv().unwrap()
            });
            if fixes_symmetric_values {
                assert_eq!(
                    p_big.galois_apply(t).unwrap(),
                    p_big,
                    "period not Galois-fixed in {} at t = {t}",
                    c.label
                );
                gal_checked += 1;
            }
        }
        assert!(gal_checked >= 1);
        assert_eq!(p_big.conj(), p_big, "period not conjugation-fixed in {}", c.label);
        checked += 1;
    }
    println!(
        "criterion 6: PASS — optimal period nonzero, conjugation-fixed, and fixed by the \
         symmetric-value Galois subgroup for {checked} sweep cases"
    );
}

// ---------------------------------------------------------------------------
// Criterion 7: the three-way ratio comparison over the whole sweep.
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_ratio_table() {
    let mut matched = 0usize;
    let mut flagged = Vec::new();
    for c in sweep() {
        if !c.newform {
            continue;
        }
        let r = RatioResult {
            case: classify_case(&c.alg, &c.chi).unwrap(),
            global_table: alpha_global_table(&c.alg, &c.chi).unwrap(),
            local_table: alpha_local_table(&c.alg, &c.chi).unwrap(),
            oracle: alpha_oracle_from_series(&c.alg, &opt_series_cached(&c), &new_series_cached(&c))
                .unwrap(),
        };
        match r.status() {
            RatioStatus::Match => matched += 1,
            RatioStatus::PaperInternalDiscrepancy => {
                assert!(known_tension(r.case).is_some());
                flagged.push((c.label.clone(), r.case));
            }
            RatioStatus::Mismatch => {
                panic!("oracle-vs-closed-form mismatch outside the known set in {}", c.label)
            }
        }
    }
    // The two headline tension points must actually appear in the sweep.
    assert!(
        flagged.iter().any(|(_, k)| *k == CaseKind::Ramified),
        "ramified-row discrepancy missing from the sweep"
    );
    assert!(
        flagged.iter().any(|(_, k)| *k == CaseKind::InertXiUnramified),
        "inert xi-unramified discrepancy missing from the sweep"
    );
    println!(
        "criterion 7: PASS — {matched} ratio rows match all three ways, {} known-discrepancy \
         rows flagged",
        flagged.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 8: the N = 23 global assembly fixture.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_global_assembly() {
    let alg = make_algebra(23, Kind::Ramified, 16).unwrap();
    let chi = MultChar::field_unramified(CycQ::one(1));
    let form = GlobalFormSpec {
        level: 23,
        locals: vec![LocalDatum { p: 23, alg, chi }],
        disc: -23,
        w_k: 2,
        cond: 1,
    };
    assert_eq!(index_gamma0(23), rat_int(24));
    assert_eq!(ring_class_index(-23, 2, 1).unwrap(), 1);
    let run = || {
        let a = c_rs(&form, AlphaSource::GlobalTable, 12).unwrap();
        let b = c_rs(&form, AlphaSource::LocalTable, 12).unwrap();
        let c = c_rs(&form, AlphaSource::Oracle, 12).unwrap();
        let mb = m_bound(&form, AlphaSource::Oracle, 12).unwrap();
        (a, b, c, mb.naive, mb.norm_based)
    };
    let first = run();
    let second = run();
    assert_eq!(first.0, CycQ::from_int(1, 4));
    assert_eq!(first.1, cval(1, 6));
    assert_eq!(first.2, cval(1, 6));
    assert_eq!(first.3, Some(1u32.into()));
    assert_eq!(first.4, 1u32.into());
    assert_eq!(first, second, "global assembly is not deterministic");
    println!(
        "criterion 8: PASS — N = 23 fixture: index 24, ring-class index 1, constants 4 and 1/6, \
         unit bounds, deterministic across runs"
    );
}
