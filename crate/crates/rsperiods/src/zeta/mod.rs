//! Local Rankin-Selberg zeta integrals `Z(Phi, s)` as exact Laurent series in
//! `X = q^{-s}`, both by brute-force oracles (honest enumeration of the torus
//! integrals) and by the closed forms, for the optimal and newform Schwartz
//! functions.
//!
//! The zeta integral is reduced to the torus:
//! `Z(Phi, s) = int_{E^x} |t_1|^s int_{E^1} Phi~(t_1(1 + t_2 j)) xi(t_2)`,
//! with multiplicative measure on `E^x` giving each unit shell volume one and
//! the compact part of `E^1` volume one. The averaged *newform* function
//! satisfies `Phi~(u x, u y) = Phi~(x, y)` for units `u` (the `chi` and
//! `chi^{-1}` equivariances cancel and the unit action commutes with the
//! compact averaging), so [`zeta_phi_series`] only needs shell representatives
//! of `t_1`; for general functions such as the optimal one,
//! [`zeta_phi_series_full`] performs the honest unit average per shell.

use crate::chars::{antinorm, classify_case, AddChar, AntinormChar, CaseKind, MultChar};
use crate::exact::{rat, rat_int, CycQ, LaurentPoly, LaurentSeriesX, Rat, RatFunX};
use crate::localring::{
    norm_one_reps, order_strata, rat_pow_p, split_unit_classes, Kind, PadicElem, QuadAlgebra,
    RingClassOrder,
};
use crate::weil::{phi_new, SchwartzB};
use crate::{Error, Result};

/// `e(E/F)`: 2 in the ramified case, else 1 (the theta-correspondence
/// comparison factor between the Whittaker and Schwartz normalizations).
pub fn e_factor(alg: &QuadAlgebra) -> i64 {
    alg.e()
}

/// The internal table level of `chi` in uniformizer units (for choosing safe
/// sampling levels).
fn chi_table_level(chi: &MultChar) -> u32 {
    match chi {
        MultChar::Field { level, .. } => *level,
        MultChar::Split { chi1, chi2 } => chi1.conductor().max(chi2.conductor()),
    }
}

/// The oracle for `Z(Phi^opt, s)`: direct evaluation of
/// `chi(-1) int_{delta^{-1} O_c} |t_1|^s int_{(1 + t_1^{-1} O_c)^1} xi(t_2)`,
/// as a series through degree `n_max` in `X`.
pub fn zeta_opt_series(
    alg: &QuadAlgebra,
    order: &RingClassOrder,
    chi: &MultChar,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    let xi = antinorm(alg, chi)?;
    let o = order.o as i64;
    let min_deg = -2 * o - 2;
    let strata = order_strata(alg, order, min_deg, n_max)?;
    let mut coeffs = vec![CycQ::zero(1); (n_max - min_deg + 1) as usize];
    for s in &strata {
        let mut acc = CycQ::zero(1);
        for (t1, w) in &s.reps {
            let inner = opt_inner_integral(alg, order, &xi, chi, t1)?;
            if inner.is_zero() {
                continue;
            }
            acc = &acc + &(&inner * w);
        }
        if !acc.is_zero() {
            coeffs[(s.nu - min_deg) as usize] = &acc * &xi.chi_minus_one;
        }
    }
    Ok(LaurentSeriesX::new(min_deg, coeffs, n_max))
}

/// `int_{(1 + t_1^{-1} O_c)^1} xi(t_2) dt_2` by enumeration of norm-one
/// classes (with slice sum over `F^x`-valuations in the split case).
fn opt_inner_integral(
    alg: &QuadAlgebra,
    order: &RingClassOrder,
    xi: &AntinormChar,
    chi: &MultChar,
    t1: &PadicElem,
) -> Result<CycQ> {
    let o = order.o as i64;
    let member = |t2: &PadicElem| -> bool {
        order.contains(alg, &alg.mul(t1, &alg.sub(t2, &alg.one())))
    };
    match alg.kind {
        Kind::Inert | Kind::Ramified => {
            let v1 = alg.val_pi(t1).unwrap_or(0);
            let level = (alg.e() * o - v1)
                .max(chi_table_level(chi) as i64)
                .max(1) as u32;
            let reps = norm_one_reps(alg, level)?;
            let volc = rat_int(1) / rat_int(reps.len() as i64);
            let mut acc = CycQ::zero(1);
            for t2 in &reps {
                if member(t2) {
                    acc = &acc + &xi.eval(alg, t2)?;
                }
            }
            Ok(&acc * &CycQ::from_rat(1, volc))
        }
        Kind::Split => {
            // E^1 = {(v, v^{-1})}: sum over slices v in p^l O_F^x.
            let (va, vb) = alg.coord_vals(t1);
            let (v1, v2) = (va.unwrap_or(0), vb.unwrap_or(0));
            // Resolution sufficient for the membership test: the O_c congruence
            // modulo p^o, after scaling by the coordinates p^{v_i} u_i of t_1,
            // constrains v - 1 and 1/v - 1 modulo p^{o - v_i} only (and the
            // character needs its own table level). Classes at this level give
            // representative-independent decisions, so the enumeration is exact.
            let level = (o - v1)
                .max(o - v2)
                .max(chi_table_level(chi) as i64)
                .max(1) as u32;
            let classes = split_unit_classes(alg, level);
            let volc = rat_int(1) / rat_int(classes.len() as i64);
            let mut acc = CycQ::zero(1);
            for l in -(o + v1)..=(o + v2) {
                let pl = rat_pow_p(alg.p, l);
                for u in &classes {
                    let v = u * &pl;
                    let t2 = alg.elem(v.clone(), rat_int(1) / v);
                    if member(&t2) {
                        acc = &acc + &xi.eval(alg, &t2)?;
                    }
                }
            }
            Ok(&acc * &CycQ::from_rat(1, volc))
        }
    }
}

/// The closed forms for `Z(Phi^opt, s)` as rational functions of `X = q^{-s}`.
pub fn zeta_opt_closed(alg: &QuadAlgebra, chi: &MultChar) -> Result<RatFunX> {
    let xi = antinorm(alg, chi)?;
    let q = alg.p as i64;
    let one = LaurentPoly::one();
    let x = LaurentPoly::monomial(1, CycQ::one(1));
    match (alg.kind, xi.is_ramified()) {
        (Kind::Inert, false) => {
            // zeta_E(s) = 1 / ((1 - X)(1 + X)).
            RatFunX::new(one.clone(), &(&one - &x) * &(&one + &x))
        }
        (Kind::Split, false) => {
            // (1 + X) zeta(s) L(mu, s) L(mu^{-1}, s).
            let m = xi
                .split_mu_at_p()
                .ok_or_else(|| Error::Unsupported("split antinorm expected".into()))?;
            let minv = m.inv()?;
            let num = &one + &x;
            let den = &(&one - &x)
                * &(&(&one - &LaurentPoly::monomial(1, m))
                    * &(&one - &LaurentPoly::monomial(1, minv)));
            RatFunX::new(num, den)
        }
        (Kind::Ramified, false) => {
            // X^{-1}(1 + X) / (2 (1 - X)) for p odd.
            let half = CycQ::from_rat(1, rat(1, 2));
            let num = &LaurentPoly::monomial(-1, half.clone()) + &LaurentPoly::constant(half);
            RatFunX::new(num, &one - &x)
        }
        (Kind::Inert, true) => {
            // chi(-1) (1 + q^{-1})^{-2} q^{-2 o(xi)} X^{-2 o(xi)}.
            let o = xi.o_xi as i64;
            let c = &(&xi.chi_minus_one
                * &(rat_int(q * q) / rat_int((q + 1) * (q + 1))))
                * &rat_pow_p(alg.p, -2 * o);
            Ok(RatFunX::from_poly(LaurentPoly::monomial(-2 * o, c)))
        }
        (Kind::Split, true) => {
            // chi(-1) (1 - q^{-1})^{-2} q^{-2 o(xi)} (2X/(1 - X) + X^{-2 o(xi)}).
            let o = xi.o_xi as i64;
            let c = &(&xi.chi_minus_one
                * &(rat_int(q * q) / rat_int((q - 1) * (q - 1))))
                * &rat_pow_p(alg.p, -2 * o);
            let two_x = LaurentPoly::monomial(1, CycQ::from_rat(1, rat_int(2)));
            let num_core = &(&two_x + &LaurentPoly::monomial(-2 * o, CycQ::one(1)))
                - &LaurentPoly::monomial(-2 * o + 1, CycQ::one(1));
            let num = num_core.scale(&c);
            RatFunX::new(num, &one - &x)
        }
        (Kind::Ramified, true) => Err(Error::Hypothesis(
            "ramified E with ramified antinorm is outside the treated cases".into(),
        )),
    }
}

/// The adjoint L-factor `L(Ad pi(chi), s)` as a rational function of `X`:
/// `L(eta, s) L_E(chi^{1 - sigma}, s)` for the quadratic character `eta` of
/// `E/F`.
pub fn l_adjoint(alg: &QuadAlgebra, chi: &MultChar) -> Result<RatFunX> {
    let xi = antinorm(alg, chi)?;
    let one = LaurentPoly::one();
    let x = LaurentPoly::monomial(1, CycQ::one(1));
    let den = match alg.kind {
        Kind::Inert => {
            let l_eta = &one + &x;
            if xi.is_ramified() {
                l_eta
            } else {
                // chi^{1-sigma} is unramified with value 1 at the uniformizer.
                &l_eta * &(&(&one - &x) * &(&one + &x))
            }
        }
        Kind::Split => {
            let l_eta = &one - &x;
            match xi.split_mu_at_p() {
                Some(m) if !xi.is_ramified() => {
                    let minv = m.inv()?;
                    &l_eta
                        * &(&(&one - &LaurentPoly::monomial(1, m))
                            * &(&one - &LaurentPoly::monomial(1, minv)))
                }
                _ => l_eta,
            }
        }
        Kind::Ramified => {
            // eta ramified; chi unramified makes chi^{1-sigma} unramified with
            // value chi(-1) = 1 at the uniformizer of E, and q_E = q.
            &one - &x
        }
    };
    RatFunX::new(one, den)
}

/// The oracle for the newform zeta integral at the Schwartz-function level:
/// build `Phi~` by averaging `Phi_chi (x) Phi_{chi^{-1}}` over `SL_2(O_F)` and
/// enumerate the torus integral, as a series through degree `n_max`.
pub fn zeta_new_series(
    alg: &QuadAlgebra,
    chi: &MultChar,
    psi: &AddChar,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    let avg = phi_new(alg, chi)?.average_maximal_compact(alg, psi)?;
    zeta_phi_series(alg, &avg, chi, n_max)
}

/// The torus-orbit series `Z(Phi, s)` for an `SL_2(O_F)`-averaged Schwartz
/// function (such as the average of the newform function, or the optimal
/// function, which is already invariant).
pub fn zeta_phi_series(
    alg: &QuadAlgebra,
    avg: &SchwartzB,
    chi: &MultChar,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    let xi = antinorm(alg, chi)?;
    let mut m_max: i64 = 0;
    let mut j_max: i64 = 0;
    for t in &avg.terms {
        m_max = m_max.max(t.f1.m).max(t.f2.m);
        j_max = j_max.max(t.f1.j).max(t.f2.j);
    }
    match alg.kind {
        Kind::Inert | Kind::Ramified => {
            zeta_new_series_field(alg, avg, &xi, chi, m_max, j_max, n_max)
        }
        Kind::Split => zeta_new_series_split(alg, avg, &xi, chi, m_max, j_max, n_max),
    }
}

fn zeta_new_series_field(
    alg: &QuadAlgebra,
    avg: &SchwartzB,
    xi: &AntinormChar,
    chi: &MultChar,
    m_max: i64,
    j_max: i64,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    let e = alg.e();
    let v_start = -e * m_max;
    let v_deep = e * j_max;
    let level = ((e * (j_max + m_max)).max(chi_table_level(chi) as i64).max(1)) as u32;
    let reps = norm_one_reps(alg, level)?;
    let volc = CycQ::from_rat(1, rat_int(1) / rat_int(reps.len() as i64));
    let inner = |v: i64| -> Result<CycQ> {
        let tau = alg.uniformizer_pow(v);
        let mut acc = CycQ::zero(1);
        for t2 in &reps {
            let val = avg.eval_on_norm_equal(alg, &tau, &alg.mul(&tau, t2));
            if !val.is_zero() {
                acc = &acc + &(&val * &xi.eval(alg, t2)?);
            }
        }
        Ok(&acc * &volc)
    };
    // |t_1|^s = X^{deg(v)}; shells deeper than v_deep all give the same inner
    // value (every argument lies in the zero class of every table).
    let deg_of = |v: i64| -> i64 {
        match alg.kind {
            Kind::Inert => 2 * v,
            _ => v,
        }
    };
    let min_deg = deg_of(v_start);
    let mut coeffs = vec![CycQ::zero(1); (n_max - min_deg + 1).max(0) as usize];
    let deep = inner(v_deep)?;
    let mut v = v_start;
    while deg_of(v) <= n_max {
        let value = if v >= v_deep { deep.clone() } else { inner(v)? };
        let d = deg_of(v);
        if d >= min_deg && !value.is_zero() {
            coeffs[(d - min_deg) as usize] = value;
        }
        v += 1;
    }
    Ok(LaurentSeriesX::new(min_deg, coeffs, n_max))
}

fn zeta_new_series_split(
    alg: &QuadAlgebra,
    avg: &SchwartzB,
    xi: &AntinormChar,
    chi: &MultChar,
    m_max: i64,
    j_max: i64,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    // t_1 = (p^{a1}, p^{a2}) up to units (which drop out); t_2 runs over the
    // slices p^l O_F^x of E^1 = F^x, so t_1 t_2 = (p^{b1} u, p^{b2} u^{-1})
    // with a1 + a2 = b1 + b2 = deg. Table values only depend on each exponent
    // clamped at the deep level j_max; the xi-factor mu(p)^{b1 - a1} mu(u) is
    // tracked exactly.
    let lo = -m_max;
    let deep = j_max;
    let mu_p = xi
        .split_mu_at_p()
        .ok_or_else(|| Error::Unsupported("split antinorm expected".into()))?;
    let level = ((j_max + m_max).max(chi_table_level(chi) as i64).max(1)) as u32;
    let classes = split_unit_classes(alg, level);
    let volc = CycQ::from_rat(1, rat_int(1) / rat_int(classes.len() as i64));
    let span = (deep - lo + 1) as usize;
    let idx = |a: i64| -> usize { (a.clamp(lo, deep) - lo) as usize };
    // Clamped table T[a1][a2][b1][b2] = (1/n) sum_u Phi~((p^a1, p^a2),
    // (p^b1 u, p^b2 / u)) mu(u).
    let mut table = vec![CycQ::zero(1); span * span * span * span];
    let at = |i1: usize, i2: usize, i3: usize, i4: usize| -> usize {
        ((i1 * span + i2) * span + i3) * span + i4
    };
    for a1 in lo..=deep {
        for a2 in lo..=deep {
            let t1 = alg.elem(rat_pow_p(alg.p, a1), rat_pow_p(alg.p, a2));
            for b1 in lo..=deep {
                for b2 in lo..=deep {
                    let mut acc = CycQ::zero(1);
                    for u in &classes {
                        let y = alg.elem(u * &rat_pow_p(alg.p, b1), &rat_pow_p(alg.p, b2) / u);
                        let val = avg.eval_on_norm_equal(alg, &t1, &y);
                        if val.is_zero() {
                            continue;
                        }
                        let t2u = alg.elem(u.clone(), rat_int(1) / u);
                        acc = &acc + &(&val * &xi.eval(alg, &t2u)?);
                    }
                    if !acc.is_zero() {
                        table[at(idx(a1), idx(a2), idx(b1), idx(b2))] = &acc * &volc;
                    }
                }
            }
        }
    }
    let min_deg = 2 * lo;
    let mut coeffs = vec![CycQ::zero(1); (n_max - min_deg + 1).max(0) as usize];
    let mut mu_pow_cache: std::collections::HashMap<i64, CycQ> = std::collections::HashMap::new();
    let mut mu_pow = |k: i64| -> CycQ {
        mu_pow_cache
            .entry(k)
            .or_insert_with(|| {
                let base = if k >= 0 { mu_p.clone() } else { mu_p.inv().expect("unit") };
                let mut out = CycQ::one(1);
                for _ in 0..k.abs() {
                    out = &out * &base;
                }
                out
            })
            .clone()
    };
    for d in min_deg..=n_max {
        let mut acc = CycQ::zero(1);
        for a1 in lo..=(d - lo) {
            let a2 = d - a1;
            for b1 in lo..=(d - lo) {
                let b2 = d - b1;
                let t = &table[at(idx(a1), idx(a2), idx(b1), idx(b2))];
                if t.is_zero() {
                    continue;
                }
                acc = &acc + &(t * &mu_pow(b1 - a1));
            }
        }
        if !acc.is_zero() {
            coeffs[(d - min_deg) as usize] = acc;
        }
    }
    Ok(LaurentSeriesX::new(min_deg, coeffs, n_max))
}

/// The torus-orbit series `Z(Phi, s)` for an `SL_2(O_F)`-invariant Schwartz
/// function that need not be invariant under simultaneous unit scaling (for
/// instance the optimal function): the unit part of `t_1` is averaged
/// honestly. Slower than `zeta_phi_series`; intended for cross-checks.
pub fn zeta_phi_series_full(
    alg: &QuadAlgebra,
    phi: &SchwartzB,
    chi: &MultChar,
    n_max: i64,
) -> Result<LaurentSeriesX> {
    let xi = antinorm(alg, chi)?;
    let mut m_max: i64 = 0;
    let mut j_max: i64 = 0;
    for t in &phi.terms {
        m_max = m_max.max(t.f1.m).max(t.f2.m);
        j_max = j_max.max(t.f1.j).max(t.f2.j);
    }
    match alg.kind {
        Kind::Inert | Kind::Ramified => {
            let e = alg.e();
            let level = ((e * (j_max + m_max)).max(chi_table_level(chi) as i64).max(1)) as u32;
            let units = crate::localring::unit_reps(alg, level)?;
            let reps = norm_one_reps(alg, level)?;
            let volc = CycQ::from_rat(
                1,
                rat_int(1) / rat_int((units.len() * reps.len()) as i64),
            );
            let deg_of = |v: i64| -> i64 {
                match alg.kind {
                    Kind::Inert => 2 * v,
                    _ => v,
                }
            };
            let v_start = -e * m_max;
            let min_deg = deg_of(v_start);
            let mut coeffs = vec![CycQ::zero(1); (n_max - min_deg + 1).max(0) as usize];
            let mut v = v_start;
            while deg_of(v) <= n_max {
                let pi_v = alg.uniformizer_pow(v);
                let mut acc = CycQ::zero(1);
                for u in &units {
                    let t1 = alg.mul(&pi_v, u);
                    for t2 in &reps {
                        let val = phi.eval_on_norm_equal(alg, &t1, &alg.mul(&t1, t2));
                        if !val.is_zero() {
                            acc = &acc + &(&val * &xi.eval(alg, t2)?);
                        }
                    }
                }
                if !acc.is_zero() {
                    coeffs[(deg_of(v) - min_deg) as usize] = &acc * &volc;
                }
                v += 1;
            }
            Ok(LaurentSeriesX::new(min_deg, coeffs, n_max))
        }
        Kind::Split => {
            let level = ((j_max + m_max).max(chi_table_level(chi) as i64).max(1)) as u32;
            let classes = split_unit_classes(alg, level);
            let n_cls = classes.len() as i64;
            let volc = CycQ::from_rat(1, rat_int(1) / rat_int(n_cls * n_cls * n_cls));
            let lo = -m_max;
            let min_deg = 2 * lo;
            let mut coeffs = vec![CycQ::zero(1); (n_max - min_deg + 1).max(0) as usize];
            for d in min_deg..=n_max {
                let mut acc = CycQ::zero(1);
                for a1 in lo..=(d - lo) {
                    let a2 = d - a1;
                    for u1 in &classes {
                        for u2 in &classes {
                            let t1 = alg.elem(u1 * &rat_pow_p(alg.p, a1), u2 * &rat_pow_p(alg.p, a2));
                            for l in (lo - a1)..=(a2 - lo) {
                                let pl = rat_pow_p(alg.p, l);
                                for u in &classes {
                                    let w = u * &pl;
                                    let t2 = alg.elem(w.clone(), rat_int(1) / w);
                                    let val =
                                        phi.eval_on_norm_equal(alg, &t1, &alg.mul(&t1, &t2));
                                    if !val.is_zero() {
                                        acc = &acc + &(&val * &xi.eval(alg, &t2)?);
                                    }
                                }
                            }
                        }
                    }
                }
                if !acc.is_zero() {
                    coeffs[(d - min_deg) as usize] = &acc * &volc;
                }
            }
            Ok(LaurentSeriesX::new(min_deg, coeffs, n_max))
        }
    }
}

/// The closed-form value `Z(Phi, 1)` for the (averaged) newform Schwartz
/// function.
pub fn zeta_new_closed_value(alg: &QuadAlgebra, chi: &MultChar) -> Result<CycQ> {
    let q = alg.p as i64;
    let x_at_one = CycQ::from_rat(1, rat(1, q));
    if !chi.is_ramified(alg)? {
        let opt = zeta_opt_closed(alg, chi)?.eval_at(&x_at_one)?;
        return Ok(match alg.kind {
            // Phi~ = (q+1)^{-1}(Phi+ + Phi-), two optimal functions.
            Kind::Ramified => &opt * &CycQ::from_rat(1, rat(2, q + 1)),
            _ => opt,
        });
    }
    let xi = antinorm(alg, chi)?;
    let sq_ram = xi.square_is_ramified(alg)?;
    match chi {
        MultChar::Field { .. } => Ok(if sq_ram {
            CycQ::from_rat(1, rat(1, q + 1))
        } else {
            CycQ::one(1)
        }),
        MultChar::Split { chi1, chi2 } => {
            let both = chi1.is_ramified() && chi2.is_ramified();
            Ok(if both {
                if sq_ram {
                    CycQ::from_rat(1, rat(1, q + 1))
                } else {
                    CycQ::one(1)
                }
            } else if sq_ram {
                CycQ::from_rat(1, rat(q * q * q, q * q - 1))
            } else {
                CycQ::from_rat(1, rat(q, q - 1))
            })
        }
    }
}

/// `1 - c X` as a Laurent polynomial.
pub(crate) fn lin_factor(c: &CycQ) -> LaurentPoly {
    &LaurentPoly::one() - &LaurentPoly::monomial(1, c.clone())
}

/// Unramified newform Whittaker value `W^new(diag(pi^n, 1))` with Satake
/// parameters `a1, a2`:
/// `q^{-n/2} (a1^{n+1} - a2^{n+1}) / (a1 - a2)`,
/// with the limit `(n + 1) a^n` when the parameters coincide. The half-power
/// of `q` is exact (`sqrt(q)` is itself a cyclotomic value).
pub fn whittaker_new_unramified(p: u64, a1: &CycQ, a2: &CycQ, n: i64) -> Result<CycQ> {
    if n < 0 {
        return Ok(CycQ::zero(1));
    }
    let diff = a1 - a2;
    let sym = if diff.is_zero() {
        // (n + 1) a1^n
        let mut pw = CycQ::one(1);
        for _ in 0..n {
            pw = &pw * a1;
        }
        &pw * &CycQ::from_int(1, n + 1)
    } else {
        let pow = |a: &CycQ| -> CycQ {
            let mut pw = CycQ::one(1);
            for _ in 0..=n {
                pw = &pw * a;
            }
            pw
        };
        &(&pow(a1) - &pow(a2)) * &diff.inv()?
    };
    let scale = if n % 2 == 0 {
        CycQ::from_rat(1, rat_pow_p(p, -n / 2))
    } else {
        &CycQ::sqrt_of_prime(p) * &CycQ::from_rat(1, rat_pow_p(p, -(n + 1) / 2))
    };
    Ok(&sym * &scale)
}

/// The unramified Rankin-Selberg zeta integral of two newforms with Satake
/// parameters `(a1, a2)` and `(b1, b2)`:
/// `(1 - a1 a2 b1 b2 X^2) / prod_{i,j} (1 - a_i b_j X)`.
/// When `b_i = a_i^{-1}` this equals `(1 + X) L(Ad, X)`.
pub fn rs_zeta_unramified(a1: &CycQ, a2: &CycQ, b1: &CycQ, b2: &CycQ) -> Result<RatFunX> {
    let prod = &(&(a1 * a2) * b1) * b2;
    let num = &LaurentPoly::one() - &LaurentPoly::monomial(2, prod);
    let mut den = LaurentPoly::one();
    for (a, b) in [(a1, b1), (a1, b2), (a2, b1), (a2, b2)] {
        den = &den * &lin_factor(&(a * b));
    }
    RatFunX::new(num, den)
}

/// The adjoint L-factor for an unramified principal series with Satake
/// parameters `a1, a2`: `1 / ((1 - X)(1 - (a1/a2) X)(1 - (a2/a1) X))`.
pub fn l_adjoint_satake(a1: &CycQ, a2: &CycQ) -> Result<RatFunX> {
    let r = &(a1 * &a2.inv()?) * &CycQ::one(1);
    let den = &(&lin_factor(&CycQ::one(1)) * &lin_factor(&r)) * &lin_factor(&r.inv()?);
    RatFunX::new(LaurentPoly::one(), den)
}

/// Verdict on a three-way comparison of the period ratio `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioStatus {
    /// All three sources agree.
    Match,
    /// The sources disagree, but the disagreement is one of the documented
    /// internal inconsistencies of the stated closed forms.
    PaperInternalDiscrepancy,
    /// An unexplained disagreement (a bug signal).
    Mismatch,
}

/// The period ratio `alpha = P_rs(W^new) / P_rs(W^opt)` from all three
/// sources: the summary table, the local comparison table, and the
/// brute-force enumeration.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RatioResult {
    pub case: CaseKind,
    /// Value from the summary table (the global statement).
    pub global_table: CycQ,
    /// Value from the local comparison table.
    pub local_table: CycQ,
    /// Value computed from the two series oracles.
    pub oracle: CycQ,
}

impl RatioResult {
    /// Classify the comparison outcome.
    pub fn status(&self) -> RatioStatus {
        if self.oracle == self.local_table && self.oracle == self.global_table {
            RatioStatus::Match
        } else if known_tension(self.case).is_some() {
            RatioStatus::PaperInternalDiscrepancy
        } else {
            RatioStatus::Mismatch
        }
    }
}

/// For table rows whose stated values are known to be internally inconsistent
/// (traced to specific steps of the stated derivations and confirmed by
/// independent enumeration), a short description of the tension.
pub fn known_tension(case: CaseKind) -> Option<&'static str> {
    match case {
        CaseKind::Ramified => Some(
            "the two stated tables disagree (4 vs 4/(q+1)); the enumeration \
             agrees with 4/(q+1)",
        ),
        CaseKind::InertXiUnramified => Some(
            "the stated tables expand the unramified optimal period as \
             q^2/(q-1)^2 where the zeta factorization gives q^2/(q^2-1); the \
             enumerated ratio is (q^2-1)/q^2 against the stated (q-1)^2/q^2",
        ),
        CaseKind::InertXiRamSquareUnram | CaseKind::InertXiSquareRam => Some(
            "the stated ramified-xi optimal-form zeta keeps only the leading \
             shell (an overlapping-coset overcount hides the subleading \
             terms), so the enumerated optimal period and ratio differ",
        ),
        CaseKind::SplitSemiSquareUnram
        | CaseKind::SplitFullySquareUnram
        | CaseKind::SplitFullySquareRam => Some(
            "the stated ramified-xi optimal-form zeta keeps only the leading \
             shell and half the tail (an overlapping-coset overcount), so the \
             enumerated optimal period and ratio differ",
        ),
        CaseKind::SplitSemiSquareRam => Some(
            "the stated ramified-xi optimal-form zeta omits subleading terms, \
             and the stated newform value q^3/(q^2-1) mis-simplifies its own \
             derivation's q/(q^2-1)",
        ),
        CaseKind::InertUnramified | CaseKind::SplitUnramified | CaseKind::SplitXiUnramified => {
            None
        }
    }
}

fn rat_pow(q: i64, e: i64) -> Rat {
    rat_pow_p(q as u64, e)
}

/// The period ratio `alpha` according to the local comparison table.
pub fn alpha_local_table(alg: &QuadAlgebra, chi: &MultChar) -> Result<CycQ> {
    let case = classify_case(alg, chi)?;
    let xi = antinorm(alg, chi)?;
    let q = alg.p as i64;
    let o = xi.o_xi as i64;
    let cm1 = &xi.chi_minus_one;
    // q^{2o+1} - q^{2o} + 2
    let d_val = rat_pow(q, 2 * o + 1) - rat_pow(q, 2 * o) + rat_int(2);
    let val = match case {
        CaseKind::Ramified => CycQ::from_rat(1, rat(4, q + 1)),
        CaseKind::InertUnramified | CaseKind::SplitUnramified => CycQ::one(1),
        CaseKind::InertXiUnramified => CycQ::from_rat(1, rat((q - 1) * (q - 1), q * q)),
        CaseKind::InertXiRamSquareUnram => {
            cm1 * &CycQ::from_rat(1, rat((q + 1) * (q + 1), q * q))
        }
        CaseKind::InertXiSquareRam => cm1 * &CycQ::from_rat(1, rat(q + 1, q * q)),
        CaseKind::SplitXiUnramified => {
            let m = xi.split_mu_at_p().ok_or_else(|| {
                Error::Hypothesis("split case without an unramified antinorm".into())
            })?;
            let qc = CycQ::from_int(1, q);
            let f = &(&qc - &m) * &(&qc - &m.inv()?);
            &f * &CycQ::from_rat(1, rat(q - 1, (q + 1) * q * q))
        }
        CaseKind::SplitSemiSquareUnram => {
            cm1 * &CycQ::from_rat(1, rat_int((q - 1) * (q - 1)) * rat_pow(q, 2 * o - 1) / &d_val)
        }
        CaseKind::SplitFullySquareUnram => cm1
            * &CycQ::from_rat(
                1,
                rat_int((q - 1) * (q - 1) * (q - 1)) * rat_pow(q, 2 * o - 2) / &d_val,
            ),
        CaseKind::SplitSemiSquareRam => cm1
            * &CycQ::from_rat(
                1,
                rat_int((q - 1) * (q - 1)) * rat_pow(q, 2 * o + 1) / (rat_int(q + 1) * &d_val),
            ),
        CaseKind::SplitFullySquareRam => cm1
            * &CycQ::from_rat(
                1,
                rat_int((q - 1) * (q - 1) * (q - 1)) * rat_pow(q, 2 * o - 2)
                    / (rat_int(q + 1) * &d_val),
            ),
    };
    Ok(val)
}

/// The period ratio `alpha` according to the summary table: identical to the
/// local comparison table except in the ramified row, where it states `4`.
pub fn alpha_global_table(alg: &QuadAlgebra, chi: &MultChar) -> Result<CycQ> {
    match classify_case(alg, chi)? {
        CaseKind::Ramified => Ok(CycQ::from_int(1, 4)),
        _ => alpha_local_table(alg, chi),
    }
}

/// The enumerated period ratio:
/// `e(E/F) . Z^new(1/q) / Z^opt(1/q)` with both zeta values reconstructed
/// from their oracle series.
pub fn alpha_oracle(
    alg: &QuadAlgebra,
    chi: &MultChar,
    psi: &AddChar,
    n_max: i64,
) -> Result<CycQ> {
    let xi = antinorm(alg, chi)?;
    let order = RingClassOrder::new(alg, xi.o_xi)?;
    let opt = zeta_opt_series(alg, &order, chi, n_max)?;
    let new = zeta_new_series(alg, chi, psi, n_max)?;
    alpha_oracle_from_series(alg, &opt, &new)
}

/// The enumerated period ratio from precomputed oracle series for one case,
/// so callers that already hold both series avoid recomputing them.
pub fn alpha_oracle_from_series(
    alg: &QuadAlgebra,
    opt: &LaurentSeriesX,
    new: &LaurentSeriesX,
) -> Result<CycQ> {
    let reconstruct = |s: &LaurentSeriesX| -> Result<RatFunX> {
        s.reconstruct(6)
            .ok_or_else(|| Error::Unsupported("zeta series did not reconstruct".into()))
    };
    let x = CycQ::from_rat(1, rat(1, alg.p as i64));
    let p_opt = reconstruct(opt)?.eval_at(&x)?;
    let p_new = reconstruct(new)?.eval_at(&x)?;
    Ok(&(&p_new * &p_opt.inv()?) * &CycQ::from_int(1, e_factor(alg)))
}

/// Three-way comparison of the period ratio for one local case.
pub fn alpha_ratio(
    alg: &QuadAlgebra,
    chi: &MultChar,
    psi: &AddChar,
    n_max: i64,
) -> Result<RatioResult> {
    Ok(RatioResult {
        case: classify_case(alg, chi)?,
        global_table: alpha_global_table(alg, chi)?,
        local_table: alpha_local_table(alg, chi)?,
        oracle: alpha_oracle(alg, chi, psi, n_max)?,
    })
}
