//! Schwartz functions on a quadratic algebra `E` and on the split quaternion
//! algebra `B = E + Ej`, with the exact Weil-representation operations needed
//! here: self-dual Fourier transforms, the `n(b)` twists `psi(b Q(x))`, and the
//! average over the maximal compact subgroup `SL_2(O_F)`.
//!
//! A Schwartz function on `E` is stored as a finite coset table: support inside
//! `p^{-m} O_E`, constant on cosets of `p^j O_E`, with one exact cyclotomic
//! value per class. All measures are additive with `vol(O_E) = 1`; Fourier
//! transforms carry the self-dual correction `q_E^{-d/2}` (`d` the valuation of
//! the different), so that applying the transform twice gives `x -> f(-x)`
//! exactly.

use std::collections::HashMap;

use crate::chars::{AddChar, FChar, MultChar};
use crate::exact::{rat_int, CycQ, Rat};
use crate::localring::{rat_mod_pk, rat_pow_p, val_p, Kind, PadicElem, QuadAlgebra, RingClassOrder};
use crate::{Error, Result};

/// All residues of `O_E / p^k O_E` in coordinates (size `p^{2k}`).
pub fn p_residue_reps(alg: &QuadAlgebra, k: u32) -> Vec<PadicElem> {
    let pk = alg.p.pow(k);
    let mut out = Vec::with_capacity((pk * pk) as usize);
    for a in 0..pk {
        for b in 0..pk {
            out.push(alg.elem_int(a as i64, b as i64));
        }
    }
    out
}

/// Canonical key of an integral element modulo `p^k O_E` (coordinatewise).
fn pkey(alg: &QuadAlgebra, x: &PadicElem, k: u32) -> Result<(u64, u64)> {
    Ok((rat_mod_pk(&x.a, alg.p, k)?, rat_mod_pk(&x.b, alg.p, k)?))
}

/// The p-adic fractional part of a rational, as a rational in `[0, 1)`.
pub fn frac_part(x: &Rat, p: u64) -> Rat {
    match val_p(x, p) {
        None => rat_int(0),
        Some(v) if v >= 0 => rat_int(0),
        Some(v) => {
            let n = (-v) as u32;
            let u = x * &rat_pow_p(p, n as i64);
            let a = rat_mod_pk(&u, p, n).expect("unit numerator");
            &rat_int(a as i64) * &rat_pow_p(p, -(n as i64))
        }
    }
}

/// A Schwartz function on `E`: supported in `p^{-m} O_E` and constant on cosets
/// of `p^j O_E`. Only nonzero class values are stored.
#[derive(Clone, Debug)]
pub struct SchwartzE {
    /// Support exponent: the function vanishes outside `p^{-m} O_E`.
    pub m: i64,
    /// Level exponent: the function is constant on cosets of `p^j O_E`.
    pub j: i64,
    /// Class values, keyed by the residue of `p^m x` modulo `p^{j+m}`.
    values: HashMap<(u64, u64), CycQ>,
}

impl SchwartzE {
    /// Tabulate a function given by a closure on class representatives.
    pub fn from_fn(
        alg: &QuadAlgebra,
        m: i64,
        j: i64,
        f: impl Fn(&PadicElem) -> CycQ,
    ) -> Result<SchwartzE> {
        let depth = j + m;
        if depth < 0 {
            return Err(Error::Config("support coarser than the level".into()));
        }
        let scale = rat_pow_p(alg.p, -m);
        let mut values = HashMap::new();
        for r in p_residue_reps(alg, depth as u32) {
            let x = alg.scale(&r, &scale);
            let v = f(&x);
            if !v.is_zero() {
                values.insert(pkey(alg, &r, depth as u32)?, v);
            }
        }
        Ok(SchwartzE { m, j, values })
    }

    /// The characteristic function of `p^{-m} O_E` (use `m = 0` for `O_E`).
    pub fn char_lattice(alg: &QuadAlgebra, m: i64) -> SchwartzE {
        SchwartzE::from_fn(alg, m, -m, |_| CycQ::one(1)).expect("trivial table")
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Evaluate at an exact point.
    pub fn eval(&self, alg: &QuadAlgebra, x: &PadicElem) -> CycQ {
        let scaled = alg.scale(x, &rat_pow_p(alg.p, self.m));
        if !alg.is_integral(&scaled) {
            return CycQ::zero(1);
        }
        let depth = (self.j + self.m) as u32;
        match pkey(alg, &scaled, depth) {
            Ok(key) => self.values.get(&key).cloned().unwrap_or_else(|| CycQ::zero(1)),
            Err(_) => CycQ::zero(1),
        }
    }

    /// `int_E f(x) dx` with `vol(O_E) = 1`.
    pub fn integral(&self, alg: &QuadAlgebra) -> CycQ {
        let volc = CycQ::from_rat(1, rat_pow_p(alg.p, -2 * self.j));
        let mut acc = CycQ::zero(1);
        for v in self.values.values() {
            acc = &acc + v;
        }
        &acc * &volc
    }

    /// Pointwise scaling by a constant.
    pub fn scale_by(&self, c: &CycQ) -> SchwartzE {
        SchwartzE {
            m: self.m,
            j: self.j,
            values: self
                .values
                .iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(k, v)| (*k, v * c))
                .collect(),
        }
    }

    /// `x -> f(-x)`.
    pub fn reflect(&self, alg: &QuadAlgebra) -> SchwartzE {
        SchwartzE::from_fn(alg, self.m, self.j, |x| self.eval(alg, &alg.neg(x)))
            .expect("same shape")
    }

    /// Re-tabulate at a finer level `j_new >= j`.
    pub fn refine(&self, alg: &QuadAlgebra, j_new: i64) -> Result<SchwartzE> {
        if j_new <= self.j {
            return Ok(self.clone());
        }
        SchwartzE::from_fn(alg, self.m, j_new, |x| self.eval(alg, x))
    }

    /// The minimum of `v_F(N(x))` over the support (`None` if the function is
    /// zero). Exact: on classes away from zero the norm valuation is constant,
    /// and a class through zero attains `2j`.
    pub fn min_norm_val(&self, alg: &QuadAlgebra) -> Option<i64> {
        let scale = rat_pow_p(alg.p, -self.m);
        let mut best: Option<i64> = None;
        for (key, _) in self.values.iter() {
            let r = alg.elem_int(key.0 as i64, key.1 as i64);
            let x = alg.scale(&r, &scale);
            let v = match alg.kind {
                // Componentwise: a coordinate vanishing modulo the level
                // lattice attains valuation j on its class.
                Kind::Split => {
                    let (va, vb) = alg.coord_vals(&x);
                    let ca = va.map_or(self.j, |t| t.min(self.j));
                    let cb = vb.map_or(self.j, |t| t.min(self.j));
                    ca + cb
                }
                _ => match alg.val_pi(&x) {
                    Some(ve) if ve < alg.e() * self.j => {
                        alg.abs_exp(&x).expect("nonzero")
                    }
                    _ => 2 * self.j,
                },
            };
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
        best
    }

    /// Multiply pointwise by `x -> psi(b N(x))`, refining the level if needed so
    /// the factor is constant on classes.
    pub fn twist_norm_psi(
        &self,
        alg: &QuadAlgebra,
        psi: &AddChar,
        b: &Rat,
    ) -> Result<SchwartzE> {
        let vb = val_p(b, alg.p);
        let base = match vb {
            None => return Ok(self.clone()),
            Some(v) => self.refine(alg, self.j.max(self.m + 1 - v))?,
        };
        let scale = rat_pow_p(alg.p, -base.m);
        let depth = (base.j + base.m) as u32;
        let mut values = HashMap::new();
        for (key, v) in base.values.iter() {
            let r = alg.elem_int(key.0 as i64, key.1 as i64);
            let x = alg.scale(&r, &scale);
            let tw = psi.eval(&(b * &alg.norm(&x)));
            let nv = v * &tw;
            if !nv.is_zero() {
                values.insert(pkey(alg, &r, depth)?, nv);
            }
        }
        Ok(SchwartzE { m: base.m, j: base.j, values })
    }

    /// Pointwise complex conjugate (conjugating every stored value).
    pub fn conj_values(&self) -> SchwartzE {
        SchwartzE {
            m: self.m,
            j: self.j,
            values: self.values.iter().map(|(k, v)| (*k, v.conj())).collect(),
        }
    }

    /// Whether `self` is the pointwise conjugate of `other` on the same grid.
    fn is_conj_of(&self, other: &SchwartzE) -> bool {
        self.m == other.m
            && self.j == other.j
            && self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .all(|(k, v)| other.values.get(k).is_some_and(|w| *v == w.conj()))
    }

    /// Self-dual Fourier transform with kernel `psi(sign * Tr(x conj(y)))`.
    ///
    /// Computed as a row-column (separable) transform over the two coordinates,
    /// so the cost is `O(T sqrt(T))` in the table size `T` rather than `O(T^2)`.
    pub fn fourier(&self, alg: &QuadAlgebra, psi: &AddChar, minus: bool) -> Result<SchwartzE> {
        let p = alg.p;
        let d = alg.e() - 1; // valuation of the different (p odd in ramified case)
        let dp = if d > 0 { 1 } else { 0 }; // different in p-units, rounded up
        let m2 = self.j + dp;
        let j2 = self.m;
        let depth2 = (j2 + m2) as u32;
        let sign = if minus { rat_int(-1) } else { rat_int(1) };

        // Bilinear form coefficients: Tr(e_i e_j) on the coordinate basis.
        // The symmetric pairing Tr(x y) is used (equivalent to Tr(x conj(y))
        // through the isometry conj, and matching the closed-form conventions).
        let e1 = match alg.kind {
            Kind::Split => alg.elem_int(1, 0),
            _ => alg.one(),
        };
        let e2 = alg.elem_int(0, 1);
        let t = |u: &PadicElem, v: &PadicElem| alg.trace(&alg.mul(u, v));
        let (taa, tab, tba, tbb) = (t(&e1, &e1), t(&e1, &e2), t(&e2, &e1), t(&e2, &e2));

        // Target grid. The transform is supported in the dual lattice
        // (p^j O_E)-perp = pi^{-(e j + d)} O_E; in the ramified case that is a
        // proper sublattice of the stored p-power grid, and grid points off it
        // must be skipped outright (there the kernel is not constant on the
        // source classes, but the true value is zero).
        let scale2 = rat_pow_p(p, -m2);
        let dual_floor = -(alg.e() * self.j + d);
        let mut ys: Vec<((u64, u64), PadicElem)> = Vec::new();
        for r in p_residue_reps(alg, depth2) {
            let y = alg.scale(&r, &scale2);
            if alg.kind == Kind::Ramified {
                if let Some(v) = alg.val_pi(&y) {
                    if v < dual_floor {
                        continue;
                    }
                }
            }
            ys.push((pkey(alg, &r, depth2)?, y));
        }
        // z_a(y), z_b(y) with kernel psi(sign (x_a z_a + x_b z_b)).
        let mut za_index: HashMap<Rat, usize> = HashMap::new();
        let mut zb_index: HashMap<Rat, usize> = HashMap::new();
        let mut yz: Vec<(usize, usize)> = Vec::with_capacity(ys.len());
        for (_, y) in &ys {
            let (ya, yb) = (&y.a, &y.b);
            let za = &(&taa * ya) + &(&tab * yb);
            let zb = &(&tba * ya) + &(&tbb * yb);
            let na = za_index.len();
            let ia = *za_index.entry(za).or_insert(na);
            let nb = zb_index.len();
            let ib = *zb_index.entry(zb).or_insert(nb);
            yz.push((ia, ib));
        }
        let zas: Vec<Rat> = {
            let mut v = vec![rat_int(0); za_index.len()];
            for (z, i) in za_index {
                v[i] = z;
            }
            v
        };
        let zbs: Vec<Rat> = {
            let mut v = vec![rat_int(0); zb_index.len()];
            for (z, i) in zb_index {
                v[i] = z;
            }
            v
        };

        // Stage one: partial sums over the b-coordinate of x.
        let scale1 = rat_pow_p(p, -self.m);
        let mut kernel_b: HashMap<(u64, usize), CycQ> = HashMap::new();
        let mut mid: HashMap<(u64, usize), CycQ> = HashMap::new();
        for (key, v) in self.values.iter() {
            let xb = &rat_int(key.1 as i64) * &scale1;
            for (ib, zb) in zbs.iter().enumerate() {
                let ker = kernel_b
                    .entry((key.1, ib))
                    .or_insert_with(|| psi.eval(&(&(&sign * &xb) * zb)))
                    .clone();
                let term = v * &ker;
                if term.is_zero() {
                    continue;
                }
                let slot = mid.entry((key.0, ib)).or_insert_with(|| CycQ::zero(1));
                *slot = &*slot + &term;
            }
        }
        mid.retain(|_, v| !v.is_zero());
        let xa_keys: Vec<u64> = {
            let mut ks: Vec<u64> = mid.keys().map(|(a, _)| *a).collect();
            ks.sort_unstable();
            ks.dedup();
            ks
        };

        // Stage two: sums over the a-coordinate, one output class at a time.
        let mut kernel_a: HashMap<(u64, usize), CycQ> = HashMap::new();
        let volc = rat_pow_p(p, -2 * self.j);
        // Self-dual correction q_E^{-d/2} (ramified: 1/sqrt(p)).
        let sd = if d > 0 {
            &CycQ::sqrt_of_prime(p) * &rat_pow_p(p, -1)
        } else {
            CycQ::one(1)
        };
        let cnorm = &sd * &volc;
        let mut values = HashMap::new();
        for (yi, (key_y, _)) in ys.iter().enumerate() {
            let (ia, ib) = yz[yi];
            let mut acc = CycQ::zero(1);
            for &ka in &xa_keys {
                let part = match mid.get(&(ka, ib)) {
                    Some(v) => v,
                    None => continue,
                };
                let ker = kernel_a
                    .entry((ka, ia))
                    .or_insert_with(|| {
                        let xa = &rat_int(ka as i64) * &scale1;
                        psi.eval(&(&(&sign * &xa) * &zas[ia]))
                    })
                    .clone();
                acc = &acc + &(part * &ker);
            }
            let out = &acc * &cnorm;
            if !out.is_zero() {
                values.insert(*key_y, out);
            }
        }
        Ok(SchwartzE { m: m2, j: j2, values })
    }
}

/// The Tate Schwartz function attached to `chi`: the characteristic function of
/// `O_E` when `chi` is unramified, the restriction of `chi^{-1}` to units when
/// ramified (componentwise in the split case).
pub fn tate_phi(alg: &QuadAlgebra, chi: &MultChar) -> Result<SchwartzE> {
    match chi {
        MultChar::Split { chi1, chi2 } => {
            let comp = |c: &FChar, x: &Rat| -> CycQ {
                match val_p(x, alg.p) {
                    None => {
                        if c.conductor() == 0 {
                            CycQ::one(1)
                        } else {
                            CycQ::zero(1)
                        }
                    }
                    Some(v) => {
                        if c.conductor() == 0 {
                            if v >= 0 {
                                CycQ::one(1)
                            } else {
                                CycQ::zero(1)
                            }
                        } else if v == 0 {
                            c.eval(x).expect("unit").inv().expect("root of unity")
                        } else {
                            CycQ::zero(1)
                        }
                    }
                }
            };
            let j = (chi1.conductor().max(chi2.conductor())) as i64;
            SchwartzE::from_fn(alg, 0, j, |x| &comp(chi1, &x.a) * &comp(chi2, &x.b))
        }
        MultChar::Field { level, .. } => {
            if *level == 0 {
                return Ok(SchwartzE::char_lattice(alg, 0));
            }
            let chi_inv = chi.inverse();
            let j = ((*level as i64) + alg.e() - 1) / alg.e();
            SchwartzE::from_fn(alg, 0, j, |x| {
                if alg.is_unit(x) {
                    chi_inv.eval(alg, x).expect("unit")
                } else {
                    CycQ::zero(1)
                }
            })
        }
    }
}

/// One pure-tensor term `coeff * f1(x) f2(y)` of a Schwartz function on
/// `B = E + Ej`, optionally multiplied by the characteristic function of
/// `Q(x + yj) = N(x) - N(y) in p^r O_F`.
#[derive(Clone, Debug)]
pub struct TensorTerm {
    pub f1: SchwartzE,
    pub f2: SchwartzE,
    pub coeff: CycQ,
    pub q_restriction: Option<i64>,
}

/// A Schwartz function on `B` as a sum of tensor terms.
#[derive(Clone, Debug)]
pub struct SchwartzB {
    pub terms: Vec<TensorTerm>,
}

impl SchwartzB {
    pub fn pure(f1: SchwartzE, f2: SchwartzE) -> SchwartzB {
        SchwartzB {
            terms: vec![TensorTerm { f1, f2, coeff: CycQ::one(1), q_restriction: None }],
        }
    }

    /// Evaluate at `x + yj`.
    pub fn eval(&self, alg: &QuadAlgebra, x: &PadicElem, y: &PadicElem) -> CycQ {
        let mut acc = CycQ::zero(1);
        let q_val = alg.norm(x) - alg.norm(y);
        for t in &self.terms {
            if let Some(r) = t.q_restriction {
                let ok = match val_p(&q_val, alg.p) {
                    None => true,
                    Some(v) => v >= r,
                };
                if !ok {
                    continue;
                }
            }
            let v = &(&t.f1.eval(alg, x) * &t.f2.eval(alg, y)) * &t.coeff;
            acc = &acc + &v;
        }
        acc
    }

    /// Evaluate at `x + yj` assuming `N(x) = N(y)` (as on the torus orbits),
    /// where every norm restriction is automatically satisfied. Safe to call
    /// with class representatives whose norms differ from the true arguments.
    pub fn eval_on_norm_equal(&self, alg: &QuadAlgebra, x: &PadicElem, y: &PadicElem) -> CycQ {
        let mut acc = CycQ::zero(1);
        for t in &self.terms {
            let v = &(&t.f1.eval(alg, x) * &t.f2.eval(alg, y)) * &t.coeff;
            acc = &acc + &v;
        }
        acc
    }

    /// The level `k`: `Phi-hat` is invariant under `n(b)` for `b` in `p^k O_F`.
    /// Requires every stored term to be unrestricted.
    pub fn level(&self, alg: &QuadAlgebra, psi: &AddChar) -> Result<u32> {
        let mut k: i64 = 0;
        for t in &self.terms {
            if t.q_restriction.is_some() {
                return Err(Error::Unsupported(
                    "level detection needs unrestricted tensor terms".into(),
                ));
            }
            let h1 = t.f1.fourier(alg, psi, false)?;
            let h2 = t.f2.fourier(alg, psi, true)?;
            let v1 = h1.min_norm_val(alg);
            let v2 = h2.min_norm_val(alg);
            if let Some(v) = [v1, v2].into_iter().flatten().min() {
                k = k.max(-v);
            }
        }
        Ok(k as u32)
    }

    /// `Phi-tilde = int_{SL_2(O_F)} r(k) Phi dk` (probability Haar measure),
    /// via the Bruhat decomposition at the level of `Phi`:
    /// the `q^k` cells `n(b) w U_0` contribute `q^k Phi-hat` restricted to
    /// `Q in O_F`, and the `q^{k-1}` cells `w n(b) w U_0` contribute the
    /// Fourier transform of `Phi-hat` restricted to `Q in p^{-1} O_F`, the
    /// latter expanded into pure tensors through `psi(b Q)` twists.
    pub fn average_maximal_compact(
        &self,
        alg: &QuadAlgebra,
        psi: &AddChar,
    ) -> Result<SchwartzB> {
        let p = alg.p;
        let k = self.level(alg, psi)?;
        if k == 0 {
            return Ok(self.clone());
        }
        let mut hats: Vec<(SchwartzE, SchwartzE, CycQ)> = Vec::new();
        for t in &self.terms {
            hats.push((
                t.f1.fourier(alg, psi, false)?,
                t.f2.fourier(alg, psi, true)?,
                t.coeff.clone(),
            ));
        }
        let total = rat_pow_p(p, k as i64) + rat_pow_p(p, k as i64 - 1);
        let inv_total = rat_int(1) / total;
        let mut terms: Vec<TensorTerm> = Vec::new();
        // Identity-cell block: q^k * Phi-hat restricted to Q in O_F.
        let c_id = CycQ::from_rat(1, &rat_pow_p(p, k as i64) * &inv_total);
        for (h1, h2, c) in &hats {
            terms.push(TensorTerm {
                f1: h1.clone(),
                f2: h2.clone(),
                coeff: c * &c_id,
                q_restriction: Some(0),
            });
        }
        // Opposite-cell block, expanded over b in p O_F / p^k O_F. When the
        // second hat is the pointwise conjugate of the first (as for a unitary
        // character) and the transform normalization is rational (E/F
        // unramified), the minus-transform of the conjugate twist is the
        // conjugate of the plus-transform, halving the Fourier work.
        let conj_pair: Vec<bool> = hats
            .iter()
            .map(|(h1, h2, _)| alg.e() == 1 && h2.is_conj_of(h1))
            .collect();
        let c_w = CycQ::from_rat(1, inv_total);
        for i in 0..p.pow(k - 1) {
            let b = rat_int((p * i) as i64);
            for ((h1, h2, c), fast) in hats.iter().zip(&conj_pair) {
                let g1 = h1.twist_norm_psi(alg, psi, &b)?;
                let w1 = g1.fourier(alg, psi, false)?;
                let w2 = if *fast {
                    w1.conj_values()
                } else {
                    h2.twist_norm_psi(alg, psi, &-&b)?.fourier(alg, psi, true)?
                };
                if w1.is_zero() || w2.is_zero() {
                    continue;
                }
                terms.push(TensorTerm {
                    f1: w1,
                    f2: w2,
                    coeff: c * &c_w,
                    q_restriction: None,
                });
            }
        }
        Ok(SchwartzB { terms })
    }
}

/// The newform Schwartz function `Phi = Phi_chi (x) Phi_{chi^{-1}}` on `B`.
pub fn phi_new(alg: &QuadAlgebra, chi: &MultChar) -> Result<SchwartzB> {
    Ok(SchwartzB::pure(tate_phi(alg, chi)?, tate_phi(alg, &chi.inverse())?))
}

/// Representatives of `O_c / delta O_c` for the ring-class order.
pub fn order_residues(alg: &QuadAlgebra, order: &RingClassOrder) -> Result<Vec<PadicElem>> {
    let p = alg.p;
    let delta = order.delta(alg);
    let delta_inv = alg.inv(&delta)?;
    let vq = val_p(&alg.norm(&delta), p).expect("delta is invertible");
    // O_c = Z_p . 1 + Z_p . g.
    let g = match alg.kind {
        Kind::Ramified => alg.elem_int(0, 1),
        Kind::Split => alg.elem(rat_int(0), rat_pow_p(p, order.o as i64)),
        Kind::Inert => alg.elem(rat_int(0), rat_pow_p(p, order.o as i64)),
    };
    // Canonical key of x mod delta O_c: the fractional parts of the O_c
    // coordinates of x / delta.
    let coords = |t: &PadicElem| -> (Rat, Rat) {
        match alg.kind {
            Kind::Inert => (t.a.clone(), &t.b / &rat_pow_p(p, order.o as i64)),
            Kind::Ramified => (t.a.clone(), t.b.clone()),
            Kind::Split => (
                t.a.clone(),
                &(&t.b - &t.a) / &rat_pow_p(p, order.o as i64),
            ),
        }
    };
    let span = p.pow(vq as u32);
    let mut seen: HashMap<(Rat, Rat), ()> = HashMap::new();
    let mut reps = Vec::new();
    'outer: for i in 0..span {
        for jdx in 0..span {
            let x = alg.add(
                &alg.from_f(rat_int(i as i64)),
                &alg.scale(&g, &rat_int(jdx as i64)),
            );
            let t = alg.mul(&x, &delta_inv);
            let (u, v) = coords(&t);
            let key = (frac_part(&u, p), frac_part(&v, p));
            if seen.insert(key, ()).is_none() {
                reps.push(x);
                if reps.len() as u64 == span {
                    break 'outer;
                }
            }
        }
    }
    if reps.len() as u64 != span {
        return Err(Error::Unsupported(format!(
            "found {} of {} residues of the order modulo delta",
            reps.len(),
            span
        )));
    }
    Ok(reps)
}

/// The optimal Schwartz function `Phi^opt = sum_a char(O_c + a/delta) (x)
/// char(O_c - a/delta)`, the characteristic function of the optimal order
/// `End_{O_F}(O_c)` inside `B`.
pub fn phi_opt(alg: &QuadAlgebra, order: &RingClassOrder) -> Result<SchwartzB> {
    let delta = order.delta(alg);
    let delta_inv = alg.inv(&delta)?;
    let m = if alg.kind == Kind::Ramified { 1 } else { order.o as i64 };
    let j = order.o as i64;
    let mut terms = Vec::new();
    for a in order_residues(alg, order)? {
        let shift = alg.mul(&a, &delta_inv);
        let plus = SchwartzE::from_fn(alg, m, j, |x| {
            if order.contains(alg, &alg.sub(x, &shift)) {
                CycQ::one(1)
            } else {
                CycQ::zero(1)
            }
        })?;
        let minus = SchwartzE::from_fn(alg, m, j, |x| {
            if order.contains(alg, &alg.add(x, &shift)) {
                CycQ::one(1)
            } else {
                CycQ::zero(1)
            }
        })?;
        terms.push(TensorTerm {
            f1: plus,
            f2: minus,
            coeff: CycQ::one(1),
            q_restriction: None,
        });
    }
    Ok(SchwartzB { terms })
}
