//! Truncation-free models of `F = Q_p` and quadratic etale algebras `E/F`.
//!
//! Elements of `E` are pairs of ordinary rational numbers: `a + b*w` for an inert
//! quadratic field (`w^2 + c1*w + c0 = 0`), `a + b*pi_E` for a ramified quadratic
//! field (`pi_E^2 = u*p`), and componentwise pairs `(a, b)` for the split algebra
//! `F + F`. Because every element of interest in the zeta integrals is a ratio of
//! integers, all arithmetic is exact and no p-adic truncation is ever performed;
//! the `precision` of an algebra only bounds the depth of unit enumerations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::exact::{rat_int, Rat};
use crate::{Error, Result};

/// Splitting behaviour of the quadratic algebra `E` over `F = Q_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// `E = F + F`.
    Split,
    /// `E/F` the unramified quadratic field extension.
    Inert,
    /// `E/F` a ramified quadratic field extension (odd `p` only).
    Ramified,
}

/// The p-adic valuation of a nonzero rational, or `None` for zero.
pub fn val_p(r: &Rat, p: u64) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v: i64 = 0;
    let mut n = r.numer().abs();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = r.denom().abs();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    Some(v)
}

/// The residue of a p-integral rational modulo `p^k`, in `0..p^k`.
pub fn rat_mod_pk(r: &Rat, p: u64, k: u32) -> Result<u64> {
    let pk = BigInt::from(p).pow(k);
    let den = r.denom();
    if (den % BigInt::from(p)).is_zero() {
        return Err(Error::Unsupported(format!(
            "residue of a non-integral element modulo {}^{}",
            p, k
        )));
    }
    let inv = mod_inverse(&den.mod_floor(&pk), &pk)
        .ok_or_else(|| Error::Unsupported("denominator not invertible".into()))?;
    let res = (r.numer().mod_floor(&pk) * inv).mod_floor(&pk);
    let (_, digits) = res.to_u64_digits();
    Ok(*digits.first().unwrap_or(&0))
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd == BigInt::from(1) {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// An element `a + b*w` of the quadratic algebra (see [`QuadAlgebra`] for the
/// meaning of the basis in each kind).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicElem {
    pub a: Rat,
    pub b: Rat,
}

impl PadicElem {
    pub fn new(a: Rat, b: Rat) -> Self {
        PadicElem { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

/// A quadratic etale algebra `E` over `F = Q_p` with exact structure constants.
///
/// * split: elements are pairs `(a, b)`, multiplied componentwise;
/// * inert: elements are `a + b*w` with `w^2 + c1*w + c0 = 0`; for odd `p` we take
///   `w = sqrt(u)` for the least quadratic nonresidue `u` (`c1 = 0`, `c0 = -u`),
///   and for `p = 2` the cube root of unity (`c1 = c0 = 1`);
/// * ramified: elements are `a + b*pi_E` with `pi_E^2 = ram_u * p`.
#[derive(Clone, Debug)]
pub struct QuadAlgebra {
    pub p: u64,
    pub kind: Kind,
    pub c1: i64,
    pub c0: i64,
    pub ram_u: i64,
    /// Bound on enumeration depth (powers of the uniformizer of `E`).
    pub precision: i64,
}

/// Least quadratic nonresidue modulo an odd prime.
pub fn least_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&u| {
            // Euler's criterion by repeated squaring.
            let mut acc: u64 = 1;
            let mut base = u % p;
            let mut e = (p - 1) / 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % p;
                }
                base = base * base % p;
                e >>= 1;
            }
            acc == p - 1
        })
        .expect("odd prime has a nonresidue")
}

/// Build the quadratic algebra of the given kind over `Q_p`.
///
/// Ramified algebras default to `pi_E^2 = p`; ramified `p = 2` is outside the
/// standing hypotheses and is rejected.
pub fn make_algebra(p: u64, kind: Kind, precision: i64) -> Result<QuadAlgebra> {
    let (c1, c0, ram_u) = match kind {
        Kind::Split => (0, 0, 0),
        Kind::Inert => {
            if p == 2 {
                (1, 1, 0)
            } else {
                (0, -(least_nonresidue(p) as i64), 0)
            }
        }
        Kind::Ramified => {
            if p == 2 {
                return Err(Error::Hypothesis(
                    "ramified quadratic extensions of Q_2 are not supported".into(),
                ));
            }
            (0, 0, 1)
        }
    };
    Ok(QuadAlgebra { p, kind, c1, c0, ram_u, precision })
}

/// Ramified algebra `pi_E^2 = u*p` for a chosen unit class `u` (odd `p`).
pub fn make_algebra_ram(p: u64, u: i64, precision: i64) -> Result<QuadAlgebra> {
    if p == 2 {
        return Err(Error::Hypothesis(
            "ramified quadratic extensions of Q_2 are not supported".into(),
        ));
    }
    if u % p as i64 == 0 {
        return Err(Error::Config("pi_E^2 = u*p needs a unit u".into()));
    }
    Ok(QuadAlgebra { p, kind: Kind::Ramified, c1: 0, c0: 0, ram_u: u, precision })
}

impl QuadAlgebra {
    pub fn elem(&self, a: Rat, b: Rat) -> PadicElem {
        PadicElem::new(a, b)
    }

    pub fn elem_int(&self, a: i64, b: i64) -> PadicElem {
        PadicElem::new(rat_int(a), rat_int(b))
    }

    /// The image of a rational number of `F` in `E`.
    pub fn from_f(&self, r: Rat) -> PadicElem {
        match self.kind {
            Kind::Split => PadicElem::new(r.clone(), r),
            _ => PadicElem::new(r, Rat::zero()),
        }
    }

    pub fn zero(&self) -> PadicElem {
        PadicElem::new(Rat::zero(), Rat::zero())
    }

    pub fn one(&self) -> PadicElem {
        self.from_f(rat_int(1))
    }

    pub fn add(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        PadicElem::new(&x.a + &y.a, &x.b + &y.b)
    }

    pub fn sub(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        PadicElem::new(&x.a - &y.a, &x.b - &y.b)
    }

    pub fn neg(&self, x: &PadicElem) -> PadicElem {
        PadicElem::new(-x.a.clone(), -x.b.clone())
    }

    pub fn mul(&self, x: &PadicElem, y: &PadicElem) -> PadicElem {
        match self.kind {
            Kind::Split => PadicElem::new(&x.a * &y.a, &x.b * &y.b),
            Kind::Inert => {
                // (a1 + b1 w)(a2 + b2 w) with w^2 = -c1 w - c0.
                let cross = &(&x.a * &y.b) + &(&x.b * &y.a);
                let bb = &x.b * &y.b;
                PadicElem::new(
                    &(&x.a * &y.a) - &(&bb * &rat_int(self.c0)),
                    &cross - &(&bb * &rat_int(self.c1)),
                )
            }
            Kind::Ramified => {
                // (a1 + b1 pi)(a2 + b2 pi) with pi^2 = ram_u * p.
                let up = rat_int(self.ram_u * self.p as i64);
                PadicElem::new(
                    &(&x.a * &y.a) + &(&(&x.b * &y.b) * &up),
                    &(&x.a * &y.b) + &(&x.b * &y.a),
                )
            }
        }
    }

    pub fn scale(&self, x: &PadicElem, r: &Rat) -> PadicElem {
        PadicElem::new(&x.a * r, &x.b * r)
    }

    /// The nontrivial `F`-algebra involution of `E`.
    pub fn conj(&self, x: &PadicElem) -> PadicElem {
        match self.kind {
            Kind::Split => PadicElem::new(x.b.clone(), x.a.clone()),
            Kind::Inert => {
                // conj(w) = -c1 - w.
                PadicElem::new(&x.a - &(&x.b * &rat_int(self.c1)), -x.b.clone())
            }
            Kind::Ramified => PadicElem::new(x.a.clone(), -x.b.clone()),
        }
    }

    /// `N(x) = x * conj(x)`, valued in `F`.
    pub fn norm(&self, x: &PadicElem) -> Rat {
        match self.kind {
            Kind::Split => &x.a * &x.b,
            Kind::Inert => {
                // a^2 - c1 ab + c0 b^2.
                &(&(&x.a * &x.a) - &(&(&x.a * &x.b) * &rat_int(self.c1)))
                    + &(&(&x.b * &x.b) * &rat_int(self.c0))
            }
            Kind::Ramified => {
                &(&x.a * &x.a) - &(&(&x.b * &x.b) * &rat_int(self.ram_u * self.p as i64))
            }
        }
    }

    /// `Tr(x) = x + conj(x)`, valued in `F`.
    pub fn trace(&self, x: &PadicElem) -> Rat {
        match self.kind {
            Kind::Split => &x.a + &x.b,
            Kind::Inert => &(&x.a + &x.a) - &(&x.b * &rat_int(self.c1)),
            Kind::Ramified => &x.a + &x.a,
        }
    }

    /// Multiplicative inverse; errors on zero divisors.
    pub fn inv(&self, x: &PadicElem) -> Result<PadicElem> {
        let n = self.norm(x);
        if n.is_zero() {
            return Err(Error::Unsupported("inverse of a zero divisor".into()));
        }
        let c = self.conj(x);
        Ok(self.scale(&c, &(rat_int(1) / n)))
    }

    /// Ramification index of `E/F` (1 for split and inert, 2 for ramified).
    pub fn e(&self) -> i64 {
        match self.kind {
            Kind::Ramified => 2,
            _ => 1,
        }
    }

    /// Residue degree of `E/F` per component (2 for inert, else 1).
    pub fn f(&self) -> i64 {
        match self.kind {
            Kind::Inert => 2,
            _ => 1,
        }
    }

    /// A uniformizer of `E` (for split, of the first component: `(p, 1)`).
    pub fn uniformizer(&self) -> PadicElem {
        match self.kind {
            Kind::Split => self.elem_int(self.p as i64, 1),
            Kind::Inert => self.elem_int(self.p as i64, 0),
            Kind::Ramified => self.elem_int(0, 1),
        }
    }

    /// The second split uniformizer `(1, p)`.
    pub fn uniformizer_bar(&self) -> PadicElem {
        match self.kind {
            Kind::Split => self.elem_int(1, self.p as i64),
            _ => self.uniformizer(),
        }
    }

    /// `pi_E^k` for any integer `k` (split: first-component uniformizer).
    pub fn uniformizer_pow(&self, k: i64) -> PadicElem {
        let base = if k >= 0 { self.uniformizer() } else { self.inv(&self.uniformizer()).unwrap() };
        let mut out = self.one();
        for _ in 0..k.abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    /// Componentwise p-adic valuations (`None` per zero coordinate).
    pub fn coord_vals(&self, x: &PadicElem) -> (Option<i64>, Option<i64>) {
        (val_p(&x.a, self.p), val_p(&x.b, self.p))
    }

    /// Valuation of `x` in units of the uniformizer of `E` (inert: `pi = p`;
    /// ramified: `pi_E`). `None` for `x = 0`; for split, `None` unless both
    /// components are nonzero, in which case the sum of component valuations is
    /// returned (the valuation of the norm).
    pub fn val_pi(&self, x: &PadicElem) -> Option<i64> {
        let (va, vb) = self.coord_vals(x);
        match self.kind {
            Kind::Split => Some(va? + vb?),
            Kind::Inert => match (va, vb) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b),
                (None, None) => None,
            },
            Kind::Ramified => {
                let da = va.map(|v| 2 * v);
                let db = vb.map(|v| 2 * v + 1);
                match (da, db) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (Some(a), None) => Some(a),
                    (None, Some(b)) => Some(b),
                    (None, None) => None,
                }
            }
        }
    }

    /// The exponent `m` with `|x|_E = |N(x)|_F = q^{-m}`; `None` for zero divisors.
    pub fn abs_exp(&self, x: &PadicElem) -> Option<i64> {
        match self.kind {
            Kind::Split => {
                let (va, vb) = self.coord_vals(x);
                Some(va? + vb?)
            }
            Kind::Inert => Some(2 * self.val_pi(x)?),
            Kind::Ramified => self.val_pi(x),
        }
    }

    /// True iff `x` lies in the maximal order `O_E`.
    pub fn is_integral(&self, x: &PadicElem) -> bool {
        let p = self.p;
        let ok = |r: &Rat| val_p(r, p).map_or(true, |v| v >= 0);
        ok(&x.a) && ok(&x.b)
    }

    /// True iff `x` is a unit of `O_E` (for split: both components units).
    pub fn is_unit(&self, x: &PadicElem) -> bool {
        match self.kind {
            Kind::Split => {
                self.coord_vals(x) == (Some(0), Some(0))
            }
            _ => self.is_integral(x) && self.val_pi(x) == Some(0),
        }
    }

    /// Canonical key for the class of an integral element modulo `pi_E^k`
    /// (split: modulo `p^k` in both components).
    pub fn residue_key(&self, x: &PadicElem, k: u32) -> Result<(u64, u64)> {
        let p = self.p;
        match self.kind {
            Kind::Split | Kind::Inert => {
                Ok((rat_mod_pk(&x.a, p, k)?, rat_mod_pk(&x.b, p, k)?))
            }
            Kind::Ramified => {
                // pi^k O_E = p^{ceil(k/2)} O_F + p^{floor(k/2)} O_F pi.
                let ka = k.div_ceil(2);
                let kb = k / 2;
                Ok((rat_mod_pk(&x.a, p, ka)?, rat_mod_pk(&x.b, p, kb)?))
            }
        }
    }
}

/// The ring-class order `O_c = O_F + pi_E^o O_F w` of conductor exponent `o`
/// inside a quadratic algebra (`o = 0` is the maximal order; ramified algebras
/// only carry the maximal order).
#[derive(Clone, Copy, Debug)]
pub struct RingClassOrder {
    pub o: u32,
}

impl RingClassOrder {
    pub fn new(alg: &QuadAlgebra, o: u32) -> Result<Self> {
        if alg.kind == Kind::Ramified && o > 0 {
            return Err(Error::Hypothesis(
                "ramified quadratic algebras only carry the maximal order".into(),
            ));
        }
        Ok(RingClassOrder { o })
    }

    /// `delta = w_c - conj(w_c)` for a generator `w_c` of `O_c` over `O_F`; a
    /// generator of the different ideal of `O_c`.
    pub fn delta(&self, alg: &QuadAlgebra) -> PadicElem {
        let po = rat_int(alg.p as i64).pow(self.o as i32);
        match alg.kind {
            // w_c = p^o (1, 0), delta = p^o (1, -1).
            Kind::Split => alg.elem(po.clone(), -po),
            // w_c = p^o w, delta = p^o (2w + c1).
            Kind::Inert => {
                let g = alg.elem_int(alg.c1, 2);
                alg.scale(&g, &po)
            }
            // delta = 2 pi_E.
            Kind::Ramified => alg.elem_int(0, 2),
        }
    }

    /// Membership of an exact element in `O_c`.
    pub fn contains(&self, alg: &QuadAlgebra, x: &PadicElem) -> bool {
        if !alg.is_integral(x) {
            return false;
        }
        let ge = |r: &Rat, k: i64| val_p(r, alg.p).map_or(true, |v| v >= k);
        match alg.kind {
            Kind::Split => ge(&(&x.a - &x.b), self.o as i64),
            Kind::Inert => ge(&x.b, self.o as i64),
            Kind::Ramified => true,
        }
    }

    /// Membership of an exact element in `delta^{-1} O_c`.
    pub fn contains_delta_inv(&self, alg: &QuadAlgebra, x: &PadicElem) -> bool {
        self.contains(alg, &alg.mul(&self.delta(alg), x))
    }
}

/// Representatives of the norm-one classes `E^1 / (1 + pi_E^k O_E)^1`, each of
/// Haar measure `1 / count` (the compact part of `E^1` has total measure one; for
/// split algebras this is the unit part `O_F^times` of `E^1 = F^times`, and the
/// classes of a slice `p^l O_F^times` are the unit classes times `(p^l, p^{-l})`).
pub fn norm_one_reps(alg: &QuadAlgebra, k: u32) -> Result<Vec<PadicElem>> {
    if k as i64 > alg.precision {
        return Err(Error::Precision { needed: k as i64, available: alg.precision });
    }
    if k == 0 {
        return Ok(vec![alg.one()]);
    }
    match alg.kind {
        Kind::Split => {
            let pk = pow_u64(alg.p, k);
            let mut out = Vec::new();
            for u in 1..pk {
                if u % alg.p != 0 {
                    let r = rat_int(u as i64);
                    out.push(alg.elem(r.clone(), rat_int(1) / r));
                }
            }
            Ok(out)
        }
        Kind::Inert | Kind::Ramified => {
            // Hilbert 90: every norm-one element is y / conj(y); enumerating y over
            // unit classes (and, for ramified E, the uniformizer times unit classes)
            // modulo pi^k covers every class of E^1 / (1 + pi^k O_E)^1.
            let mut seen = std::collections::BTreeSet::new();
            let mut out = Vec::new();
            let mut push = |alg: &QuadAlgebra, y: &PadicElem| -> Result<()> {
                let t = alg.mul(y, &alg.inv(&alg.conj(y))?);
                let key = alg.residue_key(&t, k)?;
                if seen.insert(key) {
                    out.push(t);
                }
                Ok(())
            };
            let lifts = unit_reps(alg, k)?;
            for y in &lifts {
                push(alg, y)?;
            }
            if alg.kind == Kind::Ramified {
                let pi = alg.uniformizer();
                for y in &lifts {
                    push(alg, &alg.mul(&pi, y))?;
                }
            }
            Ok(out)
        }
    }
}

/// Representatives of the unit classes `O_E^times / (1 + pi_E^k O_E)` (`k >= 1`).
pub fn unit_reps(alg: &QuadAlgebra, k: u32) -> Result<Vec<PadicElem>> {
    if k as i64 > alg.precision {
        return Err(Error::Precision { needed: k as i64, available: alg.precision });
    }
    assert!(k >= 1, "unit classes need a positive level");
    let p = alg.p;
    let mut out = Vec::new();
    match alg.kind {
        Kind::Split => {
            let pk = pow_u64(p, k);
            for a in 1..pk {
                if a % p == 0 {
                    continue;
                }
                for b in 1..pk {
                    if b % p != 0 {
                        out.push(alg.elem_int(a as i64, b as i64));
                    }
                }
            }
        }
        Kind::Inert => {
            let pk = pow_u64(p, k);
            for a in 0..pk {
                for b in 0..pk {
                    let y = alg.elem_int(a as i64, b as i64);
                    if val_p(&alg.norm(&y), p).map_or(false, |v| v == 0) {
                        out.push(y);
                    }
                }
            }
        }
        Kind::Ramified => {
            let ka = k.div_ceil(2);
            let kb = k / 2;
            for a in 1..pow_u64(p, ka) {
                if a % p == 0 {
                    continue;
                }
                for b in 0..pow_u64(p, kb) {
                    out.push(alg.elem_int(a as i64, b as i64));
                }
            }
        }
    }
    Ok(out)
}

fn pow_u64(p: u64, k: u32) -> u64 {
    p.pow(k)
}

/// Regions of `E` with a canonical Haar volume.
#[derive(Clone, Copy, Debug)]
pub enum Region {
    /// `(1 + pi_E^k O_E)^1` inside the measure-one compact part of `E^1`.
    NormOneLevel(u32),
    /// `O_k^times` inside `O_E^times` (multiplicative measure, `vol(O_E^times) = 1`).
    UnitsOfOrder(u32),
    /// The quotient `O_E^times / O_c^times` (a count, not a volume).
    UnitsModOrder(u32),
}

/// Exact volumes by honest enumeration (no closed-form shortcuts).
pub fn volume_of(alg: &QuadAlgebra, region: Region) -> Result<Rat> {
    match region {
        Region::NormOneLevel(k) => {
            let n = norm_one_reps(alg, k)?.len() as i64;
            Ok(rat_int(1) / rat_int(n))
        }
        Region::UnitsOfOrder(k) => {
            let idx = units_mod_order_count(alg, k)?;
            Ok(rat_int(1) / rat_int(idx as i64))
        }
        Region::UnitsModOrder(k) => Ok(rat_int(units_mod_order_count(alg, k)? as i64)),
    }
}

/// The index `[O_E^times : O_k^times]` by enumeration at level `k`.
pub fn units_mod_order_count(alg: &QuadAlgebra, k: u32) -> Result<u64> {
    if k == 0 {
        return Ok(1);
    }
    let order = RingClassOrder::new(alg, k)?;
    let units = unit_reps(alg, k)?;
    let in_order = units
        .iter()
        .filter(|u| order.contains(alg, u))
        .count() as u64;
    if in_order == 0 {
        return Err(Error::Unsupported("order has no units at this level".into()));
    }
    Ok(units.len() as u64 / in_order)
}

/// A valuation stratum of `delta^{-1} O_c`, carrying representatives of the
/// `t_1`-classes fine enough for the inner norm-one integral together with their
/// Haar weights (multiplicative measure with `vol(O_E^times) = 1`, so each shell
/// `pi^n O_E^times` -- for split, each bi-valuation shell -- has total measure one).
#[derive(Clone, Debug)]
pub struct Stratum {
    /// `|t_1|_E = q^{-nu}` on this stratum.
    pub nu: i64,
    /// Representatives and weights; weights on a full shell sum to one, and
    /// representatives outside `delta^{-1} O_c` have already been dropped (so the
    /// stored weights sum to the measure of the stratum).
    pub reps: Vec<(PadicElem, Rat)>,
}

/// The strata of `delta^{-1} O_c` with `|t_1|_E = q^{-nu}` for `nu` in the window
/// `nu_min ..= nu_max`, enumerated honestly: representatives run over unit-class
/// grids at level `o + margin` and are filtered by the exact membership test.
pub fn order_strata(
    alg: &QuadAlgebra,
    order: &RingClassOrder,
    nu_min: i64,
    nu_max: i64,
) -> Result<Vec<Stratum>> {
    let o = order.o as i64;
    // Lattice membership and the inner integral both only depend on the class of
    // t_1 modulo units congruent to 1 at level o (in uniformizer units: e*o).
    let level = (alg.e() * o) as u32;
    let mut strata = Vec::new();
    match alg.kind {
        Kind::Split => {
            let classes = split_unit_classes(alg, level);
            let weight = rat_int(1) / rat_int((classes.len() * classes.len()) as i64);
            for nu in nu_min..=nu_max {
                let mut reps = Vec::new();
                // Component valuations (m, n) with m + n = nu; membership in
                // delta^{-1} O_c forces both components at valuation >= -o.
                for m in (-o)..=(nu + o) {
                    let n = nu - m;
                    if n < -o {
                        continue;
                    }
                    let pm = rat_pow_p(alg.p, m);
                    let pn = rat_pow_p(alg.p, n);
                    for u1 in &classes {
                        for u2 in &classes {
                            let t1 = alg.elem(u1 * &pm, u2 * &pn);
                            if order.contains_delta_inv(alg, &t1) {
                                reps.push((t1, weight.clone()));
                            }
                        }
                    }
                }
                strata.push(Stratum { nu, reps });
            }
        }
        Kind::Inert | Kind::Ramified => {
            let units: Vec<PadicElem> = if level == 0 {
                vec![alg.one()]
            } else {
                unit_reps(alg, level)?
            };
            let weight = rat_int(1) / rat_int(units.len() as i64);
            for nu in nu_min..=nu_max {
                // |t_1|_E = q^{-nu}: inert shells sit at even nu only.
                if alg.kind == Kind::Inert && nu % 2 != 0 {
                    strata.push(Stratum { nu, reps: Vec::new() });
                    continue;
                }
                let k = if alg.kind == Kind::Inert { nu / 2 } else { nu };
                let pik = alg.uniformizer_pow(k);
                let mut reps = Vec::new();
                for u in &units {
                    let t1 = alg.mul(&pik, u);
                    if order.contains_delta_inv(alg, &t1) {
                        reps.push((t1, weight.clone()));
                    }
                }
                strata.push(Stratum { nu, reps });
            }
        }
    }
    Ok(strata)
}

/// Unit classes of `O_F^times` modulo `1 + p^level O_F` as exact rationals.
pub fn split_unit_classes(alg: &QuadAlgebra, level: u32) -> Vec<Rat> {
    if level == 0 {
        return vec![rat_int(1)];
    }
    let pk = pow_u64(alg.p, level);
    (1..pk)
        .filter(|u| u % alg.p != 0)
        .map(|u| rat_int(u as i64))
        .collect()
}

/// `p^m` as an exact rational for any integer `m`.
pub fn rat_pow_p(p: u64, m: i64) -> Rat {
    let r = rat_int(p as i64);
    if m >= 0 {
        r.pow(m as i32)
    } else {
        (rat_int(1) / r).pow((-m) as i32)
    }
}
