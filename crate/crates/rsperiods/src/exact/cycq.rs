//! Exact elements of cyclotomic fields `Q(zeta_M)`.
//!
//! Internally a value is stored in *group-algebra form*: a sparse map
//! `exponent -> rational` representing `sum_k c_k zeta_M^k` with `0 <= k < M`.
//! This representation is not unique, but it makes products of roots of unity
//! monomial (a single exponent addition), which the Fourier kernels rely on.
//! Canonical comparison uses the tensor basis
//! `prod_i zeta_{p_i^{a_i}}^{e_i}`, `0 <= e_i < phi(p_i^{a_i})`,
//! reached from any exponent vector by at most one application of
//! `Phi_{p^a}(zeta) = sum_{j<p} zeta^{j p^{a-1}} = 0` per prime factor.
//! The dense reduced-power-basis vector (reduction modulo the cyclotomic
//! polynomial `Phi_M`) is produced on demand for display and serialization.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Exact rational scalar.
pub type Rat = Ratio<BigInt>;

/// Convenience constructor for a rational from two machine integers.
pub fn rat(n: i64, d: i64) -> Rat {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

/// Convenience constructor for an integer rational.
pub fn rat_int(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

/// Prime factorization of `n` as `(p, multiplicity)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Euler totient.
pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, a)| (p - 1) * p.pow(a - 1))
        .product::<u64>()
        .max(1)
}

fn lcm64(a: u64, b: u64) -> u64 {
    a / a.gcd(&b) * b
}

/// Dense coefficients of the cyclotomic polynomial `Phi_M` (little-endian, monic),
/// computed by dividing `x^M - 1` by all lower `Phi_d` and cached per order.
fn cyclotomic_poly(m: u64) -> std::sync::Arc<Vec<BigInt>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, std::sync::Arc<Vec<BigInt>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&m) {
        return hit.clone();
    }
    let result = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        // x^m - 1 divided by prod_{d | m, d < m} Phi_d; exact integer division.
        let mut numer = vec![BigInt::zero(); m as usize + 1];
        numer[0] = BigInt::from(-1);
        numer[m as usize] = BigInt::one();
        for d in 1..m {
            if m % d == 0 {
                let phi_d = cyclotomic_poly(d);
                numer = int_poly_div_exact(&numer, &phi_d);
            }
        }
        numer
    };
    let arc = std::sync::Arc::new(result);
    cache.lock().unwrap().insert(m, arc.clone());
    arc
}

/// Exact division of integer polynomials (little-endian), panics on nonzero remainder.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    assert!(den[dd].is_one() || den[dd] == BigInt::from(-1));
    let mut rem: Vec<BigInt> = num.to_vec();
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=(nd - dd)).rev() {
        let c = if den[dd].is_one() {
            rem[i + dd].clone()
        } else {
            -rem[i + dd].clone()
        };
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = &c * dj;
                rem[i + j] -= t;
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "non-exact polynomial division");
    quot
}

/// An exact element of `Q(zeta_M)`.
#[derive(Clone, Debug)]
pub struct CycQ {
    m: u64,
    /// Sparse group-algebra terms: exponent (mod `m`) -> rational coefficient.
    terms: BTreeMap<u64, Rat>,
}

impl CycQ {
    /// The root of unity `zeta_M^exponent` (`cyc_make` of the interface).
    pub fn root_of_unity(m: u64, exponent: i64) -> Self {
        assert!(m >= 1, "cyclotomic order must be positive");
        let e = exponent.rem_euclid(m as i64) as u64;
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        CycQ { m, terms }
    }

    /// Zero in `Q(zeta_M)`.
    pub fn zero(m: u64) -> Self {
        CycQ { m, terms: BTreeMap::new() }
    }

    /// One in `Q(zeta_M)`.
    pub fn one(m: u64) -> Self {
        Self::from_rat(m, Rat::one())
    }

    /// The rational `r` viewed in `Q(zeta_M)`.
    pub fn from_rat(m: u64, r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(0, r);
        }
        CycQ { m, terms }
    }

    /// The integer `n` viewed in `Q(zeta_M)`.
    pub fn from_int(m: u64, n: i64) -> Self {
        Self::from_rat(m, rat_int(n))
    }

    /// Cyclotomic order `M` of the ambient field.
    pub fn order(&self) -> u64 {
        self.m
    }

    /// Number of stored (non-canonical) terms; used for diagnostics only.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Canonical tensor-basis form: mixed-radix index over the per-prime-power
    /// reduced bases -> coefficient. Two values are equal iff these maps agree.
    fn canonical_map(&self) -> BTreeMap<u64, Rat> {
        let fac = factorize(self.m);
        let mut out: BTreeMap<u64, Rat> = BTreeMap::new();
        // Mixed-radix strides over phi(p^a) digits.
        let radices: Vec<u64> = fac.iter().map(|&(p, a)| (p - 1) * p.pow(a - 1)).collect();
        for (&k, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            // Expand this exponent into tensor-basis terms.
            // Each entry: (digits, sign-ish coefficient multiplier is +-1).
            let mut stack: Vec<(Vec<u64>, bool)> = vec![(Vec::new(), false)];
            // digits per factor with reduction
            let mut parts: Vec<Vec<(u64, bool)>> = Vec::with_capacity(fac.len());
            for (i, &(p, a)) in fac.iter().enumerate() {
                let pa = p.pow(a);
                let e = k % pa;
                let phi = radices[i];
                let mut alts = Vec::new();
                if e < phi {
                    alts.push((e, false));
                } else {
                    // top digit is p-1: zeta^e = -sum_{j<p-1} zeta^{j p^{a-1} + r}
                    let pa1 = p.pow(a - 1);
                    let r = e - phi;
                    for j in 0..(p - 1) {
                        alts.push((j * pa1 + r, true));
                    }
                }
                parts.push(alts);
            }
            // Cartesian product of the per-factor alternatives.
            for (i, alts) in parts.iter().enumerate() {
                let mut next = Vec::with_capacity(stack.len() * alts.len());
                for (digits, neg) in &stack {
                    for &(d, dn) in alts {
                        let mut nd = digits.clone();
                        nd.push(d);
                        next.push((nd, *neg ^ dn));
                    }
                }
                let _ = i;
                stack = next;
            }
            for (digits, neg) in stack {
                let mut idx = 0u64;
                for (i, &d) in digits.iter().enumerate() {
                    idx = idx * radices[i] + d;
                }
                let entry = out.entry(idx).or_insert_with(Rat::zero);
                if neg {
                    *entry -= c;
                } else {
                    *entry += c;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// True iff the value is zero.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        if self.terms.values().all(|c| c.is_zero()) {
            return true;
        }
        self.canonical_map().is_empty()
    }

    /// True iff the value is one.
    pub fn is_one(&self) -> bool {
        (self - &CycQ::one(self.m)).is_zero()
    }

    /// If the value is rational, return it.
    pub fn to_rational(&self) -> Option<Rat> {
        let can = self.canonical_map();
        match can.len() {
            0 => Some(Rat::zero()),
            1 => can.get(&0).cloned(),
            _ => None,
        }
    }

    /// Embed into `Q(zeta_{m2})` for `m | m2` (exponents scale by `m2/m`).
    pub fn embed(&self, m2: u64) -> Self {
        assert!(m2 % self.m == 0, "embedding requires m | m2");
        let f = m2 / self.m;
        let terms = self.terms.iter().map(|(&k, c)| (k * f, c.clone())).collect();
        CycQ { m: m2, terms }
    }

    /// Lift two values into their common cyclotomic field.
    pub fn lift_common(a: &CycQ, b: &CycQ) -> (CycQ, CycQ) {
        if a.m == b.m {
            (a.clone(), b.clone())
        } else {
            let m = lcm64(a.m, b.m);
            (a.embed(m), b.embed(m))
        }
    }

    /// Galois automorphism `zeta_M -> zeta_M^t` for `gcd(t, M) = 1`.
    pub fn galois_apply(&self, t: i64) -> Result<Self> {
        let tm = t.rem_euclid(self.m as i64) as u64;
        if (tm as u64).gcd(&self.m) != 1 {
            return Err(Error::NotCoprime { t, m: self.m });
        }
        let terms = self
            .terms
            .iter()
            .map(|(&k, c)| ((k * tm) % self.m, c.clone()))
            .fold(BTreeMap::new(), |mut acc: BTreeMap<u64, Rat>, (k, c)| {
                *acc.entry(k).or_insert_with(Rat::zero) += c;
                acc
            });
        Ok(CycQ { m: self.m, terms })
    }

    /// Complex conjugation `zeta_M -> zeta_M^{-1}`.
    pub fn conj(&self) -> Self {
        if self.m <= 2 {
            self.clone()
        } else {
            self.galois_apply(-1).expect("-1 is coprime to every order")
        }
    }

    /// Multiplicative inverse of a nonzero value.
    pub fn inv(&self) -> Result<Self> {
        let dense = self.to_power_basis();
        if dense.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroDenominator);
        }
        // Extended Euclid in Q[x] against Phi_M: u * self + v * Phi = 1.
        let phi: Vec<Rat> = cyclotomic_poly(self.m)
            .iter()
            .map(|c| Rat::from_integer(c.clone()))
            .collect();
        let inv_coeffs = qpoly_mod_inverse(&dense, &phi)?;
        let mut terms = BTreeMap::new();
        for (i, c) in inv_coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(i as u64, c);
            }
        }
        Ok(CycQ { m: self.m, terms })
    }

    /// Dense coefficients over the reduced power basis `1, zeta, ..., zeta^{phi(M)-1}`.
    pub fn to_power_basis(&self) -> Vec<Rat> {
        let phi = euler_phi(self.m) as usize;
        let mut dense = vec![Rat::zero(); self.m as usize];
        for (&k, c) in &self.terms {
            dense[k as usize] += c;
        }
        // Reduce modulo Phi_M by long division (Phi is monic).
        let phi_poly = cyclotomic_poly(self.m);
        let d = phi_poly.len() - 1;
        for i in (d..self.m as usize).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = dense[i].clone();
            for (j, pj) in phi_poly.iter().enumerate().take(d) {
                if !pj.is_zero() {
                    let t = &c * &Rat::from_integer(pj.clone());
                    dense[i - d + j] -= t;
                }
            }
            dense[i] = Rat::zero();
        }
        dense.truncate(phi.max(1));
        dense
    }

    /// Rebuild a value from power-basis coefficients.
    pub fn from_power_basis(m: u64, coeffs: &[Rat]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(i as u64, c.clone());
            }
        }
        CycQ { m, terms }
    }

    /// Compact the internal representation (merges exponents, drops zero terms).
    pub fn compact(&self) -> Self {
        let mut terms: BTreeMap<u64, Rat> = BTreeMap::new();
        for (&k, c) in &self.terms {
            if !c.is_zero() {
                *terms.entry(k).or_insert_with(Rat::zero) += c;
            }
        }
        terms.retain(|_, v| !v.is_zero());
        CycQ { m: self.m, terms }
    }

    /// The explicit positive square root of a prime `p` as a cyclotomic value
    /// (via the quadratic Gauss sum; lives in `Q(zeta_{4p})`, or `Q(zeta_8)` for `p = 2`).
    pub fn sqrt_of_prime(p: u64) -> Self {
        if p == 2 {
            // sqrt(2) = zeta_8 + zeta_8^{-1}
            return &CycQ::root_of_unity(8, 1) + &CycQ::root_of_unity(8, -1);
        }
        let m = 4 * p;
        // g = sum_n zeta_p^{n^2} equals sqrt(p) for p = 1 mod 4 and i*sqrt(p) for p = 3 mod 4.
        let mut g = CycQ::zero(m);
        for n in 0..p {
            g = &g + &CycQ::root_of_unity(p, ((n * n) % p) as i64).embed(m);
        }
        if p % 4 == 1 {
            g
        } else {
            // sqrt(p) = -i * g = zeta_4^{-1} * g
            &CycQ::root_of_unity(4, -1).embed(m) * &g
        }
    }
}

impl PartialEq for CycQ {
    fn eq(&self, other: &Self) -> bool {
        if self.m == other.m {
            self.canonical_map() == other.canonical_map()
        } else {
            let (a, b) = CycQ::lift_common(self, other);
            a.canonical_map() == b.canonical_map()
        }
    }
}

impl Eq for CycQ {}

impl std::ops::Add for &CycQ {
    type Output = CycQ;
    fn add(self, rhs: &CycQ) -> CycQ {
        let (a, b) = CycQ::lift_common(self, rhs);
        let mut terms = a.terms;
        for (k, c) in b.terms {
            let e = terms.entry(k).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(&k);
            }
        }
        CycQ { m: a.m, terms }
    }
}

impl std::ops::Sub for &CycQ {
    type Output = CycQ;
    fn sub(self, rhs: &CycQ) -> CycQ {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &CycQ {
    type Output = CycQ;
    fn neg(self) -> CycQ {
        let terms = self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect();
        CycQ { m: self.m, terms }
    }
}

impl std::ops::Mul for &CycQ {
    type Output = CycQ;
    fn mul(self, rhs: &CycQ) -> CycQ {
        let (a, b) = CycQ::lift_common(self, rhs);
        let mut terms: BTreeMap<u64, Rat> = BTreeMap::new();
        for (&ka, ca) in &a.terms {
            if ca.is_zero() {
                continue;
            }
            for (&kb, cb) in &b.terms {
                if cb.is_zero() {
                    continue;
                }
                let k = (ka + kb) % a.m;
                let e = terms.entry(k).or_insert_with(Rat::zero);
                *e += &(ca * cb);
                if e.is_zero() {
                    terms.remove(&k);
                }
            }
        }
        CycQ { m: a.m, terms }
    }
}

impl std::ops::Mul<&Rat> for &CycQ {
    type Output = CycQ;
    fn mul(self, rhs: &Rat) -> CycQ {
        if rhs.is_zero() {
            return CycQ::zero(self.m);
        }
        let terms = self.terms.iter().map(|(&k, c)| (k, c * rhs)).collect();
        CycQ { m: self.m, terms }
    }
}

impl fmt::Display for CycQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.to_power_basis();
        let mut first = true;
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            }
            let a = c.abs();
            if i == 0 {
                write!(f, "{}", a)?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.m, i)?;
            } else {
                write!(f, "{}*z{}^{}", a, self.m, i)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_from_string(s: &str) -> Option<Rat> {
    let mut it = s.splitn(2, '/');
    let n: BigInt = it.next()?.trim().parse().ok()?;
    let d: BigInt = match it.next() {
        Some(d) => d.trim().parse().ok()?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return None;
    }
    Some(Ratio::new(n, d))
}

impl Serialize for CycQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let coeffs: Vec<String> = self.to_power_basis().iter().map(rat_to_string).collect();
        let mut st = serializer.serialize_struct("CycQ", 2)?;
        st.serialize_field("M", &self.m)?;
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for CycQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "M")]
            m: u64,
            coeffs: Vec<String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut coeffs = Vec::with_capacity(raw.coeffs.len());
        for s in &raw.coeffs {
            coeffs.push(rat_from_string(s).ok_or_else(|| D::Error::custom("bad rational"))?);
        }
        Ok(CycQ::from_power_basis(raw.m, &coeffs))
    }
}

/// Inverse of `a` modulo the monic polynomial `modulus` over Q (extended Euclid).
fn qpoly_mod_inverse(a: &[Rat], modulus: &[Rat]) -> Result<Vec<Rat>> {
    // Invariants: r0 = s0 * a (mod modulus), r1 = s1 * a (mod modulus).
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    qtrim(&mut r0);
    qtrim(&mut r1);
    let mut s0: Vec<Rat> = vec![];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while !r1.is_empty() {
        let (q, r) = qdivrem(&r0, &r1);
        let s = qsub(&s0, &qmul(&q, &s1));
        r0 = r1;
        s0 = s1;
        r1 = r;
        s1 = s;
        qtrim(&mut r1);
    }
    if r0.len() != 1 {
        return Err(Error::ZeroDenominator);
    }
    // r0 = gcd is a nonzero constant; scale s0 by its inverse and reduce mod modulus.
    let c = r0[0].recip();
    let mut out: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
    let (_, rem) = qdivrem(&out, modulus);
    out = rem;
    qtrim(&mut out);
    Ok(out)
}

fn qtrim(p: &mut Vec<Rat>) {
    while let Some(last) = p.last() {
        if last.is_zero() {
            p.pop();
        } else {
            break;
        }
    }
}

fn qmul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += &(ai * bj);
        }
    }
    out
}

fn qsub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    out
}

fn qdivrem(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut rem = a.to_vec();
    qtrim(&mut rem);
    let mut bb = b.to_vec();
    qtrim(&mut bb);
    assert!(!bb.is_empty(), "division by zero polynomial");
    let db = bb.len() - 1;
    if rem.len() <= db {
        return (vec![], rem);
    }
    let lead = bb[db].clone();
    let mut quot = vec![Rat::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        let k = i - db;
        for (j, bj) in bb.iter().enumerate() {
            let t = &c * bj;
            rem[k + j] -= t;
        }
        quot[k] = c;
    }
    qtrim(&mut rem);
    (quot, rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots_of_unity_multiply() {
        let i = CycQ::root_of_unity(4, 1);
        assert_eq!(&i * &i, CycQ::from_int(4, -1));
        assert_eq!(CycQ::root_of_unity(1, 0), CycQ::one(1));
    }

    #[test]
    fn conjugate_cube_roots_sum_to_minus_one() {
        let a = CycQ::root_of_unity(3, 1);
        let b = CycQ::root_of_unity(3, 2);
        assert_eq!(&a + &b, CycQ::from_int(3, -1));
    }

    #[test]
    fn embedding_commutes_with_arithmetic() {
        let a = CycQ::root_of_unity(3, 1);
        let b = &CycQ::root_of_unity(3, 2) + &CycQ::from_rat(3, rat(5, 7));
        let prod_then_embed = (&a * &b).embed(12);
        let embed_then_prod = &a.embed(12) * &b.embed(12);
        assert_eq!(prod_then_embed, embed_then_prod);
        assert_eq!((&a + &b).embed(12), &a.embed(12) + &b.embed(12));
    }

    #[test]
    fn inverse_of_nonzero() {
        let x = &CycQ::root_of_unity(5, 2) + &CycQ::from_int(5, 3);
        let inv = x.inv().unwrap();
        assert!((&x * &inv).is_one());
        assert!(CycQ::zero(5).inv().is_err());
    }

    #[test]
    fn galois_fixes_rationals_and_is_multiplicative() {
        let r = CycQ::from_rat(3, rat(5, 7));
        assert_eq!(r.galois_apply(2).unwrap(), r);
        let x = CycQ::root_of_unity(3, 1);
        assert_eq!(x.galois_apply(2).unwrap(), CycQ::root_of_unity(3, 2));
        let fixed = &CycQ::root_of_unity(3, 1) + &CycQ::root_of_unity(3, 2);
        assert_eq!(fixed.galois_apply(2).unwrap(), fixed);
        assert!(x.galois_apply(3).is_err());
    }

    #[test]
    fn galois_composes() {
        let x = &CycQ::root_of_unity(12, 1) + &CycQ::from_rat(12, rat(1, 2));
        let a = x.galois_apply(5).unwrap().galois_apply(7).unwrap();
        let b = x.galois_apply(35).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sqrt_of_prime_squares_to_p() {
        for p in [2u64, 3, 5, 7, 13] {
            let s = CycQ::sqrt_of_prime(p);
            assert_eq!(&s * &s, CycQ::from_int(s.order(), p as i64), "p = {}", p);
        }
    }

    #[test]
    fn serialization_round_trips() {
        let x = &(&CycQ::root_of_unity(12, 7) * &CycQ::from_rat(12, rat(-3, 4)))
            + &CycQ::from_rat(12, rat(1, 6));
        let json = serde_json::to_string(&x).unwrap();
        let back: CycQ = serde_json::from_str(&json).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn power_basis_is_canonical() {
        // zeta_6 = -zeta_3^2 in Q(zeta_6); both spellings reduce identically.
        let a = CycQ::root_of_unity(6, 1);
        let b = -&CycQ::root_of_unity(3, 2).embed(6);
        assert_eq!(a.to_power_basis(), b.to_power_basis());
    }
}
