//! Assembly of the global constants for locally dihedral weight-one forms:
//! the Euler-factor identity at good primes, the Petersson constant `c_rs`,
//! and the divisibility bound on `m`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::chars::{AddChar, MultChar};
use crate::exact::{rat_int, CycQ, Rat};
use crate::localring::QuadAlgebra;
use crate::zeta::{
    alpha_global_table, alpha_local_table, alpha_oracle, alpha_ratio, l_adjoint_satake,
    lin_factor, RatioResult,
};
use crate::{Error, Result};

/// Verify the good-prime Euler-factor identity
/// `L(f x f*, X) = zeta_q(X) . L(Ad, X)`
/// for a unitary Satake pair `(a1, a2)` (so the dual parameters are the
/// inverses). The two sides are compared as exact rational functions via
/// series expansion well past the denominator degrees.
pub fn euler_identity_check(a1: &CycQ, a2: &CycQ) -> Result<bool> {
    let b1 = a1.inv()?;
    let b2 = a2.inv()?;
    // L(f x f*) = prod_{i,j} (1 - a_i b_j X)^{-1}.
    let mut den = crate::exact::LaurentPoly::one();
    for (a, b) in [(a1, &b1), (a1, &b2), (a2, &b1), (a2, &b2)] {
        den = &den * &lin_factor(&(a * b));
    }
    let lhs = crate::exact::RatFunX::new(crate::exact::LaurentPoly::one(), den)?;
    // zeta_q(X) L(Ad, X) = (1 - X)^{-1} . L(Ad, X).
    let zeta_q =
        crate::exact::RatFunX::new(crate::exact::LaurentPoly::one(), lin_factor(&CycQ::one(1)))?;
    let ladj = l_adjoint_satake(a1, a2)?;
    // Both sides have denominator degree at most 4, so agreement through
    // degree 12 is exact equality.
    let rhs = zeta_q.series_expand(12).mul(&ladj.series_expand(12));
    Ok(lhs.series_expand(12).agrees_with(&rhs))
}

/// `[PSL_2(Z) : Gamma_0(N)] = N prod_{p | N} (1 + 1/p)` as an exact rational
/// (an integer for every `N >= 1`).
pub fn index_gamma0(n: u64) -> Rat {
    let mut idx = rat_int(n as i64);
    for (p, _) in crate::exact::factorize(n) {
        idx *= rat(p as i64 + 1, p as i64);
    }
    idx
}

fn rat(n: i64, d: i64) -> Rat {
    crate::exact::rat(n, d)
}

/// Kronecker symbol `(d | p)` for a prime `p`.
fn kronecker(d: i64, p: u64) -> i64 {
    if p == 2 {
        return match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let p = p as i64;
    let r = d.rem_euclid(p);
    if r == 0 {
        return 0;
    }
    // Euler criterion by fast modular exponentiation.
    let mut base = r as u128;
    let mut e = ((p - 1) / 2) as u64;
    let m = p as u128;
    let mut acc: u128 = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// The index `[H_c : H_1]` of ring class groups for the order of conductor
/// `c` in the imaginary quadratic field of fundamental discriminant `d_k`
/// with `w_k` roots of unity:
/// `c prod_{p | c} (1 - (d_k|p)/p) / [O_K^x : O_c^x]`,
/// where the unit index is `w_k / 2` for `c > 1` and `1` for `c = 1`.
pub fn ring_class_index(d_k: i64, w_k: u32, c: u64) -> Result<u64> {
    if d_k >= 0 || c == 0 {
        return Err(Error::Config(
            "ring class index needs a negative discriminant and c >= 1".into(),
        ));
    }
    if c == 1 {
        return Ok(1);
    }
    let mut idx = rat_int(c as i64);
    for (p, _) in crate::exact::factorize(c) {
        idx *= rat(p as i64 - kronecker(d_k, p), p as i64);
    }
    idx *= rat(2, w_k as i64);
    if !idx.is_integer() || !idx.is_positive() {
        return Err(Error::Config(format!(
            "ring class index formula gave a non-integer {idx} (check w_k)"
        )));
    }
    u64::try_from(idx.to_integer().magnitude().clone())
        .map_err(|_| Error::Config("ring class index overflow".into()))
}

/// Which table (or oracle) supplies the per-prime ratios `alpha`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSource {
    /// The summary table of ratios.
    GlobalTable,
    /// The local comparison table.
    LocalTable,
    /// The brute-force series oracles.
    Oracle,
}

/// Local datum at one prime dividing the level.
#[derive(Clone, Debug)]
pub struct LocalDatum {
    pub p: u64,
    pub alg: QuadAlgebra,
    pub chi: MultChar,
}

/// A locally dihedral form: level, per-prime local data, and the imaginary
/// quadratic data (fundamental discriminant, roots of unity, ring class
/// conductor).
#[derive(Clone, Debug)]
pub struct GlobalFormSpec {
    pub level: u64,
    pub locals: Vec<LocalDatum>,
    pub disc: i64,
    pub w_k: u32,
    pub cond: u64,
}

impl GlobalFormSpec {
    /// Check that the per-prime data covers exactly the primes dividing the
    /// level and that the quadratic data is sane.
    pub fn validate(&self) -> Result<()> {
        if !matches!(self.w_k, 2 | 4 | 6) {
            return Err(Error::Config(format!("w_k = {} not in {{2,4,6}}", self.w_k)));
        }
        if self.disc >= 0 || (self.disc.rem_euclid(4) != 0 && self.disc.rem_euclid(4) != 1) {
            return Err(Error::Config(format!(
                "disc = {} is not a negative fundamental-style discriminant",
                self.disc
            )));
        }
        let mut ps: Vec<u64> = crate::exact::factorize(self.level)
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        let mut have: Vec<u64> = self.locals.iter().map(|l| l.p).collect();
        ps.sort_unstable();
        have.sort_unstable();
        if ps != have {
            return Err(Error::Config(format!(
                "local data primes {:?} do not match the primes dividing N = {}",
                have, self.level
            )));
        }
        Ok(())
    }
}

/// The per-prime ratio `alpha_p` under the chosen source.
pub fn alpha_for(datum: &LocalDatum, source: AlphaSource, n_max: i64) -> Result<CycQ> {
    match source {
        AlphaSource::GlobalTable => alpha_global_table(&datum.alg, &datum.chi),
        AlphaSource::LocalTable => alpha_local_table(&datum.alg, &datum.chi),
        AlphaSource::Oracle => {
            let psi = AddChar::standard(datum.p);
            alpha_oracle(&datum.alg, &datum.chi, &psi, n_max)
        }
    }
}

/// The full three-way ratio comparison at every prime of the level.
pub fn alpha_ratios(form: &GlobalFormSpec, n_max: i64) -> Result<Vec<(u64, RatioResult)>> {
    form.validate()?;
    form.locals
        .iter()
        .map(|l| {
            let psi = AddChar::standard(l.p);
            Ok((l.p, alpha_ratio(&l.alg, &l.chi, &psi, n_max)?))
        })
        .collect()
}

/// The Petersson constant
/// `c_rs = [H_c : H_1] w_K / 2 . prod_{p | N} alpha_p`
/// under the chosen `alpha` source.
pub fn c_rs(form: &GlobalFormSpec, source: AlphaSource, n_max: i64) -> Result<CycQ> {
    form.validate()?;
    let idx = ring_class_index(form.disc, form.w_k, form.cond)?;
    let mut acc = CycQ::from_rat(1, rat_int(idx as i64) * rat(form.w_k as i64, 2));
    for l in &form.locals {
        acc = &acc * &alpha_for(l, source, n_max)?;
    }
    Ok(acc)
}

/// The absolute norm of a cyclotomic value down to `Q` (the product of all
/// Galois conjugates), as an exact rational.
pub fn abs_norm_to_q(x: &CycQ) -> Result<Rat> {
    if let Some(r) = x.to_rational() {
        return Ok(r);
    }
    let m = x.order();
    let mut acc = CycQ::one(1);
    for t in 1..m as i64 {
        if num_integer::gcd(t as u64, m) == 1 {
            acc = &acc * &x.galois_apply(t)?;
        }
    }
    acc.to_rational()
        .ok_or_else(|| Error::Unsupported("norm of a cyclotomic value was not rational".into()))
}

/// The divisibility bound on `m`: the denominator, in lowest terms, of
/// `[PSL_2(Z) : Gamma_0(N)] prod alpha_p`.
#[derive(Clone, Debug)]
pub struct MBound {
    /// Denominator of the product itself, when it is rational.
    pub naive: Option<BigUint>,
    /// Denominator after taking the absolute norm to `Q` (always defined;
    /// agrees with `naive` for rational products).
    pub norm_based: BigUint,
}

/// Compute the `m`-bound for the form under the chosen `alpha` source.
/// Both the naive denominator (when the product of ratios is rational) and
/// the norm-based denominator are reported, since the stated bound presumes a
/// rational number while the ratios a priori live in `Q(xi + xi^{-1})`.
pub fn m_bound(form: &GlobalFormSpec, source: AlphaSource, n_max: i64) -> Result<MBound> {
    form.validate()?;
    let mut prod = CycQ::from_rat(1, index_gamma0(form.level));
    for l in &form.locals {
        prod = &prod * &alpha_for(l, source, n_max)?;
    }
    let naive = prod.to_rational().map(|r| denom_of(&r));
    let norm_based = denom_of(&abs_norm_to_q(&prod)?);
    Ok(MBound { naive, norm_based })
}

fn denom_of(r: &Rat) -> BigUint {
    let mut d: BigInt = r.denom().clone();
    if d.is_negative() {
        d = -d;
    }
    if r.numer().is_zero() {
        return BigUint::one();
    }
    d.magnitude().clone()
}
