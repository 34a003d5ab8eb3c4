//! Exact arithmetic: cyclotomic rationals and rational functions / Laurent series
//! in the formal variable `X = q^{-s}`.

pub mod cycq;
pub mod poly;
pub mod ratfun;
pub mod series;

pub use cycq::{euler_phi, factorize, rat, rat_int, CycQ, Rat};
pub use poly::LaurentPoly;
pub use ratfun::RatFunX;
pub use series::LaurentSeriesX;

use crate::Result;

/// The root of unity `zeta_M^exponent` (multiplicative in the exponent).
pub fn cyc_make(m: u64, exponent: i64) -> CycQ {
    CycQ::root_of_unity(m, exponent)
}

/// The field automorphism `zeta_M -> zeta_M^t` applied to `x`; requires `gcd(t, M) = 1`.
pub fn galois_apply(x: &CycQ, t: i64) -> Result<CycQ> {
    x.galois_apply(t)
}

/// Laurent expansion of `f` at `X = 0` through degree `n_max`.
pub fn series_expand(f: &RatFunX, n_max: i64) -> LaurentSeriesX {
    f.series_expand(n_max)
}

/// Exact evaluation of `f` at the cyclotomic point `x`.
pub fn eval_at(f: &RatFunX, x: &CycQ) -> Result<CycQ> {
    f.eval_at(x)
}
