//! Truncated Laurent series in `X` and exact rational reconstruction.

use super::cycq::CycQ;
use super::poly::LaurentPoly;
use super::ratfun::RatFunX;

/// A Laurent series known exactly through degree `n_max`.
///
/// Coefficients are stored densely for degrees `min ..= n_max`; the truncation
/// order is explicit and is respected (taken as the minimum) by arithmetic.
#[derive(Clone, Debug)]
pub struct LaurentSeriesX {
    min: i64,
    coeffs: Vec<CycQ>,
    n_max: i64,
}

impl LaurentSeriesX {
    /// Build a series from its coefficient run for degrees `min ..= n_max`.
    pub fn new(min: i64, mut coeffs: Vec<CycQ>, n_max: i64) -> Self {
        let len = (n_max - min + 1).max(0) as usize;
        coeffs.resize(len, CycQ::zero(1));
        LaurentSeriesX { min, coeffs, n_max }
    }

    /// The zero series through `n_max`.
    pub fn zero(min: i64, n_max: i64) -> Self {
        LaurentSeriesX::new(min, vec![], n_max)
    }

    /// Truncation order.
    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    /// Lowest stored degree.
    pub fn min_degree(&self) -> i64 {
        self.min
    }

    /// Coefficient of `X^d` (zero below the stored window; panics above `n_max`).
    pub fn coeff(&self, d: i64) -> CycQ {
        assert!(d <= self.n_max, "coefficient beyond truncation order");
        if d < self.min {
            CycQ::zero(1)
        } else {
            self.coeffs[(d - self.min) as usize].clone()
        }
    }

    /// Sum, truncated to the smaller `n_max`.
    pub fn add(&self, rhs: &LaurentSeriesX) -> LaurentSeriesX {
        let n_max = self.n_max.min(rhs.n_max);
        let min = self.min.min(rhs.min);
        let mut coeffs = vec![CycQ::zero(1); (n_max - min + 1).max(0) as usize];
        for d in min..=n_max {
            coeffs[(d - min) as usize] = &self.coeff_or_zero(d) + &rhs.coeff_or_zero(d);
        }
        LaurentSeriesX { min, coeffs, n_max }
    }

    /// Scale by a constant.
    pub fn scale(&self, c: &CycQ) -> LaurentSeriesX {
        LaurentSeriesX {
            min: self.min,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            n_max: self.n_max,
        }
    }

    /// Product, truncated to the attainable order.
    pub fn mul(&self, rhs: &LaurentSeriesX) -> LaurentSeriesX {
        // A product coefficient at degree d needs both factors exactly through
        // d - (other minimum); the safe common order is below.
        let n_max = (self.n_max + rhs.min).min(rhs.n_max + self.min);
        let min = self.min + rhs.min;
        let mut coeffs = vec![CycQ::zero(1); (n_max - min + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let da = self.min + i as i64;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let d = da + rhs.min + j as i64;
                if d > n_max {
                    break;
                }
                if !b.is_zero() {
                    coeffs[(d - min) as usize] = &coeffs[(d - min) as usize] + &(a * b);
                }
            }
        }
        LaurentSeriesX { min, coeffs, n_max }
    }

    fn coeff_or_zero(&self, d: i64) -> CycQ {
        if d < self.min || d > self.n_max {
            CycQ::zero(1)
        } else {
            self.coeffs[(d - self.min) as usize].clone()
        }
    }

    /// Coefficientwise equality through the smaller truncation order.
    pub fn agrees_with(&self, rhs: &LaurentSeriesX) -> bool {
        let n_max = self.n_max.min(rhs.n_max);
        let min = self.min.min(rhs.min);
        (min..=n_max).all(|d| self.coeff_or_zero(d) == rhs.coeff_or_zero(d))
    }

    /// Reconstruct a rational function of denominator degree at most `max_den_deg`
    /// from this truncated expansion (Pade-style linear solve over the cyclotomic
    /// field). Returns the minimal-denominator-degree solution whose re-expansion
    /// matches every stored coefficient, or `None`.
    pub fn reconstruct(&self, max_den_deg: usize) -> Option<RatFunX> {
        let n = self.coeffs.len();
        if n == 0 {
            return Some(RatFunX::zero());
        }
        // Keep a couple of coefficients out of the solve as verification rows, so a
        // plain truncation can never masquerade as a reconstruction.
        const SLACK: usize = 2;
        'dd: for dd in 0..=max_den_deg {
            // Unknowns b_1..b_dd of den = 1 + b_1 X + ... + b_dd X^dd, chosen so the
            // coefficients of (series * den) above the numerator window vanish.
            if n < 2 * dd + SLACK + 1 {
                break;
            }
            let dn = n - 1 - dd - SLACK; // highest kept numerator index (relative)
            let mut matrix: Vec<Vec<CycQ>> = Vec::new();
            let mut rhs: Vec<CycQ> = Vec::new();
            for row in 0..dd {
                let d = dn + 1 + row;
                let mut r = Vec::with_capacity(dd);
                for j in 1..=dd {
                    r.push(if d >= j { self.coeffs[d - j].clone() } else { CycQ::zero(1) });
                }
                matrix.push(r);
                rhs.push(-&self.coeffs[d]);
            }
            let b = match solve_linear(matrix, rhs) {
                Some(b) => b,
                None => continue 'dd,
            };
            let mut den_terms = vec![(0i64, CycQ::one(1))];
            for (j, bj) in b.iter().enumerate() {
                den_terms.push((j as i64 + 1, bj.clone()));
            }
            let den = LaurentPoly::from_terms(&den_terms);
            // num = truncation of series * den.
            let mut num_terms = Vec::new();
            for d in 0..=dn {
                let mut acc = self.coeffs[d].clone();
                for (j, bj) in b.iter().enumerate() {
                    if d > j {
                        acc = &acc + &(bj * &self.coeffs[d - j - 1]);
                    }
                }
                num_terms.push((self.min + d as i64, acc));
            }
            let num = LaurentPoly::from_terms(&num_terms);
            let f = RatFunX::new(num, den).ok()?;
            if f.series_expand(self.n_max).agrees_with(self) {
                return Some(f);
            }
        }
        None
    }
}

/// Solve a square linear system over the cyclotomic field by Gaussian elimination.
fn solve_linear(mut a: Vec<Vec<CycQ>>, mut b: Vec<CycQ>) -> Option<Vec<CycQ>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].inv().ok()?;
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..n {
                    a[r][j] = &a[r][j] - &(&f * &a[col][j]);
                }
                b[r] = &b[r] - &(&f * &b[col]);
            }
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cycq::rat;

    fn one_over_one_minus_x() -> RatFunX {
        let one = LaurentPoly::one();
        let x = LaurentPoly::monomial(1, CycQ::one(1));
        RatFunX::new(one.clone(), &one - &x).unwrap()
    }

    #[test]
    fn reconstruction_round_trip() {
        let f = one_over_one_minus_x();
        let s = f.series_expand(8);
        let g = s.reconstruct(3).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn reconstruction_with_laurent_part() {
        // X^{-1}(1+X)/(2(1-X))
        let num = &LaurentPoly::monomial(-1, CycQ::from_rat(1, rat(1, 2)))
            + &LaurentPoly::constant(CycQ::from_rat(1, rat(1, 2)));
        let x = LaurentPoly::monomial(1, CycQ::one(1));
        let f = RatFunX::new(num, &LaurentPoly::one() - &x).unwrap();
        let s = f.series_expand(9);
        let g = s.reconstruct(2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn truncation_respected_in_products() {
        let f = one_over_one_minus_x();
        let s = f.series_expand(5);
        let p = s.mul(&s); // 1/(1-X)^2 through degree 5
        assert_eq!(p.n_max(), 5);
        assert_eq!(p.coeff(5), CycQ::from_int(1, 6));
    }

    #[test]
    fn polynomial_reconstructs_with_trivial_denominator() {
        let p = RatFunX::from_poly(&LaurentPoly::one() + &LaurentPoly::monomial(2, CycQ::from_int(1, 5)));
        let s = p.series_expand(6);
        assert_eq!(s.reconstruct(2).unwrap(), p);
    }
}
