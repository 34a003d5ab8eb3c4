//! Laurent polynomials in the formal variable `X = q^{-s}` with [`CycQ`] coefficients.

use super::cycq::CycQ;

/// A Laurent polynomial `sum_{d} c_d X^d` with finitely many nonzero terms.
///
/// Stored as the lowest degree together with the dense coefficient run up to the
/// highest degree; the run is trimmed so that (for nonzero polynomials) both the
/// first and last stored coefficients are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    min: i64,
    coeffs: Vec<CycQ>,
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { min: 0, coeffs: vec![] }
    }

    /// The constant polynomial `1` (in `Q = Q(zeta_1)`).
    pub fn one() -> Self {
        LaurentPoly::constant(CycQ::one(1))
    }

    /// A constant polynomial.
    pub fn constant(c: CycQ) -> Self {
        LaurentPoly::monomial(0, c)
    }

    /// The monomial `c X^d`.
    pub fn monomial(d: i64, c: CycQ) -> Self {
        if c.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min: d, coeffs: vec![c] }
        }
    }

    /// Build from `(degree, coefficient)` terms.
    pub fn from_terms(terms: &[(i64, CycQ)]) -> Self {
        let mut out = LaurentPoly::zero();
        for (d, c) in terms {
            out = &out + &LaurentPoly::monomial(*d, c.clone());
        }
        out
    }

    /// True iff this is the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest degree with nonzero coefficient (`None` for zero).
    pub fn min_degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min)
        }
    }

    /// Highest degree with nonzero coefficient (`None` for zero).
    pub fn max_degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.min + self.coeffs.len() as i64 - 1)
        }
    }

    /// Coefficient of `X^d`.
    pub fn coeff(&self, d: i64) -> CycQ {
        let idx = d - self.min;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            CycQ::zero(1)
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// All nonzero terms in increasing degree order.
    pub fn terms(&self) -> Vec<(i64, CycQ)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.min + i as i64, c.clone()))
            .collect()
    }

    fn normalized(min: i64, mut coeffs: Vec<CycQ>) -> Self {
        let mut lead_trim = 0;
        for c in coeffs.iter() {
            if c.is_zero() {
                lead_trim += 1;
            } else {
                break;
            }
        }
        coeffs.drain(..lead_trim);
        while let Some(last) = coeffs.last() {
            if last.is_zero() {
                coeffs.pop();
            } else {
                break;
            }
        }
        if coeffs.is_empty() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min: min + lead_trim as i64, coeffs }
        }
    }

    /// Shift degrees by `d` (multiply by `X^d`).
    pub fn shift(&self, d: i64) -> Self {
        if self.is_zero() {
            LaurentPoly::zero()
        } else {
            LaurentPoly { min: self.min + d, coeffs: self.coeffs.clone() }
        }
    }

    /// Scale by a nonzero cyclotomic constant.
    pub fn scale(&self, c: &CycQ) -> Self {
        LaurentPoly::normalized(self.min, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Evaluate at a cyclotomic point; negative degrees require the point nonzero.
    pub fn eval(&self, x: &CycQ) -> crate::Result<CycQ> {
        let mut acc = CycQ::zero(x.order());
        // Horner from the top, then multiply by x^{min} at the end.
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        if self.is_zero() {
            return Ok(acc);
        }
        if self.min >= 0 {
            for _ in 0..self.min {
                acc = &acc * x;
            }
        } else {
            let xi = x.inv().map_err(|_| crate::Error::Pole)?;
            for _ in 0..(-self.min) {
                acc = &acc * &xi;
            }
        }
        Ok(acc)
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let min = self.min.min(rhs.min);
        let max = (self.min + self.coeffs.len() as i64).max(rhs.min + rhs.coeffs.len() as i64);
        let mut coeffs = vec![CycQ::zero(1); (max - min) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.min - min) as usize + i] = c.clone();
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            let idx = (rhs.min - min) as usize + i;
            coeffs[idx] = &coeffs[idx] + c;
        }
        LaurentPoly::normalized(min, coeffs)
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { min: self.min, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let min = self.min + rhs.min;
        let mut coeffs = vec![CycQ::zero(1); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        LaurentPoly::normalized(min, coeffs)
    }
}

/// Euclidean division of ordinary (non-Laurent) polynomial parts: both inputs are
/// interpreted with their `X`-power content removed. Returns `(quotient, remainder)`.
pub(crate) fn poly_divrem(a: &LaurentPoly, b: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
    assert!(!b.is_zero());
    let a0 = a.shift(-a.min_degree().unwrap_or(0));
    let b0 = b.shift(-b.min_degree().unwrap_or(0));
    let db = b0.max_degree().unwrap() as usize;
    let lead_inv = b0.coeff(db as i64).inv().expect("nonzero leading coefficient");
    let mut rem = a0;
    let mut quot = LaurentPoly::zero();
    while !rem.is_zero() && rem.max_degree().unwrap() >= db as i64 {
        let dr = rem.max_degree().unwrap();
        let c = &rem.coeff(dr) * &lead_inv;
        let mono = LaurentPoly::monomial(dr - db as i64, c);
        quot = &quot + &mono;
        rem = &rem - &(&mono * &b0);
    }
    (quot, rem)
}

/// Monic gcd of the polynomial parts of two Laurent polynomials (X-content ignored).
pub(crate) fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut r0 = a.shift(-a.min_degree().unwrap_or(0));
    let mut r1 = b.shift(-b.min_degree().unwrap_or(0));
    while !r1.is_zero() {
        let (_, r) = poly_divrem(&r0, &r1);
        r0 = r1;
        r1 = r;
    }
    if r0.is_zero() {
        return r0;
    }
    let lead = r0.coeff(r0.max_degree().unwrap());
    r0.scale(&lead.inv().expect("nonzero leading coefficient"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cycq::rat_int;

    fn x() -> LaurentPoly {
        LaurentPoly::monomial(1, CycQ::one(1))
    }

    #[test]
    fn arithmetic_and_trimming() {
        let p = &(&x() * &x()) - &x(); // X^2 - X
        assert_eq!(p.min_degree(), Some(1));
        assert_eq!(p.max_degree(), Some(2));
        let q = &p - &p;
        assert!(q.is_zero());
    }

    #[test]
    fn division_with_remainder() {
        // (X^2 - 1) = (X - 1)(X + 1)
        let a = &(&x() * &x()) - &LaurentPoly::one();
        let b = &x() - &LaurentPoly::one();
        let (q, r) = poly_divrem(&a, &b);
        assert!(r.is_zero());
        assert_eq!(q, &x() + &LaurentPoly::one());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = &x() - &LaurentPoly::one();
        let a = &f * &(&x() + &LaurentPoly::one());
        let b = &f * &(&x() + &LaurentPoly::constant(CycQ::from_rat(1, rat_int(2).into()))); // reuse
        let g = poly_gcd(&a, &b);
        assert_eq!(g, f);
    }

    #[test]
    fn eval_with_negative_degrees() {
        // X^{-1} + X at X = 1/2 gives 2 + 1/2 = 5/2
        let p = &LaurentPoly::monomial(-1, CycQ::one(1)) + &x();
        let v = p.eval(&CycQ::from_rat(1, crate::exact::cycq::rat(1, 2))).unwrap();
        assert_eq!(v, CycQ::from_rat(1, crate::exact::cycq::rat(5, 2)));
    }
}
