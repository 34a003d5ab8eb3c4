//! Rational functions in `X = q^{-s}` with cyclotomic coefficients.

use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

use super::cycq::CycQ;
use super::poly::{poly_divrem, poly_gcd, LaurentPoly};
use super::series::LaurentSeriesX;
use crate::{Error, Result};

/// A normalized rational function `num/den` in `X`.
///
/// Normal form: the denominator is an ordinary polynomial with constant
/// coefficient `1`, `gcd(num, den) = 1`, and any `X`-power content lives in the
/// (Laurent) numerator. Equality of values is therefore structural equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunX {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunX {
    /// Build `num/den`, reducing to normal form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunX { num: LaurentPoly::zero(), den: LaurentPoly::one() });
        }
        // Move X-powers into the numerator shift.
        let shift = num.min_degree().unwrap() - den.min_degree().unwrap();
        let n0 = num.shift(-num.min_degree().unwrap());
        let d0 = den.shift(-den.min_degree().unwrap());
        let g = poly_gcd(&n0, &d0);
        let (n1, rn) = poly_divrem(&n0, &g);
        let (d1, rd) = poly_divrem(&d0, &g);
        debug_assert!(rn.is_zero() && rd.is_zero());
        // Scale so the denominator's constant term is 1 (nonzero after trimming).
        let c = d1.coeff(0);
        let ci = c.inv().expect("trimmed denominator has nonzero constant term");
        Ok(RatFunX { num: n1.scale(&ci).shift(shift), den: d1.scale(&ci) })
    }

    /// The zero function.
    pub fn zero() -> Self {
        RatFunX { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        RatFunX { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    /// A polynomial viewed as a rational function.
    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunX { num: p, den: LaurentPoly::one() }
    }

    /// The constant `c`.
    pub fn constant(c: CycQ) -> Self {
        RatFunX::from_poly(LaurentPoly::constant(c))
    }

    /// The monomial `c X^d`.
    pub fn monomial(d: i64, c: CycQ) -> Self {
        RatFunX::from_poly(LaurentPoly::monomial(d, c))
    }

    /// Numerator in normal form.
    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator in normal form.
    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    /// True iff this is the zero function.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Multiplicative inverse.
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        RatFunX::new(self.den.clone(), self.num.clone())
    }

    /// Exact evaluation at a cyclotomic point; a pole is reported as [`Error::Pole`].
    pub fn eval_at(&self, x: &CycQ) -> Result<CycQ> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::Pole);
        }
        let n = self.num.eval(x)?;
        Ok(&n * &d.inv()?)
    }

    /// Laurent expansion at `X = 0` through degree `n_max`.
    pub fn series_expand(&self, n_max: i64) -> LaurentSeriesX {
        if self.is_zero() {
            return LaurentSeriesX::zero(n_max.min(0), n_max);
        }
        let min = self.num.min_degree().unwrap();
        // Invert the denominator as a power series (constant term is 1).
        let len = (n_max - min + 1).max(0) as usize;
        let mut inv = vec![CycQ::zero(1); len];
        if len > 0 {
            inv[0] = CycQ::one(1);
            for n in 1..len {
                let mut acc = CycQ::zero(1);
                for j in 1..=n.min(self.den.max_degree().unwrap() as usize) {
                    let dj = self.den.coeff(j as i64);
                    if !dj.is_zero() {
                        acc = &acc + &(&dj * &inv[n - j]);
                    }
                }
                inv[n] = -&acc;
            }
        }
        let mut coeffs = vec![CycQ::zero(1); len];
        for (d, c) in self.num.terms() {
            let off = (d - min) as usize;
            for (k, ik) in inv.iter().enumerate() {
                if off + k < len && !ik.is_zero() {
                    coeffs[off + k] = &coeffs[off + k] + &(&c * ik);
                }
            }
        }
        LaurentSeriesX::new(min, coeffs, n_max)
    }

    /// Apply a cyclotomic-coefficient map (e.g. a Galois automorphism) to all
    /// coefficients.
    pub fn map_coeffs(&self, f: &mut dyn FnMut(&CycQ) -> CycQ) -> Result<Self> {
        let map_poly = |p: &LaurentPoly, f: &mut dyn FnMut(&CycQ) -> CycQ| {
            LaurentPoly::from_terms(
                &p.terms().iter().map(|(d, c)| (*d, f(c))).collect::<Vec<_>>(),
            )
        };
        RatFunX::new(map_poly(&self.num, f), map_poly(&self.den, f))
    }
}

impl std::ops::Add for &RatFunX {
    type Output = RatFunX;
    fn add(self, rhs: &RatFunX) -> RatFunX {
        RatFunX::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominators")
    }
}

impl std::ops::Sub for &RatFunX {
    type Output = RatFunX;
    fn sub(self, rhs: &RatFunX) -> RatFunX {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &RatFunX {
    type Output = RatFunX;
    fn neg(self) -> RatFunX {
        RatFunX { num: -&self.num, den: self.den.clone() }
    }
}

impl std::ops::Mul for &RatFunX {
    type Output = RatFunX;
    fn mul(self, rhs: &RatFunX) -> RatFunX {
        RatFunX::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl std::ops::Div for &RatFunX {
    type Output = RatFunX;
    fn div(self, rhs: &RatFunX) -> RatFunX {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

fn poly_to_map(p: &LaurentPoly) -> BTreeMap<String, CycQ> {
    p.terms().into_iter().map(|(d, c)| (d.to_string(), c)).collect()
}

fn poly_from_map(m: &BTreeMap<String, CycQ>) -> Option<LaurentPoly> {
    let mut terms = Vec::new();
    for (k, v) in m {
        terms.push((k.parse::<i64>().ok()?, v.clone()));
    }
    Some(LaurentPoly::from_terms(&terms))
}

impl Serialize for RatFunX {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RatFunX", 2)?;
        st.serialize_field("num", &poly_to_map(&self.num))?;
        st.serialize_field("den", &poly_to_map(&self.den))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RatFunX {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            num: BTreeMap<String, CycQ>,
            den: BTreeMap<String, CycQ>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = poly_from_map(&raw.num).ok_or_else(|| D::Error::custom("bad degree key"))?;
        let den = poly_from_map(&raw.den).ok_or_else(|| D::Error::custom("bad degree key"))?;
        RatFunX::new(num, den).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cycq::rat;

    fn x() -> LaurentPoly {
        LaurentPoly::monomial(1, CycQ::one(1))
    }

    fn one_minus_x() -> LaurentPoly {
        &LaurentPoly::one() - &x()
    }

    #[test]
    fn geometric_series() {
        let f = RatFunX::new(LaurentPoly::one(), one_minus_x()).unwrap();
        let s = f.series_expand(3);
        for d in 0..=3 {
            assert_eq!(s.coeff(d), CycQ::one(1), "degree {}", d);
        }
    }

    #[test]
    fn common_factors_cancel() {
        // (1+X) / ((1-X)(1-X)(1+X)) == 1/(1-X)^2, expansion 1 + 2X + 3X^2 + ...
        let num = &LaurentPoly::one() + &x();
        let den = &(&one_minus_x() * &one_minus_x()) * &(&LaurentPoly::one() + &x());
        let f = RatFunX::new(num, den).unwrap();
        let s = f.series_expand(2);
        assert_eq!(s.coeff(0), CycQ::one(1));
        assert_eq!(s.coeff(1), CycQ::from_int(1, 2));
        assert_eq!(s.coeff(2), CycQ::from_int(1, 3));
    }

    #[test]
    fn laurent_prefactor_expansion() {
        // X^{-1}(1+X)/(2(1-X)): expansion (1/2)X^{-1} + 1 + X + ...
        let num = LaurentPoly::monomial(-1, CycQ::from_rat(1, rat(1, 2)))
            .shift(0)
            .scale(&CycQ::one(1));
        let num = &num + &LaurentPoly::constant(CycQ::from_rat(1, rat(1, 2)));
        let f = RatFunX::new(num, one_minus_x()).unwrap();
        let s = f.series_expand(1);
        assert_eq!(s.coeff(-1), CycQ::from_rat(1, rat(1, 2)));
        assert_eq!(s.coeff(0), CycQ::one(1));
        assert_eq!(s.coeff(1), CycQ::one(1));
    }

    #[test]
    fn evaluation_and_poles() {
        let f = RatFunX::new(LaurentPoly::one(), one_minus_x()).unwrap();
        let v = f.eval_at(&CycQ::from_rat(1, rat(1, 3))).unwrap();
        assert_eq!(v, CycQ::from_rat(1, rat(3, 2)));
        assert!(matches!(f.eval_at(&CycQ::one(1)), Err(Error::Pole)));
    }

    #[test]
    fn ramified_shape_value() {
        // X^{-1}(1+X)/(2(1-X)) at X = 1/3 equals 3.
        let num = &LaurentPoly::monomial(-1, CycQ::from_rat(1, rat(1, 2)))
            + &LaurentPoly::constant(CycQ::from_rat(1, rat(1, 2)));
        let f = RatFunX::new(num, one_minus_x()).unwrap();
        assert_eq!(f.eval_at(&CycQ::from_rat(1, rat(1, 3))).unwrap(), CycQ::from_int(1, 3));
    }

    #[test]
    fn field_operations() {
        let f = RatFunX::new(LaurentPoly::one(), one_minus_x()).unwrap();
        let g = RatFunX::from_poly(x());
        let h = &(&f * &g) + &f; // (X+1)/(1-X)
        let hv = h.eval_at(&CycQ::from_rat(1, rat(1, 2))).unwrap();
        assert_eq!(hv, CycQ::from_int(1, 3));
        assert_eq!(&h / &h, RatFunX::one());
    }

    #[test]
    fn serialization_round_trips() {
        let f = RatFunX::new(
            &LaurentPoly::one() + &x(),
            &LaurentPoly::one() - &(&x() * &x()),
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: RatFunX = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
    }
}
