//! Univariate rational functions in lowest terms.

use std::fmt;

use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// `num / den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) || g.is_zero() {
            (num, den)
        } else {
            (num.exact_div(&g)?, den.exact_div(&g)?)
        };
        let inv = den.field().inv(den.lc())?;
        den = den.scale(inv);
        num = num.scale(inv);
        if num.is_zero() {
            den = UniPoly::one(den.field());
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        let den = UniPoly::one(p.field());
        Self { num: p, den }
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The numerator when the denominator is 1.
    pub fn as_poly(&self) -> Option<&UniPoly> {
        (self.den.degree() == Some(0)).then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::new(num, self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den)).expect("nonzero denominators")
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::PrimeField;

    #[test]
    fn normal_form() {
        let f = PrimeField::new(7).unwrap();
        // (2x + 2x^2) / (3x) = (2 + 2x) / 3 = (3 + 3x) after making den monic
        let r = RationalFunction::new(
            UniPoly::from_i64(f, &[0, 2, 2]),
            UniPoly::from_i64(f, &[0, 3]),
        )
        .unwrap();
        assert_eq!(r.den(), &UniPoly::one(f));
        assert_eq!(r.num(), &UniPoly::from_i64(f, &[3, 3]));
        assert!(r.as_poly().is_some());

        let half = RationalFunction::new(UniPoly::one(f), UniPoly::constant(f, 2)).unwrap();
        let sum = half.add(&half);
        assert_eq!(sum, RationalFunction::from_poly(UniPoly::one(f)));

        let inv_x = RationalFunction::new(UniPoly::one(f), UniPoly::from_i64(f, &[0, 1])).unwrap();
        let x = RationalFunction::from_poly(UniPoly::from_i64(f, &[0, 1]));
        assert_eq!(inv_x.mul(&x), RationalFunction::from_poly(UniPoly::one(f)));
        assert!(inv_x.sub(&inv_x).is_zero());
        assert_eq!(
            RationalFunction::new(UniPoly::one(f), UniPoly::zero(f)),
            Err(Error::ZeroInverse)
        );
    }
}
