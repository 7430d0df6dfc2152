//! Laurent polynomials in one variable.

use std::fmt;

use super::field::PrimeField;
use super::upoly::UniPoly;

/// `x^valuation * (c[0] + c[1] x + ...)` with `c[0] != 0` unless zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentUniPoly {
    valuation: i64,
    body: UniPoly,
}

impl LaurentUniPoly {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            valuation: 0,
            body: UniPoly::zero(field),
        }
    }

    /// `x^valuation * body`, renormalised so the first stored coefficient is nonzero.
    pub fn new(valuation: i64, body: UniPoly) -> Self {
        match body.valuation() {
            None => Self::zero(body.field()),
            Some(v) => Self {
                valuation: valuation + v as i64,
                body: body.shift_down(v),
            },
        }
    }

    pub fn from_i64(field: PrimeField, valuation: i64, coeffs: &[i64]) -> Self {
        Self::new(valuation, UniPoly::from_i64(field, coeffs))
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self::new(0, p)
    }

    pub fn field(&self) -> PrimeField {
        self.body.field()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Stored coefficients, starting at `x^valuation`.
    pub fn body(&self) -> &UniPoly {
        &self.body
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn max_exponent(&self) -> Option<i64> {
        self.body.degree().map(|d| self.valuation + d as i64)
    }

    pub fn coeff(&self, e: i64) -> u64 {
        let k = e - self.valuation;
        if k < 0 {
            0
        } else {
            self.body.coeff(k as usize)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let v = self.valuation.min(other.valuation);
        let a = self.body.shift((self.valuation - v) as usize);
        let b = other.body.shift((other.valuation - v) as usize);
        Self::new(v, a.add(&b))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.valuation, self.body.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.valuation + other.valuation, self.body.mul(&other.body))
    }

    pub fn mul_poly(&self, other: &UniPoly) -> Self {
        Self::new(self.valuation, self.body.mul(other))
    }

    /// The substitution `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        Self::new(self.valuation * k as i64, self.body.inflate(k))
    }

    /// Split into the part with negative exponents and the polynomial part.
    pub fn split(&self) -> (LaurentUniPoly, UniPoly) {
        let f = self.field();
        if self.valuation >= 0 {
            return (Self::zero(f), self.body.shift(self.valuation as usize));
        }
        let cut = (-self.valuation) as usize;
        let neg = Self::new(self.valuation, self.body.truncate(cut));
        let nonneg = self.body.shift_down(cut);
        (neg, nonneg)
    }
}

/// Negative and nonnegative parts of a Laurent polynomial.
pub fn laurent_split(g: &LaurentUniPoly) -> (LaurentUniPoly, UniPoly) {
    g.split()
}

impl fmt::Debug for LaurentUniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{} * {:?}", self.valuation, self.body)
    }
}

impl fmt::Display for LaurentUniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.body.coeffs().iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = self.valuation + k as i64;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                e => write!(f, "{c}*x^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_examples() {
        let f = PrimeField::new(5).unwrap();
        let g = LaurentUniPoly::from_i64(f, -1, &[1, 1]);
        let (neg, nonneg) = laurent_split(&g);
        assert_eq!(neg, LaurentUniPoly::from_i64(f, -1, &[1]));
        assert_eq!(nonneg, UniPoly::one(f));

        // -2x^-1 - x^-3 + 4x
        let g = LaurentUniPoly::from_i64(f, -3, &[-1, 0, -2, 0, 4]);
        let (neg, nonneg) = g.split();
        assert_eq!(neg, LaurentUniPoly::from_i64(f, -3, &[-1, 0, -2]));
        assert_eq!(nonneg, UniPoly::from_i64(f, &[0, 4]));

        let poly = UniPoly::from_i64(f, &[0, 0, 3, 1]);
        let (neg, nonneg) = LaurentUniPoly::from_poly(poly.clone()).split();
        assert!(neg.is_zero());
        assert_eq!(nonneg, poly);
    }

    #[test]
    fn arithmetic_keeps_normal_form() {
        let f = PrimeField::new(7).unwrap();
        let a = LaurentUniPoly::from_i64(f, -2, &[0, 3, 1]);
        assert_eq!(a.valuation(), -1);
        assert_eq!(a.coeff(-1), 3);
        assert_eq!(a.coeff(0), 1);
        let b = a.inflate(3);
        assert_eq!(b.valuation(), -3);
        assert_eq!(b.max_exponent(), Some(0));
        assert!(a.add(&a.neg()).is_zero());
        let c = a.mul(&LaurentUniPoly::from_i64(f, 1, &[1]));
        assert_eq!(c.valuation(), 0);
    }
}
