//! Fraction-free powers of `y` modulo a polynomial `E` in `F_p[x][y]`.
//!
//! An element of `F_p(x)[y] / (E)` is kept as `r(x, y) / e_d(x)^k` where
//! `e_d` is the leading y-coefficient of `E`. Each elimination of a top
//! y-power multiplies the whole numerator by `e_d` and bumps `k`, so `y^D`
//! comes out with `k = D - d + 1` and x-degrees at most `h (D - d + 1)`.

use super::bipoly::BiPoly;
use super::field::PrimeField;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

/// `(1 / e_d^exponent) * sum_i coeffs[i] y^i`.
///
/// `coeffs.len() - 1` is the formal y-degree; it determines how many
/// elimination steps a product needs, independently of cancellations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracFree {
    pub coeffs: Vec<UniPoly>,
    pub exponent: u64,
}

/// A modulus `E = e_0(x) + e_1(x) y + ... + e_d(x) y^d` with `d >= 1`.
#[derive(Clone, Debug)]
pub struct YModulus {
    field: PrimeField,
    e: Vec<UniPoly>,
    // e_d when it is a nonzero constant
    lead_const: Option<u64>,
}

impl YModulus {
    pub fn new(e: &BiPoly) -> Result<Self> {
        Self::from_coeffs(e.field(), e.y_coeffs())
    }

    pub fn from_coeffs(field: PrimeField, e: Vec<UniPoly>) -> Result<Self> {
        if e.len() < 2 || e.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::InvalidInput(
                "modulus must have positive degree in the main variable".into(),
            ));
        }
        let lc = e.last().unwrap();
        let lead_const = (lc.degree() == Some(0)).then(|| lc.coeff(0));
        Ok(Self {
            field,
            e,
            lead_const,
        })
    }

    /// Degree `d` in the main variable.
    pub fn degree(&self) -> usize {
        self.e.len() - 1
    }

    pub fn leading(&self) -> &UniPoly {
        self.e.last().unwrap()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn one(&self) -> FracFree {
        FracFree {
            coeffs: vec![UniPoly::one(self.field)],
            exponent: 0,
        }
    }

    fn scale_by_lead(&self, v: &UniPoly) -> UniPoly {
        match self.lead_const {
            Some(c) => v.scale(c),
            None => v.mul(self.leading()),
        }
    }

    /// Eliminate formal degrees above `d - 1`, one step per degree.
    fn reduce(&self, mut s: Vec<UniPoly>, mut exponent: u64) -> FracFree {
        let d = self.degree();
        while s.len() > d {
            let k = s.len() - 1;
            let top = s.pop().unwrap();
            for c in s.iter_mut() {
                if !c.is_zero() {
                    *c = self.scale_by_lead(c);
                }
            }
            if !top.is_zero() {
                for i in 0..d {
                    if !self.e[i].is_zero() {
                        let t = top.mul(&self.e[i]);
                        s[k - d + i] = s[k - d + i].sub(&t);
                    }
                }
            }
            exponent += 1;
        }
        FracFree {
            coeffs: s,
            exponent,
        }
    }

    pub fn mul(&self, a: &FracFree, b: &FracFree) -> FracFree {
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        let mut prod = mul_y_vectors(self.field, &a.coeffs, &b.coeffs);
        prod.resize(len, UniPoly::zero(self.field));
        self.reduce(prod, a.exponent + b.exponent)
    }

    /// Multiply by the main variable.
    pub fn mul_y(&self, a: &FracFree) -> FracFree {
        let mut s = Vec::with_capacity(a.coeffs.len() + 1);
        s.push(UniPoly::zero(self.field));
        s.extend(a.coeffs.iter().cloned());
        self.reduce(s, a.exponent)
    }

    /// `y^n` by left-to-right binary powering.
    pub fn pow_y(&self, n: u64) -> FracFree {
        let mut acc = self.one();
        if n == 0 {
            return acc;
        }
        for bit in (0..64 - n.leading_zeros()).rev() {
            acc = self.mul(&acc, &acc);
            if (n >> bit) & 1 == 1 {
                acc = self.mul_y(&acc);
            }
        }
        acc
    }
}

/// Product of two polynomials in y given by their x-coefficient lists.
pub fn mul_y_vectors(field: PrimeField, a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let ua = BiPoly::from_y_coeffs(field, a);
    let ub = BiPoly::from_y_coeffs(field, b);
    ua.mul(&ub).y_coeffs()
}

/// `y^D mod E` in fraction-free form: returns `(r_0..r_{d-1}, D - d + 1)`.
pub fn bipoly_powmod_y(e: &BiPoly, big_d: u64) -> Result<(Vec<UniPoly>, u64)> {
    let m = YModulus::new(e)?;
    let d = m.degree();
    if big_d < d as u64 {
        return Err(Error::DegreeTooSmall {
            exponent: big_d,
            degree: d,
        });
    }
    let r = m.pow_y(big_d);
    debug_assert_eq!(r.coeffs.len(), d);
    debug_assert_eq!(r.exponent, big_d - d as u64 + 1);
    Ok((r.coeffs, r.exponent))
}
