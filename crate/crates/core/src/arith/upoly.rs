//! Dense univariate polynomials over `F_p`.

use std::fmt;

use super::field::{Fp, PrimeField, LAZY_TERMS};
use super::ntt;
use crate::error::{Error, Result};
use crate::ops;

const SCHOOLBOOK_CUTOFF: usize = 32;
const NTT_CUTOFF: usize = 160;

/// A polynomial `c[0] + c[1] x + ...` with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl UniPoly {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::constant(field, 1)
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self::from_coeffs(field, vec![c % field.modulus()])
    }

    /// `c * x^k`.
    pub fn monomial(field: PrimeField, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c % field.modulus();
        Self::from_coeffs(field, v)
    }

    /// Build from residues already in `[0, p)`; trailing zeros are dropped.
    pub fn from_coeffs(field: PrimeField, mut coeffs: Vec<u64>) -> Self {
        debug_assert!(coeffs.iter().all(|&c| c < field.modulus()));
        trim(&mut coeffs);
        Self { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn from_fp(coeffs: &[Fp]) -> Self {
        let field = coeffs.first().map(|c| c.field()).expect("empty list");
        Self::from_coeffs(field, coeffs.iter().map(|c| c.value()).collect())
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored coefficients (`degree + 1`, or 0).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.len().max(other.len());
        let v = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(f, v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.len().max(other.len());
        let v = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::from_coeffs(f, v)
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        Self::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = c % f.modulus();
        ops::charge(self.len() as u64);
        Self::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// In-place `self += c * x^shift * other`.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: u64, shift: usize) {
        if other.is_zero() || c == 0 {
            return;
        }
        let f = self.field;
        let need = other.len() + shift;
        if self.coeffs.len() < need {
            self.coeffs.resize(need, 0);
        }
        for (i, &a) in other.coeffs.iter().enumerate() {
            let t = &mut self.coeffs[i + shift];
            *t = f.add(*t, f.mul(a, c));
        }
        trim(&mut self.coeffs);
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        Self::from_coeffs(self.field, mul_slices(&self.field, &self.coeffs, &other.coeffs))
    }

    pub fn square(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::from_coeffs(self.field, square_slice(&self.field, &self.coeffs))
    }

    /// Product truncated modulo `x^n`.
    pub fn mul_trunc(&self, other: &Self, n: usize) -> Self {
        let a = &self.coeffs[..self.len().min(n)];
        let b = &other.coeffs[..other.len().min(n)];
        if a.is_empty() || b.is_empty() {
            return Self::zero(self.field);
        }
        let mut v = mul_slices(&self.field, a, b);
        v.truncate(n);
        Self::from_coeffs(self.field, v)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    /// `self mod x^n`.
    pub fn truncate(&self, n: usize) -> Self {
        Self::from_coeffs(self.field, self.coeffs[..self.len().min(n)].to_vec())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self {
            field: self.field,
            coeffs: v,
        }
    }

    /// Exact quotient by `x^k`; low coefficients are discarded.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::from_coeffs(self.field, self.coeffs.get(k..).unwrap_or(&[]).to_vec())
    }

    /// The substitution `x -> x^k`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() || k == 1 {
            return self.clone();
        }
        let mut v = vec![0; (self.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[i * k] = c;
        }
        Self {
            field: self.field,
            coeffs: v,
        }
    }

    /// Section operator: coefficient `k` of the result is coefficient `pk + r` of `self`.
    pub fn section(&self, r: u64) -> Result<Self> {
        let p = self.field.modulus();
        if r >= p {
            return Err(Error::BadDigit { digit: r, p });
        }
        Ok(self.section_unchecked(r as usize, p as usize))
    }

    pub(crate) fn section_unchecked(&self, r: usize, p: usize) -> Self {
        let v = self.coeffs.iter().skip(r).step_by(p).copied().collect();
        Self::from_coeffs(self.field, v)
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, i as u64 % f.modulus()))
            .collect();
        Self::from_coeffs(f, v)
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lc()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    /// Inverse modulo `x^n` by Newton doubling.
    pub fn series_inv(&self, n: usize) -> Result<Self> {
        let f = self.field;
        if self.coeff(0) == 0 {
            return Err(Error::NotAUnit);
        }
        let mut g = Self::constant(f, f.inv(self.coeff(0))?);
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            // g <- g (2 - u g)
            let ug = self.mul_trunc(&g, prec);
            let two_minus = Self::constant(f, 2).sub(&ug);
            g = g.mul_trunc(&two_minus, prec);
        }
        Ok(g.truncate(n))
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, b: &Self) -> (Self, Self) {
        let f = self.field;
        let db = b.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return (Self::zero(f), Self::zero(f));
        };
        if da < db {
            return (Self::zero(f), self.clone());
        }
        let qlen = da - db + 1;
        if qlen.min(db) < 64 {
            return self.divrem_naive(b);
        }
        // reversed-coefficient Newton division
        let ra = Self::from_coeffs(f, self.coeffs.iter().rev().copied().collect());
        let rb = Self::from_coeffs(f, b.coeffs.iter().rev().copied().collect());
        let inv = rb.series_inv(qlen).expect("leading coefficient is a unit");
        let rq = ra.mul_trunc(&inv, qlen);
        let mut qv: Vec<u64> = rq.coeffs.clone();
        qv.resize(qlen, 0);
        qv.reverse();
        let q = Self::from_coeffs(f, qv);
        let r = self.sub(&q.mul(b));
        (q, r)
    }

    fn divrem_naive(&self, b: &Self) -> (Self, Self) {
        let f = self.field;
        let db = b.len() - 1;
        let inv = f.inv(b.lc()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let qlen = rem.len() - db;
        let mut q = vec![0u64; qlen];
        ops::charge((qlen * (db + 1)) as u64);
        for k in (0..qlen).rev() {
            let c = f.mul(rem[k + db], inv);
            q[k] = c;
            if c != 0 {
                for (i, &bi) in b.coeffs.iter().enumerate() {
                    rem[k + i] = f.sub(rem[k + i], f.mul(c, bi));
                }
            }
        }
        rem.truncate(db);
        (Self::from_coeffs(f, q), Self::from_coeffs(f, rem))
    }

    /// Quotient of an exact division; fails if the remainder is nonzero.
    pub fn exact_div(&self, b: &Self) -> Result<Self> {
        let (q, r) = self.divrem(b);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonPolynomialResult(format!(
                "remainder of degree {} in exact division",
                r.len() - 1
            )))
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly(p={}, {:?})", self.field.modulus(), self.coeffs)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, self.coeffs.iter().copied().enumerate(), "x")
    }
}

/// Shared pretty-printer: `c*x^i` terms joined by `+`, zero as `0`.
pub(crate) fn write_poly(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, u64)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (i, c) in terms.filter(|&(_, c)| c != 0) {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match (i, c) {
            (0, c) => write!(f, "{c}")?,
            (1, 1) => write!(f, "{var}")?,
            (1, c) => write!(f, "{c}*{var}")?,
            (i, 1) => write!(f, "{var}^{i}")?,
            (i, c) => write!(f, "{c}*{var}^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Product of two nonempty residue slices.
pub fn mul_slices(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if short.len() < SCHOOLBOOK_CUTOFF {
        schoolbook(f, short, long)
    } else if short.len() < NTT_CUTOFF {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (k, chunk) in long.chunks(short.len()).enumerate() {
            let part = if chunk.len() == short.len() {
                karatsuba(f, short, chunk)
            } else {
                mul_slices(f, short, chunk)
            };
            let off = k * short.len();
            for (o, &c) in out[off..].iter_mut().zip(&part) {
                *o = f.add(*o, c);
            }
        }
        out
    } else {
        ntt::mul(f, a, b)
    }
}

fn square_slice(f: &PrimeField, a: &[u64]) -> Vec<u64> {
    if a.len() < NTT_CUTOFF {
        mul_slices(f, a, a)
    } else {
        ntt::square(f, a)
    }
}

fn schoolbook(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (la, lb) = (a.len(), b.len());
    ops::charge((la * lb) as u64);
    let mut out = Vec::with_capacity(la + lb - 1);
    for k in 0..la + lb - 1 {
        let lo = k.saturating_sub(lb - 1);
        let hi = k.min(la - 1);
        let mut acc = 0u64;
        let mut s: u128 = 0;
        let mut n = 0;
        for i in lo..=hi {
            s += a[i] as u128 * b[k - i] as u128;
            n += 1;
            if n == LAZY_TERMS {
                acc = f.add(acc, f.reduce_u128(s));
                s = 0;
                n = 0;
            }
        }
        out.push(f.add(acc, f.reduce_u128(s)));
    }
    out
}

/// Karatsuba for equal-length inputs.
fn karatsuba(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n < SCHOOLBOOK_CUTOFF {
        return schoolbook(f, a, b);
    }
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = karatsuba(f, a0, b0);
    let z2 = if a1.len() == b1.len() {
        karatsuba(f, a1, b1)
    } else {
        schoolbook(f, a1, b1)
    };
    let m = n - h;
    let mut sa = a1.to_vec();
    let mut sb = b1.to_vec();
    for i in 0..h {
        sa[i] = f.add(sa[i], a0[i]);
        sb[i] = f.add(sb[i], b0[i]);
    }
    debug_assert_eq!(sa.len(), m);
    let mut z1 = karatsuba(f, &sa, &sb);
    for (i, &c) in z0.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    for (i, &c) in z2.iter().enumerate() {
        z1[i] = f.sub(z1[i], c);
    }
    let mut out = vec![0u64; 2 * n - 1];
    out[..z0.len()].copy_from_slice(&z0);
    for (i, &c) in z2.iter().enumerate() {
        out[2 * h + i] = f.add(out[2 * h + i], c);
    }
    for (i, &c) in z1.iter().enumerate() {
        if h + i < out.len() {
            out[h + i] = f.add(out[h + i], c);
        }
    }
    out
}
