//! Arbitrary-size nonnegative indices and their radix-p digits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// A nonnegative integer stored as little-endian 64-bit limbs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BigIndex {
    limbs: Vec<u64>,
}

impl BigIndex {
    pub fn zero() -> Self {
        Self { limbs: Vec::new() }
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Self {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Self { limbs }
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn to_u64(&self) -> Option<u64> {
        match self.limbs.len() {
            0 => Some(0),
            1 => Some(self.limbs[0]),
            _ => None,
        }
    }

    /// Number of significant bits.
    pub fn bits(&self) -> u64 {
        match self.limbs.last() {
            None => 0,
            Some(&top) => 64 * (self.limbs.len() as u64 - 1) + (64 - top.leading_zeros() as u64),
        }
    }

    fn mul_add_small(&mut self, m: u64, a: u64) {
        let mut carry = a as u128;
        for l in self.limbs.iter_mut() {
            let t = *l as u128 * m as u128 + carry;
            *l = t as u64;
            carry = t >> 64;
        }
        if carry > 0 {
            self.limbs.push(carry as u64);
        }
        if m == 0 {
            *self = Self::from_limbs(std::mem::take(&mut self.limbs));
        }
    }

    /// `self - s`, or `None` if the result would be negative.
    pub fn sub_small(&self, s: u64) -> Option<Self> {
        let mut limbs = self.limbs.clone();
        let mut borrow = s;
        for l in limbs.iter_mut() {
            if borrow == 0 {
                break;
            }
            let (v, b) = l.overflowing_sub(borrow);
            *l = v;
            borrow = b as u64;
        }
        if borrow > 0 {
            return None;
        }
        Some(Self::from_limbs(limbs))
    }

    /// Quotient and remainder by a nonzero machine word.
    pub fn divrem_small(&self, d: u64) -> (Self, u64) {
        assert!(d > 0, "division by zero");
        let mut q = vec![0u64; self.limbs.len()];
        let mut rem: u128 = 0;
        for k in (0..self.limbs.len()).rev() {
            let cur = (rem << 64) | self.limbs[k] as u128;
            q[k] = (cur / d as u128) as u64;
            rem = cur % d as u128;
        }
        (Self::from_limbs(q), rem as u64)
    }

    /// Base-p digits, least significant first (`[0]` for zero).
    pub fn digits_lsf(&self, p: u64) -> Vec<u64> {
        assert!(p >= 2);
        if self.is_zero() {
            return vec![0];
        }
        // peel off the largest power of p that fits in a word, then split it
        let mut chunk = p;
        let mut per_chunk = 1;
        while let Some(c) = chunk.checked_mul(p) {
            chunk = c;
            per_chunk += 1;
        }
        let mut digits = Vec::new();
        let mut n = self.clone();
        while !n.is_zero() {
            let (q, mut r) = n.divrem_small(chunk);
            n = q;
            for _ in 0..per_chunk {
                digits.push(r % p);
                r /= p;
            }
        }
        while digits.len() > 1 && digits.last() == Some(&0) {
            digits.pop();
        }
        digits
    }

    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidInput(format!("cannot parse index {text:?}"));
        let (mantissa, exp) = match s.split_once("10^") {
            Some((head, e)) => {
                let e: u32 = e.parse().map_err(|_| bad())?;
                let head = match head {
                    "" => "1",
                    h => h.strip_suffix('*').ok_or_else(bad)?,
                };
                (head, e)
            }
            None => (s.as_str(), 0),
        };
        if mantissa.is_empty() || !mantissa.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut n = Self::zero();
        for chunk in mantissa.as_bytes().chunks(18) {
            let v: u64 = std::str::from_utf8(chunk).unwrap().parse().map_err(|_| bad())?;
            n.mul_add_small(10u64.pow(chunk.len() as u32), v);
        }
        let mut e = exp;
        while e > 0 {
            let k = e.min(19);
            n.mul_add_small(10u64.pow(k), 0);
            e -= k;
        }
        Ok(n)
    }
}

impl From<u64> for BigIndex {
    fn from(v: u64) -> Self {
        Self::from_limbs(vec![v])
    }
}

impl FromStr for BigIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl PartialOrd for BigIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.limbs
            .len()
            .cmp(&other.limbs.len())
            .then_with(|| self.limbs.iter().rev().cmp(other.limbs.iter().rev()))
    }
}

impl fmt::Display for BigIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const CHUNK: u64 = 10_000_000_000_000_000_000;
        let mut parts = Vec::new();
        let mut n = self.clone();
        while !n.is_zero() {
            let (q, r) = n.divrem_small(CHUNK);
            parts.push(r);
            n = q;
        }
        write!(f, "{}", parts.pop().unwrap())?;
        for part in parts.iter().rev() {
            write!(f, "{part:019}")?;
        }
        Ok(())
    }
}

/// Radix-p digits of `n`, most significant first.
pub fn radix_digits(n: &BigIndex, p: &PrimeField) -> Vec<u64> {
    let mut d = n.digits_lsf(p.modulus());
    d.reverse();
    d
}
