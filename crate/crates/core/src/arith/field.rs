//! Prime fields with word-sized moduli.
//!
//! Residues are plain `u64` values in `[0, p)`. Products of two residues fit
//! in 122 bits because `p < 2^61`, so reductions go through a 128-bit Barrett
//! step instead of a hardware division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The prime field `F_p` for a prime `2 <= p < 2^61`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    // floor((2^128 - 1) / p)
    barrett: u128,
}

impl PrimeField {
    /// Exclusive upper bound on supported moduli.
    pub const MODULUS_BOUND: u64 = 1 << 61;

    pub fn new(p: u64) -> Result<Self> {
        if p >= Self::MODULUS_BOUND {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self {
            p,
            barrett: u128::MAX / p as u128,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduce an arbitrary 128-bit value.
    #[inline]
    pub fn reduce_u128(&self, x: u128) -> u64 {
        let q = mul_hi_u128(x, self.barrett);
        let mut r = x.wrapping_sub(q.wrapping_mul(self.p as u128)) as u64;
        if r >= self.p {
            r -= self.p;
        }
        r
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        let r = (x as i128).rem_euclid(self.p as i128);
        r as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce_u128(a as u128 * b as u128)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a % self.p == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut r0, mut r1) = (self.p as i128, (a % self.p) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.p as i128) as u64)
    }

    pub fn elem(&self, value: u64) -> Fp {
        Fp {
            value: value % self.p,
            field: *self,
        }
    }

    pub fn elem_i64(&self, value: i64) -> Fp {
        Fp {
            value: self.from_i64(value),
            field: *self,
        }
    }

    /// Dot product of two residue slices with lazy reduction.
    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        let mut acc = 0u64;
        for (ca, cb) in a.chunks(LAZY_TERMS).zip(b.chunks(LAZY_TERMS)) {
            let mut s: u128 = 0;
            for (&x, &y) in ca.iter().zip(cb) {
                s += x as u128 * y as u128;
            }
            acc = self.add(acc, self.reduce_u128(s));
        }
        acc
    }
}

/// Number of products of residues that can be summed in a `u128` without
/// overflow (each product is below `2^122`).
pub(crate) const LAZY_TERMS: usize = 64;

#[inline]
fn mul_hi_u128(x: u128, m: u128) -> u128 {
    let (x1, x0) = (x >> 64, x as u64 as u128);
    let (m1, m0) = (m >> 64, m as u64 as u128);
    let p00 = x0 * m0;
    let p01 = x0 * m1;
    let p10 = x1 * m0;
    let p11 = x1 * m1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// An element of a prime field, carrying its field context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    field: PrimeField,
}

impl Fp {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<Fp> {
        Ok(Fp {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(&self, exp: u64) -> Fp {
        Fp {
            value: self.field.pow(self.value, exp),
            field: self.field,
        }
    }
}

/// Multiplicative inverse of a field element.
pub fn fp_inv(a: Fp) -> Result<Fp> {
    a.inv()
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp {
            value: self.field.add(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp {
            value: self.field.sub(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.field, rhs.field);
        Fp {
            value: self.field.mul(self.value, rhs.value),
            field: self.field,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}
