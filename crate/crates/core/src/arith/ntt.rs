//! Number-theoretic transform convolution for arbitrary word-sized primes.
//!
//! The product over `F_p` is recovered from convolutions modulo up to three
//! NTT-friendly primes near `2^62` by Garner's CRT, choosing the smallest
//! number of primes whose product exceeds the largest possible integer
//! coefficient `min(len) * (p - 1)^2`.

use super::field::PrimeField;
use crate::ops;

#[derive(Clone, Copy, Debug)]
struct Mont {
    m: u64,
    // -m^{-1} mod 2^64
    neg_inv: u64,
    // 2^128 mod m
    r2: u64,
}

impl Mont {
    const fn new(m: u64) -> Self {
        // Newton iteration for the inverse modulo 2^64
        let mut inv: u64 = 1;
        let mut i = 0;
        while i < 7 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(m.wrapping_mul(inv)));
            i += 1;
        }
        let r = ((1u128 << 64) % m as u128) as u64;
        let r2 = ((r as u128 * r as u128) % m as u128) as u64;
        Self {
            m,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    /// `a * b * 2^-64 mod m`.
    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        let t = a as u128 * b as u128;
        let k = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + k as u128 * self.m as u128) >> 64) as u64;
        if u >= self.m {
            u - self.m
        } else {
            u
        }
    }

    /// Montgomery form of a plain residue.
    #[inline]
    fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.m, self.r2)
    }

    /// Plain product `a * b mod m` where `b_mont` is in Montgomery form.
    #[inline(always)]
    fn mul_plain(&self, a: u64, b_mont: u64) -> u64 {
        self.mul(a, b_mont)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    fn pow_mont(&self, base_mont: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base_mont;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[derive(Clone, Copy, Debug)]
struct NttPrime {
    mont: Mont,
    generator: u64,
    two_adicity: u32,
}

const PRIMES: [NttPrime; 3] = [
    // 29 * 2^57 + 1
    NttPrime {
        mont: Mont::new(4_179_340_454_199_820_289),
        generator: 3,
        two_adicity: 57,
    },
    // 69 * 2^55 + 1
    NttPrime {
        mont: Mont::new(2_485_986_994_308_513_793),
        generator: 5,
        two_adicity: 55,
    },
    // 163 * 2^54 + 1
    NttPrime {
        mont: Mont::new(2_936_346_957_045_563_393),
        generator: 3,
        two_adicity: 54,
    },
];

impl NttPrime {
    /// Root of unity of order `2^log_n` in Montgomery form.
    fn root(&self, log_n: u32) -> u64 {
        assert!(log_n <= self.two_adicity, "transform length too large");
        let m = &self.mont;
        let g = m.to_mont(self.generator);
        m.pow_mont(g, (m.m - 1) >> log_n)
    }

    /// Stage twiddles: `table[len + j] = w_{2 len}^j` for `len` a power of two.
    fn twiddles(&self, log_n: u32, inverse: bool) -> Vec<u64> {
        let n = 1usize << log_n;
        let m = &self.mont;
        let mut table = vec![0u64; n.max(2)];
        let mut len = 1usize;
        let mut lg = 1u32;
        while len < n {
            let mut w = self.root(lg);
            if inverse {
                w = m.pow_mont(w, (1u64 << lg) - 1);
            }
            let mut cur = m.to_mont(1);
            for j in 0..len {
                table[len + j] = cur;
                cur = m.mul(cur, w);
            }
            len <<= 1;
            lg += 1;
        }
        table
    }

    /// Decimation-in-frequency; natural order in, bit-reversed out.
    fn forward(&self, a: &mut [u64], tw: &[u64]) {
        let m = &self.mont;
        let n = a.len();
        let mut len = n >> 1;
        while len >= 1 {
            for block in a.chunks_exact_mut(2 * len) {
                let (lo, hi) = block.split_at_mut(len);
                for j in 0..len {
                    let u = lo[j];
                    let v = hi[j];
                    lo[j] = m.add(u, v);
                    hi[j] = m.mul_plain(m.sub(u, v), tw[len + j]);
                }
            }
            len >>= 1;
        }
    }

    /// Decimation-in-time; bit-reversed in, natural order out (unscaled).
    fn inverse(&self, a: &mut [u64], tw: &[u64]) {
        let m = &self.mont;
        let n = a.len();
        let mut len = 1usize;
        while len < n {
            for block in a.chunks_exact_mut(2 * len) {
                let (lo, hi) = block.split_at_mut(len);
                for j in 0..len {
                    let u = lo[j];
                    let v = m.mul_plain(hi[j], tw[len + j]);
                    lo[j] = m.add(u, v);
                    hi[j] = m.sub(u, v);
                }
            }
            len <<= 1;
        }
    }

    /// Cyclic convolution of length `2^log_n` modulo this prime.
    fn convolve(&self, a: &[u64], b: Option<&[u64]>, log_n: u32) -> Vec<u64> {
        let n = 1usize << log_n;
        let m = &self.mont;
        let load = |src: &[u64]| {
            let mut v = vec![0u64; n];
            for (d, &s) in v.iter_mut().zip(src) {
                *d = if s >= m.m { s % m.m } else { s };
            }
            v
        };
        let fw = self.twiddles(log_n, false);
        let mut fa = load(a);
        self.forward(&mut fa, &fw);
        match b {
            Some(b) => {
                let mut fb = load(b);
                self.forward(&mut fb, &fw);
                for (x, y) in fa.iter_mut().zip(&fb) {
                    *x = m.mul(*x, *y);
                }
            }
            None => {
                for x in fa.iter_mut() {
                    *x = m.mul(*x, *x);
                }
            }
        }
        drop(fw);
        let iw = self.twiddles(log_n, true);
        self.inverse(&mut fa, &iw);
        // Pointwise products carry a factor 2^-64; undo it together with 1/n.
        let n_inv = m.to_mont(m.m - (m.m - 1) / n as u64);
        let scale = m.mul(n_inv, m.r2);
        for x in fa.iter_mut() {
            *x = m.mul(*x, scale);
        }
        fa
    }
}

/// Number of CRT primes needed for a product of the given shortest length.
fn primes_needed(p: u64, min_len: usize) -> usize {
    let bound = (p as f64 - 1.0).powi(2) * min_len as f64;
    let log_bound = bound.max(1.0).log2();
    // each prime exceeds 2^61
    if log_bound < 60.0 {
        1
    } else if log_bound < 121.0 {
        2
    } else {
        3
    }
}

/// Product of two residue slices over `field` (both nonempty).
pub fn mul(field: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    convolution(field, a, Some(b))
}

/// Square of a residue slice over `field`.
pub fn square(field: &PrimeField, a: &[u64]) -> Vec<u64> {
    convolution(field, a, None)
}

fn convolution(field: &PrimeField, a: &[u64], b: Option<&[u64]>) -> Vec<u64> {
    let lb = b.map_or(a.len(), |b| b.len());
    let out_len = a.len() + lb - 1;
    let log_n = out_len.next_power_of_two().trailing_zeros();
    let k = primes_needed(field.modulus(), a.len().min(lb));
    let n = 1u64 << log_n;
    let transforms = if b.is_some() { 3 } else { 2 };
    ops::charge(k as u64 * transforms * n * log_n as u64 / 2 + n);

    let residues: Vec<Vec<u64>> = PRIMES[..k]
        .iter()
        .map(|q| {
            let mut r = q.convolve(a, b, log_n);
            r.truncate(out_len);
            r
        })
        .collect();
    crt_reduce(field, &residues)
}

fn crt_reduce(field: &PrimeField, residues: &[Vec<u64>]) -> Vec<u64> {
    let p = field.modulus();
    let m1 = PRIMES[0].mont;
    let len = residues[0].len();
    match residues.len() {
        1 => residues[0].iter().map(|&r| r % p).collect(),
        2 => {
            let m2 = PRIMES[1].mont;
            let inv_m1 = m2.to_mont(mod_inverse(m1.m % m2.m, m2.m));
            let m1_p = m1.m % p;
            (0..len)
                .map(|i| {
                    let v1 = residues[0][i];
                    let v2 = m2.mul_plain(m2.sub(residues[1][i], v1 % m2.m), inv_m1);
                    field.add(v1 % p, field.mul(v2 % p, m1_p))
                })
                .collect()
        }
        _ => {
            let m2 = PRIMES[1].mont;
            let m3 = PRIMES[2].mont;
            let inv_m1_m2 = m2.to_mont(mod_inverse(m1.m % m2.m, m2.m));
            let m1_m3 = m3.to_mont(m1.m % m3.m);
            let m1m2_m3 = ((m1.m as u128 * m2.m as u128) % m3.m as u128) as u64;
            let inv_m1m2_m3 = m3.to_mont(mod_inverse(m1m2_m3, m3.m));
            let m1_p = m1.m % p;
            let m1m2_p = ((m1.m as u128 * m2.m as u128) % p as u128) as u64;
            (0..len)
                .map(|i| {
                    let v1 = residues[0][i];
                    let v2 = m2.mul_plain(m2.sub(residues[1][i], v1 % m2.m), inv_m1_m2);
                    let t = m3.sub(
                        m3.sub(residues[2][i], v1 % m3.m),
                        m3.mul_plain(v2 % m3.m, m1_m3),
                    );
                    let v3 = m3.mul_plain(t, inv_m1m2_m3);
                    let s = field.add(v1 % p, field.mul(v2 % p, m1_p));
                    field.add(s, field.mul(v3 % p, m1m2_p))
                })
                .collect()
        }
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, a as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(f: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        out
    }

    #[test]
    fn primes_and_roots_are_consistent() {
        for q in &PRIMES {
            assert!(crate::arith::field::is_prime(q.mont.m));
            assert!(q.mont.m > PrimeField::MODULUS_BOUND);
            let m = &q.mont;
            // a root of order 2^k has its 2^(k-1)-th power equal to -1
            let w = q.root(20);
            let half = m.pow_mont(w, 1 << 19);
            assert_eq!(m.mul(half, 1), m.m - 1);
        }
    }

    #[test]
    fn matches_schoolbook_for_all_prime_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &p in &[2u64, 9001, 1_000_000_007, (1 << 61) - 1] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..5 {
                let la = rng.gen_range(1..300);
                let lb = rng.gen_range(1..300);
                let a: Vec<u64> = (0..la).map(|_| rng.gen_range(0..p)).collect();
                let b: Vec<u64> = (0..lb).map(|_| rng.gen_range(0..p)).collect();
                assert_eq!(mul(&f, &a, &b), schoolbook(&f, &a, &b));
                assert_eq!(square(&f, &a), schoolbook(&f, &a, &a));
            }
        }
    }

    #[test]
    fn worst_case_coefficients() {
        let p = (1u64 << 61) - 1;
        let f = PrimeField::new(p).unwrap();
        let a = vec![p - 1; 1000];
        assert_eq!(mul(&f, &a, &a), schoolbook(&f, &a, &a));
    }
}
