//! Baseline series expansions and a Lucas-theorem Catalan oracle.
//!
//! These are independent of the logarithmic-time pipelines and serve as
//! ground truth for them.

use crate::arith::{BiPoly, BigIndex, Fp, PrimeField, UniPoly};
use crate::error::Result;
use crate::instance::validate;

/// The root `f` of `E` modulo `x^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPrefix {
    pub prefix: UniPoly,
    pub n: usize,
}

impl SeriesPrefix {
    pub fn coeff(&self, k: usize) -> u64 {
        assert!(k < self.n, "coefficient beyond the computed precision");
        self.prefix.coeff(k)
    }
}

/// Newton iteration `y <- y - E(x,y) / E_y(x,y)`, doubling the precision each step.
pub fn expand_newton(e: &BiPoly, n: usize) -> Result<SeriesPrefix> {
    expand_newton_counted(e, n).map(|(s, _)| s)
}

/// Like [`expand_newton`], also returning the number of Newton steps.
pub fn expand_newton_counted(e: &BiPoly, n: usize) -> Result<(SeriesPrefix, u32)> {
    validate(e)?;
    let field = e.field();
    let ey = e.diff_y();
    let mut y = UniPoly::zero(field);
    let mut prec = 1;
    let mut steps = 0;
    while prec < n {
        prec = (2 * prec).min(n);
        let num = e.eval_y_series(&y, prec);
        let den = ey.eval_y_series(&y, prec);
        let inv = den.series_inv(prec)?;
        y = y.sub(&num.mul_trunc(&inv, prec));
        steps += 1;
    }
    Ok((SeriesPrefix { prefix: y, n }, steps))
}

/// Coefficient-by-coefficient solve, `O(n^2 d)`.
///
/// For `k >= 2` the coefficient of `x^m` in `f^k` only involves `f_1..f_{m-1}`
/// because `f(0) = 0`, so `f_m` is determined by a single linear condition.
pub fn expand_undetermined(e: &BiPoly, n: usize) -> Result<SeriesPrefix> {
    let (d, _) = validate(e)?;
    let field = e.field();
    let inv_e01 = field.inv(e.coeff(0, 1))?;
    let mut f = vec![0u64; n];
    // pw[k][m] = [x^m] f^k
    let mut pw = vec![vec![0u64; n]; d + 1];
    if n > 0 {
        pw[0][0] = 1;
    }
    for m in 1..n {
        for k in 2..=d {
            let mut acc = 0u64;
            for i in 1..m {
                acc = field.add(acc, field.mul(f[i], pw[k - 1][m - i]));
            }
            pw[k][m] = acc;
        }
        let mut s = 0u64;
        for (i, j, c) in e.terms() {
            if i > m || (i == 0 && j == 1) {
                continue;
            }
            s = field.add(s, field.mul(c, pw[j][m - i]));
        }
        f[m] = field.mul(field.neg(s), inv_e01);
        pw[1][m] = f[m];
    }
    Ok(SeriesPrefix {
        prefix: UniPoly::from_coeffs(field, f),
        n,
    })
}

/// `C_{N-1} mod p`, the coefficient of `x^N` in the root of `y - x - y^2`.
///
/// Uses `C_n = binom(2n, n) - binom(2n, n+1)` with both binomials reduced by
/// Lucas' theorem over the base-p digits.
pub fn catalan_mod_p(big_n: &BigIndex, field: PrimeField) -> Fp {
    let p = field.modulus();
    let Some(n) = big_n.sub_small(1) else {
        return field.elem(0);
    };
    let nd = n.digits_lsf(p);
    let mut two_n = Vec::with_capacity(nd.len() + 1);
    let mut carry = 0;
    for &dg in &nd {
        let t = 2 * dg + carry;
        two_n.push(t % p);
        carry = t / p;
    }
    if carry > 0 {
        two_n.push(carry);
    }
    let mut n_plus_1 = nd.clone();
    let mut k = 0;
    loop {
        if k == n_plus_1.len() {
            n_plus_1.push(1);
            break;
        }
        if n_plus_1[k] + 1 == p {
            n_plus_1[k] = 0;
            k += 1;
        } else {
            n_plus_1[k] += 1;
            break;
        }
    }
    let a = lucas(&field, &two_n, &nd);
    let b = lucas(&field, &two_n, &n_plus_1);
    field.elem(field.sub(a, b))
}

fn lucas(field: &PrimeField, top: &[u64], bottom: &[u64]) -> u64 {
    if bottom.len() > top.len() && bottom[top.len()..].iter().any(|&d| d != 0) {
        return 0;
    }
    let mut acc = 1;
    for (i, &t) in top.iter().enumerate() {
        let b = bottom.get(i).copied().unwrap_or(0);
        if b > t {
            return 0;
        }
        acc = field.mul(acc, small_binom(field, t, b));
    }
    acc
}

fn small_binom(field: &PrimeField, n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut num = 1;
    let mut den = 1;
    for i in 0..k {
        num = field.mul(num, n - i);
        den = field.mul(den, i + 1);
    }
    field.mul(num, field.inv(den).expect("digits below p"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_equation;
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> BiPoly {
        let f = PrimeField::new(5).unwrap();
        BiPoly::from_terms(f, &[(1, 0, 1), (0, 1, 1), (0, 3, -1)])
    }

    fn quartic() -> BiPoly {
        let f = PrimeField::new(11).unwrap();
        BiPoly::from_terms(
            f,
            &[
                (1, 0, -1),
                (0, 1, 1),
                (1, 1, 1),
                (0, 2, -1),
                (2, 2, -1),
                (0, 3, -1),
                (0, 4, 1),
                (1, 4, 1),
            ],
        )
    }

    #[test]
    fn displayed_series() {
        let s = expand_newton(&toy(), 12).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(
            s.prefix,
            UniPoly::from_i64(f5, &[0, -1, 0, -1, 0, 2, 0, -2, 0, 0, 0, 2])
        );
        let q = expand_newton(&quartic(), 12).unwrap();
        let f11 = PrimeField::new(11).unwrap();
        assert_eq!(
            q.prefix,
            UniPoly::from_i64(f11, &[0, 1, 0, 1, 1, 3, 5, 2, 4, -1, -1, -2])
        );
        let lin = BiPoly::from_terms(f11, &[(0, 1, 1), (1, 0, -1)]);
        assert_eq!(expand_newton(&lin, 40).unwrap().prefix, UniPoly::monomial(f11, 1, 1));
    }

    #[test]
    fn undetermined_examples() {
        let s = expand_undetermined(&toy(), 12).unwrap();
        assert_eq!(s.coeff(3), 4);
        assert!(expand_undetermined(&toy(), 1).unwrap().prefix.is_zero());
    }

    #[test]
    fn newton_step_count_is_logarithmic() {
        for n in [1usize, 2, 3, 4, 5, 100, 1024, 1025] {
            let (_, steps) = expand_newton_counted(&toy(), n).unwrap();
            assert_eq!(steps, (n as f64).log2().ceil() as u32, "n = {n}");
        }
    }

    #[test]
    fn expansions_agree_and_solve_the_equation() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..30 {
            let p = [2u64, 3, 5, 7, 11, 13][rng.gen_range(0..6)];
            let f = PrimeField::new(p).unwrap();
            let (d, h) = (rng.gen_range(1..=4), rng.gen_range(0..=3));
            let e = random_equation(&mut rng, f, d, h);
            let a = expand_newton(&e, 300).unwrap();
            let b = expand_undetermined(&e, 300).unwrap();
            assert_eq!(a, b);
            assert!(e.eval_y_series(&a.prefix, 300).is_zero());
            assert_eq!(a.prefix.coeff(0), 0);
            // Frobenius: f(x)^p = f(x^p)
            assert_eq!(
                a.prefix.pow(p).truncate(300),
                a.prefix.inflate(p as usize).truncate(300)
            );
        }
    }

    fn catalan_exact(n: u64) -> BigUint {
        // C_n = binom(2n, n) / (n + 1)
        let mut c = BigUint::from(1u32);
        for k in 0..n {
            c = c * (2 * (2 * k + 1)) / (k + 2);
        }
        c
    }

    #[test]
    fn catalan_against_exact_integers() {
        assert_eq!(catalan_mod_p(&5u64.into(), PrimeField::new(7).unwrap()).value(), 0);
        assert_eq!(catalan_mod_p(&1u64.into(), PrimeField::new(7).unwrap()).value(), 1);
        for &p in &[2u64, 3, 5, 7, 101] {
            let f = PrimeField::new(p).unwrap();
            for big_n in 1..400u64 {
                let exact = catalan_exact(big_n - 1) % p;
                assert_eq!(
                    BigUint::from(catalan_mod_p(&big_n.into(), f).value()),
                    exact,
                    "p={p} N={big_n}"
                );
            }
        }
    }

    #[test]
    fn catalan_matches_series() {
        let f = PrimeField::new(7).unwrap();
        let e = BiPoly::from_terms(f, &[(0, 1, 1), (1, 0, -1), (0, 2, -1)]);
        let s = expand_newton(&e, 200).unwrap();
        for n in 1..200u64 {
            assert_eq!(catalan_mod_p(&n.into(), f).value(), s.coeff(n as usize));
        }
    }
}
