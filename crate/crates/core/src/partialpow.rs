//! Partial powering: only the useful diagonals of `b^(p-1)`.
//!
//! After `x -> x/t, y -> t`, the diagonals of `B = b^(p-1)` become the
//! t-coefficients of `B(x/t, t) = b(x^p/t^p, t^p) / b(x/t, t)`. The quotient
//! expands as `sum_u c_u(x) t^u` where the `c_u` satisfy a linear recurrence
//! of order `d' = delta_- + delta_+`, so any one of them costs a binary
//! powering of `t` modulo the reciprocal characteristic polynomial.
//!
//! Everything is fraction-free: with `P(t) = t^(delta_-) b(x/t, t)` and
//! `P_0 = P(0)`, the coefficients of `1/P` are `q_n / P_0^(n+1)` with
//! `q_0 = 1` and `q_n = -sum_{k>=1} P_k P_0^(k-1) q_{n-k}`, and
//! `c_u = q_{u - delta_-} / P_0^(u - delta_- + 1)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::{BiPoly, BigIndex, Fp, PrimeField, RationalFunction, UniPoly, YModulus};
use crate::diagonal::{furstenberg, LinearRep, MatrixSource, PowerSource};
use crate::error::{Error, Result};

/// Past the end of the known stretch, the recurrence is cheaper than a new
/// powering for this many steps.
const RECURRENCE_REACH: usize = 64;

/// `b(x/t, t) = sum_{v = -delta_-}^{delta_+} b_v(x) t^v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLaurentPoly {
    pub delta_minus: usize,
    pub delta_plus: usize,
    /// `coeffs[v + delta_minus] = b_v`.
    pub coeffs: Vec<UniPoly>,
}

impl TLaurentPoly {
    pub fn get(&self, v: i64) -> UniPoly {
        let k = v + self.delta_minus as i64;
        if k < 0 || k as usize >= self.coeffs.len() {
            return UniPoly::zero(self.field());
        }
        self.coeffs[k as usize].clone()
    }

    pub fn field(&self) -> PrimeField {
        self.coeffs[0].field()
    }

    /// `d' = delta_- + delta_+`.
    pub fn order(&self) -> usize {
        self.delta_minus + self.delta_plus
    }
}

/// The diagonals `b_v(x) = sum_i b_{i, i+v} x^i` of a nonzero `b`.
pub fn t_laurent(b: &BiPoly) -> TLaurentPoly {
    assert!(!b.is_zero(), "zero polynomial has no t-expansion");
    let lo = b.terms().map(|(i, j, _)| j as i64 - i as i64).min().unwrap();
    let hi = b.terms().map(|(i, j, _)| j as i64 - i as i64).max().unwrap();
    let field = b.field();
    let width = (hi - lo + 1) as usize;
    let mut raw = vec![vec![0u64; b.nx()]; width];
    for (i, j, c) in b.terms() {
        raw[(j as i64 - i as i64 - lo) as usize][i] = c;
    }
    TLaurentPoly {
        delta_minus: (-lo).max(0) as usize,
        delta_plus: hi.max(0) as usize,
        coeffs: pad_to_window(field, raw, lo, hi),
    }
}

// b_v for v in [min(lo, 0), max(hi, 0)], padded with zeros when the window
// does not contain 0
fn pad_to_window(field: PrimeField, raw: Vec<Vec<u64>>, lo: i64, hi: i64) -> Vec<UniPoly> {
    let start = lo.min(0);
    let end = hi.max(0);
    (start..=end)
        .map(|v| {
            if v < lo || v > hi {
                UniPoly::zero(field)
            } else {
                UniPoly::from_coeffs(field, raw[(v - lo) as usize].clone())
            }
        })
        .collect()
}

/// Sorted `([-d_y, d_x] + pZ) ∩ [(1-p) delta_-, (p-1) delta_+]`.
pub fn useful_deltas(dx: usize, dy: usize, delta_minus: usize, delta_plus: usize, p: u64) -> Vec<i64> {
    let p = p as i64;
    let lo = (1 - p) * delta_minus as i64;
    let hi = (p - 1) * delta_plus as i64;
    let width = (dx + dy) as i64;
    (lo..=hi)
        .filter(|&delta| width + 1 >= p || (delta + dy as i64).rem_euclid(p) <= width)
        .collect()
}

/// Fraction-free numerators `q_n` of `1 / P(t)`.
struct QSequence {
    field: PrimeField,
    order: usize,
    p0: UniPoly,
    // P_k P_0^(k-1) for k = 1..=d'
    weights: Vec<UniPoly>,
    // reciprocal characteristic polynomial, when d' > 0
    modulus: Option<YModulus>,
    initial: Vec<UniPoly>,
}

impl QSequence {
    fn new(tl: &TLaurentPoly) -> Self {
        let field = tl.field();
        let order = tl.order();
        let pk: Vec<UniPoly> = (0..=order).map(|k| tl.get(k as i64 - tl.delta_minus as i64)).collect();
        let p0 = pk[0].clone();
        let mut weights = Vec::with_capacity(order);
        let mut p0_pow = UniPoly::one(field);
        for k in 1..=order {
            weights.push(pk[k].mul(&p0_pow));
            p0_pow = p0_pow.mul(&p0);
        }
        let modulus = (order > 0).then(|| {
            let rev: Vec<UniPoly> = (0..=order).map(|m| pk[order - m].clone()).collect();
            YModulus::from_coeffs(field, rev).expect("P_0 is nonzero")
        });
        let mut seq = Self {
            field,
            order,
            p0,
            weights,
            modulus,
            initial: vec![UniPoly::one(field)],
        };
        let init_len = (2 * order).max(1);
        while seq.initial.len() < init_len {
            let next = seq.step(&seq.initial);
            seq.initial.push(next);
        }
        seq
    }

    /// Next term from the trailing `d'` terms of `window`.
    fn step(&self, window: &[UniPoly]) -> UniPoly {
        let n = window.len();
        let mut acc = UniPoly::zero(self.field);
        for k in 1..=self.order.min(n) {
            acc = acc.add(&self.weights[k - 1].mul(&window[n - k]));
        }
        acc.neg()
    }

    /// `q_n, ..., q_{n + d' - 1}` from `t^n mod P*(t)` (requires `n >= d'`).
    fn fiduccia(&self, n: usize) -> Vec<UniPoly> {
        let d = self.order;
        let m = self.modulus.as_ref().expect("positive order");
        let r = m.pow_y(n as u64);
        debug_assert_eq!(r.exponent as usize, n - d + 1);
        // e_{n+i} = sum_j r_j q_{j+i} P_0^(d-1-j) / P_0^(n+i+1)
        let p0_pows: Vec<UniPoly> = (0..d).map(|j| self.p0.pow((d - 1 - j) as u64)).collect();
        (0..d)
            .map(|i| {
                let mut acc = UniPoly::zero(self.field);
                for j in 0..d {
                    if r.coeffs[j].is_zero() {
                        continue;
                    }
                    let small = self.initial[j + i].mul(&p0_pows[j]);
                    acc = acc.add(&r.coeffs[j].mul(&small));
                }
                acc
            })
            .collect()
    }

    /// `q_n` for every requested index.
    fn values(&self, needed: &BTreeSet<usize>) -> BTreeMap<usize, UniPoly> {
        let mut out = BTreeMap::new();
        if self.order == 0 {
            for &n in needed {
                let q = if n == 0 { UniPoly::one(self.field) } else { UniPoly::zero(self.field) };
                out.insert(n, q);
            }
            return out;
        }
        // current stretch of consecutive values q_{start}, q_{start+1}, ...
        let mut start = 0usize;
        let mut stretch: Vec<UniPoly> = self.initial.clone();
        for &n in needed {
            let end = start + stretch.len();
            if n < start || n >= end + RECURRENCE_REACH {
                if n < self.initial.len() {
                    start = 0;
                    stretch = self.initial.clone();
                } else {
                    start = n;
                    stretch = self.fiduccia(n);
                }
            }
            while start + stretch.len() <= n {
                let next = self.step(&stretch[stretch.len() - self.order..]);
                stretch.push(next);
                if stretch.len() > 4 * self.order + RECURRENCE_REACH {
                    let drop = stretch.len() - self.order;
                    stretch.drain(..drop);
                    start += drop;
                }
            }
            out.insert(n, stretch[n - start].clone());
        }
        out
    }
}

/// `c_u = [t^u] 1 / b(x/t, t)` for `u >= delta_-`.
pub fn c_coefficient(tl: &TLaurentPoly, u: i64) -> Result<RationalFunction> {
    let lo = tl.delta_minus as i64;
    if u < lo {
        return Err(Error::IndexTooLow { index: u, min: lo });
    }
    let seq = QSequence::new(tl);
    let n = (u - lo) as usize;
    let q = seq.values(&BTreeSet::from([n])).remove(&n).unwrap();
    RationalFunction::new(q, seq.p0.pow(n as u64 + 1))
}

/// `c_u` by plain recurrence unrolling, with rational coefficients.
pub fn c_coefficient_unrolled(tl: &TLaurentPoly, u: i64) -> Result<RationalFunction> {
    let lo = tl.delta_minus as i64;
    if u < lo {
        return Err(Error::IndexTooLow { index: u, min: lo });
    }
    let d = tl.order();
    let pk: Vec<RationalFunction> = (0..=d)
        .map(|k| RationalFunction::from_poly(tl.get(k as i64 - lo)))
        .collect();
    let inv_p0 = RationalFunction::from_poly(UniPoly::one(tl.field())).div(&pk[0])?;
    let mut e: Vec<RationalFunction> = vec![inv_p0.clone()];
    let n = (u - lo) as usize;
    for m in 1..=n {
        let mut acc = RationalFunction::from_poly(UniPoly::zero(tl.field()));
        for k in 1..=d.min(m) {
            acc = acc.add(&pk[k].mul(&e[m - k]));
        }
        e.push(acc.neg().mul(&inv_p0));
    }
    Ok(e.pop().unwrap())
}

/// The `delta`-diagonal of `b^(p-1)` from `c_u` values already at hand.
fn assemble(
    tl: &TLaurentPoly,
    seq: &QSequence,
    q: &BTreeMap<usize, UniPoly>,
    delta: i64,
    p: i64,
) -> Result<UniPoly> {
    let field = tl.field();
    let lo = tl.delta_minus as i64;
    let terms: Vec<(usize, i64)> = (-(tl.delta_minus as i64)..=tl.delta_plus as i64)
        .filter_map(|v| {
            let u = delta - p * v;
            (u >= lo && !tl.get(v).is_zero()).then(|| ((u - lo) as usize, v))
        })
        .collect();
    let Some(k) = terms.iter().map(|&(n, _)| n + 1).max() else {
        return Ok(UniPoly::zero(field));
    };
    let mut num = UniPoly::zero(field);
    for &(n, v) in &terms {
        // the exponent gap K - n - 1 is a multiple of p, so the power is a
        // Frobenius image P_0(x^p)^j
        let gap = k - n - 1;
        let scale = if gap % p as usize == 0 {
            seq.p0.pow((gap / p as usize) as u64).inflate(p as usize)
        } else {
            seq.p0.pow(gap as u64)
        };
        let bv = tl.get(v).inflate(p as usize);
        num = num.add(&q[&n].mul(&bv.mul(&scale)));
    }
    num.exact_div(&seq.p0.pow(k as u64)).map_err(|_| {
        Error::NonPolynomialResult(format!("diagonal {delta}: denominator does not cancel"))
    })
}

/// Indices `n = u - delta_-` whose `q_n` the given diagonals need.
fn needed_indices(tl: &TLaurentPoly, deltas: &[i64], p: i64) -> BTreeSet<usize> {
    let lo = tl.delta_minus as i64;
    let mut needed = BTreeSet::new();
    for &delta in deltas {
        for v in -lo..=tl.delta_plus as i64 {
            let u = delta - p * v;
            if u >= lo && !tl.get(v).is_zero() {
                needed.insert((u - lo) as usize);
            }
        }
    }
    needed
}

/// `pi_delta = sum_{u + p v = delta} c_u(x) b_v(x^p)`, the `delta`-diagonal of `b^(p-1)`.
pub fn partial_power(b: &BiPoly, delta: i64) -> Result<UniPoly> {
    let p = b.field().modulus() as i64;
    let tl = t_laurent(b);
    if delta < (1 - p) * tl.delta_minus as i64 || delta > (p - 1) * tl.delta_plus as i64 {
        return Ok(UniPoly::zero(b.field()));
    }
    let seq = QSequence::new(&tl);
    let q = seq.values(&needed_indices(&tl, &[delta], p));
    assemble(&tl, &seq, &q, delta, p)
}

/// The diagonals `pi_delta` of `b^(p-1)` for the useful offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseDiagonalTable {
    deltas: Vec<i64>,
    diagonals: Vec<UniPoly>,
}

impl SparseDiagonalTable {
    pub fn deltas(&self) -> &[i64] {
        &self.deltas
    }

    pub fn get(&self, delta: i64) -> Option<&UniPoly> {
        self.deltas.binary_search(&delta).ok().map(|k| &self.diagonals[k])
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &UniPoly)> {
        self.deltas.iter().copied().zip(self.diagonals.iter())
    }
}

impl PowerSource for SparseDiagonalTable {
    fn coeff(&self, alpha: usize, beta: usize) -> u64 {
        self.get(beta as i64 - alpha as i64).map_or(0, |pi| pi.coeff(alpha))
    }
}

/// Table of `pi_delta` for every useful `delta` of the rectangle `(d_x, d_y)`.
pub fn sparse_power(b: &BiPoly, dx: usize, dy: usize) -> Result<SparseDiagonalTable> {
    let p = b.field().modulus();
    let tl = t_laurent(b);
    let deltas = useful_deltas(dx, dy, tl.delta_minus, tl.delta_plus, p);
    let seq = QSequence::new(&tl);
    let q = seq.values(&needed_indices(&tl, &deltas, p as i64));
    let diagonals = deltas
        .iter()
        .map(|&delta| assemble(&tl, &seq, &q, delta, p as i64))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseDiagonalTable { deltas, diagonals })
}

/// Linear representation whose digit matrices read the sparse table.
pub fn linear_rep_fast(e: &BiPoly) -> Result<LinearRep> {
    let rep = furstenberg(e)?;
    let table = sparse_power(&rep.b, rep.dx, rep.dy)?;
    LinearRep::new(rep, MatrixSource::Lookup(Box::new(table)))
}

/// `f_N` through the diagonal pipeline driven by partial powering.
pub fn coeff_via_diagonal_fast(e: &BiPoly, n: &BigIndex) -> Result<Fp> {
    linear_rep_fast(e)?.coeff(n)
}
