//! Coefficients through a diagonal representation `f = Diag(a / b)`.
//!
//! With `B = b^(p-1)`, the pseudo-sections `T_r v = S_r(v B)` map the
//! rectangle of polynomials with partial degrees `<= (d_x, d_y)` into itself.
//! Their matrices `A_r` in the monomial basis give a linear representation
//! `f_N = L A_{N_l} ... A_{N_0} C` over the base-p digits of `N`.
//!
//! Basis monomial `x^i y^j` has index `i (d_y + 1) + j`. Matrices are row
//! major: row = output monomial, column = input monomial.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use log::warn;
use serde_json::json;

use crate::arith::{radix_digits, BiPoly, BigIndex, Fp, PrimeField};
use crate::error::{Error, Result};
use crate::instance::validate;
use crate::ops;

/// A Furstenberg pair with the rectangle it lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalRep {
    pub a: BiPoly,
    pub b: BiPoly,
    pub dx: usize,
    pub dy: usize,
    pub b00: Fp,
}

impl DiagonalRep {
    pub fn field(&self) -> PrimeField {
        self.b.field()
    }

    /// Dimension `(1 + d_x)(1 + d_y)` of the representation.
    pub fn dim(&self) -> usize {
        (self.dx + 1) * (self.dy + 1)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * (self.dy + 1) + j
    }
}

/// `a = y E_y(xy, y)` and `b = E(xy, y) / y`.
pub fn furstenberg(e: &BiPoly) -> Result<DiagonalRep> {
    let (d, _) = validate(e)?;
    if d == 1 {
        warn!("equation of degree 1 in y: the series is rational");
    }
    let a = e.diff_y().compose_xy_y().shift(0, 1);
    let b = e.compose_xy_y().div_y()?;
    let b00 = b.coeff(0, 0);
    debug_assert_ne!(b00, 0);
    let dx = a.deg_x().unwrap_or(0).max(b.deg_x().unwrap_or(0));
    let dy = a.deg_y().unwrap_or(0).max(b.deg_y().unwrap_or(0));
    Ok(DiagonalRep {
        b00: e.field().elem(b00),
        a,
        b,
        dx,
        dy,
    })
}

/// `B = b^(p-1)` by binary powering.
pub fn full_power(b: &BiPoly) -> BiPoly {
    b.pow(b.field().modulus() - 1)
}

/// `T_r v = S_r(v B)`.
pub fn pseudo_section(v: &BiPoly, big_b: &BiPoly, r: u64) -> Result<BiPoly> {
    let p = v.field().modulus();
    if r >= p {
        return Err(Error::BadDigit { digit: r, p });
    }
    v.mul(big_b).section(r)
}

/// Read access to the coefficients `B_{alpha, beta}` of `b^(p-1)`.
pub trait PowerSource: Send + Sync {
    fn coeff(&self, alpha: usize, beta: usize) -> u64;
}

impl PowerSource for BiPoly {
    fn coeff(&self, alpha: usize, beta: usize) -> u64 {
        BiPoly::coeff(self, alpha, beta)
    }
}

/// A square matrix over `F_p`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitMatrix {
    pub dim: usize,
    pub data: Vec<u64>,
}

impl DigitMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: u64) {
        self.data[row * self.dim + col] = v;
    }

    pub fn mul_vec(&self, field: &PrimeField, v: &[u64]) -> Vec<u64> {
        ops::charge((self.dim * self.dim) as u64);
        self.data
            .chunks_exact(self.dim)
            .map(|row| field.dot(row, v))
            .collect()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks_exact(self.dim).map(|r| r.to_vec()).collect()
    }
}

/// Matrix of `T_r` on the rectangle, reading `B` through `source`.
///
/// Entry (row `(i, j)`, column `(n, m)`) is `B_{p i + r - n, p j + r - m}`.
pub fn matrix_from_source(rep: &DiagonalRep, source: &dyn PowerSource, r: u64) -> Result<DigitMatrix> {
    let p = rep.field().modulus();
    if r >= p {
        return Err(Error::BadDigit { digit: r, p });
    }
    let (p, r) = (p as usize, r as usize);
    let mut mat = DigitMatrix::zeros(rep.dim());
    for i in 0..=rep.dx {
        for n in 0..=rep.dx {
            let Some(alpha) = (p * i + r).checked_sub(n) else {
                continue;
            };
            for j in 0..=rep.dy {
                for m in 0..=rep.dy {
                    let Some(beta) = (p * j + r).checked_sub(m) else {
                        continue;
                    };
                    let c = source.coeff(alpha, beta);
                    if c != 0 {
                        mat.set(rep.index(i, j), rep.index(n, m), c);
                    }
                }
            }
        }
    }
    Ok(mat)
}

/// Matrix of `T_r` read from a dense `B`.
pub fn matrix_for_digit(rep: &DiagonalRep, big_b: &BiPoly, r: u64) -> Result<DigitMatrix> {
    matrix_from_source(rep, big_b, r)
}

pub const DENSE_LIMIT: usize = 1 << 22;

/// Where digit matrices come from.
pub enum MatrixSource {
    /// A materialised `b^(p-1)` or a sparse diagonal table.
    Lookup(Box<dyn PowerSource>),
    /// `b^(p-1)` recomputed row by row whenever new digits are requested.
    Streamed,
}

/// The linear representation `(L, (A_r), C)` with a lazily filled digit cache.
pub struct LinearRep {
    rep: DiagonalRep,
    l: Vec<u64>,
    c: Vec<u64>,
    source: MatrixSource,
    cache: RwLock<HashMap<u64, Arc<DigitMatrix>>>,
}

impl LinearRep {
    pub fn new(rep: DiagonalRep, source: MatrixSource) -> Result<Self> {
        let field = rep.field();
        let dim = rep.dim();
        let mut l = vec![0u64; dim];
        l[0] = 1;
        let inv = field.inv(rep.b00.value())?;
        let mut c = vec![0u64; dim];
        for (i, j, v) in rep.a.terms() {
            c[rep.index(i, j)] = field.mul(v, inv);
        }
        Ok(Self {
            rep,
            l,
            c,
            source,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Dense route with `B = b^(p-1)` computed by binary powering.
    pub fn with_full_power(rep: DiagonalRep) -> Result<Self> {
        let big_b = full_power(&rep.b);
        Self::new(rep, MatrixSource::Lookup(Box::new(big_b)))
    }

    /// Dense route: materialise `b^(p-1)` when it has at most
    /// [`DENSE_LIMIT`] coefficients, otherwise stream it per request.
    pub fn dense(rep: DiagonalRep) -> Result<Self> {
        let pm1 = rep.field().modulus() as u128 - 1;
        let nx = pm1 * rep.b.deg_x().unwrap_or(0) as u128 + 1;
        let ny = pm1 * rep.b.deg_y().unwrap_or(0) as u128 + 1;
        if nx * ny <= DENSE_LIMIT as u128 {
            Self::with_full_power(rep)
        } else {
            Self::new(rep, MatrixSource::Streamed)
        }
    }

    pub fn rep(&self) -> &DiagonalRep {
        &self.rep
    }

    pub fn field(&self) -> PrimeField {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn l(&self) -> &[u64] {
        &self.l
    }

    /// Coordinates of `a / b(0,0)`.
    pub fn c(&self) -> &[u64] {
        &self.c
    }

    /// Build and cache the matrices for the given digits.
    pub fn prepare(&self, digits: &[u64]) -> Result<()> {
        let p = self.field().modulus();
        if let Some(&bad) = digits.iter().find(|&&r| r >= p) {
            return Err(Error::BadDigit { digit: bad, p });
        }
        let mut missing: Vec<u64> = {
            let cache = self.cache.read().unwrap();
            digits.iter().copied().filter(|r| !cache.contains_key(r)).collect()
        };
        missing.sort_unstable();
        missing.dedup();
        if missing.is_empty() {
            return Ok(());
        }
        let built: Vec<(u64, DigitMatrix)> = match &self.source {
            MatrixSource::Lookup(src) => missing
                .iter()
                .map(|&r| Ok((r, matrix_from_source(&self.rep, src.as_ref(), r)?)))
                .collect::<Result<_>>()?,
            MatrixSource::Streamed => streamed_matrices(&self.rep, &missing).into_iter().collect(),
        };
        let mut cache = self.cache.write().unwrap();
        for (r, m) in built {
            cache.entry(r).or_insert_with(|| Arc::new(m));
        }
        Ok(())
    }

    pub fn matrix(&self, r: u64) -> Result<Arc<DigitMatrix>> {
        if let Some(m) = self.cache.read().unwrap().get(&r) {
            return Ok(m.clone());
        }
        self.prepare(&[r])?;
        Ok(self.cache.read().unwrap()[&r].clone())
    }

    /// Fold the digits of `n`, least significant first.
    pub fn coeff(&self, n: &BigIndex) -> Result<Fp> {
        let field = self.field();
        let digits = radix_digits(n, &field);
        self.prepare(&digits)?;
        let mut w = self.c.clone();
        for &r in digits.iter().rev() {
            w = self.matrix(r)?.mul_vec(&field, &w);
        }
        Ok(field.elem(field.dot(&self.l, &w)))
    }

    /// `f_0..f_m`, sharing matrix products between indices with common low digits.
    pub fn coeffs_upto(&self, m: u64) -> Result<Vec<u64>> {
        let field = self.field();
        let p = field.modulus();
        let used: Vec<u64> = (0..p.min(m + 1)).collect();
        self.prepare(&used)?;
        let mats: Vec<Arc<DigitMatrix>> =
            used.iter().map(|&r| self.matrix(r)).collect::<Result<_>>()?;
        let mut out = vec![0u64; m as usize + 1];
        let mut stack = vec![(self.c.clone(), 0u64, 1u64)];
        while let Some((w, res, scale)) = stack.pop() {
            for (r, a) in mats.iter().enumerate() {
                let child = res + r as u64 * scale;
                if child > m {
                    break;
                }
                let v = a.mul_vec(&field, &w);
                out[child as usize] = field.dot(&self.l, &v);
                let next = scale.saturating_mul(p);
                if child.saturating_add(next) <= m {
                    stack.push((v, child, next));
                }
            }
        }
        Ok(out)
    }

    /// JSON export; all `p` digits when `digits` is `None`.
    pub fn to_json(&self, digits: Option<&[u64]>) -> Result<serde_json::Value> {
        let p = self.field().modulus();
        let wanted: Vec<u64> = match digits {
            Some(d) => d.to_vec(),
            None => (0..p).collect(),
        };
        self.prepare(&wanted)?;
        let mut a = BTreeMap::new();
        for r in wanted {
            a.insert(r, self.matrix(r)?.rows());
        }
        let a: serde_json::Map<String, serde_json::Value> =
            a.into_iter().map(|(r, rows)| (r.to_string(), json!(rows))).collect();
        Ok(json!({
            "p": p,
            "dx": self.rep.dx,
            "dy": self.rep.dy,
            "L": self.l,
            "C": self.c,
            "A": a,
        }))
    }
}

/// `f_N` through the dense diagonal pipeline.
pub fn coeff_via_diagonal(e: &BiPoly, n: &BigIndex) -> Result<Fp> {
    let rep = furstenberg(e)?;
    LinearRep::dense(rep)?.coeff(n)
}

/// Digit matrices from `B = b^(p-1)` generated one x-row at a time.
///
/// Writing `b = sum_k b_k(y) x^k` and `B = sum_alpha B_alpha(y) x^alpha`, the
/// identity `b B = b^p = b(x^p, y^p)` gives
/// `b_0 B_alpha = [x^alpha] b(x^p, y^p) - sum_{k>=1} b_k B_{alpha-k}`,
/// an exact division by `b_0(y)`, whose constant term is `b(0,0) != 0`.
/// Only the last `deg_x b` rows are kept, so memory stays `O(p)`.
pub fn streamed_matrices(rep: &DiagonalRep, digits: &[u64]) -> Vec<(u64, DigitMatrix)> {
    let field = rep.field();
    let p = field.modulus() as usize;
    let b = &rep.b;
    let dxb = b.deg_x().unwrap_or(0);
    let dyb = b.deg_y().unwrap_or(0);
    let rows_b: Vec<Vec<u64>> = (0..=dxb).map(|k| b.x_coeff(k).coeffs().to_vec()).collect();
    let len = (p - 1) * dyb + 1;
    let n_rows = (p - 1) * dxb + 1;
    let b0 = &rows_b[0];
    let inv_b00 = field.inv(b0[0]).expect("b(0,0) is a unit");

    let mut mats: Vec<(u64, DigitMatrix)> =
        digits.iter().map(|&r| (r, DigitMatrix::zeros(rep.dim()))).collect();
    let mut history: std::collections::VecDeque<Vec<u64>> = std::collections::VecDeque::new();
    let mut acc = vec![0u128; len];
    for alpha in 0..n_rows {
        acc.iter_mut().for_each(|a| *a = 0);
        let mut terms = 0usize;
        for k in 1..=dxb.min(alpha) {
            let prev = &history[history.len() - k];
            for (s, &bk) in rows_b[k].iter().enumerate() {
                if bk == 0 {
                    continue;
                }
                for (t, &v) in prev.iter().enumerate().take(len - s) {
                    acc[t + s] += bk as u128 * v as u128;
                }
                terms += 1;
                if terms == crate::arith::field::LAZY_TERMS - 1 {
                    for a in acc.iter_mut() {
                        *a = field.reduce_u128(*a) as u128;
                    }
                    terms = 0;
                }
            }
        }
        ops::charge((dxb.min(alpha) * (dyb + 1) * len) as u64);
        let mut row = vec![0u64; len];
        // numerator = [x^alpha] b(x^p, y^p) - sum above
        for t in 0..len {
            let mut v = field.neg(field.reduce_u128(acc[t]));
            if alpha % p == 0 && t % p == 0 {
                v = field.add(v, b.coeff(alpha / p, t / p));
            }
            row[t] = v;
        }
        // series division by b_0(y), exact since B_alpha is a polynomial
        for t in 0..len {
            let mut s: u128 = row[t] as u128;
            for (q, &c) in b0.iter().enumerate().skip(1) {
                if q > t {
                    break;
                }
                s += c as u128 * field.neg(row[t - q]) as u128;
            }
            row[t] = field.mul(field.reduce_u128(s), inv_b00);
        }
        ops::charge((len * b0.len()) as u64);
        scatter_row(rep, alpha, &row, &mut mats);
        history.push_back(row);
        if history.len() > dxb {
            history.pop_front();
        }
    }
    mats
}

fn scatter_row(rep: &DiagonalRep, alpha: usize, row: &[u64], mats: &mut [(u64, DigitMatrix)]) {
    let p = rep.field().modulus() as usize;
    for (r, mat) in mats.iter_mut() {
        let r = *r as usize;
        for n in 0..=rep.dx {
            let s = alpha + n;
            if s < r || (s - r) % p != 0 {
                continue;
            }
            let i = (s - r) / p;
            if i > rep.dx {
                continue;
            }
            for j in 0..=rep.dy {
                for m in 0..=rep.dy {
                    let Some(beta) = (p * j + r).checked_sub(m) else {
                        continue;
                    };
                    if let Some(&c) = row.get(beta) {
                        if c != 0 {
                            mat.set(rep.index(i, j), rep.index(n, m), c);
                        }
                    }
                }
            }
        }
    }
}
