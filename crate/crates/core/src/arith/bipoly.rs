//! Dense bivariate polynomials over `F_p`.
//!
//! Coefficients live in a `(deg_x + 1) x (deg_y + 1)` grid stored y-major:
//! entry `j * nx + i` is the coefficient of `x^i y^j`. Products go through
//! Kronecker substitution `y -> x^s` and a single univariate product.

use std::fmt;

use super::field::PrimeField;
use super::upoly::{mul_slices, UniPoly};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiPoly {
    field: PrimeField,
    nx: usize,
    ny: usize,
    grid: Vec<u64>,
}

impl BiPoly {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            nx: 0,
            ny: 0,
            grid: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::from_grid(field, 1, 1, vec![1])
    }

    /// Build from a y-major grid of residues; the bounds are then tightened.
    pub fn from_grid(field: PrimeField, nx: usize, ny: usize, grid: Vec<u64>) -> Self {
        assert_eq!(grid.len(), nx * ny);
        let mut out = Self {
            field,
            nx,
            ny,
            grid,
        };
        out.normalize();
        out
    }

    /// Build from `(i, j, c)` triples meaning `c x^i y^j`; repeated monomials add up.
    pub fn from_terms(field: PrimeField, terms: &[(usize, usize, i64)]) -> Self {
        let nx = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let ny = terms.iter().map(|t| t.1 + 1).max().unwrap_or(0);
        let mut grid = vec![0u64; nx * ny];
        for &(i, j, c) in terms {
            let e = &mut grid[j * nx + i];
            *e = field.add(*e, field.from_i64(c));
        }
        Self::from_grid(field, nx, ny, grid)
    }

    /// `sum_j rows[j](x) y^j`.
    pub fn from_y_coeffs(field: PrimeField, rows: &[UniPoly]) -> Self {
        let nx = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let ny = rows.len();
        let mut grid = vec![0u64; nx * ny];
        for (j, r) in rows.iter().enumerate() {
            grid[j * nx..j * nx + r.len()].copy_from_slice(r.coeffs());
        }
        Self::from_grid(field, nx, ny, grid)
    }

    fn normalize(&mut self) {
        // drop zero rows at the top (in y)
        while self.ny > 0 && self.grid[(self.ny - 1) * self.nx..].iter().all(|&c| c == 0) {
            self.ny -= 1;
            self.grid.truncate(self.ny * self.nx);
        }
        if self.ny == 0 {
            self.nx = 0;
            self.grid.clear();
            return;
        }
        let mut nx = self.nx;
        while nx > 0 && (0..self.ny).all(|j| self.grid[j * self.nx + nx - 1] == 0) {
            nx -= 1;
        }
        if nx != self.nx {
            let mut g = Vec::with_capacity(nx * self.ny);
            for j in 0..self.ny {
                g.extend_from_slice(&self.grid[j * self.nx..j * self.nx + nx]);
            }
            self.grid = g;
            self.nx = nx;
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.grid.is_empty()
    }

    /// Partial degree in x, `None` for zero.
    pub fn deg_x(&self) -> Option<usize> {
        self.nx.checked_sub(1)
    }

    /// Partial degree in y, `None` for zero.
    pub fn deg_y(&self) -> Option<usize> {
        self.ny.checked_sub(1)
    }

    /// Grid width `deg_x + 1` (0 for zero).
    pub fn nx(&self) -> usize {
        self.nx
    }

    /// Grid height `deg_y + 1` (0 for zero).
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn grid(&self) -> &[u64] {
        &self.grid
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        if i < self.nx && j < self.ny {
            self.grid[j * self.nx + i]
        } else {
            0
        }
    }

    /// Coefficient of `y^j` as a polynomial in x.
    pub fn y_coeff(&self, j: usize) -> UniPoly {
        if j >= self.ny {
            return UniPoly::zero(self.field);
        }
        UniPoly::from_coeffs(self.field, self.grid[j * self.nx..(j + 1) * self.nx].to_vec())
    }

    pub fn y_coeffs(&self) -> Vec<UniPoly> {
        (0..self.ny).map(|j| self.y_coeff(j)).collect()
    }

    /// Coefficient of `x^i` as a polynomial in y.
    pub fn x_coeff(&self, i: usize) -> UniPoly {
        let v = (0..self.ny).map(|j| self.coeff(i, j)).collect();
        UniPoly::from_coeffs(self.field, v)
    }

    /// Nonzero terms `(i, j, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let nx = self.nx;
        self.grid
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (k % nx, k / nx, c))
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let f = &self.field;
        (0..self.ny)
            .rev()
            .fold(0, |acc, j| f.add(f.mul(acc, y), self.y_coeff(j).eval(x)))
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        let nx = self.nx.max(other.nx);
        let ny = self.ny.max(other.ny);
        let mut grid = vec![0u64; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                grid[j * nx + i] = op(self.coeff(i, j), other.coeff(i, j));
            }
        }
        Self::from_grid(self.field, nx, ny, grid)
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        self.zip_with(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        self.zip_with(other, |a, b| f.sub(a, b))
    }

    pub fn neg(&self) -> Self {
        let f = self.field;
        let grid = self.grid.iter().map(|&c| f.neg(c)).collect();
        Self::from_grid(f, self.nx, self.ny, grid)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let grid = self.grid.iter().map(|&a| f.mul(a, c)).collect();
        Self::from_grid(f, self.nx, self.ny, grid)
    }

    /// Product by Kronecker substitution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let stride = self.nx + other.nx - 1;
        let a = self.kronecker_pack(stride);
        let b = other.kronecker_pack(stride);
        let w = mul_slices(&self.field, &a, &b);
        Self::kronecker_unpack(self.field, &w, stride, self.ny + other.ny - 1)
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub(crate) fn kronecker_pack(&self, stride: usize) -> Vec<u64> {
        let mut v = vec![0u64; (self.ny - 1) * stride + self.nx];
        for j in 0..self.ny {
            v[j * stride..j * stride + self.nx]
                .copy_from_slice(&self.grid[j * self.nx..(j + 1) * self.nx]);
        }
        v
    }

    pub(crate) fn kronecker_unpack(field: PrimeField, w: &[u64], stride: usize, ny: usize) -> Self {
        let mut grid = vec![0u64; stride * ny];
        for j in 0..ny {
            let lo = j * stride;
            let hi = (lo + stride).min(w.len());
            if lo < hi {
                grid[j * stride..j * stride + (hi - lo)].copy_from_slice(&w[lo..hi]);
            }
        }
        Self::from_grid(field, stride, ny, grid)
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

    /// Simultaneous section: result `(k, l)` is entry `(pk + r, pl + r)`.
    pub fn section(&self, r: u64) -> Result<Self> {
        let p = self.field.modulus();
        if r >= p {
            return Err(Error::BadDigit { digit: r, p });
        }
        let (r, p) = (r as usize, p as usize);
        if self.nx <= r || self.ny <= r {
            return Ok(Self::zero(self.field));
        }
        let nx = (self.nx - 1 - r) / p + 1;
        let ny = (self.ny - 1 - r) / p + 1;
        let mut grid = vec![0u64; nx * ny];
        for l in 0..ny {
            for k in 0..nx {
                grid[l * nx + k] = self.coeff(p * k + r, p * l + r);
            }
        }
        Ok(Self::from_grid(self.field, nx, ny, grid))
    }

    /// The substitution `x -> x y`, i.e. `E(xy, y)`.
    pub fn compose_xy_y(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let nx = self.nx;
        let ny = self.ny + self.nx - 1;
        let mut grid = vec![0u64; nx * ny];
        for (i, j, c) in self.terms() {
            grid[(i + j) * nx + i] = c;
        }
        Self::from_grid(self.field, nx, ny, grid)
    }

    /// Partial derivative in y.
    pub fn diff_y(&self) -> Self {
        if self.ny <= 1 {
            return Self::zero(self.field);
        }
        let f = self.field;
        let nx = self.nx;
        let mut grid = vec![0u64; nx * (self.ny - 1)];
        for j in 1..self.ny {
            let m = j as u64 % f.modulus();
            for i in 0..nx {
                grid[(j - 1) * nx + i] = f.mul(self.grid[j * nx + i], m);
            }
        }
        Self::from_grid(f, nx, self.ny - 1, grid)
    }

    /// Multiply by `x^a y^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let nx = self.nx + a;
        let ny = self.ny + b;
        let mut grid = vec![0u64; nx * ny];
        for (i, j, c) in self.terms() {
            grid[(j + b) * nx + i + a] = c;
        }
        Self::from_grid(self.field, nx, ny, grid)
    }

    /// Exact division by `y`; fails if the polynomial has a term free of y.
    pub fn div_y(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        if self.grid[..self.nx].iter().any(|&c| c != 0) {
            return Err(Error::InvalidInput(
                "polynomial is not divisible by y".into(),
            ));
        }
        Ok(Self::from_grid(
            self.field,
            self.nx,
            self.ny - 1,
            self.grid[self.nx..].to_vec(),
        ))
    }

    /// `E(x, g(x))` for a univariate g, by Horner in y.
    pub fn eval_y_poly(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero(self.field);
        for j in (0..self.ny).rev() {
            acc = acc.mul(g).add(&self.y_coeff(j));
        }
        acc
    }

    /// `E(x, g(x)) mod x^n`, by Horner in y with truncated products.
    pub fn eval_y_series(&self, g: &UniPoly, n: usize) -> UniPoly {
        let mut acc = UniPoly::zero(self.field);
        for j in (0..self.ny).rev() {
            acc = acc.mul_trunc(g, n).add(&self.y_coeff(j).truncate(n));
        }
        acc
    }

    /// Diagonal `sum_i c_{i,i} x^i`.
    pub fn diagonal(&self) -> UniPoly {
        let n = self.nx.min(self.ny);
        UniPoly::from_coeffs(self.field, (0..n).map(|i| self.coeff(i, i)).collect())
    }
}

/// Product of two bivariate polynomials.
pub fn bipoly_mul(u: &BiPoly, v: &BiPoly) -> BiPoly {
    u.mul(v)
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly(p={}, {})", self.field.modulus(), self)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if c != 1 || (i == 0 && j == 0) {
                parts.push(c.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("x".into()),
                i => parts.push(format!("x^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("y".into()),
                j => parts.push(format!("y^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
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
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(u: &BiPoly, v: &BiPoly) -> BiPoly {
        let f = u.field();
        let mut terms = Vec::new();
        for (i1, j1, c1) in u.terms() {
            for (i2, j2, c2) in v.terms() {
                terms.push((i1 + i2, j1 + j2, f.mul(c1, c2) as i64));
            }
        }
        BiPoly::from_terms(f, &terms)
    }

    fn random_bipoly(rng: &mut ChaCha8Rng, f: PrimeField, dx: usize, dy: usize) -> BiPoly {
        let p = f.modulus();
        let grid = (0..(dx + 1) * (dy + 1)).map(|_| rng.gen_range(0..p)).collect();
        BiPoly::from_grid(f, dx + 1, dy + 1, grid)
    }

    #[test]
    fn product_examples() {
        let f = PrimeField::new(7).unwrap();
        let x = BiPoly::from_terms(f, &[(1, 0, 1)]);
        let y = BiPoly::from_terms(f, &[(0, 1, 1)]);
        assert_eq!(bipoly_mul(&x, &y), BiPoly::from_terms(f, &[(1, 1, 1)]));
        let b = BiPoly::from_terms(f, &[(0, 0, 1), (1, 0, -1), (0, 1, -1)]);
        let expected = BiPoly::from_terms(
            f,
            &[(0, 0, 1), (1, 0, 5), (0, 1, 5), (2, 0, 1), (1, 1, 2), (0, 2, 1)],
        );
        assert_eq!(b.square(), expected);
    }

    #[test]
    fn products_match_schoolbook_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = PrimeField::new(1_000_000_007).unwrap();
        for _ in 0..100 {
            let (a, b, c, d) = (rng.gen_range(0..12), rng.gen_range(0..12), rng.gen_range(0..12), rng.gen_range(0..12));
            let u = random_bipoly(&mut rng, f, a, b);
            let v = random_bipoly(&mut rng, f, c, d);
            assert_eq!(u.mul(&v), schoolbook(&u, &v));
        }
    }

    #[test]
    fn normalization_tracks_degrees() {
        let f = PrimeField::new(5).unwrap();
        let e = BiPoly::from_terms(f, &[(3, 0, 5), (1, 0, 1), (0, 1, 1), (0, 3, -1), (0, 4, 10)]);
        assert_eq!(e.deg_x(), Some(1));
        assert_eq!(e.deg_y(), Some(3));
        assert!(BiPoly::from_terms(f, &[(2, 2, 0)]).is_zero());
        assert_eq!(BiPoly::zero(f).deg_x(), None);
    }

    #[test]
    fn section_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(BiPoly::one(f).section(0).unwrap(), BiPoly::one(f));
        let xy2 = BiPoly::from_terms(f, &[(1, 2, 1)]);
        assert!(xy2.section(1).unwrap().is_zero());
        assert!(matches!(xy2.section(9), Err(Error::BadDigit { .. })));
        let m = BiPoly::from_terms(f, &[(8, 15, 3)]);
        assert_eq!(m.section(1).unwrap(), BiPoly::from_terms(f, &[(1, 2, 3)]));
    }

    #[test]
    fn section_commutes_with_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for &p in &[2u64, 3, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for _ in 0..20 {
                let v = random_bipoly(&mut rng, f, 30, 30);
                for r in 0..p {
                    assert_eq!(
                        v.section(r).unwrap().diagonal(),
                        v.diagonal().section(r).unwrap()
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn kronecker_matches_schoolbook_small(seed in any::<u64>(), a in 0usize..=8, b in 0usize..=8, c in 0usize..=8, d in 0usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = PrimeField::new(13).unwrap();
            let u = random_bipoly(&mut rng, f, a, b);
            let v = random_bipoly(&mut rng, f, c, d);
            prop_assert_eq!(u.mul(&v), schoolbook(&u, &v));
        }
    }
}
