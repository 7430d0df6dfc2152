//! Mahler-equation route to `f_N`.
//!
//! The powers `y, y^p, ..., y^{p^d}` reduced modulo `E` live in a
//! `d`-dimensional space over `F_p(x)`, so the first linear dependence gives
//! `sum_k c_k(x) f(x^{p^k}) = 0`. Substituting `f = c_0 g` makes the equation
//! monic, `g = sum_k a_k g(x^{p^k})`, and splitting off the negative part of
//! `g` leaves `h = b + sum_k a_k h(x^{p^k})` for a power series `h`. The
//! combinations `a + sum_k b_k h(x^{p^k})` with bounded degrees are stable
//! under sections, which gives `h_N` after one step per base-p digit.

use std::collections::BTreeSet;

use crate::arith::{BiPoly, BigIndex, Fp, LaurentUniPoly, PrimeField, UniPoly, YModulus};
use crate::error::{Error, Result};
use crate::instance::validate;
use crate::oracle::expand_newton;

/// `sum_{k=0}^{K} c_k(x) f(x^{p^k}) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MahlerEquation {
    pub k: usize,
    pub c: Vec<UniPoly>,
    /// Valuation of `c_0`.
    pub v0: usize,
    /// Degree of `c_0`.
    pub d0: usize,
}

impl MahlerEquation {
    pub fn field(&self) -> PrimeField {
        self.c[0].field()
    }
}

/// Size limits for the precomputation, which grows like `p^d`.
#[derive(Clone, Copy, Debug)]
pub struct MahlerBudget {
    /// Bound on the common degree `D` and on intermediate x-degrees.
    pub max_degree: usize,
    /// Bound on the degrees entering the content gcd (quadratic Euclid).
    pub max_content_degree: usize,
}

impl Default for MahlerBudget {
    fn default() -> Self {
        Self {
            max_degree: 1 << 20,
            max_content_degree: 1 << 14,
        }
    }
}

pub fn algeq_to_mahler(e: &BiPoly) -> Result<MahlerEquation> {
    algeq_to_mahler_with(e, &MahlerBudget::default())
}

pub fn algeq_to_mahler_with(e: &BiPoly, budget: &MahlerBudget) -> Result<MahlerEquation> {
    let (d, _) = validate(e)?;
    if d < 2 {
        return Err(Error::InvalidInput(
            "the Mahler route needs deg_y E >= 2".into(),
        ));
    }
    let field = e.field();
    let p = field.modulus();
    let reduced = separable_part(e)?;
    let modulus = YModulus::new(&reduced)?;
    let lead = modulus.leading().clone();
    let d = modulus.degree();
    let h = reduced.deg_x().unwrap_or(0);
    if d == 1 && reduced.coeff(0, 0) == 0 && reduced.deg_x() == Some(0) {
        // E is y times a unit: f = 0 satisfies the order-0 equation f = 0
        return Ok(MahlerEquation {
            k: 0,
            c: vec![UniPoly::one(field)],
            v0: 0,
            d0: 0,
        });
    }

    let mut rems = vec![modulus.pow_y(1)];
    let mut q = 1u64;
    for s in 1..=d {
        q = q
            .checked_mul(p)
            .filter(|&q| (h.max(1) as u64).saturating_mul(q) <= budget.max_degree as u64)
            .ok_or_else(|| {
                Error::TooLarge(format!("y^(p^{s}) mod E exceeds the degree budget"))
            })?;
        rems.push(modulus.pow_y(q));

        let top = rems[s].exponent;
        let cols: Vec<Vec<UniPoly>> = rems
            .iter()
            .map(|r| {
                let scale = lead.pow(top - r.exponent);
                let mut col: Vec<UniPoly> = r.coeffs.iter().map(|c| c.mul(&scale)).collect();
                col.resize(d, UniPoly::zero(field));
                col
            })
            .collect();
        let rows: Vec<Vec<UniPoly>> = (0..d)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let (rank, pivot_rows) = echelon_profile(rows.clone(), s);
        if rank == s + 1 {
            continue;
        }
        debug_assert_eq!(rank, s);
        let sub: Vec<Vec<UniPoly>> = pivot_rows.iter().map(|&i| rows[i].clone()).collect();
        let mut c: Vec<UniPoly> = (0..=s)
            .map(|i| {
                let minor: Vec<Vec<UniPoly>> = sub
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != i)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let det = determinant(minor);
                if i % 2 == 1 {
                    det.neg()
                } else {
                    det
                }
            })
            .collect();
        normalize(&mut c, budget)?;
        assert!(!c[0].is_zero(), "minimal Mahler equation with c_0 = 0");
        let v0 = c[0].valuation().unwrap();
        let d0 = c[0].degree().unwrap();
        return Ok(MahlerEquation { k: s, c, v0, d0 });
    }
    unreachable!("y, y^p, ..., y^(p^d) are always dependent modulo E")
}

/// `E / gcd(E, E_y)` made primitive in x.
///
/// Repeated and inseparable factors of `E` would let `y^p, ..., y^{p^K}`
/// become dependent modulo `E` on their own, giving `c_0 = 0`. The root `f`
/// is a simple root of a separable factor, so it survives the division.
fn separable_part(e: &BiPoly) -> Result<BiPoly> {
    let field = e.field();
    let ev = e.y_coeffs();
    let g = gcd_y(&ev, &e.diff_y().y_coeffs());
    if g.len() <= 1 {
        return Ok(BiPoly::from_y_coeffs(field, &primitive(ev)));
    }
    let q = exact_div_y(&ev, &g)?;
    Ok(BiPoly::from_y_coeffs(field, &primitive(q)))
}

fn trim_y(mut a: Vec<UniPoly>) -> Vec<UniPoly> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn primitive(a: Vec<UniPoly>) -> Vec<UniPoly> {
    let a = trim_y(a);
    let Some(first) = a.iter().find(|c| !c.is_zero()) else {
        return a;
    };
    let mut g = first.make_monic();
    for c in &a {
        if g.degree() == Some(0) {
            break;
        }
        g = c.gcd(&g);
    }
    let inv = g.field().inv(a.last().unwrap().lc()).expect("nonzero");
    a.iter()
        .map(|c| c.exact_div(&g).expect("content divides").scale(inv))
        .collect()
}

fn prem_y(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.pop().unwrap();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bi) in b[..b.len() - 1].iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&lr.mul(bi));
        }
        r = trim_y(r);
    }
    r
}

/// Primitive gcd in `F_p[x][y]` by a primitive remainder sequence.
fn gcd_y(a: &[UniPoly], b: &[UniPoly]) -> Vec<UniPoly> {
    let mut u = primitive(a.to_vec());
    let mut v = primitive(b.to_vec());
    if u.len() < v.len() {
        std::mem::swap(&mut u, &mut v);
    }
    while !v.is_empty() {
        let r = prem_y(&u, &v);
        u = v;
        v = primitive(r);
    }
    u
}

fn exact_div_y(a: &[UniPoly], g: &[UniPoly]) -> Result<Vec<UniPoly>> {
    let field = g[0].field();
    let mut r = a.to_vec();
    let lg = g.last().unwrap();
    let mut q = vec![UniPoly::zero(field); a.len() + 1 - g.len()];
    while r.len() >= g.len() {
        let shift = r.len() - g.len();
        let t = r.last().unwrap().exact_div(lg)?;
        for (i, gi) in g.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&t.mul(gi));
        }
        q[shift] = t;
        r = trim_y(r);
    }
    if !r.is_empty() {
        return Err(Error::NonPolynomialResult("factor does not divide E".into()));
    }
    Ok(q)
}

/// Divide by the polynomial content and make `c_K` monic.
fn normalize(c: &mut [UniPoly], budget: &MahlerBudget) -> Result<()> {
    let smallest = c.iter().filter_map(|v| v.degree()).min().unwrap_or(0);
    if smallest > budget.max_content_degree {
        return Err(Error::TooLarge(format!(
            "content gcd on polynomials of degree {smallest}"
        )));
    }
    let mut order: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
    order.sort_by_key(|&i| c[i].degree());
    let mut g = c[order[0]].make_monic();
    for &i in &order[1..] {
        if g.degree() == Some(0) {
            break;
        }
        g = c[i].gcd(&g);
    }
    let field = g.field();
    if g.degree() != Some(0) {
        for v in c.iter_mut() {
            *v = v.exact_div(&g)?;
        }
    }
    let inv = field.inv(c.last().unwrap().lc())?;
    for v in c.iter_mut() {
        *v = v.scale(inv);
    }
    Ok(())
}

/// Fraction-free elimination over `F_p[x]`. Returns the rank and, for the
/// first `lead_cols` columns, the original indices of the pivot rows.
fn echelon_profile(mut m: Vec<Vec<UniPoly>>, lead_cols: usize) -> (usize, Vec<usize>) {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let field = m[0][0].field();
    let mut perm: Vec<usize> = (0..nrows).collect();
    let mut prev = UniPoly::one(field);
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(i) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, i);
        perm.swap(r, i);
        for i in r + 1..nrows {
            for j in col + 1..ncols {
                let t = m[r][col].mul(&m[i][j]).sub(&m[i][col].mul(&m[r][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][col] = UniPoly::zero(field);
        }
        prev = m[r][col].clone();
        if col < lead_cols {
            pivots.push(perm[r]);
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    (r, pivots)
}

fn determinant(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    let field = m[0][0].field();
    let mut prev = UniPoly::one(field);
    let mut negate = false;
    for k in 0..n {
        let Some(i) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return UniPoly::zero(field);
        };
        if i != k {
            m.swap(i, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    if negate {
        prev.neg()
    } else {
        prev
    }
}

/// `a_k = -c_k c_0^{p^k - 2}` for `k = 1..K`.
pub fn monicize(meq: &MahlerEquation) -> Vec<UniPoly> {
    let p = meq.field().modulus();
    let c0 = &meq.c[0];
    let mut q = 1u64;
    (1..=meq.k)
        .map(|k| {
            q *= p;
            meq.c[k].mul(&c0.pow(q - 2)).neg()
        })
        .collect()
}

/// Negative part of `f / c_0` and the constant term of the rest.
pub fn negative_part_and_h0(e: &BiPoly, meq: &MahlerEquation) -> Result<(LaurentUniPoly, Fp)> {
    let v0 = meq.v0;
    let field = meq.field();
    let f = expand_newton(e, v0 + 1)?.prefix;
    let unit = meq.c[0].shift_down(v0);
    let q = f.mul_trunc(&unit.series_inv(v0 + 1)?, v0 + 1);
    let g_minus = LaurentUniPoly::new(-(v0 as i64), q.truncate(v0));
    Ok((g_minus, field.elem(q.coeff(v0))))
}

/// Nonnegative part of `-g_- + sum_k a_k g_-(x^{p^k})`.
pub fn compute_rhs(a: &[UniPoly], g_minus: &LaurentUniPoly) -> UniPoly {
    let field = g_minus.field();
    let p = field.modulus() as usize;
    let mut acc = g_minus.neg();
    let mut q = 1usize;
    for ak in a {
        q *= p;
        acc = acc.add(&g_minus.inflate(q).mul_poly(ak));
    }
    acc.split().1
}

/// `h = rhs + sum_k a[k-1] h(x^{p^k})` with `h(0) = h0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicMahlerData {
    pub a: Vec<UniPoly>,
    pub rhs: UniPoly,
    pub big_d: usize,
    pub h0: Fp,
}

impl MonicMahlerData {
    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn field(&self) -> PrimeField {
        self.h0.field()
    }
}

/// `a(x) + sum_k b_k(x) h(x^{p^k})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionState {
    pub a: UniPoly,
    pub b: Vec<UniPoly>,
}

impl SectionState {
    /// The series `h` itself.
    pub fn h(data: &MonicMahlerData) -> Self {
        let field = data.field();
        let mut b = vec![UniPoly::zero(field); data.order() + 1];
        b[0] = UniPoly::one(field);
        Self {
            a: UniPoly::zero(field),
            b,
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        std::iter::once(&self.a)
            .chain(self.b.iter())
            .filter_map(|v| v.degree())
            .max()
    }
}

/// Rewrite `h` in the `b_0` term, then apply `S_r`.
fn expand_state(s: &SectionState, data: &MonicMahlerData) -> SectionState {
    let b0 = &s.b[0];
    let k = data.order();
    let a = s.a.add(&b0.mul(&data.rhs));
    let b = (0..k)
        .map(|i| b0.mul(&data.a[i]).add(&s.b[i + 1]))
        .collect();
    SectionState { a, b }
}

fn section_expanded(u: &SectionState, r: u64, p: u64) -> SectionState {
    let field = u.a.field();
    let mut b: Vec<UniPoly> = u
        .b
        .iter()
        .map(|v| v.section_unchecked(r as usize, p as usize))
        .collect();
    b.push(UniPoly::zero(field));
    SectionState {
        a: u.a.section_unchecked(r as usize, p as usize),
        b,
    }
}

pub fn section_step(s: &SectionState, data: &MonicMahlerData, r: u64) -> Result<SectionState> {
    let p = data.field().modulus();
    if r >= p {
        return Err(Error::BadDigit { digit: r, p });
    }
    Ok(section_expanded(&expand_state(s, data), r, p))
}

/// Value at `x = 0`.
pub fn evaluate_state(s: &SectionState, h0: Fp) -> Fp {
    let field = h0.field();
    let bsum = s
        .b
        .iter()
        .fold(0, |acc, v| field.add(acc, v.coeff(0)));
    field.elem(field.add(s.a.coeff(0), field.mul(bsum, h0.value())))
}

/// Precomputed Mahler data for one equation.
#[derive(Clone, Debug)]
pub struct MahlerPipeline {
    e: BiPoly,
    meq: MahlerEquation,
    data: MonicMahlerData,
    g_minus: LaurentUniPoly,
}

impl MahlerPipeline {
    pub fn new(e: &BiPoly) -> Result<Self> {
        Self::with_budget(e, &MahlerBudget::default())
    }

    pub fn with_budget(e: &BiPoly, budget: &MahlerBudget) -> Result<Self> {
        let meq = algeq_to_mahler_with(e, budget)?;
        let p = meq.field().modulus() as u128;
        let deg_c0 = meq.d0 as u128;
        let mut q = 1u128;
        for k in 1..=meq.k {
            q *= p;
            let est = meq.c[k].degree().unwrap_or(0) as u128 + (q - 2) * deg_c0;
            if est > budget.max_degree as u128 {
                return Err(Error::TooLarge(format!(
                    "monic coefficient a_{k} has degree {est}"
                )));
            }
        }
        let a = monicize(&meq);
        let (g_minus, h0) = negative_part_and_h0(e, &meq)?;
        let rhs = compute_rhs(&a, &g_minus);
        let big_d = a
            .iter()
            .chain(std::iter::once(&rhs))
            .filter_map(|v| v.degree())
            .max()
            .unwrap_or(0);
        Ok(Self {
            e: e.clone(),
            meq,
            data: MonicMahlerData { a, rhs, big_d, h0 },
            g_minus,
        })
    }

    pub fn equation(&self) -> &MahlerEquation {
        &self.meq
    }

    pub fn data(&self) -> &MonicMahlerData {
        &self.data
    }

    pub fn g_minus(&self) -> &LaurentUniPoly {
        &self.g_minus
    }

    /// `h_n` by one section step per base-p digit of `n`.
    pub fn h_coeff(&self, n: &BigIndex) -> Fp {
        let p = self.data.field().modulus();
        let mut digits = n.digits_lsf(p);
        if digits.is_empty() {
            digits.push(0);
        }
        let mut s = SectionState::h(&self.data);
        for r in digits {
            s = section_expanded(&expand_state(&s, &self.data), r, p);
        }
        evaluate_state(&s, self.data.h0)
    }

    /// Like [`Self::h_coeff`], also collecting the indices `m` whose `h_m`
    /// enters the value at each level, and returning the number of steps.
    pub fn h_coeff_traced(&self, n: u64, seen: &mut BTreeSet<u64>) -> (Fp, usize) {
        let p = self.data.field().modulus();
        let mut s = SectionState::h(&self.data);
        let mut m = n;
        let mut steps = 0;
        loop {
            if steps > 0 && m == 0 {
                // evaluation at x = 0 reads h(0) whatever the state
                seen.insert(0);
                break;
            }
            record_indices(&s, m, p, seen);
            s = section_expanded(&expand_state(&s, &self.data), m % p, p);
            m /= p;
            steps += 1;
        }
        (evaluate_state(&s, self.data.h0), steps)
    }

    pub fn coeff(&self, n: &BigIndex) -> Result<Fp> {
        self.coeff_inner(n, None)
    }

    /// [`Self::coeff`] with the evaluated h-indices collected into `seen`.
    pub fn coeff_traced(&self, n: u64, seen: &mut BTreeSet<u64>) -> Result<Fp> {
        self.coeff_inner(&n.into(), Some(seen))
    }

    fn coeff_inner(&self, n: &BigIndex, mut seen: Option<&mut BTreeSet<u64>>) -> Result<Fp> {
        let field = self.data.field();
        let c0 = &self.meq.c[0];
        if let Some(small) = n.to_u64().filter(|&v| v <= self.meq.d0 as u64) {
            let s = expand_newton(&self.e, small as usize + 1)?;
            return Ok(field.elem(s.coeff(small as usize)));
        }
        let mut acc = 0;
        for j in self.meq.v0..=self.meq.d0 {
            let cj = c0.coeff(j);
            if cj == 0 {
                continue;
            }
            let np = n.sub_small(j as u64).expect("N > d0");
            let hv = match seen.as_deref_mut() {
                Some(set) => {
                    let v = np.to_u64().ok_or_else(|| {
                        Error::InvalidInput("tracing needs a 64-bit index".into())
                    })?;
                    self.h_coeff_traced(v, set).0
                }
                None => self.h_coeff(&np),
            };
            acc = field.add(acc, field.mul(cj, hv.value()));
        }
        Ok(field.elem(acc))
    }

    /// `h_0..h_m`, sharing section steps between indices with common low digits.
    pub fn h_values(&self, m: u64) -> Vec<u64> {
        let p = self.data.field().modulus();
        let mut out = vec![0u64; m as usize + 1];
        out[0] = self.data.h0.value();
        let root = SectionState::h(&self.data);
        self.visit(&root, 0, 1, m, p, &mut out);
        out
    }

    // `s` represents the series whose coefficient `t` is `h_{res + t * scale}`.
    fn visit(&self, s: &SectionState, res: u64, scale: u64, m: u64, p: u64, out: &mut [u64]) {
        let u = expand_state(s, &self.data);
        for r in 0..p {
            let child_res = res + r * scale;
            if child_res > m {
                break;
            }
            let child = section_expanded(&u, r, p);
            out[child_res as usize] = evaluate_state(&child, self.data.h0).value();
            let next = scale.saturating_mul(p);
            if child_res.saturating_add(next) <= m {
                self.visit(&child, child_res, next, m, p, out);
            }
        }
    }

    /// `f_0..f_m`.
    pub fn coeffs_upto(&self, m: u64) -> Result<Vec<u64>> {
        let field = self.data.field();
        let d0 = self.meq.d0 as u64;
        let head = expand_newton(&self.e, (m.min(d0) + 1) as usize)?;
        let mut out: Vec<u64> = (0..=m.min(d0)).map(|i| head.coeff(i as usize)).collect();
        if m <= d0 {
            return Ok(out);
        }
        let h = self.h_values(m - self.meq.v0 as u64);
        let c0 = &self.meq.c[0];
        for n in d0 + 1..=m {
            let mut acc = 0;
            for j in self.meq.v0..=self.meq.d0 {
                acc = field.add(acc, field.mul(c0.coeff(j), h[(n - j as u64) as usize]));
            }
            out.push(acc);
        }
        Ok(out)
    }
}

// Indices of h read by `[x^m] (a + sum_k b_k h(x^{p^k}))`.
fn record_indices(s: &SectionState, m: u64, p: u64, seen: &mut BTreeSet<u64>) {
    let mut q = 1u64;
    for bk in &s.b {
        for (i, &c) in bk.coeffs().iter().enumerate() {
            let i = i as u64;
            if c != 0 && i <= m && (m - i) % q == 0 {
                seen.insert((m - i) / q);
            }
        }
        q = q.saturating_mul(p);
    }
}

pub fn coeff_via_mahler(e: &BiPoly, n: &BigIndex) -> Result<Fp> {
    MahlerPipeline::new(e)?.coeff(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::random_equation;
    use crate::oracle::expand_undetermined;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn toy() -> BiPoly {
        let f = PrimeField::new(5).unwrap();
        BiPoly::from_terms(f, &[(1, 0, 1), (0, 1, 1), (0, 3, -1)])
    }

    fn cubic3() -> BiPoly {
        let f = PrimeField::new(3).unwrap();
        BiPoly::from_terms(
            f,
            &[
                (1, 0, 1),
                (0, 1, -1),
                (1, 1, -1),
                (2, 2, 1),
                (0, 3, 1),
                (1, 3, 1),
            ],
        )
    }

    fn residual(e: &BiPoly, meq: &MahlerEquation, prec: usize) -> UniPoly {
        let p = e.field().modulus() as usize;
        let f = expand_newton(e, prec).unwrap().prefix;
        let mut acc = UniPoly::zero(e.field());
        let mut q = 1;
        for ck in &meq.c {
            acc = acc.add(&ck.mul(&f.inflate(q).truncate(prec)));
            q *= p;
        }
        acc.truncate(prec)
    }

    #[test]
    fn toy_equation() {
        let meq = algeq_to_mahler(&toy()).unwrap();
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(meq.k, 2);
        assert_eq!(meq.c[0], UniPoly::from_i64(f5, &[0, 0, 0, 0, 1, 0, -1, 0, -1]));
        assert_eq!(meq.c[1], UniPoly::from_i64(f5, &[-1, 0, 0, 0, -1, 0, 2]));
        assert_eq!(meq.c[2], UniPoly::one(f5));
        assert_eq!((meq.v0, meq.d0), (4, 8));
    }

    #[test]
    fn binomial_family_equation() {
        // x + (1+y)^6 - 1 over F_7
        let f7 = PrimeField::new(7).unwrap();
        let mut terms = vec![(1, 0, 1)];
        let binom = [1i64, 6, 15, 20, 15, 6, 1];
        for (j, &b) in binom.iter().enumerate().skip(1) {
            terms.push((0, j, b));
        }
        let e = BiPoly::from_terms(f7, &terms);
        let meq = algeq_to_mahler(&e).unwrap();
        assert_eq!(meq.k, 2);
        let mut c0 = vec![0i64; 8];
        c0[6] = 1;
        c0[7] = -1;
        assert_eq!(meq.c[0], UniPoly::from_i64(f7, &c0));
        let mut c1 = vec![0i64; 8];
        c1[0] = -1;
        c1[6] = -1;
        c1[7] = 1;
        assert_eq!(meq.c[1], UniPoly::from_i64(f7, &c1));
        assert_eq!(meq.c[2], UniPoly::one(f7));
        assert!(residual(&e, &meq, 500).is_zero());
    }

    #[test]
    fn cubic_heights() {
        let e = cubic3();
        let meq = algeq_to_mahler(&e).unwrap();
        assert_eq!(meq.k, 3);
        let degs: Vec<_> = meq.c.iter().map(|c| c.degree().unwrap()).collect();
        // A non-primitive multiple with heights 45, 47, 50, 32 carries a common
        // factor of degree 14; the primitive equation is 14 lower everywhere.
        let unreduced = [45usize, 47, 50, 32];
        assert!(unreduced.iter().zip(&degs).all(|(a, b)| a - b == 14));
        assert_eq!(degs, vec![31, 33, 36, 18]);
        assert_eq!((meq.v0, meq.d0), (10, 31));
        let a = monicize(&meq);
        let degs: Vec<_> = a.iter().map(|c| c.degree().unwrap()).collect();
        assert_eq!(degs, vec![33 + 31, 36 + 7 * 31, 18 + 25 * 31]);
        assert!(residual(&e, &meq, 500).is_zero());
    }

    #[test]
    fn toy_monic_coefficients() {
        let f5 = PrimeField::new(5).unwrap();
        let meq = algeq_to_mahler(&toy()).unwrap();
        let a = monicize(&meq);
        let u = UniPoly::from_i64(f5, &[1, 0, -1, 0, -1]);
        let a1 = UniPoly::monomial(f5, 1, 12)
            .mul(&UniPoly::from_i64(f5, &[1, -1]))
            .mul(&UniPoly::from_i64(f5, &[1, 1]))
            .mul(&UniPoly::from_i64(f5, &[1, 0, 1, 0, 2]))
            .mul(&u.pow(3));
        assert_eq!(a[0], a1);
        assert_eq!(a[1], UniPoly::monomial(f5, 1, 92).mul(&u.pow(23)).neg());
    }

    #[test]
    fn trivial_monicize() {
        let f = PrimeField::new(7).unwrap();
        let c1 = UniPoly::from_i64(f, &[2, 3]);
        let meq = MahlerEquation {
            k: 1,
            c: vec![UniPoly::one(f), c1.clone()],
            v0: 0,
            d0: 0,
        };
        assert_eq!(monicize(&meq), vec![c1.neg()]);
    }

    #[test]
    fn toy_negative_part_and_rhs() {
        let e = toy();
        let f5 = PrimeField::new(5).unwrap();
        let meq = algeq_to_mahler(&e).unwrap();
        let (g, h0) = negative_part_and_h0(&e, &meq).unwrap();
        assert_eq!(g, LaurentUniPoly::from_i64(f5, -3, &[-1, 0, -2]));
        assert_eq!(h0.value(), 0);

        // h0 by direct series division
        let f = expand_newton(&e, 6).unwrap().prefix;
        let inv = UniPoly::from_i64(f5, &[1, 0, -1, 0, -1]).series_inv(6).unwrap();
        assert_eq!(f.mul_trunc(&inv, 6).coeff(4), h0.value());

        let a = monicize(&meq);
        let b = compute_rhs(&a, &g);
        assert_eq!(b.coeff(1), 4);
        assert_eq!(b.coeff(5), 4);
        assert_eq!(b.coeff(7), 1);
        assert_eq!(b.coeff(9), 2);
        assert_eq!(b.coeff(149), 1);
        assert_eq!(b.coeff(157), 4);
        assert_eq!(b.coeff(159), 3);
        assert_eq!(b.degree(), Some(159));

        assert!(compute_rhs(&a, &LaurentUniPoly::zero(f5)).is_zero());
    }

    #[test]
    fn rhs_satisfies_inhomogeneous_equation() {
        let e = toy();
        let pl = MahlerPipeline::new(&e).unwrap();
        let prec = 300;
        let meq = pl.equation();
        let f = expand_newton(&e, prec + meq.v0).unwrap().prefix;
        let unit = meq.c[0].shift_down(meq.v0);
        let h = f
            .mul_trunc(&unit.series_inv(prec + meq.v0).unwrap(), prec + meq.v0)
            .shift_down(meq.v0);
        let data = pl.data();
        let mut rhs = data.rhs.clone();
        let mut q = 1;
        for ak in &data.a {
            q *= 5;
            rhs = rhs.add(&ak.mul(&h.inflate(q).truncate(prec)));
        }
        assert_eq!(h.truncate(prec), rhs.truncate(prec));
    }

    #[test]
    fn state_basics() {
        let pl = MahlerPipeline::new(&toy()).unwrap();
        let data = pl.data();
        let f5 = data.field();
        let zeros = vec![UniPoly::zero(f5); data.order() + 1];
        let s = SectionState {
            a: UniPoly::monomial(f5, 1, 1),
            b: zeros.clone(),
        };
        let t = section_step(&s, data, 1).unwrap();
        assert_eq!(t.a, UniPoly::one(f5));
        assert_eq!(t.b, zeros);
        assert_eq!(evaluate_state(&t, data.h0).value(), 1);
        let hs = SectionState::h(data);
        assert_eq!(evaluate_state(&hs, f5.elem(3)).value(), 3);
        assert!(matches!(
            section_step(&hs, data, 5),
            Err(Error::BadDigit { digit: 5, p: 5 })
        ));
    }

    fn h_oracle(e: &BiPoly, meq: &MahlerEquation, n: usize) -> UniPoly {
        let prec = n + meq.v0;
        let f = expand_newton(e, prec).unwrap().prefix;
        let unit = meq.c[0].shift_down(meq.v0);
        f.mul_trunc(&unit.series_inv(prec).unwrap(), prec)
            .shift_down(meq.v0)
    }

    #[test]
    fn toy_h_values() {
        let e = toy();
        let pl = MahlerPipeline::new(&e).unwrap();
        let h = h_oracle(&e, pl.equation(), 401);
        for n in 0..=400u64 {
            assert_eq!(pl.h_coeff(&n.into()).value(), h.coeff(n as usize), "n = {n}");
        }
        assert_eq!(pl.h_values(400), (0..=400).map(|n| h.coeff(n)).collect::<Vec<_>>());
    }

    #[test]
    fn degree_bound_under_steps() {
        let pl = MahlerPipeline::new(&toy()).unwrap();
        let data = pl.data();
        let f5 = data.field();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rand_poly = |rng: &mut ChaCha8Rng| {
            let len = rng.gen_range(0..=data.big_d + 1);
            UniPoly::from_coeffs(f5, (0..len).map(|_| rng.gen_range(0..5)).collect())
        };
        for _ in 0..100 {
            let s = SectionState {
                a: rand_poly(&mut rng),
                b: (0..=data.order()).map(|_| rand_poly(&mut rng)).collect(),
            };
            let r = rng.gen_range(0..5);
            let t = section_step(&s, data, r).unwrap();
            assert!(t.max_degree().unwrap_or(0) <= data.big_d);
        }
    }

    #[test]
    fn toy_coefficients() {
        let e = toy();
        let pl = MahlerPipeline::new(&e).unwrap();
        assert_eq!(pl.coeff(&1u64.into()).unwrap().value(), 4);
        let s = expand_newton(&e, 1252).unwrap();
        let mut seen = BTreeSet::new();
        let v = pl.coeff_traced(1251, &mut seen).unwrap();
        assert_eq!(v.value(), s.coeff(1251));
        let expected: BTreeSet<u64> = [0, 3, 5, 7, 43, 45, 47, 243, 245, 247, 1243, 1245, 1247]
            .into_iter()
            .collect();
        assert_eq!(seen, expected);
        assert_eq!(pl.coeffs_upto(1251).unwrap(), s.prefix.coeffs()[..1252].to_vec());
    }

    #[test]
    fn step_count_is_digit_count() {
        let pl = MahlerPipeline::new(&toy()).unwrap();
        for (n, digits) in [(0u64, 1), (4, 1), (5, 2), (1247, 5), (3124, 5), (3125, 6)] {
            let (_, steps) = pl.h_coeff_traced(n, &mut BTreeSet::new());
            assert_eq!(steps, digits, "n = {n}");
        }
    }

    #[test]
    fn inseparable_and_repeated_factors() {
        let f2 = PrimeField::new(2).unwrap();
        let cat = BiPoly::from_terms(f2, &[(0, 1, 1), (1, 0, 1), (0, 2, 1)]);
        let insep = BiPoly::from_terms(f2, &[(0, 2, 1), (1, 0, 1), (0, 0, 1)]);
        let f3 = PrimeField::new(3).unwrap();
        let cat3 = BiPoly::from_terms(f3, &[(0, 1, 1), (1, 0, -1), (0, 2, -1)]);
        let sq = BiPoly::from_terms(f3, &[(0, 0, 1), (0, 1, 2), (0, 2, 1)]);
        for (e, base) in [(cat.mul(&insep), &cat), (cat3.mul(&sq), &cat3)] {
            let meq = algeq_to_mahler(&e).unwrap();
            assert_eq!(meq, algeq_to_mahler(base).unwrap());
            let pl = MahlerPipeline::new(&e).unwrap();
            let s = expand_newton(&e, 301).unwrap();
            let expect: Vec<u64> = (0..=300).map(|n| s.coeff(n)).collect();
            assert_eq!(pl.coeffs_upto(300).unwrap(), expect);
        }
    }

    #[test]
    fn linear_equation_is_rejected() {
        let f = PrimeField::new(5).unwrap();
        let e = BiPoly::from_terms(f, &[(0, 1, 1), (1, 0, -1)]);
        assert!(matches!(algeq_to_mahler(&e), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn random_instances_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 12 {
            let p = [2u64, 3, 5][rng.gen_range(0..3)];
            let f = PrimeField::new(p).unwrap();
            let (d, h) = (rng.gen_range(2..=3), rng.gen_range(0..=2));
            let e = random_equation(&mut rng, f, d, h);
            let meq = algeq_to_mahler(&e).unwrap();
            assert!(residual(&e, &meq, 500).is_zero());
            assert!(meq.k <= d);
            let (_, hh) = validate(&e).unwrap();
            let bound = d * hh * (p as usize).pow(d as u32);
            assert!(meq.c.iter().all(|c| c.degree().unwrap_or(0) <= bound));
            let pl = MahlerPipeline::new(&e).unwrap();
            let s = expand_undetermined(&e, 2001).unwrap();
            let expect: Vec<u64> = (0..=2000).map(|n| s.coeff(n)).collect();
            assert_eq!(pl.coeffs_upto(2000).unwrap(), expect);
            checked += 1;
        }
    }
}
