//! Subcommand drivers. Each returns the text to print.

use std::fmt::Write as _;

use algcoeff::arith::{radix_digits, BiPoly, BigIndex, Fp, PrimeField};
use algcoeff::diagonal::{furstenberg, LinearRep};
use algcoeff::instance::validate;
use algcoeff::mahler::{algeq_to_mahler, MahlerPipeline};
use algcoeff::oracle::expand_newton;
use algcoeff::partialpow::linear_rep_fast;

use crate::{parse_poly, CliError, CliResult, Method};

/// Largest index the naive method will expand to.
pub const NAIVE_LIMIT: u64 = 10_000_000;

/// Field and validated equation from the `-p` and `-E` flags.
pub fn instance(p: u64, text: &str) -> CliResult<(PrimeField, BiPoly)> {
    let field = PrimeField::new(p)?;
    let e = parse_poly(text, field)?;
    if e.is_zero() {
        return Err(algcoeff::Error::InvalidInput("E is the zero polynomial".into()).into());
    }
    validate(&e)?;
    Ok((field, e))
}

pub fn run_coeff(e: &BiPoly, n: &BigIndex, method: Method, crossover: u64) -> CliResult<Fp> {
    let p = e.field().modulus();
    let v = match method.resolve(p, crossover) {
        Method::Naive => {
            let k = n
                .to_u64()
                .filter(|&k| k <= NAIVE_LIMIT)
                .ok_or_else(|| CliError::Usage(format!("naive method is limited to N <= {NAIVE_LIMIT}")))?;
            let s = expand_newton(e, k as usize + 1)?;
            e.field().elem(s.coeff(k as usize))
        }
        Method::Mahler => MahlerPipeline::new(e)?.coeff(n)?,
        Method::Diagonal => LinearRep::dense(furstenberg(e)?)?.coeff(n)?,
        Method::DiagonalFast | Method::Auto => linear_rep_fast(e)?.coeff(n)?,
    };
    Ok(v)
}

/// Coefficients of `f mod x^t`, space separated.
pub fn run_expand(e: &BiPoly, t: usize) -> CliResult<String> {
    let s = expand_newton(e, t)?;
    let parts: Vec<String> = (0..t).map(|k| s.coeff(k).to_string()).collect();
    Ok(parts.join(" "))
}

pub fn run_mahler_eq(e: &BiPoly) -> CliResult<String> {
    let meq = algeq_to_mahler(e)?;
    let mut out = format!("K = {}\n", meq.k);
    for (k, c) in meq.c.iter().enumerate() {
        writeln!(out, "c_{k} = {c}").unwrap();
    }
    Ok(out)
}

pub fn run_furstenberg(e: &BiPoly) -> CliResult<String> {
    let rep = furstenberg(e)?;
    Ok(format!(
        "a = {}\nb = {}\nd_x = {}\nd_y = {}\n",
        rep.a, rep.b, rep.dx, rep.dy
    ))
}

/// Linear representation as JSON; only the digits of `n` when given.
pub fn run_linrep(
    e: &BiPoly,
    n: Option<&BigIndex>,
    method: Method,
    crossover: u64,
) -> CliResult<String> {
    let p = e.field().modulus();
    let lr = match method.resolve(p, crossover) {
        Method::Diagonal => LinearRep::dense(furstenberg(e)?)?,
        Method::DiagonalFast => linear_rep_fast(e)?,
        m => {
            return Err(CliError::Usage(format!(
                "linrep supports the diagonal methods, not {}",
                m.name()
            )))
        }
    };
    let digits = n.map(|n| {
        let mut d = radix_digits(n, &e.field());
        d.sort_unstable();
        d.dedup();
        d
    });
    let v = lr.to_json(digits.as_deref())?;
    Ok(serde_json::to_string(&v).expect("serialisable"))
}
