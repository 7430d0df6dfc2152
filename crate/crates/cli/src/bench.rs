//! Scaling benchmarks, one CSV row per run.

use std::io::Write;
use std::time::{Duration, Instant};

use algcoeff::arith::{radix_digits, BiPoly, BigIndex, PrimeField};
use algcoeff::diagonal::{furstenberg, LinearRep};
use algcoeff::instance::{random_equation, validate};
use algcoeff::mahler::MahlerPipeline;
use algcoeff::ops;
use algcoeff::oracle::expand_newton;
use algcoeff::partialpow::linear_rep_fast;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{parse_poly, CliError, CliResult, Method};

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BenchRecord {
    pub method: String,
    pub p: u64,
    pub d: usize,
    pub h: usize,
    pub ndigits: usize,
    pub pre_ms: f64,
    pub query_ms: f64,
    pub ops: u64,
}

#[derive(Clone, Debug)]
pub struct BenchSpec {
    pub primes: Vec<u64>,
    /// Decimal digit counts of the queried indices.
    pub digits: Vec<usize>,
    pub methods: Vec<Method>,
    pub reps: usize,
    pub seed: u64,
    /// Fixed equation text; a random one of shape `(d, h)` otherwise.
    pub equation: Option<String>,
    pub d: usize,
    pub h: usize,
}

/// A seeded index with exactly `ndigits` decimal digits.
pub fn random_index(rng: &mut impl Rng, ndigits: usize) -> BigIndex {
    let mut s = String::with_capacity(ndigits);
    s.push(char::from(b'1' + rng.gen_range(0..9u8)));
    for _ in 1..ndigits {
        s.push(char::from(b'0' + rng.gen_range(0..10u8)));
    }
    BigIndex::parse(&s).expect("decimal digits")
}

/// A prepared coefficient query, so that precomputation and folding can be
/// timed separately.
pub enum Prepared {
    Linear(LinearRep),
    Mahler(MahlerPipeline),
    Naive(BiPoly),
}

impl Prepared {
    pub fn query(&self, n: &BigIndex) -> CliResult<u64> {
        Ok(match self {
            Self::Linear(lr) => lr.coeff(n)?.value(),
            Self::Mahler(pl) => pl.coeff(n)?.value(),
            Self::Naive(e) => {
                let k = n.to_u64().ok_or_else(|| CliError::Usage("index too large for naive".into()))?;
                expand_newton(e, k as usize + 1)?.coeff(k as usize)
            }
        })
    }
}

/// Build the method's data and the digit matrices needed for `n`.
pub fn precompute(e: &BiPoly, method: Method, n: &BigIndex) -> CliResult<Prepared> {
    let field = e.field();
    let prepared = match method.resolve(field.modulus(), crate::AUTO_CROSSOVER) {
        Method::Diagonal => Prepared::Linear(LinearRep::dense(furstenberg(e)?)?),
        Method::DiagonalFast | Method::Auto => Prepared::Linear(linear_rep_fast(e)?),
        Method::Mahler => Prepared::Mahler(MahlerPipeline::new(e)?),
        Method::Naive => Prepared::Naive(e.clone()),
    };
    if let Prepared::Linear(lr) = &prepared {
        lr.prepare(&radix_digits(n, &field))?;
    }
    Ok(prepared)
}

/// Time one precomputation and one query.
pub fn run_one(e: &BiPoly, method: Method, n: &BigIndex) -> CliResult<(BenchRecord, u64)> {
    let (d, h) = validate(e)?;
    ops::take();
    let t = Instant::now();
    let prepared = precompute(e, method, n)?;
    let pre = t.elapsed();
    let t = Instant::now();
    let value = prepared.query(n)?;
    let query = t.elapsed();
    let record = BenchRecord {
        method: method.resolve(e.field().modulus(), crate::AUTO_CROSSOVER).name().into(),
        p: e.field().modulus(),
        d,
        h,
        ndigits: n.to_string().len(),
        pre_ms: ms(pre),
        query_ms: ms(query),
        ops: ops::take(),
    };
    Ok((record, value))
}

pub fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn run(spec: &BenchSpec, out: impl Write) -> CliResult<Vec<BenchRecord>> {
    let mut writer = csv::Writer::from_writer(out);
    let mut records = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for &p in &spec.primes {
        let field = PrimeField::new(p)?;
        let e = match &spec.equation {
            Some(text) => parse_poly(text, field)?,
            None => random_equation(&mut rng, field, spec.d, spec.h),
        };
        for &method in &spec.methods {
            for &nd in &spec.digits {
                for _ in 0..spec.reps {
                    let n = random_index(&mut rng, nd);
                    let (record, _) = run_one(&e, method, &n)?;
                    writer.serialize(&record)?;
                    writer.flush()?;
                    records.push(record);
                }
            }
        }
    }
    Ok(records)
}
