//! Cross-method agreement on seeded random instances.

use std::time::{Duration, Instant};

use algcoeff::arith::{BiPoly, PrimeField};
use algcoeff::diagonal::{furstenberg, LinearRep};
use algcoeff::instance::random_equation;
use algcoeff::mahler::{MahlerBudget, MahlerPipeline};
use algcoeff::oracle::{expand_newton, expand_undetermined};
use algcoeff::partialpow::linear_rep_fast;
use algcoeff::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct SelfcheckConfig {
    pub instances: usize,
    pub seed: u64,
    pub max_n: u64,
    pub primes: Vec<u64>,
    pub d_range: (usize, usize),
    pub h_range: (usize, usize),
    pub mahler_budget: MahlerBudget,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        Self {
            instances: 200,
            seed: 0,
            max_n: 3000,
            primes: vec![2, 3, 5, 7, 11, 13],
            d_range: (2, 4),
            h_range: (0, 3),
            // a few seconds per instance for 3000 Mahler queries
            mahler_budget: MahlerBudget {
                max_degree: 1 << 13,
                max_content_degree: 1 << 12,
            },
        }
    }
}

/// Outcome of one method on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    /// First index where the method differs from the Newton oracle.
    Mismatch(u64),
    /// The method declined the instance (for example, over budget).
    Declined(String),
}

#[derive(Clone, Debug)]
pub struct InstanceResult {
    pub p: u64,
    pub d: usize,
    pub h: usize,
    pub e: BiPoly,
    /// `(method, verdict)` for undetermined, diagonal, diagonal-fast, mahler.
    pub verdicts: Vec<(&'static str, Verdict)>,
}

impl InstanceResult {
    pub fn all_agree(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| *v == Verdict::Agree)
    }
}

#[derive(Clone, Debug)]
pub struct SelfcheckReport {
    pub results: Vec<InstanceResult>,
    pub elapsed: Duration,
}

impl SelfcheckReport {
    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.all_agree()).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    /// `(agree, mismatch, declined)` counts for one method.
    pub fn method_counts(&self, method: &str) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for r in &self.results {
            for (m, v) in &r.verdicts {
                if *m == method {
                    match v {
                        Verdict::Agree => c.0 += 1,
                        Verdict::Mismatch(_) => c.1 += 1,
                        Verdict::Declined(_) => c.2 += 1,
                    }
                }
            }
        }
        c
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "instances: {}  passed: {}  failed: {}  ({:.1} s)\n",
            self.results.len(),
            self.passed(),
            self.failed(),
            self.elapsed.as_secs_f64()
        );
        for m in METHODS {
            let (a, x, s) = self.method_counts(m);
            out.push_str(&format!("  {m:<14} agree {a:>4}  mismatch {x:>4}  declined {s:>4}\n"));
        }
        out
    }
}

pub const METHODS: [&str; 4] = ["undetermined", "diagonal", "diagonal-fast", "mahler"];

fn compare(reference: &[u64], got: algcoeff::Result<Vec<u64>>) -> Verdict {
    match got {
        Ok(v) => match reference.iter().zip(&v).position(|(a, b)| a != b) {
            Some(i) => Verdict::Mismatch(i as u64),
            None if v.len() != reference.len() => Verdict::Mismatch(v.len().min(reference.len()) as u64),
            None => Verdict::Agree,
        },
        Err(Error::TooLarge(msg)) => Verdict::Declined(msg),
        Err(e) => Verdict::Declined(e.to_string()),
    }
}

pub fn check_instance(e: &BiPoly, max_n: u64, budget: &MahlerBudget) -> Vec<(&'static str, Verdict)> {
    let len = max_n as usize + 1;
    let newton = expand_newton(e, len).expect("valid instance");
    let reference: Vec<u64> = (0..len).map(|k| newton.coeff(k)).collect();
    let undetermined = expand_undetermined(e, len).map(|s| (0..len).map(|k| s.coeff(k)).collect());
    let diagonal = furstenberg(e)
        .and_then(LinearRep::dense)
        .and_then(|lr| lr.coeffs_upto(max_n));
    let fast = linear_rep_fast(e).and_then(|lr| lr.coeffs_upto(max_n));
    let mahler = MahlerPipeline::with_budget(e, budget).and_then(|pl| pl.coeffs_upto(max_n));
    vec![
        ("undetermined", compare(&reference, undetermined)),
        ("diagonal", compare(&reference, diagonal)),
        ("diagonal-fast", compare(&reference, fast)),
        ("mahler", compare(&reference, mahler)),
    ]
}

pub fn run(cfg: &SelfcheckConfig) -> SelfcheckReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut results = Vec::with_capacity(cfg.instances);
    for _ in 0..cfg.instances {
        let p = cfg.primes[rng.gen_range(0..cfg.primes.len())];
        let d = rng.gen_range(cfg.d_range.0..=cfg.d_range.1);
        let h = rng.gen_range(cfg.h_range.0..=cfg.h_range.1);
        let field = PrimeField::new(p).expect("prime list");
        let e = random_equation(&mut rng, field, d, h);
        let verdicts = check_instance(&e, cfg.max_n, &cfg.mahler_budget);
        results.push(InstanceResult { p, d, h, e, verdicts });
    }
    SelfcheckReport {
        results,
        elapsed: start.elapsed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_agrees() {
        let cfg = SelfcheckConfig {
            instances: 8,
            seed: 3,
            max_n: 500,
            primes: vec![2, 3, 5],
            d_range: (2, 3),
            h_range: (0, 2),
            mahler_budget: MahlerBudget {
                max_degree: 1 << 16,
                max_content_degree: 1 << 14,
            },
        };
        let report = run(&cfg);
        assert_eq!(report.failed(), 0, "{}", report.summary());
    }
}
