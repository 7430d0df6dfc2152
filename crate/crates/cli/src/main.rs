use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use algcoeff::arith::BigIndex;
use algcoeff_cli::bench::{self, BenchSpec};
use algcoeff_cli::commands::{self, instance};
use algcoeff_cli::selfcheck::{self, SelfcheckConfig};
use algcoeff_cli::{CliError, CliResult, Method, AUTO_CROSSOVER, EXIT_CERTIFICATE};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "algcoeff", version, about = "N-th coefficients of algebraic series over F_p")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Problem {
    /// Prime modulus.
    #[arg(short = 'p')]
    p: u64,
    /// Equation E(x, y), e.g. "x+y-y^3".
    #[arg(short = 'E', allow_hyphen_values = true)]
    e: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print f_N.
    Coeff {
        #[command(flatten)]
        problem: Problem,
        /// Index: decimal, "10^k" or "a*10^k".
        #[arg(short = 'N')]
        n: String,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        /// Prime above which auto uses partial powering.
        #[arg(long, default_value_t = AUTO_CROSSOVER)]
        crossover: u64,
    },
    /// Print the coefficients of f mod x^n.
    Expand {
        #[command(flatten)]
        problem: Problem,
        #[arg(short = 'n')]
        n: usize,
    },
    /// Print a minimal Mahler equation c_0..c_K.
    MahlerEq {
        #[command(flatten)]
        problem: Problem,
    },
    /// Print a, b, d_x, d_y with f = Diag(a/b).
    Furstenberg {
        #[command(flatten)]
        problem: Problem,
    },
    /// Export the linear representation as JSON.
    Linrep {
        #[command(flatten)]
        problem: Problem,
        /// Export only the digit matrices used by this index.
        #[arg(short = 'N')]
        n: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        method: Method,
        #[arg(long, default_value_t = AUTO_CROSSOVER)]
        crossover: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Timing runs as CSV.
    Bench {
        /// Comma-separated primes.
        #[arg(long, value_delimiter = ',', default_value = "1009,2003,4001,8009")]
        primes: Vec<u64>,
        /// Comma-separated decimal digit counts of N.
        #[arg(long, value_delimiter = ',', default_value = "100")]
        digits: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "diagonal-fast")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fixed equation; random otherwise.
        #[arg(short = 'E', allow_hyphen_values = true)]
        e: Option<String>,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        height: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check all methods on random instances.
    Selfcheck {
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-n", default_value_t = 3000)]
        max_n: u64,
    },
}

fn open_out(path: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.cmd {
        Cmd::Coeff {
            problem,
            n,
            method,
            crossover,
        } => {
            let (_, e) = instance(problem.p, &problem.e)?;
            let n = BigIndex::parse(&n)?;
            println!("{}", commands::run_coeff(&e, &n, method, crossover)?);
        }
        Cmd::Expand { problem, n } => {
            let (_, e) = instance(problem.p, &problem.e)?;
            println!("{}", commands::run_expand(&e, n)?);
        }
        Cmd::MahlerEq { problem } => {
            let (_, e) = instance(problem.p, &problem.e)?;
            print!("{}", commands::run_mahler_eq(&e)?);
        }
        Cmd::Furstenberg { problem } => {
            let (_, e) = instance(problem.p, &problem.e)?;
            print!("{}", commands::run_furstenberg(&e)?);
        }
        Cmd::Linrep {
            problem,
            n,
            method,
            crossover,
            out,
        } => {
            let (_, e) = instance(problem.p, &problem.e)?;
            let n = n.map(|t| BigIndex::parse(&t)).transpose()?;
            let text = commands::run_linrep(&e, n.as_ref(), method, crossover)?;
            let mut w = open_out(&out)?;
            writeln!(w, "{text}")?;
        }
        Cmd::Bench {
            primes,
            digits,
            methods,
            reps,
            seed,
            e,
            degree,
            height,
            out,
        } => {
            let spec = BenchSpec {
                primes,
                digits,
                methods,
                reps,
                seed,
                equation: e,
                d: degree,
                h: height,
            };
            bench::run(&spec, open_out(&out)?)?;
        }
        Cmd::Selfcheck {
            instances,
            seed,
            max_n,
        } => {
            let cfg = SelfcheckConfig {
                instances,
                seed,
                max_n,
                ..Default::default()
            };
            let report = selfcheck::run(&cfg);
            print!("{}", report.summary());
            if report.failed() > 0 {
                return Ok(ExitCode::from(EXIT_CERTIFICATE as u8));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(CliError::exit_code(&err) as u8)
        }
    }
}
