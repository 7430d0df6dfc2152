//! Front end for `algcoeff`: expression parsing, subcommand drivers, the
//! cross-method self-check and the benchmark harness.

pub mod bench;
pub mod commands;
pub mod parse;
pub mod selfcheck;

use thiserror::Error;

pub use parse::{parse_poly, ParseError};

/// Exit code for malformed or unsupported input.
pub const EXIT_INVALID: i32 = 2;
/// Exit code when an internal exactness certificate fails.
pub const EXIT_CERTIFICATE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] algcoeff::Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use algcoeff::Error as E;
        match self {
            Self::Core(E::NonPolynomialResult(_) | E::ZeroInverse | E::NotAUnit) => EXIT_CERTIFICATE,
            _ => EXIT_INVALID,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Coefficient algorithms selectable with `--method`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Newton expansion up to `x^N`.
    Naive,
    Mahler,
    /// Dense diagonal route with the full power `b^(p-1)`.
    Diagonal,
    /// Diagonal route with partial powering.
    DiagonalFast,
    /// `diagonal-fast` above the crossover prime, `diagonal` below.
    Auto,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Self::Naive => "naive",
            Self::Mahler => "mahler",
            Self::Diagonal => "diagonal",
            Self::DiagonalFast => "diagonal-fast",
            Self::Auto => "auto",
        }
    }

    /// Resolve `auto` for the prime `p`.
    pub fn resolve(self, p: u64, crossover: u64) -> Self {
        match self {
            Self::Auto if p > crossover => Self::DiagonalFast,
            Self::Auto => Self::Diagonal,
            m => m,
        }
    }
}

/// Default prime above which `auto` picks partial powering.
pub const AUTO_CROSSOVER: u64 = 64;
