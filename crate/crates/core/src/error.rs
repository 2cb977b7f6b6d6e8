use thiserror::Error;

/// Errors raised across the analysis, simulation and planning layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("upper incomplete gamma diverges at a = 0, x = 0")]
    Divergence,

    #[error("matrix is rank deficient (smallest/largest singular value = {ratio:e})")]
    Singular { ratio: f64 },

    #[error("residual spectrum is degenerate: every residual variance is zero")]
    DegenerateSpectrum,

    #[error("residual variances {first} and {second} are too close to separate; coalesce them")]
    IllConditioned { first: f64, second: f64 },

    #[error("{needed} receive antennas required, only {available} available")]
    InsufficientAntennas { needed: usize, available: usize },

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("perfect CSI: residual variance p - a^2 p_hat is zero")]
    PerfectCsi,

    #[error("{invalid} of {trials} trials had rank-deficient channels")]
    TrialBudget { invalid: usize, trials: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Instability(_)
            | Error::IllConditioned { .. }
            | Error::Singular { .. }
            | Error::TrialBudget { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
