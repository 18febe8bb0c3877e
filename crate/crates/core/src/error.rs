use thiserror::Error;

/// Everything that can go wrong inside the solver and its checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("series for 1F1({a}, {c}; {z}) did not converge within {terms} terms")]
    Accuracy { a: f64, c: f64, z: f64, terms: usize },

    #[error("log-gamma pole at z = {0}")]
    Pole(f64),

    #[error("step size underflow at x = {x} (h = {h:e}) while integrating at E = {energy}")]
    StepUnderflow { x: f64, h: f64, energy: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("level index {index} out of range ({available} levels found below E = {e_max})")]
    Index { index: usize, available: usize, e_max: f64 },

    #[error("size error: {0}")]
    Size(String),

    #[error("input is not periodic on the circle (jump {jump:e} at the antipodal point)")]
    Periodicity { jump: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("symmetric eigensolver did not converge for dimension {0}")]
    Eigensolver(usize),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("no sign change of the {parity} residual on [{lo}, {hi}]")]
    Bracket { parity: &'static str, lo: f64, hi: f64 },
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Accuracy { .. }
                | Error::StepUnderflow { .. }
                | Error::Bracket { .. }
                | Error::Eigensolver(_)
        )
    }
}

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// A verification or identity check failed.
pub const EXIT_VERIFY: i32 = 1;
/// Bad command line or parameters.
pub const EXIT_USAGE: i32 = 2;
/// The numerics failed.
pub const EXIT_NUMERICAL: i32 = 3;

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParams(_) | Error::Domain(_) | Error::Size(_) | Error::Precondition(_) => EXIT_USAGE,
            _ => EXIT_NUMERICAL,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
