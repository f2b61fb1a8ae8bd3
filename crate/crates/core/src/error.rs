use std::fmt;

use thiserror::Error;

/// Parameter regimes in which a limit object is not defined.
///
/// These are reported as [`Error::Undefined`] rather than as a numeric
/// placeholder so that callers cannot mistake them for a real value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `E[Y] >= E[X]`: the critical fitness is `+inf` and every fitness dies out.
    Subcritical,
    /// `E[X] = +inf`: the limit shape is `mu` itself, not the shape law.
    InfiniteMeanBirths,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Subcritical => f.write_str("subcritical regime (E[Y] >= E[X])"),
            Regime::InfiniteMeanBirths => f.write_str("infinite-mean regime (E[X] = +inf)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside [0, 1]")]
    Domain { what: &'static str, value: f64 },
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid fitness measure: {0}")]
    InvalidMeasure(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("invalid increment law: {0}")]
    InvalidLaw(String),
    #[error("step {step}: expected a {expected} step")]
    Sequencing { step: u64, expected: &'static str },
    #[error("population is empty")]
    EmptyPopulation,
    #[error("interval has zero mass under the fitness measure")]
    DegenerateInterval,
    #[error("wrong regime: {0}")]
    WrongRegime(String),
    #[error("undefined in the {0}")]
    Undefined(Regime),
    #[error("fixed-point iteration did not converge after {0} iterations")]
    Divergence(usize),
    #[error("construction overflows 64-bit counts; largest feasible k_max is {max_feasible}")]
    Overflow { max_feasible: u32 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
