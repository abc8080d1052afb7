use alloc::string::String;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("epsilon {0} outside [0, 1/3)")]
    InvalidEpsilon(f64),
    #[error("color {color} outside [0, {r})")]
    InvalidColor { color: f64, r: f64 },
    #[error("interval width {width} is not narrower than the period {period}")]
    PeriodTooNarrow { width: f64, period: f64 },
    #[error("square root of interval with negative lower bound {0}")]
    NegativeRadicand(f64),
    #[error("window has zero size")]
    InvalidWindow,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("initial scheme does not certify")]
    InfeasibleInit,
}

pub type Result<T> = core::result::Result<T, Error>;
