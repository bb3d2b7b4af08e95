use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An iterative method stopped before reaching its tolerance.
    #[error("numerical failure in {what}: error estimate {estimate:e}")]
    NumericalFailure { what: String, estimate: f64 },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// Part of a packet component left the spatial integration window.
    #[error("window overflow at t = {time} fs: fraction {leaked:e} of the norm lies outside the window")]
    WindowOverflow { time: f64, leaked: f64 },

    #[error("insufficient simulation span: {0}")]
    InsufficientSpan(String),

    #[error("scheme instability: relative norm drift {drift:e} exceeds {bound:e}")]
    SchemeInstability { drift: f64, bound: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by bad caller input rather than by a numerical
    /// method.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
