use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cocycle does not descend to the quotient: {0}")]
    Descent(String),

    #[error("ball enumeration aborted: {found} elements reached at radius {radius} (cap {cap})")]
    BallCap {
        radius: usize,
        found: usize,
        cap: usize,
    },

    #[error("dimension {dim} exceeds the cap of {cap} for {what}")]
    DimensionCap {
        dim: usize,
        cap: usize,
        what: &'static str,
    },

    #[error("matrix is not Hermitian (max |M - M*| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("element is not self-adjoint (max coefficient defect {defect:e})")]
    NotSelfAdjoint { defect: f64 },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("element identification failed: {0}")]
    Dedup(String),

    #[error("twisted cocycle not allowed here: {0}")]
    Twisted(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input (an invalid group, element or
    /// cocycle specification) rather than by a failed or oversized
    /// computation.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter(_)
                | Error::Descent(_)
                | Error::NotSelfAdjoint { .. }
                | Error::Empty(_)
                | Error::Twisted(_)
                | Error::Parse(_)
                | Error::Json(_)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_classification() {
        assert!(Error::Parse("x".into()).is_usage());
        assert!(Error::Descent("x".into()).is_usage());
        assert!(!Error::Numeric("x".into()).is_usage());
        assert!(!Error::DimensionCap {
            dim: 2,
            cap: 1,
            what: "test"
        }
        .is_usage());
        assert!(!Error::NotHermitian { defect: 1.0 }.is_usage());
    }
}
