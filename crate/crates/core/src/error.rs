use thiserror::Error;

/// Errors produced by the lattice engine and its instantiations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("orbit closure exceeded the cap of {cap} family members")]
    OrbitCapExceeded { cap: usize },
    #[error("strong-element search exhausted after {explored} meets")]
    StrongSearchExhausted { explored: usize },
    #[error("element cap of {cap} exceeded")]
    ElementCapExceeded { cap: usize },
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCapExceeded(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("meet table is not a semilattice: {0}")]
    AssociativityViolation(String),
    #[error("delta is not monotone: {0}")]
    MonotonicityViolation(String),
    #[error("increment map violates the close-knit increment condition: {0}")]
    IncrementViolation(String),
    #[error("gamma does not act equivariantly: {0}")]
    EquivarianceViolation(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for the errors raised when a size or enumeration limit is hit.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::OrbitCapExceeded { .. }
                | Error::StrongSearchExhausted { .. }
                | Error::ElementCapExceeded { .. }
                | Error::EnumerationCapExceeded(_)
        )
    }

    /// True for violations of the close-knit conditions.
    pub fn is_condition(&self) -> bool {
        matches!(
            self,
            Error::AssociativityViolation(_)
                | Error::MonotonicityViolation(_)
                | Error::IncrementViolation(_)
                | Error::EquivarianceViolation(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
