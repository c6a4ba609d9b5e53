use thiserror::Error;

use crate::opoly::FamilyKind;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("empty problem: N must be at least 1")]
    EmptyProblem,

    /// A value left the representable range. `log10_scale` is the decimal
    /// exponent of the magnitude that would have been needed.
    #[error("magnitude out of range (about 10^{log10_scale:.1})")]
    Magnitude { log10_scale: f64 },

    #[error("eigensolver did not converge at index {index} after {iterations} iterations")]
    Convergence { index: usize, iterations: usize },

    #[error("family mismatch: expected {expected:?}, found {found:?}")]
    FamilyMismatch { expected: FamilyKind, found: FamilyKind },

    #[error("singular configuration: roots {i} and {j} coincide or touch the boundary")]
    SingularConfiguration { i: usize, j: usize },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("input violates a structural invariant: {0}")]
    InvalidInput(String),

    #[error("reports from more than one family or size cannot be summarised together")]
    MixedReports,
}
