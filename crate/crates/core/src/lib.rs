//! # rootgap-core
//!
//! Roots of the classical orthogonal polynomials (Hermite, Laguerre, Jacobi),
//! the inverse covariance matrices of the freezing-regime central limit
//! theorems for the associated β-ensembles, and lower bounds for root gaps and
//! boundary distances that follow from the closed-form spectra of those
//! matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`opoly`]: polynomial families, recurrence (Jacobi) matrices and point
//!   evaluation.
//! * [`eigen`]: self-contained symmetric eigensolvers (implicit QL for
//!   tridiagonal input, cyclic Jacobi for dense input) and exact matrix
//!   powers.
//! * [`roots`]: ordered, Newton-polished root vectors.
//! * [`covariance`]: the matrices `S_N`, their predicted spectra, trace
//!   identities and diagonals of squares.
//! * [`bounds`]: every derived bound plus the literature comparators, as
//!   [`BoundReport`] rows.
//! * [`report`]: sweeps over families, sizes and parameters with CSV/JSON
//!   serialisation. The `rootgap` binary is a thin wrapper over this module.
//!
//! ```
//! use rootgap_core::{compute_roots, hermite_s, dense_eigenvalues, PolynomialFamily};
//!
//! let roots = compute_roots(PolynomialFamily::Hermite, 5).unwrap();
//! let s = hermite_s(&roots).unwrap();
//! let spectrum = dense_eigenvalues(&s.matrix).unwrap();
//! for (computed, predicted) in spectrum.eigenvalues.iter().zip(&s.predicted) {
//!     assert!((computed - predicted).abs() < 1e-10);
//! }
//! ```

pub mod bounds;
pub mod covariance;
pub mod eigen;
mod error;
pub mod opoly;
pub mod report;
pub mod roots;

pub use bounds::{
    all_bounds, crossovers, hermite_diag_bound, jacobi_bounds, jacobi_comparator, jacobi_crossover, laguerre_bounds,
    laguerre_comparators, laguerre_crossovers, sharpness_summary, BoundKind, BoundReport, BoundSense, BoundSharpness,
    BoundStatus, Crossover, SharpnessSummary, DEFAULT_TOLERANCE,
};
pub use covariance::{
    diag_of_square, hermite_s, jacobi_s, laguerre_form_difference, laguerre_s, max_eigenvalue, predicted_spectrum,
    trace_identities, Coordinate, DiagOfSquare, IdentityCheck, InverseCovariance,
};
pub use eigen::{dense_eigenvalues, trace_power, tridiag_eigenvalues, DenseSymmetric, Spectrum};
pub use error::{Error, Result};
pub use opoly::{evaluate_with_derivative, jacobi_matrix, FamilyKind, PolynomialFamily, SymTridiagonal};
pub use roots::{
    compute_roots, gap_statistics, to_sqrt_coordinates, GapStatistics, Ordering, RootVector, SqrtRootVector,
};
