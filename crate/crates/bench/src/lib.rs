//! Fixtures shared by the benchmarks.

use rootgap_core::{compute_roots, jacobi_s, laguerre_s, Coordinate, InverseCovariance, PolynomialFamily};

/// One representative parameter choice per family.
pub fn representative_families() -> [PolynomialFamily; 3] {
    [
        PolynomialFamily::Hermite,
        PolynomialFamily::Laguerre { nu: 2.0 },
        PolynomialFamily::Jacobi { alpha: 2.0, beta: 3.0 },
    ]
}

pub fn inverse_covariance(family: PolynomialFamily, n: usize) -> InverseCovariance {
    let rv = compute_roots(family, n).expect("valid benchmark family");
    match family {
        PolynomialFamily::Hermite => rootgap_core::hermite_s(&rv),
        PolynomialFamily::Laguerre { .. } => laguerre_s(&rv, Coordinate::Z),
        PolynomialFamily::Jacobi { .. } => jacobi_s(&rv),
    }
    .expect("matrix assembles")
}
