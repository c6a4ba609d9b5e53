//! Inverse covariance matrices `S_N` of the freezing-regime CLTs.
//!
//! Entries depend only on the roots `z_i` of `P_N`:
//!
//! * Hermite: `s_ii = 1 + Σ_{l≠i} (z_i - z_l)^{-2}`, `s_ij = -(z_i - z_j)^{-2}`,
//!   spectrum `{1, ..., N}`.
//! * Laguerre (`L_N^{(ν-1)}`): `s_ii = 1 + ν/z_i + 2 Σ (z_i + z_l)/(z_i - z_l)^2`,
//!   `s_ij = -4 sqrt(z_i z_j)/(z_i - z_j)^2`, spectrum `{2, 4, ..., 2N}`. The
//!   same matrix can be written in `r_i = sqrt(2 z_i)`, see [`Coordinate`].
//! * Jacobi (`P_N^{(α,β)}`): `s_jj = 4 Σ (1 - z_j^2)/(z_j - z_l)^2
//!   + 2(α+1)(1+z_j)/(1-z_j) + 2(β+1)(1-z_j)/(1+z_j)`,
//!   `s_ij = -4 sqrt((1-z_i^2)(1-z_j^2))/(z_i - z_j)^2`,
//!   spectrum `{2j(2N+α+β+1-j)}`.
//!
//! For N = 1 the interaction sums are empty; Hermite then gives `[1]`,
//! which is taken as the natural extension of the N ≥ 2 statement.

use serde::Serialize;

use crate::eigen::{dense_eigenvalues, DenseSymmetric};
use crate::error::{Error, Result};
use crate::opoly::{FamilyKind, PolynomialFamily};
use crate::roots::{to_sqrt_coordinates, RootVector};

/// Relative agreement required between the two routes in [`diag_of_square`].
pub const DIAG_ROUTE_TOLERANCE: f64 = 1e-10;

/// Which variables the Laguerre matrix was assembled in. Hermite and Jacobi
/// matrices always use `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Coordinate {
    Z,
    SqrtR,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InverseCovariance {
    pub family: PolynomialFamily,
    pub n: usize,
    pub matrix: DenseSymmetric,
    /// Closed-form spectrum, ascending.
    pub predicted: Vec<f64>,
    pub coordinate: Coordinate,
    #[serde(skip)]
    pub roots: RootVector,
}

impl InverseCovariance {
    /// Max relative deviation between the computed and the predicted
    /// spectrum.
    pub fn spectral_mismatch(&self) -> Result<f64> {
        let computed = dense_eigenvalues(&self.matrix)?;
        Ok(computed.eigenvalues.iter().zip(&self.predicted).map(|(c, p)| (c - p).abs() / p.abs()).fold(0.0, f64::max))
    }
}

fn expect_family(rv: &RootVector, expected: FamilyKind) -> Result<()> {
    let found = rv.family().kind();
    if found == expected {
        Ok(())
    } else {
        Err(Error::FamilyMismatch { expected, found })
    }
}

fn check_distinct(z: &[f64]) -> Result<()> {
    for i in 0..z.len() {
        for j in (i + 1)..z.len() {
            if z[i] == z[j] {
                return Err(Error::SingularConfiguration { i: i + 1, j: j + 1 });
            }
        }
    }
    Ok(())
}

pub fn hermite_s(rv: &RootVector) -> Result<InverseCovariance> {
    expect_family(rv, FamilyKind::Hermite)?;
    let z = rv.roots();
    check_distinct(z)?;
    let n = z.len();
    let matrix = DenseSymmetric::from_upper(n, |i, j| {
        if i == j {
            1.0 + (0..n).filter(|&l| l != i).map(|l| (z[i] - z[l]).powi(-2)).sum::<f64>()
        } else {
            -(z[i] - z[j]).powi(-2)
        }
    });
    Ok(InverseCovariance {
        family: rv.family(),
        n,
        matrix,
        predicted: predicted_spectrum(rv.family(), n),
        coordinate: Coordinate::Z,
        roots: rv.clone(),
    })
}

pub fn laguerre_s(rv: &RootVector, coordinate: Coordinate) -> Result<InverseCovariance> {
    expect_family(rv, FamilyKind::Laguerre)?;
    let PolynomialFamily::Laguerre { nu } = rv.family() else { unreachable!() };
    let z = rv.roots();
    if let Some(bad) = z.iter().find(|&&x| x <= 0.0) {
        return Err(Error::ParameterDomain(format!("Laguerre root {bad} is not positive")));
    }
    check_distinct(z)?;
    let n = z.len();
    let matrix = match coordinate {
        Coordinate::Z => DenseSymmetric::from_upper(n, |i, j| {
            if i == j {
                1.0 + nu / z[i]
                    + 2.0 * (0..n).filter(|&l| l != i).map(|l| (z[i] + z[l]) / (z[i] - z[l]).powi(2)).sum::<f64>()
            } else {
                -4.0 * (z[i] * z[j]).sqrt() / (z[i] - z[j]).powi(2)
            }
        }),
        Coordinate::SqrtR => {
            let r = to_sqrt_coordinates(rv)?.r;
            DenseSymmetric::from_upper(n, |i, j| {
                if i == j {
                    1.0 + 2.0 * nu / (r[i] * r[i])
                        + 2.0
                            * (0..n)
                                .filter(|&l| l != i)
                                .map(|l| (r[i] - r[l]).powi(-2) + (r[i] + r[l]).powi(-2))
                                .sum::<f64>()
                } else {
                    2.0 * ((r[i] + r[j]).powi(-2) - (r[i] - r[j]).powi(-2))
                }
            })
        }
    };
    Ok(InverseCovariance {
        family: rv.family(),
        n,
        matrix,
        predicted: predicted_spectrum(rv.family(), n),
        coordinate,
        roots: rv.clone(),
    })
}

pub fn jacobi_s(rv: &RootVector) -> Result<InverseCovariance> {
    expect_family(rv, FamilyKind::Jacobi)?;
    let PolynomialFamily::Jacobi { alpha, beta } = rv.family() else { unreachable!() };
    // a + b = α + 1, b = β + 1.
    jacobi_s_ab(rv, alpha - beta, beta + 1.0)
}

/// Jacobi matrix in the ensemble parameters `(a, b)`, where
/// `α = a + b - 1` and `β = b - 1`.
pub(crate) fn jacobi_s_ab(rv: &RootVector, a: f64, b: f64) -> Result<InverseCovariance> {
    expect_family(rv, FamilyKind::Jacobi)?;
    let z = rv.roots();
    if let Some(pos) = z.iter().position(|x| x.abs() >= 1.0) {
        return Err(Error::SingularConfiguration { i: pos + 1, j: pos + 1 });
    }
    check_distinct(z)?;
    let n = z.len();
    let matrix = DenseSymmetric::from_upper(n, |i, j| {
        if i == j {
            let zj = z[j];
            4.0 * (0..n).filter(|&l| l != j).map(|l| (1.0 - zj * zj) / (zj - z[l]).powi(2)).sum::<f64>()
                + 2.0 * (a + b) * (1.0 + zj) / (1.0 - zj)
                + 2.0 * b * (1.0 - zj) / (1.0 + zj)
        } else {
            -4.0 * ((1.0 - z[j] * z[j]) * (1.0 - z[i] * z[i])).sqrt() / (z[i] - z[j]).powi(2)
        }
    });
    Ok(InverseCovariance {
        family: rv.family(),
        n,
        matrix,
        predicted: predicted_spectrum(rv.family(), n),
        coordinate: Coordinate::Z,
        roots: rv.clone(),
    })
}

/// Closed-form spectrum of `S_N`, ascending.
pub fn predicted_spectrum(family: PolynomialFamily, n: usize) -> Vec<f64> {
    match family {
        PolynomialFamily::Hermite => (1..=n).map(|j| j as f64).collect(),
        PolynomialFamily::Laguerre { .. } => (1..=n).map(|j| 2.0 * j as f64).collect(),
        PolynomialFamily::Jacobi { alpha, beta } => {
            let mut out: Vec<f64> = (1..=n).map(|j| jacobi_eigenvalue(alpha, beta, n, j)).collect();
            out.sort_by(f64::total_cmp);
            out
        }
    }
}

fn jacobi_eigenvalue(alpha: f64, beta: f64, n: usize, j: usize) -> f64 {
    let (n, j) = (n as f64, j as f64);
    2.0 * j * (2.0 * n + alpha + beta + 1.0 - j)
}

/// Spectral radius `M(α, β, N) = max_j 2j(2N+α+β+1-j)` by direct scan.
pub fn max_eigenvalue(alpha: f64, beta: f64, n: usize) -> f64 {
    (1..=n).map(|j| jacobi_eigenvalue(alpha, beta, n, j)).fold(0.0, f64::max)
}

/// Diagonal of `(S - I)^2` (Hermite, Laguerre) or `S^2` (Jacobi).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagOfSquare {
    /// Closed-form values in terms of the roots.
    pub values: Vec<f64>,
    /// Same quantities from the assembled matrix.
    pub from_matrix: Vec<f64>,
}

impl DiagOfSquare {
    /// Largest relative disagreement between the two routes.
    pub fn max_route_difference(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.from_matrix)
            .map(|(a, b)| {
                let scale = a.abs().max(b.abs());
                if scale > 0.0 {
                    (a - b).abs() / scale
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Both routes, without judging their agreement.
pub(crate) fn diag_of_square_routes(s: &InverseCovariance) -> DiagOfSquare {
    let shift = match s.family.kind() {
        FamilyKind::Hermite | FamilyKind::Laguerre => 1.0,
        FamilyKind::Jacobi => 0.0,
    };
    DiagOfSquare { values: diag_square_closed_form(&s.roots), from_matrix: s.matrix.shifted(shift).diag_of_square() }
}

/// Computes the diagonal of the (shifted) square both from the matrix and
/// from the closed-form root sums, failing if they disagree beyond
/// [`DIAG_ROUTE_TOLERANCE`].
pub fn diag_of_square(s: &InverseCovariance) -> Result<DiagOfSquare> {
    let d = diag_of_square_routes(s);
    let diff = d.max_route_difference();
    if diff > DIAG_ROUTE_TOLERANCE {
        return Err(Error::InternalConsistency(format!(
            "diagonal of square: closed form and matrix product differ by {diff:e} (relative)"
        )));
    }
    Ok(d)
}

/// Per-root closed forms of the diagonal of the (shifted) squared matrix,
/// i.e. the left-hand sides of the per-index diagonal bounds.
pub(crate) fn diag_square_closed_form(rv: &RootVector) -> Vec<f64> {
    let z = rv.roots();
    let n = z.len();
    let others = |i: usize| (0..n).filter(move |&l| l != i);
    match rv.family() {
        PolynomialFamily::Hermite => (0..n)
            .map(|i| {
                let s2: f64 = others(i).map(|l| (z[i] - z[l]).powi(-2)).sum();
                let s4: f64 = others(i).map(|l| (z[i] - z[l]).powi(-4)).sum();
                s2 * s2 + s4
            })
            .collect(),
        PolynomialFamily::Laguerre { nu } => (0..n)
            .map(|i| {
                let t = nu / z[i] + 2.0 * others(i).map(|l| (z[i] + z[l]) / (z[i] - z[l]).powi(2)).sum::<f64>();
                let u: f64 = others(i).map(|l| z[i] * z[l] / (z[i] - z[l]).powi(4)).sum();
                t * t + 16.0 * u
            })
            .collect(),
        PolynomialFamily::Jacobi { alpha, beta } => (0..n)
            .map(|i| {
                let zi = z[i];
                let w = 4.0 * others(i).map(|l| (1.0 - zi * zi) / (zi - z[l]).powi(2)).sum::<f64>()
                    + 2.0 * (alpha + 1.0) * (1.0 + zi) / (1.0 - zi)
                    + 2.0 * (beta + 1.0) * (1.0 - zi) / (1.0 + zi);
                let u: f64 = others(i).map(|l| (1.0 - z[l] * z[l]) * (1.0 - zi * zi) / (zi - z[l]).powi(4)).sum();
                w * w + 16.0 * u
            })
            .collect(),
    }
}

/// An exact finite-N identity between a root sum and a polynomial in N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub id: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / max(|rhs|, 1)`.
    pub rel_residual: f64,
}

impl IdentityCheck {
    fn new(id: &'static str, lhs: f64, rhs: f64) -> Self {
        IdentityCheck { id, lhs, rhs, rel_residual: (lhs - rhs).abs() / rhs.abs().max(1.0) }
    }
}

/// Trace identities: `tr(S - I)` and `tr((S - I)^2)` for Hermite and
/// Laguerre, `tr(S) = Σ λ_j` for Jacobi.
pub fn trace_identities(rv: &RootVector) -> Result<Vec<IdentityCheck>> {
    let z = rv.roots();
    let n = z.len();
    let nf = n as f64;
    let pairs = || (0..n).flat_map(move |i| (0..n).filter(move |&l| l != i).map(move |l| (i, l)));
    match rv.family() {
        PolynomialFamily::Hermite => {
            check_distinct(z)?;
            let pair_sum: f64 = pairs().map(|(i, l)| (z[i] - z[l]).powi(-2)).sum();
            let square_sum: f64 = diag_square_closed_form(rv).iter().sum();
            Ok(vec![
                IdentityCheck::new("hermite_trace", pair_sum, nf * (nf - 1.0) / 2.0),
                IdentityCheck::new("hermite_trace_square", square_sum, nf * (nf - 1.0) * (2.0 * nf - 1.0) / 6.0),
            ])
        }
        PolynomialFamily::Laguerre { nu } => {
            check_distinct(z)?;
            let lhs = nu * z.iter().map(|x| 1.0 / x).sum::<f64>()
                + 2.0 * pairs().map(|(i, l)| (z[i] + z[l]) / (z[i] - z[l]).powi(2)).sum::<f64>();
            let square_sum: f64 = diag_square_closed_form(rv).iter().sum();
            Ok(vec![
                // trace(S - I) = 1 + 3 + ... + (2N - 1).
                IdentityCheck::new("laguerre_trace", lhs, nf * nf),
                IdentityCheck::new("laguerre_trace_square", square_sum, nf * (2.0 * nf - 1.0) * (2.0 * nf + 1.0) / 3.0),
            ])
        }
        PolynomialFamily::Jacobi { .. } => {
            let s = jacobi_s(rv)?;
            Ok(vec![IdentityCheck::new("jacobi_trace", s.matrix.trace(), s.predicted.iter().sum())])
        }
    }
}

/// Max entrywise relative difference between the `Z` and `SqrtR` assemblies
/// of the Laguerre matrix.
pub fn laguerre_form_difference(rv: &RootVector) -> Result<f64> {
    let a = laguerre_s(rv, Coordinate::Z)?.matrix;
    let b = laguerre_s(rv, Coordinate::SqrtR)?.matrix;
    let n = a.n();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (a.get(i, j), b.get(i, j));
            let scale = x.abs().max(y.abs());
            if scale > 0.0 {
                worst = worst.max((x - y).abs() / scale);
            }
        }
    }
    Ok(worst)
}
