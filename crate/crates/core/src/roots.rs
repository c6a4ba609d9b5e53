//! Ordered root vectors.
//!
//! Roots come from the Jacobi matrix eigenvalues and are then refined by at
//! most three Newton steps against the forward recurrence. Each family is
//! stored in its conventional order:
//!
//! * Hermite and Laguerre: descending, `z_1 > z_2 > ... > z_N`;
//! * Jacobi: ascending, `z_1 < z_2 < ... < z_N`.
//!
//! So `z(N)` is the smallest root for Laguerre and the largest for Jacobi.
//! Bound formulas index roots through [`RootVector::z`] and never re-sort.

use serde::Serialize;

use crate::eigen::tridiag_eigenvalues;
use crate::error::{Error, Result};
use crate::opoly::{evaluate_scaled, jacobi_matrix, FamilyKind, PolynomialFamily};

const MAX_NEWTON_STEPS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ordering {
    DescendingHermite,
    DescendingLaguerre,
    AscendingJacobi,
}

impl Ordering {
    pub fn for_family(kind: FamilyKind) -> Self {
        match kind {
            FamilyKind::Hermite => Ordering::DescendingHermite,
            FamilyKind::Laguerre => Ordering::DescendingLaguerre,
            FamilyKind::Jacobi => Ordering::AscendingJacobi,
        }
    }

    pub fn is_descending(self) -> bool {
        !matches!(self, Ordering::AscendingJacobi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootVector {
    family: PolynomialFamily,
    n: usize,
    roots: Vec<f64>,
    ordering: Ordering,
    /// 0-based positions (in the stored order) whose Newton polish was
    /// rejected; those entries are the raw eigenvalues.
    polish_skipped: Vec<usize>,
    /// `max_i |P_N(z_i) / P_N'(z_i)| / spacing_i` after polishing.
    newton_residual: f64,
}

impl RootVector {
    /// Wraps externally known roots (e.g. closed forms). Values are sorted
    /// into the family ordering and checked against the domain invariants.
    pub fn from_values(family: PolynomialFamily, mut values: Vec<f64>) -> Result<Self> {
        family.validate()?;
        if values.is_empty() {
            return Err(Error::EmptyProblem);
        }
        let ordering = Ordering::for_family(family.kind());
        values.sort_by(f64::total_cmp);
        if ordering.is_descending() {
            values.reverse();
        }
        let rv = RootVector {
            family,
            n: values.len(),
            roots: values,
            ordering,
            polish_skipped: Vec::new(),
            newton_residual: 0.0,
        };
        rv.check_invariants()?;
        Ok(rv)
    }

    pub fn family(&self) -> PolynomialFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn roots(&self) -> &[f64] {
        &self.roots
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn polish_skipped(&self) -> &[usize] {
        &self.polish_skipped
    }

    pub fn newton_residual(&self) -> f64 {
        self.newton_residual
    }

    /// 1-based root access `z_{i,N}` in the family's ordering.
    pub fn z(&self, i: usize) -> f64 {
        assert!(i >= 1 && i <= self.n, "root index {i} out of 1..={}", self.n);
        self.roots[i - 1]
    }

    /// Consecutive gaps `|z_{i+1} - z_i|`, `i = 1..N-1`, all positive.
    pub fn gaps(&self) -> Vec<f64> {
        self.roots.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
    }

    fn check_invariants(&self) -> Result<()> {
        let monotone = if self.ordering.is_descending() {
            self.roots.windows(2).all(|w| w[0] > w[1])
        } else {
            self.roots.windows(2).all(|w| w[0] < w[1])
        };
        if !monotone {
            return Err(Error::InternalConsistency("roots are not strictly monotone".into()));
        }
        if self.roots.iter().any(|r| !r.is_finite()) {
            return Err(Error::InternalConsistency("non-finite root".into()));
        }
        match self.family.kind() {
            FamilyKind::Hermite => Ok(()),
            FamilyKind::Laguerre => {
                if self.roots.iter().all(|&r| r > 0.0) {
                    Ok(())
                } else {
                    Err(Error::InternalConsistency("Laguerre root is not positive".into()))
                }
            }
            FamilyKind::Jacobi => {
                if self.roots.iter().all(|&r| r > -1.0 && r < 1.0) {
                    Ok(())
                } else {
                    Err(Error::InternalConsistency("Jacobi root outside (-1, 1)".into()))
                }
            }
        }
    }
}

/// `r_i = sqrt(2 z_i)` for a Laguerre root vector, descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqrtRootVector {
    pub r: Vec<f64>,
}

pub fn compute_roots(family: PolynomialFamily, n: usize) -> Result<RootVector> {
    let matrix = jacobi_matrix(family, n)?;
    let eigen = tridiag_eigenvalues(&matrix)?.eigenvalues;

    let (lower, upper) = match family.kind() {
        FamilyKind::Hermite => (f64::NEG_INFINITY, f64::INFINITY),
        FamilyKind::Laguerre => (0.0, f64::INFINITY),
        FamilyKind::Jacobi => (-1.0, 1.0),
    };

    let mut roots = Vec::with_capacity(n);
    let mut skipped = Vec::new();
    let mut newton_residual: f64 = 0.0;
    for (i, &x0) in eigen.iter().enumerate() {
        let left = if i > 0 { x0 - eigen[i - 1] } else { x0 - lower };
        let right = if i + 1 < n { eigen[i + 1] - x0 } else { upper - x0 };
        let mut radius = 0.5 * left.min(right);
        if !radius.is_finite() {
            radius = 1.0;
        }
        let (x, ok) = polish(&family, n, x0, radius);
        if !ok {
            skipped.push(i);
        }
        // Local spacing: mean distance to the neighbouring roots.
        let spacing = match (i > 0, i + 1 < n) {
            (true, true) => 0.5 * (eigen[i + 1] - eigen[i - 1]),
            (true, false) => x0 - eigen[i - 1],
            (false, true) => eigen[i + 1] - x0,
            (false, false) => x.abs().max(1.0),
        };
        let step = evaluate_scaled(&family, n, x).newton_step();
        if step.is_finite() {
            newton_residual = newton_residual.max(step.abs() / spacing);
        }
        roots.push(x);
    }

    let ordering = Ordering::for_family(family.kind());
    if ordering.is_descending() {
        roots.reverse();
        skipped = skipped.into_iter().map(|i| n - 1 - i).collect();
        skipped.sort_unstable();
    }
    let rv = RootVector { family, n, roots, ordering, polish_skipped: skipped, newton_residual };
    rv.check_invariants()?;
    Ok(rv)
}

/// Newton refinement confined to `|x - x0| <= radius`. Returns the refined
/// root and whether every attempted step was accepted.
fn polish(family: &PolynomialFamily, n: usize, x0: f64, radius: f64) -> (f64, bool) {
    let mut x = x0;
    for _ in 0..MAX_NEWTON_STEPS {
        let step = evaluate_scaled(family, n, x).newton_step();
        if step == 0.0 {
            break;
        }
        let next = x - step;
        if !next.is_finite() || (next - x0).abs() > radius {
            return (x, false);
        }
        if next == x {
            break;
        }
        x = next;
        if step.abs() <= f64::EPSILON * x.abs() {
            break;
        }
    }
    (x, true)
}

pub fn to_sqrt_coordinates(rv: &RootVector) -> Result<SqrtRootVector> {
    let found = rv.family().kind();
    if found != FamilyKind::Laguerre {
        return Err(Error::FamilyMismatch { expected: FamilyKind::Laguerre, found });
    }
    Ok(SqrtRootVector { r: rv.roots().iter().map(|z| (2.0 * z).sqrt()).collect() })
}

/// Minimal gap and distances to the ends of the orthogonality interval.
/// `None` means the statistic is undefined (N = 1 gap, infinite ends).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapStatistics {
    pub min_gap: Option<f64>,
    pub boundary_low: Option<f64>,
    pub boundary_high: Option<f64>,
}

pub fn gap_statistics(rv: &RootVector) -> GapStatistics {
    let min_gap = rv.gaps().into_iter().reduce(f64::min);
    let n = rv.n();
    let (boundary_low, boundary_high) = match rv.family().kind() {
        FamilyKind::Hermite => (None, None),
        FamilyKind::Laguerre => (Some(rv.z(n)), None),
        FamilyKind::Jacobi => (Some(1.0 + rv.z(1)), Some(1.0 - rv.z(n))),
    };
    GapStatistics { min_gap, boundary_low, boundary_high }
}
