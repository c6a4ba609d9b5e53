//! Root-gap and boundary-distance bounds.
//!
//! Every bound is evaluated against a computed [`RootVector`] and returned
//! as a [`BoundReport`]. Derived bounds are consequences of the closed-form
//! spectra of `S_N` and hold for every N and every admissible parameter;
//! comparator bounds are closed-form statements quoted from the literature
//! and are only tabulated.
//!
//! Catalogue (`index` is the 1-based root or gap index in the family order):
//!
//! | id | statement |
//! |----|-----------|
//! | `hermite_diag_square` | `(Σ_l g^{-2})^2 + Σ_l g^{-4} <= (N-1)^3/N`, `g = z_i - z_l` |
//! | `hermite_inverse_fourth` | `Σ_l g^{-4} <= (N-1)^3/(2N)` |
//! | `hermite_inverse_square` | `Σ_l g^{-2} <= (N-1)^{3/2}/N^{1/2}` |
//! | `hermite_gap` | `z_i - z_{i+1} >= (2N)^{1/4}/(N-1)^{3/4}` |
//! | `cmp_hermite_gap` | `z_i - z_{i+1} >= 2/sqrt(N)` |
//! | `laguerre_diag_square` | diagonal of `(S-I)^2` `<= (2N-1)^2` |
//! | `laguerre_smallest_root` | `z_N >= ν/(2N-1)` |
//! | `laguerre_gap`, `laguerre_gap_weak` | `z_i - z_{i+1} >= sqrt(2(1+sqrt(1+8ν^2)))/(2N-1) >= 2·2^{1/4} sqrt(ν)/(2N-1)` |
//! | `laguerre_gap_large_nu`, `laguerre_gap_large_nu_weak` | the `ν >= 1` gap bounds built on the Bessel-zero estimate |
//! | `laguerre_sqrt_gap` | `sqrt(z_i) - sqrt(z_{i+1}) >= 1/sqrt(2N-1)` |
//! | `cmp_laguerre_smallest_root_bessel` | `z_N >= (ν^2-1)/(4(N+ν/2))` |
//! | `cmp_laguerre_gap_nu_minus_one` | `gap >= (ν-1)/sqrt((N+ν-1)N)` |
//! | `cmp_laguerre_gap_linear_nu` | `gap >= 2 sqrt(2) ν/sqrt((N+ν)N)` |
//! | `cmp_laguerre_gap_pi` | `gap >= π sqrt(2)/sqrt(2νN+ν+2N^2)` |
//! | `jacobi_diag_square` | diagonal of `S^2` `<= M^2` |
//! | `jacobi_upper_boundary`, `_weak` | `1 - z_N >= 8(α+1)/(M+4(α+1)+sqrt(M^2-16(α+1)(β+1))) >= 4(α+1)/(M+2(α+1))` |
//! | `jacobi_lower_boundary`, `_weak` | the same with `α ↔ β` for `1 + z_1` |
//! | `jacobi_boundary_product` | `1 - z_i^2 >= 2 min(α+1, β+1)/M` |
//! | `jacobi_boundary_product_symmetric` | `1 - z_i^2 >= 8(α+1)/(M+4(α+1))`, only `α = β` |
//! | `jacobi_gap` | `z_{i+1} - z_i >= 2^{7/4} min(α+1, β+1)^{1/2}/M` |
//! | `jacobi_gap_symmetric` | `z_{i+1} - z_i >= 2^{11/4}(α+1)^{1/2}/sqrt(M(M+4(α+1)))`, only `α = β` |
//! | `cmp_jacobi_upper_boundary_asymptotic` | `1 - z_N >= α(α+2)/(2(N+(α+β+1)/2)^2)` (leading term) |
//!
//! `M = M(α, β, N)` is the spectral radius of the Jacobi `S_N`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::covariance::{diag_square_closed_form, max_eigenvalue};
use crate::error::{Error, Result};
use crate::opoly::{FamilyKind, PolynomialFamily};
use crate::roots::RootVector;

/// Relative one-sided tolerance used for `holds`.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Derived,
    Comparator,
}

/// `Lower`: the observed quantity must be at least the bound.
/// `Upper`: the observed quantity must be at most the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundSense {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Applicable,
    /// The bound is not defined for these parameters. Numeric fields are NaN.
    NotApplicable,
    /// A lower bound that is not positive, hence says nothing.
    Vacuous,
}

/// One inequality evaluated at one (family, N, index).
///
/// `slack` is oriented so that a nonnegative value means the inequality is
/// satisfied: `observed - bound` for lower bounds, `bound - observed` for
/// upper bounds. `sharpness` is `observed / bound` (lower) or
/// `bound / observed` (upper), so it equals 1 at equality and exceeds 1
/// whenever the bound holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_id: &'static str,
    pub family: PolynomialFamily,
    pub n: usize,
    pub index: Option<usize>,
    pub bound_value: f64,
    pub observed_value: f64,
    pub slack: f64,
    pub holds: bool,
    pub sharpness: f64,
    pub kind: BoundKind,
    pub sense: BoundSense,
    pub status: BoundStatus,
}

impl BoundReport {
    #[allow(clippy::too_many_arguments)]
    fn evaluate(
        bound_id: &'static str,
        kind: BoundKind,
        sense: BoundSense,
        family: PolynomialFamily,
        n: usize,
        index: Option<usize>,
        bound_value: f64,
        observed_value: f64,
    ) -> Self {
        let (slack, sharpness) = match sense {
            BoundSense::Lower => (observed_value - bound_value, observed_value / bound_value),
            BoundSense::Upper => (bound_value - observed_value, bound_value / observed_value),
        };
        let status = if sense == BoundSense::Lower && bound_value <= 0.0 {
            BoundStatus::Vacuous
        } else {
            BoundStatus::Applicable
        };
        let mut report = BoundReport {
            bound_id,
            family,
            n,
            index,
            bound_value,
            observed_value,
            slack,
            holds: false,
            sharpness,
            kind,
            sense,
            status,
        };
        report.holds = report.check(DEFAULT_TOLERANCE);
        report
    }

    fn not_applicable(
        bound_id: &'static str,
        kind: BoundKind,
        sense: BoundSense,
        family: PolynomialFamily,
        n: usize,
    ) -> Self {
        BoundReport {
            bound_id,
            family,
            n,
            index: None,
            bound_value: f64::NAN,
            observed_value: f64::NAN,
            slack: f64::NAN,
            holds: true,
            sharpness: f64::NAN,
            kind,
            sense,
            status: BoundStatus::NotApplicable,
        }
    }

    fn check(&self, tolerance: f64) -> bool {
        match self.status {
            BoundStatus::NotApplicable => true,
            _ => self.slack >= -tolerance * self.bound_value.abs().max(1.0),
        }
    }

    /// Re-evaluates `holds` with a different relative tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.holds = self.check(tolerance);
        self
    }

    /// An applicable derived bound that fails: the only kind of row that
    /// counts as a mathematical violation.
    pub fn is_violation(&self) -> bool {
        self.kind == BoundKind::Derived && self.status == BoundStatus::Applicable && !self.holds
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

/// Sums `Σ_{l≠i} (z_i - z_l)^{-p}` for every `i`.
fn inverse_power_sums(z: &[f64], p: i32) -> Vec<f64> {
    (0..z.len()).map(|i| (0..z.len()).filter(|&l| l != i).map(|l| (z[i] - z[l]).powi(-p)).sum()).collect()
}

/// Hermite bounds. Requires N >= 2; for N = 1 every statement is vacuous
/// and the list is empty.
pub fn hermite_diag_bound(rv: &RootVector) -> Result<Vec<BoundReport>> {
    expect_family(rv, FamilyKind::Hermite)?;
    let n = rv.n();
    if n < 2 {
        return Ok(Vec::new());
    }
    let family = rv.family();
    let nf = n as f64;
    let diag = diag_square_closed_form(rv);
    let inv2 = inverse_power_sums(rv.roots(), 2);
    let inv4 = inverse_power_sums(rv.roots(), 4);

    let upper = |id, i: usize, bound, observed| {
        BoundReport::evaluate(id, BoundKind::Derived, BoundSense::Upper, family, n, Some(i), bound, observed)
    };
    let mut out = Vec::with_capacity(5 * n);
    for i in 0..n {
        out.push(upper("hermite_diag_square", i + 1, (nf - 1.0).powi(3) / nf, diag[i]));
        out.push(upper("hermite_inverse_fourth", i + 1, (nf - 1.0).powi(3) / (2.0 * nf), inv4[i]));
        out.push(upper("hermite_inverse_square", i + 1, (nf - 1.0).powf(1.5) / nf.sqrt(), inv2[i]));
    }
    let gap_bound = (2.0 * nf).powf(0.25) / (nf - 1.0).powf(0.75);
    let elementary = 2.0 / nf.sqrt();
    for (i, g) in rv.gaps().into_iter().enumerate() {
        out.push(BoundReport::evaluate(
            "hermite_gap",
            BoundKind::Derived,
            BoundSense::Lower,
            family,
            n,
            Some(i + 1),
            gap_bound,
            g,
        ));
        out.push(BoundReport::evaluate(
            "cmp_hermite_gap",
            BoundKind::Comparator,
            BoundSense::Lower,
            family,
            n,
            Some(i + 1),
            elementary,
            g,
        ));
    }
    Ok(out)
}

/// Closed forms of the Laguerre gap bounds that do not depend on the index.
struct LaguerreGapBounds {
    gap: f64,
    gap_weak: f64,
    /// `None` for ν < 1.
    large_nu: Option<(f64, f64)>,
}

fn laguerre_gap_bounds(nu: f64, n: usize) -> LaguerreGapBounds {
    let nf = n as f64;
    let m = 2.0 * nf - 1.0;
    let gap = (2.0 * (1.0 + (1.0 + 8.0 * nu * nu).sqrt())).sqrt() / m;
    let gap_weak = 2.0 * 2f64.powf(0.25) * nu.sqrt() / m;
    let large_nu = (nu >= 1.0).then(|| {
        let half = nf + nu / 2.0;
        let x = m * m * (nu * nu - 1.0).powi(2) / (half * half);
        let strong = SQRT_2 / m * (2.0 + SQRT_2 * (2.0 + x).sqrt()).sqrt();
        let weak = 2f64.powf(0.75) * (nu * nu - 1.0).sqrt() / (m * half).sqrt();
        (strong, weak)
    });
    LaguerreGapBounds { gap, gap_weak, large_nu }
}

fn laguerre_nu(rv: &RootVector) -> Result<f64> {
    expect_family(rv, FamilyKind::Laguerre)?;
    match rv.family() {
        PolynomialFamily::Laguerre { nu } => Ok(nu),
        _ => unreachable!(),
    }
}

/// Derived Laguerre bounds. Gap bounds need N >= 2.
pub fn laguerre_bounds(rv: &RootVector) -> Result<Vec<BoundReport>> {
    let nu = laguerre_nu(rv)?;
    let family = rv.family();
    let n = rv.n();
    let nf = n as f64;
    let m = 2.0 * nf - 1.0;
    let lower = |id, i: usize, bound, observed| {
        BoundReport::evaluate(id, BoundKind::Derived, BoundSense::Lower, family, n, Some(i), bound, observed)
    };

    let mut out = Vec::new();
    for (i, d) in diag_square_closed_form(rv).into_iter().enumerate() {
        out.push(BoundReport::evaluate(
            "laguerre_diag_square",
            BoundKind::Derived,
            BoundSense::Upper,
            family,
            n,
            Some(i + 1),
            m * m,
            d,
        ));
    }
    out.push(lower("laguerre_smallest_root", n, nu / m, rv.z(n)));
    if n < 2 {
        return Ok(out);
    }

    let bounds = laguerre_gap_bounds(nu, n);
    let gaps = rv.gaps();
    for (i, &g) in gaps.iter().enumerate() {
        out.push(lower("laguerre_gap", i + 1, bounds.gap, g));
        out.push(lower("laguerre_gap_weak", i + 1, bounds.gap_weak, g));
    }
    match bounds.large_nu {
        Some((strong, weak)) => {
            for (i, &g) in gaps.iter().enumerate() {
                out.push(lower("laguerre_gap_large_nu", i + 1, strong, g));
                out.push(lower("laguerre_gap_large_nu_weak", i + 1, weak, g));
            }
        }
        None => {
            for id in ["laguerre_gap_large_nu", "laguerre_gap_large_nu_weak"] {
                out.push(BoundReport::not_applicable(id, BoundKind::Derived, BoundSense::Lower, family, n));
            }
        }
    }
    let sqrt_bound = 1.0 / m.sqrt();
    for i in 1..n {
        out.push(lower("laguerre_sqrt_gap", i, sqrt_bound, rv.z(i).sqrt() - rv.z(i + 1).sqrt()));
    }
    Ok(out)
}

struct LaguerreComparatorBounds {
    smallest_root: f64,
    nu_minus_one: f64,
    linear_nu: f64,
    pi: f64,
}

fn laguerre_comparator_bounds(nu: f64, n: usize) -> LaguerreComparatorBounds {
    let nf = n as f64;
    LaguerreComparatorBounds {
        smallest_root: (nu * nu - 1.0) / (4.0 * (nf + nu / 2.0)),
        nu_minus_one: (nu - 1.0) / ((nf + nu - 1.0) * nf).sqrt(),
        linear_nu: 2.0 * SQRT_2 * nu / ((nf + nu) * nf).sqrt(),
        pi: PI * SQRT_2 / (2.0 * nu * nf + nu + 2.0 * nf * nf).sqrt(),
    }
}

/// Literature bounds for Laguerre roots, tabulated for comparison only.
pub fn laguerre_comparators(rv: &RootVector) -> Result<Vec<BoundReport>> {
    let nu = laguerre_nu(rv)?;
    let family = rv.family();
    let n = rv.n();
    let c = laguerre_comparator_bounds(nu, n);
    let lower = |id, i: usize, bound, observed| {
        BoundReport::evaluate(id, BoundKind::Comparator, BoundSense::Lower, family, n, Some(i), bound, observed)
    };
    let mut out = vec![lower("cmp_laguerre_smallest_root_bessel", n, c.smallest_root, rv.z(n))];
    for (i, g) in rv.gaps().into_iter().enumerate() {
        out.push(lower("cmp_laguerre_gap_nu_minus_one", i + 1, c.nu_minus_one, g));
        out.push(lower("cmp_laguerre_gap_linear_nu", i + 1, c.linear_nu, g));
        out.push(lower("cmp_laguerre_gap_pi", i + 1, c.pi, g));
    }
    Ok(out)
}

struct JacobiBoundValues {
    upper: f64,
    upper_weak: f64,
    lower: f64,
    lower_weak: f64,
    product: f64,
    product_symmetric: Option<f64>,
    gap: f64,
    gap_symmetric: Option<f64>,
}

fn jacobi_bound_values(alpha: f64, beta: f64, n: usize) -> JacobiBoundValues {
    let m = max_eigenvalue(alpha, beta, n);
    let (ap, bp) = (alpha + 1.0, beta + 1.0);
    let root = (m * m - 16.0 * ap * bp).max(0.0).sqrt();
    let min = ap.min(bp);
    let symmetric = alpha == beta;
    JacobiBoundValues {
        upper: 8.0 * ap / (m + 4.0 * ap + root),
        upper_weak: 4.0 * ap / (m + 2.0 * ap),
        lower: 8.0 * bp / (m + 4.0 * bp + root),
        lower_weak: 4.0 * bp / (m + 2.0 * bp),
        product: 2.0 * min / m,
        product_symmetric: symmetric.then(|| 8.0 * ap / (m + 4.0 * ap)),
        gap: 2f64.powf(1.75) * min.sqrt() / m,
        gap_symmetric: symmetric.then(|| 2f64.powf(2.75) * ap.sqrt() / (m * (m + 4.0 * ap)).sqrt()),
    }
}

fn jacobi_params(rv: &RootVector) -> Result<(f64, f64)> {
    expect_family(rv, FamilyKind::Jacobi)?;
    match rv.family() {
        PolynomialFamily::Jacobi { alpha, beta } => Ok((alpha, beta)),
        _ => unreachable!(),
    }
}

/// Derived Jacobi bounds. Roots are ascending: `z(N)` is next to `+1`.
pub fn jacobi_bounds(rv: &RootVector) -> Result<Vec<BoundReport>> {
    let (alpha, beta) = jacobi_params(rv)?;
    let family = rv.family();
    let n = rv.n();
    let m = max_eigenvalue(alpha, beta, n);
    let v = jacobi_bound_values(alpha, beta, n);
    let lower = |id, i: usize, bound, observed| {
        BoundReport::evaluate(id, BoundKind::Derived, BoundSense::Lower, family, n, Some(i), bound, observed)
    };
    let na = |id| BoundReport::not_applicable(id, BoundKind::Derived, BoundSense::Lower, family, n);

    let mut out = Vec::new();
    for (i, d) in diag_square_closed_form(rv).into_iter().enumerate() {
        out.push(BoundReport::evaluate(
            "jacobi_diag_square",
            BoundKind::Derived,
            BoundSense::Upper,
            family,
            n,
            Some(i + 1),
            m * m,
            d,
        ));
    }
    let top = 1.0 - rv.z(n);
    let bottom = 1.0 + rv.z(1);
    out.push(lower("jacobi_upper_boundary", n, v.upper, top));
    out.push(lower("jacobi_upper_boundary_weak", n, v.upper_weak, top));
    out.push(lower("jacobi_lower_boundary", 1, v.lower, bottom));
    out.push(lower("jacobi_lower_boundary_weak", 1, v.lower_weak, bottom));

    for i in 1..=n {
        let z = rv.z(i);
        out.push(lower("jacobi_boundary_product", i, v.product, 1.0 - z * z));
    }
    match v.product_symmetric {
        Some(b) => {
            for i in 1..=n {
                let z = rv.z(i);
                out.push(lower("jacobi_boundary_product_symmetric", i, b, 1.0 - z * z));
            }
        }
        None => out.push(na("jacobi_boundary_product_symmetric")),
    }

    if n >= 2 {
        let gaps = rv.gaps();
        for (i, &g) in gaps.iter().enumerate() {
            out.push(lower("jacobi_gap", i + 1, v.gap, g));
        }
        match v.gap_symmetric {
            Some(b) => {
                for (i, &g) in gaps.iter().enumerate() {
                    out.push(lower("jacobi_gap_symmetric", i + 1, b, g));
                }
            }
            None => out.push(na("jacobi_gap_symmetric")),
        }
    }
    Ok(out)
}

/// Leading term of the large-N asymptotic lower bound for `1 - z_N`,
/// defined for `α, β > -1/2`. Informational only.
pub fn jacobi_comparator(rv: &RootVector) -> Result<BoundReport> {
    let (alpha, beta) = jacobi_params(rv)?;
    let family = rv.family();
    let n = rv.n();
    let id = "cmp_jacobi_upper_boundary_asymptotic";
    if !(alpha > -0.5 && beta > -0.5) {
        return Ok(BoundReport::not_applicable(id, BoundKind::Comparator, BoundSense::Lower, family, n));
    }
    let bound = jacobi_asymptotic_bound(alpha, beta, n);
    Ok(BoundReport::evaluate(id, BoundKind::Comparator, BoundSense::Lower, family, n, Some(n), bound, 1.0 - rv.z(n)))
}

fn jacobi_asymptotic_bound(alpha: f64, beta: f64, n: usize) -> f64 {
    alpha * (alpha + 2.0) / (2.0 * (n as f64 + (alpha + beta + 1.0) / 2.0).powi(2))
}

/// Ratio `comparator / reference` of two lower-bound values for the same
/// quantity. A ratio above 1 means the comparator is the stronger bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crossover {
    pub comparator_id: &'static str,
    pub reference_id: &'static str,
    pub comparator_bound: f64,
    pub reference_bound: f64,
    pub ratio: f64,
}

impl Crossover {
    fn new(
        comparator_id: &'static str,
        comparator_bound: f64,
        reference_id: &'static str,
        reference_bound: f64,
    ) -> Self {
        Crossover {
            comparator_id,
            reference_id,
            comparator_bound,
            reference_bound,
            ratio: comparator_bound / reference_bound,
        }
    }
}

/// Comparator-versus-derived bound ratios at one (family, N).
pub fn laguerre_crossovers(rv: &RootVector) -> Result<Vec<Crossover>> {
    let nu = laguerre_nu(rv)?;
    let n = rv.n();
    let c = laguerre_comparator_bounds(nu, n);
    let m = 2.0 * n as f64 - 1.0;
    let mut out =
        vec![Crossover::new("cmp_laguerre_smallest_root_bessel", c.smallest_root, "laguerre_smallest_root", nu / m)];
    if n < 2 {
        return Ok(out);
    }
    let own = laguerre_gap_bounds(nu, n);
    for (id, value) in [
        ("cmp_laguerre_gap_nu_minus_one", c.nu_minus_one),
        ("cmp_laguerre_gap_linear_nu", c.linear_nu),
        ("cmp_laguerre_gap_pi", c.pi),
    ] {
        out.push(Crossover::new(id, value, "laguerre_gap", own.gap));
        if let Some((strong, _)) = own.large_nu {
            out.push(Crossover::new(id, value, "laguerre_gap_large_nu", strong));
        }
    }
    Ok(out)
}

/// Asymptotic comparator versus the derived bound for `1 - z_N`; `None`
/// outside `α, β > -1/2`.
pub fn jacobi_crossover(rv: &RootVector) -> Result<Option<Crossover>> {
    let (alpha, beta) = jacobi_params(rv)?;
    if !(alpha > -0.5 && beta > -0.5) {
        return Ok(None);
    }
    let n = rv.n();
    Ok(Some(Crossover::new(
        "cmp_jacobi_upper_boundary_asymptotic",
        jacobi_asymptotic_bound(alpha, beta, n),
        "jacobi_upper_boundary",
        jacobi_bound_values(alpha, beta, n).upper,
    )))
}

/// All crossovers for a root vector of any family.
pub fn crossovers(rv: &RootVector) -> Result<Vec<Crossover>> {
    match rv.family().kind() {
        FamilyKind::Hermite => {
            let n = rv.n();
            if n < 2 {
                return Ok(Vec::new());
            }
            let nf = n as f64;
            Ok(vec![Crossover::new(
                "cmp_hermite_gap",
                2.0 / nf.sqrt(),
                "hermite_gap",
                (2.0 * nf).powf(0.25) / (nf - 1.0).powf(0.75),
            )])
        }
        FamilyKind::Laguerre => laguerre_crossovers(rv),
        FamilyKind::Jacobi => Ok(jacobi_crossover(rv)?.into_iter().collect()),
    }
}

/// Every report (derived and comparator) for one root vector.
pub fn all_bounds(rv: &RootVector) -> Result<Vec<BoundReport>> {
    match rv.family().kind() {
        FamilyKind::Hermite => hermite_diag_bound(rv),
        FamilyKind::Laguerre => {
            let mut out = laguerre_bounds(rv)?;
            out.extend(laguerre_comparators(rv)?);
            Ok(out)
        }
        FamilyKind::Jacobi => {
            let mut out = jacobi_bounds(rv)?;
            out.push(jacobi_comparator(rv)?);
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSharpness {
    pub bound_id: &'static str,
    pub kind: BoundKind,
    pub count: usize,
    /// Smallest sharpness ratio (the tightest index).
    pub worst: f64,
    pub mean: f64,
    pub all_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessSummary {
    pub family: PolynomialFamily,
    pub n: usize,
    pub per_bound: Vec<BoundSharpness>,
    /// Sum of the per-index diagonal-of-square left-hand sides divided by
    /// `tr((S - I)^2)`. Exactly 1 up to rounding (Hermite and Laguerre only).
    pub identity_ratio: Option<f64>,
    pub violations: usize,
}

/// Aggregates the reports of one (family, N). Returns `Ok(None)` for an
/// empty input.
pub fn sharpness_summary(reports: &[BoundReport]) -> Result<Option<SharpnessSummary>> {
    let Some(first) = reports.first() else {
        return Ok(None);
    };
    let (family, n) = (first.family, first.n);
    if reports.iter().any(|r| r.family != family || r.n != n) {
        return Err(Error::MixedReports);
    }

    let mut groups: BTreeMap<&'static str, Vec<&BoundReport>> = BTreeMap::new();
    for r in reports.iter().filter(|r| r.status == BoundStatus::Applicable) {
        groups.entry(r.bound_id).or_default().push(r);
    }
    let per_bound = groups
        .into_iter()
        .map(|(bound_id, rows)| BoundSharpness {
            bound_id,
            kind: rows[0].kind,
            count: rows.len(),
            worst: rows.iter().map(|r| r.sharpness).fold(f64::INFINITY, f64::min),
            mean: rows.iter().map(|r| r.sharpness).sum::<f64>() / rows.len() as f64,
            all_hold: rows.iter().all(|r| r.holds),
        })
        .collect();

    let nf = n as f64;
    let identity = match family.kind() {
        FamilyKind::Hermite => Some(("hermite_diag_square", nf * (nf - 1.0) * (2.0 * nf - 1.0) / 6.0)),
        FamilyKind::Laguerre => Some(("laguerre_diag_square", nf * (2.0 * nf - 1.0) * (2.0 * nf + 1.0) / 3.0)),
        FamilyKind::Jacobi => None,
    };
    let identity_ratio = identity.and_then(|(id, total)| {
        let rows: Vec<f64> = reports.iter().filter(|r| r.bound_id == id).map(|r| r.observed_value).collect();
        (!rows.is_empty()).then(|| rows.iter().sum::<f64>() / total)
    });

    Ok(Some(SharpnessSummary {
        family,
        n,
        per_bound,
        identity_ratio,
        violations: reports.iter().filter(|r| r.is_violation()).count(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::compute_roots;
    use approx::assert_relative_eq;

    fn find<'a>(reports: &'a [BoundReport], id: &str, index: Option<usize>) -> &'a BoundReport {
        reports.iter().find(|r| r.bound_id == id && r.index == index).unwrap_or_else(|| panic!("{id} {index:?}"))
    }

    fn laguerre(nu: f64, n: usize) -> RootVector {
        compute_roots(PolynomialFamily::Laguerre { nu }, n).unwrap()
    }

    fn jacobi(alpha: f64, beta: f64, n: usize) -> RootVector {
        compute_roots(PolynomialFamily::Jacobi { alpha, beta }, n).unwrap()
    }

    #[test]
    fn hermite_two_is_an_equality() {
        let reports = hermite_diag_bound(&compute_roots(PolynomialFamily::Hermite, 2).unwrap()).unwrap();
        let gap = find(&reports, "hermite_gap", Some(1));
        assert_relative_eq!(gap.observed_value, 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gap.bound_value, 2f64.sqrt(), max_relative = 1e-15);
        assert!(gap.slack.abs() <= 1e-12 && gap.holds);

        let diag = find(&reports, "hermite_diag_square", Some(1));
        assert_relative_eq!(diag.observed_value, 0.5, max_relative = 1e-14);
        assert_eq!(diag.bound_value, 0.5);
        assert!(diag.holds);
    }

    #[test]
    fn hermite_n1_is_empty_and_family_checked() {
        assert!(hermite_diag_bound(&compute_roots(PolynomialFamily::Hermite, 1).unwrap()).unwrap().is_empty());
        assert!(matches!(hermite_diag_bound(&laguerre(1.0, 3)), Err(Error::FamilyMismatch { .. })));
        assert!(matches!(laguerre_bounds(&jacobi(0.0, 0.0, 3)), Err(Error::FamilyMismatch { .. })));
        assert!(matches!(jacobi_bounds(&laguerre(1.0, 3)), Err(Error::FamilyMismatch { .. })));
        assert!(matches!(laguerre_comparators(&jacobi(0.0, 0.0, 3)), Err(Error::FamilyMismatch { .. })));
    }

    #[test]
    fn hermite_ten_holds() {
        let reports = hermite_diag_bound(&compute_roots(PolynomialFamily::Hermite, 10).unwrap()).unwrap();
        assert!(reports.iter().all(|r| r.holds));
        assert_eq!(reports.iter().filter(|r| r.bound_id == "hermite_gap").count(), 9);
    }

    #[test]
    fn laguerre_n1_equalities() {
        for nu in [0.1, 3.0, 50.0] {
            let reports = laguerre_bounds(&laguerre(nu, 1)).unwrap();
            let root = find(&reports, "laguerre_smallest_root", Some(1));
            assert!(root.slack.abs() <= 1e-12 * nu.max(1.0));
            let diag = find(&reports, "laguerre_diag_square", Some(1));
            assert_relative_eq!(diag.observed_value, 1.0, max_relative = 1e-14);
            assert_eq!(diag.bound_value, 1.0);
            assert!(diag.holds);
        }
    }

    #[test]
    fn laguerre_small_nu_marks_large_nu_bounds() {
        let reports = laguerre_bounds(&laguerre(0.5, 5)).unwrap();
        let na = find(&reports, "laguerre_gap_large_nu", None);
        assert_eq!(na.status, BoundStatus::NotApplicable);
        assert!(na.holds && na.bound_value.is_nan());
        assert!(reports.iter().filter(|r| r.status == BoundStatus::Applicable).all(|r| r.holds));
    }

    #[test]
    fn comparator_markers() {
        let reports = laguerre_comparators(&laguerre(0.2, 4)).unwrap();
        let bessel = find(&reports, "cmp_laguerre_smallest_root_bessel", Some(4));
        assert!(bessel.bound_value < 0.0);
        assert_eq!(bessel.status, BoundStatus::Vacuous);

        let zero = jacobi_comparator(&jacobi(0.0, 1.0, 7)).unwrap();
        assert_eq!(zero.bound_value, 0.0);
        assert_eq!(zero.status, BoundStatus::Vacuous);

        let outside = jacobi_comparator(&jacobi(-0.5, -0.5, 7)).unwrap();
        assert_eq!(outside.status, BoundStatus::NotApplicable);
    }

    #[test]
    fn crossover_directions() {
        let ratio = |rv: &RootVector, cmp: &str, reference: &str| {
            crossovers(rv)
                .unwrap()
                .into_iter()
                .find(|c| c.comparator_id == cmp && c.reference_id == reference)
                .unwrap()
                .ratio
        };
        assert!(ratio(&laguerre(10.0, 5), "cmp_laguerre_gap_linear_nu", "laguerre_gap_large_nu") > 1.0);
        assert!(ratio(&laguerre(0.1, 10), "cmp_laguerre_gap_pi", "laguerre_gap") > 1.0);
        assert!(ratio(&laguerre(50.0, 10), "cmp_laguerre_gap_pi", "laguerre_gap") < 1.0);
        let asym = "cmp_jacobi_upper_boundary_asymptotic";
        assert!(ratio(&jacobi(5.0, 0.0, 30), asym, "jacobi_upper_boundary") > 1.0);
        assert!(ratio(&jacobi(0.5, 0.5, 30), asym, "jacobi_upper_boundary") < 1.0);
    }

    #[test]
    fn jacobi_n1_boundaries() {
        // For α = β both first inequalities are equalities at N = 1.
        let reports = jacobi_bounds(&jacobi(0.0, 0.0, 1)).unwrap();
        assert!(find(&reports, "jacobi_upper_boundary", Some(1)).slack.abs() <= 1e-12);
        assert!(find(&reports, "jacobi_lower_boundary", Some(1)).slack.abs() <= 1e-12);
        let sym = find(&reports, "jacobi_boundary_product_symmetric", Some(1));
        assert_relative_eq!(sym.bound_value, 1.0, max_relative = 1e-15);
        assert_relative_eq!(sym.observed_value, 1.0, max_relative = 1e-15);

        // Otherwise only the boundary the root leans towards is attained:
        // with α > β the root sits nearer -1.
        let reports = jacobi_bounds(&jacobi(1.0, -0.9, 1)).unwrap();
        assert!(find(&reports, "jacobi_lower_boundary", Some(1)).slack.abs() <= 1e-12);
        assert!(find(&reports, "jacobi_upper_boundary", Some(1)).slack > 0.5);
    }

    #[test]
    fn jacobi_ten_holds() {
        let rv = jacobi(2.0, 3.0, 10);
        let reports = jacobi_bounds(&rv).unwrap();
        assert!(reports.iter().all(|r| r.holds));
        assert_eq!(find(&reports, "jacobi_gap_symmetric", None).status, BoundStatus::NotApplicable);
    }

    #[test]
    fn tolerance_override() {
        let reports = hermite_diag_bound(&compute_roots(PolynomialFamily::Hermite, 2).unwrap()).unwrap();
        let mut gap = find(&reports, "hermite_gap", Some(1)).clone();
        gap.slack = -1e-11;
        assert!(gap.clone().with_tolerance(1e-10).holds);
        assert!(!gap.with_tolerance(1e-12).holds);
    }

    #[test]
    fn summary_identity_ratio() {
        let h2 = hermite_diag_bound(&compute_roots(PolynomialFamily::Hermite, 2).unwrap()).unwrap();
        let s = sharpness_summary(&h2).unwrap().unwrap();
        assert_relative_eq!(s.identity_ratio.unwrap(), 1.0, max_relative = 1e-10);
        assert_eq!(s.violations, 0);

        for nu in [0.1, 2.0, 50.0] {
            for n in [1, 6, 25] {
                let reports = all_bounds(&laguerre(nu, n)).unwrap();
                let s = sharpness_summary(&reports).unwrap().unwrap();
                assert_relative_eq!(s.identity_ratio.unwrap(), 1.0, max_relative = 1e-10);
            }
        }

        assert_eq!(sharpness_summary(&[]).unwrap(), None);
        let mut mixed = h2.clone();
        mixed.extend(laguerre_bounds(&laguerre(1.0, 2)).unwrap());
        assert_eq!(sharpness_summary(&mixed), Err(Error::MixedReports));
    }

    #[test]
    fn sharpness_invariant() {
        let rv = jacobi(10.0, 10.0, 12);
        for r in all_bounds(&rv).unwrap() {
            assert_eq!(
                r.holds,
                r.slack >= -DEFAULT_TOLERANCE * r.bound_value.abs().max(1.0) || r.status == BoundStatus::NotApplicable
            );
            if r.holds && r.bound_value > 0.0 && r.status == BoundStatus::Applicable {
                assert!(r.sharpness >= 1.0 - 1e-10, "{r:?}");
            }
        }
    }
}
