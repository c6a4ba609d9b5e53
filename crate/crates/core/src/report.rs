//! Sweeps over (family, parameters, N) and their CSV/JSON serialisation.
//!
//! Output is deterministic: sweep points are evaluated in parallel but rows
//! are ordered by (family, parameters, N, id, index), CSV uses a fixed
//! column order with LF line endings, and floats are written in their
//! shortest round-trip form.

use std::cmp::Ordering as CmpOrdering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{all_bounds, crossovers, sharpness_summary, BoundReport, BoundStatus, Crossover, SharpnessSummary};
use crate::covariance::{
    diag_of_square_routes, hermite_s, jacobi_s, laguerre_form_difference, laguerre_s, trace_identities, Coordinate,
    InverseCovariance, DIAG_ROUTE_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::opoly::{FamilyKind, PolynomialFamily};
use crate::roots::{compute_roots, gap_statistics, RootVector};

pub const DEFAULT_NUS: [f64; 6] = [0.1, 0.5, 1.0, 2.0, 10.0, 50.0];
pub const DEFAULT_ALPHA_BETA: [(f64, f64); 5] = [(-0.5, -0.5), (0.0, 0.0), (1.0, -0.9), (2.0, 3.0), (10.0, 10.0)];
pub const DEFAULT_N_MAX: usize = 40;
/// Laguerre Z/SqrtR entrywise agreement.
pub const FORM_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Inclusive range of N with a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NRange {
    pub min: usize,
    pub max: usize,
    pub step: usize,
}

impl NRange {
    pub fn new(min: usize, max: usize, step: usize) -> Result<Self> {
        if min < 1 {
            return Err(Error::InvalidInput("N range must start at 1 or above".into()));
        }
        if max < min {
            return Err(Error::InvalidInput(format!("empty N range {min}..={max}")));
        }
        if step == 0 {
            return Err(Error::InvalidInput("N step must be positive".into()));
        }
        Ok(NRange { min, max, step })
    }

    pub fn single(n: usize) -> Result<Self> {
        Self::new(n, n, 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.min..=self.max).step_by(self.step)
    }
}

/// One family/parameter choice swept over a range of N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridEntry {
    pub family: PolynomialFamily,
    pub n: NRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub grid: Vec<GridEntry>,
    /// Relative tolerance for bounds (`holds`) and trace identities.
    pub tolerance: f64,
    pub format: OutputFormat,
}

impl SweepConfig {
    pub fn new(grid: Vec<GridEntry>, tolerance: f64, format: OutputFormat) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::InvalidInput("sweep has no points".into()));
        }
        for entry in &grid {
            entry.family.validate()?;
            NRange::new(entry.n.min, entry.n.max, entry.n.step)?;
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {tolerance} must be finite and nonnegative")));
        }
        Ok(SweepConfig { grid, tolerance, format })
    }

    /// Default grid for one family: Hermite N in 2..=40; Laguerre over the
    /// default ν list and Jacobi over the default (α, β) list with N in 1..=40.
    pub fn default_grid(kind: FamilyKind) -> Vec<GridEntry> {
        let range = |min| NRange { min, max: DEFAULT_N_MAX, step: 1 };
        match kind {
            FamilyKind::Hermite => vec![GridEntry { family: PolynomialFamily::Hermite, n: range(2) }],
            FamilyKind::Laguerre => DEFAULT_NUS
                .iter()
                .map(|&nu| GridEntry { family: PolynomialFamily::Laguerre { nu }, n: range(1) })
                .collect(),
            FamilyKind::Jacobi => DEFAULT_ALPHA_BETA
                .iter()
                .map(|&(alpha, beta)| GridEntry { family: PolynomialFamily::Jacobi { alpha, beta }, n: range(1) })
                .collect(),
        }
    }

    /// The full default sweep over all three families.
    pub fn default_sweep(format: OutputFormat) -> Self {
        let grid = [FamilyKind::Hermite, FamilyKind::Laguerre, FamilyKind::Jacobi]
            .into_iter()
            .flat_map(Self::default_grid)
            .collect();
        SweepConfig { grid, tolerance: crate::bounds::DEFAULT_TOLERANCE, format }
    }

    /// Sweep points sorted by (family, parameters, N), duplicates removed.
    pub fn points(&self) -> Vec<(PolynomialFamily, usize)> {
        let mut pts: Vec<(PolynomialFamily, usize)> =
            self.grid.iter().flat_map(|e| e.n.iter().map(move |n| (e.family, n))).collect();
        pts.sort_by(|a, b| family_cmp(&a.0, &b.0).then(a.1.cmp(&b.1)));
        pts.dedup_by(|a, b| family_cmp(&a.0, &b.0) == CmpOrdering::Equal && a.1 == b.1);
        pts
    }
}

fn family_cmp(a: &PolynomialFamily, b: &PolynomialFamily) -> CmpOrdering {
    let params = |f: &PolynomialFamily| match *f {
        PolynomialFamily::Hermite => (0.0, 0.0),
        PolynomialFamily::Laguerre { nu } => (nu, 0.0),
        PolynomialFamily::Jacobi { alpha, beta } => (alpha, beta),
    };
    let (pa, pb) = (params(a), params(b));
    a.kind().cmp(&b.kind()).then(pa.0.total_cmp(&pb.0)).then(pa.1.total_cmp(&pb.1))
}

/// Shortest round-trip representation; NaN becomes an empty cell.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:?}")
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn fmt_index(i: Option<usize>) -> String {
    i.map(|i| i.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// roots

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootRow {
    pub family: &'static str,
    pub params: String,
    pub n: usize,
    pub i: usize,
    pub z: f64,
    /// `|z_{i+1} - z_i|`; absent for the last root.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootPointStats {
    pub family: &'static str,
    pub params: String,
    pub n: usize,
    pub min_gap: Option<f64>,
    pub boundary_low: Option<f64>,
    pub boundary_high: Option<f64>,
    pub polish_skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootsOutput {
    pub rows: Vec<RootRow>,
    pub stats: Vec<RootPointStats>,
}

pub fn run_roots(config: &SweepConfig) -> Result<RootsOutput> {
    let per_point: Vec<(Vec<RootRow>, RootPointStats)> = config
        .points()
        .into_par_iter()
        .map(|(family, n)| {
            let rv = compute_roots(family, n)?;
            let gaps = rv.gaps();
            let (name, params) = (family.kind().name(), family.params_label());
            let rows = (1..=n)
                .map(|i| RootRow {
                    family: name,
                    params: params.clone(),
                    n,
                    i,
                    z: rv.z(i),
                    gap: gaps.get(i - 1).copied(),
                })
                .collect();
            let g = gap_statistics(&rv);
            let stats = RootPointStats {
                family: name,
                params,
                n,
                min_gap: g.min_gap,
                boundary_low: g.boundary_low,
                boundary_high: g.boundary_high,
                polish_skipped: rv.polish_skipped().len(),
            };
            Ok((rows, stats))
        })
        .collect::<Result<_>>()?;
    let (rows, stats): (Vec<Vec<RootRow>>, Vec<RootPointStats>) = per_point.into_iter().unzip();
    Ok(RootsOutput { rows: rows.concat(), stats })
}

impl RootsOutput {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,params,N,i,z_i,gap_i\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.family, r.params, r.n, r.i, fmt_float(r.z), fmt_opt(r.gap));
        }
        out
    }

    pub fn to_json(&self, config: &SweepConfig) -> String {
        let doc = json!({
            "config": config,
            "results": self.rows,
            "summary": { "points": self.stats.len(), "stats": self.stats },
        });
        serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
    }
}

// ---------------------------------------------------------------------------
// verify

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub family: &'static str,
    pub params: String,
    pub n: usize,
    pub check: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Perturbs entry (1, 1) of every assembled matrix by a relative 1e-3.
    /// Negative control: every sweep point must then fail.
    pub corrupt_entry: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyOutput {
    pub rows: Vec<CheckRow>,
}

/// Spectral tolerance: 1e-8 up to N = 20, 1e-6 up to N = 40, and beyond
/// that 1e-4 for the near-degenerate regimes (ν >= 50, min(α, β) < -0.8).
pub fn spectral_tolerance(family: PolynomialFamily, n: usize) -> f64 {
    if n <= 20 {
        return 1e-8;
    }
    let extreme = match family {
        PolynomialFamily::Hermite => false,
        PolynomialFamily::Laguerre { nu } => nu >= 50.0,
        PolynomialFamily::Jacobi { alpha, beta } => alpha.min(beta) < -0.8,
    };
    if n > 40 && extreme {
        1e-4
    } else {
        1e-6
    }
}

fn build_s(rv: &RootVector) -> Result<InverseCovariance> {
    match rv.family().kind() {
        FamilyKind::Hermite => hermite_s(rv),
        FamilyKind::Laguerre => laguerre_s(rv, Coordinate::Z),
        FamilyKind::Jacobi => jacobi_s(rv),
    }
}

fn verify_point(family: PolynomialFamily, n: usize, tolerance: f64, options: VerifyOptions) -> Result<Vec<CheckRow>> {
    let rv = compute_roots(family, n)?;
    let mut s = build_s(&rv)?;
    if options.corrupt_entry {
        let v = s.matrix.get(0, 0);
        s.matrix.set(0, 0, v * (1.0 + 1e-3));
    }
    let (name, params) = (family.kind().name(), family.params_label());
    let row = |check, value: f64, tol: f64| CheckRow {
        family: name,
        params: params.clone(),
        n,
        check,
        value,
        tolerance: tol,
        pass: value <= tol,
    };

    let mut rows = Vec::new();
    let spectral_tol = spectral_tolerance(family, n);
    rows.push(row("spectral_max_rel_error", s.spectral_mismatch()?, spectral_tol));
    rows.push(row("diag_square_routes", diag_of_square_routes(&s).max_route_difference(), DIAG_ROUTE_TOLERANCE));
    for id in trace_identities(&rv)? {
        rows.push(row(id.id, id.rel_residual, tolerance));
    }
    if family.kind() == FamilyKind::Laguerre {
        rows.push(row("laguerre_z_vs_sqrt_r", laguerre_form_difference(&rv)?, FORM_TOLERANCE));
    }
    if options.corrupt_entry {
        // Identities are computed from the roots; tie one to the matrix too.
        let trace_err = (s.matrix.trace() - s.predicted.iter().sum::<f64>()).abs() / s.predicted.iter().sum::<f64>();
        rows.push(row("matrix_trace", trace_err, tolerance));
    }
    rows.sort_by(|a, b| a.check.cmp(b.check));
    Ok(rows)
}

pub fn run_verify(config: &SweepConfig, options: VerifyOptions) -> Result<VerifyOutput> {
    let rows: Vec<Vec<CheckRow>> = config
        .points()
        .into_par_iter()
        .map(|(family, n)| verify_point(family, n, config.tolerance, options))
        .collect::<Result<_>>()?;
    Ok(VerifyOutput { rows: rows.concat() })
}

impl VerifyOutput {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,params,N,check,value,tolerance,pass\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.family,
                r.params,
                r.n,
                r.check,
                fmt_float(r.value),
                fmt_float(r.tolerance),
                r.pass
            );
        }
        out
    }

    pub fn to_json(&self, config: &SweepConfig) -> String {
        let doc = json!({
            "config": config,
            "results": self.rows,
            "summary": { "checks": self.rows.len(), "failures": self.failures() },
        });
        serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
    }
}

// ---------------------------------------------------------------------------
// bounds

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointCrossovers {
    pub family: &'static str,
    pub params: String,
    pub n: usize,
    pub crossovers: Vec<Crossover>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsOutput {
    pub rows: Vec<BoundReport>,
    pub summaries: Vec<SharpnessSummary>,
    pub crossovers: Vec<PointCrossovers>,
}

type BoundsPoint = (Vec<BoundReport>, Option<SharpnessSummary>, PointCrossovers);

fn bounds_point(family: PolynomialFamily, n: usize, tolerance: f64) -> Result<BoundsPoint> {
    let rv = compute_roots(family, n)?;
    let mut rows: Vec<BoundReport> = all_bounds(&rv)?.into_iter().map(|r| r.with_tolerance(tolerance)).collect();
    rows.sort_by(|a, b| a.bound_id.cmp(b.bound_id).then(a.index.cmp(&b.index)));
    let summary = sharpness_summary(&rows)?;
    let crossovers = PointCrossovers {
        family: family.kind().name(),
        params: family.params_label(),
        n,
        crossovers: crossovers(&rv)?,
    };
    Ok((rows, summary, crossovers))
}

pub fn run_bounds(config: &SweepConfig) -> Result<BoundsOutput> {
    let points: Vec<BoundsPoint> = config
        .points()
        .into_par_iter()
        .map(|(family, n)| bounds_point(family, n, config.tolerance))
        .collect::<Result<_>>()?;
    let mut out = BoundsOutput { rows: Vec::new(), summaries: Vec::new(), crossovers: Vec::new() };
    for (rows, summary, cross) in points {
        out.rows.extend(rows);
        out.summaries.extend(summary);
        out.crossovers.push(cross);
    }
    Ok(out)
}

impl BoundsOutput {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.is_violation()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,params,N,bound_id,index,bound_value,observed_value,slack,holds,sharpness\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.family.kind().name(),
                r.family.params_label(),
                r.n,
                r.bound_id,
                fmt_index(r.index),
                fmt_float(r.bound_value),
                fmt_float(r.observed_value),
                fmt_float(r.slack),
                r.holds,
                fmt_float(r.sharpness)
            );
        }
        out
    }

    pub fn to_json(&self, config: &SweepConfig) -> String {
        let results: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "family": r.family.kind().name(),
                    "params": r.family.params_label(),
                    "N": r.n,
                    "bound_id": r.bound_id,
                    "index": r.index,
                    "bound_value": r.bound_value,
                    "observed_value": r.observed_value,
                    "slack": r.slack,
                    "holds": r.holds,
                    "sharpness": r.sharpness,
                    "kind": r.kind,
                    "sense": r.sense,
                    "status": r.status,
                })
            })
            .collect();
        let not_applicable = self.rows.iter().filter(|r| r.status == BoundStatus::NotApplicable).count();
        let doc = json!({
            "config": config,
            "results": results,
            "summary": {
                "rows": self.rows.len(),
                "violations": self.violations(),
                "not_applicable": not_applicable,
                "sharpness": self.summaries,
                "crossovers": self.crossovers,
            },
        });
        serde_json::to_string_pretty(&doc).expect("serialisable") + "\n"
    }
}
