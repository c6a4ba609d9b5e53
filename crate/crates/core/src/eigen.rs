//! Symmetric eigensolvers.
//!
//! * [`tridiag_eigenvalues`]: implicit-shift QL with Wilkinson shifts on the
//!   tridiagonal form (the Golub–Welsch route to polynomial roots).
//! * [`dense_eigenvalues`]: cyclic Jacobi rotations on the full matrix. No
//!   Householder reduction; the matrices handled here are at most a few
//!   hundred rows and Jacobi gives small eigenvalues with good relative
//!   accuracy.
//!
//! Both accumulate eigenvectors, but only to report a backward-error
//! residual `max_i ||A v_i - λ_i v_i|| / ||A||_1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::opoly::SymTridiagonal;

/// Iteration cap factor: at most `MAX_SWEEPS_PER_ROW * n` QL iterations or
/// Jacobi sweeps.
const MAX_SWEEPS_PER_ROW: usize = 50;

/// Dense symmetric matrix, stored in full row-major order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseSymmetric {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSymmetric {
    /// Builds the matrix from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        DenseSymmetric { n, entries }
    }

    /// Builds the matrix from rows, rejecting anything that is not exactly
    /// symmetric.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().take(i) {
                if v != rows[j][i] {
                    return Err(Error::InvalidInput(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(DenseSymmetric { n, entries: rows.concat() })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        Self::from_upper(d.len(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)` together.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute row sum (the 1-norm, equal to the ∞-norm here).
    pub fn norm_one(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.entries[i * self.n + i] -= shift;
        }
        out
    }

    /// `P self P` with `P = I - 11ᵀ/n`: the result has `(1, …, 1)ᵀ` in its
    /// kernel.
    pub fn centered(&self) -> Self {
        let n = self.n;
        let nf = n as f64;
        let row_mean: Vec<f64> = (0..n).map(|i| self.row(i).iter().sum::<f64>() / nf).collect();
        let grand = row_mean.iter().sum::<f64>() / nf;
        Self::from_upper(n, |i, j| self.get(i, j) - row_mean[i] - row_mean[j] + grand)
    }

    /// Product of two matrices known to commute (e.g. powers of one
    /// matrix), so the result is symmetric; the upper triangle is mirrored.
    pub fn mul_commuting(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        Self::from_upper(n, |i, j| (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum())
    }

    /// Diagonal of `self²`, i.e. the squared Euclidean row norms.
    pub fn diag_of_square(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().map(|v| v * v).sum()).collect()
    }

    fn residual(&self, values: &[f64], vectors: &[f64]) -> f64 {
        let n = self.n;
        let norm = self.norm_one().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for (k, &lambda) in values.iter().enumerate() {
            let mut r2 = 0.0;
            for i in 0..n {
                let av: f64 = (0..n).map(|j| self.get(i, j) * vectors[j * n + k]).sum();
                let d = av - lambda * vectors[i * n + k];
                r2 += d * d;
            }
            worst = worst.max(r2.sqrt() / norm);
        }
        worst
    }
}

/// Eigenvalues in ascending order with a backward-error residual.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residual: f64,
}

impl Spectrum {
    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// All eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
///
/// An off-diagonal entry `e_i` is deflated once
/// `|e_i| <= eps (|d_i| + |d_{i+1}|)`.
pub fn tridiag_eigenvalues(t: &SymTridiagonal) -> Result<Spectrum> {
    let n = t.len();
    let mut d = t.diag().to_vec();
    let mut e = t.offdiag().to_vec();
    e.push(0.0);
    // Column-major would be more cache friendly; n is small.
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }

    let cap = MAX_SWEEPS_PER_ROW * n;
    let mut iterations = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > cap {
                return Err(Error::Convergence { index: l, iterations });
            }

            // Wilkinson shift from the leading 2×2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    let f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let residual = tridiag_residual(t, &d, &z);
    let mut eigenvalues = d;
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum { eigenvalues, residual })
}

fn tridiag_residual(t: &SymTridiagonal, values: &[f64], z: &[f64]) -> f64 {
    let n = t.len();
    let (diag, off) = (t.diag(), t.offdiag());
    let norm = (0..n)
        .map(|i| {
            let left = if i > 0 { off[i - 1] } else { 0.0 };
            let right = if i + 1 < n { off[i] } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut worst: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let v = |i: usize| z[i * n + k];
        let mut r2 = 0.0;
        for i in 0..n {
            let mut tv = diag[i] * v(i);
            if i > 0 {
                tv += off[i - 1] * v(i - 1);
            }
            if i + 1 < n {
                tv += off[i] * v(i + 1);
            }
            let d = tv - lambda * v(i);
            r2 += d * d;
        }
        worst = worst.max(r2.sqrt() / norm);
    }
    worst
}

/// All eigenvalues of a dense symmetric matrix by cyclic Jacobi rotations.
pub fn dense_eigenvalues(m: &DenseSymmetric) -> Result<Spectrum> {
    let n = m.n();
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    if m.entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let mut a = m.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let idx = |i: usize, j: usize| i * n + j;

    let cap = MAX_SWEEPS_PER_ROW * n;
    let mut converged = n == 1;
    for sweep in 0..cap {
        let off: f64 = (0..n).flat_map(|p| ((p + 1)..n).map(move |q| (p, q))).map(|(p, q)| a[idx(p, q)].abs()).sum();
        if off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                let g = 100.0 * apq.abs();
                let (app, aqq) = (a[idx(p, p)], a[idx(q, q)]);
                // Once the pivot is below the rounding level of both diagonal
                // entries a rotation cannot change them any more.
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[idx(p, q)] = 0.0;
                    a[idx(q, p)] = 0.0;
                    continue;
                }
                if apq == 0.0 {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let shift = t * apq;
                a[idx(p, p)] = app - shift;
                a[idx(q, q)] = aqq + shift;
                a[idx(p, q)] = 0.0;
                a[idx(q, p)] = 0.0;
                for r in 0..n {
                    if r != p && r != q {
                        let g = a[idx(r, p)];
                        let h = a[idx(r, q)];
                        let rp = g - s * (h + g * tau);
                        let rq = h + s * (g - h * tau);
                        a[idx(r, p)] = rp;
                        a[idx(p, r)] = rp;
                        a[idx(r, q)] = rq;
                        a[idx(q, r)] = rq;
                    }
                    let g = v[idx(r, p)];
                    let h = v[idx(r, q)];
                    v[idx(r, p)] = g - s * (h + g * tau);
                    v[idx(r, q)] = h + s * (g - h * tau);
                }
            }
        }
    }
    if !converged {
        let (mut worst, mut at) = (0.0, 0);
        for p in 0..n {
            for q in (p + 1)..n {
                if a[idx(p, q)].abs() > worst {
                    worst = a[idx(p, q)].abs();
                    at = p;
                }
            }
        }
        return Err(Error::Convergence { index: at, iterations: cap });
    }

    let values: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    let residual = m.residual(&values, &v);
    let mut eigenvalues = values;
    eigenvalues.sort_by(f64::total_cmp);
    Ok(Spectrum { eigenvalues, residual })
}

/// `tr(m^k)` from exact matrix powers (square-and-multiply), independent of
/// any eigenvalue computation.
pub fn trace_power(m: &DenseSymmetric, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("trace_power requires k >= 1".into()));
    }
    let overflow = || Error::Magnitude { log10_scale: f64::from(k) * m.norm_one().log10() };
    let mut result: Option<DenseSymmetric> = None;
    let mut base = m.clone();
    let mut e = k;
    loop {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => r.mul_commuting(&base),
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.mul_commuting(&base);
        if base.entries.iter().any(|v| !v.is_finite()) {
            return Err(overflow());
        }
    }
    let trace = result.expect("k >= 1").trace();
    if trace.is_finite() {
        Ok(trace)
    } else {
        Err(overflow())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn tri(d: &[f64], e: &[f64]) -> SymTridiagonal {
        SymTridiagonal::new(d.to_vec(), e.to_vec()).unwrap()
    }

    #[test]
    fn tridiagonal_examples() {
        assert_eq!(tridiag_eigenvalues(&tri(&[0.0], &[])).unwrap().eigenvalues, vec![0.0]);

        let s = tridiag_eigenvalues(&tri(&[0.0, 0.0], &[1.0])).unwrap();
        assert_relative_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-15);

        // det [[2-l, √2], [√2, 4-l]] = l^2 - 6l + 6.
        let s = tridiag_eigenvalues(&tri(&[2.0, 4.0], &[2f64.sqrt()])).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 3.0 - 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(s.eigenvalues[1], 3.0 + 3f64.sqrt(), max_relative = 1e-14);
        assert!(s.residual < 1e-14);
    }

    #[test]
    fn tridiagonal_trace_and_order() {
        let n = 60;
        let d: Vec<f64> = (0..n).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let e: Vec<f64> = (1..n).map(|i| 0.5 + (i % 3) as f64).collect();
        let t = tri(&d, &e);
        let s = tridiag_eigenvalues(&t).unwrap();
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let max_d = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!((s.sum() - t.trace()).abs() <= 1e-12 * (n as f64 * max_d + 1.0));
        assert!(s.residual < 1e-13);
    }

    #[test]
    fn tridiagonal_rejects_bad_input() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![0.0]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![-1.0]).is_err());
        assert_eq!(SymTridiagonal::new(vec![], vec![]), Err(Error::EmptyProblem));
    }

    #[test]
    fn dense_examples() {
        assert_eq!(dense_eigenvalues(&DenseSymmetric::identity(3)).unwrap().eigenvalues, vec![1.0; 3]);
        assert_eq!(
            dense_eigenvalues(&DenseSymmetric::from_diagonal(&[3.0, 1.0, 2.0])).unwrap().eigenvalues,
            vec![1.0, 2.0, 3.0]
        );
        let swap = DenseSymmetric::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let s = dense_eigenvalues(&swap).unwrap();
        assert_relative_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-15);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dense_rejects_asymmetric() {
        assert!(DenseSymmetric::from_rows(&[vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        assert!(DenseSymmetric::from_rows(&[vec![0.0, 1.0]]).is_err());
    }

    #[test]
    fn dense_matches_tridiagonal_solver() {
        let n = 25;
        let d: Vec<f64> = (0..n).map(|i| (i as f64).sin() * 3.0).collect();
        let e: Vec<f64> = (1..n).map(|i| 1.0 + (i as f64).cos().abs()).collect();
        let dense = DenseSymmetric::from_upper(n, |i, j| {
            if i == j {
                d[i]
            } else if j == i + 1 {
                e[i]
            } else {
                0.0
            }
        });
        let a = dense_eigenvalues(&dense).unwrap();
        let b = tridiag_eigenvalues(&tri(&d, &e)).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn trace_power_examples() {
        assert_eq!(trace_power(&DenseSymmetric::identity(4), 5).unwrap(), 4.0);
        assert_eq!(trace_power(&DenseSymmetric::from_diagonal(&[1.0, 2.0]), 2).unwrap(), 5.0);
        let swap = DenseSymmetric::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(trace_power(&swap, 2).unwrap(), 2.0);
        assert_eq!(trace_power(&swap, 3).unwrap(), 0.0);
        assert!(trace_power(&swap, 0).is_err());
        let big = DenseSymmetric::from_diagonal(&[1e200]);
        assert!(matches!(trace_power(&big, 4), Err(Error::Magnitude { .. })));
    }

    fn symmetric_strategy() -> impl Strategy<Value = DenseSymmetric> {
        (1usize..=12).prop_flat_map(|n| {
            proptest::collection::vec(-1.0f64..1.0, n * n)
                .prop_map(move |raw| DenseSymmetric::from_upper(n, |i, j| raw[i * n + j]))
        })
    }

    /// `tr(B^{2^r}) - c^{2^r - 1} Σ b_ii^{2^r}`, relative to the trace.
    fn diagonal_power_slack(b: &DenseSymmetric, r: u32, c: f64) -> f64 {
        let k = 1u32 << r;
        let lhs = trace_power(b, k).unwrap();
        let rhs = c.powi(k as i32 - 1) * (0..b.n()).map(|i| b.get(i, i).powi(k as i32)).sum::<f64>();
        (lhs - rhs) / lhs.abs().max(f64::MIN_POSITIVE)
    }

    proptest! {
        #[test]
        fn trace_dominates_diagonal_powers(m in symmetric_strategy(), r in 0u32..=3) {
            prop_assert!(diagonal_power_slack(&m, r, 1.0) >= -1e-12);
        }

        #[test]
        fn centered_trace_dominates_scaled_diagonal_powers(m in symmetric_strategy(), r in 0u32..=3) {
            prop_assume!(m.n() >= 2);
            let b = m.centered();
            for i in 0..b.n() {
                prop_assert!(b.row(i).iter().sum::<f64>().abs() <= 1e-14 * b.n() as f64);
            }
            let nf = b.n() as f64;
            prop_assert!(diagonal_power_slack(&b, r, nf / (nf - 1.0)) >= -1e-12);
        }

        #[test]
        fn trace_power_matches_spectral_sums(m in symmetric_strategy()) {
            let spectrum = dense_eigenvalues(&m).unwrap();
            let max_entry = m.max_abs_entry();
            prop_assert!((spectrum.sum() - m.trace()).abs() <= 1e-12 * (m.n() as f64 * max_entry + 1.0));
            prop_assert!(spectrum.residual < 1e-12);
            for k in [1u32, 2, 4, 8] {
                let exact = trace_power(&m, k).unwrap();
                let spectral: f64 = spectrum.eigenvalues.iter().map(|l| l.powi(k as i32)).sum();
                let scale: f64 = spectrum.eigenvalues.iter().map(|l| l.abs().powi(k as i32)).sum();
                prop_assert!((exact - spectral).abs() <= 1e-9 * scale.max(f64::MIN_POSITIVE),
                    "k={} exact={} spectral={}", k, exact, spectral);
            }
        }
    }
}
