//! Classical orthogonal polynomial families.
//!
//! Every family is handled through one three-term recurrence
//!
//! ```text
//! p_{k+1}(x) = (A_k x + B_k) p_k(x) - C_k p_{k-1}(x),   p_0 = 1, p_{-1} = 0
//! ```
//!
//! in the standard textbook normalisation, plus the monic form of the same
//! recurrence, which gives the symmetric tridiagonal Jacobi matrix whose
//! eigenvalues are the roots of `P_N` (Golub–Welsch).
//!
//! | family                 | weight                          | `P_N`               |
//! |------------------------|---------------------------------|---------------------|
//! | `Hermite`              | `e^{-x^2}` on ℝ                 | `H_N`               |
//! | `Laguerre { nu }`      | `e^{-x} x^{nu-1}` on (0, ∞)     | `L_N^{(nu-1)}`      |
//! | `Jacobi { alpha, beta }` | `(1-x)^alpha (1+x)^beta` on (-1, 1) | `P_N^{(alpha,beta)}` |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent (base 2) at which the evaluation recurrence is rescaled.
const RESCALE_EXP: i32 = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Hermite,
    Laguerre,
    Jacobi,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Hermite => "hermite",
            FamilyKind::Laguerre => "laguerre",
            FamilyKind::Jacobi => "jacobi",
        }
    }
}

/// One of the three classical families together with its parameters.
///
/// `Laguerre { nu }` denotes `L_N^{(nu-1)}`, i.e. the weight exponent is
/// `nu - 1`, so `nu > 0` is required.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolynomialFamily {
    Hermite,
    Laguerre { nu: f64 },
    Jacobi { alpha: f64, beta: f64 },
}

impl PolynomialFamily {
    pub fn laguerre(nu: f64) -> Result<Self> {
        let family = PolynomialFamily::Laguerre { nu };
        family.validate()?;
        Ok(family)
    }

    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        let family = PolynomialFamily::Jacobi { alpha, beta };
        family.validate()?;
        Ok(family)
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            PolynomialFamily::Hermite => FamilyKind::Hermite,
            PolynomialFamily::Laguerre { .. } => FamilyKind::Laguerre,
            PolynomialFamily::Jacobi { .. } => FamilyKind::Jacobi,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PolynomialFamily::Hermite => Ok(()),
            PolynomialFamily::Laguerre { nu } => {
                if nu.is_finite() && nu > 0.0 {
                    Ok(())
                } else {
                    Err(Error::ParameterDomain(format!("Laguerre requires nu > 0, got {nu}")))
                }
            }
            PolynomialFamily::Jacobi { alpha, beta } => {
                if alpha.is_finite() && beta.is_finite() && alpha > -1.0 && beta > -1.0 {
                    Ok(())
                } else {
                    Err(Error::ParameterDomain(format!("Jacobi requires alpha, beta > -1, got ({alpha}, {beta})")))
                }
            }
        }
    }

    /// Compact parameter label without commas, e.g. `nu=0.5` or
    /// `alpha=1;beta=-0.9`. Hermite has no parameters and yields `-`.
    pub fn params_label(&self) -> String {
        match *self {
            PolynomialFamily::Hermite => "-".to_string(),
            PolynomialFamily::Laguerre { nu } => format!("nu={nu:?}"),
            PolynomialFamily::Jacobi { alpha, beta } => format!("alpha={alpha:?};beta={beta:?}"),
        }
    }

    /// Coefficients `(A_k, B_k, C_k)` of the normalised recurrence producing
    /// `p_{k+1}` from `p_k` and `p_{k-1}`.
    fn recurrence(&self, k: usize) -> (f64, f64, f64) {
        let kf = k as f64;
        match *self {
            PolynomialFamily::Hermite => (2.0, 0.0, 2.0 * kf),
            PolynomialFamily::Laguerre { nu } => {
                let a = nu - 1.0;
                let d = kf + 1.0;
                (-1.0 / d, (2.0 * kf + 1.0 + a) / d, (kf + a) / d)
            }
            PolynomialFamily::Jacobi { alpha, beta } => {
                let s = alpha + beta;
                if k == 0 {
                    return ((s + 2.0) / 2.0, (alpha - beta) / 2.0, 0.0);
                }
                // n = k + 1 >= 2, so none of the denominators vanish for s > -2.
                let n = kf + 1.0;
                let two_n_s = 2.0 * n + s;
                let denom = 2.0 * n * (n + s) * (two_n_s - 2.0);
                let lead = (two_n_s - 1.0) * two_n_s * (two_n_s - 2.0) / denom;
                let shift = (two_n_s - 1.0) * (alpha * alpha - beta * beta) / denom;
                let prev = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * two_n_s / denom;
                (lead, shift, prev)
            }
        }
    }

    /// Monic recurrence `x q_k = q_{k+1} + b_k q_k + a_k q_{k-1}`: returns `b_k`.
    fn monic_diag(&self, k: usize) -> f64 {
        let kf = k as f64;
        match *self {
            PolynomialFamily::Hermite => 0.0,
            PolynomialFamily::Laguerre { nu } => 2.0 * kf + nu,
            PolynomialFamily::Jacobi { alpha, beta } => {
                let s = alpha + beta;
                if k == 0 {
                    (beta - alpha) / (s + 2.0)
                } else {
                    (beta * beta - alpha * alpha) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
                }
            }
        }
    }

    /// Monic recurrence: returns `a_k` for `k >= 1` (always positive).
    fn monic_offdiag_sq(&self, k: usize) -> f64 {
        debug_assert!(k >= 1);
        let kf = k as f64;
        match *self {
            PolynomialFamily::Hermite => kf / 2.0,
            PolynomialFamily::Laguerre { nu } => kf * (kf + nu - 1.0),
            PolynomialFamily::Jacobi { alpha, beta } => {
                let s = alpha + beta;
                if k == 1 {
                    // (1 + s) cancels; keeps alpha + beta = -1 well defined.
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + s).powi(2) * (3.0 + s))
                } else {
                    let t = 2.0 * kf + s;
                    4.0 * kf * (kf + alpha) * (kf + beta) * (kf + s) / (t * t * (t + 1.0) * (t - 1.0))
                }
            }
        }
    }
}

/// Symmetric tridiagonal matrix stored as its diagonal and strictly positive
/// off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyProblem);
        }
        if diag.len() != offdiag.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "tridiagonal lengths {} and {} are inconsistent",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().any(|d| !d.is_finite()) {
            return Err(Error::InvalidInput("non-finite diagonal entry".into()));
        }
        if let Some(e) = offdiag.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
            return Err(Error::InvalidInput(format!("off-diagonal entry {e} is not strictly positive")));
        }
        Ok(SymTridiagonal { diag, offdiag })
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }
}

/// Jacobi (recurrence) matrix of the monic family: its eigenvalues are the
/// roots of `P_N`.
pub fn jacobi_matrix(family: PolynomialFamily, n: usize) -> Result<SymTridiagonal> {
    family.validate()?;
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    let diag = (0..n).map(|k| family.monic_diag(k)).collect();
    let offdiag = (1..n).map(|k| family.monic_offdiag_sq(k).sqrt()).collect();
    SymTridiagonal::new(diag, offdiag)
}

/// `P_N(x)` and `P_N'(x)` carried as mantissas with a shared power-of-two
/// exponent, so that sign and the Newton ratio survive overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ScaledEval {
    pub value: f64,
    pub derivative: f64,
    pub exponent: i32,
}

impl ScaledEval {
    pub fn newton_step(&self) -> f64 {
        self.value / self.derivative
    }
}

pub(crate) fn evaluate_scaled(family: &PolynomialFamily, n: usize, x: f64) -> ScaledEval {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut d_prev, mut d) = (0.0, 0.0);
    let mut exponent = 0i32;
    let down = 2f64.powi(-RESCALE_EXP);
    for k in 0..n {
        let (a, b, c) = family.recurrence(k);
        let lin = a * x + b;
        let p_next = lin * p - c * p_prev;
        let d_next = a * p + lin * d - c * d_prev;
        p_prev = p;
        p = p_next;
        d_prev = d;
        d = d_next;
        if p.abs().max(d.abs()) > 2f64.powi(RESCALE_EXP) {
            p *= down;
            p_prev *= down;
            d *= down;
            d_prev *= down;
            exponent += RESCALE_EXP;
        }
    }
    ScaledEval { value: p, derivative: d, exponent }
}

/// `(P_N(x), P_N'(x))` in the standard normalisation: `H_N`, `L_N^{(nu-1)}`
/// or `P_N^{(alpha,beta)}`. The derivative follows the differentiated
/// recurrence.
pub fn evaluate_with_derivative(family: PolynomialFamily, n: usize, x: f64) -> Result<(f64, f64)> {
    family.validate()?;
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    if !x.is_finite() {
        return Err(Error::ParameterDomain(format!("evaluation point {x} is not finite")));
    }
    let eval = evaluate_scaled(&family, n, x);
    if eval.exponent == 0 {
        return Ok((eval.value, eval.derivative));
    }
    let factor = 2f64.powi(eval.exponent);
    let (value, derivative) = (eval.value * factor, eval.derivative * factor);
    if value.is_finite() && derivative.is_finite() {
        Ok((value, derivative))
    } else {
        let mantissa = eval.value.abs().max(eval.derivative.abs());
        Err(Error::Magnitude { log10_scale: mantissa.log10() + f64::from(eval.exponent) * std::f64::consts::LOG10_2 })
    }
}
