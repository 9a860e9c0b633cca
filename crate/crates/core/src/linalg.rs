//! SVD-based primitives: spectral norm, truncated Moore–Penrose
//! pseudo-inverse and numerical checks of its algebraic properties.

use crate::error::{Error, Result};
use crate::tensor::Matrix;

/// Thin SVD `M = U diag(S) Vᵀ` with `S` sorted in non-increasing order.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    pub fn rows(&self) -> usize {
        self.u.nrows()
    }

    pub fn cols(&self) -> usize {
        self.v.nrows()
    }

    /// Smallest of the `min(rows, cols)` singular values.
    pub fn sigma_min(&self) -> f64 {
        self.s.last().copied().unwrap_or(0.0)
    }

    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Threshold below which a singular value counts as zero when `τ = 0`.
    pub fn zero_cutoff(&self) -> f64 {
        self.sigma_max() * self.rows().max(self.cols()) as f64 * f64::EPSILON
    }

    /// Effective truncation level for a requested `tau`.
    pub fn threshold(&self, tau: f64) -> f64 {
        tau.max(self.zero_cutoff())
    }

    /// Number of singular values strictly above the effective threshold.
    pub fn kept(&self, tau: f64) -> usize {
        let t = self.threshold(tau);
        self.s.iter().take_while(|&&s| s > t).count()
    }

    pub fn reconstruct(&self) -> Matrix {
        let k = self.s.len();
        let mut us = self.u.clone();
        for j in 0..k {
            us.column_mut(j).scale_mut(self.s[j]);
        }
        us * self.v.transpose()
    }

    /// `V S^{*τ} Uᵀ`.
    pub fn truncated_pinv(&self, tau: f64) -> Matrix {
        let kept = self.kept(tau);
        let mut v = self.v.columns(0, kept).into_owned();
        for j in 0..kept {
            v.column_mut(j).scale_mut(1.0 / self.s[j]);
        }
        v * self.u.columns(0, kept).transpose()
    }
}

fn check_finite(m: &Matrix) -> Result<()> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    if m.is_empty() {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    Ok(())
}

fn to_faer(m: &Matrix) -> faer::Mat<f64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

// faer rather than nalgebra's implicit-shift SVD, which returns wrong factors
// for a noticeable fraction of exactly rank-deficient inputs
pub fn svd(m: &Matrix) -> Result<SvdFactors> {
    check_finite(m)?;
    let f = to_faer(m).thin_svd().map_err(|_| Error::SvdNoConvergence)?;
    Ok(SvdFactors {
        u: from_faer(f.U()),
        s: f.S().column_vector().iter().copied().collect(),
        v: from_faer(f.V()),
    })
}

/// Singular values only, descending.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    to_faer(m).singular_values().map_err(|_| Error::SvdNoConvergence)
}

/// Leading `r` left singular vectors.
pub fn leading_left_singular_vectors(m: &Matrix, r: usize) -> Result<Matrix> {
    if r > m.nrows().min(m.ncols()) {
        return Err(Error::InvalidArgument(format!(
            "asked for {r} singular vectors of a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(svd(m)?.u.columns(0, r).into_owned())
}

pub fn spectral_norm(m: &Matrix) -> Result<f64> {
    Ok(singular_values(m)?.first().copied().unwrap_or(0.0))
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be non-negative, got {tau}")));
    }
    Ok(())
}

/// Truncated Moore–Penrose pseudo-inverse: singular values `σ ≤ τ` are
/// dropped, the rest inverted. `τ = 0` drops only numerically zero values.
pub fn truncated_pinv(m: &Matrix, tau: f64) -> Result<Matrix> {
    check_tau(tau)?;
    Ok(svd(m)?.truncated_pinv(tau))
}

/// Residuals of the three truncated pseudo-inverse identities for one
/// matrix `W` and threshold `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PinvReport {
    pub tau: f64,
    /// `τ`, raised to the numerical-zero cutoff when that is larger.
    pub threshold: f64,
    /// Smallest of the `min(rows, cols)` singular values of `W`.
    pub sigma_min: f64,
    pub sigma_max: f64,
    pub kept: usize,
    pub rank_bound: usize,
    /// `‖W W* W − W‖`.
    pub reproduce_residual: f64,
    /// `‖W* W W* − W*‖`.
    pub reflexive_residual: f64,
    /// `‖W W*‖`.
    pub left_projector_norm: f64,
    /// `‖W* W‖`.
    pub right_projector_norm: f64,
    /// `‖W*‖`.
    pub pinv_norm: f64,
    /// Largest singular value that was truncated (0 when nothing was).
    pub largest_dropped: f64,
}

impl PinvReport {
    pub fn truncated_any(&self) -> bool {
        self.kept < self.rank_bound
    }

    /// Upper bound that `reproduce_residual` must respect: 0 when nothing
    /// is truncated, otherwise the truncation threshold.
    pub fn reproduce_bound(&self) -> f64 {
        if self.truncated_any() {
            self.threshold
        } else {
            0.0
        }
    }
}

pub fn pinv_properties_check(m: &Matrix, tau: f64) -> Result<PinvReport> {
    check_tau(tau)?;
    let f = svd(m)?;
    let p = f.truncated_pinv(tau);
    let kept = f.kept(tau);
    let rank_bound = f.s.len();
    let wpw = m * &p * m;
    let pwp = &p * m * &p;
    let norm = |x: &Matrix| -> Result<f64> { spectral_norm(x) };
    Ok(PinvReport {
        tau,
        threshold: f.threshold(tau),
        sigma_min: f.sigma_min(),
        sigma_max: f.sigma_max(),
        kept,
        rank_bound,
        reproduce_residual: norm(&(wpw - m))?,
        reflexive_residual: norm(&(pwp - &p))?,
        left_projector_norm: norm(&(m * &p))?,
        right_projector_norm: norm(&(&p * m))?,
        pinv_norm: norm(&p)?,
        largest_dropped: f.s.get(kept).copied().unwrap_or(0.0),
    })
}

/// `diag(values)` as a `rows × cols` matrix.
pub fn diag(rows: usize, cols: usize, values: &[f64]) -> Matrix {
    let mut m = Matrix::zeros(rows, cols);
    for (i, &v) in values.iter().enumerate().take(rows.min(cols)) {
        m[(i, i)] = v;
    }
    m
}

/// Solves `a x = b` for square `a`, rejecting near-singular systems.
pub fn solve_square(a: &Matrix, b: &Matrix, max_condition: f64) -> Result<Matrix> {
    let s = singular_values(a)?;
    let cond = match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    };
    if !(cond <= max_condition) {
        return Err(Error::Singular { condition: cond });
    }
    a.clone().lu().solve(b).ok_or(Error::Singular { condition: cond })
}
