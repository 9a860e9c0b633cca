//! Direct (non-iterative) reconstruction from multi-way measurements.
//!
//! `X̂ = W ×_1 Z_1 W_(1)^{*τ} ×_2 … ×_N Z_N W_(N)^{*τ}` with
//! `Z_n = unfold(Z^(n), n)` and `W^{*τ}` the truncated pseudo-inverse.
//! At `τ = 0` this is exact for signals of multilinear rank `(R_1, …, R_N)`
//! whenever every unfolding of `W` has full row rank.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{solve_square, spectral_norm, svd};
use crate::sensing::{assemble_from_two_mode, MeasurementSet, SensingEnsemble, SensingKind, TwoModeMeasurements};
use crate::tensor::{mode_n_product, unfold, DenseTensor, Matrix};
use crate::tucker::TuckerModel;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationPolicy {
    FixedTau(f64),
    /// Picks `τ = ε Π_n ‖Φ_n‖` from a model-error estimate.
    Auto {
        epsilon: f64,
    },
}

impl TruncationPolicy {
    pub fn resolve(&self, ensemble: &SensingEnsemble) -> Result<f64> {
        match *self {
            TruncationPolicy::FixedTau(tau) if tau >= 0.0 && tau.is_finite() => Ok(tau),
            TruncationPolicy::FixedTau(tau) => Err(Error::InvalidArgument(format!("tau must be >= 0, got {tau}"))),
            TruncationPolicy::Auto { epsilon } if epsilon > 0.0 && epsilon.is_finite() => {
                tau0_rough(epsilon, ensemble.matrices())
            }
            TruncationPolicy::Auto { epsilon } => Err(Error::InvalidArgument(format!(
                "auto truncation needs epsilon > 0, got {epsilon}"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub reconstruction: DenseTensor,
    pub tau_used: f64,
    /// Singular values of each `W_(n)`, descending.
    pub sigma_spectra: Vec<Vec<f64>>,
    /// Singular values of each `W_(n)` that were dropped.
    pub truncation_counts: Vec<usize>,
    pub wall_ms: f64,
    pub warnings: Vec<String>,
}

/// The JSON form of a [`ReconstructionReport`], without the tensor.
#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary<'a> {
    pub tau: f64,
    pub truncation_counts: &'a [usize],
    pub sigma_spectra: &'a [Vec<f64>],
    pub wall_ms: f64,
    pub warnings: &'a [String],
}

impl ReconstructionReport {
    /// `σ_{R_n}`, the smallest singular value of each `W_(n)`.
    pub fn sigma_min_modes(&self) -> Vec<f64> {
        self.sigma_spectra
            .iter()
            .map(|s| s.last().copied().unwrap_or(0.0))
            .collect()
    }

    pub fn summary(&self) -> ReportSummary<'_> {
        ReportSummary {
            tau: self.tau_used,
            truncation_counts: &self.truncation_counts,
            sigma_spectra: &self.sigma_spectra,
            wall_ms: self.wall_ms,
            warnings: &self.warnings,
        }
    }
}

pub fn reconstruct(
    meas: &MeasurementSet,
    ensemble: &SensingEnsemble,
    policy: TruncationPolicy,
) -> Result<ReconstructionReport> {
    let start = Instant::now();
    meas.check_shapes()?;
    if ensemble.ranks() != meas.ranks() || ensemble.dims() != meas.signal_dims() {
        return Err(Error::ShapeMismatch(format!(
            "measurements are {:?} -> {:?}, ensemble is {:?} -> {:?}",
            meas.signal_dims(),
            meas.ranks(),
            ensemble.dims(),
            ensemble.ranks()
        )));
    }
    let tau = policy.resolve(ensemble)?;

    let order = meas.order();
    let mut sigma_spectra = Vec::with_capacity(order);
    let mut truncation_counts = Vec::with_capacity(order);
    let mut warnings = Vec::new();
    let mut x = meas.w.clone();
    for n in 0..order {
        let wn = unfold(&meas.w, n)?;
        let f = svd(&wn)?;
        let kept = f.kept(tau);
        let dropped = f.s.len() - kept;
        if tau == 0.0 && dropped > 0 {
            warnings.push(format!(
                "W_({}) is numerically rank deficient: {dropped} of {} singular values below {:.3e}",
                n + 1,
                f.s.len(),
                f.zero_cutoff()
            ));
        }
        // with Φ_n = I we have Z_n = W_(n), so an untruncated factor is I
        let identity = ensemble.kinds()[n] == SensingKind::Identity && is_identity(ensemble.matrix(n));
        if !(identity && dropped == 0) {
            let zn = unfold(&meas.z[n], n)?;
            let m = zn * f.truncated_pinv(tau);
            x = mode_n_product(&x, &m, n)?;
        }
        sigma_spectra.push(f.s);
        truncation_counts.push(dropped);
    }

    Ok(ReconstructionReport {
        reconstruction: x,
        tau_used: tau,
        sigma_spectra,
        truncation_counts,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        warnings,
    })
}

fn is_identity(m: &Matrix) -> bool {
    m.is_square() && *m == Matrix::identity(m.nrows(), m.ncols())
}

/// Two-mode pipeline: assemble the multi-way measurements, then reconstruct.
pub fn algorithm1(
    y: &TwoModeMeasurements,
    ensemble: &SensingEnsemble,
    policy: TruncationPolicy,
) -> Result<ReconstructionReport> {
    let start = Instant::now();
    let meas = assemble_from_two_mode(y, ensemble)?;
    let mut report = reconstruct(&meas, ensemble, policy)?;
    report.wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// `ε √(c / a)`, the threshold minimising `aτ + bε + cε²/τ`.
pub fn tau0(epsilon: f64, a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::BoundUndefined(format!("tau0 needs a > 0, got {a}")));
    }
    if epsilon < 0.0 || c < 0.0 {
        return Err(Error::InvalidArgument("epsilon and c must be non-negative".into()));
    }
    Ok(epsilon * (c / a).sqrt())
}

/// `ε Π_n ‖Φ_n‖`, an overestimate of [`tau0`] that needs no model factors.
pub fn tau0_rough(epsilon: f64, phis: &[Matrix]) -> Result<f64> {
    let mut t = epsilon;
    for phi in phis {
        t *= spectral_norm(phi)?;
    }
    Ok(t)
}

/// Norms entering the bound constants for one sensed mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeNorms {
    /// `‖A_n‖`, `A_n = U_n (Φ_n U_n)^{-1}`.
    pub a: f64,
    /// `‖A_n Φ_n‖`.
    pub a_phi: f64,
    /// `‖Φ_n‖`.
    pub phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub modes: [ModeNorms; 2],
}

impl BoundConstants {
    pub fn tau0(&self, epsilon: f64) -> Result<f64> {
        tau0(epsilon, self.a, self.c)
    }
}

/// Constants `a, b, c` of the error bound for a model with known factors.
///
/// Supported: order 2, or order 3 with `Φ_3 = I`. Only `span(U_n)` matters,
/// so any basis of the model's column spaces gives the same constants.
pub fn bound_constants(model: &TuckerModel, ensemble: &SensingEnsemble) -> Result<BoundConstants> {
    let order = model.order();
    if ensemble.order() != order || ensemble.dims() != model.dims() {
        return Err(Error::ShapeMismatch("model and ensemble disagree".into()));
    }
    let ranks = ensemble.ranks();
    let prefactor = match order {
        2 => 1.0,
        3 => {
            let phi3 = ensemble.matrix(2);
            if !is_identity(phi3) {
                return Err(Error::BoundUndefined("third-order bound needs Φ_3 = I".into()));
            }
            (ranks[0] as f64).sqrt() + (ranks[1] as f64).sqrt() + (ranks[2] as f64).sqrt()
        }
        _ => return Err(Error::BoundUndefined(format!("no bound for order {order}"))),
    };

    let mut modes = [ModeNorms {
        a: 0.0,
        a_phi: 0.0,
        phi: 0.0,
    }; 2];
    for (n, slot) in modes.iter_mut().enumerate() {
        let u = &model.factors[n];
        let phi = ensemble.matrix(n);
        if u.ncols() != phi.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "mode {} has model rank {} but {} measurements",
                n + 1,
                u.ncols(),
                phi.nrows()
            )));
        }
        let pu = phi * u;
        let inv = solve_square(&pu, &Matrix::identity(pu.nrows(), pu.nrows()), 1e12)?;
        let an = u * inv;
        *slot = ModeNorms {
            a: spectral_norm(&an)?,
            a_phi: spectral_norm(&(&an * phi))?,
            phi: spectral_norm(phi)?,
        };
    }

    let [m1, m2] = modes;
    let a = prefactor * m1.a * m2.a;
    let b = 1.0 + m1.a_phi * m2.a_phi + m1.a * (1.0 + m2.a_phi) * m1.phi + m2.a * (1.0 + m1.a_phi) * m2.phi;
    let c = (1.0 + m1.a_phi) * (1.0 + m2.a_phi) * m1.phi * m2.phi;
    Ok(BoundConstants { a, b, c, modes })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundBranch {
    /// `τ ≤ σ̲`.
    LowTau,
    /// `τ > σ̄`.
    HighTau,
    /// `σ̲ < τ ≤ σ̄`, not covered by the bound.
    Gap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub sigma_min_per_mode: Vec<f64>,
    pub sigma_bar: f64,
    pub sigma_underbar: f64,
    pub tau_used: f64,
    pub epsilon: f64,
    pub branch: BoundBranch,
    /// The bound; `None` in the gap.
    pub bound_value: Option<f64>,
    /// `bε + cε²/σ_R`, when `σ_R > 0`.
    pub low_tau_value: Option<f64>,
    /// `aτ + bε + cε²/τ`, when `τ > 0`.
    pub high_tau_value: Option<f64>,
}

/// Evaluates the error bound at `(τ, ε)`.
///
/// `sigma_min_per_mode` holds `σ_{R_n}` of each `W_(n)`; the low-τ branch
/// uses the smallest of the first two.
pub fn error_bound(
    constants: &BoundConstants,
    sigma_min_per_mode: &[f64],
    tau: f64,
    epsilon: f64,
) -> Result<BoundReport> {
    let BoundConstants { a, b, c, .. } = *constants;
    if sigma_min_per_mode.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two per-mode singular values".into(),
        ));
    }
    if [a, b, c, tau, epsilon]
        .iter()
        .chain(sigma_min_per_mode)
        .any(|v| !(*v >= 0.0))
    {
        return Err(Error::InvalidArgument("bound inputs must be non-negative".into()));
    }
    let sigma_r = sigma_min_per_mode[0].min(sigma_min_per_mode[1]);
    let sigma_bar = sigma_min_per_mode.iter().copied().fold(0.0, f64::max);
    let sigma_underbar = sigma_min_per_mode.iter().copied().fold(f64::INFINITY, f64::min);

    let low = (sigma_r > 0.0).then(|| b * epsilon + c * epsilon * epsilon / sigma_r);
    let high = (tau > 0.0).then(|| a * tau + b * epsilon + c * epsilon * epsilon / tau);

    let (branch, bound_value) = if tau <= sigma_underbar {
        if low.is_none() {
            return Err(Error::BoundUndefined("σ_R = 0: W is rank deficient".into()));
        }
        (BoundBranch::LowTau, low)
    } else if tau > sigma_bar {
        (BoundBranch::HighTau, high)
    } else {
        (BoundBranch::Gap, None)
    };

    Ok(BoundReport {
        a,
        b,
        c,
        sigma_min_per_mode: sigma_min_per_mode.to_vec(),
        sigma_bar,
        sigma_underbar,
        tau_used: tau,
        epsilon,
        branch,
        bound_value,
        low_tau_value: low,
        high_tau_value: high,
    })
}

#[derive(Debug, Clone)]
pub struct ProjectorResidual {
    /// `W ×_n W_(n) W_(n)^{*τ} (all n) − W`.
    pub h: DenseTensor,
    pub norm: f64,
    pub sigma_min_per_mode: Vec<f64>,
}

/// Residual of projecting every mode of `W` onto its retained singular
/// subspace at threshold `τ`.
pub fn lemma1_residual(w: &DenseTensor, tau: f64) -> Result<ProjectorResidual> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("tau must be >= 0, got {tau}")));
    }
    let mut x = w.clone();
    let mut sigma_min_per_mode = Vec::with_capacity(w.order());
    for n in 0..w.order() {
        let wn = unfold(w, n)?;
        let f = svd(&wn)?;
        let projector = &wn * f.truncated_pinv(tau);
        x = mode_n_product(&x, &projector, n)?;
        sigma_min_per_mode.push(f.sigma_min());
    }
    let h = x.sub(w)?;
    let norm = h.frobenius_norm();
    Ok(ProjectorResidual {
        h,
        norm,
        sigma_min_per_mode,
    })
}
