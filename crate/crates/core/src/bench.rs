//! Synthetic signals, PSNR and Monte Carlo sweeps.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::reconstruction::{bound_constants, reconstruct, tau0_rough, ReconstructionReport, TruncationPolicy};
use crate::rng::{derive_seed, gaussian_tensor, tag};
use crate::sensing::{multiway_measure, rank_for_ratio, sampling_ratio, SensingEnsemble, SensingKind};
use crate::tensor::{max_entry, DenseTensor};
use crate::tucker::{hosvd, TuckerModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoisySignalSpec {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Frobenius norm of the added noise relative to a unit-norm `X_0`.
    pub epsilon: f64,
    #[serde(default)]
    pub seed: u64,
    /// Rescale the result to `‖X‖_F = 1`.
    #[serde(default = "yes")]
    pub normalize: bool,
    /// Core entry `(i_1, …, i_N)` is scaled by `Π_n (1 + i_n)^(-decay)`,
    /// giving graded singular values instead of a flat spectrum.
    #[serde(default)]
    pub core_decay: f64,
}

fn yes() -> bool {
    true
}

impl NoisySignalSpec {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.len() != self.ranks.len() {
            return Err(Error::InvalidArgument(format!(
                "dims {:?} and ranks {:?} must be non-empty and of equal length",
                self.dims, self.ranks
            )));
        }
        if self.ranks.iter().zip(&self.dims).any(|(&r, &d)| r == 0 || r > d) {
            return Err(Error::InvalidArgument(format!(
                "ranks {:?} must lie in 1..=dims {:?}",
                self.ranks, self.dims
            )));
        }
        if !(self.core_decay >= 0.0 && self.core_decay.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "core decay must be >= 0, got {}",
                self.core_decay
            )));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "epsilon must be >= 0, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// `X = X_0 + εE`, optionally rescaled to unit norm.
#[derive(Debug, Clone)]
pub struct NoisySignal {
    pub x: DenseTensor,
    /// Low-rank part, on the same scale as `x`.
    pub x0: DenseTensor,
    /// Tucker form of `x0` with orthonormal factors.
    pub model: TuckerModel,
    /// `‖X − X_0‖_F` after rescaling.
    pub achieved_epsilon: f64,
}

/// Random-Tucker `X_0` of unit norm plus Gaussian noise of norm `ε`.
pub fn gen_noisy_signal(spec: &NoisySignalSpec) -> Result<NoisySignal> {
    spec.validate()?;
    let mut model = TuckerModel::random(&spec.dims, &spec.ranks, spec.seed)?;
    if spec.core_decay > 0.0 {
        let ranks = spec.ranks.clone();
        let weights = DenseTensor::from_fn(&ranks, |idx| {
            idx.iter().map(|&i| (1.0 + i as f64).powf(-spec.core_decay)).product()
        })?;
        for (g, w) in model.core.data_mut().iter_mut().zip(weights.data()) {
            *g *= w;
        }
    }
    add_noise(model, spec)
}

/// Same as [`gen_noisy_signal`] with `X_0` the truncated HOSVD of `source`.
pub fn gen_noisy_signal_from(source: &DenseTensor, spec: &NoisySignalSpec) -> Result<NoisySignal> {
    spec.validate()?;
    if source.dims() != spec.dims.as_slice() {
        return Err(Error::ShapeMismatch(format!(
            "source is {:?}, requested {:?}",
            source.dims(),
            spec.dims
        )));
    }
    add_noise(hosvd(source, &spec.ranks)?, spec)
}

fn add_noise(mut model: TuckerModel, spec: &NoisySignalSpec) -> Result<NoisySignal> {
    let mut x0 = model.reconstruct()?;
    let n0 = x0.frobenius_norm();
    if n0 == 0.0 {
        return Err(Error::InvalidArgument("low-rank part is zero".into()));
    }
    x0.scale(1.0 / n0);
    model.core.scale(1.0 / n0);

    let mut e = gaussian_tensor(&spec.dims, spec.seed, tag::NOISE);
    let ne = e.frobenius_norm();
    e.scale(1.0 / ne);
    let mut x = x0.axpy(spec.epsilon, &e)?;
    let mut achieved = spec.epsilon;

    if spec.normalize {
        let s = x.frobenius_norm();
        x.scale(1.0 / s);
        x0.scale(1.0 / s);
        model.core.scale(1.0 / s);
        achieved /= s;
    }
    Ok(NoisySignal {
        x,
        x0,
        model,
        achieved_epsilon: achieved,
    })
}

/// `20 log10(max(X) / ‖X̂ − X‖_F)` in dB; `+∞` when the two agree exactly.
pub fn psnr(x: &DenseTensor, xhat: &DenseTensor) -> Result<f64> {
    let err = xhat.sub(x)?.frobenius_norm();
    psnr_from_error(max_entry(x), err)
}

pub fn psnr_from_error(peak: f64, err: f64) -> Result<f64> {
    if !(peak > 0.0) {
        return Err(Error::PsnrUndefined { peak });
    }
    if err == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(20.0 * (peak / err).log10())
}

/// Spectral norm of the difference for matrices, Frobenius otherwise.
pub fn reconstruction_error(x: &DenseTensor, xhat: &DenseTensor) -> Result<f64> {
    let d = xhat.sub(x)?;
    if d.order() == 2 {
        spectral_norm(&d.to_matrix()?)
    } else {
        Ok(d.frobenius_norm())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    Tau,
    Epsilon,
    Delta,
}

impl SweepVar {
    pub fn name(self) -> &'static str {
        match self {
            SweepVar::Tau => "tau",
            SweepVar::Epsilon => "epsilon",
            SweepVar::Delta => "delta",
        }
    }
}

impl std::str::FromStr for SweepVar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(Self::Tau),
            "epsilon" => Ok(Self::Epsilon),
            "delta" => Ok(Self::Delta),
            other => Err(Error::InvalidArgument(format!("unknown sweep variable {other:?}"))),
        }
    }
}

/// How `τ` is chosen when it is not the swept variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicySpec {
    FixedTau(f64),
    /// Rough threshold from a supplied `ε` estimate.
    Auto(f64),
    /// `ε√(c/a)` from the known model and achieved `ε`.
    Tau0,
    /// Rough threshold from the achieved `ε`.
    Tau0Rough,
}

/// Unit of the grid in a `τ` sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauScale {
    #[default]
    Absolute,
    /// Grid values multiply the trial's `ε√(c/a)`.
    Tau0,
    /// Grid values multiply the trial's rough threshold.
    Tau0Rough,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub sweep: SweepVar,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub signal: NoisySignalSpec,
    pub kinds: Vec<SensingKind>,
    /// Sensed sizes `R_n`; ignored for modes resized by a `δ` sweep.
    pub sensing_ranks: Vec<usize>,
    #[serde(default = "default_policy")]
    pub policy: PolicySpec,
    #[serde(default)]
    pub tau_scale: TauScale,
    /// Draw a new `X_0` and noise for every trial instead of once per sweep.
    #[serde(default)]
    pub fresh_signal_per_trial: bool,
    /// Fill the `wall_ms` column; off by default so output is reproducible.
    #[serde(default)]
    pub record_timings: bool,
}

fn default_policy() -> PolicySpec {
    PolicySpec::FixedTau(0.0)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.grid.is_empty() || self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument(
                "grid must be non-empty and strictly increasing".into(),
            ));
        }
        self.signal.validate()?;
        let order = self.signal.dims.len();
        if self.kinds.len() != order || self.sensing_ranks.len() != order {
            return Err(Error::InvalidArgument(format!(
                "need {order} sensing kinds and ranks, got {} and {}",
                self.kinds.len(),
                self.sensing_ranks.len()
            )));
        }
        match self.sweep {
            SweepVar::Tau | SweepVar::Epsilon if self.grid[0] < 0.0 => {
                Err(Error::InvalidArgument("grid values must be non-negative".into()))
            }
            SweepVar::Delta if self.grid[0] <= 0.0 || self.grid[self.grid.len() - 1] > 1.0 => {
                Err(Error::InvalidArgument("sampling ratios must lie in (0, 1]".into()))
            }
            _ => Ok(()),
        }
    }

    /// Sensed sizes used at a grid point.
    pub fn ranks_at(&self, value: f64) -> Vec<usize> {
        if self.sweep != SweepVar::Delta {
            return self.sensing_ranks.clone();
        }
        self.kinds
            .iter()
            .zip(&self.signal.dims)
            .zip(&self.sensing_ranks)
            .map(|((&k, &i), &r)| {
                if k == SensingKind::Identity {
                    r
                } else {
                    rank_for_ratio(value, i)
                }
            })
            .collect()
    }

    /// Sampling ratio actually achieved at a grid point (first sensed mode).
    pub fn realized_value(&self, value: f64) -> f64 {
        match self.sweep {
            SweepVar::Delta => {
                let ranks = self.ranks_at(value);
                let n = self.kinds.iter().position(|&k| k != SensingKind::Identity).unwrap_or(0);
                sampling_ratio(ranks[n], self.signal.dims[n])
            }
            _ => value,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub sweep_var: SweepVar,
    pub value: f64,
    pub trial: usize,
    /// Seed of the sensing draw.
    pub seed: u64,
    pub error: f64,
    pub psnr_db: f64,
    pub tau: f64,
    pub sigma_min_modes: Vec<f64>,
    pub wall_ms: Option<f64>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSummary {
    pub value: f64,
    pub realized_value: f64,
    pub ok: usize,
    pub failed: usize,
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub mean_psnr_db: f64,
    pub mean_tau: f64,
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<PointSummary>,
}

pub fn summarize(value: f64, realized_value: f64, records: &[&TrialRecord]) -> PointSummary {
    let ok: Vec<&&TrialRecord> = records.iter().filter(|r| r.failure.is_none()).collect();
    let n = ok.len();
    let mean_of = |f: &dyn Fn(&TrialRecord) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / n as f64;
    let mean = mean_of(&|r| r.error);
    let var = if n > 1 {
        ok.iter().map(|r| (r.error - mean).powi(2)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    PointSummary {
        value,
        realized_value,
        ok: n,
        failed: records.len() - n,
        mean,
        std: var.sqrt(),
        min: ok.iter().map(|r| r.error).fold(f64::INFINITY, f64::min),
        max: ok.iter().map(|r| r.error).fold(f64::NEG_INFINITY, f64::max),
        mean_psnr_db: mean_of(&|r| r.psnr_db),
        mean_tau: mean_of(&|r| r.tau),
    }
}

/// Seeds of one trial: `(signal, sensing)`.
pub fn trial_seeds(cfg: &SweepConfig, trial: usize) -> (u64, u64) {
    let signal = if cfg.fresh_signal_per_trial {
        derive_seed(cfg.seed, &[1, trial as u64])
    } else {
        derive_seed(cfg.seed, &[1])
    };
    (signal, derive_seed(cfg.seed, &[2, trial as u64]))
}

struct Outcome {
    report: ReconstructionReport,
    error: f64,
    psnr_db: f64,
}

fn run_trial(cfg: &SweepConfig, value: f64, signal_seed: u64, sensing_seed: u64) -> Result<Outcome> {
    let mut spec = cfg.signal.clone();
    spec.seed = signal_seed;
    if cfg.sweep == SweepVar::Epsilon {
        spec.epsilon = value;
    }
    let signal = gen_noisy_signal(&spec)?;
    let ranks = cfg.ranks_at(value);
    let ensemble = SensingEnsemble::generate(&cfg.kinds, &ranks, &spec.dims, sensing_seed)?;
    let eps = signal.achieved_epsilon;

    let exact_tau0 = || -> Result<f64> { bound_constants(&signal.model, &ensemble)?.tau0(eps) };
    let rough_tau0 = || tau0_rough(eps, ensemble.matrices());
    let tau = match cfg.sweep {
        SweepVar::Tau => match cfg.tau_scale {
            TauScale::Absolute => value,
            TauScale::Tau0 => value * exact_tau0()?,
            TauScale::Tau0Rough => value * rough_tau0()?,
        },
        _ => match cfg.policy {
            PolicySpec::FixedTau(t) => t,
            PolicySpec::Auto(e) => TruncationPolicy::Auto { epsilon: e }.resolve(&ensemble)?,
            PolicySpec::Tau0 => exact_tau0()?,
            PolicySpec::Tau0Rough => rough_tau0()?,
        },
    };

    let meas = multiway_measure(&signal.x, &ensemble)?;
    let report = reconstruct(&meas, &ensemble, TruncationPolicy::FixedTau(tau))?;
    let error = reconstruction_error(&signal.x, &report.reconstruction)?;
    let psnr_db = psnr(&signal.x, &report.reconstruction)?;
    Ok(Outcome { report, error, psnr_db })
}

/// Runs every `(grid point, trial)` pair, in parallel, and returns records
/// in grid-then-trial order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.grid.len())
        .flat_map(|p| (0..cfg.trials).map(move |t| (p, t)))
        .collect();
    let records: Vec<TrialRecord> = jobs
        .par_iter()
        .map(|&(p, trial)| {
            let value = cfg.grid[p];
            let (signal_seed, sensing_seed) = trial_seeds(cfg, trial);
            let start = Instant::now();
            let outcome = run_trial(cfg, value, signal_seed, sensing_seed);
            let wall_ms = cfg.record_timings.then(|| start.elapsed().as_secs_f64() * 1e3);
            match outcome {
                Ok(o) => TrialRecord {
                    sweep_var: cfg.sweep,
                    value,
                    trial,
                    seed: sensing_seed,
                    error: o.error,
                    psnr_db: o.psnr_db,
                    tau: o.report.tau_used,
                    sigma_min_modes: o.report.sigma_min_modes(),
                    wall_ms,
                    failure: None,
                },
                Err(e) => TrialRecord {
                    sweep_var: cfg.sweep,
                    value,
                    trial,
                    seed: sensing_seed,
                    error: f64::NAN,
                    psnr_db: f64::NAN,
                    tau: f64::NAN,
                    sigma_min_modes: Vec::new(),
                    wall_ms,
                    failure: Some(e.to_string()),
                },
            }
        })
        .collect();

    let summaries = cfg
        .grid
        .iter()
        .enumerate()
        .map(|(p, &value)| {
            let point: Vec<&TrialRecord> = records[p * cfg.trials..(p + 1) * cfg.trials].iter().collect();
            summarize(value, cfg.realized_value(value), &point)
        })
        .collect();
    Ok(SweepResult { records, summaries })
}

/// `{:.16e}` (17 significant digits), with `inf`/`-inf`/`nan` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

pub const CSV_HEADER: [&str; 9] = [
    "sweep_var",
    "value",
    "trial",
    "seed",
    "error",
    "psnr_db",
    "tau",
    "sigma_min_modes",
    "wall_ms",
];

/// Writes records as CSV; per-mode singular values are `;`-separated.
pub fn write_csv<W: Write>(w: W, records: &[TrialRecord]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(CSV_HEADER)?;
    for r in records {
        let sigmas = r
            .sigma_min_modes
            .iter()
            .map(|&s| format_float(s))
            .collect::<Vec<_>>()
            .join(";");
        out.write_record([
            r.sweep_var.name().to_string(),
            format_float(r.value),
            r.trial.to_string(),
            r.seed.to_string(),
            format_float(r.error),
            format_float(r.psnr_db),
            format_float(r.tau),
            sigmas,
            r.wall_ms.map(format_float).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Parses `a:b:step` into an inclusive, strictly increasing grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidArgument(format!("grid must be a:b:step, got {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|k| a + k as f64 * step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tucker::tucker_als;

    fn spec(dims: &[usize], ranks: &[usize], epsilon: f64) -> NoisySignalSpec {
        NoisySignalSpec {
            dims: dims.to_vec(),
            ranks: ranks.to_vec(),
            epsilon,
            seed: 3,
            normalize: true,
            core_decay: 0.0,
        }
    }

    fn config(sweep: SweepVar, grid: Vec<f64>) -> SweepConfig {
        SweepConfig {
            sweep,
            grid,
            trials: 2,
            seed: 5,
            signal: spec(&[12, 10, 6], &[3, 3, 2], 1e-3),
            kinds: vec![SensingKind::Gaussian; 3],
            sensing_ranks: vec![3, 3, 2],
            policy: PolicySpec::FixedTau(0.0),
            tau_scale: TauScale::Absolute,
            fresh_signal_per_trial: false,
            record_timings: false,
        }
    }

    #[test]
    fn zero_noise_signal() {
        let s = gen_noisy_signal(&spec(&[5, 6, 7], &[2, 2, 2], 0.0)).unwrap();
        assert_eq!(s.achieved_epsilon, 0.0);
        assert!((s.x.frobenius_norm() - 1.0).abs() < 1e-14);
        assert_eq!(s.x, s.x0);
        let m = s.model.reconstruct().unwrap();
        assert!(m.sub(&s.x0).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn noisy_signal_contract() {
        for eps in [1e-4, 0.1, 2.0] {
            let s = gen_noisy_signal(&spec(&[6, 7, 8], &[2, 3, 2], eps)).unwrap();
            assert!((s.x.frobenius_norm() - 1.0).abs() < 1e-13);
            let noise = s.x.sub(&s.x0).unwrap().frobenius_norm();
            assert!((noise - s.achieved_epsilon).abs() < 1e-13);
            let als = tucker_als(&s.x, &[2, 3, 2], 50, 1e-10).unwrap();
            assert!(als.error() <= s.achieved_epsilon + 1e-12);
        }
    }

    #[test]
    fn unnormalized_keeps_epsilon() {
        let mut sp = spec(&[4, 5], &[2, 2], 0.3);
        sp.normalize = false;
        let s = gen_noisy_signal(&sp).unwrap();
        assert_eq!(s.achieved_epsilon, 0.3);
        assert!((s.x0.frobenius_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn low_rank_of_supplied() {
        let src = gaussian_tensor(&[6, 5, 4], 9, tag::MISC);
        let s = gen_noisy_signal_from(&src, &spec(&[6, 5, 4], &[2, 2, 2], 0.01)).unwrap();
        assert!((s.x.frobenius_norm() - 1.0).abs() < 1e-13);
        assert!(s.model.orthonormal.iter().all(|&o| o));
    }

    #[test]
    fn psnr_examples() {
        let x = DenseTensor::new(vec![2], vec![1.0, 0.0]).unwrap();
        let y = DenseTensor::new(vec![2], vec![1.0, 0.01]).unwrap();
        assert!((psnr(&x, &y).unwrap() - 40.0).abs() < 1e-12);
        assert_eq!(psnr(&x, &x).unwrap(), f64::INFINITY);
        let y = DenseTensor::new(vec![2], vec![1.0, 1.0]).unwrap();
        assert!(psnr(&x, &y).unwrap().abs() < 1e-15);
        let neg = DenseTensor::new(vec![2], vec![-1.0, 0.0]).unwrap();
        assert!(matches!(psnr(&neg, &x), Err(Error::PsnrUndefined { .. })));
    }

    #[test]
    fn error_metric_by_order() {
        let x = DenseTensor::new(vec![2, 2], vec![0.0; 4]).unwrap();
        let y = DenseTensor::new(vec![2, 2], vec![3.0, 0.0, 0.0, 4.0]).unwrap();
        assert!((reconstruction_error(&x, &y).unwrap() - 4.0).abs() < 1e-14);
        let x = DenseTensor::new(vec![2, 2, 1], vec![0.0; 4]).unwrap();
        let y = DenseTensor::new(vec![2, 2, 1], vec![3.0, 0.0, 0.0, 4.0]).unwrap();
        assert!((reconstruction_error(&x, &y).unwrap() - 5.0).abs() < 1e-14);
    }

    #[test]
    fn identity_sweep_is_exact() {
        let mut cfg = config(SweepVar::Tau, vec![0.0]);
        cfg.trials = 1;
        cfg.signal.epsilon = 0.0;
        cfg.signal.ranks = cfg.signal.dims.clone();
        cfg.kinds = vec![SensingKind::Identity; 3];
        cfg.sensing_ranks = cfg.signal.dims.clone();
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.records.len(), 1);
        assert!(r.records[0].error <= 1e-10);
        assert_eq!(r.records[0].psnr_db, f64::INFINITY);
    }

    #[test]
    fn sweep_is_deterministic_and_ordered() {
        let cfg = config(SweepVar::Epsilon, vec![1e-3, 1e-2]);
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(a.records, b.records);
        let order: Vec<(f64, usize)> = a.records.iter().map(|r| (r.value, r.trial)).collect();
        assert_eq!(order, vec![(1e-3, 0), (1e-3, 1), (1e-2, 0), (1e-2, 1)]);
        let mut ca = Vec::new();
        let mut cb = Vec::new();
        write_csv(&mut ca, &a.records).unwrap();
        write_csv(&mut cb, &b.records).unwrap();
        assert_eq!(ca, cb);
    }

    #[test]
    fn failures_are_recorded() {
        let mut cfg = config(SweepVar::Tau, vec![1.0]);
        cfg.tau_scale = TauScale::Tau0;
        // exact threshold is only defined with Φ_3 = I
        let r = run_sweep(&cfg).unwrap();
        assert!(r.records.iter().all(|rec| rec.failure.is_some()));
        assert_eq!(r.summaries[0].failed, 2);
    }

    #[test]
    fn summary_statistics() {
        let rec = |e: f64| TrialRecord {
            sweep_var: SweepVar::Tau,
            value: 0.0,
            trial: 0,
            seed: 0,
            error: e,
            psnr_db: 1.0,
            tau: 0.0,
            sigma_min_modes: vec![],
            wall_ms: None,
            failure: None,
        };
        let rs = [rec(1.0), rec(2.0), rec(3.0)];
        let s = summarize(0.0, 0.0, &rs.iter().collect::<Vec<_>>());
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.std, 1.0);
        assert_eq!((s.min, s.max), (1.0, 3.0));
    }

    #[test]
    fn delta_sweep_resizes_sensed_modes() {
        let mut cfg = config(SweepVar::Delta, vec![0.36]);
        cfg.signal = spec(&[20, 20, 6], &[2, 2, 2], 0.0);
        cfg.kinds = vec![SensingKind::Gaussian, SensingKind::Gaussian, SensingKind::Identity];
        cfg.sensing_ranks = vec![0, 0, 6];
        assert_eq!(cfg.ranks_at(0.36), vec![4, 4, 6]);
        assert!((cfg.realized_value(0.36) - 0.36).abs() < 1e-15);
    }

    #[test]
    fn float_format() {
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NAN), "nan");
        let x = 0.1 + 0.2;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.1:0.1:1").unwrap(), vec![0.1]);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn config_json_defaults() {
        let json = r#"{
            "sweep": "tau", "grid": [0.0], "trials": 1, "seed": 1,
            "signal": {"dims": [4, 4], "ranks": [2, 2], "epsilon": 0.01},
            "kinds": ["gaussian", "gaussian"], "sensing_ranks": [2, 2]
        }"#;
        let cfg: SweepConfig = serde_json::from_str(json).unwrap();
        assert_eq!(cfg.policy, PolicySpec::FixedTau(0.0));
        assert!(cfg.signal.normalize);
        assert_eq!(cfg.tau_scale, TauScale::Absolute);
        let p: PolicySpec = serde_json::from_str(r#"{"auto": 0.1}"#).unwrap();
        assert_eq!(p, PolicySpec::Auto(0.1));
        let p: PolicySpec = serde_json::from_str(r#""tau0""#).unwrap();
        assert_eq!(p, PolicySpec::Tau0);
    }
}
