//! Sensing ensembles and measurement operators.
//!
//! A multi-way measurement `Z^(n)` senses the signal along every mode except
//! `n`; the core measurement `W` senses all modes and is recoverable from any
//! `Z^(n)` as `W = Z^(n) ×_n Φ_n`.

mod store;

use serde::{Deserialize, Serialize};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::solve_square;
use crate::rng::{stream, tag};
use crate::tensor::{fold, mode_n_product, mul_kron, unfold, DenseTensor, Matrix};

pub use store::{load_measurements, save_measurements, Manifest, MeasurementMode, FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SensingKind {
    Gaussian,
    Bernoulli,
    Identity,
    Custom,
}

impl std::str::FromStr for SensingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "bernoulli" => Ok(Self::Bernoulli),
            "identity" => Ok(Self::Identity),
            "custom" => Ok(Self::Custom),
            other => Err(Error::InvalidArgument(format!("unknown sensing kind {other:?}"))),
        }
    }
}

/// Draws one `r × i` sensing matrix from the stream keyed by `(seed, mode_tag)`.
///
/// Gaussian entries are unscaled standard normals and Bernoulli entries are
/// ±1 with equal probability.
pub fn gen_sensing(kind: SensingKind, r: usize, i: usize, seed: u64, mode_tag: u64) -> Result<Matrix> {
    if r == 0 || r > i {
        return Err(Error::InvalidArgument(format!("sensing rows {r} must be in 1..={i}")));
    }
    let mut rng = stream(seed, tag::SENSING + mode_tag);
    match kind {
        SensingKind::Gaussian => Ok(Matrix::from_fn(r, i, |_, _| StandardNormal.sample(&mut rng))),
        SensingKind::Bernoulli => Ok(Matrix::from_fn(
            r,
            i,
            |_, _| {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            },
        )),
        SensingKind::Identity => {
            if r != i {
                return Err(Error::InvalidArgument(format!(
                    "identity sensing needs R = I, got {r} vs {i}"
                )));
            }
            Ok(Matrix::identity(r, i))
        }
        SensingKind::Custom => Err(Error::InvalidArgument(
            "custom sensing matrices must be supplied, not generated".into(),
        )),
    }
}

/// Per-mode sensing matrices `Φ_n` (`R_n × I_n`).
#[derive(Debug, Clone)]
pub struct SensingEnsemble {
    matrices: Vec<Matrix>,
    kinds: Vec<SensingKind>,
    seed: u64,
}

impl SensingEnsemble {
    pub fn generate(kinds: &[SensingKind], ranks: &[usize], dims: &[usize], seed: u64) -> Result<Self> {
        if kinds.len() != dims.len() || ranks.len() != dims.len() {
            return Err(Error::InvalidArgument(format!(
                "{} kinds and {} ranks for an order-{} signal",
                kinds.len(),
                ranks.len(),
                dims.len()
            )));
        }
        let matrices = kinds
            .iter()
            .zip(ranks.iter().zip(dims))
            .enumerate()
            .map(|(n, (&k, (&r, &i)))| gen_sensing(k, r, i, seed, n as u64))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            matrices,
            kinds: kinds.to_vec(),
            seed,
        })
    }

    /// Wraps user-supplied matrices; identity matrices are labelled as such.
    pub fn from_matrices(matrices: Vec<Matrix>) -> Result<Self> {
        let mut kinds = Vec::with_capacity(matrices.len());
        for (n, m) in matrices.iter().enumerate() {
            if m.nrows() == 0 || m.nrows() > m.ncols() {
                return Err(Error::InvalidArgument(format!(
                    "sensing matrix {n} is {}x{}; need 1 <= R <= I",
                    m.nrows(),
                    m.ncols()
                )));
            }
            let is_identity = m.is_square() && *m == Matrix::identity(m.nrows(), m.ncols());
            kinds.push(if is_identity {
                SensingKind::Identity
            } else {
                SensingKind::Custom
            });
        }
        Ok(Self {
            matrices,
            kinds,
            seed: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, mode: usize) -> &Matrix {
        &self.matrices[mode]
    }

    pub fn kinds(&self) -> &[SensingKind] {
        &self.kinds
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.matrices.iter().map(|m| m.nrows()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.matrices.iter().map(|m| m.ncols()).collect()
    }

    fn check_signal(&self, dims: &[usize]) -> Result<()> {
        if self.dims() != dims {
            return Err(Error::ShapeMismatch(format!(
                "ensemble senses {:?}, signal is {dims:?}",
                self.dims()
            )));
        }
        Ok(())
    }
}

/// Multi-way measurements `Z^(n)` and the core `W`.
#[derive(Debug, Clone)]
pub struct MeasurementSet {
    pub z: Vec<DenseTensor>,
    pub w: DenseTensor,
    pub seed: u64,
    pub kinds: Vec<SensingKind>,
}

impl MeasurementSet {
    pub fn order(&self) -> usize {
        self.w.order()
    }

    /// Sensed sizes `R_n`.
    pub fn ranks(&self) -> &[usize] {
        self.w.dims()
    }

    /// Signal sizes `I_n`, read off the unsensed mode of each `Z^(n)`.
    pub fn signal_dims(&self) -> Vec<usize> {
        self.z.iter().enumerate().map(|(n, z)| z.dims()[n]).collect()
    }

    /// Checks shapes against the core and returns the largest relative
    /// mismatch of `W = Z^(n) ×_n Φ_n` over all modes.
    pub fn consistency(&self, ensemble: &SensingEnsemble) -> Result<f64> {
        self.check_shapes()?;
        if ensemble.ranks() != self.ranks() || ensemble.dims() != self.signal_dims() {
            return Err(Error::ShapeMismatch("measurements do not match ensemble".into()));
        }
        let wn = self.w.frobenius_norm().max(f64::MIN_POSITIVE);
        let mut worst: f64 = 0.0;
        for (n, z) in self.z.iter().enumerate() {
            let w = mode_n_product(z, ensemble.matrix(n), n)?;
            worst = worst.max(w.sub(&self.w)?.frobenius_norm() / wn);
        }
        Ok(worst)
    }

    pub fn check_shapes(&self) -> Result<()> {
        let ranks = self.w.dims();
        if self.z.len() != ranks.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} measurement tensors for an order-{} core",
                self.z.len(),
                ranks.len()
            )));
        }
        for (n, z) in self.z.iter().enumerate() {
            let ok = z.order() == ranks.len() && z.dims().iter().enumerate().all(|(m, &d)| m == n || d == ranks[m]);
            if !ok {
                return Err(Error::ShapeMismatch(format!(
                    "Z^({}) has dims {:?}, core is {ranks:?}",
                    n + 1,
                    z.dims()
                )));
            }
        }
        Ok(())
    }
}

/// `Z^(n) = X ×_{m≠n} Φ_m` for every `n`, and `W = X ×_m Φ_m`.
pub fn multiway_measure(x: &DenseTensor, ensemble: &SensingEnsemble) -> Result<MeasurementSet> {
    ensemble.check_signal(x.dims())?;
    let order = x.order();
    let z = (0..order)
        .map(|n| {
            let mut t = x.clone();
            for m in (0..order).filter(|&m| m != n) {
                t = mode_n_product(&t, ensemble.matrix(m), m)?;
            }
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let w = mode_n_product(&z[0], ensemble.matrix(0), 0)?;
    Ok(MeasurementSet {
        z,
        w,
        seed: ensemble.seed(),
        kinds: ensemble.kinds().to_vec(),
    })
}

/// Compressive projections of a third-order signal along modes 1 and 2.
#[derive(Debug, Clone)]
pub struct TwoModeMeasurements {
    /// `Φ_1 X_(1)`, `R_1 × I_2 I_3`.
    pub y1: Matrix,
    /// `Φ_2 X_(2)`, `R_2 × I_1 I_3`.
    pub y2: Matrix,
    pub dims: [usize; 3],
}

pub fn two_mode_measure(x: &DenseTensor, phi1: &Matrix, phi2: &Matrix) -> Result<TwoModeMeasurements> {
    if x.order() != 3 {
        return Err(Error::ShapeMismatch(format!(
            "two-mode sensing needs order 3, got {}",
            x.order()
        )));
    }
    let d = x.dims();
    if phi1.ncols() != d[0] || phi2.ncols() != d[1] {
        return Err(Error::ShapeMismatch(format!(
            "Φ1 is {}x{}, Φ2 is {}x{}, signal is {d:?}",
            phi1.nrows(),
            phi1.ncols(),
            phi2.nrows(),
            phi2.ncols()
        )));
    }
    Ok(TwoModeMeasurements {
        y1: phi1 * unfold(x, 0)?,
        y2: phi2 * unfold(x, 1)?,
        dims: [d[0], d[1], d[2]],
    })
}

/// Relative tolerance for the `W` cross-check in [`assemble_from_two_mode`].
pub const ASSEMBLY_TOLERANCE: f64 = 1e-10;

/// Builds the full multi-way measurement set from two-mode projections.
///
/// `ensemble` holds `Φ_1`, `Φ_2` (the real sensing matrices) and `Φ_3`,
/// which only fixes the mode-3 compression of the assembled measurements.
pub fn assemble_from_two_mode(y: &TwoModeMeasurements, ensemble: &SensingEnsemble) -> Result<MeasurementSet> {
    if ensemble.order() != 3 {
        return Err(Error::ShapeMismatch(
            "two-mode assembly needs three sensing matrices".into(),
        ));
    }
    let [i1, i2, i3] = y.dims;
    ensemble.check_signal(&y.dims)?;
    let (phi1, phi2, phi3) = (ensemble.matrix(0), ensemble.matrix(1), ensemble.matrix(2));
    let (r1, r2, r3) = (phi1.nrows(), phi2.nrows(), phi3.nrows());
    if y.y1.shape() != (r1, i2 * i3) || y.y2.shape() != (r2, i1 * i3) {
        return Err(Error::ShapeMismatch(format!(
            "Y1 is {:?}, Y2 is {:?}, expected ({r1}, {}) and ({r2}, {})",
            y.y1.shape(),
            y.y2.shape(),
            i2 * i3,
            i1 * i3
        )));
    }

    let phi3t = phi3.transpose();
    // (Z^(1))_(2) = Y2 (Φ3ᵀ ⊗ I)
    let z1 = fold(&mul_kron(&y.y2, &phi3t, &Matrix::identity(i1, i1))?, 1, &[i1, r2, r3])?;
    // (Z^(2))_(1) = Y1 (Φ3ᵀ ⊗ I)
    let z2 = fold(&mul_kron(&y.y1, &phi3t, &Matrix::identity(i2, i2))?, 0, &[r1, i2, r3])?;
    // (Z^(3))_(1) = Y1 (I ⊗ Φ2ᵀ)
    let z3 = fold(
        &mul_kron(&y.y1, &Matrix::identity(i3, i3), &phi2.transpose())?,
        0,
        &[r1, r2, i3],
    )?;

    let w = mode_n_product(&z3, phi3, 2)?;
    let w_alt = mode_n_product(&z1, phi1, 0)?;
    let mismatch = w_alt.sub(&w)?.frobenius_norm() / w.frobenius_norm().max(f64::MIN_POSITIVE);
    if mismatch > ASSEMBLY_TOLERANCE {
        return Err(Error::Inconsistent { mismatch });
    }

    Ok(MeasurementSet {
        z: vec![z1, z2, z3],
        w,
        seed: ensemble.seed(),
        kinds: ensemble.kinds().to_vec(),
    })
}

/// Largest condition number accepted for `Φ_{1,2}` in [`recover_z12`].
pub const MAX_BLOCK_CONDITION: f64 = 1e12;

/// Splits `Z_1ᵀ` into `(Z_{1,1}, Z_{1,2})`, the last block holding `r` columns.
pub fn split_z1(z1: &Matrix, r: usize) -> Result<(Matrix, Matrix)> {
    let z1t = z1.transpose();
    let i1 = z1t.ncols();
    if r > i1 {
        return Err(Error::ShapeMismatch(format!("block width {r} exceeds {i1}")));
    }
    Ok((z1t.columns(0, i1 - r).into_owned(), z1t.columns(i1 - r, r).into_owned()))
}

/// Recomputes the held-out block `Z_{1,2}` of a 2D measurement from `Z_2`
/// and `Z_{1,1}`: `(Φ_2 Z_2 − Z_{1,1} Φ_{1,1}ᵀ)(Φ_{1,2}^{-1})ᵀ`.
///
/// Here `Z_1 = X Φ_2ᵀ`, `Z_2 = Xᵀ Φ_1ᵀ`, `Φ_1 = (Φ_{1,1}, Φ_{1,2})` with a
/// square trailing block.
pub fn recover_z12(z2: &Matrix, z11: &Matrix, phi1: &Matrix, phi2: &Matrix) -> Result<Matrix> {
    let r = phi1.nrows();
    let i1 = phi1.ncols();
    if phi2.nrows() != r || z2.shape() != (phi2.ncols(), r) || z11.shape() != (r, i1 - r) {
        return Err(Error::ShapeMismatch(format!(
            "Z2 {:?}, Z11 {:?}, Φ1 {:?}, Φ2 {:?}",
            z2.shape(),
            z11.shape(),
            phi1.shape(),
            phi2.shape()
        )));
    }
    let phi11 = phi1.columns(0, i1 - r);
    let phi12 = phi1.columns(i1 - r, r).into_owned();
    let mut rhs = phi2 * z2;
    if i1 > r {
        rhs -= z11 * phi11.transpose();
    }
    // Z12 Φ12ᵀ = rhs  ⇔  Φ12 Z12ᵀ = rhsᵀ
    Ok(solve_square(&phi12, &rhs.transpose(), MAX_BLOCK_CONDITION)?.transpose())
}

/// Non-redundant measurement count over signal size: `2(R/I) − (R/I)²`.
pub fn sampling_ratio(r: usize, i: usize) -> f64 {
    let q = r as f64 / i as f64;
    2.0 * q - q * q
}

/// Sensed size whose sampling ratio is closest to `delta`,
/// `round(I (1 − √(1 − δ)))`, clamped to `1..=I`.
pub fn rank_for_ratio(delta: f64, i: usize) -> usize {
    let d = delta.clamp(0.0, 1.0);
    let r = (i as f64 * (1.0 - (1.0 - d).sqrt())).round() as usize;
    r.clamp(1, i)
}
