//! Tucker models: evaluation, truncated HOSVD and the ALS (HOOI) refinement
//! used as the best low multilinear-rank baseline.

use crate::error::{Error, Result};
use crate::linalg::{leading_left_singular_vectors, svd};
use crate::rng::{gaussian_tensor, orthonormal_columns, tag};
use crate::tensor::{frobenius_norm, mode_n_product, unfold, DenseTensor, Matrix};

/// `core ×_1 A_1 ×_2 ... ×_N A_N`.
///
/// Factors built by a change of basis (`A_n = U_n (Φ_n U_n)^{-1}`) are stored
/// in the same type with their orthonormal flag cleared.
#[derive(Debug, Clone)]
pub struct TuckerModel {
    pub core: DenseTensor,
    pub factors: Vec<Matrix>,
    pub orthonormal: Vec<bool>,
}

impl TuckerModel {
    pub fn new(core: DenseTensor, factors: Vec<Matrix>, orthonormal: Vec<bool>) -> Result<Self> {
        if factors.len() != core.order() || orthonormal.len() != core.order() {
            return Err(Error::ShapeMismatch(format!(
                "core of order {} with {} factors",
                core.order(),
                factors.len()
            )));
        }
        for (n, f) in factors.iter().enumerate() {
            if f.ncols() != core.dims()[n] {
                return Err(Error::ShapeMismatch(format!(
                    "factor {n} has {} columns, core dim is {}",
                    f.ncols(),
                    core.dims()[n]
                )));
            }
        }
        Ok(Self {
            core,
            factors,
            orthonormal,
        })
    }

    /// Random model with a standard Gaussian core and Haar-orthonormal factors.
    pub fn random(dims: &[usize], ranks: &[usize], seed: u64) -> Result<Self> {
        check_ranks(dims, ranks)?;
        let core = gaussian_tensor(ranks, seed, tag::CORE);
        let factors = dims
            .iter()
            .zip(ranks)
            .enumerate()
            .map(|(n, (&i, &r))| orthonormal_columns(i, r, seed, tag::FACTOR + n as u64))
            .collect();
        Self::new(core, factors, vec![true; dims.len()])
    }

    pub fn order(&self) -> usize {
        self.core.order()
    }

    pub fn ranks(&self) -> &[usize] {
        self.core.dims()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.nrows()).collect()
    }

    pub fn reconstruct(&self) -> Result<DenseTensor> {
        tucker_reconstruct(self)
    }
}

pub fn tucker_reconstruct(model: &TuckerModel) -> Result<DenseTensor> {
    let mut t = model.core.clone();
    for (n, f) in model.factors.iter().enumerate() {
        t = mode_n_product(&t, f, n)?;
    }
    Ok(t)
}

fn check_ranks(dims: &[usize], ranks: &[usize]) -> Result<()> {
    if dims.len() != ranks.len() {
        return Err(Error::InvalidArgument(format!(
            "{} ranks for an order-{} tensor",
            ranks.len(),
            dims.len()
        )));
    }
    for (n, (&i, &r)) in dims.iter().zip(ranks).enumerate() {
        if r == 0 || r > i {
            return Err(Error::InvalidArgument(format!(
                "rank {r} invalid for mode {n} of size {i}"
            )));
        }
    }
    Ok(())
}

/// Projects `t` onto the given factors' spans: `t ×_n U_nᵀ` for every mode.
fn project(t: &DenseTensor, factors: &[Matrix], skip: Option<usize>) -> Result<DenseTensor> {
    let mut out = t.clone();
    for (n, u) in factors.iter().enumerate() {
        if Some(n) != skip {
            out = mode_n_product(&out, &u.transpose(), n)?;
        }
    }
    Ok(out)
}

/// Truncated higher-order SVD.
pub fn hosvd(t: &DenseTensor, ranks: &[usize]) -> Result<TuckerModel> {
    check_ranks(t.dims(), ranks)?;
    let factors = ranks
        .iter()
        .enumerate()
        .map(|(n, &r)| leading_left_singular_vectors(&unfold(t, n)?, r))
        .collect::<Result<Vec<_>>>()?;
    let core = project(t, &factors, None)?;
    TuckerModel::new(core, factors, vec![true; ranks.len()])
}

#[derive(Debug, Clone)]
pub struct AlsOutcome {
    pub model: TuckerModel,
    /// Fit error `‖T − model‖_F` of the HOSVD start followed by each sweep.
    pub history: Vec<f64>,
    pub iterations: usize,
}

impl AlsOutcome {
    pub fn error(&self) -> f64 {
        self.history.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub const ALS_MAX_ITERS: usize = 50;
pub const ALS_TOL: f64 = 1e-8;

/// Tucker ALS (higher-order orthogonal iteration), started from the
/// truncated HOSVD. Stops when the relative fit `1 − err/‖T‖` changes by
/// less than `tol` or after `max_iters` sweeps, and returns the best iterate.
pub fn tucker_als(t: &DenseTensor, ranks: &[usize], max_iters: usize, tol: f64) -> Result<AlsOutcome> {
    let mut model = hosvd(t, ranks)?;
    let norm = frobenius_norm(t);
    let fit_error = |m: &TuckerModel| -> Result<f64> { Ok(t.sub(&m.reconstruct()?)?.frobenius_norm()) };
    let mut err = fit_error(&model)?;
    let mut history = vec![err];
    let mut best = (err, model.clone());
    let mut iterations = 0;

    while iterations < max_iters {
        iterations += 1;
        let mut factors = model.factors.clone();
        for n in 0..ranks.len() {
            let y = project(t, &factors, Some(n))?;
            factors[n] = leading_left_singular_vectors(&unfold(&y, n)?, ranks[n])?;
        }
        let core = project(t, &factors, None)?;
        model = TuckerModel::new(core, factors, vec![true; ranks.len()])?;
        let next = fit_error(&model)?;
        history.push(next);
        if next < best.0 {
            best = (next, model.clone());
        }
        let change = if norm > 0.0 { (err - next).abs() / norm } else { 0.0 };
        err = next;
        if change < tol {
            break;
        }
    }
    Ok(AlsOutcome {
        model: best.1,
        history,
        iterations,
    })
}

/// Best rank-`r` approximation of a matrix (truncated SVD).
pub fn best_rank_matrix(m: &Matrix, r: usize) -> Result<Matrix> {
    let k = m.nrows().min(m.ncols());
    if r == 0 || r > k {
        return Err(Error::InvalidArgument(format!(
            "rank {r} invalid for {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let f = svd(m)?;
    let mut u = f.u.columns(0, r).into_owned();
    for j in 0..r {
        u.column_mut(j).scale_mut(f.s[j]);
    }
    Ok(u * f.v.columns(0, r).transpose())
}
