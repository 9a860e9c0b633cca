//! Dense N-way tensors and the multilinear algebra built on them.
//!
//! Storage is first-index-fastest (generalised column-major): element
//! `(i_1, ..., i_N)` lives at offset `Σ_n i_n · Π_{m<n} I_m` with 0-based
//! indices. Mode indices in this API are 0-based as well, so "mode 1" of the
//! usual notation is `mode = 0` here.
//!
//! The mode-`n` unfolding places fibre `(i_1, .., i_{n-1}, ·, i_{n+1}, .., i_N)`
//! in column `Σ_{k≠n} i_k J_k` with `J_k = Π_{m<k, m≠n} I_m`, which makes the
//! mode-0 unfolding a pure reinterpretation of the flat buffer.

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};

use crate::error::{Error, Result};

/// Column-major dense matrix of `f64`.
pub type Matrix = DMatrix<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dims: Vec<usize>,
    data: Vec<f64>,
}

impl DenseTensor {
    pub fn new(dims: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("tensor order must be positive".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument(format!("zero-length dimension in {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if data.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "dims {dims:?} need {len} entries, got {}",
                data.len()
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn zeros(dims: &[usize]) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims.to_vec(), vec![0.0; len])
    }

    /// Builds a tensor by evaluating `f` on every 0-based multi-index.
    pub fn from_fn(dims: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len: usize = dims.iter().product();
        let mut idx = vec![0usize; dims.len()];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(f(&idx));
            for (k, i) in idx.iter_mut().enumerate() {
                *i += 1;
                if *i < dims[k] {
                    break;
                }
                *i = 0;
            }
        }
        Self::new(dims.to_vec(), data)
    }

    /// Views a matrix as an order-2 tensor.
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            dims: vec![m.nrows(), m.ncols()],
            data: m.as_slice().to_vec(),
        }
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat offset of a 0-based multi-index.
    pub fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.order());
        let mut stride = 1;
        let mut off = 0;
        for (&i, &d) in idx.iter().zip(&self.dims) {
            off += i * stride;
            stride *= d;
        }
        off
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    /// Reinterprets an order-2 tensor as a matrix.
    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.order() != 2 {
            return Err(Error::ShapeMismatch(format!(
                "expected an order-2 tensor, got dims {:?}",
                self.dims
            )));
        }
        Ok(Matrix::from_column_slice(self.dims[0], self.dims[1], &self.data))
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|x| *x *= s);
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut out = self.clone();
        out.scale(s);
        out
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &DenseTensor) -> Result<Self> {
        check_same_dims(self, other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Ok(Self {
            dims: self.dims.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn frobenius_norm(&self) -> f64 {
        frobenius_norm(self)
    }
}

fn check_same_dims(a: &DenseTensor, b: &DenseTensor) -> Result<()> {
    if a.dims != b.dims {
        return Err(Error::ShapeMismatch(format!("{:?} vs {:?}", a.dims, b.dims)));
    }
    Ok(())
}

fn check_mode(order: usize, mode: usize) -> Result<()> {
    if mode >= order {
        return Err(Error::ModeOutOfRange { mode, order });
    }
    Ok(())
}

/// Splits `dims` around `mode` into (product before, dim, product after).
fn split_dims(dims: &[usize], mode: usize) -> (usize, usize, usize) {
    let left = dims[..mode].iter().product();
    let right = dims[mode + 1..].iter().product();
    (left, dims[mode], right)
}

/// Mode-`mode` unfolding: an `I_n × Π_{m≠n} I_m` matrix.
pub fn unfold(t: &DenseTensor, mode: usize) -> Result<Matrix> {
    check_mode(t.order(), mode)?;
    let (left, dn, right) = split_dims(&t.dims, mode);
    if left == 1 {
        return Ok(Matrix::from_column_slice(dn, right, &t.data));
    }
    let mut m = Matrix::zeros(dn, left * right);
    for r in 0..right {
        let slab = &t.data[r * left * dn..(r + 1) * left * dn];
        for i in 0..dn {
            for l in 0..left {
                m[(i, l + r * left)] = slab[l + i * left];
            }
        }
    }
    Ok(m)
}

/// Inverse of [`unfold`].
pub fn fold(m: &Matrix, mode: usize, dims: &[usize]) -> Result<DenseTensor> {
    check_mode(dims.len(), mode)?;
    let (left, dn, right) = split_dims(dims, mode);
    if m.nrows() != dn || m.ncols() != left * right {
        return Err(Error::ShapeMismatch(format!(
            "cannot fold {}x{} matrix along mode {mode} into {dims:?}",
            m.nrows(),
            m.ncols()
        )));
    }
    if left == 1 {
        return DenseTensor::new(dims.to_vec(), m.as_slice().to_vec());
    }
    let mut data = vec![0.0; left * dn * right];
    for r in 0..right {
        let slab = &mut data[r * left * dn..(r + 1) * left * dn];
        for i in 0..dn {
            for l in 0..left {
                slab[l + i * left] = m[(i, l + r * left)];
            }
        }
    }
    DenseTensor::new(dims.to_vec(), data)
}

/// Mode-`mode` product `T ×_n M`, defined by `unfold(result, n) = M · unfold(T, n)`.
pub fn mode_n_product(t: &DenseTensor, m: &Matrix, mode: usize) -> Result<DenseTensor> {
    check_mode(t.order(), mode)?;
    let (left, dn, right) = split_dims(&t.dims, mode);
    if m.ncols() != dn {
        return Err(Error::ShapeMismatch(format!(
            "mode-{mode} product needs a matrix with {dn} columns, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let rn = m.nrows();
    let mut dims = t.dims.clone();
    dims[mode] = rn;
    let mut data = vec![0.0; left * rn * right];

    if left == 1 {
        let x = DMatrixView::from_slice(&t.data, dn, right);
        let mut out = DMatrixViewMut::from_slice(&mut data, rn, right);
        out.gemm(1.0, m, &x, 0.0);
    } else {
        // Each right-index slab is a left × I_n matrix; the product acts on its rows.
        let mt = m.transpose();
        for r in 0..right {
            let x = DMatrixView::from_slice(&t.data[r * left * dn..(r + 1) * left * dn], left, dn);
            let mut out = DMatrixViewMut::from_slice(&mut data[r * left * rn..(r + 1) * left * rn], left, rn);
            out.gemm(1.0, &x, &mt, 0.0);
        }
    }
    DenseTensor::new(dims, data)
}

/// Applies each `(mode, matrix)` pair in turn.
pub fn multi_mode_product<'a>(
    t: &DenseTensor,
    products: impl IntoIterator<Item = (usize, &'a Matrix)>,
) -> Result<DenseTensor> {
    let mut out = t.clone();
    for (mode, m) in products {
        out = mode_n_product(&out, m, mode)?;
    }
    Ok(out)
}

/// Kronecker product; block `(i, j)` of the result is `a[(i, j)] * b`.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

/// Computes `y · (a ⊗ b)` without materialising the Kronecker product.
///
/// Columns of `y` are indexed as `i_b + q·i_a` (with `b` having `q` rows), so
/// `y` is the mode-0 unfolding of an `m × q × p` tensor and the product is
/// that tensor multiplied by `bᵀ` along mode 1 and `aᵀ` along mode 2.
pub fn mul_kron(y: &Matrix, a: &Matrix, b: &Matrix) -> Result<Matrix> {
    let (p, q) = (a.nrows(), b.nrows());
    if y.ncols() != p * q {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix times ({}x{}) ⊗ ({}x{})",
            y.nrows(),
            y.ncols(),
            p,
            a.ncols(),
            q,
            b.ncols()
        )));
    }
    let t = DenseTensor::new(vec![y.nrows(), q, p], y.as_slice().to_vec())?;
    let t = mode_n_product(&t, &b.transpose(), 1)?;
    let t = mode_n_product(&t, &a.transpose(), 2)?;
    unfold(&t, 0)
}

pub fn frobenius_norm(t: &DenseTensor) -> f64 {
    t.data.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn max_abs(t: &DenseTensor) -> f64 {
    t.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Largest signed entry (the peak value used by PSNR).
pub fn max_entry(t: &DenseTensor) -> f64 {
    t.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// `‖a − b‖_F / ‖b‖_F`, or the absolute difference when `b` is zero.
pub fn relative_error(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    let diff = a.sub(b)?.frobenius_norm();
    let nb = b.frobenius_norm();
    Ok(if nb > 0.0 { diff / nb } else { diff })
}
