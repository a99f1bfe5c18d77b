//! Dense third-order tensors.
//!
//! Element `(i1, i2, i3)` lives at `i1 + I1 * (i2 + I2 * i3)`, so every
//! frontal slice (a patch, for texture tensors) is contiguous and laid out
//! column-major. Unfoldings order the remaining indices in increasing mode
//! order with the lower mode varying fastest:
//!
//! * mode 1: row `i1`, column `i2 + I2 * i3`
//! * mode 2: row `i2`, column `i1 + I1 * i3`
//! * mode 3: row `i3`, column `i1 + I1 * i2`

mod residual;
mod subspace;

pub use residual::{reconstruction_error, residual_terms, ResidualTerms};
pub use subspace::{
    captured_energy, compute_basis, principal_angles, ModalityModel, ModalityTrial, Mode3State,
    SubspaceBasis, SubspaceDims, EIGEN_RANK_TOL,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type Matrix = DMatrix<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    dims: [usize; 3],
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(dims: [usize; 3]) -> Self {
        Tensor3 {
            dims,
            data: vec![0.0; dims.iter().product()],
        }
    }

    pub fn from_vec(dims: [usize; 3], data: Vec<f64>) -> Result<Self> {
        if dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("zero extent in {dims:?}")));
        }
        let n: usize = dims.iter().product();
        if data.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} values for dims {dims:?}",
                data.len()
            )));
        }
        Ok(Tensor3 { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Tensor3::zeros(dims);
        for i3 in 0..dims[2] {
            for i2 in 0..dims[1] {
                for i1 in 0..dims[0] {
                    let k = t.index(i1, i2, i3);
                    t.data[k] = f(i1, i2, i3);
                }
            }
        }
        t
    }

    /// An `I1 x I2 x 1` tensor from a column-major patch.
    pub fn patch(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        Tensor3::from_vec([rows, cols, 1], data)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, i3: usize) -> usize {
        i1 + self.dims[0] * (i2 + self.dims[1] * i3)
    }

    #[inline]
    pub fn get(&self, i1: usize, i2: usize, i3: usize) -> f64 {
        self.data[self.index(i1, i2, i3)]
    }

    pub fn set(&mut self, i1: usize, i2: usize, i3: usize, v: f64) {
        let k = self.index(i1, i2, i3);
        self.data[k] = v;
    }

    /// Frontal slice `i3` as contiguous column-major data.
    pub fn slice3(&self, i3: usize) -> &[f64] {
        let n = self.dims[0] * self.dims[1];
        &self.data[i3 * n..(i3 + 1) * n]
    }

    /// Appends an `I1 x I2 x 1` patch along mode 3 (the `(A | B)`
    /// concatenation used when a tensor grows).
    pub fn append(&mut self, patch: &Tensor3) -> Result<()> {
        if patch.dims[0] != self.dims[0] || patch.dims[1] != self.dims[1] || patch.dims[2] != 1 {
            return Err(Error::DimensionMismatch(format!(
                "cannot append {:?} to {:?}",
                patch.dims, self.dims
            )));
        }
        self.data.extend_from_slice(&patch.data);
        self.dims[2] += 1;
        Ok(())
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    pub fn unfold(&self, mode: usize) -> Result<Matrix> {
        let [d1, d2, d3] = self.dims;
        Ok(match mode {
            1 => Matrix::from_fn(d1, d2 * d3, |r, c| self.get(r, c % d2, c / d2)),
            2 => Matrix::from_fn(d2, d1 * d3, |r, c| self.get(c % d1, r, c / d1)),
            3 => Matrix::from_fn(d3, d1 * d2, |r, c| self.data[r * d1 * d2 + c]),
            m => return Err(Error::InvalidMode(m)),
        })
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(matrix: &Matrix, mode: usize, dims: [usize; 3]) -> Result<Self> {
        let [d1, d2, d3] = dims;
        let expected = match mode {
            1 => (d1, d2 * d3),
            2 => (d2, d1 * d3),
            3 => (d3, d1 * d2),
            m => return Err(Error::InvalidMode(m)),
        };
        if matrix.shape() != expected {
            return Err(Error::DimensionMismatch(format!(
                "mode-{mode} unfolding of {dims:?} is {expected:?}, got {:?}",
                matrix.shape()
            )));
        }
        Ok(Tensor3::from_fn(dims, |i1, i2, i3| match mode {
            1 => matrix[(i1, i2 + d2 * i3)],
            2 => matrix[(i2, i1 + d1 * i3)],
            _ => matrix[(i3, i1 + d1 * i2)],
        }))
    }

    /// `self x_mode m`: replaces extent `I_mode` with the row count of `m`.
    pub fn mode_product(&self, m: &Matrix, mode: usize) -> Result<Tensor3> {
        if !(1..=3).contains(&mode) {
            return Err(Error::InvalidMode(mode));
        }
        if m.ncols() != self.dims[mode - 1] {
            return Err(Error::DimensionMismatch(format!(
                "mode-{mode} product needs {} columns, matrix has {}",
                self.dims[mode - 1],
                m.ncols()
            )));
        }
        let mut dims = self.dims;
        dims[mode - 1] = m.nrows();
        let product = m * self.unfold(mode)?;
        Tensor3::fold(&product, mode, dims)
    }
}
