//! Single-pass multilinear subspaces and their incremental maintenance.
//!
//! Modes 1 and 2 keep the exact running products `A(n) A(n)^T` and are
//! re-diagonalized on demand. Mode 3 keeps a truncated right-singular basis
//! of the row-stacked patches, updated one row at a time with the sequential
//! Karhunen-Loeve step (no forgetting, no mean update).

use nalgebra::{DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::{Matrix, Tensor3};
use crate::error::{Error, Result};

/// Eigenvalues (squared singular values) below this fraction of the largest
/// are treated as zero when detecting rank.
pub const EIGEN_RANK_TOL: f64 = 1e-12;

/// Requested subspace dimensions `(P1, P2, P3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceDims {
    pub p1: usize,
    pub p2: usize,
    pub p3: usize,
}

impl SubspaceDims {
    pub const fn new(p1: usize, p2: usize, p3: usize) -> Self {
        SubspaceDims { p1, p2, p3 }
    }
}

impl Default for SubspaceDims {
    fn default() -> Self {
        SubspaceDims::new(15, 15, 5)
    }
}

/// Orthonormal projection bases for the three modes. `u3` spans the row
/// space of the mode-3 unfolding, i.e. it lives in vectorized-patch space.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    pub u1: Matrix,
    pub u2: Matrix,
    pub u3: Matrix,
    pub mode3_singular_values: Vec<f64>,
}

impl SubspaceBasis {
    /// Effective `(P1, P2, P3)` after rank capping.
    pub fn dims(&self) -> [usize; 3] {
        [self.u1.ncols(), self.u2.ncols(), self.u3.ncols()]
    }

    /// Patch extent `(I1, I2)` the basis applies to.
    pub fn patch_dims(&self) -> (usize, usize) {
        (self.u1.nrows(), self.u2.nrows())
    }
}

fn sorted_desc(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order
}

/// Leading eigenvectors of a symmetric positive semi-definite matrix, at
/// most `p` and only those above the rank tolerance.
fn top_eigenvectors(sym: &Matrix, p: usize) -> Matrix {
    let n = sym.nrows();
    if p == 0 || n == 0 {
        return Matrix::zeros(n, 0);
    }
    let eig = SymmetricEigen::new(sym.clone());
    let vals = eig.eigenvalues.as_slice();
    let order = sorted_desc(vals);
    let lmax = vals[order[0]];
    if lmax <= 0.0 {
        return Matrix::zeros(n, 0);
    }
    let keep: Vec<usize> = order
        .into_iter()
        .take_while(|&i| vals[i] > EIGEN_RANK_TOL * lmax)
        .take(p)
        .collect();
    Matrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])])
}

/// Right singular vectors of `a` (columns) with their singular values.
fn top_right_singular(a: &Matrix, p: usize) -> (Matrix, Vec<f64>) {
    let d = a.ncols();
    if p == 0 || a.nrows() == 0 {
        return (Matrix::zeros(d, 0), Vec::new());
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("v_t requested");
    let s = svd.singular_values.as_slice();
    let order = sorted_desc(s);
    let smax = s[order[0]];
    if smax <= 0.0 {
        return (Matrix::zeros(d, 0), Vec::new());
    }
    let keep: Vec<usize> = order
        .into_iter()
        .take_while(|&i| s[i] * s[i] > EIGEN_RANK_TOL * smax * smax)
        .take(p)
        .collect();
    let basis = Matrix::from_fn(d, keep.len(), |r, c| v_t[(keep[c], r)]);
    (basis, keep.iter().map(|&i| s[i]).collect())
}

/// Batch subspace extraction: eigenvectors of `A(n) A(n)^T` for modes 1-2,
/// right singular vectors of `A(3)` for mode 3, each capped at the rank.
pub fn compute_basis(t: &Tensor3, dims: SubspaceDims) -> Result<SubspaceBasis> {
    if t.data().iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroTensor);
    }
    let a1 = t.unfold(1)?;
    let a2 = t.unfold(2)?;
    let (u3, s3) = top_right_singular(&t.unfold(3)?, dims.p3);
    Ok(SubspaceBasis {
        u1: top_eigenvectors(&(&a1 * a1.transpose()), dims.p1),
        u2: top_eigenvectors(&(&a2 * a2.transpose()), dims.p2),
        u3,
        mode3_singular_values: s3,
    })
}

/// Fraction of `||t||_F^2` retained by projecting the mode-`mode`
/// unfolding onto the corresponding basis.
pub fn captured_energy(t: &Tensor3, basis: &SubspaceBasis, mode: usize) -> Result<f64> {
    let total = t.frobenius_sq();
    if total == 0.0 {
        return Err(Error::ZeroTensor);
    }
    let kept = match mode {
        1 => (basis.u1.transpose() * t.unfold(1)?).norm_squared(),
        2 => (basis.u2.transpose() * t.unfold(2)?).norm_squared(),
        3 => (t.unfold(3)? * &basis.u3).norm_squared(),
        m => return Err(Error::InvalidMode(m)),
    };
    Ok(kept / total)
}

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal bases, computed from sines so that tiny angles stay
/// accurate.
pub fn principal_angles(a: &Matrix, b: &Matrix) -> Vec<f64> {
    if b.ncols() == 0 {
        return Vec::new();
    }
    let resid = b - a * (a.transpose() * b);
    let mut sines: Vec<f64> = resid
        .svd(false, false)
        .singular_values
        .iter()
        .map(|s| s.clamp(0.0, 1.0).asin())
        .collect();
    sines.sort_by(f64::total_cmp);
    sines
}

/// Truncated right-singular state of a row-stacked matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode3State {
    basis: Matrix,
    sigma: Vec<f64>,
    max_rank: usize,
}

impl Mode3State {
    pub fn empty(dim: usize, max_rank: usize) -> Self {
        Mode3State {
            basis: Matrix::zeros(dim, 0),
            sigma: Vec::new(),
            max_rank,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Columns are orthonormal right singular vectors, strongest first.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn singular_values(&self) -> &[f64] {
        &self.sigma
    }

    /// One sequential Karhunen-Loeve step: fold `row` into the factorization.
    pub fn append(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} for a {}-dimensional row space",
                row.len(),
                self.dim()
            )));
        }
        let r = DVector::from_column_slice(row);
        let rnorm = r.norm();
        if rnorm == 0.0 || self.max_rank == 0 {
            return Ok(());
        }
        let k = self.sigma.len();
        if k == 0 {
            self.basis = Matrix::from_column_slice(row.len(), 1, (r / rnorm).as_slice());
            self.sigma = vec![rnorm];
            return Ok(());
        }

        // Two passes of Gram-Schmidt keep the residual orthogonal to V.
        let v = &self.basis;
        let mut proj = v.transpose() * &r;
        let mut res = &r - v * &proj;
        let again = v.transpose() * &res;
        res -= v * &again;
        proj += again;
        let rho = res.norm();
        let grows = rho > 1e-14 * rnorm;

        let kc = if grows { k + 1 } else { k };
        let mut core = Matrix::zeros(k + 1, kc);
        for (i, &s) in self.sigma.iter().enumerate() {
            core[(i, i)] = s;
        }
        for j in 0..k {
            core[(k, j)] = proj[j];
        }
        let mut q = v.clone();
        if grows {
            core[(k, k)] = rho;
            q = q.insert_column(k, 0.0);
            q.set_column(k, &(res / rho));
        }

        let svd = core.svd(false, true);
        let v_t = svd.v_t.expect("v_t requested");
        let s = svd.singular_values.as_slice();
        let order = sorted_desc(s);
        let smax = s[order[0]];
        let keep: Vec<usize> = order
            .into_iter()
            .take_while(|&i| s[i] * s[i] > EIGEN_RANK_TOL * smax * smax)
            .take(self.max_rank)
            .collect();
        let rot = Matrix::from_fn(kc, keep.len(), |r, c| v_t[(keep[c], r)]);
        self.basis = q * rot;
        self.sigma = keep.iter().map(|&i| s[i]).collect();
        Ok(())
    }
}

/// One modality (amplitude or contrast) of a texture tensor: the stacked
/// patches plus the incrementally maintained bases.
#[derive(Debug, Clone)]
pub struct ModalityModel {
    stack: Tensor3,
    cov1: Matrix,
    cov2: Matrix,
    mode3: Mode3State,
    basis: SubspaceBasis,
    dims: SubspaceDims,
    with_modes12: bool,
}

/// Bases of a tensor extended by one candidate patch, not yet committed.
#[derive(Debug, Clone)]
pub struct ModalityTrial {
    cov1: Matrix,
    cov2: Matrix,
    mode3: Mode3State,
    pub basis: SubspaceBasis,
}

impl ModalityModel {
    /// Starts a tensor from a single patch. With `with_modes12 = false` only
    /// the mode-3 basis is maintained and `u1`/`u2` stay empty.
    pub fn new(first: &Tensor3, dims: SubspaceDims, with_modes12: bool) -> Result<Self> {
        let [i1, i2, i3] = first.dims();
        if i3 != 1 {
            return Err(Error::DimensionMismatch(format!(
                "patch must have I3 = 1, got {i3}"
            )));
        }
        let (n1, n2) = if with_modes12 { (i1, i2) } else { (0, 0) };
        let mut model = ModalityModel {
            stack: Tensor3::from_vec([i1, i2, 1], first.data().to_vec())?,
            cov1: Matrix::zeros(n1, n1),
            cov2: Matrix::zeros(n2, n2),
            mode3: Mode3State::empty(i1 * i2, dims.p3),
            basis: SubspaceBasis {
                u1: Matrix::zeros(i1, 0),
                u2: Matrix::zeros(i2, 0),
                u3: Matrix::zeros(i1 * i2, 0),
                mode3_singular_values: Vec::new(),
            },
            dims,
            with_modes12,
        };
        let trial = model.extend(first)?;
        model.cov1 = trial.cov1;
        model.cov2 = trial.cov2;
        model.mode3 = trial.mode3;
        model.basis = trial.basis;
        Ok(model)
    }

    fn extend(&self, patch: &Tensor3) -> Result<ModalityTrial> {
        let [i1, i2, i3] = patch.dims();
        let [s1, s2, _] = self.stack.dims();
        if i3 != 1 || i1 != s1 || i2 != s2 {
            return Err(Error::DimensionMismatch(format!(
                "patch {:?} does not match tensor {:?}",
                patch.dims(),
                self.stack.dims()
            )));
        }
        let mut mode3 = self.mode3.clone();
        mode3.append(patch.data())?;
        let (cov1, cov2, u1, u2) = if self.with_modes12 {
            let m = Matrix::from_column_slice(i1, i2, patch.data());
            let mut cov1 = self.cov1.clone();
            cov1.gemm(1.0, &m, &m.transpose(), 1.0);
            let mut cov2 = self.cov2.clone();
            cov2.gemm(1.0, &m.transpose(), &m, 1.0);
            let u1 = top_eigenvectors(&cov1, self.dims.p1);
            let u2 = top_eigenvectors(&cov2, self.dims.p2);
            (cov1, cov2, u1, u2)
        } else {
            (
                self.cov1.clone(),
                self.cov2.clone(),
                Matrix::zeros(i1, 0),
                Matrix::zeros(i2, 0),
            )
        };
        let basis = SubspaceBasis {
            u1,
            u2,
            u3: mode3.basis().clone(),
            mode3_singular_values: mode3.singular_values().to_vec(),
        };
        Ok(ModalityTrial {
            cov1,
            cov2,
            mode3,
            basis,
        })
    }

    /// Bases of `(stack | patch)` without modifying `self`.
    pub fn trial(&self, patch: &Tensor3) -> Result<ModalityTrial> {
        if self.stack.dims()[2] == 0 {
            unreachable!("model always holds at least one patch");
        }
        self.extend(patch)
    }

    /// Appends `patch`, adopting the bases already computed by
    /// [`ModalityModel::trial`] for it.
    pub fn commit(&mut self, patch: &Tensor3, trial: ModalityTrial) -> Result<()> {
        self.stack.append(patch)?;
        self.cov1 = trial.cov1;
        self.cov2 = trial.cov2;
        self.mode3 = trial.mode3;
        self.basis = trial.basis;
        Ok(())
    }

    pub fn push(&mut self, patch: &Tensor3) -> Result<()> {
        let trial = self.trial(patch)?;
        self.commit(patch, trial)
    }

    pub fn basis(&self) -> &SubspaceBasis {
        &self.basis
    }

    pub fn stack(&self) -> &Tensor3 {
        &self.stack
    }

    pub fn member_count(&self) -> usize {
        self.stack.dims()[2]
    }
}
