use super::{Matrix, SubspaceBasis, Tensor3};
use crate::error::{Error, Result};

/// Squared Frobenius residuals of one `I1 x I2 x 1` patch against the three
/// projections of a basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResidualTerms {
    /// `||P - P x1 (U1 U1^T)||^2`
    pub mode1: f64,
    /// `||P - P x2 (U2 U2^T)||^2`
    pub mode2: f64,
    /// `||p - p U3 U3^T||^2` on the vectorized patch `p`
    pub mode3: f64,
}

impl ResidualTerms {
    pub fn total(&self) -> f64 {
        self.mode1 + self.mode2 + self.mode3
    }
}

fn residual_sq(target: &Matrix, projected: &Matrix) -> f64 {
    target
        .iter()
        .zip(projected.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum()
}

pub fn residual_terms(patch: &Tensor3, basis: &SubspaceBasis) -> Result<ResidualTerms> {
    let [i1, i2, i3] = patch.dims();
    if i3 != 1 || (i1, i2) != basis.patch_dims() || basis.u3.nrows() != i1 * i2 {
        return Err(Error::DimensionMismatch(format!(
            "patch {:?} vs basis for {:?}",
            patch.dims(),
            basis.patch_dims()
        )));
    }
    // Column-major patch data is the mode-1 unfolding as-is.
    let m = Matrix::from_column_slice(i1, i2, patch.data());
    let (u1, u2, u3) = (&basis.u1, &basis.u2, &basis.u3);

    let mode1 = residual_sq(&m, &(u1 * (u1.transpose() * &m)));
    let mode2 = residual_sq(&m, &((&m * u2) * u2.transpose()));
    let row = Matrix::from_row_slice(1, i1 * i2, patch.data());
    let mode3 = residual_sq(&row, &((&row * u3) * u3.transpose()));
    Ok(ResidualTerms {
        mode1,
        mode2,
        mode3,
    })
}

/// Weighted reconstruction error of an amplitude/contrast patch pair:
/// `lambda_s * sum_n r_n(S) + lambda_c * sum_n r_n(C)`.
pub fn reconstruction_error(
    patch_s: &Tensor3,
    patch_c: &Tensor3,
    basis_s: &SubspaceBasis,
    basis_c: &SubspaceBasis,
    lambda_s: f64,
    lambda_c: f64,
) -> Result<f64> {
    let s = residual_terms(patch_s, basis_s)?;
    let c = residual_terms(patch_c, basis_c)?;
    Ok(lambda_s * s.total() + lambda_c * c.total())
}
