use super::config::Variant;
use crate::error::Result;
use crate::tensor::{
    residual_terms, ModalityModel, ModalityTrial, SubspaceBasis, SubspaceDims, Tensor3,
};

/// Amplitude tensor and (unless the variant drops it) contrast tensor
/// grown from the same boundary points.
#[derive(Debug, Clone)]
pub struct TensorPair {
    amplitude: ModalityModel,
    contrast: Option<ModalityModel>,
}

#[derive(Debug, Clone)]
pub struct PairTrial {
    amplitude: ModalityTrial,
    contrast: Option<ModalityTrial>,
}

impl TensorPair {
    pub fn new(
        patch_s: &Tensor3,
        patch_c: &Tensor3,
        dims: SubspaceDims,
        variant: Variant,
    ) -> Result<Self> {
        let modes12 = variant.uses_modes12();
        Ok(TensorPair {
            amplitude: ModalityModel::new(patch_s, dims, modes12)?,
            contrast: if variant.uses_contrast() {
                Some(ModalityModel::new(patch_c, dims, modes12)?)
            } else {
                None
            },
        })
    }

    pub fn member_count(&self) -> usize {
        self.amplitude.member_count()
    }

    pub fn amplitude(&self) -> &ModalityModel {
        &self.amplitude
    }

    pub fn contrast(&self) -> Option<&ModalityModel> {
        self.contrast.as_ref()
    }

    pub fn basis_s(&self) -> &SubspaceBasis {
        self.amplitude.basis()
    }

    pub fn basis_c(&self) -> Option<&SubspaceBasis> {
        self.contrast.as_ref().map(ModalityModel::basis)
    }

    /// Bases of the pair extended by one candidate, and the candidate's
    /// error against them.
    pub fn trial_error(
        &self,
        patch_s: &Tensor3,
        patch_c: &Tensor3,
        variant: Variant,
        lambda_s: f64,
        lambda_c: f64,
    ) -> Result<(f64, PairTrial)> {
        let amplitude = self.amplitude.trial(patch_s)?;
        let contrast = self
            .contrast
            .as_ref()
            .map(|m| m.trial(patch_c))
            .transpose()?;
        let s_terms = residual_terms(patch_s, &amplitude.basis)?;
        let c_terms = contrast
            .as_ref()
            .map(|t| residual_terms(patch_c, &t.basis))
            .transpose()?;
        let e = variant.combine(&s_terms, c_terms.as_ref(), lambda_s, lambda_c);
        Ok((
            e,
            PairTrial {
                amplitude,
                contrast,
            },
        ))
    }

    pub(crate) fn commit(
        &mut self,
        patch_s: &Tensor3,
        patch_c: &Tensor3,
        trial: PairTrial,
    ) -> Result<()> {
        self.amplitude.commit(patch_s, trial.amplitude)?;
        if let (Some(model), Some(t)) = (self.contrast.as_mut(), trial.contrast) {
            model.commit(patch_c, t)?;
        }
        Ok(())
    }
}
