use nalgebra::{DMatrix, DVector};

use super::{c, StateVector, C64, RANK_CUTOFF};
use crate::{Error, Result};

/// `|psi> = Σ_i coeffs[i] |a_i> ⊗ |b_i>` across a cut.
///
/// `coeffs` are `√λ_i`, strictly positive and descending; the bases are
/// stored as matrix columns.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    pub coeffs: Vec<f64>,
    pub basis_a: DMatrix<C64>,
    pub basis_b: DMatrix<C64>,
    pub dims: Vec<usize>,
    pub cut: usize,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// `λ_i = coeffs[i]^2`.
    pub fn lambdas(&self) -> Vec<f64> {
        self.coeffs.iter().map(|s| s * s).collect()
    }

    /// `Σ √λ_i |a_i> ⊗ |b_i>`.
    pub fn reconstruct(&self) -> Result<StateVector> {
        let da = self.basis_a.nrows();
        let db = self.basis_b.nrows();
        let mut m = DMatrix::<C64>::zeros(da, db);
        for (i, &s) in self.coeffs.iter().enumerate() {
            m += self.basis_a.column(i) * self.basis_b.column(i).transpose() * c(s, 0.0);
        }
        StateVector::from_amplitude_matrix(&m, self.dims.clone())
    }

    pub fn a(&self, i: usize) -> DVector<C64> {
        self.basis_a.column(i).into_owned()
    }

    pub fn b(&self, i: usize) -> DVector<C64> {
        self.basis_b.column(i).into_owned()
    }
}

/// Schmidt decomposition of `phi` across `cut`, computed as the SVD of the
/// `dA x dB` amplitude matrix. Coefficients below `1e-12` are dropped.
pub fn schmidt_decompose(phi: &StateVector, cut: usize) -> Result<SchmidtForm> {
    if cut == 0 || cut >= phi.dims().len() {
        return Err(Error::InvalidSubsystems(format!(
            "cut {cut} must lie strictly inside {} subsystems",
            phi.dims().len()
        )));
    }
    let m = phi.amplitude_matrix(cut)?;
    super::check_dim(m.nrows().min(m.ncols()))?;
    let super::Svd { u, s, v_t: vt } = super::svd(&m);
    let order: Vec<usize> = (0..s.len()).filter(|&i| s[i] > RANK_CUTOFF).collect();
    let coeffs = order.iter().map(|&i| s[i]).collect();
    let cols_a: Vec<_> = order.iter().map(|&i| u.column(i).into_owned()).collect();
    let cols_b: Vec<_> = order.iter().map(|&i| vt.row(i).transpose()).collect();
    Ok(SchmidtForm {
        coeffs,
        basis_a: DMatrix::from_columns(&cols_a),
        basis_b: DMatrix::from_columns(&cols_b),
        dims: phi.dims().to_vec(),
        cut,
    })
}
