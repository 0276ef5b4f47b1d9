use nalgebra::{DMatrix, SymmetricEigen};

use super::state::strides;
use super::{c, check_dim, StateVector, C64};
use crate::{Error, Result};

const TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity, each to `1e-10`.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDensityMatrix(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        check_dim(m.nrows())?;
        let herm = super::max_abs_diff(&m, &m.adjoint());
        if herm > TOL {
            return Err(Error::InvalidDensityMatrix(format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = m.trace();
        if (tr - c(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let rho = Self { m: hermitize(m) };
        let min = rho.eigenvalues().last().copied().unwrap_or(0.0);
        if min < -TOL {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    /// For matrices valid by construction (partial traces of pure states).
    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        Self { m: hermitize(m) }
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        check_dim(psi.len())?;
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok(Self { m: &v * v.adjoint() })
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: DMatrix::identity(dim, dim) * c(1.0 / dim as f64, 0.0) })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.m.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Eigenpairs `(lambda_i, v_i)` in descending eigenvalue order.
    pub fn eigen(&self) -> (Vec<f64>, DMatrix<C64>) {
        let eig = SymmetricEigen::new(self.m.clone());
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let cols: Vec<_> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
        (values, DMatrix::from_columns(&cols))
    }

    /// `U rho U†`.
    pub fn conjugate(&self, u: &super::UnitaryOp) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: u.dim() });
        }
        Ok(Self::from_trusted(u.matrix() * &self.m * u.matrix().adjoint()))
    }

    /// `(1 - p) self + p other`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(Self::from_trusted(&self.m * c(1.0 - p, 0.0) + &other.m * c(p, 0.0)))
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &DensityMatrix) -> Result<Self> {
        check_dim(self.dim() * other.dim())?;
        Ok(Self { m: self.m.kronecker(&other.m) })
    }

    /// Largest entrywise deviation from `other`.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        super::max_abs_diff(&self.m, &other.m)
    }

    /// `<psi| rho |psi>`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: psi.len() });
        }
        let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
        Ok(v.dotc(&(&self.m * &v)).re)
    }
}

impl TryFrom<&StateVector> for DensityMatrix {
    type Error = Error;

    fn try_from(psi: &StateVector) -> Result<Self> {
        Self::from_pure(psi)
    }
}

fn hermitize(m: DMatrix<C64>) -> DMatrix<C64> {
    let adj = m.adjoint();
    (m + adj) * c(0.5, 0.0)
}

/// Traces out every subsystem not in `keep`. Kept subsystems retain their
/// relative order.
pub fn partial_trace(rho: &DensityMatrix, dims: &[usize], keep: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), actual: total });
    }
    let (kept_index, traced_index, dk, dt) = split_indices(dims, keep)?;
    // group full indices by their traced component
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(dk); dt];
    for i in 0..total {
        groups[traced_index[i]].push((i, kept_index[i]));
    }
    let m = rho.matrix();
    let mut out = DMatrix::<C64>::zeros(dk, dk);
    for group in &groups {
        for &(i, ki) in group {
            for &(j, kj) in group {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(DensityMatrix::from_trusted(out))
}

/// Reduced state of a pure state on the subsystems in `keep`, without
/// forming the full projector.
pub fn reduced_state(psi: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    let n = psi.dims().len();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() || sorted.iter().any(|&k| k >= n) || keep.is_empty() {
        return Err(Error::InvalidSubsystems(format!("keep {keep:?} for {n} subsystems")));
    }
    order.extend_from_slice(&sorted);
    order.extend((0..n).filter(|i| !sorted.contains(i)));
    let permuted = psi.permute(&order)?;
    let m = permuted.amplitude_matrix(sorted.len())?;
    check_dim(m.nrows())?;
    Ok(DensityMatrix::from_trusted(&m * m.adjoint()))
}

fn split_indices(dims: &[usize], keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>, usize, usize)> {
    let n = dims.len();
    let mut is_kept = vec![false; n];
    for &k in keep {
        if k >= n || is_kept[k] {
            return Err(Error::InvalidSubsystems(format!("keep {keep:?} for {n} subsystems")));
        }
        is_kept[k] = true;
    }
    if keep.is_empty() {
        return Err(Error::InvalidSubsystems("keep must be non-empty".into()));
    }
    let kept_dims: Vec<usize> = (0..n).filter(|&i| is_kept[i]).map(|i| dims[i]).collect();
    let traced_dims: Vec<usize> = (0..n).filter(|&i| !is_kept[i]).map(|i| dims[i]).collect();
    let ks = strides(&kept_dims);
    let ts = strides(&traced_dims);
    let full = strides(dims);
    let total: usize = dims.iter().product();
    let mut kept_index = vec![0; total];
    let mut traced_index = vec![0; total];
    for idx in 0..total {
        let (mut kpos, mut tpos) = (0, 0);
        let (mut ki, mut ti) = (0, 0);
        for s in 0..n {
            let digit = (idx / full[s]) % dims[s];
            if is_kept[s] {
                ki += digit * ks[kpos];
                kpos += 1;
            } else {
                ti += digit * ts[tpos];
                tpos += 1;
            }
        }
        kept_index[idx] = ki;
        traced_index[idx] = ti;
    }
    Ok((kept_index, traced_index, kept_dims.iter().product(), traced_dims.iter().product()))
}
