//! Dense complex linear algebra for bipartite pure and mixed states.
//!
//! Subsystems are laid out in Kronecker order: the first entry of `dims` is
//! the slowest-varying index. A `cut` splits `dims` into an A part
//! (`dims[..cut]`) and a B part (`dims[cut..]`).

mod density;
mod fidelity;
pub mod random;
mod schmidt;
mod state;
mod unitary;

pub use density::{partial_trace, reduced_state, DensityMatrix};
pub use fidelity::{fidelity, purify};
pub use schmidt::{schmidt_decompose, SchmidtForm};
pub use state::{tensor, StateVector};
pub use unitary::{apply_local, relating_unitary, Side, UnitaryOp};

pub use num_complex::Complex64 as C64;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Largest dimension of any dense matrix (density matrix, unitary, or one
/// factor of a bipartite amplitude matrix).
pub const MAX_DIM: usize = 4096;

/// Largest number of amplitudes in a state vector.
pub const MAX_STATE_LEN: usize = 1 << 22;

/// Singular values and eigenvalues below this are treated as zero.
pub const RANK_CUTOFF: f64 = 1e-12;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::TooLarge { dim, max: MAX_DIM });
    }
    Ok(())
}

pub(crate) fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Thin SVD `m = u diag(s) v_t`, singular values nonincreasing.
pub(crate) struct Svd {
    pub u: DMatrix<C64>,
    pub s: Vec<f64>,
    pub v_t: DMatrix<C64>,
}

/// Computed with faer: nalgebra's complex SVD occasionally returns a wrong
/// factorization for rank-deficient input, which amplitude matrices of
/// weakly entangled states always are.
pub(crate) fn svd(m: &DMatrix<C64>) -> Svd {
    let f = faer::Mat::<C64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
    let d = f.thin_svd().expect("SVD of a finite matrix converges");
    let (u, v) = (d.U(), d.V());
    let s = d.S().column_vector();
    Svd {
        u: DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]),
        s: (0..s.nrows()).map(|i| s[i].re).collect(),
        v_t: DMatrix::from_fn(v.ncols(), v.nrows(), |i, j| v[(j, i)].conj()),
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Orthonormal columns spanning the same space as `cols`, extended to a full
/// `d x d` unitary by Gram-Schmidt over the standard basis.
pub(crate) fn complete_orthonormal(cols: &DMatrix<C64>) -> DMatrix<C64> {
    let d = cols.nrows();
    let mut basis: Vec<nalgebra::DVector<C64>> = Vec::with_capacity(d);
    let candidates = cols
        .column_iter()
        .map(|v| v.into_owned())
        .chain((0..d).map(|i| {
            let mut e = nalgebra::DVector::zeros(d);
            e[i] = c(1.0, 0.0);
            e
        }));
    for mut v in candidates {
        if basis.len() == d {
            break;
        }
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for b in &basis {
                let proj = b.dotc(&v);
                v -= b * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / c(norm, 0.0));
        }
    }
    DMatrix::from_columns(&basis)
}
