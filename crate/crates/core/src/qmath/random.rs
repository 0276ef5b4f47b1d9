//! Haar-random states, unitaries and density matrices for tests and sweeps.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{c, DensityMatrix, StateVector, UnitaryOp, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state with the given subsystem dimensions.
pub fn state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> StateVector {
    let len: usize = dims.iter().product();
    let amps = (0..len).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps, dims.to_vec()).expect("gaussian vector is non-zero")
}

/// Haar-random unitary, via QR of a Ginibre matrix with the phase of `R`'s
/// diagonal absorbed into `Q`.
pub fn unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> UnitaryOp {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryOp::new(q).expect("QR factor is unitary")
}

/// Random full-rank density matrix `G G† / Tr(G G†)` with Ginibre `G`.
pub fn density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).expect("Ginibre ensemble yields a density matrix")
}

/// Random density matrix of the given rank (a partial trace of a random
/// pure state on `dim x rank`).
pub fn density_of_rank<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = DMatrix::from_fn(dim, rank, |_, _| gaussian(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).expect("Wishart matrix is a density matrix")
}
