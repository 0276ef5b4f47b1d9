use nalgebra::DMatrix;

use super::{c, DensityMatrix, StateVector, C64};
use crate::{Error, Result};

/// Eigenvalues of a density matrix below this are treated as numerical zeros.
const EIG_CUTOFF: f64 = 1e-14;

/// Amplitude fidelity `F = Tr sqrt(sqrt(ρ0) ρ1 sqrt(ρ0))`, in `[0, 1]`.
///
/// This is the maximal overlap `|<Ψ0|Ψ1>|` over purifications (not its
/// square). Computed as the trace norm of `L0† L1` where `ρi = Li Li†` are
/// the eigen square-root factors restricted to each support.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch { expected: rho0.dim(), actual: rho1.dim() });
    }
    let l0 = sqrt_factor(rho0);
    let l1 = sqrt_factor(rho1);
    if l0.ncols() == 0 || l1.ncols() == 0 {
        return Ok(0.0);
    }
    let cross = l0.adjoint() * l1;
    let f: f64 = cross.singular_values().iter().sum();
    Ok(f.clamp(0.0, 1.0))
}

/// `V sqrt(Λ)` over eigenvalues above the cutoff, so `ρ = L L†`.
pub(crate) fn sqrt_factor(rho: &DensityMatrix) -> DMatrix<C64> {
    let (vals, vecs) = rho.eigen();
    let cols: Vec<_> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > EIG_CUTOFF)
        .map(|(i, &l)| vecs.column(i) * c(l.sqrt(), 0.0))
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(rho.dim(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// A purification `|Ψ> = Σ √λ_i |v_i> ⊗ |i>` on `dims = [d, d]`; tracing out
/// the second (ancilla) factor returns `rho`.
pub fn purify(rho: &DensityMatrix) -> Result<StateVector> {
    let d = rho.dim();
    let (vals, vecs) = rho.eigen();
    let mut amps = vec![C64::default(); d * d];
    for (i, &l) in vals.iter().enumerate() {
        let s = l.max(0.0).sqrt();
        for a in 0..d {
            amps[a * d + i] = vecs[(a, i)] * s;
        }
    }
    StateVector::normalized(amps, vec![d, d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{partial_trace, random, schmidt_decompose};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pure(dims: &[usize], levels: &[usize]) -> DensityMatrix {
        DensityMatrix::from_pure(&StateVector::basis(dims, levels).unwrap()).unwrap()
    }

    #[test]
    fn identical_states_have_unit_fidelity() {
        let mut rng = crate::rng::seeded(31);
        let rho = random::density(3, &mut rng);
        assert!((fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-10);
        let p = pure(&[2], &[1]);
        assert!((fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn orthogonal_pure_states_have_zero_fidelity() {
        assert!(fidelity(&pure(&[2], &[0]), &pure(&[2], &[1])).unwrap() < 1e-12);
    }

    #[test]
    fn pure_versus_maximally_mixed() {
        let f = fidelity(&pure(&[2], &[0]), &DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        assert!((f - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn pure_pair_reduces_to_overlap() {
        let mut rng = crate::rng::seeded(32);
        let a = random::state(&[4], &mut rng);
        let b = random::state(&[4], &mut rng);
        let f = fidelity(&DensityMatrix::from_pure(&a).unwrap(), &DensityMatrix::from_pure(&b).unwrap()).unwrap();
        assert!((f - a.overlap(&b).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn symmetric_and_unitarily_invariant() {
        let mut rng = crate::rng::seeded(33);
        for d in [2, 3, 5] {
            let r0 = random::density(d, &mut rng);
            let r1 = random::density(d, &mut rng);
            let u = random::unitary(d, &mut rng);
            let f01 = fidelity(&r0, &r1).unwrap();
            let f10 = fidelity(&r1, &r0).unwrap();
            let fu = fidelity(&r0.conjugate(&u).unwrap(), &r1.conjugate(&u).unwrap()).unwrap();
            assert!((f01 - f10).abs() < 1e-10);
            assert!((f01 - fu).abs() < 1e-10);
            assert!((0.0..=1.0).contains(&f01));
        }
    }

    #[test]
    fn rejects_dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(fidelity(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn purify_pure_input_is_product() {
        let psi = purify(&pure(&[2], &[0])).unwrap();
        assert_eq!(psi.dims(), &[2, 2]);
        assert_eq!(schmidt_decompose(&psi, 1).unwrap().rank(), 1);
    }

    #[test]
    fn purify_maximally_mixed_is_maximally_entangled() {
        let psi = purify(&DensityMatrix::maximally_mixed(2).unwrap()).unwrap();
        let s = schmidt_decompose(&psi, 1).unwrap();
        assert_eq!(s.rank(), 2);
        for coeff in s.coeffs {
            assert!((coeff - FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn purify_round_trip() {
        let mut rng = crate::rng::seeded(34);
        for _ in 0..5 {
            let rho = random::density(3, &mut rng);
            let psi = purify(&rho).unwrap();
            let back = partial_trace(&DensityMatrix::from_pure(&psi).unwrap(), &[3, 3], &[0]).unwrap();
            assert!(back.distance(&rho) < 1e-12);
        }
    }
}
