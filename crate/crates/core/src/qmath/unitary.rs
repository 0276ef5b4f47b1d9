use nalgebra::{DMatrix, DVector};

use super::{c, check_dim, complete_orthonormal, max_abs_diff, StateVector, C64, RANK_CUTOFF};
use crate::{Error, Result};

const UNITARY_TOL: f64 = 1e-9;
const SAME_REDUCED_TOL: f64 = 1e-8;

/// A unitary operator on a space of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOp {
    m: DMatrix<C64>,
}

/// Which factor of a bipartite state an operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl UnitaryOp {
    /// Checks `U†U = I` to `1e-9`.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.nrows(), actual: m.ncols() });
        }
        check_dim(m.nrows())?;
        let dev = max_abs_diff(&(m.adjoint() * &m), &DMatrix::identity(m.nrows(), m.nrows()));
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: DMatrix::identity(dim, dim) }
    }

    /// Pauli X.
    pub fn pauli_x() -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]))
    }

    /// Pauli Y.
    pub fn pauli_y() -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]))
    }

    /// Pauli Z.
    pub fn pauli_z() -> Self {
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]))
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_trusted(DMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)]))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        Self { m: self.m.adjoint() }
    }

    /// `self * other`, i.e. `other` applied first.
    pub fn compose(&self, other: &UnitaryOp) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(Self { m: &self.m * &other.m })
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &UnitaryOp) -> Result<Self> {
        check_dim(self.dim() * other.dim())?;
        Ok(Self { m: self.m.kronecker(&other.m) })
    }

    /// `U|psi>` on the whole space.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: psi.len() });
        }
        let v = &self.m * DVector::from_column_slice(psi.amplitudes());
        StateVector::normalized(v.iter().copied().collect(), psi.dims().to_vec())
    }

    /// Applies `self` to the subsystems `targets` of `psi`, in the listed order.
    pub fn apply_on(&self, psi: &StateVector, targets: &[usize]) -> Result<StateVector> {
        let order = targets_first(psi.dims().len(), targets)?;
        let target_dim: usize = targets.iter().map(|&t| psi.dims()[t]).product();
        if target_dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: target_dim, actual: self.dim() });
        }
        let permuted = psi.permute(&order)?;
        let moved = apply_local(self, &permuted, targets.len().max(1), Side::A)?;
        moved.permute(&inverse(&order))
    }

    /// The full-space operator acting as `self` on `targets` and identity elsewhere.
    pub fn embed(&self, dims: &[usize], targets: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        check_dim(total)?;
        let order = targets_first(dims.len(), targets)?;
        let target_dim: usize = targets.iter().map(|&t| dims[t]).product();
        if target_dim != self.dim() {
            return Err(Error::DimensionMismatch { expected: target_dim, actual: self.dim() });
        }
        // column j of the embedded operator is the image of basis state j
        let mut cols = Vec::with_capacity(total);
        for j in 0..total {
            let mut amps = vec![C64::default(); total];
            amps[j] = c(1.0, 0.0);
            let e = StateVector::new(amps, dims.to_vec())?;
            let permuted = e.permute(&order)?;
            let moved = apply_local(self, &permuted, targets.len().max(1), Side::A)?;
            let back = moved.permute(&inverse(&order))?;
            cols.push(DVector::from_column_slice(back.amplitudes()));
        }
        Ok(Self { m: DMatrix::from_columns(&cols) })
    }
}

fn targets_first(n: usize, targets: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; n];
    for &t in targets {
        if t >= n || std::mem::replace(&mut seen[t], true) {
            return Err(Error::InvalidSubsystems(format!("targets {targets:?} for {n} subsystems")));
        }
    }
    if targets.is_empty() {
        return Err(Error::InvalidSubsystems("no target subsystems".into()));
    }
    let mut order = targets.to_vec();
    order.extend((0..n).filter(|i| !seen[*i]));
    Ok(order)
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (j, &o) in order.iter().enumerate() {
        inv[o] = j;
    }
    inv
}

/// Applies `u` to one factor of `psi` split at `cut`.
pub fn apply_local(u: &UnitaryOp, psi: &StateVector, cut: usize, side: Side) -> Result<StateVector> {
    let (da, db) = psi.split_dims(cut)?;
    let m = psi.amplitude_matrix(cut)?;
    let out = match side {
        Side::A => {
            if u.dim() != da {
                return Err(Error::DimensionMismatch { expected: da, actual: u.dim() });
            }
            u.matrix() * m
        }
        Side::B => {
            if u.dim() != db {
                return Err(Error::DimensionMismatch { expected: db, actual: u.dim() });
            }
            m * u.matrix().transpose()
        }
    };
    StateVector::from_amplitude_matrix(&out, psi.dims().to_vec())
}

/// The A-local unitary relating two purifications of the same B-side
/// reduced state: `(U ⊗ I)|psi> = |psi_prime>` up to global phase.
///
/// With `psi = Σ √λ_i |e_i>|φ_i>`, the partner vectors
/// `|e'_i> = (I ⊗ <φ_i*|) |psi_prime> / √λ_i` are orthonormal exactly when the
/// reduced states agree, and `U` maps `e_i -> e'_i`, completed arbitrarily on
/// the complement of the support. Degenerate `λ_i` need no special care: the
/// partners are defined against whichever basis the SVD picked.
pub fn relating_unitary(psi: &StateVector, psi_prime: &StateVector, cut: usize) -> Result<UnitaryOp> {
    if psi.dims() != psi_prime.dims() {
        return Err(Error::InvalidSubsystems(format!(
            "dims {:?} vs {:?}",
            psi.dims(),
            psi_prime.dims()
        )));
    }
    let m0 = psi.amplitude_matrix(cut)?;
    let m1 = psi_prime.amplitude_matrix(cut)?;
    relate_rows(&m0, &m1)
}

/// Core of [`relating_unitary`] on amplitude matrices: finds `U` with
/// `U m0 = m1` given `m0^T m0* = m1^T m1*`.
pub(crate) fn relate_rows(m0: &DMatrix<C64>, m1: &DMatrix<C64>) -> Result<UnitaryOp> {
    check_dim(m0.nrows())?;
    let rb0 = m0.transpose() * m0.conjugate();
    let rb1 = m1.transpose() * m1.conjugate();
    let diff = max_abs_diff(&rb0, &rb1);
    if diff > SAME_REDUCED_TOL {
        return Err(Error::ReducedStatesDiffer(diff));
    }
    let super::Svd { u, s: sv, v_t: vt } = super::svd(m0);
    let da = m0.nrows();
    let kept: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] > RANK_CUTOFF).collect();
    let mut e = Vec::with_capacity(kept.len());
    let mut e_prime = Vec::with_capacity(kept.len());
    for &i in &kept {
        let s = sv[i];
        e.push(u.column(i).into_owned());
        // m1 * conj(φ_i) where φ_i is row i of V^T
        let phi_conj = vt.row(i).transpose().conjugate();
        e_prime.push(m1 * phi_conj / c(s, 0.0));
    }
    let src = complete_orthonormal(&columns_or_empty(&e, da));
    let dst = complete_orthonormal(&columns_or_empty(&e_prime, da));
    Ok(UnitaryOp::from_trusted(dst * src.adjoint()))
}

fn columns_or_empty(cols: &[DVector<C64>], d: usize) -> DMatrix<C64> {
    if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{density::reduced_state, random, tensor};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell(sign: f64) -> StateVector {
        StateVector::new(
            vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(sign * FRAC_1_SQRT_2, 0.0)],
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn identity_leaves_state_alone() {
        let mut rng = crate::rng::seeded(1);
        let psi = random::state(&[3, 2], &mut rng);
        let out = apply_local(&UnitaryOp::identity(3), &psi, 1, Side::A).unwrap();
        assert!(psi.phase_distance(&out).unwrap() < 1e-7);
        assert!(psi.overlap(&out).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn x_on_a_flips_first_qubit() {
        let psi = StateVector::basis(&[2, 2], &[0, 0]).unwrap();
        let out = apply_local(&UnitaryOp::pauli_x(), &psi, 1, Side::A).unwrap();
        assert_eq!(out, StateVector::basis(&[2, 2], &[1, 0]).unwrap());
        let out_b = apply_local(&UnitaryOp::pauli_x(), &psi, 1, Side::B).unwrap();
        assert_eq!(out_b, StateVector::basis(&[2, 2], &[0, 1]).unwrap());
    }

    #[test]
    fn local_unitary_preserves_other_reduced_state() {
        let mut rng = crate::rng::seeded(2);
        for _ in 0..10 {
            let psi = random::state(&[3, 4], &mut rng);
            let ua = random::unitary(3, &mut rng);
            let out = apply_local(&ua, &psi, 1, Side::A).unwrap();
            assert!((out.norm() - 1.0).abs() < 1e-12);
            let before = reduced_state(&psi, &[1]).unwrap();
            let after = reduced_state(&out, &[1]).unwrap();
            assert!(before.distance(&after) < 1e-12);

            let ub = random::unitary(4, &mut rng);
            let out = apply_local(&ub, &psi, 1, Side::B).unwrap();
            let before = reduced_state(&psi, &[0]).unwrap();
            let after = reduced_state(&out, &[0]).unwrap();
            assert!(before.distance(&after) < 1e-12);
        }
    }

    #[test]
    fn apply_local_rejects_wrong_dimension() {
        let psi = StateVector::basis(&[2, 3], &[0, 0]).unwrap();
        assert!(matches!(
            apply_local(&UnitaryOp::identity(3), &psi, 1, Side::A),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_on_matches_embedded_operator() {
        let mut rng = crate::rng::seeded(3);
        let dims = [2, 3, 2];
        let psi = random::state(&dims, &mut rng);
        let u = random::unitary(4, &mut rng);
        let targets = [2, 0];
        let direct = u.apply_on(&psi, &targets).unwrap();
        let full = u.embed(&dims, &targets).unwrap();
        UnitaryOp::new(full.matrix().clone()).unwrap();
        let via_full = full.apply(&psi).unwrap();
        let diff: f64 = direct
            .amplitudes()
            .iter()
            .zip(via_full.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn embed_on_first_factor_is_kronecker_with_identity() {
        let mut rng = crate::rng::seeded(4);
        let u = random::unitary(2, &mut rng);
        let full = u.embed(&[2, 3], &[0]).unwrap();
        let kron = u.kron(&UnitaryOp::identity(3)).unwrap();
        assert!(max_abs_diff(full.matrix(), kron.matrix()) < 1e-14);
    }

    #[test]
    fn relating_unitary_of_identical_states_is_identity_up_to_phase() {
        let mut rng = crate::rng::seeded(5);
        let psi = random::state(&[3, 3], &mut rng);
        let u = relating_unitary(&psi, &psi, 1).unwrap();
        // full rank so U is determined: must be a multiple of the identity
        let phase = u.matrix()[(0, 0)];
        assert!((phase.norm() - 1.0).abs() < 1e-8);
        let scaled = UnitaryOp::identity(3).matrix() * phase;
        assert!(max_abs_diff(u.matrix(), &scaled) < 1e-8);
    }

    #[test]
    fn relating_unitary_recovers_local_rotation() {
        let mut rng = crate::rng::seeded(6);
        for (da, db) in [(2, 2), (3, 4), (4, 2), (5, 3)] {
            let psi = random::state(&[da, db], &mut rng);
            let v = random::unitary(da, &mut rng);
            let target = apply_local(&v, &psi, 1, Side::A).unwrap();
            let u = relating_unitary(&psi, &target, 1).unwrap();
            UnitaryOp::new(u.matrix().clone()).unwrap();
            let got = apply_local(&u, &psi, 1, Side::A).unwrap();
            assert!(got.overlap(&target).unwrap() > 1.0 - 1e-10);
            // U and V agree on the support of rho_A (all of it when da <= db)
            let rho_a = reduced_state(&psi, &[0]).unwrap();
            let (vals, vecs) = rho_a.eigen();
            for (i, lam) in vals.iter().enumerate() {
                if *lam > 1e-9 {
                    let col = vecs.column(i);
                    let diff = (u.matrix() * col - v.matrix() * col).norm();
                    assert!(diff < 1e-8, "({da},{db}) eigvec {i}: {diff}");
                }
            }
        }
    }

    #[test]
    fn bell_states_related_by_z() {
        let u = relating_unitary(&bell(1.0), &bell(-1.0), 1).unwrap();
        let z = UnitaryOp::pauli_z();
        let phase = u.matrix()[(0, 0)];
        assert!(max_abs_diff(u.matrix(), &(z.matrix() * phase)) < 1e-10);
        let out = apply_local(&u, &bell(1.0), 1, Side::A).unwrap();
        assert!(out.overlap(&bell(-1.0)).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn relating_unitary_rejects_different_reduced_states() {
        let a = tensor(&StateVector::basis(&[2], &[0]).unwrap(), &StateVector::basis(&[2], &[0]).unwrap()).unwrap();
        let b = tensor(&StateVector::basis(&[2], &[0]).unwrap(), &StateVector::basis(&[2], &[1]).unwrap()).unwrap();
        assert!(matches!(relating_unitary(&a, &b, 1), Err(Error::ReducedStatesDiffer(_))));
    }
}
