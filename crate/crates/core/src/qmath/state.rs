use nalgebra::DMatrix;

use super::{c, C64, MAX_STATE_LEN};
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;

/// A normalized pure state on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    dims: Vec<usize>,
}

impl StateVector {
    /// Builds a state, rejecting amplitude vectors that are not normalized.
    pub fn new(amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let norm = l2(&amps);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amps, dims })
    }

    /// Builds a state after rescaling the amplitudes to unit norm.
    pub fn normalized(mut amps: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amps.len())?;
        let norm = l2(&amps);
        if norm < 1e-300 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        let inv = c(1.0 / norm, 0.0);
        amps.iter_mut().for_each(|a| *a *= inv);
        Ok(Self { amps, dims })
    }

    /// Computational basis state `|levels[0], levels[1], ...>`.
    pub fn basis(dims: &[usize], levels: &[usize]) -> Result<Self> {
        if dims.len() != levels.len() {
            return Err(Error::InvalidSubsystems(format!(
                "{} levels for {} subsystems",
                levels.len(),
                dims.len()
            )));
        }
        let len = dims.iter().product();
        check_dims(dims, len)?;
        let mut index = 0;
        for (&l, &d) in levels.iter().zip(dims) {
            if l >= d {
                return Err(Error::InvalidSubsystems(format!("level {l} out of range for dim {d}")));
            }
            index = index * d + l;
        }
        let mut amps = vec![C64::default(); len];
        amps[index] = c(1.0, 0.0);
        Ok(Self { amps, dims: dims.to_vec() })
    }

    /// A single qubit `a0|0> + a1|1>`, normalized.
    pub fn qubit(a0: C64, a1: C64) -> Result<Self> {
        Self::normalized(vec![a0, a1], vec![2])
    }

    /// The trivial state of a one-dimensional space.
    pub fn scalar() -> Self {
        Self { amps: vec![c(1.0, 0.0)], dims: vec![1] }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), actual: other.len() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    /// `min_theta || self - e^{i theta} other ||`, a phase-insensitive distance.
    pub fn phase_distance(&self, other: &StateVector) -> Result<f64> {
        let ov = self.overlap(other)?;
        Ok((2.0 - 2.0 * ov.min(1.0)).max(0.0).sqrt())
    }

    /// Dimensions of the A and B factors across `cut`.
    pub fn split_dims(&self, cut: usize) -> Result<(usize, usize)> {
        if cut > self.dims.len() {
            return Err(Error::InvalidSubsystems(format!(
                "cut {cut} beyond {} subsystems",
                self.dims.len()
            )));
        }
        let da: usize = self.dims[..cut].iter().product();
        Ok((da, self.len() / da))
    }

    /// Amplitudes reshaped to a `dA x dB` matrix: `M[a, b] = <a, b|psi>`.
    pub fn amplitude_matrix(&self, cut: usize) -> Result<DMatrix<C64>> {
        let (da, db) = self.split_dims(cut)?;
        Ok(DMatrix::from_row_slice(da, db, &self.amps))
    }

    /// Inverse of [`amplitude_matrix`](Self::amplitude_matrix).
    pub(crate) fn from_amplitude_matrix(m: &DMatrix<C64>, dims: Vec<usize>) -> Result<Self> {
        let amps: Vec<C64> = m.transpose().iter().copied().collect();
        Self::normalized(amps, dims)
    }

    /// Reorders subsystems: subsystem `order[j]` of `self` becomes subsystem `j`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let n = self.dims.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
            return Err(Error::InvalidSubsystems(format!("{order:?} is not a permutation of 0..{n}")));
        }
        let new_dims: Vec<usize> = order.iter().map(|&o| self.dims[o]).collect();
        let old_strides = strides(&self.dims);
        // stride in the old layout of each new position
        let mapped: Vec<usize> = order.iter().map(|&o| old_strides[o]).collect();
        let mut amps = Vec::with_capacity(self.len());
        let mut digits = vec![0usize; n];
        let mut src = 0usize;
        for _ in 0..self.len() {
            amps.push(self.amps[src]);
            // increment the mixed-radix counter over the new layout
            for pos in (0..n).rev() {
                digits[pos] += 1;
                src += mapped[pos];
                if digits[pos] < new_dims[pos] {
                    break;
                }
                src -= mapped[pos] * new_dims[pos];
                digits[pos] = 0;
            }
        }
        Ok(Self { amps, dims: new_dims })
    }

    /// Merges subsystems `[..cut]` and `[cut..]` into two factors.
    pub fn regroup(&self, cut: usize) -> Result<Self> {
        let (da, db) = self.split_dims(cut)?;
        Ok(Self { amps: self.amps.clone(), dims: vec![da, db] })
    }

    /// Same amplitudes under a different factorisation of the same total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, self.len())?;
        Ok(Self { amps: self.amps.clone(), dims })
    }

    /// Projective measurement of subsystem `index` in its computational
    /// basis. Returns the outcome, its probability and the collapsed state.
    pub fn measure_subsystem<R: rand::Rng + ?Sized>(&self, index: usize, rng: &mut R) -> Result<(usize, f64, Self)> {
        let dim = *self
            .dims
            .get(index)
            .ok_or_else(|| Error::InvalidSubsystems(format!("subsystem {index} of {}", self.dims.len())))?;
        let stride = strides(&self.dims)[index];
        let digit = |i: usize| (i / stride) % dim;
        let mut probs = vec![0.0; dim];
        for (i, a) in self.amps.iter().enumerate() {
            probs[digit(i)] += a.norm_sqr();
        }
        let mut u: f64 = rng.random();
        let mut outcome = dim - 1;
        for (k, &p) in probs.iter().enumerate() {
            if u < p {
                outcome = k;
                break;
            }
            u -= p;
        }
        // guard against landing on a zero-probability tail through rounding
        if probs[outcome] == 0.0 {
            outcome = probs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(k, _)| k).unwrap_or(0);
        }
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| if digit(i) == outcome { a } else { C64::default() })
            .collect();
        Ok((outcome, probs[outcome], Self::normalized(amps, self.dims.clone())?))
    }

    /// Multiplies by a global phase `e^{i theta}`.
    pub fn with_phase(&self, theta: f64) -> Self {
        let p = C64::from_polar(1.0, theta);
        Self { amps: self.amps.iter().map(|a| a * p).collect(), dims: self.dims.clone() }
    }
}

/// `a ⊗ b`, with `a` as the slow index.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let len = a.len() * b.len();
    let dims: Vec<usize> = a.dims.iter().chain(&b.dims).copied().collect();
    check_dims(&dims, len)?;
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    Ok(StateVector { amps, dims })
}

fn l2(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn check_dims(dims: &[usize], len: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidSubsystems(format!("dims {dims:?} must be non-empty and positive")));
    }
    let product = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    match product {
        Some(p) if p == len => {}
        Some(p) => return Err(Error::DimensionMismatch { expected: p, actual: len }),
        None => return Err(Error::TooLarge { dim: usize::MAX, max: MAX_STATE_LEN }),
    }
    if len > MAX_STATE_LEN {
        return Err(Error::TooLarge { dim: len, max: MAX_STATE_LEN });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(v: &[f64], dims: &[usize]) -> StateVector {
        StateVector::new(v.iter().map(|&x| c(x, 0.0)).collect(), dims.to_vec()).unwrap()
    }

    #[test]
    fn tensor_of_basis_states() {
        let zero = StateVector::basis(&[2], &[0]).unwrap();
        let one = StateVector::basis(&[2], &[1]).unwrap();
        let t = tensor(&zero, &one).unwrap();
        assert_eq!(t.dims(), &[2, 2]);
        assert_eq!(t, ket(&[0.0, 1.0, 0.0, 0.0], &[2, 2]));
    }

    #[test]
    fn tensor_with_scalar_space_is_identity() {
        let psi = ket(&[0.6, 0.0, 0.8], &[3]);
        let t = tensor(&psi, &StateVector::scalar()).unwrap();
        assert_eq!(t.amplitudes(), psi.amplitudes());
        assert_eq!(t.dims(), &[3, 1]);
    }

    #[test]
    fn tensor_hand_expansion() {
        let plus = ket(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2], &[2]);
        let zero = StateVector::basis(&[2], &[0]).unwrap();
        let t = tensor(&plus, &zero).unwrap();
        let want = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        for (a, w) in t.amplitudes().iter().zip(want) {
            assert!((a - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(1.0, 0.0)], vec![2]),
            Err(Error::NotNormalized(_))
        ));
        assert!(matches!(
            StateVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![3]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(StateVector::new(vec![c(1.0, 0.0)], vec![]).is_err());
        assert!(StateVector::basis(&[2, 2], &[0, 2]).is_err());
    }

    #[test]
    fn permute_swaps_subsystems() {
        // |0>_2 ⊗ |2>_3 -> |2>_3 ⊗ |0>_2
        let s = StateVector::basis(&[2, 3], &[0, 2]).unwrap();
        let p = s.permute(&[1, 0]).unwrap();
        assert_eq!(p, StateVector::basis(&[3, 2], &[2, 0]).unwrap());
        assert!(s.permute(&[0, 0]).is_err());
    }

    #[test]
    fn permute_round_trip_three_factors() {
        let mut rng = crate::rng::seeded(11);
        let s = super::super::random::state(&[2, 3, 4], &mut rng);
        let p = s.permute(&[2, 0, 1]).unwrap();
        assert_eq!(p.dims(), &[4, 2, 3]);
        // inverse of [2,0,1] is [1,2,0]
        let back = p.permute(&[1, 2, 0]).unwrap();
        assert_eq!(back, s);
        // spot-check one amplitude: old (i,j,k) -> new (k,i,j)
        let old = s.amplitudes()[1 * 12 + 2 * 4 + 3];
        let new = p.amplitudes()[3 * 6 + 1 * 3 + 2];
        assert_eq!(old, new);
    }

    #[test]
    fn phase_insensitive_distance() {
        let s = ket(&[0.6, 0.8], &[2]);
        assert!(s.phase_distance(&s.with_phase(1.3)).unwrap() < 1e-7);
        let o = ket(&[0.8, -0.6], &[2]);
        assert!((s.phase_distance(&o).unwrap() - 2f64.sqrt()).abs() < 1e-12);
    }
}
