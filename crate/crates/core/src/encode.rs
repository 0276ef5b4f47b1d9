//! BB84 polarization encoding of classical bits into qubits.
//!
//! Polarizations map to Bloch-equator states: 0° = |0>, 90° = |1>,
//! 45° = |+>, 135° = |->.

use rand::Rng;

use crate::qmath::{c, DensityMatrix, StateVector, UnitaryOp};
use crate::{Error, Result};

/// Polarization basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// 0° / 90°.
    Rectilinear,
    /// 45° / 135°.
    Diagonal,
}

impl Basis {
    /// `0 -> Rectilinear`, anything else `-> Diagonal`.
    pub fn from_bit(b: u8) -> Self {
        if b == 0 {
            Basis::Rectilinear
        } else {
            Basis::Diagonal
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Basis::Rectilinear => 0,
            Basis::Diagonal => 1,
        }
    }

    /// The basis state encoding `outcome` in this basis.
    pub fn state(self, outcome: u8) -> StateVector {
        encode_bit(outcome, self.bit())
    }
}

/// Channel noise, parameterized by the probability that an honest
/// matched-basis measurement misreads a bit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    epsilon: f64,
}

impl NoiseModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&epsilon) || epsilon.is_nan() {
            return Err(Error::InvalidNoise(epsilon));
        }
        Ok(Self { epsilon })
    }

    pub fn noiseless() -> Self {
        Self { epsilon: 0.0 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Depolarizing strength `p` in `ρ -> (1 - p) ρ + p I/2`. A basis state
    /// is misread with probability `p/2`, so `p = 2ε`.
    pub fn depolarizing_strength(&self) -> f64 {
        2.0 * self.epsilon
    }
}

/// Encodes bit `c` in basis `b` (0 = rectilinear, 1 = diagonal).
pub fn encode_bit(c_bit: u8, b: u8) -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (a0, a1) = match (b & 1, c_bit & 1) {
        (0, 0) => (1.0, 0.0),
        (0, _) => (0.0, 1.0),
        (_, 0) => (h, h),
        (_, _) => (h, -h),
    };
    StateVector::new(vec![c(a0, 0.0), c(a1, 0.0)], vec![2]).expect("basis states are normalized")
}

/// Projective measurement of a single qubit in `basis`. Returns the outcome
/// and the post-measurement basis state.
pub fn measure<R: Rng + ?Sized>(qubit: &DensityMatrix, basis: Basis, rng: &mut R) -> Result<(u8, StateVector)> {
    if qubit.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: qubit.dim() });
    }
    let p0 = qubit.expectation(&basis.state(0))?.clamp(0.0, 1.0);
    let outcome = u8::from(rng.random::<f64>() >= p0);
    Ok((outcome, basis.state(outcome)))
}

/// [`measure`] on a pure qubit.
pub fn measure_pure<R: Rng + ?Sized>(qubit: &StateVector, basis: Basis, rng: &mut R) -> Result<(u8, StateVector)> {
    measure(&DensityMatrix::from_pure(qubit)?, basis, rng)
}

/// The depolarizing channel calibrated to `model`, as a map on density
/// matrices.
pub fn depolarize(qubit: &DensityMatrix, model: &NoiseModel) -> Result<DensityMatrix> {
    if qubit.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: qubit.dim() });
    }
    qubit.mix(&DensityMatrix::maximally_mixed(2)?, model.depolarizing_strength())
}

/// One sampled trajectory of the calibrated depolarizing channel: with
/// probability `p = 2ε` a uniformly random Pauli (I, X, Y or Z) is applied.
/// Averaged over the randomness this is exactly [`depolarize`].
pub fn apply_noise<R: Rng + ?Sized>(qubit: &DensityMatrix, model: &NoiseModel, rng: &mut R) -> Result<DensityMatrix> {
    if qubit.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, actual: qubit.dim() });
    }
    let p = model.depolarizing_strength();
    if p == 0.0 || rng.random::<f64>() >= p {
        return Ok(qubit.clone());
    }
    let pauli = match rng.random_range(0..4) {
        0 => return Ok(qubit.clone()),
        1 => UnitaryOp::pauli_x(),
        2 => UnitaryOp::pauli_y(),
        _ => UnitaryOp::pauli_z(),
    };
    qubit.conjugate(&pauli)
}
