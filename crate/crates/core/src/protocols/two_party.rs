//! A toy one-sided two-party computation: Bob learns `f(x, y)`, Alice learns
//! nothing.
//!
//! Registers, in order: Alice's input `A = |x>`, a copy `R = |x>` that Alice
//! hands to Bob, Bob's input `Y = |y>`, and Bob's output `O`. Bob runs the
//! oracle `|x>_R |y>_Y |o>_O -> |x>|y>|o ⊕ f(x,y)>`, which leaves `O` in the
//! eigenstate `|f(x,y)>`.
//!
//! Alice's reduced state is `|x><x|` whatever `y` is. Bob could of course
//! read `x` straight off `R`; the construction only models a Bob who looks
//! at `O`, which is all the attack needs.

use rand::Rng;

use super::transcript::{Party, QuantumRegisters};
use crate::qmath::{c, reduced_state, StateVector, C64};
use crate::{Error, Result};

/// Largest input domain.
pub const MAX_DOMAIN: usize = 8;

/// `f(x, y)` in `{0, 1}` over `0..nx` by `0..ny`, stored row-major by `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    nx: usize,
    ny: usize,
    values: Vec<u8>,
}

impl FunctionTable {
    pub fn new(nx: usize, ny: usize, values: Vec<u8>) -> Result<Self> {
        if nx > MAX_DOMAIN || ny > MAX_DOMAIN {
            return Err(Error::CapExceeded(format!("function domains need size <= {MAX_DOMAIN}, got {nx}x{ny}")));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidTable("empty domain".into()));
        }
        if values.len() != nx * ny {
            return Err(Error::InvalidTable(format!("{} entries for a {nx}x{ny} table", values.len())));
        }
        if values.iter().any(|&v| v > 1) {
            return Err(Error::InvalidTable("entries must be 0 or 1".into()));
        }
        Ok(Self { nx, ny, values })
    }

    /// `f(x, y) = [x == y]`.
    pub fn equality(n: usize) -> Result<Self> {
        Self::new(n, n, (0..n * n).map(|i| u8::from(i / n == i % n)).collect())
    }

    pub fn constant(nx: usize, ny: usize, value: u8) -> Result<Self> {
        Self::new(nx, ny, vec![value; nx * ny])
    }

    pub fn random<R: Rng + ?Sized>(nx: usize, ny: usize, rng: &mut R) -> Result<Self> {
        Self::new(nx, ny, (0..nx * ny).map(|_| rng.random_range(0..2u8)).collect())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.values[x * self.ny + y]
    }

    /// `f(x, ·)`.
    pub fn row(&self, x: usize) -> &[u8] {
        &self.values[x * self.ny..(x + 1) * self.ny]
    }

    fn check_inputs(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.nx || y >= self.ny {
            return Err(Error::InvalidTable(format!("input ({x}, {y}) outside {}x{}", self.nx, self.ny)));
        }
        Ok(())
    }

    /// Register dims `[A, R, Y, O]`.
    pub fn dims(&self) -> Vec<usize> {
        vec![self.nx, self.nx, self.ny, 2]
    }
}

/// Subsystem holding Bob's output.
pub const OUTPUT_REGISTER: usize = 3;

/// Runs the protocol on inputs `(x, y)`.
pub fn two_party_protocol(f: &FunctionTable, x: usize, y: usize) -> Result<QuantumRegisters> {
    f.check_inputs(x, y)?;
    let state = StateVector::basis(&f.dims(), &[x, x, y, usize::from(f.get(x, y))])?;
    QuantumRegisters::new(state, vec![Party::Alice, Party::Bob, Party::Bob, Party::Bob])
}

/// The final state with Alice's input in uniform superposition,
/// `Σ_x |x>_A |x>_R |y>_Y |f(x,y)>_O / sqrt(nx)`.
///
/// A Bob-local unitary taking this state for `y` to the one for `y'` maps
/// `|x, y, f(x,y)>` to `|x, y', f(x,y')>` for every `x` at once, so Bob never
/// needs to know `x` to build it.
pub fn superposed_state(f: &FunctionTable, y: usize) -> Result<StateVector> {
    f.check_inputs(0, y)?;
    let dims = f.dims();
    let len: usize = dims.iter().product();
    let mut amps = vec![C64::default(); len];
    for x in 0..f.nx {
        let idx = ((x * f.nx + x) * f.ny + y) * 2 + usize::from(f.get(x, y));
        amps[idx] = c(1.0, 0.0);
    }
    StateVector::normalized(amps, dims)
}

/// Largest entrywise gap between Alice's reduced states across all `y`, for
/// input `x`.
pub fn alice_independence_gap(f: &FunctionTable, x: usize) -> Result<f64> {
    let first = reduced_state(two_party_protocol(f, x, 0)?.state(), &[0])?;
    let mut gap: f64 = 0.0;
    for y in 1..f.ny {
        let rho = reduced_state(two_party_protocol(f, x, y)?.state(), &[0])?;
        gap = gap.max(first.distance(&rho));
    }
    Ok(gap)
}
