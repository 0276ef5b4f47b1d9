//! Simulation of quantum bit commitment protocols and of the purification
//! attack that lets a committer change her bit after the commit phase.
//!
//! The crate is organised bottom-up:
//!
//! * [`qmath`]: dense state vectors, density matrices, partial traces,
//!   Schmidt decomposition, fidelity and local unitaries.
//! * [`encode`]: BB84 polarization encoding, basis measurement and the
//!   calibrated noise channel.
//! * [`codes`]: binary linear codes over GF(2).
//! * [`protocols`]: the classical toy commitment, the BCJL scheme, the
//!   general unitary-script model and a one-sided two-party computation.
//! * [`attacks`]: Alice's purification attack (ideal and optimal), the
//!   delayed-measurement attack on BCJL, and Bob's attack on one-sided
//!   two-party computation.

pub mod attacks;
pub mod codes;
pub mod encode;
mod error;
pub mod protocols;
pub mod qmath;
pub mod rng;

pub use error::{Error, Result};
