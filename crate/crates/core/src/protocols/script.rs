//! General two-party commitment as a fixed sequence of local unitaries and
//! register transfers.
//!
//! Registers `0..alice_dims.len()` start with Alice, the rest with Bob. At
//! each step the acting party applies a unitary to registers it holds or that
//! sit in the channel, then hands some of its own registers to another party
//! or to the channel. Composing every step gives one unitary `U` on the whole
//! space, and the commitment to bit `b` is `U (|b>_A ⊗ |v>_B)`.

use rand::Rng;

use super::transcript::{Party, QuantumRegisters};
use crate::qmath::{random, tensor, StateVector, UnitaryOp};
use crate::{Error, Result};

/// One step of a script.
#[derive(Debug, Clone)]
pub struct ScriptStep {
    pub party: Party,
    /// Registers the unitary acts on, in tensor order.
    pub targets: Vec<usize>,
    pub unitary: UnitaryOp,
    /// Registers handed over after the unitary, with their new holder.
    pub transfers: Vec<(usize, Party)>,
}

impl ScriptStep {
    pub fn new(party: Party, targets: Vec<usize>, unitary: UnitaryOp) -> Self {
        Self { party, targets, unitary, transfers: Vec::new() }
    }

    pub fn transfer(mut self, register: usize, to: Party) -> Self {
        self.transfers.push((register, to));
        self
    }
}

#[derive(Debug, Clone)]
pub struct UnitaryScript {
    pub alice_dims: Vec<usize>,
    pub bob_dims: Vec<usize>,
    /// `|0>_A` and `|1>_A`.
    pub initial_a: [StateVector; 2],
    /// `|v>_B`.
    pub initial_b: StateVector,
    pub steps: Vec<ScriptStep>,
}

/// Final state of a run, with the ownership ledger after every transfer.
pub type Execution = QuantumRegisters;

impl UnitaryScript {
    pub fn register_count(&self) -> usize {
        self.alice_dims.len() + self.bob_dims.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.alice_dims.iter().chain(&self.bob_dims).copied().collect()
    }

    pub fn initial_ledger(&self) -> Vec<Party> {
        let mut ledger = vec![Party::Alice; self.alice_dims.len()];
        ledger.resize(self.register_count(), Party::Bob);
        ledger
    }

    /// Checks shapes and ownership; returns the final ledger.
    pub fn validate(&self) -> Result<Vec<Party>> {
        let dims = self.dims();
        if self.alice_dims.is_empty() || self.bob_dims.is_empty() {
            return Err(Error::InvalidScript("both parties need at least one register".into()));
        }
        for (i, s) in self.initial_a.iter().enumerate() {
            if s.dims() != self.alice_dims.as_slice() {
                return Err(Error::InvalidScript(format!(
                    "|{i}>_A has dims {:?}, expected {:?}",
                    s.dims(),
                    self.alice_dims
                )));
            }
        }
        if self.initial_b.dims() != self.bob_dims.as_slice() {
            return Err(Error::InvalidScript(format!(
                "|v>_B has dims {:?}, expected {:?}",
                self.initial_b.dims(),
                self.bob_dims
            )));
        }
        let mut ledger = self.initial_ledger();
        for (s, step) in self.steps.iter().enumerate() {
            if step.party == Party::Channel {
                return Err(Error::InvalidScript(format!("step {s}: the channel cannot act")));
            }
            let mut target_dim = 1;
            for &t in &step.targets {
                let owner = *ledger
                    .get(t)
                    .ok_or_else(|| Error::InvalidScript(format!("step {s}: register {t} does not exist")))?;
                if owner != step.party && owner != Party::Channel {
                    return Err(Error::InvalidScript(format!(
                        "step {s}: {} acts on register {t} held by {owner}",
                        step.party
                    )));
                }
                target_dim *= dims[t];
            }
            if step.targets.is_empty() || step.unitary.dim() != target_dim {
                return Err(Error::InvalidScript(format!(
                    "step {s}: unitary of dim {} on targets {:?} (dim {target_dim})",
                    step.unitary.dim(),
                    step.targets
                )));
            }
            for &(reg, to) in &step.transfers {
                match ledger.get(reg) {
                    Some(&owner) if owner == step.party => ledger[reg] = to,
                    Some(&owner) => {
                        return Err(Error::InvalidScript(format!(
                            "step {s}: {} transfers register {reg} held by {owner}",
                            step.party
                        )))
                    }
                    None => return Err(Error::InvalidScript(format!("step {s}: register {reg} does not exist"))),
                }
            }
        }
        Ok(ledger)
    }

    /// `|b>_A ⊗ |v>_B`.
    pub fn initial_state(&self, bit: u8) -> Result<StateVector> {
        tensor(&self.initial_a[(bit & 1) as usize], &self.initial_b)
    }

    /// The single unitary equal to all steps composed in order.
    pub fn compile(&self) -> Result<UnitaryOp> {
        self.validate()?;
        let dims = self.dims();
        let total = dims.iter().product();
        self.steps.iter().try_fold(UnitaryOp::identity(total), |acc, step| {
            step.unitary.embed(&dims, &step.targets)?.compose(&acc)
        })
    }
}

/// Runs the commit phase for `bit` step by step.
pub fn script_execute(script: &UnitaryScript, bit: u8) -> Result<Execution> {
    Ok(script_trace(script, bit)?.pop().expect("trace holds the initial state"))
}

/// Like [`script_execute`], keeping the state and ledger after every step
/// (index 0 is the initial state).
pub fn script_trace(script: &UnitaryScript, bit: u8) -> Result<Vec<Execution>> {
    script.validate()?;
    let mut ledger = script.initial_ledger();
    let mut state = script.initial_state(bit)?;
    let mut trace = vec![QuantumRegisters::new(state.clone(), ledger.clone())?];
    for step in &script.steps {
        state = step.unitary.apply_on(&state, &step.targets)?;
        for &(reg, to) in &step.transfers {
            ledger[reg] = to;
        }
        trace.push(QuantumRegisters::new(state.clone(), ledger.clone())?);
    }
    Ok(trace)
}

/// Bob's projective check that the opened state is the honest commitment to
/// `claimed_bit`: `|<claimed_final|final>|^2`.
pub fn script_verify(final_state: &StateVector, script: &UnitaryScript, claimed_bit: u8) -> Result<f64> {
    let honest = script_execute(script, claimed_bit)?;
    let ov = honest.state().overlap(final_state)?;
    Ok((ov * ov).min(1.0))
}

/// A random commitment on qubits: Alice holds `alice_qubits`, Bob
/// `bob_qubits`. Alice scrambles her registers and sends the last `sent` of
/// them to Bob, who then scrambles everything he holds.
pub fn random_script<R: Rng + ?Sized>(
    alice_qubits: usize,
    bob_qubits: usize,
    sent: usize,
    rng: &mut R,
) -> Result<UnitaryScript> {
    if sent > alice_qubits {
        return Err(Error::InvalidScript(format!("cannot send {sent} of {alice_qubits} registers")));
    }
    let alice_dims = vec![2; alice_qubits];
    let bob_dims = vec![2; bob_qubits];
    let na = alice_qubits;
    let alice_regs: Vec<usize> = (0..na).collect();
    let mut step_a = ScriptStep::new(Party::Alice, alice_regs, random::unitary(1 << na, rng));
    for reg in na - sent..na {
        step_a = step_a.transfer(reg, Party::Bob);
    }
    let bob_regs: Vec<usize> = (na - sent..na + bob_qubits).collect();
    let step_b = ScriptStep::new(Party::Bob, bob_regs, random::unitary(1 << (sent + bob_qubits), rng));
    Ok(UnitaryScript {
        initial_a: [random::state(&alice_dims, rng), random::state(&alice_dims, rng)],
        initial_b: random::state(&bob_dims, rng),
        alice_dims,
        bob_dims,
        steps: vec![step_a, step_b],
    })
}

/// A random commitment that conceals perfectly: the committed bit only
/// enters through a unitary on `kept` registers that Alice never touches
/// again, so Bob's final reduced state is the same for both bits.
pub fn random_concealing_script<R: Rng + ?Sized>(
    kept: usize,
    sent: usize,
    bob_qubits: usize,
    rng: &mut R,
) -> Result<UnitaryScript> {
    if kept == 0 || sent == 0 {
        return Err(Error::InvalidScript("need at least one kept and one sent register".into()));
    }
    let alice_dims = vec![2; kept + sent];
    let bob_dims = vec![2; bob_qubits];
    let base = random::state(&alice_dims, rng);
    let twist = random::unitary(1 << kept, rng);
    let flipped = twist.apply_on(&base, &(0..kept).collect::<Vec<_>>())?;
    let sent_regs: Vec<usize> = (kept..kept + sent).collect();
    let mut step_a = ScriptStep::new(Party::Alice, sent_regs.clone(), random::unitary(1 << sent, rng));
    for &reg in &sent_regs {
        step_a = step_a.transfer(reg, Party::Bob);
    }
    let bob_regs: Vec<usize> = (kept..kept + sent + bob_qubits).collect();
    let step_b = ScriptStep::new(Party::Bob, bob_regs, random::unitary(1 << (sent + bob_qubits), rng));
    Ok(UnitaryScript {
        initial_a: [base, flipped],
        initial_b: random::state(&bob_dims, rng),
        alice_dims,
        bob_dims,
        steps: vec![step_a, step_b],
    })
}

fn keep_then_send(initial_a: [StateVector; 2], sent: Vec<usize>) -> UnitaryScript {
    let alice_dims = initial_a[0].dims().to_vec();
    let mut step = ScriptStep::new(Party::Alice, sent.clone(), UnitaryOp::identity(sent.iter().map(|&r| alice_dims[r]).product()));
    for &r in &sent {
        step = step.transfer(r, Party::Bob);
    }
    UnitaryScript {
        alice_dims,
        bob_dims: vec![2],
        initial_a,
        initial_b: StateVector::basis(&[2], &[0]).expect("qubit basis state"),
        steps: vec![step],
    }
}

/// Alice sends her committed qubit `|b>` straight to Bob: binding but not
/// concealing at all.
pub fn revealing_script() -> UnitaryScript {
    let basis = |b| StateVector::basis(&[2], &[b]).expect("qubit basis state");
    keep_then_send([basis(0), basis(1)], vec![0])
}

/// Alice keeps `|b>` and sends nothing; Bob only scrambles his own qubit.
/// Perfectly concealing, and Alice can flip her bit at will.
pub fn silent_script<R: Rng + ?Sized>(rng: &mut R) -> UnitaryScript {
    UnitaryScript {
        alice_dims: vec![2],
        bob_dims: vec![2],
        initial_a: [StateVector::basis(&[2], &[0]).expect("qubit"), StateVector::basis(&[2], &[1]).expect("qubit")],
        initial_b: StateVector::basis(&[2], &[0]).expect("qubit"),
        steps: vec![ScriptStep::new(Party::Bob, vec![1], random::unitary(2, rng))],
    }
}

/// Single-qubit BB84-style commitment with the coin purified: Alice holds
/// `sum_c |c> ⊗ |c in basis b> / sqrt2` and sends the second qubit. Bob
/// sees I/2 whichever `b`, so the commitment conceals perfectly.
pub fn bb84_script() -> UnitaryScript {
    let purified = |b: u8| {
        let mut amps = Vec::with_capacity(4);
        for c in 0..2u8 {
            let q = crate::encode::encode_bit(c, b);
            amps.extend(q.amplitudes().iter().map(|a| a * std::f64::consts::FRAC_1_SQRT_2));
        }
        StateVector::new(amps, vec![2, 2]).expect("normalized by construction")
    };
    keep_then_send([purified(0), purified(1)], vec![1])
}

/// Interpolates between concealing (`s = 0`) and revealing (`s = 1`):
/// `|b>_A = sqrt(1-s)|0>|+> + sqrt(s)|1>|b>`, second qubit sent to Bob.
pub fn leaky_script(s: f64) -> Result<UnitaryScript> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidScript(format!("leak {s} outside [0, 1]")));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let state = |b: usize| {
        let mut amps = vec![crate::qmath::C64::new(0.0, 0.0); 4];
        amps[0] = (1.0 - s).sqrt() * h * crate::qmath::C64::new(1.0, 0.0);
        amps[1] = amps[0];
        amps[2 + b] += crate::qmath::C64::new(s.sqrt(), 0.0);
        StateVector::normalized(amps, vec![2, 2])
    };
    Ok(keep_then_send([state(0)?, state(1)?], vec![1]))
}
