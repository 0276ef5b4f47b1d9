//! Cheating strategies.
//!
//! Alice's side: commit honestly to 0, keep everything she has not sent, and
//! at opening rotate what she kept with a local unitary so that the joint
//! state is as close as possible to an honest commitment to 1. The best
//! overlap she can reach is the fidelity of Bob's two reduced states.
//!
//! Bob's side: in a one-sided two-party computation whose output register
//! ends in an eigenstate, Bob can read the output without disturbing
//! anything, rotate his input, and read again.

use std::fmt;

use rand::Rng;

use crate::codes::{dot_parity, Bits, LinearCode};
use crate::encode::encode_bit;
use crate::protocols::{
    bcjl_tests, error_test_passes, script_execute, script_verify, superposed_state, two_party_protocol, BcjlVerdict,
    FunctionTable, Party, UnitaryScript, OUTPUT_REGISTER,
};
use crate::qmath::{
    apply_local, c, check_dim, complete_orthonormal, fidelity, reduced_state, relating_unitary, schmidt_decompose,
    Side, StateVector, UnitaryOp, C64,
};
use crate::{Error, Result};

/// What a cheating Alice can expect against a verifier who projects onto the
/// honest final state. Weaker verifiers can only accept more often.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackReport {
    /// `F(ρ^B_0, ρ^B_1)`.
    pub fidelity: f64,
    /// `1 - F`.
    pub delta: f64,
    /// `|<1_final|(U^A ⊗ I)|0_final>|`.
    pub achieved_overlap: f64,
    /// `overlap^2`.
    pub acceptance_probability: f64,
    pub detection_probability: f64,
    /// Dimension of Alice's unitary.
    pub u_dim: usize,
}

impl AttackReport {
    pub fn new(fidelity: f64, achieved_overlap: f64, u_dim: usize) -> Self {
        let acceptance = (achieved_overlap * achieved_overlap).min(1.0);
        Self {
            fidelity,
            delta: 1.0 - fidelity,
            achieved_overlap,
            acceptance_probability: acceptance,
            detection_probability: 1.0 - acceptance,
            u_dim,
        }
    }

    /// Field names and values, in output order.
    pub fn fields(&self) -> [(&'static str, String); 6] {
        [
            ("fidelity", self.fidelity.to_string()),
            ("delta", self.delta.to_string()),
            ("achieved_overlap", self.achieved_overlap.to_string()),
            ("acceptance_probability", self.acceptance_probability.to_string()),
            ("detection_probability", self.detection_probability.to_string()),
            ("u_dim", self.u_dim.to_string()),
        ]
    }

    /// Parses the `key=value` lines written by `Display`.
    pub fn from_record(text: &str) -> Result<Self> {
        let mut vals = std::collections::HashMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::TranscriptFormat(format!("expected key=value, got {line:?}")))?;
            vals.insert(k.trim(), v.trim());
        }
        let num = |k: &str| -> Result<f64> {
            vals.get(k)
                .ok_or_else(|| Error::TranscriptFormat(format!("missing {k}")))?
                .parse()
                .map_err(|e| Error::TranscriptFormat(format!("{k}: {e}")))
        };
        Ok(Self {
            fidelity: num("fidelity")?,
            delta: num("delta")?,
            achieved_overlap: num("achieved_overlap")?,
            acceptance_probability: num("acceptance_probability")?,
            detection_probability: num("detection_probability")?,
            u_dim: num("u_dim")? as usize,
        })
    }
}

impl fmt::Display for AttackReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.fields() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Exact flip when Bob's reduced states agree: `(U^A ⊗ I)|final0> = |final1>`
/// up to phase. Fails with `ReducedStatesDiffer` otherwise; use
/// [`optimal_cheat_unitary`] then.
pub fn ideal_cheat_unitary(final0: &StateVector, final1: &StateVector, cut: usize) -> Result<UnitaryOp> {
    relating_unitary(final0, final1, cut)
}

/// The A-local unitary maximizing `|<final1|(U ⊗ I)|final0>|`.
///
/// Writing both states in Schmidt form, `M0 M1^† = A0 K A1^†` with
/// `K = diag(√α) (Φ0^T Φ1^*) diag(√β)`. With `K = P Σ Q^†`, mapping the
/// columns of `A0 P` onto those of `A1 Q` gives overlap `tr Σ = F`.
pub fn optimal_cheat_unitary(final0: &StateVector, final1: &StateVector, cut: usize) -> Result<(UnitaryOp, AttackReport)> {
    if final0.dims() != final1.dims() {
        return Err(Error::InvalidSubsystems(format!("dims {:?} vs {:?}", final0.dims(), final1.dims())));
    }
    let (da, _) = final0.split_dims(cut)?;
    check_dim(da)?;
    let s0 = schmidt_decompose(final0, cut)?;
    let s1 = schmidt_decompose(final1, cut)?;
    let gram = s0.basis_b.transpose() * s1.basis_b.conjugate();
    let mut k = gram;
    for (i, &a) in s0.coeffs.iter().enumerate() {
        k.row_mut(i).scale_mut(a);
    }
    for (j, &b) in s1.coeffs.iter().enumerate() {
        k.column_mut(j).scale_mut(b);
    }
    let svd = crate::qmath::svd(&k);
    let (p, q) = (svd.u, svd.v_t.adjoint());
    let src = complete_orthonormal(&(&s0.basis_a * p));
    let dst = complete_orthonormal(&(&s1.basis_a * q));
    let u = UnitaryOp::from_trusted(dst * src.adjoint());

    let attacked = apply_local(&u, final0, cut, Side::A)?;
    let overlap = final1.overlap(&attacked)?;
    let bob: Vec<usize> = (cut..final0.dims().len()).collect();
    let f = fidelity(&reduced_state(final0, &bob)?, &reduced_state(final1, &bob)?)?;
    Ok((u, AttackReport::new(f, overlap, da)))
}

/// Outcome of [`run_commitment_attack`].
#[derive(Debug, Clone)]
pub struct ScriptAttack {
    pub report: AttackReport,
    /// Registers Alice still holds when the commit phase ends.
    pub alice_registers: Vec<usize>,
    pub unitary: UnitaryOp,
    /// Honest commitment to 0, as left by the commit phase.
    pub committed: StateVector,
    /// The same state after Alice's rotation, submitted as an opening of 1.
    pub attacked: StateVector,
}

/// Commits to 0, then opens as 1 after applying the optimal local unitary
/// to whatever Alice kept. The report's acceptance probability is Bob's
/// projective check [`script_verify`].
pub fn run_commitment_attack(script: &UnitaryScript) -> Result<ScriptAttack> {
    let ledger = script.validate()?;
    let final0 = script_execute(script, 0)?.into_state();
    let final1 = script_execute(script, 1)?.into_state();

    let alice: Vec<usize> = (0..ledger.len()).filter(|&i| ledger[i] == Party::Alice).collect();
    let others: Vec<usize> = (0..ledger.len()).filter(|&i| ledger[i] != Party::Alice).collect();
    let order: Vec<usize> = alice.iter().chain(&others).copied().collect();
    let mut inverse = vec![0; order.len()];
    for (j, &o) in order.iter().enumerate() {
        inverse[o] = j;
    }

    // A party holding nothing is given a trivial one-dimensional factor.
    let dims = final0.dims();
    let pad = |regs: &[usize]| -> Vec<usize> {
        if regs.is_empty() {
            vec![1]
        } else {
            regs.iter().map(|&r| dims[r]).collect()
        }
    };
    let a_dims = pad(&alice);
    let cut = a_dims.len();
    let split_dims: Vec<usize> = a_dims.into_iter().chain(pad(&others)).collect();
    let permuted_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let split = |s: &StateVector| s.permute(&order)?.with_dims(split_dims.clone());

    let (u, mut report) = optimal_cheat_unitary(&split(&final0)?, &split(&final1)?, cut)?;
    let attacked = apply_local(&u, &split(&final0)?, cut, Side::A)?
        .with_dims(permuted_dims)?
        .permute(&inverse)?;
    let accept = script_verify(&attacked, script, 1)?;
    report.acceptance_probability = accept;
    report.detection_probability = 1.0 - accept;
    Ok(ScriptAttack { report, alice_registers: alice, unitary: u, committed: final0, attacked })
}

/// Largest code length for the EPR attack.
pub const MAX_EPR_N: usize = 10;
/// Largest code dimension for the EPR attack.
pub const MAX_EPR_K: usize = 6;
/// Largest `n` for the exact opening-test probability.
pub const MAX_EXACT_OPENING_N: usize = 7;

/// Alice's purified BCJL commitment to parity `bit`:
/// `Σ_{c·r = bit, b} |m(c), b>_A ⊗ |encode(c, b)>_B`, normalized.
///
/// Registers: message index (dim `2^k`), basis string (dim `2^n`), then one
/// qubit per code position, position 0 first.
pub fn epr_state(code: &LinearCode, r: &Bits, bit: u8) -> Result<StateVector> {
    check_epr_caps(code, r)?;
    let n = code.n();
    let nb = 1usize << n;
    let words = code.codewords()?;
    let mut dims = vec![1usize << code.k(), nb];
    dims.extend(std::iter::repeat_n(2, n));
    let mut amps = vec![C64::default(); words.len() * nb * nb];
    let mut any = false;
    for (m, cw) in words.iter().enumerate() {
        if dot_parity(cw, r)? != bit {
            continue;
        }
        any = true;
        for b in 0..nb {
            let photons = product_state(cw, b as u64, n);
            let off = (m * nb + b) * nb;
            amps[off..off + nb].copy_from_slice(&photons);
        }
    }
    if !any {
        return Err(Error::ParityUnattainable);
    }
    StateVector::normalized(amps, dims)
}

fn product_state(cw: &Bits, basis_word: u64, n: usize) -> Vec<C64> {
    let mut v = vec![c(1.0, 0.0)];
    for i in 0..n {
        let q = encode_bit(cw.get(i), ((basis_word >> i) & 1) as u8);
        let (a0, a1) = (q.amplitudes()[0], q.amplitudes()[1]);
        v = v.iter().flat_map(|x| [x * a0, x * a1]).collect();
    }
    v
}

fn check_epr_caps(code: &LinearCode, r: &Bits) -> Result<()> {
    let (n, k) = (code.n(), code.k());
    if n > MAX_EPR_N || k > MAX_EPR_K {
        return Err(Error::CapExceeded(format!(
            "EPR attack needs n <= {MAX_EPR_N} and k <= {MAX_EPR_K}, got n={n} k={k}"
        )));
    }
    if (1usize << (n + k)) > crate::qmath::MAX_DIM {
        return Err(Error::CapExceeded(format!(
            "EPR attack needs 2^(n+k) <= {} for Alice's unitary, got n={n} k={k}",
            crate::qmath::MAX_DIM
        )));
    }
    if r.len() != n {
        return Err(Error::LengthMismatch { expected: n, actual: r.len() });
    }
    if r.is_zero() {
        return Err(Error::InvalidBits("r must be non-zero".into()));
    }
    Ok(())
}

/// The delayed-choice attack on BCJL, noiseless.
#[derive(Debug, Clone)]
pub struct EprAttack {
    pub report: AttackReport,
    pub code: LinearCode,
    pub r: Bits,
    /// Purified honest commitments to 0 and 1.
    pub honest: [StateVector; 2],
    /// `honest[0]` after Alice's rotation.
    pub attacked: StateVector,
    pub unitary: UnitaryOp,
}

/// Alice sends half of the purified commitment to 0 instead of committing.
/// To open as 1 she rotates her two registers towards the purified
/// commitment to 1; the report measures that against the honest state.
pub fn bcjl_epr_attack(code: &LinearCode, r: &Bits) -> Result<EprAttack> {
    let honest = [epr_state(code, r, 0)?, epr_state(code, r, 1)?];
    let (unitary, report) = optimal_cheat_unitary(&honest[0], &honest[1], 2)?;
    let attacked = apply_local(&unitary, &honest[0], 2, Side::A)?;
    Ok(EprAttack { report, code: code.clone(), r: *r, honest, attacked, unitary })
}

impl EprAttack {
    /// The state Alice opens from when claiming `bit`.
    pub fn opening_state(&self, bit: u8) -> &StateVector {
        if bit == 0 {
            &self.honest[0]
        } else {
            &self.attacked
        }
    }

    /// Joint amplitudes with Bob's qubits rotated into the basis `bob_basis`,
    /// so that squared moduli give the distribution of
    /// `(message, Alice's bases, Bob's outcomes)`.
    fn rotated(&self, bit: u8, bob_basis: u64) -> Vec<C64> {
        let n = self.code.n();
        let nb = 1usize << n;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = self.opening_state(bit).amplitudes().to_vec();
        for i in (0..n).filter(|i| (bob_basis >> i) & 1 == 1) {
            let stride = 1usize << (n - 1 - i);
            for block in amps.chunks_mut(nb) {
                for j in (0..nb).filter(|j| j & stride == 0) {
                    let (a, b) = (block[j], block[j + stride]);
                    block[j] = (a + b) * h;
                    block[j + stride] = (a - b) * h;
                }
            }
        }
        amps
    }

    fn outcome_word(&self, o: usize) -> u64 {
        let n = self.code.n();
        (0..n).fold(0u64, |acc, i| acc | ((((o >> (n - 1 - i)) & 1) as u64) << i))
    }

    /// Exact probability that the opening as `bit` passes all three tests,
    /// averaged over Bob's uniformly random bases. Since Bob's checks are
    /// weaker than the projector, this is at least the report's acceptance.
    pub fn opening_pass_probability(&self, bit: u8) -> Result<f64> {
        let n = self.code.n();
        if n > MAX_EXACT_OPENING_N {
            return Err(Error::CapExceeded(format!("exact opening probability needs n <= {MAX_EXACT_OPENING_N}, got {n}")));
        }
        let nb = 1usize << n;
        let words: Vec<u64> = self.code.codewords()?.iter().map(Bits::word).collect();
        let parities: Vec<u8> = self.code.codewords()?.iter().map(|w| dot_parity(w, &self.r)).collect::<Result<_>>()?;
        let mut total = 0.0;
        for bob_basis in 0..nb as u64 {
            let amps = self.rotated(bit, bob_basis);
            for (idx, a) in amps.iter().enumerate() {
                let p = a.norm_sqr();
                if p == 0.0 {
                    continue;
                }
                let o = idx % nb;
                let alice_basis = ((idx / nb) % nb) as u64;
                let m = idx / (nb * nb);
                if parities[m] != bit {
                    continue;
                }
                let matched = !(alice_basis ^ bob_basis) & (nb as u64 - 1);
                let errors = ((words[m] ^ self.outcome_word(o)) & matched).count_ones() as usize;
                if error_test_passes(matched.count_ones() as usize, errors, 0.0) {
                    total += p;
                }
            }
        }
        Ok(total / nb as f64)
    }

    /// One sampled opening: Bob measured in random bases during the commit
    /// phase, Alice measures her registers and reveals `(c, b, bit)`.
    pub fn simulate_opening<R: Rng + ?Sized>(&self, bit: u8, rng: &mut R) -> Result<BcjlVerdict> {
        let n = self.code.n();
        let nb = 1usize << n;
        let bob_basis = Bits::random(n, rng);
        let amps = self.rotated(bit, bob_basis.word());
        let mut u: f64 = rng.random();
        let mut pick = amps.len() - 1;
        for (idx, a) in amps.iter().enumerate() {
            let p = a.norm_sqr();
            if u < p {
                pick = idx;
                break;
            }
            u -= p;
        }
        let m = Bits::new(self.code.k(), (pick / (nb * nb)) as u64)?;
        let cw = self.code.encode_message(&m)?;
        let alice_basis = Bits::new(n, ((pick / nb) % nb) as u64)?;
        let results = Bits::new(n, self.outcome_word(pick % nb))?;
        bcjl_tests(&self.code, &self.r, 0.0, &cw, &alice_basis, bit, &bob_basis, &results)
    }
}

/// What Bob extracts from one run of the two-party protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPartyAttack {
    /// `(y, f(x, y))` in the order Bob visited them.
    pub learned: Vec<(usize, u8)>,
    /// Largest amplitude change caused by any of Bob's measurements.
    pub max_disturbance: f64,
    /// Largest gap between Alice's reduced states across `y`.
    pub independence_gap: f64,
}

impl TwoPartyAttack {
    /// `f(x, ·)` indexed by `y`.
    pub fn row(&self) -> Vec<u8> {
        let mut row = vec![0; self.learned.len()];
        for &(y, v) in &self.learned {
            row[y] = v;
        }
        row
    }
}

/// Tolerance on Alice's independence before the attack refuses to run.
pub const INDEPENDENCE_TOL: f64 = 1e-8;

/// Bob runs honestly with `y_start`, reads the output, then steps through
/// every other `y` with a local unitary, reading the output each time.
pub fn two_party_attack<R: Rng + ?Sized>(
    f: &FunctionTable,
    x: usize,
    y_start: usize,
    rng: &mut R,
) -> Result<TwoPartyAttack> {
    if y_start >= f.ny() {
        return Err(Error::InvalidTable(format!("y_start {y_start} outside 0..{}", f.ny())));
    }
    iterate_inputs(
        f.ny(),
        y_start,
        |y| Ok(two_party_protocol(f, x, y)?.into_state()),
        |y| superposed_state(f, y),
        rng,
    )
}

/// The attack against any protocol with Alice on subsystem 0, Bob's output
/// on [`OUTPUT_REGISTER`], and `purified(y)` a purification of Alice's input
/// from which Bob's input-changing unitary is derived.
fn iterate_inputs<R, H, P>(ny: usize, y_start: usize, honest: H, purified: P, rng: &mut R) -> Result<TwoPartyAttack>
where
    R: Rng + ?Sized,
    H: Fn(usize) -> Result<StateVector>,
    P: Fn(usize) -> Result<StateVector>,
{
    let first = honest(0)?;
    let alice0 = reduced_state(&first, &[0])?;
    let mut gap: f64 = 0.0;
    for y in 1..ny {
        gap = gap.max(alice0.distance(&reduced_state(&honest(y)?, &[0])?));
    }
    if gap > INDEPENDENCE_TOL {
        return Err(Error::AliceNotIndependent(gap));
    }

    let nsub = first.dims().len();
    // Bob's registers first, so his unitary is the A side of the cut
    let bob_first: Vec<usize> = (1..nsub).chain([0]).collect();
    let bob_regs: Vec<usize> = (1..nsub).collect();

    let mut state = honest(y_start)?;
    let mut learned = Vec::with_capacity(ny);
    let mut max_disturbance: f64 = 0.0;
    for step in 0..ny {
        let y = (y_start + step) % ny;
        let (outcome, _, collapsed) = state.measure_subsystem(OUTPUT_REGISTER, rng)?;
        let moved = state
            .amplitudes()
            .iter()
            .zip(collapsed.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        max_disturbance = max_disturbance.max(moved);
        learned.push((y, outcome as u8));
        state = collapsed;
        if step + 1 < ny {
            let next = (y + 1) % ny;
            let from = purified(y)?.permute(&bob_first)?;
            let to = purified(next)?.permute(&bob_first)?;
            let u = relating_unitary(&from, &to, nsub - 1)?;
            state = u.apply_on(&state, &bob_regs)?;
        }
    }
    Ok(TwoPartyAttack { learned, max_disturbance, independence_gap: gap })
}
