//! The BCJL quantum bit commitment scheme.
//!
//! Honest runs are simulated qubit by qubit: an honest commitment is a
//! product state, so nothing larger than a single qubit is ever formed.
//! Bob measures during the commit phase.

use nalgebra::DMatrix;
use rand::Rng;

use super::transcript::{Party, ProtocolTranscript};
use crate::codes::{dot_parity, generate_code, Bits, LinearCode};
use crate::encode::{apply_noise, encode_bit, measure, Basis, NoiseModel};
use crate::qmath::{c, DensityMatrix, C64};
use crate::{Error, Result};

/// Default acceptance threshold, as a multiple of the channel noise level.
pub const DEFAULT_THRESHOLD_FACTOR: f64 = 1.4;

/// Largest `n` for which Bob's full `2^n`-dimensional reduced states are formed.
pub const MAX_JOINT_N: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct BcjlParams {
    pub n: usize,
    pub k: usize,
    pub noise: NoiseModel,
    pub threshold_factor: f64,
    /// Minimum distance Bob insists on when drawing `G`.
    pub min_distance: usize,
    pub max_code_attempts: usize,
}

impl BcjlParams {
    /// Threshold factor 1.4 and `min_distance = min(2, n - k + 1)`.
    pub fn new(n: usize, k: usize, epsilon: f64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidCodeParams(format!("need 1 <= k <= n, got n={n} k={k}")));
        }
        Ok(Self {
            n,
            k,
            noise: NoiseModel::new(epsilon)?,
            threshold_factor: DEFAULT_THRESHOLD_FACTOR,
            min_distance: 2.min(n - k + 1),
            max_code_attempts: 10_000,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.noise.epsilon()
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Largest tolerated matched-basis error rate.
    pub fn threshold(&self) -> f64 {
        self.threshold_factor * self.epsilon()
    }

    /// Whether `d/n > 10ε` holds for a code of distance `d`.
    pub fn distance_ratio_met(&self, d: usize) -> bool {
        d as f64 / self.n as f64 > 10.0 * self.epsilon()
    }

    /// Bob's choice of `G`.
    pub fn draw_code<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LinearCode> {
        generate_code(self.n, self.k, self.min_distance, rng, self.max_code_attempts)
    }
}

/// Matched-basis error check: zero errors always pass, otherwise the error
/// rate must be strictly below `threshold`.
pub fn error_test_passes(matched: usize, errors: usize, threshold: f64) -> bool {
    errors == 0 || (errors as f64) < threshold * matched as f64
}

/// The three opening tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BcjlVerdict {
    pub codeword_ok: bool,
    pub error_ok: bool,
    pub parity_ok: bool,
    /// Positions where Alice's and Bob's bases agree.
    pub matched: usize,
    /// Disagreements among matched positions.
    pub errors: usize,
}

impl BcjlVerdict {
    pub fn accepted(&self) -> bool {
        self.codeword_ok && self.error_ok && self.parity_ok
    }

    pub fn error_rate(&self) -> f64 {
        if self.matched == 0 {
            0.0
        } else {
            self.errors as f64 / self.matched as f64
        }
    }
}

/// Bob's opening checks on revealed `(c, b, bit)` against his own record.
pub fn bcjl_tests(
    code: &LinearCode,
    r: &Bits,
    threshold: f64,
    revealed_c: &Bits,
    revealed_b: &Bits,
    claimed_bit: u8,
    bob_basis: &Bits,
    bob_results: &Bits,
) -> Result<BcjlVerdict> {
    let n = code.n();
    for s in [revealed_c, revealed_b, bob_basis, bob_results, r] {
        if s.len() != n {
            return Err(Error::LengthMismatch { expected: n, actual: s.len() });
        }
    }
    let matched_mask = !(revealed_b.word() ^ bob_basis.word()) & low_mask(n);
    let errors = ((revealed_c.word() ^ bob_results.word()) & matched_mask).count_ones() as usize;
    let matched = matched_mask.count_ones() as usize;
    Ok(BcjlVerdict {
        codeword_ok: code.is_codeword(revealed_c)?,
        error_ok: error_test_passes(matched, errors, threshold),
        parity_ok: dot_parity(revealed_c, r)? == claimed_bit,
        matched,
        errors,
    })
}

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Everything that happened in one honest run.
#[derive(Debug, Clone)]
pub struct BcjlRun {
    pub transcript: ProtocolTranscript,
    pub code: LinearCode,
    pub r: Bits,
    pub c: Bits,
    pub alice_basis: Bits,
    pub bob_basis: Bits,
    pub bob_results: Bits,
    pub committed_bit: u8,
    pub claimed_bit: u8,
    pub verdict: BcjlVerdict,
}

/// Alice's choice of `r`: non-zero and not orthogonal to the code, so both
/// parities are reachable.
pub fn choose_r<R: Rng + ?Sized>(code: &LinearCode, rng: &mut R) -> Result<Bits> {
    loop {
        let r = Bits::random(code.n(), rng);
        if !r.is_zero() && !code.is_orthogonal(&r)? {
            return Ok(r);
        }
    }
}

/// Runs commit and opening end to end. A dishonest Alice commits to
/// `committed_bit` but claims the other bit at opening.
pub fn bcjl_run<R: Rng + ?Sized>(
    params: &BcjlParams,
    committed_bit: u8,
    alice_honest: bool,
    rng: &mut R,
) -> Result<BcjlRun> {
    if committed_bit > 1 {
        return Err(Error::InvalidBits(format!("bit {committed_bit}")));
    }
    let n = params.n;
    let mut t = ProtocolTranscript::new();

    let code = params.draw_code(rng)?;
    t.send(Party::Bob, "G", code.rows().flat_map(|row| row.to_bytes()).collect::<Vec<_>>())?;

    let r = choose_r(&code, rng)?;
    t.send(Party::Alice, "r", r.to_bytes())?;

    let c = code.sample_codeword_with_parity(&r, committed_bit, rng)?;
    let alice_basis = Bits::random(n, rng);

    let bob_basis = Bits::random(n, rng);
    let mut results = 0u64;
    for i in 0..n {
        let photon = DensityMatrix::from_pure(&encode_bit(c.get(i), alice_basis.get(i)))?;
        let received = apply_noise(&photon, &params.noise, rng)?;
        let (outcome, _) = measure(&received, Basis::from_bit(bob_basis.get(i)), rng)?;
        results |= u64::from(outcome) << i;
    }
    let bob_results = Bits::new(n, results)?;
    t.send(Party::Alice, "qubits", vec![n as u8])?;
    t.send(Party::Bob, "bob_basis", bob_basis.to_bytes())?;
    t.send(Party::Bob, "bob_results", bob_results.to_bytes())?;

    t.open()?;
    let claimed_bit = if alice_honest { committed_bit } else { 1 - committed_bit };
    t.send(Party::Alice, "c", c.to_bytes())?;
    t.send(Party::Alice, "b", alice_basis.to_bytes())?;
    t.send(Party::Alice, "bit", vec![claimed_bit])?;

    let verdict = bcjl_tests(&code, &r, params.threshold(), &c, &alice_basis, claimed_bit, &bob_basis, &bob_results)?;
    t.conclude(verdict.accepted())?;

    Ok(BcjlRun {
        transcript: t,
        code,
        r,
        c,
        alice_basis,
        bob_basis,
        bob_results,
        committed_bit,
        claimed_bit,
        verdict,
    })
}

/// Bob's view of one photon when Alice's basis is uniformly random and
/// unknown: `(|c><c|_rect + |c><c|_diag) / 2`.
fn photon_mixture(bit: u8) -> DMatrix<C64> {
    let mut m = DMatrix::<C64>::zeros(2, 2);
    for b in 0..2 {
        let v = nalgebra::DVector::from_column_slice(encode_bit(bit, b).amplitudes());
        m += &v * v.adjoint() * c(0.5, 0.0);
    }
    m
}

/// Bob's reduced states `(ρ0, ρ1)` before opening, with `r` public and
/// Alice's codeword and bases unknown to him:
/// `ρ_bit = avg over c with parity bit of ⊗_i σ_{c_i}`.
pub fn bob_commit_states(code: &LinearCode, r: &Bits) -> Result<(DensityMatrix, DensityMatrix)> {
    let n = code.n();
    if n > MAX_JOINT_N {
        return Err(Error::CapExceeded(format!("Bob's reduced states need n <= {MAX_JOINT_N}, got {n}")));
    }
    let sigma = [photon_mixture(0), photon_mixture(1)];
    let dim = 1usize << n;
    let mut acc = [DMatrix::<C64>::zeros(dim, dim), DMatrix::<C64>::zeros(dim, dim)];
    let mut counts = [0usize; 2];
    for cw in code.codewords()? {
        let parity = dot_parity(&cw, r)? as usize;
        let mut prod = DMatrix::<C64>::from_element(1, 1, c(1.0, 0.0));
        for i in 0..n {
            prod = prod.kronecker(&sigma[cw.get(i) as usize]);
        }
        acc[parity] += prod;
        counts[parity] += 1;
    }
    if counts.contains(&0) {
        return Err(Error::ParityUnattainable);
    }
    let [a0, a1] = acc;
    Ok((
        DensityMatrix::new(a0 / c(counts[0] as f64, 0.0))?,
        DensityMatrix::new(a1 / c(counts[1] as f64, 0.0))?,
    ))
}

/// `F(ρ0, ρ1)` for Bob's pre-opening states; `1 - F` is the concealment gap.
pub fn concealment_fidelity(code: &LinearCode, r: &Bits) -> Result<f64> {
    let (rho0, rho1) = bob_commit_states(code, r)?;
    crate::qmath::fidelity(&rho0, &rho1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocols::Phase;
    use crate::rng::{seeded, stream};

    #[test]
    fn noiseless_honest_runs_always_verify() {
        let params = BcjlParams::new(12, 6, 0.0).unwrap();
        for seed in 0..50 {
            for bit in 0..2 {
                let run = bcjl_run(&params, bit, true, &mut stream(seed, bit as u64)).unwrap();
                assert!(run.verdict.accepted(), "seed {seed}: {:?}", run.verdict);
                assert_eq!(run.verdict.errors, 0);
                assert_eq!(run.transcript.phase(), Phase::Verified);
            }
        }
    }

    #[test]
    fn wrong_claim_fails_only_parity() {
        let params = BcjlParams::new(10, 5, 0.0).unwrap();
        let mut rng = seeded(3);
        for _ in 0..20 {
            let run = bcjl_run(&params, 0, false, &mut rng).unwrap();
            assert!(run.verdict.codeword_ok && run.verdict.error_ok);
            assert!(!run.verdict.parity_ok);
            assert_eq!(run.transcript.phase(), Phase::Rejected);
            assert_eq!(run.claimed_bit, 1);
        }
    }

    #[test]
    fn transcript_carries_every_step() {
        let params = BcjlParams::new(8, 4, 0.05).unwrap();
        let run = bcjl_run(&params, 1, true, &mut seeded(4)).unwrap();
        let labels: Vec<_> = run.transcript.messages().iter().map(|m| m.label.as_str()).collect();
        assert_eq!(labels, ["G", "r", "qubits", "bob_basis", "bob_results", "c", "b", "bit", "verdict"]);
        let reparsed = ProtocolTranscript::from_log(&run.transcript.to_log()).unwrap();
        assert_eq!(reparsed.phase(), run.transcript.phase());
        assert_eq!(dot_parity(&run.c, &run.r).unwrap(), 1);
        assert!(!run.r.is_zero());
    }

    #[test]
    fn error_test_boundaries() {
        assert!(error_test_passes(0, 0, 0.0));
        assert!(error_test_passes(10, 0, 0.0));
        assert!(!error_test_passes(10, 1, 0.0));
        // 1/15 < 0.07 but 1/10 is not
        assert!(error_test_passes(15, 1, 0.07));
        assert!(!error_test_passes(10, 1, 0.07));
    }

    /// Acceptance probability of an honest run by summing over the binomial
    /// law of the matched count and of the errors among matched positions.
    fn binomial_acceptance(n: usize, eps: f64, threshold: f64) -> f64 {
        let choose = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
        let mut total = 0.0;
        for m in 0..=n {
            let pm = choose(n, m) * 0.5f64.powi(n as i32);
            for e in 0..=m {
                if error_test_passes(m, e, threshold) {
                    total += pm * choose(m, e) * eps.powi(e as i32) * (1.0 - eps).powi((m - e) as i32);
                }
            }
        }
        total
    }

    #[test]
    fn noisy_acceptance_matches_binomial_oracle() {
        let params = BcjlParams::new(20, 10, 0.05).unwrap();
        let oracle = binomial_acceptance(20, 0.05, params.threshold());
        assert!((oracle - 0.610_290_664_847_924_3).abs() < 1e-12, "{oracle}");
        let trials = 1000;
        let accepted = (0..trials)
            .filter(|&i| bcjl_run(&params, (i % 2) as u8, true, &mut stream(77, i)).unwrap().verdict.accepted())
            .count();
        let rate = accepted as f64 / trials as f64;
        let sigma = (oracle * (1.0 - oracle) / trials as f64).sqrt();
        assert!((rate - oracle).abs() < 3.0 * sigma, "rate {rate} oracle {oracle}");
    }

    #[test]
    fn bob_states_are_valid_and_close() {
        let mut rng = seeded(8);
        let params = BcjlParams::new(6, 3, 0.0).unwrap();
        let code = params.draw_code(&mut rng).unwrap();
        let r = choose_r(&code, &mut rng).unwrap();
        let (rho0, rho1) = bob_commit_states(&code, &r).unwrap();
        assert_eq!(rho0.dim(), 64);
        let f = crate::qmath::fidelity(&rho0, &rho1).unwrap();
        assert!(f > 0.0 && f < 1.0, "{f}");
    }

    #[test]
    fn bob_states_cap() {
        let code = LinearCode::from_rows(11, vec![1]).unwrap();
        assert!(matches!(bob_commit_states(&code, &Bits::unit(11, 0)), Err(Error::CapExceeded(_))));
    }
}
