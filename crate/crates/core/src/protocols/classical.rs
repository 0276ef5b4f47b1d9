//! Classical commitment via a one-way function: Alice commits to `b` by
//! sending `y = f(x)` for a random `x` with `x mod 2 = b`, then opens by
//! revealing `x`.
//!
//! The toy function here is a 16-bit bijection, so its "one-wayness" falls to
//! a 65,536-step search. [`break_commitment`] does exactly that.

use rand::Rng;

use super::transcript::{Party, Phase, ProtocolTranscript};
use crate::{Error, Result};

/// A public function on 16-bit inputs.
pub trait OneWayFunction {
    fn eval(&self, x: u16) -> u16;
}

/// Four rounds of odd multiply, xorshift, rotate and add; each is a
/// bijection on `u16`, so the composition is too.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToyMixer;

const ROUNDS: [(u16, u32, u32, u16); 4] = [
    (0x9e37, 7, 5, 0x3c6e),
    (0x7f4b, 5, 11, 0xa54f),
    (0xc2b3, 9, 3, 0x510e),
    (0x2f6d, 6, 13, 0x9b05),
];

impl OneWayFunction for ToyMixer {
    fn eval(&self, x: u16) -> u16 {
        ROUNDS.iter().fold(x, |mut v, &(mul, shift, rot, add)| {
            v = v.wrapping_mul(mul | 1);
            v ^= v >> shift;
            v = v.rotate_left(rot);
            v.wrapping_add(add)
        })
    }
}

/// Outcome of [`classical_verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalVerdict {
    pub verified: bool,
    /// `x mod 2` when verified.
    pub bit: Option<u8>,
}

/// Commit phase. Returns the transcript (carrying only `y`) and the secret `x`.
pub fn classical_commit<R: Rng + ?Sized, F: OneWayFunction>(
    bit: u8,
    rng: &mut R,
    f: &F,
) -> Result<(ProtocolTranscript, u16)> {
    if bit > 1 {
        return Err(Error::InvalidBits(format!("bit {bit}")));
    }
    let x = (rng.random::<u16>() & !1) | u16::from(bit);
    let mut t = ProtocolTranscript::new();
    t.send(Party::Alice, "y", f.eval(x).to_be_bytes().to_vec())?;
    Ok((t, x))
}

/// Opening phase: Alice reveals `x`.
pub fn classical_open(transcript: &mut ProtocolTranscript, x: u16) -> Result<()> {
    transcript.open()?;
    transcript.send(Party::Alice, "x", x.to_be_bytes().to_vec())
}

/// Bob checks `f(x) = y` and reads the bit off the parity of `x`.
pub fn classical_verify<F: OneWayFunction>(transcript: &mut ProtocolTranscript, f: &F) -> Result<ClassicalVerdict> {
    if transcript.phase() != Phase::Opened {
        return Err(Error::PhaseOrder { from: transcript.phase().name(), to: "verified" });
    }
    let y = read_u16(transcript, "y")?;
    let x = read_u16(transcript, "x")?;
    let verified = f.eval(x) == y;
    transcript.conclude(verified)?;
    Ok(ClassicalVerdict { verified, bit: verified.then_some((x & 1) as u8) })
}

/// Exhaustive preimage search.
pub fn invert_by_search<F: OneWayFunction>(f: &F, y: u16) -> Option<u16> {
    (0..=u16::MAX).find(|&x| f.eval(x) == y)
}

/// Bob's attack: recover the committed bit from `y` alone, before opening.
pub fn break_commitment<F: OneWayFunction>(transcript: &ProtocolTranscript, f: &F) -> Result<Option<u8>> {
    let y = read_u16(transcript, "y")?;
    Ok(invert_by_search(f, y).map(|x| (x & 1) as u8))
}

fn read_u16(t: &ProtocolTranscript, label: &str) -> Result<u16> {
    let p = t
        .payload(label)
        .ok_or_else(|| Error::TranscriptFormat(format!("missing {label}")))?;
    let bytes: [u8; 2] = p
        .try_into()
        .map_err(|_| Error::TranscriptFormat(format!("{label} must be 2 bytes")))?;
    Ok(u16::from_be_bytes(bytes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn mixer_is_a_bijection() {
        let mut seen = vec![false; 1 << 16];
        for x in 0..=u16::MAX {
            let y = ToyMixer.eval(x) as usize;
            assert!(!seen[y]);
            seen[y] = true;
        }
    }

    #[test]
    fn committed_parity_and_transcript_contents() {
        let mut rng = seeded(1);
        for bit in 0..2 {
            for _ in 0..20 {
                let (t, x) = classical_commit(bit, &mut rng, &ToyMixer).unwrap();
                assert_eq!((x & 1) as u8, bit);
                assert_eq!(t.messages().len(), 1);
                assert_eq!(t.payload("y").unwrap(), ToyMixer.eval(x).to_be_bytes());
                assert_eq!(t.phase(), Phase::Commit);
            }
        }
    }

    #[test]
    fn same_seed_same_transcript() {
        let a = classical_commit(1, &mut seeded(9), &ToyMixer).unwrap();
        let b = classical_commit(1, &mut seeded(9), &ToyMixer).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn honest_open_verifies() {
        let mut rng = seeded(2);
        let (mut t, x) = classical_commit(1, &mut rng, &ToyMixer).unwrap();
        classical_open(&mut t, x).unwrap();
        let v = classical_verify(&mut t, &ToyMixer).unwrap();
        assert_eq!(v, ClassicalVerdict { verified: true, bit: Some(1) });
        assert_eq!(t.phase(), Phase::Verified);
    }

    #[test]
    fn wrong_preimage_is_rejected() {
        let mut rng = seeded(3);
        let (mut t, x) = classical_commit(0, &mut rng, &ToyMixer).unwrap();
        // f is a bijection, so any other x' has f(x') != y
        classical_open(&mut t, x ^ 1).unwrap();
        let v = classical_verify(&mut t, &ToyMixer).unwrap();
        assert!(!v.verified);
        assert_eq!(t.phase(), Phase::Rejected);
    }

    #[test]
    fn verify_requires_opening() {
        let mut rng = seeded(4);
        let (mut t, _) = classical_commit(0, &mut rng, &ToyMixer).unwrap();
        assert!(matches!(classical_verify(&mut t, &ToyMixer), Err(Error::PhaseOrder { .. })));
    }

    #[test]
    fn exhaustive_search_recovers_bit_before_opening() {
        let mut rng = seeded(5);
        for bit in [0, 1, 1, 0] {
            let (t, x) = classical_commit(bit, &mut rng, &ToyMixer).unwrap();
            assert_eq!(invert_by_search(&ToyMixer, ToyMixer.eval(x)), Some(x));
            assert_eq!(break_commitment(&t, &ToyMixer).unwrap(), Some(bit));
        }
    }
}
