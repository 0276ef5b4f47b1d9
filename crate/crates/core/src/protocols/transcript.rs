use std::fmt;
use std::str::FromStr;

use crate::qmath::StateVector;
use crate::{Error, Result};

/// Lifecycle of a commitment: `Commit -> Opened -> (Verified | Rejected)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    Commit,
    Opened,
    Verified,
    Rejected,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Commit => "commit",
            Phase::Opened => "opened",
            Phase::Verified => "verified",
            Phase::Rejected => "rejected",
        }
    }

    fn can_advance_to(self, next: Phase) -> bool {
        matches!(
            (self, next),
            (Phase::Commit, Phase::Opened) | (Phase::Opened, Phase::Verified) | (Phase::Opened, Phase::Rejected)
        )
    }

    pub fn is_final(self) -> bool {
        matches!(self, Phase::Verified | Phase::Rejected)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "commit" => Phase::Commit,
            "opened" => Phase::Opened,
            "verified" => Phase::Verified,
            "rejected" => Phase::Rejected,
            _ => return Err(Error::TranscriptFormat(format!("unknown phase {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Party {
    Alice,
    Bob,
    Channel,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Channel => "channel",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "alice" => Party::Alice,
            "bob" => Party::Bob,
            "channel" => Party::Channel,
            _ => return Err(Error::TranscriptFormat(format!("unknown party {s:?}"))),
        })
    }
}

/// A labelled classical message, stamped with the phase it was sent in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message {
    pub phase: Phase,
    pub party: Party,
    pub label: String,
    pub payload: Vec<u8>,
}

/// A joint pure state together with the owner of each subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumRegisters {
    state: StateVector,
    owners: Vec<Party>,
}

impl QuantumRegisters {
    /// The ledger must assign exactly one owner to every subsystem.
    pub fn new(state: StateVector, owners: Vec<Party>) -> Result<Self> {
        if owners.len() != state.dims().len() {
            return Err(Error::InvalidSubsystems(format!(
                "ledger covers {} of {} subsystems",
                owners.len(),
                state.dims().len()
            )));
        }
        Ok(Self { state, owners })
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn owners(&self) -> &[Party] {
        &self.owners
    }

    /// Indices of subsystems held by `party`.
    pub fn held_by(&self, party: Party) -> Vec<usize> {
        (0..self.owners.len()).filter(|&i| self.owners[i] == party).collect()
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }
}

/// Ordered record of a commitment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTranscript {
    phase: Phase,
    messages: Vec<Message>,
    registers: Option<QuantumRegisters>,
}

impl Default for ProtocolTranscript {
    fn default() -> Self {
        Self::new()
    }
}

impl ProtocolTranscript {
    pub fn new() -> Self {
        Self { phase: Phase::Commit, messages: Vec::new(), registers: None }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn registers(&self) -> Option<&QuantumRegisters> {
        self.registers.as_ref()
    }

    pub fn set_registers(&mut self, registers: QuantumRegisters) {
        self.registers = Some(registers);
    }

    /// Records a message in the current phase. Labels may not contain
    /// whitespace; nothing may be sent once a verdict is in.
    pub fn send(&mut self, party: Party, label: &str, payload: impl Into<Vec<u8>>) -> Result<()> {
        if self.phase().is_final() {
            return Err(Error::PhaseOrder { from: self.phase().name(), to: "send" });
        }
        if label.is_empty() || label.chars().any(char::is_whitespace) {
            return Err(Error::TranscriptFormat(format!("bad label {label:?}")));
        }
        self.messages.push(Message { phase: self.phase(), party, label: label.to_string(), payload: payload.into() });
        Ok(())
    }

    /// The most recent payload sent under `label`.
    pub fn payload(&self, label: &str) -> Option<&[u8]> {
        self.messages.iter().rev().find(|m| m.label == label).map(|m| m.payload.as_slice())
    }

    fn advance(&mut self, next: Phase) -> Result<()> {
        let from = self.phase();
        if !from.can_advance_to(next) {
            return Err(Error::PhaseOrder { from: from.name(), to: next.name() });
        }
        self.phase = next;
        Ok(())
    }

    pub fn open(&mut self) -> Result<()> {
        self.advance(Phase::Opened)
    }

    /// Enters the final phase and records Bob's verdict.
    pub fn conclude(&mut self, accepted: bool) -> Result<()> {
        self.advance(if accepted { Phase::Verified } else { Phase::Rejected })?;
        self.messages.push(Message {
            phase: self.phase(),
            party: Party::Bob,
            label: "verdict".into(),
            payload: vec![u8::from(accepted)],
        });
        Ok(())
    }

    /// One line per message: `phase party label payload-hex`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            let hex = if m.payload.is_empty() { "-".to_string() } else { hex::encode(&m.payload) };
            out.push_str(&format!("{} {} {} {}\n", m.phase, m.party, m.label, hex));
        }
        out
    }

    /// Parses [`to_log`](Self::to_log) output, re-checking phase order.
    /// Quantum registers are not part of the log.
    pub fn from_log(text: &str) -> Result<Self> {
        let mut t = ProtocolTranscript::new();
        for (lineno, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [phase, party, label, hex_payload] = fields[..] else {
                return Err(Error::TranscriptFormat(format!("line {}: expected 4 fields", lineno + 1)));
            };
            let phase: Phase = phase.parse()?;
            let party: Party = party.parse()?;
            let payload = if hex_payload == "-" {
                Vec::new()
            } else {
                hex::decode(hex_payload).map_err(|e| Error::TranscriptFormat(format!("line {}: {e}", lineno + 1)))?
            };
            if phase != t.phase() {
                t.advance(phase)?;
            }
            t.messages.push(Message { phase, party, label: label.to_string(), payload });
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phases_advance_monotonically() {
        let mut t = ProtocolTranscript::new();
        assert_eq!(t.phase(), Phase::Commit);
        assert!(t.conclude(true).is_err());
        t.open().unwrap();
        assert!(t.open().is_err());
        t.conclude(false).unwrap();
        assert_eq!(t.phase(), Phase::Rejected);
        assert!(t.open().is_err());
        assert!(t.conclude(true).is_err());
        assert!(t.send(Party::Alice, "late", vec![1]).is_err());
    }

    #[test]
    fn log_round_trip() {
        let mut t = ProtocolTranscript::new();
        t.send(Party::Alice, "y", vec![0xbe, 0xef]).unwrap();
        t.open().unwrap();
        t.send(Party::Alice, "x", vec![]).unwrap();
        t.conclude(true).unwrap();
        let log = t.to_log();
        assert_eq!(log, "commit alice y beef\nopened alice x -\nverified bob verdict 01\n");
        assert_eq!(ProtocolTranscript::from_log(&log).unwrap(), t);
    }

    #[test]
    fn log_rejects_out_of_order_phases() {
        assert!(ProtocolTranscript::from_log("opened alice x 00\ncommit alice y 00\n").is_err());
        assert!(ProtocolTranscript::from_log("verified bob verdict 01\n").is_err());
        assert!(ProtocolTranscript::from_log("commit mallory y 00\n").is_err());
        assert!(ProtocolTranscript::from_log("commit alice y zz\n").is_err());
    }

    #[test]
    fn labels_must_be_single_tokens() {
        let mut t = ProtocolTranscript::new();
        assert!(t.send(Party::Bob, "two words", vec![]).is_err());
        assert!(t.send(Party::Bob, "", vec![]).is_err());
    }

    #[test]
    fn ledger_must_cover_every_subsystem() {
        let s = StateVector::basis(&[2, 2], &[0, 0]).unwrap();
        assert!(QuantumRegisters::new(s.clone(), vec![Party::Alice]).is_err());
        let r = QuantumRegisters::new(s, vec![Party::Alice, Party::Bob]).unwrap();
        assert_eq!(r.held_by(Party::Bob), vec![1]);
    }
}
