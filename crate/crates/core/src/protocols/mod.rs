//! Commitment protocols: a classical one-way-function baseline, the
//! BB84-based BCJL scheme, general unitary scripts, and a two-party
//! computation built on the same model.

mod bcjl;
mod classical;
mod script;
mod transcript;
mod two_party;

pub use bcjl::{
    bcjl_run, bcjl_tests, bob_commit_states, choose_r, concealment_fidelity, error_test_passes, BcjlParams, BcjlRun,
    BcjlVerdict, DEFAULT_THRESHOLD_FACTOR, MAX_JOINT_N,
};
pub use classical::{
    break_commitment, classical_commit, classical_open, classical_verify, invert_by_search, ClassicalVerdict,
    OneWayFunction, ToyMixer,
};
pub use script::{
    bb84_script, leaky_script, random_concealing_script, random_script, revealing_script, script_execute, script_trace,
    script_verify, silent_script, Execution, ScriptStep, UnitaryScript,
};
pub use transcript::{Message, Party, Phase, ProtocolTranscript, QuantumRegisters};
pub use two_party::{
    alice_independence_gap, superposed_state, two_party_protocol, FunctionTable, MAX_DOMAIN, OUTPUT_REGISTER,
};
