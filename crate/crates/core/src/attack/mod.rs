//! Six-round key recovery from three chosen plaintexts.
//!
//! Plaintexts obey `F_1(L1) ^ R1 == C` for a fixed `C`, which makes the
//! round-2 input equal to `C ^ K1` for all of them. Differences between
//! pairs then depend on `K2'` from the top and `K6` from the bottom only, and
//! the two-difference match is a claw problem.

mod pairs;
mod pipeline;
mod predicates;

pub use pairs::{make_chosen_plaintext, AttackInstance, ChosenPairSet, KnownPair};
pub use pipeline::{
    run_asr_attack, AttackConfig, AttackOutcome, ClawBackend, RecoveredKeys, SearchBackend, StageRecord, Uniqueness,
    WalkStats,
};
pub use predicates::{
    build_claw_problem, diff_f, diff_g, k1k3_constant, k3_check_literal, k4_check, k5_check, resolve_k2_k3,
};
