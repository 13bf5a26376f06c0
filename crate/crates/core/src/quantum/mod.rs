//! Statevector-level simulators for the quantum search subroutines.
//!
//! Nothing here models gates or qubits. Each simulator evolves exact
//! amplitudes under the algorithm's unitaries and charges oracle queries to
//! a [`QueryLedger`]. Simulation overhead, such as classically evaluating a
//! predicate on every index to know what the oracle marks, is not charged.

pub mod grover;
mod ledger;
pub mod walk;

pub use grover::{
    grover_iterations, grover_run_statevector, grover_sample, grover_sample_marked, grover_search_unknown,
    grover_success_prob, GroverInstance, GroverRun, GroverSample, UnknownSearch, STATEVECTOR_MAX,
};
pub use ledger::QueryLedger;
pub use walk::{
    claw_walk_run, claw_walk_sample, walk_params, walk_params_scaled, CollapsedWalkState, FullWalkState, Side,
    WalkConfig, WalkInstance, WalkMode, WalkOutcome, WalkParams, WalkRun, WalkSample,
};

use num_complex::Complex64;

/// Pairwise sum of `|a|^2`; the error stays near machine epsilon for
/// million-entry states.
pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().map(|a| a.norm_sqr()).sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    norm_sqr(a) + norm_sqr(b)
}

/// Pairwise sum of the amplitudes.
pub(crate) fn amp_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    amp_sum(a) + amp_sum(b)
}

/// Index drawn from the distribution `|amp|^2`.
pub(crate) fn sample_index<R: rand::Rng>(amps: &[Complex64], rng: &mut R) -> usize {
    let total = norm_sqr(amps);
    let mut u = rng.gen::<f64>() * total;
    for (i, a) in amps.iter().enumerate() {
        u -= a.norm_sqr();
        if u < 0.0 {
            return i;
        }
    }
    amps.len() - 1
}
