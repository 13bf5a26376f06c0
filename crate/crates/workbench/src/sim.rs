//! `sim-grover` and `sim-clawwalk`.

use std::collections::BTreeSet;

use asr_core::claw::{find_claws_sorted, ClawProblem};
use asr_core::quantum::{
    claw_walk_run, grover_iterations, grover_run_statevector, grover_sample_marked, grover_success_prob,
    walk_params_scaled, GroverInstance, WalkInstance, WalkMode, WalkOutcome,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug)]
pub struct GroverRequest {
    pub n: usize,
    /// Explicit marked indices; when empty, `m` indices are drawn from `seed`.
    pub marked: Vec<usize>,
    pub m: usize,
    pub iterations: Option<u64>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GroverReport {
    pub n: usize,
    pub marked: Vec<usize>,
    pub iterations: u64,
    pub marked_probability: f64,
    pub closed_form: f64,
    pub abs_error: f64,
    pub queries: u64,
    pub max_norm_drift: f64,
    pub measured: usize,
    pub measured_marked: bool,
}

pub fn sim_grover(req: &GroverRequest) -> CliResult<GroverReport> {
    if req.n < 1 {
        return Err(CliError::input("N must be at least 1"));
    }
    let marked = if req.marked.is_empty() {
        if req.m == 0 || req.m > req.n {
            return Err(CliError::input(format!("need 1 <= M <= N, got M = {}", req.m)));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
        let mut set = BTreeSet::new();
        while set.len() < req.m {
            set.insert(rng.gen_range(0..req.n));
        }
        set.into_iter().collect()
    } else {
        req.marked.clone()
    };
    let iterations = match req.iterations {
        Some(r) => r,
        None => grover_iterations(req.n as u64, marked.len() as u64)?,
    };
    let inst = GroverInstance::new(req.n, marked, iterations, req.seed)?;
    let m = inst.marked().len() as u64;
    let run = grover_run_statevector(&inst)?;
    let closed = grover_success_prob(req.n as u64, m, iterations)?;
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let sample = grover_sample_marked(req.n, inst.marked(), iterations, &mut rng)?;
    Ok(GroverReport {
        n: req.n,
        marked: inst.marked().to_vec(),
        iterations,
        marked_probability: run.marked_probability,
        closed_form: closed,
        abs_error: (run.marked_probability - closed).abs(),
        queries: run.ledger.queries(),
        max_norm_drift: run.max_norm_drift,
        measured: sample.index,
        measured_marked: inst.marked().binary_search(&sample.index).is_ok(),
    })
}

#[derive(Clone, Debug)]
pub struct WalkRequest {
    pub n: usize,
    pub range_bits: u32,
    pub seed: u64,
    pub mode: WalkMode,
    /// `Some(k)` draws `k` random equations instead of one planted claw.
    pub random_equations: Option<usize>,
    pub outer_multiplier: f64,
    pub subsets: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkReport {
    pub n: usize,
    pub mode: &'static str,
    pub claws: Vec<(u32, u32)>,
    pub r1: usize,
    pub r2: usize,
    pub t1: u64,
    pub t2: u64,
    pub outer: u64,
    pub queries: u64,
    pub success_prob: f64,
    pub baseline_prob: f64,
    pub amplification: f64,
    pub measured: Option<(u32, u32)>,
    pub max_norm_drift: f64,
}

pub fn mode_name(mode: WalkMode) -> &'static str {
    match mode {
        WalkMode::Full => "full",
        WalkMode::Collapsed => "collapsed",
    }
}

pub fn sim_clawwalk(req: &WalkRequest) -> CliResult<WalkReport> {
    if !(req.outer_multiplier.is_finite() && req.outer_multiplier > 0.0) {
        return Err(CliError::input("outer multiplier must be positive"));
    }
    let problem = match req.random_equations {
        None => ClawProblem::planted_unique(req.n, req.range_bits, req.seed)?,
        Some(k) => ClawProblem::random(req.n, req.range_bits, k, req.seed)?,
    };
    let mut params = walk_params_scaled(req.n, req.n, req.outer_multiplier)?;
    if let Some((r1, r2)) = req.subsets {
        params = params.with_subsets(r1, r2, req.outer_multiplier)?;
    }
    let claws = find_claws_sorted(&problem)?.claws;
    let inst = WalkInstance::with_params(problem, params, req.mode, req.seed)?;
    let run = claw_walk_run(&inst)?;
    Ok(WalkReport {
        n: req.n,
        mode: mode_name(req.mode),
        claws,
        r1: params.r1,
        r2: params.r2,
        t1: params.t1,
        t2: params.t2,
        outer: params.outer,
        queries: run.ledger.queries(),
        success_prob: run.success_prob,
        baseline_prob: run.baseline_prob,
        amplification: run.success_prob / run.baseline_prob,
        measured: match run.outcome {
            WalkOutcome::Claw(a, b) => Some((a, b)),
            WalkOutcome::Reject => None,
        },
        max_norm_drift: run.max_norm_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grover_report_matches_closed_form() {
        let r = sim_grover(&GroverRequest {
            n: 4,
            marked: vec![1],
            m: 0,
            iterations: None,
            seed: 0,
        })
        .unwrap();
        assert_eq!(r.iterations, 1);
        assert!((r.marked_probability - 1.0).abs() < 1e-15);
        assert!(r.measured_marked);
        let bad = GroverRequest {
            n: 8,
            marked: vec![],
            m: 9,
            iterations: None,
            seed: 0,
        };
        assert_eq!(sim_grover(&bad).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn walk_modes_agree() {
        let mut req = WalkRequest {
            n: 8,
            range_bits: 10,
            seed: 3,
            mode: WalkMode::Full,
            random_equations: None,
            outer_multiplier: 1.0,
            subsets: None,
        };
        let full = sim_clawwalk(&req).unwrap();
        req.mode = WalkMode::Collapsed;
        let col = sim_clawwalk(&req).unwrap();
        assert!((full.success_prob - col.success_prob).abs() < 1e-10);
        assert_eq!(full.queries, col.queries);
        assert_eq!(full.claws.len(), 1);
    }
}
