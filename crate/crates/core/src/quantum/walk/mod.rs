//! Two-sided quantum-walk claw finding on the combined function.
//!
//! One run loads both subsets (`r1 + r2` queries), then repeats `outer`
//! times: a phase flip on subset pairs holding a claw, `t1` walk steps on
//! side 1 and `t2` walk steps on side 2 (two queries per step). The sides act
//! on separate registers, so running all side-1 steps before the side-2
//! steps gives the same state as alternating them.

mod collapsed;
mod engine;
mod full;
mod params;

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use collapsed::{CollapsedWalkState, COLLAPSED_MAX_POINTS, COLLAPSED_MAX_STATES};
pub use engine::{Side, Space};
pub use full::{side_dimension, FullWalkState, FULL_MAX_SIDE, FULL_MAX_STATES};
pub use params::{inner_steps, walk_params, walk_params_scaled, WalkParams};

use super::{sample_index, QueryLedger};
use crate::claw::{concat_multi, find_claws_sorted, ClawProblem};
use crate::{Error, Result};
use engine::{JointState, Marks, SideOps};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum WalkMode {
    /// Every `(S1, z1, S2, z2)` basis state.
    Full,
    /// Orbits under permutations that fix the claw points.
    #[default]
    Collapsed,
}

#[derive(Clone, Debug)]
pub struct WalkInstance {
    problem: ClawProblem,
    params: WalkParams,
    mode: WalkMode,
    seed: u64,
    excluded: BTreeSet<(u32, u32)>,
}

impl WalkInstance {
    /// Instance with parameters from [`walk_params`] for `m = n = N`.
    pub fn new(problem: ClawProblem, mode: WalkMode, seed: u64) -> Result<Self> {
        let n = problem.domain_size();
        let params = walk_params(n, n)?;
        WalkInstance::with_params(problem, params, mode, seed)
    }

    pub fn with_params(problem: ClawProblem, params: WalkParams, mode: WalkMode, seed: u64) -> Result<Self> {
        let n = problem.domain_size();
        if params.m != n || params.n != n {
            return Err(Error::param("walk parameters do not match the claw problem"));
        }
        for r in [params.r1, params.r2] {
            if r == 0 || r >= n {
                return Err(Error::param(alloc::format!(
                    "subset size {r} cannot be simulated on a side of {n}: need 1 <= r < N"
                )));
            }
        }
        Ok(WalkInstance {
            problem,
            params,
            mode,
            seed,
            excluded: BTreeSet::new(),
        })
    }

    /// Claws the phase flip ignores, e.g. candidates already rejected.
    pub fn with_excluded(mut self, excluded: impl IntoIterator<Item = (u32, u32)>) -> Self {
        self.excluded = excluded.into_iter().collect();
        self
    }

    pub fn params(&self) -> &WalkParams {
        &self.params
    }

    pub fn mode(&self) -> WalkMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn problem(&self) -> &ClawProblem {
        &self.problem
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkOutcome {
    Claw(u32, u32),
    Reject,
}

#[derive(Clone, Debug)]
pub struct WalkRun {
    pub params: WalkParams,
    pub mode: WalkMode,
    /// Probability that the measured `(S1, S2)` holds a marked claw.
    pub success_prob: f64,
    /// The same probability for the initial uniform state.
    pub baseline_prob: f64,
    /// One measurement under the instance seed.
    pub outcome: WalkOutcome,
    pub ledger: QueryLedger,
    pub max_norm_drift: f64,
}

/// Claws of the combined function on cross pairs, by direct comparison of
/// `F(0 || x1)` and `F(1 || x2)`.
fn cross_claws(problem: &ClawProblem) -> Vec<(u32, u32)> {
    let f = concat_multi(problem);
    let left: Vec<u64> = f.j1().map(|j| f.eval(j)).collect();
    let right: Vec<u64> = f.j2().map(|j| f.eval(j)).collect();
    let mut out = Vec::new();
    for (x1, a) in left.iter().enumerate() {
        for (x2, b) in right.iter().enumerate() {
            if a == b {
                out.push((x1 as u32, x2 as u32));
            }
        }
    }
    out
}

/// Evolved state plus what is needed to read out a claw.
struct Evolved {
    sides: [SideOps; 2],
    marks: Marks,
    state: JointState,
    /// Domain point of each marking-alphabet position, per side.
    alphabet: [Vec<u32>; 2],
    /// Marked claws as alphabet positions, ascending by domain points.
    claws: Vec<(u32, u32)>,
    baseline: f64,
}

fn prepare(inst: &WalkInstance) -> Result<Evolved> {
    let n = inst.problem.domain_size();
    let p = &inst.params;
    match inst.mode {
        WalkMode::Full => {
            let claws: Vec<(u32, u32)> = cross_claws(&inst.problem)
                .into_iter()
                .filter(|c| !inst.excluded.contains(c))
                .collect();
            let st = FullWalkState::new(n, p.r1, p.r2, &claws)?;
            let (sides, marks, state) = st.into_parts();
            let baseline = state.marked_probability(&marks);
            let points: Vec<u32> = (0..n as u32).collect();
            Ok(Evolved {
                sides,
                marks,
                state,
                alphabet: [points.clone(), points],
                claws,
                baseline,
            })
        }
        WalkMode::Collapsed => {
            let mut claws: Vec<(u32, u32)> = find_claws_sorted(&inst.problem)?
                .claws
                .into_iter()
                .filter(|c| !inst.excluded.contains(c))
                .collect();
            claws.sort_unstable();
            let a1: Vec<u32> = claws.iter().map(|c| c.0).collect::<BTreeSet<_>>().into_iter().collect();
            let a2: Vec<u32> = claws.iter().map(|c| c.1).collect::<BTreeSet<_>>().into_iter().collect();
            let pos = |list: &[u32], x: u32| list.binary_search(&x).expect("participant") as u32;
            let local: Vec<(u32, u32)> = claws.iter().map(|&(x, y)| (pos(&a1, x), pos(&a2, y))).collect();
            let st = CollapsedWalkState::new(n, p.r1, p.r2, (a1.len(), a2.len()), &local)?;
            let (sides, marks, state) = st.into_parts();
            let baseline = state.marked_probability(&marks);
            Ok(Evolved {
                sides,
                marks,
                state,
                alphabet: [a1, a2],
                claws: local,
                baseline,
            })
        }
    }
}

fn evolve(inst: &WalkInstance) -> Result<Evolved> {
    let mut ev = prepare(inst)?;
    let p = inst.params;
    ev.state.ledger.charge((p.r1 + p.r2) as u64);
    for _ in 0..p.outer {
        ev.state.phase_flip(&ev.marks)?;
        for _ in 0..p.t1 {
            ev.state.walk_step(&ev.sides, Side::One)?;
        }
        for _ in 0..p.t2 {
            ev.state.walk_step(&ev.sides, Side::Two)?;
        }
    }
    Ok(ev)
}

/// Measures `(S1, S2)` and returns the smallest marked claw inside it.
fn measure(ev: &Evolved, problem: &ClawProblem, rng: &mut ChaCha8Rng) -> WalkOutcome {
    let k = sample_index(&ev.state.amps, rng);
    let (i, j) = (k / ev.state.d2, k % ev.state.d2);
    let (s1, s2) = (ev.sides[0].keys[i], ev.sides[1].keys[j]);
    let found = ev
        .claws
        .iter()
        .filter(|&&(a, b)| s1 >> a & 1 == 1 && s2 >> b & 1 == 1)
        .map(|&(a, b)| (ev.alphabet[0][a as usize], ev.alphabet[1][b as usize]))
        .find(|&(x1, x2)| problem.is_claw(x1, x2));
    match found {
        Some((x1, x2)) => WalkOutcome::Claw(x1, x2),
        None => WalkOutcome::Reject,
    }
}

pub fn claw_walk_run(inst: &WalkInstance) -> Result<WalkRun> {
    let ev = evolve(inst)?;
    let mut rng = ChaCha8Rng::seed_from_u64(inst.seed);
    let outcome = measure(&ev, &inst.problem, &mut rng);
    Ok(WalkRun {
        params: inst.params,
        mode: inst.mode,
        success_prob: ev.state.marked_probability(&ev.marks),
        baseline_prob: ev.baseline,
        outcome,
        ledger: ev.state.ledger,
        max_norm_drift: ev.state.max_norm_drift,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkConfig {
    pub mode: WalkMode,
    pub seed: u64,
    /// Runs attempted before giving up.
    pub retries: u32,
    pub outer_multiplier: f64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            mode: WalkMode::Collapsed,
            seed: 0,
            retries: 1000,
            outer_multiplier: 1.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WalkSample {
    pub claw: Option<(u32, u32)>,
    pub attempts: u32,
    pub params: WalkParams,
    pub success_prob: f64,
    pub baseline_prob: f64,
    /// Queries over all attempts.
    pub ledger: QueryLedger,
}

/// Runs the walk up to `config.retries` times and returns the first verified
/// claw outside `excluded`. Every attempt is a fresh run of the same
/// deterministic evolution, so the state is evolved once and measured once
/// per attempt, with each attempt charged a full run of queries.
pub fn claw_walk_sample(problem: &ClawProblem, config: &WalkConfig, excluded: &[(u32, u32)]) -> Result<WalkSample> {
    if config.retries == 0 {
        return Err(Error::param("walk retries must be at least 1"));
    }
    let n = problem.domain_size();
    let params = walk_params_scaled(n, n, config.outer_multiplier)?;
    let inst = WalkInstance::with_params(problem.clone(), params, config.mode, config.seed)?
        .with_excluded(excluded.iter().copied());
    let ev = evolve(&inst)?;
    let per_run = ev.state.ledger.queries();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut ledger = QueryLedger::new();
    let mut claw = None;
    let mut attempts = 0;
    while attempts < config.retries {
        attempts += 1;
        ledger.charge(per_run);
        if let WalkOutcome::Claw(x1, x2) = measure(&ev, problem, &mut rng) {
            claw = Some((x1, x2));
            break;
        }
    }
    Ok(WalkSample {
        claw,
        attempts,
        params,
        success_prob: ev.state.marked_probability(&ev.marks),
        baseline_prob: ev.baseline,
        ledger,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planted(n: usize, seed: u64) -> ClawProblem {
        ClawProblem::planted_unique(n, 8, seed).unwrap()
    }

    #[test]
    fn modes_agree_on_planted_claws() {
        for n in [4usize, 6, 8] {
            for seed in 0..3 {
                let p = planted(n, seed);
                let full = claw_walk_run(&WalkInstance::new(p.clone(), WalkMode::Full, 1).unwrap()).unwrap();
                let col = claw_walk_run(&WalkInstance::new(p, WalkMode::Collapsed, 1).unwrap()).unwrap();
                assert!((full.success_prob - col.success_prob).abs() < 1e-10, "n={n}");
                assert!((full.baseline_prob - col.baseline_prob).abs() < 1e-12);
                assert_eq!(full.ledger, col.ledger);
            }
        }
    }

    #[test]
    fn modes_agree_with_several_claws() {
        let p = ClawProblem::from_tables(
            alloc::vec![alloc::vec![1, 2, 3, 1, 9, 9]],
            alloc::vec![alloc::vec![7, 1, 8, 3, 6, 5]],
            4,
        )
        .unwrap();
        let full = claw_walk_run(&WalkInstance::new(p.clone(), WalkMode::Full, 0).unwrap()).unwrap();
        let col = claw_walk_run(&WalkInstance::new(p, WalkMode::Collapsed, 0).unwrap()).unwrap();
        assert!((full.success_prob - col.success_prob).abs() < 1e-10);
    }

    #[test]
    fn ledger_law() {
        let p = planted(8, 2);
        let run = claw_walk_run(&WalkInstance::new(p, WalkMode::Collapsed, 0).unwrap()).unwrap();
        let w = run.params;
        assert_eq!(run.ledger.queries(), 2 * w.r1 as u64 + w.outer * (w.t1 + w.t2) * 2);
    }

    #[test]
    fn claw_free_instance_rejects() {
        let p = ClawProblem::from_tables(
            alloc::vec![alloc::vec![0, 1, 2, 3]],
            alloc::vec![alloc::vec![4, 5, 6, 7]],
            3,
        )
        .unwrap();
        for mode in [WalkMode::Full, WalkMode::Collapsed] {
            let run = claw_walk_run(&WalkInstance::new(p.clone(), mode, 0).unwrap()).unwrap();
            assert_eq!(run.outcome, WalkOutcome::Reject);
            assert_eq!(run.success_prob, 0.0);
        }
        let s = claw_walk_sample(&p, &WalkConfig::default(), &[]).unwrap();
        assert_eq!(s.claw, None);
        assert_eq!(s.attempts, 1000);
    }

    /// Unique-claw walk on a three-class basis per side, built from dense
    /// matrices: `W = P^T D2 P D1` on each side, `psi -> W psi W^T`.
    fn three_class_model(n: usize, r: usize, t: u64, outer: u64) -> (f64, f64) {
        type M = [[f64; 3]; 3];
        fn mul(a: &M, b: &M) -> M {
            let mut c = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
                }
            }
            c
        }
        fn transpose(a: &M) -> M {
            let mut c = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    c[i][j] = a[j][i];
                }
            }
            c
        }
        fn reflect2(v: [f64; 2]) -> M {
            let mut d = [[0.0; 3]; 3];
            for i in 0..2 {
                for j in 0..2 {
                    d[i][j] = 2.0 * v[i] * v[j] - if i == j { 1.0 } else { 0.0 };
                }
            }
            d[2][2] = 1.0;
            d
        }
        let (nf, rf) = (n as f64, r as f64);
        let n0 = nf - 1.0;
        // r-space: (no claw point, z = a), (no claw point, z other), (claw point, z other)
        let s1 = libm::sqrt(nf - rf);
        let d1 = reflect2([1.0 / s1, libm::sqrt(n0 - rf) / s1]);
        // intermediate: (a in S, z = a), (a in S, z other), (a not in S, z other)
        let s2 = libm::sqrt(rf + 1.0);
        let d2 = reflect2([1.0 / s2, libm::sqrt(rf) / s2]);
        let mut p = [[0.0; 3]; 3];
        p[0][0] = 1.0;
        p[2][1] = 1.0;
        p[1][2] = 1.0;
        let step = mul(&transpose(&p), &mul(&d2, &mul(&p, &d1)));
        let mut w = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        for _ in 0..t {
            w = mul(&step, &w);
        }
        // orbit weights C(N-1, r), C(N-1, r) (N-1-r), C(N-1, r-1) (N-r) over C(N, r) (N-r)
        let a = [1.0 / nf, (n0 - rf) / nf, rf / nf].map(libm::sqrt);
        let mut psi = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                psi[i][j] = a[i] * a[j];
            }
        }
        let wt = transpose(&w);
        for _ in 0..outer {
            psi[2][2] = -psi[2][2];
            psi = mul(&w, &mul(&psi, &wt));
        }
        (psi[2][2] * psi[2][2], a[2] * a[2] * a[2] * a[2])
    }

    #[test]
    fn unique_claw_matches_three_class_model() {
        for n in [8usize, 16, 64, 256] {
            let w = walk_params(n, n).unwrap();
            let (succ, base) = three_class_model(n, w.r1, w.t1, w.outer);
            let p = ClawProblem::planted_unique(n, 20, 3).unwrap();
            let run = claw_walk_run(&WalkInstance::new(p, WalkMode::Collapsed, 0).unwrap()).unwrap();
            assert!((run.success_prob - succ).abs() < 1e-10, "n={n}");
            assert!((run.baseline_prob - base).abs() < 1e-12, "n={n}");
        }
        let run = claw_walk_run(&WalkInstance::new(planted(64, 1), WalkMode::Collapsed, 0).unwrap()).unwrap();
        assert!((run.success_prob - 0.0399172334375).abs() < 1e-12);
    }

    #[test]
    fn sampled_claws_are_real_and_reproducible() {
        let p = ClawProblem::planted_unique(256, 20, 9).unwrap();
        let truth = crate::claw::find_claws_exhaustive(&p).unwrap()[0];
        let cfg = WalkConfig {
            seed: 4,
            ..WalkConfig::default()
        };
        let a = claw_walk_sample(&p, &cfg, &[]).unwrap();
        let b = claw_walk_sample(&p, &cfg, &[]).unwrap();
        assert_eq!(a.claw, Some(truth));
        assert_eq!(a.claw, b.claw);
        assert_eq!(a.attempts, b.attempts);
        assert_eq!(a.ledger.queries(), a.attempts as u64 * a.params.queries());
        let none = claw_walk_sample(&p, &cfg, &[truth]).unwrap();
        assert_eq!(none.claw, None);
        assert_eq!(none.attempts, cfg.retries);
    }

    #[test]
    fn subset_size_must_leave_room_for_z() {
        let p = planted(4, 0);
        let mut w = walk_params(4, 4).unwrap();
        w.r1 = 4;
        assert!(WalkInstance::with_params(p, w, WalkMode::Full, 0).is_err());
    }
}
