//! `attack run`: validated request, dispatch and JSON report.

use asr_core::attack::{
    run_asr_attack, AttackConfig, AttackInstance, AttackOutcome, ChosenPairSet, RecoveredKeys, SearchBackend,
    StageRecord, Uniqueness,
};
use asr_core::cipher::{encrypt_raw, FeistelSpec, SubkeySet};
use asr_core::quantum::{WalkConfig, WalkMode};
use asr_core::schedule::ZSequence;
use asr_core::Word;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::parse::PairFile;
use crate::vectors::{worked_example, VectorNote};

/// Solutions listed in full; the count is always reported.
pub const LISTED_SOLUTIONS: usize = 256;

#[derive(Clone, Debug)]
pub enum PairSource {
    Worked { schedule: ZSequence, extra_seed: u64 },
    File(PairFile),
    Seeded { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundFn {
    Simeck,
    Tables { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Classical,
    Exhaustive,
    GroverSim,
    WalkSim,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Classical => "classical",
            Backend::Exhaustive => "exhaustive",
            Backend::GroverSim => "grover-sim",
            Backend::WalkSim => "walk-sim",
        }
    }
}

#[derive(Clone, Debug)]
pub struct AttackRequest {
    pub width: u32,
    pub source: PairSource,
    pub backend: Backend,
    pub round_fn: RoundFn,
    /// Off-rule pairs to add; `None` means 0 for the worked example and 1 for
    /// seeded instances.
    pub extras: Option<usize>,
    pub constant: Option<u16>,
    pub literal_k3: bool,
    pub quantum_seed: u64,
    pub walk_mode: WalkMode,
    pub walk_retries: u32,
    pub outer_multiplier: f64,
    pub grover_retries: u32,
}

impl AttackRequest {
    pub fn new(width: u32, source: PairSource, backend: Backend) -> Self {
        let defaults = WalkConfig::default();
        AttackRequest {
            width,
            source,
            backend,
            round_fn: RoundFn::Simeck,
            extras: None,
            constant: None,
            literal_k3: false,
            quantum_seed: 0,
            walk_mode: defaults.mode,
            walk_retries: defaults.retries,
            outer_multiplier: defaults.outer_multiplier,
            grover_retries: 5,
        }
    }

    pub fn validate(&self) -> CliResult<()> {
        match &self.source {
            PairSource::Worked { .. } => {
                if self.width != 16 {
                    return Err(CliError::input("the worked example is defined at width 16"));
                }
                if self.round_fn != RoundFn::Simeck {
                    return Err(CliError::input("the worked example uses the Simeck round function"));
                }
                if self.constant.is_some_and(|c| c != crate::vectors::CONSTANT_C) {
                    return Err(CliError::input("the worked example fixes C = FFEE"));
                }
            }
            PairSource::File(f) => {
                if f.width != self.width {
                    return Err(CliError::input(format!(
                        "pair file is width {} but --width is {}",
                        f.width, self.width
                    )));
                }
                if self.extras.is_some() || self.constant.is_some() {
                    return Err(CliError::input("extra pairs and C come from the pair file"));
                }
            }
            PairSource::Seeded { .. } => {}
        }
        if let Some(c) = self.constant {
            Word::new(c as u32, self.width).map_err(|e| CliError::input(format!("constant C: {e}")))?;
        }
        if !(self.outer_multiplier.is_finite() && self.outer_multiplier > 0.0) {
            return Err(CliError::input("outer multiplier must be positive"));
        }
        if self.walk_retries == 0 || self.grover_retries == 0 {
            return Err(CliError::input("retry bounds must be at least 1"));
        }
        Ok(())
    }

    fn spec(&self) -> CliResult<FeistelSpec> {
        Ok(match self.round_fn {
            RoundFn::Simeck => FeistelSpec::simeck(self.width, 6)?,
            RoundFn::Tables { seed } => FeistelSpec::random_tables(self.width, 6, seed)?,
        })
    }

    fn config(&self) -> AttackConfig {
        let mut cfg = match self.backend {
            Backend::Classical => AttackConfig::classical(),
            Backend::Exhaustive => AttackConfig::exhaustive(),
            Backend::GroverSim => AttackConfig::grover(self.quantum_seed),
            Backend::WalkSim => AttackConfig::walk(
                WalkConfig {
                    mode: self.walk_mode,
                    seed: self.quantum_seed,
                    retries: self.walk_retries,
                    outer_multiplier: self.outer_multiplier,
                },
                self.quantum_seed,
            ),
        };
        if let SearchBackend::Grover { retries, .. } = &mut cfg.search {
            *retries = self.grover_retries;
        }
        cfg.literal_k3_stage = self.literal_k3;
        cfg
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub width: u32,
    pub rounds: usize,
    pub source: &'static str,
    pub seed: Option<u64>,
    pub extra_seed: Option<u64>,
    pub schedule: Option<&'static str>,
    pub round_function: String,
    pub backend: &'static str,
    pub literal_k3: bool,
    pub quantum_seed: Option<u64>,
    pub walk_mode: Option<&'static str>,
    pub walk_retries: Option<u32>,
    pub outer_multiplier: Option<f64>,
    pub grover_retries: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairRow {
    pub role: &'static str,
    pub plaintext: String,
    pub ciphertext: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRow {
    pub name: &'static str,
    pub backend: &'static str,
    pub quantum_queries: u64,
    pub classical_evals: u64,
    pub attempts: u64,
    pub survivors: u64,
    pub value: Option<String>,
}

impl From<&StageRecord> for StageRow {
    fn from(s: &StageRecord) -> Self {
        StageRow {
            name: s.name,
            backend: s.backend,
            quantum_queries: s.quantum_queries,
            classical_evals: s.classical_evals,
            attempts: s.attempts,
            survivors: s.survivors,
            value: s.value.map(|v| v.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KeyRow {
    pub subkeys: Vec<String>,
    pub k2_prime: String,
    pub k1_xor_k3: String,
}

impl From<&RecoveredKeys> for KeyRow {
    fn from(k: &RecoveredKeys) -> Self {
        KeyRow {
            subkeys: k.subkeys.words().iter().map(|w| w.to_string()).collect(),
            k2_prime: k.k2_prime.to_string(),
            k1_xor_k3: k.k1_xor_k3.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WalkRow {
    pub rounds: u64,
    pub measurements: u64,
    pub success_prob: f64,
    pub baseline_prob: f64,
    pub amplification: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectedRow {
    pub subkeys: Vec<String>,
    /// `family` when only rule pairs were supplied: keys agreeing on
    /// `K4..K6`, `K1 ^ K3` and `K2'` count as equal.
    pub compared: &'static str,
    pub recovered_matches: bool,
    pub among_solutions: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AttackReport {
    pub config: ConfigEcho,
    pub constant_c: String,
    pub data_pairs: usize,
    pub pairs: Vec<PairRow>,
    pub vector_notes: Vec<VectorNote>,
    pub stages: Vec<StageRow>,
    pub total_quantum_queries: u64,
    pub total_classical_evals: u64,
    pub claws_examined: u64,
    pub literal_k3_survivors: Option<u64>,
    pub walk: Option<WalkRow>,
    pub uniqueness: &'static str,
    pub solution_count: usize,
    /// Whether every solution was enumerated.
    pub complete: bool,
    pub recovered: KeyRow,
    pub solutions: Vec<KeyRow>,
    pub verified: bool,
    pub expected: Option<ExpectedRow>,
}

impl AttackReport {
    /// Exit status of the run: verification failures map to exit code 2.
    pub fn verdict(&self) -> CliResult<()> {
        if !self.verified {
            return Err(CliError::Verification(
                "recovered keys do not re-encrypt every pair".into(),
            ));
        }
        if let Some(e) = &self.expected {
            if self.complete && !e.among_solutions {
                return Err(CliError::Verification(
                    "the hidden keys are not among the solutions".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Report plus the pair set it was computed from.
#[derive(Clone, Debug)]
pub struct AttackRun {
    pub report: AttackReport,
    pub set: ChosenPairSet,
    pub outcome: AttackOutcome,
}

fn reencrypts(spec: &FeistelSpec, keys: &SubkeySet, set: &ChosenPairSet) -> bool {
    let raw = keys.raw();
    set.all_pairs().iter().all(|p| {
        let (l, r) = p.plaintext.halves();
        encrypt_raw(spec, &raw, l, r) == p.ciphertext.halves()
    })
}

fn same_family(spec: &FeistelSpec, c: u16, a: &[u16], b: &[u16]) -> bool {
    let k2p = |k: &[u16]| spec.f(2, k[0] ^ c) ^ k[1];
    a[3..] == b[3..] && a[0] ^ a[2] == b[0] ^ b[2] && k2p(a) == k2p(b)
}

pub fn run_attack(req: &AttackRequest) -> CliResult<AttackRun> {
    req.validate()?;
    let spec = req.spec()?;
    let (set, truth, notes, source, seed, extra_seed, schedule) = match &req.source {
        PairSource::Worked { schedule, extra_seed } => {
            let ex = worked_example(*schedule, req.extras.unwrap_or(0), *extra_seed)?;
            let name = match schedule {
                ZSequence::ConstantOnly => "constant",
                ZSequence::Simeck => "simeck",
            };
            (
                ex.set,
                Some(ex.keys),
                ex.notes,
                "worked-example",
                None,
                Some(*extra_seed),
                Some(name),
            )
        }
        PairSource::File(f) => (
            f.clone().into_set(&spec)?,
            None,
            Vec::new(),
            "pair-file",
            None,
            None,
            None,
        ),
        PairSource::Seeded { seed } => {
            let c = req.constant.map(|c| Word::new(c as u32, req.width)).transpose()?;
            let inst = AttackInstance::generate(&spec, *seed, c, req.extras.unwrap_or(1))?;
            (inst.set, Some(inst.keys), Vec::new(), "seeded", Some(*seed), None, None)
        }
    };

    let cfg = req.config();
    let outcome = run_asr_attack(&set, &spec, &cfg)?;
    let quantum = matches!(req.backend, Backend::GroverSim | Backend::WalkSim);
    let walk = matches!(req.backend, Backend::WalkSim);
    let config = ConfigEcho {
        width: req.width,
        rounds: 6,
        source,
        seed,
        extra_seed,
        schedule,
        round_function: match req.round_fn {
            RoundFn::Simeck => "simeck".into(),
            RoundFn::Tables { seed } => format!("tables:{seed}"),
        },
        backend: req.backend.name(),
        literal_k3: req.literal_k3,
        quantum_seed: quantum.then_some(req.quantum_seed),
        walk_mode: walk.then_some(match req.walk_mode {
            WalkMode::Full => "full",
            WalkMode::Collapsed => "collapsed",
        }),
        walk_retries: walk.then_some(req.walk_retries),
        outer_multiplier: walk.then_some(req.outer_multiplier),
        grover_retries: quantum.then_some(req.grover_retries),
    };

    let mut pairs: Vec<PairRow> = set
        .pairs()
        .iter()
        .map(|p| PairRow {
            role: "rule",
            plaintext: p.plaintext.to_string(),
            ciphertext: p.ciphertext.to_string(),
        })
        .collect();
    pairs.extend(set.extras().iter().map(|p| PairRow {
        role: "extra",
        plaintext: p.plaintext.to_string(),
        ciphertext: p.ciphertext.to_string(),
    }));

    let verified = outcome.solutions.iter().all(|s| reencrypts(&spec, &s.subkeys, &set));
    let by_family = set.extras().is_empty();
    let c = set.constant_c().value();
    let matches = |a: &SubkeySet, t: &SubkeySet| {
        if by_family {
            same_family(&spec, c, &a.raw(), &t.raw())
        } else {
            a == t
        }
    };
    let expected = truth.map(|t| ExpectedRow {
        subkeys: t.words().iter().map(|w| w.to_string()).collect(),
        compared: if by_family { "family" } else { "keys" },
        recovered_matches: matches(&outcome.keys.subkeys, &t),
        among_solutions: outcome.solutions.iter().any(|s| matches(&s.subkeys, &t)),
    });
    let report = AttackReport {
        config,
        constant_c: set.constant_c().to_string(),
        data_pairs: outcome.data_pairs,
        pairs,
        vector_notes: notes,
        stages: outcome.stages.iter().map(StageRow::from).collect(),
        total_quantum_queries: outcome.quantum_queries(),
        total_classical_evals: outcome.classical_evals(),
        claws_examined: outcome.claws_examined,
        literal_k3_survivors: outcome.literal_k3_survivors,
        walk: outcome.walk.map(|w| WalkRow {
            rounds: w.rounds,
            measurements: w.measurements,
            success_prob: w.success_prob,
            baseline_prob: w.baseline_prob,
            amplification: w.success_prob / w.baseline_prob,
        }),
        uniqueness: match outcome.uniqueness {
            Uniqueness::Unique => "unique",
            Uniqueness::EquivalenceFamily => "equivalence-family",
            Uniqueness::Ambiguous(_) => "ambiguous",
            Uniqueness::FirstFound => "first-found",
        },
        complete: outcome.uniqueness != Uniqueness::FirstFound,
        solution_count: outcome.solutions.len(),
        recovered: KeyRow::from(&outcome.keys),
        solutions: outcome
            .solutions
            .iter()
            .take(LISTED_SOLUTIONS)
            .map(KeyRow::from)
            .collect(),
        verified,
        expected,
    };
    Ok(AttackRun { report, set, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_toy_attack_reports_truth() {
        let req = AttackRequest::new(8, PairSource::Seeded { seed: 7 }, Backend::Classical);
        let run = run_attack(&req).unwrap();
        assert!(run.report.verified);
        assert!(run.report.expected.as_ref().unwrap().among_solutions);
        assert_eq!(run.report.data_pairs, 4);
        run.report.verdict().unwrap();
        let mut req = AttackRequest::new(8, PairSource::Seeded { seed: 7 }, Backend::Classical);
        req.extras = Some(0);
        let run = run_attack(&req).unwrap();
        let e = run.report.expected.as_ref().unwrap();
        assert_eq!(e.compared, "family");
        assert!(e.among_solutions);
    }

    #[test]
    fn validation_rejects_bad_requests() {
        let worked = PairSource::Worked {
            schedule: ZSequence::ConstantOnly,
            extra_seed: 0,
        };
        let req = AttackRequest::new(8, worked.clone(), Backend::Classical);
        assert_eq!(run_attack(&req).unwrap_err().exit_code(), 3);
        let mut req = AttackRequest::new(16, worked, Backend::Classical);
        req.round_fn = RoundFn::Tables { seed: 1 };
        assert_eq!(run_attack(&req).unwrap_err().exit_code(), 3);
        let mut req = AttackRequest::new(8, PairSource::Seeded { seed: 1 }, Backend::WalkSim);
        req.walk_retries = 0;
        assert_eq!(run_attack(&req).unwrap_err().exit_code(), 3);
    }
}
