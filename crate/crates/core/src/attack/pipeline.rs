//! Staged key recovery: claw for `(K2', K6)`, then `K5`, `K4`, `K1 ^ K3`
//! and finally `K1` from a pair off the chosen-plaintext rule.
//!
//! Candidates are explored depth first. A candidate that dies at a later
//! stage sends the search back to the next candidate of the earlier stage.
//! Classical backends enumerate every consistent key set; quantum backends
//! stop at the first set that re-encrypts every supplied pair.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::pairs::ChosenPairSet;
use super::predicates::{c_star_raw, k3_literal_raw, k4_raw, k5_raw, raw_pairs, Raw};
use crate::cipher::{encrypt_raw, FeistelSpec, SubkeySet};
use crate::claw::{find_claws_exhaustive, find_claws_sorted, ClawProblem};
use crate::quantum::{claw_walk_sample, grover_search_unknown, WalkConfig};
use crate::{Error, Result, Word};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClawBackend {
    /// Pairwise census, up to 12-bit words.
    Exhaustive,
    /// Sort-and-match.
    Sorted,
    /// Simulated quantum walk, one claw per sampling round.
    Walk(WalkConfig),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchBackend {
    Exhaustive,
    /// Simulated Grover search with an unknown marked count; a stage gives
    /// up after `retries` misses at the full iteration bound.
    Grover {
        seed: u64,
        retries: u32,
    },
}

impl SearchBackend {
    pub fn grover(seed: u64) -> Self {
        SearchBackend::Grover { seed, retries: 5 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AttackConfig {
    pub claw: ClawBackend,
    pub search: SearchBackend,
    /// Also sweep the literal `K3` difference check and record how many
    /// values pass it. The result never prunes the search.
    pub literal_k3_stage: bool,
}

impl AttackConfig {
    pub fn classical() -> Self {
        AttackConfig {
            claw: ClawBackend::Sorted,
            search: SearchBackend::Exhaustive,
            literal_k3_stage: false,
        }
    }

    pub fn exhaustive() -> Self {
        AttackConfig {
            claw: ClawBackend::Exhaustive,
            ..AttackConfig::classical()
        }
    }

    pub fn grover(seed: u64) -> Self {
        AttackConfig {
            claw: ClawBackend::Sorted,
            search: SearchBackend::grover(seed),
            literal_k3_stage: false,
        }
    }

    pub fn walk(walk: WalkConfig, seed: u64) -> Self {
        AttackConfig {
            claw: ClawBackend::Walk(walk),
            search: SearchBackend::grover(seed),
            literal_k3_stage: false,
        }
    }

    fn stops_at_first(&self) -> bool {
        matches!(self.claw, ClawBackend::Walk(_)) || matches!(self.search, SearchBackend::Grover { .. })
    }
}

impl Default for AttackConfig {
    fn default() -> Self {
        AttackConfig::classical()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uniqueness {
    /// One full subkey set fits every pair.
    Unique,
    /// The backend stopped at the first verified keys.
    FirstFound,
    /// Without a pair off the rule, `K1` is free: every `K1` with the
    /// matching `K2` and `K3` encrypts the rule pairs identically.
    EquivalenceFamily,
    /// This many distinct candidates survive; for key families the count is
    /// of families.
    Ambiguous(usize),
}

/// Per-stage effort, summed over every branch the search visited.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub name: &'static str,
    pub backend: &'static str,
    pub quantum_queries: u64,
    pub classical_evals: u64,
    /// Searches, walk rounds or measurements started.
    pub attempts: u64,
    /// Candidates that passed the stage.
    pub survivors: u64,
    /// Stage output on the reported solution.
    pub value: Option<Word>,
}

impl StageRecord {
    fn new(name: &'static str, backend: &'static str) -> Self {
        StageRecord {
            name,
            backend,
            quantum_queries: 0,
            classical_evals: 0,
            attempts: 0,
            survivors: 0,
            value: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredKeys {
    pub subkeys: SubkeySet,
    pub k2_prime: Word,
    pub k1_xor_k3: Word,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkStats {
    pub rounds: u64,
    pub measurements: u64,
    pub success_prob: f64,
    pub baseline_prob: f64,
}

#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub keys: RecoveredKeys,
    pub uniqueness: Uniqueness,
    /// Every verified key set found; one for quantum backends.
    pub solutions: Vec<RecoveredKeys>,
    pub stages: Vec<StageRecord>,
    pub claws_examined: u64,
    pub data_pairs: usize,
    /// Values passing the literal `K3` check on the reported path, when the
    /// stage was enabled.
    pub literal_k3_survivors: Option<u64>,
    pub walk: Option<WalkStats>,
}

impl AttackOutcome {
    pub fn quantum_queries(&self) -> u64 {
        self.stages.iter().map(|s| s.quantum_queries).sum()
    }

    pub fn classical_evals(&self) -> u64 {
        self.stages.iter().map(|s| s.classical_evals).sum()
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }
}

const CLAW: usize = 0;
const K5: usize = 1;
const K4: usize = 2;
const CSTAR: usize = 3;
const K3L: usize = 4;
const K1: usize = 5;
const VERIFY: usize = 6;

struct Runner<'a> {
    spec: &'a FeistelSpec,
    set: &'a ChosenPairSet,
    raw: [Raw; 3],
    cfg: AttackConfig,
    rng: ChaCha8Rng,
    stages: [StageRecord; 7],
    solutions: Vec<(RecoveredKeys, Option<u64>)>,
    stop_first: bool,
    claws_examined: u64,
}

impl Runner<'_> {
    fn n(&self) -> usize {
        self.spec.domain_size()
    }

    fn word(&self, v: u16) -> Word {
        Word::new(v as u32, self.spec.word_width()).expect("masked value")
    }

    /// Runs one search stage over `marked` (the values passing the stage
    /// predicate) and hands each verified candidate to `visit` until it
    /// returns `true`.
    fn search(
        &mut self,
        stage: usize,
        marked: Vec<u16>,
        visit: &mut dyn FnMut(&mut Self, u16) -> Result<bool>,
    ) -> Result<bool> {
        let n = self.n();
        self.stages[stage].attempts += 1;
        match self.cfg.search {
            SearchBackend::Exhaustive => {
                self.stages[stage].classical_evals += n as u64;
                self.stages[stage].survivors += marked.len() as u64;
                for x in marked {
                    if visit(self, x)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            SearchBackend::Grover { retries, .. } => {
                let mut live: BTreeSet<u16> = marked.into_iter().collect();
                loop {
                    let list: Vec<usize> = live.iter().map(|&x| x as usize).collect();
                    let s = grover_search_unknown(n, &list, retries, &mut self.rng)?;
                    let rec = &mut self.stages[stage];
                    rec.quantum_queries += s.ledger.queries();
                    rec.classical_evals += s.measurements as u64;
                    let hit = s.index.map(|i| i as u16);
                    let Some(x) = hit else {
                        return Ok(false);
                    };
                    self.stages[stage].survivors += 1;
                    if visit(self, x)? {
                        return Ok(true);
                    }
                    live.remove(&x);
                }
            }
        }
    }

    fn claw_stage(&mut self, problem: &ClawProblem) -> Result<bool> {
        match self.cfg.claw {
            ClawBackend::Exhaustive | ClawBackend::Sorted => {
                let claws = if self.cfg.claw == ClawBackend::Exhaustive {
                    let c = find_claws_exhaustive(problem)?;
                    self.stages[CLAW].classical_evals += 2 * self.n() as u64;
                    c
                } else {
                    let s = find_claws_sorted(problem)?;
                    self.stages[CLAW].classical_evals += s.evaluations;
                    s.claws
                };
                self.stages[CLAW].attempts += 1;
                self.stages[CLAW].survivors += claws.len() as u64;
                for (k2p, k6) in claws {
                    if self.after_claw(k2p as u16, k6 as u16)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            ClawBackend::Walk(_) => unreachable!("walk claws are driven by run_walk"),
        }
    }

    fn run_walk(&mut self, problem: &ClawProblem, walk: WalkConfig, stats: &mut WalkStats) -> Result<bool> {
        let mut excluded = Vec::new();
        loop {
            let cfg = WalkConfig {
                seed: walk.seed.wrapping_add(stats.rounds),
                ..walk
            };
            let s = claw_walk_sample(problem, &cfg, &excluded)?;
            stats.rounds += 1;
            stats.measurements += s.attempts as u64;
            if stats.rounds == 1 {
                stats.success_prob = s.success_prob;
                stats.baseline_prob = s.baseline_prob;
            }
            let rec = &mut self.stages[CLAW];
            rec.attempts += s.attempts as u64;
            rec.quantum_queries += s.ledger.queries();
            rec.classical_evals += s.attempts as u64;
            let Some((k2p, k6)) = s.claw else {
                return Ok(false);
            };
            rec.survivors += 1;
            if self.after_claw(k2p as u16, k6 as u16)? {
                return Ok(true);
            }
            excluded.push((k2p, k6));
        }
    }

    fn after_claw(&mut self, k2p: u16, k6: u16) -> Result<bool> {
        self.claws_examined += 1;
        let [a, b, c] = self.raw;
        let spec = self.spec;
        let marked: Vec<u16> = (0..=self.spec.mask())
            .filter(|&k5| k5_raw(spec, a, b, k5, k6) && k5_raw(spec, a, c, k5, k6))
            .collect();
        self.search(K5, marked, &mut |r, k5| r.after_k5(k2p, k5, k6))
    }

    fn after_k5(&mut self, k2p: u16, k5: u16, k6: u16) -> Result<bool> {
        let [a, b, c] = self.raw;
        let spec = self.spec;
        let marked: Vec<u16> = (0..=self.spec.mask())
            .filter(|&k4| k4_raw(spec, a, b, k4, k5, k6) && k4_raw(spec, a, c, k4, k5, k6))
            .collect();
        self.search(K4, marked, &mut |r, k4| r.after_k4(k2p, k4, k5, k6))
    }

    fn after_k4(&mut self, k2p: u16, k4: u16, k5: u16, k6: u16) -> Result<bool> {
        let spec = self.spec;
        let c = self.set.constant_c().value();
        let vals = self.raw.map(|p| c_star_raw(spec, p, c, k2p, k5, k6));
        let rec = &mut self.stages[CSTAR];
        rec.attempts += 1;
        rec.classical_evals += 3;
        if vals.iter().any(|&v| v != vals[0]) {
            return Ok(false);
        }
        rec.survivors += 1;
        let cs = vals[0];

        let k3_survivors = if self.cfg.literal_k3_stage {
            let [a, b, c3] = self.raw;
            let count = (0..=self.spec.mask())
                .filter(|&k3| {
                    k3_literal_raw(spec, a, b, [k3, k4, k5, k6]) && k3_literal_raw(spec, a, c3, [k3, k4, k5, k6])
                })
                .count() as u64;
            let n = self.n() as u64;
            let rec = &mut self.stages[K3L];
            rec.attempts += 1;
            rec.classical_evals += n;
            rec.survivors += count;
            Some(count)
        } else {
            None
        };

        let keys_for = |k1: u16| -> [u16; 6] {
            let k2 = spec.f(2, k1 ^ c) ^ k2p;
            [k1, k2, cs ^ k1, k4, k5, k6]
        };
        let extras = self.set.extras();
        if extras.is_empty() {
            self.stages[K1].attempts += 1;
            self.stages[K1].survivors += 1;
            return self.verify(keys_for(0), k2p, cs, k3_survivors);
        }
        let marked: Vec<u16> = (0..=self.spec.mask())
            .filter(|&k1| {
                let keys = keys_for(k1);
                extras.iter().all(|e| {
                    let (l, r) = e.plaintext.halves();
                    encrypt_raw(spec, &keys, l, r) == e.ciphertext.halves()
                })
            })
            .collect();
        self.search(K1, marked, &mut |r, k1| r.verify(keys_for(k1), k2p, cs, k3_survivors))
    }

    fn verify(&mut self, keys: [u16; 6], k2p: u16, cs: u16, k3p: Option<u64>) -> Result<bool> {
        let pairs = self.set.all_pairs();
        let rec = &mut self.stages[VERIFY];
        rec.attempts += 1;
        rec.classical_evals += pairs.len() as u64;
        let ok = pairs.iter().all(|p| {
            let (l, r) = p.plaintext.halves();
            encrypt_raw(self.spec, &keys, l, r) == p.ciphertext.halves()
        });
        if !ok {
            return Ok(false);
        }
        rec.survivors += 1;
        let rk = RecoveredKeys {
            subkeys: SubkeySet::from_raw(&keys, self.spec.word_width())?,
            k2_prime: self.word(k2p),
            k1_xor_k3: self.word(cs),
        };
        self.solutions.push((rk, k3p));
        Ok(self.stop_first)
    }
}

/// Recovers all six subkeys of the 6-round target from a chosen pair set.
pub fn run_asr_attack(set: &ChosenPairSet, spec: &FeistelSpec, cfg: &AttackConfig) -> Result<AttackOutcome> {
    if spec.rounds() != 6 {
        return Err(Error::param("the attack targets exactly 6 rounds"));
    }
    set.constant_c().check_width(spec.word_width())?;
    let problem = super::build_claw_problem(set, spec)?;
    let search_name = match cfg.search {
        SearchBackend::Exhaustive => "exhaustive",
        SearchBackend::Grover { .. } => "grover",
    };
    let claw_name = match cfg.claw {
        ClawBackend::Exhaustive => "exhaustive",
        ClawBackend::Sorted => "sorted",
        ClawBackend::Walk(_) => "walk",
    };
    let seed = match cfg.search {
        SearchBackend::Grover { seed, retries } => {
            if retries == 0 {
                return Err(Error::param("grover retries must be at least 1"));
            }
            seed
        }
        SearchBackend::Exhaustive => 0,
    };
    let k1_name = if set.extras().is_empty() { "family" } else { search_name };
    let mut r = Runner {
        spec,
        set,
        raw: raw_pairs(set),
        cfg: *cfg,
        rng: ChaCha8Rng::seed_from_u64(seed),
        stages: [
            StageRecord::new("claw", claw_name),
            StageRecord::new("k5", search_name),
            StageRecord::new("k4", search_name),
            StageRecord::new("k1^k3", "direct"),
            StageRecord::new("k3-literal", "exhaustive"),
            StageRecord::new("k1", k1_name),
            StageRecord::new("verify", "direct"),
        ],
        solutions: Vec::new(),
        stop_first: cfg.stops_at_first(),
        claws_examined: 0,
    };
    let mut walk = None;
    match cfg.claw {
        ClawBackend::Walk(w) => {
            let mut stats = WalkStats {
                rounds: 0,
                measurements: 0,
                success_prob: 0.0,
                baseline_prob: 0.0,
            };
            r.run_walk(&problem, w, &mut stats)?;
            walk = Some(stats);
        }
        _ => {
            r.claw_stage(&problem)?;
        }
    }

    if r.solutions.is_empty() {
        if r.claws_examined == 0 {
            return Err(Error::ClawAbsent);
        }
        return Err(Error::SearchExhausted {
            stage: "verify",
            attempts: r.claws_examined as u32,
        });
    }
    let n = r.solutions.len();
    let uniqueness = match (n, set.extras().is_empty()) {
        _ if r.stop_first => Uniqueness::FirstFound,
        (1, false) => Uniqueness::Unique,
        (1, true) => Uniqueness::EquivalenceFamily,
        (n, _) => Uniqueness::Ambiguous(n),
    };
    let (keys, literal_k3_survivors) = r.solutions[0].clone();
    let k = keys.subkeys.raw();
    let w = spec.word_width();
    let word = |v: u16| Word::new(v as u32, w).ok();
    r.stages[CLAW].value = word(keys.k2_prime.value());
    r.stages[K5].value = word(k[4]);
    r.stages[K4].value = word(k[3]);
    r.stages[CSTAR].value = Some(keys.k1_xor_k3);
    r.stages[K1].value = word(k[0]);
    let mut stages: Vec<StageRecord> = r.stages.into_iter().collect();
    if !cfg.literal_k3_stage {
        stages.retain(|s| s.name != "k3-literal");
    }
    Ok(AttackOutcome {
        keys,
        uniqueness,
        solutions: r.solutions.into_iter().map(|s| s.0).collect(),
        stages,
        claws_examined: r.claws_examined,
        data_pairs: set.data_complexity(),
        literal_k3_survivors,
        walk,
    })
}

#[cfg(test)]
mod tests {
    use super::super::pairs::AttackInstance;
    use super::*;

    #[test]
    fn classical_recovers_random_instances() {
        for w in [4u32, 6, 8] {
            for seed in 0..10 {
                let spec = FeistelSpec::random_tables(w, 6, seed).unwrap();
                let inst = AttackInstance::generate(&spec, seed, None, 1).unwrap();
                let out = run_asr_attack(&inst.set, &spec, &AttackConfig::classical()).unwrap();
                assert!(
                    out.solutions.iter().any(|s| s.subkeys == inst.keys),
                    "w={w} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn exhaustive_and_sorted_agree() {
        let spec = FeistelSpec::simeck(8, 6).unwrap();
        for seed in 0..5 {
            let inst = AttackInstance::generate(&spec, seed, None, 1).unwrap();
            let a = run_asr_attack(&inst.set, &spec, &AttackConfig::classical()).unwrap();
            let b = run_asr_attack(&inst.set, &spec, &AttackConfig::exhaustive()).unwrap();
            assert_eq!(a.solutions, b.solutions);
        }
    }

    #[test]
    fn missing_extra_pair_gives_family() {
        let spec = FeistelSpec::random_tables(8, 6, 7).unwrap();
        let inst = AttackInstance::generate(&spec, 7, None, 0).unwrap();
        let out = run_asr_attack(&inst.set, &spec, &AttackConfig::classical()).unwrap();
        assert!(out
            .solutions
            .iter()
            .any(|s| s.subkeys.raw()[3..] == inst.keys.raw()[3..]));
        assert_eq!(out.keys.subkeys.raw()[0], 0);
        assert!(matches!(
            out.uniqueness,
            Uniqueness::EquivalenceFamily | Uniqueness::Ambiguous(_)
        ));
        assert_eq!(out.stage("k1").unwrap().backend, "family");
    }

    #[test]
    fn grover_finds_verified_keys() {
        let spec = FeistelSpec::simeck(8, 6).unwrap();
        let inst = AttackInstance::generate(&spec, 11, None, 1).unwrap();
        let out = run_asr_attack(&inst.set, &spec, &AttackConfig::grover(3)).unwrap();
        assert_eq!(out.solutions.len(), 1);
        assert!(out.quantum_queries() > 0);
        for p in inst.set.all_pairs() {
            let (l, r) = p.plaintext.halves();
            assert_eq!(encrypt_raw(&spec, &out.keys.subkeys.raw(), l, r), p.ciphertext.halves());
        }
    }

    #[test]
    fn corrupted_ciphertext_is_rejected() {
        let spec = FeistelSpec::random_tables(8, 6, 2).unwrap();
        let inst = AttackInstance::generate(&spec, 2, None, 1).unwrap();
        let mut pairs = *inst.set.pairs();
        let (l, r) = pairs[1].ciphertext.halves();
        pairs[1].ciphertext = crate::Block::from_raw(l as u32 ^ 1, r as u32, 8).unwrap();
        let bad = ChosenPairSet::new(inst.set.constant_c(), pairs, inst.set.extras().to_vec(), &spec).unwrap();
        match run_asr_attack(&bad, &spec, &AttackConfig::classical()) {
            Err(Error::ClawAbsent | Error::SearchExhausted { .. }) => {}
            Ok(out) => assert!(out.solutions.iter().all(|s| s.subkeys != inst.keys)),
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}
