use asr_core::attack::{
    build_claw_problem, k3_check_literal, run_asr_attack, AttackConfig, AttackInstance, ChosenPairSet, KnownPair,
    Uniqueness,
};
use asr_core::cipher::{encrypt_raw, FeistelSpec};
use asr_core::Word;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRINTED_KEYS: [u16; 6] = [0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3, 0x05A9, 0xFE40];

const EXTRA_PT: [(u16, u16); 2] = [(0x6565, 0x6877), (0x0000, 0x0000)];

fn worked_example(extras: usize) -> (FeistelSpec, ChosenPairSet) {
    let spec = FeistelSpec::simeck32();
    let pt = [(0xCDF5, 0xE8B4), (0xC191, 0x7CDD), (0xD0C4, 0x4EE7)];
    let pair = |p: (u16, u16)| KnownPair::from_raw(p, encrypt_raw(&spec, &PRINTED_KEYS, p.0, p.1), 16).unwrap();
    let extra: Vec<KnownPair> = EXTRA_PT[..extras].iter().map(|&p| pair(p)).collect();
    let set = ChosenPairSet::new(
        Word::new(0xFFEE, 16).unwrap(),
        [pair(pt[0]), pair(pt[1]), pair(pt[2])],
        extra,
        &spec,
    )
    .unwrap();
    (spec, set)
}

#[test]
fn worked_example_classical_recovery() {
    let (spec, set) = worked_example(1);
    assert!(build_claw_problem(&set, &spec).unwrap().is_claw(0x1169, 0xFE40));
    let out = run_asr_attack(&set, &spec, &AttackConfig::classical()).unwrap();
    let truth = out.solutions.iter().find(|s| s.subkeys.raw() == PRINTED_KEYS).unwrap();
    assert_eq!(truth.k2_prime.value(), 0x1169);
    assert_eq!(truth.k1_xor_k3.value(), 0x7360);
    assert_eq!(out.data_pairs, 4);
    assert_eq!(out.stage("claw").unwrap().classical_evals, 2 << 16);
    // one off-rule pair leaves a 2^7 set of keys agreeing on all four pairs
    assert_eq!(out.uniqueness, Uniqueness::Ambiguous(128));
}

#[test]
fn worked_example_second_extra_pair_isolates_keys() {
    let (spec, set) = worked_example(2);
    let out = run_asr_attack(&set, &spec, &AttackConfig::classical()).unwrap();
    assert_eq!(out.uniqueness, Uniqueness::Unique);
    assert_eq!(out.keys.subkeys.raw(), PRINTED_KEYS);
    assert_eq!(out.data_pairs, 5);
}

#[test]
fn worked_example_without_extra_pair_is_ambiguous() {
    let (spec, set) = worked_example(0);
    let out = run_asr_attack(&set, &spec, &AttackConfig::classical()).unwrap();
    assert!(out
        .solutions
        .iter()
        .any(|s| s.subkeys.raw()[3..] == PRINTED_KEYS[3..] && s.k1_xor_k3.value() == 0x7360));
    assert_eq!(out.data_pairs, 3);
    assert!(matches!(out.uniqueness, Uniqueness::Ambiguous(_)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pipeline_recovers_keys_that_reencrypt(
        w in prop_oneof![Just(4u32), Just(8)],
        tables in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let spec = if tables {
            FeistelSpec::random_tables(w, 6, seed).unwrap()
        } else {
            FeistelSpec::simeck(w, 6).unwrap()
        };
        let inst = AttackInstance::generate(&spec, seed, None, 1).unwrap();
        let out = run_asr_attack(&inst.set, &spec, &AttackConfig::classical()).unwrap();
        prop_assert!(out.solutions.iter().any(|s| s.subkeys == inst.keys));
        for s in &out.solutions {
            for p in inst.set.all_pairs() {
                let (l, r) = p.plaintext.halves();
                prop_assert_eq!(encrypt_raw(&spec, &s.subkeys.raw(), l, r), p.ciphertext.halves());
            }
        }
    }
}

#[test]
fn literal_k3_check_is_blind_to_k3() {
    for seed in 0..20 {
        let spec = FeistelSpec::simeck(8, 6).unwrap();
        let inst = AttackInstance::generate(&spec, seed, None, 0).unwrap();
        let k = inst.keys.words();
        for idx in 2..=3 {
            let verdicts: Vec<bool> = (0..256u32)
                .map(|k3| k3_check_literal(Word::new(k3, 8).unwrap(), k[3], k[4], k[5], &inst.set, idx, &spec).unwrap())
                .collect();
            assert!(verdicts.iter().all(|&v| v == verdicts[0]));
        }
    }
}

/// A non-rule plaintext with `c' = F1(L) ^ R` reaches the same round-3
/// state under two family members iff `F2(c' ^ K1) ^ F2(C ^ K1)` agrees on
/// both `K1` values; from there on the rounds coincide.
fn family_trials(spec_of: impl Fn(u64) -> FeistelSpec, trials: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut separated, mut predicted) = (0, 0);
    for t in 0..trials {
        let spec = spec_of(t);
        let inst = AttackInstance::generate(&spec, t, None, 0).unwrap();
        let k = inst.keys.raw();
        let c = inst.set.constant_c().value();
        let k2p = spec.f(2, k[0] ^ c) ^ k[1];
        let mut member = k.clone();
        member[0] = loop {
            let x = rng.gen::<u16>() & 0xFF;
            if x != k[0] {
                break x;
            }
        };
        member[1] = spec.f(2, member[0] ^ c) ^ k2p;
        member[2] = k[0] ^ k[2] ^ member[0];
        for p in inst.set.pairs() {
            let (l, r) = p.plaintext.halves();
            assert_eq!(encrypt_raw(&spec, &member, l, r), p.ciphertext.halves());
        }
        let (l, r) = loop {
            let (l, r) = (rng.gen::<u16>() & 0xFF, rng.gen::<u16>() & 0xFF);
            if spec.f(1, l) ^ r != c {
                break (l, r);
            }
        };
        if encrypt_raw(&spec, &member, l, r) != encrypt_raw(&spec, &k, l, r) {
            separated += 1;
        }
        let cp = spec.f(1, l) ^ r;
        let d = |x: u16| spec.f(2, cp ^ x) ^ spec.f(2, c ^ x);
        if d(k[0]) != d(member[0]) {
            predicted += 1;
        }
    }
    (separated, predicted)
}

#[test]
fn key_family_shares_rule_ciphertexts() {
    let (sep, pred) = family_trials(|_| FeistelSpec::simeck(8, 6).unwrap(), 1000);
    assert_eq!(sep, pred);
    let (sep, pred) = family_trials(|t| FeistelSpec::random_tables(8, 6, t).unwrap(), 1000);
    assert_eq!(sep, pred);
}
