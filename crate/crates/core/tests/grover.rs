use asr_core::quantum::{grover_iterations, grover_run_statevector, grover_success_prob, GroverInstance};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `sin^2((2R + 1) asin(sqrt(M/N)))`, written out independently.
fn closed_form(n: usize, m: usize, r: u64) -> f64 {
    let theta = ((m as f64) / (n as f64)).sqrt().asin();
    ((2 * r + 1) as f64 * theta).sin().powi(2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statevector_matches_closed_form(bits in 2u32..=12, m in 1usize..=4, seed in any::<u64>(), extra in 0u64..3) {
        let n = 1usize << bits;
        let m = m.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut marked = std::collections::BTreeSet::new();
        while marked.len() < m {
            marked.insert(rng.gen_range(0..n));
        }
        let marked: Vec<usize> = marked.into_iter().collect();
        let r = grover_iterations(n as u64, m as u64).unwrap() + extra;
        let run = grover_run_statevector(&GroverInstance::new(n, marked, r, seed).unwrap()).unwrap();
        prop_assert!((run.marked_probability - closed_form(n, m, r)).abs() < 1e-9);
        prop_assert!((grover_success_prob(n as u64, m as u64, r).unwrap() - closed_form(n, m, r)).abs() < 1e-12);
        prop_assert_eq!(run.ledger.queries(), r);
        prop_assert!(run.max_norm_drift < 1e-12);
    }
}

#[test]
fn four_items_one_iteration_is_certain() {
    let run = grover_run_statevector(&GroverInstance::new(4, vec![1], 1, 0).unwrap()).unwrap();
    assert_eq!(run.marked_probability, 1.0);
}

#[test]
fn norm_holds_on_large_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(1819978565985315515);
    let mut marked = std::collections::BTreeSet::new();
    while marked.len() < 2 {
        marked.insert(rng.gen_range(0..4096));
    }
    let r = grover_iterations(4096, 2).unwrap();
    let inst = GroverInstance::new(4096, marked.into_iter().collect(), r, 0).unwrap();
    assert!(grover_run_statevector(&inst).unwrap().max_norm_drift < 1e-12);
}
