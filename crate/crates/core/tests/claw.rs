use std::collections::BTreeSet;

use asr_core::claw::{concat_multi, find_claws_exhaustive, find_claws_sorted, ClawProblem};
use proptest::prelude::*;

/// Pairs meeting every equation, straight from the definition.
fn simultaneous(p: &ClawProblem) -> BTreeSet<(u32, u32)> {
    let n = p.domain_size() as u32;
    let mut out = BTreeSet::new();
    for x1 in 0..n {
        for x2 in 0..n {
            if (0..p.eq_count()).all(|i| p.f(i, x1) == p.g(i, x2)) {
                out.insert((x1, x2));
            }
        }
    }
    out
}

/// Cross pairs `(j1, j2)` with equal combined outputs.
fn combined_cross(p: &ClawProblem) -> BTreeSet<(u32, u32)> {
    let f = concat_multi(p);
    let mut out = BTreeSet::new();
    for j1 in f.j1() {
        for j2 in f.j2() {
            if f.eval(j1) == f.eval(j2) {
                let (c1, x1) = f.split(j1);
                let (c2, x2) = f.split(j2);
                assert_eq!((c1, c2), (0, 1));
                out.insert((x1, x2));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn combined_function_claws_match_equation_family(
        u in 1u32..=8,
        range_bits in 1u32..=6,
        eqs in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let p = ClawProblem::random(1 << u, range_bits, eqs, seed).unwrap();
        let want = simultaneous(&p);
        prop_assert_eq!(&combined_cross(&p), &want);
        let ex: BTreeSet<_> = find_claws_exhaustive(&p).unwrap().into_iter().collect();
        prop_assert_eq!(&ex, &want);
        let sorted: BTreeSet<_> = find_claws_sorted(&p).unwrap().claws.into_iter().collect();
        prop_assert_eq!(&sorted, &want);
    }
}

#[test]
fn combined_output_width() {
    let p = ClawProblem::random(16, 5, 3, 1).unwrap();
    let f = concat_multi(&p);
    assert_eq!(f.output_bits(), 15);
    for j in f.j1().chain(f.j2()) {
        assert!(f.eval(j) < 1 << 15);
    }
}
