//! Difference functions and subkey checks.
//!
//! Decryption states are written from the ciphertext `(L7, R7)` backwards:
//! `R6 = L7 ^ F6(R7) ^ k6`, `R5 = R7 ^ F5(R6) ^ k5`,
//! `R4 = R6 ^ F4(R5) ^ k4`, `R3 = R5 ^ F3(R4) ^ k3`.
//! For rule plaintexts `L2 = C ^ K1` is shared, so `R3` is the same for all
//! pairs, and `L3 = L1 ^ K2'` with `K2' = F2(K1 ^ C) ^ K2`.

use alloc::sync::Arc;

use super::pairs::ChosenPairSet;
use crate::cipher::FeistelSpec;
use crate::claw::{ClawFunctions, ClawProblem};
use crate::{Error, Result, Word};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Raw {
    pub l1: u16,
    pub l7: u16,
    pub r7: u16,
}

pub(crate) fn raw_pairs(set: &ChosenPairSet) -> [Raw; 3] {
    set.pairs().map(|p| {
        let (l7, r7) = p.ciphertext.halves();
        Raw {
            l1: p.plaintext.halves().0,
            l7,
            r7,
        }
    })
}

pub(crate) fn r6(spec: &FeistelSpec, p: Raw, k6: u16) -> u16 {
    p.l7 ^ spec.f(6, p.r7) ^ k6
}

pub(crate) fn r5(spec: &FeistelSpec, p: Raw, k5: u16, k6: u16) -> u16 {
    p.r7 ^ spec.f(5, r6(spec, p, k6)) ^ k5
}

pub(crate) fn r4(spec: &FeistelSpec, p: Raw, k4: u16, k5: u16, k6: u16) -> u16 {
    r6(spec, p, k6) ^ spec.f(4, r5(spec, p, k5, k6)) ^ k4
}

pub(crate) fn r3(spec: &FeistelSpec, p: Raw, k: [u16; 4]) -> u16 {
    let [k3, k4, k5, k6] = k;
    r5(spec, p, k5, k6) ^ spec.f(3, r4(spec, p, k4, k5, k6)) ^ k3
}

pub(crate) fn f_raw(spec: &FeistelSpec, a: Raw, b: Raw, x: u16) -> u16 {
    spec.f(3, a.l1 ^ x) ^ spec.f(3, b.l1 ^ x)
}

pub(crate) fn g_raw(spec: &FeistelSpec, a: Raw, b: Raw, x: u16) -> u16 {
    let y0 = a.l7 ^ spec.f(6, a.r7) ^ x;
    let yp = b.l7 ^ spec.f(6, b.r7) ^ x;
    a.r7 ^ b.r7 ^ spec.f(5, y0) ^ spec.f(5, yp)
}

pub(crate) fn k5_raw(spec: &FeistelSpec, a: Raw, b: Raw, k5: u16, k6: u16) -> bool {
    let d6 = r6(spec, a, k6) ^ r6(spec, b, k6);
    let f4 = spec.f(4, r5(spec, a, k5, k6)) ^ spec.f(4, r5(spec, b, k5, k6));
    d6 ^ f4 == a.l1 ^ b.l1
}

pub(crate) fn k4_raw(spec: &FeistelSpec, a: Raw, b: Raw, k4: u16, k5: u16, k6: u16) -> bool {
    let d5 = r5(spec, a, k5, k6) ^ r5(spec, b, k5, k6);
    let f3 = spec.f(3, r4(spec, a, k4, k5, k6)) ^ spec.f(3, r4(spec, b, k4, k5, k6));
    d5 ^ f3 == 0
}

pub(crate) fn k3_literal_raw(spec: &FeistelSpec, a: Raw, b: Raw, k: [u16; 4]) -> bool {
    let [_, k4, k5, k6] = k;
    let d4 = r4(spec, a, k4, k5, k6) ^ r4(spec, b, k4, k5, k6);
    let f2 = spec.f(2, r3(spec, a, k)) ^ spec.f(2, r3(spec, b, k));
    d4 ^ f2 == a.l1 ^ b.l1
}

pub(crate) fn c_star_raw(spec: &FeistelSpec, p: Raw, c: u16, k2p: u16, k5: u16, k6: u16) -> u16 {
    r5(spec, p, k5, k6) ^ spec.f(3, p.l1 ^ k2p) ^ c
}

fn checked(set: &ChosenPairSet, spec: &FeistelSpec, pair_idx: usize, words: &[Word]) -> Result<(Raw, Raw)> {
    if !(2..=3).contains(&pair_idx) {
        return Err(Error::param(alloc::format!(
            "difference pair index {pair_idx} outside 2..=3"
        )));
    }
    if set.constant_c().width() != spec.word_width() {
        return Err(Error::WidthMismatch {
            expected: spec.word_width(),
            actual: set.constant_c().width(),
        });
    }
    for w in words {
        w.check_width(spec.word_width())?;
    }
    let raw = raw_pairs(set);
    Ok((raw[0], raw[pair_idx - 1]))
}

/// `F3(L1_1 ^ x) ^ F3(L1_p ^ x)`.
pub fn diff_f(x: Word, set: &ChosenPairSet, pair_idx: usize, spec: &FeistelSpec) -> Result<Word> {
    let (a, b) = checked(set, spec, pair_idx, &[x])?;
    Word::new(f_raw(spec, a, b, x.value()) as u32, spec.word_width())
}

/// `R7_1 ^ R7_p ^ F5(L7_1 ^ F6(R7_1) ^ x) ^ F5(L7_p ^ F6(R7_p) ^ x)`.
pub fn diff_g(x: Word, set: &ChosenPairSet, pair_idx: usize, spec: &FeistelSpec) -> Result<Word> {
    let (a, b) = checked(set, spec, pair_idx, &[x])?;
    Word::new(g_raw(spec, a, b, x.value()) as u32, spec.word_width())
}

/// `dR6 ^ F4(R5_1) ^ F4(R5_p) == dL1` for pairs 1 and `pair_idx`.
pub fn k5_check(k5: Word, k6: Word, set: &ChosenPairSet, pair_idx: usize, spec: &FeistelSpec) -> Result<bool> {
    let (a, b) = checked(set, spec, pair_idx, &[k5, k6])?;
    Ok(k5_raw(spec, a, b, k5.value(), k6.value()))
}

/// `dR5 ^ F3(R4_1) ^ F3(R4_p) == 0`.
pub fn k4_check(
    k4: Word,
    k5: Word,
    k6: Word,
    set: &ChosenPairSet,
    pair_idx: usize,
    spec: &FeistelSpec,
) -> Result<bool> {
    let (a, b) = checked(set, spec, pair_idx, &[k4, k5, k6])?;
    Ok(k4_raw(spec, a, b, k4.value(), k5.value(), k6.value()))
}

/// `dR4 ^ F2(R3_1) ^ F2(R3_p) == dL1`.
///
/// Under correct `k4, k5, k6` the rule pairs share `R3` for every `k3`, so
/// the `F2` terms cancel and the check cannot tell `k3` values apart.
pub fn k3_check_literal(
    k3: Word,
    k4: Word,
    k5: Word,
    k6: Word,
    set: &ChosenPairSet,
    pair_idx: usize,
    spec: &FeistelSpec,
) -> Result<bool> {
    let (a, b) = checked(set, spec, pair_idx, &[k3, k4, k5, k6])?;
    Ok(k3_literal_raw(
        spec,
        a,
        b,
        [k3.value(), k4.value(), k5.value(), k6.value()],
    ))
}

/// `K1 ^ K3`, computed as `R5 ^ F3(L1 ^ K2') ^ C` on every rule pair.
/// Disagreement between pairs means the candidate subkeys are wrong.
pub fn k1k3_constant(set: &ChosenPairSet, k2_prime: Word, k5: Word, k6: Word, spec: &FeistelSpec) -> Result<Word> {
    let (_, _) = checked(set, spec, 2, &[k2_prime, k5, k6])?;
    let c = set.constant_c().value();
    let raw = raw_pairs(set);
    let vals = raw.map(|p| c_star_raw(spec, p, c, k2_prime.value(), k5.value(), k6.value()));
    if vals.iter().any(|&v| v != vals[0]) {
        return Err(Error::Inconsistent(alloc::format!(
            "K1 ^ K3 differs across pairs: {:#x} {:#x} {:#x}",
            vals[0],
            vals[1],
            vals[2]
        )));
    }
    Word::new(vals[0] as u32, spec.word_width())
}

/// `(K2', K3)` from `K1`: `K2 = F2(K1 ^ C) ^ K2'` and `K3 = c* ^ K1`.
pub fn resolve_k2_k3(
    k1: Word,
    c_star: Word,
    k2_prime: Word,
    set: &ChosenPairSet,
    spec: &FeistelSpec,
) -> Result<(Word, Word)> {
    for w in [k1, c_star, k2_prime] {
        w.check_width(spec.word_width())?;
    }
    let c = set.constant_c().value();
    let k2 = spec.f(2, k1.value() ^ c) ^ k2_prime.value();
    let w = spec.word_width();
    Ok((Word::new(k2 as u32, w)?, k1 ^ c_star))
}

struct DiffFunctions {
    spec: FeistelSpec,
    raw: [Raw; 3],
}

impl ClawFunctions for DiffFunctions {
    fn f(&self, eq: usize, x: u32) -> u32 {
        f_raw(&self.spec, self.raw[0], self.raw[eq + 1], x as u16) as u32
    }

    fn g(&self, eq: usize, x: u32) -> u32 {
        g_raw(&self.spec, self.raw[0], self.raw[eq + 1], x as u16) as u32
    }
}

/// Two-equation claw problem `(f_2, f_3)` against `(g_2, g_3)`.
///
/// The correct `(K2', K6)` is always a claw. It need not be the only one:
/// with the quadratic Simeck function whole cosets of spurious claws appear,
/// so the flag for an expected unique claw is left unset.
pub fn build_claw_problem(set: &ChosenPairSet, spec: &FeistelSpec) -> Result<ClawProblem> {
    checked(set, spec, 2, &[])?;
    let funcs = DiffFunctions {
        spec: spec.clone(),
        raw: raw_pairs(set),
    };
    ClawProblem::new(spec.domain_size(), spec.word_width(), 2, Arc::new(funcs))
}

#[cfg(test)]
mod tests {
    use super::super::pairs::AttackInstance;
    use super::*;

    fn word(v: u16, w: u32) -> Word {
        Word::new(v as u32, w).unwrap()
    }

    #[test]
    fn true_keys_satisfy_every_check() {
        for w in [4u32, 8, 16] {
            for seed in 0..10 {
                let spec = if seed % 2 == 0 {
                    FeistelSpec::simeck(w, 6).unwrap()
                } else {
                    FeistelSpec::random_tables(w, 6, seed).unwrap()
                };
                let inst = AttackInstance::generate(&spec, seed, None, 0).unwrap();
                let k = inst.keys.raw();
                let c = inst.set.constant_c().value();
                let k2p = spec.f(2, k[0] ^ c) ^ k[1];
                let (k1, k2p, k3, k4, k5, k6) = (
                    word(k[0], w),
                    word(k2p, w),
                    word(k[2], w),
                    word(k[3], w),
                    word(k[4], w),
                    word(k[5], w),
                );
                let p = build_claw_problem(&inst.set, &spec).unwrap();
                assert!(p.is_claw(k2p.value() as u32, k6.value() as u32));
                for idx in 2..=3 {
                    assert_eq!(
                        diff_f(k2p, &inst.set, idx, &spec).unwrap(),
                        diff_g(k6, &inst.set, idx, &spec).unwrap()
                    );
                    assert!(k5_check(k5, k6, &inst.set, idx, &spec).unwrap());
                    assert!(k4_check(k4, k5, k6, &inst.set, idx, &spec).unwrap());
                    assert!(k3_check_literal(k3, k4, k5, k6, &inst.set, idx, &spec).unwrap());
                }
                let cs = k1k3_constant(&inst.set, k2p, k5, k6, &spec).unwrap();
                assert_eq!(cs, k1 ^ k3);
                let (k2, k3b) = resolve_k2_k3(k1, cs, k2p, &inst.set, &spec).unwrap();
                assert_eq!((k2.value(), k3b), (k[1], k3));
            }
        }
    }

    #[test]
    fn literal_k3_check_ignores_k3() {
        let spec = FeistelSpec::simeck(8, 6).unwrap();
        let inst = AttackInstance::generate(&spec, 3, None, 0).unwrap();
        let k = inst.keys.raw();
        let [a, b, _] = raw_pairs(&inst.set);
        for k3 in 0..256u16 {
            assert!(k3_literal_raw(&spec, a, b, [k3, k[3], k[4], k[5]]));
        }
    }

    #[test]
    fn pair_index_is_validated() {
        let spec = FeistelSpec::simeck(8, 6).unwrap();
        let inst = AttackInstance::generate(&spec, 0, None, 0).unwrap();
        let x = word(1, 8);
        assert!(diff_f(x, &inst.set, 1, &spec).is_err());
        assert!(diff_g(x, &inst.set, 4, &spec).is_err());
        assert!(diff_f(word(1, 4), &inst.set, 2, &spec).is_err());
    }
}
