//! `selftest`: fast end-to-end smoke checks.

use asr_core::attack::{run_asr_attack, AttackConfig, AttackInstance};
use asr_core::cipher::{encrypt_raw, FeistelSpec, MasterKey};
use asr_core::claw::{find_claws_exhaustive, find_claws_sorted, ClawProblem};
use asr_core::quantum::{claw_walk_run, grover_run_statevector, GroverInstance, WalkInstance, WalkMode};
use asr_core::schedule::{key_schedule, simeck_key_schedule, ZSequence};

use crate::error::CliResult;
use crate::vectors::{MASTER, PRINTED_CIPHERTEXTS, PRINTED_PLAINTEXTS, PRINTED_SUBKEYS};

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> CliResult<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

pub fn run_selftest() -> Vec<Check> {
    vec![
        check("simeck32-reference", || {
            let spec = FeistelSpec::simeck32();
            let mk = MasterKey::from_raw([0x0100, 0x0908, 0x1110, 0x1918], 16)?;
            let ks = simeck_key_schedule(&mk, 32, &spec)?;
            let c = encrypt_raw(&spec.with_rounds(32)?, &ks.raw(), 0x6565, 0x6877);
            Ok((c == (0x770D, 0x2C76), format!("{:04X}|{:04X}", c.0, c.1)))
        }),
        check("worked-example-row-1", || {
            let spec = FeistelSpec::simeck32();
            let ks = key_schedule(&MasterKey::from_raw(MASTER, 16)?, 6, &spec, ZSequence::ConstantOnly)?;
            let (l, r) = PRINTED_PLAINTEXTS[0];
            let c = encrypt_raw(&spec, &ks.raw(), l, r);
            Ok((
                ks.raw() == PRINTED_SUBKEYS && c == PRINTED_CIPHERTEXTS[0],
                format!("{:04X}|{:04X}", c.0, c.1),
            ))
        }),
        check("grover-n4", || {
            let run = grover_run_statevector(&GroverInstance::new(4, vec![3], 1, 0)?)?;
            Ok((
                (run.marked_probability - 1.0).abs() < 1e-15,
                format!("{}", run.marked_probability),
            ))
        }),
        check("walk-full-vs-collapsed", || {
            let p = ClawProblem::planted_unique(6, 8, 1)?;
            let full = claw_walk_run(&WalkInstance::new(p.clone(), WalkMode::Full, 0)?)?;
            let col = claw_walk_run(&WalkInstance::new(p, WalkMode::Collapsed, 0)?)?;
            let d = (full.success_prob - col.success_prob).abs();
            Ok((d < 1e-10, format!("diff {d:e}")))
        }),
        check("claw-finders-agree", || {
            let p = ClawProblem::random(16, 3, 2, 5)?;
            let mut a = find_claws_exhaustive(&p)?;
            let mut b = find_claws_sorted(&p)?.claws;
            a.sort_unstable();
            b.sort_unstable();
            Ok((a == b, format!("{} claws", a.len())))
        }),
        check("toy-attack", || {
            let spec = FeistelSpec::simeck(8, 6)?;
            let inst = AttackInstance::generate(&spec, 1, None, 1)?;
            let out = run_asr_attack(&inst.set, &spec, &AttackConfig::classical())?;
            let found = out.solutions.iter().any(|s| s.subkeys == inst.keys);
            Ok((found, format!("{} solution(s)", out.solutions.len())))
        }),
    ]
}

#[cfg(test)]
mod tests {
    #[test]
    fn selftest_passes() {
        for c in super::run_selftest() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
