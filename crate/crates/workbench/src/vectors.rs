//! The built-in 6-round Simeck32/64 worked example.
//!
//! Printed values are kept verbatim. Anything that disagrees with the
//! implemented cipher is recomputed and both values are logged as a
//! [`VectorNote`].

use asr_core::attack::{make_chosen_plaintext, ChosenPairSet, KnownPair};
use asr_core::cipher::{encrypt_raw, FeistelSpec, MasterKey, SubkeySet};
use asr_core::schedule::{key_schedule, ZSequence};
use asr_core::Word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::CliResult;

pub const MASTER: [u16; 4] = [0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3];
pub const PRINTED_SUBKEYS: [u16; 6] = [0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3, 0x05A9, 0xFE40];
pub const CONSTANT_C: u16 = 0xFFEE;
pub const PRINTED_PLAINTEXTS: [(u16, u16); 3] = [(0xCDF5, 0xE8B4), (0xC191, 0xFCDD), (0xD0C4, 0x4EE7)];
pub const PRINTED_CIPHERTEXTS: [(u16, u16); 3] = [(0xBE3A, 0x8ECF), (0x79F4, 0x5174), (0xB468, 0xCA34)];
pub const PRINTED_K2_PRIME: u16 = 0x1169;
pub const PRINTED_K1_XOR_K3: u16 = 0x7360;
/// First off-rule plaintext used when extra pairs are requested.
pub const FIRST_EXTRA: (u16, u16) = (0x6565, 0x6877);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorNote {
    pub entry: String,
    pub printed: String,
    pub derived: String,
}

#[derive(Clone, Debug)]
pub struct WorkedExample {
    pub spec: FeistelSpec,
    pub keys: SubkeySet,
    pub set: ChosenPairSet,
    pub notes: Vec<VectorNote>,
}

fn hex(v: u16) -> String {
    format!("{v:04X}")
}

fn block(b: (u16, u16)) -> String {
    format!("{:04X}|{:04X}", b.0, b.1)
}

/// Worked example under `schedule`, with `extras` off-rule known pairs:
/// [`FIRST_EXTRA`] first, then plaintexts drawn from `extra_seed`.
pub fn worked_example(schedule: ZSequence, extras: usize, extra_seed: u64) -> CliResult<WorkedExample> {
    let spec = FeistelSpec::simeck32();
    let mk = MasterKey::from_raw(MASTER, 16)?;
    let keys = key_schedule(&mk, 6, &spec, schedule)?;
    let raw = keys.raw();
    let mut notes = Vec::new();
    for (i, (&got, &printed)) in raw.iter().zip(&PRINTED_SUBKEYS).enumerate() {
        if got != printed {
            notes.push(VectorNote {
                entry: format!("k{}", i + 1),
                printed: hex(printed),
                derived: hex(got),
            });
        }
    }

    let c = Word::new(CONSTANT_C as u32, 16)?;
    let mut pairs = Vec::with_capacity(3);
    for (i, (&p, &ct)) in PRINTED_PLAINTEXTS.iter().zip(&PRINTED_CIPHERTEXTS).enumerate() {
        let fixed = make_chosen_plaintext(Word::new(p.0 as u32, 16)?, c, &spec)?.halves();
        if fixed != p {
            notes.push(VectorNote {
                entry: format!("plaintext {}", i + 1),
                printed: block(p),
                derived: block(fixed),
            });
        }
        let enc = encrypt_raw(&spec, &raw, fixed.0, fixed.1);
        if enc != ct {
            notes.push(VectorNote {
                entry: format!("ciphertext {}", i + 1),
                printed: block(ct),
                derived: block(enc),
            });
        }
        pairs.push(KnownPair::from_raw(fixed, enc, 16)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(extra_seed);
    let mut extra_pts = Vec::with_capacity(extras);
    if extras > 0 {
        extra_pts.push(FIRST_EXTRA);
    }
    while extra_pts.len() < extras {
        let p: (u16, u16) = (rng.gen(), rng.gen());
        if spec.f(1, p.0) ^ p.1 != CONSTANT_C && !extra_pts.contains(&p) {
            extra_pts.push(p);
        }
    }
    let extra_pairs = extra_pts
        .into_iter()
        .map(|p| KnownPair::from_raw(p, encrypt_raw(&spec, &raw, p.0, p.1), 16))
        .collect::<Result<Vec<_>, _>>()?;

    let pairs: [KnownPair; 3] = [pairs[0], pairs[1], pairs[2]];
    let set = ChosenPairSet::new(c, pairs, extra_pairs, &spec)?;
    Ok(WorkedExample { spec, keys, set, notes })
}
