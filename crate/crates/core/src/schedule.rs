//! Simeck-style key expansion.
//!
//! The state `(k, t0, t1, t2)` starts as the master key words in that order.
//! Each step emits `k` as the round key and shifts
//! `(k, t0, t1, t2) <- (t0, t1, t2, k ^ f(t0) ^ c ^ z_i)` where `f` is the
//! Simeck round function, `c = 2^w - 4` and `z_i` is one bit of the round
//! constant sequence.

use alloc::vec::Vec;

use crate::cipher::{simeck_raw, FeistelSpec, MasterKey, SubkeySet};
use crate::{Error, Result, Word};

/// Source of the per-step constant bit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZSequence {
    /// The m-sequence of `x^5 + x^2 + 1` seeded with `11111`, as used by
    /// Simeck32/64 (`0x9A42BB1F` read LSB first).
    #[default]
    Simeck,
    /// All-zero bits: the constant is `2^w - 4` in every step. This
    /// reproduces the subkeys of the built-in worked example.
    ConstantOnly,
}

impl ZSequence {
    pub fn bits(self, len: usize) -> Vec<u16> {
        match self {
            ZSequence::ConstantOnly => alloc::vec![0; len],
            ZSequence::Simeck => {
                let mut s: Vec<u16> = alloc::vec![1; 5.min(len)];
                while s.len() < len {
                    let i = s.len() - 5;
                    s.push(s[i + 2] ^ s[i]);
                }
                s
            }
        }
    }
}

/// Standard Simeck key expansion.
pub fn simeck_key_schedule(mk: &MasterKey, rounds: usize, spec: &FeistelSpec) -> Result<SubkeySet> {
    key_schedule(mk, rounds, spec, ZSequence::Simeck)
}

pub fn key_schedule(mk: &MasterKey, rounds: usize, spec: &FeistelSpec, z: ZSequence) -> Result<SubkeySet> {
    let width = spec.word_width();
    if mk.width() != width {
        return Err(Error::WidthMismatch {
            expected: width,
            actual: mk.width(),
        });
    }
    if rounds == 0 {
        return Err(Error::param("rounds must be at least 1"));
    }
    let constant = spec.mask() & !3;
    let zbits = z.bits(rounds);
    let [k, t0, t1, t2] = mk.words();
    let (mut k, mut t) = (k.value(), [t0.value(), t1.value(), t2.value()]);
    let mut keys = Vec::with_capacity(rounds);
    for zi in zbits {
        keys.push(Word::new(k as u32, width)?);
        let next = k ^ simeck_raw(t[0], spec.rot_a(), spec.rot_b(), width) ^ constant ^ zi;
        k = t[0];
        t = [t[1], t[2], next];
    }
    SubkeySet::new(keys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::encrypt_raw;

    #[test]
    fn lfsr_matches_packed_constant() {
        let bits = ZSequence::Simeck.bits(32);
        let packed = 0x9A42_BB1Fu32;
        for (i, b) in bits.iter().enumerate() {
            assert_eq!(*b as u32, (packed >> i) & 1, "bit {i}");
        }
    }

    #[test]
    fn official_simeck32_vector() {
        // master key 1918 1110 0908 0100 is written (t2, t1, t0, k0)
        let spec = FeistelSpec::simeck(16, 32).unwrap();
        let mk = MasterKey::from_raw([0x0100, 0x0908, 0x1110, 0x1918], 16).unwrap();
        let ks = simeck_key_schedule(&mk, 32, &spec).unwrap();
        assert_eq!(encrypt_raw(&spec, &ks.raw(), 0x6565, 0x6877), (0x770D, 0x2C76));
    }

    #[test]
    fn first_four_keys_are_master_words() {
        let spec = FeistelSpec::simeck32();
        let mk = MasterKey::from_raw([0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3], 16).unwrap();
        for z in [ZSequence::Simeck, ZSequence::ConstantOnly] {
            let ks = key_schedule(&mk, 6, &spec, z).unwrap();
            assert_eq!(&ks.raw()[..4], &[0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3]);
        }
    }

    #[test]
    fn rounds_five_and_six() {
        let spec = FeistelSpec::simeck32();
        let mk = MasterKey::from_raw([0xB0AE, 0xC7E9, 0xC3CE, 0xE6C3], 16).unwrap();
        let std_keys = simeck_key_schedule(&mk, 6, &spec).unwrap().raw();
        assert_eq!(&std_keys[4..], &[0x05A8, 0xFE41]);
        let printed = key_schedule(&mk, 6, &spec, ZSequence::ConstantOnly).unwrap().raw();
        assert_eq!(&printed[4..], &[0x05A9, 0xFE40]);
    }

    #[test]
    fn zero_master_key() {
        // k5 = 0 ^ f(0) ^ (2^16 - 4) ^ z0 with z0 = 1
        let spec = FeistelSpec::simeck32();
        let mk = MasterKey::from_raw([0; 4], 16).unwrap();
        let ks = simeck_key_schedule(&mk, 6, &spec).unwrap().raw();
        assert_eq!(&ks[..4], &[0, 0, 0, 0]);
        assert_eq!(ks[4], 0xFFFD);
        let w8 = FeistelSpec::simeck(8, 6).unwrap();
        let mk8 = MasterKey::from_raw([0; 4], 8).unwrap();
        assert_eq!(simeck_key_schedule(&mk8, 6, &w8).unwrap().raw()[4], 0xFD);
    }

    #[test]
    fn width_mismatch() {
        let spec = FeistelSpec::simeck32();
        let mk = MasterKey::from_raw([0; 4], 8).unwrap();
        assert!(simeck_key_schedule(&mk, 6, &spec).is_err());
    }
}
