use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::{encrypt_raw, FeistelSpec, SubkeySet};
use crate::{Block, Error, Result, Word};

/// One plaintext with its ciphertext.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnownPair {
    pub plaintext: Block,
    pub ciphertext: Block,
}

impl KnownPair {
    pub fn new(plaintext: Block, ciphertext: Block) -> Result<Self> {
        ciphertext.left().check_width(plaintext.width())?;
        Ok(KnownPair { plaintext, ciphertext })
    }

    pub fn from_raw(p: (u16, u16), c: (u16, u16), width: u32) -> Result<Self> {
        KnownPair::new(
            Block::from_raw(p.0 as u32, p.1 as u32, width)?,
            Block::from_raw(c.0 as u32, c.1 as u32, width)?,
        )
    }
}

/// `(l1, F_1(l1) ^ c)`: a plaintext obeying the chosen-plaintext rule.
pub fn make_chosen_plaintext(l1: Word, c: Word, spec: &FeistelSpec) -> Result<Block> {
    l1.check_width(spec.word_width())?;
    c.check_width(spec.word_width())?;
    Block::from_raw(
        l1.value() as u32,
        (spec.f(1, l1.value()) ^ c.value()) as u32,
        spec.word_width(),
    )
}

fn obeys_rule(p: Block, c: u16, spec: &FeistelSpec) -> bool {
    let (l, r) = p.halves();
    spec.f(1, l) ^ r == c
}

/// Three plaintexts with `F_1(L1) ^ R1 == C` and their ciphertexts, plus
/// optional known pairs that break the rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChosenPairSet {
    constant_c: Word,
    pairs: [KnownPair; 3],
    extras: Vec<KnownPair>,
}

impl ChosenPairSet {
    pub fn new(
        constant_c: Word,
        pairs: [KnownPair; 3],
        extras: impl IntoIterator<Item = KnownPair>,
        spec: &FeistelSpec,
    ) -> Result<Self> {
        let w = spec.word_width();
        constant_c.check_width(w)?;
        for (i, p) in pairs.iter().enumerate() {
            p.plaintext.left().check_width(w)?;
            if !obeys_rule(p.plaintext, constant_c.value(), spec) {
                return Err(Error::param(alloc::format!(
                    "pair {} plaintext {} breaks F(L1) ^ R1 = {constant_c}",
                    i + 1,
                    p.plaintext
                )));
            }
        }
        let l1: BTreeSet<u16> = pairs.iter().map(|p| p.plaintext.halves().0).collect();
        if l1.len() != 3 {
            return Err(Error::param("chosen plaintexts need distinct left halves"));
        }
        let extras: Vec<KnownPair> = extras.into_iter().collect();
        for e in &extras {
            e.plaintext.left().check_width(w)?;
            if obeys_rule(e.plaintext, constant_c.value(), spec) {
                return Err(Error::param("extra pairs must break the chosen-plaintext rule"));
            }
        }
        Ok(ChosenPairSet {
            constant_c,
            pairs,
            extras,
        })
    }

    pub fn constant_c(&self) -> Word {
        self.constant_c
    }

    pub fn pairs(&self) -> &[KnownPair; 3] {
        &self.pairs
    }

    /// Pair by the 1-based index used in the difference equations.
    pub fn pair(&self, idx: usize) -> Result<&KnownPair> {
        idx.checked_sub(1)
            .and_then(|i| self.pairs.get(i))
            .ok_or_else(|| Error::param(alloc::format!("pair index {idx} outside 1..=3")))
    }

    pub fn extras(&self) -> &[KnownPair] {
        &self.extras
    }

    pub fn without_extras(&self) -> Self {
        ChosenPairSet {
            extras: Vec::new(),
            ..self.clone()
        }
    }

    /// Adds one more pair off the rule.
    pub fn with_extra(&self, extra: KnownPair, spec: &FeistelSpec) -> Result<Self> {
        let mut extras = self.extras.clone();
        extras.push(extra);
        ChosenPairSet::new(self.constant_c, self.pairs, extras, spec)
    }

    /// Every supplied pair, rule pairs first.
    pub fn all_pairs(&self) -> Vec<KnownPair> {
        let mut v = self.pairs.to_vec();
        v.extend_from_slice(&self.extras);
        v
    }

    /// Pairs consumed by the attack.
    pub fn data_complexity(&self) -> usize {
        3 + self.extras.len()
    }
}

/// A hidden-key attack target generated from a seed.
#[derive(Clone, Debug)]
pub struct AttackInstance {
    pub spec: FeistelSpec,
    pub keys: SubkeySet,
    pub set: ChosenPairSet,
}

impl AttackInstance {
    /// Random 6-round subkeys, three rule plaintexts with distinct random
    /// left halves and `extras` random plaintexts off the rule.
    /// `constant` defaults to `0xFFEE` at width 16 and to a random word
    /// otherwise.
    pub fn generate(spec: &FeistelSpec, seed: u64, constant: Option<Word>, extras: usize) -> Result<Self> {
        if spec.rounds() != 6 {
            return Err(Error::param("the attack targets exactly 6 rounds"));
        }
        let w = spec.word_width();
        let m = spec.mask();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let keys: Vec<u16> = (0..6).map(|_| rng.gen::<u16>() & m).collect();
        let keys = SubkeySet::from_raw(&keys, w)?;
        let c = match constant {
            Some(c) => {
                c.check_width(w)?;
                c.value()
            }
            None if w == 16 => 0xFFEE,
            None => rng.gen::<u16>() & m,
        };
        let mut l1s = BTreeSet::new();
        let mut order = Vec::new();
        while order.len() < 3 {
            let l = rng.gen::<u16>() & m;
            if l1s.insert(l) {
                order.push(l);
            }
        }
        let raw = keys.raw();
        let pair = |l: u16, r: u16| -> Result<KnownPair> {
            let c = encrypt_raw(spec, &raw, l, r);
            KnownPair::from_raw((l, r), c, w)
        };
        let pairs = [
            pair(order[0], spec.f(1, order[0]) ^ c)?,
            pair(order[1], spec.f(1, order[1]) ^ c)?,
            pair(order[2], spec.f(1, order[2]) ^ c)?,
        ];
        let mut extra = Vec::with_capacity(extras);
        while extra.len() < extras {
            let (l, r) = (rng.gen::<u16>() & m, rng.gen::<u16>() & m);
            if spec.f(1, l) ^ r != c {
                extra.push(pair(l, r)?);
            }
        }
        let set = ChosenPairSet::new(Word::new(c as u32, w)?, pairs, extra, spec)?;
        Ok(AttackInstance {
            spec: spec.clone(),
            keys,
            set,
        })
    }
}
