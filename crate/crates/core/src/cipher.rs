//! Width-parametric Feistel-2* structure.
//!
//! One round maps `(L, R)` to `(R ^ F_i(L) ^ K_i, L)`: the subkey is XORed
//! after the round function. Decryption inverts this as
//! `L = R', R = L' ^ F_i(R') ^ K_i`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::word::{mask, rotl_raw};
use crate::{Block, Error, Result, Word, MAX_WIDTH, MIN_WIDTH};

/// Round function family of a [`FeistelSpec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundFunction {
    /// `(x & (x <<< a)) ^ (x <<< b)` in every round.
    Simeck,
    /// A seeded random function per round, stored as lookup tables
    /// (`tables[i]` is `F_{i+1}`).
    Tables(Arc<[Vec<u16>]>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeistelSpec {
    word_width: u32,
    rounds: usize,
    rot_a: u32,
    rot_b: u32,
    round_function: RoundFunction,
}

impl FeistelSpec {
    /// Simeck-shaped cipher with rotations `5 mod w` and `1 mod w`.
    ///
    /// Widths where `5 mod w == 0` (only `w = 5`) are rejected: the AND term
    /// degenerates to `x` and the round function becomes linear.
    pub fn simeck(word_width: u32, rounds: usize) -> Result<Self> {
        check_width(word_width)?;
        FeistelSpec::with_rotations(word_width, rounds, 5 % word_width, 1 % word_width)
    }

    /// Simeck32/64 reduced to six rounds.
    pub fn simeck32() -> Self {
        FeistelSpec::simeck(16, 6).expect("16-bit Simeck is valid")
    }

    pub fn with_rotations(word_width: u32, rounds: usize, rot_a: u32, rot_b: u32) -> Result<Self> {
        check_width(word_width)?;
        if rounds == 0 {
            return Err(Error::param("rounds must be at least 1"));
        }
        if rot_a >= word_width || rot_b >= word_width {
            return Err(Error::param(alloc::format!(
                "rotations ({rot_a}, {rot_b}) must be below width {word_width}"
            )));
        }
        if rot_a == 0 {
            return Err(Error::param(alloc::format!(
                "rotation a reduces to 0 at width {word_width}; round function would be linear"
            )));
        }
        Ok(FeistelSpec {
            word_width,
            rounds,
            rot_a,
            rot_b,
            round_function: RoundFunction::Simeck,
        })
    }

    /// Independent uniformly random round functions, one per round.
    pub fn random_tables(word_width: u32, rounds: usize, seed: u64) -> Result<Self> {
        let mut spec = FeistelSpec::simeck(word_width, rounds)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = 1usize << word_width;
        let m = mask(word_width);
        let tables: Vec<Vec<u16>> = (0..rounds)
            .map(|_| (0..size).map(|_| rng.gen::<u16>() & m).collect())
            .collect();
        spec.round_function = RoundFunction::Tables(tables.into());
        Ok(spec)
    }

    pub fn word_width(&self) -> u32 {
        self.word_width
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn rot_a(&self) -> u32 {
        self.rot_a
    }

    pub fn rot_b(&self) -> u32 {
        self.rot_b
    }

    pub fn round_function(&self) -> &RoundFunction {
        &self.round_function
    }

    pub fn is_simeck(&self) -> bool {
        matches!(self.round_function, RoundFunction::Simeck)
    }

    pub fn mask(&self) -> u16 {
        mask(self.word_width)
    }

    /// Number of distinct half-block values, `2^w`.
    pub fn domain_size(&self) -> usize {
        1usize << self.word_width
    }

    /// Same spec with a different round count. Table-driven specs keep the
    /// tables they have, so `rounds` may not exceed the table count.
    pub fn with_rounds(&self, rounds: usize) -> Result<Self> {
        if rounds == 0 {
            return Err(Error::param("rounds must be at least 1"));
        }
        if let RoundFunction::Tables(t) = &self.round_function {
            if rounds > t.len() {
                return Err(Error::param("not enough round-function tables"));
            }
        }
        let mut spec = self.clone();
        spec.rounds = rounds;
        Ok(spec)
    }

    /// `F_round(x)` on raw values, `round` counted from 1.
    #[inline]
    pub fn f(&self, round: usize, x: u16) -> u16 {
        match &self.round_function {
            RoundFunction::Simeck => simeck_raw(x, self.rot_a, self.rot_b, self.word_width),
            RoundFunction::Tables(t) => t[round - 1][x as usize],
        }
    }

    /// Checked `F_round(x)`.
    pub fn round_fn(&self, round: usize, x: Word) -> Result<Word> {
        x.check_width(self.word_width)?;
        if round == 0 || round > self.rounds {
            return Err(Error::param(alloc::format!("round {round} out of range")));
        }
        Ok(Word::truncating(self.f(round, x.value()), self.word_width))
    }

    pub(crate) fn check_block(&self, b: Block) -> Result<()> {
        b.left().check_width(self.word_width)
    }
}

fn check_width(w: u32) -> Result<()> {
    if !(MIN_WIDTH..=MAX_WIDTH).contains(&w) {
        return Err(Error::UnsupportedWidth(w));
    }
    Ok(())
}

#[inline]
pub(crate) fn simeck_raw(x: u16, a: u32, b: u32, width: u32) -> u16 {
    (x & rotl_raw(x, a, width)) ^ rotl_raw(x, b, width)
}

/// Simeck round function `(x & (x <<< rot_a)) ^ (x <<< rot_b)`.
pub fn simeck_f(x: Word, spec: &FeistelSpec) -> Result<Word> {
    x.check_width(spec.word_width)?;
    Ok(Word::truncating(
        simeck_raw(x.value(), spec.rot_a, spec.rot_b, spec.word_width),
        spec.word_width,
    ))
}

/// Round keys `K_1 ..= K_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubkeySet {
    keys: Vec<Word>,
}

impl SubkeySet {
    pub fn new(keys: Vec<Word>) -> Result<Self> {
        if let Some(first) = keys.first() {
            for k in &keys {
                k.check_width(first.width())?;
            }
        }
        Ok(SubkeySet { keys })
    }

    pub fn from_raw(keys: &[u16], width: u32) -> Result<Self> {
        let keys = keys
            .iter()
            .map(|&k| Word::new(k as u32, width))
            .collect::<Result<Vec<_>>>()?;
        SubkeySet::new(keys)
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// `K_round`, counted from 1.
    pub fn key(&self, round: usize) -> Option<Word> {
        round.checked_sub(1).and_then(|i| self.keys.get(i)).copied()
    }

    pub fn words(&self) -> &[Word] {
        &self.keys
    }

    pub fn raw(&self) -> Vec<u16> {
        self.keys.iter().map(|k| k.value()).collect()
    }

    fn check_for(&self, spec: &FeistelSpec) -> Result<()> {
        if self.keys.len() != spec.rounds {
            return Err(Error::param(alloc::format!(
                "{} subkeys for a {}-round spec",
                self.keys.len(),
                spec.rounds
            )));
        }
        for k in &self.keys {
            k.check_width(spec.word_width)?;
        }
        Ok(())
    }
}

/// Master key words `(k0, t0, t1, t2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MasterKey {
    words: [Word; 4],
}

impl MasterKey {
    pub fn new(words: [Word; 4]) -> Result<Self> {
        for w in &words[1..] {
            w.check_width(words[0].width())?;
        }
        Ok(MasterKey { words })
    }

    pub fn from_raw(words: [u16; 4], width: u32) -> Result<Self> {
        MasterKey::new([
            Word::new(words[0] as u32, width)?,
            Word::new(words[1] as u32, width)?,
            Word::new(words[2] as u32, width)?,
            Word::new(words[3] as u32, width)?,
        ])
    }

    pub fn words(&self) -> [Word; 4] {
        self.words
    }

    pub fn width(&self) -> u32 {
        self.words[0].width()
    }
}

/// One forward round on raw halves.
#[inline]
pub(crate) fn round_forward(spec: &FeistelSpec, round: usize, l: u16, r: u16, k: u16) -> (u16, u16) {
    (r ^ spec.f(round, l) ^ k, l)
}

/// One inverse round on raw halves.
#[inline]
pub(crate) fn round_backward(spec: &FeistelSpec, round: usize, l: u16, r: u16, k: u16) -> (u16, u16) {
    (r, l ^ spec.f(round, r) ^ k)
}

/// Unchecked full encryption on raw halves; `keys.len()` rounds are applied.
#[inline]
pub fn encrypt_raw(spec: &FeistelSpec, keys: &[u16], l: u16, r: u16) -> (u16, u16) {
    let (mut l, mut r) = (l, r);
    for (i, &k) in keys.iter().enumerate() {
        (l, r) = round_forward(spec, i + 1, l, r, k);
    }
    (l, r)
}

/// Unchecked full decryption on raw halves.
#[inline]
pub fn decrypt_raw(spec: &FeistelSpec, keys: &[u16], l: u16, r: u16) -> (u16, u16) {
    let (mut l, mut r) = (l, r);
    for (i, &k) in keys.iter().enumerate().rev() {
        (l, r) = round_backward(spec, i + 1, l, r, k);
    }
    (l, r)
}

pub fn feistel_encrypt(p: Block, ks: &SubkeySet, spec: &FeistelSpec) -> Result<Block> {
    spec.check_block(p)?;
    ks.check_for(spec)?;
    let (l, r) = p.halves();
    let (l, r) = encrypt_raw(spec, &ks.raw(), l, r);
    Ok(Block::from_raw_unchecked(l, r, spec.word_width))
}

pub fn feistel_decrypt(c: Block, ks: &SubkeySet, spec: &FeistelSpec) -> Result<Block> {
    spec.check_block(c)?;
    ks.check_for(spec)?;
    let (l, r) = c.halves();
    let (l, r) = decrypt_raw(spec, &ks.raw(), l, r);
    Ok(Block::from_raw_unchecked(l, r, spec.word_width))
}

/// Forward state at the input of round `to_round + 1`, starting from the
/// input `state` of round `from_round`. An empty range returns `state`.
pub fn partial_encrypt(
    state: Block,
    ks: &SubkeySet,
    from_round: usize,
    to_round: usize,
    spec: &FeistelSpec,
) -> Result<Block> {
    spec.check_block(state)?;
    let (mut l, mut r) = state.halves();
    for round in from_round..=to_round {
        let k = round_key(ks, round, spec)?;
        (l, r) = round_forward(spec, round, l, r, k);
    }
    Ok(Block::from_raw_unchecked(l, r, spec.word_width))
}

/// Inverts rounds `from_round` down to `to_round` and returns the state at
/// the input of `to_round`. With `from_round < to_round` nothing is inverted.
pub fn partial_decrypt(
    state: Block,
    ks: &SubkeySet,
    from_round: usize,
    to_round: usize,
    spec: &FeistelSpec,
) -> Result<Block> {
    spec.check_block(state)?;
    if from_round < to_round {
        return Ok(state);
    }
    if to_round == 0 || from_round > spec.rounds {
        return Err(Error::param(alloc::format!(
            "round range {from_round}..={to_round} outside 1..={}",
            spec.rounds
        )));
    }
    let (mut l, mut r) = state.halves();
    for round in (to_round..=from_round).rev() {
        let k = round_key(ks, round, spec)?;
        (l, r) = round_backward(spec, round, l, r, k);
    }
    Ok(Block::from_raw_unchecked(l, r, spec.word_width))
}

fn round_key(ks: &SubkeySet, round: usize, spec: &FeistelSpec) -> Result<u16> {
    if round == 0 || round > spec.rounds {
        return Err(Error::param(alloc::format!("round {round} out of range")));
    }
    let k = ks.key(round).ok_or(Error::MissingRoundKey(round))?;
    k.check_width(spec.word_width)?;
    Ok(k.value())
}
