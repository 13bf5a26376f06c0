//! Joint two-sided walk state over an abstract block-structured basis.
//!
//! Both simulation modes reduce to the same shape. Each side has an r-space
//! (subset of size `r` plus an outside element `z`) and an intermediate
//! space (subset of size `r + 1` containing `z`) of equal dimension. The two
//! diffusions are reflections `2|v><v| - I` on contiguous blocks, and the
//! two queries are permutations between the spaces. The joint amplitudes
//! form a `d1 x d2` row-major matrix: side 1 indexes rows, side 2 columns.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::super::{norm_sqr, QueryLedger};
use crate::{Error, Result};

/// Reflection `2|v><v| - I` on `start..start + len`; `v == None` is uniform.
#[derive(Clone, Debug)]
pub(crate) struct Reflection {
    pub start: usize,
    pub len: usize,
    pub v: Option<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub(crate) struct SideOps {
    pub dim: usize,
    pub d1: Vec<Reflection>,
    pub d2: Vec<Reflection>,
    /// r-space index to intermediate index.
    pub insert: Vec<u32>,
    /// Intermediate index to r-space index.
    pub remove: Vec<u32>,
    /// Subset key of each r-space index, as a bit mask over the side's
    /// marking alphabet.
    pub keys: Vec<u32>,
    /// Initial r-space amplitudes, unit norm.
    pub initial: Vec<f64>,
}

impl SideOps {
    pub fn new(d1: Vec<Reflection>, d2: Vec<Reflection>, insert: Vec<u32>, keys: Vec<u32>, initial: Vec<f64>) -> Self {
        let dim = insert.len();
        let mut remove = alloc::vec![0u32; dim];
        for (i, &j) in insert.iter().enumerate() {
            remove[j as usize] = i as u32;
        }
        SideOps {
            dim,
            d1,
            d2,
            insert,
            remove,
            keys,
            initial,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// `|S| = r`, `z` outside `S`.
    Subset,
    /// `|S| = r + 1`, `z` inside `S`.
    Inserted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    One,
    Two,
}

impl Side {
    fn idx(self) -> usize {
        match self {
            Side::One => 0,
            Side::Two => 1,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct JointState {
    pub amps: Vec<Complex64>,
    pub d1: usize,
    pub d2: usize,
    pub space: [Space; 2],
    pub ledger: QueryLedger,
    pub max_norm_drift: f64,
    scratch: Vec<Complex64>,
}

impl JointState {
    pub fn initial(sides: &[SideOps; 2]) -> Self {
        let (d1, d2) = (sides[0].dim, sides[1].dim);
        let mut amps = Vec::with_capacity(d1 * d2);
        for &a in &sides[0].initial {
            for &b in &sides[1].initial {
                amps.push(Complex64::new(a * b, 0.0));
            }
        }
        let mut s = JointState {
            amps,
            d1,
            d2,
            space: [Space::Subset; 2],
            ledger: QueryLedger::new(),
            max_norm_drift: 0.0,
            scratch: Vec::new(),
        };
        s.track_norm();
        s
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(norm_sqr(&self.amps))
    }

    fn track_norm(&mut self) {
        let drift = (norm_sqr(&self.amps) - 1.0).abs();
        if drift > self.max_norm_drift {
            self.max_norm_drift = drift;
        }
    }

    fn expect(&self, side: Side, space: Space) -> Result<()> {
        if self.space[side.idx()] != space {
            return Err(Error::param(alloc::format!(
                "operator expects {space:?} space on side {side:?}"
            )));
        }
        Ok(())
    }

    fn reflect(&mut self, side: Side, blocks: &[Reflection]) {
        let d2 = self.d2;
        match side {
            Side::One => {
                let mut acc = alloc::vec![Complex64::new(0.0, 0.0); d2];
                for b in blocks {
                    acc.iter_mut().for_each(|a| *a = Complex64::new(0.0, 0.0));
                    for k in 0..b.len {
                        let w = weight(b, k);
                        let row = &self.amps[(b.start + k) * d2..(b.start + k + 1) * d2];
                        for (a, x) in acc.iter_mut().zip(row) {
                            *a += x * w;
                        }
                    }
                    for k in 0..b.len {
                        let w2 = 2.0 * weight(b, k);
                        let row = &mut self.amps[(b.start + k) * d2..(b.start + k + 1) * d2];
                        for (x, a) in row.iter_mut().zip(&acc) {
                            *x = a * w2 - *x;
                        }
                    }
                }
            }
            Side::Two => {
                for row in self.amps.chunks_exact_mut(d2) {
                    for b in blocks {
                        let seg = &mut row[b.start..b.start + b.len];
                        let dot: Complex64 = seg.iter().enumerate().map(|(k, x)| x * weight(b, k)).sum();
                        for (k, x) in seg.iter_mut().enumerate() {
                            *x = dot * (2.0 * weight(b, k)) - *x;
                        }
                    }
                }
            }
        }
        self.track_norm();
    }

    fn permute(&mut self, side: Side, perm: &[u32]) {
        let d2 = self.d2;
        self.scratch.clear();
        self.scratch.resize(self.amps.len(), Complex64::new(0.0, 0.0));
        match side {
            Side::One => {
                for (i, &j) in perm.iter().enumerate() {
                    let j = j as usize;
                    self.scratch[j * d2..(j + 1) * d2].copy_from_slice(&self.amps[i * d2..(i + 1) * d2]);
                }
            }
            Side::Two => {
                for (src, dst) in self.amps.chunks_exact(d2).zip(self.scratch.chunks_exact_mut(d2)) {
                    for (j, &k) in perm.iter().enumerate() {
                        dst[k as usize] = src[j];
                    }
                }
            }
        }
        core::mem::swap(&mut self.amps, &mut self.scratch);
        self.track_norm();
    }

    /// Diffusion over `z` outside the subset.
    pub fn diffuse_outside(&mut self, sides: &[SideOps; 2], side: Side) -> Result<()> {
        self.expect(side, Space::Subset)?;
        self.reflect(side, &sides[side.idx()].d1);
        Ok(())
    }

    /// `S -> S + {z}`, one query.
    pub fn insert(&mut self, sides: &[SideOps; 2], side: Side) -> Result<()> {
        self.expect(side, Space::Subset)?;
        self.permute(side, &sides[side.idx()].insert);
        self.space[side.idx()] = Space::Inserted;
        self.ledger.charge(1);
        Ok(())
    }

    /// Diffusion over `z` inside the enlarged subset.
    pub fn diffuse_inside(&mut self, sides: &[SideOps; 2], side: Side) -> Result<()> {
        self.expect(side, Space::Inserted)?;
        self.reflect(side, &sides[side.idx()].d2);
        Ok(())
    }

    /// `S -> S - {z}`, one query.
    pub fn remove(&mut self, sides: &[SideOps; 2], side: Side) -> Result<()> {
        self.expect(side, Space::Inserted)?;
        self.permute(side, &sides[side.idx()].remove);
        self.space[side.idx()] = Space::Subset;
        self.ledger.charge(1);
        Ok(())
    }

    pub fn walk_step(&mut self, sides: &[SideOps; 2], side: Side) -> Result<()> {
        self.diffuse_outside(sides, side)?;
        self.insert(sides, side)?;
        self.diffuse_inside(sides, side)?;
        self.remove(sides, side)
    }

    /// Negates every amplitude whose subset pair is marked.
    pub fn phase_flip(&mut self, marks: &Marks) -> Result<()> {
        self.expect(Side::One, Space::Subset)?;
        self.expect(Side::Two, Space::Subset)?;
        for (i, row) in self.amps.chunks_exact_mut(self.d2).enumerate() {
            let want = marks.rows[i];
            if want == 0 {
                continue;
            }
            for (x, &c) in row.iter_mut().zip(&marks.cols) {
                if want & c != 0 {
                    *x = -*x;
                }
            }
        }
        self.track_norm();
        Ok(())
    }

    /// Probability mass on marked subset pairs.
    pub fn marked_probability(&self, marks: &Marks) -> f64 {
        let mut p = 0.0;
        for (i, row) in self.amps.chunks_exact(self.d2).enumerate() {
            let want = marks.rows[i];
            if want == 0 {
                continue;
            }
            for (x, &c) in row.iter().zip(&marks.cols) {
                if want & c != 0 {
                    p += x.norm_sqr();
                }
            }
        }
        p
    }
}

#[inline]
fn weight(b: &Reflection, k: usize) -> f64 {
    match &b.v {
        Some(v) => v[k],
        None => 1.0 / libm::sqrt(b.len as f64),
    }
}

/// Phase-flip table: row `i` and column `j` are marked together iff
/// `rows[i] & cols[j] != 0`.
#[derive(Clone, Debug)]
pub(crate) struct Marks {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
}

impl Marks {
    /// `claws` are `(a, b)` positions in the two marking alphabets; the
    /// keys are the per-index subset masks over those alphabets.
    pub fn new(sides: &[SideOps; 2], claws: &[(u32, u32)]) -> Self {
        let rows = sides[0]
            .keys
            .iter()
            .map(|&s| {
                claws
                    .iter()
                    .filter(|(a, _)| s >> a & 1 == 1)
                    .fold(0u32, |m, &(_, b)| m | 1 << b)
            })
            .collect();
        Marks {
            rows,
            cols: sides[1].keys.clone(),
        }
    }
}
