//! Claw problems and classical claw finders.
//!
//! A claw problem is a pair of function families `f_1..f_w`, `g_1..g_w` over a
//! common domain of `N` points per side. A claw is `(x1, x2)` with
//! `f_i(x1) == g_i(x2)` for every `i`.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Largest per-side domain the pairwise census accepts by default.
pub const EXHAUSTIVE_MAX_BITS: u32 = 12;
/// Largest per-side domain the sort-and-match finder accepts by default.
pub const SORTED_MAX_BITS: u32 = 24;

/// Evaluable function families of a claw problem.
pub trait ClawFunctions: Send + Sync {
    fn f(&self, eq: usize, x: u32) -> u32;
    fn g(&self, eq: usize, x: u32) -> u32;
}

/// Lookup-table families, `f[eq][x]`.
#[derive(Clone, Debug)]
pub struct TableFunctions {
    f: Vec<Vec<u32>>,
    g: Vec<Vec<u32>>,
}

impl ClawFunctions for TableFunctions {
    fn f(&self, eq: usize, x: u32) -> u32 {
        self.f[eq][x as usize]
    }

    fn g(&self, eq: usize, x: u32) -> u32 {
        self.g[eq][x as usize]
    }
}

#[derive(Clone)]
pub struct ClawProblem {
    domain_size: usize,
    range_bits: u32,
    eq_count: usize,
    expected_unique: bool,
    funcs: Arc<dyn ClawFunctions>,
}

impl fmt::Debug for ClawProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClawProblem")
            .field("domain_size", &self.domain_size)
            .field("range_bits", &self.range_bits)
            .field("eq_count", &self.eq_count)
            .field("expected_unique", &self.expected_unique)
            .finish_non_exhaustive()
    }
}

impl ClawProblem {
    pub fn new(domain_size: usize, range_bits: u32, eq_count: usize, funcs: Arc<dyn ClawFunctions>) -> Result<Self> {
        if domain_size == 0 || eq_count == 0 {
            return Err(Error::param("empty claw problem"));
        }
        if range_bits == 0 || range_bits > 32 || range_bits as usize * eq_count > 64 {
            return Err(Error::param(alloc::format!(
                "combined range of {eq_count} x {range_bits} bits does not fit 64 bits"
            )));
        }
        if domain_size > u32::MAX as usize / 2 {
            return Err(Error::capacity("domain too large"));
        }
        Ok(ClawProblem {
            domain_size,
            range_bits,
            eq_count,
            expected_unique: false,
            funcs,
        })
    }

    /// Problem backed by explicit tables; every table must have the same
    /// length and every value must fit `range_bits`.
    pub fn from_tables(f: Vec<Vec<u32>>, g: Vec<Vec<u32>>, range_bits: u32) -> Result<Self> {
        if f.len() != g.len() || f.is_empty() {
            return Err(Error::param("f and g families must have the same non-zero size"));
        }
        let n = f[0].len();
        let limit = if range_bits >= 32 {
            u32::MAX
        } else {
            (1u32 << range_bits) - 1
        };
        for t in f.iter().chain(g.iter()) {
            if t.len() != n {
                return Err(Error::param("all tables must share one domain size"));
            }
            if let Some(&v) = t.iter().find(|&&v| v > limit) {
                return Err(Error::ValueTooWide {
                    value: v,
                    width: range_bits,
                });
            }
        }
        let eq = f.len();
        ClawProblem::new(n, range_bits, eq, Arc::new(TableFunctions { f, g }))
    }

    /// Single-equation problem with exactly one claw: all `f` and `g` values
    /// are distinct except `f(j1) == g(j2)` at a seeded random position.
    pub fn planted_unique(domain_size: usize, range_bits: u32, seed: u64) -> Result<Self> {
        if range_bits > 31 || (1usize << range_bits) < 2 * domain_size {
            return Err(Error::param("range too small for distinct values"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        let mut values = Vec::with_capacity(2 * domain_size - 1);
        while values.len() < 2 * domain_size - 1 {
            let v = rng.gen_range(0..1u32 << range_bits);
            if seen.insert(v) {
                values.push(v);
            }
        }
        let f: Vec<u32> = values[..domain_size].to_vec();
        let mut g: Vec<u32> = values[domain_size..].to_vec();
        let j1 = rng.gen_range(0..domain_size);
        let j2 = rng.gen_range(0..domain_size);
        g.insert(j2, f[j1]);
        let mut p = ClawProblem::from_tables(alloc::vec![f], alloc::vec![g], range_bits)?;
        p.expected_unique = true;
        Ok(p)
    }

    /// Uniformly random tables; claws occur at the birthday rate.
    pub fn random(domain_size: usize, range_bits: u32, eq_count: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let limit = 1u64 << range_bits;
        let mut table = || -> Vec<u32> { (0..domain_size).map(|_| rng.gen_range(0..limit) as u32).collect() };
        let f = (0..eq_count).map(|_| table()).collect();
        let g = (0..eq_count).map(|_| table()).collect();
        ClawProblem::from_tables(f, g, range_bits)
    }

    pub fn with_expected_unique(mut self, unique: bool) -> Self {
        self.expected_unique = unique;
        self
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    /// `u` when the domain is a power of two.
    pub fn domain_bits(&self) -> Option<u32> {
        self.domain_size
            .is_power_of_two()
            .then(|| self.domain_size.trailing_zeros())
    }

    pub fn range_bits(&self) -> u32 {
        self.range_bits
    }

    pub fn eq_count(&self) -> usize {
        self.eq_count
    }

    pub fn expected_unique(&self) -> bool {
        self.expected_unique
    }

    pub fn f(&self, eq: usize, x: u32) -> u32 {
        self.funcs.f(eq, x)
    }

    pub fn g(&self, eq: usize, x: u32) -> u32 {
        self.funcs.g(eq, x)
    }

    /// `f_1(x) || ... || f_w(x)`.
    pub fn f_concat(&self, x: u32) -> u64 {
        (0..self.eq_count).fold(0u64, |acc, i| (acc << self.range_bits) | self.f(i, x) as u64)
    }

    /// `g_1(x) || ... || g_w(x)`.
    pub fn g_concat(&self, x: u32) -> u64 {
        (0..self.eq_count).fold(0u64, |acc, i| (acc << self.range_bits) | self.g(i, x) as u64)
    }

    pub fn is_claw(&self, x1: u32, x2: u32) -> bool {
        (x1 as usize) < self.domain_size
            && (x2 as usize) < self.domain_size
            && (0..self.eq_count).all(|i| self.f(i, x1) == self.g(i, x2))
    }
}

/// The single function `F(c || x)` that selects `f` (`c = 0`) or `g` (`c = 1`)
/// over the disjoint index sets `J1 = 0..N` and `J2 = N..2N`.
#[derive(Clone, Copy, Debug)]
pub struct CombinedFunction<'a> {
    problem: &'a ClawProblem,
}

pub fn concat_multi(p: &ClawProblem) -> CombinedFunction<'_> {
    CombinedFunction { problem: p }
}

impl CombinedFunction<'_> {
    pub fn problem(&self) -> &ClawProblem {
        self.problem
    }

    /// Per-side domain size `N`.
    pub fn side_size(&self) -> usize {
        self.problem.domain_size
    }

    /// Output width `v * w` in bits.
    pub fn output_bits(&self) -> u32 {
        self.problem.range_bits * self.problem.eq_count as u32
    }

    pub fn j1(&self) -> Range<usize> {
        0..self.problem.domain_size
    }

    pub fn j2(&self) -> Range<usize> {
        self.problem.domain_size..2 * self.problem.domain_size
    }

    /// Splits an index `j = c || x` into `(c, x)`.
    pub fn split(&self, j: usize) -> (u8, u32) {
        let n = self.problem.domain_size;
        if j < n {
            (0, j as u32)
        } else {
            (1, (j - n) as u32)
        }
    }

    pub fn index(&self, c: u8, x: u32) -> usize {
        c as usize * self.problem.domain_size + x as usize
    }

    pub fn eval(&self, j: usize) -> u64 {
        match self.split(j) {
            (0, x) => self.problem.f_concat(x),
            (_, x) => self.problem.g_concat(x),
        }
    }
}

fn guard(p: &ClawProblem, max_bits: u32) -> Result<()> {
    if p.domain_size > 1usize << max_bits {
        return Err(Error::capacity(alloc::format!(
            "domain of {} points per side exceeds the 2^{max_bits} limit",
            p.domain_size
        )));
    }
    Ok(())
}

/// Every claw, by pairwise comparison, in ascending `(x1, x2)` order.
pub fn find_claws_exhaustive(p: &ClawProblem) -> Result<Vec<(u32, u32)>> {
    find_claws_exhaustive_limited(p, EXHAUSTIVE_MAX_BITS)
}

pub fn find_claws_exhaustive_limited(p: &ClawProblem, max_bits: u32) -> Result<Vec<(u32, u32)>> {
    guard(p, max_bits)?;
    let n = p.domain_size as u32;
    let fs: Vec<u64> = (0..n).map(|x| p.f_concat(x)).collect();
    let gs: Vec<u64> = (0..n).map(|x| p.g_concat(x)).collect();
    let mut out = Vec::new();
    for (x1, fv) in fs.iter().enumerate() {
        for (x2, gv) in gs.iter().enumerate() {
            if fv == gv {
                out.push((x1 as u32, x2 as u32));
            }
        }
    }
    Ok(out)
}

/// Result of a sort-and-match pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedClaws {
    /// Claws ordered by combined value, then `(x1, x2)`.
    pub claws: Vec<(u32, u32)>,
    /// Combined-function evaluations charged: one per domain point per side.
    pub evaluations: u64,
}

/// Sort both value tables and merge them; returns every claw.
pub fn find_claws_sorted(p: &ClawProblem) -> Result<SortedClaws> {
    find_claws_sorted_limited(p, SORTED_MAX_BITS)
}

pub fn find_claws_sorted_limited(p: &ClawProblem, max_bits: u32) -> Result<SortedClaws> {
    guard(p, max_bits)?;
    let combined = concat_multi(p);
    let n = p.domain_size;
    let mut left: Vec<(u64, u32)> = (0..n).map(|x| (combined.eval(x), x as u32)).collect();
    let mut right: Vec<(u64, u32)> = (0..n).map(|x| (combined.eval(n + x), x as u32)).collect();
    left.sort_unstable();
    right.sort_unstable();

    let mut claws = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        let (lv, rv) = (left[i].0, right[j].0);
        if lv < rv {
            i += 1;
        } else if lv > rv {
            j += 1;
        } else {
            let i_end = i + left[i..].iter().take_while(|e| e.0 == lv).count();
            let j_end = j + right[j..].iter().take_while(|e| e.0 == lv).count();
            for a in &left[i..i_end] {
                for b in &right[j..j_end] {
                    claws.push((a.1, b.1));
                }
            }
            i = i_end;
            j = j_end;
        }
    }
    Ok(SortedClaws {
        claws,
        evaluations: 2 * n as u64,
    })
}

/// First claw in sorted-value order, with the evaluation count.
pub fn find_claw_sorted(p: &ClawProblem) -> Result<(Option<(u32, u32)>, u64)> {
    let all = find_claws_sorted(p)?;
    Ok((all.claws.first().copied(), all.evaluations))
}
