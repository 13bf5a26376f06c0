//! Full-basis walk simulation: one amplitude per `(S1, z1, S2, z2)`.
//!
//! Per side, the r-space index of `(S, z)` is
//! `rank(S) * (N - r) + #{y outside S : y < z}` and the intermediate index of
//! `(S', z)` is `rank'(S') * (r + 1) + #{y in S' : y < z}`, where the ranks
//! enumerate subsets in ascending bit-mask order. Both diffusions are then
//! uniform reflections on contiguous blocks.

use alloc::vec::Vec;

use num_complex::Complex64;

use super::engine::{JointState, Marks, Reflection, Side, SideOps, Space};
use crate::quantum::QueryLedger;
use crate::{Error, Result};

/// Largest joint basis the full simulator will allocate.
pub const FULL_MAX_STATES: usize = 10_000_000;
/// Largest side size, bounded by the dense subset-rank tables.
pub const FULL_MAX_SIDE: usize = 16;

fn subsets_of_size(n: usize, k: usize) -> (Vec<u32>, Vec<u32>) {
    let mut list = Vec::new();
    let mut rank = alloc::vec![u32::MAX; 1 << n];
    for s in 0u32..1 << n {
        if s.count_ones() as usize == k {
            rank[s as usize] = list.len() as u32;
            list.push(s);
        }
    }
    (list, rank)
}

/// Number of basis states `C(N, r) (N - r)` on one side.
pub fn side_dimension(n: usize, r: usize) -> Option<u128> {
    crate::math::binomial(n as u64, r as u64)?.checked_mul((n - r) as u128)
}

pub(crate) fn full_side(n: usize, r: usize) -> Result<SideOps> {
    if n > FULL_MAX_SIDE {
        return Err(Error::capacity(alloc::format!(
            "full-basis side of {n} elements exceeds {FULL_MAX_SIDE}"
        )));
    }
    if r == 0 || r >= n {
        return Err(Error::param("subset size must satisfy 1 <= r < N"));
    }
    let out = n - r;
    let (subs, _) = subsets_of_size(n, r);
    let (isubs, irank) = subsets_of_size(n, r + 1);
    let full = (1u32 << n) - 1;
    let dim = subs.len() * out;
    debug_assert_eq!(dim, isubs.len() * (r + 1));

    let mut insert = Vec::with_capacity(dim);
    let mut keys = Vec::with_capacity(dim);
    for &s in &subs {
        let outside = !s & full;
        for z in 0..n as u32 {
            if outside >> z & 1 == 0 {
                continue;
            }
            let s2 = s | 1 << z;
            let pos = (s2 & ((1 << z) - 1)).count_ones();
            insert.push(irank[s2 as usize] * (r as u32 + 1) + pos);
            keys.push(s);
        }
    }
    let d1 = (0..subs.len())
        .map(|i| Reflection {
            start: i * out,
            len: out,
            v: None,
        })
        .collect();
    let d2 = (0..isubs.len())
        .map(|i| Reflection {
            start: i * (r + 1),
            len: r + 1,
            v: None,
        })
        .collect();
    let amp = 1.0 / libm::sqrt(dim as f64);
    Ok(SideOps::new(d1, d2, insert, keys, alloc::vec![amp; dim]))
}

/// Explicit walk state over the full basis of both sides.
#[derive(Clone, Debug)]
pub struct FullWalkState {
    sides: [SideOps; 2],
    marks: Marks,
    state: JointState,
}

impl FullWalkState {
    /// Uniform initial state for side size `n`, subset sizes `r1`, `r2`, and
    /// claws given as `(x1, x2)` domain points.
    pub fn new(n: usize, r1: usize, r2: usize, claws: &[(u32, u32)]) -> Result<Self> {
        let (a, b) = (side_dimension(n, r1), side_dimension(n, r2));
        let fits = match (a, b) {
            (Some(a), Some(b)) => a.checked_mul(b).is_some_and(|d| d <= FULL_MAX_STATES as u128),
            _ => false,
        };
        if !fits {
            return Err(Error::capacity(alloc::format!(
                "full-basis walk with N = {n}, r = ({r1}, {r2}) exceeds {FULL_MAX_STATES} states"
            )));
        }
        let sides = [full_side(n, r1)?, full_side(n, r2)?];
        let marks = Marks::new(&sides, claws);
        let state = JointState::initial(&sides);
        Ok(FullWalkState { sides, marks, state })
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.state.d1, self.state.d2)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.state.amps
    }

    pub fn space(&self, side: Side) -> Space {
        self.state.space[side as usize]
    }

    pub fn norm(&self) -> f64 {
        self.state.norm()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.state.max_norm_drift
    }

    pub fn ledger(&self) -> QueryLedger {
        self.state.ledger
    }

    /// Diffusion `D1` over `z` outside `S`.
    pub fn d1(&mut self, side: Side) -> Result<()> {
        self.state.diffuse_outside(&self.sides, side)
    }

    pub fn insert(&mut self, side: Side) -> Result<()> {
        self.state.insert(&self.sides, side)
    }

    /// Diffusion `D2` over `z` inside the enlarged `S`.
    pub fn d2(&mut self, side: Side) -> Result<()> {
        self.state.diffuse_inside(&self.sides, side)
    }

    pub fn remove(&mut self, side: Side) -> Result<()> {
        self.state.remove(&self.sides, side)
    }

    pub fn walk_step(&mut self, side: Side) -> Result<()> {
        self.state.walk_step(&self.sides, side)
    }

    pub fn phase_flip(&mut self) -> Result<()> {
        self.state.phase_flip(&self.marks)
    }

    pub fn marked_probability(&self) -> f64 {
        self.state.marked_probability(&self.marks)
    }

    /// Subset masks `(S1, S2)` of joint r-space index `k`.
    pub fn subsets_of(&self, k: usize) -> (u32, u32) {
        let (i, j) = (k / self.state.d2, k % self.state.d2);
        (self.sides[0].keys[i], self.sides[1].keys[j])
    }

    pub(crate) fn into_parts(self) -> ([SideOps; 2], Marks, JointState) {
        (self.sides, self.marks, self.state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_is_a_bijection() {
        for (n, r) in [(4, 2), (6, 2), (6, 4), (8, 4)] {
            let side = full_side(n, r).unwrap();
            let mut seen = alloc::vec![false; side.dim];
            for &j in &side.insert {
                assert!(!seen[j as usize]);
                seen[j as usize] = true;
            }
            assert_eq!(side.dim as u128, side_dimension(n, r).unwrap());
        }
    }

    #[test]
    fn diffusions_are_involutions() {
        let mut st = FullWalkState::new(6, 2, 2, &[(1, 4)]).unwrap();
        // make the state non-uniform first
        st.phase_flip().unwrap();
        let before = st.amplitudes().to_vec();
        for side in [Side::One, Side::Two] {
            st.d1(side).unwrap();
            st.d1(side).unwrap();
        }
        for (a, b) in st.amplitudes().iter().zip(&before) {
            assert!((a - b).norm_sqr() < 1e-20);
        }
        st.insert(Side::One).unwrap();
        let mid = st.amplitudes().to_vec();
        st.d2(Side::One).unwrap();
        st.d2(Side::One).unwrap();
        for (a, b) in st.amplitudes().iter().zip(&mid) {
            assert!((a - b).norm_sqr() < 1e-20);
        }
        assert!(st.max_norm_drift() < 1e-12);
    }

    #[test]
    fn uniform_state_is_invariant_without_claws() {
        let mut st = FullWalkState::new(6, 2, 2, &[]).unwrap();
        let before = st.amplitudes().to_vec();
        st.walk_step(Side::One).unwrap();
        st.walk_step(Side::Two).unwrap();
        for (a, b) in st.amplitudes().iter().zip(&before) {
            assert!((a - b).norm_sqr() < 1e-24);
        }
        assert_eq!(st.ledger().queries(), 4);
    }

    #[test]
    fn operators_check_their_space() {
        let mut st = FullWalkState::new(4, 2, 2, &[]).unwrap();
        assert!(st.d2(Side::One).is_err());
        assert!(st.remove(Side::Two).is_err());
        st.insert(Side::One).unwrap();
        assert!(st.phase_flip().is_err());
        assert!(st.d1(Side::One).is_err());
    }

    #[test]
    fn capacity_guard() {
        assert!(matches!(FullWalkState::new(14, 6, 6, &[]), Err(Error::Capacity(_))));
    }
}
