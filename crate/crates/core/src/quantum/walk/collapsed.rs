//! Symmetry-reduced walk simulation.
//!
//! On each side let `A` be the set of points that take part in a marked claw
//! (`p` points) and `n0 = N - p`. Every operator of the walk commutes with
//! permutations of the other `n0` points, and the uniform start is invariant
//! under them, so amplitudes stay constant on orbits. An r-space orbit is
//! labelled `(T, z)` with `T = S & A` and `z` either a point of `A - T` or
//! "other"; an intermediate orbit is `(T', z)` with `z` in `T'` or "other".
//! With a unique claw (`p = 1`) this is three classes per side.
//!
//! Storing the orbit amplitude `alpha = beta * sqrt(orbit size)` turns each
//! diffusion into a reflection about
//! `v = (1, ..., 1, sqrt(#other choices)) / sqrt(block size)` within the
//! block of a fixed `T`, and each query into a permutation of orbits.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::engine::{JointState, Marks, Reflection, SideOps};
use crate::math::ln_binomial;
use crate::{Error, Result};

/// Largest joint orbit count the collapsed simulator will allocate.
pub const COLLAPSED_MAX_STATES: usize = 10_000_000;
/// Largest number of claw participants per side.
pub const COLLAPSED_MAX_POINTS: usize = 20;

/// `z` label: a point of `A` by position, or any point outside `A`.
type Label = (u32, Option<u8>);

pub(crate) fn collapsed_side(n: usize, r: usize, p: usize) -> Result<SideOps> {
    if p > COLLAPSED_MAX_POINTS || p > n {
        return Err(Error::CollapsedUnavailable(alloc::format!(
            "{p} claw points on a side of {n}"
        )));
    }
    if r == 0 || r >= n {
        return Err(Error::param("subset size must satisfy 1 <= r < N"));
    }
    let n0 = n - p;
    let ln_total = ln_binomial(n as u64, r as u64) + libm::log((n - r) as f64);

    let mut rclasses: Vec<Label> = Vec::new();
    let mut d1 = Vec::new();
    let mut initial = Vec::new();
    for t in 0u32..1 << p {
        let k = t.count_ones() as usize;
        let Some(s) = r.checked_sub(k).filter(|&s| s <= n0) else {
            continue;
        };
        let start = rclasses.len();
        let mut v = Vec::new();
        let ln_c = ln_binomial(n0 as u64, s as u64);
        for a in 0..p as u8 {
            if t >> a & 1 == 0 {
                rclasses.push((t, Some(a)));
                v.push(1.0);
                initial.push(libm::exp(0.5 * (ln_c - ln_total)));
            }
        }
        if n0 > s {
            let others = (n0 - s) as f64;
            rclasses.push((t, None));
            v.push(libm::sqrt(others));
            initial.push(libm::exp(0.5 * (ln_c + libm::log(others) - ln_total)));
        }
        let norm = libm::sqrt((n - r) as f64);
        d1.push(Reflection {
            start,
            len: v.len(),
            v: Some(v.into_iter().map(|x| x / norm).collect()),
        });
    }

    let mut iindex: BTreeMap<Label, u32> = BTreeMap::new();
    let mut d2 = Vec::new();
    for t in 0u32..1 << p {
        let k = t.count_ones() as usize;
        let Some(s) = (r + 1).checked_sub(k).filter(|&s| s <= n0) else {
            continue;
        };
        let start = iindex.len();
        let mut v = Vec::new();
        for a in 0..p as u8 {
            if t >> a & 1 == 1 {
                iindex.insert((t, Some(a)), iindex.len() as u32);
                v.push(1.0);
            }
        }
        if s >= 1 {
            iindex.insert((t, None), iindex.len() as u32);
            v.push(libm::sqrt(s as f64));
        }
        let norm = libm::sqrt((r + 1) as f64);
        d2.push(Reflection {
            start,
            len: v.len(),
            v: Some(v.into_iter().map(|x| x / norm).collect()),
        });
    }
    if iindex.len() != rclasses.len() {
        return Err(Error::Inconsistent("orbit spaces differ in size".into()));
    }

    let insert = rclasses
        .iter()
        .map(|&(t, z)| {
            let target = match z {
                Some(a) => (t | 1 << a, Some(a)),
                None => (t, None),
            };
            iindex[&target]
        })
        .collect();
    let keys = rclasses.iter().map(|&(t, _)| t).collect();

    let norm = libm::sqrt(initial.iter().map(|x| x * x).sum::<f64>());
    initial.iter_mut().for_each(|x| *x /= norm);
    Ok(SideOps::new(d1, d2, insert, keys, initial))
}

/// Orbit-level walk state.
#[derive(Clone, Debug)]
pub struct CollapsedWalkState {
    sides: [SideOps; 2],
    marks: Marks,
    state: JointState,
}

impl CollapsedWalkState {
    /// `claws` are given by position in the per-side participant lists of
    /// sizes `p1` and `p2`.
    pub fn new(n: usize, r1: usize, r2: usize, p: (usize, usize), claws: &[(u32, u32)]) -> Result<Self> {
        let sides = [collapsed_side(n, r1, p.0)?, collapsed_side(n, r2, p.1)?];
        if sides[0].dim.saturating_mul(sides[1].dim) > COLLAPSED_MAX_STATES {
            return Err(Error::CollapsedUnavailable(alloc::format!(
                "{} x {} orbits exceed {COLLAPSED_MAX_STATES}",
                sides[0].dim,
                sides[1].dim
            )));
        }
        let marks = Marks::new(&sides, claws);
        let state = JointState::initial(&sides);
        Ok(CollapsedWalkState { sides, marks, state })
    }

    pub fn dimensions(&self) -> (usize, usize) {
        (self.state.d1, self.state.d2)
    }

    /// `(T1, T2)` participant masks of joint r-space orbit `k`.
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
    fn unique_claw_has_three_classes_per_side() {
        let side = collapsed_side(8, 4, 1).unwrap();
        assert_eq!(side.dim, 3);
        let st = CollapsedWalkState::new(8, 4, 4, (1, 1), &[(0, 0)]).unwrap();
        assert_eq!(st.dimensions(), (3, 3));
    }

    #[test]
    fn initial_weights_match_orbit_sizes() {
        // N = 8, r = 4, p = 1: (T = {}, z = a) has C(7,4) = 35 states,
        // (T = {}, other) 35 * 3, (T = {a}, other) C(7,3) * 4 = 140; total 280
        let side = collapsed_side(8, 4, 1).unwrap();
        let probs: Vec<f64> = side.initial.iter().map(|a| a * a).collect();
        let expect = [35.0 / 280.0, 105.0 / 280.0, 140.0 / 280.0];
        for (p, e) in probs.iter().zip(expect) {
            assert!((p - e).abs() < 1e-12);
        }
    }

    #[test]
    fn refuses_too_many_points() {
        assert!(matches!(
            collapsed_side(64, 16, 21),
            Err(Error::CollapsedUnavailable(_))
        ));
    }
}
