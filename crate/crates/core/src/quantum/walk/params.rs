use core::f64::consts::FRAC_PI_4;

use crate::math::ceil_cbrt;
use crate::{Error, Result};

/// Subset sizes, inner walk lengths and the outer repetition count of the
/// two-sided claw walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WalkParams {
    pub m: usize,
    pub n: usize,
    pub r1: usize,
    pub r2: usize,
    pub t1: u64,
    pub t2: u64,
    pub outer: u64,
}

impl WalkParams {
    /// Oracle queries of one run: `r1 + r2` loads plus two per walk step.
    pub fn queries(&self) -> u64 {
        (self.r1 + self.r2) as u64 + self.outer * (self.t1 + self.t2) * 2
    }

    /// Replaces the subset sizes and recomputes `t1`, `t2` and `outer`.
    pub fn with_subsets(&self, r1: usize, r2: usize, outer_multiplier: f64) -> Result<Self> {
        build(self.m, self.n, r1, r2, outer_multiplier)
    }
}

/// `ceil((pi/4) * sqrt(r))`.
pub fn inner_steps(r: usize) -> u64 {
    libm::ceil(FRAC_PI_4 * libm::sqrt(r as f64)) as u64
}

/// Parameters for side sizes `m` and `n` with unit outer constant.
pub fn walk_params(m: usize, n: usize) -> Result<WalkParams> {
    walk_params_scaled(m, n, 1.0)
}

/// Subset sizes follow the three regimes of the balanced claw walk:
///
/// * `sqrt(n) <= m <= n^2`: `r1 = r2 = ceil((mn)^(1/3))`
/// * `m < sqrt(n)`: `r1 = m`, `r2 = max(ceil((mn)^(1/3)), m)`
/// * `m > n^2`: the mirror image
///
/// In the balanced regime `r` is capped at `min(m, n) - 1` so that a `z`
/// outside the subset exists. The outer loop runs
/// `ceil(mult * sqrt(mn / (r1 r2)))` times.
pub fn walk_params_scaled(m: usize, n: usize, outer_multiplier: f64) -> Result<WalkParams> {
    if m < 2 || n < 2 {
        return Err(Error::param("walk side sizes must be at least 2"));
    }
    let mn = m as u128 * n as u128;
    let c = ceil_cbrt(mn) as usize;
    let (r1, r2) = if (m as u128).pow(2) < n as u128 {
        (m, c.clamp(m, n))
    } else if m as u128 > (n as u128).pow(2) {
        (c.clamp(n, m), n)
    } else {
        let r = c.min(m.min(n) - 1);
        (r, r)
    };
    build(m, n, r1, r2, outer_multiplier)
}

fn build(m: usize, n: usize, r1: usize, r2: usize, mult: f64) -> Result<WalkParams> {
    if !(mult.is_finite() && mult > 0.0) {
        return Err(Error::param("outer multiplier must be positive"));
    }
    if r1 == 0 || r2 == 0 || r1 > m || r2 > n {
        return Err(Error::param("subset sizes must lie in 1..=side size"));
    }
    let ratio = (m as f64 * n as f64) / (r1 as f64 * r2 as f64);
    let outer = libm::ceil(mult * libm::sqrt(ratio)).max(1.0) as u64;
    Ok(WalkParams {
        m,
        n,
        r1,
        r2,
        t1: inner_steps(r1),
        t2: inner_steps(r2),
        outer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_eight() {
        let p = walk_params(8, 8).unwrap();
        assert_eq!((p.r1, p.r2, p.t1, p.t2, p.outer), (4, 4, 2, 2, 2));
        assert_eq!(p.queries(), 8 + 2 * 4 * 2);
    }

    #[test]
    fn balanced_powers_of_two() {
        for u in [3u32, 6, 9, 12] {
            let n = 1usize << u;
            let p = walk_params(n, n).unwrap();
            let expect = 1usize << (2 * u / 3);
            assert_eq!(p.r1, expect);
            assert_eq!(p.r2, expect);
        }
        // 2^(8/3) is not an integer: ceil((2^16)^(1/3)) = 41
        assert_eq!(walk_params(256, 256).unwrap().r1, 41);
    }

    #[test]
    fn unbalanced_regimes() {
        let p = walk_params(4, 64).unwrap();
        assert_eq!((p.r1, p.r2), (4, 7));
        let q = walk_params(64, 4).unwrap();
        assert_eq!((q.r1, q.r2), (7, 4));
    }

    #[test]
    fn tiny_sides_stay_simulable() {
        assert_eq!(walk_params(2, 2).unwrap().r1, 1);
        assert_eq!(walk_params(4, 4).unwrap().r1, 3);
        assert!(walk_params(1, 4).is_err());
    }

    #[test]
    fn multiplier_scales_outer_loop() {
        let base = walk_params(64, 64).unwrap();
        let tripled = walk_params_scaled(64, 64, 3.0).unwrap();
        assert_eq!(base.outer, 4);
        assert_eq!(tripled.outer, 12);
        assert!(walk_params_scaled(64, 64, 0.0).is_err());
    }
}
