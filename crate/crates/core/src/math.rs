//! Small numeric helpers that `core` lacks.

/// Smallest `r` with `r^3 >= x`.
pub(crate) fn ceil_cbrt(x: u128) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = libm::cbrt(x as f64) as u64;
    while (r as u128).pow(3) >= x && r > 0 {
        r -= 1;
    }
    while (r as u128).pow(3) < x {
        r += 1;
    }
    r
}

/// `ln C(n, k)`.
pub(crate) fn ln_binomial(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// Exact `C(n, k)` as `u128`, `None` on overflow.
pub(crate) fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots() {
        assert_eq!(ceil_cbrt(64), 4);
        assert_eq!(ceil_cbrt(65), 5);
        assert_eq!(ceil_cbrt(256), 7);
        assert_eq!(ceil_cbrt(1 << 24), 256);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), Some(252));
        assert_eq!(binomial(4, 5), Some(0));
        let ln = ln_binomial(10, 5);
        assert!((libm::exp(ln) - 252.0).abs() < 1e-9);
    }
}
