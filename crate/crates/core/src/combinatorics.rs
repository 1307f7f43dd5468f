//! Exact binomial machinery, the real-argument binomial used in Lovász's form
//! of Kruskal–Katona, and composition counts.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact non-negative count. Every counting path in the crate uses this type.
pub type BigCount = BigUint;

/// Exact `C(n, k)`, zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigCount::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// `C(n, k)` for arguments whose value fits in a `u64` (all of `n <= 64`).
///
/// Panics on overflow.
pub fn binomial_u64(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=u128::from(k) {
        acc = acc
            .checked_mul(u128::from(n - k) + i)
            .expect("binomial overflows u128")
            / i;
    }
    u64::try_from(acc).expect("binomial overflows u64")
}

/// `sum_{i <= upto} C(n, i)`, exact.
pub fn binomial_sum_le(n: u64, upto: u64) -> BigCount {
    if upto >= n {
        return BigCount::one() << n;
    }
    let mut term = BigCount::one();
    let mut acc = BigCount::one();
    for i in 1..=upto {
        term = term * (n - i + 1) / i;
        acc += &term;
    }
    acc
}

/// Falling-factorial binomial `x (x-1) ... (x-m+1) / m!` for real `x`.
pub fn real_binomial(x: f64, m: u32) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (x - f64::from(i)) / f64::from(i + 1))
}

const ROOT_RELATIVE_TOLERANCE: f64 = 1e-9;
const ROOT_ITERATION_CAP: u32 = 2000;

/// The unique `x >= m - 1` with `C(x, m) = target`, to relative accuracy
/// `1e-9`. `C(x, m)` is strictly increasing on `[m - 1, inf)`, so bisection
/// with a doubling upper bracket always converges.
pub fn real_binomial_root(m: u32, target: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::invalid("real binomial root needs m >= 1"));
    }
    if !(target >= 1.0) || !target.is_finite() {
        return Err(Error::invalid(format!("target {target} must be a finite value >= 1")));
    }
    let base = f64::from(m - 1);
    let mut lo = base;
    let mut hi = base + target;
    let mut iterations = 0;
    while real_binomial(hi, m) < target {
        lo = hi;
        hi = base + 2.0 * (hi - base);
        iterations += 1;
        if iterations > ROOT_ITERATION_CAP {
            return Err(Error::NoConvergence { m, target });
        }
    }
    for _ in 0..ROOT_ITERATION_CAP {
        let mid = 0.5 * (lo + hi);
        let value = real_binomial(mid, m);
        if (value - target).abs() <= ROOT_RELATIVE_TOLERANCE * target {
            return Ok(mid);
        }
        if value < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi.abs() {
            break;
        }
    }
    let mid = 0.5 * (lo + hi);
    if (real_binomial(mid, m) - target).abs() <= ROOT_RELATIVE_TOLERANCE * target {
        Ok(mid)
    } else {
        Err(Error::NoConvergence { m, target })
    }
}

/// Number of compositions of `n`, optionally restricted to at most
/// `max_parts` parts: `2^(n-1)` or `sum_{i < b} C(n-1, i)`.
///
/// When `b < n/2` the restricted count is also checked against the entropy
/// bound `2^(b log2(e n / b))`; a failure there is reported as a violation.
pub fn compositions(n: u64, max_parts: Option<u64>) -> Result<BigCount> {
    if n == 0 {
        return Err(Error::invalid("compositions need n >= 1"));
    }
    let Some(b) = max_parts else {
        return Ok(BigCount::one() << (n - 1));
    };
    if b == 0 {
        return Err(Error::invalid("max_parts must be >= 1"));
    }
    let count = binomial_sum_le(n - 1, b - 1);
    if 2 * b < n {
        let (nf, bf) = (n as f64, b as f64);
        let log2_bound = bf * (std::f64::consts::E * nf / bf).log2();
        if !(ln_big(&count) / std::f64::consts::LN_2 < log2_bound) {
            return Err(Error::violation(
                "composition entropy bound",
                format!("n={n}, b={b}: count {count} vs 2^{log2_bound}"),
            ));
        }
    }
    Ok(count)
}

/// Natural log of a big count; `-inf` for zero.
pub fn ln_big(value: &BigCount) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = value.bits();
    if bits <= 1000 {
        value.to_f64().map_or(f64::INFINITY, f64::ln)
    } else {
        let shift = bits - 64;
        let top = (value >> shift).to_f64().unwrap_or(f64::INFINITY);
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// `ln C(n, j)` in floating point, for bound arithmetic on large arguments.
pub(crate) fn ln_binomial_f64(n: u64, j: u64) -> f64 {
    if j > n {
        return f64::NEG_INFINITY;
    }
    let j = j.min(n - j);
    (1..=j).map(|i| ((n - j + i) as f64 / i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigCount {
        BigCount::from(v)
    }

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 2), big(6));
        assert_eq!(binomial(6, 3), big(20));
        assert_eq!(binomial(3, 1), big(3));
        assert_eq!(binomial(2, 5), big(0));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial_u64(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn rows_sum_to_powers_of_two() {
        for n in 0..=30u64 {
            let sum: BigCount = (0..=n).map(|k| binomial(n, k)).sum();
            assert_eq!(sum, BigCount::one() << n);
        }
    }

    #[test]
    fn binomial_sums() {
        assert_eq!(binomial_sum_le(5, 1), big(6));
        assert_eq!(binomial_sum_le(5, 5), big(32));
        assert_eq!(binomial_sum_le(5, 9), big(32));
        assert_eq!(binomial_sum_le(0, 0), big(1));
    }

    #[test]
    fn real_binomial_roots() {
        let x = real_binomial_root(2, 1.0).unwrap();
        assert!((x - 2.0).abs() < 1e-8);
        let x = real_binomial_root(3, 10.0).unwrap();
        assert!((x - 5.0).abs() < 1e-8);
        let x = real_binomial_root(2, 3.0).unwrap();
        assert!((x - 3.0).abs() < 1e-8);
        // x(x-1)/2 = 2  =>  x = (1 + sqrt(17)) / 2
        let x = real_binomial_root(2, 2.0).unwrap();
        assert!((x - (1.0 + 17f64.sqrt()) / 2.0).abs() < 1e-8);
        assert!(real_binomial_root(2, 0.5).is_err());
        assert!(real_binomial_root(0, 2.0).is_err());
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(4, None).unwrap(), big(8));
        assert_eq!(compositions(1, None).unwrap(), big(1));
        assert_eq!(compositions(6, Some(2)).unwrap(), big(6));
        assert!(compositions(0, None).is_err());
        assert!(compositions(3, Some(0)).is_err());
    }

    #[test]
    fn ln_big_matches_float() {
        assert!((ln_big(&big(1000)) - 1000f64.ln()).abs() < 1e-12);
        let huge = BigCount::one() << 5000u32;
        assert!((ln_big(&huge) - 5000.0 * std::f64::consts::LN_2).abs() < 1e-6);
        assert_eq!(ln_big(&big(0)), f64::NEG_INFINITY);
    }
}
