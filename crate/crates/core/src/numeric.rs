//! Shared numeric helpers: log-gamma, falling factorials, binomials.
//!
//! All bound formulas are evaluated in log space. Ratios like
//! `n^k / n-falling-k` are computed as sums of `ln(1 - j/n)` terms instead of
//! differences of two huge log-gamma values, which keeps them accurate even
//! when the logs themselves are around 1e10.

use crate::error::{Error, Result};

pub use std::f64::consts::LOG2_E;
use std::f64::consts::LN_2;

/// Largest `k` for which the O(k) falling-factorial loops are allowed.
const MAX_TERM_LOOP: u64 = 50_000_000;

/// Natural log of the gamma function for `x > 0` (Lanczos approximation,
/// g = 5, six coefficients; relative error below ~2e-10 on this range).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma needs a positive argument, got {x}");
    const COEF: [f64; 6] = [
        76.180_091_729_471_46,
        -86.505_320_329_416_77,
        24.014_098_240_830_91,
        -1.231_739_572_450_155,
        0.120_865_097_386_617_9e-2,
        -0.539_523_938_495_3e-5,
    ];
    let tmp = x + 5.5;
    let tmp = tmp - (x + 0.5) * tmp.ln();
    let mut ser = 1.000_000_000_190_015;
    for (i, c) in COEF.iter().enumerate() {
        ser += c / (x + 1.0 + i as f64);
    }
    -tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// `ln(a (a-1) ... (a-k+1))`, the falling factorial, for `a >= k`.
///
/// Summed term by term: no cancellation, exact domain checks.
pub fn ln_falling(a: u64, k: u64) -> Result<f64> {
    if k > a {
        return Err(Error::DomainError(format!(
            "falling factorial {a}^({k}) undefined: k > a"
        )));
    }
    if k > MAX_TERM_LOOP {
        return Err(Error::TooLarge(format!(
            "falling factorial loop capped at k <= {MAX_TERM_LOOP}, got {k}"
        )));
    }
    Ok((0..k).map(|j| ((a - j) as f64).ln()).sum())
}

/// `log2(a^k / (a (a-1) ... (a-k+1))) >= 0` for `a >= k >= 0`.
///
/// Computed as `-sum log2(1 - j/a)`, avoiding the giant-minus-giant form.
pub fn log2_pow_over_falling(a: u64, k: u64) -> Result<f64> {
    if k > a {
        return Err(Error::DomainError(format!(
            "ratio a^k / falling undefined for k = {k} > a = {a}"
        )));
    }
    if k > MAX_TERM_LOOP {
        return Err(Error::TooLarge(format!(
            "ratio loop capped at k <= {MAX_TERM_LOOP}, got {k}"
        )));
    }
    let a = a as f64;
    Ok(-(0..k).map(|j| (-(j as f64) / a).ln_1p()).sum::<f64>() / LN_2)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u64, k: u64) -> Result<f64> {
    Ok(ln_falling(n, k)? - ln_factorial(k))
}

/// `log2 C(n, k)`.
pub fn log2_binomial(n: u64, k: u64) -> Result<f64> {
    Ok(ln_binomial(n, k)? / LN_2)
}

/// Exact `C(n, k)` in 128 bits, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        // acc * (n - k + i) is always divisible by i at this point.
        acc = acc.checked_mul((n - k + i) as u128)? / i as u128;
    }
    Some(acc)
}

/// Smallest `w` with `2^w >= n`; `ceil(log2 n)` with `ceil_log2(0..=1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_matches_exact_factorials() {
        let mut fact = 1.0f64;
        for n in 1u64..=20 {
            fact *= n as f64;
            let rel = (ln_factorial(n) - fact.ln()).abs() / fact.ln().abs().max(1.0);
            assert!(rel < 1e-12, "n = {n}: rel err {rel}");
        }
    }

    #[test]
    fn ln_gamma_half_integer() {
        // Gamma(1/2) = sqrt(pi).
        let want = std::f64::consts::PI.sqrt().ln();
        assert!((ln_gamma(0.5) - want).abs() < 1e-12);
    }

    #[test]
    fn falling_factorial_small_cases() {
        // 5 * 4 * 3 = 60
        assert!((ln_falling(5, 3).unwrap() - 60f64.ln()).abs() < 1e-12);
        assert_eq!(ln_falling(5, 0).unwrap(), 0.0);
        assert!(ln_falling(3, 4).is_err());
    }

    #[test]
    fn pow_over_falling_matches_direct_ratio() {
        // 4^2 / (4*3) = 16/12
        let got = log2_pow_over_falling(4, 2).unwrap();
        assert!((got - (16f64 / 12.0).log2()).abs() < 1e-12);
        assert_eq!(log2_pow_over_falling(7, 0).unwrap(), 0.0);
    }

    #[test]
    fn binomial_exact_values() {
        assert_eq!(binomial_u128(4, 2), Some(6));
        assert_eq!(binomial_u128(10, 3), Some(120));
        assert_eq!(binomial_u128(52, 5), Some(2_598_960));
        assert_eq!(binomial_u128(10, 0), Some(1));
        assert_eq!(binomial_u128(3, 9), Some(0));
        // C(1000, 500) overflows u128.
        assert_eq!(binomial_u128(1000, 500), None);
    }

    #[test]
    fn binomial_log_vs_exact() {
        let exact = binomial_u128(30, 12).unwrap() as f64;
        assert!((log2_binomial(30, 12).unwrap() - exact.log2()).abs() < 1e-9);
    }

    #[test]
    fn ceil_log2_boundaries() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1 << 20), 20);
        assert_eq!(ceil_log2((1 << 20) + 1), 21);
    }
}
