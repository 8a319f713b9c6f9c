//! The explicit two-user code.
//!
//! With exactly two active users, feeding back the most significant bit
//! position where their binary ids differ is enough: the user whose bit is 0
//! there transmits in slot 0, the other in slot 1. Sent at fixed length this
//! costs ⌈log2 ⌈log2 n⌉⌉ bits; the position is geometrically distributed, so
//! entropy coding brings the average under 2 bits regardless of n.

use crate::codes::huffman::{PrefixCode, SymbolDistribution};
use crate::error::{Error, Result};
use crate::numeric::ceil_log2;
use crate::types::ActivityPattern;

fn id_width(n: u64) -> Result<u32> {
    if n < 2 {
        return Err(Error::InvalidParams(
            "two active users need a population of at least 2".into(),
        ));
    }
    Ok(ceil_log2(n))
}

/// The 1-based most significant position (of l = ⌈log2 n⌉ id bits) where the
/// two users' ids differ.
pub fn fixed_encode(pattern: &ActivityPattern, n: u64) -> Result<u32> {
    let l = id_width(n)?;
    if pattern.k() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the two-user code needs exactly 2 active users, got {}",
            pattern.k()
        )));
    }
    if pattern.max_user() as u64 >= n {
        return Err(Error::DimensionMismatch(format!(
            "user {} out of range for n = {n}",
            pattern.max_user()
        )));
    }
    let x = pattern.users()[0] as u64;
    let y = pattern.users()[1] as u64;
    let highest = 63 - (x ^ y).leading_zeros(); // distinct ids, xor != 0
    Ok(l - highest)
}

/// The slot of `user`: its id bit at position t (1 = most significant).
pub fn fixed_decode(t: u32, user: usize, n: u64) -> Result<u32> {
    let l = id_width(n)?;
    if t < 1 || t > l {
        return Err(Error::DimensionMismatch(format!(
            "position {t} outside 1..={l}"
        )));
    }
    if user as u64 >= n {
        return Err(Error::DimensionMismatch(format!(
            "user {user} out of range for n = {n}"
        )));
    }
    Ok(((user as u64 >> (l - t)) & 1) as u32)
}

/// Fixed-length cost of sending the position: ⌈log2 ⌈log2 n⌉⌉ bits.
pub fn fixed_rate_bits(n: u64) -> Result<u32> {
    Ok(ceil_log2(u64::from(id_width(n)?)))
}

/// Distribution of the differing position over uniform pairs: for n = 2^l,
/// Pr(t) = 2^{l−t}/(2^l − 1).
pub fn var_distribution(n: u64) -> Result<SymbolDistribution> {
    let l = id_width(n)?;
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let denom = (2f64.powi(l as i32)) - 1.0;
    let probs = (1..=l)
        .map(|t| 2f64.powi((l - t) as i32) / denom)
        .collect();
    SymbolDistribution::new(probs)
}

/// Exact Huffman average codeword length for the position distribution, as a
/// reduced fraction of bits. Computed with integer weights 2^{l−t}.
pub fn var_exact_average(n: u64) -> Result<(u128, u128)> {
    let l = id_width(n)?;
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let weights: Vec<u128> = (1..=l).map(|t| 1u128 << (l - t)).collect();
    let code = PrefixCode::from_weights(&weights)?;
    code.average_length_exact(&weights)
}

/// Closed-form average rate 2 − (log2(n)+1)/(n−1), as a reduced fraction.
pub fn var_formula_average(n: u64) -> Result<(u128, u128)> {
    let l = id_width(n)?;
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    // 2 − (l+1)/(n−1) = (2n − l − 3)/(n − 1), non-negative for n ≥ 2.
    let num = u128::from(2 * n - u64::from(l) - 3);
    let den = u128::from(n - 1);
    let g = crate::codes::huffman::gcd_u128(num, den);
    Ok((num / g, den / g))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    fn pattern(users: &[usize]) -> ActivityPattern {
        ActivityPattern::new(users.to_vec()).unwrap()
    }

    #[test]
    fn position_of_first_differing_bit() {
        // ids 011 vs 101 differ at the most significant of 3 bits.
        assert_eq!(fixed_encode(&pattern(&[3, 5]), 8).unwrap(), 1);
        // ids 10 vs 11: MSBs equal, next differs.
        assert_eq!(fixed_encode(&pattern(&[2, 3]), 4).unwrap(), 2);
        assert_eq!(fixed_encode(&pattern(&[0, 1]), 2).unwrap(), 1);
    }

    #[test]
    fn decode_reads_the_identified_bit() {
        assert_eq!(fixed_decode(1, 3, 8).unwrap(), 0);
        assert_eq!(fixed_decode(1, 5, 8).unwrap(), 1);
        assert_eq!(fixed_decode(2, 2, 4).unwrap(), 0);
        assert_eq!(fixed_decode(2, 3, 4).unwrap(), 1);
        assert!(fixed_decode(4, 0, 8).is_err());
        assert!(fixed_decode(0, 0, 8).is_err());
    }

    #[test]
    fn every_pair_schedules_without_collision() {
        for n in [2u64, 4, 8, 16, 31, 33] {
            for x in 0..n as usize {
                for y in x + 1..n as usize {
                    let t = fixed_encode(&pattern(&[x, y]), n).unwrap();
                    let sx = fixed_decode(t, x, n).unwrap();
                    let sy = fixed_decode(t, y, n).unwrap();
                    assert_ne!(sx, sy, "n={n} pair ({x},{y}) t={t}");
                }
            }
        }
    }

    #[test]
    fn fixed_rate_is_loglog() {
        assert_eq!(fixed_rate_bits(1 << 20).unwrap(), 5);
        assert_eq!(fixed_rate_bits(8).unwrap(), 2);
        assert_eq!(fixed_rate_bits(2).unwrap(), 0); // single position
    }

    #[test]
    fn distribution_matches_exhaustive_pair_counts() {
        for l in 1..=6u32 {
            let n = 1u64 << l;
            let dist = var_distribution(n).unwrap();
            assert_eq!(dist.len(), l as usize);
            // Count, over all pairs, the position the encoder emits.
            let mut counts = vec![0u64; l as usize];
            for x in 0..n as usize {
                for y in x + 1..n as usize {
                    let t = fixed_encode(&pattern(&[x, y]), n).unwrap();
                    counts[(t - 1) as usize] += 1;
                }
            }
            let total: u64 = counts.iter().sum();
            assert_eq!(u128::from(total), u128::from(n) * u128::from(n - 1) / 2);
            for t in 1..=l {
                // Exact check: count(t)/total == 2^{l−t}/(2^l − 1).
                assert_eq!(
                    u128::from(counts[(t - 1) as usize]) * u128::from((1u64 << l) - 1),
                    (1u128 << (l - t)) * u128::from(total),
                    "n={n}, t={t}"
                );
                let p = dist.probs()[(t - 1) as usize];
                let expect = counts[(t - 1) as usize] as f64 / total as f64;
                assert!((p - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn spec_distributions() {
        let d4 = var_distribution(4).unwrap();
        assert!((d4.probs()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((d4.probs()[1] - 1.0 / 3.0).abs() < 1e-15);
        let d8 = var_distribution(8).unwrap();
        assert!((d8.probs()[0] - 4.0 / 7.0).abs() < 1e-15);
        let d2 = var_distribution(2).unwrap();
        assert_eq!(d2.probs(), &[1.0]);
        assert!(matches!(var_distribution(6), Err(Error::NotPowerOfTwo(6))));
    }

    #[test]
    fn huffman_average_equals_closed_form_exactly() {
        let expected = [
            (2u64, (0u128, 1u128)),
            (4, (1, 1)),
            (8, (10, 7)),
            (16, (5, 3)),
            (32, (56, 31)),
            (64, (17, 9)),
        ];
        for (n, frac) in expected {
            assert_eq!(var_exact_average(n).unwrap(), frac, "n={n}");
            assert_eq!(var_formula_average(n).unwrap(), frac, "n={n}");
        }
        for l in 1..=10u32 {
            let n = 1u64 << l;
            assert_eq!(
                var_exact_average(n).unwrap(),
                var_formula_average(n).unwrap(),
                "n={n}"
            );
        }
    }
}
