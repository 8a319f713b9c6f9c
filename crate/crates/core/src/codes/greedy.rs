//! The greedy encoder, its per-user decoder, and its output statistics.
//!
//! Among all encoders consistent with a covering family the greedy one —
//! emit the smallest family index whose partition covers the pattern —
//! skews its output toward low indices, which is what makes entropy coding
//! of the feedback effective.

use rayon::prelude::*;

use crate::codes::huffman::SymbolDistribution;
use crate::covering::{next_combination, unrank_combination};
use crate::error::{Error, Result};
use crate::numeric::binomial_u128;
use crate::types::{ActivityPattern, CodeParams, FeedbackMessage, PartitionFamily};

/// The smallest family index whose partition schedules the pattern within
/// capacity `m`; `Uncovered` when no member does.
pub fn greedy_encode(
    family: &PartitionFamily,
    pattern: &ActivityPattern,
    m: u64,
) -> Result<FeedbackMessage> {
    if pattern.max_user() >= family.n() {
        return Err(Error::DimensionMismatch(format!(
            "pattern user {} out of range for n = {}",
            pattern.max_user(),
            family.n()
        )));
    }
    let mut scratch = vec![0u64; family.b() as usize];
    for (t, partition) in family.partitions().iter().enumerate() {
        let assignment = partition.assignment();
        let mut placed = 0usize;
        let mut ok = true;
        for &u in pattern.users() {
            let s = assignment[u] as usize;
            scratch[s] += 1;
            placed += 1;
            if scratch[s] > m {
                ok = false;
                break;
            }
        }
        for &u in &pattern.users()[..placed] {
            scratch[assignment[u] as usize] = 0;
        }
        if ok {
            return Ok(FeedbackMessage { index: t });
        }
    }
    Err(Error::Uncovered)
}

/// The slot of `user` in the partition the feedback points at. O(1).
pub fn decode(family: &PartitionFamily, msg: FeedbackMessage, user: usize) -> Result<u32> {
    family.get(msg.index)?.slot_of(user)
}

/// Exact greedy-output counts over all `C(n, k)` patterns: per-index counts
/// plus the number of patterns no member covers.
pub fn encoder_output_counts(
    family: &PartitionFamily,
    k: u64,
    m: u64,
    max_patterns: u64,
) -> Result<(Vec<u64>, u64)> {
    let n = family.n();
    let total_big = binomial_u128(n as u64, k).unwrap_or(u128::MAX);
    if total_big > u128::from(max_patterns) {
        return Err(Error::TooLarge(format!(
            "C({n}, {k}) = {total_big} patterns exceed the cap of {max_patterns}"
        )));
    }
    let total = total_big as u64;
    let k = k as usize;
    if k == 0 || k > n || total == 0 {
        return Err(Error::InvalidParams(format!(
            "cannot enumerate {k}-patterns over {n} users"
        )));
    }

    let chunk = (total.div_ceil(4096)).max(4096);
    let (counts, uncovered) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|ci| {
            let lo = ci * chunk;
            let hi = (lo + chunk).min(total);
            let mut counts = vec![0u64; family.len()];
            let mut uncovered = 0u64;
            let mut users = unrank_combination(lo, n, k);
            let mut scratch = vec![0u64; family.b() as usize];
            for rank in lo..hi {
                match greedy_index(family, &users, m, &mut scratch) {
                    Some(t) => counts[t] += 1,
                    None => uncovered += 1,
                }
                if rank + 1 < hi {
                    next_combination(&mut users, n);
                }
            }
            (counts, uncovered)
        })
        .reduce(
            || (vec![0u64; family.len()], 0u64),
            |(mut ca, ua), (cb, ub)| {
                for (a, b) in ca.iter_mut().zip(&cb) {
                    *a += b;
                }
                (ca, ua + ub)
            },
        );
    Ok((counts, uncovered))
}

fn greedy_index(
    family: &PartitionFamily,
    users: &[usize],
    m: u64,
    scratch: &mut [u64],
) -> Option<usize> {
    'parts: for (t, partition) in family.partitions().iter().enumerate() {
        let assignment = partition.assignment();
        if m == 1 && partition.b() <= 64 {
            let mut seen = 0u64;
            for &u in users {
                let bit = 1u64 << assignment[u];
                if seen & bit != 0 {
                    continue 'parts;
                }
                seen |= bit;
            }
            return Some(t);
        }
        let mut placed = 0usize;
        let mut ok = true;
        for &u in users {
            let s = assignment[u] as usize;
            scratch[s] += 1;
            placed += 1;
            if scratch[s] > m {
                ok = false;
                break;
            }
        }
        for &u in &users[..placed] {
            scratch[assignment[u] as usize] = 0;
        }
        if ok {
            return Some(t);
        }
    }
    None
}

/// The exact greedy-output distribution under a uniform pattern; mass that
/// is missing (total < 1) is the uncovered fraction.
pub fn encoder_output_distribution(
    family: &PartitionFamily,
    k: u64,
    m: u64,
    max_patterns: u64,
) -> Result<SymbolDistribution> {
    let (counts, _uncovered) = encoder_output_counts(family, k, m, max_patterns)?;
    let total = binomial_u128(family.n() as u64, k).expect("guarded above") as f64;
    SymbolDistribution::new(counts.iter().map(|&c| c as f64 / total).collect())
}

/// Local-search heuristic for the minimum-entropy encoder at toy scale.
///
/// Every covered pattern may map to any family index that covers it; this
/// starts from the greedy assignment and greedily reassigns single patterns
/// while the empirical output entropy strictly drops. A heuristic: it
/// certifies nothing about the true optimum. Guarded to n ≤ 6.
pub fn min_entropy_search(
    family: &PartitionFamily,
    params: &CodeParams,
) -> Result<(SymbolDistribution, f64)> {
    if family.n() as u64 != params.n() || u64::from(family.b()) != params.b() {
        return Err(Error::DimensionMismatch(
            "family and params disagree on (n, b)".into(),
        ));
    }
    if params.n() > 6 {
        return Err(Error::TooLarge(
            "minimum-entropy search is exponential; guarded to n <= 6".into(),
        ));
    }
    let n = family.n();
    let k = params.k() as usize;
    let m = params.m();
    let total = binomial_u128(n as u64, k as u64).unwrap() as u64;

    // Candidate indices per pattern, and the greedy start.
    let mut candidates: Vec<Vec<usize>> = Vec::new();
    let mut assignment: Vec<usize> = Vec::new();
    let mut users: Vec<usize> = (0..k).collect();
    for rank in 0..total {
        let pat = ActivityPattern::new(users.clone())?;
        let mut cands = Vec::new();
        for (t, partition) in family.partitions().iter().enumerate() {
            if crate::covering::covers(partition, &pat, m)? {
                cands.push(t);
            }
        }
        if let Some(&first) = cands.first() {
            assignment.push(first);
        } else {
            assignment.push(usize::MAX); // uncovered: fixed, never reassigned
        }
        candidates.push(cands);
        if rank + 1 < total {
            next_combination(&mut users, n);
        }
    }

    let covered: u64 = assignment.iter().filter(|&&a| a != usize::MAX).count() as u64;
    let mut counts = vec![0u64; family.len()];
    for &a in &assignment {
        if a != usize::MAX {
            counts[a] += 1;
        }
    }
    let entropy = |counts: &[u64]| -> f64 {
        let tot = covered as f64;
        counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / tot;
                -p * p.log2()
            })
            .sum()
    };

    if covered > 0 {
        // Steepest-descent single-pattern moves until no move helps.
        loop {
            let current = entropy(&counts);
            let mut best: Option<(f64, usize, usize)> = None;
            for (pi, cands) in candidates.iter().enumerate() {
                let from = assignment[pi];
                if from == usize::MAX {
                    continue;
                }
                for &to in cands {
                    if to == from {
                        continue;
                    }
                    counts[from] -= 1;
                    counts[to] += 1;
                    let h = entropy(&counts);
                    counts[from] += 1;
                    counts[to] -= 1;
                    if h < current - 1e-12
                        && best.map_or(true, |(bh, bp, bt)| {
                            h < bh - 1e-12 || (h <= bh + 1e-12 && (pi, to) < (bp, bt))
                        })
                    {
                        best = Some((h, pi, to));
                    }
                }
            }
            match best {
                Some((_, pi, to)) => {
                    counts[assignment[pi]] -= 1;
                    counts[to] += 1;
                    assignment[pi] = to;
                }
                None => break,
            }
        }
    }

    let dist = SymbolDistribution::new(
        counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect(),
    )?;
    let h = dist.entropy_bits();
    Ok((dist, h))
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{covers, DEFAULT_MAX_PATTERNS};
    use crate::types::Partition;
    use proptest::prelude::*;

    fn family(assigns: &[&[u32]], b: u32) -> PartitionFamily {
        PartitionFamily::new(
            assigns
                .iter()
                .map(|a| Partition::new(a.to_vec(), b).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn pattern(users: &[usize]) -> ActivityPattern {
        ActivityPattern::new(users.to_vec()).unwrap()
    }

    #[test]
    fn greedy_picks_the_first_covering_index() {
        let f = family(&[&[0, 0, 1, 1], &[0, 1, 0, 1]], 2);
        assert_eq!(greedy_encode(&f, &pattern(&[0, 2]), 1).unwrap().index, 0);
        assert_eq!(greedy_encode(&f, &pattern(&[0, 1]), 1).unwrap().index, 1);
        let alone = family(&[&[0, 0, 1, 1]], 2);
        assert!(matches!(
            greedy_encode(&alone, &pattern(&[0, 1]), 1),
            Err(Error::Uncovered)
        ));
    }

    #[test]
    fn decode_reads_the_partition_entry() {
        let f = family(&[&[0, 0, 1, 1]], 2);
        let msg = FeedbackMessage { index: 0 };
        assert_eq!(decode(&f, msg, 2).unwrap(), 1);
        assert_eq!(decode(&f, msg, 0).unwrap(), 0);
        // The decoder reconstructs the whole partition column.
        let col: Vec<u32> = (0..4).map(|u| decode(&f, msg, u).unwrap()).collect();
        assert_eq!(col, vec![0, 0, 1, 1]);
        assert!(decode(&f, FeedbackMessage { index: 1 }, 0).is_err());
    }

    #[test]
    fn output_counts_match_hand_enumeration() {
        let f = family(&[&[0, 0, 1, 1], &[0, 1, 0, 1]], 2);
        let (counts, uncovered) = encoder_output_counts(&f, 2, 1, 1000).unwrap();
        assert_eq!(counts, vec![4, 2]);
        assert_eq!(uncovered, 0);
        let dist = encoder_output_distribution(&f, 2, 1, 1000).unwrap();
        assert!((dist.probs()[0] - 4.0 / 6.0).abs() < 1e-15);
        assert!((dist.probs()[1] - 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(dist.residual(), 0.0);

        let alone = family(&[&[0, 0, 1, 1]], 2);
        let (counts, uncovered) = encoder_output_counts(&alone, 2, 1, 1000).unwrap();
        assert_eq!((counts, uncovered), (vec![4], 2));
        let dist = encoder_output_distribution(&alone, 2, 1, 1000).unwrap();
        assert!((dist.residual() - 2.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn min_entropy_search_cannot_beat_zero_and_never_worsens_greedy() {
        // A family whose first two partitions both cover everything lets the
        // search pile all mass on one symbol.
        let f = family(&[&[0, 1, 2, 3], &[3, 2, 1, 0], &[0, 0, 1, 1]], 4);
        let p = CodeParams::new(4, 2, 4, 1).unwrap();
        let (dist, h) = min_entropy_search(&f, &p).unwrap();
        assert!(h <= 1e-12, "entropy {h}, dist {:?}", dist.probs());

        // Guard: n too large.
        let big = CodeParams::new(7, 2, 4, 1).unwrap();
        let fb = family(&[&[0, 1, 2, 3, 0, 1, 2]], 4);
        assert!(min_entropy_search(&fb, &big).is_err());
    }

    #[test]
    fn min_entropy_no_worse_than_greedy_on_covering_family() {
        let f = family(&[&[0, 0, 1, 1], &[0, 1, 0, 1]], 2);
        let p = CodeParams::new(4, 2, 2, 1).unwrap();
        let greedy = encoder_output_distribution(&f, 2, 1, 1000).unwrap();
        let (_, h) = min_entropy_search(&f, &p).unwrap();
        assert!(h <= greedy.entropy_bits() + 1e-12);
    }

    proptest! {
        /// Greedy minimality and collision-freeness on random families.
        #[test]
        fn greedy_is_minimal_and_collision_free(
            seed in 0u64..500,
            t in 1usize..6,
        ) {
            let p = CodeParams::new(7, 3, 3, 1).unwrap();
            let f = crate::codes::random::random_family(&p, t as u64, seed).unwrap();
            for users in crate::covering::combinations(7, 3) {
                let pat = pattern(&users);
                match greedy_encode(&f, &pat, 1) {
                    Ok(msg) => {
                        prop_assert!(covers(&f.partitions()[msg.index], &pat, 1).unwrap());
                        for tau in 0..msg.index {
                            prop_assert!(!covers(&f.partitions()[tau], &pat, 1).unwrap());
                        }
                        // Decoded slots are pairwise distinct at m = 1.
                        let mut slots: Vec<u32> = users
                            .iter()
                            .map(|&u| decode(&f, msg, u).unwrap())
                            .collect();
                        slots.sort_unstable();
                        slots.dedup();
                        prop_assert_eq!(slots.len(), users.len());
                    }
                    Err(Error::Uncovered) => {
                        for part in f.partitions() {
                            prop_assert!(!covers(part, &pat, 1).unwrap());
                        }
                    }
                    Err(e) => return Err(TestCaseError::fail(format!("unexpected {e}"))),
                }
            }
        }

        #[test]
        fn counts_total_equals_pattern_count(seed in 0u64..200) {
            let p = CodeParams::new(8, 2, 2, 1).unwrap();
            let f = crate::codes::random::random_family(&p, 4, seed).unwrap();
            let (counts, uncovered) = encoder_output_counts(&f, 2, 1, DEFAULT_MAX_PATTERNS).unwrap();
            let total: u64 = counts.iter().sum::<u64>() + uncovered;
            prop_assert_eq!(total, 28);
        }
    }
}
