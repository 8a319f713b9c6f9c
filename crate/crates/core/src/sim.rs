//! Monte Carlo harness for the three-phase protocol.
//!
//! A trial samples an activity pattern, encodes the feedback message with the
//! chosen code, decodes a slot for every active user, and verifies the
//! resulting schedule. The harness accumulates exact integer statistics —
//! collision and outage counts, fixed-length cost, and the empirical symbol
//! frequencies — and derives the variable-rate figures in a second pass:
//! the empirical entropy and the average length of a Huffman code built from
//! the observed frequencies (within 1 bit of the entropy by construction).
//!
//! Uncovered patterns are an outage, not an abort: they are counted in a
//! dedicated column and excluded from the rate means, mirroring how a real
//! system would fall back to retransmission.
//!
//! Trials are split across workers with per-trial derived seeds and merged
//! by exact summation, so every report is independent of thread count.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::codes::{
    self, greedy_encode, naive_decode, naive_encode, twouser, PrefixCode,
};
use crate::covering::covers;
use crate::error::{Error, Result};
use crate::numeric::{ceil_log2, log2_pow_over_falling};
use crate::phash::{self, PhashOptions};
use crate::rng::{self, mix64, stream_rng};
use crate::types::{ActivityPattern, CodeParams, PartitionFamily};

/// Activity prior for the sampler. Uniform is the model everything else in
/// the crate assumes; the weighted prior exists for exploratory runs.
#[derive(Debug, Clone, Copy)]
pub enum Prior<'a> {
    Uniform,
    /// Per-user positive weights, one per user; patterns are drawn by the
    /// exponential-key method (each user gets key u^{1/w}, the k largest
    /// keys win), which reduces to uniform sampling at equal weights.
    Weighted(&'a [f64]),
}

/// Draws a k-subset of `[0, n)` from the given prior. Uniform sampling is
/// rejection-free (partial shuffle); fixed rng state gives a fixed pattern.
pub fn sample_pattern(
    n: u64,
    k: u64,
    prior: &Prior<'_>,
    rng: &mut impl Rng,
) -> Result<ActivityPattern> {
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let n_us = usize::try_from(n).map_err(|_| Error::TooLarge("n exceeds addressable size".into()))?;
    let k_us = k as usize;
    match prior {
        Prior::Uniform => {
            let users = rand::seq::index::sample(rng, n_us, k_us);
            ActivityPattern::from_unsorted(users.into_iter().collect())
        }
        Prior::Weighted(weights) => {
            if weights.len() != n_us {
                return Err(Error::DimensionMismatch(format!(
                    "{} weights for n = {n} users",
                    weights.len()
                )));
            }
            if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
                return Err(Error::InvalidParams(
                    "pattern weights must be finite and positive".into(),
                ));
            }
            // Keyed sampling: maximizing u^{1/w} is maximizing ln(u)/w.
            let mut keyed: Vec<(f64, usize)> = weights
                .iter()
                .enumerate()
                .map(|(i, &w)| (rng.gen::<f64>().ln() / w, i))
                .collect();
            keyed.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            ActivityPattern::from_unsorted(keyed[..k_us].iter().map(|&(_, i)| i).collect())
        }
    }
}

/// Which feedback code a trial batch exercises.
#[derive(Debug, Clone, Copy)]
pub enum CodeChoice<'a> {
    /// List the k active ids verbatim: k·⌈log2 n⌉ bits, works always.
    Naive,
    /// The explicit two-user code: feed back the first differing id bit.
    TwoUser,
    /// A partition family with the greedy smallest-index encoder.
    Family(&'a PartitionFamily),
    /// Per-pattern perfect hashing; the message is the compressed hash.
    Phash,
}

/// Aggregate outcome of a trial batch.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    pub trials: u64,
    /// Trials that produced a schedule (trials − uncovered_events).
    pub scheduled_trials: u64,
    /// Schedules that put more than m users in some slot.
    pub collision_events: u64,
    /// Patterns the encoder could not cover (outages; excluded from means).
    pub uncovered_events: u64,
    /// Mean fixed-length feedback cost in bits over scheduled trials.
    pub mean_fixed_bits: f64,
    /// Plug-in entropy of the observed symbol frequencies.
    pub empirical_entropy_bits: f64,
    /// Average length of a Huffman code fit to the observed frequencies;
    /// always within [entropy, entropy + 1].
    pub huffman_rate_bits: f64,
    /// Observed (symbol, count) pairs in ascending symbol order.
    pub frequencies: Vec<(u64, u64)>,
}

#[derive(Default)]
struct Acc {
    scheduled: u64,
    collisions: u64,
    uncovered: u64,
    fixed_bits_sum: u128,
    counts: HashMap<u64, u64>,
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        self.scheduled += other.scheduled;
        self.collisions += other.collisions;
        self.uncovered += other.uncovered;
        self.fixed_bits_sum += other.fixed_bits_sum;
        for (symbol, count) in other.counts {
            *self.counts.entry(symbol).or_insert(0) += count;
        }
        self
    }
}

enum Outcome {
    Scheduled {
        symbol: u64,
        bits: u64,
        collided: bool,
    },
    Uncovered,
}

/// Folds a bit or byte sequence into a 64-bit label for the frequency table
/// when the message itself does not fit one word.
fn fold_label(words: impl IntoIterator<Item = u64>) -> u64 {
    let mut h = 0u64;
    for w in words {
        h = mix64(h ^ w);
    }
    h
}

fn schedule_collides(slots: &[u32], m: u64) -> bool {
    let mut per_slot: HashMap<u32, u64> = HashMap::new();
    for &s in slots {
        let c = per_slot.entry(s).or_insert(0);
        *c += 1;
        if *c > m {
            return true;
        }
    }
    false
}

fn run_one(
    code: &CodeChoice<'_>,
    params: &CodeParams,
    pattern: &ActivityPattern,
    build_seed: u64,
) -> Result<Outcome> {
    match code {
        CodeChoice::Naive => {
            let msg = naive_encode(pattern, params)?;
            let slots: Vec<u32> = pattern
                .users()
                .iter()
                .map(|&u| naive_decode(&msg, u))
                .collect::<Result<_>>()?;
            let symbol = if msg.len_bits() <= 64 {
                msg.bits().iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
            } else {
                fold_label(msg.bits().iter().map(|&b| u64::from(b)))
            };
            Ok(Outcome::Scheduled {
                symbol,
                bits: msg.len_bits() as u64,
                collided: schedule_collides(&slots, params.m()),
            })
        }
        CodeChoice::TwoUser => {
            let t = twouser::fixed_encode(pattern, params.n())?;
            let slots: Vec<u32> = pattern
                .users()
                .iter()
                .map(|&u| twouser::fixed_decode(t, u, params.n()))
                .collect::<Result<_>>()?;
            Ok(Outcome::Scheduled {
                symbol: u64::from(t),
                bits: u64::from(twouser::fixed_rate_bits(params.n())?),
                collided: schedule_collides(&slots, params.m()),
            })
        }
        CodeChoice::Family(family) => {
            let msg = match greedy_encode(family, pattern, params.m()) {
                Ok(msg) => msg,
                Err(Error::Uncovered) => return Ok(Outcome::Uncovered),
                Err(e) => return Err(e),
            };
            let slots: Vec<u32> = pattern
                .users()
                .iter()
                .map(|&u| codes::decode(family, msg, u))
                .collect::<Result<_>>()?;
            Ok(Outcome::Scheduled {
                symbol: msg.index as u64,
                bits: u64::from(ceil_log2(family.partitions().len() as u64)),
                collided: schedule_collides(&slots, params.m()),
            })
        }
        CodeChoice::Phash => {
            let b = u32::try_from(params.b())
                .map_err(|_| Error::TooLarge("hash feedback caps b at u32".into()))?;
            let options = PhashOptions {
                m: params.m(),
                ..PhashOptions::default()
            };
            let built = phash::phash_build_with_retry(
                pattern,
                b,
                build_seed,
                phash::DEFAULT_MAX_DISPLACEMENT,
                64,
                &options,
            );
            let (feedback, _) = match built {
                Ok(ok) => ok,
                Err(Error::BuildFailed { .. }) => return Ok(Outcome::Uncovered),
                Err(e) => return Err(e),
            };
            let slots: Vec<u32> = pattern
                .users()
                .iter()
                .map(|&u| phash::phash_eval(&feedback, u as u64))
                .collect();
            let blob = phash::encode_feedback(&feedback)?;
            Ok(Outcome::Scheduled {
                symbol: fold_label(blob.iter().map(|&byte| u64::from(byte))),
                bits: feedback.compressed_bits(),
                collided: schedule_collides(&slots, params.m()),
            })
        }
    }
}

/// Runs `trials` independent encode/decode/verify rounds under the uniform
/// activity prior and reports exact counts plus the two-pass rate figures.
pub fn run_trials(
    code: &CodeChoice<'_>,
    params: &CodeParams,
    trials: u64,
    seed: u64,
) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::EmptyExperiment);
    }
    let acc = (0..trials)
        .into_par_iter()
        .try_fold(Acc::default, |mut acc, trial| -> Result<Acc> {
            let mut rng = stream_rng(seed, rng::domain::TRIAL, trial);
            let pattern = sample_pattern(params.n(), params.k(), &Prior::Uniform, &mut rng)?;
            let build_seed = rng.gen::<u64>();
            match run_one(code, params, &pattern, build_seed)? {
                Outcome::Scheduled {
                    symbol,
                    bits,
                    collided,
                } => {
                    acc.scheduled += 1;
                    acc.fixed_bits_sum += u128::from(bits);
                    acc.collisions += u64::from(collided);
                    *acc.counts.entry(symbol).or_insert(0) += 1;
                }
                Outcome::Uncovered => acc.uncovered += 1,
            }
            Ok(acc)
        })
        .try_reduce(Acc::default, |a, b| Ok(a.merge(b)))?;

    let mut frequencies: Vec<(u64, u64)> = acc.counts.into_iter().collect();
    frequencies.sort_unstable();
    let scheduled = acc.scheduled;
    let (entropy, huffman_rate) = if scheduled == 0 {
        (0.0, 0.0)
    } else {
        let total = scheduled as f64;
        let entropy = frequencies
            .iter()
            .map(|&(_, c)| {
                let p = c as f64 / total;
                -p * p.log2()
            })
            .sum::<f64>();
        let weights: Vec<u64> = frequencies.iter().map(|&(_, c)| c).collect();
        let code = PrefixCode::from_weights(&weights)?;
        let weighted_len: u128 = weights
            .iter()
            .zip(code.lengths())
            .map(|(&c, &len)| u128::from(c) * u128::from(len))
            .sum();
        (entropy, weighted_len as f64 / total)
    };
    Ok(TrialReport {
        trials,
        scheduled_trials: scheduled,
        collision_events: acc.collisions,
        uncovered_events: acc.uncovered,
        mean_fixed_bits: if scheduled == 0 {
            0.0
        } else {
            acc.fixed_bits_sum as f64 / scheduled as f64
        },
        empirical_entropy_bits: entropy,
        huffman_rate_bits: huffman_rate,
        frequencies,
    })
}

// ---------------------------------------------------------------------------
// Greedy-index law under fresh random families.
// ---------------------------------------------------------------------------

/// One support point of the greedy-index experiment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GeometricRow {
    /// Family index (1-based, as emitted by the greedy encoder).
    pub t: u64,
    /// Model probability p(1−p)^{t−1}.
    pub expected: f64,
    pub observed: u64,
    pub empirical: f64,
}

/// Comparison of the observed greedy index against the geometric law it
/// should follow when every trial draws a fresh random family.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricReport {
    pub n: u64,
    pub k: u64,
    pub b: u64,
    pub families: u64,
    /// Per-partition coverage probability p = b^{k̲}/b^k.
    pub coverage_p: f64,
    pub rows: Vec<GeometricRow>,
    /// Families whose first covering index exceeded the truncation cap.
    pub overflow_observed: u64,
    pub overflow_expected: f64,
    /// Total variation distance between the empirical law and the truncated
    /// geometric model (overflow mass included).
    pub tv_distance: f64,
}

/// For a fixed pattern {0, …, k−1}, draws `families` endless streams of
/// fresh uniform partitions and records, per stream, the first index that
/// covers the pattern. The index is geometric with success probability
/// p = b^{k̲}/b^k; the report puts the empirical and model laws side by side.
pub fn greedy_index_law(n: u64, k: u64, b: u64, families: u64, seed: u64) -> Result<GeometricReport> {
    if families == 0 {
        return Err(Error::EmptyExperiment);
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    let p = (-log2_pow_over_falling(b, k)?).exp2();
    // Truncate where the model tail is ~e^{−40}: invisible at any feasible
    // trial count, but kept as an explicit overflow bucket.
    let cap = ((40.0 / p).ceil() as u64).max(16);
    let pattern = ActivityPattern::new((0..k as usize).collect())?;

    let (counts, overflow) = (0..families)
        .into_par_iter()
        .try_fold(
            || (vec![0u64; cap as usize], 0u64),
            |(mut counts, mut overflow), family| -> Result<(Vec<u64>, u64)> {
                let mut rng = stream_rng(seed, rng::domain::GEOMETRIC_FAMILY, family);
                let mut recorded = false;
                for t in 1..=cap {
                    let partition = codes::random::random_partition(n, b, &mut rng)?;
                    if covers(&partition, &pattern, 1)? {
                        counts[(t - 1) as usize] += 1;
                        recorded = true;
                        break;
                    }
                }
                if !recorded {
                    overflow += 1;
                }
                Ok((counts, overflow))
            },
        )
        .try_reduce(
            || (vec![0u64; cap as usize], 0u64),
            |(mut a, ao), (b, bo)| {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x += y;
                }
                Ok((a, ao + bo))
            },
        )?;

    let total = families as f64;
    let rows: Vec<GeometricRow> = (1..=cap)
        .map(|t| GeometricRow {
            t,
            expected: p * (1.0 - p).powi((t - 1) as i32),
            observed: counts[(t - 1) as usize],
            empirical: counts[(t - 1) as usize] as f64 / total,
        })
        .collect();
    let overflow_expected = (1.0 - p).powi(cap as i32);
    let tv_distance = 0.5
        * (rows
            .iter()
            .map(|r| (r.empirical - r.expected).abs())
            .sum::<f64>()
            + (overflow as f64 / total - overflow_expected).abs());
    Ok(GeometricReport {
        n,
        k,
        b,
        families,
        coverage_p: p,
        rows,
        overflow_observed: overflow,
        overflow_expected,
        tv_distance,
    })
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_verified_family;
    use crate::covering::DEFAULT_MAX_PATTERNS;
    use crate::types::Partition;

    fn params(n: u64, k: u64, b: u64, m: u64) -> CodeParams {
        CodeParams::new(n, k, b, m).unwrap()
    }

    #[test]
    fn uniform_sampler_hits_every_pair_equally() {
        // 6 patterns over n=4, k=2; each should appear with frequency
        // 1/6 within 3σ over 10^5 draws.
        let draws = 100_000u64;
        let mut counts = [0u64; 6];
        let index = |users: &[usize]| match (users[0], users[1]) {
            (0, 1) => 0,
            (0, 2) => 1,
            (0, 3) => 2,
            (1, 2) => 3,
            (1, 3) => 4,
            (2, 3) => 5,
            _ => unreachable!("sorted pair over 4 users"),
        };
        for i in 0..draws {
            let mut rng = stream_rng(11, rng::domain::TRIAL, i);
            let pat = sample_pattern(4, 2, &Prior::Uniform, &mut rng).unwrap();
            counts[index(pat.users())] += 1;
        }
        let p = 1.0 / 6.0;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        for (i, &c) in counts.iter().enumerate() {
            let freq = c as f64 / draws as f64;
            assert!(
                (freq - p).abs() < 3.0 * sigma,
                "pattern {i}: freq {freq} vs {p} (3σ = {})",
                3.0 * sigma
            );
        }
    }

    #[test]
    fn sampler_edge_cases() {
        let mut rng = stream_rng(5, rng::domain::TRIAL, 0);
        // k = n: always the full set.
        for _ in 0..20 {
            let pat = sample_pattern(7, 7, &Prior::Uniform, &mut rng).unwrap();
            assert_eq!(pat.users(), &[0, 1, 2, 3, 4, 5, 6]);
        }
        // Fixed seed: reproducible sequence.
        let a: Vec<_> = (0..50)
            .map(|i| {
                let mut rng = stream_rng(9, rng::domain::TRIAL, i);
                sample_pattern(100, 5, &Prior::Uniform, &mut rng).unwrap()
            })
            .collect();
        let b: Vec<_> = (0..50)
            .map(|i| {
                let mut rng = stream_rng(9, rng::domain::TRIAL, i);
                sample_pattern(100, 5, &Prior::Uniform, &mut rng).unwrap()
            })
            .collect();
        assert_eq!(a, b);
        assert!(sample_pattern(4, 0, &Prior::Uniform, &mut rng).is_err());
        assert!(sample_pattern(4, 5, &Prior::Uniform, &mut rng).is_err());
    }

    #[test]
    fn weighted_sampler_prefers_heavy_users() {
        let weights = [10.0, 1.0, 1.0, 1.0];
        let draws = 10_000u64;
        let mut heavy = 0u64;
        for i in 0..draws {
            let mut rng = stream_rng(13, rng::domain::TRIAL, i);
            let pat = sample_pattern(4, 2, &Prior::Weighted(&weights), &mut rng).unwrap();
            assert_eq!(pat.k(), 2);
            if pat.users().contains(&0) {
                heavy += 1;
            }
        }
        // Pairwise win probability for weight 10 vs 1 is 10/11, so user 0
        // joins the pattern in well over 90% of draws.
        assert!(heavy as f64 / draws as f64 > 0.9, "{heavy}/{draws}");
        // Equal weights must still produce exactly-k distinct users.
        let mut rng = stream_rng(13, rng::domain::TRIAL, 0);
        let pat = sample_pattern(5, 3, &Prior::Weighted(&[1.0; 5]), &mut rng).unwrap();
        assert_eq!(pat.k(), 3);
        // Validation.
        assert!(sample_pattern(4, 2, &Prior::Weighted(&[1.0; 3]), &mut rng).is_err());
        assert!(sample_pattern(4, 2, &Prior::Weighted(&[1.0, -1.0, 1.0, 1.0]), &mut rng).is_err());
    }

    #[test]
    fn naive_rate_is_exact() {
        let p = params(8, 3, 3, 1);
        let report = run_trials(&CodeChoice::Naive, &p, 2000, 21).unwrap();
        assert_eq!(report.mean_fixed_bits, 9.0);
        assert_eq!(report.collision_events, 0);
        assert_eq!(report.uncovered_events, 0);
        assert_eq!(report.scheduled_trials, 2000);
        assert!(report.huffman_rate_bits >= report.empirical_entropy_bits);
        assert!(report.huffman_rate_bits <= report.empirical_entropy_bits + 1.0);
    }

    #[test]
    fn twouser_huffman_rate_matches_closed_form() {
        // Exact Huffman average at n = 16 is 5/3; the empirical fit over
        // 10^5 trials lands within 0.02.
        let p = params(16, 2, 2, 1);
        let report = run_trials(&CodeChoice::TwoUser, &p, 100_000, 31).unwrap();
        assert_eq!(report.collision_events, 0);
        assert_eq!(report.uncovered_events, 0);
        assert_eq!(report.mean_fixed_bits, 2.0); // ⌈log2 ⌈log2 16⌉⌉
        assert!(
            (report.huffman_rate_bits - 5.0 / 3.0).abs() <= 0.02,
            "huffman {}",
            report.huffman_rate_bits
        );
        assert!(report.huffman_rate_bits >= report.empirical_entropy_bits);
        assert!(report.huffman_rate_bits <= report.empirical_entropy_bits + 1.0);
    }

    #[test]
    fn single_partition_family_outage_rate() {
        // The lone partition {0,1}|{2,3} covers 4 of the 6 pairs; the two
        // intra-subset pairs are outages: expect uncovered fraction 1/3.
        let family =
            PartitionFamily::new(vec![Partition::new(vec![0, 0, 1, 1], 2).unwrap()]).unwrap();
        let p = params(4, 2, 2, 1);
        let report = run_trials(&CodeChoice::Family(&family), &p, 100_000, 41).unwrap();
        let outage = report.uncovered_events as f64 / report.trials as f64;
        assert!((outage - 1.0 / 3.0).abs() < 0.01, "outage {outage}");
        assert_eq!(report.collision_events, 0);
        assert_eq!(
            report.scheduled_trials + report.uncovered_events,
            report.trials
        );
        // A single-index family costs 0 fixed bits.
        assert_eq!(report.mean_fixed_bits, 0.0);
    }

    #[test]
    fn certified_family_never_collides_or_outages() {
        let p = params(8, 2, 2, 1);
        let built = build_verified_family(&p, 3, 32, DEFAULT_MAX_PATTERNS).unwrap();
        assert!(built.certified);
        let report = run_trials(&CodeChoice::Family(&built.family), &p, 10_000, 51).unwrap();
        assert_eq!(report.collision_events, 0);
        assert_eq!(report.uncovered_events, 0);
        assert_eq!(report.scheduled_trials, 10_000);
        assert!(report.huffman_rate_bits >= report.empirical_entropy_bits);
        assert!(report.huffman_rate_bits <= report.empirical_entropy_bits + 1.0);
    }

    #[test]
    fn phash_trials_schedule_cleanly() {
        let p = params(64, 8, 8, 1);
        let report = run_trials(&CodeChoice::Phash, &p, 500, 61).unwrap();
        assert_eq!(report.collision_events, 0);
        assert_eq!(report.uncovered_events, 0);
        // Every message carries at least the 18-byte header.
        assert!(report.mean_fixed_bits >= 144.0);
    }

    #[test]
    fn zero_trials_is_an_error() {
        let p = params(8, 2, 2, 1);
        assert!(matches!(
            run_trials(&CodeChoice::Naive, &p, 0, 1),
            Err(Error::EmptyExperiment)
        ));
        assert!(matches!(
            greedy_index_law(4, 2, 2, 0, 1),
            Err(Error::EmptyExperiment)
        ));
    }

    #[test]
    fn greedy_index_law_small_k_over_b() {
        // (n=12, k=3, b=3): coverage probability 3!/3^3 = 6/27, so the
        // index-1 frequency sits at 0.2222 within ±0.004 over 10^5 families.
        let report = greedy_index_law(12, 3, 3, 100_000, 71).unwrap();
        assert!((report.coverage_p - 6.0 / 27.0).abs() < 1e-12);
        let first = &report.rows[0];
        assert_eq!(first.t, 1);
        assert!(
            (first.empirical - 6.0 / 27.0).abs() < 0.004,
            "symbol-1 {}",
            first.empirical
        );
        assert!(report.tv_distance < 0.01, "tv {}", report.tv_distance);
    }

    #[test]
    fn greedy_index_law_is_geometric_half() {
        // (k=2, b=2): p = 1/2. Per-symbol agreement within 3σ for t ≤ 8 and
        // small total variation distance.
        let families = 100_000u64;
        let report = greedy_index_law(8, 2, 2, families, 81).unwrap();
        assert!((report.coverage_p - 0.5).abs() < 1e-12);
        for row in report.rows.iter().take(8) {
            let sigma = (row.expected * (1.0 - row.expected) / families as f64).sqrt();
            assert!(
                (row.empirical - row.expected).abs() < 3.0 * sigma,
                "t = {}: {} vs {} (3σ = {})",
                row.t,
                row.empirical,
                row.expected,
                3.0 * sigma
            );
        }
        assert!(report.tv_distance < 0.01, "tv {}", report.tv_distance);
        // Counts are exact integers: rows plus overflow account for every family.
        let counted: u64 = report.rows.iter().map(|r| r.observed).sum();
        assert_eq!(counted + report.overflow_observed, families);
    }

    #[test]
    fn reports_are_thread_count_independent() {
        // The accumulators are exact sums, so a serial pool and the default
        // pool must agree bit for bit.
        let p = params(16, 2, 2, 1);
        let parallel = run_trials(&CodeChoice::TwoUser, &p, 5000, 91).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let serial = pool.install(|| run_trials(&CodeChoice::TwoUser, &p, 5000, 91).unwrap());
        assert_eq!(parallel.frequencies, serial.frequencies);
        assert_eq!(parallel.mean_fixed_bits, serial.mean_fixed_bits);
        assert_eq!(parallel.huffman_rate_bits, serial.huffman_rate_bits);
        assert_eq!(parallel.empirical_entropy_bits, serial.empirical_entropy_bits);
    }
}
