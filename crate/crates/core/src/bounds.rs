//! Closed-form rate bounds for collision-free scheduling feedback.
//!
//! Every bound here is evaluated in log2 space. Factorials go through the
//! log-gamma routine in [`crate::numeric`], and ratios like `n^k / n-falling-k`
//! are accumulated term by term so that instances as large as `n = 10^9`,
//! `k = 10^6` evaluate without overflow or catastrophic cancellation.
//!
//! Two families of closed forms appear:
//!
//! * **simplified** forms — the printed bounds with Stirling terms expanded
//!   (these are what the trade-off and multislot tables plot), and
//! * **exact** forms — the unsimplified union-bound value
//!   `log2(ln C(n,k) / p)` where `p` is the probability that one uniformly
//!   random assignment of the `k` active users into `b` slots respects the
//!   per-slot capacity `m`. The exact form is tighter but has no closed
//!   shape; reports carry both, labelled by `form`.
//!
//! Converse (lower) bounds come in three flavours: a volume (counting)
//! argument, a double-logarithmic exclusion argument, and the
//! Fredman–Komlós perfect-hashing bounds. Bounds that are only defined in a
//! particular regime (`b = k`, `b > k`, or `k = m·b`) are reported as
//! explicit not-applicable markers outside it, never extrapolated.

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::naive::naive_rate_bits;
use crate::codes::random::log2_inv_coverage_prob;
use crate::error::{Error, Result};
use crate::numeric::{self, LOG2_E};
use crate::types::CodeParams;

use std::f64::consts::{LN_2, TAU};

/// `½·log2(2π·x)`.
fn half_log2_two_pi(x: u64) -> f64 {
    0.5 * (TAU * x as f64).log2()
}

/// `log2(k^k / k!)`, the log of the balanced occupancy count.
fn log2_kk_over_kfact(k: u64) -> f64 {
    (k as f64 * (k as f64).ln() - numeric::ln_factorial(k)) / LN_2
}

/// `(b−k)·log2(1−k/b)` for `b ≥ k`, with the `b = k` point defined as its
/// limit 0 (the convention that keeps the trade-off curves defined at the
/// left endpoint).
fn slot_surplus_log2(b: u64, k: u64) -> f64 {
    if b == k {
        0.0
    } else {
        (b - k) as f64 * (-(k as f64) / b as f64).ln_1p() / LN_2
    }
}

fn check_n_k(n: u64, k: u64, min_k: u64) -> Result<()> {
    if k < min_k {
        return Err(Error::DomainError(format!(
            "bound needs k >= {min_k}, got k = {k}"
        )));
    }
    if k > n {
        return Err(Error::DomainError(format!(
            "bound needs k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Achievability, b = k.
// ---------------------------------------------------------------------------

/// Simplified fixed-length achievability for `b = k` slots:
/// `k·log2 e + log2(ln(n/k) + 1) + ½·log2(k/2π)` bits.
pub fn fixed_achieve(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 2)?;
    let kf = k as f64;
    Ok(kf * LOG2_E + ((n as f64 / kf).ln() + 1.0).log2() + 0.5 * (kf / TAU).log2())
}

/// Unsimplified fixed-length achievability for `b = k`:
/// `log2(ln C(n,k) · k^k/k!)`, the exact union-bound family size.
pub fn fixed_achieve_exact(n: u64, k: u64) -> Result<f64> {
    achieve_exact(n, k, k, 1)
}

/// Exact union-bound achievability for general `(b, m)`:
/// `log2(ln C(n,k) / p)` with `p` the single-partition coverage probability.
///
/// Needs `n > k` so that `ln C(n,k) > 0`.
pub fn achieve_exact(n: u64, k: u64, b: u64, m: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    if n == k {
        return Err(Error::DomainError(
            "exact achievability needs n > k (log of ln 1 otherwise)".into(),
        ));
    }
    if m.checked_mul(b).is_none_or(|c| c < k) {
        return Err(Error::DomainError(format!(
            "capacity m*b = {m}*{b} cannot hold k = {k} users"
        )));
    }
    let ln_c = numeric::ln_binomial(n, k)?;
    Ok(ln_c.log2() + log2_inv_coverage_prob(b, k, m)?)
}

/// Variable-length achievability for `b = k`: `(k+1)·log2 e` bits,
/// independent of `n`.
pub fn var_achieve(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    Ok((k + 1) as f64 * LOG2_E)
}

// ---------------------------------------------------------------------------
// Converses, b = k.
// ---------------------------------------------------------------------------

/// Volume converse for fixed-length codes at `b = k`:
/// `k·log2 e − log2(n^k/n^(falling k)) − ½·log2(2πk) − log2(e)/(12k)`.
pub fn fixed_converse_volume(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    let kf = k as f64;
    Ok(kf * LOG2_E
        - numeric::log2_pow_over_falling(n, k)?
        - half_log2_two_pi(k)
        - LOG2_E / (12.0 * kf))
}

/// Volume converse for variable-length codes at `b = k` (entropy form): the
/// volume bracket scaled by `1 − n^k·k!/(n^(falling k)·k^k)`, minus
/// `log2(n^k/n^(falling k))`.
pub fn var_converse_volume(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    let kf = k as f64;
    let log2_ratio_n = numeric::log2_pow_over_falling(n, k)?;
    // n^k·k!/(n^(falling k)·k^k) in log2 space; ≤ 1 because n ≥ k.
    let factor = 1.0 - (log2_ratio_n - log2_kk_over_kfact(k)).exp2();
    let bracket = kf * LOG2_E - half_log2_two_pi(k) - LOG2_E / (12.0 * kf);
    Ok(factor * bracket - log2_ratio_n)
}

/// Large-`n` limit of [`var_converse_volume`]: `(1 − k!/k^k)·log2(k^k/k!)`.
pub fn var_converse_volume_limit(k: u64) -> Result<f64> {
    if k < 1 {
        return Err(Error::DomainError("limit needs k >= 1".into()));
    }
    let log2_kk = log2_kk_over_kfact(k);
    Ok((1.0 - (-log2_kk).exp2()) * log2_kk)
}

/// Double-logarithmic exclusion converse at `b = k`:
/// `log2 log2(n/(k−1)) + log2 k − 1` bits.
pub fn fixed_converse_loglog(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 2)?;
    Ok((n as f64 / (k - 1) as f64).log2().log2() + (k as f64).log2() - 1.0)
}

/// The partition-count form of the exclusion argument:
/// `T* ≥ (log2 n − log2(k−1)) / (log2 k − log2(k−1))` (a count, not bits).
pub fn snir_t(n: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 2)?;
    let num = (n as f64).log2() - ((k - 1) as f64).log2();
    let den = (k as f64).log2() - ((k - 1) as f64).log2();
    Ok(num / den)
}

// ---------------------------------------------------------------------------
// Slot/rate trade-off, b ≥ k (one user per slot).
// ---------------------------------------------------------------------------

/// Fixed-length achievability with `b ≥ k` slots:
/// `k·log2 e + log2(ln(n/k)+1) + (b−k)·log2(1−k/b) + log2 k + 1`.
pub fn tradeoff_fixed_achieve(n: u64, b: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    if b < k {
        return Err(Error::DomainError(format!(
            "trade-off bounds need b >= k, got b = {b}, k = {k}"
        )));
    }
    let kf = k as f64;
    Ok(kf * LOG2_E
        + ((n as f64 / kf).ln() + 1.0).log2()
        + slot_surplus_log2(b, k)
        + kf.log2()
        + 1.0)
}

/// Variable-length achievability with `b ≥ k` slots:
/// `(k+1)·log2 e + (b−k)·log2(1−k/b) + 1`.
pub fn tradeoff_var_achieve(n: u64, b: u64, k: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    if b < k {
        return Err(Error::DomainError(format!(
            "trade-off bounds need b >= k, got b = {b}, k = {k}"
        )));
    }
    Ok((k + 1) as f64 * LOG2_E + slot_surplus_log2(b, k) + 1.0)
}

fn check_tradeoff_converse(n: u64, b: u64, k: u64) -> Result<()> {
    check_n_k(n, k, 1)?;
    if b <= k {
        return Err(Error::DomainError(format!(
            "trade-off converses need b > k (use the b = k volume bound), got b = {b}, k = {k}"
        )));
    }
    if b > n {
        return Err(Error::DomainError(format!(
            "trade-off converses need b <= n, got b = {b}, n = {n}"
        )));
    }
    Ok(())
}

/// Fixed-length volume converse with `k < b ≤ n` slots:
/// `k·log2 e − log2(n^k/n^(falling k)) + (b−k+½)·log2(1−k/b)`.
pub fn tradeoff_fixed_converse(n: u64, b: u64, k: u64) -> Result<f64> {
    check_tradeoff_converse(n, b, k)?;
    let half_term = ((b - k) as f64 + 0.5) * (-(k as f64) / b as f64).ln_1p() / LN_2;
    Ok(k as f64 * LOG2_E - numeric::log2_pow_over_falling(n, k)? + half_term)
}

/// Variable-length volume converse with `k < b ≤ n` slots: the fixed-length
/// bracket scaled by `1 − n^k·b^(falling k)/(n^(falling k)·b^k)`, minus
/// `log2(n^k/n^(falling k))`.
pub fn tradeoff_var_converse(n: u64, b: u64, k: u64) -> Result<f64> {
    check_tradeoff_converse(n, b, k)?;
    let log2_ratio_n = numeric::log2_pow_over_falling(n, k)?;
    let log2_ratio_b = numeric::log2_pow_over_falling(b, k)?;
    // n^k·b^(falling k)/(n^(falling k)·b^k) ≤ 1 because b ≤ n.
    let factor = 1.0 - (log2_ratio_n - log2_ratio_b).exp2();
    let half_term = ((b - k) as f64 + 0.5) * (-(k as f64) / b as f64).ln_1p() / LN_2;
    Ok(factor * (k as f64 * LOG2_E + half_term) - log2_ratio_n)
}

// ---------------------------------------------------------------------------
// Multislot bounds, m users per slot, b = k/m.
// ---------------------------------------------------------------------------

/// Per-user linear coefficient of the multislot achievability:
/// `½·log2(2πm) + log2(e)/(12m)`. At `m = 1` this is within 0.0033 of
/// `log2 e` — the two balanced forms differ only in Stirling truncation.
pub fn multislot_coefficient(m: u64) -> Result<f64> {
    if m < 1 {
        return Err(Error::DomainError("multislot bounds need m >= 1".into()));
    }
    Ok(half_log2_two_pi(m) + LOG2_E / (12.0 * m as f64))
}

/// Converse-side analogue of [`multislot_coefficient`]:
/// `½·log2(2πm) + log2(e)/(12m+1)`.
fn multislot_coefficient_converse(m: u64) -> f64 {
    half_log2_two_pi(m) + LOG2_E / (12.0 * m as f64 + 1.0)
}

/// Fixed-length multislot achievability:
/// `(k/m)·(½·log2(2πm) + log2(e)/12m) + log2(ln(n/k)+1)`.
pub fn multislot_fixed_achieve(n: u64, k: u64, m: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    let kf = k as f64;
    Ok(kf / m as f64 * multislot_coefficient(m)? + ((n as f64 / kf).ln() + 1.0).log2())
}

/// Variable-length multislot achievability:
/// `((k+1)/m)·(½·log2(2πm) + log2(e)/12m)`.
pub fn multislot_var_achieve(n: u64, k: u64, m: u64) -> Result<f64> {
    check_n_k(n, k, 1)?;
    Ok((k + 1) as f64 / m as f64 * multislot_coefficient(m)?)
}

/// Derives the balanced slot count `b = k/m`, rejecting non-divisible pairs.
fn balanced_slots(k: u64, m: u64) -> Result<u64> {
    if m < 1 || k < 1 {
        return Err(Error::DomainError("multislot bounds need k, m >= 1".into()));
    }
    if k % m != 0 {
        return Err(Error::DomainError(format!(
            "balanced multislot bounds need m | k, got k = {k}, m = {m}"
        )));
    }
    Ok(k / m)
}

/// `log2 γ` where `γ = ∏_{l=1..m} (n'−l·b)^b / (n'−l·b)^(falling b)` with
/// `n' = ⌊n/k⌋·k` and `b = k/m`. The occupancy slack of the volume converse;
/// `γ → 1` (so `log2 γ → 0`) as `n → ∞` at fixed `k, m`.
pub fn log2_gamma_factor(n: u64, k: u64, m: u64) -> Result<f64> {
    let b = balanced_slots(k, m)?;
    check_n_k(n, k, 1)?;
    let n_prime = (n / k) * k;
    if n_prime < m * b + b {
        return Err(Error::DomainError(format!(
            "occupancy factor needs floor(n/k)*k >= (m+1)*b, got n' = {n_prime}, b = {b}, m = {m}"
        )));
    }
    let mut total = 0.0;
    for l in 1..=m {
        total += numeric::log2_pow_over_falling(n_prime - l * b, b)?;
    }
    Ok(total)
}

/// Fixed-length multislot volume converse:
/// `(k/m)·(½·log2(2πm) + log2(e)/(12m+1)) − ½·log2(2πk) − log2(e)/(12k) − log2 γ`.
pub fn multislot_fixed_converse(n: u64, k: u64, m: u64) -> Result<f64> {
    let log2_gamma = log2_gamma_factor(n, k, m)?;
    let kf = k as f64;
    Ok(kf / m as f64 * multislot_coefficient_converse(m)
        - half_log2_two_pi(k)
        - LOG2_E / (12.0 * kf)
        - log2_gamma)
}

/// Variable-length multislot volume converse: the fixed-length bracket scaled
/// by `1 − γ·k!/(b^k·(m!)^b)`, then the same tail terms subtracted.
pub fn multislot_var_converse(n: u64, k: u64, m: u64) -> Result<f64> {
    let b = balanced_slots(k, m)?;
    let log2_gamma = log2_gamma_factor(n, k, m)?;
    let kf = k as f64;
    // γ·k!/(b^k·(m!)^b) in log2 space; the second factor is the balanced
    // coverage probability, so the product stays in (0, 1] for n' ≥ k.
    let factor = 1.0 - (log2_gamma - log2_inv_coverage_prob(b, k, m)?).exp2();
    Ok(factor * (kf / m as f64 * multislot_coefficient_converse(m))
        - half_log2_two_pi(k)
        - LOG2_E / (12.0 * kf)
        - log2_gamma)
}

/// Multislot exclusion converse: `log2 log2(n/(k−1)) + log2 b − 1`, for the
/// balanced regime `k = m·b`. (For `k < m·b` the family can be trivially
/// small — a singleton family covers everything once `b` or `m` is generous —
/// so the printed expression is not a valid lower bound there and is
/// rejected.)
pub fn multislot_loglog(n: u64, k: u64, m: u64, b: u64) -> Result<f64> {
    check_n_k(n, k, 2)?;
    if m.checked_mul(b) != Some(k) {
        return Err(Error::DomainError(format!(
            "exclusion bound needs k = m*b exactly, got k = {k}, m = {m}, b = {b}"
        )));
    }
    Ok((n as f64 / (k - 1) as f64).log2().log2() + (b as f64).log2() - 1.0)
}

// ---------------------------------------------------------------------------
// Perfect-hashing (Fredman–Komlós) bounds.
// ---------------------------------------------------------------------------

/// Fredman–Komlós bounds on the size of an `(n, b, k)` perfect hash family,
/// returned as `(lower, upper)` in bits (`log2 T*`).
///
/// * lower: `log2 [ log2 n / min_{1≤s≤k−1} g(b,s)·log2((b−s+1)/(k−s)) ]`
/// * upper: `log2 [ (k−1)·log2 n / log2(1/(1−g(b,k))) ]`
///
/// with `g(b,s) = ∏_{j<s} (1−j/b)`. Everything runs in log space: `g(b,k)`
/// underflows f64 already at `b = k ≈ 500`, so the upper bound switches to
/// the asymptotic `−log2(1−g) ≈ g·log2 e` once `ln g < −690`.
///
/// Both expressions are asymptotic in `n`; at small `n` the printed lower
/// value may exceed the upper one, and callers must not assume an ordering.
pub fn fk_bounds(n: u64, b: u64, k: u64) -> Result<(f64, f64)> {
    if k < 2 {
        return Err(Error::DomainError(format!(
            "perfect-hash bounds need k >= 2, got k = {k}"
        )));
    }
    if b < k {
        return Err(Error::DomainError(format!(
            "perfect-hash bounds need b >= k (g(b,k) = 0 otherwise), got b = {b}, k = {k}"
        )));
    }
    if n < b {
        return Err(Error::DomainError(format!(
            "an (n, b, k) hash family needs n >= b, got n = {n}, b = {b}"
        )));
    }
    let log2_log2_n = (n as f64).log2().log2();

    // Lower bound: scan s, keeping ln g(b,s) incrementally. Track the
    // natural log of each denominator term g(b,s)·log2((b−s+1)/(k−s)),
    // since g itself underflows for large s.
    let mut ln_g = 0.0f64; // ln g(b,1) = ln(1 − 0/b)
    let mut min_ln_term = f64::INFINITY;
    for s in 1..k {
        let ratio_log2 = (((b - s + 1) as f64) / ((k - s) as f64)).log2();
        if ratio_log2 > 0.0 {
            min_ln_term = min_ln_term.min(ln_g + ratio_log2.ln());
        }
        ln_g += (-(s as f64) / b as f64).ln_1p();
    }
    if !min_ln_term.is_finite() {
        return Err(Error::DomainError(
            "perfect-hash lower bound: every separation term degenerated to log 1 = 0".into(),
        ));
    }
    let lower = log2_log2_n - min_ln_term / LN_2;

    // Upper bound: after the loop ln_g = ln g(b,k).
    let log2_d = if ln_g < -690.0 {
        // −log2(1−g) ≈ g·log2 e for tiny g; stay in log space.
        ln_g / LN_2 + LOG2_E.log2()
    } else {
        (-(-ln_g.exp()).ln_1p() / LN_2).log2()
    };
    let upper = ((k - 1) as f64).log2() + log2_log2_n - log2_d;
    Ok((lower, upper))
}

// ---------------------------------------------------------------------------
// Reference overheads and scaling factors.
// ---------------------------------------------------------------------------

/// Retransmission overhead of slotted-ALOHA-style access at throughput `eta`:
/// `payload_bits · k · (1/eta − 1)`.
pub fn aloha_overhead(payload_bits: f64, k: u64, eta: f64) -> Result<f64> {
    if !payload_bits.is_finite() || payload_bits < 0.0 {
        return Err(Error::DomainError(format!(
            "payload size must be a nonnegative finite bit count, got {payload_bits}"
        )));
    }
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::DomainError(format!(
            "throughput must lie in (0, 1], got {eta}"
        )));
    }
    Ok(payload_bits * k as f64 * (1.0 / eta - 1.0))
}

/// Random-coding bits-per-key factor at load `β = b/k ≥ 1`:
/// `log2 e + (β−1)·log2((β−1)/β)`, with the `β = 1` term defined as 0.
pub fn random_coding_factor(beta: f64) -> Result<f64> {
    if !beta.is_finite() || beta < 1.0 {
        return Err(Error::DomainError(format!(
            "load factor must be a finite value >= 1, got {beta}"
        )));
    }
    if beta == 1.0 {
        return Ok(LOG2_E);
    }
    Ok(LOG2_E + (beta - 1.0) * ((beta - 1.0) / beta).log2())
}

/// One row of the hashing scaling-factor table: bits per key for a method at
/// load factor `β = b/k`. `source` is `"computed"` for the random-coding
/// factor and `"published"` for the SAT and CHD reference constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BitsPerKeyRow {
    pub method: &'static str,
    pub beta: f64,
    pub bits_per_key: f64,
    pub source: &'static str,
}

/// Linear scaling factors (bits per key) of minimal-perfect-hashing schemes
/// at load factors β ∈ {1, 1.23, 2}: the computed random-coding factor next
/// to published constants for SAT-based search and the CHD algorithm.
pub fn bits_per_key_table() -> Vec<BitsPerKeyRow> {
    let rc = |beta: f64| BitsPerKeyRow {
        method: "random coding",
        beta,
        bits_per_key: random_coding_factor(beta).expect("beta >= 1"),
        source: "computed",
    };
    let published = |method: &'static str, beta: f64, bits_per_key: f64| BitsPerKeyRow {
        method,
        beta,
        bits_per_key,
        source: "published",
    };
    vec![
        rc(1.0),
        published("SAT", 1.0, 1.83),
        published("CHD", 1.0, 2.07),
        rc(1.23),
        published("CHD", 1.23, 1.40),
        rc(2.0),
        published("CHD", 2.0, 0.69),
    ]
}

// ---------------------------------------------------------------------------
// Reports and tables.
// ---------------------------------------------------------------------------

/// One evaluated bound: its value in bits and which closed form produced it
/// (`"balanced"`, `"tradeoff"`, `"multislot"`, `"exact"`, or `"exclusion"`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub bits: f64,
    pub form: &'static str,
}

impl BoundValue {
    fn new(bits: f64, form: &'static str) -> Self {
        BoundValue { bits, form }
    }
}

/// Every bound that applies to one `(n, k, b, m)` instance. Fields are `None`
/// where the instance sits outside a bound's regime (for example the
/// trade-off converses at `b = k`, or every converse when `k < m·b`).
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: u64,
    pub k: u64,
    pub b: u64,
    pub m: u64,
    pub fixed_achieve: Option<BoundValue>,
    pub fixed_achieve_exact: Option<BoundValue>,
    pub fixed_converse_volume: Option<BoundValue>,
    pub fixed_converse_loglog: Option<BoundValue>,
    pub var_achieve: Option<BoundValue>,
    pub var_converse: Option<BoundValue>,
    pub fk_lower: Option<BoundValue>,
    pub fk_upper: Option<BoundValue>,
    /// Partition-count lower bound `T* ≥ …` (a count, not bits); `b = k` only.
    pub snir_t: Option<f64>,
    /// Rate of the listing reference scheme, `k·⌈log2 n⌉` bits.
    pub naive_bits: u64,
}

/// Evaluates a fallible bound, turning regime violations into the explicit
/// not-applicable marker while letting real failures (`TooLarge`, …) surface.
fn applicable(value: Result<f64>, form: &'static str) -> Result<Option<BoundValue>> {
    match value {
        Ok(bits) => Ok(Some(BoundValue::new(bits, form))),
        Err(Error::DomainError(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

impl BoundReport {
    /// Evaluates every applicable bound for the instance.
    ///
    /// Dispatch: with `m = 1`, achievability uses the trade-off forms (their
    /// `b = k` endpoint is the simplified balanced bound plus its
    /// `log2 k + 1` slack) while the converses switch to the dedicated
    /// balanced forms at `b = k`; with `m ≥ 2` the multislot forms apply, and
    /// the converses only exist in the balanced regime `k = m·b`.
    pub fn for_params(params: &CodeParams) -> Result<BoundReport> {
        let (n, k, b, m) = (params.n(), params.k(), params.b(), params.m());
        let mut report = BoundReport {
            n,
            k,
            b,
            m,
            fixed_achieve: None,
            fixed_achieve_exact: None,
            fixed_converse_volume: None,
            fixed_converse_loglog: None,
            var_achieve: None,
            var_converse: None,
            fk_lower: None,
            fk_upper: None,
            snir_t: None,
            naive_bits: naive_rate_bits(n, k),
        };
        if k < 2 {
            // A single user needs no feedback; every asymptotic form is moot.
            return Ok(report);
        }
        report.fixed_achieve_exact = applicable(achieve_exact(n, k, b, m), "exact")?;
        if m == 1 {
            report.fixed_achieve = applicable(tradeoff_fixed_achieve(n, b, k), "tradeoff")?;
            if b == k {
                report.fixed_converse_volume =
                    applicable(fixed_converse_volume(n, k), "balanced")?;
                report.fixed_converse_loglog =
                    applicable(fixed_converse_loglog(n, k), "exclusion")?;
                report.var_achieve = applicable(var_achieve(n, k), "balanced")?;
                report.var_converse = applicable(var_converse_volume(n, k), "balanced")?;
                report.snir_t = snir_t(n, k).ok();
            } else {
                report.fixed_converse_volume =
                    applicable(tradeoff_fixed_converse(n, b, k), "tradeoff")?;
                report.var_achieve = applicable(tradeoff_var_achieve(n, b, k), "tradeoff")?;
                report.var_converse = applicable(tradeoff_var_converse(n, b, k), "tradeoff")?;
            }
            match fk_bounds(n, b, k) {
                Ok((lower, upper)) => {
                    report.fk_lower = Some(BoundValue::new(lower, "hash-family"));
                    report.fk_upper = Some(BoundValue::new(upper, "hash-family"));
                }
                Err(Error::DomainError(_)) => {}
                Err(e) => return Err(e),
            }
        } else {
            report.fixed_achieve = applicable(multislot_fixed_achieve(n, k, m), "multislot")?;
            report.var_achieve = applicable(multislot_var_achieve(n, k, m), "multislot")?;
            if k == m * b {
                report.fixed_converse_volume =
                    applicable(multislot_fixed_converse(n, k, m), "multislot")?;
                report.fixed_converse_loglog =
                    applicable(multislot_loglog(n, k, m, b), "exclusion")?;
                report.var_converse = applicable(multislot_var_converse(n, k, m), "multislot")?;
            }
        }
        Ok(report)
    }

    /// Report row built from the multislot forms for every `m`, including
    /// `m = 1` (so a sweep over `m` plots one consistent family of curves
    /// rather than jumping between Stirling truncations at the endpoint).
    fn multislot_row(n: u64, k: u64, m: u64) -> Result<BoundReport> {
        let b = balanced_slots(k, m)?;
        let mut report = BoundReport {
            n,
            k,
            b,
            m,
            fixed_achieve: applicable(multislot_fixed_achieve(n, k, m), "multislot")?,
            fixed_achieve_exact: applicable(achieve_exact(n, k, b, m), "exact")?,
            fixed_converse_volume: applicable(multislot_fixed_converse(n, k, m), "multislot")?,
            fixed_converse_loglog: applicable(multislot_loglog(n, k, m, b), "exclusion")?,
            var_achieve: applicable(multislot_var_achieve(n, k, m), "multislot")?,
            var_converse: applicable(multislot_var_converse(n, k, m), "multislot")?,
            fk_lower: None,
            fk_upper: None,
            snir_t: None,
            naive_bits: naive_rate_bits(n, k),
        };
        if m == 1 {
            if let Ok((lower, upper)) = fk_bounds(n, b, k) {
                report.fk_lower = Some(BoundValue::new(lower, "hash-family"));
                report.fk_upper = Some(BoundValue::new(upper, "hash-family"));
            }
            report.snir_t = snir_t(n, k).ok();
        }
        Ok(report)
    }

    /// The CSV row matching [`csv_header`]; not-applicable cells are empty.
    pub fn csv_row(&self) -> String {
        fn cell(v: Option<BoundValue>) -> String {
            v.map(|x| x.bits.to_string()).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.b,
            self.m,
            cell(self.fixed_achieve),
            cell(self.fixed_achieve_exact),
            cell(self.fixed_converse_volume),
            cell(self.fixed_converse_loglog),
            cell(self.var_achieve),
            cell(self.var_converse),
            cell(self.fk_lower),
            cell(self.fk_upper),
            self.naive_bits,
        )
    }
}

/// Header for [`BoundReport::csv_row`].
pub fn csv_header() -> &'static str {
    "b,m,fixed_achieve,fixed_achieve_exact,fixed_converse_volume,fixed_converse_loglog,\
     var_achieve,var_converse,fk_lower,fk_upper,naive_bits"
}

/// Slot/rate trade-off table: one report per `b` in
/// `b_min, b_min+step, … ≤ b_max` at `m = 1`. Rows evaluate in parallel.
pub fn tradeoff_table(n: u64, k: u64, b_min: u64, b_max: u64, step: u64) -> Result<Vec<BoundReport>> {
    if step < 1 {
        return Err(Error::InvalidParams("step must be >= 1".into()));
    }
    if b_min < k || b_min > b_max {
        return Err(Error::InvalidParams(format!(
            "need k <= b_min <= b_max, got k = {k}, b_min = {b_min}, b_max = {b_max}"
        )));
    }
    let bs: Vec<u64> = (b_min..=b_max).step_by(step as usize).collect();
    bs.par_iter()
        .map(|&b| BoundReport::for_params(&CodeParams::new(n, k, b, 1)?))
        .collect()
}

/// Multislot table: one report per `m` in `ms`, each at its balanced slot
/// count `b = k/m` (every `m` must divide `k`). Rows evaluate in parallel.
pub fn multislot_table(n: u64, k: u64, ms: &[u64]) -> Result<Vec<BoundReport>> {
    if ms.is_empty() {
        return Err(Error::InvalidParams("need at least one m value".into()));
    }
    ms.par_iter()
        .map(|&m| BoundReport::multislot_row(n, k, m))
        .collect()
}
