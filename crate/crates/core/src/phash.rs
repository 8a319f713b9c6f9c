//! Compress-hash-displace perfect hashing as practical feedback.
//!
//! Instead of shipping an index into a partition family, the base station can
//! build a perfect hash of the current active set and feed back its
//! compressed description; every user evaluates the function locally to learn
//! its slot. The construction is the classic two-level displacement scheme:
//! a first-level hash splits the `k` active users into `r = ⌈k/λ⌉` buckets,
//! buckets are processed in decreasing size, and each bucket scans for the
//! smallest displacement under which all its members land in free slots.
//! The feedback message is the entropy-coded displacement sequence.
//!
//! Determinism is load-bearing: the slot a user computes must match the slot
//! the base station planned, across platforms and builds. Both hash levels
//! therefore chain the fixed splitmix64 finalizer ([`crate::rng::mix64`])
//! rather than anything platform- or version-dependent, and the displacement
//! coder is a canonical Huffman code with a fully specified wire format.
//!
//! # Wire format
//!
//! | field         | size                  | encoding                        |
//! |---------------|-----------------------|---------------------------------|
//! | seed          | 8 bytes               | u64 little-endian               |
//! | b             | 4 bytes               | u32 little-endian               |
//! | r             | 4 bytes               | u32 little-endian               |
//! | alphabet size | 2 bytes               | u16 little-endian               |
//! | code lengths  | `alphabet size` bytes | canonical Huffman lengths, one  |
//! |               |                       | byte per symbol, 0 = unused     |
//! | bitstream     | rest                  | `r` coded displacements,        |
//! |               |                       | MSB-first, zero-padded to byte  |
//!
//! Displacements 0–31 are literal symbols. Larger values use escape classes:
//! a value with `ilog2 v = 5 + j` maps to symbol `32 + j` followed by `5 + j`
//! raw offset bits, so the alphabet never exceeds [`MAX_SYMBOLS`] entries and
//! arbitrary `u32` displacements stay encodable.

use rayon::prelude::*;
use serde::Serialize;

use crate::codes::PrefixCode;
use crate::error::{Error, Result};
use crate::rng::{self, derive_seed, mix64, stream_rng, GOLDEN_GAMMA};
use crate::types::ActivityPattern;

use rand::seq::index::sample as index_sample;
use std::collections::HashMap;

/// Displacements below this encode as literal symbols; larger ones use
/// escape classes with raw offset bits.
const LITERAL_SYMBOLS: u32 = 32;

/// Largest possible alphabet: 32 literals plus one escape class per
/// `ilog2` value in `5..=31`.
pub const MAX_SYMBOLS: usize = 59;

/// Hash level selecting the first-level bucket split.
const LEVEL_BUCKET: u32 = 0;
/// Hash level selecting slots under a displacement.
const LEVEL_SLOT: u32 = 1;

/// Default cap for the per-bucket displacement scan.
pub const DEFAULT_MAX_DISPLACEMENT: u32 = 1 << 20;

/// The shared 64-bit mixer behind both hash levels: three chained rounds of
/// the splitmix64 finalizer over the seed, the packed (level, displacement)
/// word, and the user id. Bit-exact across platforms.
pub fn chd_hash(seed: u64, level: u32, displacement: u32, user: u64) -> u64 {
    let lane = ((level as u64) << 32) | displacement as u64;
    let h = mix64(seed ^ GOLDEN_GAMMA);
    let h = mix64(h ^ lane);
    mix64(h ^ user)
}

/// Tuning knobs for the builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhashOptions {
    /// Average bucket load λ; `r = ⌈k/λ⌉` buckets.
    pub lambda: u32,
    /// Per-slot capacity during the displacement search (1 = perfect hash).
    pub m: u64,
}

impl Default for PhashOptions {
    fn default() -> Self {
        PhashOptions { lambda: 5, m: 1 }
    }
}

/// A built perfect-hash feedback message: the seed, the displacement per
/// bucket, and the exact size of its wire encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HashFeedback {
    seed: u64,
    b: u32,
    displacements: Vec<u32>,
    /// Exact emitted size in bits: 8 × the wire-format byte length.
    bits: u64,
}

impl HashFeedback {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Slot count the hash maps into.
    pub fn b(&self) -> u32 {
        self.b
    }

    /// Number of first-level buckets `r`.
    pub fn bucket_count(&self) -> u32 {
        self.displacements.len() as u32
    }

    pub fn displacements(&self) -> &[u32] {
        &self.displacements
    }

    /// Size of [`encode_feedback`]'s output in bits, headers included.
    pub fn compressed_bits(&self) -> u64 {
        self.bits
    }
}

/// The slot (in `[0, b)`) this feedback assigns to `user`. O(1): two hash
/// evaluations and a table lookup; defined for every user id, active or not.
pub fn phash_eval(feedback: &HashFeedback, user: u64) -> u32 {
    let r = feedback.displacements.len() as u64;
    let bucket = (chd_hash(feedback.seed, LEVEL_BUCKET, 0, user) % r) as usize;
    let d = feedback.displacements[bucket];
    (chd_hash(feedback.seed, LEVEL_SLOT, d, user) % feedback.b as u64) as u32
}

/// Builds a perfect hash of `pattern` into `b` slots with default options
/// (λ = 5, one user per slot). See [`phash_build_with_options`].
pub fn phash_build(
    pattern: &ActivityPattern,
    b: u32,
    seed: u64,
    max_displacement: u32,
) -> Result<HashFeedback> {
    phash_build_with_options(pattern, b, seed, max_displacement, &PhashOptions::default())
}

/// Builds the displacement table: first-level split into `r = ⌈k/λ⌉`
/// buckets, then, in decreasing bucket-size order, a linear scan from 0 for
/// the smallest displacement that lands every member in a slot with spare
/// capacity. Fails with [`Error::BuildExhausted`] when a bucket's scan passes
/// `max_displacement`; callers retry with a fresh seed (see
/// [`phash_build_with_retry`]).
pub fn phash_build_with_options(
    pattern: &ActivityPattern,
    b: u32,
    seed: u64,
    max_displacement: u32,
    options: &PhashOptions,
) -> Result<HashFeedback> {
    let k = pattern.k() as u64;
    if b == 0 || options.lambda == 0 || options.m == 0 {
        return Err(Error::InvalidParams(
            "phash needs b >= 1, lambda >= 1, m >= 1".into(),
        ));
    }
    if k > options.m * b as u64 {
        return Err(Error::InvalidParams(format!(
            "cannot place k = {k} users into b = {b} slots of capacity {}",
            options.m
        )));
    }
    let r = k.div_ceil(options.lambda as u64) as usize;

    let mut buckets: Vec<Vec<u64>> = vec![Vec::new(); r];
    for &user in pattern.users() {
        let user = user as u64;
        let bucket = (chd_hash(seed, LEVEL_BUCKET, 0, user) % r as u64) as usize;
        buckets[bucket].push(user);
    }
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(buckets[i].len()), i));

    let mut displacements = vec![0u32; r];
    let mut occupancy = vec![0u64; b as usize];
    let mut slots: Vec<u32> = Vec::new();
    for &bucket in &order {
        let members = &buckets[bucket];
        if members.is_empty() {
            break; // sorted order: only empty buckets remain
        }
        let mut placed = false;
        'scan: for d in 0..=max_displacement {
            slots.clear();
            for &user in members {
                let slot = (chd_hash(seed, LEVEL_SLOT, d, user) % b as u64) as u32;
                let within = slots.iter().filter(|&&s| s == slot).count() as u64;
                if occupancy[slot as usize] + within + 1 > options.m {
                    continue 'scan;
                }
                slots.push(slot);
            }
            for &slot in &slots {
                occupancy[slot as usize] += 1;
            }
            displacements[bucket] = d;
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::BuildExhausted {
                bucket,
                limit: max_displacement,
            });
        }
    }

    let mut feedback = HashFeedback {
        seed,
        b,
        displacements,
        bits: 0,
    };
    feedback.bits = 8 * encode_feedback(&feedback)?.len() as u64;
    Ok(feedback)
}

/// Retries [`phash_build`] with per-round seeds derived from `master_seed`
/// until one build certifies, returning it with the number of exhausted
/// rounds that preceded it.
pub fn phash_build_with_retry(
    pattern: &ActivityPattern,
    b: u32,
    master_seed: u64,
    max_displacement: u32,
    max_rounds: u32,
    options: &PhashOptions,
) -> Result<(HashFeedback, u32)> {
    for round in 0..max_rounds {
        let seed = derive_seed(master_seed, rng::domain::PHASH_RETRY, round as u64);
        match phash_build_with_options(pattern, b, seed, max_displacement, options) {
            Ok(feedback) => return Ok((feedback, round)),
            Err(Error::BuildExhausted { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BuildFailed { rounds: max_rounds })
}

// ---------------------------------------------------------------------------
// Displacement entropy coding.
// ---------------------------------------------------------------------------

/// (symbol, raw offset, raw bit count) for one displacement value.
fn displacement_symbol(d: u32) -> (usize, u32, u32) {
    if d < LITERAL_SYMBOLS {
        (d as usize, 0, 0)
    } else {
        let top = d.ilog2(); // >= 5
        let raw_bits = top; // offsets within [2^top, 2^(top+1)) need top bits
        (
            (LITERAL_SYMBOLS + top - 5) as usize,
            d - (1 << top),
            raw_bits,
        )
    }
}

struct BitWriter {
    bytes: Vec<u8>,
    bit: u32, // bits already used in the last byte
}

impl BitWriter {
    fn new(bytes: Vec<u8>) -> Self {
        BitWriter { bytes, bit: 0 }
    }

    /// Appends the low `count` bits of `value`, most significant first.
    fn push(&mut self, value: u64, count: u32) {
        for i in (0..count).rev() {
            if self.bit == 0 {
                self.bytes.push(0);
            }
            let bit = ((value >> i) & 1) as u8;
            let last = self.bytes.last_mut().expect("pushed above");
            *last |= bit << (7 - self.bit);
            self.bit = (self.bit + 1) % 8;
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize, // absolute bit cursor
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader { bytes, pos: 0 }
    }

    fn read_bit(&mut self) -> Result<u64> {
        let byte = self.pos / 8;
        if byte >= self.bytes.len() {
            return Err(Error::MalformedFile(
                "bitstream ended inside a codeword".into(),
            ));
        }
        let bit = (self.bytes[byte] >> (7 - self.pos % 8)) & 1;
        self.pos += 1;
        Ok(bit as u64)
    }

    fn read_bits(&mut self, count: u32) -> Result<u64> {
        let mut v = 0;
        for _ in 0..count {
            v = (v << 1) | self.read_bit()?;
        }
        Ok(v)
    }
}

/// Canonical Huffman lengths (one byte per symbol, 0 = unused) for the
/// displacement sequence, plus the codeword per used symbol.
fn displacement_code(displacements: &[u32]) -> Result<(Vec<u8>, Vec<Option<(u64, u32)>>)> {
    let mut counts = [0u64; MAX_SYMBOLS];
    let mut max_sym = 0;
    for &d in displacements {
        let (sym, _, _) = displacement_symbol(d);
        counts[sym] += 1;
        max_sym = max_sym.max(sym);
    }
    let alphabet = max_sym + 1;
    let used: Vec<usize> = (0..alphabet).filter(|&s| counts[s] > 0).collect();
    let mut lengths = vec![0u8; alphabet];
    let mut codewords: Vec<Option<(u64, u32)>> = vec![None; alphabet];
    if used.len() == 1 {
        // A one-symbol alphabet still needs a nonzero length on the wire,
        // otherwise the used symbol is indistinguishable from the absent
        // ones. Spend one bit per displacement.
        lengths[used[0]] = 1;
        codewords[used[0]] = Some((0, 1));
    } else {
        let weights: Vec<u64> = used.iter().map(|&s| counts[s]).collect();
        let code = PrefixCode::from_weights(&weights)?;
        for (pos, &sym) in used.iter().enumerate() {
            let len = code.lengths()[pos];
            lengths[sym] = len as u8;
            codewords[sym] = Some(code.codeword(pos));
        }
    }
    Ok((lengths, codewords))
}

/// Serializes a feedback message into the wire format described in the
/// module docs. Pure function of (seed, b, displacements).
pub fn encode_feedback(feedback: &HashFeedback) -> Result<Vec<u8>> {
    let r = feedback.displacements.len();
    if r == 0 || r > u32::MAX as usize {
        return Err(Error::InvalidParams(format!(
            "bucket count {r} outside the wire format's u32 range"
        )));
    }
    let (lengths, codewords) = displacement_code(&feedback.displacements)?;
    let mut bytes = Vec::with_capacity(18 + lengths.len() + r);
    bytes.extend_from_slice(&feedback.seed.to_le_bytes());
    bytes.extend_from_slice(&feedback.b.to_le_bytes());
    bytes.extend_from_slice(&(r as u32).to_le_bytes());
    bytes.extend_from_slice(&(lengths.len() as u16).to_le_bytes());
    bytes.extend_from_slice(&lengths);
    let mut writer = BitWriter::new(bytes);
    for &d in &feedback.displacements {
        let (sym, raw, raw_bits) = displacement_symbol(d);
        let (code, len) = codewords[sym].expect("symbol counted above");
        writer.push(code, len);
        writer.push(raw as u64, raw_bits);
    }
    Ok(writer.bytes)
}

/// Parses and validates a wire-format blob. Strict: the codebook must
/// satisfy the Kraft equality the encoder produces, every codeword must
/// resolve, and the final padding bits must be zero with no trailing bytes.
pub fn decode_feedback(bytes: &[u8]) -> Result<HashFeedback> {
    if bytes.len() < 18 {
        return Err(Error::MalformedFile(format!(
            "feedback blob is {} bytes, header alone needs 18",
            bytes.len()
        )));
    }
    let seed = u64::from_le_bytes(bytes[0..8].try_into().expect("sized slice"));
    let b = u32::from_le_bytes(bytes[8..12].try_into().expect("sized slice"));
    let r = u32::from_le_bytes(bytes[12..16].try_into().expect("sized slice")) as usize;
    let alphabet = u16::from_le_bytes(bytes[16..18].try_into().expect("sized slice")) as usize;
    if b == 0 || r == 0 {
        return Err(Error::MalformedFile("b and r must be positive".into()));
    }
    if alphabet == 0 || alphabet > MAX_SYMBOLS {
        return Err(Error::MalformedFile(format!(
            "displacement alphabet size {alphabet} outside 1..={MAX_SYMBOLS}"
        )));
    }
    if bytes.len() < 18 + alphabet {
        return Err(Error::MalformedFile("codebook truncated".into()));
    }
    let lengths = &bytes[18..18 + alphabet];
    let used: Vec<usize> = (0..alphabet).filter(|&s| lengths[s] != 0).collect();
    if used.is_empty() {
        return Err(Error::MalformedFile("codebook has no used symbol".into()));
    }
    // Rebuild the canonical code over used symbols in symbol order — the
    // same ordering the encoder used, so codewords agree bit for bit.
    let mut decode_map: HashMap<(u32, u64), usize> = HashMap::new();
    if used.len() == 1 {
        if lengths[used[0]] != 1 {
            return Err(Error::MalformedFile(
                "a single-symbol codebook must use length 1".into(),
            ));
        }
        decode_map.insert((1, 0), used[0]);
    } else {
        let compact: Vec<u32> = used.iter().map(|&s| lengths[s] as u32).collect();
        let code = PrefixCode::from_lengths(compact)
            .map_err(|e| Error::MalformedFile(format!("invalid codebook: {e}")))?;
        for (pos, &sym) in used.iter().enumerate() {
            let (cw, len) = code.codeword(pos);
            decode_map.insert((len, cw), sym);
        }
    }
    let max_len = used.iter().map(|&s| lengths[s] as u32).max().expect("nonempty");

    let mut reader = BitReader::new(&bytes[18 + alphabet..]);
    let mut displacements = Vec::with_capacity(r);
    for _ in 0..r {
        let mut code = 0u64;
        let mut len = 0u32;
        let sym = loop {
            code = (code << 1) | reader.read_bit()?;
            len += 1;
            if let Some(&sym) = decode_map.get(&(len, code)) {
                break sym;
            }
            if len >= max_len {
                return Err(Error::MalformedFile(
                    "bitstream contains an unassigned codeword".into(),
                ));
            }
        };
        let d = if (sym as u32) < LITERAL_SYMBOLS {
            sym as u32
        } else {
            let top = sym as u32 - LITERAL_SYMBOLS + 5;
            (1u32 << top) + reader.read_bits(top)? as u32
        };
        displacements.push(d);
    }
    // Strictness: only zero padding up to the final byte may remain.
    let consumed_bytes = reader.pos.div_ceil(8);
    if consumed_bytes != reader.bytes.len() {
        return Err(Error::MalformedFile(
            "trailing bytes after the displacement bitstream".into(),
        ));
    }
    while reader.pos % 8 != 0 {
        if reader.read_bit()? != 0 {
            return Err(Error::MalformedFile("nonzero padding bits".into()));
        }
    }
    Ok(HashFeedback {
        seed,
        b,
        displacements,
        bits: 8 * bytes.len() as u64,
    })
}

// ---------------------------------------------------------------------------
// Rate experiments.
// ---------------------------------------------------------------------------

/// Summary of a feedback-rate experiment over uniformly sampled patterns.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub n: u64,
    pub k: u64,
    pub b: u32,
    pub trials: u64,
    /// Mean emitted size divided by `k`, the storage notion hashing schemes
    /// are usually quoted in.
    pub mean_bits_per_key: f64,
    pub mean_bits: f64,
    pub min_bits: u64,
    pub max_bits: u64,
    /// Mean displacement value across all buckets of all builds.
    pub mean_displacement: f64,
    /// Total exhausted build rounds that had to be retried.
    pub retry_rounds: u64,
    /// Informational: `log2(n/b)` bits, the per-user identification cost the
    /// payload phase absorbs when slots are shared rather than private.
    pub ident_bits_per_user: f64,
}

/// Builds `trials` feedbacks for independent uniform patterns and averages
/// their emitted sizes. Trials run in parallel with per-trial derived seeds;
/// results are independent of thread count.
pub fn phash_rate_experiment(
    n: u64,
    k: u64,
    b: u32,
    trials: u64,
    seed: u64,
) -> Result<RateReport> {
    if trials == 0 {
        return Err(Error::EmptyExperiment);
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    if (b as u64) < k {
        return Err(Error::InvalidParams(format!(
            "one-per-slot hashing needs b >= k, got b = {b}, k = {k}"
        )));
    }
    let options = PhashOptions::default();
    let totals = (0..trials)
        .into_par_iter()
        .map(|trial| -> Result<(u64, u64, u64, u64, u64, u64)> {
            let mut rng = stream_rng(seed, rng::domain::PHASH_TRIAL, trial);
            let users = index_sample(&mut rng, n as usize, k as usize);
            let pattern = ActivityPattern::from_unsorted(users.into_iter().collect())?;
            let master = derive_seed(seed, rng::domain::PHASH_RETRY, trial);
            let (feedback, rounds) =
                phash_build_with_retry(&pattern, b, master, DEFAULT_MAX_DISPLACEMENT, 64, &options)?;
            let bits = feedback.compressed_bits();
            let disp_sum: u64 = feedback.displacements().iter().map(|&d| d as u64).sum();
            let buckets = feedback.bucket_count() as u64;
            Ok((bits, bits, bits, disp_sum, buckets, rounds as u64))
        })
        .try_reduce(
            || (0, u64::MAX, 0, 0, 0, 0),
            |a, b| Ok((a.0 + b.0, a.1.min(b.1), a.2.max(b.2), a.3 + b.3, a.4 + b.4, a.5 + b.5)),
        )?;
    let (bit_sum, min_bits, max_bits, disp_sum, bucket_sum, retry_rounds) = totals;
    let mean_bits = bit_sum as f64 / trials as f64;
    Ok(RateReport {
        n,
        k,
        b,
        trials,
        mean_bits_per_key: mean_bits / k as f64,
        mean_bits,
        min_bits,
        max_bits,
        mean_displacement: disp_sum as f64 / bucket_sum as f64,
        retry_rounds,
        ident_bits_per_user: (n as f64 / b as f64).log2(),
    })
}
