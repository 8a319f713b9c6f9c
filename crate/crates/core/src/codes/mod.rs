//! Feedback code constructions.
//!
//! Four encoders with matching per-user decoders: the naive listing code,
//! the explicit two-user code, random covering families with the greedy
//! encoder, and (in [`crate::phash`]) the hash-displace construction. The
//! [`huffman`] submodule supplies the entropy-coding layer shared by the
//! variable-length variants.

pub mod greedy;
pub mod huffman;
pub mod naive;
pub mod random;
pub mod twouser;

pub use greedy::{decode, encoder_output_counts, encoder_output_distribution, greedy_encode};
pub use huffman::{huffman_build, PrefixCode, SymbolDistribution};
pub use naive::{naive_decode, naive_encode, naive_rate_bits, NaiveMessage};
pub use random::{
    build_verified_family, build_verified_family_with, random_family, random_partition,
    required_t, BuildOutcome, RequiredT,
};
