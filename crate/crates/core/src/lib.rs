//! Collision-free scheduling feedback codes for massive random access.
//!
//! A base station must schedule an unknown set of `k` active users (out of
//! `n`) into `b` slots so that no slot carries more than `m` of them, using a
//! single broadcast feedback message. This crate implements the partition
//! view of that problem: a feedback codebook is a family of partitions of the
//! user set into `b` slots, the broadcast is the index of a partition that
//! separates the active users, and each active user reads its slot directly
//! from the indexed partition.
//!
//! The crate provides
//!
//! * domain types and a compact binary file format for partition families
//!   ([`types`], [`family_file`]),
//! * covering checks and an exact minimum-family-size oracle for tiny
//!   instances ([`covering`]),
//! * encoders/decoders: the trivial listing code, the two-user
//!   bit-discrepancy code, greedy partition-family codes, random family
//!   construction with certified verification, and Huffman machinery for
//!   variable-length feedback ([`codes`]),
//! * closed-form achievability and converse bounds on the feedback length,
//!   including slot/feedback trade-off and multi-user-slot variants
//!   ([`bounds`]),
//! * compressed perfect-hash feedback (displacement hashing with
//!   entropy-coded displacements) as a practical baseline ([`phash`]),
//! * seeded Monte Carlo measurement of collision/outage rates and empirical
//!   feedback-rate distributions ([`sim`]).
//!
//! Everything randomized is driven by explicit 64-bit seeds and is
//! deterministic for a fixed seed, independent of thread count.
//!
//! # Example
//!
//! Build a certified family for ten users, three of them active, three slots,
//! then schedule a concrete activity pattern:
//!
//! ```
//! use fbsched::codes::{build_verified_family, greedy_encode, decode};
//! use fbsched::types::{ActivityPattern, CodeParams};
//!
//! let params = CodeParams::new(10, 3, 3, 1)?;
//! let built = build_verified_family(&params, 7, 16, 1 << 20)?;
//! assert!(built.certified);
//!
//! // Users 1, 4 and 9 are active; broadcast one partition index.
//! let active = ActivityPattern::new(vec![1, 4, 9])?;
//! let msg = greedy_encode(&built.family, &active, 1)?;
//!
//! // Each active user recovers its own slot; no two collide.
//! let slots: Vec<u32> = active
//!     .users()
//!     .iter()
//!     .map(|&u| decode(&built.family, msg, u).unwrap())
//!     .collect();
//! assert_eq!(slots.len(), 3);
//! assert!(slots[0] != slots[1] && slots[1] != slots[2] && slots[0] != slots[2]);
//! # Ok::<(), fbsched::Error>(())
//! ```

pub mod bounds;
pub mod codes;
pub mod covering;
pub mod error;
pub mod family_file;
pub mod numeric;
pub mod phash;
pub mod rng;
pub mod sim;
pub mod types;

pub use error::{Error, Result};
pub use types::{ActivityPattern, CodeParams, FeedbackMessage, Partition, PartitionFamily, Schedule};
