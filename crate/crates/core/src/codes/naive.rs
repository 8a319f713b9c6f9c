//! The listing code: the feedback message spells out the active users.
//!
//! Each of the k active users is written as a fixed-width binary id, in
//! ascending order; a user's list position is its slot. Simple, works for
//! any pattern, and costs k·⌈log2 n⌉ bits — the baseline every other code
//! in this crate is measured against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::ceil_log2;
use crate::types::{ActivityPattern, CodeParams};

/// A fully-encoded listing message.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaiveMessage {
    bits: Vec<bool>,
    user_width: u32,
    k: usize,
}

impl NaiveMessage {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len_bits(&self) -> usize {
        self.bits.len()
    }

    pub fn user_width(&self) -> u32 {
        self.user_width
    }
}

impl std::fmt::Display for NaiveMessage {
    /// Bits grouped per user, e.g. `01|11`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let w = self.user_width as usize;
        for (i, chunk) in self.bits.chunks(w.max(1)).enumerate() {
            if i > 0 {
                write!(f, "|")?;
            }
            for &bit in chunk {
                write!(f, "{}", u8::from(bit))?;
            }
        }
        Ok(())
    }
}

/// Encodes the pattern as the ascending list of user ids.
pub fn naive_encode(pattern: &ActivityPattern, params: &CodeParams) -> Result<NaiveMessage> {
    if params.m() != 1 {
        return Err(Error::InvalidParams(
            "the listing code schedules one user per slot (m = 1)".into(),
        ));
    }
    if params.b() < params.k() {
        return Err(Error::InvalidParams(format!(
            "listing {} users needs at least as many slots, got b = {}",
            params.k(),
            params.b()
        )));
    }
    if pattern.k() as u64 != params.k() {
        return Err(Error::DimensionMismatch(format!(
            "pattern has {} users, params say k = {}",
            pattern.k(),
            params.k()
        )));
    }
    if pattern.max_user() as u64 >= params.n() {
        return Err(Error::DimensionMismatch(format!(
            "pattern user {} out of range for n = {}",
            pattern.max_user(),
            params.n()
        )));
    }
    let width = ceil_log2(params.n()) as u32;
    let mut bits = Vec::with_capacity(pattern.k() * width as usize);
    for &u in pattern.users() {
        for pos in (0..width).rev() {
            bits.push((u as u64 >> pos) & 1 == 1);
        }
    }
    Ok(NaiveMessage {
        bits,
        user_width: width,
        k: pattern.k(),
    })
}

/// A user's slot is its position in the list; absence means it was inactive.
pub fn naive_decode(msg: &NaiveMessage, user: usize) -> Result<u32> {
    let w = msg.user_width as usize;
    for slot in 0..msg.k {
        let mut id = 0u64;
        for &bit in &msg.bits[slot * w..(slot + 1) * w] {
            id = (id << 1) | u64::from(bit);
        }
        if id == user as u64 {
            return Ok(slot as u32);
        }
    }
    Err(Error::UserNotListed { user })
}

/// Message cost of the listing code in bits.
pub fn naive_rate_bits(n: u64, k: u64) -> u64 {
    k * ceil_log2(n) as u64
}

// ---------------------------------------------------------------------------
