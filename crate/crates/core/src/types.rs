//! Domain types: instance parameters, activity patterns, partitions,
//! partition families, schedules and feedback messages.
//!
//! All indices are 0-based: users are `0..n`, slots are `0..b`, partitions in
//! a family are `0..T`. Constructors validate the type invariants, so a value
//! of one of these types is always well-formed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Instance parameters: `n` users, `k` of them active, `b` slots, at most
/// `m` active users per slot.
///
/// `m = 1` with `b >= k` is the collision-free regime; `m > 1` models slots
/// that can carry several users (for example via multi-packet reception).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    n: u64,
    k: u64,
    b: u64,
    m: u64,
}

impl CodeParams {
    /// Validates `1 <= k <= n`, `b >= 1`, `m >= 1` and `k <= m * b` (the
    /// capacity needed for any schedule to exist at all).
    pub fn new(n: u64, k: u64, b: u64, m: u64) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        if k > n {
            return Err(Error::InvalidParams(format!("k = {k} exceeds n = {n}")));
        }
        if b < 1 {
            return Err(Error::InvalidParams("b must be at least 1".into()));
        }
        if m < 1 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        match b.checked_mul(m) {
            Some(cap) if cap >= k => Ok(Self { n, k, b, m }),
            _ => Err(Error::InvalidParams(format!(
                "k = {k} exceeds total slot capacity m*b = {m}*{b}"
            ))),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

/// The set of active users: strictly increasing 0-based indices.
///
/// The pattern does not carry `n`; operations that pair a pattern with a
/// partition or parameter set check the index range there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityPattern {
    users: Vec<usize>,
}

impl ActivityPattern {
    /// Requires a non-empty, strictly increasing index sequence.
    pub fn new(users: Vec<usize>) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::InvalidParams("activity pattern is empty".into()));
        }
        if users.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParams(
                "activity pattern must be strictly increasing (sorted, distinct)".into(),
            ));
        }
        Ok(Self { users })
    }

    /// Sorts and deduplicates, then validates.
    pub fn from_unsorted(mut users: Vec<usize>) -> Result<Self> {
        users.sort_unstable();
        users.dedup();
        Self::new(users)
    }

    pub fn users(&self) -> &[usize] {
        &self.users
    }

    /// Number of active users.
    pub fn k(&self) -> usize {
        self.users.len()
    }

    /// Largest user index in the pattern.
    pub fn max_user(&self) -> usize {
        *self.users.last().expect("pattern is non-empty")
    }
}

/// A partition of the `n` users into `b` labelled slots, stored as the
/// assignment sequence `slot_of[user]`. Empty slots are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<u32>,
    b: u32,
}

impl Partition {
    /// Requires `b >= 1` and every entry `< b`.
    pub fn new(assignment: Vec<u32>, b: u32) -> Result<Self> {
        if b < 1 {
            return Err(Error::InvalidParams("partition needs b >= 1".into()));
        }
        if let Some(&bad) = assignment.iter().find(|&&s| s >= b) {
            return Err(Error::InvalidParams(format!(
                "assignment entry {bad} is out of range for b = {b}"
            )));
        }
        Ok(Self { assignment, b })
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    /// Number of users the partition is defined over.
    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    /// Slot of one user.
    pub fn slot_of(&self, user: usize) -> Result<u32> {
        self.assignment.get(user).copied().ok_or_else(|| {
            Error::DimensionMismatch(format!(
                "user {user} out of range for a partition over n = {}",
                self.assignment.len()
            ))
        })
    }

    /// Size of each slot's subset.
    pub fn subset_sizes(&self) -> Vec<u64> {
        let mut sizes = vec![0u64; self.b as usize];
        for &s in &self.assignment {
            sizes[s as usize] += 1;
        }
        sizes
    }
}

/// An ordered family of `T >= 1` partitions over the same `(n, b)`.
///
/// The feedback message for a pattern is the index of a family member; the
/// family is the shared codebook between the scheduler and the users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionFamily {
    partitions: Vec<Partition>,
}

impl PartitionFamily {
    /// Requires at least one partition and consistent `(n, b)` throughout.
    pub fn new(partitions: Vec<Partition>) -> Result<Self> {
        let first = partitions
            .first()
            .ok_or_else(|| Error::InvalidParams("family must contain at least one partition".into()))?;
        let (n, b) = (first.n(), first.b());
        for (t, p) in partitions.iter().enumerate() {
            if p.n() != n || p.b() != b {
                return Err(Error::DimensionMismatch(format!(
                    "partition {t} has (n, b) = ({}, {}), family started with ({n}, {b})",
                    p.n(),
                    p.b()
                )));
            }
        }
        Ok(Self { partitions })
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    /// Family size `T`.
    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    /// Always false; kept for iterator-style call sites.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn n(&self) -> usize {
        self.partitions[0].n()
    }

    pub fn b(&self) -> u32 {
        self.partitions[0].b()
    }

    pub fn get(&self, t: usize) -> Result<&Partition> {
        self.partitions.get(t).ok_or_else(|| {
            Error::DimensionMismatch(format!(
                "partition index {t} out of range for a family of size {}",
                self.partitions.len()
            ))
        })
    }
}

/// A concrete assignment of users to slots, as produced by decoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    entries: Vec<(usize, u32)>,
}

impl Schedule {
    pub fn new(entries: Vec<(usize, u32)>) -> Self {
        Self { entries }
    }

    pub fn entries(&self) -> &[(usize, u32)] {
        &self.entries
    }

    /// Highest number of users sharing one slot (0 for an empty schedule).
    pub fn max_occupancy(&self) -> u64 {
        let mut counts = std::collections::HashMap::new();
        for &(_, slot) in &self.entries {
            *counts.entry(slot).or_insert(0u64) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// True iff no slot carries more than `m` users.
    pub fn is_within_capacity(&self, m: u64) -> bool {
        self.max_occupancy() <= m
    }
}

/// The broadcast feedback: the index of one partition in the family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeedbackMessage {
    pub index: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_accept_valid_and_name_violations() {
        assert!(CodeParams::new(4, 2, 2, 1).is_ok());
        // k > n
        let err = CodeParams::new(4, 5, 5, 1).unwrap_err();
        assert!(err.to_string().contains("exceeds n"), "{err}");
        // k > m*b
        let err = CodeParams::new(10, 6, 2, 2).unwrap_err();
        assert!(err.to_string().contains("capacity"), "{err}");
        assert!(CodeParams::new(10, 6, 2, 3).is_ok());
        assert!(CodeParams::new(4, 0, 2, 1).is_err());
        assert!(CodeParams::new(4, 2, 0, 1).is_err());
        assert!(CodeParams::new(4, 2, 2, 0).is_err());
    }

    #[test]
    fn pattern_rejects_unsorted_and_duplicates() {
        assert!(ActivityPattern::new(vec![1, 3, 5]).is_ok());
        assert!(ActivityPattern::new(vec![3, 1]).is_err());
        assert!(ActivityPattern::new(vec![1, 1]).is_err());
        assert!(ActivityPattern::new(vec![]).is_err());
        let p = ActivityPattern::from_unsorted(vec![5, 1, 3]).unwrap();
        assert_eq!(p.users(), &[1, 3, 5]);
    }

    #[test]
    fn partition_rejects_out_of_range_slots() {
        assert!(Partition::new(vec![0, 1, 0, 1], 2).is_ok());
        assert!(Partition::new(vec![0, 2], 2).is_err());
        assert!(Partition::new(vec![], 0).is_err());
        let p = Partition::new(vec![0, 1, 1, 0, 1], 3).unwrap();
        assert_eq!(p.subset_sizes(), vec![2, 3, 0]);
        assert_eq!(p.slot_of(4).unwrap(), 1);
        assert!(p.slot_of(5).is_err());
    }

    #[test]
    fn family_needs_consistent_members() {
        let p1 = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let p2 = Partition::new(vec![0, 1, 0, 1], 2).unwrap();
        assert_eq!(PartitionFamily::new(vec![p1.clone(), p2]).unwrap().len(), 2);
        assert!(PartitionFamily::new(vec![]).is_err());
        let short = Partition::new(vec![0, 1], 2).unwrap();
        assert!(PartitionFamily::new(vec![p1.clone(), short]).is_err());
        let wide = Partition::new(vec![0, 1, 2, 0], 3).unwrap();
        assert!(PartitionFamily::new(vec![p1, wide]).is_err());
    }

    #[test]
    fn schedule_occupancy() {
        let s = Schedule::new(vec![(0, 1), (3, 0), (7, 1)]);
        assert_eq!(s.max_occupancy(), 2);
        assert!(s.is_within_capacity(2));
        assert!(!s.is_within_capacity(1));
        assert!(Schedule::new(vec![]).is_within_capacity(1));
    }
}
