//! Optimal prefix codes with deterministic tie-breaking.
//!
//! The encoder-output symbols of a feedback code get entropy-coded with a
//! Huffman code; this file provides the code construction (generic over the
//! weight type so exact integer weights and floating-point probabilities
//! share one code path), canonical codeword assignment, and both exact
//! (rational) and floating-point average-length accounting.

use std::cmp::Ordering;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probabilities of the encoder-output symbols `0..T`.
///
/// The total may fall short of 1: the missing mass is the probability that
/// no family member schedules the pattern (the "uncovered" event), which
/// carries no codeword.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolDistribution {
    probs: Vec<f64>,
}

impl SymbolDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let mut total = 0.0;
        for &p in &probs {
            if !p.is_finite() || !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!(
                    "symbol probability {p} is outside [0, 1]"
                )));
            }
            total += p;
        }
        if total > 1.0 + 1e-12 {
            return Err(Error::InvalidParams(format!(
                "symbol probabilities sum to {total} > 1"
            )));
        }
        Ok(Self { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Mass assigned to no symbol (uncovered patterns).
    pub fn residual(&self) -> f64 {
        (1.0 - self.probs.iter().sum::<f64>()).max(0.0)
    }

    /// Shannon entropy in bits of the listed symbols (zero entries and the
    /// residual mass contribute nothing).
    pub fn entropy_bits(&self) -> f64 {
        -self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| p * p.log2())
            .sum::<f64>()
    }
}

/// A prefix-free binary code over symbols `0..len`, stored as canonical
/// codeword lengths plus the canonical codewords themselves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixCode {
    lengths: Vec<u32>,
    codewords: Vec<u64>,
}

impl PrefixCode {
    /// Huffman code over arbitrary comparable, addable weights.
    ///
    /// Ties between equal-weight nodes are broken toward the node containing
    /// the lowest symbol index, making the tree (and the canonical code)
    /// identical across platforms and runs. A single-symbol alphabet yields
    /// the empty codeword (length 0).
    pub fn from_weights<W>(weights: &[W]) -> Result<Self>
    where
        W: Copy + PartialOrd + std::ops::Add<Output = W>,
    {
        if weights.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for w in weights {
            if w.partial_cmp(w).is_none() {
                return Err(Error::InvalidParams(
                    "code weights must be totally ordered (no NaN)".into(),
                ));
            }
        }
        let n = weights.len();
        if n == 1 {
            return Self::from_lengths(vec![0]);
        }

        #[derive(Clone, Copy)]
        struct Node<W> {
            weight: W,
            min_sym: usize,
            id: usize,
        }
        let key = |a: &Node<W>, b: &Node<W>| -> Ordering {
            a.weight
                .partial_cmp(&b.weight)
                .expect("weights pre-checked comparable")
                .then(a.min_sym.cmp(&b.min_sym))
        };

        let mut leaves: Vec<Node<W>> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Node {
                weight: w,
                min_sym: i,
                id: i,
            })
            .collect();
        leaves.sort_by(|a, b| key(a, b));
        let mut q1: VecDeque<Node<W>> = leaves.into();
        let mut q2: VecDeque<Node<W>> = VecDeque::new();
        let mut children: Vec<(usize, usize)> = Vec::with_capacity(n - 1);

        let pop_min = |q1: &mut VecDeque<Node<W>>, q2: &mut VecDeque<Node<W>>| -> Node<W> {
            match (q1.front(), q2.front()) {
                (Some(a), Some(b)) => {
                    if key(a, b) == Ordering::Greater {
                        q2.pop_front().unwrap()
                    } else {
                        q1.pop_front().unwrap()
                    }
                }
                (Some(_), None) => q1.pop_front().unwrap(),
                (None, Some(_)) => q2.pop_front().unwrap(),
                (None, None) => unreachable!("node count is tracked"),
            }
        };

        let mut remaining = n;
        while remaining > 1 {
            let a = pop_min(&mut q1, &mut q2);
            let b = pop_min(&mut q1, &mut q2);
            let id = n + children.len();
            children.push((a.id, b.id));
            q2.push_back(Node {
                weight: a.weight + b.weight,
                min_sym: a.min_sym.min(b.min_sym),
                id,
            });
            remaining -= 1;
        }
        let root = pop_min(&mut q1, &mut q2);

        let mut lengths = vec![0u32; n];
        let mut stack = vec![(root.id, 0u32)];
        while let Some((id, depth)) = stack.pop() {
            if id < n {
                lengths[id] = depth;
            } else {
                let (l, r) = children[id - n];
                stack.push((l, depth + 1));
                stack.push((r, depth + 1));
            }
        }
        Self::from_lengths(lengths)
    }

    /// Huffman code for a symbol distribution; zero-probability symbols get
    /// codewords (they just never occur), the residual mass gets none.
    pub fn from_distribution(dist: &SymbolDistribution) -> Result<Self> {
        Self::from_weights(dist.probs())
    }

    /// Canonical code from prescribed codeword lengths: symbols sorted by
    /// (length, index) receive numerically increasing codewords.
    pub fn from_lengths(lengths: Vec<u32>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if lengths.len() == 1 {
            if lengths[0] != 0 {
                return Err(Error::InvalidParams(
                    "a single-symbol code must use the empty codeword".into(),
                ));
            }
            return Ok(Self {
                lengths,
                codewords: vec![0],
            });
        }
        let mut order: Vec<usize> = (0..lengths.len()).collect();
        order.sort_by_key(|&i| (lengths[i], i));
        let mut codewords = vec![0u64; lengths.len()];
        let mut code = 0u64;
        let mut prev_len = 0u32;
        for &sym in &order {
            let len = lengths[sym];
            if len == 0 || len > 63 {
                return Err(Error::InvalidParams(format!(
                    "codeword length {len} invalid for a {}-symbol alphabet",
                    lengths.len()
                )));
            }
            code <<= len - prev_len;
            if code >= 1u64 << len {
                return Err(Error::InvalidParams(
                    "codeword lengths violate the Kraft inequality".into(),
                ));
            }
            codewords[sym] = code;
            code += 1;
            prev_len = len;
        }
        Ok(Self { lengths, codewords })
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    /// The canonical codeword for a symbol, as (bits, bit-length); bits are
    /// stored in the low-order positions, most significant bit first.
    pub fn codeword(&self, symbol: usize) -> (u64, u32) {
        (self.codewords[symbol], self.lengths[symbol])
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Kraft sum as an exact fraction `(numerator, 2^max_len)`.
    pub fn kraft_sum(&self) -> (u128, u128) {
        let max = *self.lengths.iter().max().unwrap();
        let num = self
            .lengths
            .iter()
            .map(|&l| 1u128 << (max - l))
            .sum::<u128>();
        (num, 1u128 << max)
    }

    /// Expected codeword length in bits under `dist` (residual mass excluded).
    pub fn average_length(&self, dist: &SymbolDistribution) -> Result<f64> {
        if dist.len() != self.lengths.len() {
            return Err(Error::DimensionMismatch(format!(
                "distribution over {} symbols, code over {}",
                dist.len(),
                self.lengths.len()
            )));
        }
        Ok(self
            .lengths
            .iter()
            .zip(dist.probs())
            .map(|(&l, &p)| f64::from(l) * p)
            .sum())
    }

    /// Exact average length under integer weights, as a reduced fraction
    /// (sum of length-weighted counts over total weight).
    pub fn average_length_exact(&self, weights: &[u128]) -> Result<(u128, u128)> {
        if weights.len() != self.lengths.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a {}-symbol code",
                weights.len(),
                self.lengths.len()
            )));
        }
        let mut num = 0u128;
        let mut den = 0u128;
        for (&l, &w) in self.lengths.iter().zip(weights) {
            let term = u128::from(l)
                .checked_mul(w)
                .ok_or_else(|| Error::TooLarge("length-weight product overflow".into()))?;
            num = num
                .checked_add(term)
                .ok_or_else(|| Error::TooLarge("average-length numerator overflow".into()))?;
            den = den
                .checked_add(w)
                .ok_or_else(|| Error::TooLarge("total weight overflow".into()))?;
        }
        if den == 0 {
            return Err(Error::EmptyDistribution);
        }
        let g = gcd_u128(num, den);
        Ok((num / g, den / g))
    }
}

/// Huffman code for a (possibly deficient) symbol distribution.
pub fn huffman_build(dist: &SymbolDistribution) -> Result<PrefixCode> {
    PrefixCode::from_distribution(dist)
}

pub(crate) fn gcd_u128(a: u128, b: u128) -> u128 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

// ---------------------------------------------------------------------------
