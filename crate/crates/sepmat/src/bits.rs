//! Packed bit vectors over `{0,1}^t`.
//!
//! Columns of a testing matrix and pooled outcomes are length-`t` binary
//! vectors; every verifier and decoder in this crate reduces to cover tests
//! and Boolean sums on them, so both are word-parallel over `u64` blocks.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const BLOCK_BITS: usize = u64::BITS as usize;

/// A fixed-length binary vector stored as packed 64-bit blocks.
///
/// Bit positions are 0-based. Unused bits of the last block are kept at
/// zero so that equality and hashing work block-wise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    blocks: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of length `len`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVec length must be at least 1");
        BitVec {
            len,
            blocks: vec![0; len.div_ceil(BLOCK_BITS)],
        }
    }

    /// Builds a vector from 0/1 entries, first entry = position 0.
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut v = BitVec::zeros(bits.len());
        for (i, b) in bits.iter().enumerate() {
            if *b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters, leftmost = position 0.
    pub fn parse(s: &str) -> crate::Result<Self> {
        if s.is_empty() {
            return Err(crate::Error::InvalidParameter(
                "empty bit string".to_string(),
            ));
        }
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(crate::Error::InvalidParameter(format!(
                        "invalid character '{other}' in bit string at position {}",
                        i + 1
                    )))
                }
            }
        }
        Ok(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false // length is always >= 1
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range 0..{}", self.len);
        (self.blocks[i / BLOCK_BITS] >> (i % BLOCK_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range 0..{}", self.len);
        let (b, off) = (i / BLOCK_BITS, i % BLOCK_BITS);
        if value {
            self.blocks[b] |= 1 << off;
        } else {
            self.blocks[b] &= !(1 << off);
        }
    }

    /// Coordinate-wise OR with `other`, in place.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    #[inline]
    pub fn or_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "length mismatch in or_assign");
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    /// Coordinate-wise OR, returning a new vector.
    pub fn or(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.or_assign(other);
        out
    }

    /// Coordinate-wise AND, returning a new vector.
    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in and");
        let mut out = self.clone();
        for (a, b) in out.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
        out
    }

    /// `self AND NOT other`, returning a new vector.
    pub fn and_not(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "length mismatch in and_not");
        let mut out = self.clone();
        for (a, b) in out.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
        out
    }

    /// True iff `support(other) ⊆ support(self)`, i.e. `self` covers `other`.
    ///
    /// # Panics
    /// Panics if the lengths differ.
    #[inline]
    pub fn covers(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in covers");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| b & !a == 0)
    }

    /// True iff the vectors share at least one set position.
    #[inline]
    pub fn intersects(&self, other: &Self) -> bool {
        assert_eq!(self.len, other.len, "length mismatch in intersects");
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    #[inline]
    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| *b == 0)
    }

    /// Iterates the 0-based positions of set bits, in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(bi * BLOCK_BITS + tz)
                }
            })
        })
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVec::parse(&s).map_err(D::Error::custom)
    }
}
