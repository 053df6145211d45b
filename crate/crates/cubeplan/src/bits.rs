//! Fixed-length binary state vectors.
//!
//! Every latent state, effect mask, and precondition mask in the crate is a
//! [`BitState`]: `len` bits packed into 64-bit blocks, bit `i` stored in
//! block `i / 64` at position `i % 64`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("bit index {index} out of range for {len}-bit state")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("invalid bit character {found:?} at position {position}")]
    InvalidBitChar { found: char, position: usize },
}

/// A fixed-length vector of bits. Bit strings are written index-0-first:
/// `"0110"` has bit 1 and bit 2 set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitState {
    len: usize,
    blocks: Vec<u64>,
}

impl BitState {
    pub fn zeros(len: usize) -> Self {
        BitState {
            len,
            blocks: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut s = Self::zeros(len);
        for b in &mut s.blocks {
            *b = u64::MAX;
        }
        s.mask_tail();
        s
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.set(i, true);
            }
        }
        s
    }

    /// Build from indices of set bits.
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut s = Self::zeros(len);
        for &i in indices {
            s.set(i, true);
        }
        s
    }

    /// Parse an index-0-first bit string such as `"0101"`.
    pub fn parse(text: &str) -> Result<Self, BitsError> {
        let mut s = Self::zeros(text.len());
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => s.set(i, true),
                _ => return Err(BitsError::InvalidBitChar { found: c, position: i }),
            }
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(index < self.len, "bit index {index} out of range for {}-bit state", self.len);
        self.blocks[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(index < self.len, "bit index {index} out of range for {}-bit state", self.len);
        if value {
            self.blocks[index / 64] |= 1 << (index % 64);
        } else {
            self.blocks[index / 64] &= !(1 << (index % 64));
        }
    }

    pub fn flip(&mut self, index: usize) {
        let v = self.get(index);
        self.set(index, !v);
    }

    pub fn count_ones(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    /// Indices of set bits in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(bi * 64 + tz)
                }
            })
        })
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(self.len, other.len, "bit-state length mismatch: {} vs {}", self.len, other.len);
    }

    pub fn or(&self, other: &Self) -> Self {
        self.check_len(other);
        self.zip(other, |a, b| a | b)
    }

    pub fn and(&self, other: &Self) -> Self {
        self.check_len(other);
        self.zip(other, |a, b| a & b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.check_len(other);
        self.zip(other, |a, b| a ^ b)
    }

    /// Bits set in `self` but not in `other`.
    pub fn and_not(&self, other: &Self) -> Self {
        self.check_len(other);
        self.zip(other, |a, b| a & !b)
    }

    pub fn not(&self) -> Self {
        let mut out = BitState {
            len: self.len,
            blocks: self.blocks.iter().map(|&b| !b).collect(),
        };
        out.mask_tail();
        out
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_len(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    /// True iff every bit set in `other` is also set in `self`.
    pub fn contains_all(&self, other: &Self) -> bool {
        self.check_len(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == *b)
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        BitState {
            len: self.len,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitState({self})")
    }
}
