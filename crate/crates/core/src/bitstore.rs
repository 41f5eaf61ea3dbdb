//! Packed bit-string storage and the GF(2) word-level primitives used by
//! every other module.
//!
//! A [`BitString`] is a length-tagged sequence of bits packed into `u64`
//! words. Bit `i` of the logical string lives at bit `i % 64` of word
//! `i / 64` (LSB first), and every bit past `len` inside the last word is
//! kept at zero. That invariant lets the inner-product kernel run over full
//! words without masking anywhere but construction time.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitError {
    #[error("bit index {index} out of range for bit-string of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("bit-string length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("window [{start}, {start}+{width}) out of range for bit-string of length {len}")]
    WindowOutOfRange {
        start: usize,
        width: usize,
        len: usize,
    },
}

/// Packed, length-tagged sequence of bits.
///
/// Immutable by convention once built: all operations that produce new data
/// return fresh values, so instances can be shared freely across workers.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    /// All-zero string of the given length.
    pub fn zeros(len: usize) -> Self {
        BitString {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut s = BitString::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / WORD_BITS] |= 1 << (i % WORD_BITS);
            }
        }
        s
    }

    /// Unpacks bytes into bits, most-significant bit of each byte first.
    ///
    /// This is the convention for all byte-level file formats: byte `0xA5`
    /// becomes the bits `10100101`.
    pub fn from_bytes_msb(bytes: &[u8]) -> Self {
        let mut s = BitString::zeros(bytes.len() * 8);
        for (i, &byte) in bytes.iter().enumerate() {
            for j in 0..8 {
                if byte & (0x80 >> j) != 0 {
                    let idx = i * 8 + j;
                    s.words[idx / WORD_BITS] |= 1 << (idx % WORD_BITS);
                }
            }
        }
        s
    }

    /// Packs bits back into bytes, MSB first; a final partial byte is
    /// zero-padded in its low-order positions.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in 0..self.len {
            if self.get_unchecked(i) {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The i-th logical bit, or an error when `i >= len`.
    pub fn get(&self, i: usize) -> Result<bool, BitError> {
        if i >= self.len {
            return Err(BitError::IndexOutOfRange {
                index: i,
                len: self.len,
            });
        }
        Ok(self.get_unchecked(i))
    }

    #[inline]
    fn get_unchecked(&self, i: usize) -> bool {
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    /// Appends all of `other` after the current contents.
    pub fn extend_from(&mut self, other: &BitString) {
        let shift = self.len % WORD_BITS;
        if shift == 0 {
            self.words.extend_from_slice(&other.words);
            self.len += other.len;
            return;
        }
        // Every word of `other` straddles two words of `self`.
        for (k, &w) in other.words.iter().enumerate() {
            *self.words.last_mut().unwrap() |= w << shift;
            let remaining = other.len - k * WORD_BITS;
            if remaining > WORD_BITS - shift {
                self.words.push(w >> (WORD_BITS - shift));
            }
        }
        self.len += other.len;
        self.mask_tail();
    }

    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    /// Concatenation of `parts` in order, each part's bit order preserved.
    pub fn concat(parts: &[BitString]) -> BitString {
        let total: usize = parts.iter().map(|p| p.len).sum();
        let mut out = BitString {
            words: Vec::with_capacity(words_for(total)),
            len: 0,
        };
        for p in parts {
            out.extend_from(p);
        }
        out
    }

    /// 64 bits starting at `bit_offset`, zero-padded past the end.
    #[inline]
    pub fn extract_word(&self, bit_offset: usize) -> u64 {
        let wi = bit_offset / WORD_BITS;
        let shift = bit_offset % WORD_BITS;
        let lo = self.words.get(wi).copied().unwrap_or(0);
        if shift == 0 {
            return lo;
        }
        let hi = self.words.get(wi + 1).copied().unwrap_or(0);
        (lo >> shift) | (hi << (WORD_BITS - shift))
    }

    /// Raw storage word `w` (bits `64w .. 64w+63`); padding reads as zero.
    #[inline]
    pub fn word(&self, w: usize) -> u64 {
        self.words.get(w).copied().unwrap_or(0)
    }

    /// The contiguous sub-string `[start, start + width)`.
    pub fn window(&self, start: usize, width: usize) -> Result<BitString, BitError> {
        if start + width > self.len {
            return Err(BitError::WindowOutOfRange {
                start,
                width,
                len: self.len,
            });
        }
        let mut out = BitString::zeros(width);
        for (k, w) in out.words.iter_mut().enumerate() {
            *w = self.extract_word(start + k * WORD_BITS);
        }
        out.mask_tail();
        Ok(out)
    }

    /// GF(2) inner product: XOR-reduction of the bitwise AND of `self` and
    /// `other`. Both strings must have the same length.
    pub fn and_parity(&self, other: &BitString) -> Result<bool, BitError> {
        if self.len != other.len {
            return Err(BitError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        Ok(acc.count_ones() & 1 == 1)
    }

    /// Bitwise XOR of two equal-length strings.
    pub fn xor(&self, other: &BitString) -> Result<BitString, BitError> {
        if self.len != other.len {
            return Err(BitError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitString {
            words,
            len: self.len,
        })
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Same bits in reverse order.
    pub fn reversed(&self) -> BitString {
        let mut out = BitString::zeros(self.len);
        for i in 0..self.len {
            if self.get_unchecked(i) {
                let j = self.len - 1 - i;
                out.words[j / WORD_BITS] |= 1 << (j % WORD_BITS);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get_unchecked(i))
    }
}

impl FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = BitString::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.words[i / WORD_BITS] |= 1 << (i % WORD_BITS),
                other => return Err(format!("invalid bit character {other:?} at position {i}")),
            }
        }
        Ok(out)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get_unchecked(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const PREVIEW: usize = 64;
        write!(f, "BitString(len={}, ", self.len)?;
        for i in 0..self.len.min(PREVIEW) {
            f.write_str(if self.get_unchecked(i) { "1" } else { "0" })?;
        }
        if self.len > PREVIEW {
            f.write_str("…")?;
        }
        f.write_str(")")
    }
}
