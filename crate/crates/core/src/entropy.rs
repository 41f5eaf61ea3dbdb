//! Min-entropy estimation over 8-bit symbols and leftover-hash output sizing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstore::BitString;
use crate::real::Real;

#[derive(Debug, Error, PartialEq)]
pub enum EntropyError {
    #[error("cannot estimate entropy from an empty histogram")]
    EmptyHistogram,
    #[error("insufficient entropy for requested security: block carries {available:.3} bits, security cost is {cost:.3} bits")]
    InsufficientEntropy { available: f64, cost: f64 },
    #[error("invalid extraction parameters: {0}")]
    InvalidParams(String),
    #[error("bit length {0} is not a whole number of 8-bit symbols")]
    RaggedSymbols(usize),
}

/// Occurrence counts of the 256 possible 8-bit ADC codes.
#[derive(Debug, Clone)]
pub struct SymbolHistogram {
    counts: [u64; 256],
    total: u64,
}

impl Default for SymbolHistogram {
    fn default() -> Self {
        SymbolHistogram {
            counts: [0; 256],
            total: 0,
        }
    }
}

impl SymbolHistogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut h = Self::new();
        for &b in bytes {
            h.counts[b as usize] += 1;
        }
        h.total = bytes.len() as u64;
        h
    }

    /// Reads consecutive 8-bit symbols (MSB first) out of a bit-string.
    pub fn from_bits(bits: &BitString) -> Result<Self, EntropyError> {
        if !bits.len().is_multiple_of(8) {
            return Err(EntropyError::RaggedSymbols(bits.len()));
        }
        Ok(Self::from_bytes(&bits.to_bytes_msb()))
    }

    pub fn add(&mut self, symbol: u8) {
        self.counts[symbol as usize] += 1;
        self.total += 1;
    }

    /// Merge for sharded accumulation: counts add, totals add.
    pub fn merge(&mut self, other: &SymbolHistogram) {
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    /// Most frequent symbol and its count (lowest code wins ties).
    pub fn most_common(&self) -> (u8, u64) {
        let mut best = (0u8, self.counts[0]);
        for (sym, &c) in self.counts.iter().enumerate().skip(1) {
            if c > best.1 {
                best = (sym as u8, c);
            }
        }
        best
    }
}

/// Min-entropy in bits per symbol: −log₂ of the maximum symbol probability.
///
/// A degenerate single-symbol histogram yields 0.0; callers surface that as
/// a warning rather than an error.
pub fn min_entropy<R: Real>(h: &SymbolHistogram) -> Result<R, EntropyError> {
    if h.total == 0 {
        return Err(EntropyError::EmptyHistogram);
    }
    let (_, max_count) = h.most_common();
    let p_max = R::from_count(max_count as usize) / R::from_count(h.total as usize);
    Ok(-p_max.log2())
}

/// Secure output length per block by the leftover hash lemma:
/// `floor(block_bits · (hmin/8) − 2 · eps_exponent)` where the security
/// parameter is `ε = 2^(−eps_exponent)`.
pub fn output_length<R: Real>(
    block_bits: usize,
    hmin_per_symbol: R,
    eps_exponent: R,
) -> Result<usize, EntropyError> {
    if block_bits == 0 || !block_bits.is_multiple_of(8) {
        return Err(EntropyError::InvalidParams(format!(
            "block size {block_bits} must be a positive multiple of 8"
        )));
    }
    let eight = R::from_f64c(8.0);
    if hmin_per_symbol <= R::zero() || hmin_per_symbol > eight {
        return Err(EntropyError::InvalidParams(format!(
            "min-entropy per symbol {hmin_per_symbol} outside (0, 8]"
        )));
    }
    if eps_exponent <= R::zero() {
        return Err(EntropyError::InvalidParams(format!(
            "security exponent {eps_exponent} must be positive"
        )));
    }
    let available = R::from_count(block_bits) * (hmin_per_symbol / eight);
    let cost = R::from_f64c(2.0) * eps_exponent;
    let m = (available - cost).floor();
    if m <= R::zero() {
        return Err(EntropyError::InsufficientEntropy {
            available: available.to_f64().unwrap_or(f64::NAN),
            cost: cost.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(m.to_usize().expect("positive floored length fits usize"))
}

/// Full parameter set for one extraction run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionParams<R> {
    pub block_bits: usize,
    pub output_bits: usize,
    pub eps_exponent: R,
    pub hmin_per_symbol: R,
    pub parallel_blocks: usize,
    pub sample_bits: usize,
}

impl<R: Real> ExtractionParams<R> {
    pub fn new(
        block_bits: usize,
        output_bits: usize,
        eps_exponent: R,
        hmin_per_symbol: R,
        parallel_blocks: usize,
        sample_bits: usize,
    ) -> Result<Self, EntropyError> {
        if block_bits == 0 || !block_bits.is_multiple_of(8) {
            return Err(EntropyError::InvalidParams(format!(
                "block size {block_bits} must be a positive multiple of 8"
            )));
        }
        if output_bits == 0 || output_bits > block_bits {
            return Err(EntropyError::InvalidParams(format!(
                "output length {output_bits} outside (0, {block_bits}]"
            )));
        }
        if parallel_blocks == 0 {
            return Err(EntropyError::InvalidParams(
                "parallel block count must be at least 1".into(),
            ));
        }
        let batch = parallel_blocks * block_bits;
        if sample_bits == 0 || !sample_bits.is_multiple_of(batch) {
            return Err(EntropyError::InvalidParams(format!(
                "sample of {sample_bits} bits is not a whole number of {batch}-bit batches"
            )));
        }
        let eight = R::from_f64c(8.0);
        if hmin_per_symbol <= R::zero() || hmin_per_symbol > eight {
            return Err(EntropyError::InvalidParams(format!(
                "min-entropy per symbol {hmin_per_symbol} outside (0, 8]"
            )));
        }
        Ok(ExtractionParams {
            block_bits,
            output_bits,
            eps_exponent,
            hmin_per_symbol,
            parallel_blocks,
            sample_bits,
        })
    }

    /// Derive the output length from the leftover hash lemma.
    pub fn from_entropy(
        block_bits: usize,
        eps_exponent: R,
        hmin_per_symbol: R,
        parallel_blocks: usize,
        sample_bits: usize,
    ) -> Result<Self, EntropyError> {
        let m = output_length(block_bits, hmin_per_symbol, eps_exponent)?;
        Self::new(
            block_bits,
            m,
            eps_exponent,
            hmin_per_symbol,
            parallel_blocks,
            sample_bits,
        )
    }

    pub fn batches(&self) -> usize {
        self.sample_bits / (self.parallel_blocks * self.block_bits)
    }

    pub fn toeplitz_string_len(&self) -> usize {
        self.block_bits + self.output_bits - 1
    }
}

/// Ratio of output bits to input bits per block.
pub fn extraction_ratio<R: Real>(p: &ExtractionParams<R>) -> R {
    R::from_count(p.output_bits) / R::from_count(p.block_bits)
}
