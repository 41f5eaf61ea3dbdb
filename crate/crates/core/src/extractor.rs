//! The Toeplitz strong extractor: per-block GF(2) matrix-vector products
//! realized as sliding windows over the Toeplitz string, orchestrated over
//! parallel blocks and sequential batches.
//!
//! The matrix convention is frozen for reproducibility: row `i` of the
//! implied `m × bs` matrix is `T[i][j] = ts[i − j + bs − 1]`, i.e. the
//! window `ts[i .. i+bs−1]` read in reverse. Consecutive rows therefore
//! share their overlap shifted by one position, which is what lets hardware
//! produce one output bit per clock from a single shifting register.

use std::num::NonZeroUsize;

use thiserror::Error;

use crate::bitstore::{BitError, BitString};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("Toeplitz string has {got} bits, geometry {block_bits}×{output_bits} needs {need}")]
    BadStringLength {
        got: usize,
        need: usize,
        block_bits: usize,
        output_bits: usize,
    },
    #[error("row {row} out of range for {output_bits} output bits")]
    RowOutOfRange { row: usize, output_bits: usize },
    #[error("input block has {got} bits, expected {expected}")]
    BlockLengthMismatch { got: usize, expected: usize },
    #[error("raw sample has {got} bits, plan expects {expected}")]
    SampleLengthMismatch { got: usize, expected: usize },
    #[error("plan block size {plan} does not match Toeplitz geometry {spec}")]
    BlockSizeMismatch { plan: usize, spec: usize },
    #[error("geometry must be non-degenerate: {0}")]
    DegenerateGeometry(String),
    #[error(transparent)]
    Bits(#[from] BitError),
}

/// Toeplitz hash geometry: the generating string plus block/output widths.
///
/// Holds a reversed copy of the string so the packed kernel can read rows as
/// forward windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzSpec {
    block_bits: usize,
    output_bits: usize,
    string: BitString,
    string_rev: BitString,
}

impl ToeplitzSpec {
    pub fn new(
        block_bits: usize,
        output_bits: usize,
        string: BitString,
    ) -> Result<Self, ExtractError> {
        if block_bits == 0 || output_bits == 0 {
            return Err(ExtractError::DegenerateGeometry(format!(
                "block_bits={block_bits}, output_bits={output_bits}"
            )));
        }
        let need = block_bits + output_bits - 1;
        if string.len() != need {
            return Err(ExtractError::BadStringLength {
                got: string.len(),
                need,
                block_bits,
                output_bits,
            });
        }
        let string_rev = string.reversed();
        Ok(ToeplitzSpec {
            block_bits,
            output_bits,
            string,
            string_rev,
        })
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    pub fn output_bits(&self) -> usize {
        self.output_bits
    }

    pub fn string(&self) -> &BitString {
        &self.string
    }

    /// Row `i` of the implied matrix: the window `ts[i .. i+bs−1]` reversed.
    pub fn row(&self, i: usize) -> Result<BitString, ExtractError> {
        if i >= self.output_bits {
            return Err(ExtractError::RowOutOfRange {
                row: i,
                output_bits: self.output_bits,
            });
        }
        Ok(self.string.window(i, self.block_bits)?.reversed())
    }
}

/// Reference extractor: materializes every row and takes the GF(2) inner
/// product bit by bit. Kept deliberately free of packing tricks so the fast
/// path has an independent implementation to be checked against.
pub fn extract_block_oracle(spec: &ToeplitzSpec, x: &BitString) -> Result<BitString, ExtractError> {
    if x.len() != spec.block_bits {
        return Err(ExtractError::BlockLengthMismatch {
            got: x.len(),
            expected: spec.block_bits,
        });
    }
    let mut out = BitString::new();
    for i in 0..spec.output_bits {
        let row = spec.row(i)?;
        let mut bit = false;
        for j in 0..spec.block_bits {
            bit ^= row.get(j)? & x.get(j)?;
        }
        out.push(bit);
    }
    Ok(out)
}

/// Packed extractor: output bit `i` is the popcount parity of the reversed
/// string's 64-bit windows ANDed against the input words.
///
/// Row `i` equals the forward window of the reversed string starting at
/// `m − 1 − i`, so the kernel is one unaligned word read, one AND and one
/// XOR per input word, and a single popcount per output bit. Input padding
/// is zero by construction, which masks the window's overhang for free.
pub fn extract_block_fast(spec: &ToeplitzSpec, x: &BitString) -> Result<BitString, ExtractError> {
    if x.len() != spec.block_bits {
        return Err(ExtractError::BlockLengthMismatch {
            got: x.len(),
            expected: spec.block_bits,
        });
    }
    let words = spec.block_bits.div_ceil(64);
    let mut bits = Vec::with_capacity(spec.output_bits);
    for i in 0..spec.output_bits {
        let base = spec.output_bits - 1 - i;
        let mut acc = 0u64;
        for w in 0..words {
            acc ^= spec.string_rev.extract_word(base + w * 64) & x.word(w);
        }
        bits.push(acc.count_ones() & 1 == 1);
    }
    Ok(BitString::from_bools(&bits))
}

/// Batch geometry: how a raw sample splits into batches of parallel blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchPlan {
    parallel_blocks: usize,
    block_bits: usize,
    batches: usize,
}

impl BatchPlan {
    pub fn new(
        parallel_blocks: usize,
        block_bits: usize,
        batches: usize,
    ) -> Result<Self, ExtractError> {
        if parallel_blocks == 0 || block_bits == 0 || batches == 0 {
            return Err(ExtractError::DegenerateGeometry(format!(
                "parallel_blocks={parallel_blocks}, block_bits={block_bits}, batches={batches}"
            )));
        }
        Ok(BatchPlan {
            parallel_blocks,
            block_bits,
            batches,
        })
    }

    /// Plan covering a whole sample; the sample must split into whole batches.
    pub fn for_sample(
        parallel_blocks: usize,
        block_bits: usize,
        sample_bits: usize,
    ) -> Result<Self, ExtractError> {
        if parallel_blocks == 0 || block_bits == 0 {
            return Err(ExtractError::DegenerateGeometry(format!(
                "parallel_blocks={parallel_blocks}, block_bits={block_bits}"
            )));
        }
        let batch_bits = parallel_blocks * block_bits;
        if sample_bits == 0 || !sample_bits.is_multiple_of(batch_bits) {
            return Err(ExtractError::SampleLengthMismatch {
                got: sample_bits,
                expected: sample_bits.next_multiple_of(batch_bits).max(batch_bits),
            });
        }
        Self::new(parallel_blocks, block_bits, sample_bits / batch_bits)
    }

    pub fn parallel_blocks(&self) -> usize {
        self.parallel_blocks
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    pub fn batches(&self) -> usize {
        self.batches
    }

    pub fn sample_bits(&self) -> usize {
        self.parallel_blocks * self.block_bits * self.batches
    }

    pub fn total_blocks(&self) -> usize {
        self.parallel_blocks * self.batches
    }
}

/// Extracts a whole sample: batch 0 block 0 first, then block 1, …, then
/// batch 1, with block outputs concatenated in the same order. One Toeplitz
/// string is shared by every block.
pub fn extract_sample(
    plan: &BatchPlan,
    spec: &ToeplitzSpec,
    raw: &BitString,
) -> Result<BitString, ExtractError> {
    let threads = std::thread::available_parallelism().map_or(1, NonZeroUsize::get);
    extract_sample_threads(plan, spec, raw, threads)
}

/// As [`extract_sample`], with an explicit worker count. Output is
/// bit-identical for every worker count: each block's output lands at a
/// precomputed offset, so scheduling cannot reorder anything.
pub fn extract_sample_threads(
    plan: &BatchPlan,
    spec: &ToeplitzSpec,
    raw: &BitString,
    threads: usize,
) -> Result<BitString, ExtractError> {
    if plan.block_bits != spec.block_bits {
        return Err(ExtractError::BlockSizeMismatch {
            plan: plan.block_bits,
            spec: spec.block_bits,
        });
    }
    if raw.len() != plan.sample_bits() {
        return Err(ExtractError::SampleLengthMismatch {
            got: raw.len(),
            expected: plan.sample_bits(),
        });
    }
    let total = plan.total_blocks();
    let threads = threads.max(1).min(total);

    let run_range = |range: std::ops::Range<usize>| -> Result<Vec<BitString>, ExtractError> {
        range
            .map(|block| {
                let x = raw.window(block * plan.block_bits, plan.block_bits)?;
                extract_block_fast(spec, &x)
            })
            .collect()
    };

    let outputs: Vec<BitString> = if threads == 1 {
        run_range(0..total)?
    } else {
        let chunk = total.div_ceil(threads);
        let results: Vec<Result<Vec<BitString>, ExtractError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(total);
                    scope.spawn(move || run_range(lo..hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        let mut all = Vec::with_capacity(total);
        for r in results {
            all.extend(r?);
        }
        all
    };

    Ok(BitString::concat(&outputs))
}
