//! Seed construction and LFSR expansion into the Toeplitz string.
//!
//! A 25-cell Fibonacci LFSR is seeded from 23 bits picked out of the raw
//! sample plus two cells pinned to `1` so the register can never start
//! all-zero. One output bit falls out of cell 0 per step; concatenating
//! `block_bits + output_bits − 1` of them yields the Toeplitz string.
//!
//! Tap values name the feedback polynomial's exponents minus one: the
//! default `{24, 21}` realizes x²⁵ + x²² + 1, a maximal-length polynomial,
//! so the register walks all 2²⁵ − 1 non-zero states before repeating.
//! Stepping shifts every cell one position toward cell 0 and inserts the
//! feedback parity at the top; a tap at `t` reads the cell holding the bit
//! that left the register `width − t` steps in the future, i.e. cell
//! `width − 1 − t` of the current state.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstore::BitString;

/// Register width of the seed LFSR.
pub const LFSR_WIDTH: usize = 25;
/// Default feedback taps, the exponents of x²⁵ + x²² + 1 minus one.
pub const DEFAULT_TAPS: [usize; 2] = [24, 21];
/// Register cells pinned to `1` by the default recipe.
pub const DEFAULT_FIXED_ONES: [usize; 2] = [0, 24];
/// Number of seed bits lifted from the raw sample.
pub const RAW_SEED_BITS: usize = LFSR_WIDTH - DEFAULT_FIXED_ONES.len();

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeedError {
    #[error("LFSR width {0} outside supported range 2..=32")]
    WidthOutOfRange(usize),
    #[error("tap {tap} out of range for width {width}")]
    TapOutOfRange { tap: usize, width: usize },
    #[error("at least one feedback tap is required")]
    NoTaps,
    #[error("initial register must not be all-zero")]
    ZeroRegister,
    #[error("register value {value:#x} does not fit in {width} cells")]
    RegisterTooWide { value: u32, width: usize },
    #[error("recipe must carry exactly {expected} raw offsets, got {got}")]
    WrongOffsetCount { expected: usize, got: usize },
    #[error("recipe must pin exactly 2 distinct cells, got {0:?}")]
    BadFixedPositions(Vec<usize>),
    #[error("fixed cell {0} out of range for a {LFSR_WIDTH}-cell register")]
    FixedPositionOutOfRange(usize),
    #[error("raw offset {offset} out of range for raw sample of {raw_len} bits")]
    OffsetOutOfRange { offset: usize, raw_len: usize },
}

/// Fibonacci LFSR with output at cell 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lfsr {
    register: u32,
    width: usize,
    taps: Vec<usize>,
    feedback_mask: u32,
}

impl Lfsr {
    pub fn new(width: usize, taps: &[usize], register: u32) -> Result<Self, SeedError> {
        if !(2..=32).contains(&width) {
            return Err(SeedError::WidthOutOfRange(width));
        }
        if taps.is_empty() {
            return Err(SeedError::NoTaps);
        }
        let mut feedback_mask = 0u32;
        for &tap in taps {
            if tap >= width {
                return Err(SeedError::TapOutOfRange { tap, width });
            }
            feedback_mask |= 1 << (width - 1 - tap);
        }
        if width < 32 && register >> width != 0 {
            return Err(SeedError::RegisterTooWide {
                value: register,
                width,
            });
        }
        if register == 0 {
            return Err(SeedError::ZeroRegister);
        }
        Ok(Lfsr {
            register,
            width,
            taps: taps.to_vec(),
            feedback_mask,
        })
    }

    pub fn register(&self) -> u32 {
        self.register
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn taps(&self) -> &[usize] {
        &self.taps
    }

    /// One clock: emit cell 0, shift toward cell 0, insert feedback on top.
    pub fn step(&mut self) -> bool {
        let out = self.register & 1 == 1;
        let feedback = (self.register & self.feedback_mask).count_ones() & 1;
        self.register = (self.register >> 1) | (feedback << (self.width - 1));
        out
    }

    /// The next `length` output bits in generation order; advances the state.
    pub fn bits(&mut self, length: usize) -> BitString {
        let mut out = BitString::new();
        for _ in 0..length {
            out.push(self.step());
        }
        out
    }
}

/// Selection of seed material: which raw bits feed the register and which
/// cells are pinned high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedRecipe {
    raw_bit_offsets: Vec<usize>,
    fixed_one_positions: [usize; 2],
}

impl SeedRecipe {
    pub fn new(
        raw_bit_offsets: Vec<usize>,
        fixed_one_positions: [usize; 2],
    ) -> Result<Self, SeedError> {
        if raw_bit_offsets.len() != RAW_SEED_BITS {
            return Err(SeedError::WrongOffsetCount {
                expected: RAW_SEED_BITS,
                got: raw_bit_offsets.len(),
            });
        }
        let [a, b] = fixed_one_positions;
        if a == b {
            return Err(SeedError::BadFixedPositions(vec![a, b]));
        }
        for p in fixed_one_positions {
            if p >= LFSR_WIDTH {
                return Err(SeedError::FixedPositionOutOfRange(p));
            }
        }
        Ok(SeedRecipe {
            raw_bit_offsets,
            fixed_one_positions,
        })
    }

    /// Default recipe: 23 distinct raw-bit offsets drawn uniformly from the
    /// nonce-seeded generator (sorted ascending), fixed ones at cells 0 and 24.
    pub fn from_nonce(nonce: u64, raw_len: usize) -> Result<Self, SeedError> {
        if raw_len < RAW_SEED_BITS {
            return Err(SeedError::OffsetOutOfRange {
                offset: RAW_SEED_BITS - 1,
                raw_len,
            });
        }
        let mut rng = ChaCha12Rng::seed_from_u64(nonce);
        let mut offsets = sample(&mut rng, raw_len, RAW_SEED_BITS).into_vec();
        offsets.sort_unstable();
        Ok(SeedRecipe {
            raw_bit_offsets: offsets,
            fixed_one_positions: DEFAULT_FIXED_ONES,
        })
    }

    pub fn raw_bit_offsets(&self) -> &[usize] {
        &self.raw_bit_offsets
    }

    pub fn fixed_one_positions(&self) -> [usize; 2] {
        self.fixed_one_positions
    }
}

/// Builds the 25-cell register: pinned cells first, then the recipe's raw
/// bits placed into the free cells in ascending cell order.
pub fn build_seed(raw: &BitString, recipe: &SeedRecipe, taps: &[usize]) -> Result<Lfsr, SeedError> {
    let mut register = 0u32;
    for p in recipe.fixed_one_positions {
        register |= 1 << p;
    }
    let free_cells = (0..LFSR_WIDTH).filter(|c| !recipe.fixed_one_positions.contains(c));
    for (cell, &offset) in free_cells.zip(&recipe.raw_bit_offsets) {
        let bit = raw.get(offset).map_err(|_| SeedError::OffsetOutOfRange {
            offset,
            raw_len: raw.len(),
        })?;
        if bit {
            register |= 1 << cell;
        }
    }
    Lfsr::new(LFSR_WIDTH, taps, register)
}

/// The Toeplitz string: the first `length` LFSR output bits.
pub fn generate_toeplitz_string(state: &mut Lfsr, length: usize) -> BitString {
    state.bits(length)
}
