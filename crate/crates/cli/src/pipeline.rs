//! The extraction pipeline shared by `extract`, `bench`, and the test
//! harness: entropy estimate → output sizing → seed → Toeplitz string →
//! blockwise extraction.

use std::time::Instant;

use anyhow::{bail, Context, Result};

use tse_core::bitstore::BitString;
use tse_core::entropy::{extraction_ratio, min_entropy, ExtractionParams, SymbolHistogram};
use tse_core::extractor::{extract_sample_threads, BatchPlan, ToeplitzSpec};
use tse_core::seedgen::{build_seed, generate_toeplitz_string, SeedRecipe, DEFAULT_TAPS};

#[derive(Debug, Clone)]
pub struct ExtractOptions {
    pub block_bits: usize,
    pub eps_exponent: f64,
    pub parallel_blocks: usize,
    pub pin_hmin: Option<f64>,
    pub m_override: Option<usize>,
    pub taps: Vec<usize>,
    pub nonce: u64,
    /// 0 means one worker per available core.
    pub threads: usize,
    /// Explicit recipe (re-runs from a report); otherwise derived from the
    /// nonce.
    pub recipe: Option<SeedRecipe>,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            block_bits: 1000,
            eps_exponent: 12.5,
            parallel_blocks: 40,
            pin_hmin: None,
            m_override: None,
            taps: DEFAULT_TAPS.to_vec(),
            nonce: 0,
            threads: 0,
            recipe: None,
        }
    }
}

pub struct ExtractOutcome {
    pub bits: BitString,
    pub params: ExtractionParams<f64>,
    pub recipe: SeedRecipe,
    pub hmin_used: f64,
    pub hmin_source: &'static str,
    pub hmin_measured: f64,
    pub p_max: f64,
    pub most_common_symbol: u8,
    pub overridden: bool,
    pub threads_used: usize,
    pub seconds: f64,
}

impl ExtractOutcome {
    pub fn extraction_ratio(&self) -> f64 {
        extraction_ratio(&self.params)
    }

    pub fn input_gbps(&self) -> f64 {
        self.params.sample_bits as f64 / self.seconds / 1e9
    }
}

pub fn resolve_threads(requested: usize) -> usize {
    if requested == 0 {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    } else {
        requested
    }
}

/// Runs the full chain over raw sample bytes.
pub fn run_extraction(raw_bytes: &[u8], opts: &ExtractOptions) -> Result<ExtractOutcome> {
    let sample_bits = raw_bytes.len() * 8;
    let batch_bits = opts.parallel_blocks * opts.block_bits;
    if sample_bits == 0 || !sample_bits.is_multiple_of(batch_bits) {
        bail!(
            "sample of {sample_bits} bits is not a whole number of {batch_bits}-bit batches \
             ({} blocks × {} bits); pad or trim the input",
            opts.parallel_blocks,
            opts.block_bits
        );
    }

    let hist = SymbolHistogram::from_bytes(raw_bytes);
    let hmin_measured: f64 = min_entropy(&hist).context("estimating min-entropy")?;
    let (most_common_symbol, max_count) = hist.most_common();
    let p_max = max_count as f64 / hist.total() as f64;

    let (hmin_used, hmin_source) = match opts.pin_hmin {
        Some(pinned) => (pinned, "pinned"),
        None => (hmin_measured, "estimated"),
    };

    let params = match opts.m_override {
        Some(m) => ExtractionParams::new(
            opts.block_bits,
            m,
            opts.eps_exponent,
            hmin_used.clamp(f64::MIN_POSITIVE, 8.0),
            opts.parallel_blocks,
            sample_bits,
        )?,
        None => ExtractionParams::from_entropy(
            opts.block_bits,
            opts.eps_exponent,
            hmin_used,
            opts.parallel_blocks,
            sample_bits,
        )?,
    };

    let raw = BitString::from_bytes_msb(raw_bytes);
    let recipe = match &opts.recipe {
        Some(r) => r.clone(),
        None => SeedRecipe::from_nonce(opts.nonce, raw.len())?,
    };
    let mut lfsr = build_seed(&raw, &recipe, &opts.taps)?;
    let ts = generate_toeplitz_string(&mut lfsr, params.toeplitz_string_len());
    let spec = ToeplitzSpec::new(params.block_bits, params.output_bits, ts)?;
    let plan = BatchPlan::for_sample(params.parallel_blocks, params.block_bits, sample_bits)?;

    let threads_used = resolve_threads(opts.threads);
    let start = Instant::now();
    let bits = extract_sample_threads(&plan, &spec, &raw, threads_used)?;
    let seconds = start.elapsed().as_secs_f64();

    Ok(ExtractOutcome {
        bits,
        params,
        recipe,
        hmin_used,
        hmin_source,
        hmin_measured,
        p_max,
        most_common_symbol,
        overridden: opts.m_override.is_some(),
        threads_used,
        seconds,
    })
}
