//! JSON report schemas. Every report carries `schema_version` so downstream
//! tooling can detect format changes.

use serde::{Deserialize, Serialize};

use tse_core::seedgen::SeedRecipe;

pub const SCHEMA_VERSION: u32 = 1;

/// Full reproducibility envelope for one extraction run: everything needed
/// to regenerate the output file bit-for-bit, plus measured figures.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub parameters: RunParameters,
    pub entropy: EntropySection,
    pub security: SecuritySection,
    /// Wall-clock figures; excluded from determinism comparisons.
    pub timing: TimingSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hwmodel: Option<tse_core::HwModelReportF64>,
    pub artifacts: ArtifactsSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub block_bits: usize,
    pub output_bits: usize,
    pub eps_exponent: f64,
    pub parallel_blocks: usize,
    pub batches: usize,
    pub sample_bits: usize,
    pub lfsr_taps: Vec<usize>,
    pub seed_recipe: SeedRecipe,
    pub nonce: u64,
    pub threads: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropySection {
    /// Value the output length was computed from.
    pub hmin_per_symbol_used: f64,
    /// "estimated" or "pinned".
    pub hmin_source: String,
    pub hmin_per_symbol_measured: f64,
    pub p_max: f64,
    pub most_common_symbol: u8,
    /// Set when the histogram degenerates to a single symbol.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecuritySection {
    pub eps_exponent: f64,
    pub extraction_ratio: f64,
    /// False when --m-override bypassed the leftover-hash sizing.
    pub leftover_hash_guarantee: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingSection {
    pub extract_seconds: f64,
    pub software_input_gbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactsSection {
    pub input_path: String,
    pub input_sha256: String,
    pub input_bytes: u64,
    pub output_path: String,
    pub output_sha256: String,
    /// True bit length; the file pads the final byte with zeros.
    pub output_bits: usize,
    pub output_bytes: u64,
}
