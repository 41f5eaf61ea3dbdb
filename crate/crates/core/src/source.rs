//! Raw-sample supply: file ingestion and a calibrated Gaussian simulator
//! standing in for a phase-noise source digitized by an 8-bit ADC.
//!
//! The simulator only has to reproduce the one statistic the pipeline
//! consumes — the symbol histogram, and through it the most-probable-code
//! probability — so a clamped, rounded normal is enough. Samples are i.i.d.
//! by construction; temporal structure of a physical source is out of scope.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstore::BitString;
use crate::special::normal_cdf;

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("invalid simulator config: {0}")]
    InvalidConfig(String),
    #[error("min-entropy target {target} bits/symbol unattainable: maximum achievable at this offset is {max_achievable:.4}")]
    UnattainableTarget { target: f64, max_achievable: f64 },
    #[error("raw file {path} is empty")]
    EmptyFile { path: String },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Gaussian stand-in for the physical source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSourceConfig {
    /// Number of 8-bit samples to draw.
    pub n_samples: usize,
    /// Standard deviation of the underlying noise, in ADC-code units.
    pub noise_sigma: f64,
    /// Mean of the underlying noise, in ADC-code units.
    pub dc_offset: f64,
    /// Reproducibility token seeding the generator.
    pub rng_nonce: u64,
}

impl SimSourceConfig {
    pub fn validate(&self) -> Result<(), SourceError> {
        if self.n_samples == 0 {
            return Err(SourceError::InvalidConfig("n_samples must be ≥ 1".into()));
        }
        if self.noise_sigma.is_nan() || self.noise_sigma <= 0.0 {
            return Err(SourceError::InvalidConfig(format!(
                "noise_sigma {} must be positive",
                self.noise_sigma
            )));
        }
        if !(0.0..=255.0).contains(&self.dc_offset) {
            return Err(SourceError::InvalidConfig(format!(
                "dc_offset {} outside [0, 255]",
                self.dc_offset
            )));
        }
        Ok(())
    }
}

/// Draws `n_samples` ADC codes: normal(dc_offset, noise_sigma), clamped to
/// [0, 255], rounded to the nearest integer. Deterministic given the nonce.
pub fn simulate_bytes(cfg: &SimSourceConfig) -> Result<Vec<u8>, SourceError> {
    cfg.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.rng_nonce);
    let normal = Normal::new(cfg.dc_offset, cfg.noise_sigma)
        .map_err(|e| SourceError::InvalidConfig(e.to_string()))?;
    Ok((0..cfg.n_samples)
        .map(|_| normal.sample(&mut rng).clamp(0.0, 255.0).round() as u8)
        .collect())
}

/// As [`simulate_bytes`], serialized to bits MSB-first (8 bits per sample).
pub fn simulate_raw(cfg: &SimSourceConfig) -> Result<BitString, SourceError> {
    Ok(BitString::from_bytes_msb(&simulate_bytes(cfg)?))
}

/// Analytic probability of each ADC code under the clamped rounded normal.
fn code_probability(code: u16, dc_offset: f64, sigma: f64) -> f64 {
    let z = |x: f64| normal_cdf((x - dc_offset) / sigma);
    match code {
        0 => z(0.5),
        255 => 1.0 - z(254.5),
        k => z(k as f64 + 0.5) - z(k as f64 - 0.5),
    }
}

fn p_max(dc_offset: f64, sigma: f64) -> f64 {
    (0u16..=255)
        .map(|c| code_probability(c, dc_offset, sigma))
        .fold(0.0, f64::max)
}

/// Solves for the sigma whose most probable ADC code has probability
/// `2^(−target_hmin)`, by bisection on the decreasing branch of
/// `p_max(sigma)`.
///
/// `p_max` falls from 1 as sigma grows, then rises again once clamping
/// piles mass onto the edge codes, so targets below the valley minimum are
/// unattainable and reported as errors.
pub fn calibrate_sigma(target_hmin: f64, dc_offset: f64) -> Result<f64, SourceError> {
    if !(target_hmin > 0.0 && target_hmin < 8.0) {
        return Err(SourceError::InvalidConfig(format!(
            "target min-entropy {target_hmin} outside (0, 8)"
        )));
    }
    if !(0.0..=255.0).contains(&dc_offset) {
        return Err(SourceError::InvalidConfig(format!(
            "dc_offset {dc_offset} outside [0, 255]"
        )));
    }
    let target_p = 2f64.powf(-target_hmin);

    // geometric scan for a bracket on the decreasing branch
    let mut lo = 1e-3;
    let mut hi = lo;
    let mut best_p = p_max(dc_offset, lo);
    loop {
        let next = hi * 1.5;
        let p = p_max(dc_offset, next);
        if p <= target_p {
            lo = hi;
            hi = next;
            break;
        }
        // strictly-greater so the flat p≈1 region at tiny sigma keeps scanning
        if p > best_p || next > 1e6 {
            // valley reached (or scan exhausted) before hitting the target
            return Err(SourceError::UnattainableTarget {
                target: target_hmin,
                max_achievable: -best_p.log2(),
            });
        }
        best_p = p;
        hi = next;
    }

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p_max(dc_offset, mid) > target_p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Reads a headerless raw file: one 8-bit ADC sample per byte, bits taken
/// MSB-first.
pub fn load_raw(path: &Path) -> Result<BitString, SourceError> {
    let bytes = std::fs::read(path).map_err(|source| SourceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.is_empty() {
        return Err(SourceError::EmptyFile {
            path: path.display().to_string(),
        });
    }
    Ok(BitString::from_bytes_msb(&bytes))
}
