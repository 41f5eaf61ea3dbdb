//! Native subset of the NIST SP 800-22 statistical tests plus the ASCII
//! export path for the external reference suite.
//!
//! Implemented tests: monobit frequency, block frequency, runs, and forward
//! cumulative sums — the tests that are well defined at 8000-bit sequences
//! and have published worked examples to validate against. The rest of the
//! battery is reachable through [`export_sts_ascii`], which writes data in
//! the format the reference suite consumes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitstore::BitString;
use crate::real::Real;
use crate::special::{erfc, gamma_q, normal_cdf};

/// Minimum sequence length for the single-sequence tests.
pub const MIN_SEQUENCE_BITS: usize = 100;

#[derive(Debug, Error)]
pub enum StatError {
    #[error("sequence of {got} bits is shorter than the minimum {min}")]
    SequenceTooShort { got: usize, min: usize },
    #[error("block length {block_len} invalid for a {seq_len}-bit sequence")]
    InvalidBlockLength { block_len: usize, seq_len: usize },
    #[error("invalid test configuration: {0}")]
    InvalidConfig(String),
    #[error("insufficient data: need {required} bits, have {available}")]
    InsufficientData { required: usize, available: usize },
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

// ---------------------------------------------------------------------------
// individual tests
// ---------------------------------------------------------------------------

/// Monobit frequency test: p = erfc(|S_n| / √(2n)) with S_n = Σ(2ε_i − 1).
pub fn monobit_frequency<R: Real>(seq: &BitString) -> Result<R, StatError> {
    check_min_len(seq)?;
    Ok(monobit_p(seq))
}

fn monobit_p<R: Real>(seq: &BitString) -> R {
    let n = seq.len();
    let ones = seq.count_ones() as i64;
    let s = 2 * ones - n as i64;
    let n_r = R::from_count(n);
    let stat = R::from_f64c(s.abs() as f64) / (R::from_f64c(2.0) * n_r).sqrt();
    clamp_p(erfc(stat))
}

/// Runs test. When the monobit prerequisite |π̂ − 1/2| ≥ 2/√n fails the
/// p-value is 0 by convention.
pub fn runs_test<R: Real>(seq: &BitString) -> Result<R, StatError> {
    check_min_len(seq)?;
    Ok(runs_p(seq))
}

fn runs_p<R: Real>(seq: &BitString) -> R {
    let n = seq.len();
    let n_r = R::from_count(n);
    let pi = R::from_count(seq.count_ones()) / n_r;
    let half = R::from_f64c(0.5);
    let tau = R::from_f64c(2.0) / n_r.sqrt();
    if (pi - half).abs() >= tau {
        return R::zero();
    }
    let mut runs = 1u64;
    let mut prev = seq.get(0).unwrap();
    for bit in seq.iter().skip(1) {
        if bit != prev {
            runs += 1;
        }
        prev = bit;
    }
    let pq = pi * (R::one() - pi);
    let two = R::from_f64c(2.0);
    let expected = two * n_r * pq;
    let denom = two * (two * n_r).sqrt() * pq;
    clamp_p(erfc((R::from_f64c(runs as f64) - expected).abs() / denom))
}

/// Block frequency test over `block_len`-bit blocks:
/// p = igamc(N/2, χ²/2) with χ² = 4·M·Σ(π_i − 1/2)².
///
/// The standard recommends block lengths of at least 20 bits (and more than
/// 1% of the sequence); shorter blocks are accepted so the published
/// worked examples can be reproduced.
pub fn block_frequency_test<R: Real>(seq: &BitString, block_len: usize) -> Result<R, StatError> {
    if block_len == 0 || block_len > seq.len() {
        return Err(StatError::InvalidBlockLength {
            block_len,
            seq_len: seq.len(),
        });
    }
    Ok(block_frequency_p(seq, block_len))
}

fn block_frequency_p<R: Real>(seq: &BitString, block_len: usize) -> R {
    let blocks = seq.len() / block_len;
    let m_r = R::from_count(block_len);
    let half = R::from_f64c(0.5);
    let mut chi2 = R::zero();
    for b in 0..blocks {
        let ones = seq
            .window(b * block_len, block_len)
            .expect("block within sequence")
            .count_ones();
        let d = R::from_count(ones) / m_r - half;
        chi2 = chi2 + d * d;
    }
    chi2 = chi2 * R::from_f64c(4.0) * m_r;
    let n_r = R::from_count(blocks);
    clamp_p(gamma_q(n_r * half, chi2 * half))
}

/// Forward cumulative-sums test: z is the largest absolute partial sum of
/// the ±1 walk; the p-value comes from the standard's double normal-CDF sum.
pub fn cumulative_sums_test<R: Real>(seq: &BitString) -> Result<R, StatError> {
    check_min_len(seq)?;
    Ok(cusum_p(seq))
}

fn cusum_p<R: Real>(seq: &BitString) -> R {
    let n = seq.len();
    let mut sum = 0i64;
    let mut z = 0i64;
    for bit in seq.iter() {
        sum += if bit { 1 } else { -1 };
        z = z.max(sum.abs());
    }
    debug_assert!(z >= 1);
    let n_f = n as f64;
    let z_f = z as f64;
    let sqrt_n = R::from_f64c(n_f.sqrt());
    let z_r = R::from_f64c(z_f);
    let phi = |k: i64, off: f64| -> R {
        normal_cdf((R::from_f64c(4.0 * k as f64 + off)) * z_r / sqrt_n)
    };

    // sums run over the integers inside the stated bounds
    let lo1 = ((-n_f / z_f + 1.0) / 4.0).ceil() as i64;
    let hi = ((n_f / z_f - 1.0) / 4.0).floor() as i64;
    let lo2 = ((-n_f / z_f - 3.0) / 4.0).ceil() as i64;

    let mut p = R::one();
    for k in lo1..=hi {
        p = p - (phi(k, 1.0) - phi(k, -1.0));
    }
    for k in lo2..=hi {
        p = p + (phi(k, 3.0) - phi(k, 1.0));
    }
    clamp_p(p)
}

fn check_min_len(seq: &BitString) -> Result<(), StatError> {
    if seq.len() < MIN_SEQUENCE_BITS {
        return Err(StatError::SequenceTooShort {
            got: seq.len(),
            min: MIN_SEQUENCE_BITS,
        });
    }
    Ok(())
}

fn clamp_p<R: Real>(p: R) -> R {
    p.max(R::zero()).min(R::one())
}

// ---------------------------------------------------------------------------
// battery
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestKind {
    MonobitFrequency,
    BlockFrequency,
    Runs,
    CumulativeSums,
}

impl TestKind {
    pub const ALL: [TestKind; 4] = [
        TestKind::MonobitFrequency,
        TestKind::BlockFrequency,
        TestKind::Runs,
        TestKind::CumulativeSums,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TestKind::MonobitFrequency => "monobit_frequency",
            TestKind::BlockFrequency => "block_frequency",
            TestKind::Runs => "runs",
            TestKind::CumulativeSums => "cumulative_sums",
        }
    }
}

/// Battery configuration: sequence split geometry and significance level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRunConfig<R> {
    pub bits_per_sequence: usize,
    pub n_sequences: usize,
    pub alpha: R,
    /// Block length used by the block-frequency test.
    pub block_frequency_block_len: usize,
}

impl<R: Real> TestRunConfig<R> {
    pub fn new(bits_per_sequence: usize, n_sequences: usize, alpha: R) -> Result<Self, StatError> {
        if bits_per_sequence < MIN_SEQUENCE_BITS {
            return Err(StatError::InvalidConfig(format!(
                "bits_per_sequence {bits_per_sequence} below minimum {MIN_SEQUENCE_BITS}"
            )));
        }
        if n_sequences == 0 {
            return Err(StatError::InvalidConfig(
                "n_sequences must be at least 1".into(),
            ));
        }
        if alpha <= R::zero() || alpha >= R::one() {
            return Err(StatError::InvalidConfig(format!(
                "alpha {alpha} outside (0, 1)"
            )));
        }
        Ok(TestRunConfig {
            bits_per_sequence,
            n_sequences,
            alpha,
            block_frequency_block_len: 128,
        })
    }

    pub fn with_block_len(mut self, block_len: usize) -> Self {
        self.block_frequency_block_len = block_len;
        self
    }

    /// Minimum acceptable pass proportion: p̂ − 3·√(p̂(1−p̂)/s), p̂ = 1 − α.
    pub fn proportion_bound(&self) -> R {
        let p_hat = R::one() - self.alpha;
        let s = R::from_count(self.n_sequences);
        p_hat - R::from_f64c(3.0) * (p_hat * (R::one() - p_hat) / s).sqrt()
    }
}

/// Outcome of one test across all sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome<R> {
    pub test: TestKind,
    /// p-value per sequence, indexed by sequence order.
    pub p_values: Vec<R>,
    pub pass_proportion: R,
    pub proportion_bound: R,
    /// Chi-square uniformity of the p-value distribution over 10 bins.
    pub uniformity_p: R,
    pub passed: bool,
}

/// Battery report over a split data set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport<R> {
    pub config: TestRunConfig<R>,
    pub outcomes: Vec<TestOutcome<R>>,
    pub all_passed: bool,
}

/// Splits `data` into `n_sequences` consecutive sequences and runs every
/// implemented test on each.
pub fn run_battery<R: Real>(
    data: &BitString,
    cfg: &TestRunConfig<R>,
) -> Result<TestReport<R>, StatError> {
    let required = cfg.bits_per_sequence * cfg.n_sequences;
    if data.len() < required {
        return Err(StatError::InsufficientData {
            required,
            available: data.len(),
        });
    }
    let sequences: Vec<BitString> = (0..cfg.n_sequences)
        .map(|i| {
            data.window(i * cfg.bits_per_sequence, cfg.bits_per_sequence)
                .expect("sequence within data")
        })
        .collect();

    let bound = cfg.proportion_bound();
    let mut outcomes = Vec::with_capacity(TestKind::ALL.len());
    for test in TestKind::ALL {
        let p_values: Vec<R> = sequences
            .iter()
            .map(|s| match test {
                TestKind::MonobitFrequency => monobit_frequency(s),
                TestKind::BlockFrequency => {
                    block_frequency_test(s, cfg.block_frequency_block_len)
                }
                TestKind::Runs => runs_test(s),
                TestKind::CumulativeSums => cumulative_sums_test(s),
            })
            .collect::<Result<_, _>>()?;
        let passes = p_values.iter().filter(|&&p| p >= cfg.alpha).count();
        let pass_proportion = R::from_count(passes) / R::from_count(p_values.len());
        let uniformity_p = p_value_uniformity(&p_values);
        outcomes.push(TestOutcome {
            test,
            passed: pass_proportion >= bound,
            p_values,
            pass_proportion,
            proportion_bound: bound,
            uniformity_p,
        });
    }
    Ok(TestReport {
        config: cfg.clone(),
        all_passed: outcomes.iter().all(|o| o.passed),
        outcomes,
    })
}

/// Chi-square of the p-value histogram over 10 bins: P_T = igamc(9/2, χ²/2).
fn p_value_uniformity<R: Real>(p_values: &[R]) -> R {
    let mut bins = [0usize; 10];
    for &p in p_values {
        let idx = (p.to_f64().unwrap_or(0.0) * 10.0).floor() as usize;
        bins[idx.min(9)] += 1;
    }
    let s = R::from_count(p_values.len());
    let expected = s / R::from_f64c(10.0);
    let mut chi2 = R::zero();
    for &count in &bins {
        let d = R::from_count(count) - expected;
        chi2 = chi2 + d * d / expected;
    }
    clamp_p(gamma_q(R::from_f64c(4.5), chi2 / R::from_f64c(2.0)))
}

/// Writes one ASCII `'0'`/`'1'` per bit, no separators, no trailing newline —
/// the input format of the external reference suite.
pub fn export_sts_ascii(data: &BitString, path: &Path) -> Result<(), StatError> {
    let io_err = |source| StatError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut out = std::io::BufWriter::new(file);
    for bit in data.iter() {
        out.write_all(if bit { b"1" } else { b"0" }).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    /// First 100 binary digits of the expansion of π, the standard's stock
    /// worked-example input.
    const PI_100: &str = "11001001000011111101101010100010001000010110100011\
                          00001000110100110001001100011001100010100010111000";

    fn pi_bits() -> BitString {
        PI_100.replace(char::is_whitespace, "").parse().unwrap()
    }

    fn round6(p: f64) -> f64 {
        (p * 1e6).round() / 1e6
    }

    #[test]
    fn monobit_worked_examples() {
        // short example through the internal path
        let short: BitString = "1011010101".parse().unwrap();
        assert_eq!(round6(monobit_p::<f64>(&short)), 0.527089);
        // 100-bit example through the public API
        let p: f64 = monobit_frequency(&pi_bits()).unwrap();
        assert!((p - 0.109599).abs() < 1e-5, "p={p}");
    }

    #[test]
    fn block_frequency_worked_examples() {
        let short: BitString = "0110011010".parse().unwrap();
        let p: f64 = block_frequency_test(&short, 3).unwrap();
        assert_eq!(round6(p), 0.801252);
        let p: f64 = block_frequency_test(&pi_bits(), 10).unwrap();
        assert!((p - 0.706438).abs() < 1e-5, "p={p}");
    }

    #[test]
    fn runs_worked_examples() {
        let short: BitString = "1001101011".parse().unwrap();
        assert_eq!(round6(runs_p::<f64>(&short)), 0.147232);
        let p: f64 = runs_test(&pi_bits()).unwrap();
        assert!((p - 0.500798).abs() < 1e-5, "p={p}");
    }

    #[test]
    fn cusum_worked_examples() {
        // short example: z = 4 over 10 bits
        let short: BitString = "1011010111".parse().unwrap();
        let p: f64 = cusum_p(&short);
        assert!((p - 0.4116588).abs() < 1e-5, "p={p}");
        // 100-bit example through the public API (forward mode)
        let p: f64 = cumulative_sums_test(&pi_bits()).unwrap();
        assert!((p - 0.219194).abs() < 1e-5, "p={p}");
    }

    #[test]
    fn extreme_sequences() {
        let n = 8000;
        let ones: BitString = "1".repeat(n).parse().unwrap();
        let alternating: BitString = "10".repeat(n / 2).parse().unwrap();

        let p: f64 = monobit_frequency(&alternating).unwrap();
        assert_eq!(p, 1.0);
        let p: f64 = monobit_frequency(&ones).unwrap();
        assert!(p < 1e-30);

        // alternating: runs = n, far above expectation
        let p: f64 = runs_test(&alternating).unwrap();
        assert!(p < 1e-30);
        // prerequisite fails on all-ones
        let p: f64 = runs_test(&ones).unwrap();
        assert_eq!(p, 0.0);

        let p: f64 = block_frequency_test(&ones, 128).unwrap();
        assert!(p < 1e-30);
        let p: f64 = cumulative_sums_test(&ones).unwrap();
        assert!(p < 1e-30);
        // alternating walk never strays past 1
        let p: f64 = cumulative_sums_test(&alternating).unwrap();
        assert!(p > 0.99);

        // perfectly balanced blocks
        let balanced: BitString = "0101".repeat(640).parse().unwrap();
        let p: f64 = block_frequency_test(&balanced, 128).unwrap();
        assert_eq!(p, 1.0);
    }

    #[test]
    fn too_short_sequences_error() {
        let short: BitString = "101".parse().unwrap();
        assert!(matches!(
            monobit_frequency::<f64>(&short),
            Err(StatError::SequenceTooShort { got: 3, min: 100 })
        ));
        assert!(runs_test::<f64>(&short).is_err());
        assert!(cumulative_sums_test::<f64>(&short).is_err());
        assert!(matches!(
            block_frequency_test::<f64>(&short, 10),
            Err(StatError::InvalidBlockLength { .. })
        ));
    }

    #[test]
    fn p_values_stay_in_unit_interval_under_fuzz() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xabcd);
        let mut buf = vec![0u8; 1000];
        for round in 0..50 {
            rng.fill_bytes(&mut buf);
            if round % 3 == 0 {
                // bias it hard
                for b in buf.iter_mut().step_by(2) {
                    *b = 0xFF;
                }
            }
            let seq = BitString::from_bytes_msb(&buf);
            for p in [
                monobit_frequency::<f64>(&seq).unwrap(),
                block_frequency_test::<f64>(&seq, 128).unwrap(),
                runs_test::<f64>(&seq).unwrap(),
                cumulative_sums_test::<f64>(&seq).unwrap(),
            ] {
                assert!((0.0..=1.0).contains(&p), "p={p}");
            }
        }
    }

    /// Exact random-walk barrier DP as an independent oracle for the cusum
    /// formula. The formula is asymptotic, so agreement is approximate but
    /// must be close at large n.
    #[test]
    fn cusum_formula_tracks_exact_walk_dp() {
        fn exact_reach_prob(n: usize, z: i64) -> f64 {
            // probability mass over interior states −z+1..z−1, absorbed at ±z
            let width = (2 * z - 1) as usize;
            let mut mass = vec![0.0f64; width];
            mass[(z - 1) as usize] = 1.0; // origin
            let mut absorbed = 0.0;
            for _ in 0..n {
                let mut next = vec![0.0f64; width];
                for (i, &m) in mass.iter().enumerate() {
                    if m == 0.0 {
                        continue;
                    }
                    for dir in [-1i64, 1] {
                        let s = i as i64 - (z - 1) + dir;
                        if s.abs() >= z {
                            absorbed += 0.5 * m;
                        } else {
                            next[(s + z - 1) as usize] += 0.5 * m;
                        }
                    }
                }
                mass = next;
            }
            absorbed
        }

        // plant a walk with a known maximum by checking the formula's z
        // directly against the DP at matching (n, z)
        let n = 10_000;
        for z in [100i64, 150, 200] {
            let exact = exact_reach_prob(n, z);
            // evaluate the formula the same way cusum_p does
            let n_f = n as f64;
            let z_f = z as f64;
            let sqrt_n = n_f.sqrt();
            let phi = |k: i64, off: f64| normal_cdf((4.0 * k as f64 + off) * z_f / sqrt_n);
            let lo1 = ((-n_f / z_f + 1.0) / 4.0).ceil() as i64;
            let hi = ((n_f / z_f - 1.0) / 4.0).floor() as i64;
            let lo2 = ((-n_f / z_f - 3.0) / 4.0).ceil() as i64;
            let mut p = 1.0;
            for k in lo1..=hi {
                p -= phi(k, 1.0) - phi(k, -1.0);
            }
            for k in lo2..=hi {
                p += phi(k, 3.0) - phi(k, 1.0);
            }
            assert!(
                (p - exact).abs() < 0.02,
                "n={n} z={z}: formula {p} vs exact {exact}"
            );
        }
    }

    #[test]
    fn battery_geometry_and_bound() {
        let cfg = TestRunConfig::new(8000, 30, 0.01f64).unwrap();
        assert!((cfg.proportion_bound() - 0.9355).abs() < 1e-3);
        let cfg100 = TestRunConfig::new(8000, 100, 0.01f64).unwrap();
        assert!((cfg100.proportion_bound() - 0.96015).abs() < 1e-4);

        let mut rng = ChaCha12Rng::seed_from_u64(0x1234_5678);
        let mut buf = vec![0u8; 8000 / 8 * 30];
        rng.fill_bytes(&mut buf);
        let data = BitString::from_bytes_msb(&buf);
        let report = run_battery(&data, &cfg).unwrap();
        assert_eq!(report.outcomes.len(), 4);
        for o in &report.outcomes {
            assert_eq!(o.p_values.len(), 30);
        }
        // high-quality PRNG data passes monobit at the bound
        let monobit = &report.outcomes[0];
        assert!(monobit.pass_proportion >= monobit.proportion_bound);

        // deterministic: same data, same report
        assert_eq!(run_battery(&data, &cfg).unwrap(), report);
    }

    #[test]
    fn battery_insufficient_data() {
        let cfg = TestRunConfig::new(8000, 30, 0.01f64).unwrap();
        let data = BitString::zeros(8000);
        assert!(matches!(
            run_battery(&data, &cfg),
            Err(StatError::InsufficientData {
                required: 240_000,
                available: 8000
            })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(TestRunConfig::new(50, 30, 0.01f64).is_err());
        assert!(TestRunConfig::new(8000, 0, 0.01f64).is_err());
        assert!(TestRunConfig::new(8000, 30, 0.0f64).is_err());
        assert!(TestRunConfig::new(8000, 30, 1.0f64).is_err());
    }

    #[test]
    fn ascii_export() {
        let dir = std::env::temp_dir().join(format!("tse-stats-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("seq.txt");

        let bits: BitString = "101".parse().unwrap();
        export_sts_ascii(&bits, &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"101");

        export_sts_ascii(&BitString::new(), &path).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), b"");

        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut buf = vec![0u8; 30_000];
        rng.fill_bytes(&mut buf);
        let big = BitString::from_bytes_msb(&buf);
        export_sts_ascii(&big, &path).unwrap();
        let content = std::fs::read(&path).unwrap();
        assert_eq!(content.len(), 240_000);
        let back: BitString = std::str::from_utf8(&content).unwrap().parse().unwrap();
        assert_eq!(back, big);
        std::fs::remove_dir_all(&dir).ok();
    }
}
