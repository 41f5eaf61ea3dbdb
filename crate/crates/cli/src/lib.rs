//! Command-line front end: simulation, analysis, extraction, the hardware
//! timing model, a software benchmark, the statistical battery, and ASCII
//! export for the external test suite.

pub mod pipeline;
pub mod report;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use tse_core::bitstore::BitString;
use tse_core::entropy::{min_entropy, output_length, SymbolHistogram};
use tse_core::hwmodel::{self, HwConfig};
use tse_core::seedgen::DEFAULT_TAPS;
use tse_core::source::{calibrate_sigma, simulate_bytes, SimSourceConfig};
use tse_core::statsuite::{export_sts_ascii, run_battery, TestRunConfig};

use pipeline::{run_extraction, ExtractOptions};
use report::{
    ArtifactsSection, EntropySection, RunParameters, RunReport, SecuritySection, TimingSection,
    SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "tse",
    version,
    about = "Toeplitz strong-extractor toolkit: QRNG post-processing, datapath timing model, and randomness tests"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate raw ADC-like samples from a calibrated Gaussian source
    Simulate(SimulateArgs),
    /// Estimate min-entropy of a raw sample file and the implied output size
    Analyze(AnalyzeArgs),
    /// Run the full extraction pipeline over a raw sample file
    Extract(ExtractArgs),
    /// Clock-cycle and throughput model of the FPGA datapath
    Hwmodel(HwmodelArgs),
    /// Time the software extractor over synthetic data
    Bench(BenchArgs),
    /// Run the statistical test battery over a data file
    Test(TestArgs),
    /// Export a data file as ASCII bits for the external test suite
    ExportSts(ExportStsArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Number of 8-bit samples to generate
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Calibrate sigma so the source hits this min-entropy (bits/symbol)
    #[arg(long, conflicts_with = "sigma")]
    target_hmin: Option<f64>,
    /// Noise standard deviation in ADC codes (skips calibration)
    #[arg(long)]
    sigma: Option<f64>,
    /// Mean of the source in ADC codes
    #[arg(long, default_value_t = 128.0)]
    dc_offset: f64,
    /// Reproducibility nonce
    #[arg(long, default_value_t = 0)]
    nonce: u64,
    /// Output file (one sample per byte)
    #[arg(long)]
    out: PathBuf,
    /// Print the summary as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Raw sample file (one 8-bit sample per byte)
    #[arg(long = "in")]
    input: PathBuf,
    /// Block size the output length is computed for
    #[arg(long, default_value_t = 1000)]
    bs: usize,
    /// Security exponent: epsilon = 2^(-eps-exp)
    #[arg(long = "eps-exp", default_value_t = 12.5)]
    eps_exp: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExtractArgs {
    /// Raw sample file (one 8-bit sample per byte)
    #[arg(long = "in")]
    input: PathBuf,
    /// Extracted output file (packed bits, MSB-first per byte)
    #[arg(long)]
    out: PathBuf,
    /// Report path (defaults to <out>.report.json)
    #[arg(long)]
    report: Option<PathBuf>,
    /// Block size in bits
    #[arg(long, default_value_t = 1000)]
    bs: usize,
    /// Security exponent: epsilon = 2^(-eps-exp)
    #[arg(long = "eps-exp", default_value_t = 12.5)]
    eps_exp: f64,
    /// Parallel blocks per batch
    #[arg(long, default_value_t = 40)]
    blocks: usize,
    /// Pin the min-entropy instead of estimating it from the data
    #[arg(long)]
    pin_hmin: Option<f64>,
    /// Force the output length, bypassing the leftover-hash sizing
    #[arg(long)]
    m_override: Option<usize>,
    /// LFSR feedback taps
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    taps: Option<Vec<usize>>,
    /// Reproducibility nonce (seed-bit selection)
    #[arg(long, default_value_t = 0)]
    nonce: u64,
    /// Worker threads (0 = one per core)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Attach the hardware-model figures for this geometry to the report
    #[arg(long)]
    hwmodel: bool,
    /// Print the report to stdout as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct HwmodelArgs {
    /// Extraction ratios to evaluate
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    er: Option<Vec<f64>>,
    /// Output lengths to evaluate (alternative to --er)
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "er")]
    m: Option<Vec<usize>>,
    /// Clock frequency in Hz
    #[arg(long, default_value_t = 2e8)]
    f_clk: f64,
    #[arg(long, default_value_t = 40)]
    blocks: usize,
    #[arg(long, default_value_t = 1000)]
    bs: usize,
    #[arg(long, default_value_t = 800_000)]
    sample_bits: usize,
    #[arg(long, default_value_t = 21)]
    pipeline_constant: u64,
    #[arg(long, default_value_t = 100_274)]
    overhead_cycles: u64,
    /// Print reports as JSON
    #[arg(long)]
    json: bool,
    /// Also write the sweep as CSV (for plotting the speed curve)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 1000)]
    bs: usize,
    #[arg(long, default_value_t = 300)]
    m: usize,
    #[arg(long, default_value_t = 40)]
    blocks: usize,
    #[arg(long, default_value_t = 20)]
    batches: usize,
    /// Thread counts to compare (default: 1 and one per core)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    threads: Option<Vec<usize>>,
    /// Timing repetitions per thread count (median is reported)
    #[arg(long, default_value_t = 3)]
    repeat: usize,
    #[arg(long, default_value_t = 0)]
    nonce: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TestArgs {
    /// Data file to test
    #[arg(long = "in")]
    input: PathBuf,
    /// Input encoding: packed bytes or ASCII '0'/'1'
    #[arg(long, value_parser = ["bytes", "ascii"], default_value = "bytes")]
    format: String,
    #[arg(long = "bits-per-seq", default_value_t = 8000)]
    bits_per_seq: usize,
    /// Number of sequences (default: as many as the data allows)
    #[arg(long)]
    seqs: Option<usize>,
    #[arg(long, default_value_t = 0.01)]
    alpha: f64,
    /// Block length for the block-frequency test
    #[arg(long, default_value_t = 128)]
    block_len: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ExportStsArgs {
    /// Data file to export
    #[arg(long = "in")]
    input: PathBuf,
    /// ASCII output path
    #[arg(long)]
    out: PathBuf,
    /// Input encoding: packed bytes or ASCII '0'/'1'
    #[arg(long, value_parser = ["bytes", "ascii"], default_value = "bytes")]
    format: String,
    /// Truncate to this many bits (e.g. the true bit length from a report)
    #[arg(long)]
    bits: Option<usize>,
}

/// Entry point; returns the process exit code.
pub fn run_from<I, T>(args: I) -> Result<i32>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::parse_from(args);
    match cli.command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Hwmodel(a) => cmd_hwmodel(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Test(a) => cmd_test(a),
        Command::ExportSts(a) => cmd_export_sts(a),
    }
}

fn sha256_hex(data: &[u8]) -> String {
    let digest = Sha256::digest(data);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn read_bits(path: &Path, format: &str) -> Result<BitString> {
    match format {
        "bytes" => Ok(tse_core::source::load_raw(path)?),
        "ascii" => {
            let bytes =
                std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let text = String::from_utf8(bytes)
                .with_context(|| format!("{} is not valid ASCII", path.display()))?;
            let filtered: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            filtered
                .parse()
                .map_err(|e| anyhow::anyhow!("parsing {}: {e}", path.display()))
        }
        other => bail!("unknown format {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> Result<i32> {
    let (sigma, calibrated_for) = match (args.sigma, args.target_hmin) {
        (Some(s), _) => (s, None),
        (None, target) => {
            let t = target.unwrap_or(2.6);
            (calibrate_sigma(t, args.dc_offset)?, Some(t))
        }
    };
    let cfg = SimSourceConfig {
        n_samples: args.samples,
        noise_sigma: sigma,
        dc_offset: args.dc_offset,
        rng_nonce: args.nonce,
    };
    let bytes = simulate_bytes(&cfg)?;
    std::fs::write(&args.out, &bytes)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let hist = SymbolHistogram::from_bytes(&bytes);
    let hmin: f64 = min_entropy(&hist)?;
    let (symbol, count) = hist.most_common();
    let p_max = count as f64 / hist.total() as f64;

    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "command": "simulate",
                "samples": args.samples,
                "sigma": sigma,
                "calibrated_for_hmin": calibrated_for,
                "dc_offset": args.dc_offset,
                "nonce": args.nonce,
                "measured_hmin_per_symbol": hmin,
                "p_max": p_max,
                "most_common_symbol": symbol,
                "out": args.out.display().to_string(),
                "sha256": sha256_hex(&bytes),
            })
        );
    } else {
        println!("wrote {} samples to {}", args.samples, args.out.display());
        match calibrated_for {
            Some(t) => println!(
                "sigma {sigma:.4} (calibrated for H_min {t}), dc offset {}",
                args.dc_offset
            ),
            None => println!("sigma {sigma:.4}, dc offset {}", args.dc_offset),
        }
        println!(
            "measured min-entropy {hmin:.3} bits/symbol (p_max {p_max:.4}, most common code {symbol})"
        );
        if hmin == 0.0 {
            println!("warning: source is degenerate (single symbol)");
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32> {
    let bytes =
        std::fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if bytes.is_empty() {
        bail!("raw file {} is empty", args.input.display());
    }
    let hist = SymbolHistogram::from_bytes(&bytes);
    let hmin: f64 = min_entropy(&hist)?;
    let (symbol, count) = hist.most_common();
    let p_max = count as f64 / hist.total() as f64;
    let m = output_length(args.bs, hmin, args.eps_exp);
    let er = m.as_ref().map(|&m| m as f64 / args.bs as f64).ok();

    if args.json {
        println!(
            "{}",
            serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "command": "analyze",
                "input": args.input.display().to_string(),
                "samples": bytes.len(),
                "hmin_per_symbol": hmin,
                "p_max": p_max,
                "most_common_symbol": symbol,
                "block_bits": args.bs,
                "eps_exponent": args.eps_exp,
                "output_bits": m.as_ref().ok(),
                "extraction_ratio": er,
                "error": m.as_ref().err().map(|e| e.to_string()),
            })
        );
        return Ok(0);
    }

    println!(
        "{}: {} samples ({} bits)",
        args.input.display(),
        bytes.len(),
        bytes.len() * 8
    );
    println!("min-entropy {hmin:.4} bits/symbol (p_max {p_max:.5}, most common code {symbol})");
    if hmin == 0.0 {
        println!("warning: source is degenerate (single symbol)");
    }
    match m {
        Ok(m) => println!(
            "leftover-hash output length m = {m} for bs = {} at eps = 2^-{} (ER {:.3})",
            args.bs,
            args.eps_exp,
            m as f64 / args.bs as f64
        ),
        Err(e) => println!("output length: {e}"),
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

fn cmd_extract(args: ExtractArgs) -> Result<i32> {
    let raw_bytes =
        std::fs::read(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    if raw_bytes.is_empty() {
        bail!("raw file {} is empty", args.input.display());
    }

    let opts = ExtractOptions {
        block_bits: args.bs,
        eps_exponent: args.eps_exp,
        parallel_blocks: args.blocks,
        pin_hmin: args.pin_hmin,
        m_override: args.m_override,
        taps: args.taps.clone().unwrap_or_else(|| DEFAULT_TAPS.to_vec()),
        nonce: args.nonce,
        threads: args.threads,
        recipe: None,
    };
    let outcome = run_extraction(&raw_bytes, &opts)?;

    let out_bytes = outcome.bits.to_bytes_msb();
    std::fs::write(&args.out, &out_bytes)
        .with_context(|| format!("writing {}", args.out.display()))?;

    let hw = if args.hwmodel {
        let cfg = HwConfig::<f64> {
            parallel_blocks: opts.parallel_blocks,
            block_bits: opts.block_bits,
            sample_bits: outcome.params.sample_bits,
            ..HwConfig::default()
        };
        Some(hwmodel::report_for_m(&cfg, outcome.params.output_bits)?)
    } else {
        None
    };

    let warning = outcome
        .overridden
        .then(|| "output length overridden; leftover-hash guarantee not evaluated".to_string());
    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        command: "extract".into(),
        parameters: RunParameters {
            block_bits: outcome.params.block_bits,
            output_bits: outcome.params.output_bits,
            eps_exponent: outcome.params.eps_exponent,
            parallel_blocks: outcome.params.parallel_blocks,
            batches: outcome.params.batches(),
            sample_bits: outcome.params.sample_bits,
            lfsr_taps: opts.taps.clone(),
            seed_recipe: outcome.recipe.clone(),
            nonce: args.nonce,
            threads: outcome.threads_used,
        },
        entropy: EntropySection {
            hmin_per_symbol_used: outcome.hmin_used,
            hmin_source: outcome.hmin_source.into(),
            hmin_per_symbol_measured: outcome.hmin_measured,
            p_max: outcome.p_max,
            most_common_symbol: outcome.most_common_symbol,
            degenerate: outcome.hmin_measured == 0.0,
        },
        security: SecuritySection {
            eps_exponent: outcome.params.eps_exponent,
            extraction_ratio: outcome.extraction_ratio(),
            leftover_hash_guarantee: !outcome.overridden,
            warning,
        },
        timing: TimingSection {
            extract_seconds: outcome.seconds,
            software_input_gbps: outcome.input_gbps(),
        },
        hwmodel: hw,
        artifacts: ArtifactsSection {
            input_path: args.input.display().to_string(),
            input_sha256: sha256_hex(&raw_bytes),
            input_bytes: raw_bytes.len() as u64,
            output_path: args.out.display().to_string(),
            output_sha256: sha256_hex(&out_bytes),
            output_bits: outcome.bits.len(),
            output_bytes: out_bytes.len() as u64,
        },
    };

    let report_path = args
        .report
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.report.json", args.out.display())));
    let json = serde_json::to_string_pretty(&report)?;
    std::fs::write(&report_path, &json)
        .with_context(|| format!("writing {}", report_path.display()))?;

    if args.json {
        println!("{json}");
        return Ok(0);
    }

    println!(
        "input: {} ({} bytes, {} bits)",
        args.input.display(),
        raw_bytes.len(),
        outcome.params.sample_bits
    );
    println!(
        "min-entropy: {:.4} measured / {:.4} used ({})",
        outcome.hmin_measured, outcome.hmin_used, outcome.hmin_source
    );
    println!(
        "output length m = {} (ER {:.3}, eps = 2^-{}){}",
        outcome.params.output_bits,
        outcome.extraction_ratio(),
        outcome.params.eps_exponent,
        if outcome.overridden {
            "  [overridden: leftover-hash guarantee not evaluated]"
        } else {
            ""
        }
    );
    println!(
        "Toeplitz string: {} bits from a 25-cell LFSR, taps {:?}, nonce {}",
        outcome.params.toeplitz_string_len(),
        opts.taps,
        args.nonce
    );
    println!(
        "extracted {} bits in {:.3} ms ({:.3} Gb/s input-referred) on {} threads",
        outcome.bits.len(),
        outcome.seconds * 1e3,
        outcome.input_gbps(),
        outcome.threads_used
    );
    println!(
        "wrote {} ({} bytes) and {}",
        args.out.display(),
        out_bytes.len(),
        report_path.display()
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// hwmodel
// ---------------------------------------------------------------------------

fn cmd_hwmodel(args: HwmodelArgs) -> Result<i32> {
    let cfg = HwConfig::<f64> {
        f_clk_hz: args.f_clk,
        parallel_blocks: args.blocks,
        block_bits: args.bs,
        sample_bits: args.sample_bits,
        pipeline_constant: args.pipeline_constant,
        overhead_cycles: args.overhead_cycles,
    };
    cfg.validate()?;

    let reports = if let Some(ms) = &args.m {
        ms.iter()
            .map(|&m| hwmodel::report_for_m(&cfg, m))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let ratios = args.er.clone().unwrap_or_else(|| vec![0.3, 0.5, 0.6, 0.8]);
        hwmodel::sweep_report(&cfg, &ratios)?
    };

    if let Some(csv_path) = &args.csv {
        let mut csv = String::from(
            "extraction_ratio,output_bits,cycles,time_us,input_gbps,output_gbps,extrapolated\n",
        );
        for r in &reports {
            csv.push_str(&format!(
                "{:.4},{},{},{:.3},{:.4},{:.4},{}\n",
                r.extraction_ratio,
                r.output_bits,
                r.extraction_cycles,
                r.extraction_time_s * 1e6,
                r.speed_input_bps / 1e9,
                r.speed_output_bps / 1e9,
                r.extrapolated
            ));
        }
        std::fs::write(csv_path, csv)
            .with_context(|| format!("writing {}", csv_path.display()))?;
    }

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "command": "hwmodel",
                "config": cfg,
                "overhead_time_us": hwmodel::overhead_time(&cfg) * 1e6,
                "points": reports,
            }))?
        );
        return Ok(0);
    }

    println!(
        "datapath: {} × {}-bit blocks, {} batches, f_clk {:.0} MHz",
        cfg.parallel_blocks,
        cfg.block_bits,
        cfg.batches(),
        cfg.f_clk_hz / 1e6
    );
    println!(
        "{:>6} {:>6} {:>8} {:>11} {:>12} {:>13}",
        "ER", "m", "cycles", "time (µs)", "input Gb/s", "output Gb/s"
    );
    for r in &reports {
        println!(
            "{:>6.2} {:>6} {:>8} {:>11.3} {:>12.2} {:>13.2}{}",
            r.extraction_ratio,
            r.output_bits,
            r.extraction_cycles,
            r.extraction_time_s * 1e6,
            r.speed_input_bps / 1e9,
            r.speed_output_bps / 1e9,
            if r.extrapolated { "  *" } else { "" }
        );
    }
    if reports.iter().any(|r| r.extrapolated) {
        println!("* extrapolated beyond the validated operating points");
    }
    println!(
        "one-time overhead: {} cycles = {:.2} µs",
        cfg.overhead_cycles,
        hwmodel::overhead_time(&cfg) * 1e6
    );
    Ok(0)
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

fn cmd_bench(args: BenchArgs) -> Result<i32> {
    use rand::{RngCore, SeedableRng};

    if args.repeat == 0 {
        bail!("--repeat must be at least 1");
    }
    let sample_bits = args.blocks * args.bs * args.batches;
    if !sample_bits.is_multiple_of(8) {
        bail!("geometry must give a whole number of bytes (got {sample_bits} bits)");
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(args.nonce);
    let mut raw_bytes = vec![0u8; sample_bits / 8];
    rng.fill_bytes(&mut raw_bytes);

    let max_threads = pipeline::resolve_threads(0);
    let mut thread_counts = args.threads.clone().unwrap_or_else(|| {
        if max_threads > 1 {
            vec![1, max_threads]
        } else {
            vec![1]
        }
    });
    thread_counts.retain(|&t| t > 0);
    thread_counts.dedup();
    if thread_counts.is_empty() {
        bail!("--threads needs at least one positive count");
    }

    println!(
        "geometry: {} blocks × {} bits × {} batches = {} bits, m = {}",
        args.blocks, args.bs, args.batches, sample_bits, args.m
    );

    let mut results = Vec::new();
    let mut digests: Vec<String> = Vec::new();
    for &threads in &thread_counts {
        let mut times = Vec::with_capacity(args.repeat);
        let mut digest = String::new();
        for _ in 0..args.repeat {
            let opts = ExtractOptions {
                block_bits: args.bs,
                eps_exponent: 12.5,
                parallel_blocks: args.blocks,
                pin_hmin: None,
                m_override: Some(args.m),
                taps: DEFAULT_TAPS.to_vec(),
                nonce: args.nonce,
                threads,
                recipe: None,
            };
            let outcome = run_extraction(&raw_bytes, &opts)?;
            times.push(outcome.seconds);
            digest = sha256_hex(&outcome.bits.to_bytes_msb());
        }
        times.sort_by(f64::total_cmp);
        let median = times[times.len() / 2];
        let gbps = sample_bits as f64 / median / 1e9;
        println!(
            "threads {threads:>3}: median {:>9.3} ms  {:>7.3} Gb/s input-referred  digest {}",
            median * 1e3,
            gbps,
            &digest[..16]
        );
        digests.push(digest.clone());
        results.push(serde_json::json!({
            "threads": threads,
            "median_seconds": median,
            "input_gbps": gbps,
            "output_sha256": digest,
        }));
    }

    let identical = digests.windows(2).all(|w| w[0] == w[1]);
    if identical {
        println!("digests identical across thread counts");
    }
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "command": "bench",
                "geometry": {
                    "block_bits": args.bs,
                    "output_bits": args.m,
                    "parallel_blocks": args.blocks,
                    "batches": args.batches,
                    "sample_bits": sample_bits,
                },
                "repeat": args.repeat,
                "runs": results,
                "digests_identical": identical,
            }))?
        );
    }
    if !identical {
        bail!("output digests differ across thread counts: {digests:?}");
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// test
// ---------------------------------------------------------------------------

fn cmd_test(args: TestArgs) -> Result<i32> {
    let data = read_bits(&args.input, &args.format)?;
    let seqs = match args.seqs {
        Some(0) => bail!("--seqs must be at least 1"),
        Some(n) => n,
        None => {
            let n = data.len() / args.bits_per_seq;
            if n == 0 {
                bail!(
                    "insufficient data: need at least {} bits, have {}",
                    args.bits_per_seq,
                    data.len()
                );
            }
            n
        }
    };
    let cfg =
        TestRunConfig::new(args.bits_per_seq, seqs, args.alpha)?.with_block_len(args.block_len);
    let report = run_battery(&data, &cfg)?;

    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({
                "schema_version": SCHEMA_VERSION,
                "command": "test",
                "input": args.input.display().to_string(),
                "report": report,
            }))?
        );
    } else {
        println!(
            "sequence split: {} × {} bits, alpha {}, proportion bound {:.4}",
            seqs,
            args.bits_per_seq,
            args.alpha,
            cfg.proportion_bound()
        );
        for o in &report.outcomes {
            let passes = o.p_values.iter().filter(|&&p| p >= args.alpha).count();
            println!(
                "{:<18} {:>4}/{} passed (proportion {:.4}, bound {:.4})  uniformity p {:.4}  {}",
                o.test.name(),
                passes,
                seqs,
                o.pass_proportion,
                o.proportion_bound,
                o.uniformity_p,
                if o.passed { "PASS" } else { "FAIL" }
            );
        }
        println!(
            "overall: {}",
            if report.all_passed { "PASS" } else { "FAIL" }
        );
    }
    Ok(if report.all_passed { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// export-sts
// ---------------------------------------------------------------------------

fn cmd_export_sts(args: ExportStsArgs) -> Result<i32> {
    let mut data = read_bits(&args.input, &args.format)?;
    if let Some(bits) = args.bits {
        if bits > data.len() {
            bail!(
                "cannot truncate to {bits} bits: input has only {}",
                data.len()
            );
        }
        data = data.window(0, bits)?;
    }
    export_sts_ascii(&data, &args.out)?;
    println!("wrote {} ASCII bits to {}", data.len(), args.out.display());
    Ok(0)
}
