//! End-to-end tests of the command surface: determinism, report
//! completeness, format round-trips, and exit codes.

use std::path::Path;
use std::process::Command;

use tse_cli::pipeline::{run_extraction, ExtractOptions};
use tse_cli::report::RunReport;
use tse_cli::run_from;

fn run(args: &[&str]) -> i32 {
    run_from(args.iter().map(|s| s.to_string())).unwrap()
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap()
}

#[test]
fn extract_is_deterministic_and_report_reproduces_it() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    let out_a = dir.path().join("a.bin");
    let out_b = dir.path().join("b.bin");

    assert_eq!(
        run(&[
            "tse", "simulate", "--samples", "100000", "--target-hmin", "2.6",
            "--nonce", "11", "--out", raw.to_str().unwrap(),
        ]),
        0
    );
    assert_eq!(read(&raw).len(), 100_000);

    let extract = |out: &Path| {
        run(&[
            "tse", "extract",
            "--in", raw.to_str().unwrap(),
            "--out", out.to_str().unwrap(),
            "--pin-hmin", "2.6",
            "--nonce", "11",
        ])
    };
    assert_eq!(extract(&out_a), 0);
    assert_eq!(extract(&out_b), 0);

    let bytes_a = read(&out_a);
    assert_eq!(bytes_a.len(), 30_000, "240000 bits packed");
    assert_eq!(bytes_a, read(&out_b), "same flags and nonce must reproduce the file");

    // the report alone must be enough to reproduce the output digest
    let report: RunReport = serde_json::from_slice(&read(
        &dir.path().join("a.bin.report.json"),
    ))
    .unwrap();
    assert_eq!(report.schema_version, 1);
    assert_eq!(report.parameters.output_bits, 300);
    assert_eq!(report.parameters.batches, 20);
    assert_eq!(report.entropy.hmin_source, "pinned");
    assert!(report.security.leftover_hash_guarantee);
    assert_eq!(report.artifacts.output_bits, 240_000);

    let opts = ExtractOptions {
        block_bits: report.parameters.block_bits,
        eps_exponent: report.parameters.eps_exponent,
        parallel_blocks: report.parameters.parallel_blocks,
        pin_hmin: Some(report.entropy.hmin_per_symbol_used),
        m_override: Some(report.parameters.output_bits),
        taps: report.parameters.lfsr_taps.clone(),
        nonce: report.parameters.nonce,
        threads: 1,
        recipe: Some(report.parameters.seed_recipe.clone()),
    };
    let outcome = run_extraction(&read(&raw), &opts).unwrap();
    assert_eq!(outcome.bits.to_bytes_msb(), bytes_a);
}

#[test]
fn ascii_export_round_trips_through_the_battery() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    let out = dir.path().join("ext.bin");
    let ascii = dir.path().join("ext.txt");

    run(&[
        "tse", "simulate", "--samples", "40000", "--nonce", "3",
        "--out", raw.to_str().unwrap(),
    ]);
    run(&[
        "tse", "extract",
        "--in", raw.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
        "--pin-hmin", "2.6",
        "--blocks", "40",
        "--nonce", "3",
    ]);
    assert_eq!(
        run(&[
            "tse", "export-sts",
            "--in", out.to_str().unwrap(),
            "--out", ascii.to_str().unwrap(),
            "--bits", "96000",
        ]),
        0
    );
    let text = read(&ascii);
    assert_eq!(text.len(), 96_000);
    assert!(text.iter().all(|&b| b == b'0' || b == b'1'));

    // the ASCII file feeds straight back into the battery
    let code = run(&[
        "tse", "test",
        "--in", ascii.to_str().unwrap(),
        "--format", "ascii",
        "--bits-per-seq", "8000",
        "--seqs", "12",
    ]);
    assert!(code == 0 || code == 1, "battery must run to completion");
}

#[test]
fn m_override_flags_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    let out = dir.path().join("ext.bin");
    run(&[
        "tse", "simulate", "--samples", "40000", "--nonce", "4",
        "--out", raw.to_str().unwrap(),
    ]);
    run(&[
        "tse", "extract",
        "--in", raw.to_str().unwrap(),
        "--out", out.to_str().unwrap(),
        "--m-override", "1000",
        "--nonce", "4",
    ]);
    let report: RunReport =
        serde_json::from_slice(&read(&dir.path().join("ext.bin.report.json"))).unwrap();
    assert_eq!(report.parameters.output_bits, 1000);
    assert_eq!(report.security.extraction_ratio, 1.0);
    assert!(!report.security.leftover_hash_guarantee);
    assert!(report.security.warning.is_some());
    assert_eq!(report.artifacts.output_bits, 320_000);
}

#[test]
fn geometry_mismatch_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    std::fs::write(&raw, vec![0u8; 4999]).unwrap();
    let out = dir.path().join("ext.bin");
    let err = run_from(
        [
            "tse", "extract",
            "--in", raw.to_str().unwrap(),
            "--out", out.to_str().unwrap(),
            "--pin-hmin", "2.6",
        ]
        .iter()
        .map(|s| s.to_string()),
    )
    .unwrap_err();
    assert!(err.to_string().contains("whole number"), "{err}");
}

#[test]
fn raw_data_fails_battery_with_nonzero_exit() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    run(&[
        "tse", "simulate", "--samples", "100000", "--nonce", "5",
        "--out", raw.to_str().unwrap(),
    ]);
    let code = run(&[
        "tse", "test",
        "--in", raw.to_str().unwrap(),
        "--seqs", "100",
    ]);
    assert_eq!(code, 1, "biased raw data must fail the battery");
}

#[test]
fn binary_smoke_hwmodel_json() {
    let output = Command::new(env!("CARGO_BIN_EXE_tse"))
        .args(["hwmodel", "--er", "0.3,0.5,0.6,0.8", "--json"])
        .output()
        .unwrap();
    assert!(output.status.success());
    let v: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    let cycles: Vec<u64> = v["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["extraction_cycles"].as_u64().unwrap())
        .collect();
    assert_eq!(cycles, vec![6021, 10021, 12021, 16021]);
    let clk_halved = Command::new(env!("CARGO_BIN_EXE_tse"))
        .args(["hwmodel", "--er", "0.3", "--f-clk", "1e8", "--json"])
        .output()
        .unwrap();
    let v2: serde_json::Value = serde_json::from_slice(&clk_halved.stdout).unwrap();
    let full = v["points"][0]["speed_input_bps"].as_f64().unwrap();
    let half = v2["points"][0]["speed_input_bps"].as_f64().unwrap();
    assert!((full / half - 2.0).abs() < 1e-9, "speed is linear in f_clk");
}

#[test]
fn binary_smoke_bench_determinism() {
    let output = Command::new(env!("CARGO_BIN_EXE_tse"))
        .args([
            "bench", "--bs", "1000", "--m", "300", "--blocks", "8",
            "--batches", "5", "--threads", "1,2,4", "--repeat", "2", "--json",
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let json_start = text.find("{\n").unwrap();
    let v: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(v["digests_identical"], serde_json::Value::Bool(true));
}

#[test]
fn simulate_rejects_unattainable_target() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.bin");
    let err = run_from(
        [
            "tse", "simulate", "--samples", "100", "--target-hmin", "9",
            "--out", raw.to_str().unwrap(),
        ]
        .iter()
        .map(|s| s.to_string()),
    )
    .unwrap_err();
    let msg = err.to_string();
    assert!(
        msg.contains("outside (0, 8)") || msg.contains("unattainable"),
        "{msg}"
    );
}
