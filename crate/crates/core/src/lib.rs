//! Post-processing toolkit for quantum random number generators built around
//! the Toeplitz strong extractor.
//!
//! The crate covers the full conditioning chain for a raw entropy source:
//!
//! - [`bitstore`] — packed bit-strings and the GF(2) word-level kernels every
//!   other module is built on.
//! - [`seedgen`] — LFSR-based seed expansion producing the Toeplitz string.
//! - [`entropy`] — per-symbol min-entropy estimation and leftover-hash output
//!   sizing.
//! - [`extractor`] — the Toeplitz strong extractor itself: per-block GF(2)
//!   matrix-vector products over sliding windows, batched across parallel
//!   blocks.
//! - [`hwmodel`] — an analytical clock-cycle model of a pipelined FPGA
//!   datapath running the same extraction.
//! - [`source`] — raw-sample ingestion and a calibrated Gaussian simulator
//!   standing in for the physical source.
//! - [`statsuite`] — a native subset of the NIST SP 800-22 battery plus an
//!   ASCII export path for the external reference suite.
//!
//! Real-valued analytics are generic over the scalar type through the
//! [`Real`] trait (`f32` or `f64`); the `*F64` aliases at the crate root pin
//! the default used by the CLI and the test suites.

pub mod bitstore;
pub mod entropy;
pub mod extractor;
pub mod hwmodel;
mod real;
pub mod seedgen;
pub mod source;
pub mod special;
pub mod statsuite;

pub use bitstore::BitString;
pub use real::Real;

/// Default scalar for all real-valued analytics.
pub type Scalar = f64;

pub type ExtractionParamsF64 = entropy::ExtractionParams<f64>;
pub type HwConfigF64 = hwmodel::HwConfig<f64>;
pub type HwModelReportF64 = hwmodel::HwModelReport<f64>;
pub type TestRunConfigF64 = statsuite::TestRunConfig<f64>;
pub type TestReportF64 = statsuite::TestReport<f64>;
