//! Selective run-length encoding.
//!
//! Vanilla RLE inflates its output whenever a sequence lacks long
//! runs. This crate computes, per symbol, the frequency threshold
//! b_r / (b_x + b_r) above which RLE is profitable in expectation,
//! encodes only the symbols past that threshold, and stores everything
//! else verbatim. It ships the codec and container format, the
//! expected-reclaim analysis behind the threshold, baseline selection
//! policies (vanilla, dominant-symbol, two-pass exploratory), and the
//! ingestion helpers (raw integer streams, CSV columns via dictionary
//! mapping, seeded sampling).

pub mod analysis;
pub mod bitio;
pub mod codec;
pub mod error;
pub mod ingest;
pub mod suitability;
pub mod types;

pub use bitio::Representation;
pub use codec::SrleContainer;
pub use error::{Error, Result};
pub use types::{CodecConfig, DistributionEstimate, Mode, SuitableSet, SymbolSequence};
