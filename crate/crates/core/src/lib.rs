//! Research-productivity scoring and recruitment-audit pipeline.
//!
//! The library is organized as a linear pipeline:
//!
//! 1. [`ingest`] loads and cross-validates the four input tables
//!    (roster, publications + authorships, journal metrics, competitions).
//! 2. [`metrics`] computes per-researcher output `O` and fractional
//!    scientific strength `FSS_IF` from the validated corpus.
//! 3. [`ranking`] converts scorecards into 0-100 percentile ranks within
//!    (field, academic rank) strata and classifies performance bands.
//! 4. [`cohort`] runs the recruitment audits: winners vs incumbents,
//!    per-competition winner quality, and winners vs non-winner candidates.
//! 5. [`report`] orchestrates a full run and emits CSV/JSON/markdown output.

pub mod cohort;
pub mod ingest;
pub mod metrics;
pub mod ranking;
pub mod report;

pub use ingest::{Corpus, ValidationReport, Window};
pub use metrics::ScoreCard;
pub use ranking::{Band, Indicator, PercentileTable};
