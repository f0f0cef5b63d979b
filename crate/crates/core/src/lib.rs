//! Regional rule extraction over tabular data.
//!
//! Given feature columns and a binary indicator of a target subgroup (usually
//! "the model predicted class c"), this crate searches conjunctive IF-THEN
//! rule sets that maximise the share of the subgroup inside the rule region,
//! subject to a minimum support and a maximum rule count.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, CSV ingestion
//! and the command-line front end live in the `subrule` companion crate.
//!
//! Module map:
//!
//! - [`table`] - column-typed data, target construction, ROC thresholding.
//! - [`attribution`] - integrated-gradient importances and frequent feature
//!   selection.
//! - [`itemsets`] - FP-Growth.
//! - [`binning`] - grid construction, occupancy counting, grid merging.
//! - [`extraction`] - ratio-driven interval growth and the K-branch rule tree.
//! - [`metrics`] - support, confidence, fitness.
//! - [`synth`] - planted multi-mode fixtures and a brute-force oracle.

#![no_std]

extern crate alloc;

pub mod attribution;
pub mod binning;
mod error;
pub mod extraction;
pub mod itemsets;
pub mod metrics;
pub mod ratio;
pub mod synth;
pub mod table;

pub use error::{Error, Result};
pub use ratio::Ratio;
