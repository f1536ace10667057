//! Joint selection of a shared decontaminated benchmark across several
//! audited models.
//!
//! The pipeline: per-token model outputs become membership-detection
//! scores ([`scores`]), scores become conformal p-values against an
//! all-member calibration set ([`conformal`]), per-item maxima are
//! recalibrated through a conservative envelope of their null CDF
//! ([`envelope`]), and a Storey-weighted BH step-up picks the final item
//! set ([`selection`]). [`simgen`] builds ground-truth-labeled synthetic
//! worlds and [`harness`] measures contamination and power over the
//! repeated-subsample protocol.

pub mod cli;
pub mod conformal;
pub mod envelope;
pub mod error;
pub mod harness;
pub mod scores;
pub mod selection;
pub mod simgen;
pub mod svg;
pub mod util;

pub use error::{Error, Result};
