//! Multidimensional scaling by stress majorization over a flat, sorted
//! dissimilarity store with tie blocks.
//!
//! Metric and ordinal, weighted and unweighted analyses share one driver
//! ([`engine::run`]) that alternates a Guttman transform with, for ordinal
//! data, a monotone regression under the primary, secondary or tertiary
//! approach to ties.

// Index loops mirror the matrix formulas; `!(x > 0.0)` also rejects NaN.
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod data;
pub mod engine;
pub mod error;
pub mod init;
pub mod linalg;
pub mod majorize;
pub mod monotone;
pub mod plot;

pub use data::{from_mds_data, make_mds_data, read_dist, read_dist_file, DistTriangle, MdsData};
pub use engine::{run, run_observed, EngineConfig, MdsResult};
pub use error::{Error, Result};
pub use init::{InitMethod, InitResult};
pub use majorize::Configuration;
pub use monotone::TieApproach;
