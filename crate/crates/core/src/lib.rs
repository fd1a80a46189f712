//! Density-aware intrinsic distances and Vietoris–Rips persistent homology.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] generates reproducible synthetic point clouds and signals.
//! * [`metric`] turns point clouds into distance matrices: Euclidean, sample
//!   Fermat (power-weighted shortest paths), k-NN graph geodesics, the quotient
//!   metric that collapses a sample to a point, plus spacing statistics and MDS.
//! * [`persistence`] builds Rips filtrations and computes persistence diagrams
//!   over Z/2.
//! * [`comparison`] measures bottleneck distances and metric distortion.
//! * [`signal`] runs the delay-embedding change-point pipeline.
//! * [`experiments`] wires the above into the reproducible experiment reports
//!   used by the command-line tool and the acceptance suite.

pub mod comparison;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod metric;
pub mod persistence;
pub mod signal;

mod fmt;
mod union_find;

pub use error::{Error, Result};
pub use fmt::{format_float, parse_float};
