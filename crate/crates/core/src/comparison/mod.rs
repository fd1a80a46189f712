//! Bottleneck distance, metric distortion and the stability check that ties
//! them together.

mod bottleneck;
mod matching;

pub use bottleneck::bottleneck;
pub use matching::{Matching, Slot};

use serde::Serialize;

use crate::metric::DistanceMatrix;
use crate::persistence::rips_persistence;
use crate::{Error, Result};

/// `sup |D1_ij - D2_ij|` over all pairs. Half of this bounds the
/// Gromov–Hausdorff distance through the identity correspondence.
pub fn metric_distortion(d1: &DistanceMatrix, d2: &DistanceMatrix) -> Result<f64> {
    if d1.len() != d2.len() {
        return Err(Error::SizeMismatch(d1.len(), d2.len()));
    }
    Ok(d1
        .lower()
        .iter()
        .zip(d2.lower())
        .map(|(&a, &b)| if a == b { 0.0 } else { (a - b).abs() })
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StabilityReport {
    pub bottleneck: f64,
    pub distortion: f64,
    pub pass: bool,
}

/// Rips diagrams of both matrices in `degree`, compared against the metric
/// distortion. The bottleneck distance can never exceed it.
pub fn check_stability(
    d1: &DistanceMatrix,
    d2: &DistanceMatrix,
    degree: usize,
    max_dim: usize,
    r: f64,
) -> Result<StabilityReport> {
    if degree > max_dim {
        return Err(Error::invalid(format!("degree {degree} exceeds max_dim {max_dim}")));
    }
    let distortion = metric_distortion(d1, d2)?;
    let a = rips_persistence(d1, max_dim, r)?;
    let b = rips_persistence(d2, max_dim, r)?;
    let (bottleneck, _) = bottleneck(&a, &b, degree)?;
    Ok(StabilityReport {
        bottleneck,
        distortion,
        pass: bottleneck <= distortion,
    })
}
