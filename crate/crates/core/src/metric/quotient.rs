use rayon::prelude::*;

use super::fermat::{dense_dijkstra, power_weights};
use super::{DistanceMatrix, MetricKind};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Metric of the quotient `(X ∪ Y)/X`: the sample `X` is collapsed to one
/// point (index 0) and outliers `Y` keep indices `1..=|Y|`.
///
/// Distances are shortest paths over `X ∪ Y` where hops between two points of
/// `X` are free and every other hop costs `|a - b|^p`.
pub fn quotient_matrix(x: &PointCloud, y: Option<&PointCloud>, p: f64) -> Result<DistanceMatrix> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("Fermat exponent must be >= 1, got {p}")));
    }
    let kind = MetricKind::Quotient { p };
    let Some(y) = y else {
        return DistanceMatrix::from_lower(1, Vec::new(), kind);
    };
    let joined = x.concat(y)?;
    let (nx, n) = (x.len(), joined.len());
    let mut weights = power_weights(&joined, p);
    for a in 0..nx {
        weights[a * n..a * n + nx].fill(0.0);
    }
    let all_x: Vec<usize> = (0..nx).collect();
    let rows: Vec<Vec<f64>> = (0..=y.len())
        .into_par_iter()
        .map(|class| {
            let dist = if class == 0 {
                dense_dijkstra(&weights, n, &all_x)
            } else {
                dense_dijkstra(&weights, n, &[nx + class - 1])
            };
            let to_x = dist[..nx].iter().copied().fold(f64::INFINITY, f64::min);
            std::iter::once(to_x).chain(dist[nx..].iter().copied()).collect()
        })
        .collect();
    DistanceMatrix::from_rows(&rows, kind)
}
