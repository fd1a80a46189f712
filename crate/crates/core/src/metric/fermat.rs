//! Sample Fermat distance: shortest paths in the complete graph on the sample
//! where an edge of Euclidean length `ℓ` costs `ℓ^p`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::knn::{knn_graph, sparse_dijkstra};
use super::{euclidean, DistanceMatrix, MetricKind};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Parameters of the re-scaled Fermat estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FermatParams {
    pub p: f64,
    /// Intrinsic dimension of the sampled manifold.
    pub d: usize,
    pub mu: Option<f64>,
}

impl FermatParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 1.0 && self.p.is_finite()) {
            return Err(Error::invalid(format!("p must be > 1, got {}", self.p)));
        }
        if self.d == 0 {
            return Err(Error::invalid("intrinsic dimension must be at least 1"));
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::invalid(format!("mu must be positive, got {mu}")));
            }
        }
        Ok(())
    }

    /// `n^{(p-1)/d} / μ`.
    pub fn scale(&self, n: usize) -> Result<f64> {
        let mu = self.mu.ok_or(Error::MissingMu)?;
        Ok((n as f64).powf((self.p - 1.0) / self.d as f64) / mu)
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::invalid(format!("Fermat exponent must be >= 1, got {p}")));
    }
    Ok(())
}

/// Dense `n × n` matrix of `|x_a - x_b|^p`, row-major.
pub fn power_weights(cloud: &PointCloud, p: f64) -> Vec<f64> {
    let n = cloud.len();
    let mut w = vec![0.0; n * n];
    w.par_chunks_mut(n).enumerate().for_each(|(a, row)| {
        let pa = cloud.point(a);
        for (b, slot) in row.iter_mut().enumerate() {
            if a != b {
                *slot = euclidean(pa, cloud.point(b)).powf(p);
            }
        }
    });
    w
}

/// Single-source shortest paths on a complete graph given as a dense weight
/// matrix. The frontier is a linear scan, which is optimal (`O(n²)`) when
/// every vertex is adjacent to every other.
pub(crate) fn dense_dijkstra(weights: &[f64], n: usize, sources: &[usize]) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    for &s in sources {
        dist[s] = 0.0;
    }
    for _ in 0..n {
        let mut u = usize::MAX;
        let mut best = f64::INFINITY;
        for v in 0..n {
            if !done[v] && (dist[v] < best || (u == usize::MAX && dist[v] == best)) {
                best = dist[v];
                u = v;
            }
        }
        if u == usize::MAX || best.is_infinite() {
            break;
        }
        done[u] = true;
        let row = &weights[u * n..(u + 1) * n];
        for v in 0..n {
            if !done[v] {
                let cand = best + row[v];
                if cand < dist[v] {
                    dist[v] = cand;
                }
            }
        }
    }
    dist
}

/// Exact sample Fermat distance by one Dijkstra per source.
///
/// `p = 1` is accepted and yields the Euclidean distance (straight segments
/// are already shortest).
pub fn fermat_matrix(cloud: &PointCloud, p: f64) -> Result<DistanceMatrix> {
    check_exponent(p)?;
    let n = cloud.len();
    let weights = power_weights(cloud, p);
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| dense_dijkstra(&weights, n, &[s]))
        .collect();
    DistanceMatrix::from_rows(&rows, MetricKind::fermat(p))
}

/// Fermat distance with paths restricted to the symmetric k-NN graph.
///
/// This is an approximation: it can only overestimate the exact distance, and
/// pairs in different components of the graph get `+∞`. With `k = n - 1` it is
/// exact.
pub fn fermat_matrix_pruned(cloud: &PointCloud, p: f64, k: usize) -> Result<DistanceMatrix> {
    check_exponent(p)?;
    let n = cloud.len();
    let graph: Vec<Vec<(usize, f64)>> = knn_graph(cloud, k)?
        .into_iter()
        .map(|adj| adj.into_iter().map(|(v, len)| (v, len.powf(p))).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|s| sparse_dijkstra(&graph, s))
        .collect();
    DistanceMatrix::from_rows(
        &rows,
        MetricKind::Fermat {
            p,
            scale: None,
            prune: Some(k),
        },
    )
}

/// Multiplies every entry by `n^{(p-1)/d}/μ`.
pub fn rescale_fermat(dist: &DistanceMatrix, params: &FermatParams) -> Result<DistanceMatrix> {
    params.validate()?;
    let MetricKind::Fermat { p, scale, prune } = dist.kind() else {
        return Err(Error::KindMismatch {
            expected: "fermat".into(),
            found: dist.kind().to_string(),
        });
    };
    if p != params.p {
        return Err(Error::invalid(format!(
            "matrix was computed with p = {p}, parameters say p = {}",
            params.p
        )));
    }
    let factor = params.scale(dist.len())?;
    let kind = MetricKind::Fermat {
        p,
        scale: Some(scale.unwrap_or(1.0) * factor),
        prune,
    };
    dist.map(kind, |v| v * factor)
}
