//! Distance matrices and the estimators that produce them.

mod fermat;
mod io;
mod knn;
mod mds;
mod mu;
mod quotient;
mod spacing;

pub use fermat::{fermat_matrix, fermat_matrix_pruned, power_weights, rescale_fermat, FermatParams};
pub use knn::{knn_graph, knn_matrix};
pub use mds::mds_project;
pub use mu::{estimate_mu, estimate_mu_from_matrix, PopulationOracle};
pub use quotient::quotient_matrix;
pub use spacing::{cross_distance, epsilon_star, minimal_spacing, outlier_delta, prim_mst, MstEdge};

use std::fmt;

use rayon::prelude::*;

use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Which estimator produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricKind {
    Euclidean,
    Fermat {
        p: f64,
        /// Factor `n^{(p-1)/d}/μ` applied by [`rescale_fermat`].
        scale: Option<f64>,
        /// Neighbour count when shortest paths were restricted to a k-NN graph.
        prune: Option<usize>,
    },
    Knn { k: usize },
    Quotient { p: f64 },
}

impl MetricKind {
    pub fn fermat(p: f64) -> Self {
        MetricKind::Fermat {
            p,
            scale: None,
            prune: None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::Fermat { .. } => "fermat",
            MetricKind::Knn { .. } => "knn",
            MetricKind::Quotient { .. } => "quotient",
        }
    }

    fn allows_infinite(&self) -> bool {
        matches!(
            self,
            MetricKind::Knn { .. } | MetricKind::Fermat { prune: Some(_), .. }
        )
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricKind::Fermat { p, .. } | MetricKind::Quotient { p } => write!(f, "{}(p={p})", self.name()),
            MetricKind::Knn { k } => write!(f, "knn(k={k})"),
            MetricKind::Euclidean => f.write_str("euclidean"),
        }
    }
}

/// Symmetric matrix with zero diagonal, stored as its strict lower triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    lower: Vec<f64>,
    kind: MetricKind,
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    debug_assert!(i > j);
    i * (i - 1) / 2 + j
}

impl DistanceMatrix {
    /// Takes the strict lower triangle in row order: `(1,0), (2,0), (2,1), …`.
    pub fn from_lower(n: usize, lower: Vec<f64>, kind: MetricKind) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("distance matrix needs at least one point"));
        }
        if lower.len() != n * (n - 1) / 2 {
            return Err(Error::SizeMismatch(lower.len(), n * (n - 1) / 2));
        }
        for (idx, &v) in lower.iter().enumerate() {
            let bad = v.is_nan() || v < 0.0 || (v.is_infinite() && !kind.allows_infinite());
            if bad {
                return Err(Error::invalid(format!("invalid distance {v} at lower-triangle entry {idx}")));
            }
        }
        Ok(DistanceMatrix { n, lower, kind })
    }

    /// Evaluates `f(i, j)` for every `i > j`, rows in parallel.
    pub fn from_fn<F>(n: usize, kind: MetricKind, f: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> f64 + Sync,
    {
        let lower: Vec<f64> = (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                let f = &f;
                (0..i).map(move |j| f(i, j))
            })
            .collect();
        Self::from_lower(n, lower, kind)
    }

    /// Builds from full rows, taking the smaller of the two mirrored entries.
    pub fn from_rows(rows: &[Vec<f64>], kind: MetricKind) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("distance rows must form a square matrix"));
        }
        Self::from_fn(n, kind, |i, j| rows[i][j].min(rows[j][i]))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => self.lower[tri_index(i, j)],
            std::cmp::Ordering::Less => self.lower[tri_index(j, i)],
        }
    }

    /// Strict lower triangle in row order.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.get(i, j)).collect()
    }

    /// Largest entry (`0` for a single point).
    pub fn max(&self) -> f64 {
        self.lower.iter().copied().fold(0.0, f64::max)
    }

    /// `min_i max_j d(i, j)`: at this scale one vertex is joined to all others.
    pub fn enclosing_radius(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).fold(0.0, f64::max))
            .fold(f64::INFINITY, f64::min)
    }

    /// Restriction to `indices` (in that order), keeping the kind.
    pub fn submatrix(&self, indices: &[usize]) -> Result<DistanceMatrix> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= self.n) {
            return Err(Error::invalid(format!("index {bad} out of range for {} points", self.n)));
        }
        let m = indices.len();
        let mut lower = Vec::with_capacity(m * m.saturating_sub(1) / 2);
        for a in 0..m {
            for b in 0..a {
                lower.push(self.get(indices[a], indices[b]));
            }
        }
        Self::from_lower(m, lower, self.kind)
    }

    /// Applies `f` to every off-diagonal entry.
    pub fn map(&self, kind: MetricKind, f: impl Fn(f64) -> f64) -> Result<DistanceMatrix> {
        Self::from_lower(self.n, self.lower.iter().map(|&v| f(v)).collect(), kind)
    }
}

#[inline]
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn euclidean_matrix(cloud: &PointCloud) -> DistanceMatrix {
    DistanceMatrix::from_fn(cloud.len(), MetricKind::Euclidean, |i, j| {
        euclidean(cloud.point(i), cloud.point(j))
    })
    .expect("euclidean distances of a valid cloud are finite")
}
