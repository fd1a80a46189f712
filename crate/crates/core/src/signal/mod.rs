//! Delay embeddings, diagrams of growing prefixes, and the change-point score
//! built from bottleneck distances between consecutive prefixes.

mod score;

pub use score::{change_point_score, detect_peaks, ChangePointScore};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{PointCloud, TimeSeries};
use crate::metric::{fermat_matrix, DistanceMatrix};
use crate::persistence::{rips_persistence, PersistenceDiagram};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelayParams {
    /// Delay in samples.
    pub tau: usize,
    /// Embedding dimension.
    pub dim: usize,
    /// Step between consecutive embedded points, in samples.
    pub stride: usize,
}

impl DelayParams {
    pub fn new(tau: usize, dim: usize) -> Self {
        DelayParams { tau, dim, stride: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.tau == 0 || self.dim < 2 || self.stride == 0 {
            return Err(Error::invalid(format!(
                "delay parameters need tau >= 1, dim >= 2, stride >= 1 (got {}, {}, {})",
                self.tau, self.dim, self.stride
            )));
        }
        Ok(())
    }

    /// Samples covered by one embedded point, minus one.
    pub fn span(&self) -> usize {
        (self.dim - 1) * self.tau
    }

    /// Number of embedded points for a series of length `n`.
    pub fn count(&self, n: usize) -> usize {
        if n <= self.span() {
            0
        } else {
            (n - self.span() - 1) / self.stride + 1
        }
    }

    /// Index of the newest sample in embedded point `i`.
    pub fn last_sample(&self, i: usize) -> usize {
        i * self.stride + self.span()
    }
}

/// Points `(x_i, x_{i+τ}, …, x_{i+(D-1)τ})` for `i = 0, stride, 2·stride, …`.
pub fn delay_embed(ts: &TimeSeries, params: &DelayParams) -> Result<PointCloud> {
    params.validate()?;
    let n = ts.len();
    if n <= params.span() {
        return Err(Error::SeriesTooShort {
            len: n,
            span: params.span() + 1,
        });
    }
    let x = ts.values();
    let m = params.count(n);
    let mut coords = Vec::with_capacity(m * params.dim);
    for i in 0..m {
        let start = i * params.stride;
        coords.extend((0..params.dim).map(|k| x[start + k * params.tau]));
    }
    PointCloud::from_flat(coords, params.dim)
}

/// How prefix clouds are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrefixMetric {
    /// Restrict the Fermat distance of the whole embedded cloud.
    #[default]
    Inherited,
    /// Recompute the Fermat distance on each prefix alone.
    Recomputed,
}

/// Diagram of the first `points` embedded points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixDiagram {
    pub points: usize,
    /// Index of the newest sample the prefix depends on.
    pub time: usize,
    pub diagram: PersistenceDiagram,
}

/// Options for [`evolving_diagrams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolvingParams {
    pub p: f64,
    /// Prefix sizes are `step, 2·step, …` embedded points.
    pub step: usize,
    /// Highest homology degree computed.
    pub max_dim: usize,
    pub metric: PrefixMetric,
}

/// Rips diagrams of the prefixes `X_j`, `j = step, 2·step, …`, of the delay
/// embedding of `ts`.
pub fn evolving_diagrams(ts: &TimeSeries, delay: &DelayParams, params: &EvolvingParams) -> Result<Vec<PrefixDiagram>> {
    let cloud = delay_embed(ts, delay)?;
    evolving_cloud_diagrams(&cloud, delay, params)
}

/// As [`evolving_diagrams`] for an already embedded cloud whose point `i` was
/// built with `delay`.
pub fn evolving_cloud_diagrams(
    cloud: &PointCloud,
    delay: &DelayParams,
    params: &EvolvingParams,
) -> Result<Vec<PrefixDiagram>> {
    if params.step == 0 {
        return Err(Error::invalid("step must be at least 1"));
    }
    let n = cloud.len();
    let full = match params.metric {
        PrefixMetric::Inherited => Some(fermat_matrix(cloud, params.p)?),
        PrefixMetric::Recomputed => None,
    };
    let sizes: Vec<usize> = (1..=n / params.step).map(|k| k * params.step).collect();
    sizes
        .par_iter()
        .map(|&j| {
            let prefix: Vec<usize> = (0..j).collect();
            let dist: DistanceMatrix = match &full {
                Some(full) => full.submatrix(&prefix)?,
                None => fermat_matrix(&cloud.select(&prefix)?, params.p)?,
            };
            Ok(PrefixDiagram {
                points: j,
                time: delay.last_sample(j - 1),
                diagram: rips_persistence(&dist, params.max_dim, f64::INFINITY)?,
            })
        })
        .collect()
}
