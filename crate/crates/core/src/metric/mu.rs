use super::{fermat_matrix, DistanceMatrix, MetricKind};
use crate::geometry::{Manifold, PointCloud};
use crate::{Error, Result};

/// Ground truth for a sampled manifold.
pub trait PopulationOracle {
    /// Intrinsic (geodesic) distance.
    fn geodesic(&self, x: &[f64], y: &[f64]) -> f64;
    /// Population Fermat distance `d_{f,p}`.
    fn fermat(&self, x: &[f64], y: &[f64], p: f64) -> f64;
    fn diameter(&self) -> f64;
}

impl PopulationOracle for Manifold {
    fn geodesic(&self, x: &[f64], y: &[f64]) -> f64 {
        Manifold::geodesic(self, x, y)
    }

    fn fermat(&self, x: &[f64], y: &[f64], p: f64) -> f64 {
        self.population_fermat(x, y, p)
    }

    fn diameter(&self) -> f64 {
        Manifold::diameter(self)
    }
}

const MIN_PAIRS: usize = 10;

/// Empirical `μ(p, d)`: the median over well-separated pairs of
/// `n^{(p-1)/d} d_{X_n,p}(x, y) / d_{f,p}(x, y)`.
///
/// Pairs closer than `floor` in geodesic distance are skipped; the default
/// floor is 10% of the manifold diameter.
pub fn estimate_mu(
    cloud: &PointCloud,
    p: f64,
    d: usize,
    oracle: &dyn PopulationOracle,
    floor: Option<f64>,
) -> Result<f64> {
    let fermat = fermat_matrix(cloud, p)?;
    estimate_mu_from_matrix(cloud, &fermat, d, oracle, floor)
}

/// As [`estimate_mu`], with the sample Fermat matrix already computed.
pub fn estimate_mu_from_matrix(
    cloud: &PointCloud,
    fermat: &DistanceMatrix,
    d: usize,
    oracle: &dyn PopulationOracle,
    floor: Option<f64>,
) -> Result<f64> {
    let MetricKind::Fermat { p, scale: None, .. } = fermat.kind() else {
        return Err(Error::KindMismatch {
            expected: "unscaled fermat".into(),
            found: fermat.kind().to_string(),
        });
    };
    if d == 0 {
        return Err(Error::invalid("intrinsic dimension must be at least 1"));
    }
    if fermat.len() != cloud.len() {
        return Err(Error::SizeMismatch(fermat.len(), cloud.len()));
    }
    let n = cloud.len();
    let floor = floor.unwrap_or(0.1 * oracle.diameter());
    let scale = (n as f64).powf((p - 1.0) / d as f64);
    let mut ratios = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let (x, y) = (cloud.point(i), cloud.point(j));
            if oracle.geodesic(x, y) >= floor {
                let truth = oracle.fermat(x, y, p);
                if truth > 0.0 && truth.is_finite() {
                    ratios.push(scale * fermat.get(i, j) / truth);
                }
            }
        }
    }
    if ratios.len() < MIN_PAIRS {
        return Err(Error::TooFewPairs {
            found: ratios.len(),
            required: MIN_PAIRS,
        });
    }
    Ok(median(&mut ratios))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}
