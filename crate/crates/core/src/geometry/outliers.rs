use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{rng, PointCloud};
use crate::metric::euclidean;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierParams {
    pub m: usize,
    pub min_gap: f64,
    /// Candidate draws before giving up.
    pub max_attempts: usize,
}

impl OutlierParams {
    pub fn new(m: usize, min_gap: f64) -> Self {
        OutlierParams {
            m,
            min_gap,
            max_attempts: 200_000,
        }
    }
}

/// Rejection-samples `m` points so that every new point is at least `min_gap`
/// away from the cloud and from the other new points.
///
/// Candidates are drawn from the bounding box of `cloud`, each side pushed out
/// by 25% of its width plus `min_gap`. Without the extra `min_gap` a dense
/// cloud leaves no admissible room once the gap exceeds a quarter of the box.
pub fn gen_outliers(cloud: &PointCloud, params: &OutlierParams, seed: u64) -> Result<PointCloud> {
    let OutlierParams { m, min_gap, max_attempts } = *params;
    if m == 0 {
        return Err(Error::invalid("need at least one outlier"));
    }
    if !(min_gap > 0.0 && min_gap.is_finite()) {
        return Err(Error::invalid(format!("min_gap must be positive, got {min_gap}")));
    }
    let dim = cloud.ambient_dim();
    let bounds: Vec<(f64, f64)> = cloud
        .bounding_box()
        .into_iter()
        .map(|(lo, hi)| {
            let pad = 0.25 * (hi - lo) + min_gap;
            (lo - pad, hi + pad)
        })
        .collect();
    let mut rng = rng(seed);
    let mut placed: Vec<f64> = Vec::with_capacity(m * dim);
    let mut candidate = vec![0.0; dim];
    let mut attempts = 0;
    while placed.len() < m * dim {
        if attempts == max_attempts {
            return Err(Error::CannotPlaceOutliers {
                placed: placed.len() / dim,
                requested: m,
                attempts,
            });
        }
        attempts += 1;
        for (c, (lo, hi)) in candidate.iter_mut().zip(&bounds) {
            *c = lo + (hi - lo) * rng.random::<f64>();
        }
        let clear = |q: &[f64]| euclidean(&candidate, q) >= min_gap;
        if cloud.points().all(clear) && placed.chunks_exact(dim).all(clear) {
            placed.extend_from_slice(&candidate);
        }
    }
    Ok(PointCloud::from_flat(placed, dim)?.with_meta("outliers", seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square_cloud() -> PointCloud {
        let rows: Vec<[f64; 2]> = (0..100)
            .map(|i| [(i % 10) as f64 / 9.0, (i / 10) as f64 / 9.0])
            .collect();
        PointCloud::from_rows(&rows).unwrap()
    }

    #[test]
    fn brute_force_gap_check() {
        let x = unit_square_cloud();
        let y = gen_outliers(&x, &OutlierParams::new(3, 0.5), 4).unwrap();
        assert_eq!(y.len(), 3);
        let mut delta = f64::INFINITY;
        for (i, a) in y.points().enumerate() {
            for b in x.points() {
                delta = delta.min(euclidean(a, b));
            }
            for (j, b) in y.points().enumerate() {
                if i != j {
                    delta = delta.min(euclidean(a, b));
                }
            }
        }
        assert!(delta >= 0.5);
    }

    #[test]
    fn single_outlier_and_failure() {
        let x = unit_square_cloud();
        assert_eq!(gen_outliers(&x, &OutlierParams::new(1, 0.2), 0).unwrap().len(), 1);
        let impossible = OutlierParams {
            max_attempts: 1000,
            ..OutlierParams::new(50, 10.0)
        };
        assert!(matches!(
            gen_outliers(&x, &impossible, 0),
            Err(Error::CannotPlaceOutliers { .. })
        ));
        assert!(gen_outliers(&x, &OutlierParams::new(0, 0.5), 0).is_err());
    }
}
