use rand::Rng;
use rand_distr::{Distribution, UnitBall, UnitDisc};
use serde::{Deserialize, Serialize};

use crate::comparison::check_stability;
use crate::geometry::{gen_eyeglasses, rng, Eyeglasses, PointCloud};
use crate::metric::{euclidean_matrix, fermat_matrix, DistanceMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StabilityConfig {
    pub n: usize,
    pub noise_sd: f64,
    pub trials: usize,
    /// Largest jitter radius; trial radii are drawn uniformly up to it.
    pub max_jitter: f64,
    pub p: f64,
    pub seed: u64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            n: 200,
            noise_sd: 0.02,
            trials: 20,
            max_jitter: 0.05,
            p: 2.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityTrial {
    pub trial: usize,
    pub jitter: f64,
    pub metric: String,
    pub degree: usize,
    pub bottleneck: f64,
    pub distortion: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub config: StabilityConfig,
    pub trials: Vec<StabilityTrial>,
    pub pass: bool,
}

/// Moves every point of a noisy eyeglasses sample by at most `η` and checks
/// that no diagram moves further than the metric does.
pub fn stability_experiment(cfg: &StabilityConfig) -> Result<StabilityReport> {
    if !(cfg.max_jitter > 0.0) {
        return Err(Error::invalid(format!("max_jitter must be positive, got {}", cfg.max_jitter)));
    }
    let base = gen_eyeglasses(cfg.n, cfg.noise_sd, cfg.seed, &Eyeglasses::default())?;
    let d_euc = euclidean_matrix(&base);
    let d_fer = fermat_matrix(&base, cfg.p)?;
    let mut g = rng(cfg.seed ^ 0x71_77e5);
    let mut trials = Vec::new();
    for trial in 0..cfg.trials {
        let eta = cfg.max_jitter * g.random_range(0.1..=1.0);
        let moved = jitter(&base, eta, &mut g)?;
        let pairs: [(&str, &DistanceMatrix, DistanceMatrix); 2] = [
            ("euclidean", &d_euc, euclidean_matrix(&moved)),
            ("fermat", &d_fer, fermat_matrix(&moved, cfg.p)?),
        ];
        for (metric, before, after) in &pairs {
            for degree in 0..=1 {
                let rep = check_stability(before, after, degree, 1, f64::INFINITY)?;
                trials.push(StabilityTrial {
                    trial,
                    jitter: eta,
                    metric: metric.to_string(),
                    degree,
                    bottleneck: rep.bottleneck,
                    distortion: rep.distortion,
                    pass: rep.pass,
                });
            }
        }
    }
    let pass = trials.iter().all(|t| t.pass);
    Ok(StabilityReport {
        config: cfg.clone(),
        trials,
        pass,
    })
}

/// Displaces every point uniformly within a ball of radius `eta`.
fn jitter(cloud: &PointCloud, eta: f64, g: &mut impl Rng) -> Result<PointCloud> {
    let dim = cloud.ambient_dim();
    let mut coords = cloud.coords().to_vec();
    for chunk in coords.chunks_exact_mut(dim) {
        let offset: Vec<f64> = match dim {
            2 => UnitDisc.sample(g).to_vec(),
            3 => UnitBall.sample(g).to_vec(),
            _ => return Err(Error::invalid(format!("jitter supports 2 or 3 dimensions, got {dim}"))),
        };
        for (c, o) in chunk.iter_mut().zip(offset) {
            *c += eta * o;
        }
    }
    PointCloud::from_flat(coords, dim)
}
