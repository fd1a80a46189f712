use serde::{Deserialize, Serialize};

use crate::geometry::{gen_uniform_manifold, Manifold};
use crate::metric::fermat_matrix;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConvergenceConfig {
    pub manifolds: Vec<Manifold>,
    pub sizes: Vec<usize>,
    pub seeds: Vec<u64>,
    pub p: f64,
    /// Pairs closer than this fraction of the diameter are skipped.
    pub min_separation: f64,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            manifolds: vec![Manifold::Circle, Manifold::FlatTorus],
            sizes: vec![200, 400, 800],
            seeds: vec![0, 1, 2],
            p: 2.0,
            min_separation: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub manifold: Manifold,
    pub seed: u64,
    /// Coefficient of variation per entry of `sizes`.
    pub cv: Vec<f64>,
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub config: ConvergenceConfig,
    pub rows: Vec<ConvergenceRow>,
    pub pass: bool,
}

/// On uniform samples `n^{(p-1)/d} d_{X_n,p} / d_geo` tends to the constant
/// `μ`; its spread over well-separated pairs should shrink as `n` grows.
pub fn convergence_experiment(cfg: &ConvergenceConfig) -> Result<ConvergenceReport> {
    let mut rows = Vec::new();
    for &manifold in &cfg.manifolds {
        for &seed in &cfg.seeds {
            let cv = cfg
                .sizes
                .iter()
                .map(|&n| ratio_cv(manifold, n, seed, cfg.p, cfg.min_separation))
                .collect::<Result<Vec<f64>>>()?;
            let decreasing = cv.windows(2).all(|w| w[1] < w[0]);
            rows.push(ConvergenceRow {
                manifold,
                seed,
                cv,
                decreasing,
            });
        }
    }
    let pass = rows.iter().all(|r| r.decreasing);
    Ok(ConvergenceReport {
        config: cfg.clone(),
        rows,
        pass,
    })
}

fn ratio_cv(manifold: Manifold, n: usize, seed: u64, p: f64, min_separation: f64) -> Result<f64> {
    let cloud = gen_uniform_manifold(manifold, n, 0.0, seed)?;
    let dist = fermat_matrix(&cloud, p)?;
    let scale = (n as f64).powf((p - 1.0) / manifold.intrinsic_dim() as f64);
    let floor = min_separation * manifold.diameter();
    let mut ratios = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let geo = manifold.geodesic(cloud.point(i), cloud.point(j));
            if geo >= floor {
                ratios.push(scale * dist.get(i, j) / geo);
            }
        }
    }
    let m = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / m;
    let var = ratios.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / m;
    Ok(var.sqrt() / mean)
}
