use serde::{Deserialize, Serialize};

use super::DegreeSummary;
use crate::geometry::{lorenz_series, LorenzParams};
use crate::metric::fermat_matrix;
use crate::persistence::rips_persistence;
use crate::signal::{delay_embed, DelayParams};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LorenzConfig {
    pub t_max: f64,
    pub dt: f64,
    /// Variance of the additive observation noise.
    pub noise_var: f64,
    pub seed: u64,
    pub tau: usize,
    /// Embedding dimension the verdict is based on.
    pub dim: usize,
    /// Further embedding dimensions reported without a verdict.
    pub extra_dims: Vec<usize>,
    /// Upper bound on the number of embedded points; sets the stride.
    pub max_points: usize,
    pub ps: Vec<f64>,
    pub ratio: f64,
    /// Number of salient degree-1 bars expected: one per lobe.
    pub expected_salient: usize,
}

impl Default for LorenzConfig {
    fn default() -> Self {
        LorenzConfig {
            t_max: 20.0,
            dt: 0.01,
            noise_var: 0.1,
            seed: 0,
            tau: 10,
            dim: 3,
            extra_dims: vec![4, 5],
            max_points: 800,
            ps: vec![2.0, 3.0],
            ratio: 0.3,
            expected_salient: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzRow {
    pub dim: usize,
    pub p: f64,
    pub stride: usize,
    pub points: usize,
    pub h1: DegreeSummary,
    /// `None` for dimensions reported without a verdict.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LorenzReport {
    pub config: LorenzConfig,
    pub rows: Vec<LorenzRow>,
    pub pass: bool,
}

/// Delay embedding of the noisy Lorenz `x` coordinate; the degree-1 Fermat
/// diagram should show one salient cycle per lobe of the attractor.
pub fn lorenz_experiment(cfg: &LorenzConfig) -> Result<LorenzReport> {
    let ts = lorenz_series(cfg.t_max, cfg.dt, &LorenzParams::default(), cfg.noise_var.sqrt(), cfg.seed)?;
    let mut rows = Vec::new();
    for (k, &dim) in std::iter::once(&cfg.dim).chain(&cfg.extra_dims).enumerate() {
        let mut delay = DelayParams::new(cfg.tau, dim);
        delay.validate()?;
        delay.stride = stride_for(ts.len(), &delay, cfg.max_points);
        let cloud = delay_embed(&ts, &delay)?;
        for &p in &cfg.ps {
            let dgm = rips_persistence(&fermat_matrix(&cloud, p)?, 1, f64::INFINITY)?;
            let h1 = DegreeSummary::new(&dgm, 1, cfg.ratio)?;
            let pass = (k == 0).then_some(h1.salient == cfg.expected_salient);
            rows.push(LorenzRow {
                dim,
                p,
                stride: delay.stride,
                points: cloud.len(),
                h1,
                pass,
            });
        }
    }
    let pass = rows.iter().any(|r| r.pass == Some(true));
    Ok(LorenzReport {
        config: cfg.clone(),
        rows,
        pass,
    })
}

/// Smallest stride keeping the embedding within `max_points` points.
pub(crate) fn stride_for(n: usize, delay: &DelayParams, max_points: usize) -> usize {
    let mut d = *delay;
    d.stride = 1;
    while d.count(n) > max_points.max(1) {
        d.stride += 1;
    }
    d.stride
}
