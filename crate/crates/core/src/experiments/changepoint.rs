use serde::{Deserialize, Serialize};

use crate::geometry::sine_switch_series;
use crate::signal::{change_point_score, detect_peaks, evolving_diagrams, DelayParams, EvolvingParams, PrefixMetric};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChangePointConfig {
    pub n: usize,
    /// Period, in samples, before the switch; afterwards it halves.
    pub period: f64,
    pub noise_sd: f64,
    pub seeds: Vec<u64>,
    pub dim: usize,
    pub stride: usize,
    pub p: f64,
    /// Prefix growth in embedded points.
    pub step: usize,
    pub degree: usize,
    pub window: usize,
    pub z: f64,
    /// Allowed distance of the top peak from the switch, as a fraction of `n`.
    pub tolerance: f64,
    /// Seeds that must locate the switch.
    pub required: usize,
}

impl Default for ChangePointConfig {
    fn default() -> Self {
        ChangePointConfig {
            n: 800,
            period: 40.0,
            noise_sd: 0.05,
            seeds: vec![0, 1, 2, 3, 4],
            dim: 3,
            stride: 2,
            p: 2.0,
            step: 20,
            degree: 1,
            window: 3,
            z: 3.0,
            tolerance: 0.1,
            required: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangePointRun {
    pub seed: u64,
    /// Sample index of the largest smoothed score.
    pub top_peak: usize,
    pub error: f64,
    pub peaks: Vec<usize>,
    pub hit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangePointReport {
    pub config: ChangePointConfig,
    pub switch_at: usize,
    pub tau: usize,
    pub runs: Vec<ChangePointRun>,
    pub pass: bool,
}

/// A sine whose frequency doubles halfway through; the bottleneck score of
/// the growing delay embedding should peak at the switch.
pub fn changepoint_experiment(cfg: &ChangePointConfig) -> Result<ChangePointReport> {
    let tau = (cfg.period / 4.0).round() as usize;
    if tau == 0 {
        return Err(Error::invalid(format!("period {} too short for a quarter-period delay", cfg.period)));
    }
    let switch_at = cfg.n / 2;
    let delay = DelayParams {
        tau,
        dim: cfg.dim,
        stride: cfg.stride,
    };
    let params = EvolvingParams {
        p: cfg.p,
        step: cfg.step,
        max_dim: cfg.degree,
        metric: PrefixMetric::Inherited,
    };
    let mut runs = Vec::new();
    for &seed in &cfg.seeds {
        let ts = sine_switch_series(cfg.n, cfg.period, switch_at, cfg.noise_sd, 1.0, seed)?;
        let dgms = evolving_diagrams(&ts, &delay, &params)?;
        let score = change_point_score(&dgms, ts.dt(), cfg.degree, cfg.window)?;
        let best = (0..score.smoothed.len())
            .max_by(|&a, &b| score.smoothed[a].total_cmp(&score.smoothed[b]).then(b.cmp(&a)))
            .expect("at least one score");
        let top_peak = score.times[best];
        let error = (top_peak as f64 - switch_at as f64).abs() / cfg.n as f64;
        let peaks = detect_peaks(&score, cfg.z)?.into_iter().map(|i| score.times[i]).collect();
        runs.push(ChangePointRun {
            seed,
            top_peak,
            error,
            peaks,
            hit: error <= cfg.tolerance,
        });
    }
    let pass = runs.iter().filter(|r| r.hit).count() >= cfg.required;
    Ok(ChangePointReport {
        config: cfg.clone(),
        switch_at,
        tau,
        runs,
        pass,
    })
}
