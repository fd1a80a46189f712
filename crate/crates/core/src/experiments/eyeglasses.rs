use serde::{Deserialize, Serialize};

use super::DegreeSummary;
use crate::geometry::{gen_eyeglasses, Eyeglasses};
use crate::metric::{euclidean_matrix, fermat_matrix};
use crate::persistence::rips_persistence;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EyeglassesConfig {
    pub n: usize,
    pub noise_sd: f64,
    pub seed: u64,
    pub p: f64,
    pub ratio: f64,
    pub shape: Eyeglasses,
    /// Allowed relative error of the second Euclidean cycle's birth against
    /// the neck gap.
    pub birth_tolerance: f64,
}

impl Default for EyeglassesConfig {
    fn default() -> Self {
        EyeglassesConfig {
            n: 250,
            noise_sd: 0.0,
            seed: 0,
            p: 2.0,
            ratio: 0.3,
            shape: Eyeglasses::default(),
            birth_tolerance: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EyeglassesReport {
    pub config: EyeglassesConfig,
    pub euclidean: DegreeSummary,
    pub fermat: DegreeSummary,
    /// Birth of the second most persistent Euclidean degree-1 bar.
    pub second_birth: Option<f64>,
    /// The neck gap, where the Euclidean filtration closes the second cycle.
    pub expected_birth: f64,
    pub euclidean_pass: bool,
    pub fermat_pass: bool,
    pub pass: bool,
}

/// Euclidean Rips sees the neck as a second cycle; Fermat distance follows
/// the curve and sees one.
pub fn eyeglasses_experiment(cfg: &EyeglassesConfig) -> Result<EyeglassesReport> {
    let cloud = gen_eyeglasses(cfg.n, cfg.noise_sd, cfg.seed, &cfg.shape)?;
    let euc = rips_persistence(&euclidean_matrix(&cloud), 1, f64::INFINITY)?;
    let fer = rips_persistence(&fermat_matrix(&cloud, cfg.p)?, 1, f64::INFINITY)?;
    let euclidean = DegreeSummary::new(&euc, 1, cfg.ratio)?;
    let fermat = DegreeSummary::new(&fer, 1, cfg.ratio)?;
    let second_birth = euclidean.top.get(1).map(|b| b.0);
    let expected_birth = cfg.shape.neck_gap;
    let euclidean_pass = euclidean.salient >= 2
        && second_birth.is_some_and(|b| (b - expected_birth).abs() <= cfg.birth_tolerance * expected_birth);
    let fermat_pass = fermat.salient == 1;
    Ok(EyeglassesReport {
        config: cfg.clone(),
        euclidean,
        fermat,
        second_birth,
        expected_birth,
        euclidean_pass,
        fermat_pass,
        pass: euclidean_pass && fermat_pass,
    })
}
