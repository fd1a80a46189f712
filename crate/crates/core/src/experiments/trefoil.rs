use serde::{Deserialize, Serialize};

use crate::geometry::{gen_outliers, gen_trefoil, OutlierParams, PointCloud};
use crate::metric::{epsilon_star, fermat_matrix, outlier_delta, quotient_matrix};
use crate::persistence::{rips_persistence, Bar, PersistenceDiagram};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrefoilConfig {
    pub n: usize,
    pub noise_sd: f64,
    pub outliers: usize,
    /// Minimum outlier gap as a multiple of `ε*`; must exceed 1 for the
    /// outliers to be geometric.
    pub gap_factor: f64,
    pub p: f64,
    pub seed: u64,
    /// Tolerance for the degree-0 decomposition.
    pub h0_tolerance: f64,
}

impl Default for TrefoilConfig {
    fn default() -> Self {
        TrefoilConfig {
            n: 300,
            noise_sd: 0.02,
            outliers: 10,
            gap_factor: 2.0,
            p: 3.0,
            seed: 0,
            h0_tolerance: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruncatedComparison {
    pub p: f64,
    pub threshold: f64,
    pub bars_without: usize,
    pub bars_with: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct H0Comparison {
    pub bars_with: usize,
    pub bars_sample: usize,
    pub bars_quotient: usize,
    pub max_error: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrefoilReport {
    pub config: TrefoilConfig,
    pub epsilon_star: f64,
    pub delta: f64,
    pub geometric_outliers: bool,
    /// Degree 1 under `Rips_{<δ^p}` at the configured `p`.
    pub below_delta: TruncatedComparison,
    /// Degree 1 under `Rips_{<diam_p(X)}` at the smallest integer
    /// `p >= config.p` with `(δ/ε*)^p > n`.
    pub below_diameter: TruncatedComparison,
    pub h0: H0Comparison,
    pub pass: bool,
}

/// Outlier robustness on a noisy trefoil: the positive-degree diagram is
/// untouched below `δ^p`, and degree 0 splits into the sample's finite bars
/// plus the quotient space's bars.
pub fn trefoil_experiment(cfg: &TrefoilConfig) -> Result<TrefoilReport> {
    if !(cfg.gap_factor > 1.0) {
        return Err(Error::invalid(format!("gap_factor must exceed 1, got {}", cfg.gap_factor)));
    }
    let x = gen_trefoil(cfg.n, cfg.noise_sd, cfg.seed)?;
    let eps = epsilon_star(&x);
    let y = gen_outliers(&x, &OutlierParams::new(cfg.outliers, cfg.gap_factor * eps), cfg.seed ^ 0x5eed)?;
    let delta = outlier_delta(&x, &y)?;
    let xy = x.concat(&y)?;

    let below_delta = compare_degree1(&x, &xy, cfg.p, |_| delta.powf(cfg.p))?;

    let ratio = delta / eps;
    let needed = (cfg.n as f64).ln() / ratio.ln();
    let mut p_large = cfg.p.max(needed.floor());
    while ratio.powf(p_large) <= cfg.n as f64 {
        p_large += 1.0;
    }
    let below_diameter = compare_degree1(&x, &xy, p_large, |dx| dx.max())?;

    let h0 = h0_decomposition(&x, &y, &xy, cfg.p, cfg.h0_tolerance)?;
    let geometric_outliers = delta > eps;
    let pass = geometric_outliers && below_delta.equal && below_diameter.equal && h0.pass;
    Ok(TrefoilReport {
        config: cfg.clone(),
        epsilon_star: eps,
        delta,
        geometric_outliers,
        below_delta,
        below_diameter,
        h0,
        pass,
    })
}

fn compare_degree1(
    x: &PointCloud,
    xy: &PointCloud,
    p: f64,
    threshold: impl Fn(&crate::metric::DistanceMatrix) -> f64,
) -> Result<TruncatedComparison> {
    let dx = fermat_matrix(x, p)?;
    let r = threshold(&dx);
    let without = rips_persistence(&dx, 1, r)?.restrict(1);
    let with = rips_persistence(&fermat_matrix(xy, p)?, 1, r)?.restrict(1);
    Ok(TruncatedComparison {
        p,
        threshold: r,
        bars_without: without.bars.len(),
        bars_with: with.bars.len(),
        equal: without == with,
    })
}

fn h0_decomposition(x: &PointCloud, y: &PointCloud, xy: &PointCloud, p: f64, tol: f64) -> Result<H0Comparison> {
    let with = rips_persistence(&fermat_matrix(xy, p)?, 0, f64::INFINITY)?;
    let sample = rips_persistence(&fermat_matrix(x, p)?, 0, f64::INFINITY)?;
    let quotient = rips_persistence(&quotient_matrix(x, Some(y), p)?, 0, f64::INFINITY)?;
    let mut expected: Vec<Bar> = sample.finite(0).copied().collect();
    expected.extend(quotient.degree(0).copied());
    let expected = PersistenceDiagram::new(expected, f64::INFINITY);
    let got = &with.bars;
    let max_error = if got.len() == expected.bars.len() {
        got.iter()
            .zip(&expected.bars)
            .map(|(a, b)| {
                if a.death == b.death {
                    (a.birth - b.birth).abs()
                } else {
                    (a.birth - b.birth).abs().max((a.death - b.death).abs())
                }
            })
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(H0Comparison {
        bars_with: got.len(),
        bars_sample: sample.finite(0).count(),
        bars_quotient: quotient.bars.len(),
        max_error,
        pass: max_error <= tol,
    })
}
