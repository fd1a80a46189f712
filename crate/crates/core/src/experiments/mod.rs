//! End-to-end experiments with machine-readable reports.
//!
//! Each function takes a config with sensible defaults, runs the whole
//! pipeline deterministically from its seeds and returns a report carrying a
//! `pass` verdict. The command-line tool serialises these reports as JSON and
//! the acceptance suite checks the verdicts.

mod changepoint;
mod convergence;
mod eyeglasses;
mod lorenz;
mod stability;
mod trefoil;

pub use changepoint::{changepoint_experiment, ChangePointConfig, ChangePointReport, ChangePointRun};
pub use convergence::{convergence_experiment, ConvergenceConfig, ConvergenceReport, ConvergenceRow};
pub use eyeglasses::{eyeglasses_experiment, EyeglassesConfig, EyeglassesReport};
pub use lorenz::{lorenz_experiment, LorenzConfig, LorenzReport, LorenzRow};
pub use stability::{stability_experiment, StabilityConfig, StabilityReport, StabilityTrial};
pub use trefoil::{trefoil_experiment, TrefoilConfig, TrefoilReport};

use serde::Serialize;

use crate::persistence::{salient_bars, PersistenceDiagram};
use crate::Result;

/// The most persistent finite bars of one degree, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub finite_bars: usize,
    pub essential_bars: usize,
    pub salient: usize,
    /// `(birth, death)` of up to ten bars, most persistent first.
    pub top: Vec<(f64, f64)>,
}

impl DegreeSummary {
    pub fn new(dgm: &PersistenceDiagram, degree: usize, ratio: f64) -> Result<Self> {
        let mut finite: Vec<(f64, f64)> = dgm.finite(degree).map(|b| (b.birth, b.death)).collect();
        finite.sort_by(|a, b| (b.1 - b.0).total_cmp(&(a.1 - a.0)).then(a.0.total_cmp(&b.0)));
        let finite_bars = finite.len();
        finite.truncate(10);
        Ok(DegreeSummary {
            degree,
            finite_bars,
            essential_bars: dgm.degree(degree).filter(|b| !b.is_finite()).count(),
            salient: salient_bars(dgm, degree, ratio)?,
            top: finite,
        })
    }
}
