use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{check_finite, check_noise, rng, TimeSeries};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub x0: [f64; 3],
}

impl Default for LorenzParams {
    fn default() -> Self {
        LorenzParams {
            sigma: 10.0,
            rho: 28.0,
            beta: 8.0 / 3.0,
            x0: [1.0, 1.0, 1.0],
        }
    }
}

impl LorenzParams {
    fn field(&self, v: [f64; 3]) -> [f64; 3] {
        [
            self.sigma * (v[1] - v[0]),
            v[0] * (self.rho - v[2]) - v[1],
            v[0] * v[1] - self.beta * v[2],
        ]
    }

    /// One classical fourth-order Runge–Kutta step.
    pub fn rk4_step(&self, v: [f64; 3], dt: f64) -> [f64; 3] {
        let axpy = |a: [f64; 3], k: [f64; 3], h: f64| [a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]];
        let k1 = self.field(v);
        let k2 = self.field(axpy(v, k1, 0.5 * dt));
        let k3 = self.field(axpy(v, k2, 0.5 * dt));
        let k4 = self.field(axpy(v, k3, dt));
        std::array::from_fn(|i| v[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }

    /// Full states after each of `steps` RK4 steps.
    pub fn trajectory(&self, dt: f64, steps: usize) -> Result<Vec<[f64; 3]>> {
        let mut v = self.x0;
        let mut out = Vec::with_capacity(steps);
        for step in 0..steps {
            v = self.rk4_step(v, dt);
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::Divergent { step });
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Noisy `x`-coordinate of a fixed-step RK4 Lorenz trajectory, sampled at
/// `dt, 2dt, …, t_max`.
pub fn lorenz_series(
    t_max: f64,
    dt: f64,
    params: &LorenzParams,
    noise_sd: f64,
    seed: u64,
) -> Result<TimeSeries> {
    check_finite("t_max", t_max)?;
    check_finite("dt", dt)?;
    check_noise(noise_sd)?;
    for v in [params.sigma, params.rho, params.beta].into_iter().chain(params.x0) {
        check_finite("lorenz parameter", v)?;
    }
    if dt <= 0.0 {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    let steps = (t_max / dt).round() as usize;
    if steps == 0 {
        return Err(Error::invalid(format!("t_max = {t_max} is shorter than one step of {dt}")));
    }
    let traj = params.trajectory(dt, steps)?;
    let mut rng = rng(seed);
    let values = traj
        .iter()
        .map(|v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v[0] + noise_sd * z
        })
        .collect();
    TimeSeries::new(values, dt)
}
