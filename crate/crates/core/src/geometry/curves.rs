use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_noise, rng, PointCloud, TimeSeries};
use crate::{Error, Result};

fn add_noise(coords: &mut [f64], noise_sd: f64, rng: &mut ChaCha8Rng) {
    if noise_sd > 0.0 {
        for c in coords {
            let z: f64 = StandardNormal.sample(rng);
            *c += noise_sd * z;
        }
    }
}

/// Planar "eyeglasses" curve: the outer arcs of two circles of equal radius
/// centred at `(±c, 0)`, joined by the horizontal segments `y = ±neck_gap/2`.
///
/// The segments meet each circle where the line `y = ±neck_gap/2` crosses it,
/// so the narrowest part of the curve (the neck) has width `neck_gap`, which is
/// twice the reach of the neck region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eyeglasses {
    pub radius: f64,
    pub neck_gap: f64,
    /// Length of each horizontal segment.
    pub bridge: f64,
}

impl Default for Eyeglasses {
    fn default() -> Self {
        Eyeglasses {
            radius: 1.0,
            neck_gap: 1.0,
            bridge: 1.0,
        }
    }
}

impl Eyeglasses {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("radius", self.radius), ("neck_gap", self.neck_gap), ("bridge", self.bridge)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("eyeglasses {name} must be positive, got {v}")));
            }
        }
        if self.neck_gap >= 2.0 * self.radius {
            return Err(Error::invalid("eyeglasses neck_gap must be smaller than the lens diameter"));
        }
        Ok(())
    }

    fn half_gap(&self) -> f64 {
        0.5 * self.neck_gap
    }

    /// Half-angle of the inner arc that each lens loses to the bridge.
    fn cut_angle(&self) -> f64 {
        (self.half_gap() / self.radius).asin()
    }

    /// Horizontal offset of each lens centre.
    pub fn center_offset(&self) -> f64 {
        0.5 * self.bridge + self.radius * self.cut_angle().cos()
    }

    fn arc_length(&self) -> f64 {
        2.0 * (PI - self.cut_angle()) * self.radius
    }

    pub fn length(&self) -> f64 {
        2.0 * self.arc_length() + 2.0 * self.bridge
    }

    /// Point at arclength `s ∈ [0, length)`.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let (r, c, h) = (self.radius, self.center_offset(), self.half_gap());
        let alpha = self.cut_angle();
        let arc = self.arc_length();
        let half_bridge = 0.5 * self.bridge;
        if s < arc {
            // right lens, counter-clockwise from the lower junction
            let phi = -(PI - alpha) + s / r;
            [c + r * phi.cos(), r * phi.sin()]
        } else if s < arc + self.bridge {
            [half_bridge - (s - arc), h]
        } else if s < 2.0 * arc + self.bridge {
            // left lens, counter-clockwise from the upper junction
            let phi = alpha + (s - arc - self.bridge) / r;
            [-c + r * phi.cos(), r * phi.sin()]
        } else {
            [-half_bridge + (s - 2.0 * arc - self.bridge), -h]
        }
    }

    /// Euclidean distance from `p` to the curve.
    pub fn distance_to_curve(&self, p: [f64; 2]) -> f64 {
        let (r, c, h) = (self.radius, self.center_offset(), self.half_gap());
        let alpha = self.cut_angle();
        let half_bridge = 0.5 * self.bridge;
        let arc_dist = |cx: f64, keep: &dyn Fn(f64) -> bool| {
            let (dx, dy) = (p[0] - cx, p[1]);
            let phi = dy.atan2(dx);
            if keep(phi) {
                ((dx * dx + dy * dy).sqrt() - r).abs()
            } else {
                // nearest arc end is one of the junctions
                let ends = [
                    [cx + r * (PI - alpha).cos() * cx.signum(), h],
                    [cx + r * (PI - alpha).cos() * cx.signum(), -h],
                ];
                ends.iter()
                    .map(|e| ((p[0] - e[0]).powi(2) + (p[1] - e[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            }
        };
        let right = arc_dist(c, &|phi: f64| phi.abs() <= PI - alpha);
        let left = arc_dist(-c, &|phi: f64| phi.abs() >= alpha);
        let seg = |y: f64| {
            let x = p[0].clamp(-half_bridge, half_bridge);
            ((p[0] - x).powi(2) + (p[1] - y).powi(2)).sqrt()
        };
        right.min(left).min(seg(h)).min(seg(-h))
    }
}

/// `n` points drawn uniformly by arclength from `shape`, plus isotropic
/// Gaussian noise.
pub fn gen_eyeglasses(n: usize, noise_sd: f64, seed: u64, shape: &Eyeglasses) -> Result<PointCloud> {
    if n < 10 {
        return Err(Error::invalid(format!("eyeglasses needs n >= 10, got {n}")));
    }
    check_noise(noise_sd)?;
    shape.validate()?;
    let mut rng = rng(seed);
    let length = shape.length();
    let mut coords = Vec::with_capacity(2 * n);
    for _ in 0..n {
        let s = rng.random::<f64>() * length;
        coords.extend_from_slice(&shape.point_at(s));
    }
    add_noise(&mut coords, noise_sd, &mut rng);
    Ok(PointCloud::from_flat(coords, 2)?.with_meta("eyeglasses", seed))
}

pub fn trefoil_point(t: f64) -> [f64; 3] {
    [
        t.sin() + 2.0 * (2.0 * t).sin(),
        t.cos() - 2.0 * (2.0 * t).cos(),
        -(3.0 * t).sin(),
    ]
}

/// `n` trefoil points at equally spaced parameters `2π(i + u)/n`, with a
/// seeded phase `u ∈ [0, 1)`, plus Gaussian noise.
pub fn gen_trefoil(n: usize, noise_sd: f64, seed: u64) -> Result<PointCloud> {
    if n < 10 {
        return Err(Error::invalid(format!("trefoil needs n >= 10, got {n}")));
    }
    check_noise(noise_sd)?;
    let mut rng = rng(seed);
    let phase: f64 = rng.random();
    let mut coords = Vec::with_capacity(3 * n);
    for i in 0..n {
        let t = TAU * (i as f64 + phase) / n as f64;
        coords.extend_from_slice(&trefoil_point(t));
    }
    add_noise(&mut coords, noise_sd, &mut rng);
    Ok(PointCloud::from_flat(coords, 3)?.with_meta("trefoil", seed))
}

/// Closed manifolds with a known geodesic distance, sampled uniformly with
/// respect to their volume measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manifold {
    /// Unit circle in `R^2`.
    Circle,
    /// Unit sphere in `R^3`.
    Sphere,
    /// Product of two unit circles in `R^4`.
    FlatTorus,
}

impl Manifold {
    pub fn name(&self) -> &'static str {
        match self {
            Manifold::Circle => "circle",
            Manifold::Sphere => "sphere",
            Manifold::FlatTorus => "flat_torus",
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Manifold::Circle => 2,
            Manifold::Sphere => 3,
            Manifold::FlatTorus => 4,
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match self {
            Manifold::Circle => 1,
            Manifold::Sphere | Manifold::FlatTorus => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self {
            Manifold::Circle => TAU,
            Manifold::Sphere => 4.0 * PI,
            Manifold::FlatTorus => TAU * TAU,
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Manifold::Circle | Manifold::Sphere => PI,
            Manifold::FlatTorus => PI * 2f64.sqrt(),
        }
    }

    /// Geodesic distance between two points, measured on their radial
    /// projections (so noisy samples are accepted).
    pub fn geodesic(&self, x: &[f64], y: &[f64]) -> f64 {
        fn angle_between(a: (f64, f64), b: (f64, f64)) -> f64 {
            let d = (b.1.atan2(b.0) - a.1.atan2(a.0)).abs() % TAU;
            d.min(TAU - d)
        }
        match self {
            Manifold::Circle => angle_between((x[0], x[1]), (y[0], y[1])),
            Manifold::Sphere => {
                let dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
                let cross = [
                    x[1] * y[2] - x[2] * y[1],
                    x[2] * y[0] - x[0] * y[2],
                    x[0] * y[1] - x[1] * y[0],
                ];
                let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
                cn.atan2(dot)
            }
            Manifold::FlatTorus => {
                let a = angle_between((x[0], x[1]), (y[0], y[1]));
                let b = angle_between((x[2], x[3]), (y[2], y[3]));
                a.hypot(b)
            }
        }
    }

    /// Population Fermat distance for the uniform density on this manifold:
    /// `f = 1/vol` is constant, so the conformal factor `f^{-(p-1)/d}` simply
    /// rescales the geodesic distance.
    pub fn population_fermat(&self, x: &[f64], y: &[f64], p: f64) -> f64 {
        let d = self.intrinsic_dim() as f64;
        self.volume().powf((p - 1.0) / d) * self.geodesic(x, y)
    }
}

impl std::str::FromStr for Manifold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Manifold::Circle),
            "sphere" => Ok(Manifold::Sphere),
            "flat_torus" | "flat-torus" | "torus" => Ok(Manifold::FlatTorus),
            other => Err(Error::invalid(format!("unknown manifold `{other}`"))),
        }
    }
}

pub fn gen_uniform_manifold(kind: Manifold, n: usize, noise_sd: f64, seed: u64) -> Result<PointCloud> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    check_noise(noise_sd)?;
    let mut rng = rng(seed);
    let mut coords = Vec::with_capacity(kind.ambient_dim() * n);
    for _ in 0..n {
        match kind {
            Manifold::Circle => {
                let a = rng.random::<f64>() * TAU;
                coords.extend_from_slice(&[a.cos(), a.sin()]);
            }
            Manifold::Sphere => loop {
                let v: [f64; 3] = [
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                ];
                let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if norm > 1e-12 {
                    coords.extend(v.iter().map(|c| c / norm));
                    break;
                }
            },
            Manifold::FlatTorus => {
                let a = rng.random::<f64>() * TAU;
                let b = rng.random::<f64>() * TAU;
                coords.extend_from_slice(&[a.cos(), a.sin(), b.cos(), b.sin()]);
            }
        }
    }
    add_noise(&mut coords, noise_sd, &mut rng);
    Ok(PointCloud::from_flat(coords, kind.ambient_dim())?.with_meta(kind.name(), seed))
}

/// Sine of period `period` samples that switches to twice the frequency at
/// sample `switch_at`, with continuous phase and additive Gaussian noise.
pub fn sine_switch_series(
    n: usize,
    period: f64,
    switch_at: usize,
    noise_sd: f64,
    dt: f64,
    seed: u64,
) -> Result<TimeSeries> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::invalid(format!("period must be positive, got {period}")));
    }
    check_noise(noise_sd)?;
    let mut rng = rng(seed);
    let mut phase: f64 = 0.0;
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let z: f64 = StandardNormal.sample(&mut rng);
        values.push(phase.sin() + noise_sd * z);
        phase += if i + 1 < switch_at { TAU / period } else { 2.0 * TAU / period };
    }
    TimeSeries::new(values, dt)
}
