//! Point clouds, sampled signals and the deterministic generators that produce
//! them.
//!
//! Every generator is a pure function of its parameters and a `u64` seed. The
//! seed drives a ChaCha8 stream (see [`rng`]), so outputs are bitwise
//! identical across runs, thread counts and platforms.

mod curves;
mod io;
mod lorenz;
mod outliers;

pub use curves::{
    gen_eyeglasses, gen_trefoil, gen_uniform_manifold, sine_switch_series, trefoil_point, Eyeglasses,
    Manifold,
};
pub use lorenz::{lorenz_series, LorenzParams};
pub use outliers::{gen_outliers, OutlierParams};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Seeded generator used by every sampler in the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Where a cloud came from.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CloudMeta {
    pub generator: String,
    pub seed: Option<u64>,
}

/// `n` points in `R^D`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    coords: Vec<f64>,
    dim: usize,
    pub meta: CloudMeta,
}

impl PointCloud {
    /// Builds a cloud from rows. All rows must have the same positive length
    /// and finite entries.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::invalid("point cloud must contain at least one point"))?;
        let dim = first.as_ref().len();
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::invalid(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            coords.extend_from_slice(row);
        }
        Self::from_flat(coords, dim)
    }

    pub fn from_flat(coords: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("ambient dimension must be positive"));
        }
        if coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::invalid(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "non-finite coordinate in point {}",
                pos / dim
            )));
        }
        Ok(PointCloud {
            coords,
            dim,
            meta: CloudMeta::default(),
        })
    }

    pub(crate) fn with_meta(mut self, generator: &str, seed: u64) -> Self {
        self.meta = CloudMeta {
            generator: generator.to_string(),
            seed: Some(seed),
        };
        self
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Points of `self` followed by the points of `other`.
    pub fn concat(&self, other: &PointCloud) -> Result<PointCloud> {
        if self.dim != other.dim {
            return Err(Error::invalid(format!(
                "cannot join clouds of dimension {} and {}",
                self.dim, other.dim
            )));
        }
        let mut coords = self.coords.clone();
        coords.extend_from_slice(&other.coords);
        Ok(PointCloud {
            coords,
            dim: self.dim,
            meta: self.meta.clone(),
        })
    }

    /// Keeps the points at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Result<PointCloud> {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        let mut out = Self::from_flat(coords, self.dim)?;
        out.meta = self.meta.clone();
        Ok(out)
    }

    /// Per-axis `(min, max)`.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        (0..self.dim)
            .map(|k| {
                self.points().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[k]), hi.max(p[k]))
                })
            })
            .collect()
    }
}

/// Uniformly sampled scalar signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    dt: f64,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::invalid(format!("sampling step must be positive, got {dt}")));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        Ok(TimeSeries { values, dt })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {x}")))
    }
}

pub(crate) fn check_noise(noise_sd: f64) -> Result<()> {
    check_finite("noise_sd", noise_sd)?;
    if noise_sd < 0.0 {
        return Err(Error::invalid(format!("noise_sd must be non-negative, got {noise_sd}")));
    }
    Ok(())
}
