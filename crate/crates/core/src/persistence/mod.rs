//! Vietoris–Rips filtrations and persistent homology over Z/2.
//!
//! Two routes produce the same diagrams:
//!
//! * [`rips_filtration`] + [`persistent_homology`] materialise every simplex
//!   and reduce the boundary matrix, with clearing, from the top dimension
//!   down. This is the reference path and accepts arbitrary filtrations.
//! * [`rips_persistence`] never stores the filtration. It reduces the
//!   coboundary matrix one dimension at a time, enumerating cofacets on demand
//!   from a combinatorial index, which is what makes clouds of a few thousand
//!   points tractable.
//!
//! Degree 0 is always computed with a union–find pass over the edges.

mod cohomology;
mod diagram;
mod filtration;
mod reduction;

pub use cohomology::rips_persistence;
pub use diagram::{h0_mst, salient_bars, Bar, PersistenceDiagram};
pub use filtration::{rips_filtration, Filtration, FiltrationSimplex};
pub use reduction::persistent_homology;

use crate::{Error, Result};

/// Upper end of a truncated filtration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Cutoff {
    /// Simplices with value `< r`.
    Below(f64),
    /// Simplices with value `<= r`.
    Upto(f64),
}

impl Cutoff {
    #[inline]
    pub(crate) fn admits(self, value: f64) -> bool {
        match self {
            Cutoff::Below(r) => value < r,
            Cutoff::Upto(r) => value <= r,
        }
    }
}

pub(crate) fn check_threshold(r: f64) -> Result<()> {
    if r.is_nan() || r <= 0.0 {
        return Err(Error::invalid(format!("filtration threshold must be positive or inf, got {r}")));
    }
    Ok(())
}
