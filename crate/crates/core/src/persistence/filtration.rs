use std::cmp::Ordering;

use super::{check_threshold, Cutoff};
use crate::metric::DistanceMatrix;
use crate::{Error, Result};

/// A simplex with strictly increasing vertex labels and its filtration value.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationSimplex {
    pub vertices: Vec<usize>,
    pub value: f64,
}

impl FiltrationSimplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// Simplices in filtration order. Homology is reported in degrees
/// `0..=max_dim`, so simplices up to dimension `max_dim + 1` are relevant.
#[derive(Debug, Clone, PartialEq)]
pub struct Filtration {
    pub simplices: Vec<FiltrationSimplex>,
    pub max_dim: usize,
    /// Carried into the diagram; `+∞` for a complete filtration.
    pub threshold: f64,
}

/// Order used for Rips filtrations: value, then dimension, then vertex labels
/// lexicographically.
pub(crate) fn filtration_order(a: &FiltrationSimplex, b: &FiltrationSimplex) -> Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.vertices.len().cmp(&b.vertices.len()))
        .then_with(|| a.vertices.cmp(&b.vertices))
}

/// Every clique of at most `max_dim + 2` vertices whose diameter is below `r`,
/// sorted by [value, dimension, labels]. With `r = +∞` the whole filtration is
/// produced, which requires all entries of `dist` to be finite.
///
/// The number of simplices grows like `n^(max_dim + 2)`; this is meant for
/// small inputs and cross-checks.
pub fn rips_filtration(dist: &DistanceMatrix, max_dim: usize, r: f64) -> Result<Filtration> {
    check_threshold(r)?;
    let n = dist.len();
    if r == f64::INFINITY {
        for i in 0..n {
            for j in 0..i {
                if dist.get(i, j).is_infinite() {
                    return Err(Error::InfiniteDistance(j, i));
                }
            }
        }
    }
    let cutoff = if r.is_infinite() { Cutoff::Upto(r) } else { Cutoff::Below(r) };
    let max_vertices = max_dim + 2;
    let mut simplices = Vec::new();
    let mut stack = Vec::with_capacity(max_vertices);
    for v in 0..n {
        stack.push(v);
        extend(dist, cutoff, max_vertices, &mut stack, 0.0, &mut simplices);
        stack.pop();
    }
    simplices.sort_by(filtration_order);
    Ok(Filtration {
        simplices,
        max_dim,
        threshold: r,
    })
}

fn extend(
    dist: &DistanceMatrix,
    cutoff: Cutoff,
    max_vertices: usize,
    stack: &mut Vec<usize>,
    value: f64,
    out: &mut Vec<FiltrationSimplex>,
) {
    out.push(FiltrationSimplex {
        vertices: stack.clone(),
        value,
    });
    if stack.len() == max_vertices {
        return;
    }
    let last = *stack.last().expect("non-empty");
    for w in last + 1..dist.len() {
        let v = stack.iter().map(|&u| dist.get(u, w)).fold(value, f64::max);
        if cutoff.admits(v) {
            stack.push(w);
            extend(dist, cutoff, max_vertices, stack, v, out);
            stack.pop();
        }
    }
}
