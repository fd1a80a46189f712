//! Spacing statistics of finite sets: minimal spacing, outlier gap and the
//! connectivity threshold of the ε-graph.

use super::{euclidean, DistanceMatrix};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// `κ(Y) = min_y d(y, Y \ {y})`; `+∞` for a single point.
pub fn minimal_spacing(y: &PointCloud) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..y.len() {
        for j in 0..i {
            best = best.min(euclidean(y.point(i), y.point(j)));
        }
    }
    best
}

/// Euclidean distance between two sets.
pub fn cross_distance(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    if x.ambient_dim() != y.ambient_dim() {
        return Err(Error::SizeMismatch(x.ambient_dim(), y.ambient_dim()));
    }
    Ok(x.points()
        .flat_map(|a| y.points().map(move |b| euclidean(a, b)))
        .fold(f64::INFINITY, f64::min))
}

/// `δ = min{κ(Y), d(X, Y)}`.
pub fn outlier_delta(x: &PointCloud, y: &PointCloud) -> Result<f64> {
    Ok(minimal_spacing(y).min(cross_distance(x, y)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// Prim's algorithm on the complete graph with weights `weight(i, j)`, in
/// `O(n²)`. Edges are returned in the order they were added.
pub fn prim_mst(n: usize, weight: impl Fn(usize, usize) -> f64) -> Vec<MstEdge> {
    if n == 0 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    in_tree[0] = true;
    for v in 1..n {
        best[v] = weight(0, v);
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let mut u = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (u == usize::MAX || best[v] < best[u]) {
                u = v;
            }
        }
        in_tree[u] = true;
        edges.push(MstEdge {
            u: parent[u],
            v: u,
            weight: best[u],
        });
        for v in 0..n {
            if !in_tree[v] {
                let w = weight(u, v);
                if w < best[v] {
                    best[v] = w;
                    parent[v] = u;
                }
            }
        }
    }
    edges
}

/// Longest edge of the Euclidean minimum spanning tree, `0` for one point.
///
/// The ε-graph joins points at distance strictly below ε, so it is connected
/// exactly when ε exceeds this value. Outliers are therefore geometric when
/// `δ > epsilon_star`, with a strict comparison.
pub fn epsilon_star(x: &PointCloud) -> f64 {
    prim_mst(x.len(), |i, j| euclidean(x.point(i), x.point(j)))
        .iter()
        .map(|e| e.weight)
        .fold(0.0, f64::max)
}

impl DistanceMatrix {
    pub fn mst(&self) -> Vec<MstEdge> {
        prim_mst(self.len(), |i, j| self.get(i, j))
    }
}
