use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::{euclidean, DistanceMatrix, MetricKind};
use crate::geometry::PointCloud;
use crate::{Error, Result};

/// Symmetric k-nearest-neighbour graph: `x ~ y` when either is among the `k`
/// nearest neighbours of the other. Edges carry Euclidean lengths; ties in the
/// neighbour ranking go to the smaller index.
pub fn knn_graph(cloud: &PointCloud, k: usize) -> Result<Vec<Vec<(usize, f64)>>> {
    let n = cloud.len();
    if k == 0 || k >= n {
        return Err(Error::invalid(format!("k must satisfy 1 <= k < n = {n}, got {k}")));
    }
    let nearest: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut others: Vec<(usize, f64)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (j, euclidean(cloud.point(i), cloud.point(j))))
                .collect();
            others.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
            others.truncate(k);
            others
        })
        .collect();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (i, list) in nearest.iter().enumerate() {
        for &(j, len) in list {
            adj[i].push((j, len));
            adj[j].push((i, len));
        }
    }
    for list in &mut adj {
        list.sort_by_key(|e| e.0);
        list.dedup_by_key(|e| e.0);
    }
    Ok(adj)
}

#[derive(PartialEq)]
struct Frontier(f64, usize);

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Heap-based Dijkstra on an adjacency list; unreachable vertices get `+∞`.
pub(crate) fn sparse_dijkstra(adj: &[Vec<(usize, f64)>], source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier(0.0, source));
    while let Some(Frontier(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let cand = d + w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(Frontier(cand, v));
            }
        }
    }
    dist
}

/// Shortest-path distance on the symmetric k-NN graph (the Isomap estimator
/// of geodesic distance). Disconnected pairs are `+∞`.
pub fn knn_matrix(cloud: &PointCloud, k: usize) -> Result<DistanceMatrix> {
    let graph = knn_graph(cloud, k)?;
    let rows: Vec<Vec<f64>> = (0..cloud.len())
        .into_par_iter()
        .map(|s| sparse_dijkstra(&graph, s))
        .collect();
    DistanceMatrix::from_rows(&rows, MetricKind::Knn { k })
}
