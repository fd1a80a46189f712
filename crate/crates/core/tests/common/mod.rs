//! Independent oracles shared by the integration tests. None of these reuse
//! library internals: they are deliberately slow and direct.

#![allow(dead_code)]

use fermatph::geometry::PointCloud;
use fermatph::metric::{DistanceMatrix, MetricKind};
use fermatph::persistence::{Bar, PersistenceDiagram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_cloud(g: &mut impl Rng, n: usize, dim: usize) -> PointCloud {
    let coords = (0..n * dim).map(|_| g.random::<f64>()).collect();
    PointCloud::from_flat(coords, dim).unwrap()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// Minimum over every simple path from `s` to `t` of the sum of
/// `|edge|^p`, by depth-first enumeration.
pub fn path_enumeration(cloud: &PointCloud, p: f64, s: usize, t: usize) -> f64 {
    fn go(cloud: &PointCloud, p: f64, at: usize, t: usize, used: &mut Vec<bool>, cost: f64, best: &mut f64) {
        if at == t {
            *best = best.min(cost);
            return;
        }
        for next in 0..cloud.len() {
            if !used[next] {
                used[next] = true;
                let w = euclid(cloud.point(at), cloud.point(next)).powf(p);
                go(cloud, p, next, t, used, cost + w, best);
                used[next] = false;
            }
        }
    }
    if s == t {
        return 0.0;
    }
    let mut used = vec![false; cloud.len()];
    used[s] = true;
    let mut best = f64::INFINITY;
    go(cloud, p, s, t, &mut used, 0.0, &mut best);
    best
}

/// All simplices with at most `max_vertices` vertices and their Rips values,
/// by subset enumeration.
pub fn all_simplices(d: &DistanceMatrix, max_vertices: usize) -> Vec<(Vec<usize>, f64)> {
    let n = d.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if verts.len() > max_vertices {
            continue;
        }
        let mut value: f64 = 0.0;
        for a in 0..verts.len() {
            for b in 0..a {
                value = value.max(d.get(verts[a], verts[b]));
            }
        }
        out.push((verts, value));
    }
    out
}

/// Rank over GF(2) of a set of bit vectors.
fn rank(mut rows: Vec<Vec<bool>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..rows.len()).find(|&i| rows[i][c]) else {
            continue;
        };
        rows.swap(r, pivot);
        for i in 0..rows.len() {
            if i != r && rows[i][c] {
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x ^= y;
                }
            }
        }
        r += 1;
    }
    r
}

/// Basis of the kernel over GF(2) of the linear map whose columns are
/// `columns` (each a bit vector of the codomain).
fn kernel(columns: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let k = columns.len();
    let rows = columns.first().map_or(0, Vec::len);
    // Augment each column with the identity to track combinations.
    let mut aug: Vec<(Vec<bool>, Vec<bool>)> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut id = vec![false; k];
            id[i] = true;
            (c.clone(), id)
        })
        .collect();
    let mut used = vec![false; k];
    for row in 0..rows {
        let Some(p) = (0..k).find(|&i| !used[i] && aug[i].0[row]) else {
            continue;
        };
        used[p] = true;
        let pivot = aug[p].clone();
        for i in 0..k {
            if i != p && aug[i].0[row] {
                for (x, y) in aug[i].0.iter_mut().zip(&pivot.0) {
                    *x ^= y;
                }
                for (x, y) in aug[i].1.iter_mut().zip(&pivot.1) {
                    *x ^= y;
                }
            }
        }
    }
    aug.into_iter().filter(|(c, _)| c.iter().all(|&b| !b)).map(|(_, combo)| combo).collect()
}

/// Persistence diagram of the full Rips filtration of `d` in degrees
/// `0..=max_dim`, from persistent Betti numbers computed by plain rank
/// computations at every pair of critical values.
pub fn naive_rank_diagram(d: &DistanceMatrix, max_dim: usize) -> PersistenceDiagram {
    let simplices = all_simplices(d, max_dim + 2);
    let mut crit: Vec<f64> = simplices.iter().map(|s| s.1).collect();
    crit.sort_by(f64::total_cmp);
    crit.dedup();
    let m = crit.len();
    let mut bars = Vec::new();
    for k in 0..=max_dim {
        let k_simplices: Vec<&(Vec<usize>, f64)> = simplices.iter().filter(|s| s.0.len() == k + 1).collect();
        let up: Vec<&(Vec<usize>, f64)> = simplices.iter().filter(|s| s.0.len() == k + 2).collect();
        let pos = |v: &[usize]| k_simplices.iter().position(|s| s.0 == v).unwrap();
        let boundary = |s: &[usize]| -> Vec<bool> {
            let mut col = vec![false; k_simplices.len()];
            for skip in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(t, _)| t != skip).map(|(_, &v)| v).collect();
                col[pos(&face)] = true;
            }
            col
        };
        // Cycles of K_i, as vectors over all k-simplices.
        let cycles_at = |i: usize| -> Vec<Vec<bool>> {
            let idx: Vec<usize> = (0..k_simplices.len()).filter(|&t| k_simplices[t].1 <= crit[i]).collect();
            if k == 0 {
                return idx
                    .iter()
                    .map(|&t| {
                        let mut v = vec![false; k_simplices.len()];
                        v[t] = true;
                        v
                    })
                    .collect();
            }
            let lower: Vec<&(Vec<usize>, f64)> = simplices.iter().filter(|s| s.0.len() == k).collect();
            let cols: Vec<Vec<bool>> = idx
                .iter()
                .map(|&t| {
                    let s = &k_simplices[t].0;
                    let mut col = vec![false; lower.len()];
                    for skip in 0..s.len() {
                        let face: Vec<usize> =
                            s.iter().enumerate().filter(|&(u, _)| u != skip).map(|(_, &v)| v).collect();
                        col[lower.iter().position(|l| l.0 == face).unwrap()] = true;
                    }
                    col
                })
                .collect();
            kernel(&cols)
                .into_iter()
                .map(|combo| {
                    let mut v = vec![false; k_simplices.len()];
                    for (c, &t) in combo.iter().zip(&idx) {
                        v[t] ^= *c;
                    }
                    v
                })
                .collect()
        };
        let boundaries_at = |j: usize| -> Vec<Vec<bool>> {
            up.iter().filter(|s| s.1 <= crit[j]).map(|s| boundary(&s.0)).collect()
        };
        let beta = |i: isize, j: usize| -> usize {
            if i < 0 {
                return 0;
            }
            let z = cycles_at(i as usize);
            let b = boundaries_at(j);
            let rb = rank(b.clone());
            let mut both = b;
            both.extend(z);
            rank(both) - rb
        };
        for i in 0..m {
            let ii = i as isize;
            for j in i + 1..m {
                let mult = beta(ii, j - 1) as isize - beta(ii, j) as isize - beta(ii - 1, j - 1) as isize
                    + beta(ii - 1, j) as isize;
                for _ in 0..mult {
                    bars.push(Bar {
                        degree: k,
                        birth: crit[i],
                        death: crit[j],
                    });
                }
            }
            let mult = beta(ii, m - 1) as isize - beta(ii - 1, m - 1) as isize;
            for _ in 0..mult {
                bars.push(Bar {
                    degree: k,
                    birth: crit[i],
                    death: f64::INFINITY,
                });
            }
        }
    }
    PersistenceDiagram::new(bars, f64::INFINITY)
}

pub fn linf(a: &Bar, b: &Bar) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

/// Bottleneck distance between finite bar lists by trying every partial
/// injection of `a` into `b`.
pub fn brute_force_bottleneck(a: &[Bar], b: &[Bar]) -> f64 {
    fn go(a: &[Bar], b: &[Bar], i: usize, used: &mut Vec<bool>, cost: f64, best: &mut f64) {
        if cost >= *best {
            return;
        }
        if i == a.len() {
            let rest = b
                .iter()
                .zip(used.iter())
                .filter(|(_, &u)| !u)
                .map(|(y, _)| (y.death - y.birth) / 2.0)
                .fold(cost, f64::max);
            *best = best.min(rest);
            return;
        }
        let diag = (a[i].death - a[i].birth) / 2.0;
        go(a, b, i + 1, used, cost.max(diag), best);
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                go(a, b, i + 1, used, cost.max(linf(&a[i], &b[j])), best);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    go(a, b, 0, &mut vec![false; b.len()], 0.0, &mut best);
    best
}

pub fn matrix_of(cloud: &PointCloud) -> DistanceMatrix {
    DistanceMatrix::from_fn(cloud.len(), MetricKind::Euclidean, |i, j| euclid(cloud.point(i), cloud.point(j))).unwrap()
}
