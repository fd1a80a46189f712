//! Implicit coboundary reduction for Rips filtrations.
//!
//! Simplices are named by their index in the combinatorial number system:
//! vertices `v_k > … > v_0` map to `Σ C(v_i, i + 1)`. Filtration order is
//! diameter ascending with larger indices first among equal diameters;
//! columns are reduced in the opposite order. Cofacets are generated on the
//! fly in decreasing index order, so the first cofacet with the same diameter
//! as its simplex is the pivot candidate, and when nobody owns that pivot yet
//! the pair is recorded without touching the rest of the column.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::hash::{BuildHasherDefault, Hasher};

use super::{check_threshold, Bar, Cutoff, PersistenceDiagram};
use crate::metric::DistanceMatrix;
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Persistent homology of the Rips filtration of `dist` in degrees
/// `0..=max_dim`, keeping simplices with diameter `< r`.
///
/// For `r = +∞`, or any `r` above the enclosing radius, the filtration is cut
/// at the enclosing radius instead: past that scale the complex is a cone and
/// nothing changes, so the diagram is the same. The diagram still carries `r`
/// as its threshold. Infinite entries are allowed only outside that range.
pub fn rips_persistence(dist: &DistanceMatrix, max_dim: usize, r: f64) -> Result<PersistenceDiagram> {
    check_threshold(r)?;
    let n = dist.len();
    let radius = dist.enclosing_radius();
    let cutoff = if r > radius || r.is_infinite() {
        if radius.is_infinite() {
            let (i, j) = first_infinite(dist).expect("infinite radius implies an infinite entry");
            return Err(Error::InfiniteDistance(i, j));
        }
        Cutoff::Upto(radius)
    } else {
        Cutoff::Below(r)
    };
    if n == 0 {
        return Ok(PersistenceDiagram::new(Vec::new(), r));
    }
    let rips = Rips::new(dist, max_dim, cutoff);
    let mut bars = Vec::new();
    let (edges, mut columns) = rips.dim0(&mut bars);
    let mut simplices = edges;
    for dim in 1..=max_dim {
        let mut pivots = PivotMap::default();
        rips.reduce(&columns, dim, &mut pivots, &mut bars);
        if dim < max_dim {
            simplices = rips.next_simplices(&simplices, dim);
            columns = simplices
                .iter()
                .filter(|e| !pivots.contains_key(&e.idx))
                .copied()
                .collect();
            columns.sort();
        }
    }
    Ok(PersistenceDiagram::new(bars, r))
}

fn first_infinite(dist: &DistanceMatrix) -> Option<(usize, usize)> {
    (0..dist.len()).find_map(|i| (0..i).find(|&j| dist.get(i, j).is_infinite()).map(|j| (j, i)))
}

/// A simplex index with its diameter.
///
/// `Ord` puts later filtration entries first: larger diameter, then smaller
/// index. A max-heap of entries therefore pops the earliest simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    diam: f64,
    idx: u64,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.diam.total_cmp(&self.diam).then(self.idx.cmp(&other.idx))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Simplex indices are already well spread; a multiplicative mix is enough.
#[derive(Default)]
struct IndexHasher(u64);

impl Hasher for IndexHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u64(&mut self, x: u64) {
        self.0 = (x ^ (x >> 29)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        self.0 ^= self.0 >> 32;
    }
}

type PivotMap = HashMap<u64, usize, BuildHasherDefault<IndexHasher>>;

struct Binomial {
    stride: usize,
    table: Vec<u64>,
}

impl Binomial {
    /// `C(v, k)` for `v <= n`, `k <= max_k`.
    fn new(n: usize, max_k: usize) -> Self {
        let stride = max_k + 1;
        let mut table = vec![0u64; (n + 1) * stride];
        for v in 0..=n {
            table[v * stride] = 1;
            for k in 1..=max_k.min(v) {
                let above = if k < v { table[(v - 1) * stride + k] } else { 0 };
                table[v * stride + k] = table[(v - 1) * stride + k - 1] + above;
            }
        }
        Binomial { stride, table }
    }

    #[inline]
    fn get(&self, v: usize, k: usize) -> u64 {
        self.table[v * self.stride + k]
    }
}

struct Rips {
    n: usize,
    dist: Vec<f64>,
    binom: Binomial,
    cutoff: Cutoff,
}

impl Rips {
    fn new(d: &DistanceMatrix, max_dim: usize, cutoff: Cutoff) -> Self {
        let n = d.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let v = d.get(i, j);
                dist[i * n + j] = v;
                dist[j * n + i] = v;
            }
        }
        Rips {
            n,
            dist,
            binom: Binomial::new(n, max_dim + 2),
            cutoff,
        }
    }

    #[inline]
    fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// Vertices of the `dim`-simplex `idx`, largest first.
    fn vertices(&self, mut idx: u64, dim: usize, out: &mut Vec<usize>) {
        out.clear();
        let mut hi = self.n;
        for k in (1..=dim + 1).rev() {
            // Largest v < hi with C(v, k) <= idx.
            let (mut lo, mut top) = (k - 1, hi - 1);
            while lo < top {
                let mid = top - (top - lo) / 2;
                if self.binom.get(mid, k) <= idx {
                    lo = mid;
                } else {
                    top = mid - 1;
                }
            }
            out.push(lo);
            idx -= self.binom.get(lo, k);
            hi = lo;
        }
    }

    /// Union–find over the admissible edges. Pushes degree-0 bars and returns
    /// all edges plus the edges that close a cycle, both ready for use in
    /// dimension 1 (the latter in reduction order).
    fn dim0(&self, bars: &mut Vec<Bar>) -> (Vec<Entry>, Vec<Entry>) {
        let n = self.n;
        let mut edges = Vec::new();
        for i in 1..n {
            for j in 0..i {
                let diam = self.d(i, j);
                if self.cutoff.admits(diam) {
                    edges.push(Entry {
                        diam,
                        idx: self.binom.get(i, 2) + j as u64,
                    });
                }
            }
        }
        // Filtration order is the reverse of `Entry`'s.
        edges.sort_by(|a, b| b.cmp(a));
        let mut uf = UnionFind::new(n);
        let mut cycles = Vec::new();
        let mut verts = Vec::with_capacity(2);
        for e in &edges {
            self.vertices(e.idx, 1, &mut verts);
            let (ru, rv) = (uf.find(verts[0]), uf.find(verts[1]));
            if ru != rv {
                // All vertices are born at 0, so which root survives does not
                // affect the diagram; keep the smaller label.
                let (elder, younger) = if ru < rv { (ru, rv) } else { (rv, ru) };
                uf.link(younger, elder);
                bars.push(Bar {
                    degree: 0,
                    birth: 0.0,
                    death: e.diam,
                });
            } else {
                cycles.push(*e);
            }
        }
        for v in 0..n {
            if uf.find(v) == v {
                bars.push(Bar {
                    degree: 0,
                    birth: 0.0,
                    death: f64::INFINITY,
                });
            }
        }
        cycles.reverse();
        (edges, cycles)
    }

    /// Admissible cofacets of `s` in decreasing index order. With
    /// `only_larger`, only cofacets whose new vertex exceeds every vertex of
    /// `s`, so that each simplex is produced from exactly one facet.
    fn cofacets(&self, s: Entry, dim: usize, only_larger: bool, verts: &mut Vec<usize>, out: &mut Vec<Entry>) {
        self.vertices(s.idx, dim, verts);
        // Walking v downwards: `idx_below` sums the terms of the vertices of s
        // below v (their positions are unchanged in the cofacet), `idx_above`
        // those above v shifted up one position, and `k` counts the former.
        let mut idx_below = s.idx;
        let mut idx_above = 0u64;
        let mut k = dim + 1;
        let mut next = 0;
        for v in (0..self.n).rev() {
            if next < verts.len() && verts[next] == v {
                idx_below -= self.binom.get(v, k);
                idx_above += self.binom.get(v, k + 1);
                k -= 1;
                next += 1;
                if only_larger {
                    return;
                }
                continue;
            }
            let diam = verts.iter().map(|&u| self.d(u, v)).fold(s.diam, f64::max);
            if self.cutoff.admits(diam) {
                out.push(Entry {
                    diam,
                    idx: idx_above + self.binom.get(v, k + 1) + idx_below,
                });
            }
        }
    }

    fn next_simplices(&self, simplices: &[Entry], dim: usize) -> Vec<Entry> {
        let mut verts = Vec::new();
        let mut out = Vec::new();
        for &s in simplices {
            self.cofacets(s, dim, true, &mut verts, &mut out);
        }
        out
    }

    /// Reduces the coboundary columns of the `dim`-simplices in `columns`
    /// (given in reduction order), pushing degree-`dim` bars.
    fn reduce(&self, columns: &[Entry], dim: usize, pivots: &mut PivotMap, bars: &mut Vec<Bar>) {
        let mut reduction: Vec<Vec<Entry>> = Vec::with_capacity(columns.len());
        let mut verts = Vec::new();
        let mut scratch = Vec::new();
        let mut working: BinaryHeap<Entry> = BinaryHeap::new();
        let mut working_v: BinaryHeap<Entry> = BinaryHeap::new();

        for (col, &sigma) in columns.iter().enumerate() {
            working.clear();
            working_v.clear();
            scratch.clear();
            self.cofacets(sigma, dim, false, &mut verts, &mut scratch);

            // Cofacets arrive in decreasing index order, so the first one with
            // sigma's diameter is the earliest entry of the column.
            let emergent = scratch.iter().find(|c| c.diam == sigma.diam).copied();
            let mut pivot = match emergent {
                Some(c) if !pivots.contains_key(&c.idx) => Some(c),
                _ => {
                    working.extend(scratch.iter().copied());
                    pop_pivot(&mut working).inspect(|&p| working.push(p))
                }
            };

            loop {
                let Some(p) = pivot else {
                    bars.push(Bar {
                        degree: dim,
                        birth: sigma.diam,
                        death: f64::INFINITY,
                    });
                    reduction.push(Vec::new());
                    break;
                };
                match pivots.get(&p.idx) {
                    Some(&other) => {
                        let other_sigma = columns[other];
                        for &s in std::iter::once(&other_sigma).chain(&reduction[other]) {
                            working_v.push(s);
                            scratch.clear();
                            self.cofacets(s, dim, false, &mut verts, &mut scratch);
                            working.extend(scratch.iter().copied());
                        }
                        pivot = pop_pivot(&mut working).inspect(|&p| working.push(p));
                    }
                    None => {
                        bars.push(Bar {
                            degree: dim,
                            birth: sigma.diam,
                            death: p.diam,
                        });
                        pivots.insert(p.idx, col);
                        let mut stored = Vec::new();
                        while let Some(e) = pop_pivot(&mut working_v) {
                            stored.push(e);
                        }
                        reduction.push(stored);
                        break;
                    }
                }
            }
        }
    }
}

/// Pops the earliest entry that survives mod-2 cancellation.
fn pop_pivot(heap: &mut BinaryHeap<Entry>) -> Option<Entry> {
    while let Some(top) = heap.pop() {
        match heap.peek() {
            Some(next) if next.idx == top.idx => {
                heap.pop();
            }
            _ => return Some(top),
        }
    }
    None
}
