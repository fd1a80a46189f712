use std::collections::VecDeque;

use super::{Matching, Slot};
use crate::persistence::{Bar, PersistenceDiagram};
use crate::{Error, Result};

/// Exact bottleneck distance between the `degree` parts of two diagrams, with
/// an optimal matching.
///
/// Finite bars may be matched to each other at ℓ∞ cost or sent to the diagonal
/// at half their persistence. Essential bars are only matched to essential
/// bars: if the counts differ the distance is `+∞`, otherwise they are paired
/// in order of birth and contribute the largest birth difference.
pub fn bottleneck(a: &PersistenceDiagram, b: &PersistenceDiagram, degree: usize) -> Result<(f64, Matching)> {
    if a.threshold != b.threshold {
        return Err(Error::ThresholdMismatch(a.threshold, b.threshold));
    }
    let split = |d: &PersistenceDiagram| {
        let mut finite = Vec::new();
        let mut essential = Vec::new();
        for (i, bar) in d.bars.iter().enumerate().filter(|(_, bar)| bar.degree == degree) {
            if bar.is_finite() {
                finite.push((i, *bar));
            } else {
                essential.push((i, *bar));
            }
        }
        essential.sort_by(|x, y| x.1.birth.total_cmp(&y.1.birth).then(x.0.cmp(&y.0)));
        (finite, essential)
    };
    let (fa, ea) = split(a);
    let (fb, eb) = split(b);

    let (mut cost, mut pairs) = essential_part(&ea, &eb);
    let (finite_cost, finite_pairs) = finite_part(&fa, &fb);
    cost = cost.max(finite_cost);
    pairs.extend(finite_pairs);
    Ok((cost, Matching { pairs, cost }))
}

fn essential_part(ea: &[(usize, Bar)], eb: &[(usize, Bar)]) -> (f64, Vec<(Slot, Slot)>) {
    let mut pairs: Vec<(Slot, Slot)> = ea
        .iter()
        .zip(eb)
        .map(|(x, y)| (Slot::Bar(x.0), Slot::Bar(y.0)))
        .collect();
    let mut cost = ea
        .iter()
        .zip(eb)
        .map(|(x, y)| (x.1.birth - y.1.birth).abs())
        .fold(0.0, f64::max);
    if ea.len() != eb.len() {
        cost = f64::INFINITY;
        pairs.extend(ea.iter().skip(eb.len()).map(|x| (Slot::Bar(x.0), Slot::Diagonal)));
        pairs.extend(eb.iter().skip(ea.len()).map(|y| (Slot::Diagonal, Slot::Bar(y.0))));
    }
    (cost, pairs)
}

pub(crate) fn linf(x: &Bar, y: &Bar) -> f64 {
    (x.birth - y.birth).abs().max((x.death - y.death).abs())
}

pub(crate) fn to_diagonal(x: &Bar) -> f64 {
    (x.death - x.birth) / 2.0
}

/// Bipartite graph whose perfect matchings are the partial matchings of two
/// finite diagrams. Left vertices are the bars of `a` followed by diagonal
/// copies of the bars of `b`; right vertices are the bars of `b` followed by
/// diagonal copies of the bars of `a`.
struct Graph<'a> {
    a: &'a [(usize, Bar)],
    b: &'a [(usize, Bar)],
}

impl Graph<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    /// Cost of joining left `u` to right `v`, `None` when there is no edge.
    fn cost(&self, u: usize, v: usize) -> Option<f64> {
        let (m, k) = (self.a.len(), self.b.len());
        match (u < m, v < k) {
            (true, true) => Some(linf(&self.a[u].1, &self.b[v].1)),
            (true, false) => (v - k == u).then(|| to_diagonal(&self.a[u].1)),
            (false, true) => (u - m == v).then(|| to_diagonal(&self.b[v].1)),
            (false, false) => Some(0.0),
        }
    }

    fn adjacency(&self, t: f64) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n)
            .map(|u| (0..n).filter(|&v| self.cost(u, v).is_some_and(|c| c <= t)).collect())
            .collect()
    }
}

fn finite_part(fa: &[(usize, Bar)], fb: &[(usize, Bar)]) -> (f64, Vec<(Slot, Slot)>) {
    let g = Graph { a: fa, b: fb };
    let n = g.size();
    if n == 0 {
        return (0.0, Vec::new());
    }
    let mut candidates: Vec<f64> = Vec::with_capacity(fa.len() * fb.len() + n + 1);
    candidates.push(0.0);
    for (_, x) in fa {
        candidates.push(to_diagonal(x));
        candidates.extend(fb.iter().map(|(_, y)| linf(x, y)));
    }
    candidates.extend(fb.iter().map(|(_, y)| to_diagonal(y)));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Sending everything to the diagonal is always feasible, so the largest
    // candidate works.
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    let mut best = hopcroft_karp(&g.adjacency(candidates[hi]));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        let m = hopcroft_karp(&g.adjacency(candidates[mid]));
        if m.iter().all(Option::is_some) {
            hi = mid;
            best = m;
        } else {
            lo = mid + 1;
        }
    }

    let mut pairs = Vec::new();
    let mut cost: f64 = 0.0;
    let (m, k) = (fa.len(), fb.len());
    for (u, v) in best.iter().enumerate() {
        let v = v.expect("perfect matching");
        let c = g.cost(u, v).expect("matched along an edge");
        let slot = match (u < m, v < k) {
            (true, true) => Some((Slot::Bar(fa[u].0), Slot::Bar(fb[v].0))),
            (true, false) => Some((Slot::Bar(fa[u].0), Slot::Diagonal)),
            (false, true) => Some((Slot::Diagonal, Slot::Bar(fb[v].0))),
            (false, false) => None,
        };
        if let Some(s) = slot {
            pairs.push(s);
            cost = cost.max(c);
        }
    }
    (cost, pairs)
}

/// Maximum matching of a bipartite graph with equally sized sides; entry `u`
/// is the right vertex matched to left vertex `u`.
fn hopcroft_karp(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut match_left: Vec<Option<usize>> = vec![None; n];
    let mut match_right: Vec<Option<usize>> = vec![None; n];
    let mut layer = vec![usize::MAX; n];
    loop {
        // Layer the free left vertices and everything reachable by
        // alternating paths.
        let mut queue = VecDeque::new();
        for u in 0..n {
            if match_left[u].is_none() {
                layer[u] = 0;
                queue.push_back(u);
            } else {
                layer[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                match match_right[v] {
                    None => found = true,
                    Some(w) if layer[w] == usize::MAX => {
                        layer[w] = layer[u] + 1;
                        queue.push_back(w);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return match_left;
        }
        let mut next = vec![0usize; n];
        for u in 0..n {
            if match_left[u].is_none() {
                augment(u, adj, &mut layer, &mut next, &mut match_left, &mut match_right);
            }
        }
    }
}

fn augment(
    u: usize,
    adj: &[Vec<usize>],
    layer: &mut [usize],
    next: &mut [usize],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    while next[u] < adj[u].len() {
        let v = adj[u][next[u]];
        next[u] += 1;
        let ok = match match_right[v] {
            None => true,
            Some(w) => layer[w] == layer[u] + 1 && augment(w, adj, layer, next, match_left, match_right),
        };
        if ok {
            match_left[u] = Some(v);
            match_right[v] = Some(u);
            return true;
        }
    }
    layer[u] = usize::MAX;
    false
}
