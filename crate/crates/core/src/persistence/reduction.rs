use std::collections::HashMap;

use super::{check_threshold, Bar, Filtration, PersistenceDiagram};
use crate::union_find::UnionFind;
use crate::{Error, Result};

/// Persistent homology of an explicit filtration in degrees `0..=max_dim`.
///
/// Simplices must have strictly increasing vertex labels, appear in
/// non-decreasing value order, and come after all of their faces. Simplices of
/// dimension above `max_dim + 1` are ignored.
///
/// Degree 0 uses union–find with the elder rule, ties going to the vertex that
/// appears first. Higher degrees reduce the boundary matrix column by column,
/// starting from the top dimension so that columns already known to vanish
/// can be skipped.
pub fn persistent_homology(f: &Filtration) -> Result<PersistenceDiagram> {
    check_threshold(f.threshold)?;
    let top = f.max_dim + 1;
    let boundaries = validate(f)?;
    let simplices = &f.simplices;
    let value = |i: usize| simplices[i].value;
    let dim_of = |i: usize| simplices[i].vertices.len() - 1;

    let mut bars = Vec::new();
    let mut negative = vec![false; simplices.len()];
    // Simplex at position `low` is the pivot of the column at position `col`.
    let mut paired_with: HashMap<usize, usize> = HashMap::new();

    for k in (2..=top).rev() {
        let mut pivot_col: HashMap<usize, Vec<usize>> = HashMap::new();
        for j in (0..simplices.len()).filter(|&j| dim_of(j) == k) {
            if paired_with.contains_key(&j) {
                continue;
            }
            let mut col = boundaries[j].clone();
            while let Some(&low) = col.last() {
                match pivot_col.get(&low) {
                    Some(other) => col = symmetric_difference(&col, other),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                negative[j] = true;
                paired_with.insert(low, j);
                bars.push(Bar {
                    degree: k - 1,
                    birth: value(low),
                    death: value(j),
                });
                pivot_col.insert(low, col);
            }
        }
    }

    // Degree 0 and the negative edges.
    let max_label = simplices.iter().flat_map(|s| s.vertices.iter()).copied().max();
    let labels = max_label.map_or(0, |m| m + 1);
    let mut birth_pos = vec![usize::MAX; labels];
    let mut uf = UnionFind::new(labels);
    for (i, s) in simplices.iter().enumerate() {
        match s.vertices.as_slice() {
            [v] => birth_pos[*v] = i,
            [a, b] => {
                let (ra, rb) = (uf.find(*a), uf.find(*b));
                if ra == rb {
                    continue;
                }
                let (elder, younger) = if birth_pos[ra] < birth_pos[rb] { (ra, rb) } else { (rb, ra) };
                uf.link(younger, elder);
                negative[i] = true;
                bars.push(Bar {
                    degree: 0,
                    birth: value(birth_pos[younger]),
                    death: s.value,
                });
            }
            _ => {}
        }
    }

    for (i, s) in simplices.iter().enumerate() {
        let k = s.vertices.len() - 1;
        if k > f.max_dim || negative[i] || paired_with.contains_key(&i) {
            continue;
        }
        if k == 0 && uf.find(s.vertices[0]) != s.vertices[0] {
            continue;
        }
        bars.push(Bar {
            degree: k,
            birth: s.value,
            death: f64::INFINITY,
        });
    }
    Ok(PersistenceDiagram::new(bars, f.threshold))
}

/// Checks ordering and face closure, returning each simplex's boundary as
/// sorted filtration positions.
fn validate(f: &Filtration) -> Result<Vec<Vec<usize>>> {
    let top = f.max_dim + 1;
    let mut position: HashMap<&[usize], usize> = HashMap::new();
    let mut boundaries = Vec::with_capacity(f.simplices.len());
    let mut prev = f64::NEG_INFINITY;
    for (i, s) in f.simplices.iter().enumerate() {
        if s.vertices.is_empty() || s.vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid(format!("simplex at position {i} needs strictly increasing labels")));
        }
        if s.value.is_nan() || s.value < prev {
            return Err(Error::UnsortedFiltration(i));
        }
        prev = s.value;
        if s.vertices.len() - 1 > top {
            boundaries.push(Vec::new());
            continue;
        }
        let mut boundary = Vec::new();
        if s.vertices.len() > 1 {
            for skip in 0..s.vertices.len() {
                let face: Vec<usize> = s
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != skip)
                    .map(|(_, &v)| v)
                    .collect();
                match position.get(face.as_slice()) {
                    Some(&p) => boundary.push(p),
                    None => return Err(Error::NotFaceClosed(i)),
                }
            }
            boundary.sort_unstable();
        }
        if position.insert(s.vertices.as_slice(), i).is_some() {
            return Err(Error::invalid(format!("simplex at position {i} appears twice")));
        }
        boundaries.push(boundary);
    }
    Ok(boundaries)
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}
