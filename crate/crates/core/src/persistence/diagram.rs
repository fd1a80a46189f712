use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::fmt::{comment_value, format_float, parse_float};
use crate::metric::DistanceMatrix;
use crate::{Error, Result};

/// One interval `[birth, death)` in homological degree `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub degree: usize,
    pub birth: f64,
    /// `+∞` for classes still alive at the diagram threshold.
    pub death: f64,
}

impl Bar {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_finite(&self) -> bool {
        self.death.is_finite()
    }
}

/// Multiset of bars over Z/2, tagged with the filtration threshold it was
/// computed under (`+∞` for the full filtration).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersistenceDiagram {
    pub bars: Vec<Bar>,
    pub threshold: f64,
}

impl PersistenceDiagram {
    pub fn new(mut bars: Vec<Bar>, threshold: f64) -> Self {
        bars.retain(|b| b.death > b.birth);
        let mut d = PersistenceDiagram { bars, threshold };
        d.sort();
        d
    }

    /// Canonical order: degree, birth, death.
    pub fn sort(&mut self) {
        self.bars.sort_by(|a, b| {
            a.degree
                .cmp(&b.degree)
                .then(a.birth.total_cmp(&b.birth))
                .then(a.death.total_cmp(&b.death))
        });
    }

    pub fn degree(&self, degree: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.degree == degree)
    }

    pub fn finite(&self, degree: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.degree(degree).filter(|b| b.is_finite())
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.bars.iter().map(|b| b.degree).max()
    }

    /// Only the bars of `degree`.
    pub fn restrict(&self, degree: usize) -> PersistenceDiagram {
        PersistenceDiagram {
            bars: self.degree(degree).copied().collect(),
            threshold: self.threshold,
        }
    }

    /// The diagram of the filtration cut at `r < threshold`: bars born at or
    /// after `r` vanish and bars still alive at `r` become infinite.
    pub fn truncate(&self, r: f64) -> PersistenceDiagram {
        let bars = self
            .bars
            .iter()
            .filter(|b| b.birth < r)
            .map(|b| Bar {
                death: if b.death >= r { f64::INFINITY } else { b.death },
                ..*b
            })
            .collect();
        PersistenceDiagram::new(bars, r.min(self.threshold))
    }

    /// Number of bars of `degree` alive at scale `s`, i.e. with
    /// `birth <= s < death`.
    pub fn betti_at(&self, degree: usize, s: f64) -> usize {
        self.degree(degree).filter(|b| b.birth <= s && s < b.death).count()
    }

    /// `# threshold=<r>` header, then `degree,birth,death` rows.
    pub fn write_csv<W: Write>(&self, mut w: W, extra_header: &[String]) -> Result<()> {
        writeln!(w, "# threshold={}", format_float(self.threshold))?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        for b in &self.bars {
            writeln!(w, "{},{},{}", b.degree, format_float(b.birth), format_float(b.death))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<PersistenceDiagram> {
        let mut threshold = None;
        let mut bars = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            let err = |msg: String| Error::Parse { line: lineno + 1, msg };
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                if let Some(v) = comment_value(trimmed, "threshold") {
                    threshold = Some(parse_float(v).ok_or_else(|| err(format!("bad threshold `{v}`")))?);
                }
                continue;
            }
            let cols: Vec<&str> = trimmed.split(',').collect();
            if cols.len() != 3 {
                return Err(err(format!("expected degree,birth,death, got `{trimmed}`")));
            }
            let degree = cols[0].trim().parse().map_err(|_| err(format!("bad degree `{}`", cols[0])))?;
            let birth = parse_float(cols[1]).ok_or_else(|| err(format!("bad birth `{}`", cols[1])))?;
            let death = parse_float(cols[2]).ok_or_else(|| err(format!("bad death `{}`", cols[2])))?;
            if !(birth >= 0.0 && death >= birth) {
                return Err(err(format!("invalid bar ({birth}, {death})")));
            }
            bars.push(Bar { degree, birth, death });
        }
        let threshold = threshold.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `# threshold=` header".into(),
        })?;
        Ok(PersistenceDiagram::new(bars, threshold))
    }
}

/// Degree-0 diagram read off a minimum spanning tree: every tree edge kills a
/// component born at 0, and one component lives forever.
pub fn h0_mst(dist: &DistanceMatrix) -> PersistenceDiagram {
    let mut bars: Vec<Bar> = dist
        .mst()
        .into_iter()
        .map(|e| Bar {
            degree: 0,
            birth: 0.0,
            death: e.weight,
        })
        .collect();
    bars.push(Bar {
        degree: 0,
        birth: 0.0,
        death: f64::INFINITY,
    });
    PersistenceDiagram::new(bars, f64::INFINITY)
}

/// Number of finite bars of `degree` whose persistence is at least `ratio`
/// times the largest finite persistence in that degree.
pub fn salient_bars(dgm: &PersistenceDiagram, degree: usize, ratio: f64) -> Result<usize> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::invalid(format!("salience ratio must be in (0, 1), got {ratio}")));
    }
    let pers: Vec<f64> = dgm.finite(degree).map(Bar::persistence).collect();
    let Some(top) = pers.iter().copied().reduce(f64::max) else {
        return Ok(0);
    };
    Ok(pers.iter().filter(|&&p| p >= ratio * top).count())
}
