//! Lower-triangle CSV: a `# kind=<kind> n=<n> [p=<p>] [k=<k>] …` header, then
//! rows `i = 1..n` with the `i` entries `d(i, 0), …, d(i, i-1)`.

use std::io::{BufRead, Write};

use super::{DistanceMatrix, MetricKind};
use crate::fmt::{comment_value, format_float, parse_float};
use crate::{Error, Result};

impl DistanceMatrix {
    pub fn header(&self) -> String {
        let mut h = format!("# kind={} n={}", self.kind().name(), self.len());
        match self.kind() {
            MetricKind::Fermat { p, scale, prune } => {
                h.push_str(&format!(" p={}", format_float(p)));
                if let Some(s) = scale {
                    h.push_str(&format!(" scale={}", format_float(s)));
                }
                if let Some(k) = prune {
                    h.push_str(&format!(" prune={k}"));
                }
            }
            MetricKind::Quotient { p } => h.push_str(&format!(" p={}", format_float(p))),
            MetricKind::Knn { k } => h.push_str(&format!(" k={k}")),
            MetricKind::Euclidean => {}
        }
        h
    }

    pub fn write_csv<W: Write>(&self, mut w: W, extra_header: &[String]) -> Result<()> {
        writeln!(w, "{}", self.header())?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        for i in 1..self.len() {
            let row: Vec<String> = (0..i).map(|j| format_float(self.get(i, j))).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<DistanceMatrix> {
        let mut header: Option<(MetricKind, usize)> = None;
        let mut lower = Vec::new();
        let mut row = 1;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            let parse_err = |msg: String| Error::Parse { line: lineno + 1, msg };
            if trimmed.starts_with('#') {
                if header.is_none() {
                    if let Some(kind) = comment_value(trimmed, "kind") {
                        header = Some(parse_header(trimmed, kind).map_err(parse_err)?);
                    }
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let Some((_, n)) = header else {
                return Err(parse_err("data before the `# kind=` header".into()));
            };
            if row >= n {
                return Err(parse_err(format!("more than {} rows", n - 1)));
            }
            let before = lower.len();
            for tok in trimmed.split(',') {
                lower.push(parse_float(tok).ok_or_else(|| parse_err(format!("bad entry `{tok}`")))?);
            }
            if lower.len() - before != row {
                return Err(parse_err(format!("row {row} has {} entries", lower.len() - before)));
            }
            row += 1;
        }
        let (kind, n) = header.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `# kind=` header".into(),
        })?;
        DistanceMatrix::from_lower(n, lower, kind)
    }
}

fn parse_header(line: &str, kind: &str) -> std::result::Result<(MetricKind, usize), String> {
    let num = |key: &str| -> std::result::Result<Option<f64>, String> {
        comment_value(line, key)
            .map(|v| parse_float(v).ok_or_else(|| format!("bad {key} `{v}`")))
            .transpose()
    };
    let count = |key: &str| -> std::result::Result<Option<usize>, String> {
        comment_value(line, key)
            .map(|v| v.parse().map_err(|_| format!("bad {key} `{v}`")))
            .transpose()
    };
    let n = count("n")?.ok_or("header lacks n=")?;
    let kind = match kind {
        "euclidean" => MetricKind::Euclidean,
        "fermat" => MetricKind::Fermat {
            p: num("p")?.ok_or("fermat header lacks p=")?,
            scale: num("scale")?,
            prune: count("prune")?,
        },
        "knn" => MetricKind::Knn {
            k: count("k")?.ok_or("knn header lacks k=")?,
        },
        "quotient" => MetricKind::Quotient {
            p: num("p")?.ok_or("quotient header lacks p=")?,
        },
        other => return Err(format!("unknown kind `{other}`")),
    };
    Ok((kind, n))
}
