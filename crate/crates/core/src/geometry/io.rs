//! CSV encodings. Lines starting with `#` are comments; `key=value` pairs in
//! comments carry metadata.

use std::io::{BufRead, Write};

use super::{CloudMeta, PointCloud, TimeSeries};
use crate::fmt::{comment_value, format_float, parse_float};
use crate::{Error, Result};

impl PointCloud {
    /// One row per point, comma-separated coordinates. `extra_header` lines are
    /// written as comments after the provenance line.
    pub fn write_csv<W: Write>(&self, mut w: W, extra_header: &[String]) -> Result<()> {
        if !self.meta.generator.is_empty() {
            write!(w, "# generator={}", self.meta.generator)?;
            if let Some(seed) = self.meta.seed {
                write!(w, " seed={seed}")?;
            }
            writeln!(w)?;
        }
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        for p in self.points() {
            let row: Vec<String> = p.iter().map(|&c| format_float(c)).collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<PointCloud> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut meta = CloudMeta::default();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                if let Some(g) = comment_value(trimmed, "generator") {
                    meta.generator = g.to_string();
                }
                if let Some(s) = comment_value(trimmed, "seed") {
                    meta.seed = s.parse().ok();
                }
                continue;
            }
            let row = trimmed
                .split(',')
                .map(|tok| {
                    parse_float(tok).ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad coordinate `{tok}`"),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        let mut cloud = PointCloud::from_rows(&rows)?;
        cloud.meta = meta;
        Ok(cloud)
    }
}

impl TimeSeries {
    /// Header `# dt=<value>`, then one sample per line.
    pub fn write_csv<W: Write>(&self, mut w: W, extra_header: &[String]) -> Result<()> {
        writeln!(w, "# dt={}", format_float(self.dt()))?;
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        for v in self.values() {
            writeln!(w, "{}", format_float(*v))?;
        }
        Ok(())
    }

    /// Reads a single-column signal. The sampling step comes from a `dt=`
    /// comment, else `default_dt`. A non-numeric first data line is treated as
    /// a column title; for multi-column rows only the first column is used.
    pub fn read_csv<R: BufRead>(r: R, default_dt: Option<f64>) -> Result<TimeSeries> {
        let mut dt = None;
        let mut values = Vec::new();
        let mut seen_data = false;
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed.starts_with('#') {
                if let Some(v) = comment_value(trimmed, "dt") {
                    dt = Some(parse_float(v).ok_or_else(|| Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad dt `{v}`"),
                    })?);
                }
                continue;
            }
            let first = trimmed.split(',').next().unwrap_or("");
            match parse_float(first) {
                Some(v) => values.push(v),
                None if !seen_data => {}
                None => {
                    return Err(Error::Parse {
                        line: lineno + 1,
                        msg: format!("bad sample `{first}`"),
                    })
                }
            }
            seen_data = true;
        }
        let dt = dt
            .or(default_dt)
            .ok_or_else(|| Error::invalid("signal has no `# dt=` header and no default sampling step"))?;
        TimeSeries::new(values, dt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_round_trip_keeps_bits_and_meta() {
        let mut c = PointCloud::from_rows(&[[0.1, -2.5e-17], [3.0, 1.0 / 3.0]]).unwrap();
        c.meta = CloudMeta {
            generator: "test".into(),
            seed: Some(9),
        };
        let mut buf = Vec::new();
        c.write_csv(&mut buf, &["config={}".into()]).unwrap();
        let back = PointCloud::read_csv(&buf[..]).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn series_header_and_title_row() {
        let ts = TimeSeries::new(vec![1.0, 2.0, 0.5], 0.25).unwrap();
        let mut buf = Vec::new();
        ts.write_csv(&mut buf, &[]).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("# dt=2.5"));
        assert_eq!(TimeSeries::read_csv(&buf[..], None).unwrap(), ts);

        let ecg = "MLII,V5\n0.1,0.2\n0.3,0.4\n";
        let s = TimeSeries::read_csv(ecg.as_bytes(), Some(0.004)).unwrap();
        assert_eq!(s.values(), &[0.1, 0.3]);
        assert!(TimeSeries::read_csv("1\n2\n".as_bytes(), None).is_err());
        assert!(TimeSeries::read_csv("1\nx\n".as_bytes(), Some(1.0)).is_err());
    }
}
