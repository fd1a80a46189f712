use std::io::Write;

use serde::Serialize;

use super::PrefixDiagram;
use crate::comparison::bottleneck;
use crate::fmt::format_float;
use crate::{Error, Result};

/// Bottleneck rate of change between consecutive prefix diagrams.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChangePointScore {
    /// Sample index of the later prefix of each consecutive pair.
    pub times: Vec<usize>,
    pub raw: Vec<f64>,
    /// Centred moving average of `raw`; the window shrinks at the ends.
    pub smoothed: Vec<f64>,
    pub window: usize,
}

/// `score_i = d_b(dgm_i, dgm_{i-1}) / (t_i - t_{i-1})` in `degree`, with time
/// measured in units of `dt` per sample.
pub fn change_point_score(diagrams: &[PrefixDiagram], dt: f64, degree: usize, window: usize) -> Result<ChangePointScore> {
    if diagrams.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 diagrams, got {}", diagrams.len())));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if window == 0 {
        return Err(Error::invalid("window must be at least 1"));
    }
    let mut times = Vec::with_capacity(diagrams.len() - 1);
    let mut raw = Vec::with_capacity(diagrams.len() - 1);
    for w in diagrams.windows(2) {
        if w[1].time <= w[0].time {
            return Err(Error::invalid("prefix times must increase"));
        }
        let (d, _) = bottleneck(&w[0].diagram, &w[1].diagram, degree)?;
        times.push(w[1].time);
        raw.push(d / ((w[1].time - w[0].time) as f64 * dt));
    }
    let smoothed = moving_average(&raw, window);
    Ok(ChangePointScore {
        times,
        raw,
        smoothed,
        window,
    })
}

fn moving_average(x: &[f64], window: usize) -> Vec<f64> {
    let before = (window - 1) / 2;
    let after = window - 1 - before;
    (0..x.len())
        .map(|i| {
            let lo = i.saturating_sub(before);
            let hi = (i + after + 1).min(x.len());
            x[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect()
}

/// Local maxima of the smoothed score that exceed `mean + z·std` of the
/// smoothed score. On a plateau only the first index is reported.
pub fn detect_peaks(score: &ChangePointScore, z: f64) -> Result<Vec<usize>> {
    if !(z > 0.0) {
        return Err(Error::invalid(format!("z must be positive, got {z}")));
    }
    let s = &score.smoothed;
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let std = (s.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    let cut = mean + z * std;
    Ok((0..s.len())
        .filter(|&i| {
            s[i] > cut && (i == 0 || s[i] > s[i - 1]) && (i + 1 == s.len() || s[i] >= s[i + 1])
        })
        .collect())
}

impl ChangePointScore {
    pub fn write_csv<W: Write>(&self, mut w: W, extra_header: &[String]) -> Result<()> {
        for line in extra_header {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "# window={}", self.window)?;
        writeln!(w, "index,time,raw,smoothed")?;
        for i in 0..self.raw.len() {
            writeln!(
                w,
                "{i},{},{},{}",
                self.times[i],
                format_float(self.raw[i]),
                format_float(self.smoothed[i])
            )?;
        }
        Ok(())
    }
}
