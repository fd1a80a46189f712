//! Subcommand bodies. Every output carries the effective parameters in its
//! header (CSV) or a `config` member (JSON).

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use fermatph::comparison::{bottleneck as bottleneck_distance, metric_distortion};
use fermatph::experiments::{
    changepoint_experiment, convergence_experiment, eyeglasses_experiment, lorenz_experiment, stability_experiment,
    trefoil_experiment, ChangePointConfig, ConvergenceConfig, EyeglassesConfig, LorenzConfig, StabilityConfig,
    TrefoilConfig,
};
use fermatph::geometry::{
    gen_eyeglasses, gen_outliers, gen_trefoil, gen_uniform_manifold, lorenz_series, sine_switch_series, Eyeglasses,
    LorenzParams, Manifold, OutlierParams, PointCloud, TimeSeries,
};
use fermatph::metric::{
    epsilon_star, euclidean_matrix, fermat_matrix, fermat_matrix_pruned, knn_matrix, mds_project, quotient_matrix,
    rescale_fermat, DistanceMatrix, FermatParams,
};
use fermatph::persistence::{persistent_homology, rips_filtration, rips_persistence, PersistenceDiagram};
use fermatph::signal::{
    change_point_score, delay_embed, detect_peaks, evolving_diagrams, DelayParams, EvolvingParams, PrefixMetric,
};
use fermatph::{format_float, Error};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::echo;
use crate::{
    Algorithm, BottleneckArgs, ChangepointsArgs, DistmatArgs, DistortionArgs, EmbedArgs, ExperimentArgs,
    ExperimentName, GenKind, GenerateArgs, MdsArgs, MetricArg, PhArgs, PrefixMetricArg,
};

fn reader(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

/// Buffered output to `path`, or to stdout when absent or `-`.
fn writer(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        _ => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn read_cloud(path: &Path) -> Result<PointCloud> {
    PointCloud::read_csv(reader(path)?).with_context(|| format!("reading point cloud {}", path.display()))
}

fn read_matrix(path: &Path) -> Result<DistanceMatrix> {
    DistanceMatrix::read_csv(reader(path)?).with_context(|| format!("reading distance matrix {}", path.display()))
}

fn read_diagram(path: &Path) -> Result<PersistenceDiagram> {
    PersistenceDiagram::read_csv(reader(path)?).with_context(|| format!("reading diagram {}", path.display()))
}

fn read_series(path: &Path, dt: Option<f64>) -> Result<TimeSeries> {
    TimeSeries::read_csv(reader(path)?, dt).with_context(|| format!("reading signal {}", path.display()))
}

/// JSON number, or the string `"inf"` for values JSON cannot hold.
fn json_float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(format_float(x))
    }
}

fn write_json(out: &Option<PathBuf>, value: &Value) -> Result<()> {
    let mut w = writer(out)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn generate(a: &GenerateArgs) -> Result<()> {
    let header = [echo(a)];
    let mut w = writer(&a.out)?;
    let manifold = |m: Manifold| gen_uniform_manifold(m, a.n, a.noise, a.seed);
    let cloud = match a.kind {
        GenKind::Eyeglasses => gen_eyeglasses(a.n, a.noise, a.seed, &Eyeglasses::default())?,
        GenKind::Trefoil => gen_trefoil(a.n, a.noise, a.seed)?,
        GenKind::Circle => manifold(Manifold::Circle)?,
        GenKind::Sphere => manifold(Manifold::Sphere)?,
        GenKind::FlatTorus => manifold(Manifold::FlatTorus)?,
        GenKind::Outliers => {
            let input = a.input.as_ref().context("outliers need --input")?;
            let base = read_cloud(input)?;
            let gap = match a.min_gap {
                Some(g) => g,
                None => 2.0 * epsilon_star(&base),
            };
            gen_outliers(&base, &OutlierParams::new(a.m, gap), a.seed)?
        }
        GenKind::Lorenz => {
            let series = lorenz_series(a.t_max, a.dt, &LorenzParams::default(), a.noise, a.seed)?;
            series.write_csv(&mut w, &header)?;
            w.flush()?;
            return Ok(());
        }
        GenKind::SineSwitch => {
            let switch = a.switch_at.unwrap_or(a.n / 2);
            let series = sine_switch_series(a.n, a.period, switch, a.noise, a.dt, a.seed)?;
            series.write_csv(&mut w, &header)?;
            w.flush()?;
            return Ok(());
        }
    };
    cloud.write_csv(&mut w, &header)?;
    w.flush()?;
    Ok(())
}

pub fn distmat(a: &DistmatArgs) -> Result<()> {
    let cloud = read_cloud(&a.input)?;
    if a.outliers.is_some() && a.metric != MetricArg::Quotient {
        bail!("--outliers only applies to the quotient metric");
    }
    let dist = match a.metric {
        MetricArg::Euclidean => euclidean_matrix(&cloud),
        MetricArg::Knn => knn_matrix(&cloud, a.k.context("the knn metric needs --k")?)?,
        MetricArg::Quotient => {
            let y = a.outliers.as_deref().map(read_cloud).transpose()?;
            quotient_matrix(&cloud, y.as_ref(), a.p)?
        }
        MetricArg::Fermat => {
            let raw = match a.k {
                Some(k) => fermat_matrix_pruned(&cloud, a.p, k)?,
                None => fermat_matrix(&cloud, a.p)?,
            };
            match (a.d, a.mu) {
                (None, None) => raw,
                (Some(d), mu) => rescale_fermat(&raw, &FermatParams { p: a.p, d, mu })?,
                (None, Some(_)) => bail!("rescaling needs the intrinsic dimension --d"),
            }
        }
    };
    let mut w = writer(&a.out)?;
    dist.write_csv(&mut w, &[echo(a)])?;
    w.flush()?;
    Ok(())
}

pub fn ph(a: &PhArgs) -> Result<()> {
    let dist = read_matrix(&a.input)?;
    let r = a.r.unwrap_or(f64::INFINITY);
    let dgm = match a.algorithm {
        Algorithm::Implicit => rips_persistence(&dist, a.max_dim, r)?,
        Algorithm::Explicit => persistent_homology(&rips_filtration(&dist, a.max_dim, r)?)?,
    };
    let mut w = writer(&a.out)?;
    dgm.write_csv(&mut w, &[echo(a)])?;
    w.flush()?;
    Ok(())
}

pub fn bottleneck(a: &BottleneckArgs) -> Result<()> {
    let (d1, d2) = (read_diagram(&a.a)?, read_diagram(&a.b)?);
    let (distance, matching) = bottleneck_distance(&d1, &d2, a.degree)?;
    let report = json!({
        "config": a,
        "degree": a.degree,
        "distance": json_float(distance),
        "matching": matching,
    });
    write_json(&a.out, &report)
}

pub fn distortion(a: &DistortionArgs) -> Result<()> {
    let (d1, d2) = (read_matrix(&a.a)?, read_matrix(&a.b)?);
    let value = metric_distortion(&d1, &d2)?;
    write_json(&a.out, &json!({ "config": a, "distortion": json_float(value) }))
}

pub fn mds(a: &MdsArgs) -> Result<()> {
    let dist = read_matrix(&a.input)?;
    let cloud = mds_project(&dist, a.dim)?;
    let mut w = writer(&a.out)?;
    cloud.write_csv(&mut w, &[echo(a)])?;
    w.flush()?;
    Ok(())
}

pub fn embed(a: &EmbedArgs) -> Result<()> {
    let series = read_series(&a.input, Some(a.dt.unwrap_or(1.0)))?;
    let delay = DelayParams { tau: a.tau, dim: a.dim, stride: a.stride };
    let cloud = delay_embed(&series, &delay)?;
    let mut w = writer(&a.out)?;
    cloud.write_csv(&mut w, &[echo(a)])?;
    w.flush()?;
    Ok(())
}

pub fn changepoints(a: &ChangepointsArgs) -> Result<()> {
    let series = read_series(&a.input, Some(a.dt.unwrap_or(1.0)))?;
    let delay = DelayParams { tau: a.tau, dim: a.dim, stride: a.stride };
    let params = EvolvingParams {
        p: a.p,
        step: a.step,
        max_dim: a.degree,
        metric: match a.metric {
            PrefixMetricArg::Inherited => PrefixMetric::Inherited,
            PrefixMetricArg::Recomputed => PrefixMetric::Recomputed,
        },
    };
    let diagrams = evolving_diagrams(&series, &delay, &params)?;
    let score = change_point_score(&diagrams, series.dt(), a.degree, a.window)?;
    let peaks = detect_peaks(&score, a.z)?;
    let best = (0..score.smoothed.len()).max_by(|&i, &j| score.smoothed[i].total_cmp(&score.smoothed[j]).then(j.cmp(&i)));
    let top = best.map(|i| score.times[i].to_string()).unwrap_or_default();
    let join = |v: Vec<String>| v.join(",");
    let header = [
        echo(a),
        format!("peaks={}", join(peaks.iter().map(|i| i.to_string()).collect())),
        format!("peak_times={}", join(peaks.iter().map(|&i| score.times[i].to_string()).collect())),
        format!("top_peak_time={top}"),
    ];
    let mut w = writer(&a.out)?;
    score.write_csv(&mut w, &header)?;
    w.flush()?;
    Ok(())
}

/// Builds an experiment config from the `--config` section, then applies the
/// `--seed` override to whichever of `seed` / `seeds` the config has.
fn experiment_config<C>(section: Option<&Map<String, Value>>, seed: Option<u64>) -> Result<C>
where
    C: Serialize + DeserializeOwned + Default,
{
    let mut value = serde_json::to_value(C::default())?;
    let Value::Object(fields) = &mut value else {
        bail!("experiment config did not serialize to an object");
    };
    for (key, v) in section.into_iter().flatten() {
        if !fields.contains_key(key) {
            bail!("unknown config key `{key}`");
        }
        fields.insert(key.clone(), v.clone());
    }
    if let Some(seed) = seed {
        if fields.contains_key("seed") {
            fields.insert("seed".into(), json!(seed));
        } else if fields.contains_key("seeds") {
            fields.insert("seeds".into(), json!([seed]));
        }
    }
    serde_json::from_value(value).context("experiment config has the wrong type")
}

fn run_experiment<C, R>(
    section: Option<&Map<String, Value>>,
    seed: Option<u64>,
    run: impl Fn(&C) -> fermatph::Result<R>,
) -> Result<(Value, bool)>
where
    C: Serialize + DeserializeOwned + Default,
    R: Serialize,
{
    let cfg: C = experiment_config(section, seed)?;
    let report = serde_json::to_value(run(&cfg)?)?;
    let pass = report.get("pass").and_then(Value::as_bool).unwrap_or(false);
    Ok((report, pass))
}

pub fn experiment(a: &ExperimentArgs, section: Option<&Map<String, Value>>) -> Result<()> {
    let (report, pass) = match a.name {
        ExperimentName::Eyeglasses => run_experiment::<EyeglassesConfig, _>(section, a.seed, eyeglasses_experiment)?,
        ExperimentName::TrefoilOutliers => run_experiment::<TrefoilConfig, _>(section, a.seed, trefoil_experiment)?,
        ExperimentName::Lorenz => run_experiment::<LorenzConfig, _>(section, a.seed, lorenz_experiment)?,
        ExperimentName::Convergence => run_experiment::<ConvergenceConfig, _>(section, a.seed, convergence_experiment)?,
        ExperimentName::Changepoint => run_experiment::<ChangePointConfig, _>(section, a.seed, changepoint_experiment)?,
        ExperimentName::Stability => run_experiment::<StabilityConfig, _>(section, a.seed, stability_experiment)?,
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let path = a.out_dir.join(format!("{}.json", a.name.as_str()));
    write_json(&Some(path.clone()), &json!({ "experiment": a.name.as_str(), "pass": pass, "report": report }))?;
    println!("{}: {} ({})", a.name.as_str(), if pass { "PASS" } else { "FAIL" }, path.display());
    Ok(())
}

/// Machine-readable rendering of a failure for stderr.
pub fn error_json(err: &anyhow::Error) -> String {
    let kind = if let Some(e) = err.downcast_ref::<Error>() {
        match e {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::CannotPlaceOutliers { .. } => "cannot_place_outliers",
            Error::Divergent { .. } => "divergent",
            Error::MissingMu => "missing_mu",
            Error::KindMismatch { .. } => "kind_mismatch",
            Error::TooFewPairs { .. } => "too_few_pairs",
            Error::InfiniteDistance(..) => "infinite_distance",
            Error::SizeMismatch(..) => "size_mismatch",
            Error::ThresholdMismatch(..) => "threshold_mismatch",
            Error::UnsortedFiltration(_) => "unsorted_filtration",
            Error::NotFaceClosed(_) => "not_face_closed",
            Error::SeriesTooShort { .. } => "series_too_short",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    } else if err.downcast_ref::<io::Error>().is_some() {
        "io"
    } else if err.downcast_ref::<serde_json::Error>().is_some() {
        "config"
    } else {
        "usage"
    };
    json!({ "error": { "kind": kind, "message": format!("{err:#}") } }).to_string()
}
