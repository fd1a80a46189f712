use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fermatph::metric::DistanceMatrix;
use fermatph::persistence::PersistenceDiagram;
use proptest::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn fermatph() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fermatph"));
    cmd.env_remove("FERMATPH_THREADS");
    cmd
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    fermatph().current_dir(dir).args(args).output().expect("binary runs")
}

/// Runs and asserts success, returning stdout.
fn ok(dir: &Path, args: &[&str]) -> String {
    let out = run_in(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()).collect()
}

fn matrix(dir: &Path, name: &str) -> DistanceMatrix {
    DistanceMatrix::read_csv(fs::read(dir.join(name)).unwrap().as_slice()).unwrap()
}

fn diagram(dir: &Path, name: &str) -> PersistenceDiagram {
    PersistenceDiagram::read_csv(fs::read(dir.join(name)).unwrap().as_slice()).unwrap()
}

fn cloud_csv(points: &[Vec<f64>]) -> String {
    points
        .iter()
        .map(|p| p.iter().map(|c| format!("{c:?}")).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join("\n")
}

fn diagram_csv(bars: &[(f64, f64)], degree: usize) -> String {
    let mut s = String::from("# threshold=inf\n");
    for (b, d) in bars {
        s.push_str(&format!("{degree},{b:?},{d:?}\n"));
    }
    s
}

fn bottleneck_json(dir: &Path, a: &str, b: &str, degree: usize) -> Value {
    let text = ok(dir, &["bottleneck", a, b, "--degree", &degree.to_string()]);
    serde_json::from_str(&text).unwrap()
}

/// Minimum over every bijection of the diagonal-augmented diagrams of the
/// largest matched cost.
fn brute_force_bottleneck(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    #[derive(Clone, Copy)]
    enum P {
        Bar(f64, f64),
        Diag,
    }
    let half = |(x, y): (f64, f64)| (y - x) / 2.0;
    let left: Vec<P> = a.iter().map(|&(x, y)| P::Bar(x, y)).chain(b.iter().map(|_| P::Diag)).collect();
    let right: Vec<P> = b.iter().map(|&(x, y)| P::Bar(x, y)).chain(a.iter().map(|_| P::Diag)).collect();
    let cost = |l: P, r: P| match (l, r) {
        (P::Bar(x1, y1), P::Bar(x2, y2)) => (x1 - x2).abs().max((y1 - y2).abs()),
        (P::Bar(x, y), P::Diag) | (P::Diag, P::Bar(x, y)) => half((x, y)),
        (P::Diag, P::Diag) => 0.0,
    };
    fn search(i: usize, used: &mut [bool], acc: f64, best: &mut f64, cost: &dyn Fn(usize, usize) -> f64) {
        if acc >= *best {
            return;
        }
        if i == used.len() {
            *best = acc;
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                search(i + 1, used, acc.max(cost(i, j)), best, cost);
                used[j] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    let mut used = vec![false; left.len()];
    search(0, &mut used, 0.0, &mut best, &|i, j| cost(left[i], right[j]));
    if left.is_empty() {
        0.0
    } else {
        best
    }
}

fn floyd_warshall(points: &[Vec<f64>], p: f64) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut d: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e: f64 = points[i].iter().zip(&points[j]).map(|(a, b)| (a - b) * (a - b)).sum();
                    e.sqrt().powf(p)
                })
                .collect()
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

#[test]
fn generate_writes_requested_rows_reproducibly() {
    let dir = TempDir::new().unwrap();
    let args = ["generate", "eyeglasses", "--n", "2000", "-o", "a.csv"];
    ok(dir.path(), &args);
    let first = fs::read(dir.path().join("a.csv")).unwrap();
    ok(dir.path(), &args);
    let second = fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(data_rows(&String::from_utf8_lossy(&first)).len(), 2000);
    assert_eq!(first, second);
}

#[test]
fn generate_rejects_unknown_kind_as_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["generate", "pretzel"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn generate_outliers_and_signals() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "trefoil", "--n", "100", "-o", "x.csv"]);
    let y = ok(dir.path(), &["generate", "outliers", "--input", "x.csv", "--m", "5"]);
    assert_eq!(data_rows(&y).len(), 5);
    let lorenz = ok(dir.path(), &["generate", "lorenz", "--t-max", "1", "--dt", "0.01"]);
    assert_eq!(data_rows(&lorenz).len(), 100);
    let torus = ok(dir.path(), &["generate", "flat-torus", "--n", "7"]);
    assert!(data_rows(&torus).iter().all(|r| r.split(',').count() == 4));
}

#[test]
fn distmat_two_points_fermat_squares_the_distance() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "two.csv", "0,0\n3,4\n");
    ok(dir.path(), &["distmat", "two.csv", "--metric", "fermat", "--p", "2", "-o", "d.csv"]);
    assert_eq!(matrix(dir.path(), "d.csv").get(0, 1), 25.0);
}

#[test]
fn distmat_euclidean_on_right_triangle() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "tri.csv", "0,0\n3,0\n3,4\n");
    ok(dir.path(), &["distmat", "tri.csv", "--metric", "euclidean", "-o", "d.csv"]);
    let d = matrix(dir.path(), "d.csv");
    let mut entries = vec![d.get(0, 1), d.get(1, 2), d.get(0, 2)];
    entries.sort_by(f64::total_cmp);
    assert_eq!(entries, vec![3.0, 4.0, 5.0]);
}

#[test]
fn distmat_knn_and_quotient_run() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "x.csv", "0,0\n1,0\n2,0\n10,0\n");
    write(dir.path(), "y.csv", "5,5\n");
    ok(dir.path(), &["distmat", "x.csv", "--metric", "knn", "--k", "1", "-o", "k.csv"]);
    assert_eq!(matrix(dir.path(), "k.csv").get(0, 2), 2.0);
    ok(dir.path(), &["distmat", "x.csv", "--metric", "quotient", "--outliers", "y.csv", "-o", "q.csv"]);
    // The sample collapses to one point, followed by the outlier.
    let q = matrix(dir.path(), "q.csv");
    assert_eq!(q.len(), 2);
    assert!(q.get(0, 1) > 0.0);
    let out = run_in(dir.path(), &["distmat", "x.csv", "--metric", "knn"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn mds_recovers_planar_configuration() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "tri.csv", "0,0\n3,0\n3,4\n");
    ok(dir.path(), &["distmat", "tri.csv", "--metric", "euclidean", "-o", "d.csv"]);
    ok(dir.path(), &["mds", "d.csv", "--dim", "2", "-o", "y.csv"]);
    ok(dir.path(), &["distmat", "y.csv", "--metric", "euclidean", "-o", "e.csv"]);
    let (d, e) = (matrix(dir.path(), "d.csv"), matrix(dir.path(), "e.csv"));
    for (a, b) in d.lower().iter().zip(e.lower()) {
        assert!((a - b).abs() < 1e-8);
    }
}

#[test]
fn ph_unit_square_has_one_loop() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "sq.csv", "0,0\n1,0\n1,1\n0,1\n");
    ok(dir.path(), &["distmat", "sq.csv", "--metric", "euclidean", "-o", "d.csv"]);
    for algorithm in ["implicit", "explicit"] {
        ok(dir.path(), &["ph", "d.csv", "--algorithm", algorithm, "-o", "g.csv"]);
        let h1: Vec<_> = diagram(dir.path(), "g.csv").degree(1).copied().collect();
        assert_eq!(h1.len(), 1, "{algorithm}");
        assert_eq!(h1[0].birth, 1.0);
        assert!((h1[0].death - 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn ph_below_every_edge_has_no_loops() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "sq.csv", "0,0\n1,0\n1,1\n0,1\n");
    ok(dir.path(), &["distmat", "sq.csv", "--metric", "euclidean", "-o", "d.csv"]);
    ok(dir.path(), &["ph", "d.csv", "--r", "1", "-o", "g.csv"]);
    let dgm = diagram(dir.path(), "g.csv");
    assert_eq!(dgm.degree(1).count(), 0);
    assert_eq!(dgm.degree(0).filter(|b| !b.is_finite()).count(), 4);
    assert_eq!(dgm.threshold, 1.0);
}

#[test]
fn ph_rerun_is_identical() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "circle", "--n", "40", "--noise", "0.05", "-o", "c.csv"]);
    ok(dir.path(), &["distmat", "c.csv", "-o", "d.csv"]);
    let first = ok(dir.path(), &["ph", "d.csv"]);
    let second = ok(dir.path(), &["ph", "d.csv"]);
    assert_eq!(first, second);
}

#[test]
fn bottleneck_self_and_empty() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "one.csv", &diagram_csv(&[(1.0, 4.0)], 1));
    write(dir.path(), "none.csv", &diagram_csv(&[], 1));
    assert_eq!(bottleneck_json(dir.path(), "one.csv", "one.csv", 1)["distance"], 0.0);
    let v = bottleneck_json(dir.path(), "one.csv", "none.csv", 1);
    assert_eq!(v["distance"], 1.5);
    assert_eq!(v["matching"]["pairs"][0][1], "diag");
}

#[test]
fn bottleneck_reports_infinite_distance_as_string() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "ess.csv", &diagram_csv(&[(0.0, f64::INFINITY)], 0));
    write(dir.path(), "none.csv", &diagram_csv(&[], 0));
    let v = bottleneck_json(dir.path(), "ess.csv", "none.csv", 0);
    assert_eq!(v["distance"], "inf");
}

#[test]
fn distortion_of_scaled_matrix() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.csv", "0,0\n3,4\n");
    write(dir.path(), "b.csv", "0,0\n6,8\n");
    ok(dir.path(), &["distmat", "a.csv", "--metric", "euclidean", "-o", "da.csv"]);
    ok(dir.path(), &["distmat", "b.csv", "--metric", "euclidean", "-o", "db.csv"]);
    let v: Value = serde_json::from_str(&ok(dir.path(), &["distortion", "da.csv", "db.csv"])).unwrap();
    assert_eq!(v["distortion"], 5.0);
}

#[test]
fn embed_counts_points() {
    let dir = TempDir::new().unwrap();
    let series: String = (0..100).map(|i| format!("{}\n", (i as f64 * 0.3).sin())).collect();
    write(dir.path(), "s.csv", &series);
    let out = ok(dir.path(), &["embed", "s.csv", "--tau", "5", "--dim", "3", "--stride", "2"]);
    assert_eq!(data_rows(&out).len(), 45);
    assert!(data_rows(&out).iter().all(|r| r.split(',').count() == 3));
}

fn header_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix('='))
        .unwrap_or_else(|| panic!("no `{key}` header"))
}

#[test]
fn changepoints_find_the_frequency_switch() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "sine-switch", "--n", "800", "--noise", "0.05", "-o", "s.csv"]);
    let out = ok(dir.path(), &["changepoints", "s.csv", "--tau", "10", "--stride", "2", "--step", "20"]);
    let top: f64 = header_value(&out, "top_peak_time").parse().unwrap();
    assert!((top - 400.0).abs() <= 80.0, "top peak at {top}");
    assert_eq!(data_rows(&out)[0], "index,time,raw,smoothed");
}

#[test]
fn changepoints_on_constant_signal_find_nothing() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "flat.csv", &"1.0\n".repeat(300));
    let out = ok(dir.path(), &["changepoints", "flat.csv", "--tau", "5", "--step", "20"]);
    assert_eq!(header_value(&out, "peaks"), "");
}

#[test]
fn changepoints_accept_single_column_recordings() {
    let dir = TempDir::new().unwrap();
    let samples: String = (0..600)
        .map(|i| {
            let t = i as f64 / 100.0;
            format!("{:.4}\n", (6.0 * t).sin() + 0.3 * (31.0 * t).sin())
        })
        .collect();
    write(dir.path(), "ecg.csv", &format!("mV\n{samples}"));
    let out = ok(dir.path(), &["changepoints", "ecg.csv", "--tau", "15", "--dim", "3", "--p", "2", "--step", "30"]);
    assert!(data_rows(&out).len() > 2);
}

#[test]
fn config_file_sits_under_flags_and_is_echoed() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cfg.json", r#"{"generate": {"n": 12, "seed": 5}, "ph": {"max_dim": 0}}"#);
    let out = ok(dir.path(), &["--config", "cfg.json", "generate", "circle", "--seed", "7"]);
    assert_eq!(data_rows(&out).len(), 12);
    let echoed: Value = serde_json::from_str(header_value(&out, "config")).unwrap();
    assert_eq!(echoed["n"], 12);
    assert_eq!(echoed["seed"], 7);
}

#[test]
fn unknown_config_key_is_an_error() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cfg.json", r#"{"nn": 12}"#);
    let out = run_in(dir.path(), &["--config", "cfg.json", "generate", "circle"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("nn"));
}

#[test]
fn failures_are_structured() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), &["ph", "missing.csv"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");

    write(dir.path(), "two.csv", "0,0\n1,1\n");
    let out = run_in(dir.path(), &["distmat", "two.csv", "--p", "-1"]);
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "invalid_parameter");
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["generate", "eyeglasses", "--n", "120", "--noise", "0.01", "-o", "e.csv"]);
    let one = ok(dir.path(), &["--threads", "1", "distmat", "e.csv"]);
    let env = fermatph()
        .current_dir(dir.path())
        .env("FERMATPH_THREADS", "3")
        .args(["distmat", "e.csv"])
        .output()
        .unwrap();
    assert_eq!(one.as_bytes(), env.stdout.as_slice());
    let all = ok(dir.path(), &["--threads", "0", "distmat", "e.csv"]);
    assert_eq!(one, all);
}

#[test]
fn experiment_trefoil_outliers_reports_equal_diagrams() {
    let dir = TempDir::new().unwrap();
    let stdout = ok(dir.path(), &["experiment", "trefoil-outliers", "--out-dir", "out"]);
    assert!(stdout.contains("PASS"), "{stdout}");
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/trefoil-outliers.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["below_delta"]["equal"], true);
}

#[test]
fn experiment_convergence_writes_cv_table() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "cfg.json", r#"{"convergence": {"sizes": [40, 80], "manifolds": ["circle"]}}"#);
    ok(dir.path(), &["--config", "cfg.json", "experiment", "convergence", "--seed", "3"]);
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("convergence.json")).unwrap()).unwrap();
    let rows = v["report"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["seed"], 3);
    assert_eq!(rows[0]["cv"].as_array().unwrap().len(), 2);
}

#[test]
fn experiment_unknown_name_is_usage_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run_in(dir.path(), &["experiment", "klein-bottle"]).status.code(), Some(2));
}

fn small_cloud() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 2), 8)
}

fn bars() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..5.0f64, 0.05..3.0f64).prop_map(|(b, l)| (b, b + l)), 0..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn distmat_fermat_matches_floyd_warshall(points in small_cloud(), p in 1.5..3.0f64) {
        let dir = TempDir::new().unwrap();
        write(dir.path(), "x.csv", &cloud_csv(&points));
        ok(dir.path(), &["distmat", "x.csv", "--p", &p.to_string(), "-o", "d.csv"]);
        let d = matrix(dir.path(), "d.csv");
        let oracle = floyd_warshall(&points, p);
        for i in 0..points.len() {
            for j in 0..i {
                prop_assert!((d.get(i, j) - oracle[i][j]).abs() <= 1e-12 * oracle[i][j].max(1.0));
            }
        }
    }

    #[test]
    fn bottleneck_matches_brute_force(a in bars(), b in bars()) {
        let dir = TempDir::new().unwrap();
        write(dir.path(), "a.csv", &diagram_csv(&a, 1));
        write(dir.path(), "b.csv", &diagram_csv(&b, 1));
        let v = bottleneck_json(dir.path(), "a.csv", "b.csv", 1);
        let got = v["distance"].as_f64().unwrap();
        prop_assert!((got - brute_force_bottleneck(&a, &b)).abs() < 1e-12);
    }
}
