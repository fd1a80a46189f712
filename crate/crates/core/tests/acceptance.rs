//! Acceptance suite: one line per criterion, then a single verdict.
//!
//! Run with `cargo test -p fermatph-core --test acceptance -- --nocapture` to
//! see the report lines.

mod common;

use std::time::{Duration, Instant};

use fermatph::comparison::bottleneck;
use fermatph::experiments::*;
use fermatph::geometry::gen_eyeglasses;
use fermatph::geometry::Eyeglasses;
use fermatph::metric::fermat_matrix;
use fermatph::persistence::{h0_mst, persistent_homology, rips_filtration, rips_persistence, Bar, PersistenceDiagram};
use fermatph::signal::{evolving_diagrams, DelayParams, EvolvingParams, PrefixMetric};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn outlier_invariance(report: &TrefoilReport, elapsed: Duration) -> Outcome {
    let c = &report.below_delta;
    outcome(
        report.geometric_outliers && c.equal && elapsed < Duration::from_secs(30),
        format!(
            "delta={:.4} eps*={:.4} p={} threshold={:.6} bars {} vs {} equal={} in {:.1?}",
            report.delta, report.epsilon_star, c.p, c.threshold, c.bars_without, c.bars_with, c.equal, elapsed
        ),
    )
}

fn large_p_threshold(report: &TrefoilReport) -> Outcome {
    let c = &report.below_diameter;
    outcome(
        report.geometric_outliers && c.equal,
        format!("p={} diam_p={:.6e} bars {} vs {} equal={}", c.p, c.threshold, c.bars_without, c.bars_with, c.equal),
    )
}

fn h0_decomposition(report: &TrefoilReport) -> Outcome {
    let h = &report.h0;
    outcome(
        h.pass,
        format!(
            "{} bars vs {} sample + {} quotient, max error {:.1e}",
            h.bars_with, h.bars_sample, h.bars_quotient, h.max_error
        ),
    )
}

fn shortest_path_oracle() -> Outcome {
    let mut g = common::rng(4);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let n = g.random_range(2..=8);
        let dim = g.random_range(1..=3);
        let p = g.random_range(1.0..4.0);
        let cloud = common::random_cloud(&mut g, n, dim);
        let d = fermat_matrix(&cloud, p).unwrap();
        for i in 0..n {
            for j in 0..i {
                worst = worst.max((d.get(i, j) - common::path_enumeration(&cloud, p, i, j)).abs());
            }
        }
    }
    outcome(worst < 1e-12, format!("50 clouds, max abs error {worst:.1e}"))
}

fn persistence_oracle() -> Outcome {
    let mut g = common::rng(5);
    let mut mismatches = 0;
    let mut bars = 0;
    for trial in 0..50 {
        let n = g.random_range(1..=7);
        let cloud = common::random_cloud(&mut g, n, 2);
        // Half the trials use a coarse grid of distances to force ties.
        let d = if trial % 2 == 0 {
            common::matrix_of(&cloud)
        } else {
            common::matrix_of(&cloud)
                .map(fermatph::metric::MetricKind::Euclidean, |v| (v * 4.0).ceil())
                .unwrap()
        };
        let oracle = common::naive_rank_diagram(&d, 2);
        let fast = rips_persistence(&d, 2, f64::INFINITY).unwrap();
        let explicit = persistent_homology(&rips_filtration(&d, 2, f64::INFINITY).unwrap()).unwrap();
        bars += oracle.bars.len();
        if fast != oracle || explicit != oracle || fast.restrict(0) != h0_mst(&d) {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("50 clouds, {bars} bars in degrees 0-2, {mismatches} mismatches"))
}

fn random_bars(g: &mut impl Rng) -> Vec<Bar> {
    let k = g.random_range(0..=5);
    (0..k)
        .map(|_| {
            // Quarter-unit grid so that ties between candidate costs occur.
            let birth = f64::from(g.random_range(0..12u32)) / 4.0;
            let len = if g.random_bool(0.5) {
                f64::from(g.random_range(1..12u32)) / 4.0
            } else {
                g.random_range(0.01..3.0)
            };
            Bar {
                degree: 1,
                birth,
                death: birth + len,
            }
        })
        .collect()
}

fn bottleneck_oracle() -> Outcome {
    let mut g = common::rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = PersistenceDiagram::new(random_bars(&mut g), f64::INFINITY);
        let b = PersistenceDiagram::new(random_bars(&mut g), f64::INFINITY);
        let (fast, _) = bottleneck(&a, &b, 1).unwrap();
        worst = worst.max((fast - common::brute_force_bottleneck(&a.bars, &b.bars)).abs());
    }
    outcome(worst <= 1e-12, format!("100 pairs, max abs error {worst:.1e}"))
}

fn stability() -> Outcome {
    let report = stability_experiment(&StabilityConfig::default()).unwrap();
    let worst = report
        .trials
        .iter()
        .map(|t| t.bottleneck / t.distortion)
        .fold(0.0, f64::max);
    outcome(
        report.pass,
        format!(
            "{} checks (20 trials x euclidean/fermat x H0/H1), worst d_b/sup|diff| = {worst:.3}",
            report.trials.len()
        ),
    )
}

fn eyeglasses() -> Outcome {
    let r = eyeglasses_experiment(&EyeglassesConfig::default()).unwrap();
    outcome(
        r.pass,
        format!(
            "euclidean salient={} second birth={:?} (target 1.0 +-15%), fermat salient={}, ratio 0.3",
            r.euclidean.salient, r.second_birth, r.fermat.salient
        ),
    )
}

fn convergence(report: &ConvergenceReport, elapsed: Duration) -> Outcome {
    let rows: Vec<String> = report
        .rows
        .iter()
        .map(|r| {
            let cv: Vec<String> = r.cv.iter().map(|c| format!("{c:.4}")).collect();
            format!("{}#{} [{}]", r.manifold.name(), r.seed, cv.join(" "))
        })
        .collect();
    outcome(
        report.pass && elapsed < Duration::from_secs(120),
        format!("CV over n=200/400/800: {} in {elapsed:.1?}", rows.join(", ")),
    )
}

fn lorenz(report: &LorenzReport) -> Outcome {
    let rows: Vec<String> = report
        .rows
        .iter()
        .map(|r| {
            let verdict = match r.pass {
                Some(true) => "pass",
                Some(false) => "fail",
                None => "report",
            };
            format!("D={} p={} n={} salient={} ({verdict})", r.dim, r.p, r.points, r.h1.salient)
        })
        .collect();
    outcome(report.pass, rows.join("; "))
}

fn changepoint() -> Outcome {
    let r = changepoint_experiment(&ChangePointConfig::default()).unwrap();
    let runs: Vec<String> = r.runs.iter().map(|run| format!("{}", run.top_peak)).collect();
    let hits = r.runs.iter().filter(|run| run.hit).count();
    outcome(
        r.pass,
        format!("switch at {}, top peaks [{}], {hits}/5 within 10%", r.switch_at, runs.join(", ")),
    )
}

fn performance() -> Outcome {
    let cloud = fermatph::geometry::gen_trefoil(1000, 0.05, 12).unwrap();
    let pool = |threads| rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let (four, elapsed) = timed(|| pool(4).install(|| fermat_matrix(&cloud, 2.0).unwrap()));
    let one = pool(1).install(|| fermat_matrix(&cloud, 2.0).unwrap());
    let same_matrix = four.lower().iter().zip(one.lower()).all(|(a, b)| a.to_bits() == b.to_bits());

    let eye = gen_eyeglasses(120, 0.02, 3, &Eyeglasses::default()).unwrap();
    let ts = fermatph::geometry::TimeSeries::new(eye.points().map(|p| p[0]).collect(), 1.0).unwrap();
    let delay = DelayParams { tau: 3, dim: 3, stride: 1 };
    let params = EvolvingParams {
        p: 2.0,
        step: 19,
        max_dim: 1,
        metric: PrefixMetric::Inherited,
    };
    let dgms_four = pool(4).install(|| evolving_diagrams(&ts, &delay, &params).unwrap());
    let dgms_one = pool(1).install(|| evolving_diagrams(&ts, &delay, &params).unwrap());
    let same_dgms = dgms_four == dgms_one;
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    outcome(
        elapsed < Duration::from_secs(10) && same_matrix && same_dgms,
        format!(
            "n=1000 D=3 fermat in {elapsed:.2?} with a 4-thread pool on {cores} available core(s); \
             bitwise equal across 1/4 threads: matrix={same_matrix} prefix diagrams={same_dgms}"
        ),
    )
}

#[test]
fn acceptance() {
    let (trefoil, trefoil_time) = timed(|| trefoil_experiment(&TrefoilConfig::default()).unwrap());
    let (conv, conv_time) = timed(|| convergence_experiment(&ConvergenceConfig::default()).unwrap());
    let lorenz_report = lorenz_experiment(&LorenzConfig::default()).unwrap();

    let results = [
        ("outlier invariance", outlier_invariance(&trefoil, trefoil_time)),
        ("large-p threshold", large_p_threshold(&trefoil)),
        ("H0 decomposition", h0_decomposition(&trefoil)),
        ("shortest-path oracle", shortest_path_oracle()),
        ("persistence oracle", persistence_oracle()),
        ("bottleneck oracle", bottleneck_oracle()),
        ("stability", stability()),
        ("eyeglasses homology", eyeglasses()),
        ("convergence", convergence(&conv, conv_time)),
        ("lorenz pipeline", lorenz(&lorenz_report)),
        ("change-point synthetic", changepoint()),
        ("performance envelope", performance()),
    ];
    let mut failed = Vec::new();
    for (i, (name, o)) in results.iter().enumerate() {
        println!("[{}] criterion {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
