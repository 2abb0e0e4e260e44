//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them).
//!
//! Monte Carlo criteria run at fixed seeds; tolerances cover binomial
//! standard error plus seed-to-seed variation at the stated replicate
//! budgets.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use exind::climate::{self, CsvColumns};
use exind::estimate;
use exind::series::Series;
use exind::simulate::{simulate, ModelFamily, ModelSpec};
use exind::stdf::{self, ArchCalibration};
use exind::study::{run_study, EstimatorKind, McReport, StudyConfig};
use exind::Rational;

/// Collects check failures so each criterion prints exactly one line.
struct Criterion {
    number: u32,
    title: &'static str,
    started: Instant,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            started: Instant::now(),
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl Into<String>) {
        if !ok {
            self.failures.push(detail.into());
        }
    }

    fn check_runtime(&mut self, budget: Duration) {
        let elapsed = self.started.elapsed();
        self.check(
            elapsed <= budget,
            format!("runtime {elapsed:.1?} exceeded budget {budget:?}"),
        );
    }

    fn finish(self) {
        let elapsed = self.started.elapsed();
        if self.failures.is_empty() {
            println!(
                "acceptance criterion {:2}: PASS ({:6.1?}) {}",
                self.number, elapsed, self.title
            );
        } else {
            println!(
                "acceptance criterion {:2}: FAIL ({:6.1?}) {} :: {}",
                self.number,
                elapsed,
                self.title,
                self.failures.join(" | ")
            );
            panic!("criterion {} failed: {:?}", self.number, self.failures);
        }
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn benchmark(family: ModelFamily) -> ModelSpec {
    ModelSpec::benchmark(family)
}

/// Shared 200-replicate selector study over MM, MAX-AR and AR-Cauchy at
/// k in {50, 75, 100} (used by criteria 3 and 5).
fn selector_study() -> &'static McReport {
    static STUDY: OnceLock<McReport> = OnceLock::new();
    STUDY.get_or_init(|| {
        let mut config = StudyConfig::new(vec![
            benchmark(ModelFamily::MovingMaxima),
            benchmark(ModelFamily::MaxAr),
            benchmark(ModelFamily::ArCauchy),
        ]);
        config.reps = 200;
        config.k_grid = vec![50, 75, 100];
        config.estimators = vec![EstimatorKind::Auto];
        config.base_seed = 42;
        run_study(&config).expect("valid config")
    })
}

#[test]
fn criterion_01_ground_truth_table() {
    let mut c = Criterion::new(1, "closed-form (theta, d*) table, exact rational equality");
    let cases = [
        (benchmark(ModelFamily::MovingMaxima), rat(1, 3), 2usize),
        (benchmark(ModelFamily::ArCauchy), rat(3, 4), 3),
        (benchmark(ModelFamily::ArNormal), rat(1, 1), 1),
        (benchmark(ModelFamily::MaxAr), rat(1, 2), 2),
    ];
    for (spec, theta, d_star) in cases {
        match stdf::theta_and_dstar::<Rational>(&spec, 10) {
            Ok(profile) => {
                c.check(
                    profile.theta == theta,
                    format!("{}: theta {} != {theta}", spec.label(), profile.theta),
                );
                c.check(
                    profile.d_star == d_star,
                    format!("{}: d* {} != {d_star}", spec.label(), profile.d_star),
                );
            }
            Err(e) => c.check(false, format!("{}: {e}", spec.label())),
        }
    }
    c.check_runtime(Duration::from_secs(1));
    c.finish();
}

#[test]
fn criterion_02_closed_form_spots_and_mc_oracle() {
    let mut c = Criterion::new(2, "ell spot values exact; MC oracle agrees within 3 SE");
    let mm = benchmark(ModelFamily::MovingMaxima);
    let max_ar = benchmark(ModelFamily::MaxAr);
    let arc = benchmark(ModelFamily::ArCauchy);
    let arn = benchmark(ModelFamily::ArNormal);

    c.check(
        stdf::ell_closed_form::<Rational>(&mm, 2).unwrap() == rat(4, 3),
        "mm ell_2 != 4/3",
    );
    for s in 2..=5u32 {
        // s - s z + z at z = 1/2
        let want = rat(s as i64, 1) - rat(s as i64, 2) + rat(1, 2);
        c.check(
            stdf::ell_closed_form::<Rational>(&max_ar, s).unwrap() == want,
            format!("max-ar ell_{s} != {want}"),
        );
    }
    c.check(
        stdf::ell_closed_form::<Rational>(&arc, 2).unwrap() == rat(2, 1),
        "ar-cauchy ell_2 != 2",
    );
    c.check(
        stdf::ell_closed_form::<Rational>(&arc, 3).unwrap() == rat(11, 4),
        "ar-cauchy ell_3 != 2.75",
    );

    for spec in [mm, arc, arn, max_ar] {
        for s in [2u32, 3, 4] {
            let exact: f64 = stdf::ell_closed_form::<f64>(&spec, s).unwrap();
            let mc = stdf::ell_monte_carlo(&spec, s, 100_000, 50, 42).unwrap();
            c.check(
                (mc.estimate - exact).abs() <= 3.0 * mc.std_error,
                format!(
                    "{} s={s}: MC {:.4} vs exact {exact:.4} (3 SE = {:.4})",
                    spec.label(),
                    mc.estimate,
                    3.0 * mc.std_error
                ),
            );
        }
    }
    c.check_runtime(Duration::from_secs(120));
    c.finish();
}

#[test]
fn criterion_03_selector_accuracy() {
    let mut c = Criterion::new(3, "correct-selection rates at n=5000, reps=200, d_u=10");
    let report = selector_study();
    for model in ["mm", "max-ar"] {
        for k in [50usize, 75, 100] {
            let ck = report.c_k(model, k).unwrap();
            c.check(ck >= 0.98, format!("{model}: c({k}) = {ck} < 0.98"));
        }
    }
    for (k, floor) in [(50usize, 0.90), (75, 0.95), (100, 0.95)] {
        let ck = report.c_k("ar-cauchy", k).unwrap();
        c.check(ck >= floor, format!("ar-cauchy: c({k}) = {ck} < {floor}"));
    }
    c.check_runtime(Duration::from_secs(300));
    c.finish();
}

#[test]
fn criterion_04_ar_normal_selection_curve() {
    let mut c = Criterion::new(4, "AR-Normal c(k) curve at reps=1000 within +/-0.06");
    let mut config = StudyConfig::new(vec![benchmark(ModelFamily::ArNormal)]);
    config.reps = 1000;
    config.k_grid = vec![30, 40, 50, 60, 70, 80];
    config.estimators = vec![EstimatorKind::Auto];
    config.base_seed = 42;
    let report = run_study(&config).expect("valid config");
    let reference = [0.915, 0.826, 0.718, 0.421, 0.295, 0.125];
    for (&k, &want) in config.k_grid.iter().zip(&reference) {
        let got = report.c_k("ar-normal", k).unwrap();
        c.check(
            (got - want).abs() <= 0.06,
            format!("c({k}) = {got:.3}, reference {want:.3}"),
        );
    }
    c.check_runtime(Duration::from_secs(600));
    c.finish();
}

#[test]
fn criterion_05_estimator_accuracy() {
    let mut c = Criterion::new(
        5,
        "mean of the selected-order estimate within 3 empirical SE of theta at k=100",
    );
    let report = selector_study();
    for (model, truth) in [("mm", 1.0 / 3.0), ("max-ar", 0.5), ("ar-cauchy", 0.75)] {
        let cell = report.cell(model, EstimatorKind::Auto, 100).unwrap();
        // Empirical standard error of a single estimate: the replicate
        // standard deviation.
        let se = cell.variance.sqrt();
        c.check(
            (cell.mean_theta - truth).abs() <= 3.0 * se,
            format!(
                "{model}: mean {:.4} vs theta {truth:.4} (3 SE = {:.4})",
                cell.mean_theta,
                3.0 * se
            ),
        );
    }
    c.finish();
}

#[test]
fn criterion_06_mse_ordering() {
    let mut c = Criterion::new(6, "minimum MSE over k: selected-order estimator leads");
    let mut config = StudyConfig::new(vec![
        benchmark(ModelFamily::MovingMaxima),
        benchmark(ModelFamily::ArCauchy),
        benchmark(ModelFamily::ArNormal),
        benchmark(ModelFamily::MaxAr),
        benchmark(ModelFamily::SquaredArch),
        benchmark(ModelFamily::Arch),
    ]);
    config.reps = 200;
    config.base_seed = 42;
    let report = run_study(&config).expect("valid config");
    for spec in &config.models {
        let model = spec.label();
        let auto = report.min_mse(model, EstimatorKind::Auto).unwrap();
        let intervals = report.min_mse(model, EstimatorKind::Intervals).unwrap();
        c.check(
            auto <= intervals,
            format!("{model}: min MSE auto {auto:.3e} > intervals {intervals:.3e}"),
        );
        // The squared ARCH model is the documented exception against the
        // sliding-blocks estimator.
        if model != "sarch" {
            let sliding = report.min_mse(model, EstimatorKind::SlidingBlocks).unwrap();
            c.check(
                auto <= sliding,
                format!("{model}: min MSE auto {auto:.3e} > sliding {sliding:.3e}"),
            );
        }
    }
    c.finish();
}

/// Independent oracle: the defining double loop of the exceedance estimator.
fn naive_theta(values: &[f64], k: usize, d: usize) -> f64 {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let u = sorted[n - k - 1];
    let mut count = 0usize;
    for i in 1..=(n - d + 1) {
        let mut window_max = f64::NEG_INFINITY;
        for j in (i + 1)..=(i + d - 1) {
            window_max = window_max.max(values[j - 1]);
        }
        if window_max <= u && u < values[i - 1] {
            count += 1;
        }
    }
    count as f64 / k as f64
}

#[test]
fn criterion_07_exact_oracle_equivalence() {
    let mut c = Criterion::new(7, "estimator equals the naive double-loop oracle exactly");
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    let mut mismatches = 0u32;
    for _ in 0..1000 {
        let mut values: Vec<f64> = (1..=12).map(f64::from).collect();
        values.shuffle(&mut rng);
        let series = Series::new(values.clone()).unwrap();
        for k in [2usize, 3] {
            for d in [1usize, 2, 3] {
                let got = estimate::theta_hat(&series, k, d).unwrap().theta_hat;
                if got != naive_theta(&values, k, d) {
                    mismatches += 1;
                }
            }
        }
    }
    c.check(mismatches == 0, format!("{mismatches} mismatches"));
    c.finish();
}

#[test]
fn criterion_08_invariant_suite() {
    let mut c = Criterion::new(8, "monotonicity, rank invariance, d=1 identity, segmentation");
    let spec = benchmark(ModelFamily::ArCauchy);

    // Monotonicity in d over 100 paths.
    for rep in 0..100u64 {
        let path = simulate(&spec, 2000, 1000 + rep).unwrap();
        let profile = estimate::theta_profile(&path.series, 80, 10).unwrap();
        for d in 1..=9 {
            if profile.theta(d + 1) > profile.theta(d) {
                c.check(
                    false,
                    format!("rep {rep}: theta({}) > theta({d})", d + 1),
                );
            }
        }
    }

    // Rank invariance, bit-exact: exp on the Gaussian-margin model (whose
    // range exp can represent) and the odd cube on the heavy-tailed one.
    let gaussian = simulate(&benchmark(ModelFamily::ArNormal), 3000, 7).unwrap().series;
    let heavy = simulate(&spec, 3000, 7).unwrap().series;
    let exp = Series::new(gaussian.values().iter().map(|v| v.exp()).collect()).unwrap();
    let cubed = Series::new(heavy.values().iter().map(|v| v.powi(3)).collect()).unwrap();
    for k in [40usize, 100] {
        for d in [1usize, 2, 5] {
            let tg = estimate::theta_hat(&gaussian, k, d).unwrap().theta_hat;
            let te = estimate::theta_hat(&exp, k, d).unwrap().theta_hat;
            c.check(tg == te, format!("exp rank invariance broken at k={k}, d={d}"));
            let th = estimate::theta_hat(&heavy, k, d).unwrap().theta_hat;
            let tc = estimate::theta_hat(&cubed, k, d).unwrap().theta_hat;
            c.check(th == tc, format!("cube rank invariance broken at k={k}, d={d}"));
        }
    }

    // d = 1 counts every exceedance on distinct data.
    for rep in 0..20u64 {
        let path = simulate(&spec, 1500, 300 + rep).unwrap();
        let r = estimate::theta_hat(&path.series, 60, 1).unwrap();
        c.check(
            r.theta_hat == 1.0 && r.warnings.is_empty(),
            format!("rep {rep}: theta(1) = {} with {:?}", r.theta_hat, r.warnings),
        );
    }

    // Single-segment series degenerate to the pooled estimator bit-for-bit.
    let path = simulate(&spec, 2500, 99).unwrap();
    let pooled = path.series.clone();
    let one_segment = Series::with_segment_length(pooled.values().to_vec(), pooled.len()).unwrap();
    for k in [30usize, 90] {
        for d in [1usize, 3, 7] {
            let a = estimate::theta_hat(&pooled, k, d).unwrap();
            let b = estimate::theta_hat_segmented(&one_segment, k, d).unwrap();
            c.check(
                a.theta_hat == b.theta_hat && a.count == b.count,
                format!("segmented degeneracy broken at k={k}, d={d}"),
            );
        }
    }
    c.finish();
}

#[test]
fn criterion_09_heatwave_pipeline() {
    let mut c = Criterion::new(
        9,
        "seasonal pipeline: drop accounting, diagnostic shape, determinism (bundled fixture)",
    );
    let fixture = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data/synthetic_temps.csv");
    let panel = climate::load_panel(
        &fixture,
        "testville",
        (2001, 2006),
        &[6, 7, 8],
        &CsvColumns::default(),
    )
    .unwrap();
    c.check(
        panel.years == vec![2001, 2002, 2003, 2005, 2006],
        format!("retained years {:?}", panel.years),
    );
    c.check(
        panel.dropped_years.len() == 1 && panel.dropped_years[0].0 == 2004,
        format!("dropped {:?}", panel.dropped_years),
    );
    c.check(
        panel.years.len() + panel.dropped_years.len() == 6,
        "year accounting broken",
    );
    c.check(panel.series.len() == 5 * 92, "panel length != 5 * 92");

    let diag = climate::d_diagnostic(&panel, &[20, 40], 8).unwrap();
    c.check(diag.rows.len() == 16, format!("{} diagnostic rows", diag.rows.len()));
    c.check(diag.selected.len() == 2, "selected orders missing");
    c.check(
        diag.rows.iter().all(|r| r.delta >= 0.0),
        "negative difference in diagnostic",
    );

    let rows = climate::heatwave_report(&panel, &[20, 40, 60], 2).unwrap();
    c.check(
        rows.iter().all(|r| (r.expected_duration - 1.0 / r.theta_hat).abs() < 1e-15),
        "duration is not the reciprocal",
    );
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    climate::write_heatwave_csv(&rows, &a).unwrap();
    climate::write_heatwave_csv(&rows, &b).unwrap();
    c.check(
        std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap(),
        "report not byte-deterministic",
    );
    // Reproducing the published station table (thresholds near 30-41 C,
    // durations 1.3-8.3 days) needs the real station data, which is not
    // bundled; see the README for that optional check.
    c.finish();
}

#[test]
fn criterion_10_arch_has_no_plateau_mm_does() {
    let mut c = Criterion::new(
        10,
        "MC increments: ARCH decreases in every window of 3; MM plateaus at 2",
    );
    let cal = ArchCalibration::default();
    let tail_count = 18.0;
    let arch = stdf::arch_no_finite_d_check(10, 5000, 200, tail_count, 1).unwrap();
    let mm = stdf::delta_profile_mc(
        &benchmark(ModelFamily::MovingMaxima),
        10,
        5000,
        200,
        tail_count,
        1,
        &cal,
    )
    .unwrap();

    // Both profiles are non-increasing within noise.
    for profile in [&arch, &mm] {
        for s in 1..=9usize {
            let slack = 2.0
                * (profile.std_error(s).powi(2) + profile.std_error(s + 1).powi(2)).sqrt();
            c.check(
                profile.delta(s + 1) <= profile.delta(s) + slack,
                format!(
                    "{}: Delta({}) = {:.3} above Delta({s}) = {:.3} beyond noise",
                    profile.spec.label(),
                    s + 1,
                    profile.delta(s + 1),
                    profile.delta(s)
                ),
            );
        }
    }

    // ARCH: a strict decrease beyond 2 SE somewhere in every window of 3
    // consecutive orders up to 10 - no plateau anywhere.
    for s in 1..=8 {
        c.check(
            arch.window_decrease_significant(s, 2.0),
            format!("ARCH window {{{s},{},{}}} shows no significant decrease", s + 1, s + 2),
        );
    }
    // Sanity on the profile itself: Delta(1) = 1 and the tail stays above
    // the known runs limit within noise.
    c.check(
        (arch.delta(1) - 1.0).abs() <= 5.0 * arch.std_error(1),
        format!("ARCH Delta(1) = {:.3}", arch.delta(1)),
    );
    c.check(
        arch.delta(10) > 0.721 - 3.0 * arch.std_error(10),
        format!(
            "ARCH Delta(10) = {:.3} not above 0.721 - 3 SE = {:.3}",
            arch.delta(10),
            0.721 - 3.0 * arch.std_error(10)
        ),
    );

    // MM: the drop into the plateau is overwhelming, and at least one window
    // of 3 consecutive orders in [2, 10] shows no significant decrease.
    c.check(
        mm.decrease_zscore(1, 2) > 2.0,
        format!("MM drop z(1,2) = {:.2}", mm.decrease_zscore(1, 2)),
    );
    let quiet_windows = (2..=8)
        .filter(|&s| !mm.window_decrease_significant(s, 2.0))
        .count();
    c.check(
        quiet_windows >= 1,
        "MM shows significant decreases in every window beyond the plateau onset",
    );
    c.check(
        (mm.delta(2) - 1.0 / 3.0).abs() <= 5.0 * mm.std_error(2),
        format!("MM Delta(2) = {:.3} far from 1/3", mm.delta(2)),
    );
    c.finish();
}
