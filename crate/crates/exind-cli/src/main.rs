//! `exind`: extremal index estimation from the command line.

mod input;
mod manifest;
mod svg;

use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use exind::climate::{self, CsvColumns};
use exind::estimate;
use exind::simulate::{simulate, ModelFamily, ModelSpec};
use exind::stdf;
use exind::study::{self, EstimatorKind, StudyConfig};
use exind::{DSelectionResult, EstimateResult, Rational};
use manifest::RunManifest;

#[derive(Parser)]
#[command(
    name = "exind",
    version,
    about = "Extremal index estimation for stationary time series",
    after_help = "Exit codes: 0 success, 2 parameter/usage error, 3 data error, 4 internal error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark process path as single-column CSV.
    Simulate(SimulateArgs),
    /// Estimate the extremal index from a single-column numeric input.
    Estimate(EstimateArgs),
    /// Select the local dependence order from the difference profile.
    SelectD(SelectDArgs),
    /// Closed-form (or Monte Carlo) tail dependence tables for a model.
    Stdf(StdfArgs),
    /// Replicated simulation study: MSE curves and selection rates.
    MseStudy(MseStudyArgs),
    /// Seasonal temperature pipeline: heatwave duration table.
    Heatwave(HeatwaveArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

/// Window order argument: a fixed integer or data-driven selection.
#[derive(Clone, Copy, Debug)]
enum DArg {
    Auto,
    Fixed(usize),
}

impl FromStr for DArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(DArg::Auto)
        } else {
            s.parse::<usize>()
                .map(DArg::Fixed)
                .map_err(|_| format!("expected `auto` or a positive integer, got `{s}`"))
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Model family: mm, ar-cauchy, ar-normal, max-ar, sarch, arch.
    #[arg(long)]
    model: String,
    /// Model parameter (m or z); defaults to the benchmark value.
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
    /// Path length.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted. A run manifest is written alongside.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input file with one numeric value per line; `-` for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Tail sample size: the threshold is the (k+1)-th largest observation.
    #[arg(long)]
    k: usize,
    /// Window order, or `auto` for data-driven selection.
    #[arg(long, default_value = "auto")]
    d: DArg,
    /// Upper bound of the selection search range.
    #[arg(long, default_value_t = 10)]
    d_u: usize,
    /// Treat the input as equal-length independent segments of this length.
    #[arg(long)]
    segment_length: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct SelectDArgs {
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    d_u: usize,
    #[arg(long)]
    segment_length: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Args)]
struct StdfArgs {
    #[arg(long)]
    model: String,
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
    #[arg(long, default_value_t = 10)]
    s_max: u32,
    /// Estimate the increment profile by Monte Carlo instead of closed form
    /// (required for the ARCH family).
    #[arg(long)]
    mc: bool,
    /// Monte Carlo: path length.
    #[arg(long, default_value_t = 5000)]
    n: usize,
    /// Monte Carlo: number of replicate paths.
    #[arg(long, default_value_t = 200)]
    reps: usize,
    /// Monte Carlo: expected number of exceedances per path (threshold level).
    #[arg(long, default_value_t = 18.0)]
    tail_count: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MseStudyArgs {
    /// Comma-separated models, each `family` or `family:param`.
    #[arg(long, default_value = "mm,ar-cauchy,ar-normal,max-ar,sarch,arch")]
    models: String,
    #[arg(long, default_value_t = 5000)]
    n: usize,
    #[arg(long, default_value_t = 1000)]
    reps: usize,
    /// Grid as `start:end:step` or a comma-separated list.
    #[arg(long, default_value = "30:300:10")]
    k_grid: String,
    #[arg(long, default_value_t = 10)]
    d_u: usize,
    /// Comma-separated subset of auto, sliding-blocks, intervals.
    #[arg(long, default_value = "auto,sliding-blocks,intervals")]
    estimators: String,
    #[arg(long, default_value_t = 0x5EED)]
    seed: u64,
    /// Worker threads for replicate-level parallelism (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Keep the replicate-level raw table in the outputs.
    #[arg(long)]
    keep_replicates: bool,
    /// Also render SVG charts next to the plot-data files.
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct HeatwaveArgs {
    /// Daily-maximum temperature CSV (`date,station,value` by default).
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    station: String,
    /// Year range `from:to`, inclusive.
    #[arg(long)]
    years: String,
    /// Comma-separated tail sizes for the report rows.
    #[arg(long, default_value = "50,100,200")]
    k: String,
    /// Window order, or `auto` to select from the diagnostic curves.
    #[arg(long, default_value = "auto")]
    d: DArg,
    /// Diagnostic search depth (orders 1..=h_max are scanned).
    #[arg(long, default_value_t = 10)]
    h_max: usize,
    /// Season months (February not allowed; the default June-August season
    /// spans 92 days in every year).
    #[arg(long, default_value = "6,7,8")]
    months: String,
    #[arg(long, default_value = "date")]
    col_date: String,
    #[arg(long, default_value = "station")]
    col_station: String,
    #[arg(long, default_value = "value")]
    col_value: String,
    /// Grid for the theta stability curve, `start:end:step`.
    #[arg(long, default_value = "30:250:10")]
    stability_grid: String,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

fn main() {
    // Die quietly on a closed pipe (e.g. `exind simulate ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => {}
        Ok(Err(err)) => {
            eprintln!("error: {err:#}");
            std::process::exit(exit_code(&err));
        }
        Err(_) => {
            eprintln!("error: internal failure");
            std::process::exit(4);
        }
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<exind::Error>() {
        Some(
            exind::Error::Parameter { .. }
            | exind::Error::Domain(_)
            | exind::Error::UnsupportedModel { .. },
        ) => 2,
        // Library data problems, input parsing and IO are data errors.
        _ => 3,
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::SelectD(args) => cmd_select_d(args),
        Command::Stdf(args) => cmd_stdf(args),
        Command::MseStudy(args) => cmd_mse_study(args),
        Command::Heatwave(args) => cmd_heatwave(args),
    }
}

fn parse_model(name: &str, param: Option<f64>) -> anyhow::Result<ModelSpec> {
    let (family_text, inline_param) = match name.split_once(':') {
        Some((f, p)) => {
            let value: f64 = p.parse().map_err(|_| exind::Error::Parameter {
                name: "param",
                message: format!("bad inline parameter `{p}`"),
            })?;
            (f, Some(value))
        }
        None => (name, None),
    };
    let family: ModelFamily = family_text.parse()?;
    let spec = match inline_param.or(param) {
        Some(p) => ModelSpec::new(family, p)?,
        None => ModelSpec::benchmark(family),
    };
    Ok(spec)
}

fn parse_grid(flag: &'static str, text: &str) -> anyhow::Result<Vec<usize>> {
    let grid: Vec<usize> = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            bail!(exind::Error::Parameter {
                name: flag,
                message: format!("expected start:end:step, got `{text}`"),
            });
        }
        let (start, end, step): (usize, usize, usize) = (
            parts[0].parse().context("grid start")?,
            parts[1].parse().context("grid end")?,
            parts[2].parse().context("grid step")?,
        );
        if step == 0 || start > end {
            bail!(exind::Error::Parameter {
                name: flag,
                message: "need start <= end and step > 0".into(),
            });
        }
        (start..=end).step_by(step).collect()
    } else {
        text.split(',')
            .map(|v| v.trim().parse::<usize>().with_context(|| format!("grid entry `{v}`")))
            .collect::<anyhow::Result<_>>()?
    };
    if grid.is_empty() {
        bail!(exind::Error::Parameter {
            name: flag,
            message: "grid is empty".into(),
        });
    }
    Ok(grid)
}

fn print_warnings(warnings: &[exind::Warning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn optional<T: ToString>(value: &Option<T>) -> String {
    value.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

fn cmd_simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let spec = parse_model(&args.model, args.param)?;
    let path = simulate(&spec, args.n, args.seed)?;
    let mut body = format!(
        "# exind simulate model={} param={} n={} seed={} burn_in={}\nvalue\n",
        spec.label(),
        spec.param(),
        args.n,
        args.seed,
        path.burn_in
    );
    for v in path.series.values() {
        body.push_str(&format!("{v}\n"));
    }
    match &args.out {
        Some(out) => {
            std::fs::write(out, &body).with_context(|| format!("writing {}", out.display()))?;
            RunManifest::new(
                "simulate",
                serde_json::json!({
                    "model": spec.label(),
                    "param": spec.param(),
                    "n": args.n,
                    "seed": args.seed,
                }),
                vec![args.seed],
            )
            .with_outputs([out
                .file_name()
                .map(|f| f.to_string_lossy().into_owned())
                .unwrap_or_default()])
            .write(&out.with_extension("manifest.json"))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// estimate / select-d
// ---------------------------------------------------------------------------

fn cmd_estimate(args: EstimateArgs) -> anyhow::Result<()> {
    let series = input::read_series(&args.input, args.segment_length)?;
    let segmented = args.segment_length.is_some();
    let (estimate, selection): (EstimateResult, Option<DSelectionResult>) = match args.d {
        DArg::Auto => {
            let (est, sel) = if segmented {
                estimate::theta_hat_auto_segmented(&series, args.k, args.d_u)?
            } else {
                estimate::theta_hat_auto(&series, args.k, args.d_u)?
            };
            (est, Some(sel))
        }
        DArg::Fixed(d) => {
            let est = if segmented {
                estimate::theta_hat_segmented(&series, args.k, d)?
            } else {
                estimate::theta_hat(&series, args.k, d)?
            };
            (est, None)
        }
    };
    print_warnings(&estimate.warnings);
    match args.format {
        OutputFormat::Json => {
            let doc = serde_json::json!({ "estimate": estimate, "selection": selection });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        OutputFormat::Csv => {
            println!("theta_hat,k,d,threshold,count,clamped,d_star_hat,rule_threshold");
            println!(
                "{},{},{},{},{},{},{},{}",
                estimate.theta_hat,
                optional(&estimate.k),
                optional(&estimate.d),
                optional(&estimate.threshold),
                estimate.count,
                optional(&estimate.clamped),
                optional(&selection.as_ref().map(|s| s.d_star_hat)),
                optional(&selection.as_ref().map(|s| s.rule_threshold)),
            );
        }
    }
    Ok(())
}

fn cmd_select_d(args: SelectDArgs) -> anyhow::Result<()> {
    let series = input::read_series(&args.input, args.segment_length)?;
    let selection = if args.segment_length.is_some() {
        estimate::select_d_star_segmented(&series, args.k, args.d_u)?
    } else {
        estimate::select_d_star(&series, args.k, args.d_u)?
    };
    print_warnings(&selection.warnings);
    match args.format {
        OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&selection)?),
        OutputFormat::Csv => {
            println!(
                "# d_star_hat={} d_u={} k={} rule_threshold={}",
                selection.d_star_hat, selection.d_u, args.k, selection.rule_threshold
            );
            println!("h,delta,rule_threshold");
            for (h, delta) in selection.profile.iter().enumerate() {
                println!("{},{},{}", h + 1, delta, selection.rule_threshold);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// stdf
// ---------------------------------------------------------------------------

fn print_stdf_profile<S: std::fmt::Display>(spec: &ModelSpec, profile: &stdf::StdfProfile<S>) {
    println!(
        "# model={} param={} theta={} d_star={}",
        spec.label(),
        spec.param(),
        profile.theta,
        profile.d_star
    );
    println!("s,ell,delta");
    for (i, (ell, delta)) in profile.ell.iter().zip(&profile.delta).enumerate() {
        println!("{},{ell},{delta}", i + 1);
    }
}

fn cmd_stdf(args: StdfArgs) -> anyhow::Result<()> {
    let spec = parse_model(&args.model, args.param)?;
    if args.mc {
        let profile = stdf::delta_profile_mc(
            &spec,
            args.s_max as usize,
            args.n,
            args.reps,
            args.tail_count,
            args.seed,
            &stdf::ArchCalibration::default(),
        )?;
        println!(
            "# model={} param={} n={} reps={} tail_count={} seed={} threshold={}",
            spec.label(),
            spec.param(),
            args.n,
            args.reps,
            args.tail_count,
            args.seed,
            profile.threshold
        );
        println!("s,delta_hat,std_error");
        for s in 1..=profile.s_max {
            println!("{s},{},{}", profile.delta(s), profile.std_error(s));
        }
        return Ok(());
    }
    // Exact rational arithmetic when the parameter allows it; f64 otherwise.
    match stdf::theta_and_dstar::<Rational>(&spec, args.s_max) {
        Ok(profile) => print_stdf_profile(&spec, &profile),
        Err(exind::Error::Parameter { .. }) => {
            eprintln!("note: parameter not exactly representable; using f64 arithmetic");
            print_stdf_profile(&spec, &stdf::theta_and_dstar::<f64>(&spec, args.s_max)?);
        }
        Err(other) => return Err(other.into()),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// mse-study
// ---------------------------------------------------------------------------

fn cmd_mse_study(args: MseStudyArgs) -> anyhow::Result<()> {
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    let models = args
        .models
        .split(',')
        .map(|m| parse_model(m.trim(), None))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let estimators = args
        .estimators
        .split(',')
        .map(|e| match e.trim() {
            "auto" => Ok(EstimatorKind::Auto),
            "sliding-blocks" => Ok(EstimatorKind::SlidingBlocks),
            "intervals" => Ok(EstimatorKind::Intervals),
            other => Err(anyhow!(exind::Error::Parameter {
                name: "estimators",
                message: format!("unknown estimator `{other}`"),
            })),
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut config = StudyConfig::new(models);
    config.n = args.n;
    config.reps = args.reps;
    config.k_grid = parse_grid("k-grid", &args.k_grid)?;
    config.d_u = args.d_u;
    config.estimators = estimators;
    config.base_seed = args.seed;
    config.keep_replicates = args.keep_replicates;

    let report = study::run_study(&config)?;
    std::fs::create_dir_all(&args.out_dir)?;
    let mut written = study::write_report(&report, &args.out_dir)?;

    if args.svg {
        for curve in study::mse_curves(&report) {
            let chart = svg::LineChart {
                title: format!("simulated MSE: {}", curve.model),
                x_label: "k".into(),
                y_label: "MSE".into(),
                log_y: true,
                series: curve
                    .series
                    .iter()
                    .map(|(name, values)| {
                        let points = curve
                            .k
                            .iter()
                            .zip(values)
                            .map(|(&k, &v)| (k as f64, v))
                            .collect();
                        (name.clone(), points)
                    })
                    .collect(),
            };
            let path = args.out_dir.join(format!("plot_mse_{}.svg", curve.model));
            std::fs::write(&path, chart.render())?;
            written.push(path);
        }
    }

    println!("model,estimator,min_mse_over_k");
    for spec in &config.models {
        for &est in &config.estimators {
            if let Some(min) = report.min_mse(spec.label(), est) {
                println!("{},{},{min}", spec.label(), est.label());
            }
        }
    }

    RunManifest::new("mse-study", serde_json::to_value(&config)?, vec![config.base_seed])
        .with_outputs(manifest::relative_names(&args.out_dir, &written))
        .write(&args.out_dir.join("manifest.json"))?;
    Ok(())
}

// ---------------------------------------------------------------------------
// heatwave
// ---------------------------------------------------------------------------

fn cmd_heatwave(args: HeatwaveArgs) -> anyhow::Result<()> {
    let (from, to) = args.years.split_once(':').ok_or_else(|| {
        anyhow!(exind::Error::Parameter {
            name: "years",
            message: format!("expected from:to, got `{}`", args.years),
        })
    })?;
    let years: (i32, i32) = (
        from.parse().context("years from")?,
        to.parse().context("years to")?,
    );
    let months = args
        .months
        .split(',')
        .map(|m| m.trim().parse::<u32>().with_context(|| format!("month `{m}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let columns = CsvColumns {
        date: args.col_date.clone(),
        station: args.col_station.clone(),
        value: args.col_value.clone(),
    };
    let panel = climate::load_panel(&args.csv, &args.station, years, &months, &columns)?;
    for (year, reason) in &panel.dropped_years {
        eprintln!("warning: dropped year {year}: {reason}");
    }
    eprintln!(
        "loaded {}: {} seasons x {} days = {} observations",
        panel.station,
        panel.years.len(),
        panel.season_length,
        panel.series.len()
    );

    let k_list = parse_grid("k", &args.k)?;
    let diagnostic = climate::d_diagnostic(&panel, &k_list, args.h_max)?;
    let d = match args.d {
        DArg::Fixed(d) => d,
        DArg::Auto => {
            // Majority vote over the per-k selections; ties go to the larger
            // order, which keeps the estimator valid at the cost of variance.
            let mut votes: std::collections::BTreeMap<usize, usize> = Default::default();
            for &(_, sel) in &diagnostic.selected {
                *votes.entry(sel).or_default() += 1;
            }
            let best = votes.values().copied().max().unwrap_or(0);
            let choice = votes
                .iter()
                .filter(|(_, &count)| count == best)
                .map(|(&d, _)| d)
                .max()
                .ok_or_else(|| anyhow!("empty diagnostic"))?;
            eprintln!(
                "selected d = {choice} (per-k selections: {:?})",
                diagnostic.selected
            );
            choice
        }
    };
    let report = climate::heatwave_report(&panel, &k_list, d)?;

    std::fs::create_dir_all(&args.out_dir)?;
    let mut written = Vec::new();
    let report_path = args.out_dir.join("report.csv");
    climate::write_heatwave_csv(&report, &report_path)?;
    written.push(report_path);
    let diagnostic_path = args.out_dir.join("diagnostic.csv");
    climate::write_diagnostic_csv(&diagnostic, &diagnostic_path)?;
    written.push(diagnostic_path);

    // Stability curve: theta over a denser k grid at the chosen order.
    let n = panel.series.len();
    let stability_grid: Vec<usize> = parse_grid("stability-grid", &args.stability_grid)?
        .into_iter()
        .filter(|&k| k < n)
        .collect();
    let stability = climate::heatwave_report(&panel, &stability_grid, d)?;
    let stability_path = args.out_dir.join("plot_theta_stability.csv");
    climate::write_heatwave_csv(&stability, &stability_path)?;
    written.push(stability_path);

    if args.svg {
        let delta_chart = svg::LineChart {
            title: format!("{}: delta(h) against 1/sqrt(k)", panel.station),
            x_label: "h".into(),
            y_label: "delta".into(),
            log_y: false,
            series: k_list
                .iter()
                .map(|&k| {
                    let points = diagnostic
                        .rows
                        .iter()
                        .filter(|r| r.k == k)
                        .map(|r| (r.h as f64, r.delta))
                        .collect();
                    (format!("k={k}"), points)
                })
                .collect(),
        };
        let path = args.out_dir.join("plot_delta.svg");
        std::fs::write(&path, delta_chart.render())?;
        written.push(path);
        let theta_chart = svg::LineChart {
            title: format!("{}: theta(k) at d = {d}", panel.station),
            x_label: "k".into(),
            y_label: "theta".into(),
            log_y: false,
            series: vec![(
                format!("d={d}"),
                stability.iter().map(|r| (r.k as f64, r.theta_hat)).collect(),
            )],
        };
        let path = args.out_dir.join("plot_theta_stability.svg");
        std::fs::write(&path, theta_chart.render())?;
        written.push(path);
    }

    RunManifest::new(
        "heatwave",
        serde_json::json!({
            "csv": args.csv.display().to_string(),
            "station": args.station,
            "years": args.years,
            "k": k_list,
            "d": d,
            "d_mode": match args.d { DArg::Auto => "auto", DArg::Fixed(_) => "fixed" },
            "h_max": args.h_max,
            "months": months,
            "columns": {
                "date": columns.date,
                "station": columns.station,
                "value": columns.value,
            },
            "stability_grid": stability_grid,
            "retained_years": panel.years,
            "dropped_years": panel.dropped_years,
        }),
        Vec::new(),
    )
    .with_outputs(manifest::relative_names(&args.out_dir, &written))
    .write(&args.out_dir.join("manifest.json"))?;

    // Human-readable table; durations rounded to 0.1 day for display only.
    println!("k,threshold,theta_hat,expected_duration_days");
    for row in &report {
        println!(
            "{},{:.1},{:.2},{:.1}",
            row.k, row.threshold, row.theta_hat, row.expected_duration
        );
    }
    Ok(())
}
