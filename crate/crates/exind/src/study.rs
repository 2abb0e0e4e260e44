//! Replicated simulation study: MSE curves and correct-selection rates.
//!
//! [`run_study`] generates seeded replicate paths per model, evaluates every
//! configured estimator on the same paths over a grid of tail sizes `k`, and
//! aggregates squared error, bias and variance per `(model, estimator, k)`
//! cell, plus the fraction of replicates whose selected order matches the
//! model's true one. Replicates are independent work units with derived
//! seeds, so the report is identical for any `--jobs` setting.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::estimate;
use crate::simulate::{replicate_seed, simulate, ModelSpec};

/// Which estimators to evaluate in a study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimatorKind {
    /// Order selection followed by the exceedance estimator at the selection.
    Auto,
    /// Sliding-blocks pseudo-MLE with block length `n / k`.
    SlidingBlocks,
    /// Inter-exceedance-time moment estimator.
    Intervals,
}

impl EstimatorKind {
    pub fn label(self) -> &'static str {
        match self {
            EstimatorKind::Auto => "auto",
            EstimatorKind::SlidingBlocks => "sliding-blocks",
            EstimatorKind::Intervals => "intervals",
        }
    }

    pub const ALL: [EstimatorKind; 3] = [
        EstimatorKind::Auto,
        EstimatorKind::SlidingBlocks,
        EstimatorKind::Intervals,
    ];
}

/// Study parameters. Defaults mirror the benchmark protocol: samples of
/// length 5000, selection bound `d_u = 10`, `k` from 30 to 300 in steps
/// of 10.
#[derive(Debug, Clone, Serialize)]
pub struct StudyConfig {
    pub models: Vec<ModelSpec>,
    pub n: usize,
    pub reps: usize,
    pub k_grid: Vec<usize>,
    pub d_u: usize,
    pub estimators: Vec<EstimatorKind>,
    pub base_seed: u64,
    /// Retain the replicate-level raw table in the report.
    pub keep_replicates: bool,
}

impl StudyConfig {
    pub fn new(models: Vec<ModelSpec>) -> Self {
        StudyConfig {
            models,
            n: 5000,
            reps: 1000,
            k_grid: default_k_grid(),
            d_u: 10,
            estimators: EstimatorKind::ALL.to_vec(),
            base_seed: 0x5EED,
            keep_replicates: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.models.is_empty() || self.estimators.is_empty() || self.k_grid.is_empty() {
            return Err(Error::parameter(
                "config",
                "models, estimators and k_grid must be non-empty",
            ));
        }
        if self.reps < 1 {
            return Err(Error::parameter("reps", "must be at least 1"));
        }
        let k_max = *self.k_grid.iter().max().expect("non-empty");
        if self.n < k_max + self.d_u + 2 {
            return Err(Error::parameter(
                "n",
                format!(
                    "must be at least max(k) + d_u + 2 = {}",
                    k_max + self.d_u + 2
                ),
            ));
        }
        if self.k_grid.iter().any(|&k| k == 0) {
            return Err(Error::parameter("k_grid", "entries must be positive"));
        }
        Ok(())
    }
}

/// `k = 30, 40, ..., 300`.
pub fn default_k_grid() -> Vec<usize> {
    (30..=300).step_by(10).collect()
}

/// Aggregates for one `(model, estimator, k)` cell. `mse`, `bias` and
/// `variance` use the replicates that produced an estimate; `variance` is the
/// population variance so that `mse = variance + bias^2` holds exactly.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateRow {
    pub model: String,
    pub estimator: String,
    pub k: usize,
    pub mean_theta: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    pub n_used: usize,
    pub n_excluded: usize,
}

/// Selection accuracy for one `(model, k)` cell. `c_k` is absent for models
/// without a finite true order.
#[derive(Debug, Clone, Serialize)]
pub struct SelectionRow {
    pub model: String,
    pub k: usize,
    pub c_k: Option<f64>,
    pub mean_d_star: f64,
    pub selection_failures: usize,
}

/// One replicate-level record (kept when `keep_replicates` is set).
#[derive(Debug, Clone, Serialize)]
pub struct ReplicateRow {
    pub model: String,
    pub replicate: u64,
    pub k: usize,
    pub estimator: String,
    pub theta_hat: Option<f64>,
    pub d_star: Option<usize>,
}

/// The study output: per-cell aggregates plus the optional raw table.
#[derive(Debug, Clone, Serialize)]
pub struct McReport {
    pub config: StudyConfig,
    pub estimates: Vec<EstimateRow>,
    pub selection: Vec<SelectionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicates: Option<Vec<ReplicateRow>>,
}

struct RepCell {
    auto_theta: f64,
    d_star: usize,
    sliding: Option<f64>,
    intervals: Option<f64>,
}

fn run_replicate(spec: &ModelSpec, config: &StudyConfig, rep: u64) -> Vec<RepCell> {
    let seed = replicate_seed(config.base_seed, spec, rep);
    let path = simulate(spec, config.n, seed).expect("validated spec");
    let values = path.series.values();
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
    let want_sliding = config.estimators.contains(&EstimatorKind::SlidingBlocks);
    let rank_le: Vec<usize> = if want_sliding {
        values
            .iter()
            .map(|v| sorted.partition_point(|x| x <= v))
            .collect()
    } else {
        Vec::new()
    };
    let want_intervals = config.estimators.contains(&EstimatorKind::Intervals);

    config
        .k_grid
        .iter()
        .map(|&k| {
            let u = sorted[n - k - 1];
            let counts = estimate::counts_profile(values, u, config.d_u + 1, None);
            let profile =
                estimate::ThetaProfile::from_parts(k, u, counts, Vec::new());
            let selection = profile.select(config.d_u).expect("profile covers d_u + 1");
            let auto_theta = profile.theta(selection.d_star_hat);

            let sliding = want_sliding
                .then(|| {
                    let r = n / k;
                    (r >= 2).then(|| estimate::sliding_blocks_from_ranks(&rank_le, r))
                })
                .flatten()
                .filter(|t| t.is_finite());

            let intervals = want_intervals
                .then(|| {
                    let positions: Vec<usize> =
                        (0..n).filter(|&i| values[i] > u).collect();
                    (positions.len() >= 2)
                        .then(|| estimate::intervals_from_positions(&positions))
                })
                .flatten();

            RepCell {
                auto_theta,
                d_star: selection.d_star_hat,
                sliding,
                intervals,
            }
        })
        .collect()
}

/// Run the study. Deterministic in `(config)`, independent of the rayon
/// worker count; every estimator sees the identical replicate paths.
pub fn run_study(config: &StudyConfig) -> Result<McReport> {
    config.validate()?;
    let mut estimates = Vec::new();
    let mut selection = Vec::new();
    let mut replicates = config.keep_replicates.then(Vec::new);

    for spec in &config.models {
        let cells: Vec<Vec<RepCell>> = (0..config.reps as u64)
            .into_par_iter()
            .map(|rep| run_replicate(spec, config, rep))
            .collect();

        let true_theta = spec.true_theta();
        let true_d_star = spec.true_d_star();
        for (ki, &k) in config.k_grid.iter().enumerate() {
            for &estimator in &config.estimators {
                let thetas: Vec<f64> = cells
                    .iter()
                    .filter_map(|row| match estimator {
                        EstimatorKind::Auto => Some(row[ki].auto_theta),
                        EstimatorKind::SlidingBlocks => row[ki].sliding,
                        EstimatorKind::Intervals => row[ki].intervals,
                    })
                    .collect();
                let n_used = thetas.len();
                let (mean, variance, bias, mse) = if n_used == 0 {
                    (f64::NAN, f64::NAN, f64::NAN, f64::NAN)
                } else {
                    let mean = thetas.iter().sum::<f64>() / n_used as f64;
                    let variance = thetas.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>()
                        / n_used as f64;
                    let bias = true_theta.map_or(f64::NAN, |t| mean - t);
                    let mse = variance + bias * bias;
                    (mean, variance, bias, mse)
                };
                estimates.push(EstimateRow {
                    model: spec.label().to_string(),
                    estimator: estimator.label().to_string(),
                    k,
                    mean_theta: mean,
                    bias,
                    variance,
                    mse,
                    n_used,
                    n_excluded: config.reps - n_used,
                });
            }
            let hits = true_d_star.map(|d| {
                cells.iter().filter(|row| row[ki].d_star == d).count() as f64
                    / config.reps as f64
            });
            let mean_d = cells.iter().map(|row| row[ki].d_star as f64).sum::<f64>()
                / config.reps as f64;
            let failures = cells
                .iter()
                .filter(|row| row[ki].d_star == config.d_u + 1)
                .count();
            selection.push(SelectionRow {
                model: spec.label().to_string(),
                k,
                c_k: hits,
                mean_d_star: mean_d,
                selection_failures: failures,
            });
        }
        if let Some(raw) = replicates.as_mut() {
            for (rep, row) in cells.iter().enumerate() {
                for (ki, &k) in config.k_grid.iter().enumerate() {
                    let cell = &row[ki];
                    for &estimator in &config.estimators {
                        let (theta, d_star) = match estimator {
                            EstimatorKind::Auto => (Some(cell.auto_theta), Some(cell.d_star)),
                            EstimatorKind::SlidingBlocks => (cell.sliding, None),
                            EstimatorKind::Intervals => (cell.intervals, None),
                        };
                        raw.push(ReplicateRow {
                            model: spec.label().to_string(),
                            replicate: rep as u64,
                            k,
                            estimator: estimator.label().to_string(),
                            theta_hat: theta,
                            d_star,
                        });
                    }
                }
            }
        }
    }
    Ok(McReport {
        config: config.clone(),
        estimates,
        selection,
        replicates,
    })
}

impl McReport {
    /// The aggregate cell for `(model, estimator, k)`.
    pub fn cell(&self, model: &str, estimator: EstimatorKind, k: usize) -> Option<&EstimateRow> {
        self.estimates
            .iter()
            .find(|row| row.model == model && row.estimator == estimator.label() && row.k == k)
    }

    /// Correct-selection rate `c(k)` for `(model, k)`.
    pub fn c_k(&self, model: &str, k: usize) -> Option<f64> {
        self.selection
            .iter()
            .find(|row| row.model == model && row.k == k)
            .and_then(|row| row.c_k)
    }

    /// Smallest MSE over the k-grid for `(model, estimator)`.
    pub fn min_mse(&self, model: &str, estimator: EstimatorKind) -> Option<f64> {
        self.estimates
            .iter()
            .filter(|row| {
                row.model == model
                    && row.estimator == estimator.label()
                    && row.mse.is_finite()
            })
            .map(|row| row.mse)
            .min_by(|a, b| a.partial_cmp(b).expect("finite"))
    }
}

/// One per-model plot series: `k` against MSE for each estimator.
#[derive(Debug, Clone, Serialize)]
pub struct MseCurve {
    pub model: String,
    pub k: Vec<usize>,
    /// `(estimator label, mse at each k)` pairs.
    pub series: Vec<(String, Vec<f64>)>,
}

/// Pivot the report into per-model MSE curves keyed by `k`.
pub fn mse_curves(report: &McReport) -> Vec<MseCurve> {
    report
        .config
        .models
        .iter()
        .map(|spec| {
            let model = spec.label().to_string();
            let series = report
                .config
                .estimators
                .iter()
                .map(|&est| {
                    let values = report
                        .config
                        .k_grid
                        .iter()
                        .map(|&k| report.cell(&model, est, k).map_or(f64::NAN, |c| c.mse))
                        .collect();
                    (est.label().to_string(), values)
                })
                .collect();
            MseCurve {
                model,
                k: report.config.k_grid.clone(),
                series,
            }
        })
        .collect()
}

/// Write `report.csv`, `selection.csv`, `report.json` and per-model plot-data
/// files into `out_dir`; returns the paths written.
pub fn write_report(report: &McReport, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let estimates_path = out_dir.join("report.csv");
    {
        let mut w = csv::Writer::from_path(&estimates_path)?;
        w.write_record([
            "model",
            "estimator",
            "k",
            "mean_theta",
            "bias",
            "variance",
            "mse",
            "n_used",
            "n_excluded",
        ])?;
        for row in &report.estimates {
            w.write_record([
                row.model.clone(),
                row.estimator.clone(),
                row.k.to_string(),
                row.mean_theta.to_string(),
                row.bias.to_string(),
                row.variance.to_string(),
                row.mse.to_string(),
                row.n_used.to_string(),
                row.n_excluded.to_string(),
            ])?;
        }
        w.flush()?;
    }
    written.push(estimates_path);

    let selection_path = out_dir.join("selection.csv");
    {
        let mut w = csv::Writer::from_path(&selection_path)?;
        w.write_record(["model", "k", "c_k", "mean_d_star", "selection_failures"])?;
        for row in &report.selection {
            w.write_record([
                row.model.clone(),
                row.k.to_string(),
                row.c_k.map_or_else(String::new, |c| c.to_string()),
                row.mean_d_star.to_string(),
                row.selection_failures.to_string(),
            ])?;
        }
        w.flush()?;
    }
    written.push(selection_path);

    let json_path = out_dir.join("report.json");
    std::fs::write(&json_path, serde_json::to_vec_pretty(report)?)?;
    written.push(json_path);

    for curve in mse_curves(report) {
        let path = out_dir.join(format!("plot_mse_{}.csv", curve.model));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        let header: Vec<String> = std::iter::once("k".to_string())
            .chain(curve.series.iter().map(|(name, _)| format!("mse_{name}")))
            .collect();
        writeln!(file, "{}", header.join(","))?;
        for (i, &k) in curve.k.iter().enumerate() {
            let mut fields = vec![k.to_string()];
            for (_, values) in &curve.series {
                fields.push(values[i].to_string());
            }
            writeln!(file, "{}", fields.join(","))?;
        }
        file.flush()?;
        written.push(path);
    }

    for spec in &report.config.models {
        if spec.true_d_star().is_none() {
            continue;
        }
        let model = spec.label();
        let path = out_dir.join(format!("plot_ck_{model}.csv"));
        let mut file = std::io::BufWriter::new(std::fs::File::create(&path)?);
        writeln!(file, "k,c_k")?;
        for row in report.selection.iter().filter(|r| r.model == model) {
            writeln!(file, "{},{}", row.k, row.c_k.unwrap_or(f64::NAN))?;
        }
        file.flush()?;
        written.push(path);
    }

    if let Some(raw) = &report.replicates {
        let path = out_dir.join("replicates.csv");
        let mut w = csv::Writer::from_path(&path)?;
        w.write_record(["model", "replicate", "k", "estimator", "theta_hat", "d_star"])?;
        for row in raw {
            w.write_record([
                row.model.clone(),
                row.replicate.to_string(),
                row.k.to_string(),
                row.estimator.to_string(),
                row.theta_hat.map_or_else(String::new, |t| t.to_string()),
                row.d_star.map_or_else(String::new, |d| d.to_string()),
            ])?;
        }
        w.flush()?;
        written.push(path);
    }

    Ok(written)
}
