//! Seasonal temperature pipeline: daily-maximum CSV in, heatwave duration
//! table out.
//!
//! Observations from consecutive summers are separated by a natural gap, so
//! years are treated as independent segments: the panel loader keeps only
//! years with a complete June-August season (92 days) and the estimators run
//! in their segmented form, with the threshold taken from the pooled sample.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimate::{self, DSelectionResult};
use crate::series::Series;

/// One row of a daily station file.
#[derive(Debug, Clone, PartialEq)]
pub struct DailyRecord {
    pub date: NaiveDate,
    pub station: String,
    pub value: f64,
}

/// Column-name mapping for files that do not use the default
/// `date,station,value` header.
#[derive(Debug, Clone)]
pub struct CsvColumns {
    pub date: String,
    pub station: String,
    pub value: String,
}

impl Default for CsvColumns {
    fn default() -> Self {
        CsvColumns {
            date: "date".into(),
            station: "station".into(),
            value: "value".into(),
        }
    }
}

/// A station's seasonal panel: one segment of `season_length` consecutive
/// daily values per retained year.
#[derive(Debug, Clone)]
pub struct SeasonalPanel {
    pub station: String,
    pub years: Vec<i32>,
    pub season_length: usize,
    pub series: Series<f64>,
    /// Years present in the file but dropped, with the reason.
    pub dropped_years: Vec<(i32, String)>,
}

fn season_length(months: &[u32]) -> Result<usize> {
    if months.is_empty() || months.iter().any(|&m| m == 0 || m > 12) {
        return Err(Error::parameter("months", "must be calendar months 1-12"));
    }
    if months.contains(&2) {
        return Err(Error::parameter(
            "months",
            "February varies with leap years; seasons must have a fixed length",
        ));
    }
    const DAYS: [usize; 12] = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];
    Ok(months.iter().map(|&m| DAYS[(m - 1) as usize]).sum())
}

/// Load one station's seasonal panel from a `date,station,value` CSV.
///
/// Dates are ISO-8601, values are daily maximum temperatures. Any year whose
/// season is incomplete is dropped whole and recorded in
/// [`SeasonalPanel::dropped_years`]; June-August seasons always span 92 days,
/// so leap years need no special casing.
pub fn load_panel(
    path: &Path,
    station: &str,
    year_range: (i32, i32),
    months: &[u32],
    columns: &CsvColumns,
) -> Result<SeasonalPanel> {
    let expected_len = season_length(months)?;
    let (from_year, to_year) = year_range;
    if from_year > to_year {
        return Err(Error::parameter("years", "range start exceeds range end"));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Input {
                line: Some(1),
                message: format!("missing column `{name}` in header"),
            })
    };
    let date_col = col(&columns.date)?;
    let station_col = col(&columns.station)?;
    let value_col = col(&columns.value)?;

    let mut by_year: BTreeMap<i32, BTreeMap<NaiveDate, f64>> = BTreeMap::new();
    let mut station_seen = false;
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line());
        if record.get(station_col) != Some(station) {
            if record.get(station_col).is_none() {
                return Err(Error::Input {
                    line,
                    message: "row has too few fields".into(),
                });
            }
            continue;
        }
        station_seen = true;
        let date_text = record.get(date_col).unwrap_or_default();
        let date = date_text.parse::<NaiveDate>().map_err(|e| Error::Input {
            line,
            message: format!("bad date `{date_text}`: {e}"),
        })?;
        let value_text = record.get(value_col).unwrap_or_default();
        let value: f64 = value_text.parse().map_err(|e| Error::Input {
            line,
            message: format!("bad value `{value_text}`: {e}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Input {
                line,
                message: format!("non-finite value {value}"),
            });
        }
        if !months.contains(&date.month()) || date.year() < from_year || date.year() > to_year {
            continue;
        }
        if by_year
            .entry(date.year())
            .or_default()
            .insert(date, value)
            .is_some()
        {
            return Err(Error::Input {
                line,
                message: format!("duplicate date {date} for station {station}"),
            });
        }
    }
    if !station_seen {
        return Err(Error::Data(format!("station `{station}` not found in file")));
    }

    let mut years = Vec::new();
    let mut dropped = Vec::new();
    let mut values = Vec::new();
    for (year, days) in &by_year {
        if days.len() == expected_len {
            years.push(*year);
            values.extend(days.values());
        } else {
            dropped.push((
                *year,
                format!("incomplete season: {} of {expected_len} days", days.len()),
            ));
        }
    }
    if years.is_empty() {
        return Err(Error::Data(format!(
            "station `{station}`: no complete season in {from_year}..={to_year}"
        )));
    }
    Ok(SeasonalPanel {
        station: station.to_string(),
        years,
        season_length: expected_len,
        series: Series::with_segment_length(values, expected_len)?,
        dropped_years: dropped,
    })
}

/// One point of the local-dependence diagnostic display.
#[derive(Debug, Clone, Serialize)]
pub struct DiagnosticRow {
    pub k: usize,
    pub h: usize,
    /// `theta_hat(h) - theta_hat(h+1)` (segmented estimator).
    pub delta: f64,
    /// The selection rule reference `1/sqrt(k)`.
    pub rule_threshold: f64,
}

/// Diagnostic curves plus the per-`k` selected order.
#[derive(Debug, Clone, Serialize)]
pub struct DDiagnostic {
    pub rows: Vec<DiagnosticRow>,
    /// `(k, selected order)`; the order is `h_max + 1` when selection fails.
    pub selected: Vec<(usize, usize)>,
}

/// Difference curves `delta(h)` for `h = 1..=h_max` at each `k`, against the
/// reference `1/sqrt(k)`, using the segmented estimator.
pub fn d_diagnostic(panel: &SeasonalPanel, k_grid: &[usize], h_max: usize) -> Result<DDiagnostic> {
    if h_max == 0 || h_max + 1 > panel.season_length {
        return Err(Error::parameter(
            "h_max",
            format!("need 1 <= h_max <= season length - 1 = {}", panel.season_length - 1),
        ));
    }
    let mut rows = Vec::new();
    let mut selected = Vec::new();
    for &k in k_grid {
        let profile = estimate::theta_profile_segmented(&panel.series, k, h_max + 1)?;
        let selection: DSelectionResult = profile.select(h_max)?;
        for h in 1..=h_max {
            rows.push(DiagnosticRow {
                k,
                h,
                delta: selection.profile[h - 1],
                rule_threshold: selection.rule_threshold,
            });
        }
        selected.push((k, selection.d_star_hat));
    }
    Ok(DDiagnostic { rows, selected })
}

/// One row of the heatwave duration table.
#[derive(Debug, Clone, Serialize)]
pub struct HeatwaveRow {
    pub k: usize,
    /// The threshold `X_{n-k,n}` in data units (degrees Celsius).
    pub threshold: f64,
    pub theta_hat: f64,
    /// Expected heatwave duration in days, `1/theta_hat`.
    pub expected_duration: f64,
}

/// Estimate the extremal index and expected heatwave duration at each `k`,
/// with the window order fixed at `d`.
pub fn heatwave_report(panel: &SeasonalPanel, k_list: &[usize], d: usize) -> Result<Vec<HeatwaveRow>> {
    k_list
        .iter()
        .map(|&k| {
            let estimate = estimate::theta_hat_segmented(&panel.series, k, d)?;
            let duration = if estimate.theta_hat > 0.0 {
                1.0 / estimate.theta_hat
            } else {
                f64::INFINITY
            };
            Ok(HeatwaveRow {
                k,
                threshold: estimate.threshold.expect("threshold-based estimator"),
                theta_hat: estimate.theta_hat,
                expected_duration: duration,
            })
        })
        .collect()
}

/// Write the duration table as CSV (full precision).
pub fn write_heatwave_csv(rows: &[HeatwaveRow], path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(file, "k,threshold,theta_hat,expected_duration")?;
    for row in rows {
        writeln!(
            file,
            "{},{},{},{}",
            row.k, row.threshold, row.theta_hat, row.expected_duration
        )?;
    }
    file.flush()?;
    Ok(())
}

/// Write the diagnostic curves as CSV.
pub fn write_diagnostic_csv(diag: &DDiagnostic, path: &Path) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(file, "k,h,delta,rule_threshold")?;
    for row in &diag.rows {
        writeln!(file, "{},{},{},{}", row.k, row.h, row.delta, row.rule_threshold)?;
    }
    file.flush()?;
    Ok(())
}
