//! Reading single-column numeric series from files or stdin.

use std::io::Read;
use std::path::Path;

use anyhow::{bail, Context};
use exind::Series;

/// Read a single-column numeric sample from `path`, `-` meaning stdin.
///
/// Lines starting with `#` are comments; one optional non-numeric header
/// line is tolerated at the top.
pub fn read_series(path: &str, segment_length: Option<usize>) -> anyhow::Result<Series<f64>> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        buf
    } else {
        std::fs::read_to_string(Path::new(path)).with_context(|| format!("reading {path}"))?
    };
    let mut values = Vec::new();
    let mut saw_content = false;
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if !saw_content => {} // header line
            Err(_) => bail!("line {}: cannot parse `{line}` as a number", idx + 1),
        }
        saw_content = true;
    }
    if values.is_empty() {
        bail!("no numeric values in input");
    }
    let series = match segment_length {
        Some(l) => Series::with_segment_length(values, l),
        None => Series::new(values),
    }?;
    Ok(series)
}
