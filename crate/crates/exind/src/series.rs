//! Sample containers and order-statistic utilities.
//!
//! A [`Series`] is an ordered sample `X_1..X_n`, optionally partitioned into
//! equal-length independent segments (e.g. years of daily observations). The
//! threshold used by every estimator in this crate is the order statistic
//! `X_{n-k,n}`, i.e. the (k+1)-th largest observation, so that with distinct
//! values exactly `k` observations strictly exceed it.

use num_traits::Float;

use crate::error::{Error, Result, Warning};

/// An ordered real-valued sample, validated to contain only finite values.
///
/// Generic over the scalar type; use [`crate::Series64`] unless `f32` input
/// matters. Positions are 0-based throughout the API.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    values: Vec<T>,
    segment_length: Option<usize>,
}

impl<T: Float> Series<T> {
    /// Build an unsegmented series. Rejects empty and non-finite input.
    pub fn new(values: Vec<T>) -> Result<Self> {
        Self::build(values, None)
    }

    /// Build a series split into `n / segment_length` independent segments.
    ///
    /// The length must be a positive multiple of `segment_length`; windowed
    /// estimators never cross segment boundaries.
    pub fn with_segment_length(values: Vec<T>, segment_length: usize) -> Result<Self> {
        if segment_length == 0 {
            return Err(Error::parameter("segment_length", "must be positive"));
        }
        if values.is_empty() || values.len() % segment_length != 0 {
            return Err(Error::Data(format!(
                "series length {} is not a positive multiple of segment length {}",
                values.len(),
                segment_length
            )));
        }
        Self::build(values, Some(segment_length))
    }

    fn build(values: Vec<T>, segment_length: Option<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Data("empty series".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Data(format!("non-finite value at position {i}")));
        }
        Ok(Series {
            values,
            segment_length,
        })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn segment_length(&self) -> Option<usize> {
        self.segment_length
    }

    /// Number of segments (1 for an unsegmented series).
    pub fn num_segments(&self) -> usize {
        match self.segment_length {
            Some(l) => self.values.len() / l,
            None => 1,
        }
    }

    /// Drop the segmentation, keeping the pooled sample.
    pub fn pooled(&self) -> Series<T> {
        Series {
            values: self.values.clone(),
            segment_length: None,
        }
    }
}

/// The data-driven threshold `X_{n-k,n}` together with its tail size `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<T> {
    k: usize,
    value: T,
    exceedances: usize,
}

impl<T: Float> Threshold<T> {
    pub fn k(&self) -> usize {
        self.k
    }

    /// The threshold value, the (k+1)-th largest observation.
    pub fn value(&self) -> T {
        self.value
    }

    /// Number of observations strictly above the threshold. Equals `k`
    /// exactly when the sample has no ties at the threshold.
    pub fn exceedances(&self) -> usize {
        self.exceedances
    }

    /// True when ties at the threshold break the `exceedances == k` identity.
    pub fn has_ties(&self) -> bool {
        self.exceedances != self.k
    }

    /// The tie diagnostic, if any, for attaching to estimation results.
    pub fn tie_warning(&self) -> Option<Warning> {
        self.has_ties().then_some(Warning::TiesAtThreshold {
            k: self.k,
            exceedances: self.exceedances,
        })
    }
}

/// Compute the threshold `X_{n-k,n}`: the (n-k)-th smallest, equivalently the
/// (k+1)-th largest, observation of the sample.
///
/// Requires `1 <= k <= n - 1`. Ties at the threshold are reported through
/// [`Threshold::tie_warning`] rather than an error.
pub fn order_statistic<T: Float>(series: &Series<T>, k: usize) -> Result<Threshold<T>> {
    let n = series.len();
    if k == 0 || k > n - 1 {
        return Err(Error::parameter(
            "k",
            format!("must satisfy 1 <= k <= n - 1 = {}, got {k}", n - 1),
        ));
    }
    let mut work = series.values().to_vec();
    // Values are validated finite, so partial_cmp is total here.
    let (_, value, _) =
        work.select_nth_unstable_by(n - k - 1, |a, b| a.partial_cmp(b).expect("finite values"));
    let value = *value;
    let exceedances = series.values().iter().filter(|&&v| v > value).count();
    Ok(Threshold {
        k,
        value,
        exceedances,
    })
}

/// Indices (0-based, strictly increasing) of observations strictly above the
/// threshold. With distinct sample values the result has length exactly `k`.
pub fn exceedance_indices<T: Float>(series: &Series<T>, threshold: &Threshold<T>) -> Vec<usize> {
    let u = threshold.value();
    series
        .values()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| (v > u).then_some(i))
        .collect()
}
