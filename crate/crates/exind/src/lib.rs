//! Estimation of the extremal index of a stationary time series.
//!
//! The extremal index `theta` in `(0, 1]` measures the clustering of high
//! threshold exceedances; `1/theta` is the expected cluster size. This crate
//! provides:
//!
//! - [`estimate`]: the exceedance estimator `theta_hat(d)`, a data-driven
//!   selector for the local dependence order `d*`, a segmented variant for
//!   samples made of independent blocks (e.g. years), and two comparison
//!   estimators (inter-exceedance intervals, sliding-blocks pseudo-MLE);
//! - [`simulate`]: seeded generators for six benchmark processes with known
//!   clustering behaviour;
//! - [`stdf`]: closed-form diagonal values of the stable tail dependence
//!   function for the benchmark models, with exact rational arithmetic, plus
//!   Monte Carlo oracles for the same quantities;
//! - [`study`]: a replicated simulation study harness producing MSE and
//!   correct-selection-rate tables;
//! - [`climate`]: a daily-temperature pipeline estimating heatwave durations
//!   from seasonal (June-August) station records.
//!
//! Estimators are generic over the sample scalar (`f32`/`f64`); estimates are
//! always reported as `f64`. Closed-form tail dependence values are generic
//! over the scalar as well, with [`Rational`] giving exact arithmetic.

pub mod climate;
pub mod error;
pub mod estimate;
pub mod series;
pub mod simulate;
pub mod stdf;
pub mod study;

pub use error::{Error, Result, Warning};
pub use estimate::{DSelectionResult, EstimateResult, ThetaProfile};
pub use series::{Series, Threshold};
pub use simulate::{ModelFamily, ModelSpec, SimulatedPath};

/// The default sample container.
pub type Series64 = Series<f64>;
/// Single-precision sample container.
pub type Series32 = Series<f32>;
/// Exact scalar for closed-form tail dependence arithmetic.
pub type Rational = num_rational::Ratio<i64>;
