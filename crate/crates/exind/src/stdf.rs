//! Stable tail dependence function values on the diagonal.
//!
//! For a stationary sequence with marginal upper quantiles `u_n(x)` (so that
//! `n P(X > u_n(x)) -> x`), the diagonal value
//!
//! ```text
//! ell_s = lim n P(X_1 > u_n or ... or X_s > u_n)
//! ```
//!
//! determines the cluster-size structure through the increments
//! `Delta(s) = ell_s - ell_{s-1}` (with `ell_0 = 0`): `Delta` is
//! non-increasing, `Delta(1) = 1`, the extremal index is its limiting value,
//! and the local dependence order `d*` is the first `s` where the increment
//! reaches the limit.
//!
//! Closed forms exist for the four non-ARCH benchmark families and are
//! implemented generically over the scalar, so profiles can be computed in
//! exact rational arithmetic ([`crate::Rational`]) whenever the model
//! parameter is exactly representable, or in `f64` with a 1e-12 equality
//! tolerance otherwise.
//!
//! For the AR model with Cauchy margin and a negative coefficient, the
//! general diagonal value is `ell_s = 2 + (s - 2)(1 - z^2)` for `s >= 2`,
//! derived from the exponent measure of the independent innovation vector
//! (both Cauchy tails contribute when the coefficient alternates in sign).
//! This reduces to the familiar `ell_2 = 2` and `ell_3 = 3 - z^2` and keeps
//! the increments monotone; a Monte Carlo check of the defining limit
//! confirms it (see `ell_monte_carlo`).
//!
//! The Monte Carlo oracles evaluate the defining limit at a finite level by
//! drawing independent stationary windows. The ARCH pair, which have no
//! closed-form margin, use empirical quantiles from a long seeded
//! calibration path, memoised on disk.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{FromPrimitive, Num};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simulate::{
    self, cauchy_sample, frechet_unit_sample, marginal_upper_quantile, replicate_seed,
    ModelFamily, ModelSpec,
};
use crate::Rational;

/// Scalar types usable for closed-form tail dependence arithmetic.
///
/// `f64` compares with a 1e-12 tolerance; [`Rational`] compares exactly.
pub trait StdfScalar: Clone + PartialOrd + Num + FromPrimitive {
    /// Convert a model parameter, exactly. Returns `None` when the scalar
    /// cannot represent the value without rounding.
    fn from_model_param(x: f64) -> Option<Self>;

    /// Equality as used for plateau detection in [`theta_and_dstar`].
    fn values_equal(a: &Self, b: &Self) -> bool;
}

impl StdfScalar for f64 {
    fn from_model_param(x: f64) -> Option<Self> {
        x.is_finite().then_some(x)
    }

    fn values_equal(a: &Self, b: &Self) -> bool {
        (a - b).abs() <= 1e-12
    }
}

impl StdfScalar for Rational {
    // Accepts parameters with a short binary expansion (denominator up to
    // 2^20) so later products and squares stay far from i64 overflow.
    fn from_model_param(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        const MAX_DENOM: i64 = 1 << 20;
        const MAX_NUM: f64 = (1u64 << 40) as f64;
        let mut num = x;
        let mut denom: i64 = 1;
        while num.fract() != 0.0 {
            if denom >= MAX_DENOM || num.abs() >= MAX_NUM {
                return None;
            }
            num *= 2.0;
            denom *= 2;
        }
        if num.abs() >= MAX_NUM {
            return None;
        }
        Some(Rational::new(num as i64, denom))
    }

    fn values_equal(a: &Self, b: &Self) -> bool {
        a == b
    }
}

fn closed_form_param<S: StdfScalar>(spec: &ModelSpec) -> Result<S> {
    match spec.family() {
        ModelFamily::SquaredArch | ModelFamily::Arch => Err(Error::UnsupportedModel {
            model: spec.label().to_string(),
        }),
        _ => S::from_model_param(spec.param()).ok_or_else(|| {
            Error::parameter(
                "param",
                format!(
                    "{} is not exactly representable in the requested scalar; use the f64 profile",
                    spec.param()
                ),
            )
        }),
    }
}

/// Closed-form diagonal value `ell_s` for the four non-ARCH families.
///
/// `ell_1 = 1` always; for `s >= 2`:
///
/// - moving maxima: `(s + m - 1) / m`
/// - AR with Cauchy margin: `s - (s-1) z` for `z >= 0`;
///   `2 + (s-2)(1 - z^2)` for `z < 0`
/// - AR with Gaussian margin: `s`
/// - max-AR: `s - s z + z`
pub fn ell_closed_form<S: StdfScalar>(spec: &ModelSpec, s: u32) -> Result<S> {
    if s == 0 {
        return Err(Error::parameter("s", "must be at least 1"));
    }
    let param: S = closed_form_param(spec)?;
    let s_val = S::from_u32(s).expect("small integer");
    let one = S::one();
    Ok(match spec.family() {
        ModelFamily::MovingMaxima => {
            let m = param;
            (s_val + m.clone() - one) / m
        }
        ModelFamily::ArNormal => s_val,
        ModelFamily::MaxAr => {
            let z = param;
            s_val.clone() - s_val * z.clone() + z
        }
        ModelFamily::ArCauchy => {
            let z = param;
            if z >= S::zero() {
                s_val.clone() - (s_val - one) * z
            } else if s == 1 {
                one
            } else {
                let two = S::from_u32(2).expect("small integer");
                two.clone() + (s_val - two) * (one - z.clone() * z)
            }
        }
        ModelFamily::SquaredArch | ModelFamily::Arch => unreachable!("rejected above"),
    })
}

/// The diagonal profile of a closed-form model: `ell`, its increments, the
/// extremal index and the local dependence order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StdfProfile<S> {
    pub spec: ModelSpec,
    /// `ell_s` for `s = 1..=s_max`.
    pub ell: Vec<S>,
    /// `Delta(s) = ell_s - ell_{s-1}` for `s = 1..=s_max`, with `ell_0 = 0`.
    pub delta: Vec<S>,
    /// The extremal index: the limiting (and attained) increment.
    pub theta: S,
    /// Smallest `s` with `Delta(s) = theta`.
    pub d_star: usize,
}

/// Exact-profile alias.
pub type ExactStdfProfile = StdfProfile<Rational>;

/// Compute the increment profile and read off `(theta, d*)`.
///
/// Requires `s_max >= 4` so the increments have reached their limit for
/// every closed-form family (all have `d* <= 3`). Plateau detection uses
/// exact equality for [`Rational`] and a 1e-12 tolerance for `f64`.
pub fn theta_and_dstar<S: StdfScalar>(spec: &ModelSpec, s_max: u32) -> Result<StdfProfile<S>> {
    if s_max < 4 {
        return Err(Error::parameter("s_max", "must be at least 4"));
    }
    let ell: Vec<S> = (1..=s_max)
        .map(|s| ell_closed_form(spec, s))
        .collect::<Result<_>>()?;
    let mut delta = Vec::with_capacity(s_max as usize);
    for (i, value) in ell.iter().enumerate() {
        let prev = if i == 0 { S::zero() } else { ell[i - 1].clone() };
        delta.push(value.clone() - prev);
    }
    let theta = delta.last().expect("s_max >= 4").clone();
    let d_star = delta
        .iter()
        .position(|d| S::values_equal(d, &theta))
        .expect("theta is an element")
        + 1;
    Ok(StdfProfile {
        spec: *spec,
        ell,
        delta,
        theta,
        d_star,
    })
}

// ---------------------------------------------------------------------------
// ARCH-family marginal calibration
// ---------------------------------------------------------------------------

/// How to calibrate the ARCH-family marginal: a seeded path length and an
/// optional directory for the on-disk quantile memo.
#[derive(Debug, Clone)]
pub struct ArchCalibration {
    pub seed: u64,
    pub path_len: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for ArchCalibration {
    fn default() -> Self {
        ArchCalibration {
            seed: 0xCA11_B7A7,
            path_len: 10_000_000,
            cache_dir: Some(std::env::temp_dir()),
        }
    }
}

/// In-memory marginal summary of one calibration path: a sorted upper tail
/// for quantiles and a strided subsample for stationary restarts.
struct ArchMarginal {
    sorted_tail: Vec<f64>,
    tail_fraction: f64,
    reservoir: Vec<f64>,
    path_len: usize,
}

impl ArchMarginal {
    fn generate(spec: &ModelSpec, cal: &ArchCalibration) -> Result<Self> {
        let path = simulate::simulate(spec, cal.path_len, cal.seed)?;
        let values = path.series.values();
        let stride = (values.len() / 1_000_000).max(1);
        let reservoir: Vec<f64> = values.iter().step_by(stride).cloned().collect();
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite"));
        let keep = (values.len() / 5).max(1000).min(values.len());
        let sorted_tail = sorted.split_off(values.len() - keep);
        Ok(ArchMarginal {
            sorted_tail,
            tail_fraction: keep as f64 / cal.path_len as f64,
            reservoir,
            path_len: cal.path_len,
        })
    }

    /// Empirical value `u` with `#{X > u} = ceil(p * path_len)`.
    fn upper_quantile(&self, p: f64) -> Result<f64> {
        if !(0.0 < p && p < self.tail_fraction) {
            return Err(Error::parameter(
                "p",
                format!(
                    "calibrated quantiles cover (0, {}), got {p}",
                    self.tail_fraction
                ),
            ));
        }
        let above = (p * self.path_len as f64).ceil() as usize;
        Ok(self.sorted_tail[self.sorted_tail.len() - above - 1])
    }
}

type MarginalKey = (&'static str, u64, usize);

fn marginal_cache() -> &'static Mutex<HashMap<MarginalKey, Arc<ArchMarginal>>> {
    static CACHE: OnceLock<Mutex<HashMap<MarginalKey, Arc<ArchMarginal>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn arch_marginal(spec: &ModelSpec, cal: &ArchCalibration) -> Result<Arc<ArchMarginal>> {
    let key = (spec.label(), cal.seed, cal.path_len);
    if let Some(found) = marginal_cache().lock().expect("cache lock").get(&key) {
        return Ok(Arc::clone(found));
    }
    let built = Arc::new(ArchMarginal::generate(spec, cal)?);
    marginal_cache()
        .lock()
        .expect("cache lock")
        .entry(key)
        .or_insert_with(|| Arc::clone(&built));
    Ok(built)
}

#[derive(Debug, Serialize, Deserialize)]
struct QuantileMemo {
    model: String,
    seed: u64,
    path_len: usize,
    /// `(p, value)` pairs keyed by the exact bits of `p`.
    entries: Vec<(f64, f64)>,
}

fn memo_path(spec: &ModelSpec, cal: &ArchCalibration) -> Option<PathBuf> {
    cal.cache_dir.as_ref().map(|dir| {
        dir.join(format!(
            "exind-quantiles-{}-{:016x}-{}.json",
            spec.label(),
            cal.seed,
            cal.path_len
        ))
    })
}

/// Marginal upper-tail quantile for the ARCH pair: the empirical quantile of
/// a seeded calibration path, memoised on disk when a cache directory is
/// configured.
pub fn arch_upper_quantile(spec: &ModelSpec, p: f64, cal: &ArchCalibration) -> Result<f64> {
    if !matches!(
        spec.family(),
        ModelFamily::SquaredArch | ModelFamily::Arch
    ) {
        return Err(Error::parameter(
            "model",
            "calibrated quantiles are for the ARCH family; others have closed forms",
        ));
    }
    let path = memo_path(spec, cal);
    if let Some(path) = &path {
        if let Ok(bytes) = std::fs::read(path) {
            if let Ok(memo) = serde_json::from_slice::<QuantileMemo>(&bytes) {
                if memo.seed == cal.seed && memo.path_len == cal.path_len {
                    if let Some((_, v)) =
                        memo.entries.iter().find(|(q, _)| q.to_bits() == p.to_bits())
                    {
                        return Ok(*v);
                    }
                }
            }
        }
    }
    let value = arch_marginal(spec, cal)?.upper_quantile(p)?;
    if let Some(path) = &path {
        let mut memo = std::fs::read(path)
            .ok()
            .and_then(|b| serde_json::from_slice::<QuantileMemo>(&b).ok())
            .filter(|m| m.seed == cal.seed && m.path_len == cal.path_len)
            .unwrap_or(QuantileMemo {
                model: spec.label().to_string(),
                seed: cal.seed,
                path_len: cal.path_len,
                entries: Vec::new(),
            });
        memo.entries.push((p, value));
        let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
        if serde_json::to_vec_pretty(&memo)
            .ok()
            .and_then(|b| std::fs::write(&tmp, b).ok())
            .is_some()
        {
            let _ = std::fs::rename(&tmp, path);
        }
    }
    Ok(value)
}

fn upper_quantile_any(spec: &ModelSpec, p: f64, cal: &ArchCalibration) -> Result<f64> {
    match spec.family() {
        ModelFamily::SquaredArch | ModelFamily::Arch => arch_upper_quantile(spec, p, cal),
        _ => marginal_upper_quantile(spec, p),
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo oracles
// ---------------------------------------------------------------------------

/// A Monte Carlo evaluation of the defining limit of `ell_s` at a finite
/// level.
#[derive(Debug, Clone, Serialize)]
pub struct McEllEstimate {
    pub estimate: f64,
    /// Binomial standard error; window draws are independent.
    pub std_error: f64,
    pub hits: u64,
    pub draws: u64,
    pub threshold: f64,
}

/// Draw one stationary window `(X_1..X_s)` and return its maximum.
fn window_max(
    spec: &ModelSpec,
    s: u32,
    rng: &mut ChaCha8Rng,
    reservoir: Option<&[f64]>,
) -> f64 {
    let z = spec.param();
    match spec.family() {
        ModelFamily::MovingMaxima => {
            let m = z as usize;
            let len = s as usize + m - 1;
            let mut window_max = f64::NEG_INFINITY;
            let mut buf = [0.0f64; 64];
            debug_assert!(m <= 64);
            for i in 0..len {
                let e = frechet_unit_sample(rng) / m as f64;
                buf[i % m] = e;
                if i + 1 >= m {
                    let x = buf[..m].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    window_max = window_max.max(x);
                }
            }
            window_max
        }
        ModelFamily::ArCauchy => {
            let scale = 1.0 - z.abs();
            let mut x = cauchy_sample(rng, 1.0);
            let mut mx = x;
            for _ in 1..s {
                x = z * x + cauchy_sample(rng, scale);
                mx = mx.max(x);
            }
            mx
        }
        ModelFamily::ArNormal => {
            let sigma = 1.0 / (1.0 - z * z).sqrt();
            let mut x: f64 = sigma * rng.sample::<f64, _>(rand_distr::StandardNormal);
            let mut mx = x;
            for _ in 1..s {
                x = z * x + rng.sample::<f64, _>(rand_distr::StandardNormal);
                mx = mx.max(x);
            }
            mx
        }
        ModelFamily::MaxAr => {
            let mut x = frechet_unit_sample(rng) / (1.0 - z);
            let mut mx = x;
            for _ in 1..s {
                x = (z * x).max(frechet_unit_sample(rng));
                mx = mx.max(x);
            }
            mx
        }
        ModelFamily::SquaredArch => {
            let pool = reservoir.expect("ARCH window needs a stationary restart pool");
            let mut x = pool[rng.random_range(0..pool.len())];
            let mut mx = x;
            for _ in 1..s {
                x = simulate::sarch_step(x, rng);
                mx = mx.max(x);
            }
            mx
        }
        ModelFamily::Arch => {
            let pool = reservoir.expect("ARCH window needs a stationary restart pool");
            let mut x = pool[rng.random_range(0..pool.len())];
            let mut mx = x;
            for _ in 1..s {
                x = simulate::arch_step(x, rng);
                mx = mx.max(x);
            }
            mx
        }
    }
}

/// Monte Carlo estimate of `n P(max(X_1..X_s) > u_n(x))`, which converges to
/// `ell_s(x * 1) = x * ell_s(1)`.
///
/// Each of the `reps` replicates draws `n` independent stationary windows
/// under its own derived seed; replicates run in parallel and the result does
/// not depend on the worker count.
pub fn ell_monte_carlo_at_level(
    spec: &ModelSpec,
    s: u32,
    n: u64,
    reps: u32,
    seed: u64,
    level_x: f64,
    cal: &ArchCalibration,
) -> Result<McEllEstimate> {
    if s == 0 {
        return Err(Error::parameter("s", "must be at least 1"));
    }
    if n == 0 || reps == 0 {
        return Err(Error::parameter("n", "n and reps must be positive"));
    }
    if !(level_x > 0.0) {
        return Err(Error::parameter("level_x", "must be positive"));
    }
    if spec.family() == ModelFamily::MovingMaxima && spec.param() > 64.0 {
        return Err(Error::parameter("param", "moving-maxima oracle supports m <= 64"));
    }
    let u = upper_quantile_any(spec, level_x / n as f64, cal)?;
    let reservoir = match spec.family() {
        ModelFamily::SquaredArch | ModelFamily::Arch => Some(arch_marginal(spec, cal)?),
        _ => None,
    };
    let hits: u64 = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(seed, spec, u64::from(rep)));
            let pool = reservoir.as_ref().map(|r| r.reservoir.as_slice());
            (0..n)
                .filter(|_| window_max(spec, s, &mut rng, pool) > u)
                .count() as u64
        })
        .sum();
    let draws = n * u64::from(reps);
    let p_hat = hits as f64 / draws as f64;
    let estimate = n as f64 * p_hat;
    let std_error = n as f64 * (p_hat * (1.0 - p_hat) / draws as f64).sqrt();
    Ok(McEllEstimate {
        estimate,
        std_error,
        hits,
        draws,
        threshold: u,
    })
}

/// [`ell_monte_carlo_at_level`] at the canonical level `x = 1`.
pub fn ell_monte_carlo(
    spec: &ModelSpec,
    s: u32,
    n: u64,
    reps: u32,
    seed: u64,
) -> Result<McEllEstimate> {
    ell_monte_carlo_at_level(spec, s, n, reps, seed, 1.0, &ArchCalibration::default())
}

// ---------------------------------------------------------------------------
// Increment profile by Monte Carlo (the local dependence diagnostic)
// ---------------------------------------------------------------------------

/// Monte Carlo estimates of the increments `Delta(s)`, `s = 1..=s_max`, from
/// replicated stationary paths.
///
/// Per replicate, one path of length `n + s_max` is generated and
/// `C_r(s) = #( i <= n : X_i > u, X_{i+1}..X_{i+s-1} <= u )` is counted with
/// the threshold `u` at the marginal `tail_count / n` upper quantile, so
/// `E C_r(s) = tail_count * Delta_u(s)`. Standard errors are empirical
/// across replicates; [`DeltaProfileMc::decrease_zscore`] tests decreases as
/// paired differences on the shared paths.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaProfileMc {
    pub spec: ModelSpec,
    pub s_max: usize,
    pub n: usize,
    pub reps: usize,
    /// Expected number of threshold exceedances per path.
    pub tail_count: f64,
    pub threshold: f64,
    /// `Delta_hat(s)` for `s = 1..=s_max`.
    pub delta: Vec<f64>,
    /// Empirical standard error of each `Delta_hat(s)`.
    pub std_error: Vec<f64>,
    /// Per-replicate counts, row-major `reps x s_max`.
    rep_counts: Vec<u32>,
}

impl DeltaProfileMc {
    pub fn delta(&self, s: usize) -> f64 {
        self.delta[s - 1]
    }

    pub fn std_error(&self, s: usize) -> f64 {
        self.std_error[s - 1]
    }

    fn column(&self, s: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.reps).map(move |r| self.rep_counts[r * self.s_max + (s - 1)])
    }

    /// z-score of the decrease `Delta_hat(from) - Delta_hat(to)` (`from < to`),
    /// computed as a paired difference across replicates.
    pub fn decrease_zscore(&self, from: usize, to: usize) -> f64 {
        assert!(from < to && to <= self.s_max);
        let diffs: Vec<f64> = self
            .column(from)
            .zip(self.column(to))
            .map(|(a, b)| f64::from(a) - f64::from(b))
            .collect();
        let n = diffs.len() as f64;
        let mean = diffs.iter().sum::<f64>() / n;
        let var = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        if se == 0.0 {
            if mean > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        } else {
            mean / se
        }
    }

    /// Whether any pair within the window `{s, s+1, s+2}` decreases by more
    /// than `z_crit` paired standard errors.
    pub fn window_decrease_significant(&self, s: usize, z_crit: f64) -> bool {
        [(s, s + 1), (s + 1, s + 2), (s, s + 2)]
            .iter()
            .any(|&(a, b)| self.decrease_zscore(a, b) > z_crit)
    }
}

/// Estimate the increment profile of any benchmark model by Monte Carlo.
pub fn delta_profile_mc(
    spec: &ModelSpec,
    s_max: usize,
    n: usize,
    reps: usize,
    tail_count: f64,
    seed: u64,
    cal: &ArchCalibration,
) -> Result<DeltaProfileMc> {
    if s_max == 0 || n == 0 || reps < 2 {
        return Err(Error::parameter(
            "s_max",
            "need s_max >= 1, n >= 1 and reps >= 2",
        ));
    }
    if !(tail_count > 0.0 && tail_count < n as f64) {
        return Err(Error::parameter(
            "tail_count",
            format!("must lie in (0, n), got {tail_count}"),
        ));
    }
    let u = upper_quantile_any(spec, tail_count / n as f64, cal)?;
    let rep_counts: Vec<u32> = (0..reps)
        .into_par_iter()
        .flat_map_iter(|rep| {
            let path = simulate::simulate(
                spec,
                n + s_max,
                replicate_seed(seed, spec, rep as u64),
            )
            .expect("validated spec");
            let values = path.series.values();
            let positions: Vec<usize> = (0..values.len()).filter(|&i| values[i] > u).collect();
            let mut fires = vec![0u32; s_max + 1];
            for (j, &i) in positions.iter().enumerate() {
                if i >= n {
                    break;
                }
                let quiet = match positions.get(j + 1) {
                    Some(&next) => next - i - 1,
                    None => values.len() - i - 1,
                };
                fires[(quiet + 1).min(s_max)] += 1;
            }
            let mut counts = vec![0u32; s_max];
            let mut acc = 0u32;
            for s in (1..=s_max).rev() {
                acc += fires[s];
                counts[s - 1] = acc;
            }
            counts
        })
        .collect();

    let mut delta = Vec::with_capacity(s_max);
    let mut std_error = Vec::with_capacity(s_max);
    for s in 1..=s_max {
        let column: Vec<f64> = (0..reps)
            .map(|r| f64::from(rep_counts[r * s_max + (s - 1)]))
            .collect();
        let mean = column.iter().sum::<f64>() / reps as f64;
        let var = column.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (reps as f64 - 1.0);
        delta.push(mean / tail_count);
        std_error.push((var / reps as f64).sqrt() / tail_count);
    }
    Ok(DeltaProfileMc {
        spec: *spec,
        s_max,
        n,
        reps,
        tail_count,
        threshold: u,
        delta,
        std_error,
        rep_counts,
    })
}

/// The local-dependence failure diagnostic for the ARCH benchmark: Monte
/// Carlo increments `Delta_hat(1..=s_max)`, which keep decreasing at every
/// order instead of reaching a plateau.
pub fn arch_no_finite_d_check(
    s_max: usize,
    n: usize,
    reps: usize,
    tail_count: f64,
    seed: u64,
) -> Result<DeltaProfileMc> {
    delta_profile_mc(
        &ModelSpec::arch(),
        s_max,
        n,
        reps,
        tail_count,
        seed,
        &ArchCalibration::default(),
    )
}
