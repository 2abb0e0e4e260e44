//! Extremal index estimators.
//!
//! The central estimator counts threshold exceedances that are followed by a
//! quiet window of `d - 1` observations:
//!
//! ```text
//! theta_hat(d) = (1/k) * sum_{i=1}^{n-d+1} 1{ M_{i+1,i+d-1} <= X_{n-k,n} < X_i }
//! ```
//!
//! with `M_{i,j} = max(X_i..X_j)` and `M` over an empty range treated as
//! `-inf`, so `d = 1` counts every exceedance. The local dependence order `d`
//! is chosen by scanning the difference profile
//! `delta(h) = theta_hat(h) - theta_hat(h+1)`: the selected order is the
//! smallest `h` whose profile tail stays strictly below `1/sqrt(k)`.
//!
//! Two comparison estimators are included (the inter-exceedance-time moment
//! estimator and the sliding-blocks pseudo-MLE), plus a segmented variant of
//! `theta_hat` whose windows never cross boundaries between independent
//! equal-length segments.
//!
//! All estimators are rank-based: any strictly increasing transformation of
//! the sample leaves every estimate bit-identical.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result, Warning};
use crate::series::{exceedance_indices, order_statistic, Series};

/// A point estimate of the extremal index together with its inputs.
///
/// Which optional fields are populated depends on the estimator: the
/// `theta_hat(d)` family fills `k`, `d` and `threshold`; the intervals
/// estimator has no window order `d`; the sliding-blocks estimator has no
/// threshold and reports its block length in `d`. `count` is the number of
/// fired indicators (exceedances for the intervals estimator, sliding windows
/// for the block estimator).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult {
    pub theta_hat: f64,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub threshold: Option<f64>,
    pub count: usize,
    /// Present when the raw estimate falls outside `[0, 1]` (sliding-blocks
    /// pseudo-MLE only); holds the estimate clamped to the unit interval.
    pub clamped: Option<f64>,
    pub warnings: Vec<Warning>,
}

/// Outcome of the local-dependence-order selection rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DSelectionResult {
    /// Selected order; `d_u + 1` (with a warning) when no `h <= d_u` passes.
    pub d_star_hat: usize,
    /// Difference profile `delta(h) = theta_hat(h) - theta_hat(h+1)` for `h = 1..=d_u`.
    pub profile: Vec<f64>,
    /// The selection rule threshold `1/sqrt(k)`.
    pub rule_threshold: f64,
    pub d_u: usize,
    pub warnings: Vec<Warning>,
}

/// `theta_hat(d)` for every `d = 1..=d_max` at a single threshold.
///
/// Computing the whole profile is as cheap as a single estimate, and the
/// selection rule, the plug-in estimator and the segmented diagnostics all
/// consume it.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaProfile {
    k: usize,
    threshold: f64,
    counts: Vec<usize>,
    warnings: Vec<Warning>,
}

impl ThetaProfile {
    pub(crate) fn from_parts(k: usize, threshold: f64, counts: Vec<usize>, warnings: Vec<Warning>) -> Self {
        ThetaProfile {
            k,
            threshold,
            counts,
            warnings,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Indicator counts for `d = 1..=d_max`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `theta_hat(d)`; `d` is 1-based and must not exceed `d_max`.
    pub fn theta(&self, d: usize) -> f64 {
        self.counts[d - 1] as f64 / self.k as f64
    }

    pub fn d_max(&self) -> usize {
        self.counts.len()
    }

    pub fn warnings(&self) -> &[Warning] {
        &self.warnings
    }

    /// The estimate at order `d` as a standalone result.
    pub fn estimate(&self, d: usize) -> EstimateResult {
        EstimateResult {
            theta_hat: self.theta(d),
            k: Some(self.k),
            d: Some(d),
            threshold: Some(self.threshold),
            count: self.counts[d - 1],
            clamped: None,
            warnings: self.warnings.clone(),
        }
    }

    /// Apply the selection rule over `h = 1..=d_u`. Requires `d_max >= d_u + 1`.
    ///
    /// Returns the smallest `h` such that `max_{h <= i <= d_u} delta(i)` is
    /// strictly below `1/sqrt(k)`; a tie with the threshold does not count as
    /// below. When no `h <= d_u` qualifies, returns `d_u + 1` and attaches
    /// [`Warning::SelectionFailed`].
    pub fn select(&self, d_u: usize) -> Result<DSelectionResult> {
        if d_u == 0 {
            return Err(Error::parameter("d_u", "must be at least 1"));
        }
        if self.counts.len() < d_u + 1 {
            return Err(Error::parameter(
                "d_u",
                format!(
                    "profile holds d <= {}, need d_u + 1 = {}",
                    self.counts.len(),
                    d_u + 1
                ),
            ));
        }
        let rule = 1.0 / (self.k as f64).sqrt();
        let profile: Vec<f64> = (1..=d_u).map(|h| self.theta(h) - self.theta(h + 1)).collect();
        let mut d_star = d_u + 1;
        let mut tail_max = f64::NEG_INFINITY;
        for h in (1..=d_u).rev() {
            tail_max = tail_max.max(profile[h - 1]);
            if tail_max < rule {
                d_star = h;
            } else {
                break;
            }
        }
        let mut warnings = self.warnings.clone();
        if d_star == d_u + 1 {
            warnings.push(Warning::SelectionFailed { d_u });
        }
        Ok(DSelectionResult {
            d_star_hat: d_star,
            profile,
            rule_threshold: rule,
            d_u,
            warnings,
        })
    }
}

fn validate_d(d: usize, n: usize) -> Result<()> {
    if d == 0 || d > n - 1 {
        return Err(Error::parameter(
            "d",
            format!("must satisfy 1 <= d <= n - 1 = {}, got {d}", n - 1),
        ));
    }
    Ok(())
}

/// Indicator counts for all window orders `1..=d_max` at threshold `u`.
///
/// When `segment_length` is set, windows are confined to segments of that
/// length; the boundary truncation `i <= n - d + 1` then applies per segment.
pub(crate) fn counts_profile<T: Float>(
    values: &[T],
    u: T,
    d_max: usize,
    segment_length: Option<usize>,
) -> Vec<usize> {
    let n = values.len();
    let seg = segment_length.unwrap_or(n);
    // fires[len] = number of exceedances whose indicator holds for exactly d <= len
    let mut fires = vec![0usize; d_max + 1];
    let mut seg_positions: Vec<usize> = Vec::new();
    for start in (0..n).step_by(seg) {
        let end = (start + seg).min(n);
        seg_positions.clear();
        seg_positions.extend((start..end).filter(|&i| values[i] > u));
        for (j, &i) in seg_positions.iter().enumerate() {
            // Quiet run after i, truncated at the segment end; the position
            // constraint i <= end - d coincides with the run bound there.
            let quiet = match seg_positions.get(j + 1) {
                Some(&next) => next - i - 1,
                None => end - i - 1,
            };
            let max_d = (quiet + 1).min(d_max);
            fires[max_d] += 1;
        }
    }
    let mut counts = vec![0usize; d_max];
    let mut acc = 0usize;
    for d in (1..=d_max).rev() {
        acc += fires[d];
        counts[d - 1] = acc;
    }
    counts
}

fn profile_impl<T: Float>(
    series: &Series<T>,
    k: usize,
    d_max: usize,
    segment_length: Option<usize>,
) -> Result<ThetaProfile> {
    validate_d(d_max, series.len())?;
    let threshold = order_statistic(series, k)?;
    let counts = counts_profile(series.values(), threshold.value(), d_max, segment_length);
    Ok(ThetaProfile {
        k,
        threshold: threshold.value().to_f64().expect("finite"),
        counts,
        warnings: threshold.tie_warning().into_iter().collect(),
    })
}

/// Estimate profile `theta_hat(1..=d_max)`, pooled windows.
pub fn theta_profile<T: Float>(series: &Series<T>, k: usize, d_max: usize) -> Result<ThetaProfile> {
    profile_impl(series, k, d_max, None)
}

/// Estimate profile with windows confined to the series' segments. The
/// threshold is still computed from the pooled sample.
pub fn theta_profile_segmented<T: Float>(
    series: &Series<T>,
    k: usize,
    d_max: usize,
) -> Result<ThetaProfile> {
    let l = series
        .segment_length()
        .ok_or_else(|| Error::Data("segmented estimator requires a segment length".into()))?;
    if d_max > l {
        return Err(Error::parameter(
            "d",
            format!("window order {d_max} exceeds segment length {l}"),
        ));
    }
    profile_impl(series, k, d_max, Some(l))
}

/// The exceedance estimator `theta_hat(d)` at a fixed window order.
pub fn theta_hat<T: Float>(series: &Series<T>, k: usize, d: usize) -> Result<EstimateResult> {
    Ok(theta_profile(series, k, d)?.estimate(d))
}

/// The runs estimator with run length `r`: identical to [`theta_hat`] with
/// `d = r`.
pub fn runs_estimator<T: Float>(series: &Series<T>, k: usize, r: usize) -> Result<EstimateResult> {
    theta_hat(series, k, r)
}

/// Segmented variant of [`theta_hat`]: indicator windows never cross segment
/// boundaries. With a single segment this equals [`theta_hat`] exactly.
pub fn theta_hat_segmented<T: Float>(
    series: &Series<T>,
    k: usize,
    d: usize,
) -> Result<EstimateResult> {
    Ok(theta_profile_segmented(series, k, d)?.estimate(d))
}

/// Select the local dependence order by scanning the difference profile
/// against `1/sqrt(k)`.
pub fn select_d_star<T: Float>(series: &Series<T>, k: usize, d_u: usize) -> Result<DSelectionResult> {
    theta_profile(series, k, d_u + 1)?.select(d_u)
}

/// Segmented variant of [`select_d_star`].
pub fn select_d_star_segmented<T: Float>(
    series: &Series<T>,
    k: usize,
    d_u: usize,
) -> Result<DSelectionResult> {
    theta_profile_segmented(series, k, d_u + 1)?.select(d_u)
}

/// Data-driven estimator: select the order, then estimate at the selection.
///
/// When selection fails within `d_u`, estimation still runs at `d_u + 1` and
/// the warning is carried on both results.
pub fn theta_hat_auto<T: Float>(
    series: &Series<T>,
    k: usize,
    d_u: usize,
) -> Result<(EstimateResult, DSelectionResult)> {
    let profile = theta_profile(series, k, d_u + 1)?;
    let selection = profile.select(d_u)?;
    let mut estimate = profile.estimate(selection.d_star_hat);
    estimate.warnings = selection.warnings.clone();
    Ok((estimate, selection))
}

/// Segmented variant of [`theta_hat_auto`].
pub fn theta_hat_auto_segmented<T: Float>(
    series: &Series<T>,
    k: usize,
    d_u: usize,
) -> Result<(EstimateResult, DSelectionResult)> {
    let profile = theta_profile_segmented(series, k, d_u + 1)?;
    let selection = profile.select(d_u)?;
    let mut estimate = profile.estimate(selection.d_star_hat);
    estimate.warnings = selection.warnings.clone();
    Ok((estimate, selection))
}

/// The inter-exceedance-time moment estimator.
///
/// With exceedance times `S_1 < .. < S_N` of the threshold `X_{n-k,n}` and
/// gaps `T_i = S_{i+1} - S_i`:
///
/// ```text
/// theta = 2 (sum T_i)^2 / ((N-1) sum T_i^2)                      if max T_i <= 2
/// theta = 2 (sum (T_i-1))^2 / ((N-1) sum (T_i-1)(T_i-2))         otherwise
/// ```
///
/// clipped to 1 from above. Requires at least two exceedances.
pub fn intervals_estimator<T: Float>(series: &Series<T>, k: usize) -> Result<EstimateResult> {
    let threshold = order_statistic(series, k)?;
    let positions = exceedance_indices(series, &threshold);
    if positions.len() < 2 {
        return Err(Error::InsufficientExceedances {
            needed: 2,
            found: positions.len(),
        });
    }
    Ok(EstimateResult {
        theta_hat: intervals_from_positions(&positions),
        k: Some(k),
        d: None,
        threshold: Some(threshold.value().to_f64().expect("finite")),
        count: positions.len(),
        clamped: None,
        warnings: threshold.tie_warning().into_iter().collect(),
    })
}

/// Moment formula on exceedance positions (at least two required).
pub(crate) fn intervals_from_positions(positions: &[usize]) -> f64 {
    let gaps: Vec<f64> = positions.windows(2).map(|w| (w[1] - w[0]) as f64).collect();
    let pairs = gaps.len() as f64; // N - 1
    let theta_tilde = if gaps.iter().all(|&t| t <= 2.0) {
        let sum: f64 = gaps.iter().sum();
        let sum_sq: f64 = gaps.iter().map(|t| t * t).sum();
        2.0 * sum * sum / (pairs * sum_sq)
    } else {
        let sum: f64 = gaps.iter().map(|t| t - 1.0).sum();
        let sum_prod: f64 = gaps.iter().map(|t| (t - 1.0) * (t - 2.0)).sum();
        2.0 * sum * sum / (pairs * sum_prod)
    };
    theta_tilde.min(1.0)
}

/// Sliding-blocks core on precomputed ranks: `rank_le[i] = #{ j : X_j <= X_i }`.
/// Returns the raw reciprocal-mean estimate.
pub(crate) fn sliding_blocks_from_ranks(rank_le: &[usize], r: usize) -> f64 {
    let n = rank_le.len();
    let blocks = n - r + 1;
    let mut deque: std::collections::VecDeque<usize> = std::collections::VecDeque::new();
    let mut z_sum = 0.0f64;
    for t in 0..n {
        while let Some(&back) = deque.back() {
            if rank_le[back] <= rank_le[t] {
                deque.pop_back();
            } else {
                break;
            }
        }
        deque.push_back(t);
        if t + 1 >= r {
            while *deque.front().expect("non-empty window") + r <= t {
                deque.pop_front();
            }
            let max_rank = rank_le[*deque.front().expect("non-empty window")];
            z_sum += r as f64 * (n - max_rank) as f64 / n as f64;
        }
    }
    blocks as f64 / z_sum
}

/// The sliding-blocks pseudo-MLE.
///
/// Each block of length `r` is reduced to `Z_t = r * (1 - F_n(M_t))`, with
/// `M_t` the block maximum and `F_n` the empirical distribution function of
/// the full sample; the estimate is the reciprocal of the mean of `Z_t` over
/// all `n - r + 1` sliding blocks. The raw maximum-likelihood value is
/// reported unclamped; [`EstimateResult::clamped`] carries the value clipped
/// to `[0, 1]` when they differ.
pub fn sliding_blocks_mle<T: Float>(series: &Series<T>, r: usize) -> Result<EstimateResult> {
    let n = series.len();
    if r < 2 || r > n {
        return Err(Error::parameter(
            "r",
            format!("block length must satisfy 2 <= r <= n = {n}, got {r}"),
        ));
    }
    let values = series.values();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite values"));
    // rank_le[i] = #{ j : X_j <= X_i }; block maxima compare identically in
    // value space and in rank space.
    let rank_le: Vec<usize> = values
        .iter()
        .map(|v| sorted.partition_point(|x| x <= v))
        .collect();

    let blocks = n - r + 1;
    let raw = sliding_blocks_from_ranks(&rank_le, r);
    let mut warnings = Vec::new();
    if raw.is_infinite() {
        warnings.push(Warning::DegenerateBlocks);
    }
    let clamped = (!(0.0..=1.0).contains(&raw)).then(|| raw.clamp(0.0, 1.0));
    Ok(EstimateResult {
        theta_hat: raw,
        k: None,
        d: Some(r),
        threshold: None,
        count: blocks,
        clamped,
        warnings,
    })
}

/// Expected cluster duration `1/theta` for `theta` in `(0, 1]`.
pub fn expected_duration(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::Domain(format!(
            "expected duration needs theta in (0, 1], got {theta}"
        )));
    }
    Ok(1.0 / theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn series(values: &[f64]) -> Series<f64> {
        Series::new(values.to_vec()).unwrap()
    }

    const WORKED: [f64; 8] = [10.0, 9.0, 1.0, 2.0, 8.0, 3.0, 11.0, 4.0];

    /// Independent oracle: the defining double loop, evaluated verbatim.
    fn naive_theta(values: &[f64], k: usize, d: usize) -> f64 {
        let n = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let u = sorted[n - k - 1];
        let mut count = 0usize;
        for i in 1..=(n - d + 1) {
            let x_i = values[i - 1];
            let mut window_max = f64::NEG_INFINITY;
            for j in (i + 1)..=(i + d - 1) {
                window_max = window_max.max(values[j - 1]);
            }
            if window_max <= u && u < x_i {
                count += 1;
            }
        }
        count as f64 / k as f64
    }

    #[test]
    fn worked_example_d2() {
        let r = theta_hat(&series(&WORKED), 3, 2).unwrap();
        assert_eq!(r.theta_hat, 2.0 / 3.0);
        assert_eq!(r.count, 2);
        assert_eq!(r.threshold, Some(8.0));
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn worked_example_d3_truncates_tail_exceedance() {
        let r = theta_hat(&series(&WORKED), 3, 3).unwrap();
        assert_eq!(r.theta_hat, 1.0 / 3.0);
        assert_eq!(r.count, 1);
    }

    #[test]
    fn d1_counts_every_exceedance() {
        let r = theta_hat(&series(&WORKED), 3, 1).unwrap();
        assert_eq!(r.theta_hat, 1.0);
        let ramp: Vec<f64> = (1..=60).map(f64::from).collect();
        let r = theta_hat(&series(&ramp), 10, 1).unwrap();
        assert_eq!(r.theta_hat, 1.0);
    }

    #[test]
    fn parameter_validation() {
        let s = series(&WORKED);
        assert!(theta_hat(&s, 0, 1).is_err());
        assert!(theta_hat(&s, 8, 1).is_err());
        assert!(theta_hat(&s, 3, 0).is_err());
        assert!(theta_hat(&s, 3, 8).is_err());
    }

    #[test]
    fn tie_warning_propagates() {
        let r = theta_hat(&series(&[5.0, 5.0, 5.0, 5.0]), 2, 1).unwrap();
        assert_eq!(r.theta_hat, 0.0);
        assert!(matches!(r.warnings[0], Warning::TiesAtThreshold { .. }));
    }

    #[test]
    fn matches_naive_oracle_on_permutations() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.random_range(6..=12);
            let mut values: Vec<f64> = (1..=n).map(|v| v as f64).collect();
            values.shuffle(&mut rng);
            for k in 2..=3 {
                for d in 1..=3 {
                    let got = theta_hat(&series(&values), k, d).unwrap();
                    let want = naive_theta(&values, k, d);
                    assert_eq!(got.theta_hat, want, "values {values:?} k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_d() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let values: Vec<f64> = (0..80).map(|_| rng.random::<f64>()).collect();
            let profile = theta_profile(&series(&values), 12, 10).unwrap();
            for d in 1..10 {
                assert!(profile.theta(d + 1) <= profile.theta(d));
            }
        }
    }

    #[test]
    fn rank_invariance_is_bit_exact() {
        let mut rng = StdRng::seed_from_u64(7);
        let values: Vec<f64> = (0..200).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
        let base = series(&values);
        let exp = series(&values.iter().map(|v| v.exp()).collect::<Vec<_>>());
        let cubed = series(&values.iter().map(|v| v.powi(3)).collect::<Vec<_>>());
        for k in [5, 20, 50] {
            for d in [1, 2, 5] {
                let t0 = theta_hat(&base, k, d).unwrap().theta_hat;
                assert_eq!(t0, theta_hat(&exp, k, d).unwrap().theta_hat);
                assert_eq!(t0, theta_hat(&cubed, k, d).unwrap().theta_hat);
            }
            let t0 = intervals_estimator(&base, k).unwrap().theta_hat;
            assert_eq!(t0, intervals_estimator(&exp, k).unwrap().theta_hat);
            assert_eq!(t0, intervals_estimator(&cubed, k).unwrap().theta_hat);
            let t0 = sliding_blocks_mle(&base, 10).unwrap().theta_hat;
            assert_eq!(t0, sliding_blocks_mle(&exp, 10).unwrap().theta_hat);
            assert_eq!(t0, sliding_blocks_mle(&cubed, 10).unwrap().theta_hat);
        }
    }

    #[test]
    fn selector_all_flat_picks_one() {
        // Exceedances isolated far beyond the search range: theta_hat is the
        // same at every order, all differences vanish, d* = 1.
        let mut values: Vec<f64> = (0..100).map(|i| i as f64 * 1e-4).collect();
        for pos in [10, 30, 50, 70, 90] {
            values[pos] = 5.0 + pos as f64;
        }
        let sel = select_d_star(&series(&values), 5, 6).unwrap();
        assert!(sel.profile.iter().all(|&d| d == 0.0));
        assert_eq!(sel.d_star_hat, 1);
        assert!(sel.warnings.is_empty());
    }

    #[test]
    fn selector_failure_returns_du_plus_one() {
        // Take k large so 1/sqrt(k) is small, on a short clustered series.
        let values: Vec<f64> = vec![
            9.0, 8.5, 0.1, 0.2, 9.5, 8.9, 0.3, 0.4, 9.9, 8.1, 0.5, 0.6, 9.1, 8.2, 0.7, 0.8,
        ];
        let sel = select_d_star(&series(&values), 8, 2).unwrap();
        if sel.d_star_hat == 3 {
            assert!(sel
                .warnings
                .iter()
                .any(|w| matches!(w, Warning::SelectionFailed { d_u: 2 })));
        }
    }

    #[test]
    fn selector_matches_brute_force_rule() {
        let mut rng = StdRng::seed_from_u64(23);
        for _ in 0..200 {
            let values: Vec<f64> = (0..120).map(|_| rng.random::<f64>()).collect();
            let k = rng.random_range(4..30);
            let d_u = rng.random_range(1..8);
            let profile = theta_profile(&series(&values), k, d_u + 1).unwrap();
            let sel = profile.select(d_u).unwrap();
            // Independent scan of the defining min-rule.
            let rule = 1.0 / (k as f64).sqrt();
            let deltas: Vec<f64> =
                (1..=d_u).map(|h| profile.theta(h) - profile.theta(h + 1)).collect();
            let brute = (1..=d_u)
                .find(|&h| deltas[h - 1..].iter().all(|&x| x < rule))
                .unwrap_or(d_u + 1);
            assert_eq!(sel.d_star_hat, brute);
            for &delta in &sel.profile {
                assert!(delta >= 0.0);
            }
        }
    }

    #[test]
    fn auto_runs_even_when_selection_fails() {
        let values: Vec<f64> = vec![
            9.0, 8.5, 0.1, 0.2, 9.5, 8.9, 0.3, 0.4, 9.9, 8.1, 0.5, 0.6, 9.1, 8.2, 0.7, 0.8,
        ];
        let (est, sel) = theta_hat_auto(&series(&values), 8, 2).unwrap();
        assert_eq!(est.d, Some(sel.d_star_hat));
        assert!(est.theta_hat >= 0.0 && est.theta_hat <= 1.0);
    }

    #[test]
    fn segmented_single_segment_degenerates() {
        let mut rng = StdRng::seed_from_u64(3);
        let values: Vec<f64> = (0..90).map(|_| rng.random::<f64>()).collect();
        let pooled = series(&values);
        let one_segment = Series::with_segment_length(values.clone(), 90).unwrap();
        for k in [5, 12, 40] {
            for d in [1, 2, 4, 7] {
                let a = theta_hat(&pooled, k, d).unwrap();
                let b = theta_hat_segmented(&one_segment, k, d).unwrap();
                assert_eq!(a.theta_hat, b.theta_hat);
                assert_eq!(a.count, b.count);
            }
        }
    }

    #[test]
    fn segmented_worked_example() {
        // Two segments [10,1,2,3 | 9,8,1,2], k = 3, threshold = 3rd smallest
        // from the top: sorted 1 1 2 2 3 8 9 10, X_{n-k,n} = 3.
        // Exceedances: positions 1 and 5,6 (1-based); d = 2 windows within
        // segments: i=1 fires (X_2 = 1 <= 3), i=5 does not (X_6 = 8 > 3),
        // i=6 fires (X_7 = 1 <= 3).
        let s = Series::with_segment_length(vec![10.0, 1.0, 2.0, 3.0, 9.0, 8.0, 1.0, 2.0], 4).unwrap();
        let r = theta_hat_segmented(&s, 3, 2).unwrap();
        assert_eq!(r.count, 2);
        assert_eq!(r.theta_hat, 2.0 / 3.0);
    }

    #[test]
    fn segmented_interior_exceedances_match_pooled() {
        // Exceedances sit deep inside each segment, farther than d from the
        // boundaries, so confining windows changes nothing.
        let mut values = vec![0.1; 40];
        values[10] = 9.0;
        values[30] = 8.5;
        for (i, v) in values.iter_mut().enumerate() {
            *v += i as f64 * 1e-4; // break ties
        }
        let segmented = Series::with_segment_length(values.clone(), 20).unwrap();
        let pooled = series(&values);
        for d in 1..=4 {
            let a = theta_hat(&pooled, 2, d).unwrap();
            let b = theta_hat_segmented(&segmented, 2, d).unwrap();
            assert_eq!(a.count, b.count);
        }
    }

    #[test]
    fn segmented_rejects_window_longer_than_segment() {
        let s = Series::with_segment_length((0..20).map(f64::from).collect(), 4).unwrap();
        assert!(theta_hat_segmented(&s, 3, 5).is_err());
        assert!(theta_hat_segmented(&s, 3, 4).is_ok());
        assert!(theta_hat(&s, 3, 5).is_ok()); // pooled form ignores segments
    }

    #[test]
    fn runs_estimator_is_theta_hat() {
        let s = series(&WORKED);
        let a = runs_estimator(&s, 3, 2).unwrap();
        let b = theta_hat(&s, 3, 2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn intervals_worked_example() {
        // Exceedances at positions 2, 4, 6 (1-based): gaps (2, 2), max <= 2,
        // theta = 2 * 16 / (2 * 8) = 2, clipped to 1.
        let values = vec![0.1, 9.0, 0.2, 8.0, 0.3, 7.0, 0.4, 0.5];
        let r = intervals_estimator(&series(&values), 3).unwrap();
        assert_eq!(r.theta_hat, 1.0);
        assert_eq!(r.count, 3);
    }

    #[test]
    fn intervals_clustered_example() {
        // Exceedance positions 1..=4 and 45 (1-based): gaps (1,1,1,41).
        // max > 2 branch: sums over (T-1): 0+0+0+40 = 40; (T-1)(T-2): 40*39.
        // theta = 2*1600/(4*1560) = 0.5128...
        let mut values = vec![0.0; 50];
        values[0] = 9.0;
        values[1] = 9.5;
        values[2] = 9.2;
        values[3] = 9.8;
        values[44] = 9.1;
        for (i, v) in values.iter_mut().enumerate() {
            *v += i as f64 * 1e-3;
        }
        let r = intervals_estimator(&series(&values), 5).unwrap();
        let want = 2.0 * 1600.0 / (4.0 * 40.0 * 39.0);
        assert!((r.theta_hat - want).abs() < 1e-12);
    }

    #[test]
    fn intervals_needs_two_exceedances() {
        let values: Vec<f64> = (1..=50).map(f64::from).collect();
        assert!(matches!(
            intervals_estimator(&series(&values), 1),
            Err(Error::InsufficientExceedances { .. })
        ));
    }

    #[test]
    fn sliding_blocks_small_example() {
        // Values 1..4, r = 2: Z = (1.0, 0.5, 0.0), mean 0.5, raw 2, clamped 1.
        let r = sliding_blocks_mle(&series(&[1.0, 2.0, 3.0, 4.0]), 2).unwrap();
        assert_eq!(r.theta_hat, 2.0);
        assert_eq!(r.clamped, Some(1.0));
        assert_eq!(r.count, 3);
    }

    #[test]
    fn sliding_blocks_constant_series_degenerate() {
        let r = sliding_blocks_mle(&series(&[5.0; 12]), 3).unwrap();
        assert!(r.theta_hat.is_infinite());
        assert!(r.warnings.contains(&Warning::DegenerateBlocks));
    }

    #[test]
    fn sliding_blocks_matches_direct_evaluation() {
        let mut rng = StdRng::seed_from_u64(41);
        let values: Vec<f64> = (0..300).map(|_| rng.random::<f64>()).collect();
        let s = series(&values);
        for r in [2, 5, 17, 60] {
            let got = sliding_blocks_mle(&s, r).unwrap().theta_hat;
            // Direct O(n * r) evaluation of the definition.
            let n = values.len();
            let mut z_sum = 0.0;
            for t in 0..=(n - r) {
                let m = values[t..t + r].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let f_hat = values.iter().filter(|&&x| x <= m).count() as f64 / n as f64;
                z_sum += r as f64 * (1.0 - f_hat);
            }
            let want = 1.0 / (z_sum / (n - r + 1) as f64);
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn independent_uniforms_estimate_one() {
        // Serially independent input: theta near 1 and order 1 selected in
        // most replicates.
        use rand_chacha::ChaCha8Rng;
        let mut order_one = 0;
        let mut theta_sum = 0.0;
        let seeds = 20u64;
        for seed in 0..seeds {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
            let (est, sel) = theta_hat_auto(&series(&values), 50, 10).unwrap();
            theta_sum += est.theta_hat;
            if sel.d_star_hat == 1 {
                order_one += 1;
            }
        }
        assert!(order_one >= 16, "d* = 1 in only {order_one}/{seeds} replicates");
        assert!(theta_sum / seeds as f64 > 0.9);
    }

    #[test]
    fn expected_duration_reciprocal() {
        assert_eq!(expected_duration(0.5).unwrap(), 2.0);
        assert!((expected_duration(0.13).unwrap() - 7.6923).abs() < 1e-3);
        assert!((expected_duration(0.60).unwrap() - 1.6667).abs() < 1e-3);
        assert!(expected_duration(0.0).is_err());
        assert!(expected_duration(-0.3).is_err());
        assert!(expected_duration(1.2).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn sample() -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(-1e6f64..1e6, 8..120)
        }

        proptest! {
            #[test]
            fn theta_monotone_in_d_and_bounded(values in sample(), k in 1usize..6, d in 1usize..6) {
                let series = Series::new(values).unwrap();
                let profile = theta_profile(&series, k, d + 1).unwrap();
                prop_assert!(profile.theta(d + 1) <= profile.theta(d));
                prop_assert!(profile.theta(d) >= 0.0 && profile.theta(d) <= 1.0);
                prop_assert!(profile.counts()[d - 1] <= k);
            }

            #[test]
            fn affine_transform_preserves_estimates(values in sample(), k in 1usize..6) {
                let scaled: Vec<f64> = values.iter().map(|v| 3.5 * v + 11.0).collect();
                let a = theta_profile(&Series::new(values).unwrap(), k, 4).unwrap();
                let b = theta_profile(&Series::new(scaled).unwrap(), k, 4).unwrap();
                prop_assert_eq!(a.counts(), b.counts());
            }

            #[test]
            fn selection_satisfies_its_defining_rule(values in sample(), k in 2usize..8, d_u in 1usize..6) {
                let series = Series::new(values).unwrap();
                let profile = theta_profile(&series, k, d_u + 1).unwrap();
                let sel = profile.select(d_u).unwrap();
                let rule = 1.0 / (k as f64).sqrt();
                if sel.d_star_hat <= d_u {
                    // Tail of the profile from the selection on stays below the rule,
                    prop_assert!(sel.profile[sel.d_star_hat - 1..].iter().all(|&x| x < rule));
                }
                if sel.d_star_hat > 1 {
                    // and the selection is minimal.
                    prop_assert!(sel.profile[sel.d_star_hat - 2..].iter().any(|&x| x >= rule));
                }
            }
        }
    }
}
