//! Stability statistics of truncated Toeplitz correlation matrices
//! `Q_N = (b(j - k))_{j,k < N}`.
//!
//! For a stationary sequence with correlation normalized to `b(0) = 1`:
//!
//! - `‖Q_N‖₂² / N²` tends to the sum of squared individual atom masses,
//! - `λ_max(Q_N) / N` tends to the largest individual atom mass,
//! - `(1/N) Σ |b(p)|` tending to zero is sufficient for stability.
//!
//! All three vanish in the limit exactly when the spectrum has no jumps. The
//! continuous-time functionals are the integral analogues on a sampled `b(t)`.

mod dense;
mod gram;
mod lanczos;
mod operator;

pub use dense::{dense_max_eigen_oracle, DENSE_ORACLE_LIMIT};
pub use gram::{atomic_gram_max_eigen, gram_max_eigen};
pub use lanczos::{max_eigen_ratio, EigenSolveOptions};
pub use operator::ToeplitzOperator;

use crate::correlation::CorrelationSequence;
use crate::error::{Error, Result};

/// Values within this distance below zero are round-off and clamp to 0.
const NEGATIVE_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatisticKind {
    HsRatio,
    EigenRatio,
    AbsSum,
    ContHs,
    ContAbs,
}

impl StatisticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StatisticKind::HsRatio => "hs_ratio",
            StatisticKind::EigenRatio => "eigen_ratio",
            StatisticKind::AbsSum => "abs_sum",
            StatisticKind::ContHs => "cont_hs",
            StatisticKind::ContAbs => "cont_abs",
        }
    }

    /// Continuous-time statistics are indexed by horizons in seconds rather
    /// than matrix orders.
    pub fn is_continuous(self) -> bool {
        matches!(self, StatisticKind::ContHs | StatisticKind::ContAbs)
    }
}

/// A statistic evaluated along increasing truncation sizes `N` (or horizons
/// `T` for the continuous kinds).
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticCurve {
    sizes: Vec<f64>,
    values: Vec<f64>,
    kind: StatisticKind,
}

impl DiagnosticCurve {
    pub fn new(sizes: Vec<f64>, values: Vec<f64>, kind: StatisticKind) -> Result<Self> {
        if sizes.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "{} sizes but {} values",
                sizes.len(),
                values.len()
            )));
        }
        if sizes.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::InvalidParameter("sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "sizes must be strictly increasing".into(),
            ));
        }
        let mut values = values;
        for (i, v) in values.iter_mut().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
            if *v < 0.0 {
                if *v < -NEGATIVE_CLAMP {
                    return Err(Error::InvalidParameter(format!(
                        "{} value {v} at size {} is negative",
                        kind.as_str(),
                        sizes[i]
                    )));
                }
                log::warn!(
                    "clamping {} value {v:e} at size {} to 0",
                    kind.as_str(),
                    sizes[i]
                );
                *v = 0.0;
            }
        }
        Ok(Self {
            sizes,
            values,
            kind,
        })
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> StatisticKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.sizes.iter().copied().zip(self.values.iter().copied())
    }
}

/// Normalized squared Hilbert–Schmidt norm
/// `‖Q_N‖₂² / N² = 1/N + (2/N²) Σ_{k=1}^{N-1} (N - k) b(k)²`, with `b`
/// divided by `b(0)`. O(N).
pub fn hs_ratio(corr: &CorrelationSequence, n: usize) -> Result<f64> {
    let b = corr.normalized_prefix(n)?;
    Ok(hs_ratio_of_normalized(&b))
}

pub(crate) fn hs_ratio_of_normalized(b: &[f64]) -> f64 {
    let n = b.len();
    let nf = n as f64;
    let tail: f64 = b
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| (n - k) as f64 * v * v)
        .sum();
    1.0 / nf + 2.0 * tail / (nf * nf)
}

pub fn hs_ratio_curve(corr: &CorrelationSequence, sizes: &[usize]) -> Result<DiagnosticCurve> {
    let values = sizes
        .iter()
        .map(|&n| hs_ratio(corr, n))
        .collect::<Result<Vec<_>>>()?;
    DiagnosticCurve::new(as_reals(sizes), values, StatisticKind::HsRatio)
}

pub fn max_eigen_ratio_curve(
    corr: &CorrelationSequence,
    sizes: &[usize],
    opts: &EigenSolveOptions,
) -> Result<DiagnosticCurve> {
    let values = sizes
        .iter()
        .map(|&n| max_eigen_ratio(corr, n, opts))
        .collect::<Result<Vec<_>>>()?;
    DiagnosticCurve::new(as_reals(sizes), values, StatisticKind::EigenRatio)
}

/// `(1/N) Σ_{p<N} |b(p)| / b(0)`.
pub fn abs_sum_ratio(corr: &CorrelationSequence, n: usize) -> Result<f64> {
    let b = corr.normalized_prefix(n)?;
    Ok(b.iter().map(|v| v.abs()).sum::<f64>() / n as f64)
}

pub fn abs_sum_ratio_curve(
    corr: &CorrelationSequence,
    sizes: &[usize],
) -> Result<DiagnosticCurve> {
    let values = sizes
        .iter()
        .map(|&n| abs_sum_ratio(corr, n))
        .collect::<Result<Vec<_>>>()?;
    DiagnosticCurve::new(as_reals(sizes), values, StatisticKind::AbsSum)
}

/// Row-sum bound `|b(0)| + 2 Σ_{p=1}^{N-1} |b(p)|` on the operator norm of
/// `Q_N`, on the raw (unnormalized) lags.
pub fn toeplitz_norm_upper_bound(corr: &CorrelationSequence, n: usize) -> Result<f64> {
    corr.check_size(n)?;
    let b = &corr.values()[..n];
    Ok(b[0].abs() + 2.0 * b[1..].iter().map(|v| v.abs()).sum::<f64>())
}

/// `(2/T) ∫₀ᵀ (1 - t/T) b(t)² dt` for `b` normalized to `b(0) = 1`, by the
/// composite trapezoid rule on the lag grid.
pub fn continuous_hs_functional(corr: &CorrelationSequence, horizon: f64) -> Result<f64> {
    let integral = trapezoid(corr, horizon, |t, b| (1.0 - t / horizon) * b * b)?;
    Ok(2.0 * integral / horizon)
}

/// `(1/T) ∫₀ᵀ |b(t)| dt` for `b` normalized to `b(0) = 1`.
pub fn continuous_abs_functional(corr: &CorrelationSequence, horizon: f64) -> Result<f64> {
    let integral = trapezoid(corr, horizon, |_, b| b.abs())?;
    Ok(integral / horizon)
}

pub fn continuous_hs_curve(
    corr: &CorrelationSequence,
    horizons: &[f64],
) -> Result<DiagnosticCurve> {
    let values = horizons
        .iter()
        .map(|&t| continuous_hs_functional(corr, t))
        .collect::<Result<Vec<_>>>()?;
    DiagnosticCurve::new(horizons.to_vec(), values, StatisticKind::ContHs)
}

pub fn continuous_abs_curve(
    corr: &CorrelationSequence,
    horizons: &[f64],
) -> Result<DiagnosticCurve> {
    let values = horizons
        .iter()
        .map(|&t| continuous_abs_functional(corr, t))
        .collect::<Result<Vec<_>>>()?;
    DiagnosticCurve::new(horizons.to_vec(), values, StatisticKind::ContAbs)
}

/// Integrates `f(t, b(t)/b(0))` over `[0, horizon]`. Whole lag cells use the
/// trapezoid rule; a trailing partial cell uses the linearly interpolated end
/// value.
fn trapezoid(
    corr: &CorrelationSequence,
    horizon: f64,
    f: impl Fn(f64, f64) -> f64,
) -> Result<f64> {
    let b0 = corr.values()[0];
    if !(b0 > 0.0) {
        return Err(Error::DegenerateVariance(b0));
    }
    let dt = corr.dt();
    let span = corr.max_lag() as f64 * dt;
    if !(horizon.is_finite() && horizon > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    // Tolerate representation error when T is meant to be a whole number of
    // steps.
    let steps_exact = horizon / dt;
    let snap = steps_exact.round();
    let steps_exact = if (steps_exact - snap).abs() <= 1e-9 * snap.max(1.0) {
        snap
    } else {
        steps_exact
    };
    if steps_exact > corr.max_lag() as f64 {
        return Err(Error::HorizonTooLong { horizon, span });
    }
    let b = |k: usize| corr.values()[k] / b0;
    let whole = steps_exact.floor() as usize;
    let mut sum = 0.0;
    let mut prev = f(0.0, b(0));
    for k in 1..=whole {
        let cur = f(k as f64 * dt, b(k));
        sum += 0.5 * (prev + cur) * dt;
        prev = cur;
    }
    let frac = steps_exact - whole as f64;
    if frac > 0.0 {
        let end = b(whole) + frac * (b(whole + 1) - b(whole));
        let cur = f(horizon, end);
        sum += 0.5 * (prev + cur) * frac * dt;
    }
    Ok(sum)
}

/// Least-squares slope of `log ‖Q_N‖₂` against `log N`, where
/// `‖Q_N‖₂ = N·sqrt(hs_ratio)`.
///
/// A slope of 1 indicates jumps; a spectral density satisfying a Hölder
/// condition of order `ν` bounds it by `2 / (2 + ν)`.
pub fn holder_exponent_fit(curve: &DiagnosticCurve) -> Result<f64> {
    if curve.kind() != StatisticKind::HsRatio {
        return Err(Error::InvalidParameter(format!(
            "expected an hs_ratio curve, got {}",
            curve.kind().as_str()
        )));
    }
    if curve.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: curve.len(),
        });
    }
    let sizes = curve.sizes();
    if sizes[sizes.len() - 1] / sizes[0] < 8.0 {
        return Err(Error::InvalidParameter(
            "sizes must span a factor of at least 8".into(),
        ));
    }
    if let Some(i) = curve.values().iter().position(|v| *v <= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "hs_ratio must be positive for a log fit (size {})",
            sizes[i]
        )));
    }
    let points: Vec<(f64, f64)> = curve
        .iter()
        .map(|(n, v)| (n.ln(), (n * v.sqrt()).ln()))
        .collect();
    Ok(least_squares_slope(&points))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn as_reals(sizes: &[usize]) -> Vec<f64> {
    sizes.iter().map(|&n| n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlation::{analytic_correlation, Atom, SyntheticSpectrum};
    use std::f64::consts::PI;

    fn seq(v: Vec<f64>) -> CorrelationSequence {
        CorrelationSequence::new(v, 1.0).unwrap()
    }

    fn delta(len: usize) -> CorrelationSequence {
        let mut v = vec![0.0; len];
        v[0] = 1.0;
        seq(v)
    }

    /// Σ_{j,k<N} b(|j-k|)² / N², straight from the matrix entries.
    fn brute_hs(b: &[f64], n: usize) -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for k in 0..n {
                s += b[j.abs_diff(k)].powi(2);
            }
        }
        s / (n * n) as f64
    }

    #[test]
    fn hs_examples() {
        assert_eq!(hs_ratio(&seq(vec![1.0]), 1).unwrap(), 1.0);
        assert!((hs_ratio(&delta(10), 10).unwrap() - 0.1).abs() < 1e-15);

        let b = vec![1.0, 0.5, 0.25];
        // 3·1 + 4·0.25 + 2·0.0625 = 4.125
        assert!((brute_hs(&b, 3) - 4.125 / 9.0).abs() < 1e-15);
        assert!((hs_ratio(&seq(b), 3).unwrap() - 4.125 / 9.0).abs() < 1e-15);

        let spec =
            SyntheticSpectrum::normalized(0.5, vec![Atom::new(PI / 2.0, 0.5)]).unwrap();
        let c = analytic_correlation(&spec, 3);
        assert!((brute_hs(c.values(), 4) - 0.3125).abs() < 1e-15);
        assert!((hs_ratio(&c, 4).unwrap() - 0.3125).abs() < 1e-15);
    }

    #[test]
    fn hs_curve_examples() {
        let c = hs_ratio_curve(&delta(4), &[1, 2, 4]).unwrap();
        assert_eq!(c.values(), &[1.0, 0.5, 0.25]);
        let c = hs_ratio_curve(&seq(vec![1.0; 3]), &[2, 3]).unwrap();
        for v in c.values() {
            assert!((v - 1.0).abs() < 1e-15);
        }
        assert!(hs_ratio_curve(&delta(4), &[2, 2]).is_err());
        assert!(matches!(
            hs_ratio_curve(&delta(4), &[2, 5]),
            Err(Error::SizeOutOfRange { size: 5, .. })
        ));
    }

    #[test]
    fn white_noise_hs_is_one_over_n() {
        let c = delta(500);
        for n in 1..=500 {
            assert_eq!(hs_ratio(&c, n).unwrap(), 1.0 / n as f64);
        }
    }

    #[test]
    fn abs_sum_examples() {
        assert!((abs_sum_ratio(&delta(10), 10).unwrap() - 0.1).abs() < 1e-15);
        assert!((abs_sum_ratio(&seq(vec![1.0; 7]), 7).unwrap() - 1.0).abs() < 1e-15);
        assert!((abs_sum_ratio(&seq(vec![1.0, 0.5, 0.25]), 3).unwrap() - 1.75 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(toeplitz_norm_upper_bound(&delta(5), 5).unwrap(), 1.0);
        assert_eq!(toeplitz_norm_upper_bound(&seq(vec![1.0; 4]), 4).unwrap(), 7.0);
        let c = seq(vec![1.0, 0.5, 0.25]);
        assert_eq!(toeplitz_norm_upper_bound(&c, 3).unwrap(), 2.5);
        assert!(dense_max_eigen_oracle(&c, 3).unwrap() <= 2.5);
    }

    #[test]
    fn degenerate_variance() {
        let c = seq(vec![0.0, 0.0]);
        assert!(matches!(hs_ratio(&c, 2), Err(Error::DegenerateVariance(_))));
        assert!(matches!(abs_sum_ratio(&c, 2), Err(Error::DegenerateVariance(_))));
    }

    fn sampled(f: impl Fn(f64) -> f64, dt: f64, len: usize) -> CorrelationSequence {
        CorrelationSequence::new((0..len).map(|k| f(k as f64 * dt)).collect(), dt).unwrap()
    }

    #[test]
    fn continuous_constant() {
        let c = sampled(|_| 1.0, 0.1, 101);
        assert!((continuous_hs_functional(&c, 10.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((continuous_abs_functional(&c, 10.0).unwrap() - 1.0).abs() < 1e-12);
        // Partial last cell.
        assert!((continuous_hs_functional(&c, 9.95).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            continuous_hs_functional(&c, 10.5),
            Err(Error::HorizonTooLong { .. })
        ));
    }

    #[test]
    fn continuous_cosine() {
        // (2/T)∫(1 - t/T)cos²t dt = 1/2 + (1 - cos 2T)/(4T²) → 1/2.
        let lambda = 1.0;
        let t = 200.0 * 2.0 * PI / lambda;
        let dt = t / 40_000.0;
        let c = sampled(|s| (lambda * s).cos(), dt, 40_001);
        let v = continuous_hs_functional(&c, t).unwrap();
        assert!((v - 0.5).abs() < 2e-2, "{v}");
        let closed = 0.5 + (1.0 - (2.0 * t).cos()) / (4.0 * t * t);
        assert!((v - closed).abs() < 1e-5, "{v} vs {closed}");

        // Mean of |cos| over whole periods is 2/π.
        let a = continuous_abs_functional(&c, t).unwrap();
        assert!((a - 2.0 / PI).abs() < 1e-4, "{a}");
    }

    #[test]
    fn continuous_hs_second_order_in_dt() {
        // b(t) = e^{-t}: (2/T)∫(1-t/T)e^{-2t}dt = (2/T)[1/2 - 1/(4T) + e^{-2T}/(4T)].
        let t: f64 = 5.0;
        let exact = (2.0 / t) * (0.5 - 1.0 / (4.0 * t) + (-2.0 * t).exp() / (4.0 * t));
        let err = |dt: f64| {
            let len = (t / dt).round() as usize + 1;
            let c = sampled(|s| (-s).exp(), dt, len);
            (continuous_hs_functional(&c, t).unwrap() - exact).abs()
        };
        let (e1, e2) = (err(0.01), err(0.005));
        assert!(e1 < 1e-4);
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn continuous_exponential_decays() {
        let c = sampled(|s| (-s).exp(), 0.01, 10_001);
        let mut prev = f64::INFINITY;
        for t in [5.0, 10.0, 25.0, 50.0, 100.0] {
            let v = continuous_hs_functional(&c, t).unwrap();
            assert!(v < prev);
            prev = v;
        }
        let a = continuous_abs_functional(&c, 100.0).unwrap();
        assert!((a - 0.01).abs() < 1e-4, "{a}");
    }

    #[test]
    fn holder_fit_limits() {
        let sizes: Vec<f64> = vec![16.0, 32.0, 64.0, 128.0, 256.0];
        let flat = DiagnosticCurve::new(sizes.clone(), vec![0.3; 5], StatisticKind::HsRatio)
            .unwrap();
        assert!((holder_exponent_fit(&flat).unwrap() - 1.0).abs() < 1e-12);
        let white = DiagnosticCurve::new(
            sizes.clone(),
            sizes.iter().map(|n| 1.0 / n).collect(),
            StatisticKind::HsRatio,
        )
        .unwrap();
        assert!((holder_exponent_fit(&white).unwrap() - 0.5).abs() < 1e-12);

        let short = DiagnosticCurve::new(sizes[..3].to_vec(), vec![0.3; 3], StatisticKind::HsRatio)
            .unwrap();
        assert!(matches!(
            holder_exponent_fit(&short),
            Err(Error::TooFewPoints { .. })
        ));
        let narrow =
            DiagnosticCurve::new(vec![10.0, 11.0, 12.0, 13.0], vec![0.3; 4], StatisticKind::HsRatio)
                .unwrap();
        assert!(holder_exponent_fit(&narrow).is_err());
        let wrong = DiagnosticCurve::new(sizes, vec![0.3; 5], StatisticKind::AbsSum).unwrap();
        assert!(holder_exponent_fit(&wrong).is_err());
    }

    #[test]
    fn curve_clamps_round_off() {
        let c = DiagnosticCurve::new(vec![1.0, 2.0], vec![-1e-13, 0.5], StatisticKind::HsRatio)
            .unwrap();
        assert_eq!(c.values(), &[0.0, 0.5]);
        assert!(
            DiagnosticCurve::new(vec![1.0, 2.0], vec![-1e-6, 0.5], StatisticKind::HsRatio).is_err()
        );
    }
}
