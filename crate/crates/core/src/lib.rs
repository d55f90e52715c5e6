//! Detection of quasi-periodic (discrete-spectrum) components in stationary
//! random signals.
//!
//! A stationary signal is *unstable* when its spectral distribution function
//! carries jumps, i.e. undamped oscillating components. The crate measures
//! this from the correlation sequence `b(k)` through the truncated Toeplitz
//! matrices `Q_N = (b(j - k))`:
//!
//! - [`toeplitz_norms`]: normalized Hilbert–Schmidt norm, largest eigenvalue
//!   (FFT-accelerated Lanczos), absolute-sum criterion and their
//!   continuous-time analogues. Each tends to a positive limit exactly when
//!   the spectrum has jumps.
//! - [`jump_detector`]: the Fejér-smoothed statistic `Θ_N(θ)/N`, whose value
//!   converges to the jump of the spectral distribution at `θ`.
//! - [`correlation`]: empirical and analytic correlation sequences.
//! - [`simulator`]: ground-truth signals (random-phase cosines in white noise
//!   and a colored-noise Langevin oscillator) plus decay-ratio conversions.

pub mod correlation;
mod error;
pub mod jump_detector;
pub mod simulator;
pub mod toeplitz_norms;

pub use correlation::{
    analytic_correlation, estimate_correlation, normalize, Atom, CorrelationSequence,
    SyntheticSpectrum, TimeSeries,
};
pub use error::{Error, Result};
pub use jump_detector::{
    detect_jumps, fold_frequency, theta_scan, theta_statistic, theta_to_hz, JumpEstimate,
    ThetaScan,
};
pub use simulator::{
    analytic_hs_ratio, damping_for_dr, decay_ratio, simulate_cosine_noise, simulate_langevin,
    LangevinParams, RngStream,
};
pub use toeplitz_norms::{
    abs_sum_ratio, abs_sum_ratio_curve, atomic_gram_max_eigen, continuous_abs_functional,
    continuous_hs_functional, dense_max_eigen_oracle, holder_exponent_fit, hs_ratio,
    hs_ratio_curve, max_eigen_ratio, max_eigen_ratio_curve, toeplitz_norm_upper_bound,
    DiagnosticCurve, EigenSolveOptions, StatisticKind,
};
