//! The analyze / scan / report computations and the files they emit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use spectral_jumps::jump_detector::default_min_separation;
use spectral_jumps::toeplitz_norms::{
    abs_sum_ratio_curve, hs_ratio_curve, max_eigen_ratio_curve, DiagnosticCurve,
};
use spectral_jumps::{
    detect_jumps, estimate_correlation, normalize, theta_scan, CorrelationSequence,
    EigenSolveOptions, JumpEstimate, ThetaScan, TimeSeries,
};

use crate::config::AnalysisConfig;
use crate::error::CliError;
use crate::format::{fmt_num, render_csv, render_svg_line, write_text};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    StableConsistent,
    UnstableEvidence,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::StableConsistent => "stable-consistent",
            Verdict::UnstableEvidence => "unstable-evidence",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Unstable when the HS plateau clears the threshold and some scan found
    /// a jump; stable when the plateau does not; inconclusive otherwise.
    pub fn decide(plateau: f64, threshold: f64, any_jump: bool) -> Self {
        match (plateau > threshold, any_jump) {
            (true, true) => Verdict::UnstableEvidence,
            (false, _) => Verdict::StableConsistent,
            (true, false) => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanResult {
    pub scan: ThetaScan,
    pub jumps: Vec<JumpEstimate>,
}

#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub hs_curve: DiagnosticCurve,
    pub eigen_curve: DiagnosticCurve,
    pub abs_curve: DiagnosticCurve,
    pub scans: Vec<ScanResult>,
    pub verdict: Verdict,
    /// Intercept `a` of `hs_ratio(N) ≈ a + b/N`, clamped at 0.
    pub plateau_estimate: f64,
    pub plateau_slope: f64,
}

impl StabilityReport {
    pub fn any_jump(&self) -> bool {
        self.scans.iter().any(|s| !s.jumps.is_empty())
    }
}

/// Estimated and normalized correlation of a signal.
pub fn correlation_of(samples: Vec<f64>, config: &AnalysisConfig) -> Result<CorrelationSequence, CliError> {
    let n = samples.len();
    if config.max_lag >= n {
        return Err(CliError::Data(format!(
            "signal has {n} samples; max_lag {} needs more than that",
            config.max_lag
        )));
    }
    let ts = TimeSeries::new(samples, config.dt)?;
    let corr = estimate_correlation(&ts, config.max_lag)?;
    Ok(normalize(&corr)?)
}

pub fn run_scans(corr: &CorrelationSequence, config: &AnalysisConfig) -> Result<Vec<ScanResult>, CliError> {
    config
        .scan_sizes
        .iter()
        .map(|&n| {
            let scan = theta_scan(corr, n, config.grid_count)?;
            let sep = default_min_separation(n, config.grid_count);
            let jumps = detect_jumps(&scan, config.min_mass, sep)?;
            Ok(ScanResult { scan, jumps })
        })
        .collect()
}

pub fn run_analysis(corr: &CorrelationSequence, config: &AnalysisConfig) -> Result<StabilityReport, CliError> {
    let opts = EigenSolveOptions {
        seed: config.seed,
        ..EigenSolveOptions::default()
    };
    let hs_curve = hs_ratio_curve(corr, &config.sizes)?;
    let eigen_curve = max_eigen_ratio_curve(corr, &config.sizes, &opts)?;
    let abs_curve = abs_sum_ratio_curve(corr, &config.sizes)?;
    let scans = run_scans(corr, config)?;
    let (a, b) = plateau_fit(&hs_curve);
    let plateau_estimate = a.max(0.0);
    let any_jump = scans.iter().any(|s| !s.jumps.is_empty());
    Ok(StabilityReport {
        verdict: Verdict::decide(plateau_estimate, config.plateau_threshold, any_jump),
        hs_curve,
        eigen_curve,
        abs_curve,
        scans,
        plateau_estimate,
        plateau_slope: b,
    })
}

/// Least-squares `(a, b)` of `value ≈ a + b/N` over the upper half of the
/// curve.
pub fn plateau_fit(curve: &DiagnosticCurve) -> (f64, f64) {
    let start = curve.len() / 2;
    let pts: Vec<(f64, f64)> = curve.iter().skip(start).map(|(n, v)| (1.0 / n, v)).collect();
    if pts.len() < 2 {
        return (pts.first().map_or(0.0, |p| p.1), 0.0);
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx, b)
}

fn curve_csv(curve: &DiagnosticCurve) -> String {
    render_csv(
        &["N", "value"],
        curve.iter().map(|(n, v)| vec![fmt_num(n), fmt_num(v)]),
    )
}

fn scan_csv(scan: &ThetaScan) -> String {
    render_csv(
        &["theta", "value"],
        scan.thetas()
            .iter()
            .zip(scan.values())
            .map(|(t, v)| vec![fmt_num(*t), fmt_num(*v)]),
    )
}

fn jumps_csv(jumps: &[JumpEstimate]) -> String {
    render_csv(
        &["theta_rad", "frequency_hz", "mass"],
        jumps
            .iter()
            .map(|j| vec![fmt_num(j.theta), fmt_num(j.frequency_hz), fmt_num(j.mass)]),
    )
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Writes `hs_curve.csv`, `eigen_curve.csv`, `abs_curve.csv` and
/// `report.txt`.
pub fn write_analysis(report: &StabilityReport, config: &AnalysisConfig, source: &str, n_samples: usize, dir: &Path) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_text(&dir.join("hs_curve.csv"), &curve_csv(&report.hs_curve))?;
    write_text(&dir.join("eigen_curve.csv"), &curve_csv(&report.eigen_curve))?;
    write_text(&dir.join("abs_curve.csv"), &curve_csv(&report.abs_curve))?;
    write_text(&dir.join("report.txt"), &render_report(report, config, source, n_samples))
}

/// Writes `theta_scan_N<k>.csv` and `jumps_N<k>.csv` per scan size, plus
/// `jumps.csv` for the largest size and optional SVG plots.
pub fn write_scans(scans: &[ScanResult], dir: &Path, svg: bool) -> Result<(), CliError> {
    ensure_dir(dir)?;
    for s in scans {
        let n = s.scan.size();
        write_text(&dir.join(format!("theta_scan_N{n}.csv")), &scan_csv(&s.scan))?;
        write_text(&dir.join(format!("jumps_N{n}.csv")), &jumps_csv(&s.jumps))?;
        if svg {
            let plot = render_svg_line(
                &format!("Theta_N / N, N = {n}"),
                s.scan.thetas(),
                s.scan.values(),
                "theta (rad)",
                "Theta_N/N",
            );
            write_text(&dir.join(format!("theta_scan_N{n}.svg")), &plot)?;
        }
    }
    if let Some(main) = largest_scan(scans) {
        write_text(&dir.join("jumps.csv"), &jumps_csv(&main.jumps))?;
    }
    Ok(())
}

pub fn largest_scan(scans: &[ScanResult]) -> Option<&ScanResult> {
    scans.iter().max_by_key(|s| s.scan.size())
}

fn last_point(curve: &DiagnosticCurve) -> String {
    curve
        .iter()
        .last()
        .map(|(n, v)| format!("N={} value={}", fmt_num(n), fmt_num(v)))
        .unwrap_or_default()
}

pub fn render_report(report: &StabilityReport, config: &AnalysisConfig, source: &str, n_samples: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "signal: {source}");
    let _ = writeln!(out, "samples: {n_samples}");
    let _ = writeln!(out, "dt: {}", fmt_num(config.dt));
    let _ = writeln!(out, "max_lag: {}", config.max_lag);
    let _ = writeln!(out, "verdict: {}", report.verdict.as_str());
    let _ = writeln!(out, "plateau_estimate: {}", fmt_num(report.plateau_estimate));
    let _ = writeln!(out, "plateau_slope: {}", fmt_num(report.plateau_slope));
    let _ = writeln!(out, "plateau_threshold: {}", fmt_num(config.plateau_threshold));
    let _ = writeln!(out, "hs_ratio_last: {}", last_point(&report.hs_curve));
    let _ = writeln!(out, "eigen_ratio_last: {}", last_point(&report.eigen_curve));
    let _ = writeln!(out, "abs_sum_last: {}", last_point(&report.abs_curve));
    for s in &report.scans {
        let _ = writeln!(out, "jumps_N{}: {}", s.scan.size(), s.jumps.len());
    }
    out
}

pub fn render_summary(report: &StabilityReport, config: &AnalysisConfig, source: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Stability summary for {source}");
    let _ = writeln!(out);
    let _ = writeln!(out, "Verdict: {}", report.verdict.as_str());
    let _ = writeln!(
        out,
        "HS plateau estimate: {} (threshold {})",
        fmt_num(report.plateau_estimate),
        fmt_num(config.plateau_threshold)
    );
    let _ = writeln!(out, "Largest-eigenvalue ratio: {}", last_point(&report.eigen_curve));
    let _ = writeln!(out, "Absolute-sum ratio: {}", last_point(&report.abs_curve));
    for s in &report.scans {
        let _ = writeln!(out);
        let _ = writeln!(out, "Jumps at N={} (min mass {}):", s.scan.size(), fmt_num(config.min_mass));
        if s.jumps.is_empty() {
            let _ = writeln!(out, "  none");
        }
        for j in s.jumps.iter().take(5) {
            let _ = writeln!(
                out,
                "  theta={} rad  f={} Hz  mass={}",
                fmt_num(j.theta),
                fmt_num(j.frequency_hz),
                fmt_num(j.mass)
            );
        }
    }
    out
}
