//! Command-line front end for `spectral-jumps`.
//!
//! Subcommands:
//!
//! - `simulate langevin|cosine --out FILE`: writes a synthetic signal file.
//! - `analyze SIGNAL`: diagnostic curves, plateau fit and verdict.
//! - `scan SIGNAL`: `Θ_N/N` scans and jump tables.
//! - `report SIGNAL`: both of the above plus `summary.txt`.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical
//! non-convergence.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectral_jumps::{
    damping_for_dr, decay_ratio, simulate_langevin, Atom, LangevinParams, SyntheticSpectrum,
};

pub mod config;
pub mod error;
pub mod format;
pub mod pipeline;
pub mod signal;

use config::{AnalysisConfig, ConfigFile};
pub use error::CliError;
use format::fmt_num;
use pipeline::StabilityReport;
use signal::{read_signal, write_signal, SignalFile};

#[derive(Debug, Parser)]
#[command(name = "sjump", version, about = "Detect discrete spectral components in stationary signals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic signal file.
    Simulate(SimulateArgs),
    /// Compute the diagnostic curves and a stability verdict.
    Analyze(AnalysisArgs),
    /// Scan Θ_N/N over frequency and tabulate jumps.
    Scan(AnalysisArgs),
    /// Run analyze and scan and write a human-readable summary.
    Report(AnalysisArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignalKind {
    Langevin,
    Cosine,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    kind: SignalKind,
    /// Output signal file.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of emitted samples.
    #[arg(long, default_value_t = 4209)]
    n: usize,

    /// Langevin damping coefficient.
    #[arg(long, conflicts_with = "dr")]
    c: Option<f64>,
    /// Langevin decay ratio; sets the damping (default 0.5).
    #[arg(long)]
    dr: Option<f64>,
    #[arg(long, default_value_t = 9.87)]
    a1: f64,
    #[arg(long, default_value_t = 0.0)]
    a2: f64,
    #[arg(long, default_value_t = 0.0)]
    a3: f64,
    /// Langevin forcing intensity D.
    #[arg(long, default_value_t = 500.0)]
    noise_intensity: f64,
    /// Langevin forcing correlation time, seconds.
    #[arg(long, default_value_t = 0.6)]
    tau: f64,
    /// Langevin integration step, seconds.
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Integration steps per emitted sample.
    #[arg(long, default_value_t = 8)]
    stride: usize,
    /// Langevin burn-in steps (default ceil(10 tau / step)).
    #[arg(long)]
    burn_in: Option<usize>,

    /// Cosine white-noise level p.
    #[arg(long, default_value_t = 0.0)]
    noise_level: f64,
    /// Cosine atom as THETA:MASS (pair mass); repeatable.
    #[arg(long = "atom", value_parser = parse_atom)]
    atoms: Vec<Atom>,
    /// Cosine sampling interval written to the header, seconds.
    #[arg(long, default_value_t = 0.08)]
    dt: f64,
}

#[derive(Debug, Args)]
struct AnalysisArgs {
    signal: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// TOML file with analysis settings; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Sampling interval, seconds (default: signal header, else 0.08).
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    max_lag: Option<usize>,
    /// Comma-separated truncation sizes for the curves.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    grid: Option<usize>,
    /// Comma-separated truncation sizes for the scans.
    #[arg(long, value_delimiter = ',')]
    scan_sizes: Option<Vec<usize>>,
    #[arg(long)]
    min_mass: Option<f64>,
    #[arg(long)]
    plateau_threshold: Option<f64>,
    /// Seed for the eigen solver start vector.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write SVG plots of the scans.
    #[arg(long)]
    svg: bool,
}

impl AnalysisArgs {
    fn flag_settings(&self) -> ConfigFile {
        ConfigFile {
            dt: self.dt,
            max_lag: self.max_lag,
            sizes: self.sizes.clone(),
            grid: self.grid,
            scan_sizes: self.scan_sizes.clone(),
            min_mass: self.min_mass,
            plateau_threshold: self.plateau_threshold,
            seed: self.seed,
        }
    }

    fn load(&self) -> Result<(SignalFile, AnalysisConfig), CliError> {
        let file_settings = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let settings = file_settings.overridden_by(self.flag_settings());
        let signal = read_signal(&self.signal)?;
        let config = AnalysisConfig::resolve(settings, signal.dt()?)?;
        Ok((signal, config))
    }
}

fn parse_atom(s: &str) -> Result<Atom, String> {
    let (t, m) = s
        .split_once(':')
        .ok_or_else(|| format!("expected THETA:MASS, got {s:?}"))?;
    let theta: f64 = t.trim().parse().map_err(|e| format!("theta {t:?}: {e}"))?;
    let mass: f64 = m.trim().parse().map_err(|e| format!("mass {m:?}: {e}"))?;
    Ok(Atom::new(theta, mass))
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("sjump: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Analyze(args) => {
            let (signal, config) = args.load()?;
            cmd_analyze(signal, &config, &source_name(&args.signal), &args.out)?;
            Ok(())
        }
        Command::Scan(args) => {
            let (signal, config) = args.load()?;
            cmd_scan(signal, &config, &args.out, args.svg)
        }
        Command::Report(args) => {
            let (signal, config) = args.load()?;
            cmd_report(signal, &config, &source_name(&args.signal), &args.out, args.svg)?;
            Ok(())
        }
    }
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), CliError> {
    match args.kind {
        SignalKind::Langevin => {
            if args.a1 <= 0.0 {
                return Err(CliError::Usage(format!("a1 must be positive, got {}", args.a1)));
            }
            let c = match (args.c, args.dr) {
                (Some(c), _) => c,
                (None, dr) => damping_for_dr(dr.unwrap_or(0.5), args.a1)
                    .map_err(|e| CliError::Usage(e.to_string()))?,
            };
            let params = LangevinParams {
                c,
                a1: args.a1,
                a2: args.a2,
                a3: args.a3,
                d: args.noise_intensity,
                tau: args.tau,
                dt: args.step,
                n_samples: args.n,
                seed: args.seed,
                output_stride: args.stride,
                burn_in_steps: args.burn_in,
            };
            params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let ts = simulate_langevin(&params)?;
            let f = args.a1.sqrt() / (2.0 * std::f64::consts::PI);
            let dr = decay_ratio(c, args.a1).ok();
            let mut meta = vec![
                ("kind", "langevin".to_string()),
                ("dt", fmt_num(ts.dt())),
                ("seed", args.seed.to_string()),
                ("c", fmt_num(c)),
                ("a1", fmt_num(args.a1)),
            ];
            if let Some(dr) = dr {
                meta.push(("dr", fmt_num(dr)));
            }
            write_signal(&args.out, ts.samples(), &meta)?;
            println!("seed: {}", args.seed);
            println!("samples: {}", ts.len());
            println!("dt: {}", fmt_num(ts.dt()));
            println!("c: {}", fmt_num(c));
            match dr {
                Some(dr) => println!("decay_ratio: {}", fmt_num(dr)),
                None => println!("decay_ratio: overdamped"),
            }
            println!("frequency_hz: {}", fmt_num(f));
        }
        SignalKind::Cosine => {
            let spec = SyntheticSpectrum::normalized(args.noise_level, args.atoms.clone())
                .map_err(|e| CliError::Usage(e.to_string()))?;
            if !(args.dt.is_finite() && args.dt > 0.0) {
                return Err(CliError::Usage(format!("dt must be positive, got {}", args.dt)));
            }
            let ts = spectral_jumps::simulator::simulate_cosine_noise_with_dt(
                &spec, args.n, args.seed, args.dt,
            )
            .map_err(|e| CliError::Usage(e.to_string()))?;
            let meta = [
                ("kind", "cosine".to_string()),
                ("dt", fmt_num(args.dt)),
                ("seed", args.seed.to_string()),
            ];
            write_signal(&args.out, ts.samples(), &meta)?;
            println!("seed: {}", args.seed);
            println!("samples: {}", ts.len());
            println!("dt: {}", fmt_num(args.dt));
            for a in spec.atoms() {
                println!(
                    "atom: theta={} pair_mass={} frequency_hz={}",
                    fmt_num(a.theta),
                    fmt_num(a.pair_mass),
                    fmt_num(spectral_jumps::theta_to_hz(a.theta, args.dt))
                );
            }
        }
    }
    Ok(())
}

/// Curves, plateau fit and verdict; writes the curve CSVs and `report.txt`.
pub fn cmd_analyze(signal: SignalFile, config: &AnalysisConfig, source: &str, out: &Path) -> Result<StabilityReport, CliError> {
    let n = signal.samples.len();
    let corr = pipeline::correlation_of(signal.samples, config)?;
    let report = pipeline::run_analysis(&corr, config)?;
    pipeline::write_analysis(&report, config, source, n, out)?;
    println!("verdict: {}", report.verdict.as_str());
    println!("plateau_estimate: {}", fmt_num(report.plateau_estimate));
    Ok(report)
}

/// Scans and jump tables only.
pub fn cmd_scan(signal: SignalFile, config: &AnalysisConfig, out: &Path, svg: bool) -> Result<(), CliError> {
    let corr = pipeline::correlation_of(signal.samples, config)?;
    let scans = pipeline::run_scans(&corr, config)?;
    pipeline::write_scans(&scans, out, svg)?;
    if let Some(main) = pipeline::largest_scan(&scans) {
        println!("jumps at N={}: {}", main.scan.size(), main.jumps.len());
        if let Some(j) = main.jumps.first() {
            println!(
                "main peak: theta={} rad f={} Hz mass={}",
                fmt_num(j.theta),
                fmt_num(j.frequency_hz),
                fmt_num(j.mass)
            );
        }
    }
    Ok(())
}

/// Analyze and scan outputs plus `summary.txt`.
pub fn cmd_report(signal: SignalFile, config: &AnalysisConfig, source: &str, out: &Path, svg: bool) -> Result<StabilityReport, CliError> {
    let report = cmd_analyze(signal, config, source, out)?;
    pipeline::write_scans(&report.scans, out, svg)?;
    let summary = pipeline::render_summary(&report, config, source);
    format::write_text(&out.join("summary.txt"), &summary)?;
    Ok(report)
}
