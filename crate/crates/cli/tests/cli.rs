use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sjump(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sjump"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    sjump(args).status.code().expect("exit code")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["analyze", "--help"]), 0);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["frobnicate"]), 1);
    assert_eq!(code(&["analyze"]), 1);
    assert_eq!(code(&["simulate", "cosine", "--atom", "1.0", "--out", &path(dir.path(), "x")]), 1);
    // Masses that do not sum to one.
    assert_eq!(code(&["simulate", "cosine", "--noise-level", "0.2", "--out", &path(dir.path(), "x")]), 1);
    assert_eq!(code(&["simulate", "langevin", "--c", "0.5", "--dr", "0.5", "--out", &path(dir.path(), "x")]), 1);
    assert_eq!(code(&["simulate", "langevin", "--step", "0.5", "--out", &path(dir.path(), "x")]), 1);
}

#[test]
fn bad_paths_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["analyze", &path(dir.path(), "missing.txt")]), 2);
    let target = path(dir.path(), "no/such/dir/out.txt");
    assert_eq!(code(&["simulate", "cosine", "--noise-level", "1", "--out", &target]), 2);
}

#[test]
fn constant_signal_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "flat.txt");
    fs::write(&file, "2.5\n".repeat(3000)).unwrap();
    let out = sjump(&["analyze", &file, "--out", &path(dir.path(), "o")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("b(0)"));
}

#[test]
fn malformed_signals_are_data_errors() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [("nan.txt", "1\nNaN\n2\n"), ("short.txt", "1\n2\n3\n"), ("empty.txt", "# dt=0.1\n")] {
        let file = path(dir.path(), name);
        fs::write(&file, body).unwrap();
        assert_eq!(code(&["scan", &file, "--out", &path(dir.path(), "o")]), 2, "{name}");
    }
}

#[test]
fn grid_floor() {
    let dir = tempfile::tempdir().unwrap();
    let signal = path(dir.path(), "w.txt");
    assert_eq!(code(&["simulate", "cosine", "--noise-level", "1", "--n", "3000", "--out", &signal]), 0);
    assert_eq!(code(&["scan", &signal, "--grid", "15", "--out", &path(dir.path(), "o")]), 1);
    assert_eq!(code(&["scan", &signal, "--grid", "16", "--out", &path(dir.path(), "o")]), 0);
    let scan = fs::read_to_string(dir.path().join("o/theta_scan_N500.csv")).unwrap();
    assert_eq!(scan.lines().count(), 1 + 17);
}

#[test]
fn simulate_langevin_writes_requested_length() {
    let dir = tempfile::tempdir().unwrap();
    let signal = path(dir.path(), "l.txt");
    let out = sjump(&["simulate", "langevin", "--dr", "0.5", "--seed", "4", "--out", &signal]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("seed: 4"));
    assert!(stdout.contains("decay_ratio: 0.5"));
    assert!(stdout.contains("frequency_hz: 0.5000"));
    let text = fs::read_to_string(&signal).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4209);
    assert!(text.contains("# dt=0.08"));
}

#[test]
fn white_noise_has_empty_jump_table() {
    let dir = tempfile::tempdir().unwrap();
    let signal = path(dir.path(), "w.txt");
    assert_eq!(code(&["simulate", "cosine", "--noise-level", "1", "--n", "50000", "--seed", "9", "--out", &signal]), 0);
    let out = sjump(&["report", &signal, "--out", &path(dir.path(), "r")]);
    assert!(out.status.success());
    let jumps = fs::read_to_string(dir.path().join("r/jumps.csv")).unwrap();
    assert_eq!(jumps, "theta_rad,frequency_hz,mass\n");
    let summary = fs::read_to_string(dir.path().join("r/summary.txt")).unwrap();
    assert!(summary.contains("Verdict: stable-consistent"));
    for name in ["hs_curve.csv", "eigen_curve.csv", "abs_curve.csv", "report.txt", "theta_scan_N100.csv"] {
        assert!(dir.path().join("r").join(name).is_file(), "{name}");
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let signal = path(dir.path(), "c.txt");
    let sim = ["simulate", "cosine", "--noise-level", "0.5", "--atom", "0.8:0.3", "--atom", "2.1:0.2", "--n", "20000", "--seed", "11"];
    assert_eq!(code(&[&sim[..], &["--out", &signal]].concat()), 0);
    let first = fs::read(&signal).unwrap();
    assert_eq!(code(&[&sim[..], &["--out", &signal]].concat()), 0);
    assert_eq!(first, fs::read(&signal).unwrap());

    for run in ["a", "b"] {
        assert_eq!(code(&["report", &signal, "--svg", "--out", &path(dir.path(), run)]), 0);
    }
    let names = ["hs_curve.csv", "eigen_curve.csv", "abs_curve.csv", "jumps.csv", "theta_scan_N300.csv", "theta_scan_N300.svg", "report.txt", "summary.txt"];
    for name in names {
        let a = fs::read(dir.path().join("a").join(name)).unwrap();
        let b = fs::read(dir.path().join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name}");
    }
    let jumps = fs::read_to_string(dir.path().join("a/jumps.csv")).unwrap();
    assert_eq!(jumps.lines().count(), 1 + 2, "{jumps}");
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let signal = path(dir.path(), "w.txt");
    fs::write(&signal, {
        let mut s = String::from("# dt=0.5\n");
        for i in 0..4000 {
            s.push_str(&format!("{}\n", ((i * 7919) % 101) as f64 - 50.0));
        }
        s
    })
    .unwrap();
    let config = path(dir.path(), "cfg.toml");
    fs::write(&config, "max_lag = 200\nsizes = [16, 32, 64, 128]\nscan_sizes = [50]\ngrid = 64\ndt = 0.25\n").unwrap();

    let out = path(dir.path(), "o");
    assert_eq!(code(&["report", &signal, "--config", &config, "--grid", "32", "--out", &out]), 0);
    let scan = fs::read_to_string(dir.path().join("o/theta_scan_N50.csv")).unwrap();
    assert_eq!(scan.lines().count(), 1 + 33);
    let report = fs::read_to_string(dir.path().join("o/report.txt")).unwrap();
    assert!(report.contains("dt: 0.25"), "{report}");
    assert!(report.contains("max_lag: 200"));
    let hs = fs::read_to_string(dir.path().join("o/hs_curve.csv")).unwrap();
    assert_eq!(hs.lines().count(), 1 + 4);

    fs::write(&config, "unknown_key = 1\n").unwrap();
    assert_eq!(code(&["analyze", &signal, "--config", &config, "--out", &out]), 1);
}
