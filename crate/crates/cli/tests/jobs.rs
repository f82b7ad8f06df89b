use std::process::Command;

use wh_cli::{
    exit, run_approx, run_check, run_job, run_norms, ApproxConfig, ApproxInput, JobConfig, NormsConfig, Sweep,
};
use wh_core::Tolerances;

fn config(symbol: &str, out: &std::path::Path) -> JobConfig {
    JobConfig {
        symbol: symbol.into(),
        out: out.to_path_buf(),
        ..JobConfig::default()
    }
}

fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("generated_at"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn identity_single_direction() {
    let dir = tempfile::tempdir().unwrap();
    let s = run_job(&config("builtin:identity", dir.path())).unwrap();
    assert_eq!(s.directions.len(), 1);
    assert_eq!(s.directions[0].kappa_total, 0);
    assert!(s.directions[0].residual < 1e-12);
    for f in [
        "jordan.json",
        "sweep.csv",
        "omega_000/a_minus.csv",
        "omega_000/a_plus.csv",
        "omega_000/plot.csv",
        "omega_000/report.json",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("omega_000/report.json")).unwrap()).unwrap();
    assert_eq!(report["kappa_total"], 0);
    assert!(report["generated_at"].is_u64());
}

#[test]
fn halfplane_sweep_has_zero_index() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = JobConfig {
        sweep: Some(Sweep {
            count: 32,
            u: None,
            v: None,
        }),
        log2_grid: 10,
        ..config("builtin:halfplane_scalar", dir.path())
    };
    let s = run_job(&cfg).unwrap();
    assert_eq!(s.directions.len(), 32);
    assert!(s.directions.iter().all(|d| d.kappa_total == 0));
    let sweep = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 33);
}

#[test]
fn reports_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_job(&config("builtin:jordan2", a.path())).unwrap();
    run_job(&config("builtin:jordan2", b.path())).unwrap();
    for f in ["omega_000/report.json", "omega_000/a_plus.csv", "sweep.csv"] {
        let x = std::fs::read_to_string(a.path().join(f)).unwrap();
        let y = std::fs::read_to_string(b.path().join(f)).unwrap();
        assert_eq!(strip_timestamp(&x), strip_timestamp(&y), "{f}");
    }
}

#[test]
fn malformed_entry_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("bad.json");
    std::fs::write(&spec, r#"{"dim": 1, "mu": 0, "entries": [["(t + 1i"]]}"#).unwrap();
    let err = run_job(&config(spec.to_str().unwrap(), &dir.path().join("out"))).unwrap_err();
    assert_eq!(err.exit_code(), exit::PARSE);
    assert!(err.to_string().contains("column"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn check_writes_indices() {
    let dir = tempfile::tempdir().unwrap();
    let rep = run_check(&config("builtin:rational_scalar", dir.path())).unwrap();
    assert_eq!(rep.indices[0].total.kappa_total, 0);
    assert!(dir.path().join("check.json").exists());
}

#[test]
fn approx_writes_chains() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ApproxConfig {
        input: ApproxInput::Bump { a: 1.0, b: 2.0 },
        degrees: vec![20, 40],
        r: 1,
        flip: false,
        out: dir.path().to_path_buf(),
    };
    let s = run_approx(&cfg).unwrap();
    assert!(s.iter().all(|c| c.bounds_hold));
    assert!(s[1].l1_error <= s[0].l1_error);
    let poles = std::fs::read_to_string(dir.path().join("poles_m040.csv")).unwrap();
    assert_eq!(poles.lines().count(), 42);
}

#[test]
fn norms_of_lorentzian() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = NormsConfig {
        expr: "1/(t^2 + 1)".into(),
        r: 1,
        delta: 1.0,
        log2_grid: 12,
        tolerances: Tolerances::default(),
        out: dir.path().to_path_buf(),
    };
    let rep = run_norms(&cfg).unwrap();
    assert!(rep.membership.pass);
    assert!(rep.norms.total.is_finite());
}

fn whfact() -> Command {
    Command::new(env!("CARGO_BIN_EXE_whfact"))
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let ok = whfact()
        .args([
            "factorize",
            "--symbol",
            "builtin:rational_scalar",
            "--grid-log2",
            "10",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let usage = whfact()
        .args(["factorize", "--symbol", "builtin:identity", "--grid-log2", "30"])
        .output()
        .unwrap();
    assert_eq!(usage.status.code(), Some(exit::USAGE as i32));
    let unknown = whfact()
        .args(["check", "--symbol", "builtin:nope", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(unknown.status.code(), Some(exit::PARSE as i32));
    let spec = dir.path().join("flat.json");
    std::fs::write(&spec, r#"{"dim": 1, "mu": 1, "entries": [["t"]]}"#).unwrap();
    let flat = whfact()
        .args(["factorize", "--symbol"])
        .arg(&spec)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(flat.status.code(), Some(exit::ELLIPTICITY as i32));
    let missing = whfact()
        .args(["factorize", "--symbol", "/nonexistent/spec.json"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(exit::IO as i32));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"symbol": "builtin:identity", "log2_grid": 9, "sweep": {{"count": 3}}, "out": {:?}}}"#,
            out
        ),
    )
    .unwrap();
    let run = whfact()
        .args(["factorize", "--omega-sweep", "2", "--config"])
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let sweep = std::fs::read_to_string(out.join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 3);
}
