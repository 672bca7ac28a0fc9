use std::fs;
use std::process::Command;

use dmrx_cli::{validate_config, CliError};
use dmrx_core::{Error, ScenarioConfig};

fn dmrx() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dmrx"))
}

#[test]
fn empty_file_yields_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.cfg");
    fs::write(&path, "").unwrap();
    let cfg = validate_config(&path).unwrap();
    assert_eq!(cfg, ScenarioConfig::default());
    assert_eq!(cfg.p_a_watt, 10.0);
    assert_eq!((cfg.n_a, cfg.n_b, cfg.n_m), (4, 4, 4));
    assert_eq!(cfg.rho, 1e-11);
    assert_eq!(cfg.beta1, 0.9);
}

#[test]
fn invalid_values_name_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, "beta1 = 1.5\n").unwrap();
    let err = validate_config(&path).unwrap_err();
    assert!(matches!(err, CliError::Core(Error::Config { .. })), "{err}");
    assert!(err.to_string().contains("beta1"));

    fs::write(&path, "n_m = 4\nn_j = 4\n").unwrap();
    let err = validate_config(&path).unwrap_err().to_string();
    assert!(err.contains("N_J in {1,...,N_M-1}"), "{err}");

    fs::write(&path, "# comment\nbeta = 0.5\n").unwrap();
    let err = validate_config(&path).unwrap_err().to_string();
    assert!(err.contains("line 2") && err.contains("beta"), "{err}");
}

#[test]
fn config_round_trips_through_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.cfg");
    fs::write(&path, "p_m_watt = 3.5\ntheta_r_mb_deg = 70\nsnr_definition = transmit\n").unwrap();
    let first = validate_config(&path).unwrap();
    fs::write(&path, first.to_kv_string()).unwrap();
    assert_eq!(validate_config(&path).unwrap(), first);
}

#[test]
fn missing_config_is_io_error() {
    let err = validate_config(std::path::Path::new("/nonexistent/dir/x.cfg")).unwrap_err();
    assert!(matches!(err, CliError::Io { .. }));
}

#[test]
fn binary_lists_presets_and_defaults() {
    let out = dmrx().arg("--list-presets").output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for p in ["fig2", "fig3", "fig4"] {
        assert!(text.contains(p));
    }
    let out = dmrx().arg("--print-defaults").output().unwrap();
    assert!(out.status.success());
    let parsed = ScenarioConfig::from_kv_str(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(parsed, ScenarioConfig::default());
}

#[test]
fn binary_runs_a_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, "p_m_watt = 20\n").unwrap();
    let out = dmrx()
        .arg("run")
        .arg(&cfg)
        .args(["--preset", "fig4", "--methods", "mrc,nsp-max-wfrp", "--symbols", "2000"])
        .args(["--values", "-5,5,15", "--workers", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    assert!(csv.contains("# p_m_watt = 20.0"));
    let rows = csv.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 3 * 2);
    let svg = fs::read_to_string(dir.path().join("fig4.svg")).unwrap();
    assert!(svg.contains("<svg"));
}

#[test]
fn binary_reports_errors() {
    let out = dmrx().args(["run", "--preset", "fig9"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig9"));

    let out = dmrx().args(["run", "--methods", "zf"]).output().unwrap();
    assert!(!out.status.success());

    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = dmrx()
        .args(["run", "--values", "0", "--out"])
        .arg(blocker.join("sub"))
        .output()
        .unwrap();
    assert!(!out.status.success());
}
