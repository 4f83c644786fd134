use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const HO: &str = "# harmonic oscillator\nmodel.h = x\nmodel.omega = 1\nmodel.A = 0\ndomain.xmin = -10\ndomain.xmax = 10\ngrid.n = 2000\n";
const ANEQ0: &str = "model.h = x\r\nmodel.omega = 1\r\nmodel.A = -2\r\ndomain.xmin = 0.1\r\ndomain.xmax = 5\r\ngrid.n = 2000\r\nlevels = 4\r\n";

fn lienard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lienard"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

fn write_cfg(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn spectrum_writes_rows_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ho.cfg", HO);
    let out = dir.path().join("s.csv");
    let r = lienard(&[
        "spectrum",
        "--config",
        s(&cfg),
        "--levels",
        "8",
        "--out",
        s(&out),
        "--plot",
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,E_numeric,E_closed,abs_err");
    assert_eq!(lines.len(), 9);
    let e0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((e0 - 0.5).abs() < 1e-5);
    let gp = fs::read_to_string(dir.path().join("s.gp")).unwrap();
    assert!(gp.contains("'s.csv'"));
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "a.cfg", ANEQ0);
    let a = lienard(&["symmetries", "--config", s(&cfg)]);
    let b = lienard(&["symmetries", "--config", s(&cfg)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn symmetries_for_nonzero_coupling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "a.cfg", ANEQ0);
    let r = lienard(&["symmetries", "--config", s(&cfg)]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    let classes: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap())
        .collect();
    assert_eq!(classes[..3], ["noether"; 3]);
    assert_eq!(classes[3..], ["not_symmetry"; 5]);
}

#[test]
fn ladder_and_eigenfunction() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "a.cfg", ANEQ0);
    let r = lienard(&["ladder", "--config", s(&cfg)]);
    assert_eq!(r.status.code(), Some(0));
    let text = String::from_utf8(r.stdout).unwrap();
    for line in text.lines().skip(1) {
        let o: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((o - 1.0).abs() < 1e-9);
    }
    let out = dir.path().join("e.csv");
    let r = lienard(&[
        "eigenfunction",
        "--config",
        s(&cfg),
        "--state",
        "1",
        "--out",
        s(&out),
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert!(fs::read_to_string(&out).unwrap().starts_with("x,xi,psi\n"));
}

#[test]
fn classical_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ho.cfg", HO);
    let r = lienard(&[
        "classical",
        "--config",
        s(&cfg),
        "--x0",
        "-1",
        "--periods",
        "1",
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let text = String::from_utf8(r.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,x,v,energy,u"));
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert!((last[0] - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    assert!((last[1] + 1.0).abs() < 1e-8);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_cfg(
        dir.path(),
        "bad.cfg",
        &HO.replace("model.A = 0", "model.A = 0.5"),
    );
    assert_eq!(
        lienard(&["report", "--config", s(&bad)]).status.code(),
        Some(2)
    );
    let missing = write_cfg(dir.path(), "m.cfg", &HO.replace("model.omega = 1\n", ""));
    let r = lienard(&["spectrum", "--config", s(&missing)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("model.omega"));
    let unknown = write_cfg(dir.path(), "u.cfg", &format!("{HO}grid.m = 3\n"));
    let r = lienard(&["spectrum", "--config", s(&unknown)]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("line 8"));
    assert_eq!(lienard(&["spectrum"]).status.code(), Some(2));
    assert_eq!(lienard(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn module_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let narrow = write_cfg(
        dir.path(),
        "n.cfg",
        &HO.replace("-10", "-2").replace("= 10", "= 2"),
    );
    let r = lienard(&["spectrum", "--config", s(&narrow)]);
    assert_eq!(r.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&r.stderr).contains("coverage"));
}

#[test]
fn report_lists_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "ho.cfg", HO);
    let out = dir.path().join("r.csv");
    let r = lienard(&["report", "--config", s(&cfg), "--out", s(&out)]);
    let csv = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 11);
    let all_pass = rows.iter().all(|r| r.split(',').nth(2) == Some("true"));
    assert_eq!(r.status.code(), Some(if all_pass { 0 } else { 1 }));
    let stderr = String::from_utf8_lossy(&r.stderr);
    assert_eq!(
        stderr
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count(),
        11
    );
}
