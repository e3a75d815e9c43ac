use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn xychain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xychain")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sweep_writes_a_table_next_to_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gamma = 0.8\nlambda_min = 0.5\nlambda_max = 2\nlambda_step = 0.5\nn = 1\n");
    let out = xychain(&["sweep", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("out/table.csv")).unwrap();
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with("# xychain sweep schema=1"));
    assert!(lines.next().unwrap().starts_with("gamma,lambda,n,state"));
    assert_eq!(lines.count(), 4 * 2);
}

#[test]
fn empty_lambda_range_succeeds_with_an_empty_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "lambda_min = 2\nlambda_max = 1\n");
    let out = xychain(&["sweep", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(dir.path().join("out/table.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gamma = 1.5\n");
    assert_eq!(xychain(&["sweep", &cfg]).status.code(), Some(1));
    let cfg = write_config(dir.path(), "colour = blue\n");
    assert_eq!(xychain(&["sweep", &cfg]).status.code(), Some(1));
    assert_eq!(xychain(&["figure", "fig42", &cfg]).status.code(), Some(1));
}

#[test]
fn missing_config_exits_with_one() {
    assert_eq!(xychain(&["sweep", "/nonexistent/run.cfg"]).status.code(), Some(1));
}

#[test]
fn unwritable_output_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocked");
    fs::write(&blocker, "not a directory").unwrap();
    let cfg = write_config(dir.path(), "output = blocked/sub\nlambda_min = 0.5\nlambda_max = 0.5\n");
    assert_eq!(xychain(&["sweep", &cfg]).status.code(), Some(3));
}

#[test]
fn critical_reports_both_points() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "gamma = 0.8\nlambda_min = 0.5\nlambda_max = 2.5\nlambda_step = 0.01\n");
    let out = xychain(&["critical", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("lambda1 1.0000"), "{stdout}");
    assert!(stdout.contains("lambda2 1.66"), "{stdout}");
    assert!(dir.path().join("out/critical/critical.csv").exists());
}

#[test]
fn figure_and_fitlen_write_their_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "lambda_min = 0.1\nlambda_max = 3\nlambda_step = 0.1\n[fit]\nlambda = 0.5\n");
    let out = xychain(&["figure", "fig12", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/fig12/fig12.gp").exists());
    let out = xychain(&["fitlen", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("out/fitlen.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn oracle_passes_on_a_small_ring() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[ed]\nsites = 8\ngamma = 1\nlambda = 0.5, 2\nn = 1\n");
    let out = xychain(&["oracle", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out/oracle.csv").exists());
}
