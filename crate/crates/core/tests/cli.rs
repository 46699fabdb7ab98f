use std::process::{Command, Output};

fn s2xr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_s2xr")).args(args).output().unwrap()
}

#[test]
fn volume_prints_both_evaluations() {
    let out = s2xr(&["volume", "1.0471975511965976"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("4.469480329"));
}

#[test]
fn bad_arguments_exit_with_3() {
    assert_eq!(s2xr(&["volume", "3.5"]).status.code(), Some(3));
    assert_eq!(s2xr(&["optimize", "--group", "1q.I.1", "--q", "2"]).status.code(), Some(3));
    assert_eq!(s2xr(&["optimize", "--group", "11.I.1"]).status.code(), Some(3));
    assert_eq!(s2xr(&["table", "--no-such-flag"]).status.code(), Some(3));
}

#[test]
fn curve_with_two_samples_has_two_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let out = s2xr(&[
        "curve", "--group", "8.I.2", "--tau-min", "1.2", "--tau-max", "3.4", "--n", "2", "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn optimize_reports_json() {
    let out = s2xr(&["optimize", "--group", "8.I.1", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn mesh_writes_an_obj_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.obj");
    let out = s2xr(&["mesh", "--group", "8.I.1", "--mesh-grid", "10", "--out", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().any(|l| l.starts_with("f ")));
}
