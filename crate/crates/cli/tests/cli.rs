use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shtukalab")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn irreducibles_over_f2() {
    let o = run(&["irreducibles", "-d", "3"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("degree 2 (1): t^2+t+1"), "{s}");
    assert!(s.contains("degree 3 (2)"), "{s}");
}

#[test]
fn carlitz_lfactor_at_t() {
    let o = run(&["lfactor", "--prime", "t", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value_num"], "t+1");
    assert_eq!(v["value_den"], "t");
}

#[test]
fn carlitz_check_passes() {
    for q in ["2", "3"] {
        let o = run(&["carlitz-check", "--q", q, "--prec", "5"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).trim_end().ends_with("PASS"));
    }
}

#[test]
fn trace_fixture_passes() {
    let o = run(&["trace-check", "--spec", &fixture("shtuka_nilpotent.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v["reports"][0];
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["lhs"], "z+1");
    assert_eq!(r["L"], "z+1");
}

#[test]
fn shifted_fixture_has_regulator() {
    let o = run(&["trace-check", "--spec", &fixture("shtuka_shifted.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("det rho = z+1"), "{}", stdout(&o));
}

#[test]
fn random_suite_is_deterministic() {
    let a = run(&["trace-check", "--random", "4", "--family", "shifted", "--seed", "3", "--format", "json"]);
    let b = run(&["trace-check", "--random", "4", "--family", "shifted", "--seed", "3", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let a = run(&["lvalue", "--prec", "6", "--format", "json"]);
    let b = run(&["lvalue", "--prec", "6", "--threads", "3", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_input_exits_3() {
    let o = run(&["lfactor", "--prime", "t^2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["units", "--q", "6"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["trace-check"]);
    assert_eq!(o.status.code(), Some(3));
}
