use std::io::Write;
use std::process::{Command, Output, Stdio};

use kromatik::TruncatedSeries;

const PATH3: &str = "graph n=3\nedge 1 2\nedge 2 3\n";
const K2: &str = "graph n=2\nedge 1 2\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kromatik"))
        .args(args)
        .env_remove("KROMATIK_THREADS")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn expand_path_matches_first_table_row() {
    let o = run(&["expand", "-", "--series", "kl", "--basis", "M", "--trunc", "4"], PATH3);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        "(1 + 4q + q^2) M[1,1,1] + q M[1,2] + q M[2,1] + (6 + 24q + 6q^2) M[1,1,1,1] + 5q M[1,1,2] + 5q M[1,2,1] + (1 + 3q + q^2) M[2,1,1]"
    );
}

#[test]
fn expand_edge_in_e() {
    let o = run(&["expand", "-", "--series", "kx", "--basis", "e", "--trunc", "4"], K2);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2 e[2] + 6 e[3] + 14 e[4]");
}

#[test]
fn expand_below_degree_is_empty() {
    let o = run(&["expand", "-", "--series", "x", "--trunc", "1"], K2);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "");
}

#[test]
fn symmetric_basis_on_asymmetric_series() {
    let o = run(&["expand", "-", "--series", "kl", "--basis", "e", "--trunc", "4"], PATH3);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not symmetric"));
}

#[test]
fn parse_errors_report_the_line() {
    let o = run(&["expand", "-", "--series", "kx", "--trunc", "3"], "graph n=2\n\nedge 1 3\n");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = run(&["expand", "-", "--series", "kx", "--trunc", "3", "--bogus"], K2);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_series_roundtrips() {
    let o = run(&["--json", "expand", "-", "--series", "kxq", "--basis", "Lbar", "--trunc", "4"], PATH3);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s = TruncatedSeries::from_json(&v["series"].to_string()).unwrap();
    assert_eq!(s, kromatik::kromatic_x(&kromatik::Graph::path(3), 4));
    assert_eq!(v["basis"], "Lbar");
}

#[test]
fn tables_pass() {
    for t in ["1", "2", "3"] {
        let o = run(&["table", t], "");
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).lines().last().unwrap().ends_with("pass"));
    }
    let o = run(&["--json", "table", "1"], "");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["report"]["rows"].as_array().unwrap().len(), 9);
}

#[test]
fn check_suites() {
    for s in ["recurrence", "bijection", "hopf"] {
        let o = run(&["check", s], "");
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let o = run(&["check", "cluster", "--max-vertices", "3"], "");
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["--json", "check", "recurrence"], "");
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn oracle_agrees_with_expand() {
    for input in [K2, PATH3] {
        for series in ["x", "xq", "kx", "kl", "kxq"] {
            let a = run(&["oracle", "-", "--series", series, "--trunc", "4"], input);
            let b = run(&["expand", "-", "--series", series, "--trunc", "4"], input);
            assert_eq!(a.status.code(), Some(0));
            assert_eq!(stdout(&a), stdout(&b), "{series}");
        }
    }
}

#[test]
fn oracle_edge_cases() {
    let o = run(&["oracle", "-", "--series", "kx", "--trunc", "3"], "graph n=0\n");
    assert_eq!(stdout(&o).trim(), "1");
    let o = run(&["oracle", "-", "--series", "kx", "--trunc", "3"], "graph n=4\n");
    assert_eq!(o.status.code(), Some(5));
    let o = run(&["oracle", "-", "--series", "kx", "--trunc", "6"], K2);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn output_independent_of_threads() {
    let args = ["expand", "-", "--series", "kl", "--basis", "Lbar", "--trunc", "6"];
    let one = run(&[&["--threads", "1"], &args[..]].concat(), PATH3);
    let four = run(&[&["--threads", "4"], &args[..]].concat(), PATH3);
    assert_eq!(one.stdout, four.stdout);
    let a = run(&["--threads", "1", "table", "2"], "");
    let b = run(&["--threads", "3", "table", "2"], "");
    assert_eq!(a.stdout, b.stdout);
}
