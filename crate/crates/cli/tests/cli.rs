use std::process::{Command, Output};

fn qid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qid")).args(args).env_remove("QID_REGISTRY").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const TINY: &str = r#"
version = 1

[[identity]]
id = "only"
tier = "core"
anchor = "test"
lhs = "f1 - f1"
rhs = "0"
order = 10
"#;

#[test]
fn verify_by_id_and_by_expression() {
    let o = qid(&["verify", "nath-das-1.10"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("pass"));
    assert_eq!(code(&qid(&["verify", "--expr", "f1-f1", "--expr", "0", "--order", "50"])), 0);
    let o = qid(&["verify", "--expr", "f1", "--expr", "1", "--order", "5", "--json"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v[0]["first_mismatch"]["exponent"], 1);
    assert_eq!(v[0]["first_mismatch"]["lhs"], "-1/1");
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(code(&qid(&["verify", "no-such-id"])), 2);
    let o = qid(&["verify", "--expr", "q^", "--expr", "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 3"));
    assert_eq!(code(&qid(&["verify", "--expr", "1/(f1-f1)", "--expr", "0"])), 2);
}

#[test]
fn coefficients() {
    let lines = |s: &str, n: &str| {
        let o = qid(&["coeffs", s, "--upto", n]);
        assert_eq!(code(&o), 0);
        stdout(&o).lines().map(|l| l.split(' ').nth(1).unwrap().to_string()).collect::<Vec<_>>()
    };
    assert_eq!(lines("B", "3"), ["1", "2", "4", "6"]);
    assert_eq!(lines("A", "1"), ["0", "1"]);
    assert_eq!(lines("MU2", "1"), ["1", "-1"]);
    let o = qid(&["coeffs", "B", "--upto", "4", "--mod", "3"]);
    assert_eq!(stdout(&o), "0 1\n1 2\n2 1\n3 0\n4 0\n");
    assert_eq!(code(&qid(&["coeffs", "C", "--upto", "3"])), 2);
}

#[test]
fn suite_tiers_and_stable_json() {
    let o = qid(&["suite", "--tier", "classical"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("15 records: 15 pass, 0 fail, 0 error"));

    let o = qid(&["suite", "--tier", "background"]);
    assert_eq!(code(&o), 0, "background failures are findings, not errors");
    assert!(stdout(&o).contains("findings"));

    let run = || {
        let o = qid(&["suite", "--tier", "core", "--order", "40", "--json"]);
        assert_eq!(code(&o), 0);
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        for e in v.as_array_mut().unwrap() {
            e["elapsed_ms"] = 0.into();
        }
        v
    };
    let a = run();
    assert_eq!(a, run());
    let ids: Vec<_> = a.as_array().unwrap().iter().map(|e| e["id"].as_str().unwrap().to_string()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert!(a.as_array().unwrap().iter().all(|e| e["tier"] == "core" && e["status"] == "pass"));
    assert_eq!(code(&qid(&["suite", "--tier", "nonsense"])), 2);
}

#[test]
fn suite_writes_reports_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = qid(&["suite", "--tier", "classical", "--order", "20", "--json", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 15);
    let missing = dir.path().join("no/such/dir/report.json");
    assert_eq!(code(&qid(&["suite", "--tier", "classical", "--order", "5", "--out", missing.to_str().unwrap()])), 2);
}

#[test]
fn registry_selection() {
    let dir = tempfile::tempdir().unwrap();
    let tiny = dir.path().join("tiny.toml");
    std::fs::write(&tiny, TINY).unwrap();
    let o = qid(&["--registry", tiny.to_str().unwrap(), "list"]);
    assert_eq!(stdout(&o), "only\tcore\ttest\n");

    let via_env = Command::new(env!("CARGO_BIN_EXE_qid"))
        .arg("list")
        .env("QID_REGISTRY", &tiny)
        .output()
        .unwrap();
    assert_eq!(stdout(&via_env), "only\tcore\ttest\n");

    let bogus = dir.path().join("missing.toml");
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_qid"))
        .args(["--registry", tiny.to_str().unwrap(), "verify", "only"])
        .env("QID_REGISTRY", &bogus)
        .output()
        .unwrap();
    assert_eq!(code(&flag_wins), 0);
    let o = qid(&["--registry", bogus.to_str().unwrap(), "list"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn param_check_outcomes() {
    for name in ["S1", "R0"] {
        let o = qid(&["param-check", name]);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
        assert!(stdout(&o).starts_with("ProvedZero"));
        assert!(stdout(&o).contains("series check: pass"));
    }
    let o = qid(&["param-check", "--expr", "f1", "--order", "20"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("NotZero"), "{}", stdout(&o));
    assert_eq!(code(&qid(&["param-check", "--expr", "f8"])), 2);
    assert_eq!(code(&qid(&["param-check", "NOPE"])), 2);
}

#[test]
fn list_shows_all_tiers() {
    let o = qid(&["list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for t in ["\tcore\t", "\tclassical\t", "\tbackground\t"] {
        assert!(text.contains(t), "{t}");
    }
    assert!(text.lines().any(|l| l.starts_with("wang-parity\t")));
}
