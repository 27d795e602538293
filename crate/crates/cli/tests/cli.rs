use std::io::Write;
use std::process::{Command, Output, Stdio};

fn derange(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn e_examples() {
    for (args, want) in [
        (&["e", "--profile", "2,2,2"][..], "10"),
        (&["e", "--profile", "1,1,1,1,1", "--method", "oracle"], "44"),
        (&["e", "--profile", "1,2"], "0"),
        (&["e", "--profile", "3,3,3", "--method", "hypergeo"], "56"),
        (&["tmne", "--options", "2,2,2"], "2"),
        (&["b", "--options", "2,2,2"], "16"),
        (&["b", "--options", "2,2,2", "--refined"], "9"),
        (&["b", "--options", "3,3", "--via", "series"], "19"),
        (&["bezout", "--blocks", "2,2,2"], "10"),
    ] {
        let o = derange(args);
        assert_eq!(code(&o), 0, "{args:?}");
        assert_eq!(stdout(&o).trim(), want, "{args:?}");
    }
}

#[test]
fn json_schema_and_determinism() {
    let args = ["e", "--profile", "4,4,4,4", "--format", "json", "--check"];
    let a = derange(&args);
    let b = derange(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["profile"], serde_json::json!([4, 4, 4, 4]));
    assert_eq!(v["value"], "748521");
    assert_eq!(v["method"], "recurrence");
    assert!(v["elapsed_ms"].is_null());

    let timed = derange(&["e", "--profile", "2,2", "--format", "json", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn big_values_are_strings() {
    let o = derange(&["e", "--profile", "30,30,30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let s = v["value"].as_str().unwrap();
    assert!(s.len() > 20 && s.bytes().all(|c| c.is_ascii_digit()));
}

#[test]
fn tsv_output() {
    let o = derange(&["tmne", "--options", "3,3,3", "--format", "tsv"]);
    assert_eq!(
        stdout(&o),
        "profile\tmethod\tvalue\n3,3,3\trecurrence\t10\n"
    );
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["e", "--profile", "1,x"][..],
        &["e", "--profile", "1,1", "--method", "fast"],
        &["e", "--profile", "1,1", "--method", "hypergeo"],
        &["tmne", "--options", "2,0"],
        &["b", "--options", "0"],
        &["asym", "--family", "e3", "--profile", "1,1,2"],
        &["asym", "--family", "diag", "--n", "5"],
        &["asym", "--family", "e4", "--uvw", "1.5,1.5,1", "--n", "3"],
        &["bezout", "--blocks", "1,1", "/nonexistent/matrix.txt"],
    ] {
        assert_eq!(code(&derange(args)), 2, "{args:?}");
    }
}

#[test]
fn bezout_reads_matrix_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_derange"))
        .args(["bezout", "--blocks", "1,1,1", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"# cyclic\n3 3\n0 1 1\n1 0 1\n1 1 0\n")
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "2");
}

#[test]
fn asym_reports_estimate_exact_ratio() {
    let o = derange(&["asym", "--family", "franel", "--n", "50"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ratio = v["ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.02);
    assert!(v["estimate"].as_f64().unwrap() > 0.0);
    assert_eq!(v["exact"].as_str().unwrap().len(), 44);

    let o = derange(&[
        "asym",
        "--family",
        "e4",
        "--direction",
        "1,1,2,2",
        "--n",
        "8",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["ratio"].as_f64().unwrap() - 1.0).abs() < 0.05);
}

#[test]
fn verify_suites() {
    for (suite, extra) in [
        ("cross-method", &["--max-n", "10"][..]),
        ("recurrences", &["--max", "6"]),
        ("b-identities", &["--max", "5"]),
        ("hypergeo", &["--max", "6"]),
        ("oeis", &[]),
    ] {
        let mut args = vec!["verify", "--suite", suite];
        args.extend(extra);
        let o = derange(&args);
        assert_eq!(code(&o), 0, "{suite}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn verify_reports_fixture_mismatch() {
    let dir = std::env::temp_dir().join(format!("derange-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.tsv");
    std::fs::write(&path, "A000166\t5\t45\n").unwrap();
    let o = derange(&[
        "verify",
        "--suite",
        "oeis",
        "--fixtures",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAIL  oeis A000166"));
    std::fs::remove_dir_all(&dir).ok();
}
