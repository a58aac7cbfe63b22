use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(rel: &str) -> String {
    fixtures().join(rel).to_string_lossy().into_owned()
}

fn plconf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plconf"))
        .args(args)
        .env_remove("IRATEPLC_MAX_ITERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn final_literals(json: &str) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    let mut lits: Vec<String> = v["final"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap().into())
        .collect();
    lits.sort();
    lits
}

#[test]
fn resolves_the_scenario_as_a_table() {
    let model = fixture("webportal.fm");
    let configs = fixture("scenario");
    let out = plconf(&[
        "resolve",
        "--model",
        &model,
        "--configs",
        &configs,
        "--rule",
        "most-complete",
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    let mut got: Vec<&str> = first.strip_prefix("final: ").unwrap().split(", ").collect();
    got.sort();
    let mut want = vec![
        "KeyWordSupport",
        "DB",
        "https",
        "¬ms",
        "Php",
        "Text",
        "Dynamic",
        "¬Sec",
        "Database",
        "Active",
        "DataTransfer",
    ];
    want.sort();
    assert_eq!(got, want);
    assert!(text.contains("valid: true"));
    assert!(text.contains("55/76"));
}

#[test]
fn directory_and_json_inputs_agree() {
    let model = fixture("webportal.fm");
    let a = plconf(&["resolve", "--model", &model, "--configs", &fixture("scenario")]);
    let b = plconf(&["resolve", "--model", &model, "--configs", &fixture("scenario.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn json_output_is_byte_identical_across_runs() {
    let args = [
        "resolve",
        "--model",
        &fixture("webportal.fm"),
        "--configs",
        &fixture("scenario"),
        "--trace",
    ];
    let runs: Vec<Vec<u8>> = (0..3).map(|_| plconf(&args).stdout).collect();
    assert!(runs.windows(2).all(|w| w[0] == w[1]));
    let text = String::from_utf8(runs[0].clone()).unwrap();
    // two trace lines precede the report
    let mut lines = text.lines();
    for _ in 0..2 {
        let v: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
        assert!(v["index"].is_u64());
    }
}

#[test]
fn tie_follows_the_manager_rule() {
    let model = fixture("tie/tie.fm");
    let configs = fixture("tie/configs");
    let run = |rule: &str| {
        let out = plconf(&["resolve", "--model", &model, "--configs", &configs, "--rule", rule]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        final_literals(&stdout(&out))
    };
    assert_eq!(run("most-complete"), ["F"]);
    assert_eq!(run("simplest"), ["¬F"]);
    assert_eq!(run("priority:B"), ["¬F"]);
    assert_eq!(run("priority:A"), ["F"]);
}

#[test]
fn enumerates_a_root_only_model() {
    let out = plconf(&["enumerate", "--model", &fixture("tiny.fm")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["configurations"], serde_json::json!([["Root"]]));
}

#[test]
fn validate_reports_exit_status() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("webportal.fm");
    let out = plconf(&["validate", "--model", &model, &fixture("final.lits")]);
    assert_eq!(out.status.code(), Some(0));

    let bad = dir.path().join("bad.lits");
    fs::write(&bad, "XML, Database\n").unwrap();
    let out = plconf(&[
        "validate",
        "--model",
        &model,
        bad.to_str().unwrap(),
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("XorMultiple"));
}

#[test]
fn score_recomputes_satisfaction() {
    let out = plconf(&[
        "score",
        "--model",
        &fixture("webportal.fm"),
        "--configs",
        &fixture("scenario"),
        &fixture("final.lits"),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["weighted_global"]["num"], 55);
    assert_eq!(v["weighted_global"]["den"], 76);
}

#[test]
fn writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = plconf(&[
        "resolve",
        "--model",
        &fixture("webportal.fm"),
        "--configs",
        &fixture("scenario"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(final_literals(&fs::read_to_string(path).unwrap()).len(), 11);
}

#[test]
fn input_errors_exit_one_and_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("broken.fm");
    fs::write(&model, "Root\n  A?\n  A?\n").unwrap();
    let out = plconf(&["enumerate", "--model", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = stderr(&out);
    assert!(err.contains("broken.fm") && err.contains("line 3"), "{err}");

    let configs = dir.path().join("configs");
    fs::create_dir(&configs).unwrap();
    fs::write(configs.join("s.stk"), "stakeholder: S\nWebServer:+:3\nContent:+:9\n").unwrap();
    let out = plconf(&[
        "resolve",
        "--model",
        &fixture("webportal.fm"),
        "--configs",
        configs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("s.stk") && err.contains("line 3"), "{err}");

    let out = plconf(&[
        "resolve",
        "--model",
        &fixture("missing.fm"),
        "--configs",
        &fixture("scenario"),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("missing.fm"));

    let out = plconf(&["resolve", "--model", &fixture("webportal.fm")]);
    assert_eq!(out.status.code(), Some(1), "usage errors are input errors");

    let out = plconf(&["enumerate", "--model", &fixture("tiny.fm"), "--format", "yaml"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn iteration_cap_can_be_overridden() {
    let out = Command::new(env!("CARGO_BIN_EXE_plconf"))
        .args([
            "resolve",
            "--model",
            &fixture("webportal.fm"),
            "--configs",
            &fixture("scenario"),
        ])
        .env("IRATEPLC_MAX_ITERS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("1 iterations"));
}
