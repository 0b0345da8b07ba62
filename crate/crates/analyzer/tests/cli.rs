use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn analyzer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sla4oai-analyzer"))
        .args(args)
        .env_remove("SLA_ANALYZER_ALLOW_FETCH")
        .output()
        .expect("binary runs")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn fullcontact_is_valid() {
    let out = analyzer(&["-o", "validity", "-f", &path("fullcontact.yaml")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).ends_with("VALID: no conflicts found\n"));
}

#[test]
fn cheaper_plan_conflict_exits_1() {
    let out = analyzer(&["-o", "validity", "-f", &path("cases/vc4_2_invalid.yaml")]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("VC4.2"), "{text}");
    assert!(text.contains("Plan1") && text.contains("Plan2"), "{text}");
}

#[test]
fn malformed_yaml_exits_2_with_location() {
    let dir = std::env::temp_dir().join(format!("sla4oai-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("broken.yaml");
    std::fs::write(&file, "context:\n  id: x\n  type: [plans\n").unwrap();
    let out = analyzer(&["-o", "syntax", "-f", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    // the unclosed sequence is detected at end of input
    assert!(text.contains("line 4, column 1"), "{text}");
    assert!(text.contains("SYNTAX ERROR"), "{text}");

    let out = analyzer(&["-o", "validity", "-f", file.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let body: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(body["verdict"], "syntax_error");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn syntax_check_of_valid_document() {
    let out = analyzer(&["-o", "syntax", "-f", &path("fullcontact.yaml")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("SYNTAX OK\n"));
}

#[test]
fn json_report_with_capacity_file() {
    let out = analyzer(&[
        "-o",
        "validity",
        "-f",
        &path("cases/vc2_4_invalid.yaml"),
        "--capacity",
        &path("cases/vc2_4_invalid.capacity.yaml"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["verdict"], "invalid");
    assert_eq!(report["conflicts"][0]["criterion"], "VC2_4");
    assert_eq!(report["capacities"][0]["provenance"], "declared");
}

#[test]
fn oas_override_replaces_context_api() {
    let out = analyzer(&[
        "-o",
        "validity",
        "-f",
        &path("cases/vc2_2_valid.yaml"),
        "--oas",
        &path("combined-oas.yaml"),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["warnings"], serde_json::json!([]));
}

#[test]
fn usage_and_io_errors_exit_3() {
    assert_eq!(analyzer(&["-o", "lint", "-f", &path("fullcontact.yaml")]).status.code(), Some(3));
    assert_eq!(analyzer(&["-f", &path("fullcontact.yaml")]).status.code(), Some(3));
    assert_eq!(analyzer(&["-o", "validity", "-f", "/nonexistent.yaml"]).status.code(), Some(3));
    let out = analyzer(&["-o", "validity", "-f", &path("fullcontact.yaml"), "--capacity", "/nonexistent.yaml"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(analyzer(&["--help"]).status.code(), Some(0));
}

#[test]
fn fetching_is_opt_in() {
    let dir = std::env::temp_dir().join(format!("sla4oai-fetch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("remote.yaml");
    // port 9 (discard) refuses connections, so an allowed fetch fails fast
    std::fs::write(
        &file,
        "context: {id: r, type: plans, api: 'http://127.0.0.1:9/oas.yaml'}\nmetrics: {requests: {}}\nplans:\n  P:\n    pricing: {cost: 1}\n    rates:\n      /a: {get: {requests: [{max: 1, period: {amount: 1, unit: second}}]}}\n",
    )
    .unwrap();
    let args = ["-o", "validity", "-f", file.to_str().unwrap(), "--format", "json"];
    let message = |o: &Output| {
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        report["warnings"][0]["message"].as_str().unwrap().to_string()
    };
    let offline = analyzer(&args);
    assert_eq!(offline.status.code(), Some(0));
    assert!(message(&offline).contains("disabled"), "{}", message(&offline));

    let online = Command::new(env!("CARGO_BIN_EXE_sla4oai-analyzer"))
        .args(args)
        .env("SLA_ANALYZER_ALLOW_FETCH", "1")
        .output()
        .unwrap();
    assert_eq!(online.status.code(), Some(0));
    assert!(message(&online).contains("failed"), "{}", message(&online));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn unresolvable_bind_address_exits_3() {
    assert_eq!(analyzer(&["--serve", "not an address"]).status.code(), Some(3));
}
