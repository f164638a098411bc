use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use refclass::dsl::parse_kb;
use refclass::inference::Trace;
use refclass::{close, verify_model, FiniteModel};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn refclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refclass"))
        .args(args)
        .env("REFCLASS_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_kb(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eval_coin() {
    let coin = fixture("coin.rck");
    let out = refclass(&["eval", coin.to_str().unwrap(), "--mode", "point"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "S14 = 0.5 (reference class tosses)\n");
}

#[test]
fn eval_conflict_point_is_undefined() {
    let path = fixture("conflict.rck");
    let out = refclass(&["eval", path.to_str().unwrap(), "-m", "point", "--json"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(
        v,
        serde_json::json!({
            "query": "S",
            "mode": "point",
            "status": "undefined",
            "reason": "all-rows-deleted"
        })
    );
    let out = refclass(&["eval", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["interval"], serde_json::json!({ "lo": "0", "hi": "1" }));
}

#[test]
fn json_schema_and_trace_replay() {
    let path = fixture("bayes.rck");
    let out = refclass(&["eval", path.to_str().unwrap(), "-q", "D", "--json", "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["interval", "mode", "query", "reference_class", "status", "trace"]
    );
    assert_eq!(v["interval"]["lo"], "19/118");
    assert_eq!(v["reference_class"], "patients & pos");
    let trace: Trace = serde_json::from_value(v["trace"].clone()).unwrap();
    assert_eq!(trace.replay(), trace.outcome);
    assert_eq!(trace.outcome.selected().unwrap().to_string(), "patients & pos");
}

#[test]
fn inline_query_and_negation() {
    let coin = fixture("coin.rck");
    let out = refclass(&["eval", coin.to_str().unwrap(), "-q", "!heads(t14)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "!heads(t14) in [0.5, 0.5] (reference class tosses)\n");
}

#[test]
fn output_is_deterministic() {
    let path = fixture("conflict.rck");
    let args = ["eval", path.to_str().unwrap(), "--json", "--trace", "-m", "point"];
    let a = refclass(&args);
    let b = refclass(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn parse_errors_carry_positions() {
    let kb = temp_kb("class tosses\nindividual t14\nmember t14 in tosses & by_sam\n");
    let out = refclass(&["eval", kb.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains(":3:24:"), "{err}");
    assert!(err.contains("by_sam"), "{err}");
}

#[test]
fn unknown_query_is_input_error() {
    let coin = fixture("coin.rck");
    let out = refclass(&["eval", coin.to_str().unwrap(), "-q", "S99"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn inconsistent_statistics_exit_2() {
    let kb = temp_kb(
        "class r\nproperty p\nstat %(r, p) in [0, 0.3]\nstat %(r, !p) in [0, 0.6]\n",
    );
    let out = refclass(&["eval", kb.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = refclass(&["check", kb.path().to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["sanity"]["violations"][0]["kind"], "empty-stats");
}

#[test]
fn cyclic_subsets_fail_check() {
    let path = fixture("cyclic_subset.rck");
    let out = refclass(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("cyclic"));
}

#[test]
fn model_search_bounds() {
    let coin = fixture("coin.rck");
    let path = coin.to_str().unwrap();
    let out = refclass(&["check", path, "--model", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("no model within bound 1"));

    let out = refclass(&["check", path, "--model", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let model: FiniteModel = serde_json::from_value(v["model"].clone()).unwrap();
    assert_eq!(model.elements.len(), 2);
    let text = std::fs::read_to_string(&coin).unwrap();
    let ckb = close(&parse_kb(&text).unwrap()).unwrap();
    assert!(verify_model(&ckb, &model));
}

#[test]
fn dump_round_trips() {
    let path = fixture("bayes.rck");
    let out = refclass(&["dump", path.to_str().unwrap(), "--source"]);
    assert_eq!(out.status.code(), Some(0));
    let original = parse_kb(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parse_kb(&stdout(&out)).unwrap(), original);

    let out = refclass(&["dump", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["memberships"]["ann"], serde_json::json!(["U", "patients & pos"]));
}

#[test]
fn reads_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_refclass"))
        .args(["eval", "-", "-m", "point"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(std::fs::read(fixture("coin.rck")).unwrap().as_slice())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("S14 = 0.5"));
}

#[test]
fn dump_lists_closure() {
    let coin = fixture("coin.rck");
    let out = refclass(&["dump", coin.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "memberships\n  t14: U, tosses\nsubsets\n  tosses < U\nstatistics\n  \
         %(tosses, heads) in [0.5, 0.5]\n  %(tosses, !heads) in [0.5, 0.5]\n\
         sentences\n  S14: heads(t14)\n"
    );

    let kb = temp_kb("class a\nclass b\nindividual i\nmember i in a\nmember i in b\n");
    let out = refclass(&["dump", kb.path().to_str().unwrap()]);
    assert!(stdout(&out).contains("  i: U, a, a & b, b\n"), "{}", stdout(&out));

    let empty = temp_kb("");
    let out = refclass(&["dump", empty.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "memberships\nsubsets\nstatistics\nsentences\n");
}
