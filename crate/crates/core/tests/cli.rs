use bncert::cli::{run_with, EXIT_NOT_ESTABLISHED, EXIT_OK, EXIT_USAGE};
use bncert::reduction::{verify_certificate, Certificate};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(std::iter::once("bncert").chain(args.iter().copied()), &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let r = run(&full);
    (r.code, serde_json::from_str(&r.out).expect("stdout is JSON"))
}

#[test]
fn bounds_as_decimal_strings() {
    let (code, v) = json(&["bounds", "6", "4", "3"]);
    assert_eq!(code, EXIT_OK);
    for (key, want) in [
        ("rho", "0"),
        ("naive_points", "12"),
        ("main_guarantee", "9"),
        ("hyperplane_naive", "6"),
        ("main_1s_guarantee", "5"),
    ] {
        assert_eq!(v[key], want, "{key}");
    }
}

#[test]
fn bounds_clamps_negative_guarantees() {
    // (2r - 3)d is far below (r - 2)^2 g here.
    let (code, v) = json(&["bounds", "40", "60", "8"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["main_1s_guarantee"], "0");
}

#[test]
fn rho_text() {
    let r = run(&["rho", "11", "7", "5"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains('1'));
}

#[test]
fn good_exceptional_case() {
    let r = run(&["good", "11", "7", "5", "11"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.starts_with("good (11, 7, 5, 11): established"));
}

#[test]
fn certificate_file_replays() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let path_str = path.to_str().unwrap();

    let r = run(&["good", "85", "65", "5", "3", "--certificate", path_str]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(verify_certificate(&cert).is_ok());
    assert_eq!(cert.rule.name(), "lemma-wh");
    assert_eq!(run(&["verify", path_str]).code, EXIT_OK);

    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"d\": \"85\"", "\"d\": \"84\"", 1)).unwrap();
    assert_eq!(run(&["verify", path_str]).code, EXIT_NOT_ESTABLISHED);
}

#[test]
fn excellent_and_derive_certificates_replay() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        vec!["excellent", "72", "51", "5", "0"],
        vec!["derive", "add-can", "30", "12", "6", "6"],
        vec!["derive", "exc-good", "20", "0", "5", "6", "--b", "0"],
        vec!["derive", "descend-degree", "12", "0", "5", "3"],
        vec!["derive", "lemma-wh", "85", "65", "5", "3"],
        vec!["derive", "glue", "12", "1", "5", "4", "--split", "6,0,2,6,0,2,2"],
    ]
    .into_iter()
    .enumerate()
    {
        let path = dir.path().join(format!("{i}.json"));
        let mut full = args.clone();
        full.extend(["--certificate", path.to_str().unwrap()]);
        let r = run(&full);
        assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.err);
        let cert = Certificate::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(verify_certificate(&cert).is_ok(), "{args:?}");
    }
}

#[test]
fn derive_reports_child() {
    let r = run(&["derive", "add-half", "10", "3", "5", "2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("good (8, 0, 5, 0)"));
}

#[test]
fn rejections_exit_one_and_name_the_check() {
    let r = run(&["derive", "exc-good", "10", "5", "5", "2", "--b", "6"]);
    assert_eq!(r.code, EXIT_NOT_ESTABLISHED);
    assert!(r.out.contains("b <= g: 6 <= 5 [FAILED]"));

    let (code, v) = json(&["derive", "add-line", "10", "6", "5", "1"]);
    assert_eq!(code, EXIT_NOT_ESTABLISHED);
    assert_eq!(v["status"], "rejected");
    assert_eq!(v["rejection"]["check"]["name"], "rho >= 1");
    assert_eq!(v["rejection"]["check"]["lhs"], "0");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["good", "11", "7", "4", "0"],
        vec!["good", "5", "0", "5", "6"],
        vec!["good", "10", "20", "5", "0"],
        vec!["good", "11", "7", "5"],
        vec!["bounds", "-1", "0", "5"],
        vec!["bounds", "6", "4", "1"],
        vec!["verify", "/nonexistent/cert.json"],
        vec!["audit", "appendix", "--r-min", "4"],
        vec!["frobnicate"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert!(!r.err.is_empty(), "{args:?}");
    }
}

#[test]
fn help_exits_zero() {
    let r = run(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("audit"));
}

#[test]
fn depth_limit_is_incomplete_not_rejected() {
    let (code, v) = json(&["good", "200", "120", "6", "60", "--depth", "1"]);
    assert_eq!(code, EXIT_NOT_ESTABLISHED);
    assert_eq!(v["status"], "incomplete");
}

#[test]
fn audits_with_violations_never_exit_zero() {
    let r = run(&["audit", "appendix", "--r-max", "5"]);
    assert_eq!(r.code, EXIT_NOT_ESTABLISHED);
    assert!(r.out.contains("violation at (26, 17, 5, 1)"));

    let r = run(&["audit", "appendix", "--r-max", "5", "--glue-reading", "n1+n2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.ends_with("0 violations\n"));
}

#[test]
fn sweep_report_schema() {
    let (code, v) = json(&["audit", "needformain", "--d-max", "50", "--r-max", "6"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["range"]["d_max"], "50");
    assert!(v["tuples_checked"].is_string());
    assert_eq!(v["violations"], Value::Array(vec![]));
    assert_eq!(v["excluded_cases"][0]["d"], "11");
}

#[test]
fn oracle_guarantee_agrees() {
    let r = run(&["oracle", "guarantee", "40", "20", "6"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("agree: true"));
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        vec!["--json", "good", "85", "65", "5", "3"],
        vec!["--json", "audit", "t-choice", "--d-max", "120", "--jobs", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.out, b.out);
        assert!(!a.out.contains('.'), "no floating point in {args:?}");
    }
}

#[test]
fn glue_split_needs_seven_values() {
    assert_eq!(run(&["derive", "glue", "12", "1", "5", "4", "--split", "6,0,2,6,0,2"]).code, EXIT_USAGE);
    let r = run(&["derive", "glue", "12", "1", "5", "4", "--split", "6,0,2,6,0,2,3"]);
    assert_eq!(r.code, EXIT_NOT_ESTABLISHED);
}
