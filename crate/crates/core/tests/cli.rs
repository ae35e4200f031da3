use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stratum-spin"))
        .args(args)
        .env("STRATUM_SPIN_THREADS", "2")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, stdout, stderr) = run(&full);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

#[test]
fn spin_of_minus_one_nine() {
    let v = json(&["spin", "Q(-1,9)"]);
    assert_eq!(v["parity"], "even");
    assert_eq!(v["defined"], true);
    for key in ["route_closed", "route_sum", "route_arf"] {
        assert_eq!(v[key], "even");
    }
    assert_eq!((v["n_plus"].as_i64(), v["n_minus"].as_i64()), (Some(1), Some(1)));
}

#[test]
fn undefined_spin_is_reported() {
    let v = json(&["spin", "Q(2,2)"]);
    assert_eq!(v["defined"], false);
    assert_eq!(v["parity"], "undefined");
}

#[test]
fn stratum_info_flags_empty_stratum() {
    let v = json(&["stratum", "info", "Q(1,3)"]);
    assert_eq!(v["pattern"], "Q(3,1)");
    assert_eq!(v["genus"], 2);
    assert_eq!(v["nonempty"], false);
}

#[test]
fn cover_keys() {
    let v = json(&["cover", "Q(-1,9)"]);
    assert_eq!(v["cover"], "H(10)");
    assert_eq!(v["cover_genus"], 6);
    assert_eq!(v["h1_dim"], 12);
    let marked = json(&["cover", "Q(-1,9,0)", "--keep-marked"]);
    assert_eq!(marked["cover"], "H(10,0^2)");
}

#[test]
fn billiard_triangle() {
    let v = json(&["billiard", "classify", "--angles", "11/14,1/7,1/14"]);
    assert_eq!(v["N"], 14);
    assert_eq!(v["genus"], 6);
    assert_eq!(v["abelian_pattern"], "H(10)");
    assert_eq!(v["quadratic_pattern"], "Q(9,-1)");
    assert_eq!(v["spin"], "even");
    assert_eq!(v["hyperelliptic"]["verdict"], "not hyperelliptic");
}

#[test]
fn arf_subcommands() {
    let chain = json(&["arf", "chain", "1,1,1,1,1,3"]);
    assert_eq!(chain["values"], "1111");
    assert_eq!(chain["arf"], 1);
    let count = json(&["arf", "count", "--genus", "3"]);
    assert_eq!((count["arf0"].as_u64(), count["arf1"].as_u64()), (Some(36), Some(28)));
}

#[test]
fn enumerate_lists_empty_strata() {
    let v = json(&["enumerate", "--flavor", "Q", "--max-sum", "8"]);
    let rows = v["rows"].as_array().unwrap();
    let empty: Vec<&str> = rows
        .iter()
        .filter(|r| r["nonempty"] == false)
        .map(|r| r["pattern"].as_str().unwrap())
        .collect();
    assert_eq!(empty, ["Q()", "Q(1,-1)", "Q(3,1)", "Q(4)"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "enumerate", "--flavor", "Q", "--max-sum", "12"];
    assert_eq!(run(&args).1, run(&args).1);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["spin", "Q(1,2"][..],
        &["spin", "Q(1,1)"],
        &["cover", "H(2)"],
        &["billiard", "classify", "--angles", "1/2,1/2"],
        &["frobnicate"],
    ] {
        let (code, _, stderr) = run(args);
        assert_eq!(code, 2, "{args:?}");
        assert!(!stderr.is_empty());
    }
}
