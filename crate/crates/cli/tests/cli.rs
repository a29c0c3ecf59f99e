use std::process::{Command, Output};

use serde_json::Value;

fn flatperm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flatperm"))
        .args(args)
        .env_remove("FLATPERM_MAX_N")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = flatperm(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn distribution_both_methods_agree() {
    let v = json(&["distribution", "--pattern", "12-3", "--n", "3", "--method", "both", "--format", "json"]);
    assert_eq!(v["coefficients"], serde_json::json!({"0": "2", "1": "4"}));
    assert_eq!(v["brute_force"], v["coefficients"]);
    assert_eq!(v["match"], Value::Bool(true));
}

#[test]
fn distribution_n2_is_two_for_every_pattern() {
    for p in ["12-3", "21-3", "23-1", "32-1", "31-2"] {
        let v = json(&["distribution", "--pattern", p, "--n", "2"]);
        assert_eq!(v["coefficients"], serde_json::json!({"0": "2"}), "{p}");
    }
    let v = json(&["distribution", "--pattern", "13-2", "--n", "2", "--method", "brute"]);
    assert_eq!(v["coefficients"], serde_json::json!({"0": "2"}));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["distribution", "--pattern", "12-3", "--n", "0"][..],
        &["distribution", "--pattern", "12-3", "--n", "201"],
        &["distribution", "--pattern", "12-3", "--n", "11", "--method", "brute"],
        &["distribution", "--pattern", "13-2", "--n", "4"],
        &["distribution", "--pattern", "4-21", "--n", "4"],
        &["verify", "--suite", "nope"],
        &["series", "--which", "egf_21_3", "--order", "0"],
        &["series", "--which", "g31_2_r0", "--order", "65"],
        &["bijection", "--cycles", "(1,3,4,2)"],
    ] {
        let o = flatperm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn cap_message_names_the_cap() {
    let o = flatperm(&["distribution", "--pattern", "31-2", "--n", "11", "--method", "brute"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap of 10"));
}

#[test]
fn env_override_raises_and_lowers_the_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_flatperm"))
        .args(["distribution", "--pattern", "31-2", "--n", "4", "--method", "brute"])
        .env("FLATPERM_MAX_N", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_flatperm"))
        .args(["distribution", "--pattern", "31-2", "--n", "4", "--method", "brute"])
        .env("FLATPERM_MAX_N", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn table_rows() {
    let o = flatperm(&["table", "--n-max", "4"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "pattern,n,avoiders,average_num,average_den");
    assert_eq!(lines.len(), 1 + 6 * 4);
    assert!(lines.contains(&"31-2,4,20,1,6"));
    let row = |p: &str| lines.iter().find(|l| l.starts_with(&format!("{p},4,"))).unwrap()[5..].to_string();
    assert_eq!(row("23-1"), row("32-1"));
    for l in lines.iter().filter(|l| l.contains(",1,")) {
        if l.split(',').nth(1) == Some("1") {
            assert!(l.ends_with(",1,0,1"), "{l}");
        }
    }
}

#[test]
fn verify_suites_pass() {
    let o = flatperm(&["verify", "--suite", "oracle", "--n-max", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for p in ["12-3", "21-3", "23-1", "32-1", "31-2"] {
        assert!(text.contains(&format!("PASS oracle {p}")), "{text}");
    }
    assert!(!text.contains("FAIL"));
    let o = flatperm(&["verify", "--suite", "bijections", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn verify_json_surfaces_findings() {
    let v = json(&["verify", "--suite", "series", "--n-max", "4", "--format", "json"]);
    assert_eq!(v["passed"], Value::Bool(true));
    let names: Vec<&str> = v["findings"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("G_0")));
    let v = json(&["verify", "--suite", "identities", "--n-max", "5", "--format", "json"]);
    assert!(v["findings"].as_array().unwrap().iter().any(|f| f["name"].as_str().unwrap().contains("c_{n,j}")));
}

#[test]
fn series_examples() {
    let v = json(&["series", "--which", "g31_2_r0", "--order", "6"]);
    assert_eq!(v["coefficients"], serde_json::json!(["0", "0", "0", "6", "20", "70"]));
    let v = json(&["series", "--which", "egf_21_3", "--order", "3"]);
    assert_eq!(v["coefficients"], serde_json::json!(["2", "6", "10"]));
    assert_eq!(v["factorial_scaled"], serde_json::json!(["2", "6", "20"]));
    let v = json(&["series", "--which", "egf_12_3", "--order", "4"]);
    assert_eq!(v["factorial_scaled"], serde_json::json!(["2", "2", "6", "16"]));
}

#[test]
fn bijection_worked_example() {
    let v = json(&["bijection", "--partition", "{6,5,2}{10,7,3}*{4}*{9,8}"]);
    assert_eq!(v["avoider_23_1"], "(1,6,5,2,10,7)(3)(4,9,8)");
    assert_eq!(v["avoider_32_1"], "(1,5,6,2,7,10)(3)(4,9,8)");
    let back = json(&["bijection", "--cycles", "(1,5,6,2,7,10)(3)(4,9,8)", "--from", "32-1"]);
    assert_eq!(back, v);
}

#[test]
fn output_is_deterministic_and_json_round_trips() {
    let args = ["distribution", "--pattern", "32-1", "--n", "30"];
    let a = stdout(&flatperm(&args));
    let b = stdout(&flatperm(&args));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    let again = format!("{}\n", serde_json::to_string_pretty(&v).unwrap());
    assert_eq!(again, a);
}

#[test]
fn out_writes_the_file_only() {
    let path = std::env::temp_dir().join(format!("flatperm-cli-test-{}.csv", std::process::id()));
    let o = flatperm(&["table", "--n-max", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("pattern,n,avoiders"));
}
