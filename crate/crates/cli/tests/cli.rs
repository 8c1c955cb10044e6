use std::process::{Command, Output};

use serde_json::Value;
use thue_core::solver::EnumerationResult;

fn thue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thue")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = thue(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    thue(args).status.code().expect("exit code")
}

#[test]
fn info_agrees_across_grammars() {
    let a = json(&["info", "1,0,0,-2"]);
    let b = json(&["info", "x^3 - 2*y^3"]);
    assert_eq!(a, b);
    assert_eq!(a["discriminant"], "-108");
    assert_eq!(a["mahler_exact"], "2");
    assert_eq!(a["naive_height"], "2");
    assert_eq!(a["irreducibility"]["verdict"], "irreducible");
    assert_eq!(a["q"], 1);
}

#[test]
fn malformed_form_reports_position() {
    let out = thue(&["info", "1,,2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("position 2"), "{err}");
}

#[test]
fn solve_counts_and_round_trips() {
    for mode in ["ineq", "eq"] {
        let v = json(&["solve", "x^3 - 2*y^3", "--m", "1", "--ymax", "100", "--mode", mode]);
        assert_eq!(v["solutions"].as_array().unwrap().len(), 2);
        let parsed: EnumerationResult = serde_json::from_value(v.clone()).unwrap();
        assert_eq!(serde_json::to_value(&parsed).unwrap(), v);
    }
    let v = json(&["solve", "x^3 - 2*y^3", "--ymax", "0"]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    assert_eq!((sols[0]["x"].as_str(), sols[0]["y"].as_str()), (Some("1"), Some("0")));
}

#[test]
fn solve_csv_projects_the_json() {
    let out = thue(&["solve", "x^3 - 2*y^3", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,y,value,related_root,related_tie,class,primitive");
    assert_eq!(&lines[1..], ["1,0,1,0,true,small,true", "1,1,-1,0,false,small,true"]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "bounds", "x^3 - 4*x*y^2 + y^3", "--m", "2"];
    assert_eq!(thue(&args).stdout, thue(&args).stdout);
}

#[test]
fn bounds_report_and_exit_codes() {
    let v = json(&["bounds", "x^3 - 2*y^3", "--m", "1"]);
    let entries = v["entries"].as_array().unwrap();
    let prime = entries.iter().find(|e| e["theorem_id"] == "prime_inequality_count").unwrap();
    assert_eq!(prime["applicable"], "true");
    assert_eq!(prime["bound"], "13282");
    for key in ["theorem_id", "applicable", "reason", "threshold", "bound", "bound_floor"] {
        assert!(prime.get(key).is_some(), "{key}");
    }
    assert_eq!(code(&["bounds", "x^3 - 2*y^3", "--epsilon", "1/2"]), 2);
    assert_eq!(code(&["bounds", "x^3 - 2*y^3", "--strict"]), 3);
    assert_eq!(code(&["bounds", "x^3 - 2*y^3", "--m", "0"]), 2);
}

#[test]
fn reduce_gives_p_plus_one_forms() {
    let v = json(&["reduce", "x^3 - 2*y^3", "-p", "2"]);
    let forms = v["forms"].as_array().unwrap();
    assert_eq!(forms.len(), 3);
    assert_eq!(forms[0]["form"], "8*x^3 - 2*y^3");
    assert!(forms.iter().all(|f| f["discriminant"] == "-6912"));
    assert_eq!(code(&["reduce", "x^3 - 2*y^3", "-p", "4"]), 2);
}

#[test]
fn logcurve_reports_and_strict_mode() {
    let cubic = "x^3 - x^2*y - 2*x*y^2 + y^3";
    let v = json(&["logcurve", cubic, "--points", "0,1;1,1;1,2;4,9"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert_eq!(v["gap"]["variant"], "four");
    assert_eq!(v["gap"]["verdict"], "vacuous");
    assert!(v["points"][0]["distances"]["t_ij"].is_array());
    assert_eq!(code(&["--strict", "logcurve", cubic, "--points", "0,1;1,1;1,2;4,9"]), 3);
    assert_eq!(code(&["logcurve", cubic, "--points", "1,1", "--root", "9"]), 0);
    assert_eq!(code(&["logcurve", cubic, "--points", "1"]), 2);
}

#[test]
fn zero_leading_coefficient_is_shifted_unless_strict() {
    let v = json(&["info", "0,1,1,1"]);
    assert_eq!(v["shift"]["c"], "1");
    assert_eq!(v["form"], "3*x^3 + 6*x^2*y + 4*x*y^2 + y^3");
    assert_eq!(code(&["--strict", "info", "0,1,1,1"]), 2);
}

#[test]
fn verify_reports_failures_through_the_exit_code() {
    let dir = std::env::temp_dir().join(format!("thue-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"[{"form": "x^3 - 2*y^3", "m": 1, "mode": "equation", "y_max": 100, "expected_count": 2, "notes": "naive double loop"}]"#,
    )
    .unwrap();
    assert_eq!(code(&["verify", good.to_str().unwrap()]), 0);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"[{"form": "x^3 - 2*y^3", "m": 1, "mode": "equation", "y_max": 100, "expected_count": 3, "notes": "wrong on purpose"}]"#).unwrap();
    assert_eq!(code(&["verify", bad.to_str().unwrap()]), 1);
    std::fs::write(&bad, "[{").unwrap();
    assert_eq!(code(&["verify", bad.to_str().unwrap()]), 2);
    std::fs::remove_dir_all(&dir).unwrap();

    // The shipped corpus carries forms where the equation-mode norm floor is violated.
    let v: Value = serde_json::from_slice(&thue(&["--json", "verify"]).stdout).unwrap();
    let failing: Vec<(&str, &str)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|e| {
            e["checks"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|c| c["status"] == "fail")
                .map(move |c| (e["form"].as_str().unwrap(), c["name"].as_str().unwrap()))
        })
        .collect();
    assert_eq!(failing.len(), 3, "{failing:?}");
    assert!(failing.iter().all(|(_, name)| *name == "norm_floor_equation"));
    assert_eq!(code(&["verify"]), 1);
}
