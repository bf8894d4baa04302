//! End-to-end checks of the escalc binary: exit codes, error objects, the
//! byte-stable casebook golden, and seed handling.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_escalc")
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env_remove("ESCALC_SEED")
        .output()
        .expect("binary runs")
}

fn run_with_seed_env(args: &[&str], seed: &str) -> Output {
    Command::new(bin())
        .args(args)
        .env("ESCALC_SEED", seed)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON: {e}\n{}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn aes_on_cobb_douglas_is_all_ones_off_diagonal() {
    let spec = data("cobb_douglas_3.json");
    let out = run(&["aes", "--spec", spec.to_str().unwrap(), "--point", "1,1,1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert_eq!(v["measure"], "AES");
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let entry = v["matrix"][i][j].as_f64().unwrap();
                assert!((entry - 1.0).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn nested_min_aes_fails_with_stable_code() {
    let spec = data("nested_min.json");
    let out = run(&["aes", "--spec", spec.to_str().unwrap(), "--point", "1,1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], "NotDifferentiable");
}

#[test]
fn missing_spec_file_is_a_config_error() {
    let out = run(&["aes", "--spec", "/no/such/file.json", "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["code"], "ConfigError");
}

#[test]
fn invalid_spec_json_is_a_config_error() {
    let dir = std::env::temp_dir().join("escalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_spec.json");
    std::fs::write(&path, r#"{"family":"cobb_douglas","params":{"scale":1.0}}"#).unwrap();
    let out = run(&["eval", "--spec", path.to_str().unwrap(), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "ConfigError");
}

#[test]
fn unknown_casebook_id_is_a_config_error() {
    let out = run(&["casebook", "unknown2024"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "ConfigError");
}

#[test]
fn eval_multiple_points_preserves_input_order() {
    let spec = data("cobb_douglas_2.json");
    let out = run(&[
        "eval",
        "--spec",
        spec.to_str().unwrap(),
        "--point",
        "1,1",
        "--point",
        "4,0.25",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let arr = v.as_array().expect("array for multiple points");
    assert_eq!(arr[0]["point"], serde_json::json!([1.0, 1.0]));
    assert!((arr[0]["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(arr[1]["point"], serde_json::json!([4.0, 0.25]));
}

#[test]
fn verify_uzawa_passes_on_smooth_families() {
    for name in ["shifted_cd.json", "cobb_douglas_2.json", "ces_k1.json", "quadratic.json"] {
        let spec = data(name);
        let out = run(&["verify-uzawa", "--spec", spec.to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        let v = stdout_json(&out);
        assert_eq!(v["pass"], true, "{name}");
        assert!(v["max_rel_deviation"].as_f64().unwrap() < 1e-6);
        assert_eq!(v["points"], 20);
        assert_eq!(v["seed"], 42);
    }
}

#[test]
fn casebook_matches_golden_and_is_byte_stable() {
    let first = run(&["casebook", "blackorby1989"]);
    assert!(first.status.success());
    let second = run(&["casebook", "blackorby1989"]);
    assert_eq!(first.stdout, second.stdout, "casebook output not byte-stable");

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden/casebook_blackorby1989.json");
    if std::env::var("ESCALC_UPDATE_GOLDEN").is_ok() {
        std::fs::write(&golden_path, &first.stdout).unwrap();
        return;
    }
    let golden = std::fs::read(&golden_path).expect("golden file present");
    assert_eq!(
        String::from_utf8_lossy(&first.stdout),
        String::from_utf8_lossy(&golden),
        "casebook deviates from the golden file; run with ESCALC_UPDATE_GOLDEN=1 to refresh"
    );
}

#[test]
fn casebook_content_pins_the_counterexample() {
    let out = run(&["casebook", "blackorby1989"]);
    let v = stdout_json(&out);
    assert_eq!(v["morishima_pair"]["mes_12"].as_f64().unwrap(), 0.0);
    assert_eq!(v["morishima_pair"]["mes_21"].as_f64().unwrap(), 0.5);
    assert_eq!(v["uzawa_vs_primal"]["primal_error_code"], "NotDifferentiable");
    assert_eq!(v["uzawa_vs_primal"]["branch_aes_error_code"], "SingularBorderedHessian");
    for check in v["kink_checks"].as_array().unwrap() {
        assert!(check["kink_flags"].as_array().unwrap().iter().any(|k| k == true));
    }
    for check in v["branch_singularity"].as_array().unwrap() {
        assert_eq!(check["singular"], true);
    }
    for check in v["two_constraint_determinants"].as_array().unwrap() {
        let det = check["determinant"].as_f64().unwrap();
        let want = check["expected"].as_f64().unwrap();
        assert!((det - want).abs() < 1e-10);
    }
}

#[test]
fn seed_flag_and_env_override_default() {
    let default_run = run(&["casebook", "blackorby1989"]);
    let seeded_flag = run(&["casebook", "blackorby1989", "--seed", "7"]);
    let seeded_env = run_with_seed_env(&["casebook", "blackorby1989"], "7");
    assert_ne!(default_run.stdout, seeded_flag.stdout, "--seed 7 must change sampling");
    assert_eq!(seeded_flag.stdout, seeded_env.stdout, "flag and env must agree");

    // the flag wins over the environment
    let flag_beats_env = Command::new(bin())
        .args(["casebook", "blackorby1989", "--seed", "7"])
        .env("ESCALC_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(flag_beats_env.stdout, seeded_flag.stdout);

    let bad_env = run_with_seed_env(&["casebook", "blackorby1989"], "not-a-number");
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn mes_csv_layout_is_one_row_per_pair() {
    let spec = data("cobb_douglas_3.json");
    let out = run(&[
        "mes",
        "--spec",
        spec.to_str().unwrap(),
        "--prices",
        "1,1,1",
        "--output",
        "0.9",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("measure,i,j,value"));
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    // MES, MES_alt, EPS: three 3x3 matrices
    assert_eq!(rows.len(), 27);
    assert!(rows.iter().all(|r| r.split(',').count() == 4));
    assert!(rows.iter().any(|r| r.starts_with("MES,1,2,")));
    assert!(rows.iter().any(|r| r.starts_with("EPS,3,3,")));
}

#[test]
fn csv_is_rejected_for_solver_reports() {
    let spec = data("quadratic.json");
    let out = run(&[
        "cost",
        "--spec",
        spec.to_str().unwrap(),
        "--prices",
        "1,1",
        "--output",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "ConfigError");
}

#[test]
fn uzawa_command_matches_primal_route() {
    let spec = data("quadratic.json");
    let out = run(&[
        "uzawa",
        "--spec",
        spec.to_str().unwrap(),
        "--prices",
        "1,1",
        "--output",
        "3",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["matrix"][0][1].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn profit_command_reports_gross_measures() {
    let spec = data("quadratic.json");
    let out = run(&[
        "profit",
        "--spec",
        spec.to_str().unwrap(),
        "--prices",
        "0.5,0.5",
        "--output-price",
        "1",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!((v["profit"].as_f64().unwrap() - 2.25).abs() < 1e-10);
    assert!((v["mges"]["matrix"][0][1].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-10);
    assert_eq!(v["hles"]["matrix"][0][1].as_f64().unwrap(), 0.0);
}

#[test]
fn problem_envelopes_drive_cost_and_profit() {
    let cost = data("cost_problem.json");
    let out = run(&["cost", "--problem", cost.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = stdout_json(&out);
    assert!((v["cost"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["lambda_star"].as_f64().unwrap() + 1.0).abs() < 1e-9);

    let profit = data("profit_problem.json");
    let out = run(&["profit", "--problem", profit.to_str().unwrap()]);
    assert!(out.status.success());
    assert!((stdout_json(&out)["profit"].as_f64().unwrap() - 2.25).abs() < 1e-10);

    // envelope and flags are mutually exclusive (clap config error)
    let spec = data("quadratic.json");
    let out = run(&[
        "cost",
        "--problem",
        cost.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // strict envelope parsing
    let dir = std::env::temp_dir().join("escalc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad_problem.json");
    std::fs::write(
        &path,
        r#"{"spec":{"family":"nested_min","params":{}},"prices":[1,1,1],"output":2.0,"typo":1}"#,
    )
    .unwrap();
    let out = run(&["cost", "--problem", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["error"]["code"], "ConfigError");
}

#[test]
fn crs_profit_is_refused() {
    let spec = data("ces_k1.json");
    let out = run(&[
        "profit",
        "--spec",
        spec.to_str().unwrap(),
        "--prices",
        "1,1",
        "--output-price",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["error"]["code"], "Unbounded");
}
