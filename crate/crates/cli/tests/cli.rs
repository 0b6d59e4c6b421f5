use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linform")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn report(args: &[&str]) -> Value {
    serde_json::from_slice(&run(args).stdout).expect("json report")
}

#[test]
fn exit_code_matrix() {
    let cases = [
        ("pass.toml", 0),
        ("injected_failure.toml", 1),
        ("zero_form.toml", 0),
        ("malformed.toml", 2),
        ("starved.toml", 3),
    ];
    for (file, want) in cases {
        assert_eq!(code(&["verify-gm", &fixture(file)]), want, "{file}");
    }
    assert_eq!(code(&["verify-gm", &fixture("missing.toml")]), 2);
    assert_eq!(code(&["no-such-command"]), 2);
    // the override reaches v(l(u)) = 9, which 8 digits cannot see
    assert_eq!(code(&["--precision", "12", "verify-gm", &fixture("starved.toml")]), 0);
}

#[test]
fn certified_zero_is_reported_not_failed() {
    let r = report(&["verify-gm", &fixture("zero_form.toml")]);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["report"]["outcome"], "linear-form-zero");
}

#[test]
fn verify_report_for_the_sample_instance() {
    let r = report(&["verify-gm", &fixture("pass.toml")]);
    assert_eq!(r["command"], "verify-gm");
    assert_eq!(r["report"]["v_l_u"], "1/1");
    assert_eq!(r["report"]["big_h"], "50");
    assert_eq!(r["report"]["paths_agree"], true);
    assert_eq!(r["report"]["outcome"], "pass");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let pass = fixture("pass.toml");
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify-gm", &pass],
        vec!["pipeline", &pass],
        vec!["--seed", "11", "heights", "--field", "Q(sqrt2)", "--random", "5"],
        vec!["--seed", "11", "product-formula", "--field", "Q(i)", "--random", "5"],
        vec!["--seed", "5", "siegel", "--m", "2", "--n", "5"],
        vec!["exp-series", "--model", "gm^2", "--order", "5"],
        vec!["bound", "--omega", "1", "--n", "2", "--b", "log(3)", "--h", "log(50)", "--p", "5"],
    ];
    for args in commands {
        let a = run(&args);
        let b = run(&args);
        assert!(!a.stdout.is_empty(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code(), "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = std::env::temp_dir().join(format!("linform-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let pass = fixture("pass.toml");
    let direct = run(&["verify-gm", &pass]).stdout;
    let o = run(&["--out", path.to_str().unwrap(), "verify-gm", &pass]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), direct);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn different_seeds_draw_different_inputs() {
    let a = report(&["--seed", "1", "heights", "--random", "3"]);
    let b = report(&["--seed", "2", "heights", "--random", "3"]);
    assert_ne!(a["report"]["entries"], b["report"]["entries"]);
}

#[test]
fn bound_wrapper_value() {
    // omega = 1, n = 1, b = h = log 3: exponent b h (2 log log 3)^4, about 0.0015108
    let r = report(&["bound", "--omega", "1", "--n", "1", "--b", "1.0986", "--h", "1.0986", "--p", "2", "--c0", "1"]);
    assert_eq!(r["status"], "pass");
    let lo: f64 = r["report"]["valuation_exponent"]["lower"].as_str().unwrap().parse().unwrap();
    let hi: f64 = r["report"]["valuation_exponent"]["upper"].as_str().unwrap().parse().unwrap();
    assert!(lo <= 0.0015108 && 0.0015108 <= hi && hi - lo < 1e-5, "{lo} {hi}");
    let exact = report(&["bound", "--omega", "1", "--n", "1", "--b", "log(3)", "--h", "log(3)", "--p", "2"]);
    let x: f64 = exact["report"]["valuation_exponent"]["lower"].as_str().unwrap().parse().unwrap();
    assert!((x - 0.00151083).abs() < 1e-7, "{x}");
    assert_eq!(code(&["bound", "--omega", "1", "--n", "1", "--b", "1.09", "--h", "2", "--p", "2"]), 2);
}

#[test]
fn schwarz_wrapper_value() {
    // min{0 + 6 (1 - 0), 5 + 5 (1 - 0) - 1/2} = 6
    let r = report(&["schwarz", "--s", "1", "--t", "0", "--k", "2", "--l", "3", "--delta", "0", "--mu", "5", "--normt", "0", "--p", "3"]);
    assert_eq!(r["report"]["exponent"], "6/1");
    let r = report(&["schwarz", "--s", "1", "--t", "0", "--k", "2", "--l", "3", "--delta", "0", "--mu", "1/2", "--normt", "inf", "--p", "3"]);
    // 1/2 + 5 - 1/2 = 5
    assert_eq!(r["report"]["exponent"], "5/1");
}

#[test]
fn decimals_rejected_where_exactness_matters() {
    let base = ["schwarz", "--t", "0", "--k", "2", "--l", "3", "--delta", "0", "--mu", "5", "--normt", "0", "--p", "3"];
    let mut args = base.to_vec();
    args.extend(["--s", "0.5"]);
    assert_eq!(code(&args), 2);
    let mut args = base.to_vec();
    args.extend(["--s", "1/2"]);
    assert_eq!(code(&args), 0);
    assert_eq!(code(&["heights", "--x", "0.5"]), 2);
    assert_eq!(code(&["bound", "--omega", "1", "--n", "1", "--b", "2", "--h", "2", "--p", "2", "--c0", "0.5"]), 2);
}

#[test]
fn module_commands_pass_on_valid_input() {
    let system = fixture("siegel_system.toml");
    let cases: Vec<Vec<&str>> = vec![
        vec!["heights", "--field", "Q(sqrt2)", "--x", "1,1", "--x", "3/2"],
        vec!["product-formula", "--x=-3/7", "--x", "12"],
        vec!["siegel", &system],
        vec!["exp-series", "--order", "8"],
        vec!["semistable", "--field", "Q(sqrt2)", "--beta", "1", "--beta", "0,1"],
        vec!["params", "--omega", "1", "--n", "1", "--b", "3", "--h", "3", "--c", "1"],
    ];
    for args in cases {
        assert_eq!(code(&args), 0, "{args:?}");
    }
}

#[test]
fn siegel_witness_is_checked() {
    let r = report(&["siegel", &fixture("siegel_system.toml")]);
    assert_eq!(r["report"]["residual_zero"], true);
    assert_eq!(r["report"]["nonzero"], true);
    assert_eq!(r["report"]["within_bound"], true);
}

#[test]
fn semistability_witness() {
    let r = report(&["semistable", "--beta", "2", "--beta=-4"]);
    assert_eq!(r["report"]["verdict"]["semistable"], false);
    assert_eq!(r["report"]["verdict"]["witness"], serde_json::json!(["2", "1"]));
}

#[test]
fn infeasible_parameters_are_an_audit_failure() {
    let r = run(&["params", "--omega", "1", "--n", "1", "--b", "log(3)", "--h", "log(5)"]);
    assert_eq!(r.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&r.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "infeasible-parameters");
}

#[test]
fn params_hand_computed() {
    // c = 1, omega = 1, b = h = 3: S0 = [log 3 + log 3] = 2, D0 = [2^2 * 3] = 12,
    // S = 2, D = [2 * 3] = 6, T = [2^2 * 3 * 3] = 36
    let r = report(&["params", "--omega", "1", "--n", "1", "--b", "3", "--h", "3", "--c", "1"]);
    let p = &r["report"]["parameters"];
    assert_eq!((p["s0"].as_str(), p["d0"].as_str(), p["s"].as_str()), (Some("2"), Some("12"), Some("2")));
    assert_eq!((p["d"].as_str(), p["t"].as_str()), (Some("6"), Some("36")));
}
