use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto")).args(args).output().expect("binary runs")
}

fn otto_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .env("OTTO_THREADS", threads)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix("# ")?.strip_prefix(key)?.strip_prefix(" = "))
}

fn table(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn sweep_writes_header_and_columns() {
    let out = stdout(&otto(&["sweep", "--theta", "pi/5", "--grid", "0.2,0.5"]));
    assert_eq!(header_value(&out, "theta"), Some("pi/5"));
    assert_eq!(header_value(&out, "resolved.tau_iso"), Some("0.01999"));
    assert!(header_value(&out, "disorder_normalization").is_some());
    let t = table(&out);
    assert_eq!(t[0], "alpha_t_tot,w_ex,p_over_alpha2,eta,w_fric");
    assert_eq!(t.len(), 3);
    assert!(t[1].starts_with("0.2,"));
}

#[test]
fn pi_fraction_matches_decimal_angle() {
    let a = stdout(&otto(&["sweep", "--theta", "pi/5", "--grid", "0.3"]));
    let b = stdout(&otto(&["sweep", "--theta", "0.6283185307179586", "--grid", "0.3"]));
    assert_eq!(table(&a), table(&b));
}

#[test]
fn empty_grid_gives_header_only() {
    let out = stdout(&otto(&["sweep", "--theta", "0.3", "--grid", "none"]));
    assert_eq!(table(&out), vec!["alpha_t_tot,w_ex,p_over_alpha2,eta,w_fric"]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# aligned drive\ntheta = 0\nbeta_h = 0.3\ngrid = 0.5\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = stdout(&otto(&["sweep", "--config", cfg]));
    assert_eq!(header_value(&from_file, "theta"), Some("0"));
    assert_eq!(header_value(&from_file, "resolved.beta_h"), Some("0.3"));
    let overridden = stdout(&otto(&["sweep", "--config", cfg, "--theta", "pi/4"]));
    assert_eq!(header_value(&overridden, "theta"), Some("pi/4"));
    assert_eq!(header_value(&overridden, "resolved.beta_h"), Some("0.3"));
    assert_ne!(table(&from_file), table(&overridden));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.csv");
    let o = otto(&["cycle", "--out", path.to_str().unwrap()]);
    assert!(stdout(&o).is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert_eq!(table(&text)[0], "leg,omega,n");
    assert!(header_value(&text, "result: w_ex").is_some());
}

#[test]
fn json_output_is_keyed() {
    let out = stdout(&otto(&["friction-loop", "--alpha-grid", "0.5,2", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
    assert_eq!(v["rows"][0]["alpha"], 0.5);
    let d = v["rows"][0]["relative_entropy"].as_f64().unwrap();
    let w = v["rows"][0]["w_fric"].as_f64().unwrap();
    // single bath at beta = 1
    assert!(d > 0.0 && (d - w).abs() < 1e-8);
    assert!(v["config"]["tau_iso_used"].is_string());
}

#[test]
fn idle_cycle_efficiency_is_null_in_json() {
    let out = stdout(&otto(&["cycle", "--theta", "0", "--alpha-t", "1", "--format", "json"]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["result"]["eta"].is_null());
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["disorder-sweep", "--disorder", "gaussian:0.1", "--nodes", "16", "--grid", "0.1:1:6"];
    let one = otto_with_threads("1", &args);
    let three = otto_with_threads("3", &args);
    assert_eq!(stdout(&one), stdout(&three));
}

#[test]
fn max_power_rows() {
    let out = stdout(&otto(&[
        "max-power", "--scan", "theta", "--values", "pi/5", "--grid", "geom:0.001:0.4:40",
    ]));
    let t = table(&out);
    assert_eq!(t[0], "param,alpha_t_max,p_max_over_alpha2,eta_at_pmax");
    let cells: Vec<f64> = t[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert!((cells[0] - std::f64::consts::PI / 5.0).abs() < 1e-8);
    assert!(cells[1] > 0.001 && cells[1] < 0.4);
    assert!(cells[2] > 0.0 && cells[3] > 0.0);
}

#[test]
fn balanced_cycle_compiles() {
    // beta_h omega_2 = beta_c omega_1: both baths leave the Bloch length unchanged
    let out = stdout(&otto(&["optics-compile", "--theta", "0", "--alpha-t", "1", "--beta-h", "0.5"]));
    assert!(header_value(&out, "resolved.theta").is_some());
    assert!(table(&out).iter().any(|l| !l.trim().is_empty()));
    let json = stdout(&otto(&[
        "optics-compile", "--theta", "0", "--alpha-t", "1", "--beta-h", "0.5", "--format", "json",
    ]));
    let v: Value = serde_json::from_str(&json).unwrap();
    assert!(!v["rows"].as_array().unwrap().is_empty());
}

#[test]
fn configuration_errors_exit_2() {
    for args in [
        vec!["sweep", "--grid", "0.5"],
        vec!["sweep", "--theta", "0.3", "--disorder", "flat"],
        vec!["cycle", "--set", "colour=red"],
        vec!["cycle", "--beta-h", "2"],
        vec!["cycle", "--theta", "pie"],
        vec!["max-power", "--scan", "theta"],
    ] {
        let o = otto(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(otto_with_threads("zero", &["cycle"]).status.code(), Some(2));
}

#[test]
fn infeasible_compile_exits_3() {
    let o = otto(&["optics-compile"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4-1"));
}

#[test]
fn engine_cycle_cannot_compile() {
    let o = otto(&["optics-compile", "--theta", "0", "--alpha-t", "1", "--beta-h", "0.3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn boundary_maximum_exits_4() {
    let o = otto(&["max-power", "--scan", "theta", "--values", "0.3", "--grid", "0.5:1.5:5"]);
    assert_eq!(o.status.code(), Some(4));
}
