use std::path::PathBuf;
use std::process::{Command, Output};

use ptone_cli::output::strip_metadata;

fn ptone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptone")).args(args).output().expect("binary runs")
}

fn ptone_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptone")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows as string fields, metadata and header skipped.
fn rows(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let body = strip_metadata(&stdout(o));
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let data = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, data)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    row[i].parse().unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ptone-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eig_ball_gives_pi_squared() {
    let o = ptone(&["eig", "--p", "2", "--m", "3", "--c", "0", "--r", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# ptone eig generated_at="));
    let (h, d) = rows(&o);
    assert_eq!(h, ["p", "m", "c", "r", "lambda", "residual", "iterations"]);
    assert_eq!(d.len(), 1);
    let l = field(&h, &d[0], "lambda");
    assert!((l - std::f64::consts::PI.powi(2)).abs() < 1e-7, "{l}");
}

#[test]
fn eig_rejects_small_p_with_exit_two() {
    let o = ptone(&["eig", "--p", "0.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ptone(&["eig", "--p", "2,,3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ptone(&["eig", "--c", "1", "--r", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eig_radius_list_scales_by_four() {
    let o = ptone(&["eig", "--p", "2", "--m", "2", "--c", "0", "--r", "1,2"]);
    let (h, d) = rows(&o);
    assert_eq!(d.len(), 2);
    let ratio = field(&h, &d[0], "lambda") / field(&h, &d[1], "lambda");
    assert!((ratio - 4.0).abs() < 1e-6, "{ratio}");
}

#[test]
fn rows_are_sorted_whatever_the_flag_order() {
    let o = ptone(&["eig", "--p", "3,2", "--c", "1,-1", "--r", "0.9,0.5"]);
    let (h, d) = rows(&o);
    assert_eq!(d.len(), 8);
    let keys: Vec<(f64, f64, f64)> =
        d.iter().map(|r| (field(&h, r, "p"), field(&h, r, "c"), field(&h, r, "r"))).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
}

#[test]
fn thread_count_does_not_change_the_body() {
    let args = ["eig", "--p", "1.5:3:0.5", "--m", "1,2", "--c", "-1,0"];
    let a = ptone_env(&args, "PTONE_THREADS", "1");
    let b = ptone_env(&args, "PTONE_THREADS", "3");
    assert!(a.status.success() && b.status.success());
    assert_eq!(strip_metadata(&stdout(&a)), strip_metadata(&stdout(&b)));
    let bad = ptone_env(&args, "PTONE_THREADS", "zero");
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn rstar_rows() {
    let o = ptone(&["rstar", "--p", "2", "--m", "2,3", "--c", "-1,0,1", "--r", "1"]);
    assert!(o.status.success());
    let (h, d) = rows(&o);
    assert_eq!(h, ["c", "p", "m", "r", "lambda", "r_star", "min_W_margin"]);
    assert_eq!(d.len(), 6);
    for r in &d {
        assert_eq!(field(&h, r, "r_star"), field(&h, r, "r"));
    }
    let o = ptone(&["rstar", "--p", "3", "--m", "2", "--c", "1", "--r", "1.4"]);
    let (h, d) = rows(&o);
    assert_eq!(field(&h, &d[0], "r_star"), 1.4);
    // p < 2 has no critical radius
    assert_eq!(ptone(&["rstar", "--p", "1.5"]).status.code(), Some(2));
}

#[test]
fn barta_certificates_sit_below_lambda() {
    let o = ptone(&["barta", "--p", "2,3", "--m", "3", "--c", "-1", "--h", "0.5"]);
    assert!(o.status.success());
    let (h, d) = rows(&o);
    for r in &d {
        let l = field(&h, r, "lambda");
        assert!((field(&h, r, "barta_eigen") - l).abs() < 1e-4 * l);
        assert!(field(&h, r, "barta_trial") < l);
        assert!(field(&h, r, "div_sup") <= l);
        assert!(field(&h, r, "mean_curvature_bound") <= l);
    }
    let p3 = &d[1];
    assert!((field(&h, p3, "mean_curvature_bound") - 0.019_905_102_514_829_02).abs() < 1e-12);
}

#[test]
fn compare_marks_certificates_and_tabulated_profiles() {
    let table = scratch("profile.csv");
    let mut text = String::from("t,f\n");
    for i in 0..=40 {
        let t = 1.2 * i as f64 / 40.0;
        text.push_str(&format!("{t},{}\n", t + t * t * t / 5.0));
    }
    std::fs::write(&table, text).unwrap();
    let o = ptone(&["compare", "--p", "2.5", "--m", "2", "--eps", "0.1", "--profile-csv", table.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, d) = rows(&o);
    let ai = h.iter().position(|x| x == "admissible").unwrap();
    let oki = h.iter().position(|x| x == "certificate_ok").unwrap();
    assert_eq!(d.len(), 4);
    for r in &d {
        assert_eq!(r[ai], "true");
        assert_eq!(r[oki], "true");
        assert!(field(&h, r, "rayleigh_estimate") >= field(&h, r, "certificate") * (1.0 - 1e-3));
    }
    // spherical model with its own perturbation
    let o = ptone(&["compare", "--p", "2", "--m", "2", "--c", "1", "--eps", "0.2", "--n", "512"]);
    assert!(o.status.success());
}

#[test]
fn surface_rows_mirror_the_band_examples() {
    let o = ptone(&["surface", "--p", "2", "--r", "1.2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, d) = rows(&o);
    assert_eq!(h, ["surface", "p", "r", "k", "lambda_model", "rhs", "lambda_band_upper", "modelcontrol_margin", "cor13", "cor15"]);
    assert_eq!(d.len(), 2);
    let plane = d.iter().find(|r| r[0] == "plane").unwrap();
    let cat = d.iter().find(|r| r[0] == "catenoid").unwrap();
    assert!(field(&h, plane, "modelcontrol_margin").abs() < 1e-4 * field(&h, plane, "lambda_model"));
    assert_eq!(cat[8], "");
    assert_eq!(cat[9], "false");
    assert_eq!(plane[8], "true");
}

#[test]
fn kazdan_sandwich() {
    let o = ptone(&["kazdan", "--p", "2,3", "--m", "2", "--c", "0"]);
    let (h, d) = rows(&o);
    for r in &d {
        assert!(field(&h, r, "max_rel_deviation") < 1e-2);
        assert_eq!(r.last().unwrap(), "true");
    }
}

#[test]
fn sweep_and_json_output() {
    let csv_path = scratch("sweep.csv");
    let json_path = scratch("sweep.json");
    let o = ptone(&[
        "sweep",
        "--p",
        "2,3",
        "--m",
        "2",
        "--n",
        "600",
        "--out",
        csv_path.to_str().unwrap(),
        "--json",
        json_path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let csv_text = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv_text.starts_with("# ptone sweep"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    let rows = json["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1]["r_star"].as_f64().is_some());
    assert!(rows[0]["rayleigh_rel_gap"].as_f64().unwrap().abs() < 1e-2);
}

#[test]
fn config_file_with_flag_override() {
    let path = scratch("config.json");
    std::fs::write(&path, r#"{"p": "2:3:1", "m": [1], "c": 0, "r": [1.0]}"#).unwrap();
    let o = ptone(&["eig", "--config", path.to_str().unwrap()]);
    assert_eq!(rows(&o).1.len(), 2);
    let o = ptone(&["eig", "--config", path.to_str().unwrap(), "--p", "4"]);
    let (h, d) = rows(&o);
    assert_eq!(d.len(), 1);
    assert_eq!(field(&h, &d[0], "p"), 4.0);
    std::fs::write(&path, r#"{"q": 1}"#).unwrap();
    assert_eq!(ptone(&["eig", "--config", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn selftest_filter_runs_only_barta_criteria() {
    let o = ptone(&["selftest", "--filter", "barta"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, d) = rows(&o);
    let ids: Vec<&str> = d.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ids, ["4", "8"]);
    assert_eq!(ptone(&["selftest", "--filter", "no-such-criterion"]).status.code(), Some(2));
}

#[test]
fn tampered_fixture_fails_with_named_criterion() {
    let path = scratch("tampered.json");
    std::fs::write(&path, r#"{"fixtures": {"pi_squared": 9.87}}"#).unwrap();
    let o = ptone(&["selftest", "--filter", "1", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("FAILED criterion 1 closed-form-eigenvalues"), "{err}");
}

#[test]
fn selftest_body_is_deterministic() {
    let a = ptone(&["selftest", "--filter", "picone"]);
    let b = ptone(&["selftest", "--filter", "picone", "--seed", "24301"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let c = ptone(&["selftest", "--filter", "picone"]);
    assert_eq!(strip_metadata(&stdout(&a)), strip_metadata(&stdout(&c)));
}
