use std::process::{Command, Output};

use serde_json::Value;

fn wbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wbell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = wbell(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(wbell(&["exact"]).status.code(), Some(0));
    assert_eq!(wbell(&["--help"]).status.code(), Some(0));
    assert_eq!(wbell(&["--version"]).status.code(), Some(0));
    assert_eq!(wbell(&["exact", "--noise", "-0.1"]).status.code(), Some(1));
    assert_eq!(wbell(&["exact", "--state", "bell"]).status.code(), Some(1));
    assert_eq!(wbell(&["lhv", "--output", "csv"]).status.code(), Some(1));
    assert_eq!(
        wbell(&["tsirelson", "--samples", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(wbell(&["optimize", "--grid", "1"]).status.code(), Some(1));
    assert_eq!(
        wbell(&["threshold", "--target", "0.3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        wbell(&["optimize", "--grid", "4", "--chsh-grid", "2", "--tol", "0"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn errors_go_to_stderr() {
    let out = wbell(&["threshold", "--target", "-2"]);
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["simulate", "--shots", "5000", "--seed", "9"][..],
        &["optimize", "--grid", "20", "--seed", "4"],
        &["selection", "--output", "text"],
    ] {
        assert_eq!(wbell(args).stdout, wbell(args).stdout, "{args:?}");
    }
}

#[test]
fn zero_noise_flag_is_a_no_op() {
    assert_eq!(
        wbell(&["exact", "--noise", "0"]).stdout,
        wbell(&["exact"]).stdout
    );
}

#[test]
fn exact_values() {
    let v = json(&["exact", "--state", "w"]);
    let r = &v["results"];
    assert_eq!(r["chsh_value"]["at_xk_plus"].as_f64(), Some(3.0));
    assert_eq!(r["chsh_value"]["at_xk_minus"].as_f64(), Some(3.0));
    assert_eq!(r["ch_value"]["value"].as_f64(), Some(0.25));
    assert!((r["ch_lower"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    let xxx = r["distributions"]["XXX"].as_array().unwrap();
    assert!((xxx[0]["probability"].as_f64().unwrap() - 0.375).abs() < 1e-12);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn noisy_exact_reports_lower_bound_only() {
    let v = json(&["exact", "--noise", "0.2"]);
    assert!(v["results"]["ch_value"].is_null());
    assert!((v["results"]["ch_lower"].as_f64().unwrap() - (0.25 - 0.15)).abs() < 1e-12);
}

#[test]
fn sweep_defaults_to_csv() {
    let out = wbell(&["sweep"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "p,ch_lower_exact,estimate,sigma");
    assert!(lines[11].starts_with("1.0000000000000000e0,"));

    let v = json(&[
        "sweep", "--output", "json", "--mode", "sampled", "--shots", "1000",
    ]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows
        .iter()
        .all(|r| r["estimate"].is_number() && r["sigma"].is_number()));
    assert_eq!(v["seed"].as_u64(), Some(1));
}

#[test]
fn lhv_and_selection() {
    let v = json(&["lhv", "--scenario", "w-selection"]);
    assert_eq!(v["results"]["max_abs"].as_i64(), Some(2));
    assert_eq!(v["results"]["cases"].as_u64(), Some(24));
    let v = json(&["selection"]);
    assert_eq!(v["results"]["w_minus_minus"]["membership_is_local"], true);
    assert_eq!(v["results"]["ghz_rule"]["membership_is_local"], false);
}

#[test]
fn threshold_matches_closed_form() {
    let v = json(&["threshold", "--target", "0"]);
    assert!((v["results"]["p"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
}
