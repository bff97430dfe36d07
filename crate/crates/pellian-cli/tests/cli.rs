//! Behavioral tests of the command-line surface: exit codes, report
//! round-trips, determinism, configuration plumbing.

use std::process::{Command, Output};

fn pellian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pellian"))
        .args(args)
        .env_remove("PELLIAN_PRECISION_CEILING")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn exit_codes() {
    assert_eq!(pellian(&["unit", "2"]).status.code(), Some(0));
    // invalid radicand
    let bad = pellian(&["unit", "4"]);
    assert_eq!(bad.status.code(), Some(2));
    let err = String::from_utf8(bad.stderr).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(err.trim()).expect("machine-readable");
    assert_eq!(parsed["kind"], "invalid_input");
    // ab square
    assert_eq!(pellian(&["system", "2", "8", "1", "1"]).status.code(), Some(2));
    // zero N
    assert_eq!(pellian(&["pell", "2", "0"]).status.code(), Some(2));
    // clap usage error
    assert_eq!(pellian(&["frobnicate"]).status.code(), Some(2));
    // a failing verification is still a successful run
    let v = pellian(&["verify", "2", "3", "--c", "1", "--mu", "1.913", "--qmax", "10"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("\"pass\": false"));
}

#[test]
fn unit_report_round_trips() {
    let out = pellian(&["unit", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["command"], "unit");
    assert_eq!(v["outputs"]["totally_positive"]["element"]["x"], "3");
    assert_eq!(v["outputs"]["totally_positive"]["element"]["y"], "2");
    assert_eq!(v["outputs"]["totally_positive"]["norm"], 1);
    // intervals re-parse losslessly into the originating structure
    let reg: pellian::IntervalReal =
        serde_json::from_value(v["outputs"]["regulator_check"]["regulator"].clone()).unwrap();
    assert!(reg.is_strictly_positive());
    let elem: pellian::QuadElement =
        serde_json::from_value(v["outputs"]["totally_positive"]["element"].clone()).unwrap();
    assert_eq!(elem.to_string(), "3+2√2");
    // the check regulator matches the spec bracket [0.8813, 0.8815]
    let lo = v["outputs"]["regulator_check"]["regulator"]["lo"].as_str().unwrap();
    assert!(lo.starts_with("0.8813") || lo.starts_with("0.8814"));
}

#[test]
fn system_baker_davenport() {
    let out = pellian(&["system", "3", "8", "-2", "-7", "--cap", "1000000"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let sols = v["outputs"]["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 2);
    assert_eq!(sols[0]["x"], "1");
    assert_eq!(sols[1]["x"], "19");
    assert_eq!(sols[1]["y"], "11");
    assert_eq!(sols[1]["z"], "31");
    assert_eq!(v["outputs"]["certified_complete"], false);
    // log10 of the bound is present and huge
    let log10 = v["outputs"]["bounds"][0]["log10_x_bound"]["hi"].as_str().unwrap();
    assert!(log10.contains("e2") || log10.len() > 20);
    assert_eq!(v["timing_ms"], serde_json::Value::Null);
}

#[test]
fn determinism_byte_identical() {
    for args in [
        vec!["unit", "3", "--seed", "7"],
        vec!["system", "3", "8", "-2", "-7", "--cap", "2000"],
        vec!["exponent", "2", "3"],
        vec!["verify", "2", "3", "--c", "1e-7", "--mu", "1.913", "--qmax", "500"],
        vec!["records", "2", "3", "--qmax", "300"],
        vec!["sweep", "--a", "2..6", "--b", "2..6"],
        vec!["pell", "2", "7", "--cap", "50", "--format", "csv"],
    ] {
        let first = pellian(&args);
        let second = pellian(&args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        assert_eq!(stdout(&first), stdout(&second), "{args:?}");
    }
}

#[test]
fn formats() {
    let csv = stdout(&pellian(&["unit", "3", "--format", "csv"]));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("D,x,y,norm"));
    assert!(lines.next().unwrap().starts_with("3,2,1,1,true"));
    assert_eq!(lines.next(), None);

    let text = stdout(&pellian(&["unit", "3", "--format", "text"]));
    assert!(text.contains("totally positive unit"));
    assert!(text.contains("2+√3"));

    // records defaults to CSV with the documented columns
    let recs = stdout(&pellian(&["records", "2", "3", "--qmax", "50"]));
    assert!(recs.starts_with("q,dist_a,dist_b,max_dist,local_exponent\n"));
}

#[test]
fn sweep_skips_inadmissible_with_reason() {
    let csv = stdout(&pellian(&["sweep", "--a", "2..4", "--b", "2..4"]));
    let lines: Vec<&str> = csv.lines().collect();
    // rectangle of 9 pairs plus header
    assert_eq!(lines.len(), 10);
    // (2,2): ab = 4 square
    assert!(lines[1].starts_with("2,2,false,ab=4 square"));
    // (2,3) admissible
    assert!(lines[2].starts_with("2,3,true,"));
    // (2,4): b square
    assert!(lines[3].starts_with("2,4,false,b=4 square"));
    // (4,*) all inadmissible
    assert!(lines[7].starts_with("4,2,false,a=4 square"));
}

#[test]
fn config_file_and_env() {
    let dir = std::env::temp_dir().join(format!("pellian-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("pellian.conf");
    std::fs::write(&cfg_path, "precision_start = 96\nformat = text\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_pellian"))
        .args(["unit", "2", "--config", cfg_path.to_str().unwrap()])
        .env_remove("PELLIAN_PRECISION_CEILING")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("totally positive unit"));

    // environment ceiling must show up in the config echo
    let out = Command::new(env!("CARGO_BIN_EXE_pellian"))
        .args(["unit", "2"])
        .env("PELLIAN_PRECISION_CEILING", "2048")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(v["config"]["precision_ceiling"], 2048);

    // flag overrides env
    let out = Command::new(env!("CARGO_BIN_EXE_pellian"))
        .args(["unit", "2", "--precision-ceiling", "4096"])
        .env("PELLIAN_PRECISION_CEILING", "2048")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(v["config"]["precision_ceiling"], 4096);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn timing_flag_is_explicit() {
    let out = stdout(&pellian(&["unit", "2", "--timing"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["timing_ms"].is_u64());
}
