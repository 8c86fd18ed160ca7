use std::process::Command;

use ekm::cli::suites::CUBE_SCALAR_SKIP;
use ekm::cli::{execute, run_suite, Status, SuiteConfig, SuiteName};

fn run(args: &[&str]) -> ekm::cli::Output {
    let mut full = vec!["ekm"];
    full.extend_from_slice(args);
    execute(full).unwrap()
}

#[test]
fn siegel_suite_passes_and_is_stable_across_workers() {
    let one = run(&["verify", "--suite", "siegel", "--jobs", "1"]);
    let three = run(&["verify", "--suite", "siegel", "--jobs", "3"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.text, three.text);
    let v: serde_json::Value = serde_json::from_str(&one.text).unwrap();
    assert_eq!(v["suite"], "siegel");
    assert_eq!(v["summary"]["failed"], 0);
    assert!(v["checks"].as_array().unwrap().iter().any(|c| c["id"] == "siegel.hp.formal"));
}

#[test]
fn cube_scalar_checks_are_skipped_for_even_modulus() {
    let cfg = SuiteConfig {
        moduli: vec![4],
        counts: false,
        ..SuiteConfig::default()
    };
    let r = run_suite(SuiteName::Charsums, &cfg);
    let c = r.find("charsums.cube_scalar.4").unwrap();
    assert_eq!(c.status, Status::Skipped);
    assert_eq!(c.detail, CUBE_SCALAR_SKIP);
    assert_eq!(r.exit_code(), 0);

    let out = run(&["verify", "--suite", "charsums", "--N", "4", "--format", "tsv"]);
    assert!(out.text.contains("charsums.cube_scalar.4\tskipped"));
}

#[test]
fn charsums_table() {
    let out = run(&["charsums", "--N", "13"]);
    assert_eq!(out.code, 0);
    let rows: Vec<&str> = out.text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0].split('\t').count(), 8);
    assert_eq!(rows.len(), 13);
    for row in &rows[1..] {
        let cols: Vec<&str> = row.split('\t').collect();
        assert_ne!(cols[5], "false");
        assert_ne!(cols[7], "false");
    }
    let json = run(&["charsums", "--N", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json.text).unwrap();
    assert_eq!(v["characters"].as_array().unwrap().len(), 4);
    assert_eq!(v["cube_scalar"], "checked");
}

#[test]
fn km_table_cache_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("coeffs.tsv");
    let cfg_path = dir.path().join("run.conf");
    std::fs::write(&cfg_path, "weight = 20\nchi_mod = 5\nchi_index = 1\nmax_n = 10\n").unwrap();
    let out = run(&[
        "km",
        "--config",
        cfg_path.to_str().unwrap(),
        "--max-n",
        "30",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    assert_eq!(out.out.as_deref(), Some(out_path.as_path()));
    let lines: Vec<&str> = out.text.lines().collect();
    assert_eq!(lines[0], "n\texact\tnumeric_re\tnumeric_im");
    assert_eq!(lines.len(), 31);
    assert!(lines[1].starts_with("1\t1\t1\t0"));
    assert!(dir.path().join(ekm::cli::cache::CACHE_FILE).exists());

    let conv = run(&["km", "--config", cfg_path.to_str().unwrap(), "--route", "convolution"]);
    let local = run(&["km", "--config", cfg_path.to_str().unwrap()]);
    assert_eq!(conv.text, local.text);
    assert_eq!(conv.text.lines().count(), 11);

    let c = run(&["km", "--constant-check"]);
    assert!(c.text.contains("691/380414361600"));
    assert_eq!(c.code, 0);
}

#[test]
fn gamma_report() {
    let out = run(&["gamma", "--N", "3"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        assert_eq!(r["mu"], "1");
        assert_eq!(r["integral"], true);
        assert_eq!(r["inverse_integral"], true);
        assert_eq!(r["quartic_residual"], "0");
        assert_eq!(r["symplectic_residual"], "0");
    }
}

#[test]
fn conventions_dump() {
    let out = run(&["conventions"]);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["hash"].as_str().unwrap().len(), 64);
    assert_eq!(v["conventions"]["table"].as_array().unwrap().len(), 8);
    assert_eq!(v["conventions"]["order_basis"].as_array().unwrap().len(), 8);
}

#[test]
fn invalid_input_is_rejected() {
    assert!(execute(["ekm", "verify", "--suite", "nonsense"]).is_err());
    assert!(execute(["ekm", "siegel", "--p", "4"]).is_err());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert!(execute(["ekm", "conventions", "--config", cfg.to_str().unwrap()]).is_err());
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_ekm");
    let ok = Command::new(bin).args(["verify", "--suite", "algebra"]).output().unwrap();
    assert!(ok.status.success());
    let v: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    let bad = Command::new(bin).args(["km", "--max-n", "100000"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("--force"));
}
