use std::path::Path;
use std::process::{Command, Output};

use bicm_core::LlrQuantizer;

const SISO: &str = r#"
snr_grid_db = [0.0, 4.0]
q_bits = [1, 2]
seed = 11
[link]
mt = 1
mr = 1
constellation = "bpsk"
[trials]
calibration_uses = 10000
evaluation_uses = 10000
reference_bins = 64
batches = 4
channels = 200
offline_llrs = 2000
"#;

fn bicm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bicm")).args(args).output().unwrap()
}

fn config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn ergodic_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "e.toml", SISO);
    let out = dir.path().join("e.csv");
    let o = bicm(&["ergodic", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,q_bits,rate_bpcu,stderr");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[3].starts_with("0.0,none,"));
    for l in &lines[1..] {
        let rate: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&rate));
    }
}

#[test]
fn output_does_not_depend_on_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "e.toml", SISO);
    let a = bicm(&["ergodic", &cfg, "--threads", "1"]);
    let b = bicm(&["ergodic", &cfg, "--threads", "3"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = bicm(&["ergodic", &cfg, "--threads", "1", "--seed", "12"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn outage_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "o.toml", &format!("target_rates = [0.5]\n{SISO}"));
    let o = bicm(&["outage", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("snr_db,q_bits,target_rate,p_out,ci_lo,ci_hi\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
}

#[test]
fn design_quantizer_records_parse() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path(), "q.toml", SISO);
    let o = bicm(&["design-quantizer", &cfg]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let q: Vec<LlrQuantizer> = text.lines().map(|l| LlrQuantizer::from_record(l).unwrap()).collect();
    assert_eq!(q.iter().map(|q| q.bins()).collect::<Vec<_>>(), vec![2, 4, 2, 4]);
    assert!(q[2].levels()[1] > q[0].levels()[1]);
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!bicm(&["ergodic", "/nonexistent/cfg.toml"]).status.success());
    let bad = config(dir.path(), "bad.toml", "snr_grid_db = [1.0]\n");
    assert!(!bicm(&["ergodic", &bad]).status.success());
    let wrong = config(dir.path(), "w.toml", &format!("experiment = \"ber\"\n{SISO}"));
    let o = bicm(&["ergodic", &wrong]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("ber"));
    // outage without target rates
    let cfg = config(dir.path(), "e.toml", SISO);
    assert!(!bicm(&["outage", &cfg]).status.success());
    assert!(!bicm(&["ergodic", &cfg, "--threads", "0"]).status.success());
    assert!(!bicm(&["frobnicate", &cfg]).status.success());
}
