use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn srle(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_srle"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("failed to run srle binary")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn raw_round_trip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let input: Vec<u8> = (0..2000).map(|i| if i % 7 < 5 { 3 } else { (i % 11) as u8 }).collect();
    std::fs::write(dir.path().join("in.u8"), &input).unwrap();

    let out = srle(&["compress", "in.u8", "out.srle", "--format", "u8"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["n"], 2000);
    assert!(report["compression_ratio"].as_f64().unwrap() >= 1.0);

    let out = srle(&["decompress", "out.srle", "back.u8", "--format", "u8"], dir.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("back.u8")).unwrap(), input);
}

#[test]
fn u64le_round_trip() {
    let dir = TempDir::new().unwrap();
    let mut input = Vec::new();
    for i in 0u64..500 {
        input.extend_from_slice(&(i % 3 * 30_000).to_le_bytes());
    }
    std::fs::write(dir.path().join("in.bin"), &input).unwrap();
    let out = srle(
        &["compress", "in.bin", "out.srle", "--format", "u64le", "--repr", "varlen"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = srle(&["decompress", "out.srle", "back.bin", "--format", "u64le"], dir.path());
    assert!(out.status.success());
    assert_eq!(std::fs::read(dir.path().join("back.bin")).unwrap(), input);
}

#[test]
fn csv_round_trip_with_dictionary_sidecar() {
    let dir = TempDir::new().unwrap();
    let mut csv = String::from("city\n");
    for i in 0..300 {
        csv.push_str(if i % 5 == 0 { "lyon\n" } else { "paris\n" });
    }
    std::fs::write(dir.path().join("in.csv"), &csv).unwrap();

    let out = srle(&["compress", "in.csv", "out.srle", "--format", "csv:city"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("out.dict").exists());

    let out = srle(&["decompress", "out.srle", "back.txt", "--format", "csv:city"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("back.txt")).unwrap();
    let expected: String = csv.lines().skip(1).map(|l| format!("{l}\n")).collect();
    assert_eq!(text, expected);
}

#[test]
fn vrle_on_alternation_reports_inflation() {
    let dir = TempDir::new().unwrap();
    let input: Vec<u8> = (0..1000).map(|i| (i % 2) as u8).collect();
    std::fs::write(dir.path().join("alt.u8"), &input).unwrap();
    let out = srle(
        &["compress", "alt.u8", "alt.srle", "--format", "u8", "--mode", "vrle"],
        dir.path(),
    );
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(report["compression_ratio"].as_f64().unwrap() < 1.0);

    // ours leaves alternation alone
    let out = srle(&["compress", "alt.u8", "alt2.srle", "--format", "u8"], dir.path());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["compression_ratio"].as_f64().unwrap(), 1.0);
}

#[test]
fn oracle_mode_never_inflates() {
    let dir = TempDir::new().unwrap();
    for (name, input) in [
        ("alt", (0..1000).map(|i| (i % 2) as u8).collect::<Vec<u8>>()),
        ("uniform", (0..1000).map(|i| (i % 251) as u8).collect()),
        ("single", vec![9u8; 1000]),
        ("empty", vec![]),
    ] {
        let path = format!("{name}.u8");
        std::fs::write(dir.path().join(&path), &input).unwrap();
        let out = srle(
            &["compress", &path, "out.srle", "--format", "u8", "--mode", "oracle"],
            dir.path(),
        );
        assert!(out.status.success());
        let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        let input_bits = report["input_bits"].as_u64().unwrap();
        let payload_bits = report["payload_bits"].as_u64().unwrap();
        assert!(payload_bits <= input_bits, "{name}: {payload_bits} > {input_bits}");
    }
}

#[test]
fn stats_emits_one_row_per_symbol() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("in.u8"), [0u8, 0, 0, 1, 1, 2]).unwrap();
    let out = srle(&["stats", "in.u8", "--format", "u8"], dir.path());
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "symbol,count,p_hat,b_x,threshold,rx_approx,expected_savings_bits,in_G"
    );
    assert_eq!(lines.count(), 3);
}

#[test]
fn sweep_writes_stable_csv() {
    let dir = TempDir::new().unwrap();
    let out = srle(
        &["sweep", "--p-grid", "0.5", "--n-grid", "101", "--br-grid", "4"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("p,N,b_r,rx_exact,rx_approx,epsilon1\n"));
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(&fields[..3], &["0.5", "101", "4"]);
    assert_eq!(fields[4], "25");
}

#[test]
fn bench_compares_all_methods() {
    let dir = TempDir::new().unwrap();
    let input = vec![7u8; 5000];
    std::fs::write(dir.path().join("in.u8"), &input).unwrap();
    let out = srle(&["bench", "in.u8", "--format", "u8"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let methods: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(methods, vec!["ours", "vrle", "drle", "oracle"]);
    // single-symbol input: every method compresses, ours equals vrle
    let ratios: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(ratios.iter().all(|&r| r > 1.0));
    assert_eq!(ratios[0], ratios[1]);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    // usage error
    let out = srle(&["compress", "in", "out", "--format", "nope"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // missing input file
    let out = srle(&["compress", "missing.u8", "out.srle", "--format", "u8"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    // corrupt container
    std::fs::write(dir.path().join("bad.srle"), b"not a container").unwrap();
    let out = srle(&["decompress", "bad.srle", "out.u8", "--format", "u8"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("SRLE"));
    assert!(!dir.path().join("out.u8").exists());
    // truncated container
    std::fs::write(dir.path().join("in.u8"), [1u8, 1, 1, 1]).unwrap();
    srle(&["compress", "in.u8", "ok.srle", "--format", "u8"], dir.path());
    let full = std::fs::read(dir.path().join("ok.srle")).unwrap();
    std::fs::write(dir.path().join("trunc.srle"), &full[..full.len() - 1]).unwrap();
    let out = srle(&["decompress", "trunc.srle", "out2.u8", "--format", "u8"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}
