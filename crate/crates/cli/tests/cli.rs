//! End-to-end tests of the command-line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polarflip")
}

fn tmp_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polarflip-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn construct_writes_reloadable_code() {
    let dir = tmp_dir("construct");
    let out = dir.join("code.json");
    let output = run(&[
        "construct",
        "--n",
        "5",
        "--k",
        "12",
        "--crc",
        "8",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let text = read(&out);
    let code = polarflip::PolarCode::from_json(&text).unwrap();
    assert_eq!(code.block_len(), 32);
    assert_eq!(code.payload_bits(), 12);
    assert_eq!(code.crc_bits(), 8);
    assert_eq!(code.info_set().len(), 20);
    // round trip is bit-identical
    let mut rewritten = code.to_json().unwrap();
    rewritten.push('\n');
    assert_eq!(rewritten, text);
}

#[test]
fn decode_frame_noiseless_round_trip() {
    let output = run(&[
        "decode-frame",
        "--n",
        "6",
        "--k",
        "24",
        "--crc",
        "16",
        "--noiseless",
        "--seed",
        "9",
    ]);
    assert!(output.status.success(), "{output:?}");
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["matches"], true);
    assert_eq!(report["attempts_used"], 0);
    assert_eq!(report["crc_pass"], true);
    assert_eq!(report["u_hat"], report["u"]);
}

#[test]
fn decode_frame_accepts_llr_file() {
    let dir = tmp_dir("llr");
    let llr_path = dir.join("frame.llr");
    std::fs::write(&llr_path, "5.0\n".repeat(16)).unwrap();
    let output = run(&[
        "decode-frame",
        "--n",
        "4",
        "--k",
        "8",
        "--crc",
        "0",
        "--payload",
        "00",
        "--decoder",
        "sc",
        "--llr-file",
        llr_path.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["matches"], true);
    assert_eq!(report["ebn0_db"], serde_json::Value::Null);
}

#[test]
fn fer_outputs_are_deterministic() {
    let dir = tmp_dir("fer");
    let args = |suffix: &str| {
        [
            "fer".to_string(),
            "--n".into(),
            "6".into(),
            "--k".into(),
            "24".into(),
            "--crc".into(),
            "8".into(),
            "--decoder".into(),
            "sc,sc_flip".into(),
            "--T".into(),
            "4".into(),
            "--ebn0".into(),
            "2.0:1.0:3.0".into(),
            "--seed".into(),
            "11".into(),
            "--min-errors".into(),
            "20".into(),
            "--max-frames".into(),
            "3000".into(),
            "--out-json".into(),
            dir.join(format!("fer{suffix}.json")).display().to_string(),
            "--out-csv".into(),
            dir.join(format!("fer{suffix}.csv")).display().to_string(),
            "--out-dat".into(),
            dir.join(format!("fer{suffix}.dat")).display().to_string(),
        ]
    };
    let first = Command::new(bin()).args(args("_a")).output().unwrap();
    assert!(first.status.success(), "{first:?}");
    let second = Command::new(bin()).args(args("_b")).output().unwrap();
    assert!(second.status.success(), "{second:?}");

    for ext in ["json", "csv", "dat"] {
        let a = read(&dir.join(format!("fer_a.{ext}")));
        let b = read(&dir.join(format!("fer_b.{ext}")));
        assert_eq!(a, b, "{ext} files differ between identical runs");
    }
    let csv = read(&dir.join("fer_a.csv"));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "ebn0_db,decoder,frames,frame_errors,fer,ber,mean_attempts,norm_complexity,ci_halfwidth"
    );
    // 2 points x 2 decoders
    assert_eq!(lines.count(), 4);
    let json: serde_json::Value = serde_json::from_str(&read(&dir.join("fer_a.json"))).unwrap();
    assert_eq!(json["plan"]["base_seed"], 11);
    assert_eq!(json["points"].as_array().unwrap().len(), 2);
}

#[test]
fn histogram_prints_relative_frequencies() {
    let dir = tmp_dir("hist");
    let output = run(&[
        "histogram",
        "--n",
        "7",
        "--k",
        "64",
        "--crc",
        "0",
        "--ebn0",
        "2.0",
        "--seed",
        "3",
        "--min-errors",
        "50",
        "--max-frames",
        "20000",
        "--out-json",
        dir.join("h.json").to_str().unwrap(),
        "--out-csv",
        dir.join("h.csv").to_str().unwrap(),
        "--out-dat",
        dir.join("h.dat").to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("rel_freq"), "{stdout}");
    let dat = read(&dir.join("h.dat"));
    assert!(dat.starts_with("# plan "));
    assert!(dat.lines().nth(1).unwrap().starts_with("# errors"));
    assert!(dat.lines().count() >= 52);
}

#[test]
fn complexity_reports_sc_flip_only() {
    let dir = tmp_dir("cplx");
    let output = run(&[
        "complexity",
        "--n",
        "6",
        "--k",
        "24",
        "--crc",
        "8",
        "--T",
        "8",
        "--ebn0",
        "2.0",
        "--seed",
        "5",
        "--min-errors",
        "10",
        "--max-frames",
        "3000",
        "--out-json",
        dir.join("c.json").to_str().unwrap(),
        "--out-csv",
        dir.join("c.csv").to_str().unwrap(),
        "--out-dat",
        dir.join("c.dat").to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{output:?}");
    let dat = read(&dir.join("c.dat"));
    assert!(dat.starts_with("# plan "));
    assert_eq!(dat.lines().nth(1).unwrap(), "# ebn0_db sc_flip_t8");
    let value: f64 = dat
        .lines()
        .nth(2)
        .unwrap()
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(value >= 1.0);
}

#[test]
fn config_file_supplies_flags() {
    let dir = tmp_dir("config");
    let config = dir.join("run.json");
    std::fs::write(
        &config,
        serde_json::json!({
            "n": 6,
            "k": 24,
            "crc": 8,
            "decoder": "sc",
            "ebn0": "2.0",
            "seed": 21,
            "min-errors": 5,
            "max-frames": 2000,
            "noiseless": true,
            "out-json": dir.join("r.json").to_str().unwrap(),
            "out-csv": dir.join("r.csv").to_str().unwrap(),
            "out-dat": dir.join("r.dat").to_str().unwrap(),
        })
        .to_string(),
    )
    .unwrap();
    let output = run(&["fer", "--config", config.to_str().unwrap()]);
    assert!(output.status.success(), "{output:?}");
    let json: serde_json::Value = serde_json::from_str(&read(&dir.join("r.json"))).unwrap();
    assert_eq!(json["plan"]["noiseless"], true);
    assert_eq!(json["plan"]["base_seed"], 21);
    // noiseless frames never err
    assert_eq!(json["points"][0]["decoders"][0]["frame_errors"], 0);
}

#[test]
fn shipped_configs_parse_and_run() {
    let dir = tmp_dir("shipped");
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    for (command, config) in [
        ("fer", "configs/fer_n1024.json"),
        ("histogram", "configs/histogram_n1024.json"),
        ("complexity", "configs/complexity_t32.json"),
    ] {
        // noiseless + tiny frame budget: only the parse/dispatch is under test
        let output = run(&[
            command,
            "--config",
            root.join(config).to_str().unwrap(),
            "--noiseless",
            "--min-errors",
            "1",
            "--max-frames",
            "16",
            "--out-json",
            dir.join(format!("{command}.json")).to_str().unwrap(),
            "--out-csv",
            dir.join(format!("{command}.csv")).to_str().unwrap(),
            "--out-dat",
            dir.join(format!("{command}.dat")).to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{config}: {output:?}");
        let json: serde_json::Value =
            serde_json::from_str(&read(&dir.join(format!("{command}.json")))).unwrap();
        assert_eq!(json["plan"]["base_seed"], 7, "{config}");
    }
}

#[test]
fn outdir_env_sets_default_paths() {
    let dir = tmp_dir("envdir");
    let output = Command::new(bin())
        .env("POLARFLIP_OUTDIR", &dir)
        .args([
            "fer",
            "--n",
            "5",
            "--k",
            "16",
            "--crc",
            "0",
            "--decoder",
            "sc",
            "--ebn0",
            "2.0",
            "--noiseless",
            "--min-errors",
            "1",
            "--max-frames",
            "200",
        ])
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    for name in ["fer.json", "fer.csv", "fer.dat"] {
        assert!(dir.join(name).exists(), "{name} missing from outdir");
    }
}

#[test]
fn usage_errors_exit_with_code_2() {
    // unknown flag -> clap usage error
    let output = run(&["fer", "--bogus"]);
    assert_eq!(output.status.code(), Some(2));

    // inconsistent code parameters -> our usage error, naming the flags
    let output = run(&["fer", "--n", "5", "--k", "40", "--crc", "0"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--k"), "{stderr}");

    // bad decoder name
    let output = run(&[
        "fer",
        "--n",
        "5",
        "--k",
        "16",
        "--crc",
        "0",
        "--decoder",
        "turbo",
    ]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("--decoder"), "{stderr}");
}
