use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use twotone_cli::RunConfig;

fn twotone(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twotone"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL_SWEEP: &str = r#"
[sweep]
probe_points = 3
magnon_points = 3
"#;

#[test]
fn spectrum_writes_csv_with_header() {
    let tmp = tempfile::tempdir().unwrap();
    let out = twotone(tmp.path(), &["spectrum", "--delta0", "1", "--phi", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(tmp.path().join("spectrum_R1.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("freq_hz,re,im,abs"));
    assert_eq!(lines.count(), 401);
}

#[test]
fn spectrum_output_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--quantity", "t2", "--delta", "3", "--phi", "-1.2"];
    assert!(twotone(a.path(), &args).status.success());
    assert!(twotone(b.path(), &args).status.success());
    let x = fs::read(a.path().join("spectrum_T2.csv")).unwrap();
    let y = fs::read(b.path().join("spectrum_T2.csv")).unwrap();
    assert_eq!(x, y);
}

#[test]
fn small_sweep_has_expected_shape_and_overlay() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SMALL_SWEEP);
    let out = twotone(tmp.path(), &["sweep", "--config", &cfg, "--png"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let grid = fs::read_to_string(tmp.path().join("grid_R1.csv")).unwrap();
    let rows: Vec<Vec<&str>> = grid.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.len() == 4));
    assert_eq!(rows[0][0], "magnon_hz\\probe_hz");

    let overlay = fs::read_to_string(tmp.path().join("overlay_R1.csv")).unwrap();
    let mut lines = overlay.lines();
    assert_eq!(lines.next(), Some("magnon_hz,re_wp,re_wm,re_Op,re_Om"));
    assert_eq!(lines.count(), 3);

    let png = fs::read(tmp.path().join("heatmap_R1.png")).unwrap();
    assert_eq!(&png[..8], b"\x89PNG\r\n\x1a\n");
    assert!(tmp.path().join("sweep_R1.json").exists());
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg_text = "[sweep]\nprobe_points = 21\nmagnon_points = 17\n";
    let run = |dir: &Path, threads: &str| {
        let cfg = write_config(dir, cfg_text);
        let out = Command::new(env!("CARGO_BIN_EXE_twotone"))
            .args(["sweep", "--config", &cfg, "--out"])
            .arg(dir)
            .env("TWOTONE_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        fs::read(dir.join("grid_R1.csv")).unwrap()
    };
    assert_eq!(run(a.path(), "1"), run(b.path(), "4"));
}

#[test]
fn poles_report_crossing_at_critical_drive() {
    let tmp = tempfile::tempdir().unwrap();
    let out = twotone(tmp.path(), &["poles", "--delta0", "1", "--phi", "0"]);
    assert!(out.status.success());
    let text = fs::read_to_string(tmp.path().join("poles.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["regime"], "Crossing");
    assert_eq!(json["g_effective"]["re_hz"], 0.0);
    assert_eq!(json["g_effective"]["im_hz"], 0.0);
    assert_eq!(json["entries"].as_array().unwrap().len(), 21);
}

#[test]
fn negative_loss_rate_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[system]\nkappa_1 = \"-1 MHz\"\n");
    let out = twotone(tmp.path(), &["spectrum", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn unknown_key_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[system]\nkappa_4 = \"1 MHz\"\n");
    let out = twotone(tmp.path(), &["spectrum", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn both_drive_amplitudes_conflict() {
    let tmp = tempfile::tempdir().unwrap();
    let out = twotone(tmp.path(), &["spectrum", "--delta", "1", "--delta0", "1"]);
    assert!(!out.status.success());
    let cfg = write_config(tmp.path(), "[drive]\ndelta = 1.0\ndelta0 = 1.0\n");
    let out = twotone(tmp.path(), &["spectrum", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_survives_a_round_trip() {
    let text = r#"
quantity = "T2"
emit_plots = true

[system]
cavity = "10 GHz"
coupling = "25 MHz"
zeta = 0.3
phi_3p = 0.7

[drive]
delta0 = 1.5
phi = -0.4

[sweep]
probe_points = 11
magnon_points = 9

[poles]
magnon = ["9.95 GHz", "10 GHz"]
"#;
    let first = RunConfig::from_toml(text).unwrap();
    let second = RunConfig::from_toml(&first.to_toml().unwrap()).unwrap();
    assert_eq!(first, second);
}

#[test]
fn verify_without_slow_suites_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "[verify]\node = false\nalignment = false\n");
    let out = twotone(tmp.path(), &["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(json["all_passed"], true);
}
