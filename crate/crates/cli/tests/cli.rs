use std::path::Path;
use std::process::{Command, Output};

const HEADER: &str = "experiment,receiver,snr_db,frame,symbols,errors,ser,seed";

fn elm_mimo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elm-mimo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.json");
    std::fs::write(
        &path,
        r#"{"channel": {"n_antennas": 16, "n_users": 2}, "snr_db_list": [5, 15],
            "training_len": 200, "payload_len": 100, "preamble_len": 64, "trials": 3,
            "borrowed_elm": {"hidden": 32},
            "adaptive": {"init_len": 200, "frame_training_len": 40, "frame_data_len": 30,
                         "n_frames": 3, "benchmark_len": 200}}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn selftest_passes() {
    let out = elm_mimo(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn csv_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    for cmd in ["ser-sweep", "bias-ablation", "adaptive"] {
        let mut outputs = Vec::new();
        for threads in ["1", "3"] {
            let csv = dir.path().join(format!("{cmd}-{threads}.csv"));
            let out = elm_mimo(&[
                cmd,
                "--config",
                &cfg,
                "--seed",
                "9",
                "--parallel",
                threads,
                "--out",
                csv.to_str().unwrap(),
            ]);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(std::fs::read(&csv).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
        let text = String::from_utf8(outputs[0].clone()).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next(), Some(HEADER));
        assert!(text
            .lines()
            .skip(1)
            .all(|l| l.starts_with(cmd) && l.ends_with(",9")));
    }
}

#[test]
fn receiver_list_restricts_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = elm_mimo(&["ser-sweep", "--config", &cfg, "--receivers", "zf,mmse"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let receivers: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(receivers, ["zf", "mmse", "zf", "mmse"]);
}

#[test]
fn seed_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let a = elm_mimo(&["ser-sweep", "--config", &cfg, "--seed", "1"]).stdout;
    let b = elm_mimo(&["ser-sweep", "--config", &cfg, "--seed", "2"]).stdout;
    assert_ne!(a, b);
}

#[test]
fn unknown_config_key_fails_with_its_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"adc": {"bitz": 4}}"#).unwrap();
    let out = elm_mimo(&["ser-sweep", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bitz"));
}

#[test]
fn errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    for args in [
        vec!["ser-sweep", "--config", "/nonexistent/cfg.json"],
        vec!["ser-sweep", "--receivers", "turbo"],
        vec!["adaptive", "--config", &cfg, "--parallel", "0"],
        vec!["ser-sweep", "--preset", "huge"],
        vec!["frobnicate"],
    ] {
        let out = elm_mimo(&args);
        assert!(!out.status.success(), "{args:?}");
    }
    let invalid = dir.path().join("invalid.json");
    std::fs::write(&invalid, r#"{"adaptive": {"lambda": 1.5}}"#).unwrap();
    let out = elm_mimo(&["adaptive", "--config", invalid.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("adaptive.lambda"));
}
