use elm_mimo::frontend::PowerAmplifier;
use elm_mimo::harness::{
    find_record, load_config, run_adaptive, run_bias_ablation, run_bias_ablation_with,
    run_ser_sweep, run_ser_sweep_with, to_csv_string, write_csv, ExperimentConfig, ReceiverKind,
    SerRecord, SnrReference, ABLATION_SYSTEMS, CSV_HEADER,
};

fn small() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::desk();
    cfg.channel.n_antennas = 16;
    cfg.channel.n_users = 3;
    cfg.training_len = 300;
    cfg.payload_len = 200;
    cfg.preamble_len = 64;
    cfg.trials = 3;
    cfg.borrowed_elm.hidden = 48;
    cfg.snr_db_list = vec![0.0, 10.0, 20.0, 30.0];
    cfg
}

fn binomial_se(r: &SerRecord) -> f64 {
    (r.ser * (1.0 - r.ser) / r.symbols as f64).sqrt()
}

#[test]
fn sweep_emits_one_record_per_receiver_and_snr() {
    let recs = run_ser_sweep(&small()).unwrap();
    assert_eq!(recs.len(), 20);
    for r in &recs {
        assert_eq!(r.experiment, "ser-sweep");
        assert_eq!(r.frame, -1);
        assert_eq!(r.symbols, 3 * 200 * 3);
        assert_eq!(r.ser, r.errors as f64 / r.symbols as f64);
        assert_eq!((r.ser * r.symbols as f64).round() as u64, r.errors);
        assert!((0.0..=1.0).contains(&r.ser));
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let cfg = small();
    let a = to_csv_string(&run_ser_sweep_with(&cfg, Some(1)).unwrap());
    let b = to_csv_string(&run_ser_sweep_with(&cfg, Some(5)).unwrap());
    let c = to_csv_string(&run_ser_sweep_with(&cfg, None).unwrap());
    assert_eq!(a, b);
    assert_eq!(a, c);
    let a = to_csv_string(&run_bias_ablation_with(&cfg, Some(1)).unwrap());
    let b = to_csv_string(&run_bias_ablation_with(&cfg, Some(3)).unwrap());
    assert_eq!(a, b);
}

#[test]
fn ablation_has_four_systems_per_snr() {
    let cfg = small();
    let recs = run_bias_ablation(&cfg).unwrap();
    assert_eq!(recs.len(), 4 * cfg.snr_db_list.len());
    for snr in &cfg.snr_db_list {
        for sys in ABLATION_SYSTEMS {
            assert!(find_record(&recs, sys.label(), *snr, -1).is_some());
        }
    }
}

#[test]
fn bias_is_harmless_for_unquantized_linear_chain() {
    let mut cfg = small();
    cfg.pa = PowerAmplifier::Bypass;
    cfg.channel.n_antennas = 64;
    cfg.channel.n_users = 10;
    cfg.preamble_len = 256;
    cfg.snr_db_list = vec![-10.0, -5.0];
    cfg.training_len = 3000;
    cfg.payload_len = 2000;
    cfg.trials = 8;
    let recs = run_bias_ablation(&cfg).unwrap();
    for snr in &cfg.snr_db_list {
        let a = find_record(&recs, "trained-zf-noquant", *snr, -1).unwrap();
        let b = find_record(&recs, "trained-zf-noquant-bias", *snr, -1).unwrap();
        assert!(a.ser > 0.0);
        let se = (binomial_se(a).powi(2) + binomial_se(b).powi(2)).sqrt();
        assert!(
            (a.ser - b.ser).abs() <= 2.0 * se,
            "{} vs {} (se {se})",
            a.ser,
            b.ser
        );
    }
}

#[test]
fn ideal_chain_zero_forcing_is_essentially_error_free() {
    let mut cfg = ExperimentConfig::desk();
    cfg.channel.n_antennas = 64;
    cfg.channel.n_users = 8;
    cfg.pa = PowerAmplifier::Bypass;
    cfg.adc.ideal = true;
    cfg.snr_db_list = vec![30.0];
    cfg.receivers = vec![ReceiverKind::Zf];
    cfg.training_len = 16;
    cfg.payload_len = 12_500;
    cfg.trials = 10;
    let recs = run_ser_sweep(&cfg).unwrap();
    assert_eq!(recs[0].symbols, 1_000_000);
    assert!(recs[0].ser < 1e-4, "{}", recs[0].ser);
}

#[test]
fn ser_falls_with_snr_on_a_linear_chain() {
    let mut cfg = small();
    cfg.pa = PowerAmplifier::Bypass;
    cfg.channel.n_antennas = 16;
    cfg.channel.n_users = 4;
    cfg.snr_db_list = vec![-5.0, 0.0, 5.0, 10.0];
    cfg.payload_len = 2500;
    cfg.trials = 10;
    let recs = run_ser_sweep(&cfg).unwrap();
    for kind in ReceiverKind::ALL {
        let curve: Vec<f64> = cfg
            .snr_db_list
            .iter()
            .map(|s| find_record(&recs, kind.label(), *s, -1).unwrap().ser)
            .collect();
        assert!(curve.len() >= 4);
        let inversions = curve.windows(2).filter(|w| w[1] > w[0]).count();
        assert!(inversions <= 1, "{}: {curve:?}", kind.label());
    }
}

#[test]
fn adaptive_is_flat_without_motion() {
    let mut cfg = small();
    cfg.channel.velocity_mps = 0.0;
    cfg.snr_db_list = vec![10.0];
    cfg.adaptive.init_len = 400;
    cfg.adaptive.frame_training_len = 100;
    cfg.adaptive.frame_data_len = 400;
    cfg.adaptive.n_frames = 6;
    cfg.adaptive.benchmark_len = 400;
    cfg.trials = 6;
    let recs = run_adaptive(&cfg).unwrap();
    assert_eq!(recs.len(), 3 * 6);
    let oselm: Vec<&SerRecord> = (0..6)
        .map(|f| find_record(&recs, "oselm", 10.0, f).unwrap())
        .collect();
    let mean = oselm.iter().map(|r| r.ser).sum::<f64>() / 6.0;
    for r in &oselm {
        let se = (mean * (1.0 - mean) / r.symbols as f64).sqrt();
        assert!(
            (r.ser - mean).abs() <= 4.0 * se,
            "frame {}: {} vs mean {mean}",
            r.frame,
            r.ser
        );
    }
}

#[test]
fn per_user_breakdown_is_optional() {
    let mut cfg = small();
    cfg.snr_db_list = vec![10.0];
    cfg.receivers = vec![ReceiverKind::NaturalElm];
    cfg.per_user = true;
    let recs = run_ser_sweep(&cfg).unwrap();
    assert_eq!(recs.len(), 1 + 3);
    let pooled = &recs[0];
    let sum: u64 = recs[1..].iter().map(|r| r.errors).sum();
    assert_eq!(sum, pooled.errors);
}

#[test]
fn pre_pa_reference_uses_constellation_power() {
    let mut cfg = ExperimentConfig::desk();
    let post = cfg.noise_variance(10.0);
    cfg.snr_reference = SnrReference::PrePa;
    assert!((cfg.noise_variance(10.0) - 0.1).abs() < 1e-12);
    assert!(post < 0.1);
}

#[test]
fn csv_and_config_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    write_csv(&[], &csv).unwrap();
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        format!("{CSV_HEADER}\n")
    );

    let cfg_path = dir.path().join("cfg.json");
    let cfg = ExperimentConfig::paper();
    std::fs::write(&cfg_path, cfg.to_json()).unwrap();
    assert_eq!(load_config(&cfg_path).unwrap(), cfg);
}
