use qadlab_core::experiments::{
    self, io, AdaptiveDemoConfig, AdaptiveDemoReport, CapacityConfig, QubitExampleReport, SweepConfig, SweepRecord,
    SweepSummary,
};

fn sweep_cfg() -> SweepConfig {
    SweepConfig { dims: vec![2, 3], trials: 10, master_seed: 7, ..Default::default() }
}

#[test]
fn sweep_csv_has_declared_columns_and_one_row_per_trial() {
    let out = experiments::run_qudit_sweep(&sweep_cfg()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    io::write_csv(&path, &out.records).unwrap();
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(
        &header[..13],
        [
            "d",
            "trial",
            "seed",
            "purity",
            "kappa",
            "outcome",
            "fidelity_standard",
            "fidelity_hw",
            "fidelity_matched",
            "linear_fidelity_hw",
            "spectral_error_hw",
            "spectral_error_matched",
            "analytic_hw_fidelity"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 20);
    for (row, rec) in rows.iter().zip(&out.records) {
        let f: f64 = row[6].parse().unwrap();
        assert!((f - rec.fidelity_standard).abs() <= 1e-11 * rec.fidelity_standard.max(1e-300));
        // 12 significant digits: d.ddddddddddde±x
        let mantissa = row[6].split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 12, "{}", &row[6]);
    }
}

#[test]
fn json_outputs_round_trip() {
    let out = experiments::run_qudit_sweep(&sweep_cfg()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let rec_path = dir.path().join("records.json");
    let sum_path = dir.path().join("summary.json");
    io::write_json(&rec_path, &out.records).unwrap();
    io::write_json(&sum_path, &out.summary).unwrap();
    let back: Vec<SweepRecord> = serde_json::from_str(&std::fs::read_to_string(&rec_path).unwrap()).unwrap();
    assert_eq!(back, out.records);
    let back: SweepSummary = serde_json::from_str(&std::fs::read_to_string(&sum_path).unwrap()).unwrap();
    assert_eq!(back, out.summary);

    let q = experiments::run_qubit_example().unwrap();
    let back: QubitExampleReport = serde_json::from_str(&serde_json::to_string(&q).unwrap()).unwrap();
    assert_eq!(back, q);

    let cfg = AdaptiveDemoConfig { d: 2, n_coarse: 100, master_seed: 1, sic_restarts: 4, ..Default::default() };
    let a = experiments::run_adaptive_demo(&cfg).unwrap();
    let back: AdaptiveDemoReport = serde_json::from_str(&serde_json::to_string_pretty(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}

#[test]
fn written_files_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut blobs = Vec::new();
    for (i, threads) in [1, 2].into_iter().enumerate() {
        let out = experiments::run_qudit_sweep(&SweepConfig { threads: Some(threads), ..sweep_cfg() }).unwrap();
        let caps = experiments::run_capacity_scan(&CapacityConfig {
            dims: vec![2, 4],
            trials: 25,
            master_seed: 7,
            threads: Some(threads),
        })
        .unwrap();
        let a = dir.path().join(format!("sweep{i}.csv"));
        let b = dir.path().join(format!("caps{i}.csv"));
        let c = dir.path().join(format!("summary{i}.json"));
        io::write_csv(&a, &out.records).unwrap();
        io::write_csv(&b, &caps).unwrap();
        io::write_json(&c, &out.summary).unwrap();
        blobs.push([a, b, c].map(|p| std::fs::read(p).unwrap()));
    }
    assert_eq!(blobs[0], blobs[1]);
}

#[test]
fn different_seeds_give_different_records() {
    let a = experiments::run_qudit_sweep(&sweep_cfg()).unwrap();
    let b = experiments::run_qudit_sweep(&SweepConfig { master_seed: 8, ..sweep_cfg() }).unwrap();
    assert_ne!(a.records, b.records);
}
