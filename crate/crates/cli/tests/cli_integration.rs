//! End-to-end tests of the `cluster` binary: output shapes, the exit
//! code contract, config-file precedence, and byte determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cluster(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_writes_all_outputs_with_expected_shapes() {
    let dir = TempDir::new().unwrap();
    let out = cluster(
        &[
            "run",
            "--gen",
            "blobs:n=300,k=3,spread=0.5",
            "--algo",
            "bacteria-farm",
            "--noise",
            "0.1",
            "--seed",
            "42",
            "--out-labels",
            "labels.csv",
            "--out-metrics",
            "metrics.json",
            "--out-plot",
            "plot.svg",
        ],
        dir.path(),
    );
    assert_code(&out, 0);

    let labels = fs::read_to_string(dir.path().join("labels.csv")).unwrap();
    let lines: Vec<&str> = labels.lines().collect();
    assert_eq!(lines[0], "index,label");
    assert_eq!(lines.len(), 301, "header plus one row per point");
    let noise_rows = lines.iter().filter(|l| l.ends_with(",noise")).count();
    // budget identity: about 10% of 300, off by at most rounding
    assert!((25..=35).contains(&noise_rows), "noise rows {noise_rows}");

    let metrics: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("metrics.json")).unwrap())
            .unwrap();
    for key in [
        "silhouette_mean",
        "calinski_harabasz",
        "n_clustered",
        "n_noise",
        "wall_time_ms",
        "growth_mode",
    ] {
        assert!(metrics.get(key).is_some(), "missing {key}");
    }
    assert_eq!(
        metrics["n_clustered"].as_u64().unwrap() + metrics["n_noise"].as_u64().unwrap(),
        300
    );
    assert_eq!(metrics["growth_mode"], "sequential");

    let svg = fs::read_to_string(dir.path().join("plot.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 300, "one marker per point");
}

#[test]
fn run_is_byte_deterministic_with_no_timing() {
    let dir = TempDir::new().unwrap();
    let args = |suffix: &str| {
        [
            "run",
            "--gen",
            "moons:n=150,jitter=0.05,seed=3",
            "--seed",
            "7",
            "--no-timing",
            "--out-labels",
        ]
        .into_iter()
        .map(String::from)
        .chain([
            format!("labels{suffix}.csv"),
            "--out-metrics".into(),
            format!("metrics{suffix}.json"),
            "--out-plot".into(),
            format!("plot{suffix}.svg"),
        ])
        .collect::<Vec<_>>()
    };
    for suffix in ["1", "2"] {
        let argv: Vec<String> = args(suffix);
        let refs: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_code(&cluster(&refs, dir.path()), 0);
    }
    for (a, b) in [
        ("labels1.csv", "labels2.csv"),
        ("metrics1.json", "metrics2.json"),
        ("plot1.svg", "plot2.svg"),
    ] {
        let x = fs::read(dir.path().join(a)).unwrap();
        let y = fs::read(dir.path().join(b)).unwrap();
        assert_eq!(x, y, "{a} and {b} differ");
    }
}

#[test]
fn run_reads_csv_input_with_and_without_header() {
    let dir = TempDir::new().unwrap();
    let body = "0.0,0.0\n0.5,0.1\n0.2,0.4\n5.0,5.0\n5.5,5.2\n5.1,4.8\n";
    fs::write(dir.path().join("plain.csv"), body).unwrap();
    fs::write(dir.path().join("headed.csv"), format!("x,y\n{body}")).unwrap();
    for file in ["plain.csv", "headed.csv"] {
        let out = cluster(
            &[
                "run",
                "--input",
                file,
                "--algo",
                "kmeans",
                "--k",
                "2",
                "--out-labels",
                "out.csv",
            ],
            dir.path(),
        );
        assert_code(&out, 0);
        let labels = fs::read_to_string(dir.path().join("out.csv")).unwrap();
        assert_eq!(labels.lines().count(), 7, "{file}");
    }
}

#[test]
fn config_file_is_used_and_flags_win() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("config.json"),
        r#"{"gen": "blobs:n=300,k=3,spread=0.5,seed=1", "noise": 0.02, "seed": 5}"#,
    )
    .unwrap();
    // config alone: tiny noise budget
    let out = cluster(
        &[
            "run",
            "--config",
            "config.json",
            "--no-timing",
            "--out-metrics",
            "m1.json",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let m1: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m1.json")).unwrap()).unwrap();
    assert!(m1["n_noise"].as_u64().unwrap() <= 10);

    // --noise flag overrides the config's 0.02
    let out = cluster(
        &[
            "run",
            "--config",
            "config.json",
            "--noise",
            "0.2",
            "--no-timing",
            "--out-metrics",
            "m2.json",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let m2: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m2.json")).unwrap()).unwrap();
    let noise = m2["n_noise"].as_u64().unwrap();
    assert!((50..=70).contains(&noise), "noise {noise}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = TempDir::new().unwrap();
    // config errors -> 2
    for args in [
        vec!["run"],                                // no source
        vec!["run", "--gen", "rings:n=10"],         // unknown generator
        vec!["run", "--gen", "blobs:n=10,k=2"],     // missing key
        vec!["run", "--input", "no-such-file.csv"], // unloadable
        vec![
            "run",
            "--gen",
            "blobs:n=30,k=2,spread=0.5,dim=3",
            "--out-plot",
            "p.svg",
        ],
        vec![
            "run",
            "--gen",
            "blobs:n=30,k=2,spread=0.5",
            "--noise",
            "1.5",
        ],
        vec!["bench", "--suite", "missing.json", "--out", "r.csv"],
    ] {
        let out = cluster(&args, dir.path());
        assert_code(&out, 2);
        assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
    }
    // unparsable flags -> 2 (via clap)
    assert_code(&cluster(&["run", "--nfr", "many"], dir.path()), 2);
    assert_code(&cluster(&["frobnicate"], dir.path()), 2);
    // algorithm failure -> 1: phase-1 labels the whole sample noise
    let out = cluster(
        &[
            "run",
            "--gen",
            "blobs:n=100,k=2,spread=0.5",
            "--phase1",
            "dbscan:eps=0.000001,min_pts=50",
        ],
        dir.path(),
    );
    assert_code(&out, 1);
    // help -> 0
    assert_code(&cluster(&["--help"], dir.path()), 0);
}

#[test]
fn csv_input_needs_k_for_kmeans() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("d.csv"), "0,0\n1,1\n2,2\n").unwrap();
    let out = cluster(&["run", "--input", "d.csv", "--algo", "kmeans"], dir.path());
    assert_code(&out, 2);
}

#[test]
fn bench_report_counts_cells_averages_and_errors() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("suite.json"),
        r#"{
            "seed": 9,
            "datasets": [
                "blobs:n=200,k=2,spread=0.5,seed=1",
                {"gen": "moons:n=200,jitter=0.05,seed=2", "name": "moons-small"}
            ],
            "algorithms": [
                {"algo": "bacteria-farm", "noise": 0.1, "sample": 0.5},
                {"algo": "kmeans"},
                {"algo": "bacteria-farm", "phase1": "dbscan:eps=0.000001,min_pts=50"}
            ]
        }"#,
    )
    .unwrap();
    let out = cluster(
        &[
            "bench",
            "--suite",
            "suite.json",
            "--out",
            "report.csv",
            "--no-timing",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let report = fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    // header + 2 datasets x 3 algorithms + 3 average rows
    assert_eq!(lines.len(), 1 + 6 + 3, "{report}");
    assert_eq!(
        lines[0],
        "dataset,algorithm,silhouette_mean,calinski_harabasz,n_clustered,n_noise,wall_time_ms,growth_mode,params,error"
    );
    assert!(lines.iter().any(|l| l.starts_with("moons-small,")));
    // the failing phase-1 cells carry an error and stay non-fatal
    let error_cells = lines[1..]
        .iter()
        .filter(|l| !l.starts_with("average") && l.split(',').nth(9).is_some_and(|e| !e.is_empty()))
        .count();
    assert_eq!(error_cells, 2);

    // the average row is the arithmetic mean of its column
    let sil = |line: &str| -> Option<f64> {
        line.split(',')
            .nth(2)
            .filter(|s| !s.is_empty())
            .map(|s| s.parse().unwrap())
    };
    let kmeans_cells: Vec<f64> = lines
        .iter()
        .filter(|l| !l.starts_with("average") && l.split(',').nth(1) == Some("kmeans"))
        .filter_map(|l| sil(l))
        .collect();
    assert_eq!(kmeans_cells.len(), 2);
    let want = (kmeans_cells[0] + kmeans_cells[1]) / 2.0;
    let avg_row = lines
        .iter()
        .find(|l| l.starts_with("average,kmeans"))
        .unwrap();
    let got = sil(avg_row).unwrap();
    assert!((got - want).abs() < 1e-5, "avg {got} vs mean {want}");
}

#[test]
fn bench_is_byte_deterministic_with_no_timing() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("suite.json"),
        r#"{
            "datasets": ["blobs:n=200,k=2,spread=0.5,seed=4"],
            "algorithms": [{"algo": "bacteria-farm"}, {"algo": "dbscan"}]
        }"#,
    )
    .unwrap();
    for name in ["r1.csv", "r2.csv"] {
        assert_code(
            &cluster(
                &[
                    "bench",
                    "--suite",
                    "suite.json",
                    "--out",
                    name,
                    "--no-timing",
                ],
                dir.path(),
            ),
            0,
        );
    }
    assert_eq!(
        fs::read(dir.path().join("r1.csv")).unwrap(),
        fs::read(dir.path().join("r2.csv")).unwrap()
    );
}

#[test]
fn sweep_writes_matrix_metrics_and_plots() {
    let dir = TempDir::new().unwrap();
    let out = cluster(
        &[
            "sweep-nfr",
            "--gen",
            "blobs:n=200,k=3,spread=0.5,seed=6",
            "--values",
            "3,5",
            "--sample",
            "0.5",
            "--out",
            "sweep",
            "--no-timing",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("min pairwise agreement"), "{stdout}");

    let agreement = fs::read_to_string(dir.path().join("sweep/agreement.csv")).unwrap();
    let lines: Vec<&str> = agreement.lines().collect();
    assert_eq!(lines[0], "nfr,3,5");
    assert_eq!(lines.len(), 3);
    // diagonal is exact self-agreement
    assert!(lines[1].starts_with("3,1.000000,"));
    assert!(lines[2].ends_with(",1.000000"));

    let metrics = fs::read_to_string(dir.path().join("sweep/metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 3);
    assert!(metrics.starts_with("nfr,silhouette_mean,"));

    for v in ["3", "5"] {
        let svg = fs::read_to_string(dir.path().join(format!("sweep/nfr_{v}.svg"))).unwrap();
        assert_eq!(svg.matches("<circle").count(), 200);
    }
}

#[test]
fn sweep_single_value_has_unit_self_agreement() {
    let dir = TempDir::new().unwrap();
    let out = cluster(
        &[
            "sweep-nfr",
            "--gen",
            "blobs:n=100,k=2,spread=0.5,seed=2",
            "--values",
            "3",
            "--out",
            "sweep",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    let agreement = fs::read_to_string(dir.path().join("sweep/agreement.csv")).unwrap();
    assert_eq!(agreement, "nfr,3\n3,1.000000\n");
}

#[test]
fn sweep_skips_plots_for_non_2d_data() {
    let dir = TempDir::new().unwrap();
    let out = cluster(
        &[
            "sweep-nfr",
            "--gen",
            "blobs:n=150,k=3,spread=0.5,dim=4,seed=1",
            "--values",
            "3,5",
            "--out",
            "sweep4d",
        ],
        dir.path(),
    );
    assert_code(&out, 0);
    assert!(dir.path().join("sweep4d/agreement.csv").exists());
    assert!(!dir.path().join("sweep4d/nfr_3.svg").exists());
}
