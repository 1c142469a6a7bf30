use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use firefly_core::harness::{
    Aggregates, ExperimentReport, Landscape, RunReport, PAPER_EXPERIMENTS,
};
use firefly_core::Sense;

fn firefly(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firefly"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn monotone(values: &[f64], sense: Sense) -> bool {
    values.windows(2).all(|w| !sense.better(w[0], w[1]))
}

#[test]
fn run_json_trace() {
    let out = firefly(&[
        "run",
        "--function",
        "four_peak",
        "--dim",
        "2",
        "--n",
        "12",
        "--iters",
        "9",
        "--alpha",
        "0.2",
        "--beta0",
        "1",
        "--gamma",
        "0.1",
        "--m-exp",
        "2",
        "--seed",
        "5",
    ]);
    let report: RunReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.rows.len(), 9);
    assert_eq!(report.config.params.sense, Sense::Maximize);
    let best: Vec<f64> = report.rows.iter().map(|t| t.best_so_far).collect();
    assert!(monotone(&best, Sense::Maximize));
    assert_eq!(*best.last().unwrap(), report.aggregates.best_value);
    assert_eq!(report.aggregates.nominal_evaluations, 12 * 9);
}

#[test]
fn run_csv_trace_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    for (resample, name) in [(false, "standing_wave"), (true, "stochastic_grid")] {
        let mut args = vec![
            "run",
            "--function",
            name,
            "--n",
            "10",
            "--iters",
            "12",
            "--seed",
            "3",
            "--format",
            "csv",
            "--out",
        ];
        args.push(path.to_str().unwrap());
        if resample {
            args.push("--resample");
        }
        stdout(&firefly(&args));
        let mut reader = csv::Reader::from_path(&path).unwrap();
        assert_eq!(
            reader.headers().unwrap(),
            vec!["iteration", "best_so_far", "current_best", "alpha_used"]
        );
        let best: Vec<f64> = reader
            .records()
            .map(|r| r.unwrap()[1].parse().unwrap())
            .collect();
        assert_eq!(best.len(), 12);
        assert!(monotone(&best, Sense::Minimize));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(
        firefly(&["run", "--function", "rosenbrock"]).status.code(),
        Some(3)
    );
    assert_eq!(
        firefly(&["run", "--function", "sphere", "--n", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        firefly(&["run", "--function", "sphere", "--alpha", "-1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        firefly(&["run", "--function", "stochastic_grid", "--dim", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(firefly(&["run", "--function"]).status.code(), Some(2));
    assert_eq!(
        firefly(&["vessel", "--lambda", "-1", "--replicates", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        firefly(&["vessel", "--replicates", "0"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.csv");
    let out = out.to_str().unwrap();
    assert_eq!(
        firefly(&[
            "landscape",
            "--function",
            "sphere",
            "--resolution",
            "1",
            "--out",
            out
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        firefly(&[
            "landscape",
            "--function",
            "nope",
            "--resolution",
            "5",
            "--out",
            out
        ])
        .status
        .code(),
        Some(3)
    );
    assert_eq!(
        firefly(&["run", "--function", "sphere", "--n", "3", "--iters", "1"])
            .status
            .code(),
        Some(0)
    );
}

fn check_report_files(dir: &Path) {
    for name in PAPER_EXPERIMENTS {
        let text = fs::read_to_string(dir.join(format!("{name}.json"))).unwrap();
        let report: ExperimentReport = serde_json::from_str(&text).unwrap();
        assert_eq!(
            Aggregates::from_rows(&report.rows, report.sense()),
            report.aggregates,
            "{name}"
        );
        let idx: Vec<u64> = report.rows.iter().map(|r| r.replicate).collect();
        assert_eq!(idx, (0..report.rows.len() as u64).collect::<Vec<_>>());
    }
    let summary = fs::read_to_string(dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), PAPER_EXPERIMENTS.len() + 1);
}

#[test]
fn bench_reports_are_self_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = firefly(
        &[
            "bench",
            "--suite",
            "paper",
            "--replicates",
            "6",
            "--base-seed",
            "4",
            "--out",
        ]
        .iter()
        .copied()
        .chain([dir.path().to_str().unwrap()])
        .collect::<Vec<_>>(),
    );
    assert_eq!(stdout(&out).lines().count(), PAPER_EXPERIMENTS.len());
    check_report_files(dir.path());
}

#[test]
fn bench_csv_matches_json() {
    let json_dir = tempfile::tempdir().unwrap();
    let csv_dir = tempfile::tempdir().unwrap();
    for (dir, format) in [(&json_dir, "json"), (&csv_dir, "csv")] {
        stdout(&firefly(&[
            "bench",
            "--replicates",
            "5",
            "--base-seed",
            "2",
            "--format",
            format,
            "--out",
            dir.path().to_str().unwrap(),
        ]));
    }
    for name in PAPER_EXPERIMENTS {
        let report: ExperimentReport = serde_json::from_str(
            &fs::read_to_string(json_dir.path().join(format!("{name}.json"))).unwrap(),
        )
        .unwrap();
        let mut reader =
            csv::Reader::from_path(csv_dir.path().join(format!("{name}.csv"))).unwrap();
        let headers = reader.headers().unwrap().clone();
        let col = |h: &str| headers.iter().position(|x| x == h).unwrap();
        let records: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert_eq!(records.len(), report.rows.len());
        for (rec, row) in records.iter().zip(&report.rows) {
            assert_eq!(rec[col("seed")].parse::<u64>().unwrap(), row.seed);
            let v: f64 = rec[col("best_value")].parse().unwrap();
            assert_eq!(v.to_bits(), row.best_value.to_bits());
            assert_eq!(rec[col("success")].parse::<bool>().unwrap(), row.success);
            assert_eq!(
                rec[col("evaluations")].parse::<u64>().unwrap(),
                row.evaluations
            );
            for (k, x) in row.best_position.iter().enumerate() {
                let got: f64 = rec[col(&format!("x{}", k + 1))].parse().unwrap();
                assert_eq!(got.to_bits(), x.to_bits());
            }
        }
    }
}

#[test]
fn vessel_command() {
    let out = firefly(&[
        "vessel",
        "--n",
        "20",
        "--iters",
        "10",
        "--replicates",
        "3",
        "--base-seed",
        "7",
    ]);
    let report: ExperimentReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.rows.len(), 3);
    assert_eq!(report.config.params.population, 20);
    assert!(report.rows.iter().all(|r| r.cost.is_some()));

    let snapped = firefly(&[
        "vessel",
        "--n",
        "20",
        "--iters",
        "10",
        "--replicates",
        "3",
        "--base-seed",
        "7",
        "--snap-thickness",
    ]);
    let snapped: ExperimentReport = serde_json::from_str(&stdout(&snapped)).unwrap();
    for row in &snapped.rows {
        // the run is the same; only the judged design differs
        let plain = &report.rows[row.replicate as usize];
        assert_eq!(row.best_value, plain.best_value);
        assert!(row.cost.unwrap() >= plain.cost.unwrap());
    }
}

#[test]
fn landscape_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("fp.csv");
    stdout(&firefly(&[
        "landscape",
        "--function",
        "four_peak",
        "--resolution",
        "21",
        "--seed",
        "0",
        "--out",
        csv_path.to_str().unwrap(),
    ]));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["x", "y", "f"]);
    assert_eq!(reader.records().count(), 21 * 21);

    let json_path = dir.path().join("sg.json");
    stdout(&firefly(&[
        "landscape",
        "--function",
        "stochastic_grid",
        "--resolution",
        "11",
        "--seed",
        "9",
        "--format",
        "json",
        "--out",
        json_path.to_str().unwrap(),
    ]));
    let grid: Landscape = serde_json::from_str(&fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(grid.rows.len(), 121);
    assert_eq!(grid.aggregates.realization_seed, Some(9));
}
