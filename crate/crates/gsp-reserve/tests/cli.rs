//! End-to-end tests of the `gsp` binary: files it emits, provenance
//! verification, determinism across reruns, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

use gsp_reserve::auction::{AuctionConfig, RankingRule};
use gsp_reserve::harness::{ExperimentConfig, ValuationDist};
use tempfile::TempDir;

fn gsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsp"))
        .args(args)
        .output()
        .expect("failed to spawn gsp")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("process killed by signal")
}

/// A small, fast experiment: uniform valuations, two slots.
fn small_config(master_seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        auction: AuctionConfig::new(3, 2, vec![1.0, 0.5], vec![1.0; 3], RankingRule::RankByBid)
            .unwrap(),
        valuation_dist: ValuationDist::Uniform { lo: 0.0, hi: 1.0 },
        n_train: 120,
        n_test: 80,
        master_seed,
        equilibrium_grid_n: 300,
    }
}

fn write_config(dir: &Path, cfg: &ExperimentConfig) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn simulate_writes_verifiable_dataset_and_is_deterministic() {
    let dir_a = TempDir::new().unwrap();
    let dir_b = TempDir::new().unwrap();
    let cfg_path = write_config(dir_a.path(), &small_config(5));

    let out_a = dir_a.path().join("out");
    let out_b = dir_b.path().join("out");
    for out in [&out_a, &out_a, &out_b] {
        let result = gsp(&[
            "simulate",
            "--config",
            &cfg_path,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&result), 0, "{result:?}");
    }
    let csv_a = std::fs::read(out_a.join("train.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("train.csv")).unwrap();
    assert_eq!(
        csv_a, csv_b,
        "simulate must be byte-identical across reruns"
    );
    assert!(out_a.join("train.meta.json").exists());

    // The emitted dataset round-trips through provenance verification.
    let learn = gsp(&[
        "learn",
        "--method",
        "sweep",
        "--config",
        &cfg_path,
        "--data",
        out_a.join("train.csv").to_str().unwrap(),
        "--out",
        out_a.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&learn), 0, "{learn:?}");
    assert!(out_a.join("discriminative.json").exists());
}

#[test]
fn tampered_dataset_is_rejected_with_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg_path = write_config(dir.path(), &small_config(6));
    let out = dir.path().join("out");
    let result = gsp(&[
        "simulate",
        "--config",
        &cfg_path,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 0);

    // Flip one bid in the CSV without touching the sidecar.
    let csv_path = out.join("train.csv");
    let mut text = std::fs::read_to_string(&csv_path).unwrap();
    let line_end = text.find('\n').unwrap() + 1;
    let second_line_end = text[line_end..].find('\n').unwrap() + line_end;
    let row = text[line_end..second_line_end].to_owned();
    let tampered = format!("{},9.9", row.rsplit_once(',').unwrap().0);
    text.replace_range(line_end..second_line_end, &tampered);
    std::fs::write(&csv_path, text).unwrap();

    let learn = gsp(&[
        "learn",
        "--method",
        "sweep",
        "--config",
        &cfg_path,
        "--data",
        csv_path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&learn), 2, "{learn:?}");
    let stderr = String::from_utf8_lossy(&learn.stderr);
    assert!(stderr.contains("provenance"), "stderr: {stderr}");
}

#[test]
fn invalid_config_exits_2() {
    let dir = TempDir::new().unwrap();
    let bogus = dir.path().join("bogus.json");
    std::fs::write(&bogus, "{\"not\": \"a config\"}").unwrap();
    let result = gsp(&[
        "simulate",
        "--config",
        bogus.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 2, "{result:?}");

    // Structurally valid JSON failing validation (increasing factors).
    let mut cfg = small_config(1);
    cfg.auction.position_factors = vec![0.5, 1.0];
    let path = write_config(dir.path(), &cfg);
    let result = gsp(&[
        "simulate",
        "--config",
        &path,
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 2, "{result:?}");
}

#[test]
fn density_learner_without_root_exits_3_but_writes_record() {
    let dir = TempDir::new().unwrap();
    // Valuations concentrated far from zero: r f(r) > 1 − F(r) everywhere,
    // so the fixed point has no root and the estimate is a flagged fallback.
    let cfg = ExperimentConfig {
        auction: AuctionConfig::new(2, 1, vec![1.0], vec![1.0; 2], RankingRule::RankByBid).unwrap(),
        valuation_dist: ValuationDist::Uniform {
            lo: 10.0,
            hi: 10.01,
        },
        n_train: 200,
        n_test: 100,
        master_seed: 5,
        equilibrium_grid_n: 500,
    };
    let cfg_path = write_config(dir.path(), &cfg);
    let out = dir.path().join("out");
    let result = gsp(&[
        "learn",
        "--method",
        "density",
        "--config",
        &cfg_path,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&result), 3, "{result:?}");
    let record: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("density.json")).unwrap()).unwrap();
    assert_eq!(record["is_root"], serde_json::Value::Bool(false));
}

#[test]
fn experiment_subcommands_write_expected_files() {
    let dir = TempDir::new().unwrap();
    let cfg_path = write_config(dir.path(), &small_config(9));
    let out = dir.path().join("out");
    let out_str = out.to_str().unwrap().to_owned();

    let eq = gsp(&["equilibrium", "--config", &cfg_path, "--out", &out_str]);
    assert_eq!(exit_code(&eq), 0, "{eq:?}");
    assert!(out.join("bid_function.csv").exists());

    let conv = gsp(&[
        "convergence",
        "--config",
        &cfg_path,
        "--out",
        &out_str,
        "--n-list",
        "50,100",
        "--reps",
        "2",
    ]);
    assert_eq!(exit_code(&conv), 0, "{conv:?}");
    assert!(out.join("convergence.csv").exists());
    assert!(out.join("convergence_summary.json").exists());

    let t1 = gsp(&["table1", "--config", &cfg_path, "--out", &out_str]);
    assert_eq!(exit_code(&t1), 0, "{t1:?}");
    assert!(out.join("table1.json").exists());
    assert!(out.join("table1.csv").exists());

    let hist = gsp(&["histograms", "--config", &cfg_path, "--out", &out_str]);
    assert_eq!(exit_code(&hist), 0, "{hist:?}");
    for file in [
        "true_valuations.csv",
        "sne_valuations.csv",
        "density_valuations.csv",
        "histograms_summary.json",
    ] {
        assert!(out.join(file).exists(), "missing {file}");
    }

    // Rerunning the heaviest driver reproduces its outputs byte for byte.
    let first = std::fs::read(out.join("table1.json")).unwrap();
    let rerun = gsp(&["table1", "--config", &cfg_path, "--out", &out_str]);
    assert_eq!(exit_code(&rerun), 0);
    assert_eq!(first, std::fs::read(out.join("table1.json")).unwrap());
}

#[test]
fn seed_flag_overrides_config_seed() {
    let dir = TempDir::new().unwrap();
    let cfg_path = write_config(dir.path(), &small_config(5));
    let out1 = dir.path().join("a");
    let out2 = dir.path().join("b");
    let out3 = dir.path().join("c");
    for (out, seed) in [(&out1, "1"), (&out2, "2"), (&out3, "1")] {
        let result = gsp(&[
            "simulate",
            "--config",
            &cfg_path,
            "--seed",
            seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&result), 0, "{result:?}");
    }
    let a = std::fs::read(out1.join("train.csv")).unwrap();
    let b = std::fs::read(out2.join("train.csv")).unwrap();
    let c = std::fs::read(out3.join("train.csv")).unwrap();
    assert_ne!(a, b, "different seeds must produce different data");
    assert_eq!(a, c, "equal seeds must produce identical data");
}
