//! The `wearout` binary as a process: exit codes, written tables and
//! reproducibility of repeated runs.

use std::path::Path;
use std::process::{Command, Output};

use wearout_core::direct::{evaluate, NumericsConfig};
use wearout_core::Policy;

fn wearout(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wearout"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read_table(path: &Path) -> Vec<std::collections::HashMap<String, String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            let rec = rec.unwrap();
            header.iter().map(String::from).zip(rec.iter().map(String::from)).collect()
        })
        .collect()
}

#[test]
fn evaluate_writes_round_trippable_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = wearout(dir.path(), &["evaluate", "exp_decay_100", "--T", "29.3", "--c-k", "5"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let rows = read_table(&dir.path().join("evaluate.csv"));
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    assert_eq!(row["engine"], "direct");
    assert_eq!(row["N"], "");

    let cfg = wearout_cli::config::bundled_config("exp_decay_100").unwrap();
    let s = cfg.scenario.with_costs(cfg.scenario.costs.with_c_k(5.0));
    let e = evaluate(&s, &Policy::time(29.3), &NumericsConfig::default()).unwrap();
    let written: f64 = row["cost_rate"].parse().unwrap();
    assert_eq!(written.to_bits(), e.cost_rate.to_bits());
    let p_k: f64 = row["p_K"].parse().unwrap();
    assert_eq!(p_k.to_bits(), e.probabilities.p_k.to_bits());

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("evaluate.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "evaluate");
    assert_eq!(manifest["master_seed"], 1);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn exit_codes_follow_error_kind() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(code(&wearout(d, &["evaluate", "no_such_scenario", "--T", "1"])), 2);
    // Z above K(T)
    assert_eq!(code(&wearout(d, &["evaluate", "exp_decay_100", "--T", "30", "--N", "5", "--Z", "90"])), 2);
    assert_eq!(code(&wearout(d, &["evaluate", "exp_decay_100"])), 2);
    assert_eq!(code(&wearout(d, &["evaluate", "exp_decay_100", "--T", "-1"])), 2);
    assert_eq!(code(&wearout(d, &["evaluate", "exp_decay_100", "--T", "5", "--c-k", "0.5"])), 2);
    assert_eq!(
        code(&wearout(d, &["--engine", "direct", "evaluate", "lognormal_decay_150", "--T", "3"])),
        3
    );
    assert_eq!(
        code(&wearout(d, &["--engine", "direct", "evaluate", "exp_decay_100", "--T", "30", "--N", "5"])),
        3
    );
}

#[test]
fn malformed_scenario_reports_the_offending_path() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(
        &file,
        r#"{"schema":1,"label":"bad","inter_arrival":{"kind":"exponential","rate":-1},
            "damage":{"kind":"iid","dist":{"kind":"exponential","rate":1}},
            "strength":{"kind":"constant","K":10},"costs":{"c_T":1,"c_N":1,"c_Z":1,"c_K":5}}"#,
    )
    .unwrap();
    let o = wearout(dir.path(), &["evaluate", file.to_str().unwrap(), "--T", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("inter_arrival"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "--reps",
        "3000",
        "--search-reps",
        "500",
        "--seed",
        "9",
        "optimize",
        "dependent_exp_linear",
        "--vars",
        "TN",
    ];
    assert_eq!(code(&wearout(a.path(), &args)), 0);
    let b_out = wearout(b.path(), &["--threads", "2"].iter().chain(&args).copied().collect::<Vec<_>>());
    assert_eq!(code(&b_out), 0);
    for name in ["optimize.csv", "optimize_trace.csv"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }

    let dump = ["--seed", "4", "simulate-dump", "schedule_gamma_geometric", "--T", "5", "--N", "3"];
    assert_eq!(code(&wearout(a.path(), &dump)), 0);
    assert_eq!(code(&wearout(b.path(), &dump)), 0);
    let x = std::fs::read(a.path().join("simulate_dump.csv")).unwrap();
    assert_eq!(x, std::fs::read(b.path().join("simulate_dump.csv")).unwrap());
    assert!(read_table(&a.path().join("simulate_dump.csv")).len() > 1);
}

#[test]
fn config_file_overrides_optimizer_settings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"optimizer":{"bounds":{"T":[5,40]},"grid":{"coarse_points":8,"refine_factor":2,"passes":1}}}"#,
    )
    .unwrap();
    let o = wearout(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "optimize", "exp_decay_100", "--vars", "T"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace = read_table(&dir.path().join("optimize_trace.csv"));
    assert_eq!(trace.len(), 8);
    for row in trace {
        let t: f64 = row["T"].parse().unwrap();
        assert!((5.0..=40.0).contains(&t));
    }

    std::fs::write(&cfg, r#"{"optimizer":{"grid":{"coarse":8}}}"#).unwrap();
    let o = wearout(
        dir.path(),
        &["--config", cfg.to_str().unwrap(), "optimize", "exp_decay_100", "--vars", "T"],
    );
    assert_eq!(code(&o), 2);
}

#[test]
fn sweep_writes_one_row_per_failure_cost() {
    let dir = tempfile::tempdir().unwrap();
    let o = wearout(dir.path(), &["sweep", "exp_decay_100", "--var", "T", "--c-k", "2,4,8"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_table(&dir.path().join("sweep_T.csv"));
    assert_eq!(rows.len(), 3);
    let t: Vec<f64> = rows.iter().map(|r| r["T"].parse().unwrap()).collect();
    assert!(t[0] >= t[1] && t[1] >= t[2], "{t:?}");
}
