use std::path::Path;
use std::process::Command;

use tailavg::io::{fmt_real, parse_report, Format};
use tailavg::sampling::sample_gpd;
use tailavg::{DistributionSpec, SeededStream};
use tailavg_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("tailavg").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write_gpd_file(path: &Path, n: usize) {
    let xs = sample_gpd(&DistributionSpec::gpd(0.7, 1.0, 1.0), n, SeededStream::new(3, 0)).unwrap();
    let text: String = xs.iter().map(|x| fmt_real(*x) + "\n").collect();
    std::fs::write(path, text).unwrap();
}

#[test]
fn estimate_writes_report_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    write_gpd_file(&input, 1500);
    let report = dir.path().join("r.json");
    let plots = dir.path().join("plots");
    let (code, out, err) = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "pareto",
        "--report",
        report.to_str().unwrap(),
        "--plots",
        plots.to_str().unwrap(),
        "--seed",
        "11",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("method=pareto alpha="));
    let r = parse_report(&std::fs::read(&report).unwrap(), Format::Json).unwrap();
    assert_eq!(r.metadata.seed, Some(11));
    assert_eq!(r.metadata.n, 1500);
    assert_eq!(r.candidates.len(), 451);
    assert!((r.weighted.alpha - 1.0 / 0.7).abs() < 0.3);
    let survival = std::fs::read_to_string(plots.join("survival_fit.csv")).unwrap();
    assert!(survival.starts_with("x,observed,fitted\n"));
    assert_eq!(survival.lines().count(), r.weighted.m_eff + 1);
    assert!(plots.join("qq.csv").exists());
}

#[test]
fn estimate_csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    write_gpd_file(&input, 800);
    let (code, out, _) = run(&[
        "estimate",
        "--input",
        input.to_str().unwrap(),
        "--method",
        "regression",
        "--kmin",
        "20",
        "--kmax",
        "300",
        "--stride",
        "10",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let r = parse_report(out.as_bytes(), Format::Csv).unwrap();
    assert_eq!(r.candidates.len(), 29);
    assert_eq!(r.metadata.seed, None);
}

#[test]
fn weights_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    write_gpd_file(&input, 800);
    let (code, out, _) = run(&["weights", "--input", input.to_str().unwrap(), "--kmin", "10", "--kmax", "20"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "m,threshold,alpha,criterion,weight");
    assert_eq!(lines.len(), 12);
    let sum: f64 = lines[1..].iter().map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap()).sum();
    assert!((sum - 1.0).abs() < 1e-9);
}

#[test]
fn usage_errors_exit_one() {
    let (code, out, err) = run(&["estimate", "--method", "pareto"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("--input"), "{err}");
    assert_eq!(run(&[]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["simulate", "--family", "stable", "--n", "1000", "--reps", "2", "--method", "pareto"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.txt");
    std::fs::write(&input, "1\nabc\n").unwrap();
    let (code, _, err) = run(&["estimate", "--input", input.to_str().unwrap(), "--method", "pareto"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let missing = dir.path().join("missing.txt");
    assert_eq!(run(&["estimate", "--input", missing.to_str().unwrap(), "--method", "gpd"]).0, 2);
    // grid larger than the sample
    std::fs::write(&input, "1\n2\n3\n4\n").unwrap();
    assert_eq!(run(&["estimate", "--input", input.to_str().unwrap(), "--method", "pareto"]).0, 2);
}

#[test]
fn simulate_table_json_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("s.json");
    let hist = dir.path().join("h.csv");
    let args = [
        "simulate", "--family", "t", "--nu", "3", "--n", "1200", "--reps", "12", "--seed", "5", "--method", "pareto",
        "--kmin", "30", "--kmax", "300", "--stride", "5", "--json", json.to_str().unwrap(), "--hist",
        hist.to_str().unwrap(), "--bins", "4",
    ];
    let (code, out, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("family,params,n,method,est_threshold,mse,bias"));
    assert!(lines.next().unwrap().starts_with("t,nu=3;sigma=1;mu=0,1200,pareto,"));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&json).unwrap()).unwrap();
    assert_eq!(doc["result"]["per_replicate_alphas"].as_array().unwrap().len(), 12);
    let h = std::fs::read_to_string(&hist).unwrap();
    let total: usize = h.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap()).sum();
    assert_eq!(total, 12);
}

#[test]
fn seed_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("x.txt");
    write_gpd_file(&input, 700);
    let bin = env!("CARGO_BIN_EXE_tailavg");
    let base = ["estimate", "--input", input.to_str().unwrap(), "--method", "pareto", "--kmin", "20", "--kmax", "200"];
    let out = Command::new(bin).args(base).env("TAILAVG_SEED", "42").output().unwrap();
    assert!(out.status.success());
    let r = parse_report(&out.stdout, Format::Json).unwrap();
    assert_eq!(r.metadata.seed, Some(42));
    let out = Command::new(bin).args(base).args(["--seed", "3"]).env("TAILAVG_SEED", "42").output().unwrap();
    assert_eq!(parse_report(&out.stdout, Format::Json).unwrap().metadata.seed, Some(3));
    let out = Command::new(bin).args(["estimate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
