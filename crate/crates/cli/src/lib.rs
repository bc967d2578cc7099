//! `tailavg` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or estimation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use tailavg::io::{
    emit_plot_csv, emit_report, emit_study_csv, emit_study_json, ingest, plot_survival_fit, Column, Format,
    Ingested, IoError, Report, StudyRow,
};
use tailavg::{estimate, histogram_data, run_study, run_study_serial, DistributionSpec, Method, StudyConfig, ThresholdGrid};

#[derive(Debug, Parser)]
#[command(name = "tailavg", version, about = "Tail index estimation by model averaging over candidate thresholds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the tail index of a data file.
    Estimate(EstimateArgs),
    /// Run a Monte Carlo study on simulated samples.
    Simulate(SimulateArgs),
    /// Print the candidate weight table for a data file.
    Weights(WeightsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Pareto,
    Regression,
    Gpd,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Pareto => Method::Pareto,
            MethodArg::Regression => Method::Regression,
            MethodArg::Gpd => Method::Gpd,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Stable,
    T,
    Gpd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Data file: one value per line, or delimited text with --column.
    #[arg(long)]
    input: PathBuf,
    /// Column name (header) or zero-based index for delimited input.
    #[arg(long)]
    column: Option<String>,
    /// Take absolute values before estimation.
    #[arg(long = "abs")]
    take_abs: bool,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 50)]
    kmin: usize,
    #[arg(long, default_value_t = 500)]
    kmax: usize,
    #[arg(long, default_value_t = 1)]
    stride: usize,
}

impl GridArgs {
    fn grid(&self) -> ThresholdGrid {
        ThresholdGrid {
            k_min: self.kmin,
            k_max: self.kmax,
            stride: self.stride,
        }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Directory for survival_fit.csv and qq.csv.
    #[arg(long)]
    plots: Option<PathBuf>,
    /// Seed recorded in the report metadata.
    #[arg(long, env = "TAILAVG_SEED")]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct WeightsArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "pareto")]
    method: MethodArg,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Stable index.
    #[arg(long)]
    alpha: Option<f64>,
    /// Student-t degrees of freedom.
    #[arg(long)]
    nu: Option<f64>,
    /// GPD shape.
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Location; defaults to 0 for stable and t, 1 for GPD.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    reps: usize,
    #[arg(long, env = "TAILAVG_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the CSV table row here instead of standard output.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Write the full study result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write a histogram of the per-replicate estimates as CSV.
    #[arg(long)]
    hist: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    bins: usize,
    /// Run replicates on one thread.
    #[arg(long)]
    serial: bool,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<tailavg::Error> for Failure {
    fn from(e: tailavg::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn load(args: &InputArgs) -> Result<Ingested, Failure> {
    let column = args.column.as_deref().map(|c| c.parse::<Column>().unwrap());
    Ok(ingest(&args.input, column.as_ref(), args.take_abs)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn cmd_estimate(a: &EstimateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let data = load(&a.input)?;
    let grid = a.grid.grid();
    let run = estimate(&data.sample, &grid, a.method.into())?;
    let report = Report::new(&run, grid, data.sample.len(), data.sample.abs_applied(), data.digest, a.seed);
    let format = match a.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let bytes = emit_report(&report, format);
    if let Some(dir) = &a.plots {
        std::fs::create_dir_all(dir)?;
        let (survival, qq) = plot_survival_fit(&data.sample, &run.estimate)?;
        write_file(&dir.join("survival_fit.csv"), &emit_plot_csv(&survival))?;
        write_file(&dir.join("qq.csv"), &emit_plot_csv(&qq))?;
    }
    match &a.report {
        Some(path) => {
            write_file(path, &bytes)?;
            let e = run.estimate;
            writeln!(
                out,
                "method={} alpha={:.4} xi={:.4} threshold={:.4} m_eff={} candidates={} skipped={}",
                e.method,
                e.alpha_bar,
                e.xi_bar,
                e.threshold_bar,
                e.m_eff,
                run.fits.len(),
                run.weights.skipped.len()
            )?;
        }
        None => out.write_all(&bytes)?,
    }
    Ok(())
}

fn cmd_weights(a: &WeightsArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let data = load(&a.input)?;
    let run = estimate(&data.sample, &a.grid.grid(), a.method.into())?;
    writeln!(out, "m,threshold,alpha,criterion,weight")?;
    for (f, w) in run.fits.iter().zip(&run.weights.entries) {
        writeln!(
            out,
            "{},{},{},{},{}",
            f.m,
            tailavg::io::fmt_real(f.threshold),
            tailavg::io::fmt_real(f.alpha_hat),
            tailavg::io::fmt_real(w.criterion),
            tailavg::io::fmt_real(w.weight)
        )?;
    }
    for s in &run.weights.skipped {
        writeln!(err, "skipped m={} ({})", s.m, s.reason)?;
    }
    Ok(())
}

fn spec_from(a: &SimulateArgs) -> Result<DistributionSpec, Failure> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("--family needs --{flag}")));
    Ok(match a.family {
        FamilyArg::Stable => DistributionSpec::stable(need(a.alpha, "alpha")?, a.sigma, a.mu.unwrap_or(0.0)),
        FamilyArg::T => DistributionSpec::student_t(need(a.nu, "nu")?, a.sigma, a.mu.unwrap_or(0.0)),
        FamilyArg::Gpd => DistributionSpec::gpd(need(a.xi, "xi")?, a.sigma, a.mu.unwrap_or(1.0)),
    })
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = spec_from(a)?;
    let mut cfg = StudyConfig::new(spec, a.n, a.reps, a.method.into(), a.seed);
    cfg.grid = a.grid.grid();
    let result = if a.serial {
        run_study_serial(&cfg)?
    } else {
        run_study(&cfg)?
    };
    let table = emit_study_csv(&[StudyRow::new(&cfg, &result)]);
    match &a.table {
        Some(path) => {
            write_file(path, &table)?;
            writeln!(
                out,
                "mean_alpha={:.4} bias={:.4} mse={:.4} threshold={:.4} failures={}",
                result.mean_alpha, result.bias, result.mse, result.mean_threshold, result.failures
            )?;
        }
        None => out.write_all(&table)?,
    }
    if let Some(path) = &a.json {
        write_file(path, &emit_study_json(&cfg, &result))?;
    }
    if let Some(path) = &a.hist {
        let mut text = String::from("bin_center,count\n");
        for (c, n) in histogram_data(&result, a.bins)? {
            text.push_str(&format!("{},{n}\n", tailavg::io::fmt_real(c)));
        }
        write_file(path, text.as_bytes())?;
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name), writing to the given streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let res = match &cli.command {
        Command::Estimate(a) => cmd_estimate(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
        Command::Weights(a) => cmd_weights(a, out, err),
    };
    match res {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Runs the CLI against the process's standard streams.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}
