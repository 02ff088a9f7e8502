//! `umedian` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 solver failure,
//! 4 internal error.

mod data;
mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use umedian::asymptotics::{estimator_limit_law, g_prime};
use umedian::montecarlo::{run, run_with_threads};
use umedian::report::{bias_table_csv, fixed6, simulation_csv, simulation_json, to_json};
use umedian::{
    estimate_hampel, estimate_optimal, max_bias, sigma2_umed, umed, ContaminationPoint, HampelConfig, LimitLaw,
    ParametricFamily, PoissonFamily, SimulationConfig, UmedResult,
};

use crate::output::{emit, Format, Table};

#[derive(Debug, Parser)]
#[command(name = "umedian", version, about = "Minimum gross-error-sensitivity estimation via the uniform median")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Uniform median of a model distribution or of a data file.
    Umed(UmedArgs),
    /// Estimate the parameter from a data file.
    Estimate(EstimateArgs),
    /// Limit law of the estimator at one or more parameter values.
    Asympt(AsymptArgs),
    /// Maximum asymptotic bias under point contamination.
    BiasTable(BiasTableArgs),
    /// Asymptotic efficiency relative to maximum likelihood.
    EfficiencyTable(EfficiencyTableArgs),
    /// Run a Monte Carlo study described by a TOML file.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Poisson,
}

impl Family {
    fn model(self) -> PoissonFamily {
        match self {
            Family::Poisson => PoissonFamily::new(),
        }
    }
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct UmedArgs {
    #[arg(long, value_enum, default_value_t = Family::Poisson)]
    family: Family,
    #[arg(long, conflicts_with = "data", required_unless_present = "data")]
    theta: Option<f64>,
    /// One nonnegative integer per line, or `k,count` pairs.
    #[arg(long)]
    data: Option<PathBuf>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Optimal,
    Hampel,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, value_enum, default_value_t = Family::Poisson)]
    family: Family,
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Optimal)]
    method: Method,
    /// Truncation level of the Hampel estimator.
    #[arg(long, required_if_eq("method", "hampel"))]
    m: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct AsymptArgs {
    #[arg(long, value_enum, default_value_t = Family::Poisson)]
    family: Family,
    #[arg(long, required = true, value_delimiter = ',')]
    theta: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct BiasTableArgs {
    #[arg(long, value_enum, default_value_t = Family::Poisson)]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 20.0])]
    lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2])]
    epsilons: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct EfficiencyTableArgs {
    #[arg(long, value_enum, default_value_t = Family::Poisson)]
    family: Family,
    #[arg(long, value_delimiter = ',', default_values_t = [5.0, 10.0, 20.0])]
    lambdas: Vec<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// TOML study description.
    #[arg(long, required_unless_present = "print_default_config")]
    config: Option<PathBuf>,
    /// Directory for the output files; standard output if absent.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads; defaults to one per core.
    #[arg(long, env = "UMED_THREADS", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Print the reference study configuration and exit.
    #[arg(long, conflicts_with_all = ["config", "out_dir"])]
    print_default_config: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<umedian::Error>() {
            return if e.is_internal() {
                4
            } else if e.is_solver_failure() {
                3
            } else {
                2
            };
        }
    }
    2
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Umed(a) => cmd_umed(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Asympt(a) => cmd_asympt(a),
        Command::BiasTable(a) => cmd_bias_table(a),
        Command::EfficiencyTable(a) => cmd_efficiency_table(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn umed_table(r: &UmedResult) -> Table {
    let mut t = Table::new(["value", "k0", "p0", "cdf_below", "cdf_at", "boundary"]);
    t.push(vec![
        fixed6(r.value),
        r.k0.to_string(),
        fixed6(r.p0),
        fixed6(r.cdf_below),
        fixed6(r.cdf_at),
        r.boundary.to_string(),
    ]);
    t
}

fn cmd_umed(a: UmedArgs) -> Result<()> {
    let r = match (&a.data, a.theta) {
        (Some(path), _) => umed(&data::read(path)?)?,
        (None, Some(theta)) => umed(&a.family.model().distribution(theta)?)?,
        (None, None) => bail!("one of --theta or --data is required"),
    };
    emit(&a.out, &umed_table(&r), &r)
}

#[derive(Debug, Serialize)]
struct EstimateOutput {
    method: &'static str,
    n: u64,
    theta_hat: f64,
    umed_target: f64,
    m: Option<f64>,
    iterations: usize,
}

fn cmd_estimate(a: EstimateArgs) -> Result<()> {
    let family = a.family.model();
    let sample = data::read(&a.data)?;
    let (method, fit, m) = match a.method {
        Method::Optimal => ("optimal", estimate_optimal(&sample, &family)?, None),
        Method::Hampel => {
            let m = a.m.context("--m is required with --method hampel")?;
            let cfg = HampelConfig::new(m)?;
            ("hampel", estimate_hampel(&sample, &family, &cfg)?, Some(m))
        }
    };
    let out = EstimateOutput {
        method,
        n: sample.n(),
        theta_hat: fit.theta_hat,
        umed_target: fit.umed_target,
        m,
        iterations: fit.iterations,
    };
    let mut t = Table::new(["method", "n", "theta_hat", "umed_target", "m"]);
    t.push(vec![
        method.to_owned(),
        out.n.to_string(),
        fixed6(out.theta_hat),
        fixed6(out.umed_target),
        m.map(fixed6).unwrap_or_default(),
    ]);
    emit(&a.out, &t, &out)
}

#[derive(Debug, Serialize)]
struct AsymptRow {
    theta: f64,
    umed: f64,
    k0: u64,
    boundary: bool,
    sigma2_umed: Option<f64>,
    g_prime: Option<f64>,
    variance: Option<f64>,
    efficiency: Option<f64>,
    left_scale: Option<f64>,
    right_scale: Option<f64>,
}

fn asympt_row(family: &PoissonFamily, theta: f64) -> Result<AsymptRow> {
    let dist = family.distribution(theta)?;
    let u = umed(&dist)?;
    let mut row = AsymptRow {
        theta,
        umed: u.value,
        k0: u.k0,
        boundary: u.boundary,
        sigma2_umed: None,
        g_prime: None,
        variance: None,
        efficiency: None,
        left_scale: None,
        right_scale: None,
    };
    match estimator_limit_law(family, theta)? {
        LimitLaw::Interior { variance } => {
            row.sigma2_umed = Some(sigma2_umed(&dist)?);
            row.g_prime = Some(g_prime(family, theta)?);
            row.variance = Some(variance);
            row.efficiency = Some(1.0 / family.fisher_information(theta) / variance);
        }
        LimitLaw::Boundary { left_scale, right_scale } => {
            row.left_scale = Some(left_scale);
            row.right_scale = Some(right_scale);
        }
    }
    Ok(row)
}

fn opt6(x: Option<f64>) -> String {
    x.map(fixed6).unwrap_or_default()
}

fn cmd_asympt(a: AsymptArgs) -> Result<()> {
    let family = a.family.model();
    let rows = a
        .theta
        .iter()
        .map(|&t| asympt_row(&family, t).with_context(|| format!("theta = {t}")))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new([
        "theta",
        "umed",
        "k0",
        "boundary",
        "sigma2_umed",
        "g_prime",
        "variance",
        "efficiency",
        "left_scale",
        "right_scale",
    ]);
    for r in &rows {
        t.push(vec![
            fixed6(r.theta),
            fixed6(r.umed),
            r.k0.to_string(),
            r.boundary.to_string(),
            opt6(r.sigma2_umed),
            opt6(r.g_prime),
            opt6(r.variance),
            opt6(r.efficiency),
            opt6(r.left_scale),
            opt6(r.right_scale),
        ]);
    }
    emit(&a.out, &t, &rows)
}

#[derive(Debug, Serialize)]
struct BiasRow {
    epsilon: f64,
    lambda: f64,
    max_bias: f64,
    argmax_x0: ContaminationPoint,
    grid_max_bias: f64,
    grid_argmax_x0: ContaminationPoint,
    bias_at_infinity: f64,
}

fn cmd_bias_table(a: BiasTableArgs) -> Result<()> {
    let family = a.family.model();
    let mut tables = Vec::new();
    for &eps in &a.epsilons {
        for &lambda in &a.lambdas {
            let mb = max_bias(&family, lambda, eps).with_context(|| format!("cell epsilon = {eps}, lambda = {lambda}"))?;
            tables.push(mb);
        }
    }
    let rows: Vec<BiasRow> = tables
        .iter()
        .map(|m| BiasRow {
            epsilon: m.epsilon,
            lambda: m.theta,
            max_bias: m.bias,
            argmax_x0: m.argmax,
            grid_max_bias: m.grid_bias,
            grid_argmax_x0: m.grid_argmax,
            bias_at_infinity: m.bias_at_infinity,
        })
        .collect();
    match a.out.format {
        Format::Csv => output::write(&a.out.output, &bias_table_csv(&tables)),
        Format::Json => output::write(&a.out.output, &to_json(&rows)),
    }
}

#[derive(Debug, Serialize)]
struct EfficiencyRow {
    lambda: f64,
    sigma2_umed: f64,
    g_prime: f64,
    variance: f64,
    mle_variance: f64,
    efficiency: f64,
}

fn cmd_efficiency_table(a: EfficiencyTableArgs) -> Result<()> {
    let family = a.family.model();
    let rows = a
        .lambdas
        .iter()
        .map(|&lambda| -> Result<EfficiencyRow> {
            let r = asympt_row(&family, lambda)?;
            let (Some(sigma2_umed), Some(g_prime), Some(variance), Some(efficiency)) =
                (r.sigma2_umed, r.g_prime, r.variance, r.efficiency)
            else {
                bail!("lambda = {lambda} is a boundary point; the limit law is not normal");
            };
            Ok(EfficiencyRow {
                lambda,
                sigma2_umed,
                g_prime,
                variance,
                mle_variance: 1.0 / family.fisher_information(lambda),
                efficiency,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(["lambda", "sigma2_umed", "g_prime", "variance", "mle_variance", "efficiency"]);
    for r in &rows {
        t.push(vec![
            fixed6(r.lambda),
            fixed6(r.sigma2_umed),
            fixed6(r.g_prime),
            fixed6(r.variance),
            fixed6(r.mle_variance),
            fixed6(r.efficiency),
        ]);
    }
    emit(&a.out, &t, &rows)
}

const CSV_FILES: [&str; 3] = ["records.csv", "efficiency.csv", "max_mse.csv"];

fn cmd_simulate(a: SimulateArgs) -> Result<()> {
    if a.print_default_config {
        print!("{}", SimulationConfig::reference_study().to_toml_string());
        return Ok(());
    }
    let path = a.config.as_deref().context("--config is required")?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let config = SimulationConfig::from_toml_str(&text).with_context(|| format!("config {}", path.display()))?;
    let result = match a.threads {
        Some(t) => run_with_threads(&config, usize::from(t))?,
        None => run(&config)?,
    };
    match (a.format, &a.out_dir) {
        (Format::Csv, None) => {
            let [records, efficiency, max_mse] = simulation_csv(&result);
            print!("{records}\n{efficiency}\n{max_mse}");
        }
        (Format::Json, None) => print!("{}", simulation_json(&result)),
        (Format::Csv, Some(dir)) => {
            create_dir(dir)?;
            for (name, body) in CSV_FILES.iter().zip(simulation_csv(&result)) {
                write_file(&dir.join(name), &body)?;
            }
        }
        (Format::Json, Some(dir)) => {
            create_dir(dir)?;
            write_file(&dir.join("result.json"), &simulation_json(&result))?;
        }
    }
    Ok(())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    Ok(())
}
