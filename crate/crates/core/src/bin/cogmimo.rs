use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cogmimo::harness::{
    cmd_analyze, cmd_coherence, cmd_plan, cmd_simulate, cmd_validate, db_grid, parse_scenario, CoherenceCase,
    CurveTable,
};
use cogmimo::{Error, Result, ScenarioConfig};

#[derive(Parser)]
#[command(name = "cogmimo", version, about = "Two-stage ZF detection: closed-form analysis, simulation and planning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form stage CDFs and outage curves.
    Analyze(CurveArgs),
    /// Monte Carlo curves with the same columns as `analyze`.
    Simulate(CurveArgs),
    /// Sup-norm gap between `analyze` and `simulate`; exit 1 on breach.
    Validate(CurveArgs),
    /// Optimal secondary admission over an (N, alpha) grid.
    Plan(PlanArgs),
    /// Coherence time over an (M, N, a) grid.
    Coherence(CoherenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct CurveArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    gamma_min_db: f64,
    #[arg(long, default_value_t = 30.0, allow_negative_numbers = true)]
    gamma_max_db: f64,
    #[arg(long, default_value_t = 41)]
    points: usize,
    #[arg(long, default_value_t = 0.015)]
    tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct PlanArgs {
    /// Scenario supplying M1 (overridden by --m1).
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128,256,512")]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.9999,0.8,0.6")]
    alpha_list: Vec<f64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct CoherenceArgs {
    /// Scenario supplying M, N, a and gamma_th when the lists are omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    m_list: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    alpha_list: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_th_db: Option<f64>,
    #[command(flatten)]
    output: Output,
}

fn emit(output: &Output, csv: String, json: String) -> Result<()> {
    let text = match output.format {
        Format::Csv => csv,
        Format::Json => json + "\n",
    };
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_table(output: &Output, table: &CurveTable) -> Result<()> {
    emit(output, table.to_csv(), table.to_json())
}

fn optional_config(path: &Option<PathBuf>) -> Result<Option<ScenarioConfig>> {
    path.as_ref().map(parse_scenario).transpose()
}

fn or_default<T: Clone>(list: &[T], fallback: Option<T>, name: &str) -> Result<Vec<T>> {
    if !list.is_empty() {
        return Ok(list.to_vec());
    }
    fallback.map(|v| vec![v]).ok_or_else(|| Error::Config(format!("--{name} or --config required")))
}

/// Returns whether validation passed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Analyze(a) => {
            let cfg = parse_scenario(&a.config)?;
            emit_table(&a.output, &cmd_analyze(&cfg, &db_grid(a.gamma_min_db, a.gamma_max_db, a.points)?)?)?;
            Ok(true)
        }
        Command::Simulate(a) => {
            let cfg = parse_scenario(&a.config)?;
            emit_table(&a.output, &cmd_simulate(&cfg, &db_grid(a.gamma_min_db, a.gamma_max_db, a.points)?)?)?;
            Ok(true)
        }
        Command::Validate(a) => {
            let cfg = parse_scenario(&a.config)?;
            let grid = db_grid(a.gamma_min_db, a.gamma_max_db, a.points)?;
            let report = cmd_validate(&cfg, &grid, a.tolerance)?;
            emit(&a.output, report.to_csv(), report.to_json())?;
            if let Some(w) = report.worst() {
                eprintln!("worst curve {}: sup-norm {:.5} (tolerance {})", w.curve, w.sup_norm, a.tolerance);
            }
            Ok(report.passed)
        }
        Command::Plan(p) => {
            let cfg = optional_config(&p.config)?;
            let m1 = p.m1.or(cfg.map(|c| c.m1)).unwrap_or(10);
            emit_table(&p.output, &cmd_plan(&p.n_list, m1, &p.alpha_list)?)?;
            Ok(true)
        }
        Command::Coherence(c) => {
            let cfg = optional_config(&c.config)?;
            let m = or_default(&c.m_list, cfg.as_ref().map(|k| k.total_streams()), "m-list")?;
            let n = or_default(&c.n_list, cfg.as_ref().map(|k| k.n_rx), "n-list")?;
            let a = or_default(&c.alpha_list, cfg.as_ref().map(|k| k.alpha), "alpha-list")?;
            let gamma = match (c.gamma_th_db, &cfg) {
                (Some(db), _) => cogmimo::numerics::db_to_linear(db),
                (None, Some(k)) => k.gamma_th,
                (None, None) => 1.0,
            };
            emit_table(&c.output, &cmd_coherence(&CoherenceCase::grid(&m, &n, &a, gamma))?)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
