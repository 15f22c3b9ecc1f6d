use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use cavres::error::{CavresError, Result};
use cavres::statedyn::SystemParams;
use cavres::sweep::{
    render_rows, run_figure, run_sweep, FigurePreset, GridKind, OutputFormat, SweepConfig,
};
use cavres::transitions::{transition_report, Partition};
use cavres::validate::{run_validate, ValidationSummary};

#[derive(Parser)]
#[command(name = "cavres", version, about = "Correlation transfer between entangled cavity modes and their reservoirs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep correlations over a time grid and write CSV/JSON rows.
    Sweep(SweepArgs),
    /// Reproduce a published dataset (fig1..fig4) with hard-coded parameters.
    Figure(FigureArgs),
    /// Closed-form and curve-detected transition times as JSON.
    Transitions(TransitionsArgs),
    /// Randomized invariant suite; exit code 1 on any failure.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    /// End of the grid in units of gamma t.
    #[arg(long)]
    tmax: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// linear | logstart
    #[arg(long)]
    grid: Option<String>,
    /// Comma-separated subset of {cc, rr}.
    #[arg(long)]
    partitions: Option<String>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct FigureArgs {
    /// fig1 | fig2 | fig3 | fig4
    figure: String,
    /// csv | json (fig2 is always CSV: it has its own element schema)
    #[arg(long)]
    format: Option<String>,
    /// Output basename; dataset tags are inserted before the extension.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TransitionsArgs {
    #[arg(long)]
    nbar: f64,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Grid points for curve detection.
    #[arg(long, default_value_t = 2000)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Where to write the JSON report (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

/// File-backed defaults for `sweep`; flags override.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    nbar: Option<f64>,
    p: Option<f64>,
    gamma: Option<f64>,
    tmax: Option<f64>,
    points: Option<usize>,
    grid: Option<String>,
    partitions: Option<String>,
    format: Option<String>,
    out: Option<PathBuf>,
}

fn parse_grid(s: &str) -> Result<GridKind> {
    match s {
        "linear" => Ok(GridKind::Linear),
        "logstart" => Ok(GridKind::LogDenseStart),
        other => Err(CavresError::Usage(format!(
            "unknown grid '{other}', expected linear|logstart"
        ))),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CavresError::Usage(format!(
            "unknown format '{other}', expected csv|json"
        ))),
    }
}

fn parse_partitions(s: &str) -> Result<Vec<Partition>> {
    let mut parts = Vec::new();
    for token in s.split(',') {
        match token.trim() {
            "cc" | "cavities" => parts.push(Partition::Cavities),
            "rr" | "reservoirs" => parts.push(Partition::Reservoirs),
            other => {
                return Err(CavresError::Usage(format!(
                    "unknown partition '{other}', expected cc|rr"
                )))
            }
        }
    }
    Ok(parts)
}

fn emit(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn tagged_path(base: &Path, tag: &str) -> PathBuf {
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("figure");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    base.with_file_name(format!("{stem}_{tag}.{ext}"))
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let file: FileConfig = match &args.config {
        Some(path) => serde_json::from_str(&fs::read_to_string(path)?)
            .map_err(|e| CavresError::Usage(format!("config file: {e}")))?,
        None => FileConfig::default(),
    };
    let nbar = args.nbar.or(file.nbar).ok_or_else(|| CavresError::Usage("--nbar required".into()))?;
    let p = args.p.or(file.p).ok_or_else(|| CavresError::Usage("--p required".into()))?;
    let gamma = args.gamma.or(file.gamma).unwrap_or(1.0);
    let config = SweepConfig {
        params: SystemParams::new(nbar, p, gamma).map_err(|e| CavresError::Usage(e.to_string()))?,
        t_max_gamma: args.tmax.or(file.tmax).unwrap_or(15.0),
        n_points: args.points.or(file.points).unwrap_or(1500),
        grid_kind: parse_grid(args.grid.as_deref().or(file.grid.as_deref()).unwrap_or("linear"))?,
        partitions: parse_partitions(
            args.partitions.as_deref().or(file.partitions.as_deref()).unwrap_or("cc,rr"),
        )?,
        output_format: parse_format(
            args.format.as_deref().or(file.format.as_deref()).unwrap_or("csv"),
        )?,
    };
    let rows = run_sweep(&config)?;
    let content = render_rows(&rows, config.output_format)?;
    emit(&args.out.clone().or(file.out), &content)
}

fn cmd_figure(args: &FigureArgs) -> Result<()> {
    let preset: FigurePreset = args.figure.parse()?;
    let format = parse_format(args.format.as_deref().unwrap_or("csv"))?;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let base = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", args.figure)));
    for file in run_figure(preset, format)? {
        let path = tagged_path(&base, &file.tag);
        fs::write(&path, &file.content)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn round_numbers(value: &mut serde_json::Value) {
    match value {
        serde_json::Value::Number(n) => {
            if let Some(x) = n.as_f64() {
                if let Some(rounded) = serde_json::Number::from_f64(cavres::sweep::round_sig(x)) {
                    *value = serde_json::Value::Number(rounded);
                }
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_numbers),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

fn cmd_transitions(args: &TransitionsArgs) -> Result<()> {
    let params = SystemParams::new(args.nbar, args.p, args.gamma)
        .map_err(|e| CavresError::Usage(e.to_string()))?;
    let report = transition_report(&params, args.points)?;
    let mut value = serde_json::to_value(&report)?;
    round_numbers(&mut value);
    let mut content = serde_json::to_string_pretty(&value)?;
    content.push('\n');
    emit(&args.out, &content)
}

fn cmd_validate(args: &ValidateArgs) -> Result<ValidationSummary> {
    let summary = run_validate(args.seed, args.cases)?;
    let mut content = serde_json::to_string_pretty(&summary)?;
    content.push('\n');
    emit(&args.out, &content)?;
    if args.out.is_some() {
        println!("{}/{} cases passed", summary.passed, summary.cases);
    }
    Ok(summary)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(args) => cmd_sweep(args).map(|_| true),
        Command::Figure(args) => cmd_figure(args).map(|_| true),
        Command::Transitions(args) => cmd_transitions(args).map(|_| true),
        Command::Validate(args) => cmd_validate(args).map(|s| s.all_passed()),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(CavresError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
