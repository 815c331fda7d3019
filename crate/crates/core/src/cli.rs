//! Command-line front end.
//!
//! Exit codes: 0 success, 1 reproduction mismatch, 2 input or config error,
//! 3 degenerate data (a class with no members).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::corrstats::{self, StatsError};
use crate::dataio::{self, DataError, Format, ReportDocument, ReportMetadata, SvgOptions};
use crate::qmodel::{QModelError, SimulationConfig};
use crate::reproduce;
use crate::sieve::{CurveKind, SieveError, SieveReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DEGENERATE: i32 = 3;

/// Environment variable consulted when `simulate` gets no `--seed`.
pub const SEED_ENV: &str = "LUCKMETER_SEED";

#[derive(Debug, Parser)]
#[command(name = "luckmeter", version, about = "Rank-threshold classifier evaluation under class imbalance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze a labeled ranking (CSV `id,score,label`) at every threshold
    Analyze(AnalyzeArgs),
    /// Correlation from hit rate, false-alarm rate and class sizes
    Eq1(Eq1Args),
    /// Fisher r-to-z confidence interval for a correlation
    Ci(CiArgs),
    /// Spearman correlation of paired CSV data (`id,x,y`)
    Spearman(PairedArgs),
    /// Pearson correlation of paired CSV data (`id,x,y`)
    Pearson(PairedArgs),
    /// Simulate Q-model careers, award prizes, and analyze the sieve
    Simulate(SimulateArgs),
    /// Recompute the published reference numbers and compare
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

impl From<ReportFormat> for Format {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Json => Format::Json,
            ReportFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Ranking CSV with header `id,score,label`
    #[arg(long, required_unless_present = "embedded_nobel", conflicts_with = "embedded_nobel")]
    input: Option<PathBuf>,
    /// Analyze the built-in Nobel sieve points instead of a file
    #[arg(long)]
    embedded_nobel: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Also write roc.svg, precision.svg and correlation.svg
    #[arg(long)]
    svg: bool,
}

#[derive(Debug, Args)]
struct Eq1Args {
    #[arg(long)]
    tpr: f64,
    #[arg(long)]
    fpr: f64,
    #[arg(long)]
    npos: u64,
    #[arg(long)]
    nneg: u64,
}

#[derive(Debug, Args)]
struct CiArgs {
    #[arg(long, allow_hyphen_values = true)]
    r: f64,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
}

#[derive(Debug, Args)]
struct PairedArgs {
    /// CSV with header `id,x,y`
    #[arg(long)]
    input: PathBuf,
    /// Also print a Fisher interval at this level
    #[arg(long)]
    level: Option<f64>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, env = SEED_ENV)]
    seed: Option<u64>,
    /// TOML file; keys mirror the simulation parameters
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TableFormat {
    Table,
    Json,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, value_enum, default_value = "table")]
    format: TableFormat,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Degenerate(String),
    #[error("reproduction mismatch")]
    Mismatch,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Degenerate(_) => EXIT_DEGENERATE,
            CliError::Mismatch => EXIT_MISMATCH,
        }
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        match e {
            DataError::Ranking(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SieveError> for CliError {
    fn from(e: SieveError) -> Self {
        match e {
            SieveError::NoPositives | SieveError::NoNegatives => CliError::Degenerate(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<StatsError> for CliError {
    fn from(e: StatsError) -> Self {
        match e {
            StatsError::ZeroVariance | StatsError::DegenerateMargin => CliError::Degenerate(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<QModelError> for CliError {
    fn from(e: QModelError) -> Self {
        match e {
            QModelError::Sieve(inner) => inner.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_err(path, e))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(CliError::Mismatch) => EXIT_MISMATCH,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let w = |r: std::io::Result<()>| r.map_err(|e| CliError::Input(e.to_string()));
    match cmd {
        Command::Analyze(a) => analyze(a, out, err),
        Command::Eq1(a) => {
            let r = corrstats::r_from_rates(a.tpr, a.fpr, a.npos, a.nneg)
                .map_err(|e| CliError::Input(e.to_string()))?;
            w(writeln!(out, "{:.4}", r.r))
        }
        Command::Ci(a) => {
            let ci = corrstats::fisher_ci(a.r, a.n, a.level).map_err(|e| CliError::Input(e.to_string()))?;
            w(writeln!(out, "{:.4} {:.4}", ci.lower, ci.upper))
        }
        Command::Spearman(a) => paired(a, true, out),
        Command::Pearson(a) => paired(a, false, out),
        Command::Simulate(a) => simulate(a, out),
        Command::Reproduce(a) => {
            let rows = reproduce::rows();
            match a.format {
                TableFormat::Table => w(write!(out, "{}", reproduce::render_table(&rows)))?,
                TableFormat::Json => {
                    let text = serde_json::to_string_pretty(&rows).expect("rows serialize");
                    w(writeln!(out, "{text}"))?
                }
            }
            if reproduce::all_pass(&rows) {
                Ok(())
            } else {
                Err(CliError::Mismatch)
            }
        }
    }
}

fn paired(a: PairedArgs, rank: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let sample = dataio::parse_paired_csv(&read_text(&a.input)?)?;
    let est = if rank {
        corrstats::spearman(&sample.x, &sample.y)?
    } else {
        corrstats::pearson(&sample.x, &sample.y)?
    };
    let line = match a.level {
        Some(level) => {
            let ci = est.with_fisher_ci(level)?.ci.expect("attached");
            format!("{:.4} {:.4} {:.4}", est.r, ci.lower, ci.upper)
        }
        None => format!("{:.4}", est.r),
    };
    writeln!(out, "{line}").map_err(|e| CliError::Input(e.to_string()))
}

fn sidecar(dir: &Path, command: &str) -> Result<(), CliError> {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let meta = serde_json::json!({
        "command": command,
        "timestamp_unix": secs,
        "tool_version": env!("CARGO_PKG_VERSION"),
    });
    write_file(&dir.join("run.meta.json"), format!("{meta}\n").as_bytes())
}

fn write_outputs(
    dir: &Path,
    doc: &ReportDocument,
    report: &SieveReport,
    format: Format,
    svg: bool,
) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let name = match format {
        Format::Json => "report.json",
        Format::Csv => "report.csv",
    };
    let mut written = vec![dir.join(name)];
    write_file(&written[0], &dataio::write_report(doc, format))?;
    if svg {
        for kind in [CurveKind::Roc, CurveKind::Precision, CurveKind::Correlation] {
            let curve = report.curve(kind).expect("all curves present");
            let path = dir.join(format!("{}.svg", kind.name()));
            let text = dataio::render_svg(curve, &SvgOptions::default())?;
            write_file(&path, text.as_bytes())?;
            written.push(path);
        }
    }
    sidecar(dir, &doc.metadata.command)?;
    Ok(written)
}

fn summarize(out: &mut dyn Write, report: &SieveReport) -> std::io::Result<()> {
    let r = |p: Option<f64>| p.map(|v| format!("{v:.4}")).unwrap_or_else(|| "undefined".into());
    writeln!(out, "positives {}  negatives {}", report.n_pos, report.n_neg)?;
    writeln!(out, "best        R={:<6} r={}", report.best.threshold, r(report.best.r))?;
    if let Some(p) = report.natural {
        writeln!(out, "R = nN      R={:<6} r={}", p.threshold, r(p.r))?;
    }
    if let Some(p) = report.full_recall {
        writeln!(out, "full recall R={:<6} r={}", p.threshold, r(p.r))?;
    }
    writeln!(out, "AUC {:.4}  rank ceiling {:.4}", report.auc, report.ceiling)
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (report, digest) = match &a.input {
        Some(path) => {
            let ranking = dataio::parse_labeled_csv(&read_text(path)?)?;
            if ranking.tie_count() > 0 {
                let _ = writeln!(
                    err,
                    "warning: {} entries share a score with another entry",
                    ranking.tie_count()
                );
            }
            let digest = dataio::digest_bytes(dataio::write_ranking_csv(&ranking).as_bytes());
            (ranking.analyze(), digest)
        }
        None => {
            let sparse = dataio::embedded_nobel().to_sparse();
            let canonical = serde_json::to_vec(&sparse).expect("points serialize");
            (sparse.analyze(), dataio::digest_bytes(&canonical))
        }
    };
    let doc = ReportDocument::from_sieve(&report, ReportMetadata::new("analyze", None), digest);
    write_outputs(&a.out_dir, &doc, &report, a.format.into(), a.svg)?;
    summarize(out, &report).map_err(|e| CliError::Input(e.to_string()))
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config: SimulationConfig = match &a.config {
        Some(path) => toml::from_str(&read_text(path)?)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => SimulationConfig::default(),
    };
    if let Some(seed) = a.seed {
        config.seed = seed;
    }
    let experiment = config.run()?;
    let digest = dataio::digest_bytes(&serde_json::to_vec(&config).expect("config serializes"));
    let mut doc = ReportDocument::from_sieve(
        &experiment.report,
        ReportMetadata::new("simulate", Some(config.seed)),
        digest,
    );
    let rank_corr = experiment.ranking.binary_spearman()?;
    doc.values.push(dataio::ReportValue {
        name: "binary_spearman".into(),
        value: Some(rank_corr.r),
        threshold: None,
        counts: None,
        provenance: dataio::Provenance::Computed,
    });
    write_outputs(&a.out_dir, &doc, &experiment.report, a.format.into(), false)?;
    let ranking_path = a.out_dir.join("ranking.csv");
    write_file(&ranking_path, dataio::write_ranking_csv(&experiment.ranking).as_bytes())?;
    summarize(out, &experiment.report).map_err(|e| CliError::Input(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("luckmeter").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn eq1_prints_four_decimals() {
        let (code, out, _) =
            run_capture(&["eq1", "--tpr", "1", "--fpr", "0.25", "--npos", "25", "--nneg", "28"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "0.7655");
        let (_, out, _) =
            run_capture(&["eq1", "--tpr", "0.3", "--fpr", "0.3", "--npos", "5", "--nneg", "500"]);
        assert_eq!(out.trim(), "0.0000");
    }

    #[test]
    fn eq1_rejects_bad_rates() {
        let (code, _, err) =
            run_capture(&["eq1", "--tpr", "1.5", "--fpr", "0.25", "--npos", "25", "--nneg", "28"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("tpr"));
        let (code, _, _) = run_capture(&["eq1", "--tpr", "0", "--fpr", "0", "--npos", "25", "--nneg", "28"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn ci_accepts_negative_r() {
        let (code, out, _) = run_capture(&["ci", "--r", "-0.71", "--n", "13", "--level", "0.95"]);
        assert_eq!(code, 0);
        let parts: Vec<f64> = out.split_whitespace().map(|s| s.parse().unwrap()).collect();
        assert!((parts[1] + 0.2612).abs() < 1e-4);
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_capture(&["eq1", "--tpr", "1"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["bogus"]).0, EXIT_INPUT);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }
}
