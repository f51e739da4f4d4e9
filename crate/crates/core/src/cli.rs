//! `autorank` command line: `rank` renders leaderboards, `verify` checks them
//! against golden reports.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::golden::{compare_pair, GoldenOptions, VerifySummary};
use crate::ingest::{parse_allow_list, parse_manifest, parse_registry, parse_scores};
use crate::leaderboard::{rank_all, rank_pair};
use crate::model::{
    parse_fraction, Fraction, LanguagePair, MetricSpec, RankingConfig, Registry, ScaleSpan, ScoreRecord,
};
use crate::render::{render_table, Format, RenderOptions};
use crate::report::{render_report, Report};

/// Set to any value to disable ANSI shading in text output.
pub const NO_COLOR_ENV: &str = "AUTORANK_NO_COLOR";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Ok = 0,
    ValidationError = 1,
    GoldenMismatch = 2,
    UsageError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "autorank",
    version,
    about = "AutoRank leaderboards for MT shared-task submissions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank systems per language pair and render the tables.
    Rank(RankArgs),
    /// Recompute every pair and compare against golden JSON reports.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long, value_name = "FILE")]
    scores: PathBuf,
    #[arg(long, value_name = "FILE")]
    systems: PathBuf,
    /// Every ranked pair must be listed in this manifest.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    /// Restrict to these pairs (repeatable); default is every scored pair.
    #[arg(long = "pair", value_name = "CODE", value_parser = parse_pair_arg)]
    pairs: Vec<LanguagePair>,
    #[arg(long, value_parser = parse_format_arg)]
    format: Format,
    /// Write one file per pair into this directory instead of stdout.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, value_name = "R", default_value_t = 1.5)]
    cutoff_gap: f64,
    #[arg(long, value_name = "R", default_value = "1/3", value_parser = parse_fraction_arg)]
    closed_fraction: Fraction,
    #[arg(long, value_name = "R", default_value = "2/3", value_parser = parse_fraction_arg)]
    open_fraction: Fraction,
    #[arg(long, value_name = "n|n-1", default_value = "n", value_parser = parse_span_arg)]
    span: ScaleSpan,
    /// Drop closed systems from the rendered view (values are not recomputed).
    #[arg(long)]
    exclude_closed: bool,
    /// Add a column with the selection reason codes.
    #[arg(long)]
    show_reasons: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    scores: PathBuf,
    #[arg(long, value_name = "FILE")]
    systems: PathBuf,
    /// Directory of golden JSON reports.
    #[arg(long, value_name = "DIR")]
    golden: PathBuf,
    #[arg(long, value_name = "R", default_value_t = 0.05)]
    autorank_tol: f64,
    /// TSV `pair<TAB>system` of selection flags allowed to differ.
    #[arg(long, value_name = "FILE")]
    allow_mismatch: Option<PathBuf>,
}

fn parse_pair_arg(s: &str) -> Result<LanguagePair, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_format_arg(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_fraction_arg(s: &str) -> Result<Fraction, String> {
    parse_fraction(s).map_err(|e| e.to_string())
}

fn parse_span_arg(s: &str) -> Result<ScaleSpan, String> {
    s.parse().map_err(|e: crate::error::ConfigError| e.to_string())
}

enum Failure {
    Usage(String),
    Validation(String),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn load_inputs(systems: &Path, scores: &Path) -> Result<(Registry, Vec<ScoreRecord>), Failure> {
    let registry =
        parse_registry(&read(systems)?).map_err(|e| Failure::Validation(format!("{}: {e}", systems.display())))?;
    let records = parse_scores(&read(scores)?, &registry, &MetricSpec::autorank_pair())
        .map_err(|e| Failure::Validation(format!("{}: {e}", scores.display())))?;
    Ok((registry, records))
}

/// Write `contents` to `path` through a temporary file in the same directory.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn cmd_rank(args: RankArgs, stdout: &mut dyn Write) -> Result<ExitStatus, Failure> {
    let config = RankingConfig {
        cutoff_gap: args.cutoff_gap,
        closed_fraction: args.closed_fraction,
        open_fraction: args.open_fraction,
        scale_span: args.span,
        ..RankingConfig::default()
    };
    config.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let (registry, records) = load_inputs(&args.systems, &args.scores)?;
    let metrics = MetricSpec::autorank_pair();
    let pairs = (!args.pairs.is_empty()).then_some(args.pairs.as_slice());
    let tables =
        rank_all(&records, &registry, &metrics, &config, pairs).map_err(|e| Failure::Validation(e.to_string()))?;

    if let Some(path) = &args.manifest {
        let manifest =
            parse_manifest(&read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        if let Some(t) = tables.iter().find(|t| !manifest.entries.contains_key(&t.pair)) {
            return Err(Failure::Validation(format!(
                "{}: pair {} is not listed",
                path.display(),
                t.pair
            )));
        }
    }

    let opts = RenderOptions {
        format: args.format,
        include_closed: !args.exclude_closed,
        show_reasons: args.show_reasons,
        color: std::env::var_os(NO_COLOR_ENV).is_none(),
    };
    let io_error = |e: std::io::Error| Failure::Validation(e.to_string());
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Validation(format!("{}: {e}", dir.display())))?;
            // Files on disk never carry terminal escapes.
            let opts = RenderOptions { color: false, ..opts };
            for table in &tables {
                let path = dir.join(format!("{}.{}", table.pair, opts.format.extension()));
                write_atomic(&path, &render_table(table, &opts))
                    .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
            }
        }
        None if opts.format == Format::Json && tables.len() != 1 && opts.include_closed => {
            stdout.write_all(render_report(&tables).as_bytes()).map_err(io_error)?;
        }
        None => {
            let rendered: Vec<String> = tables.iter().map(|t| render_table(t, &opts)).collect();
            stdout.write_all(rendered.join("\n").as_bytes()).map_err(io_error)?;
        }
    }
    Ok(ExitStatus::Ok)
}

fn cmd_verify(args: VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<ExitStatus, Failure> {
    if !(args.autorank_tol.is_finite() && args.autorank_tol >= 0.0) {
        return Err(Failure::Usage(format!(
            "--autorank-tol must be non-negative, got {}",
            args.autorank_tol
        )));
    }
    let (registry, records) = load_inputs(&args.systems, &args.scores)?;
    let allow_mismatch = match &args.allow_mismatch {
        Some(path) => {
            parse_allow_list(&read(path)?).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?
        }
        None => BTreeSet::new(),
    };
    let opts = GoldenOptions {
        autorank_tol: args.autorank_tol,
        allow_mismatch,
    };

    let entries =
        fs::read_dir(&args.golden).map_err(|e| Failure::Validation(format!("{}: {e}", args.golden.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();

    let mut summary = VerifySummary::default();
    for file in &files {
        let golden =
            Report::parse(&read(file)?).map_err(|e| Failure::Validation(format!("{}: {e}", file.display())))?;
        let config = golden
            .config
            .to_config()
            .ok_or_else(|| Failure::Validation(format!("{}: invalid config echo", file.display())))?;
        let metrics: Vec<MetricSpec> = golden.metrics.iter().map(|m| m.to_spec()).collect();
        for expected in &golden.pairs {
            let actual = rank_pair(expected.pair, &records, &registry, &metrics, &config)
                .map_err(|e| Failure::Validation(format!("{}: {e}", file.display())))?;
            summary.mismatches.extend(compare_pair(expected, &actual, &opts));
            summary.pairs_compared += 1;
        }
    }

    let io_error = |e: std::io::Error| Failure::Validation(e.to_string());
    for m in &summary.mismatches {
        writeln!(stdout, "{m}").map_err(io_error)?;
    }
    let failures = summary.failures().count();
    let allowed = summary.mismatches.len() - failures;
    if summary.pairs_compared == 0 {
        writeln!(stderr, "warning: 0 pairs compared").map_err(io_error)?;
    }
    writeln!(
        stderr,
        "{} pairs compared, {failures} mismatches, {allowed} allowed",
        summary.pairs_compared
    )
    .map_err(io_error)?;
    Ok(if summary.passed() {
        ExitStatus::Ok
    } else {
        ExitStatus::GoldenMismatch
    })
}

/// Run the CLI with explicit arguments and output streams.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                ExitStatus::UsageError
            } else {
                let _ = write!(stdout, "{text}");
                ExitStatus::Ok
            };
        }
    };
    let result = match cli.command {
        Command::Rank(args) => cmd_rank(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout, stderr),
    };
    match result {
        Ok(status) => status,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            ExitStatus::UsageError
        }
        Err(Failure::Validation(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            ExitStatus::ValidationError
        }
    }
}
