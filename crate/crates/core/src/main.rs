//! Command-line interface for the scoring and audit pipeline.
//!
//! Exit codes: 0 success, 1 validation/input errors, 2 configuration
//! errors, 3 internal errors.

use clap::{Args, Parser, Subcommand, ValueEnum};
use fss_audit::cohort::{EligibilityConfig, TTestVariant};
use fss_audit::ingest::{self, CorpusPaths, Scheme, Window};
use fss_audit::report::{self, OutputFormat, PipelineError, RunConfig};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "fss-audit",
    about = "Research-productivity scoring and recruitment-audit pipeline",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Alphabetical,
    PositionWeighted,
}

impl From<SchemeArg> for Scheme {
    fn from(value: SchemeArg) -> Scheme {
        match value {
            SchemeArg::Alphabetical => Scheme::Alphabetical,
            SchemeArg::PositionWeighted => Scheme::PositionWeighted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TTestArg {
    Pooled,
    Welch,
}

impl From<TTestArg> for TTestVariant {
    fn from(value: TTestArg) -> TTestVariant {
        match value {
            TTestArg::Pooled => TTestVariant::Pooled,
            TTestArg::Welch => TTestVariant::Welch,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Markdown,
}

impl From<FormatArg> for OutputFormat {
    fn from(value: FormatArg) -> OutputFormat {
        match value {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Markdown => OutputFormat::Markdown,
        }
    }
}

fn parse_window(s: &str) -> Result<Window, String> {
    let (start, end) = s
        .split_once(':')
        .ok_or_else(|| format!("expected START:END, got `{s}`"))?;
    let start: i32 = start.parse().map_err(|_| format!("bad start year `{start}`"))?;
    let end: i32 = end.parse().map_err(|_| format!("bad end year `{end}`"))?;
    Window::new(start, end).ok_or_else(|| format!("window start {start} after end {end}"))
}

#[derive(Args)]
struct CommonArgs {
    /// roster.csv (or .json): researchers, fields, ranks, staff intervals
    #[arg(long)]
    roster: PathBuf,
    /// publications.csv (or .json)
    #[arg(long)]
    pubs: PathBuf,
    /// authorships.csv (or .json): byline companion of --pubs
    #[arg(long)]
    authorships: PathBuf,
    /// journals.csv (or .json): journal-year impact factors and categories
    #[arg(long)]
    journals: PathBuf,
    /// competitions.csv (or .json): one row per candidate
    #[arg(long)]
    competitions: PathBuf,
    /// Inclusive observation window, e.g. 2009:2011
    #[arg(long, value_parser = parse_window)]
    window: Window,
    /// Counting scheme for roster rows with a blank scheme column
    #[arg(long, value_enum, default_value = "alphabetical")]
    scheme_default: SchemeArg,
    /// Two-sample t-test variant
    #[arg(long, value_enum, default_value = "pooled")]
    ttest: TTestArg,
    /// Minimum share of publishing professors for an SDS to enter audits
    #[arg(long, default_value_t = 0.5)]
    min_publishing_share: f64,
    /// Keep researchers without full-window staff presence in the audits
    #[arg(long)]
    no_continuous_staff_filter: bool,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Output formats (repeat or comma-separate)
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["csv", "json", "markdown"])]
    format: Vec<FormatArg>,
}

impl CommonArgs {
    fn run_config(&self) -> Result<RunConfig, String> {
        if !(0.0..=1.0).contains(&self.min_publishing_share) {
            return Err(format!(
                "--min-publishing-share must be in [0, 1], got {}",
                self.min_publishing_share
            ));
        }
        Ok(RunConfig {
            paths: CorpusPaths {
                roster: self.roster.clone(),
                publications: self.pubs.clone(),
                authorships: self.authorships.clone(),
                journals: self.journals.clone(),
                competitions: self.competitions.clone(),
            },
            window: self.window,
            eligibility: EligibilityConfig {
                min_publishing_share: self.min_publishing_share,
                require_continuous_staff: !self.no_continuous_staff_filter,
            },
            ttest: self.ttest.into(),
            default_scheme: self.scheme_default.into(),
            out_dir: self.out.clone(),
            formats: self.format.iter().map(|&f| f.into()).collect(),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Load the inputs and print the validation report
    Validate(CommonArgs),
    /// Compute scorecards (O, FSS_IF)
    Score(CommonArgs),
    /// Compute scorecards and percentile ranks
    Rank(CommonArgs),
    /// Run the recruitment audits
    Audit(CommonArgs),
    /// Run the full pipeline and emit every report
    Report(CommonArgs),
}

fn exit_for(error: &PipelineError) -> u8 {
    match error {
        PipelineError::Validation { .. } => EXIT_VALIDATION,
        PipelineError::Config { .. } => EXIT_CONFIG,
        PipelineError::Stage { stage, .. } if *stage == "ingest" => EXIT_VALIDATION,
        PipelineError::Stage { .. } => EXIT_INTERNAL,
    }
}

fn run_validate(config: &RunConfig) -> u8 {
    let corpus = match ingest::load_corpus(&config.paths, config.window, config.default_scheme) {
        Ok(corpus) => corpus,
        Err(e) => {
            eprintln!("error in stage ingest: {e}");
            return EXIT_VALIDATION;
        }
    };
    let report = ingest::validate_corpus(&corpus);
    for finding in &report.errors {
        println!("error [{}]: {}", finding.code, finding.message);
    }
    for finding in &report.warnings {
        println!("warning [{}]: {}", finding.code, finding.message);
    }
    println!(
        "validation: {} error(s), {} warning(s)",
        report.errors.len(),
        report.warnings.len()
    );
    if report.accepted() {
        0
    } else {
        EXIT_VALIDATION
    }
}

fn run_stage(config: &RunConfig, command: &Command) -> u8 {
    let bundle = match report::run_pipeline(config) {
        Ok(bundle) => bundle,
        Err(e) => {
            eprintln!("{e}");
            if let PipelineError::Validation { report } = &e {
                for finding in &report.errors {
                    eprintln!("error [{}]: {}", finding.code, finding.message);
                }
            }
            return exit_for(&e);
        }
    };

    let result = match command {
        Command::Report(_) => report::write_bundle(&bundle, config),
        _ => {
            if let Err(e) = std::fs::create_dir_all(&config.out_dir) {
                eprintln!(
                    "configuration error: cannot create output directory {}: {e}",
                    config.out_dir.display()
                );
                return EXIT_CONFIG;
            }
            let write = |name: &str, contents: String| {
                std::fs::write(config.out_dir.join(name), contents).map_err(|e| {
                    PipelineError::Config {
                        message: format!("cannot write {name}: {e}"),
                    }
                })
            };
            let csv = config.formats.contains(&OutputFormat::Csv);
            let json = config.formats.contains(&OutputFormat::Json);
            (|| {
                match command {
                    Command::Score(_) => {
                        if csv {
                            write(
                                "scorecards.csv",
                                report::render_scorecards_csv(&bundle.scores.scorecards),
                            )?;
                        }
                        if json {
                            write(
                                "scorecards.json",
                                report::render_scorecards_json(&bundle.scores.scorecards),
                            )?;
                        }
                    }
                    Command::Rank(_) => {
                        if csv {
                            write(
                                "scorecards.csv",
                                report::render_scorecards_csv(&bundle.scores.scorecards),
                            )?;
                            write(
                                "percentiles.csv",
                                report::render_percentiles_csv(
                                    &bundle.scores.scorecards,
                                    &bundle.ranking,
                                ),
                            )?;
                        }
                        if json {
                            write(
                                "scorecards.json",
                                report::render_scorecards_json(&bundle.scores.scorecards),
                            )?;
                            write(
                                "percentiles.json",
                                report::render_percentiles_json(
                                    &bundle.scores.scorecards,
                                    &bundle.ranking,
                                ),
                            )?;
                        }
                    }
                    Command::Audit(_) => {
                        if csv {
                            write(
                                "histogram.csv",
                                report::render_histogram_csv(&bundle.outperformance),
                            )?;
                        }
                        if json {
                            write("audit.json", report::render_audit_json(&bundle))?;
                        }
                    }
                    _ => unreachable!(),
                }
                write("run.log", report::render_run_log(&bundle))
            })()
        }
    };
    match result {
        Ok(()) => {
            println!("done: outputs written to {}", config.out_dir.display());
            0
        }
        Err(e) => {
            eprintln!("{e}");
            exit_for(&e)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = match &cli.command {
        Command::Validate(a)
        | Command::Score(a)
        | Command::Rank(a)
        | Command::Audit(a)
        | Command::Report(a) => a,
    };
    let config = match args.run_config() {
        Ok(config) => config,
        Err(message) => {
            eprintln!("configuration error: {message}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let code = match &cli.command {
        Command::Validate(_) => run_validate(&config),
        command => run_stage(&config, command),
    };
    ExitCode::from(code)
}
