use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod failure;

use failure::Failure;

#[derive(Parser)]
#[command(
    name = "codentropy",
    version,
    about = "Structural and textual entropy of a git history"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a repository and write series.csv and summary.json
    Analyze {
        repo: PathBuf,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Write entropy-vs-entropy and entropy-vs-classic correlation matrices
    Correlate {
        series: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Flag commits whose entropy deltas fall outside the IQR fences
    Outliers {
        series: PathBuf,
        /// Fence multiplier; repeat for several reports
        #[arg(long = "factor", default_values_t = [1.5, 3.0])]
        factors: Vec<f64>,
        /// Output file (default: standard output)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render an SVG chart
    Plot {
        series: PathBuf,
        /// history, per-file or heatmap
        #[arg(long)]
        kind: String,
        /// Matrix drawn by the heatmap: entropy or classic
        #[arg(long, default_value = "entropy")]
        matrix: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Correlate expectation labels with measured per-commit deltas
    Calibrate {
        repo: PathBuf,
        /// CSV with `commit,label` rows, label in {-1, 0, 1}
        #[arg(long)]
        labels: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Generate a labelled calculator repository or a synthetic history
    Fixture {
        #[arg(long)]
        out: PathBuf,
        /// calculator or synthetic
        #[arg(long, default_value = "calculator")]
        kind: String,
        /// Synthetic history: commit count
        #[arg(long, default_value_t = 500)]
        commits: usize,
        /// Synthetic history: final file count
        #[arg(long, default_value_t = 200)]
        files: usize,
        /// Synthetic history: random seed
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
pub struct AnalysisArgs {
    /// Extension of measured files; repeatable
    #[arg(long = "ext", default_values_t = [".java".to_string()])]
    extensions: Vec<String>,
    /// Replacement stoplist, one word per line
    #[arg(long)]
    stoplist: Option<PathBuf>,
    /// Blob cache directory, or `off`
    #[arg(long, env = "CODENTROPY_CACHE_DIR")]
    cache: Option<String>,
    /// Tokenize comment text (the default)
    #[arg(long, overrides_with = "exclude_comments")]
    include_comments: bool,
    /// Leave comment text out of the token stream
    #[arg(long)]
    exclude_comments: bool,
    /// Visit only non-merge commits instead of the first-parent chain
    #[arg(long)]
    skip_merges: bool,
    /// Files larger than this many bytes are not measured
    #[arg(long, default_value_t = codentropy::config::DEFAULT_MAX_FILE_SIZE)]
    max_file_size: u64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            repo,
            out,
            analysis,
        } => commands::analyze(&repo, &out, &analysis),
        Command::Correlate { series, out } => commands::correlate(&series, &out),
        Command::Outliers {
            series,
            factors,
            out,
        } => commands::outliers(&series, &factors, out.as_deref()),
        Command::Plot {
            series,
            kind,
            matrix,
            out,
        } => commands::plot(&series, &kind, &matrix, &out),
        Command::Calibrate {
            repo,
            labels,
            analysis,
        } => commands::calibrate(&repo, &labels, &analysis),
        Command::Fixture {
            out,
            kind,
            commits,
            files,
            seed,
        } => commands::fixture(&out, &kind, commits, files, seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.status)
        }
    }
}
