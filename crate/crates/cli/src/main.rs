mod backend_spec;
mod commands;
mod failure;
mod rundir;
mod svg;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::failure::ErrorSummary;

#[derive(Parser)]
#[command(
    name = "chroma-assoc",
    version,
    about = "Estimate and evaluate color-concept associations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rate every concept × color pair with a chat backend.
    Estimate(EstimateArgs),
    /// Correlate a run with human ratings or a reference run.
    Evaluate(EvaluateArgs),
    /// Entropy-based specificity per concept, optionally regressed with concreteness.
    Specificity(SpecificityArgs),
    /// Fit the L/C/hue-harmonic regression to each concept.
    FitColorspace(FitArgs),
    /// Per-concept bar charts and a specificity-vs-correlation scatter.
    Report(ReportArgs),
    /// Export the built-in library or generate a CIELAB grid library.
    Library(LibraryArgs),
}

#[derive(Args, Clone)]
pub struct ConceptArgs {
    /// Comma-separated concepts.
    #[arg(long, value_delimiter = ',')]
    pub concepts: Vec<String>,
    /// File with one concept per line (`#` starts a comment).
    #[arg(long)]
    pub concepts_file: Option<PathBuf>,
    /// A concept category, e.g. Fruits.
    #[arg(long)]
    pub category: Option<String>,
}

#[derive(Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub protocol: String,
    #[arg(long)]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// http, mock:constant=V, mock:synthetic[,noise=SD] or mock:truth=PATH[,noise=SD].
    #[arg(long, default_value = "http")]
    pub backend: String,
    /// Model id; defaults to gpt-4 for http and mock for mock backends.
    #[arg(long)]
    pub model: Option<String>,
    /// uw71 or a library CSV.
    #[arg(long, default_value = "uw71")]
    pub library: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub concepts: ConceptArgs,
    #[arg(long, default_value_t = chroma_assoc::estimator::DEFAULT_CONCURRENCY)]
    pub concurrency: usize,
    /// Requests per second across all workers.
    #[arg(long)]
    pub rate_limit: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub max_attempts: usize,
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub run: PathBuf,
    /// Human ratings CSV (participant_id,concept,color_index,rating).
    #[arg(
        long,
        conflicts_with = "reference_run",
        required_unless_present = "reference_run"
    )]
    pub human: Option<PathBuf>,
    /// Another run to use in place of human means.
    #[arg(long)]
    pub reference_run: Option<PathBuf>,
    /// A second run to compare against with a paired t-test.
    #[arg(long)]
    pub compare: Option<PathBuf>,
    #[arg(long)]
    pub concreteness: Option<PathBuf>,
    /// Seed for split-half resampling and learning-curve shuffles.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub split_half_iterations: usize,
    #[arg(long, default_value_t = 20)]
    pub learning_rounds: usize,
    #[arg(long, default_value_t = chroma_assoc::metrics::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct SpecificityArgs {
    #[arg(long)]
    pub run: PathBuf,
    /// evaluation.csv from `evaluate`, for the regression response.
    #[arg(long)]
    pub evaluation: Option<PathBuf>,
    #[arg(long)]
    pub concreteness: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct FitArgs {
    #[arg(long, required_unless_present = "human", conflicts_with = "human")]
    pub run: Option<PathBuf>,
    /// Fit mean human ratings instead of a run.
    #[arg(long)]
    pub human: Option<PathBuf>,
    /// Library for --human input.
    #[arg(long, default_value = "uw71")]
    pub library: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub run: PathBuf,
    #[arg(long)]
    pub evaluation: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct LibraryArgs {
    #[arg(long, default_value = "uw71")]
    pub library: String,
    /// Generate an in-gamut CIELAB grid with this ΔE spacing instead.
    #[arg(long)]
    pub grid_delta_e: Option<f64>,
    /// Lightness planes for --grid-delta-e.
    #[arg(long, value_delimiter = ',', default_values_t = [25.0, 50.0, 75.0])]
    pub planes: Vec<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (name, result) = match cli.command {
        Command::Estimate(a) => ("estimate", commands::estimate::run(a)),
        Command::Evaluate(a) => ("evaluate", commands::evaluate::run(a)),
        Command::Specificity(a) => ("specificity", commands::specificity::run(a)),
        Command::FitColorspace(a) => ("fit-colorspace", commands::fit::run(a)),
        Command::Report(a) => ("report", commands::report::run(a)),
        Command::Library(a) => ("library", commands::library::run(a)),
    };
    match result {
        Ok(summary) => println!("{summary}"),
        Err(err) => {
            let summary = ErrorSummary::new(name, &err);
            eprintln!(
                "{}",
                serde_json::to_string(&summary).unwrap_or_else(|_| format!("{err:#}"))
            );
            std::process::exit(summary.exit_code());
        }
    }
}
