use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loadfpca_cli::commands::{
    cmd_evaluate, cmd_fit, cmd_ingest, cmd_predict, cmd_scores_report, EvaluatePaths,
};
use loadfpca_cli::config::{DateRange, Overrides, RunConfig};
use loadfpca_cli::error::CliResult;

#[derive(Parser)]
#[command(name = "loadfpca", version, about = "Functional PCA load analysis and forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Training dates, START..END inclusive.
    #[arg(long)]
    train_range: Option<DateRange>,
    /// Test dates, START..END inclusive.
    #[arg(long)]
    test_range: Option<DateRange>,
    /// Number of components used for forecasting.
    #[arg(long)]
    components: Option<usize>,
    /// Number of grid points per day.
    #[arg(long)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> CliResult<RunConfig> {
        let o = Overrides {
            train_range: self.train_range,
            test_range: self.test_range,
            components: self.components,
            grid: self.grid,
            output: self.output.clone(),
        };
        RunConfig::load(self.config.as_deref(), &o)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Clean raw measurements into daily curves and descriptors.
    Ingest(Common),
    /// Fit components and score regressions on the training range.
    Fit(Common),
    /// Forecast the test range from a fitted model.
    Predict {
        #[command(flatten)]
        common: Common,
        /// Model file; defaults to model.json in the output directory.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Score a forecast against actual curves.
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Forecast curves; defaults to forecast.csv in the output directory.
        #[arg(long)]
        forecast: Option<PathBuf>,
        /// Actual curves; defaults to curves.csv in the output directory.
        #[arg(long)]
        actual: Option<PathBuf>,
    },
    /// Tabulate training scores by weekday, month and weather.
    ScoresReport {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Ingest(c) => cmd_ingest(&c.load()?),
        Command::Fit(c) => cmd_fit(&c.load()?),
        Command::Predict { common, model } => cmd_predict(&common.load()?, model.as_deref()),
        Command::Evaluate { common, forecast, actual } => {
            cmd_evaluate(&common.load()?, &EvaluatePaths { forecast, actual })
        }
        Command::ScoresReport { common, model } => cmd_scores_report(&common.load()?, model.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage_error = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage_error { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
