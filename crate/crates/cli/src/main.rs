use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use noonsim_cli::config::{ExperimentConfig, InjectionPoint, SourceSpec};
use noonsim_cli::run::{render_csv, render_json, run, write_file};
use noonsim_cli::verify::run_checks;
use noonsim_cli::{CliError, EXIT_VERIFY_FAILED};

#[derive(Parser)]
#[command(
    name = "noonsim",
    version,
    about = "Multi-photon Mach-Zehnder fringe simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan the interferometer phase and write fringe CSV and a JSON summary.
    Fringe(ExperimentArgs),
    /// Compare simulated fringes with their closed forms.
    Verify,
    /// Print the amplitude table of a source state.
    State(ExperimentArgs),
}

/// Each flag overrides the config field of the same name.
#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment config.
    #[arg(long)]
    config: Option<PathBuf>,
    /// e.g. `pair_fock(2)`, `noon(4)`, `kitten(3)`, `squeezed_vacuum(0.2,10,4)`.
    #[arg(long)]
    source: Option<String>,
    #[arg(long)]
    grid_size: Option<usize>,
    /// Comma-separated patterns such as `3:1,1:3`.
    #[arg(long, value_delimiter = ',')]
    patterns: Option<Vec<String>>,
    #[arg(long, value_enum)]
    injection: Option<InjectionPoint>,
    /// Harmonic magnitude threshold.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let mut config = match (&self.config, &self.source) {
            (Some(path), _) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                ExperimentConfig::from_json(&text)?
            }
            (None, Some(source)) => ExperimentConfig::new(source.parse()?),
            (None, None) => {
                return Err(CliError::Validation(
                    "either --config or --source is required".into(),
                ))
            }
        };
        if let Some(source) = self.source {
            config.source = source.parse::<SourceSpec>()?;
        }
        if let Some(n) = self.grid_size {
            config.grid_size = n;
        }
        if self.patterns.is_some() {
            config.patterns = self.patterns;
        }
        if self.injection.is_some() {
            config.injection = self.injection;
        }
        if let Some(t) = self.threshold {
            config.threshold = t;
        }
        if self.out_csv.is_some() {
            config.out_csv = self.out_csv;
        }
        if self.out_json.is_some() {
            config.out_json = self.out_json;
        }
        Ok(config)
    }
}

fn fringe(args: ExperimentArgs) -> Result<(), CliError> {
    let config = args.resolve()?;
    let output = run(&config)?;
    let csv = render_csv(&output.table);
    let json = render_json(&output.summary);
    match &config.out_csv {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    match &config.out_json {
        Some(path) => write_file(path, &json)?,
        None => {
            let mut err = std::io::stderr().lock();
            for p in &output.summary.patterns {
                let factor = p
                    .reduction_factor
                    .map_or("-".to_string(), |k| k.to_string());
                let _ = writeln!(
                    err,
                    "{:>8}  visibility {:.12}  reduction {factor}",
                    p.pattern, p.visibility
                );
            }
        }
    }
    Ok(())
}

fn state(args: ExperimentArgs) -> Result<(), CliError> {
    let config = args.resolve()?;
    let (state, probability) = config.source.build()?;
    println!("# source {}", config.source);
    if let Some(p) = probability {
        println!("# postselection probability {p:.16e}");
    }
    println!("ket,re,im,probability");
    for (ket, amp) in state.terms() {
        let occ: Vec<String> = ket.occupations().iter().map(u32::to_string).collect();
        println!(
            "{},{:.16e},{:.16e},{:.16e}",
            occ.join(":"),
            amp.re,
            amp.im,
            amp.norm_sqr()
        );
    }
    Ok(())
}

fn verify() -> Result<bool, CliError> {
    let report = run_checks()?;
    for check in &report.checks {
        println!("{check}");
    }
    for note in &report.notes {
        println!("{note}");
    }
    let passed = report.passed();
    println!(
        "{} of {} checks passed",
        report.checks.iter().filter(|c| c.passed).count(),
        report.checks.len()
    );
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fringe(args) => fringe(args).map(|()| true),
        Command::State(args) => state(args).map(|()| true),
        Command::Verify => verify(),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
