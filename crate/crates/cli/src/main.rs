use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use prodline_cli::error::CliError;
use prodline_cli::experiment::load_spec;
use prodline_cli::runner::{run_baseline, run_compare, run_production};
use prodline_cli::tables::read_training_table;
use prodline_core::patterns;
use prodline_core::turn::{FeatureVector, PredictorState};

#[derive(Parser)]
#[command(
    name = "prodline",
    version,
    about = "Slot-based intersection scheduling experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a production experiment and write report.csv / summary.txt.
    Simulate {
        /// Experiment file (TOML).
        spec: PathBuf,
    },
    /// Run the Monte-Carlo crossing experiment of a baseline spec.
    Baseline {
        /// Experiment file (TOML) with a `[baseline]` section.
        spec: PathBuf,
        /// Extra vehicle counts to sweep into baseline_sweep.csv, e.g. 50,200,300.
        #[arg(long, value_delimiter = ',')]
        sweep: Vec<usize>,
    },
    /// Evaluate two experiments on spec_a's arrivals, side by side.
    Compare { spec_a: PathBuf, spec_b: PathBuf },
    /// Replay queries through a KNN training table, one +/- per line.
    Predict {
        /// Training table: day hour event class (+/-) per row.
        table: PathBuf,
        /// Number of neighbours (odd).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// A query as day,hour,event; repeatable, answered in order.
        #[arg(long = "query", value_name = "D,H,E")]
        queries: Vec<String>,
        /// File of queries, one "day hour event" row per line, read before
        /// any --query arguments.
        #[arg(long)]
        queries_file: Option<PathBuf>,
    },
    /// Print a request pattern: bits on the first line, arrival seconds on
    /// the second.
    Patterns {
        /// matched | worst | random | recorded-random
        kind: String,
        /// Pattern length in seconds (ignored by recorded-random).
        #[arg(long, default_value_t = 60)]
        len: usize,
        /// Request probability for the random kind.
        #[arg(long)]
        p: Option<f64>,
        /// Seed for the random kind.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate { spec } => {
            let spec = load_spec(&spec)?;
            let output = run_production(&spec)?;
            print!("{}", output.summary);
            for path in &output.written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Baseline { spec, sweep } => {
            let spec = load_spec(&spec)?;
            let (_, summary, written) = run_baseline(&spec, &sweep)?;
            print!("{summary}");
            for path in &written {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Compare { spec_a, spec_b } => {
            let a = load_spec(&spec_a)?;
            let b = load_spec(&spec_b)?;
            print!("{}", run_compare(&a, &b)?);
            Ok(())
        }
        Command::Predict {
            table,
            k,
            queries,
            queries_file,
        } => {
            let rows = read_training_table(&table)?;
            let mut state =
                PredictorState::new(rows, k).map_err(|e| CliError::config(format!("--k: {e}")))?;
            let mut parsed = Vec::new();
            if let Some(path) = queries_file {
                parsed.extend(prodline_cli::tables::read_feature_rows(&path)?);
            }
            for query in &queries {
                parsed.push(parse_query(query)?);
            }
            let classes = state
                .predict_sequence(&parsed)
                .map_err(|e| CliError::config(e.to_string()))?;
            let mut stdout = String::new();
            for class in classes {
                stdout.push(class.symbol());
                stdout.push('\n');
            }
            print!("{stdout}");
            Ok(())
        }
        Command::Patterns { kind, len, p, seed } => {
            let pattern = match kind.as_str() {
                "matched" => patterns::matched(len),
                "worst" => patterns::worst(len),
                "recorded-random" => patterns::recorded_random(),
                "random" => {
                    let p = p.ok_or_else(|| CliError::usage("random pattern needs --p"))?;
                    let seed =
                        seed.ok_or_else(|| CliError::usage("random pattern needs --seed"))?;
                    patterns::random(len, p, seed)
                        .map_err(|e| CliError::usage(format!("--p: {e}")))?
                }
                other => {
                    return Err(CliError::usage(format!(
                        "unknown pattern kind {other:?}; expected matched, worst, random or recorded-random"
                    )))
                }
            };
            let bits: Vec<&str> = pattern
                .bits()
                .iter()
                .map(|&b| if b { "1" } else { "0" })
                .collect();
            let arrivals: Vec<String> = pattern.arrivals().iter().map(|t| format!("{t}")).collect();
            println!("{}", bits.join(" "));
            println!("{}", arrivals.join(" "));
            Ok(())
        }
    }
}

fn parse_query(text: &str) -> Result<FeatureVector, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "--query expects day,hour,event, got {text:?}"
        )));
    }
    let mut values = [0u8; 3];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part.parse().map_err(|_| {
            CliError::usage(format!("--query {text:?}: {part:?} is not a small integer"))
        })?;
    }
    FeatureVector::new(values[0], values[1], values[2])
        .map_err(|e| CliError::usage(format!("--query {text:?}: {e}")))
}
