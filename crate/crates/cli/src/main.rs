use std::path::PathBuf;
use std::process::exit;

use clap::{Parser, Subcommand};

use seqtrie_cli::{
    run_bench, run_convert, run_mine, run_stats, BenchConfig, CliError, FlattenMode, MineConfig,
    MinsupSpec, Model,
};

#[derive(Parser)]
#[command(name = "seqtrie", version, about = "Sequential pattern mining over flat tables and tries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a dataset file and rewrite it in canonical form
    Convert {
        input: PathBuf,
        /// Output file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Mine frequent patterns from a dataset file
    Mine {
        input: PathBuf,
        /// Minimum support: a fraction like 0.05, or an absolute count like 20
        #[arg(long)]
        minsup: String,
        #[arg(long, value_enum, default_value_t = Model::Bdtrie)]
        model: Model,
        #[arg(long, value_enum, default_value_t = FlattenMode::Transformed)]
        flatten: FlattenMode,
        /// Drop infrequent events before mining (the result is unchanged)
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        filter: Toggle,
        /// Pattern file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report trie shape and modelled memory for a dataset
    Stats {
        input: PathBuf,
        /// Filter events below this support first
        #[arg(long)]
        minsup: Option<String>,
    },
    /// Time models across thresholds and emit a CSV table
    Bench {
        input: PathBuf,
        /// Comma-separated thresholds, fractions or counts (e.g. 0.1,0.02)
        #[arg(long)]
        minsup: String,
        /// Comma-separated subset of: oracle, tabular, sdtrie, bdtrie
        #[arg(long, default_value = "oracle,tabular,sdtrie,bdtrie")]
        models: String,
        /// Runs per cell; the median wall time is reported
        #[arg(long, default_value_t = 3)]
        repeat: usize,
        /// Worker threads for independent cells
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = Toggle::On)]
        filter: Toggle,
        /// CSV file (stdout when omitted)
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        exit(e.exit_code());
    }
}

fn parse_minsup(s: &str) -> Result<MinsupSpec, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Convert { input, output } => run_convert(&input, output.as_deref()),
        Command::Mine {
            input,
            minsup,
            model,
            flatten,
            filter,
            output,
        } => {
            let report = run_mine(&MineConfig {
                input,
                output,
                minsup: parse_minsup(&minsup)?,
                model,
                flatten,
                filter: filter == Toggle::On,
            })?;
            eprintln!("{report}");
            Ok(())
        }
        Command::Stats { input, minsup } => {
            let spec = minsup.as_deref().map(parse_minsup).transpose()?;
            print!("{}", run_stats(&input, spec.as_ref())?);
            Ok(())
        }
        Command::Bench {
            input,
            minsup,
            models,
            repeat,
            threads,
            filter,
            output,
        } => {
            let minsups = minsup
                .split(',')
                .map(parse_minsup)
                .collect::<Result<Vec<_>, _>>()?;
            let models = models
                .split(',')
                .map(|tok| tok.trim().parse().map_err(CliError::Usage))
                .collect::<Result<Vec<Model>, _>>()?;
            let csv = run_bench(&BenchConfig {
                input,
                minsups,
                models,
                repeat,
                threads,
                filter: filter == Toggle::On,
            })?;
            match output {
                Some(path) => std::fs::write(&path, csv).map_err(|e| {
                    CliError::Runtime(format!("cannot write {}: {e}", path.display()))
                }),
                None => {
                    print!("{csv}");
                    Ok(())
                }
            }
        }
    }
}
