use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wittbox_cli::commands::{self, DEFAULT_SEED};
use wittbox_cli::{CliError, Output};
use wittbox_core::bounds::MINIMAL_D_BUDGET;
use wittbox_core::counting::DEFAULT_BUDGET;
use wittbox_core::{BoundOptions, CountConfig, DegreeReading};

#[derive(Parser)]
#[command(name = "wittbox", version, about = "Witt vectors, Galois rings and zero counting over boxes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CountArgs {
    /// Largest q^(nm) that will be enumerated.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Contiguous ranges for the parallel count; 0 uses every thread.
    #[arg(long, default_value_t = 0)]
    partitions: usize,
}

impl CountArgs {
    fn config(&self) -> CountConfig {
        CountConfig {
            budget: self.budget,
            partitions: self.partitions,
        }
    }
}

#[derive(clap::Args)]
struct BoundArgs {
    /// Reading of the condition "some/every deg f_k > 1": any or all.
    #[arg(long, default_value = "any")]
    reading: String,
    /// Work limit for the minimal-degree search.
    #[arg(long, default_value_t = MINIMAL_D_BUDGET)]
    minimal_d_budget: u64,
}

impl BoundArgs {
    fn options(&self) -> Result<BoundOptions, CliError> {
        let reading: DegreeReading = self.reading.parse()?;
        Ok(BoundOptions {
            reading,
            minimal_d_budget: self.minimal_d_budget,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the Witt addition or multiplication polynomials.
    WittPolys {
        #[arg(long)]
        p: u64,
        /// Highest index.
        #[arg(long)]
        n: usize,
        /// Number of operands.
        #[arg(long, default_value_t = 2)]
        r: usize,
        /// sum or product.
        #[arg(long)]
        kind: String,
        /// Print the digit-level forms with x_ij replaced by x_ij^(p^i).
        #[arg(long)]
        twisted: bool,
    },
    /// Count the zeros of an instance over its box.
    Count {
        file: PathBuf,
        #[command(flatten)]
        count: CountArgs,
    },
    /// Evaluate the divisibility bounds of an instance without counting.
    Bound {
        file: PathBuf,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Count and check every applicable bound.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        count: CountArgs,
        #[command(flatten)]
        bound: BoundArgs,
    },
    /// Check the three bundled worked examples.
    PaperExamples {
        #[command(flatten)]
        count: CountArgs,
    },
    /// Run the structural self-test suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Also run the randomized soundness check on this many instances.
        #[arg(long)]
        soundness: Option<usize>,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::new("io", format!("{}: {e}", path.display())))
}

fn run(cmd: Command) -> Result<Output, CliError> {
    match cmd {
        Command::WittPolys { p, n, r, kind, twisted } => {
            commands::witt_polys(p, n, r, commands::parse_kind(&kind)?, twisted)
        }
        Command::Count { file, count } => commands::count(&read(&file)?, &count.config()),
        Command::Bound { file, bound } => commands::bound(&read(&file)?, &bound.options()?),
        Command::Verify { file, count, bound } => {
            commands::verify(&read(&file)?, &count.config(), &bound.options()?)
        }
        Command::PaperExamples { count } => commands::bundled_examples(&count.config()),
        Command::Selftest { seed, soundness } => commands::selftest(seed, soundness),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::new("usage", e.to_string().split_whitespace().collect::<Vec<_>>().join(" "));
            eprint!("{e}");
            for line in err.lines() {
                eprintln!("{line}");
            }
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{}", out.text());
            ExitCode::from(out.exit as u8)
        }
        Err(e) => {
            for line in e.lines() {
                eprintln!("{line}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
