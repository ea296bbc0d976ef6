use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ecseq::analysis::AnalysisMode;
use ecseq::format::to_sorted_json_pretty;
use ecseq::pipeline::{
    budget_from_env, cmd_admissible, cmd_analyze, cmd_count_places, cmd_generate, cmd_reproduce_table,
    DEFAULT_SEED, DEFAULT_TABLE_RANGE,
};
use ecseq::{Error, Result};

#[derive(Parser)]
#[command(name = "ecseq", version, about = "Low-correlation binary sequence families from elliptic curves over GF(2^n)")]
struct Cli {
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family and write it as an ECSEQ v1 file
    Generate {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        d: u32,
        /// Output file; the family goes to stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Correlation, linear complexity and bound checks for a family file
    Analyze {
        file: PathBuf,
        /// Sample K cross-correlation probes instead of the exhaustive sweep
        #[arg(long, value_name = "K")]
        sampled: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the rows of a published parameter table
    ReproduceTable {
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..=3))]
        table: u32,
        #[arg(long, default_value_t = DEFAULT_TABLE_RANGE.0)]
        from: u32,
        #[arg(long, default_value_t = DEFAULT_TABLE_RANGE.1)]
        to: u32,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print JSON instead of a text table
        #[arg(long)]
        json: bool,
    },
    /// Number of degree-d places from the zeta function
    CountPlaces {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        t: i64,
        #[arg(long)]
        d: u32,
        /// Also enumerate Frobenius orbits (q^d <= 2^20)
        #[arg(long)]
        verify: bool,
    },
    /// Admissible traces t for GF(2^n) and the coprime d in {2, 3}
    Admissible {
        #[arg(long)]
        n: u32,
    },
}

fn read_input(path: &PathBuf) -> Result<Vec<u8>> {
    Ok(fs::read(path)?)
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { n, t, d, out } => {
            let (bytes, summary) = cmd_generate(n, t, d)?;
            let summary = to_sorted_json_pretty(&summary)?;
            match out {
                Some(path) => {
                    fs::write(&path, &bytes)?;
                    println!("{summary}");
                }
                None => {
                    std::io::stdout().write_all(&bytes)?;
                    eprintln!("{summary}");
                }
            }
        }
        Command::Analyze {
            file,
            sampled,
            seed,
            out,
        } => {
            let bytes = read_input(&file)?;
            let mode = match sampled {
                Some(probes) => AnalysisMode::Sampled { probes, seed },
                None => AnalysisMode::Exhaustive,
            };
            let bundle = cmd_analyze(&bytes, mode, seed, budget_from_env()?)?;
            let mut json = bundle.to_json()?;
            json.push('\n');
            write_output(out.as_ref(), json.as_bytes())?;
            let violations = bundle.violations();
            if !violations.is_empty() {
                return Err(Error::BoundViolation(violations.join("; ")));
            }
        }
        Command::ReproduceTable {
            table,
            from,
            to,
            seed,
            json,
        } => {
            let report = cmd_reproduce_table(table, from, to, seed, budget_from_env()?)?;
            if json {
                println!("{}", to_sorted_json_pretty(&report)?);
            } else {
                print!("{}", report.render_text());
            }
            if !report.all_within_bound() {
                return Err(Error::BoundViolation("a table row exceeds its bound".into()));
            }
        }
        Command::CountPlaces { n, t, d, verify } => {
            println!("{}", to_sorted_json_pretty(&cmd_count_places(n, t, d, verify)?)?);
        }
        Command::Admissible { n } => {
            println!("{}", to_sorted_json_pretty(&cmd_admissible(n)?)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
