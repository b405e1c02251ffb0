use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gpb_cli::bench::{run_bench, BenchConfig};
use gpb_cli::solve::{solve, Algorithm, Backend, Objective, SolveOptions};
use gpb_cli::synth::gen_synthetic;
use gpb_cli::{CliError, InstanceFile};

#[derive(Parser)]
#[command(name = "gpb", version, about = "Exact inference for pattern-plus-grammar energies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    MachineReadable,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchBackend {
    Reference,
    UsefulEdge,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "general")]
        algorithm: Algorithm,
        #[arg(long, value_enum, default_value = "min")]
        objective: Objective,
        #[arg(long, value_enum, default_value = "useful-edge")]
        backend: Backend,
        /// Also run the exhaustive oracle and fail on disagreement.
        #[arg(long)]
        oracle_check: bool,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Write a synthetic benchmark instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long = "C", default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Destination file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Time the interaction algorithm on synthetic instances.
    Bench {
        #[arg(long, default_value_t = 10)]
        n_min: usize,
        #[arg(long, default_value_t = 350)]
        n_max: usize,
        #[arg(long, default_value_t = 10)]
        n_step: usize,
        #[arg(long = "C-list", value_delimiter = ',', default_value = "0,1,10")]
        c_list: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        seeds: Vec<u64>,
        /// Two sizes, `lo,hi`.
        #[arg(long, value_delimiter = ',', default_values_t = [100, 350])]
        fit_range: Vec<usize>,
        #[arg(long, value_enum, default_value = "useful-edge")]
        backend: BenchBackend,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Solve {
            instance,
            algorithm,
            objective,
            backend,
            oracle_check,
            output,
        } => {
            let text = fs::read_to_string(&instance)?;
            let inst = InstanceFile::parse(&text)?.to_instance()?;
            let opts = SolveOptions {
                algorithm,
                objective,
                backend,
                oracle_check,
            };
            let report = solve(&inst, opts)?;
            match output {
                Output::Text => print!("{}", report.text()),
                Output::MachineReadable => println!("{}", report.json()),
            }
            if let Some(o) = &report.oracle {
                if !o.matches {
                    return Err(CliError::Mismatch(format!("solver {} vs oracle {}", report.value, o.value)));
                }
            }
            Ok(())
        }
        Command::Gen { n, c, seed, output } => {
            if n == 0 || c < 0.0 || c.is_nan() {
                return Err(CliError::Invalid("need n ≥ 1 and C ≥ 0".into()));
            }
            let json = gen_synthetic(n, c, seed).to_json();
            match output {
                Some(path) => fs::write(path, json + "\n")?,
                None => println!("{json}"),
            }
            Ok(())
        }
        Command::Bench {
            n_min,
            n_max,
            n_step,
            c_list,
            seeds,
            fit_range,
            backend,
            csv,
        } => {
            let backends = match backend {
                BenchBackend::Reference => vec![Backend::Reference],
                BenchBackend::UsefulEdge => vec![Backend::UsefulEdge],
                BenchBackend::Both => vec![Backend::Reference, Backend::UsefulEdge],
            };
            let [lo, hi] = fit_range[..] else {
                return Err(CliError::Invalid("--fit-range takes two sizes, lo,hi".into()));
            };
            let fit_range = (lo, hi);
            let config = BenchConfig {
                n_min,
                n_max,
                n_step,
                c_list,
                seeds,
                backends: backends.clone(),
                fit_range,
            };
            let report = run_bench(&config, |row| {
                eprintln!("{} n={} C={} seed={} {:.3}s", row.backend, row.n, row.c, row.seed, row.wall_seconds);
            })?;
            match csv {
                Some(path) => report.write_csv(fs::File::create(path)?)?,
                None => report.write_csv(std::io::stdout().lock())?,
            }
            for b in backends {
                match report.fit(b, fit_range) {
                    Some(fit) => eprintln!(
                        "fit {}: exponent {:.3}, residual {:.4}, {} points in [{}, {}]",
                        b.name(),
                        fit.exponent,
                        fit.residual,
                        fit.points,
                        fit_range.0,
                        fit_range.1
                    ),
                    None => eprintln!("fit {}: fewer than two sizes in [{}, {}]", b.name(), fit_range.0, fit_range.1),
                }
            }
            if !report.disagreements.is_empty() {
                return Err(CliError::Mismatch(format!(
                    "backends disagree: {}",
                    report.disagreements.join("; ")
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
