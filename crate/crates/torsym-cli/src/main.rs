//! `torsym`: configuration-driven experiments for the toroidal
//! discrete-symbol calculus.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 an inconsistent or
//! inconclusive finding (1 under --strict), 3 usage or configuration error.

mod commands;
mod config;
mod matio;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "torsym", version, about = "Discrete-symbol calculus experiments on the torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Order test + analyticity fits from the symbol and orbit sides.
    Classify(RunArgs),
    /// Truncated-norm bounds for the configured smoothing exponents.
    Norms(RunArgs),
    /// Finite-difference orbit derivative checks and Taylor remainders.
    Orbit(RunArgs),
    /// Invert lambda*I + epsilon*Op(a) and classify the inverse symbol.
    Invert(RunArgs),
    /// B^beta recovery pipeline with bound-chain certificates.
    Recover(RunArgs),
    /// Convert a saved binary operator matrix to CSV for inspection.
    ExportMatrix {
        /// Binary matrix file written via `output.matrix`.
        #[arg(long)]
        input: PathBuf,
        /// Destination CSV file.
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// Experiment configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the RNG seed from the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory for reports (default: current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Treat findings as failures (exit 1 instead of 2).
    #[arg(long)]
    strict: bool,
    /// Write the JSON report (on by default).
    #[arg(long, default_value_t = true)]
    json: bool,
    /// Also write the CSV table.
    #[arg(long)]
    csv: bool,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Norms(_) => "norms",
            Command::Orbit(_) => "orbit",
            Command::Invert(_) => "invert",
            Command::Recover(_) => "recover",
            Command::ExportMatrix { .. } => "export-matrix",
        }
    }

    fn args(&self) -> &RunArgs {
        match self {
            Command::Classify(a)
            | Command::Norms(a)
            | Command::Orbit(a)
            | Command::Invert(a)
            | Command::Recover(a) => a,
            Command::ExportMatrix { .. } => unreachable!("export-matrix takes no run args"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();

    if let Command::ExportMatrix { input, output } = &cli.command {
        return match matio::load_matrix(input).and_then(|op| matio::export_matrix_csv(output, &op))
        {
            Ok(()) => ExitCode::from(0),
            Err(e) => {
                eprintln!("torsym {name}: {e:#}");
                ExitCode::from(1)
            }
        };
    }
    let args = cli.command.args();

    let config = match ExperimentConfig::from_path(&args.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("torsym: {e}");
            return ExitCode::from(3);
        }
    };
    let seed = args.seed.unwrap_or(config.seed);

    let envelope = match commands::run(name, &config, seed) {
        Ok(env) => env,
        Err(e) => {
            eprintln!("torsym {name}: {e:#}");
            let code = if e.downcast_ref::<commands::Precondition>().is_some() { 3 } else { 1 };
            return ExitCode::from(code);
        }
    };

    let json_name = config
        .output
        .as_ref()
        .and_then(|o| o.json.clone())
        .unwrap_or_else(|| format!("{name}.json"));
    let csv_name = config
        .output
        .as_ref()
        .and_then(|o| o.csv.clone())
        .unwrap_or_else(|| format!("{name}.csv"));

    if args.json {
        if let Err(e) = report::write_report(
            &envelope,
            &args.out,
            &json_name,
            args.csv.then_some(csv_name.as_str()),
        ) {
            eprintln!("torsym {name}: writing report: {e:#}");
            return ExitCode::from(1);
        }
    }

    if let Some(matrix_name) = config.output.as_ref().and_then(|o| o.matrix.as_deref()) {
        match &envelope.matrix {
            Some(op) => {
                if let Err(e) = matio::save_matrix(&args.out.join(matrix_name), op) {
                    eprintln!("torsym {name}: writing matrix: {e:#}");
                    return ExitCode::from(1);
                }
            }
            None => eprintln!("torsym {name}: this command produces no matrix; skipping {matrix_name}"),
        }
    }

    println!("{name}: {}", envelope.status.as_str());
    ExitCode::from(envelope.status.exit_code(args.strict) as u8)
}
