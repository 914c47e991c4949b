use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use slowdec_cli::acceptance::{run_suite, Suite};
use slowdec_cli::{run_file, CliError, Experiment, Overrides};

#[derive(Parser)]
#[command(
    name = "slowdec",
    version,
    about = "Slow decorrelation experiments for KPZ growth models"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decorrelation along a direction in a lattice model.
    Decorr(RunArgs),
    /// The same harness away from the characteristic direction.
    OffChar(RunArgs),
    /// Fluctuation exponent from a log-log fit.
    Exponent(RunArgs),
    /// One-point law against a reference distribution.
    Dist(RunArgs),
    /// Off-line points against their projections.
    Projection(RunArgs),
    /// Exclusion-process currents through the step-reset coupling.
    Pasep(RunArgs),
    /// Directed polymer free energies.
    Polymer(RunArgs),
    /// Regime and constants of the two-sided boundary model.
    Classify(RunArgs),
    /// Corner-growth limit shape on a grid of speeds.
    Shape(RunArgs),
    /// Run the acceptance checklist.
    Verify {
        /// `fast` (oracles and invariants) or `full`.
        #[arg(long)]
        suite: String,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides the SLOWDEC_OUT variable and the config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn fail(e: CliError) -> ExitCode {
    eprintln!("slowdec: {e}");
    ExitCode::from(e.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (exp, args) = match cli.cmd {
        Cmd::Decorr(a) => (Experiment::Decorr, a),
        Cmd::OffChar(a) => (Experiment::OffChar, a),
        Cmd::Exponent(a) => (Experiment::Exponent, a),
        Cmd::Dist(a) => (Experiment::Dist, a),
        Cmd::Projection(a) => (Experiment::Projection, a),
        Cmd::Pasep(a) => (Experiment::Pasep, a),
        Cmd::Polymer(a) => (Experiment::Polymer, a),
        Cmd::Classify(a) => (Experiment::Classify, a),
        Cmd::Shape(a) => (Experiment::Shape, a),
        Cmd::Verify { suite } => {
            let suite: Suite = match suite.parse() {
                Ok(s) => s,
                Err(e) => return fail(e),
            };
            let outcomes = run_suite(suite, |o| println!("{}", o.line()));
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!(
                "{} of {} criteria passed",
                outcomes.len() - failed,
                outcomes.len()
            );
            return if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            };
        }
    };
    if args.workers == Some(0) {
        return fail(CliError::Schema(
            "at `--workers`: must be at least 1".into(),
        ));
    }
    let ov = Overrides {
        seed: args.seed,
        out: args.out,
        workers: args.workers,
    };
    match run_file(exp, &args.config, &ov) {
        Ok(s) => {
            println!("{}  run {}", s.experiment, s.run_dir.display());
            println!(
                "config {}  seed {}",
                &s.config_hash[..16],
                s.seed.map_or_else(|| "none".into(), |x| x.to_string())
            );
            print!("{}", s.table);
            for f in &s.files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
