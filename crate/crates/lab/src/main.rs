use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use willmore_lab::config::DEFAULTS_HELP;
use willmore_lab::{cmd_scaling, cmd_solve, cmd_verify, Config, LabError, Output};

#[derive(Parser)]
#[command(name = "willmore-lab", version, about = "Area-constrained Willmore spheres in normal-coordinate metrics")]
#[command(after_help = DEFAULTS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file; all defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Leave the generation time out of file headers.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the expansion, moment and kernel invariant suite.
    Verify,
    /// Solve for a constrained Willmore sphere at `solver.eps`.
    Solve,
    /// Solve over the `sweep` values and tabulate the scaling study.
    Scaling,
}

fn run(cli: &Cli) -> Result<String, LabError> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let out = Output::new(&cli.out, !cli.no_timestamp);
    match cli.command {
        Command::Verify => match cmd_verify(&cfg, &out) {
            Ok(checks) => Ok(willmore_lab::verify::report(&checks)),
            Err(e) => {
                if let Ok(text) = std::fs::read_to_string(out.path("report.txt")) {
                    print!("{text}");
                }
                Err(e)
            }
        },
        Command::Solve => cmd_solve(&cfg, &out).map(|s| s.text()),
        Command::Scaling => cmd_scaling(&cfg, &out).map(|s| s.summary()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("willmore-lab: {e}");
            if let LabError::Inadmissible(willmore_core::Error::Inadmissible { bound, .. }) = &e {
                eprintln!("admissibility bound: eps <= {bound}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
