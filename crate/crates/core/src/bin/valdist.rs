use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use valdist_core::cli::{builtin, builtin_names, builtins::builtin_text, exit_code, parse_scenario, run_command, Command, Grid, Scenario};
use valdist_core::scalar::parse_scalar;
use valdist_core::Error;

/// Exact non-Archimedean value distribution toolkit.
#[derive(Parser)]
#[command(name = "valdist", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct VerifyFlags {
    /// Emit the full report as JSON.
    #[arg(long)]
    json: bool,
    /// Write a plot of the left-hand side against each bound.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Exit with code 3 unless every input is certified.
    #[arg(long)]
    require_certified: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print t_m, M, α and the bound coefficients.
    Invariants {
        scenario: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate T, m_j and N_j on a grid.
    Evaluate {
        scenario: PathBuf,
        /// Grid `a:b:k` with k equally spaced points.
        #[arg(long, default_value = "0:10:11")]
        grid: String,
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
    /// Check the three bounds on the scenario domain.
    Verify {
        scenario: PathBuf,
        #[command(flatten)]
        flags: VerifyFlags,
    },
    /// Confirm m + N − d·T is constant for each hypersurface.
    FmtCheck { scenario: PathBuf },
    /// Walk through the three-piece split of the sum at one radius.
    Trace {
        scenario: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long)]
        json: bool,
    },
    /// Bundled scenarios.
    Examples {
        #[command(subcommand)]
        action: ExampleAction,
    },
}

#[derive(Subcommand)]
enum ExampleAction {
    /// List bundled scenario names.
    List,
    /// Print a bundled scenario file.
    Export { name: String },
    /// Verify a bundled scenario.
    Run {
        name: String,
        #[command(flatten)]
        flags: VerifyFlags,
    },
}

fn load(path: &PathBuf) -> Result<Scenario, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

fn exec(scenario: Result<Scenario, Error>, cmd: Command, require_certified: bool) -> ExitCode {
    let outcome = scenario.and_then(|s| run_command(&cmd, &s));
    match outcome {
        Ok(o) => {
            print!("{}", o.stdout);
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("valdist: {e}");
            ExitCode::from(exit_code(&e, require_certified) as u8)
        }
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("valdist: {e}");
    ExitCode::from(exit_code(&e, false) as u8)
}

fn verify_cmd(f: VerifyFlags) -> (Command, bool) {
    let rc = f.require_certified;
    (Command::Verify { json: f.json, svg: f.svg, require_certified: rc }, rc)
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Invariants { scenario, json } => exec(load(&scenario), Command::Invariants { json }, false),
        Cmd::Evaluate { scenario, grid, csv } => match Grid::parse(&grid) {
            Ok(grid) => exec(load(&scenario), Command::Evaluate { grid, csv }, false),
            Err(e) => fail(e),
        },
        Cmd::Verify { scenario, flags } => {
            let (cmd, rc) = verify_cmd(flags);
            exec(load(&scenario), cmd, rc)
        }
        Cmd::FmtCheck { scenario } => exec(load(&scenario), Command::FmtCheck, false),
        Cmd::Trace { scenario, at, json } => match parse_scalar(&at) {
            Ok(at) => exec(load(&scenario), Command::Trace { at, json }, false),
            Err(e) => fail(e),
        },
        Cmd::Examples { action } => match action {
            ExampleAction::List => {
                for name in builtin_names() {
                    println!("{name}");
                }
                ExitCode::SUCCESS
            }
            ExampleAction::Export { name } => match builtin_text(&name) {
                Ok(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            },
            ExampleAction::Run { name, flags } => {
                let (cmd, rc) = verify_cmd(flags);
                exec(builtin(&name), cmd, rc)
            }
        },
    }
}
