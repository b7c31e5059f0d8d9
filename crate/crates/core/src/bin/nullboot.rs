use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nullboot_core::cli::{latex::solution_latex, parse_config, render_report, run, Mode, EXIT_CONFIG, EXIT_FAILURE};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    Solve,
    Verify,
    Compare,
}

impl From<Command> for Mode {
    fn from(c: Command) -> Mode {
        match c {
            Command::Solve => Mode::Solve,
            Command::Verify => Mode::Verify,
            Command::Compare => Mode::Compare,
        }
    }
}

/// Exact perturbative null bootstrap.
#[derive(Parser, Debug)]
#[command(name = "nullboot", version)]
struct Args {
    command: Command,
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render energies and ladder operators as LaTeX.
    #[arg(long)]
    latex: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG as u8 } else { 0 });
        }
    };
    let text = match fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let outcome = run(&config, args.command.into());
    let report = render_report(&outcome.report);
    let out = args.out.or(config.output_path.clone());
    match &out {
        Some(path) => {
            if let Err(e) = fs::write(path, &report) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_FAILURE as u8);
            }
        }
        None if !args.latex => print!("{report}"),
        None => {}
    }
    if args.latex {
        match &outcome.solution {
            Some(s) => print!("{}", solution_latex(s)),
            None if out.is_none() => print!("{report}"),
            None => {}
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
