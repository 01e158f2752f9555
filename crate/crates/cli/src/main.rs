mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Format};
use commands::Failure;

fn run(cli: Cli) -> (String, Result<(), Failure>) {
    let cfg = match commands::solver_config(&cli.overrides) {
        Ok(c) => c,
        Err(e) => return (String::new(), Err(e)),
    };
    let tabular = matches!(cli.command, Command::Table { .. } | Command::Sweep(_));
    let format = cli.format.unwrap_or(if tabular { Format::Csv } else { Format::Json });
    let plain = |r: Result<String, Failure>| match r {
        Ok(s) => (s, Ok(())),
        Err(e) => (String::new(), Err(e)),
    };
    match &cli.command {
        Command::Solve { spec } => plain(commands::solve_cmd(spec, &cfg, format)),
        Command::Sweep(a) => plain(commands::sweep_cmd(a, &cfg, format)),
        Command::Table { table } => commands::table_cmd(*table, &cfg, format),
        Command::Verify { spec, result } => commands::verify_cmd(spec, result, &cli.overrides, format),
        Command::Mc {
            spec,
            result,
            theta,
            samples,
        } => plain(commands::mc_cmd(
            spec,
            result,
            *theta,
            *samples,
            cli.overrides.seed,
            format,
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = cli.out.clone();
    let (text, status) = run(cli);
    if !text.is_empty() {
        let written = match &out {
            Some(path) => std::fs::write(path, &text),
            None => std::io::stdout().write_all(text.as_bytes()),
        };
        if let Err(e) = written {
            eprintln!("error: cannot write output: {e}");
            return ExitCode::from(2);
        }
    }
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
