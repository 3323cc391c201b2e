mod args;
mod commands;
mod error;
mod input;
mod render;

use std::process::ExitCode;

use clap::Parser;
use liegeom::catalog::ReproduceOptions;
use serde_json::{json, Value};

use args::{CatalogCommand, Cli, Command, Format};
use commands::{FlagArgs, Outcome};
use error::CliError;
use render::Style;

const STRICT_EXIT: u8 = 3;

fn run(cli: &Cli, style: Style) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Check(input) => commands::check(&input::load(input)?, style),
        Command::Analyze(input) => commands::analyze(&input::load(input)?, style, ReproduceOptions::default()),
        Command::Sectional { input, u, v } => commands::sectional_cmd(&input::load(input)?, style, u, v),
        Command::Scalar(input) => commands::scalar(&input::load(input)?, style),
        Command::Parallel(input) => commands::parallel(&input::load(input)?, style),
        Command::Randers { input, pole, edge } => commands::randers(
            &input::load(input)?,
            style,
            FlagArgs { pole: pole.as_ref(), edge: edge.as_ref(), flag_only: false },
        ),
        Command::Flag { input, pole, edge } => commands::randers(
            &input::load(input)?,
            style,
            FlagArgs { pole: Some(pole), edge: Some(edge), flag_only: true },
        ),
        Command::Report(args) => {
            let out = commands::report(args)?;
            if let Some(path) = &args.output {
                let body = envelope(&out, 0, None);
                std::fs::write(path, pretty(&body) + "\n")
                    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
            }
            Ok(out)
        }
        Command::Catalog(CatalogCommand::List) => Ok(commands::catalog_list()),
    }
}

fn command_echo() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn envelope(out: &Outcome, exit_status: u8, error: Option<&CliError>) -> Value {
    let mut body = json!({
        "command": command_echo(),
        "results": out.results,
        "discrepancies": out.discrepancies,
        "exit_status": exit_status,
    });
    if let Some(d) = &out.digest {
        body["input_digest"] = json!(d);
    }
    if let Some(m) = out.mode {
        body["mode"] = json!(m);
    }
    if let Some(e) = error {
        body["error"] = json!({"kind": e.kind(), "message": e.to_string()});
    }
    body
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style { precision: cli.precision as usize };
    let (out, error) = match run(&cli, style) {
        Ok(out) => (out, None),
        Err(e) => (Outcome::default(), Some(e)),
    };
    let code = match &error {
        Some(e) => e.exit_code(),
        None if out.exit_code != 0 => out.exit_code,
        None if cli.strict && !out.discrepancies.is_empty() => STRICT_EXIT,
        None => 0,
    };
    match cli.format {
        Format::Json => println!("{}", pretty(&envelope(&out, code, error.as_ref()))),
        Format::Text => {
            print!("{}", out.text);
            if let Some(e) = &error {
                eprintln!("error: {e}");
            }
            if code == STRICT_EXIT {
                eprintln!("strict mode: {} discrepancies recorded", out.discrepancies.len());
            }
        }
    }
    ExitCode::from(code)
}
