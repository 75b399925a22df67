use std::io::{self, Write};
use std::process::ExitCode;

use gatesynth::{execute, parse_config, reevaluate, Command, ConfigError};

fn main() -> ExitCode {
    let command = match parse_config(std::env::args_os()) {
        Ok(c) => c,
        Err(ConfigError::Usage(e)) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match command {
        Command::Run(cfg) => execute(&cfg, &mut out).map(|_| ()),
        Command::Reevaluate(cfg) => reevaluate(&cfg).and_then(|r| Ok(write!(out, "{r}")?)),
    };
    match result.and_then(|()| Ok(out.flush()?)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
