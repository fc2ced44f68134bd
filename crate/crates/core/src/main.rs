use std::process::ExitCode;

use qsts_core::cli::{execute, parse_args, EXIT_RESOURCE};

fn main() -> ExitCode {
    let config = match parse_args(std::env::args_os()) {
        Ok(c) => c,
        Err(e) => return ExitCode::from(e.report() as u8),
    };
    let execution = execute(&config);
    let text = execution.render();
    match &config.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_RESOURCE as u8);
            }
        }
        None => print!("{text}"),
    }
    if let Some(err) = execution.report.get("error").and_then(|v| v.as_str()) {
        eprintln!("error: {err}");
    }
    ExitCode::from(execution.exit_code as u8)
}
