use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = racebet::cli::run(std::env::args_os());
    // A closed pipe is not worth a panic.
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
