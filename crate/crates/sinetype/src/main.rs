use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(sinetype::cli::run())
}
