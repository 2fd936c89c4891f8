use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(oprange::cli::run(std::env::args_os()))
}
