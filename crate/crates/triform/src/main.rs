use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(triform::cli::run(std::env::args()) as u8)
}
