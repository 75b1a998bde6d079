use std::process::ExitCode;

fn main() -> ExitCode {
    let code = hardy_number_cli::run_args(std::env::args_os());
    ExitCode::from(code as u8)
}
