use std::process::ExitCode;

fn main() -> ExitCode {
    hiercon_cli::run(std::env::args_os())
}
