use std::process::ExitCode;

fn main() -> ExitCode {
    keyclass::cli::main_with_args(std::env::args_os())
}
