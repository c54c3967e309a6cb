use std::process::ExitCode;

fn main() -> ExitCode {
    twocenters::cli::main_with(std::env::args_os())
}
