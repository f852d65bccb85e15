use std::process::ExitCode;

fn main() -> ExitCode {
    electrocap::cli::main()
}
