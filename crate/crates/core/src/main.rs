use std::process::ExitCode;

fn main() -> ExitCode {
    fracyamabe::cli::main()
}
