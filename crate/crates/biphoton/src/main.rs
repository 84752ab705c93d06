use std::process::ExitCode;

fn main() -> ExitCode {
    biphoton::cli::main_entry()
}
