use std::process::ExitCode;

fn main() -> ExitCode {
    gridlines::cli::run()
}
