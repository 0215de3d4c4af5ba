use std::process::ExitCode;

fn main() -> ExitCode {
    roughvol_cli::run_cli()
}
