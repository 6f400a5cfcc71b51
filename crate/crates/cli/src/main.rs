use std::process::ExitCode;

fn main() -> ExitCode {
    pareto_cfar_cli::run_cli()
}
