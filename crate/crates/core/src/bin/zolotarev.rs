use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(zolotarev::cli::main_with(std::env::args_os()))
}
