use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(lmgc::run(std::env::args_os()))
}
