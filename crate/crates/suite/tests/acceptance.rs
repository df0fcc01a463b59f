use std::process::ExitCode;

fn main() -> ExitCode {
    if ctk_suite::run() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
