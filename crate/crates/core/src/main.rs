use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = rectdual::cli::run_from(std::env::args_os());
    if let Some(payload) = &outcome.payload {
        println!("{payload}");
    }
    if !outcome.message.is_empty() {
        eprintln!("{}", outcome.message);
    }
    ExitCode::from(outcome.exit_code as u8)
}
