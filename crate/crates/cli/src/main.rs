use std::io;
use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = panic::catch_unwind(|| {
        let stdout = io::stdout();
        let stderr = io::stderr();
        pvaudit_cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        // The default hook has already printed the panic message.
        Err(_) => ExitCode::from(1),
    }
}
