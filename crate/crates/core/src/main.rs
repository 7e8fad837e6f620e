use std::process::ExitCode;

fn main() -> ExitCode {
    if let Err(e) = linrep::cli::configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(linrep::cli::exit::INPUT_ERROR);
    }
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = linrep::cli::run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code)
}
