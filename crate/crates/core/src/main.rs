use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    match facetag_privacy::cli::run(std::env::args_os()) {
        Ok(out) => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(facetag_privacy::Error::Usage(msg)) => {
            eprint!("{msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
