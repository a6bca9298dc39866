use std::process::ExitCode;

fn main() -> ExitCode {
    match dupdiff_cli::run(std::env::args()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            // clap help/version arrive as errors with their own formatting
            if let Some(clap_err) = err.downcast_ref::<clap::Error>() {
                clap_err.print().ok();
                return ExitCode::from(if clap_err.use_stderr() { 2 } else { 0 });
            }
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
