use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = wallcross_cli::run_command(std::env::args_os());
    if code == wallcross_cli::EXIT_OK {
        print!("{out}");
        let _ = std::io::stdout().flush();
    } else {
        eprint!("{out}");
    }
    ExitCode::from(code as u8)
}
