use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = groupshift_cli::run_command(std::env::args_os());
    let mut stdout = std::io::stdout().lock();
    if code == groupshift_cli::EXIT_USAGE {
        eprint!("{out}");
    } else if stdout.write_all(out.as_bytes()).is_err() {
        return ExitCode::from(groupshift_cli::EXIT_USAGE as u8);
    }
    ExitCode::from(code as u8)
}
