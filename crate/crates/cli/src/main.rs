use std::io;
use std::process::ExitCode;

fn main() -> anyhow::Result<ExitCode> {
    let code = paso_cli::run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    Ok(ExitCode::from(u8::try_from(code)?))
}
