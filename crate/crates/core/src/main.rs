use std::io;
use std::process::ExitCode;

use bootperc::cli_io::{run_command, RunEnv};

fn main() -> ExitCode {
    let env = match RunEnv::from_env() {
        Ok(env) => env,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let code = run_command(std::env::args_os(), &env, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
