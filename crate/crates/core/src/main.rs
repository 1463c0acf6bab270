use std::process::ExitCode;

use ramexp::{cli, Error};

fn main() -> ExitCode {
    match cli::main_with(std::env::args_os()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
