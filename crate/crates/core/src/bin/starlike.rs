use clap::error::ErrorKind;
use clap::Parser;

use starlike::cli::{run, Cli, EXIT_INVALID_INPUT, EXIT_OK};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID_INPUT,
            };
            std::process::exit(code);
        }
    };
    std::process::exit(run(&cli));
}
