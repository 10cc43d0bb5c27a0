use std::process::ExitCode;

use clap::Parser;
use cluster::args::Cli;

fn main() -> ExitCode {
    // clap itself exits 2 on unparsable flags and 0 on --help/--version
    let cli = Cli::parse();
    match cluster::dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
