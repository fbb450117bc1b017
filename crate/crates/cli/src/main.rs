use std::process;

use clap::Parser;
use minmax_hrde_cli::{exit, execute, Cli};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MINMAX_HRDE_LOG", "error"))
        .target(env_logger::Target::Stderr)
        .init();

    // clap exits with 2 on usage errors, which would read as "unstable".
    let cli = Cli::try_parse().unwrap_or_else(|e| {
        let _ = e.print();
        process::exit(if e.use_stderr() { exit::INPUT_ERROR } else { exit::OK })
    });
    match execute(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            process::exit(outcome.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            process::exit(e.exit_code());
        }
    }
}
