use clap::Parser;

use curvestat_cli::{configure_threads, run, Cli};

fn main() {
    // clap exits with 2 on usage errors and 0 for --help / --version
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let threads = std::env::var("CURVESTAT_THREADS").ok();
    if let Err(e) = configure_threads(threads.as_deref()).and_then(|()| run(cli)) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
