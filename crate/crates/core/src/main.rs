use clap::Parser;
use qcauchy::cli::{run, Cli};

fn main() {
    if let Some(n) = std::env::var("QCAUCHY_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
    {
        qcauchy::par::init_threads(n);
    }
    let cli = Cli::parse();
    std::process::exit(run(&cli));
}
