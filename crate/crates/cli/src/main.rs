use clap::Parser;
use rsm_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let outcome =
        rsm_cli::configure_threads(std::env::var("RSM_THREADS").ok().as_deref()).and_then(|()| rsm_cli::run(&cli));
    if let Err(e) = outcome {
        eprintln!("rsm: {e}");
        std::process::exit(e.exit_code());
    }
}
