use clap::Parser;
use zonofit_cli::{exit_code, run, RunConfig};

fn main() {
    let cfg = RunConfig::parse();
    if let Err(e) = run(&cfg) {
        eprintln!("error: {e:#}");
        std::process::exit(exit_code(&e));
    }
}
