use clap::Parser;

use glidepath::cli::{run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let level = match config.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .init();
    std::process::exit(run(&config));
}
