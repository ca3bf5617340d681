use clap::Parser;
use pxp2::cli::{exit_code, run, RunConfig};

fn main() {
    let config = RunConfig::parse();
    let result = run(&config);
    match &result {
        Ok(m) if !m.is_complete() => {
            eprintln!("{}", serde_json::to_string_pretty(m).unwrap_or_default());
        }
        Ok(_) => {}
        Err(e) => eprintln!("pxp2 {}: {e}", config.command.name()),
    }
    std::process::exit(exit_code(&result));
}
