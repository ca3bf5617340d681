// Driving the command-line layer from code: parse flags, run, read the
// configuration back from the output header.

use clap::Parser;
use pxp2::cli::{exit_code, run, RunConfig};

pub fn run_example(dir: &std::path::Path) -> pxp2::Result<()> {
    let out = dir.join("scan.csv");
    let args = ["pxp2", "ground-scan", "--L", "12", "--delta-range", "-2", "2", "5", "--broken", "--out"];
    let config = RunConfig::parse_from(args.iter().copied().chain([out.to_str().unwrap()]));
    let manifest = run(&config);
    println!("exit code {}", exit_code(&manifest));
    let text = std::fs::read_to_string(&out)?;
    print!("{text}");
    let echoed = RunConfig::from_header(text.as_bytes())?;
    assert_eq!(echoed, config);
    Ok(())
}

fn main() -> pxp2::Result<()> {
    run_example(&std::env::temp_dir())
}
