use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use teleheat::cli::{load, run_experiment, Args};

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("teleheat: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(args: &Args) -> anyhow::Result<()> {
    let cfg = load(args)?;
    let tables = run_experiment(&cfg)?;
    if cfg.out_path.is_none() {
        let mut stdout = std::io::stdout().lock();
        for t in &tables {
            stdout.write_all(t.to_csv_string()?.as_bytes())?;
        }
    }
    Ok(())
}
