mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use report::RunReport;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let timing_ms = cli.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    if cli.json {
        let report = RunReport {
            command: outcome.command,
            inputs: outcome.inputs,
            outputs: outcome.outputs,
            timing_ms,
            seed: cli.seed,
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("run report serializes")
        );
    } else {
        print!("{}", outcome.text);
        if let Some(ms) = timing_ms {
            println!("time  {ms:.1} ms");
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
