use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use logpois_cli::jobspec::{parse_mode, Overrides, COMMANDS};
use logpois_cli::report::EXIT_INPUT;
use logpois::spectral::NonresMode;

#[derive(Parser)]
#[command(name = "logpois", version, about = "Run a logpois job file and print its report")]
struct Args {
    /// Job file; `-` or nothing reads standard input.
    file: Option<PathBuf>,
    /// Truncation order.
    #[arg(long)]
    trunc: Option<i32>,
    /// Largest pole order allowed in intermediate results.
    #[arg(long)]
    pole_bound: Option<u8>,
    /// Non-resonance test: symmetric or as-stated.
    #[arg(long, value_parser = parse_mode)]
    mode: Option<NonresMode>,
    /// Runge-Kutta steps for transport-1d.
    #[arg(long)]
    steps: Option<usize>,
    /// Seed for randomly generated charts and connections.
    #[arg(long)]
    seed: Option<u64>,
    /// Print the command names and exit.
    #[arg(long)]
    list_commands: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list_commands {
        for (_, name) in COMMANDS {
            println!("{name}");
        }
        return ExitCode::SUCCESS;
    }
    let mut text = String::new();
    let read = match &args.file {
        Some(p) if p.as_os_str() != "-" => std::fs::read_to_string(p).map(|t| text = t),
        _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
    };
    if let Err(e) = read {
        eprintln!("logpois: cannot read input: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    let ov = Overrides { trunc: args.trunc, pole_bound: args.pole_bound, mode: args.mode, steps: args.steps, seed: args.seed };
    let rep = logpois_cli::execute(&text, &ov);
    print!("{rep}");
    if let logpois_cli::report::Status::Error { code, .. } = &rep.status {
        eprintln!("logpois: {} failed ({code})", rep.command);
    }
    ExitCode::from(rep.status.exit_code() as u8)
}
