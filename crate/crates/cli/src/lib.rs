//! Job files in, canonical reports out.

pub mod jobspec;
pub mod report;
pub mod run;

use jobspec::{parse_jobspec, Overrides};
use report::Report;

/// Parses and runs a job; parse failures become input-error reports.
pub fn execute(text: &str, ov: &Overrides) -> Report {
    match parse_jobspec(text, ov) {
        Ok(job) => run::run(&job),
        Err(e) => {
            let command = text
                .lines()
                .filter_map(|l| l.split_once('='))
                .find(|(k, _)| k.trim() == "command")
                .map(|(_, v)| v.trim().to_string())
                .unwrap_or_else(|| "unknown".into());
            run::error_report(&command, &e)
        }
    }
}
