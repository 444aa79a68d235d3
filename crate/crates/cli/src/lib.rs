//! The `rmc` command-line front end: safety checks, certificate checks, the
//! benchmark table, oracle dumps and automaton export.

pub mod args;
pub mod commands;
pub mod report;

pub use args::{Cli, Command};
pub use commands::run;
pub use report::RunReport;

/// Default state budget when neither `--budget-states` nor the environment sets one.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// `--budget-states`, else `RMC_BUDGET_STATES`, else [`DEFAULT_BUDGET`].
pub fn resolve_budget(flag: Option<usize>) -> anyhow::Result<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var("RMC_BUDGET_STATES") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| anyhow::anyhow!("RMC_BUDGET_STATES must be a number, found `{v}`")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}
