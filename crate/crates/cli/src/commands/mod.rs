use std::io::Write;

use berryquench_core::{ChainSpec, QuenchSchedule};

use crate::args::Command;
use crate::{CliError, CliResult};

pub mod audit;
pub mod quench;
pub mod sweep;
pub mod trace;
pub mod validate;

/// Run one subcommand; the returned code is used when no error escapes.
pub fn dispatch(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Trace(a) => trace::run(a, out, err),
        Command::Quench(a) => quench::run(a, out, err),
        Command::Sweep(a) => sweep::run(a, out, err),
        Command::Audit(a) => audit::run(a, out, err),
        Command::Validate(a) => validate::run(a, out, err),
    }
}

pub(crate) fn chain(n: usize, alpha: f64) -> CliResult<ChainSpec> {
    ChainSpec::new(n, alpha).map_err(|e| CliError::Usage(e.to_string()))
}

pub(crate) fn check_alpha(alpha: f64) -> CliResult<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(CliError::Usage(format!(
            "--alpha {alpha} is out of range: anisotropy must lie in [0, 1]"
        )));
    }
    Ok(())
}

pub(crate) fn schedule(tau_q: f64) -> CliResult<QuenchSchedule> {
    QuenchSchedule::new(tau_q).map_err(|e| CliError::Usage(e.to_string()))
}
