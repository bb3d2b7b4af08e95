//! Parameter sets of the five published figures.

use crate::params::Params;
use crate::CliError;

pub fn figure(n: u8) -> Result<(&'static str, Params), CliError> {
    let (command, text) = match n {
        1 => ("sweep", "param = energy\nfrom = 0.001\nto = 0.3\nsteps = 300\nV0 = -0.1\na = 0\nb = 30\nmass = 0.067\n"),
        2 => ("sweep", "param = energy\nfrom = 0.001\nto = 0.3\nsteps = 300\nV0 = 0.1\na = 0\nb = 15\nmass = 0.067\n"),
        3 => ("sweep", "param = width\nfrom = 0.5\nto = 60\nsteps = 120\nE = 0.11\nV0 = 0.1\na = 0\nmass = 0.067\n"),
        4 => ("sweep", "param = width\nfrom = 0.5\nto = 60\nsteps = 120\nE = 0.09\nV0 = 0.1\na = 0\nmass = 0.067\n"),
        5 => (
            "packet",
            "x0 = 0\nhalfwidth = 10\nE0 = 0.05\nmass = 0.067\na = 200\nb = 215\nV0 = 0.2\ntmax = 1500\ncomponent = tr\n",
        ),
        _ => return Err(CliError::Usage(format!("--figure must be 1..5 (got {n})"))),
    };
    Ok((command, Params::parse(text, &format!("figure {n}"))?))
}

/// Preset for `command`, or a usage error if figure `n` belongs to another
/// subcommand.
pub fn for_command(n: Option<u8>, command: &str) -> Result<Params, CliError> {
    let Some(n) = n else { return Ok(Params::default()) };
    let (owner, params) = figure(n)?;
    if owner != command {
        return Err(CliError::Usage(format!("figure {n} is a `{owner}` preset, not `{command}`")));
    }
    Ok(params)
}
