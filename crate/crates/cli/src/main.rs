//! `tunnel-dwell`: dwell times and packet timing for rectangular barriers.
//!
//! Exit status: 0 on success, 2 for usage errors, 3 for numerical failures,
//! 1 for I/O errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;
mod params;
mod presets;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl From<tunnel_dwell::Error> for CliError {
    fn from(e: tunnel_dwell::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

/// Transmission, reflection and Büttiker dwell times for a rectangular
/// barrier or well. Units: eV, nm, fs, electron masses.
#[derive(Parser, Debug)]
#[command(name = "tunnel-dwell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Times at a single energy, as JSON
    Dwell(commands::DwellArgs),
    /// Times over a range of energies or widths, as CSV
    Sweep(commands::SweepArgs),
    /// Transmitted and reflected stationary states on an x grid, as CSV
    Wavefunction(commands::WavefunctionArgs),
    /// Moments of a Gaussian packet over time, as CSV, with a JSON summary
    Packet(commands::PacketArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dwell(a) => commands::dwell(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Wavefunction(a) => commands::wavefunction(a),
        Command::Packet(a) => commands::packet(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
