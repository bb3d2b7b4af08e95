//! Stationary and time-dependent tunnelling times for a one-dimensional
//! rectangular potential barrier (or well).
//!
//! The stationary scattering state is split into a transmitted and a
//! reflected part ([`scattering`]). Their dwell times, together with the
//! classic dwell time of the full state, are evaluated in closed form and by
//! direct quadrature of the defining integrals ([`dwell`]). Gaussian wave
//! packets are synthesized from the same stationary modes to time the
//! transmitted part of a moving packet ([`wavepacket`]).
//!
//! Units are fixed throughout: energies in eV, lengths in nm, times in fs and
//! masses in units of the free electron mass (see [`units`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Tabulated nodes and reference values keep all published digits.
#![allow(clippy::excessive_precision)]

pub mod dwell;
pub mod error;
pub mod numerics;
pub mod par;
pub mod scattering;
pub mod units;
pub mod wavepacket;

pub use error::{Error, Result};
pub use num_complex::Complex64;
