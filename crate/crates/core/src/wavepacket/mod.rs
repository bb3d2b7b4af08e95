//! Gaussian wave packets built from the stationary modes, their moments in
//! time, and transmission times read off the transmitted part.

mod czt;
pub mod modes;
pub mod propagator;
pub mod spectrum;
pub mod times;
pub mod trace;

pub use modes::{synthesize, ModeSet};
pub use propagator::{crosscheck, CrankNicolson, CrosscheckGrid, CrosscheckReport, Propagation};
pub use spectrum::{gaussian_spectrum, PacketSpec, SpectralPacket, SpectrumConfig};
pub use times::{asymptotic_transmission_time, exact_transmission_time, transmission_times, TransmissionTimes};
pub use trace::{expectation_trace, PacketTrace, TraceConfig, TraceSample};
