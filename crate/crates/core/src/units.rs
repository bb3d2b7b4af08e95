//! Fixed unit system: eV, nm, fs, and masses in units of the electron mass.

/// Reduced Planck constant in eV·fs.
pub const HBAR_EV_FS: f64 = 0.658_211_956_9;

/// ħ²/(2mₑ) in eV·nm².
pub const HBAR2_OVER_2ME: f64 = 0.038_099_8;

/// ħ/mₑ in nm²/fs.
#[inline]
pub fn hbar_over_me() -> f64 {
    2.0 * HBAR2_OVER_2ME / HBAR_EV_FS
}

/// Squared wavenumber (nm⁻²) of a particle of `mass` (mₑ) with kinetic energy
/// `energy` (eV). Negative energies give negative values.
#[inline]
pub fn wavenumber_sq(mass: f64, energy: f64) -> f64 {
    mass * energy / HBAR2_OVER_2ME
}

/// Kinetic energy (eV) carried by wavenumber `k` (nm⁻¹).
#[inline]
pub fn kinetic_energy(mass: f64, k: f64) -> f64 {
    HBAR2_OVER_2ME * k * k / mass
}

/// Group velocity ħk/m in nm/fs.
#[inline]
pub fn velocity(mass: f64, k: f64) -> f64 {
    hbar_over_me() * k / mass
}

/// Angular frequency E/ħ in rad/fs.
#[inline]
pub fn angular_frequency(energy: f64) -> f64 {
    energy / HBAR_EV_FS
}
