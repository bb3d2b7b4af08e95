use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units;

/// Gaussian initial state `exp(−(x−x0)²/(4l²))·e^{ik0 x}`; the density has
/// standard deviation `halfwidth = l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketSpec {
    pub x0: f64,
    pub halfwidth: f64,
    /// Mean kinetic energy setting k0 (eV).
    pub e0: f64,
    pub mass: f64,
}

impl PacketSpec {
    pub fn new(x0: f64, halfwidth: f64, e0: f64, mass: f64) -> Result<Self> {
        let spec = PacketSpec { x0, halfwidth, e0, mass };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.x0.is_finite() {
            return Err(Error::invalid("packet centre must be finite"));
        }
        if !(self.halfwidth > 0.0) || !self.halfwidth.is_finite() {
            return Err(Error::invalid(format!("packet halfwidth must be positive (got {})", self.halfwidth)));
        }
        if !(self.e0 > 0.0) || !self.e0.is_finite() {
            return Err(Error::invalid(format!("packet energy must be positive (got {})", self.e0)));
        }
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(Error::invalid(format!("mass must be positive (got {})", self.mass)));
        }
        Ok(())
    }

    pub fn k0(&self) -> f64 {
        units::wavenumber_sq(self.mass, self.e0).sqrt()
    }

    /// Standard deviation of |c(k)|², 1/(2l).
    pub fn sigma_k(&self) -> f64 {
        0.5 / self.halfwidth
    }

    pub fn group_velocity(&self) -> f64 {
        units::velocity(self.mass, self.k0())
    }

    /// Free-evolution spatial standard deviation at time `t` (fs).
    pub fn free_width(&self, t: f64) -> f64 {
        let l = self.halfwidth;
        let r = units::hbar_over_me() / self.mass * t / (2.0 * l * l);
        l * (1.0 + r * r).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumConfig {
    pub modes: usize,
    /// Half-span of the k grid in units of σ_k.
    pub span_sigmas: f64,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig { modes: 4096, span_sigmas: 8.0 }
    }
}

/// Truncated weight above which the packet is flagged as not cleanly
/// right-moving.
pub const TRUNCATION_WARNING: f64 = 1e-3;

/// c(k) on a uniform positive grid with trapezoid measure, normalised so
/// that Σ μ|c|² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPacket {
    pub spec: PacketSpec,
    pub k_grid: Vec<f64>,
    pub weights: Vec<Complex64>,
    /// Trapezoid weights μ_n (nm⁻¹).
    pub measure: Vec<f64>,
    /// Σ μ|c|² before renormalisation.
    pub norm: f64,
    /// Fraction of |c(k)|² outside the grid, including all of k ≤ 0.
    pub truncated_weight: f64,
    pub warning: bool,
}

impl SpectralPacket {
    pub fn dk(&self) -> f64 {
        self.k_grid[1] - self.k_grid[0]
    }

    pub fn len(&self) -> usize {
        self.k_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k_grid.is_empty()
    }

    /// Σ μ_n |c_n|² f(k_n).
    pub fn average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.k_grid
            .iter()
            .zip(&self.weights)
            .zip(&self.measure)
            .map(|((&k, c), &mu)| mu * c.norm_sqr() * f(k))
            .sum()
    }
}

pub fn gaussian_spectrum(spec: &PacketSpec, config: &SpectrumConfig) -> Result<SpectralPacket> {
    spec.validate()?;
    if config.modes < 2 {
        return Err(Error::invalid("spectral grid needs at least two modes"));
    }
    if !(config.span_sigmas > 0.0) {
        return Err(Error::invalid("spectral span must be positive"));
    }
    let k0 = spec.k0();
    let sk = spec.sigma_k();
    let floor = 1e-3 * sk;
    let k_lo = (k0 - config.span_sigmas * sk).max(floor);
    let k_hi = k0 + config.span_sigmas * sk;
    let n = config.modes;
    let dk = (k_hi - k_lo) / (n - 1) as f64;
    let l2 = spec.halfwidth * spec.halfwidth;
    let k_grid: Vec<f64> = (0..n).map(|i| k_lo + dk * i as f64).collect();
    let mut weights: Vec<Complex64> =
        k_grid.iter().map(|&k| (-(k - k0) * (k - k0) * l2).exp() * Complex64::cis(-k * spec.x0)).collect();
    let mut measure = vec![dk; n];
    measure[0] *= 0.5;
    measure[n - 1] *= 0.5;
    let norm: f64 = weights.iter().zip(&measure).map(|(c, mu)| mu * c.norm_sqr()).sum();
    let scale = 1.0 / norm.sqrt();
    for c in &mut weights {
        *c *= scale;
    }
    // |c|² ∝ exp(−(k−k0)²/(2σ_k²)); tails in closed form
    let z = std::f64::consts::SQRT_2 * spec.halfwidth;
    let truncated_weight = 0.5 * libm::erfc(z * (k0 - k_lo)) + 0.5 * libm::erfc(z * (k_hi - k0));
    Ok(SpectralPacket {
        spec: *spec,
        k_grid,
        weights,
        measure,
        norm,
        truncated_weight,
        warning: truncated_weight > TRUNCATION_WARNING,
    })
}
