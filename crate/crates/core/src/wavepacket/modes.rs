use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::scattering::{evaluate, BarrierSpec, Component, ModeCoefficients, StationaryState, WaveNumbers};
use crate::units;

use super::spectrum::SpectralPacket;

/// The stationary modes of one component, each pre-multiplied by its
/// spectral weight μ·c(k)/√(2π), so that
/// `ψ(x, t) = Σ_n coefs_n(x)·e^{−iω_n t}`.
#[derive(Debug, Clone)]
pub struct ModeSet {
    pub barrier: BarrierSpec,
    pub component: Component,
    pub k: Vec<f64>,
    pub omega: Vec<f64>,
    pub wavenumbers: Vec<WaveNumbers>,
    pub coefs: Vec<ModeCoefficients>,
    pub t_coef: Vec<f64>,
    /// μ_n|c_n|².
    pub spectral_mass: Vec<f64>,
}

impl ModeSet {
    pub fn new(packet: &SpectralPacket, barrier: &BarrierSpec, component: Component, exec: Execution) -> Result<Self> {
        barrier.validate()?;
        if packet.spec.mass != barrier.mass {
            return Err(Error::invalid(format!(
                "packet mass {} differs from barrier mass {}",
                packet.spec.mass, barrier.mass
            )));
        }
        let mass = barrier.mass;
        let inv_sqrt_2pi = 1.0 / std::f64::consts::TAU.sqrt();
        let items: Vec<usize> = (0..packet.len()).collect();
        let built = par::try_map_with(exec, &items, |&n| -> Result<_> {
            let k = packet.k_grid[n];
            let energy = units::kinetic_energy(mass, k);
            let st = StationaryState::new(barrier, energy)?;
            let w = packet.weights[n] * (packet.measure[n] * inv_sqrt_2pi);
            Ok((st.wn, st.coefficients(component).scaled(w), st.amps.t_coef))
        })?;
        let omega = packet.k_grid.iter().map(|&k| units::angular_frequency(units::kinetic_energy(mass, k))).collect();
        let spectral_mass = packet.weights.iter().zip(&packet.measure).map(|(c, mu)| mu * c.norm_sqr()).collect();
        let mut wavenumbers = Vec::with_capacity(built.len());
        let mut coefs = Vec::with_capacity(built.len());
        let mut t_coef = Vec::with_capacity(built.len());
        for (wn, c, t) in built {
            wavenumbers.push(wn);
            coefs.push(c);
            t_coef.push(t);
        }
        Ok(ModeSet { barrier: *barrier, component, k: packet.k_grid.clone(), omega, wavenumbers, coefs, t_coef, spectral_mass })
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// Σ μ|c|²T: the norm carried by the transmitted component once it is
    /// fully separated from the barrier.
    pub fn transmitted_norm(&self) -> f64 {
        self.spectral_mass.iter().zip(&self.t_coef).map(|(m, t)| m * t).sum()
    }

    /// Σ μ|c|²R.
    pub fn reflected_norm(&self) -> f64 {
        self.spectral_mass.iter().zip(&self.t_coef).map(|(m, t)| m * (1.0 - t)).sum()
    }

    /// ψ(x, t) and ∂ₓψ(x, t) by direct summation over modes.
    pub fn field(&self, x: f64, t: f64) -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for ((c, wn), &w) in self.coefs.iter().zip(&self.wavenumbers).zip(&self.omega) {
            let (p, dp) = evaluate(c, &self.barrier, wn, x);
            let phase = Complex64::cis(-w * t);
            v += p * phase;
            dv += dp * phase;
        }
        (v, dv)
    }

    pub fn sample(&self, xs: &[f64], t: f64, exec: Execution) -> Vec<Complex64> {
        par::map_with(exec, xs, |&x| self.field(x, t).0)
    }
}

/// ψ(x, t) of one component on the points `xs`.
pub fn synthesize(
    component: Component,
    packet: &SpectralPacket,
    barrier: &BarrierSpec,
    xs: &[f64],
    t: f64,
    exec: Execution,
) -> Result<Vec<Complex64>> {
    if xs.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::invalid("x grid must be sorted"));
    }
    Ok(ModeSet::new(packet, barrier, component, exec)?.sample(xs, t, exec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::spectrum::{gaussian_spectrum, PacketSpec, SpectrumConfig};

    fn setup(modes: usize) -> (SpectralPacket, BarrierSpec) {
        let spec = PacketSpec::new(0.0, 10.0, 0.05, 0.067).unwrap();
        let packet = gaussian_spectrum(&spec, &SpectrumConfig { modes, span_sigmas: 8.0 }).unwrap();
        (packet, BarrierSpec::new(0.2, 200.0, 215.0, 0.067).unwrap())
    }

    fn gaussian_check(e0: f64, tol: f64) {
        let spec = PacketSpec::new(0.0, 10.0, e0, 0.067).unwrap();
        let packet = gaussian_spectrum(&spec, &SpectrumConfig { modes: 1024, span_sigmas: 8.0 }).unwrap();
        let barrier = BarrierSpec::new(0.2, 200.0, 215.0, 0.067).unwrap();
        let xs: Vec<f64> = (0..41).map(|i| -40.0 + 2.0 * i as f64).collect();
        let psi = synthesize(Component::Full, &packet, &barrier, &xs, 0.0, Execution::Sequential).unwrap();
        let l = 10.0;
        let k0 = spec.k0();
        let amp = (2.0 * std::f64::consts::PI * l * l).powf(-0.25);
        for (x, p) in xs.iter().zip(&psi) {
            let expected = amp * (-x * x / (4.0 * l * l)).exp() * Complex64::cis(k0 * x);
            assert!((p - expected).norm() < tol * amp, "{x}: {p} vs {expected}");
        }
    }

    #[test]
    fn initial_full_field_is_the_gaussian() {
        // k grid fully inside k > 0; c(k) cut at ±8σ_k where it is still e^{−16}
        gaussian_check(0.2, 1e-7);
        // k ≤ 0 tail cut off: amplitude error of order exp(−k0²l²)/(k0 l)
        gaussian_check(0.05, 3e-5);
    }

    #[test]
    fn components_add_up() {
        let (packet, barrier) = setup(256);
        let xs: Vec<f64> = (0..60).map(|i| 150.0 + 2.0 * i as f64).collect();
        let exec = Execution::Sequential;
        for t in [0.0, 300.0, 600.0] {
            let tr = synthesize(Component::Transmitted, &packet, &barrier, &xs, t, exec).unwrap();
            let rf = synthesize(Component::Reflected, &packet, &barrier, &xs, t, exec).unwrap();
            let full = synthesize(Component::Full, &packet, &barrier, &xs, t, exec).unwrap();
            for ((a, b), c) in tr.iter().zip(&rf).zip(&full) {
                assert!((a + b - c).norm() <= 1e-12 * c.norm().max(1e-3));
            }
            for (x, r) in xs.iter().zip(&rf) {
                if *x >= barrier.center() {
                    assert_eq!(*r, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn mass_mismatch_is_rejected() {
        let (packet, _) = setup(16);
        let other = BarrierSpec::new(0.2, 200.0, 215.0, 1.0).unwrap();
        assert!(ModeSet::new(&packet, &other, Component::Full, Execution::Sequential).is_err());
    }
}
