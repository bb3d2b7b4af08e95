//! Crank–Nicolson grid propagation, used only as an independent check of the
//! spectral synthesis on moderate barriers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::par::Execution;
use crate::scattering::{BarrierSpec, Component};
use crate::units;

use super::modes::ModeSet;
use super::spectrum::SpectralPacket;

/// Largest accepted relative change of the grid norm over a run.
pub const NORM_DRIFT_BOUND: f64 = 1e-8;

/// Minimum grid points per shortest wavelength in the packet.
pub const POINTS_PER_WAVELENGTH: f64 = 16.0;

/// `(1 + iΔt H/2ħ) ψⁿ⁺¹ = (1 − iΔt H/2ħ) ψⁿ` on a uniform grid with ψ = 0
/// just outside both ends. Nodes sitting exactly on a barrier edge carry V0/2.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    pub x: Vec<f64>,
    pub dx: f64,
    pub dt: f64,
    pub potential: Vec<f64>,
    off: Complex64,
    diag: Vec<Complex64>,
    // Thomas factorization of the implicit matrix.
    c_prime: Vec<Complex64>,
    inv_den: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct Propagation {
    pub psi: Vec<Complex64>,
    pub steps: usize,
    pub dt: f64,
    pub norm_start: f64,
    pub norm_end: f64,
}

impl Propagation {
    pub fn norm_drift(&self) -> f64 {
        ((self.norm_end - self.norm_start) / self.norm_start).abs()
    }
}

impl CrankNicolson {
    pub fn new(barrier: &BarrierSpec, x_min: f64, x_max: f64, dx: f64, dt: f64) -> Result<Self> {
        barrier.validate()?;
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::invalid(format!("empty grid [{x_min}, {x_max}]")));
        }
        if !(dx > 0.0) || !(dt > 0.0) || !dx.is_finite() || !dt.is_finite() {
            return Err(Error::invalid("grid spacing and time step must be positive"));
        }
        let n = ((x_max - x_min) / dx).round() as usize + 1;
        if n < 3 {
            return Err(Error::invalid("grid needs at least three points"));
        }
        let x: Vec<f64> = (0..n).map(|j| x_min + j as f64 * dx).collect();
        let edge_tol = 1e-9 * dx;
        let potential: Vec<f64> = x
            .iter()
            .map(|&xj| {
                if (xj - barrier.a).abs() <= edge_tol || (xj - barrier.b).abs() <= edge_tol {
                    0.5 * barrier.v0
                } else {
                    barrier.potential(xj)
                }
            })
            .collect();
        let kin = units::HBAR2_OVER_2ME / barrier.mass / (dx * dx);
        let alpha = dt / (2.0 * units::HBAR_EV_FS);
        let off = Complex64::new(0.0, -alpha * kin);
        let diag: Vec<Complex64> = potential.iter().map(|&v| Complex64::new(1.0, alpha * (2.0 * kin + v))).collect();
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_den = vec![Complex64::new(0.0, 0.0); n];
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let den = diag[j] - off * prev;
            inv_den[j] = den.inv();
            c_prime[j] = off * inv_den[j];
            prev = c_prime[j];
        }
        Ok(CrankNicolson { x, dx, dt, potential, off, diag, c_prime, inv_den })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Rejects grids with fewer than 16 points per wavelength at `k_max`.
    pub fn check_resolution(&self, k_max: f64) -> Result<()> {
        let points = std::f64::consts::TAU / (k_max * self.dx);
        if points < POINTS_PER_WAVELENGTH {
            return Err(Error::invalid(format!(
                "dx = {} resolves only {points:.2} points per wavelength at k = {k_max}",
                self.dx
            )));
        }
        Ok(())
    }

    /// Σ|ψ|²·dx.
    pub fn norm(&self, psi: &[Complex64]) -> f64 {
        psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dx
    }

    pub fn step(&self, psi: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let n = psi.len();
        scratch.clear();
        scratch.resize(n, Complex64::new(0.0, 0.0));
        let zero = Complex64::new(0.0, 0.0);
        let mut prev = zero;
        for j in 0..n {
            let left = if j > 0 { psi[j - 1] } else { zero };
            let right = if j + 1 < n { psi[j + 1] } else { zero };
            let rhs = 2.0 * psi[j] - (self.diag[j] * psi[j] + self.off * (left + right));
            prev = (rhs - self.off * prev) * self.inv_den[j];
            scratch[j] = prev;
        }
        psi[n - 1] = scratch[n - 1];
        for j in (0..n - 1).rev() {
            psi[j] = scratch[j] - self.c_prime[j] * psi[j + 1];
        }
    }

    /// Advances `psi0` by `t` fs. The step is shrunk so that an integer number
    /// of steps lands exactly on `t`.
    pub fn propagate(&self, psi0: &[Complex64], t: f64) -> Result<Propagation> {
        if psi0.len() != self.len() {
            return Err(Error::invalid(format!("field has {} points, grid has {}", psi0.len(), self.len())));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("propagation time must be non-negative (got {t})")));
        }
        let steps = (t / self.dt).ceil() as usize;
        let stepper = if steps > 0 && (t / steps as f64 - self.dt).abs() > 1e-12 * self.dt {
            CrankNicolson::rebuild(self, t / steps as f64)
        } else {
            self.clone()
        };
        let mut psi = psi0.to_vec();
        let norm_start = self.norm(&psi);
        let mut scratch = Vec::with_capacity(psi.len());
        for _ in 0..steps {
            stepper.step(&mut psi, &mut scratch);
        }
        let norm_end = self.norm(&psi);
        let run = Propagation { psi, steps, dt: stepper.dt, norm_start, norm_end };
        let drift = run.norm_drift();
        if !(drift <= NORM_DRIFT_BOUND) {
            return Err(Error::SchemeInstability { drift, bound: NORM_DRIFT_BOUND });
        }
        Ok(run)
    }

    fn rebuild(&self, dt: f64) -> Self {
        let n = self.len();
        let alpha_ratio = dt / self.dt;
        let off = self.off * alpha_ratio;
        let diag: Vec<Complex64> =
            self.diag.iter().map(|d| Complex64::new(1.0, d.im * alpha_ratio)).collect();
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_den = vec![Complex64::new(0.0, 0.0); n];
        let mut prev = Complex64::new(0.0, 0.0);
        for j in 0..n {
            inv_den[j] = (diag[j] - off * prev).inv();
            c_prime[j] = off * inv_den[j];
            prev = c_prime[j];
        }
        CrankNicolson { x: self.x.clone(), dx: self.dx, dt, potential: self.potential.clone(), off, diag, c_prime, inv_den }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrosscheckGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub dx: f64,
    pub dt: f64,
    pub t_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckReport {
    pub t_max: f64,
    pub points: usize,
    pub steps: usize,
    /// ‖ψ_grid − ψ_spectral‖ at `t_max`.
    pub l2_distance: f64,
    pub norm_drift: f64,
    pub spectral_norm: f64,
}

/// Starts the grid propagator from the spectral full field at t = 0 and
/// compares both at `t_max`.
pub fn crosscheck(
    packet: &SpectralPacket,
    barrier: &BarrierSpec,
    grid: &CrosscheckGrid,
    exec: Execution,
) -> Result<CrosscheckReport> {
    let cn = CrankNicolson::new(barrier, grid.x_min, grid.x_max, grid.dx, grid.dt)?;
    let k_max = packet.k_grid.last().copied().unwrap_or(0.0);
    cn.check_resolution(k_max)?;
    let modes = ModeSet::new(packet, barrier, Component::Full, exec)?;
    let start = modes.sample(&cn.x, 0.0, exec);
    let run = cn.propagate(&start, grid.t_max)?;
    let reference = modes.sample(&cn.x, grid.t_max, exec);
    let diff: f64 = run.psi.iter().zip(&reference).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>() * cn.dx;
    Ok(CrosscheckReport {
        t_max: grid.t_max,
        points: cn.len(),
        steps: run.steps,
        l2_distance: diff.sqrt(),
        norm_drift: run.norm_drift(),
        spectral_norm: cn.norm(&reference),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::spectrum::{gaussian_spectrum, PacketSpec, SpectrumConfig};

    // Exact free evolution of exp(−(x−x0)²/(4l²) + ik0(x−x0)).
    fn free_gaussian(x0: f64, l: f64, k0: f64, mass: f64, x: f64, t: f64) -> Complex64 {
        let beta = units::hbar_over_me() / (2.0 * mass);
        let a = Complex64::new(l * l, beta * t);
        let z = Complex64::new(2.0 * l * l * k0, x - x0);
        let pre = (2.0 * std::f64::consts::PI * l * l).powf(-0.25) * l / a.sqrt();
        pre * (z * z / (4.0 * a) - l * l * k0 * k0).exp()
    }

    #[test]
    fn zero_potential_step_is_unitary() {
        let free = BarrierSpec::new(0.0, 0.0, 1.0, 1.0).unwrap();
        let cn = CrankNicolson::new(&free, -50.0, 50.0, 0.05, 0.2).unwrap();
        let mut psi: Vec<Complex64> = cn.x.iter().map(|&x| free_gaussian(0.0, 4.0, 0.5, 1.0, x, 0.0)).collect();
        let before = cn.norm(&psi);
        let mut scratch = Vec::new();
        cn.step(&mut psi, &mut scratch);
        assert!(((cn.norm(&psi) - before) / before).abs() < 1e-12);
    }

    #[test]
    fn free_gaussian_spreads_as_predicted() {
        let (x0, l, k0, mass, t) = (-10.0, 5.0, 0.1, 1.0, 100.0);
        let free = BarrierSpec::new(0.0, 0.0, 1.0, mass).unwrap();
        let cn = CrankNicolson::new(&free, -80.0, 80.0, 0.01, 0.1).unwrap();
        cn.check_resolution(k0 + 8.0 / (2.0 * l)).unwrap();
        let psi0: Vec<Complex64> = cn.x.iter().map(|&x| free_gaussian(x0, l, k0, mass, x, 0.0)).collect();
        let run = cn.propagate(&psi0, t).unwrap();
        let err: f64 = run
            .psi
            .iter()
            .zip(&cn.x)
            .map(|(p, &x)| (p - free_gaussian(x0, l, k0, mass, x, t)).norm_sqr())
            .sum::<f64>()
            * cn.dx;
        assert!(err.sqrt() < 1e-6, "L2 error {}", err.sqrt());
        assert!(run.norm_drift() < 1e-10);
    }

    #[test]
    fn edge_nodes_carry_half_height() {
        let b = BarrierSpec::new(0.3, 1.0, 2.0, 1.0).unwrap();
        let cn = CrankNicolson::new(&b, 0.0, 3.0, 0.5, 0.1).unwrap();
        assert_eq!(cn.potential, vec![0.0, 0.0, 0.15, 0.3, 0.15, 0.0, 0.0]);
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let b = BarrierSpec::new(0.05, 100.0, 110.0, 0.067).unwrap();
        let cn = CrankNicolson::new(&b, 0.0, 10.0, 1.0, 0.1).unwrap();
        assert!(cn.check_resolution(1.0).unwrap_err().is_usage());
    }

    #[test]
    fn spectral_and_grid_fields_agree() {
        let spec = PacketSpec::new(0.0, 10.0, 0.06, 0.067).unwrap();
        let packet = gaussian_spectrum(&spec, &SpectrumConfig { modes: 1024, span_sigmas: 8.0 }).unwrap();
        let barrier = BarrierSpec::new(0.05, 100.0, 110.0, 0.067).unwrap();
        let t_max = 1.5 * (barrier.b - spec.x0) / spec.group_velocity();
        let grid = CrosscheckGrid { x_min: -300.0, x_max: 500.0, dx: 0.025, dt: 0.05, t_max };
        let report = crosscheck(&packet, &barrier, &grid, Execution::Parallel).unwrap();
        assert!(report.l2_distance < 1e-3, "{report:?}");
        assert!(report.norm_drift < 1e-8);
    }
}
