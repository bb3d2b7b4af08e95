//! Time series of moments of one packet component.
//!
//! Outside the barrier each mode is a pair of plane waves on a uniform k
//! grid, so the mode sums on a uniform x lattice are chirp-z transforms; the
//! lattice integrals use Gregory end corrections at a and b. Inside the
//! barrier the mode shapes are tabulated once at Gauss–Legendre nodes.
//! All moments are computed in x space from ψ and ∂ₓψ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::gauss_legendre::composite_gauss_legendre;
use crate::numerics::gregory::gregory_weights;
use crate::par::{self, Execution};
use crate::scattering::{evaluate_piece, BarrierSpec, Component, Piece};
use crate::units;

use super::czt::Czt;
use super::modes::ModeSet;
use super::spectrum::{PacketSpec, SpectralPacket};

const GREGORY_ORDER: usize = 7;
const GL_NODES: usize = 12;
/// Longest Gauss–Legendre panel inside the barrier (nm).
const GL_PANEL: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub t_start: f64,
    pub t_stop: f64,
    pub t_step: f64,
    /// The window that must hold the component at every sampled time.
    pub x_min: f64,
    pub x_max: f64,
    /// Target spacing of the outer lattices (nm).
    pub dx: f64,
    /// Extra lattice beyond the window whose content counts as leakage (nm).
    pub margin: f64,
    pub leak_tolerance: f64,
    pub exec: Execution,
}

impl TraceConfig {
    /// A window wide enough for the incident, reflected and transmitted
    /// packets up to `t_stop`, and a time step of at most 1 nm of flight for
    /// the faster part of the spectrum.
    pub fn auto(spec: &PacketSpec, barrier: &BarrierSpec, t_stop: f64) -> Self {
        let v_hi = units::velocity(spec.mass, spec.k0() + 3.0 * spec.sigma_k());
        let spread = 6.0 * spec.free_width(t_stop.abs()) + 4.0 * spec.halfwidth;
        let reach = v_hi * t_stop.abs();
        let x_min = spec.x0.min(2.0 * barrier.a - spec.x0 - reach).min(barrier.a) - spread;
        let x_max = (spec.x0 + reach).max(barrier.b) + spread;
        TraceConfig {
            t_start: 0.0,
            t_stop,
            t_step: Self::default_time_step(spec),
            x_min,
            x_max,
            dx: 0.1,
            margin: 4.0 * spec.halfwidth,
            leak_tolerance: 1e-6,
            exec: Execution::default(),
        }
    }

    pub fn default_time_step(spec: &PacketSpec) -> f64 {
        1.0 / units::velocity(spec.mass, spec.k0() + 3.0 * spec.sigma_k())
    }

    pub fn times(&self) -> Vec<f64> {
        let n = ((self.t_stop - self.t_start) / self.t_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.t_start + self.t_step * i as f64).collect()
    }

    fn validate(&self, barrier: &BarrierSpec) -> Result<()> {
        let finite = [self.t_start, self.t_stop, self.t_step, self.x_min, self.x_max, self.dx, self.margin]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("trace configuration must be finite"));
        }
        if !(self.t_step > 0.0) || self.t_stop < self.t_start {
            return Err(Error::invalid("trace needs t_step > 0 and t_stop ≥ t_start"));
        }
        if !(self.x_min < barrier.a) || !(self.x_max > barrier.b) {
            return Err(Error::invalid("x window must enclose the barrier"));
        }
        if !(self.dx > 0.0) || !(self.margin >= 0.0) || !(self.leak_tolerance > 0.0) {
            return Err(Error::invalid("lattice spacing, margin and leak tolerance must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub norm: f64,
    pub x_mean: f64,
    /// ⟨k⟩ (ħ·nm⁻¹).
    pub p_mean: f64,
    /// ⟨k²⟩ − ⟨k⟩² (ħ²·nm⁻²).
    pub p_var: f64,
    pub k_energy: f64,
    pub v_energy: f64,
    pub h_energy: f64,
    /// Fractions of the norm left of a and right of b.
    pub frac_left: f64,
    pub frac_right: f64,
    /// Fraction of the norm found outside [x_min, x_max].
    pub leaked: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PacketTrace {
    pub component: Component,
    pub barrier: BarrierSpec,
    pub samples: Vec<TraceSample>,
    /// Norm of the component once it has left the barrier region:
    /// Σ μ|c|²T for tr, Σ μ|c|²R for ref, 1 for full.
    pub asymptotic_norm: f64,
    pub truncated_weight: f64,
}

impl PacketTrace {
    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t).collect()
    }

    /// Largest |H(t) − H(t₀)|/|H(t₀)| over the trace.
    pub fn max_h_drift(&self) -> f64 {
        let h0 = match self.samples.first() {
            Some(s) => s.h_energy,
            None => return 0.0,
        };
        self.samples.iter().map(|s| ((s.h_energy - h0) / h0).abs()).fold(0.0, f64::max)
    }

    /// (ħ/m)·⟨k⟩ at sample `i`.
    pub fn mean_velocity(&self, i: usize) -> f64 {
        units::velocity(self.barrier.mass, self.samples[i].p_mean)
    }
}

struct Lattice {
    x0: f64,
    h: f64,
    points: usize,
    weights: Vec<f64>,
    /// lattice indices inside the window
    window: std::ops::Range<usize>,
    plus: Czt,
    minus: Option<Czt>,
    plus_static: Vec<Complex64>,
    minus_static: Vec<Complex64>,
    carrier: Vec<Complex64>,
}

impl Lattice {
    fn new(lo: f64, hi: f64, target_dx: f64, window: (f64, f64), k: &[f64], two_way: bool) -> Self {
        let cells = (((hi - lo) / target_dx).ceil() as usize).max(2 * GREGORY_ORDER + 2);
        let h = (hi - lo) / cells as f64;
        let points = cells + 1;
        let dk = k[1] - k[0];
        let theta = dk * h;
        let xs = |j: usize| lo + h * j as f64;
        let first = (0..points).find(|&j| xs(j) >= window.0 - 1e-9 * h).unwrap_or(points);
        let last = (0..points).rev().find(|&j| xs(j) <= window.1 + 1e-9 * h).map_or(0, |j| j + 1);
        Lattice {
            x0: lo,
            h,
            points,
            weights: gregory_weights(points, h, GREGORY_ORDER),
            window: first..last.max(first),
            plus: Czt::new(k.len(), points, theta, 1.0),
            minus: two_way.then(|| Czt::new(k.len(), points, theta, -1.0)),
            plus_static: Vec::new(),
            minus_static: Vec::new(),
            carrier: (0..points).map(|j| Complex64::cis(k[0] * xs(j))).collect(),
        }
    }

    fn x(&self, j: usize) -> f64 {
        self.x0 + self.h * j as f64
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    norm: f64,
    x: f64,
    p: f64,
    k2: f64,
    outside: f64,
}

impl Moments {
    fn add(&mut self, w: f64, x: f64, v: Complex64, dv: Complex64) {
        let rho = v.norm_sqr();
        self.norm += w * rho;
        self.x += w * x * rho;
        self.p += w * (v.conj() * dv).im;
        self.k2 += w * dv.norm_sqr();
    }
}

struct Engine<'a> {
    modes: &'a ModeSet,
    left: Lattice,
    right: Lattice,
    nodes: Vec<(f64, f64)>,
    /// node-major tables of mode values and slopes inside the barrier
    shape: Vec<Complex64>,
    slope: Vec<Complex64>,
}

impl<'a> Engine<'a> {
    fn new(modes: &'a ModeSet, config: &TraceConfig) -> Self {
        let b = &modes.barrier;
        let k = &modes.k;
        let n = k.len();
        let lo = config.x_min - config.margin;
        let hi = config.x_max + config.margin;
        let window = (config.x_min, config.x_max);
        let mut left = Lattice::new(lo, b.a, config.dx, window, k, true);
        let mut right = Lattice::new(b.b, hi, config.dx, window, k, false);
        let dk = k[1] - k[0];
        left.plus_static = (0..n).map(|m| modes.coefs[m].left_in * Complex64::cis(m as f64 * dk * left.x0)).collect();
        left.minus_static = (0..n)
            .map(|m| modes.coefs[m].left_out * Complex64::cis(2.0 * k[m] * b.a - m as f64 * dk * left.x0))
            .collect();
        right.plus_static = (0..n)
            .map(|m| modes.coefs[m].right * Complex64::cis(-k[m] * b.width() + m as f64 * dk * right.x0))
            .collect();

        let half = 0.5 * b.width();
        let panels = (half / GL_PANEL).ceil().max(1.0) as usize;
        let mut nodes = composite_gauss_legendre(b.a, b.center(), panels, GL_NODES);
        let split = nodes.len();
        nodes.extend(composite_gauss_legendre(b.center(), b.b, panels, GL_NODES));
        let mut shape = Vec::with_capacity(nodes.len() * n);
        let mut slope = Vec::with_capacity(nodes.len() * n);
        for (q, &(x, _)) in nodes.iter().enumerate() {
            let piece = if q < split { Piece::InnerLeft } else { Piece::InnerRight };
            for m in 0..n {
                let (v, dv) = evaluate_piece(&modes.coefs[m], b, &modes.wavenumbers[m], piece, x);
                shape.push(v);
                slope.push(dv);
            }
        }
        Engine { modes, left, right, nodes, shape, slope }
    }

    fn lattice_sum(
        &self,
        lat: &Lattice,
        phase: &[Complex64],
        out: &mut Moments,
        scratch: &mut Vec<Complex64>,
    ) {
        let k = &self.modes.k;
        let n = k.len();
        let i = Complex64::new(0.0, 1.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut input = vec![zero; n];
        let mut val = vec![zero; lat.points];
        let mut der = vec![zero; lat.points];
        let mut tmp = vec![zero; lat.points];

        for m in 0..n {
            input[m] = lat.plus_static[m] * phase[m];
        }
        lat.plus.apply(&input, &mut tmp, scratch);
        for j in 0..lat.points {
            val[j] = tmp[j] * lat.carrier[j];
        }
        for m in 0..n {
            input[m] *= i * k[m];
        }
        lat.plus.apply(&input, &mut tmp, scratch);
        for j in 0..lat.points {
            der[j] = tmp[j] * lat.carrier[j];
        }
        if let Some(minus) = &lat.minus {
            for m in 0..n {
                input[m] = lat.minus_static[m] * phase[m];
            }
            minus.apply(&input, &mut tmp, scratch);
            for j in 0..lat.points {
                val[j] += tmp[j] * lat.carrier[j].conj();
            }
            for m in 0..n {
                input[m] *= -i * k[m];
            }
            minus.apply(&input, &mut tmp, scratch);
            for j in 0..lat.points {
                der[j] += tmp[j] * lat.carrier[j].conj();
            }
        }
        for j in 0..lat.points {
            let x = lat.x(j);
            out.add(lat.weights[j], x, val[j], der[j]);
            if !lat.window.contains(&j) {
                out.outside += lat.h * val[j].norm_sqr();
            }
        }
    }

    fn sample(&self, t: f64) -> TraceSample {
        let n = self.modes.len();
        let phase: Vec<Complex64> = self.modes.omega.iter().map(|w| Complex64::cis(-w * t)).collect();
        let mut scratch = Vec::new();
        let mut left = Moments::default();
        let mut right = Moments::default();
        let mut inner = Moments::default();
        self.lattice_sum(&self.left, &phase, &mut left, &mut scratch);
        self.lattice_sum(&self.right, &phase, &mut right, &mut scratch);
        for (q, &(x, w)) in self.nodes.iter().enumerate() {
            let row = q * n..(q + 1) * n;
            let mut v = Complex64::new(0.0, 0.0);
            let mut dv = Complex64::new(0.0, 0.0);
            for ((s, d), p) in self.shape[row.clone()].iter().zip(&self.slope[row]).zip(&phase) {
                v += s * p;
                dv += d * p;
            }
            inner.add(w, x, v, dv);
        }
        let norm = left.norm + inner.norm + right.norm;
        let x_mean = (left.x + inner.x + right.x) / norm;
        let p_mean = (left.p + inner.p + right.p) / norm;
        let k2 = (left.k2 + inner.k2 + right.k2) / norm;
        let p_var = k2 - p_mean * p_mean;
        let mass = self.modes.barrier.mass;
        let k_energy = units::HBAR2_OVER_2ME / mass * k2;
        let v_energy = self.modes.barrier.v0 * inner.norm / norm;
        TraceSample {
            t,
            norm,
            x_mean,
            p_mean,
            p_var,
            k_energy,
            v_energy,
            h_energy: k_energy + v_energy,
            frac_left: left.norm / norm,
            frac_right: right.norm / norm,
            leaked: (left.outside + right.outside) / norm,
        }
    }
}

/// Moments of `component` at the times of `config`.
pub fn expectation_trace(
    component: Component,
    packet: &SpectralPacket,
    barrier: &BarrierSpec,
    config: &TraceConfig,
) -> Result<PacketTrace> {
    config.validate(barrier)?;
    let modes = ModeSet::new(packet, barrier, component, config.exec)?;
    trace_modes(&modes, config, packet.truncated_weight)
}

pub(crate) fn trace_modes(modes: &ModeSet, config: &TraceConfig, truncated_weight: f64) -> Result<PacketTrace> {
    config.validate(&modes.barrier)?;
    let engine = Engine::new(modes, config);
    let times = config.times();
    let samples = par::map_with(config.exec, &times, |&t| engine.sample(t));
    for s in &samples {
        if !(s.norm > 0.0) || !s.x_mean.is_finite() {
            return Err(Error::NumericalFailure { what: format!("component norm vanished at t = {} fs", s.t), estimate: s.norm });
        }
        if s.leaked > config.leak_tolerance {
            return Err(Error::WindowOverflow { time: s.t, leaked: s.leaked });
        }
    }
    let asymptotic_norm = match modes.component {
        Component::Transmitted => modes.transmitted_norm(),
        Component::Reflected => modes.reflected_norm(),
        Component::Full => modes.spectral_mass.iter().sum(),
    };
    Ok(PacketTrace { component: modes.component, barrier: modes.barrier, samples, asymptotic_norm, truncated_weight })
}
