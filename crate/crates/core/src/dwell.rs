//! Dwell times of the transmitted and reflected subensembles and the classic
//! (Büttiker) dwell time of the full state.
//!
//! Closed forms are written in terms of `s = κ²d²` and the entire kernels of
//! [`crate::numerics::kernels`], so one expression covers barriers below and
//! above the top, wells, and the degenerate point without subtractive
//! cancellation. The `*_quadrature` functions integrate the defining
//! densities directly and serve as independent oracles.

use crate::error::{Error, Result};
use crate::numerics::kernels::{
    cosh_signed, sinh_minus_cubed_series, sinh_minus_cubed_signed, sinhc, sinhc_series, sinhc_signed, sinc,
};
use crate::numerics::quadrature::{integrate_adaptive, QuadratureResult};
use crate::scattering::{BarrierSpec, Regime, StationaryState, WaveNumbers};
use crate::units;

/// Relative tolerance of the quadrature oracles.
pub const QUADRATURE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DwellReport {
    pub energy: f64,
    pub t_coef: f64,
    pub r_coef: f64,
    pub tau_free: f64,
    pub tau_tr: f64,
    /// Closed-form value; the limit of the defining ratio when R = 0.
    pub tau_ref: f64,
    pub tau_buttiker: f64,
    pub regime: Regime,
    /// Set when R is zero to within [`crate::scattering::EMPTY_SUBENSEMBLE_R`].
    pub empty_subensemble: bool,
}

impl DwellReport {
    pub fn new(barrier: &BarrierSpec, energy: f64) -> Result<Self> {
        let st = StationaryState::new(barrier, energy)?;
        let wn = &st.wn;
        let d = barrier.width();
        Ok(DwellReport {
            energy,
            t_coef: st.amps.t_coef,
            r_coef: st.amps.r_coef,
            tau_free: free_time(barrier.mass, wn.k, d),
            tau_tr: tr_closed(barrier, wn),
            tau_ref: ref_closed(barrier, wn),
            tau_buttiker: buttiker_closed(barrier, wn),
            regime: wn.regime,
            empty_subensemble: st.amps.reflection_empty(),
        })
    }

    pub fn ratio_tr_free(&self) -> f64 {
        self.tau_tr / self.tau_free
    }

    pub fn ratio_buttiker_free(&self) -> f64 {
        self.tau_buttiker / self.tau_free
    }
}

type Kernel = fn(f64) -> f64;

fn kernels(wn: &WaveNumbers) -> (Kernel, Kernel) {
    if wn.regime == Regime::Degenerate {
        (sinh_minus_cubed_series, sinhc_series)
    } else {
        (sinh_minus_cubed_signed, sinhc_signed)
    }
}

/// (ħ/mₑ)/m in nm²/fs.
fn hbar_over_m(mass: f64) -> f64 {
    units::hbar_over_me() / mass
}

fn free_time(mass: f64, k: f64, d: f64) -> f64 {
    d / (hbar_over_m(mass) * k)
}

fn tr_closed(barrier: &BarrierSpec, wn: &WaveNumbers) -> f64 {
    let d = barrier.width();
    let (g, _) = kernels(wn);
    let u0 = barrier.signed_kappa0_sq();
    free_time(barrier.mass, wn.k, d) * (1.0 + 0.5 * u0 * d * d * g(wn.kappa_sq * d * d))
}

fn ref_closed(barrier: &BarrierSpec, wn: &WaveNumbers) -> f64 {
    let d = barrier.width();
    let (g, shc) = kernels(wn);
    let s = wn.kappa_sq * d * d;
    let u0 = barrier.signed_kappa0_sq();
    let sh = shc(0.25 * s);
    wn.k * d * d * d / hbar_over_m(barrier.mass) * g(s) / (1.0 + 0.25 * u0 * d * d * sh * sh)
}

fn buttiker_closed(barrier: &BarrierSpec, wn: &WaveNumbers) -> f64 {
    let d = barrier.width();
    let (g, shc) = kernels(wn);
    let s = wn.kappa_sq * d * d;
    let u0 = barrier.signed_kappa0_sq();
    let sh = shc(s);
    let k = wn.k;
    k * d / hbar_over_m(barrier.mass) * (1.0 + 2.0 * u0 * d * d * g(4.0 * s))
        / (k * k + 0.25 * u0 * u0 * d * d * sh * sh)
}

fn check_width(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("barrier width must be positive (got {d})")))
    }
}

/// m·d/(ħk) in fs.
pub fn tau_free(mass: f64, energy: f64, d: f64) -> Result<f64> {
    if !(mass > 0.0) || !(energy > 0.0) || !energy.is_finite() {
        return Err(Error::invalid("tau_free needs positive mass and energy"));
    }
    check_width(d)?;
    Ok(free_time(mass, units::wavenumber_sq(mass, energy).sqrt(), d))
}

pub fn tau_tr_dwell(barrier: &BarrierSpec, energy: f64) -> Result<f64> {
    Ok(tr_closed(barrier, &barrier.wavenumbers(energy)?))
}

pub fn tau_ref_dwell(barrier: &BarrierSpec, energy: f64) -> Result<f64> {
    Ok(ref_closed(barrier, &barrier.wavenumbers(energy)?))
}

pub fn tau_buttiker(barrier: &BarrierSpec, energy: f64) -> Result<f64> {
    Ok(buttiker_closed(barrier, &barrier.wavenumbers(energy)?))
}

/// τ^tr_dwell/τ_free in the limit k → 0: ½(1 + sinh(κ₀d)/κ₀d) for barriers,
/// ½(1 + sin(κ₀d)/κ₀d) for wells.
pub fn tau_tr_ratio_zero_k(v0: f64, d: f64, mass: f64) -> Result<f64> {
    let barrier = BarrierSpec::new(v0, 0.0, d, mass)?;
    let x = barrier.kappa0() * d;
    let shape = if v0 > 0.0 { sinhc(x) } else { sinc(x) };
    Ok(0.5 * (1.0 + shape))
}

/// Opaque-barrier limit 2mk/(ħκκ₀²) shared by τ^ref_dwell and τ_Büttiker
/// (E < V₀ only).
pub fn opaque_limit(barrier: &BarrierSpec, energy: f64) -> Result<f64> {
    let wn = barrier.wavenumbers(energy)?;
    if wn.regime != Regime::UnderBarrier {
        return Err(Error::invalid("opaque limit needs 0 < E < V0"));
    }
    let k0sq = wn.kappa0 * wn.kappa0;
    Ok(2.0 * wn.k / (hbar_over_m(barrier.mass) * wn.kappa.re * k0sq))
}

/// Integrates `f`, first rescaling it by a sampled magnitude so that the
/// absolute floor in the convergence test never dominates.
fn integrate_scaled<F>(f: F, lo: f64, hi: f64, breakpoints: &[f64]) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let n = 64;
    let mut scale = 0.0f64;
    for i in 0..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        scale = scale.max(f(x).abs());
    }
    let scale = if scale > 0.0 { scale * (hi - lo) } else { 1.0 };
    let r = integrate_adaptive(|x| f(x) / scale, lo, hi, QUADRATURE_TOL, breakpoints)?;
    Ok(QuadratureResult {
        value: r.value * scale,
        error_estimate: r.error_estimate * scale,
        evaluations: r.evaluations,
    })
}

fn non_degenerate(st: &StationaryState) -> Result<()> {
    if st.wn.regime == Regime::Degenerate {
        Err(Error::invalid("quadrature oracles are not defined at the degenerate point"))
    } else {
        Ok(())
    }
}

/// (1/I_tr)∫_a^b |Ψ_tr|² dx.
pub fn tau_tr_quadrature(barrier: &BarrierSpec, energy: f64) -> Result<QuadratureResult> {
    let st = StationaryState::new(barrier, energy)?;
    non_degenerate(&st)?;
    let t = st.amps.t_coef;
    let r = integrate_scaled(|x| st.psi_tr(x).norm_sqr() / t, barrier.a, barrier.b, &[barrier.center()])?;
    let v = st.incident_velocity();
    Ok(QuadratureResult { value: r.value / v, error_estimate: r.error_estimate / v, evaluations: r.evaluations })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefQuadrature {
    /// ∫_a^{x_c} |Ψ_ref|² dx (nm).
    pub integral: f64,
    /// The same integral divided by |b_out|², finite even when R = 0.
    pub integral_per_r: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub velocity: f64,
    pub empty_subensemble: bool,
}

impl RefQuadrature {
    /// (1/I_ref)∫|Ψ_ref|²; `None` for an empty subensemble.
    pub fn tau(&self) -> Option<f64> {
        (!self.empty_subensemble).then(|| self.tau_limit())
    }

    /// The ratio evaluated per unit R, i.e. its limit as R → 0.
    pub fn tau_limit(&self) -> f64 {
        self.integral_per_r / self.velocity
    }
}

/// (1/I_ref)∫_a^{x_c} |Ψ_ref|² dx.
pub fn tau_ref_quadrature(barrier: &BarrierSpec, energy: f64) -> Result<RefQuadrature> {
    let st = StationaryState::new(barrier, energy)?;
    non_degenerate(&st)?;
    let r = integrate_scaled(|x| st.psi_ref_per_unit_b_out(x).norm_sqr(), barrier.a, barrier.center(), &[])?;
    let rc = st.amps.r_coef;
    Ok(RefQuadrature {
        integral: r.value * rc,
        integral_per_r: r.value,
        error_estimate: r.error_estimate,
        evaluations: r.evaluations,
        velocity: st.incident_velocity(),
        empty_subensemble: st.amps.reflection_empty(),
    })
}

/// (1/I_in)∫_a^b |Ψ_full|² dx.
pub fn tau_buttiker_quadrature(barrier: &BarrierSpec, energy: f64) -> Result<QuadratureResult> {
    let st = StationaryState::new(barrier, energy)?;
    non_degenerate(&st)?;
    let r = integrate_scaled(|x| st.psi_full(x).norm_sqr(), barrier.a, barrier.b, &[barrier.center()])?;
    let v = st.incident_velocity();
    Ok(QuadratureResult { value: r.value / v, error_estimate: r.error_estimate / v, evaluations: r.evaluations })
}

/// Left and right sides of the three coefficient identities that reduce the
/// transmitted-norm integral to closed form, multiplied through by κ² (or κ)
/// so they hold unchanged at and across κ = 0:
///
/// * `2κ²|b|² − |κa_r|² − |κa_l|² = 2(κ² − k²)T`
/// * `2κ²|b|² + |κa_r|² + |κa_l|² = 2(κ² + k²)T cosh(κd)`
/// * `κ·Re[(a_r − a_l)b*] = −(κ² + k²)T sinh(κd)/κ`
///
/// Conjugation acts on explicit imaginary units only, so for κ = iκ' the
/// products `|κa|²` are the plain moduli of the slope coefficients.
pub fn interior_identities(st: &StationaryState) -> [(f64, f64); 3] {
    let a = &st.amps;
    let ksq = st.wn.kappa_sq;
    let k2 = st.wn.k * st.wn.k;
    let t = a.t_coef;
    let d = st.barrier.width();
    let b2 = a.b_tr.norm_sqr();
    let sl = a.slope_l_tr.norm_sqr();
    let sr = a.slope_r_tr.norm_sqr();
    let cross = ((a.slope_r_tr - a.slope_l_tr) * a.b_tr.conj()).re;
    [
        (2.0 * ksq * b2 - sr - sl, 2.0 * (ksq - k2) * t),
        (2.0 * ksq * b2 + sr + sl, 2.0 * (ksq + k2) * t * cosh_signed(ksq * d * d)),
        (cross, -(ksq + k2) * t * d * sinhc_signed(ksq * d * d)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn barrier(v0: f64, d: f64) -> BarrierSpec {
        BarrierSpec::new(v0, 0.0, d, 0.067).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // Literal textbook forms, valid away from κ = 0 and for moderate κd.
    fn naive(b: &BarrierSpec, e: f64) -> (f64, f64, f64) {
        let wn = b.wavenumbers(e).unwrap();
        let (k, k0) = (wn.k, wn.kappa0);
        let d = b.width();
        let c = 1.0 / hbar_over_m(b.mass);
        let k04 = k0.powi(4);
        if wn.regime == Regime::UnderBarrier {
            let q = wn.kappa.re;
            let tr = c / (2.0 * k * q.powi(3)) * ((q * q - k * k) * q * d + k0 * k0 * (q * d).sinh());
            let rf = c * k / q * ((q * d).sinh() - q * d) / (q * q + k0 * k0 * (0.5 * q * d).sinh().powi(2));
            let bt = c * k / q * (2.0 * q * d * (q * q - k * k) + k0 * k0 * (2.0 * q * d).sinh())
                / (4.0 * k * k * q * q + k04 * (q * d).sinh().powi(2));
            (tr, rf, bt)
        } else {
            let q = wn.kappa.im;
            let th = wn.theta;
            let tr = c / (2.0 * k * q.powi(3)) * ((q * q + k * k) * q * d - th * k0 * k0 * (q * d).sin());
            let rf = c * k / q * (q * d - (q * d).sin()) / (q * q + th * k0 * k0 * (0.5 * q * d).sin().powi(2));
            let bt = c * k / q * (2.0 * q * d * (q * q + k * k) - th * k0 * k0 * (2.0 * q * d).sin())
                / (4.0 * k * k * q * q + k04 * (q * d).sin().powi(2));
            (tr, rf, bt)
        }
    }

    #[test]
    fn reference_values() {
        // 40-digit evaluations of the defining integrals.
        let cases = [
            (0.1, 15.0, 0.09, 109.42391470300877, 10.789003809408186, 17.564778963936403, 21.821360763644675),
            (0.1, 15.0, 0.11, 73.0931789833428, 14.61548517858882, 47.22721974654132, 19.73816347308888),
            (-0.1, 30.0, 0.05, 39.40967959641644, 54.97291937215696, 37.58288527012073, 58.55285523486746),
        ];
        for (v0, d, e, tr, rf, bt, free) in cases {
            let r = DwellReport::new(&barrier(v0, d), e).unwrap();
            assert!(rel(r.tau_tr, tr) < 1e-12, "{} vs {tr}", r.tau_tr);
            assert!(rel(r.tau_ref, rf) < 1e-12, "{} vs {rf}", r.tau_ref);
            assert!(rel(r.tau_buttiker, bt) < 1e-12, "{} vs {bt}", r.tau_buttiker);
            assert!(rel(r.tau_free, free) < 1e-13);
        }
    }

    #[test]
    fn closed_forms_match_literal_expressions() {
        for (v0, d, e) in [(0.1, 15.0, 0.09), (0.2, 5.0, 0.05), (0.1, 8.0, 0.25), (-0.1, 12.0, 0.03)] {
            let b = barrier(v0, d);
            let (tr, rf, bt) = naive(&b, e);
            let r = DwellReport::new(&b, e).unwrap();
            assert!(rel(r.tau_tr, tr) < 1e-10);
            assert!(rel(r.tau_ref, rf) < 1e-10);
            assert!(rel(r.tau_buttiker, bt) < 1e-10);
        }
    }

    #[test]
    fn quadrature_oracles_agree() {
        for (v0, d, e) in [(0.1, 15.0, 0.09), (0.2, 40.0, 0.01), (0.1, 1.0, 0.3), (-0.1, 30.0, 0.05)] {
            let b = barrier(v0, d);
            let r = DwellReport::new(&b, e).unwrap();
            assert!(rel(tau_tr_quadrature(&b, e).unwrap().value, r.tau_tr) < 1e-10);
            let q = tau_ref_quadrature(&b, e).unwrap();
            assert!(rel(q.tau().unwrap(), r.tau_ref) < 1e-10, "{v0} {d} {e}: {q:?} {}", r.tau_ref);
            assert!(rel(tau_buttiker_quadrature(&b, e).unwrap().value, r.tau_buttiker) < 1e-10);
        }
    }

    #[test]
    fn free_time_examples() {
        assert!((tau_free(0.067, 0.09, 15.0).unwrap() - 21.82).abs() < 5e-3);
        assert!((tau_free(0.067, 0.11, 23.690).unwrap() - 31.17).abs() < 5e-3);
        assert!(tau_free(0.067, 0.0, 1.0).is_err());
        assert!(tau_free(0.067, 0.1, 0.0).is_err());
    }

    #[test]
    fn resonance_coincidence() {
        let wn = barrier(0.1, 1.0).wavenumbers(0.11).unwrap();
        let d = std::f64::consts::PI / wn.kappa.im;
        assert!((d - 23.690).abs() < 5e-4);
        let r = DwellReport::new(&barrier(0.1, d), 0.11).unwrap();
        assert!(rel(r.tau_tr, r.tau_buttiker) < 1e-12);
        assert!((r.tau_tr - 187.0).abs() < 0.187);
        assert!(r.empty_subensemble);
        let q = tau_ref_quadrature(&barrier(0.1, d), 0.11).unwrap();
        assert!(q.tau().is_none());
        assert!(q.integral < 1e-25);
        assert!(rel(q.tau_limit(), r.tau_ref) < 1e-10);
    }

    #[test]
    fn zero_k_ratio() {
        let m = 0.067;
        let k0d1 = barrier(0.1, 1.0).kappa0();
        let d = 1.0 / k0d1;
        assert!((tau_tr_ratio_zero_k(0.1, d, m).unwrap() - 1.087601).abs() < 1e-6);
        assert!((tau_tr_ratio_zero_k(-0.1, std::f64::consts::PI / k0d1, m).unwrap() - 0.5).abs() < 1e-15);
        assert!((tau_tr_ratio_zero_k(0.1, 1e-9, m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn opaque_limits() {
        let b = barrier(0.1, 60.0);
        let lim = opaque_limit(&b, 0.09).unwrap();
        assert!((lim - 19.75).abs() < 0.01);
        assert!(rel(tau_ref_dwell(&b, 0.09).unwrap(), lim) < 0.02);
        assert!(rel(tau_buttiker(&b, 0.09).unwrap(), lim) < 0.02);
        assert!(opaque_limit(&b, 0.2).is_err());
    }

    #[test]
    fn continuity_across_degenerate_point() {
        let b = barrier(0.1, 15.0);
        let at = DwellReport::new(&b, 0.1).unwrap();
        assert_eq!(at.regime, Regime::Degenerate);
        for e in [0.1 - 1e-7, 0.1 + 1e-7] {
            let r = DwellReport::new(&b, e).unwrap();
            assert!(rel(r.tau_tr, at.tau_tr) < 1e-5);
            assert!(rel(r.tau_ref, at.tau_ref) < 1e-5);
            assert!(rel(r.tau_buttiker, at.tau_buttiker) < 1e-5);
        }
        // series limit τ_free·(1 + κ0²d²/12)
        let k0 = b.kappa0();
        assert!(rel(at.tau_tr, at.tau_free * (1.0 + k0 * k0 * 225.0 / 12.0)) < 1e-3);
    }

    #[test]
    fn identities_behind_the_closed_form() {
        for (v0, d, e) in [(0.1, 15.0, 0.09), (0.1, 15.0, 0.1), (0.2, 7.0, 0.25), (-0.1, 20.0, 0.02)] {
            let st = StationaryState::new(&barrier(v0, d), e).unwrap();
            for (lhs, rhs) in interior_identities(&st) {
                assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-3), "{lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn free_barrier() {
        let b = BarrierSpec::new(0.0, 0.0, 10.0, 0.067).unwrap();
        let r = DwellReport::new(&b, 0.05).unwrap();
        assert!(rel(r.tau_tr, r.tau_free) < 1e-14);
        assert!(rel(r.tau_buttiker, r.tau_free) < 1e-14);
        assert!(r.empty_subensemble);
        assert!((r.t_coef - 1.0).abs() < 1e-15);
    }
}
