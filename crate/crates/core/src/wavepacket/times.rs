//! Transmission times read off ⟨x⟩(t) of the transmitted packet.
//!
//! The exact time is the interval between ⟨x⟩ crossing a and then b. The
//! asymptotic time compares straight-line fits to ⟨x⟩ while the packet is
//! wholly left of the barrier and after it has wholly passed it.

use crate::error::{Error, Result};
use crate::numerics::{find_root_bracketed, fit_line, LineFit};

use super::trace::PacketTrace;

/// A sample belongs to a fit window when at least this fraction of the
/// component lies on the required side of the barrier.
pub const FIT_WINDOW_FRACTION: f64 = 1.0 - 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmissionTimes {
    pub t_enter: f64,
    pub t_exit: f64,
    pub exact_time: f64,
    pub asymptotic_time: f64,
    /// d divided by the late-time velocity of ⟨x⟩.
    pub tau_free_ref: f64,
    pub early_fit: LineFit,
    pub late_fit: LineFit,
}

/// Cubic Lagrange interpolation through the samples around `[t_i, t_{i+1}]`.
fn interpolate(ts: &[f64], ys: &[f64], i: usize, t: f64) -> f64 {
    let lo = i.saturating_sub(1).min(ts.len().saturating_sub(4));
    let hi = (lo + 4).min(ts.len());
    let mut sum = 0.0;
    for j in lo..hi {
        let mut l = 1.0;
        for m in lo..hi {
            if m != j {
                l *= (t - ts[m]) / (ts[j] - ts[m]);
            }
        }
        sum += l * ys[j];
    }
    sum
}

/// First upward crossing of `level` at or after sample `from`.
fn crossing(ts: &[f64], ys: &[f64], level: f64, from: usize) -> Option<f64> {
    let i = (from..ts.len().saturating_sub(1)).find(|&i| ys[i] < level && ys[i + 1] >= level)?;
    let tol = 1e-10 * (ts[i + 1] - ts[i]).abs().max(1.0);
    find_root_bracketed(|t| interpolate(ts, ys, i, t) - level, ts[i], ts[i + 1], tol).ok()
}

/// (t_enter, t_exit): ⟨x⟩ first reaches a, then b.
pub fn exact_transmission_time(trace: &PacketTrace) -> Result<(f64, f64)> {
    let ts = trace.times();
    let xs: Vec<f64> = trace.samples.iter().map(|s| s.x_mean).collect();
    let b = &trace.barrier;
    let t_enter = crossing(&ts, &xs, b.a, 0)
        .ok_or_else(|| Error::InsufficientSpan(format!("<x> never crosses a = {} nm upward within the trace", b.a)))?;
    let from = ts.iter().position(|&t| t >= t_enter).unwrap_or(ts.len()).saturating_sub(1);
    let t_exit = crossing(&ts, &xs, b.b, from)
        .ok_or_else(|| Error::InsufficientSpan(format!("<x> never crosses b = {} nm after entering", b.b)))?;
    Ok((t_enter, t_exit))
}

/// (asymptotic time, τ_free at the late velocity, early fit, late fit).
pub fn asymptotic_transmission_time(trace: &PacketTrace) -> Result<(f64, f64, LineFit, LineFit)> {
    let early: Vec<(f64, f64)> =
        trace.samples.iter().filter(|s| s.frac_left >= FIT_WINDOW_FRACTION).map(|s| (s.t, s.x_mean)).collect();
    let late: Vec<(f64, f64)> =
        trace.samples.iter().filter(|s| s.frac_right >= FIT_WINDOW_FRACTION).map(|s| (s.t, s.x_mean)).collect();
    if early.len() < 2 {
        return Err(Error::InsufficientSpan("fewer than two samples with the packet left of the barrier".into()));
    }
    if late.len() < 2 {
        return Err(Error::InsufficientSpan("fewer than two samples with the packet past the barrier".into()));
    }
    let early_fit = fit_line(&early)?;
    let late_fit = fit_line(&late)?;
    if !(early_fit.slope > 0.0) || !(late_fit.slope > 0.0) {
        return Err(Error::InsufficientSpan("fitted asymptotes are not moving forward".into()));
    }
    let b = &trace.barrier;
    let asymptotic = late_fit.solve(b.b) - early_fit.solve(b.a);
    Ok((asymptotic, b.width() / late_fit.slope, early_fit, late_fit))
}

pub fn transmission_times(trace: &PacketTrace) -> Result<TransmissionTimes> {
    let (t_enter, t_exit) = exact_transmission_time(trace)?;
    let (asymptotic_time, tau_free_ref, early_fit, late_fit) = asymptotic_transmission_time(trace)?;
    Ok(TransmissionTimes {
        t_enter,
        t_exit,
        exact_time: t_exit - t_enter,
        asymptotic_time,
        tau_free_ref,
        early_fit,
        late_fit,
    })
}
