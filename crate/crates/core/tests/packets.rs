use tunnel_dwell::dwell::DwellReport;
use tunnel_dwell::scattering::{BarrierSpec, Component};
use tunnel_dwell::units::{self, HBAR2_OVER_2ME};
use tunnel_dwell::wavepacket::{
    exact_transmission_time, expectation_trace, gaussian_spectrum, transmission_times, PacketSpec, PacketTrace,
    SpectralPacket, SpectrumConfig, TraceConfig,
};

const MASS: f64 = 0.067;

fn packet(x0: f64, l: f64, e0: f64, modes: usize) -> (PacketSpec, SpectralPacket) {
    let spec = PacketSpec::new(x0, l, e0, MASS).unwrap();
    let p = gaussian_spectrum(&spec, &SpectrumConfig { modes, span_sigmas: 8.0 }).unwrap();
    (spec, p)
}

fn run(component: Component, spec: &PacketSpec, p: &SpectralPacket, barrier: &BarrierSpec, t_stop: f64, dt: f64) -> PacketTrace {
    let mut cfg = TraceConfig::auto(spec, barrier, t_stop);
    cfg.t_step = dt;
    expectation_trace(component, p, barrier, &cfg).unwrap()
}

#[test]
fn free_particle_times_coincide() {
    let (spec, p) = packet(0.0, 10.0, 0.05, 1024);
    let barrier = BarrierSpec::new(0.0, 40.0, 55.0, MASS).unwrap();
    let trace = run(Component::Transmitted, &spec, &p, &barrier, 800.0, 2.0);
    let times = transmission_times(&trace).unwrap();
    let v = units::velocity(MASS, p.average(|k| k));
    let tau_free = barrier.width() / v;
    assert!(((times.exact_time - tau_free) / tau_free).abs() < 1e-6, "{times:?}");
    assert!(((times.asymptotic_time - tau_free) / tau_free).abs() < 1e-6);
    assert!(((times.tau_free_ref - tau_free) / tau_free).abs() < 1e-6);
}

#[test]
fn moment_identities_hold_through_scattering() {
    let (spec, p) = packet(0.0, 10.0, 0.06, 1024);
    let barrier = BarrierSpec::new(0.05, 100.0, 110.0, MASS).unwrap();
    let trace = run(Component::Transmitted, &spec, &p, &barrier, 400.0, 2.0);
    let c_over_m = HBAR2_OVER_2ME / MASS;
    for s in &trace.samples {
        assert!(s.v_energy >= 0.0);
        assert!((s.k_energy + s.v_energy - s.h_energy).abs() <= 1e-10);
        assert!((s.k_energy - c_over_m * (s.p_mean * s.p_mean + s.p_var)).abs() <= 1e-10);
    }
    assert!(trace.samples.iter().any(|s| s.v_energy > 0.0));
}

#[test]
fn full_norm_is_conserved_and_tr_norm_settles() {
    let (spec, p) = packet(0.0, 10.0, 0.06, 1024);
    let barrier = BarrierSpec::new(0.05, 100.0, 110.0, MASS).unwrap();
    let full = run(Component::Full, &spec, &p, &barrier, 1000.0, 10.0);
    for s in &full.samples {
        assert!((s.norm - full.asymptotic_norm).abs() < 1e-9, "{} at {}", s.norm, s.t);
    }
    let tr = run(Component::Transmitted, &spec, &p, &barrier, 1000.0, 10.0);
    let first = tr.samples.first().unwrap();
    let last = tr.samples.last().unwrap();
    assert!(first.frac_left > 1.0 - 1e-6 && last.frac_right > 1.0 - 1e-4);
    assert!(((first.norm - tr.asymptotic_norm) / tr.asymptotic_norm).abs() < 1e-8);
    assert!(((last.norm - tr.asymptotic_norm) / tr.asymptotic_norm).abs() < 1e-8);
}

// Ψ_tr alone is not a solution at the barrier midpoint, so its norm (and H)
// move while the packet is inside the barrier.
#[test]
fn transmitted_norm_swells_inside_opaque_barrier() {
    let (spec, p) = packet(0.0, 10.0, 0.05, 2048);
    let barrier = BarrierSpec::new(0.2, 200.0, 215.0, MASS).unwrap();
    let tr = run(Component::Transmitted, &spec, &p, &barrier, 700.0, 10.0);
    let peak = tr.samples.iter().map(|s| s.norm).fold(0.0, f64::max);
    assert!(peak > 2.0 * tr.asymptotic_norm);
    assert!(tr.max_h_drift() > 1e-3);
}

// The backward wave in the left piece of Ψ_tr pulls ⟨k⟩ down while the
// packet is held at the barrier; it recovers once the packet is through.
#[test]
fn transmitted_momentum_dips_at_barrier() {
    let (spec, p) = packet(0.0, 10.0, 0.05, 2048);
    let barrier = BarrierSpec::new(0.2, 200.0, 215.0, MASS).unwrap();
    let tr = run(Component::Transmitted, &spec, &p, &barrier, 700.0, 10.0);
    let p0 = tr.samples[0].p_mean;
    let (i_min, low) = tr
        .samples
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.p_mean.total_cmp(&b.1.p_mean))
        .unwrap();
    assert!(low.p_mean < 0.5 * p0);
    assert!(low.x_mean > barrier.a && low.x_mean < barrier.b);
    let late = tr.samples.last().unwrap();
    assert!(late.p_mean > 0.9 * p0 && late.p_mean < p0);
    assert!(tr.samples[i_min..].windows(2).all(|w| w[1].p_mean >= w[0].p_mean));
}

#[test]
fn wide_resonant_packet_crosses_at_free_speed() {
    let (e0, v0) = (0.15, 0.1);
    let d = std::f64::consts::PI / units::wavenumber_sq(MASS, e0 - v0).sqrt();
    let barrier = BarrierSpec::new(v0, 0.0, d, MASS).unwrap();
    let report = DwellReport::new(&barrier, e0).unwrap();
    assert!((report.t_coef - 1.0).abs() < 1e-12);
    let mut gaps = Vec::new();
    for l in [50.0, 100.0] {
        let (spec, p) = packet(-8.0 * l, l, e0, 512);
        let t_stop = 16.0 * l / spec.group_velocity() + 200.0;
        let trace = run(Component::Transmitted, &spec, &p, &barrier, t_stop, 1.0);
        let (t_in, t_out) = exact_transmission_time(&trace).unwrap();
        gaps.push(t_out - t_in - report.tau_free);
    }
    // approaches τ_free like 1/l, far from τ_tr = 2τ_free
    assert!(gaps[0] > 0.0 && gaps[1] > 0.0);
    assert!((gaps[0] / gaps[1] - 2.0).abs() < 0.2, "{gaps:?}");
    assert!(gaps[1] < 0.05 * report.tau_free);
    assert!((report.tau_tr / report.tau_free - 2.0).abs() < 1e-9);
}
