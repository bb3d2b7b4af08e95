use proptest::prelude::*;
use tunnel_dwell::dwell::{self, DwellReport};
use tunnel_dwell::scattering::{BarrierSpec, Component, Piece, Regime, StationaryState};
use tunnel_dwell::Complex64;

const MASS: f64 = 0.067;

fn grid() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (0.005f64..0.3, prop::sample::select(vec![-0.1, 0.1, 0.2]), 0.5f64..40.0, -50.0f64..50.0)
}

fn state(e: f64, v0: f64, d: f64, a: f64) -> StationaryState {
    StationaryState::new(&BarrierSpec::new(v0, a, a + d, MASS).unwrap(), e).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn amplitude_identities((e, v0, d, a) in grid()) {
        let st = state(e, v0, d, a);
        let amp = st.amps;
        prop_assert!((amp.t_coef + amp.r_coef - 1.0).abs() <= 1e-12);
        prop_assert!((amp.a_in_tr + amp.a_in_ref - 1.0).norm() <= 1e-12);
        prop_assert!(((amp.a_out + amp.b_out).norm() - 1.0).abs() <= 1e-12);
        prop_assert!(((amp.a_out - amp.b_out).norm() - 1.0).abs() <= 1e-12);
        prop_assert!(rel(amp.a_in_tr.norm_sqr(), amp.t_coef) <= 1e-12);
        prop_assert!((amp.a_in_ref.norm_sqr() - amp.r_coef).abs() <= 1e-12);
        let q_ratio = amp.q_reduced / amp.q_reduced.conj();
        prop_assert!((amp.a_out / amp.a_in_tr - q_ratio).norm() <= 1e-12);
        if amp.r_coef > 1e-20 {
            prop_assert!((-amp.b_out / amp.a_in_ref - q_ratio).norm() <= 1e-10);
        }
    }

    #[test]
    fn flux_is_uniform((e, v0, d, a) in grid()) {
        let st = state(e, v0, d, a);
        let i_tr = st.incident_velocity() * st.amps.t_coef;
        let v = st.incident_velocity();
        for i in 0..100 {
            let x = a - 20.0 + (d + 40.0) * i as f64 / 99.0;
            prop_assert!(rel(st.probability_flux(Component::Transmitted, x), i_tr) <= 1e-10);
            prop_assert!(st.probability_flux(Component::Reflected, x).abs() <= 1e-12 * v);
            // incident minus reflected flux: accurate relative to the incident flux only
            prop_assert!((st.probability_flux(Component::Full, x) - i_tr).abs() <= 1e-12 * v);
        }
    }

    #[test]
    fn continuity_at_matching_points((e, v0, d, a) in grid()) {
        let st = state(e, v0, d, a);
        let b = st.barrier;
        let k = st.wn.k;
        let pts = [(b.a, Piece::Left, Piece::InnerLeft), (b.center(), Piece::InnerLeft, Piece::InnerRight), (b.b, Piece::InnerRight, Piece::Right)];
        for (x, lo, hi) in pts {
            let (v1, d1) = st.evaluate_piece(Component::Full, lo, x);
            let (v2, d2) = st.evaluate_piece(Component::Full, hi, x);
            let scale = v1.norm().max(d1.norm() / k);
            prop_assert!((v1 - v2).norm() <= 1e-10 * scale);
            prop_assert!((d1 - d2).norm() <= 1e-10 * scale * k);
            let (t1, _) = st.evaluate_piece(Component::Transmitted, lo, x);
            let (t2, _) = st.evaluate_piece(Component::Transmitted, hi, x);
            prop_assert!((t1 - t2).norm() <= 1e-10 * t1.norm());
        }
        for (x, lo, hi) in &pts[..2] {
            let (r1, _) = st.evaluate_piece(Component::Reflected, *lo, *x);
            let (r2, _) = st.evaluate_piece(Component::Reflected, *hi, *x);
            prop_assert!((r1 - r2).norm() <= 1e-10 * (st.amps.r_coef.sqrt() + 1e-300));
        }
        prop_assert!(rel(st.psi_tr(b.a).norm(), st.amps.t_coef.sqrt()) <= 1e-10);
        prop_assert!(rel(st.psi_tr(b.b).norm(), st.amps.t_coef.sqrt()) <= 1e-10);
    }

    #[test]
    fn midpoint_modulus((e, v0, d, a) in grid()) {
        let st = state(e, v0, d, a);
        prop_assume!(st.wn.regime != Regime::Degenerate);
        let expected = st.amps.t_coef.sqrt() * (st.amps.q() / st.wn.kappa).norm();
        prop_assert!(rel(st.psi_tr(st.barrier.center()).norm(), expected) <= 1e-10);
    }

    #[test]
    fn reflected_part_vanishes_right_of_center((e, v0, d, a) in grid(), f in 0.0f64..3.0) {
        let st = state(e, v0, d, a);
        let x = st.barrier.center() + f * d;
        prop_assert_eq!(st.psi_ref(x), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn times_are_nonnegative((e, v0, d, a) in grid()) {
        let r = DwellReport::new(&BarrierSpec::new(v0, a, a + d, MASS).unwrap(), e).unwrap();
        prop_assert!(r.tau_free > 0.0);
        prop_assert!(r.tau_tr >= 0.0 && r.tau_tr.is_finite());
        prop_assert!(r.tau_ref >= 0.0 && r.tau_ref.is_finite());
        prop_assert!(r.tau_buttiker >= 0.0 && r.tau_buttiker.is_finite());
    }

    #[test]
    fn closed_forms_match_quadrature((e, v0, d) in (0.005f64..0.3, prop::sample::select(vec![-0.1, 0.1, 0.2]), 0.5f64..40.0)) {
        prop_assume!((e - v0).abs() > 1e-6);
        let b = BarrierSpec::new(v0, 0.0, d, MASS).unwrap();
        let r = DwellReport::new(&b, e).unwrap();
        prop_assert!(rel(dwell::tau_tr_quadrature(&b, e).unwrap().value, r.tau_tr) <= 1e-9);
        prop_assert!(rel(dwell::tau_ref_quadrature(&b, e).unwrap().tau_limit(), r.tau_ref) <= 1e-9);
        prop_assert!(rel(dwell::tau_buttiker_quadrature(&b, e).unwrap().value, r.tau_buttiker) <= 1e-9);
    }

    #[test]
    fn free_limit((e, x) in (0.005f64..0.3, 1e-6f64..1e-4)) {
        let b = BarrierSpec::new(0.1, 0.0, 1.0, MASS).unwrap();
        let d = x / b.kappa0();
        let r = DwellReport::new(&BarrierSpec::new(0.1, 0.0, d, MASS).unwrap(), e).unwrap();
        prop_assert!((r.ratio_tr_free() - 1.0).abs() <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pointwise_flux_agrees_up_to_rounding((e, v0, d, a) in grid()) {
        let st = state(e, v0, d, a);
        let m_over_hbar = MASS / tunnel_dwell::units::hbar_over_me();
        for i in 0..40 {
            let x = a - 5.0 + (d + 10.0) * i as f64 / 39.0;
            for c in [Component::Transmitted, Component::Reflected, Component::Full] {
                let (v, dv) = st.evaluate(c, x);
                let bound = 1e-13 * v.norm() * dv.norm().max(st.wn.k * v.norm());
                let diff = (st.probability_flux(c, x) - st.probability_flux_pointwise(c, x)) * m_over_hbar;
                prop_assert!(diff.abs() <= bound + 1e-300, "{c:?} {x} {diff} {bound}");
            }
        }
    }
}
