use std::f64::consts::{FRAC_PI_2, PI};

use bloch_steer::{
    fidelity_up_to_phase, integrate_rk4, plan_one_rotation, plan_three_rotation, schedule_from_json,
    schedule_to_json, simulate_schedule, state_from_angles, BlochAngles, BlochAngles32, PulseShape, Real,
    Schedule, Scheme,
};
use proptest::prelude::*;

fn transfer_fidelity<T: Real>(theta0: f64, phi0: f64, thetas: f64, phis: f64, scheme: Scheme) -> T {
    let a = BlochAngles::new(T::lit(theta0), T::lit(phi0)).unwrap();
    let b = BlochAngles::new(T::lit(thetas), T::lit(phis)).unwrap();
    let (s, _) = match scheme {
        Scheme::ThreeRotation => plan_three_rotation(&a, &b, PulseShape::Triangle, T::one(), None).unwrap(),
        Scheme::OneRotation => plan_one_rotation(&a, &b, PulseShape::Triangle, T::one(), None).unwrap(),
    };
    let (fin, _) = simulate_schedule(&state_from_angles(&a), &s, 8);
    fidelity_up_to_phase(&fin, &state_from_angles(&b))
}

#[test]
fn single_precision_pipeline() {
    for scheme in [Scheme::ThreeRotation, Scheme::OneRotation] {
        let f32_fid: f32 = transfer_fidelity(0.3, 1.2, 2.5, 4.0, scheme);
        let f64_fid: f64 = transfer_fidelity(0.3, 1.2, 2.5, 4.0, scheme);
        assert!(f32_fid > 1.0 - 1e-5, "{scheme}: {f32_fid}");
        assert!(f64_fid > 1.0 - 1e-12, "{scheme}: {f64_fid}");
    }
    let north = BlochAngles32::north();
    let (s, r) = plan_three_rotation(&north, &BlochAngles32::south(), PulseShape::Bang, 1.0, None).unwrap();
    assert_eq!(s.segments().len(), 1);
    assert!((r.t_f - std::f32::consts::FRAC_PI_2).abs() < 1e-6);
}

#[test]
fn north_to_south_bang_reference_values() {
    let (s, r) =
        plan_three_rotation(&BlochAngles::north(), &BlochAngles::south(), PulseShape::Bang, 1.0, None).unwrap();
    assert!((r.t_f - FRAC_PI_2).abs() < 1e-15);
    assert!((r.j_value - PI).abs() < 1e-15);
    assert!((r.te_product - PI * PI / 4.0).abs() < 1e-14);
    let rk4 = integrate_rk4(&state_from_angles(&BlochAngles::north()), &s, s.t_f(), s.t_f() * 1e-3).unwrap();
    assert!(rk4.amp1().norm_sqr() > 1.0 - 1e-12);
}

#[test]
fn identical_states_need_no_control() {
    let g = BlochAngles::new(1.0, 2.0).unwrap();
    for scheme in [Scheme::ThreeRotation, Scheme::OneRotation] {
        let (s, r) = match scheme {
            Scheme::ThreeRotation => plan_three_rotation(&g, &g, PulseShape::Bang, 1.0, None).unwrap(),
            Scheme::OneRotation => plan_one_rotation(&g, &g, PulseShape::Bang, 1.0, None).unwrap(),
        };
        assert!(s.is_empty());
        assert_eq!(r.j_value, 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn replayed_document_reaches_target(
        t0 in 0.0..PI, p0 in 0.0..6.28f64, ts in 0.0..PI, ps in 0.0..6.28f64,
        lambda in 0.01..100.0f64, bound in prop::option::of(0.05..5.0f64),
    ) {
        let a = BlochAngles::new(t0, p0).unwrap();
        let b = BlochAngles::new(ts, ps).unwrap();
        let (s, _) = plan_one_rotation(&a, &b, PulseShape::Quadratic, lambda, bound).unwrap();
        let back: Schedule<f64> = schedule_from_json(&schedule_to_json(&s)).unwrap();
        let (fin, _) = simulate_schedule(&state_from_angles(&a), &back, 2);
        prop_assert!(fidelity_up_to_phase(&fin, &state_from_angles(&b)) > 1.0 - 1e-10);
    }
}
