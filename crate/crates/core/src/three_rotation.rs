//! z–y–z three-rotation schedules.
//!
//! The first z rotation removes the initial azimuth, the y rotation moves the
//! polar angle to `θ_s`, and the final z rotation sets the target azimuth.
//! All three rotations share one magnitude `M`; for a shape with duration
//! coefficient `c` and energy coefficient `e` the index is
//! `J(M) = (λc/M + eM)·Σ`, minimized at `M* = √(λc/e)`.

use crate::bloch::{angle_gaps, AngleGaps, BlochAngles};
use crate::error::{Error, Result};
use crate::pulse::{PulseShape, PulseWindow};
use crate::scalar::{sign_nonneg, Real};
use crate::schedule::{Axis, PerformanceReport, PulseSegment, Schedule, Scheme, Sign};

/// Rotations whose angle falls below this are left out of the schedule.
pub const ZERO_GAP: f64 = 1e-12;

pub(crate) fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda.is_finite() && lambda > T::zero() {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda.as_f64()))
    }
}

pub(crate) fn check_bound<T: Real>(bound: Option<T>) -> Result<()> {
    match bound {
        Some(b) if !(b.is_finite() && b > T::zero()) => Err(Error::NonPositiveBound(b.as_f64())),
        _ => Ok(()),
    }
}

/// Unconstrained minimizer of `J`: `√λ`, `√(3λ)`, `√(30λ)/4`.
pub fn unbounded_optimal_magnitude<T: Real>(shape: PulseShape, lambda: T) -> T {
    match shape {
        PulseShape::Bang => lambda.sqrt(),
        PulseShape::Triangle => (T::lit(3.0) * lambda).sqrt(),
        PulseShape::Quadratic => (T::lit(30.0) * lambda).sqrt() / T::lit(4.0),
    }
}

/// Optimal shared magnitude, clamped to `bound` when given.
pub fn optimal_magnitude_3<T: Real>(shape: PulseShape, lambda: T, bound: Option<T>) -> Result<T> {
    check_lambda(lambda)?;
    check_bound(bound)?;
    let m = unbounded_optimal_magnitude(shape, lambda);
    Ok(match bound {
        Some(b) => m.min(b),
        None => m,
    })
}

/// Closed-form `J` for independently chosen rotation magnitudes.
pub fn performance_of_magnitudes_3<T: Real>(
    shape: PulseShape,
    gaps: &AngleGaps<T>,
    m_z1: T,
    m_y: T,
    m_z2: T,
    lambda: T,
) -> T {
    let c = shape.duration_coefficient::<T>();
    let e = shape.energy_coefficient::<T>();
    let time = c * (gaps.phi_0m / m_z1 + gaps.theta_0s / m_y + gaps.phi_sm / m_z2);
    let energy = e * (m_z1 * gaps.phi_0m + m_y * gaps.theta_0s + m_z2 * gaps.phi_sm);
    lambda * time + energy
}

/// Plans the z–y–z schedule from `initial` to `target`.
///
/// Identical endpoints produce an empty schedule with a zero report.
pub fn plan_three_rotation<T: Real>(
    initial: &BlochAngles<T>,
    target: &BlochAngles<T>,
    shape: PulseShape,
    lambda: T,
    bound: Option<T>,
) -> Result<(Schedule<T>, PerformanceReport<T>)> {
    let magnitude = optimal_magnitude_3(shape, lambda, bound)?;
    let clamped = magnitude < unbounded_optimal_magnitude(shape, lambda);

    if initial.same_point(target) {
        return Ok((Schedule::empty(Scheme::ThreeRotation, shape, lambda), PerformanceReport::zero()));
    }

    let gaps = angle_gaps(initial, target);
    let c = shape.duration_coefficient::<T>();
    let rotations = [
        (Axis::Z, gaps.phi_0m, sign_nonneg(initial.phi() - T::PI())),
        (Axis::Y, gaps.theta_0s, sign_nonneg(target.theta() - initial.theta())),
        (Axis::Z, gaps.phi_sm, sign_nonneg(T::PI() - target.phi())),
    ];

    let mut segments = Vec::with_capacity(3);
    let mut t = T::zero();
    for (axis, angle, sign) in rotations {
        if angle < T::lit(ZERO_GAP) {
            continue;
        }
        let end = t + c * angle / magnitude;
        segments.push(PulseSegment {
            axis,
            shape,
            window: PulseWindow::new(t, end, magnitude)?,
            sign: Sign::of(sign),
        });
        t = end;
    }
    let schedule = Schedule::new(Scheme::ThreeRotation, shape, lambda, segments, t)?;

    let t_f = c * gaps.sigma / magnitude;
    let energy = shape.energy_coefficient::<T>() * magnitude * gaps.sigma;
    Ok((schedule, PerformanceReport::new(lambda, t_f, energy, magnitude, clamped)))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn magnitude_examples() {
        assert_eq!(optimal_magnitude_3(PulseShape::Bang, 4.0, None).unwrap(), 2.0);
        assert_relative_eq!(optimal_magnitude_3(PulseShape::Quadratic, 8.0 / 15.0, None).unwrap(), 1.0, max_relative = 1e-15);
        assert_eq!(optimal_magnitude_3(PulseShape::Triangle, 3.0, Some(1.0)).unwrap(), 1.0);
    }

    #[test]
    fn magnitude_matches_general_minimizer() {
        for shape in PulseShape::ALL {
            let lambda = 2.7;
            let c: f64 = shape.duration_coefficient();
            let e: f64 = shape.energy_coefficient();
            let general = (lambda * c / e).sqrt();
            assert_relative_eq!(unbounded_optimal_magnitude(shape, lambda), general, max_relative = 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(optimal_magnitude_3(PulseShape::Bang, -1.0, None), Err(Error::NonPositiveLambda(-1.0)));
        assert_eq!(optimal_magnitude_3(PulseShape::Bang, 0.0, None), Err(Error::NonPositiveLambda(0.0)));
        assert_eq!(optimal_magnitude_3(PulseShape::Bang, 1.0, Some(0.0)), Err(Error::NonPositiveBound(0.0)));
    }

    #[test]
    fn pole_to_pole_bang() {
        let (s, r) = plan_three_rotation(&BlochAngles::north(), &BlochAngles::south(), PulseShape::Bang, 1.0, None)
            .unwrap();
        assert_eq!(s.segments().len(), 1);
        assert_eq!(s.segments()[0].axis, Axis::Y);
        assert_eq!(s.segments()[0].sign, Sign::Plus);
        assert_relative_eq!(r.t_f, PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.energy, PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.j_value, PI, max_relative = 1e-15);
        assert_relative_eq!(s.t_f(), r.t_f, max_relative = 1e-15);
        assert!(!r.clamped);
    }

    #[test]
    fn performance_examples() {
        let g = AngleGaps { phi_0m: 0.3, phi_sm: 1.1, theta_0s: 0.7, sigma: 2.1 };
        let lambda = 2.0_f64;
        let m = 1.7;
        let j = performance_of_magnitudes_3(PulseShape::Bang, &g, m, m, m, lambda);
        assert_relative_eq!(j, (lambda / (2.0 * m) + m / 2.0) * g.sigma, max_relative = 1e-14);
        let j = performance_of_magnitudes_3(PulseShape::Bang, &g, lambda.sqrt(), lambda.sqrt(), lambda.sqrt(), lambda);
        assert_relative_eq!(j, lambda.sqrt() * g.sigma, max_relative = 1e-14);
        let mq = (30.0 * lambda).sqrt() / 4.0;
        let j = performance_of_magnitudes_3(PulseShape::Quadratic, &g, mq, mq, mq, lambda);
        assert_relative_eq!(j, (30.0 * lambda).sqrt() / 5.0 * g.sigma, max_relative = 1e-14);
    }

    #[test]
    fn identical_states_give_empty_schedule() {
        let a = BlochAngles::new(1.0, 2.0).unwrap();
        let (s, r) = plan_three_rotation(&a, &a, PulseShape::Triangle, 1.0, None).unwrap();
        assert!(s.is_empty());
        assert_eq!(r.j_value, 0.0);
    }

    #[test]
    fn signs_follow_conventions() {
        // phi0 < pi rotates backwards, phi_s > pi rotates backwards too
        let a = BlochAngles::new(1.0, 0.5).unwrap();
        let b = BlochAngles::new(2.0, 4.0).unwrap();
        let (s, _) = plan_three_rotation(&a, &b, PulseShape::Bang, 1.0, None).unwrap();
        let signs: Vec<_> = s.segments().iter().map(|x| x.sign).collect();
        assert_eq!(signs, vec![Sign::Minus, Sign::Plus, Sign::Minus]);
        // phi0 = pi takes sign(0) = +1
        let a = BlochAngles::new(1.0, PI).unwrap();
        let (s, _) = plan_three_rotation(&a, &b, PulseShape::Bang, 1.0, None).unwrap();
        assert_eq!(s.segments()[0].sign, Sign::Plus);
    }

    #[test]
    fn bounded_clamps() {
        let a = BlochAngles::new(0.4, 1.0).unwrap();
        let b = BlochAngles::new(2.0, 5.0).unwrap();
        let lambda = 9.0;
        let (s, r) = plan_three_rotation(&a, &b, PulseShape::Bang, lambda, Some(1.5)).unwrap();
        assert!(r.clamped);
        assert_eq!(r.magnitude_used, 1.5);
        let sigma = angle_gaps(&a, &b).sigma;
        assert_relative_eq!(r.j_value, (lambda / 3.0 + 0.75) * sigma, max_relative = 1e-14);
        assert!(s.peak_component() <= 1.5);
    }
}
