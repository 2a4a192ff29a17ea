//! Single-rotation schedules about a tilted axis in the y–z plane.
//!
//! The axis `n = (0, sinθ_u, cosθ_u)` is chosen so that the initial and target
//! Bloch vectors have equal projections onto it. Both states then sit at the
//! same polar angle `θ^H_s0` about `n`, and one rotation about `n` through the
//! azimuthal gap `φ^H_s0` carries one onto the other.

use num_complex::Complex;

use crate::bloch::{state_from_angles, BlochAngles, StateVector2, POLE_TOLERANCE};
use crate::error::{Error, Result};
use crate::pulse::{PulseShape, PulseWindow};
use crate::scalar::{wrap_two_pi, Real};
use crate::schedule::{Axis, PerformanceReport, PulseSegment, Schedule, Scheme, Sign};
use crate::three_rotation::{check_bound, check_lambda, unbounded_optimal_magnitude, ZERO_GAP};

/// Tolerance below which both axis-equation coefficients count as zero.
pub const DEGENERATE_AXIS: f64 = 1e-12;
/// Largest accepted mismatch of the two projections onto a proposed axis.
pub const AXIS_RESIDUAL: f64 = 1e-8;

/// Rotation axis and the coordinates of both states about it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationFrame<T> {
    pub theta_u: T,
    /// Common polar angle of both states measured from the axis.
    pub theta_h_s0: T,
    pub phi_h_0: T,
    pub phi_h_s: T,
    /// Shortest azimuthal gap about the axis, in `[0, π]`.
    pub phi_h_s0: T,
}

impl<T: Real> RotationFrame<T> {
    /// Unit axis vector `(0, sinθ_u, cosθ_u)`.
    pub fn axis_vector(&self) -> [T; 3] {
        axis_vector(self.theta_u)
    }

    /// `+1` when the short way round increases `φ^H`.
    pub fn direction(&self) -> Sign {
        let d = wrap_two_pi(self.phi_h_s - self.phi_h_0);
        if d <= T::PI() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

fn axis_vector<T: Real>(theta_u: T) -> [T; 3] {
    let (s, c) = theta_u.sin_cos();
    [T::zero(), s, c]
}

fn projection<T: Real>(theta_u: T, g: &BlochAngles<T>) -> T {
    let (su, cu) = theta_u.sin_cos();
    su * g.theta().sin() * g.phi().sin() + cu * g.theta().cos()
}

/// Coefficients of `sinθ_u·A = cosθ_u·B`.
fn axis_coefficients<T: Real>(initial: &BlochAngles<T>, target: &BlochAngles<T>) -> (T, T) {
    let a = initial.theta().sin() * initial.phi().sin() - target.theta().sin() * target.phi().sin();
    let b = target.theta().cos() - initial.theta().cos();
    (a, b)
}

/// Solves the equal-projection condition for `θ_u ∈ [0, π)`.
///
/// When the states share their y and z Bloch components every axis works and
/// the y axis (`π/2`) is returned.
pub fn solve_axis<T: Real>(initial: &BlochAngles<T>, target: &BlochAngles<T>) -> T {
    let (a, b) = axis_coefficients(initial, target);
    let tol = T::tol(DEGENERATE_AXIS);
    if a.abs() <= tol && b.abs() <= tol {
        return T::FRAC_PI_2();
    }
    let mut theta = b.atan2(a);
    if theta < T::zero() {
        theta += T::PI();
    }
    if theta >= T::PI() {
        theta -= T::PI();
    }
    theta
}

/// Amplitudes on `|u_+⟩ = cos(θ_u/2)|0⟩ + i sin(θ_u/2)|1⟩` and
/// `|u_−⟩ = sin(θ_u/2)|0⟩ − i cos(θ_u/2)|1⟩`.
fn axis_basis_amplitudes<T: Real>(psi: &StateVector2<T>, theta_u: T) -> (Complex<T>, Complex<T>) {
    let (s, c) = (theta_u / T::lit(2.0)).sin_cos();
    let i = Complex::new(T::zero(), T::one());
    let [p0, p1] = psi.amplitudes();
    let on_plus = p0 * c - i * p1 * s;
    let on_minus = p0 * s + i * p1 * c;
    (on_plus, on_minus)
}

/// Azimuth of a state about the axis, in `[0, 2π)`; 0 when the state lies on the axis.
fn axis_azimuth<T: Real>(psi: &StateVector2<T>, theta_u: T) -> T {
    let (a, b) = axis_basis_amplitudes(psi, theta_u);
    let pole = T::lit(POLE_TOLERANCE);
    if a.norm() < pole || b.norm() < pole {
        T::zero()
    } else {
        wrap_two_pi(b.arg() - a.arg())
    }
}

fn frame_unchecked<T: Real>(initial: &BlochAngles<T>, target: &BlochAngles<T>, theta_u: T) -> RotationFrame<T> {
    let p0 = projection(theta_u, initial);
    let half = T::lit(0.5);
    let cos_half = (half + half * p0).max(T::zero()).min(T::one()).sqrt();
    let theta_h_s0 = T::lit(2.0) * cos_half.acos();

    let phi_h_0 = axis_azimuth(&state_from_angles(initial), theta_u);
    let phi_h_s = axis_azimuth(&state_from_angles(target), theta_u);
    let d = (phi_h_s - phi_h_0).abs();
    let phi_h_s0 = d.min(T::TAU() - d);
    RotationFrame { theta_u, theta_h_s0, phi_h_0, phi_h_s, phi_h_s0 }
}

/// Coordinates of both states in the frame of axis `θ_u`.
pub fn frame_coordinates<T: Real>(
    initial: &BlochAngles<T>,
    target: &BlochAngles<T>,
    theta_u: T,
) -> Result<RotationFrame<T>> {
    let residual = (projection(theta_u, initial) - projection(theta_u, target)).abs();
    if !(residual <= T::tol(AXIS_RESIDUAL)) {
        return Err(Error::InconsistentAxis(residual.as_f64()));
    }
    Ok(frame_unchecked(initial, target, theta_u))
}

/// Largest admissible envelope magnitude when `|u_z|` and `|u_y|` must stay within `bound`.
pub fn component_bound_cap<T: Real>(theta_u: T, bound: T) -> T {
    let (s, c) = theta_u.sin_cos();
    bound / c.abs().max(s.abs())
}

/// Plans a single rotation about the solved axis.
pub fn plan_one_rotation<T: Real>(
    initial: &BlochAngles<T>,
    target: &BlochAngles<T>,
    shape: PulseShape,
    lambda: T,
    bound: Option<T>,
) -> Result<(Schedule<T>, PerformanceReport<T>)> {
    check_lambda(lambda)?;
    check_bound(bound)?;

    let theta_u = solve_axis(initial, target);
    let frame = frame_coordinates(initial, target, theta_u)?;

    let optimum = unbounded_optimal_magnitude(shape, lambda);
    let magnitude = match bound {
        Some(b) => optimum.min(component_bound_cap(theta_u, b)),
        None => optimum,
    };
    let clamped = magnitude < optimum;

    let angle = frame.phi_h_s0;
    if angle < T::lit(ZERO_GAP) {
        return Ok((Schedule::empty(Scheme::OneRotation, shape, lambda), PerformanceReport::zero()));
    }

    let t_f = shape.duration_coefficient::<T>() * angle / magnitude;
    let segment = PulseSegment {
        axis: Axis::Tilted(theta_u),
        shape,
        window: PulseWindow::new(T::zero(), t_f, magnitude)?,
        sign: frame.direction(),
    };
    let schedule = Schedule::new(Scheme::OneRotation, shape, lambda, vec![segment], t_f)?;
    let energy = shape.energy_coefficient::<T>() * magnitude * angle;
    Ok((schedule, PerformanceReport::new(lambda, t_f, energy, magnitude, clamped)))
}

/// Constant `u_y` that, together with the fixed drift `σ_z`, rotates `initial` onto `target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedDriftControl<T> {
    pub u_y: T,
    /// Axis angle `atan(u_y)`, in `(−π/2, π/2)`.
    pub theta_u: T,
    /// Time the constant Hamiltonian `σ_z + u_y σ_y` must act.
    pub duration: T,
}

/// Bang-bang control under `H = σ_z + u_y σ_y` with a constant `u_y = tanθ_u`.
///
/// The drift fixes the rotation sense, so the rotation angle is the full
/// forward azimuthal gap rather than the shortest one.
pub fn fixed_drift_control<T: Real>(
    initial: &BlochAngles<T>,
    target: &BlochAngles<T>,
    bound: Option<T>,
) -> Result<FixedDriftControl<T>> {
    check_bound(bound)?;
    let (a, b) = axis_coefficients(initial, target);
    if a.abs() <= T::tol(DEGENERATE_AXIS) {
        return Err(Error::NoFixedDriftSolution);
    }
    let u_y = b / a;
    if let Some(bound) = bound {
        if bound < u_y.abs() {
            return Err(Error::BoundInfeasible { bound: bound.as_f64(), required: u_y.abs().as_f64() });
        }
    }
    let theta_u = u_y.atan();
    let frame = frame_unchecked(initial, target, theta_u);
    let forward = wrap_two_pi(frame.phi_h_s - frame.phi_h_0);
    let rate = (T::one() + u_y * u_y).sqrt();
    Ok(FixedDriftControl { u_y, theta_u, duration: forward / (T::lit(2.0) * rate) })
}
