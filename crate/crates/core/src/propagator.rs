//! Exact SU(2) propagation of schedules plus an independent RK4 oracle.
//!
//! Inside one segment the Hamiltonian is `f(t)σ_n` for a fixed axis, so it
//! commutes with itself at all times and the propagator is
//! `exp(−iα σ_n) = cos α·I − i sin α·σ_n` with `α = ∫f dt`.

use std::io::{self, Write};

use num_complex::Complex;

use crate::bloch::StateVector2;
use crate::error::{Error, Result};
use crate::ode::rk4_piecewise;
use crate::quadrature::simpson;
use crate::scalar::Real;
use crate::schedule::{ControlField, PerformanceReport, PulseSegment, Schedule};
use crate::textfmt::c_exp;

/// Default number of trajectory samples per schedule.
pub const DEFAULT_SAMPLES: usize = 512;

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Unitary2<T> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self { m: [[o, z], [z, o]] }
    }

    /// `exp(−iα(c σ_z + s σ_y))` for `(c, s) = (cosθ_u, sinθ_u)`.
    pub fn rotation(components: (T, T), alpha: T) -> Self {
        let (c, s) = components;
        let (sa, ca) = alpha.sin_cos();
        Self {
            m: [
                [Complex::new(ca, -sa * c), Complex::new(-sa * s, T::zero())],
                [Complex::new(sa * s, T::zero()), Complex::new(ca, sa * c)],
            ],
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * rhs.m[0][j] + self.m[i][1] * rhs.m[1][j];
            }
        }
        Self { m: out }
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self { m: [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]] }
    }

    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, psi: &StateVector2<T>) -> StateVector2<T> {
        let [a, b] = psi.amplitudes();
        StateVector2::from_array_unchecked([
            self.m[0][0] * a + self.m[0][1] * b,
            self.m[1][0] * a + self.m[1][1] * b,
        ])
    }

    /// Largest entry of `|U†U − I|`.
    pub fn unitarity_error(&self) -> T {
        let p = self.adjoint().mul(self);
        let id = Self::identity();
        let mut worst = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.m[i][j] - id.m[i][j]).norm());
            }
        }
        worst
    }
}

pub fn segment_propagator<T: Real>(seg: &PulseSegment<T>) -> Unitary2<T> {
    Unitary2::rotation(seg.axis.components(), seg.signed_area())
}

/// Propagator from the start of `seg` up to time `t`.
pub fn partial_propagator<T: Real>(seg: &PulseSegment<T>, t: T) -> Unitary2<T> {
    Unitary2::rotation(seg.axis.components(), seg.signed_partial_area(t))
}

/// Exact state at time `t`.
pub fn state_at<T: Real>(psi0: &StateVector2<T>, sched: &Schedule<T>, t: T) -> StateVector2<T> {
    let mut psi = *psi0;
    for seg in sched.segments() {
        if t >= seg.window.t1() {
            psi = segment_propagator(seg).apply(&psi);
        } else {
            if t > seg.window.t0() {
                psi = partial_propagator(seg, t).apply(&psi);
            }
            break;
        }
    }
    psi
}

/// States after each successive segment.
pub fn segment_states<T: Real>(psi0: &StateVector2<T>, sched: &Schedule<T>) -> Vec<StateVector2<T>> {
    let mut psi = *psi0;
    sched
        .segments()
        .iter()
        .map(|seg| {
            psi = segment_propagator(seg).apply(&psi);
            psi
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T> {
    pub t: T,
    pub state: StateVector2<T>,
    pub u_z: T,
    pub u_y: T,
}

/// Uniformly sampled path of the state through a schedule.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory<T> {
    pub samples: Vec<TrajectorySample<T>>,
}

impl<T: Real> Trajectory<T> {
    pub const CSV_HEADER: &'static str = "t,re0,im0,re1,im1,bloch_x,bloch_y,bloch_z,u_z,u_y";

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", Self::CSV_HEADER)?;
        for s in &self.samples {
            let [a, b] = s.state.amplitudes();
            let r = s.state.bloch_vector();
            let cols = [s.t, a.re, a.im, b.re, b.im, r[0], r[1], r[2], s.u_z, s.u_y];
            let line: Vec<String> = cols.iter().map(|x| c_exp(x.as_f64(), 12)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Exact final state plus a trajectory with `n_samples` uniform samples on `[0, t_f]`.
pub fn simulate_schedule<T: Real>(
    psi0: &StateVector2<T>,
    sched: &Schedule<T>,
    n_samples: usize,
) -> (StateVector2<T>, Trajectory<T>) {
    let t_f = sched.t_f();
    let n = if t_f > T::zero() { n_samples.max(2) } else { 1 };
    let mut samples = Vec::with_capacity(n);
    for k in 0..n {
        let t = if n == 1 {
            T::zero()
        } else if k + 1 == n {
            t_f
        } else {
            t_f * T::from_usize(k).unwrap() / T::from_usize(n - 1).unwrap()
        };
        let (u_z, u_y) = sched.controls(t);
        samples.push(TrajectorySample { t, state: state_at(psi0, sched, t), u_z, u_y });
    }
    let last = segment_states(psi0, sched).pop().unwrap_or(*psi0);
    (last, Trajectory { samples })
}

/// Fourth-order Runge–Kutta solution of `dψ/dt = −i(u_z σ_z + u_y σ_y)ψ`.
///
/// Renormalizes after each step. Never steps across the field's breakpoints.
pub fn integrate_rk4<T: Real, C: ControlField<T> + ?Sized>(
    psi0: &StateVector2<T>,
    controls: &C,
    t_f: T,
    dt: T,
) -> Result<StateVector2<T>> {
    if !(t_f.is_finite() && t_f >= T::zero()) {
        return Err(Error::InvalidStep(format!("t_f={t_f} must be finite and nonnegative")));
    }
    if t_f == T::zero() {
        return Ok(*psi0);
    }
    if !(dt > T::zero() && dt <= t_f / T::lit(100.0)) {
        return Err(Error::InvalidStep(format!("dt={dt} must lie in (0, t_f/100] for t_f={t_f}")));
    }
    let i = Complex::new(T::zero(), T::one());
    let y = rk4_piecewise(
        psi0.amplitudes(),
        t_f,
        dt,
        controls.breakpoints(),
        |t, y| {
            let (uz, uy) = controls.controls(t);
            // −i(u_z σ_z + u_y σ_y) = [[−i u_z, −u_y], [u_y, i u_z]]
            [-i * y[0] * uz - y[1] * uy, y[0] * uy + i * y[1] * uz]
        },
        |_, y| {
            let n = (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
            y[0] = y[0] / n;
            y[1] = y[1] / n;
        },
    );
    Ok(StateVector2::from_array_unchecked(y))
}

/// Quadrature of `∫(u_z² + u_y²)dt`; `j_value` is `λ·t_f` plus that energy.
///
/// `magnitude_used` is the largest segment peak; `clamped` is always false
/// since a bare schedule does not record why its magnitudes were chosen.
pub fn evaluate_performance_numeric<T: Real>(sched: &Schedule<T>, lambda: T, dt: T) -> Result<PerformanceReport<T>> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidStep(format!("dt={dt} must be positive")));
    }
    let magnitude = sched.segments().iter().map(|s| s.window.magnitude()).fold(T::zero(), T::max);
    if sched.t_f() == T::zero() {
        return Ok(PerformanceReport::new(lambda, T::zero(), T::zero(), magnitude, false));
    }
    let mut breaks = sched.breakpoints();
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    breaks.dedup();
    let energy = simpson(
        |t| {
            let (uz, uy) = sched.controls(t);
            uz * uz + uy * uy
        },
        &breaks,
        dt,
    );
    Ok(PerformanceReport::new(lambda, sched.t_f(), energy, magnitude, false))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::bloch::{angles_from_state, fidelity_up_to_phase, state_from_angles, BlochAngles};
    use crate::pulse::{PulseShape, PulseWindow};
    use crate::schedule::{Axis, Scheme, Sign};
    use crate::three_rotation::plan_three_rotation;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn close(a: &Unitary2<f64>, b: [[Complex<f64>; 2]; 2]) {
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!((a.m[i][j] - b[i][j]).norm(), 0.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn z_rotation_quarter() {
        let seg = PulseSegment {
            axis: Axis::Z,
            shape: PulseShape::Bang,
            window: PulseWindow::new(0.0, FRAC_PI_2, 1.0).unwrap(),
            sign: Sign::Plus,
        };
        close(&segment_propagator(&seg), [[c(0.0, -1.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]);
    }

    #[test]
    fn zero_area_is_identity() {
        close(&Unitary2::rotation((0.3_f64.cos(), 0.3_f64.sin()), 0.0), Unitary2::identity().m);
    }

    #[test]
    fn y_triangle_quarter_turn() {
        let seg = PulseSegment {
            axis: Axis::Y,
            shape: PulseShape::Triangle,
            window: PulseWindow::new(0.0, 1.0, PI).unwrap(),
            sign: Sign::Plus,
        };
        close(&segment_propagator(&seg), [[c(0.0, 0.0), c(-1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
    }

    #[test]
    fn rotation_is_unitary_with_unit_determinant() {
        let u = Unitary2::rotation((0.6_f64, 0.8_f64), 2.345);
        assert!(u.unitarity_error() < 1e-15);
        assert_abs_diff_eq!(u.det().norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn empty_schedule_keeps_state() {
        let psi = state_from_angles(&BlochAngles::new(1.0, 2.0).unwrap());
        let s = Schedule::empty(Scheme::ThreeRotation, PulseShape::Bang, 1.0);
        let (out, traj) = simulate_schedule(&psi, &s, 16);
        assert_eq!(out, psi);
        assert_eq!(traj.samples.len(), 1);
        let r = evaluate_performance_numeric(&s, 1.0, 1e-3).unwrap();
        assert_eq!(r.j_value, 0.0);
        assert_eq!(integrate_rk4(&psi, &s, 0.0, 1e-3).unwrap(), psi);
    }

    #[test]
    fn rk4_on_zero_field_keeps_state() {
        let psi = state_from_angles(&BlochAngles::new(0.4, 5.0).unwrap());
        let out = integrate_rk4(&psi, &|_t: f64| (0.0, 0.0), 1.0, 1e-3).unwrap();
        assert!(fidelity_up_to_phase(&psi, &out) > 1.0 - 1e-15);
    }

    #[test]
    fn rk4_constant_z_matches_closed_form() {
        let psi = state_from_angles(&BlochAngles::new(1.1, 0.2).unwrap());
        let out = integrate_rk4(&psi, &|_t: f64| (1.0, 0.0), FRAC_PI_2, FRAC_PI_2 * 1e-3).unwrap();
        let exact = Unitary2::rotation((1.0, 0.0), FRAC_PI_2).apply(&psi);
        for k in 0..2 {
            assert!((out.amplitudes()[k] - exact.amplitudes()[k]).norm() < 1e-8);
        }
    }

    #[test]
    fn rk4_rejects_coarse_steps() {
        let psi = StateVector2::zero();
        assert!(matches!(integrate_rk4(&psi, &|_t: f64| (1.0, 0.0), 1.0, 0.1), Err(Error::InvalidStep(_))));
        assert!(matches!(integrate_rk4(&psi, &|_t: f64| (1.0, 0.0), 1.0, 0.0), Err(Error::InvalidStep(_))));
    }

    #[test]
    fn pole_to_pole_reaches_target_and_waypoints() {
        let a = BlochAngles::new(0.8, 1.0).unwrap();
        let b = BlochAngles::new(2.2, 4.5).unwrap();
        let (s, _) = plan_three_rotation(&a, &b, PulseShape::Quadratic, 2.0, None).unwrap();
        let psi0 = state_from_angles(&a);
        let states = segment_states(&psi0, &s);
        let after1 = angles_from_state(&states[0]).unwrap();
        assert_abs_diff_eq!(after1.phi(), 0.0, epsilon = 1e-12);
        let after2 = angles_from_state(&states[1]).unwrap();
        assert_abs_diff_eq!(after2.theta(), b.theta(), epsilon = 1e-12);
        let (fin, traj) = simulate_schedule(&psi0, &s, 64);
        assert!(fidelity_up_to_phase(&fin, &state_from_angles(&b)) > 1.0 - 1e-14);
        assert_eq!(traj.samples.len(), 64);
        assert_eq!(traj.samples.last().unwrap().t, s.t_f());
        for w in traj.samples.windows(2) {
            assert!(w[1].t > w[0].t);
        }
    }

    #[test]
    fn north_to_south_bang() {
        let (s, _) =
            plan_three_rotation(&BlochAngles::north(), &BlochAngles::south(), PulseShape::Bang, 1.0, None).unwrap();
        let (fin, _) = simulate_schedule(&StateVector2::zero(), &s, 8);
        assert_abs_diff_eq!(fidelity_up_to_phase(&fin, &StateVector2::one()), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn csv_layout() {
        let (s, _) =
            plan_three_rotation(&BlochAngles::north(), &BlochAngles::south(), PulseShape::Bang, 1.0, None).unwrap();
        let (_, traj) = simulate_schedule(&StateVector2::zero(), &s, 3);
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], Trajectory::<f64>::CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.000000000000e+00,1.000000000000e+00,"));
        assert_eq!(lines[1].split(',').count(), 10);
    }
}
