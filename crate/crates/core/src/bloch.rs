//! Pure single-qubit states and their Bloch-sphere angles.
//!
//! A state is written `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩` with `θ ∈ [0, π]` and
//! `φ ∈ [0, 2π)`. At the poles the azimuth is meaningless and is pinned to 0.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{wrap_two_pi, Real};

/// Half-angle magnitude below which a state counts as sitting on a pole.
pub const POLE_TOLERANCE: f64 = 1e-9;
/// Absolute tolerance for comparing angles.
pub const ANGLE_TOLERANCE: f64 = 1e-10;
/// Allowed deviation of `|amp0|² + |amp1|²` from 1.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Canonical `(θ, φ)` parametrization of a pure qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles<T> {
    theta: T,
    phi: T,
}

impl<T: Real> BlochAngles<T> {
    /// Validates `theta ∈ [0, π]`, wraps `phi` into `[0, 2π)` and pins `phi = 0` at the poles.
    pub fn new(theta: T, phi: T) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidAngles(format!(
                "non-finite angle (theta={theta}, phi={phi})"
            )));
        }
        if theta < T::zero() || theta > T::PI() {
            return Err(Error::InvalidAngles(format!(
                "theta={theta} outside [0, pi]"
            )));
        }
        Ok(Self::canonical(theta, phi))
    }

    fn canonical(theta: T, phi: T) -> Self {
        let half = theta / T::lit(2.0);
        let pole = T::lit(POLE_TOLERANCE);
        let phi = if half.sin().abs() < pole || half.cos().abs() < pole {
            T::zero()
        } else {
            wrap_two_pi(phi)
        };
        Self { theta, phi }
    }

    pub fn north() -> Self {
        Self { theta: T::zero(), phi: T::zero() }
    }

    pub fn south() -> Self {
        Self { theta: T::PI(), phi: T::zero() }
    }

    #[inline]
    pub fn theta(&self) -> T {
        self.theta
    }

    #[inline]
    pub fn phi(&self) -> T {
        self.phi
    }

    /// Cartesian Bloch vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn bloch_vector(&self) -> [T; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Same point on the sphere, comparing angles to within [`ANGLE_TOLERANCE`].
    pub fn same_point(&self, other: &Self) -> bool {
        let tol = T::tol(ANGLE_TOLERANCE);
        if (self.theta - other.theta).abs() > tol {
            return false;
        }
        let d = (self.phi - other.phi).abs();
        d.min(T::TAU() - d) <= tol
    }
}

/// Normalized two-component state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector2<T> {
    amps: [Complex<T>; 2],
}

impl<T: Real> StateVector2<T> {
    /// Builds a state, rejecting inputs whose squared norm is off by more than [`NORM_TOLERANCE`].
    pub fn new(amp0: Complex<T>, amp1: Complex<T>) -> Result<Self> {
        let n = amp0.norm_sqr() + amp1.norm_sqr();
        if !n.is_finite() || (n - T::one()).abs() > T::tol(NORM_TOLERANCE) {
            return Err(Error::NotNormalized(n.as_f64()));
        }
        Ok(Self { amps: [amp0, amp1] })
    }

    /// Rescales to unit norm. Panics on the zero vector.
    pub fn normalized(amp0: Complex<T>, amp1: Complex<T>) -> Self {
        let n = (amp0.norm_sqr() + amp1.norm_sqr()).sqrt();
        assert!(n > T::zero(), "cannot normalize the zero vector");
        Self { amps: [amp0 / n, amp1 / n] }
    }

    pub(crate) fn from_array_unchecked(amps: [Complex<T>; 2]) -> Self {
        Self { amps }
    }

    pub fn zero() -> Self {
        Self { amps: [Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero())] }
    }

    pub fn one() -> Self {
        Self { amps: [Complex::new(T::zero(), T::zero()), Complex::new(T::one(), T::zero())] }
    }

    #[inline]
    pub fn amp0(&self) -> Complex<T> {
        self.amps[0]
    }

    #[inline]
    pub fn amp1(&self) -> Complex<T> {
        self.amps[1]
    }

    #[inline]
    pub fn amplitudes(&self) -> [Complex<T>; 2] {
        self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps[0].norm_sqr() + self.amps[1].norm_sqr()
    }

    /// Multiplies both amplitudes by `e^{iα}`.
    pub fn with_global_phase(&self, alpha: T) -> Self {
        let p = Complex::from_polar(T::one(), alpha);
        Self { amps: [self.amps[0] * p, self.amps[1] * p] }
    }

    /// Expectation values `(⟨σx⟩, ⟨σy⟩, ⟨σz⟩)`.
    pub fn bloch_vector(&self) -> [T; 3] {
        let [a, b] = self.amps;
        let cross = a.conj() * b;
        let two = T::lit(2.0);
        [two * cross.re, two * cross.im, a.norm_sqr() - b.norm_sqr()]
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amps[0].conj() * other.amps[0] + self.amps[1].conj() * other.amps[1]
    }
}

/// The three angle gaps driving a z–y–z decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleGaps<T> {
    /// `min(φ₀, 2π − φ₀)`
    pub phi_0m: T,
    /// `min(φ_s, 2π − φ_s)`
    pub phi_sm: T,
    /// `|θ_s − θ₀|`
    pub theta_0s: T,
    /// `phi_0m + theta_0s + phi_sm`
    pub sigma: T,
}

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
pub fn state_from_angles<T: Real>(angles: &BlochAngles<T>) -> StateVector2<T> {
    let (s, c) = (angles.theta / T::lit(2.0)).sin_cos();
    StateVector2 {
        amps: [Complex::new(c, T::zero()), Complex::from_polar(s, angles.phi)],
    }
}

/// Inverse of [`state_from_angles`], modulo global phase.
///
/// The global phase is removed by rotating `amp0` onto the nonnegative real
/// axis, or `amp1` when `amp0` vanishes.
pub fn angles_from_state<T: Real>(psi: &StateVector2<T>) -> Result<BlochAngles<T>> {
    let n = psi.norm_sqr();
    if !n.is_finite() || (n - T::one()).abs() > T::tol(NORM_TOLERANCE) {
        return Err(Error::NotNormalized(n.as_f64()));
    }
    let [a, b] = psi.amps;
    let theta = T::lit(2.0) * b.norm().atan2(a.norm());
    let phi = if a.norm() < T::lit(POLE_TOLERANCE) {
        T::zero()
    } else {
        b.arg() - a.arg()
    };
    Ok(BlochAngles::canonical(theta.min(T::PI()), phi))
}

pub fn angle_gaps<T: Real>(initial: &BlochAngles<T>, target: &BlochAngles<T>) -> AngleGaps<T> {
    let tau = T::TAU();
    let phi_0m = initial.phi.min(tau - initial.phi);
    let phi_sm = target.phi.min(tau - target.phi);
    let theta_0s = (target.theta - initial.theta).abs();
    AngleGaps { phi_0m, phi_sm, theta_0s, sigma: phi_0m + theta_0s + phi_sm }
}

/// `|⟨a|b⟩|²`, clamped into `[0, 1]`.
pub fn fidelity_up_to_phase<T: Real>(a: &StateVector2<T>, b: &StateVector2<T>) -> T {
    a.inner(b).norm_sqr().max(T::zero()).min(T::one())
}
