//! Control schedules: time-ordered shaped pulses on rotation axes in the y–z plane.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulse::{PulseShape, PulseWindow};
use crate::scalar::Real;

/// Rotation axis `n = (0, sinθ_u, cosθ_u)` driven by `σ_n = cosθ_u σ_z + sinθ_u σ_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis<T> {
    Z,
    Y,
    Tilted(T),
}

impl<T: Real> Axis<T> {
    /// `(cosθ_u, sinθ_u)`, exact for the coordinate axes.
    pub fn components(&self) -> (T, T) {
        match *self {
            Axis::Z => (T::one(), T::zero()),
            Axis::Y => (T::zero(), T::one()),
            Axis::Tilted(theta_u) => {
                let (s, c) = theta_u.sin_cos();
                (c, s)
            }
        }
    }

    pub fn theta_u(&self) -> T {
        match *self {
            Axis::Z => T::zero(),
            Axis::Y => T::FRAC_PI_2(),
            Axis::Tilted(theta_u) => theta_u,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of<T: Real>(x: T) -> Self {
        if x < T::zero() {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i8(s: i8) -> Option<Self> {
        match s {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

/// One shaped pulse on one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment<T> {
    pub axis: Axis<T>,
    pub shape: PulseShape,
    pub window: PulseWindow<T>,
    pub sign: Sign,
}

impl<T: Real> PulseSegment<T> {
    /// Signed pulse area `α`; the segment propagator is `exp(−iασ_n)`.
    pub fn signed_area(&self) -> T {
        self.sign.value::<T>() * self.shape.pulse_area(&self.window)
    }

    /// Angle swept on the Bloch sphere, `2·area`.
    pub fn rotation_angle(&self) -> T {
        T::lit(2.0) * self.shape.pulse_area(&self.window)
    }

    /// Signed area accumulated up to time `t`.
    pub fn signed_partial_area(&self, t: T) -> T {
        self.sign.value::<T>() * self.shape.partial_area(&self.window, t)
    }

    /// Scalar envelope `f(t)` including the sign.
    pub fn envelope(&self, t: T) -> T {
        self.sign.value::<T>() * self.shape.eval(&self.window, t)
    }

    /// Physical controls `(u_z, u_y) = f(t)·(cosθ_u, sinθ_u)`.
    pub fn controls_at(&self, t: T) -> (T, T) {
        let f = self.envelope(t);
        let (c, s) = self.axis.components();
        (f * c, f * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "three")]
    ThreeRotation,
    #[serde(rename = "one")]
    OneRotation,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::ThreeRotation => "three",
            Scheme::OneRotation => "one",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "three" | "3" => Ok(Scheme::ThreeRotation),
            "one" | "1" => Ok(Scheme::OneRotation),
            other => Err(Error::Document(format!("unknown scheme '{other}'"))),
        }
    }
}

/// Source of time-dependent controls `(u_z(t), u_y(t))`.
pub trait ControlField<T: Real> {
    fn controls(&self, t: T) -> (T, T);

    /// Times where the controls may jump or kink. Integrators never step across them.
    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }
}

impl<T: Real, F: Fn(T) -> (T, T)> ControlField<T> for F {
    fn controls(&self, t: T) -> (T, T) {
        self(t)
    }
}

/// An ordered, non-overlapping sequence of pulse segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule<T> {
    segments: Vec<PulseSegment<T>>,
    t_f: T,
    scheme: Scheme,
    shape: PulseShape,
    lambda: T,
}

impl<T: Real> Schedule<T> {
    /// Validates ordering and that `t_f` is the end of the last window (or 0 when empty).
    pub fn new(
        scheme: Scheme,
        shape: PulseShape,
        lambda: T,
        segments: Vec<PulseSegment<T>>,
        t_f: T,
    ) -> Result<Self> {
        if !(t_f.is_finite() && t_f >= T::zero()) {
            return Err(Error::InvalidSchedule(format!("t_f={t_f} must be finite and nonnegative")));
        }
        if !(lambda.is_finite() && lambda > T::zero()) {
            return Err(Error::NonPositiveLambda(lambda.as_f64()));
        }
        let mut prev_end = T::zero();
        for (k, seg) in segments.iter().enumerate() {
            PulseWindow::new(seg.window.t0, seg.window.t1, seg.window.magnitude)?;
            if seg.window.t0 < prev_end - T::tol(1e-12) * T::one().max(prev_end) {
                return Err(Error::InvalidSchedule(format!("segment {k} overlaps its predecessor")));
            }
            prev_end = seg.window.t1;
        }
        let end_tol = T::tol(1e-12) * T::one().max(t_f);
        if (prev_end - t_f).abs() > end_tol {
            return Err(Error::InvalidSchedule(format!(
                "t_f={t_f} does not match the last window end {prev_end}"
            )));
        }
        Ok(Self { segments, t_f, scheme, shape, lambda })
    }

    pub fn empty(scheme: Scheme, shape: PulseShape, lambda: T) -> Self {
        Self { segments: Vec::new(), t_f: T::zero(), scheme, shape, lambda }
    }

    pub fn segments(&self) -> &[PulseSegment<T>] {
        &self.segments
    }

    pub fn t_f(&self) -> T {
        self.t_f
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn shape(&self) -> PulseShape {
        self.shape
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Largest `|u_z|` or `|u_y|` any segment can reach.
    pub fn peak_component(&self) -> T {
        self.segments
            .iter()
            .map(|s| {
                let (c, sn) = s.axis.components();
                s.window.magnitude * c.abs().max(sn.abs())
            })
            .fold(T::zero(), T::max)
    }

    /// Closed-form `∫ (u_z² + u_y²) dt`.
    pub fn energy(&self) -> T {
        self.segments.iter().map(|s| s.shape.pulse_energy(&s.window)).fold(T::zero(), |a, b| a + b)
    }

    /// Index of the segment active at `t`, if any.
    pub fn active_segment(&self, t: T) -> Option<usize> {
        self.segments.iter().position(|s| t >= s.window.t0 && t < s.window.t1)
    }
}

impl<T: Real> ControlField<T> for Schedule<T> {
    fn controls(&self, t: T) -> (T, T) {
        self.segments
            .iter()
            .map(|s| s.controls_at(t))
            .fold((T::zero(), T::zero()), |(a, b), (c, d)| (a + c, b + d))
    }

    fn breakpoints(&self) -> Vec<T> {
        let mut pts = Vec::with_capacity(3 * self.segments.len() + 2);
        pts.push(T::zero());
        for s in &self.segments {
            pts.push(s.window.t0);
            pts.push(s.window.midpoint());
            pts.push(s.window.t1);
        }
        pts.push(self.t_f);
        pts
    }
}

/// Time-energy accounting of one schedule: `J = λ·t_f + ∫E(u)dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerformanceReport<T> {
    pub t_f: T,
    pub energy: T,
    pub j_value: T,
    pub te_product: T,
    pub magnitude_used: T,
    pub clamped: bool,
}

impl<T: Real> PerformanceReport<T> {
    pub fn new(lambda: T, t_f: T, energy: T, magnitude_used: T, clamped: bool) -> Self {
        Self {
            t_f,
            energy,
            j_value: lambda * t_f + energy,
            te_product: t_f * energy,
            magnitude_used,
            clamped,
        }
    }

    pub fn zero() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::zero(), false)
    }
}
