//! Local wave-function pulse primitives: constant, triangle and quadratic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseShape {
    /// Piecewise constant (bang-bang).
    Bang,
    Triangle,
    Quadratic,
}

impl PulseShape {
    pub const ALL: [PulseShape; 3] = [PulseShape::Bang, PulseShape::Triangle, PulseShape::Quadratic];

    pub fn name(self) -> &'static str {
        match self {
            PulseShape::Bang => "bang",
            PulseShape::Triangle => "triangle",
            PulseShape::Quadratic => "quadratic",
        }
    }

    /// Pulse area over `L·Δ`: 1, 1/2, 2/3.
    pub fn area_fraction<T: Real>(self) -> T {
        match self {
            PulseShape::Bang => T::one(),
            PulseShape::Triangle => T::lit(0.5),
            PulseShape::Quadratic => T::lit(2.0) / T::lit(3.0),
        }
    }

    /// Energy `∫u²dt` over `L²·Δ`: 1, 1/3, 8/15.
    pub fn energy_fraction<T: Real>(self) -> T {
        match self {
            PulseShape::Bang => T::one(),
            PulseShape::Triangle => T::one() / T::lit(3.0),
            PulseShape::Quadratic => T::lit(8.0) / T::lit(15.0),
        }
    }

    /// Window length per unit of rotation angle and unit peak: `Δ = c·angle/L` with c = 1/2, 1, 3/4.
    pub fn duration_coefficient<T: Real>(self) -> T {
        match self {
            PulseShape::Bang => T::lit(0.5),
            PulseShape::Triangle => T::one(),
            PulseShape::Quadratic => T::lit(0.75),
        }
    }

    /// Energy per unit of rotation angle and unit peak: `E = e·L·angle` with e = 1/2, 1/3, 2/5.
    pub fn energy_coefficient<T: Real>(self) -> T {
        match self {
            PulseShape::Bang => T::lit(0.5),
            PulseShape::Triangle => T::one() / T::lit(3.0),
            PulseShape::Quadratic => T::lit(0.4),
        }
    }

    /// Value of the pulse at time `t`. Support is the half-open window `[t0, t1)`.
    pub fn eval<T: Real>(self, w: &PulseWindow<T>, t: T) -> T {
        if t < w.t0 || t >= w.t1 {
            return T::zero();
        }
        let width = w.width();
        let l = w.magnitude;
        let two = T::lit(2.0);
        match self {
            PulseShape::Bang => l,
            PulseShape::Triangle => {
                let mid = (w.t0 + w.t1) / two;
                if t < mid {
                    two * l / width * (t - w.t0)
                } else {
                    -two * l / width * (t - w.t1)
                }
            }
            PulseShape::Quadratic => T::lit(4.0) * l * (t - w.t0) * (w.t1 - t) / (width * width),
        }
    }

    /// `∫_{t0}^{t1} u dt`.
    pub fn pulse_area<T: Real>(self, w: &PulseWindow<T>) -> T {
        self.area_fraction::<T>() * w.magnitude * w.width()
    }

    /// `∫_{t0}^{t1} u² dt`.
    pub fn pulse_energy<T: Real>(self, w: &PulseWindow<T>) -> T {
        self.energy_fraction::<T>() * w.magnitude * w.magnitude * w.width()
    }

    /// `∫_{t0}^{t} u ds`, clamped to the window.
    pub fn partial_area<T: Real>(self, w: &PulseWindow<T>, t: T) -> T {
        if t <= w.t0 {
            return T::zero();
        }
        if t >= w.t1 {
            return self.pulse_area(w);
        }
        let width = w.width();
        let l = w.magnitude;
        let x = t - w.t0;
        let two = T::lit(2.0);
        match self {
            PulseShape::Bang => l * x,
            PulseShape::Triangle => {
                if x <= width / two {
                    l * x * x / width
                } else {
                    let rest = w.t1 - t;
                    l * width / two - l * rest * rest / width
                }
            }
            PulseShape::Quadratic => {
                T::lit(4.0) * l / (width * width) * (width * x * x / two - x * x * x / T::lit(3.0))
            }
        }
    }
}

impl fmt::Display for PulseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PulseShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bang" | "bang-bang" | "bangbang" => Ok(PulseShape::Bang),
            "triangle" => Ok(PulseShape::Triangle),
            "quadratic" => Ok(PulseShape::Quadratic),
            other => Err(Error::Document(format!("unknown pulse shape '{other}'"))),
        }
    }
}

/// Time window `[t0, t1)` and positive peak magnitude of one pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseWindow<T> {
    pub(crate) t0: T,
    pub(crate) t1: T,
    pub(crate) magnitude: T,
}

impl<T: Real> PulseWindow<T> {
    pub fn new(t0: T, t1: T, magnitude: T) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite() && magnitude.is_finite()) {
            return Err(Error::InvalidWindow("non-finite field".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidWindow(format!("t1={t1} must exceed t0={t0}")));
        }
        if magnitude <= T::zero() {
            return Err(Error::InvalidWindow(format!("magnitude={magnitude} must be positive")));
        }
        Ok(Self { t0, t1, magnitude })
    }

    #[inline]
    pub fn t0(&self) -> T {
        self.t0
    }

    #[inline]
    pub fn t1(&self) -> T {
        self.t1
    }

    #[inline]
    pub fn magnitude(&self) -> T {
        self.magnitude
    }

    #[inline]
    pub fn width(&self) -> T {
        self.t1 - self.t0
    }

    #[inline]
    pub fn midpoint(&self) -> T {
        (self.t0 + self.t1) / T::lit(2.0)
    }
}
