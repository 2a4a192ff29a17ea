//! Geometric pulse synthesis that steers a single qubit between two points of
//! the Bloch sphere, and the same controls lifted onto a logical qubit encoded
//! in the two-qubit subspace `span{|01⟩, |10⟩}`.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to one of those.

pub mod bloch;
pub mod encoded;
pub mod error;
pub mod json;
mod ode;
pub mod one_rotation;
pub mod propagator;
pub mod pulse;
pub mod quadrature;
pub mod scalar;
pub mod schedule;
pub mod textfmt;
pub mod three_rotation;

pub use bloch::{
    angle_gaps, angles_from_state, fidelity_up_to_phase, state_from_angles, AngleGaps, BlochAngles,
    StateVector2,
};
pub use encoded::{
    dfs_residual, lift_controls, lindblad_apply, logical_operators, simulate_encoded,
    simulate_master_equation, DensityMatrix4, LiftedHamiltonian, LindbladSpec, TwoQubitState,
};
pub use error::{Error, Result};
pub use json::{schedule_from_json, schedule_to_json};
pub use one_rotation::{fixed_drift_control, plan_one_rotation, FixedDriftControl, RotationFrame};
pub use propagator::{
    evaluate_performance_numeric, integrate_rk4, simulate_schedule, Trajectory, TrajectorySample,
    Unitary2,
};
pub use pulse::{PulseShape, PulseWindow};
pub use scalar::Real;
pub use schedule::{Axis, ControlField, PerformanceReport, PulseSegment, Schedule, Scheme, Sign};
pub use three_rotation::{optimal_magnitude_3, plan_three_rotation, unbounded_optimal_magnitude};

pub type BlochAngles64 = BlochAngles<f64>;
pub type StateVector64 = StateVector2<f64>;
pub type Schedule64 = Schedule<f64>;
pub type PerformanceReport64 = PerformanceReport<f64>;
pub type LindbladSpec64 = LindbladSpec<f64>;

pub type BlochAngles32 = BlochAngles<f32>;
pub type StateVector32 = StateVector2<f32>;
pub type Schedule32 = Schedule<f32>;
pub type PerformanceReport32 = PerformanceReport<f32>;
