//! Station-keeping simulation for small circular orbits about the L4
//! Lagrange point of a circular restricted three-body system.
//!
//! The library models a spacecraft in the rotating (synodic) frame of two
//! primaries, drives it with a saturated Lyapunov feedback law toward a
//! circular orbit of radius `d` and angular momentum `L_d` centered on L4,
//! and audits the closed loop numerically: Lyapunov decay, orbit capture,
//! and post-capture circularity.
//!
//! Modules, bottom up:
//! - [`vec3`]: minimal 3-vector arithmetic.
//! - [`geometry`]: frame constants, primary/L4 placement, rotation rate.
//! - [`dynamics`]: natural and controlled synodic-frame acceleration.
//! - [`lyapunov`]: the scalar function V, its decay rates, audit metrics.
//! - [`controller`]: the feedback law, saturation, a linearized cross-check.
//! - [`integrator`]: fixed-step RK4 propagation, telemetry, capture logic.
//! - [`scenario`]: config files, CSV/JSON artifacts, parameter sweeps.

pub mod controller;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod integrator;
pub mod lyapunov;
pub mod scenario;
pub mod vec3;

pub use controller::{compute_control, ControlOutput};
pub use dynamics::SpacecraftState;
pub use error::{ConfigError, DynamicsError, InvalidParameter, OutputError, StepError};
pub use geometry::ThreeBodySystem;
pub use integrator::{IntegratorSettings, RunStatus, SimulationResult, TrajectorySample};
pub use lyapunov::{ControlObjective, LyapunovAudit};
pub use vec3::Vec3;
