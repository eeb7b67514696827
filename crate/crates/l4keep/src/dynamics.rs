//! Natural (uncontrolled) spacecraft dynamics in the synodic frame, the
//! control-augmented dynamics, and the small-displacement quantities
//! (ε₁, ε₂, z, p) consumed by the controller.

use serde::{Deserialize, Serialize};

use crate::error::DynamicsError;
use crate::geometry::ThreeBodySystem;
use crate::vec3::Vec3;

/// Below this distance from the libration point the controller's 1/‖r‖
/// terms are not evaluated; the run aborts with a diagnostic instead of
/// producing infinities. Target radii are ~1e4 m, so this is unreachable in
/// normal operation.
pub const R_MIN_GUARD: f64 = 1e-3;

/// Spacecraft state relative to the libration point, synodic frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacecraftState {
    /// Position from L4, m.
    pub r_cs: Vec3,
    /// Velocity relative to L4, m/s.
    pub v_cs: Vec3,
    /// Time since scenario start, s.
    pub t: f64,
}

impl SpacecraftState {
    pub fn new(r_cs: Vec3, v_cs: Vec3, t: f64) -> Self {
        SpacecraftState { r_cs, v_cs, t }
    }
}

/// Relative distance perturbations ε_i = ‖r_is‖/‖r_ic‖ − 1, computed exactly
/// (not first-order). They quantify how far the spacecraft strays from the
/// small-orbit regime the control derivation assumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpsilonPair {
    pub eps1: f64,
    pub eps2: f64,
}

/// Positions of the spacecraft relative to each primary:
/// (r_1s, r_2s) = (r_1c + r_cs, r_2c + r_cs).
pub fn relative_positions(sys: &ThreeBodySystem, r_cs: Vec3) -> (Vec3, Vec3) {
    (sys.r_1c + r_cs, sys.r_2c + r_cs)
}

/// Exact ε_i = ‖r_ic + r_cs‖/‖r_ic‖ − 1 for both primaries.
pub fn epsilons(sys: &ThreeBodySystem, r_cs: Vec3) -> EpsilonPair {
    let (r_1s, r_2s) = relative_positions(sys, r_cs);
    EpsilonPair {
        eps1: r_1s.norm() / sys.r_1c.norm() - 1.0,
        eps2: r_2s.norm() / sys.r_2c.norm() - 1.0,
    }
}

/// First-order gravity-gradient correction
/// z = 3ε₁·k·m1/‖r_1c‖³·r_1c + 3ε₂·k·m2/‖r_2c‖³·r_2c,
/// with the exact ε_i above.
pub fn z_vector(sys: &ThreeBodySystem, r_cs: Vec3) -> Vec3 {
    let eps = epsilons(sys, r_cs);
    let n1 = sys.r_1c.norm();
    let n2 = sys.r_2c.norm();
    (3.0 * eps.eps1 * sys.k * sys.m1 / n1.powi(3)) * sys.r_1c
        + (3.0 * eps.eps2 * sys.k * sys.m2 / n2.powi(3)) * sys.r_2c
}

/// Uncontrolled synodic-frame acceleration of the spacecraft:
/// φ̇²r_cs + φ̇²r_c − 2ω×ṙ_cs − k·m1/‖r_1s‖³·r_1s − k·m2/‖r_2s‖³·r_2s.
/// (centrifugal + Coriolis fictitious forces plus both gravitational pulls,
/// written about the libration point).
pub fn natural_dynamics(
    sys: &ThreeBodySystem,
    state: &SpacecraftState,
) -> Result<Vec3, DynamicsError> {
    let (r_1s, r_2s) = relative_positions(sys, state.r_cs);
    let n1 = r_1s.norm();
    let n2 = r_2s.norm();
    if n1 == 0.0 {
        return Err(DynamicsError::PrimarySingularity {
            index: 1,
            distance: n1,
        });
    }
    if n2 == 0.0 {
        return Err(DynamicsError::PrimarySingularity {
            index: 2,
            distance: n2,
        });
    }
    let phi2 = sys.phi_dot * sys.phi_dot;
    Ok(phi2 * state.r_cs + phi2 * sys.r_c
        - 2.0 * sys.omega.cross(state.v_cs)
        - (sys.k * sys.m1 / n1.powi(3)) * r_1s
        - (sys.k * sys.m2 / n2.powi(3)) * r_2s)
}

/// Position/velocity-dependent gain
/// p = φ̇² + ‖ṙ‖²/‖r‖² − k·m1/‖r_1s‖³ − k·m2/‖r_2s‖³  (s⁻²),
/// used by the controller as q = −p. Requires ‖r_cs‖ above the guard.
pub fn p_scalar(sys: &ThreeBodySystem, state: &SpacecraftState) -> Result<f64, DynamicsError> {
    let radius = state.r_cs.norm();
    if radius < R_MIN_GUARD {
        return Err(DynamicsError::DegenerateRadius {
            radius,
            guard: R_MIN_GUARD,
        });
    }
    let (r_1s, r_2s) = relative_positions(sys, state.r_cs);
    Ok(
        sys.phi_dot * sys.phi_dot + state.v_cs.norm_squared() / state.r_cs.norm_squared()
            - sys.k * sys.m1 / r_1s.norm().powi(3)
            - sys.k * sys.m2 / r_2s.norm().powi(3),
    )
}

/// Control-augmented dynamics: r̈ = natural_dynamics + u.
pub fn controlled_dynamics(
    sys: &ThreeBodySystem,
    state: &SpacecraftState,
    u: Vec3,
) -> Result<Vec3, DynamicsError> {
    Ok(natural_dynamics(sys, state)? + u)
}
