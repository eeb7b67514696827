//! The Lyapunov-derived feedback law, its saturated version, and the
//! equivalent feedback-linearization form used for cross-validation.

use crate::dynamics::{self, SpacecraftState};
use crate::error::DynamicsError;
use crate::geometry::ThreeBodySystem;
use crate::lyapunov::{momentum_error_e1, ControlObjective};
use crate::vec3::Vec3;

/// One controller evaluation: the unsaturated command, what was actually
/// applied, and the gain used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    /// Unsaturated command ū, m/s².
    pub u_raw: Vec3,
    /// Post-saturation command, m/s².
    pub u_applied: Vec3,
    /// True iff ‖u_raw‖ strictly exceeded the bound.
    pub saturated: bool,
    /// The position/velocity gain p; the controller applies q = −p, s⁻².
    pub p: f64,
}

/// Unsaturated feedback command
/// ū = −β·e₁ + ṙ×(−2ω) − p·r − a(‖r‖−d)/‖r‖³·r − z.
///
/// The ṙ×(−2ω) term exists to cancel the frame's Coriolis acceleration
/// −2ω×ṙ exactly; −p·r cancels the centrifugal and point-mass gravity
/// gradient while injecting the centripetal pull for the current speed; the
/// a-term steers the radius toward d; z removes the first-order gravity
/// imbalance between L4 and the actual position.
pub fn raw_control(
    sys: &ThreeBodySystem,
    state: &SpacecraftState,
    obj: &ControlObjective,
) -> Result<Vec3, DynamicsError> {
    let p = dynamics::p_scalar(sys, state)?;
    let radius = state.r_cs.norm();
    let e1 = momentum_error_e1(state, obj);
    Ok(-obj.beta * e1 + state.v_cs.cross(-2.0 * sys.omega)
        - p * state.r_cs
        - (obj.a * (radius - obj.d) / radius.powi(3)) * state.r_cs
        - dynamics::z_vector(sys, state.r_cs))
}

/// Norm clamp preserving direction: u_raw if ‖u_raw‖ ≤ u_max, otherwise
/// u_max·u_raw/‖u_raw‖. The boundary case ‖u_raw‖ = u_max is unsaturated.
pub fn saturate(u_raw: Vec3, u_max: f64) -> Vec3 {
    let norm = u_raw.norm();
    if norm > u_max {
        (u_max / norm) * u_raw
    } else {
        u_raw
    }
}

/// Full controller evaluation with saturation bookkeeping.
pub fn compute_control(
    sys: &ThreeBodySystem,
    state: &SpacecraftState,
    obj: &ControlObjective,
) -> Result<ControlOutput, DynamicsError> {
    let p = dynamics::p_scalar(sys, state)?;
    let u_raw = raw_control(sys, state, obj)?;
    let saturated = u_raw.norm() > obj.u_max;
    let u_applied = if saturated {
        saturate(u_raw, obj.u_max)
    } else {
        u_raw
    };
    Ok(ControlOutput {
        u_raw,
        u_applied,
        saturated,
        p,
    })
}

/// The same law written in feedback-linearization form:
/// ū = −β·e₁ − a·e₂ − f(r, ṙ) − (‖ṙ‖²/‖r‖²)·r with e₂ = (‖r‖−d)/‖r‖³·r.
/// Differs from `raw_control` only by the O(ε²) gravity-expansion
/// remainder, so the two agree to ~1e-10 m/s² in the operating region.
pub fn feedback_linearized_control(
    sys: &ThreeBodySystem,
    state: &SpacecraftState,
    obj: &ControlObjective,
) -> Result<Vec3, DynamicsError> {
    let radius = state.r_cs.norm();
    if radius < dynamics::R_MIN_GUARD {
        return Err(DynamicsError::DegenerateRadius {
            radius,
            guard: dynamics::R_MIN_GUARD,
        });
    }
    let e1 = momentum_error_e1(state, obj);
    let e2 = ((radius - obj.d) / radius.powi(3)) * state.r_cs;
    let natural = dynamics::natural_dynamics(sys, state)?;
    Ok(-obj.beta * e1
        - obj.a * e2
        - natural
        - (state.v_cs.norm_squared() / state.r_cs.norm_squared()) * state.r_cs)
}
