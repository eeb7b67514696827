//! The Lyapunov function certifying convergence to the target circular
//! orbit, its time derivative in chain-rule and closed-loop ideal forms,
//! and the limit-set membership metrics used to audit convergence.

use crate::dynamics::SpacecraftState;
use crate::error::{DynamicsError, InvalidParameter};
use crate::vec3::Vec3;

/// The target orbit (radius d, angular momentum L_d) and the control gains
/// shaping the approach to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlObjective {
    /// Target orbit radius about the libration point, m.
    pub d: f64,
    /// Desired angular momentum (per unit mass), m²/s.
    pub l_d: Vec3,
    /// Momentum-error damping gain β, m⁻² s⁻¹.
    pub beta: f64,
    /// Radius-error gain a, m² s⁻².
    pub a: f64,
    /// Saturation bound on the applied control, m/s².
    pub u_max: f64,
}

impl ControlObjective {
    pub fn new(d: f64, l_d: Vec3, beta: f64, a: f64, u_max: f64) -> Result<Self, InvalidParameter> {
        fn positive(name: &'static str, value: f64) -> Result<(), InvalidParameter> {
            if !value.is_finite() || value <= 0.0 {
                return Err(InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and > 0",
                });
            }
            Ok(())
        }
        positive("d", d)?;
        positive("beta", beta)?;
        positive("a", a)?;
        positive("u_max", u_max)?;
        if !l_d.is_finite() || l_d.norm() == 0.0 {
            return Err(InvalidParameter {
                name: "l_d",
                value: l_d.norm(),
                reason: "must be finite with nonzero norm",
            });
        }
        Ok(ControlObjective {
            d,
            l_d,
            beta,
            a,
            u_max,
        })
    }

    /// Period of the target orbit: 2π·d²/‖L_d‖ (circumference over the
    /// tangential speed ‖L_d‖/d).
    pub fn nominal_period(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.d * self.d / self.l_d.norm()
    }
}

/// Snapshot of every Lyapunov/limit-set quantity at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovAudit {
    /// Lyapunov value V (mixed SI units, m⁴s⁻² scale).
    pub v: f64,
    /// Chain-rule dV/dt under the actually applied acceleration. The
    /// constructor cannot know the applied control, so it stores NaN and
    /// the propagation loop fills it via `dvdt_chain` before recording.
    pub dvdt_chain: f64,
    /// Closed-loop ideal derivative −β‖e₁‖² (≤ 0 always).
    pub dvdt_ideal: f64,
    /// ‖ṙ‖r‖² − L_d×r‖, m³/s.
    pub e1_norm: f64,
    /// Radial velocity indicator r·ṙ, m²/s.
    pub radial_dot: f64,
    /// ‖r×ṙ − L_d‖, m²/s.
    pub ang_mom_err: f64,
    /// (‖r‖ − d)/d, dimensionless.
    pub radius_err_frac: f64,
}

/// Momentum error e₁ = ṙ·‖r‖² − L_d×r; zero exactly on the target orbit
/// family (circular orbits with angular momentum L_d).
pub fn momentum_error_e1(state: &SpacecraftState, obj: &ControlObjective) -> Vec3 {
    state.v_cs * state.r_cs.norm_squared() - obj.l_d.cross(state.r_cs)
}

/// V = ½(|r·ṙ|² + ‖r×ṙ − L_d‖²) + (a/2)(‖r‖ − d)²; non-negative, zero only
/// on the target orbit.
pub fn lyapunov_value(state: &SpacecraftState, obj: &ControlObjective) -> f64 {
    let radial = state.r_cs.dot(state.v_cs);
    let mom_err = state.r_cs.cross(state.v_cs) - obj.l_d;
    let radius_err = state.r_cs.norm() - obj.d;
    0.5 * (radial * radial + mom_err.norm_squared()) + 0.5 * obj.a * radius_err * radius_err
}

/// Chain-rule time derivative of V given the actual acceleration r̈:
/// (r·ṙ)(‖ṙ‖² + r·r̈) + (r×ṙ − L_d)·(r×r̈) + a(‖r‖−d)(r·ṙ)/‖r‖.
pub fn dvdt_chain(
    state: &SpacecraftState,
    accel: Vec3,
    obj: &ControlObjective,
) -> Result<f64, DynamicsError> {
    let radius = state.r_cs.norm();
    if radius == 0.0 {
        return Err(DynamicsError::DegenerateRadius { radius, guard: 0.0 });
    }
    let r = state.r_cs;
    let v = state.v_cs;
    Ok(r.dot(v) * (v.norm_squared() + r.dot(accel))
        + (r.cross(v) - obj.l_d).dot(r.cross(accel))
        + obj.a * (radius - obj.d) * r.dot(v) / radius)
}

/// Closed-loop ideal derivative −β‖e₁‖²; what dV/dt collapses to when the
/// unsaturated controller is applied (up to the O(ε²) gravity remainder).
pub fn dvdt_ideal(state: &SpacecraftState, obj: &ControlObjective) -> f64 {
    -obj.beta * momentum_error_e1(state, obj).norm_squared()
}

/// Evaluates every audit metric at a state. `dvdt_chain` is left NaN for
/// the caller to fill with the applied acceleration (see field docs).
pub fn lasalle_metrics(
    state: &SpacecraftState,
    obj: &ControlObjective,
) -> Result<LyapunovAudit, DynamicsError> {
    let radius = state.r_cs.norm();
    if radius == 0.0 {
        return Err(DynamicsError::DegenerateRadius { radius, guard: 0.0 });
    }
    Ok(LyapunovAudit {
        v: lyapunov_value(state, obj),
        dvdt_chain: f64::NAN,
        dvdt_ideal: dvdt_ideal(state, obj),
        e1_norm: momentum_error_e1(state, obj).norm(),
        radial_dot: state.r_cs.dot(state.v_cs),
        ang_mom_err: (state.r_cs.cross(state.v_cs) - obj.l_d).norm(),
        radius_err_frac: (radius - obj.d) / obj.d,
    })
}
