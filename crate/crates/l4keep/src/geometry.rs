//! Rotating-frame geometry of the circular restricted three-body problem:
//! mean motion, primary positions, the L4 point, and the frame rotation.
//!
//! Conventions (fixed once, used everywhere):
//! - synodic frame: barycenter origin, primaries pinned on the x-axis with
//!   m1 at negative x and m2 at positive x, counterclockwise rotation, so
//!   the frame angular velocity is ω = (0, 0, +φ̇);
//! - L4 sits at positive y, forming an equilateral triangle with the
//!   primaries;
//! - the hat map is ω̂v = ω × v (the convention under which the closed-loop
//!   Coriolis cancellation −2ω̂ṙ + ṙ×(−2ω) = 0 holds exactly).

use crate::error::InvalidParameter;
use crate::vec3::Vec3;

/// Immutable description of the two-primary system and its L4 point.
/// All derived fields are computed once at construction; a scenario is
/// internally consistent because nothing here can be mutated mid-run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBodySystem {
    /// Gravitational constant, m³ kg⁻¹ s⁻².
    pub k: f64,
    /// Primary masses, kg.
    pub m1: f64,
    pub m2: f64,
    /// Distance D between the primaries, m.
    pub separation: f64,
    /// Mean motion φ̇ = √(k(m1+m2)/D³), rad/s.
    pub phi_dot: f64,
    /// Primary positions from the barycenter (synodic frame), m.
    pub r_1b: Vec3,
    pub r_2b: Vec3,
    /// L4 position from the barycenter, m.
    pub r_c: Vec3,
    /// Vectors from m1 (resp. m2) to L4, m.
    pub r_1c: Vec3,
    pub r_2c: Vec3,
    /// Frame angular velocity ω = (0, 0, φ̇), rad/s.
    pub omega: Vec3,
}

fn require_positive(name: &'static str, value: f64) -> Result<(), InvalidParameter> {
    if !value.is_finite() {
        return Err(InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    if value <= 0.0 {
        return Err(InvalidParameter {
            name,
            value,
            reason: "must be > 0",
        });
    }
    Ok(())
}

/// Builds the system geometry from the four physical parameters.
///
/// The barycenter condition m1·r_1b + m2·r_2b = 0 places the primaries at
/// (−m2·D/(m1+m2), 0, 0) and (+m1·D/(m1+m2), 0, 0); L4 is the apex of the
/// equilateral triangle above the x-axis: (D/2 + r_1b.x, D·√3/2, 0).
pub fn build_system(
    k: f64,
    m1: f64,
    m2: f64,
    separation: f64,
) -> Result<ThreeBodySystem, InvalidParameter> {
    require_positive("k", k)?;
    require_positive("m1", m1)?;
    require_positive("m2", m2)?;
    require_positive("separation", separation)?;

    let total = m1 + m2;
    let phi_dot = (k * total / separation.powi(3)).sqrt();
    let r_1b = Vec3::new(-m2 * separation / total, 0.0, 0.0);
    let r_2b = Vec3::new(m1 * separation / total, 0.0, 0.0);
    let r_c = Vec3::new(
        separation / 2.0 + r_1b.x,
        separation * 3f64.sqrt() / 2.0,
        0.0,
    );
    Ok(ThreeBodySystem {
        k,
        m1,
        m2,
        separation,
        phi_dot,
        r_1b,
        r_2b,
        r_c,
        r_1c: r_c - r_1b,
        r_2c: r_c - r_2b,
        omega: Vec3::new(0.0, 0.0, phi_dot),
    })
}

/// Residual of the L4 equilibrium identity
/// φ̇²·r_c − k·m1/‖r_1c‖³·r_1c − k·m2/‖r_2c‖³·r_2c,
/// which is ≈ 0 for a correctly built system: the centrifugal pull on a body
/// resting at L4 exactly balances the two gravitational pulls.
pub fn l4_identity_residual(sys: &ThreeBodySystem) -> Vec3 {
    let n1 = sys.r_1c.norm();
    let n2 = sys.r_2c.norm();
    sys.phi_dot.powi(2) * sys.r_c
        - (sys.k * sys.m1 / n1.powi(3)) * sys.r_1c
        - (sys.k * sys.m2 / n2.powi(3)) * sys.r_2c
}

/// Applies the angular-velocity hat map: ω̂v = ω × v.
pub fn coriolis_matrix_apply(sys: &ThreeBodySystem, v: Vec3) -> Vec3 {
    sys.omega.cross(v)
}

/// Rotates a synodic-frame vector into the inertial frame sharing the
/// barycenter origin: counterclockwise by φ = φ̇·t about z. Norm-preserving.
pub fn synodic_to_inertial(sys: &ThreeBodySystem, r_b: Vec3, t: f64) -> Vec3 {
    let phi = sys.phi_dot * t;
    let (s, c) = phi.sin_cos();
    Vec3::new(c * r_b.x - s * r_b.y, s * r_b.x + c * r_b.y, r_b.z)
}

/// Earth-Moon defaults matching the reference scenario parameters.
pub mod earth_moon {
    pub const K: f64 = 6.673e-11;
    pub const M1: f64 = 5.972e24;
    pub const M2: f64 = 7.34767e22;
    pub const SEPARATION: f64 = 3.844e8;
}

#[cfg(test)]
pub(crate) fn earth_moon_system() -> ThreeBodySystem {
    build_system(
        earth_moon::K,
        earth_moon::M1,
        earth_moon::M2,
        earth_moon::SEPARATION,
    )
    .unwrap()
}
