//! Fixed-step RK4 propagation of the closed loop, per-step telemetry,
//! orbit-capture detection, and the V-monotonicity audit.

use crate::controller;
use crate::dynamics::{self, SpacecraftState};
use crate::error::{DynamicsError, InvalidParameter, StepError};
use crate::geometry::ThreeBodySystem;
use crate::lyapunov::{self, ControlObjective};
use crate::vec3::Vec3;

/// Radius-error fraction |‖r‖−d|/d within which an orbit counts as held.
pub const CAPTURE_RADIUS_TOL: f64 = 0.005;
/// Angular-momentum error ‖r×ṙ−L_d‖/‖L_d‖ within which an orbit counts as held.
pub const CAPTURE_ANG_MOM_TOL: f64 = 0.01;
/// Relative V increase between unsaturated samples tolerated by the
/// monotonicity audit before it counts a violation.
pub const MONOTONICITY_REL_TOL: f64 = 1e-9;

/// Fixed-step propagation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    /// RK4 step size h, s.
    pub step: f64,
    /// Propagation horizon, s. A horizon shorter than one step yields only
    /// the initial sample.
    pub t_end: f64,
    /// Record every Nth step (the initial and final states are always
    /// recorded).
    pub sample_stride: usize,
}

impl IntegratorSettings {
    pub fn new(step: f64, t_end: f64, sample_stride: usize) -> Result<Self, InvalidParameter> {
        if step.is_nan() || step <= 0.0 || !step.is_finite() {
            return Err(InvalidParameter {
                name: "step",
                value: step,
                reason: "must be positive and finite",
            });
        }
        if t_end.is_nan() || t_end < 0.0 || !t_end.is_finite() {
            return Err(InvalidParameter {
                name: "t_end",
                value: t_end,
                reason: "must be non-negative and finite",
            });
        }
        if sample_stride == 0 {
            return Err(InvalidParameter {
                name: "sample_stride",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        Ok(Self {
            step,
            t_end,
            sample_stride,
        })
    }

    /// Default step: min(T/500, 2π/(1000·φ̇)) with T the nominal orbit
    /// period — resolves the fast orbital timescale while never exceeding a
    /// thousandth of the frame rotation period.
    pub fn default_step(sys: &ThreeBodySystem, obj: &ControlObjective) -> f64 {
        let t_orbit = obj.nominal_period();
        (t_orbit / 500.0).min(2.0 * std::f64::consts::PI / (1000.0 * sys.phi_dot))
    }
}

/// One recorded telemetry row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    /// Time since the start of the run, s.
    pub t: f64,
    /// Position relative to L4, synodic frame, m.
    pub r_cs: Vec3,
    /// Synodic-frame velocity, m/s.
    pub v_cs: Vec3,
    /// Applied (post-saturation) control acceleration, m/s².
    pub u_applied: Vec3,
    /// True iff the raw command exceeded the saturation bound here.
    pub saturated: bool,
    /// Lyapunov function value.
    pub v: f64,
    /// Chain-rule dV/dt under the applied acceleration.
    pub dvdt_chain: f64,
    /// ‖e₁‖ (momentum-error magnitude).
    pub e1_norm: f64,
    /// (‖r‖ − d)/d.
    pub radius_err_frac: f64,
    /// ‖r×ṙ − L_d‖, m²/s (absolute).
    pub ang_mom_err: f64,
    /// Displacement fraction toward/away from the first primary.
    pub eps1: f64,
    /// Displacement fraction toward/away from the second primary.
    pub eps2: f64,
}

/// How a propagation ended.
#[derive(Debug, Clone, PartialEq)]
pub enum RunStatus {
    /// Reached t_end.
    Completed,
    /// A dynamics guard tripped mid-run; samples are truncated at the last
    /// healthy state.
    GuardFailure { t: f64, message: String },
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunStatus::Completed => write!(f, "completed"),
            RunStatus::GuardFailure { t, message } => {
                write!(f, "guard failure at t = {t} s: {message}")
            }
        }
    }
}

/// Aggregated outcome of one propagation.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    /// Recorded telemetry, strictly increasing in t.
    pub samples: Vec<TrajectorySample>,
    /// Earliest time from which the capture thresholds held for a full
    /// nominal period, if any.
    pub capture_time: Option<f64>,
    /// (‖r‖ − d)/d at the final sample.
    pub final_radius_err_frac: f64,
    /// ‖r×ṙ − L_d‖/‖L_d‖ at the final sample.
    pub final_ang_mom_err_frac: f64,
    /// Count of unsaturated sample intervals where V rose beyond tolerance.
    pub monotonicity_violations: usize,
    /// Max ‖u_applied‖ over recorded samples, m/s².
    pub max_control_norm: f64,
    /// Whether the run completed or tripped a guard.
    pub status: RunStatus,
}

impl SimulationResult {
    /// Final recorded sample. At least one sample exists unless the initial
    /// state itself tripped a guard.
    pub fn final_sample(&self) -> Option<&TrajectorySample> {
        self.samples.last()
    }
}

/// One classical RK4 step of ṙ = v, v̇ = accel(state). The acceleration
/// field is re-evaluated at every stage. The returned time is t + h; a
/// caller stepping on a fixed grid should overwrite it with the grid time
/// to avoid accumulation error.
pub fn rk4_step<F>(accel: &F, state: &SpacecraftState, h: f64) -> Result<SpacecraftState, StepError>
where
    F: Fn(&SpacecraftState) -> Result<Vec3, DynamicsError>,
{
    let stage = |r: Vec3, v: Vec3, t: f64, n: u8| -> Result<Vec3, StepError> {
        accel(&SpacecraftState::new(r, v, t)).map_err(|source| StepError {
            stage: n,
            t: state.t,
            source,
        })
    };

    let (r, v, t) = (state.r_cs, state.v_cs, state.t);
    let half = 0.5 * h;

    let a1 = stage(r, v, t, 1)?;
    let (kr1, kv1) = (v, a1);

    let a2 = stage(r + half * kr1, v + half * kv1, t + half, 2)?;
    let (kr2, kv2) = (v + half * kv1, a2);

    let a3 = stage(r + half * kr2, v + half * kv2, t + half, 3)?;
    let (kr3, kv3) = (v + half * kv2, a3);

    let a4 = stage(r + h * kr3, v + h * kv3, t + h, 4)?;
    let (kr4, kv4) = (v + h * kv3, a4);

    Ok(SpacecraftState::new(
        r + (h / 6.0) * (kr1 + 2.0 * kr2 + 2.0 * kr3 + kr4),
        v + (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4),
        t + h,
    ))
}

fn record_sample(
    sys: &ThreeBodySystem,
    obj: &ControlObjective,
    state: &SpacecraftState,
) -> Result<TrajectorySample, DynamicsError> {
    let out = controller::compute_control(sys, state, obj)?;
    let accel = dynamics::controlled_dynamics(sys, state, out.u_applied)?;
    let dvdt_chain = lyapunov::dvdt_chain(state, accel, obj)?;
    let mut audit = lyapunov::lasalle_metrics(state, obj)?;
    audit.dvdt_chain = dvdt_chain;
    let eps = dynamics::epsilons(sys, state.r_cs);
    Ok(TrajectorySample {
        t: state.t,
        r_cs: state.r_cs,
        v_cs: state.v_cs,
        u_applied: out.u_applied,
        saturated: out.saturated,
        v: audit.v,
        dvdt_chain,
        e1_norm: audit.e1_norm,
        radius_err_frac: audit.radius_err_frac,
        ang_mom_err: audit.ang_mom_err,
        eps1: eps.eps1,
        eps2: eps.eps2,
    })
}

/// Propagates the closed loop from `init` to `settings.t_end` with the
/// saturated feedback law recomputed at every RK4 stage. Guard trips do not
/// abort the process: the result carries the truncated telemetry and a
/// `GuardFailure` status.
pub fn simulate(
    sys: &ThreeBodySystem,
    obj: &ControlObjective,
    init: &SpacecraftState,
    settings: &IntegratorSettings,
) -> SimulationResult {
    let accel = |s: &SpacecraftState| -> Result<Vec3, DynamicsError> {
        let out = controller::compute_control(sys, s, obj)?;
        dynamics::controlled_dynamics(sys, s, out.u_applied)
    };

    let h = settings.step;
    let t0 = init.t;
    // Fixed time grid t_i = t0 + i·h plus one truncated step landing exactly
    // on t0 + t_end when the horizon is not a whole number of steps.
    let n_full = (settings.t_end / h + 1e-9).floor() as u64;
    let remainder = settings.t_end - n_full as f64 * h;
    let take_remainder = remainder > 1e-9 * h;

    let mut samples = Vec::new();
    let mut status = RunStatus::Completed;
    let mut state = *init;

    match record_sample(sys, obj, &state) {
        Ok(s) => samples.push(s),
        Err(e) => {
            status = RunStatus::GuardFailure {
                t: t0,
                message: e.to_string(),
            };
            return finish(samples, status, obj);
        }
    }

    let mut failed = false;
    for i in 1..=n_full {
        match rk4_step(&accel, &state, h) {
            Ok(next) => {
                state = next;
                state.t = t0 + i as f64 * h;
            }
            Err(e) => {
                status = RunStatus::GuardFailure {
                    t: state.t,
                    message: e.to_string(),
                };
                failed = true;
                break;
            }
        }
        let is_last = i == n_full && !take_remainder;
        if i % settings.sample_stride as u64 == 0 && !is_last {
            match record_sample(sys, obj, &state) {
                Ok(s) => samples.push(s),
                Err(e) => {
                    status = RunStatus::GuardFailure {
                        t: state.t,
                        message: e.to_string(),
                    };
                    failed = true;
                    break;
                }
            }
        }
    }

    if !failed && take_remainder {
        match rk4_step(&accel, &state, remainder) {
            Ok(next) => {
                state = next;
                state.t = t0 + settings.t_end;
            }
            Err(e) => {
                status = RunStatus::GuardFailure {
                    t: state.t,
                    message: e.to_string(),
                };
                failed = true;
            }
        }
    }

    // The end state is always recorded so the summary's final_* fields
    // describe it; after a guard trip the last healthy state stands in.
    if !failed {
        let already = samples.last().is_some_and(|s| s.t == state.t);
        if !already {
            match record_sample(sys, obj, &state) {
                Ok(s) => samples.push(s),
                Err(e) => {
                    status = RunStatus::GuardFailure {
                        t: state.t,
                        message: e.to_string(),
                    };
                }
            }
        }
    }

    finish(samples, status, obj)
}

fn finish(
    samples: Vec<TrajectorySample>,
    status: RunStatus,
    obj: &ControlObjective,
) -> SimulationResult {
    let capture_time = detect_capture(&samples, obj);
    let (final_radius_err_frac, final_ang_mom_err_frac) = match samples.last() {
        Some(s) => (s.radius_err_frac, s.ang_mom_err / obj.l_d.norm()),
        None => (f64::NAN, f64::NAN),
    };
    let monotonicity_violations = count_monotonicity_violations(&samples);
    let max_control_norm = samples
        .iter()
        .map(|s| s.u_applied.norm())
        .fold(0.0f64, f64::max);
    SimulationResult {
        samples,
        capture_time,
        final_radius_err_frac,
        final_ang_mom_err_frac,
        monotonicity_violations,
        max_control_norm,
        status,
    }
}

/// Earliest sample time t* from which every recorded sample in
/// [t*, t* + W] satisfies |radius_err_frac| ≤ `radius_tol` and
/// ang_mom_err/‖L_d‖ ≤ `ang_mom_tol`. The window must fit inside the data
/// (t* + W ≤ last sample time): a compliant tail shorter than one window is
/// not a capture.
pub fn detect_capture_with(
    samples: &[TrajectorySample],
    obj: &ControlObjective,
    window: f64,
    radius_tol: f64,
    ang_mom_tol: f64,
) -> Option<f64> {
    let last_t = samples.last()?.t;
    let l_d_norm = obj.l_d.norm();
    let slop = 1e-9 * window;
    // bad_prefix[k] = number of non-compliant samples among the first k.
    let mut bad_prefix = Vec::with_capacity(samples.len() + 1);
    bad_prefix.push(0u64);
    for s in samples {
        let ok = s.radius_err_frac.abs() <= radius_tol && s.ang_mom_err <= ang_mom_tol * l_d_norm;
        bad_prefix.push(bad_prefix.last().unwrap() + u64::from(!ok));
    }
    for (i, s) in samples.iter().enumerate() {
        let end_t = s.t + window;
        if end_t > last_t + slop {
            break;
        }
        let hi = samples.partition_point(|x| x.t <= end_t + slop);
        if bad_prefix[hi] == bad_prefix[i] {
            return Some(s.t);
        }
    }
    None
}

/// Capture detection at the standard thresholds (0.5% radius, 1% angular
/// momentum, one nominal period dwell).
pub fn detect_capture(samples: &[TrajectorySample], obj: &ControlObjective) -> Option<f64> {
    detect_capture_with(
        samples,
        obj,
        obj.nominal_period(),
        CAPTURE_RADIUS_TOL,
        CAPTURE_ANG_MOM_TOL,
    )
}

/// Counts sample intervals whose endpoints are both unsaturated and where V
/// rose by more than `MONOTONICITY_REL_TOL`·V. Saturated intervals are
/// excluded: the decay guarantee only covers the unsaturated law.
pub fn count_monotonicity_violations(samples: &[TrajectorySample]) -> usize {
    samples
        .windows(2)
        .filter(|w| {
            !w[0].saturated && !w[1].saturated && w[1].v > w[0].v + MONOTONICITY_REL_TOL * w[0].v
        })
        .count()
}
