//! Error types shared across the library.

use thiserror::Error;

/// Failures raised while evaluating dynamics or control at a state.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    /// Spacecraft coincides with a primary body; gravity is singular there.
    #[error("spacecraft is at primary {index} (distance {distance} m); dynamics singular")]
    PrimarySingularity { index: u8, distance: f64 },

    /// Controller terms divide by the distance from the libration point;
    /// below the guard radius they are not evaluable.
    #[error("distance from libration point {radius} m is below the {guard} m guard; controller undefined")]
    DegenerateRadius { radius: f64, guard: f64 },
}

/// A dynamics failure annotated with the RK4 stage where it occurred.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("integration stage {stage} at t = {t} s: {source}")]
pub struct StepError {
    pub stage: u8,
    pub t: f64,
    #[source]
    pub source: DynamicsError,
}

/// Failures constructing geometry or objectives from raw parameters.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid parameter {name}: {reason} (got {value})")]
pub struct InvalidParameter {
    pub name: &'static str,
    pub value: f64,
    pub reason: &'static str,
}

/// Failures loading or validating a scenario/sweep configuration file.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot parse config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid config value for `{key}`: {reason}")]
    Invalid { key: &'static str, reason: String },
}

/// Failures writing trajectory/summary/sweep output files.
#[derive(Debug, Error)]
#[error("cannot write {path}: {source}")]
pub struct OutputError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}
