//! Basin-of-attraction sweeps: a grid over initial-state components, one
//! independent simulation per grid point, and a CSV basin map.

use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::SpacecraftState;
use crate::error::{ConfigError, OutputError};
use crate::integrator;
use crate::scenario::config::{PreparedScenario, ScenarioConfig};
use crate::vec3::Vec3;

/// Evenly spaced values over [min, max]; a single-count axis sits at min.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridAxis {
    fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            vec![self.min]
        } else {
            let span = self.max - self.min;
            (0..self.count)
                .map(|i| self.min + span * i as f64 / (self.count - 1) as f64)
                .collect()
        }
    }
}

/// Which initial-state components to sweep. Absent axes stay at the base
/// scenario's value. Row order: rx varies slowest, vz fastest.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rx: Option<GridAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ry: Option<GridAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rz: Option<GridAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vx: Option<GridAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vy: Option<GridAxis>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vz: Option<GridAxis>,
}

/// Optional replacements for the standard capture thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CaptureOverrides {
    /// |radius_err_frac| threshold (default 0.005).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_tol: Option<f64>,
    /// ang_mom_err/‖L_d‖ threshold (default 0.01).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ang_mom_tol: Option<f64>,
    /// Dwell window, s (default one nominal period).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
}

/// A sweep: base scenario plus grid plus optional capture overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: ScenarioConfig,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capture: Option<CaptureOverrides>,
}

/// One basin-map row: grid point, capture outcome, end-state errors, and
/// the largest displacement fraction seen en route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
    pub captured: bool,
    pub capture_time: Option<f64>,
    pub final_radius_err_frac: f64,
    pub final_ang_mom_err_frac: f64,
    pub max_abs_eps: f64,
    pub status: String,
}

fn check_axis(key: &'static str, axis: &GridAxis) -> Result<(), ConfigError> {
    if axis.count == 0 {
        return Err(ConfigError::Invalid {
            key,
            reason: "count must be at least 1".into(),
        });
    }
    if !axis.min.is_finite() || !axis.max.is_finite() {
        return Err(ConfigError::Invalid {
            key,
            reason: "bounds must be finite".into(),
        });
    }
    if axis.min > axis.max {
        return Err(ConfigError::Invalid {
            key,
            reason: format!("min {} exceeds max {}", axis.min, axis.max),
        });
    }
    Ok(())
}

fn check_positive(key: &'static str, value: Option<f64>) -> Result<(), ConfigError> {
    if let Some(v) = value {
        if v.is_nan() || v <= 0.0 || !v.is_finite() {
            return Err(ConfigError::Invalid {
                key,
                reason: format!("must be positive and finite (got {v})"),
            });
        }
    }
    Ok(())
}

impl SweepConfig {
    /// Validates the base scenario, every grid axis, and the capture
    /// overrides; returns the prepared base runtime types.
    pub fn prepare(&self) -> Result<PreparedScenario, ConfigError> {
        let prepared = self.base.prepare()?;
        for (key, axis) in self.axes() {
            if let Some(axis) = axis {
                check_axis(key, &axis)?;
            }
        }
        if let Some(c) = &self.capture {
            check_positive("capture.radius_tol", c.radius_tol)?;
            check_positive("capture.ang_mom_tol", c.ang_mom_tol)?;
            check_positive("capture.window", c.window)?;
        }
        Ok(prepared)
    }

    fn axes(&self) -> [(&'static str, Option<GridAxis>); 6] {
        [
            ("grid.rx", self.grid.rx),
            ("grid.ry", self.grid.ry),
            ("grid.rz", self.grid.rz),
            ("grid.vx", self.grid.vx),
            ("grid.vy", self.grid.vy),
            ("grid.vz", self.grid.vz),
        ]
    }

    /// All grid points in row-major order (rx slowest, vz fastest), as
    /// (initial position, initial velocity) pairs.
    pub fn grid_points(&self) -> Vec<(Vec3, Vec3)> {
        let base_r = self.base.initial_state.r_cs;
        let base_v = self.base.initial_state.v_cs;
        let axis_values = |axis: &Option<GridAxis>, base: f64| -> Vec<f64> {
            axis.as_ref().map_or_else(|| vec![base], GridAxis::values)
        };
        let rxs = axis_values(&self.grid.rx, base_r.x);
        let rys = axis_values(&self.grid.ry, base_r.y);
        let rzs = axis_values(&self.grid.rz, base_r.z);
        let vxs = axis_values(&self.grid.vx, base_v.x);
        let vys = axis_values(&self.grid.vy, base_v.y);
        let vzs = axis_values(&self.grid.vz, base_v.z);
        let mut points = Vec::with_capacity(
            rxs.len() * rys.len() * rzs.len() * vxs.len() * vys.len() * vzs.len(),
        );
        for &rx in &rxs {
            for &ry in &rys {
                for &rz in &rzs {
                    for &vx in &vxs {
                        for &vy in &vys {
                            for &vz in &vzs {
                                points.push((Vec3::new(rx, ry, rz), Vec3::new(vx, vy, vz)));
                            }
                        }
                    }
                }
            }
        }
        points
    }
}

/// Parses a sweep config from JSON text (schema only).
pub fn parse_sweep_str(text: &str) -> Result<SweepConfig, ConfigError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads, parses, and fully validates a sweep config file.
pub fn load_sweep(path: &Path) -> Result<SweepConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let cfg = parse_sweep_str(&text)?;
    cfg.prepare()?;
    Ok(cfg)
}

fn run_point(prepared: &PreparedScenario, cfg: &SweepConfig, r: Vec3, v: Vec3) -> SweepRow {
    let init = SpacecraftState::new(r, v, 0.0);
    let result = integrator::simulate(
        &prepared.system,
        &prepared.objective,
        &init,
        &prepared.settings,
    );
    let overrides = cfg.capture.unwrap_or_default();
    let capture_time = integrator::detect_capture_with(
        &result.samples,
        &prepared.objective,
        overrides
            .window
            .unwrap_or_else(|| prepared.objective.nominal_period()),
        overrides
            .radius_tol
            .unwrap_or(integrator::CAPTURE_RADIUS_TOL),
        overrides
            .ang_mom_tol
            .unwrap_or(integrator::CAPTURE_ANG_MOM_TOL),
    );
    let max_abs_eps = result
        .samples
        .iter()
        .map(|s| s.eps1.abs().max(s.eps2.abs()))
        .fold(f64::NAN, f64::max);
    SweepRow {
        rx: r.x,
        ry: r.y,
        rz: r.z,
        vx: v.x,
        vy: v.y,
        vz: v.z,
        captured: capture_time.is_some(),
        capture_time,
        final_radius_err_frac: result.final_radius_err_frac,
        final_ang_mom_err_frac: result.final_ang_mom_err_frac,
        max_abs_eps,
        status: result.status.to_string(),
    }
}

/// Runs one simulation per grid point. Rows come back in grid order
/// regardless of scheduling; individual guard failures are recorded in
/// their row and do not abort the sweep. `threads` bounds the worker pool
/// (None = rayon default).
pub fn run_sweep(cfg: &SweepConfig, threads: Option<usize>) -> Result<Vec<SweepRow>, ConfigError> {
    use rayon::prelude::*;

    let prepared = cfg.prepare()?;
    let points = cfg.grid_points();
    let run_all = || -> Vec<SweepRow> {
        points
            .par_iter()
            .map(|&(r, v)| run_point(&prepared, cfg, r, v))
            .collect()
    };
    match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| ConfigError::Invalid {
                    key: "parallel",
                    reason: e.to_string(),
                })?;
            Ok(pool.install(run_all))
        }
        None => Ok(run_all()),
    }
}

/// Writes the basin map: header plus one row per grid point, grid order.
pub fn write_sweep_csv(rows: &[SweepRow], path: &Path) -> Result<(), OutputError> {
    let to_output_error = |e: csv::Error| OutputError {
        path: path.display().to_string(),
        source: io::Error::other(e),
    };
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(to_output_error)?;
    wtr.write_record([
        "rx",
        "ry",
        "rz",
        "vx",
        "vy",
        "vz",
        "captured",
        "capture_time",
        "final_radius_err_frac",
        "final_ang_mom_err_frac",
        "max_abs_eps",
        "status",
    ])
    .map_err(to_output_error)?;
    for row in rows {
        wtr.serialize(row).map_err(to_output_error)?;
    }
    wtr.flush().map_err(|source| OutputError {
        path: path.display().to_string(),
        source,
    })?;
    Ok(())
}
