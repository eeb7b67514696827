//! Scenario plumbing: config files in, trajectory CSV + summary JSON out,
//! and grid sweeps over initial conditions.

pub mod config;
pub mod sweep;
pub mod trajectory;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{ConfigError, OutputError};
use crate::integrator::{self, RunStatus, SimulationResult};

pub use config::{load_scenario, parse_scenario_str, PreparedScenario, ScenarioConfig};
pub use sweep::{load_sweep, parse_sweep_str, run_sweep, write_sweep_csv, SweepConfig, SweepRow};
pub use trajectory::{
    format_trajectory_csv, parse_trajectory_csv, read_trajectory_csv, write_trajectory_csv,
    TRAJECTORY_HEADER,
};

/// Anything that can stop a scenario run.
#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Output(#[from] OutputError),
}

/// The summary JSON document written next to every trajectory.
/// `capture_time` is null when the run never captured.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub capture_time: Option<f64>,
    pub final_radius_err_frac: f64,
    pub final_ang_mom_err_frac: f64,
    pub monotonicity_violations: u64,
    pub max_control_norm: f64,
    /// Wall-clock duration of the propagation, s.
    pub wall_time: f64,
    /// "completed", or the guard-failure diagnostic.
    pub status: String,
}

impl RunSummary {
    pub fn from_result(result: &SimulationResult, wall_time: f64) -> Self {
        RunSummary {
            capture_time: result.capture_time,
            final_radius_err_frac: result.final_radius_err_frac,
            final_ang_mom_err_frac: result.final_ang_mom_err_frac,
            monotonicity_violations: result.monotonicity_violations as u64,
            max_control_norm: result.max_control_norm,
            wall_time,
            status: result.status.to_string(),
        }
    }
}

/// Everything a finished scenario run produced.
#[derive(Debug)]
pub struct RunArtifacts {
    pub result: SimulationResult,
    pub summary: RunSummary,
    pub trajectory_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Validates the config, propagates, and writes the trajectory CSV and
/// summary JSON under `out_dir` (created if missing). A guard trip mid-run
/// is not an error here: the truncated artifacts are written and the status
/// field reports the failure.
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunArtifacts, ScenarioError> {
    let prepared = cfg.prepare()?;
    std::fs::create_dir_all(out_dir).map_err(|source| OutputError {
        path: out_dir.display().to_string(),
        source,
    })?;

    let started = Instant::now();
    let result = integrator::simulate(
        &prepared.system,
        &prepared.objective,
        &prepared.initial_state,
        &prepared.settings,
    );
    let wall_time = started.elapsed().as_secs_f64();

    let output = cfg.output();
    let trajectory_path = out_dir.join(output.trajectory_name());
    let summary_path = out_dir.join(output.summary_name());

    write_trajectory_csv(&result, &trajectory_path)?;
    let summary = RunSummary::from_result(&result, wall_time);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&summary_path, text).map_err(|source| OutputError {
        path: summary_path.display().to_string(),
        source,
    })?;

    Ok(RunArtifacts {
        result,
        summary,
        trajectory_path,
        summary_path,
    })
}

/// Exit code mapping shared by the CLI and tests:
/// 0 = captured (or nothing to capture was asked), 1 = completed without
/// capture, 3 = guard failure. (2 = config error, raised before a result
/// exists.)
pub fn exit_code_for(result: &SimulationResult) -> i32 {
    match &result.status {
        RunStatus::GuardFailure { .. } => 3,
        RunStatus::Completed => {
            if result.capture_time.is_some() {
                0
            } else {
                1
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::config::repo_config;

    fn feasible_json(t_end: f64) -> String {
        format!(
            r#"{{
            "objective": {{"d": 1e4, "l_d": {{"x": 0, "y": 0, "z": 1e6}},
                          "beta": 1e-9, "a": 1e4, "u_max": 500}},
            "initial_state": {{"r_cs": {{"x": 1e4, "y": 0, "z": 0}},
                              "v_cs": {{"x": 0, "y": 100, "z": 0}}}},
            "integrator": {{"t_end": {t_end}, "sample_stride": 10}},
            "output": {{"trajectory": "path.csv", "summary": "sum.json"}}
        }}"#
        )
    }

    #[test]
    fn run_writes_both_artifacts_with_requested_names() {
        let cfg = parse_scenario_str(&feasible_json(1500.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("nested/out");
        let artifacts = run_scenario(&cfg, &out).unwrap();
        assert_eq!(artifacts.trajectory_path, out.join("path.csv"));
        assert_eq!(artifacts.summary_path, out.join("sum.json"));
        assert!(artifacts.trajectory_path.exists());
        assert!(artifacts.summary_path.exists());
        assert_eq!(exit_code_for(&artifacts.result), 0);

        // The CSV re-parses to exactly the recorded samples.
        let back = read_trajectory_csv(&artifacts.trajectory_path).unwrap();
        assert_eq!(back, artifacts.result.samples);
    }

    #[test]
    fn summary_json_carries_all_required_fields() {
        let cfg = parse_scenario_str(&feasible_json(1500.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let artifacts = run_scenario(&cfg, dir.path()).unwrap();
        let text = std::fs::read_to_string(&artifacts.summary_path).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        for key in [
            "capture_time",
            "final_radius_err_frac",
            "final_ang_mom_err_frac",
            "monotonicity_violations",
            "max_control_norm",
            "wall_time",
            "status",
        ] {
            assert!(doc.get(key).is_some(), "summary missing {key}");
        }
        assert_eq!(doc["status"], "completed");
        assert!(doc["capture_time"].is_f64(), "this run captures");
        assert!(doc["wall_time"].as_f64().unwrap() > 0.0);
        // And the document round-trips through the typed summary.
        let parsed: RunSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed, artifacts.summary);
    }

    #[test]
    fn no_capture_serializes_a_null_capture_time() {
        // One-second horizon: nothing can dwell for a full window.
        let cfg = parse_scenario_str(&feasible_json(1.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let artifacts = run_scenario(&cfg, dir.path()).unwrap();
        assert_eq!(artifacts.summary.capture_time, None);
        assert_eq!(exit_code_for(&artifacts.result), 1);
        let text = std::fs::read_to_string(&artifacts.summary_path).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(doc["capture_time"].is_null());
    }

    #[test]
    fn guard_failure_writes_partial_artifacts_and_failure_status() {
        // Negligible control authority; the craft drifts from just outside
        // the 1 mm guard shell into it on the first step.
        let json = r#"{
            "objective": {"d": 1e4, "l_d": {"x": 0, "y": 0, "z": 1e6},
                          "beta": 1e-9, "a": 1e4, "u_max": 1e-12},
            "initial_state": {"r_cs": {"x": 1.0005e-3, "y": 0, "z": 0},
                              "v_cs": {"x": -1e-5, "y": 0, "z": 0}},
            "integrator": {"step": 1.0, "t_end": 50}
        }"#;
        let cfg = parse_scenario_str(json).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let artifacts = run_scenario(&cfg, dir.path()).unwrap();
        match &artifacts.result.status {
            RunStatus::GuardFailure { .. } => {}
            other => panic!("expected guard failure, got {other:?}"),
        }
        assert_eq!(exit_code_for(&artifacts.result), 3);
        assert!(artifacts.summary.status.contains("guard failure"));
        assert!(artifacts.trajectory_path.exists());
        let samples = read_trajectory_csv(&artifacts.trajectory_path).unwrap();
        assert_eq!(samples, artifacts.result.samples);
        assert!(samples.last().unwrap().t < 50.0, "trajectory is truncated");
    }

    #[test]
    fn bundled_case_configs_prepare_cleanly() {
        for name in ["case1.json", "case2.json"] {
            let cfg = load_scenario(&repo_config(name)).unwrap();
            let prepared = cfg.prepare().unwrap();
            assert!(prepared.settings.t_end > 0.0);
        }
    }
}
