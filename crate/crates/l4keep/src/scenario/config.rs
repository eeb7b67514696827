//! Scenario configuration files: JSON schema, parsing, validation, and the
//! translation into runtime types. All quantities are SI base units.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dynamics::SpacecraftState;
use crate::error::{ConfigError, InvalidParameter};
use crate::geometry::{build_system, earth_moon, ThreeBodySystem};
use crate::integrator::IntegratorSettings;
use crate::lyapunov::ControlObjective;
use crate::vec3::Vec3;

/// Primary-body parameters. Omitting the whole block selects the Earth–Moon
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Gravitational constant, m³/(kg·s²).
    pub k: f64,
    /// Mass of the first (heavier) primary, kg.
    pub m1: f64,
    /// Mass of the second primary, kg.
    pub m2: f64,
    /// Distance between the primaries, m.
    pub separation: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            k: earth_moon::K,
            m1: earth_moon::M1,
            m2: earth_moon::M2,
            separation: earth_moon::SEPARATION,
        }
    }
}

/// Target orbit and controller gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveConfig {
    /// Target orbit radius about L4, m.
    pub d: f64,
    /// Target angular momentum per unit mass, m²/s.
    pub l_d: Vec3,
    /// Momentum-error feedback gain, 1/(m²·s).
    pub beta: f64,
    /// Radius-error feedback gain, m³/s².
    pub a: f64,
    /// Saturation bound on the control acceleration, m/s².
    pub u_max: f64,
}

/// Spacecraft state at t = 0, relative to L4 in the synodic frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialStateConfig {
    /// Position, m.
    pub r_cs: Vec3,
    /// Velocity, m/s.
    pub v_cs: Vec3,
}

/// Propagation settings. `step` defaults to min(T/500, 2π/(1000·φ̇));
/// `sample_stride` defaults to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    pub t_end: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_stride: Option<usize>,
}

/// Output file names, resolved relative to the output directory. Defaults:
/// `trajectory.csv` and `summary.json`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<String>,
}

impl OutputConfig {
    pub fn trajectory_name(&self) -> &str {
        self.trajectory.as_deref().unwrap_or("trajectory.csv")
    }

    pub fn summary_name(&self) -> &str {
        self.summary.as_deref().unwrap_or("summary.json")
    }
}

/// One complete simulation scenario as read from a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemConfig>,
    pub objective: ObjectiveConfig,
    pub initial_state: InitialStateConfig,
    pub integrator: IntegratorConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

/// Runtime types built from a validated [`ScenarioConfig`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedScenario {
    pub system: ThreeBodySystem,
    pub objective: ControlObjective,
    pub initial_state: SpacecraftState,
    pub settings: IntegratorSettings,
}

fn invalid(err: InvalidParameter) -> ConfigError {
    ConfigError::Invalid {
        key: err.name,
        reason: format!("{} (got {})", err.reason, err.value),
    }
}

impl ScenarioConfig {
    /// Validates every field and assembles the runtime representation,
    /// filling defaults (Earth–Moon system, step rule, stride 1).
    pub fn prepare(&self) -> Result<PreparedScenario, ConfigError> {
        let sc = self.system.unwrap_or_default();
        let system = build_system(sc.k, sc.m1, sc.m2, sc.separation).map_err(invalid)?;
        let o = &self.objective;
        let objective = ControlObjective::new(o.d, o.l_d, o.beta, o.a, o.u_max).map_err(invalid)?;
        if !self.initial_state.r_cs.is_finite() || !self.initial_state.v_cs.is_finite() {
            return Err(ConfigError::Invalid {
                key: "initial_state",
                reason: "r_cs and v_cs components must be finite".into(),
            });
        }
        let initial_state =
            SpacecraftState::new(self.initial_state.r_cs, self.initial_state.v_cs, 0.0);
        let step = self
            .integrator
            .step
            .unwrap_or_else(|| IntegratorSettings::default_step(&system, &objective));
        let settings = IntegratorSettings::new(
            step,
            self.integrator.t_end,
            self.integrator.sample_stride.unwrap_or(1),
        )
        .map_err(invalid)?;
        Ok(PreparedScenario {
            system,
            objective,
            initial_state,
            settings,
        })
    }

    pub fn output(&self) -> OutputConfig {
        self.output.clone().unwrap_or_default()
    }
}

/// Parses a scenario config from JSON text (no validation beyond the
/// schema; unknown keys are rejected so typos fail loudly).
pub fn parse_scenario_str(text: &str) -> Result<ScenarioConfig, ConfigError> {
    Ok(serde_json::from_str(text)?)
}

/// Reads, parses, and fully validates a scenario config file.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let cfg = parse_scenario_str(&text)?;
    cfg.prepare()?;
    Ok(cfg)
}

#[cfg(test)]
pub(crate) fn repo_config(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal_json() -> String {
        r#"{
            "objective": {"d": 1e4, "l_d": {"x": 0, "y": 0, "z": 1e6},
                          "beta": 1e-11, "a": 1e4, "u_max": 500},
            "initial_state": {"r_cs": {"x": 2e4, "y": 0, "z": 0},
                              "v_cs": {"x": 0, "y": 50, "z": 0}},
            "integrator": {"t_end": 100}
        }"#
        .to_string()
    }

    #[test]
    fn bundled_case1_matches_published_parameters() {
        let cfg = load_scenario(&repo_config("case1.json")).unwrap();
        assert_eq!(cfg.initial_state.r_cs, Vec3::new(1e5, 0.0, 0.0));
        assert_eq!(cfg.initial_state.v_cs, Vec3::new(0.0, 8000.0, 0.0));
        assert_eq!(cfg.objective.l_d, Vec3::new(0.0, 0.0, 8e7));
        assert_eq!(cfg.objective.d, 1e4);
        assert_eq!(cfg.objective.u_max, 500.0);
        assert_eq!(cfg.objective.beta, 1e-11);
        assert_eq!(cfg.objective.a, 1e4);
    }

    #[test]
    fn bundled_case2_matches_published_parameters() {
        let cfg = load_scenario(&repo_config("case2.json")).unwrap();
        assert_eq!(cfg.initial_state.r_cs, Vec3::new(75000.0, 75000.0, 1000.0));
        assert_eq!(cfg.initial_state.v_cs, Vec3::new(100.0, 7500.0, 10.0));
        assert_eq!(cfg.objective.l_d, Vec3::new(0.0, 0.0, 1e6));
        assert_eq!(cfg.objective.d, 1e4);
    }

    #[test]
    fn defaults_fill_system_step_and_stride() {
        let cfg = parse_scenario_str(&minimal_json()).unwrap();
        let prepared = cfg.prepare().unwrap();
        assert_eq!(prepared.system.separation, earth_moon::SEPARATION);
        assert_eq!(prepared.settings.sample_stride, 1);
        let expected_step = IntegratorSettings::default_step(&prepared.system, &prepared.objective);
        assert_eq!(prepared.settings.step, expected_step);
        assert_eq!(prepared.initial_state.t, 0.0);
    }

    #[test]
    fn negative_radius_is_rejected_naming_the_key() {
        let text = minimal_json().replace(r#""d": 1e4"#, r#""d": -5"#);
        let cfg = parse_scenario_str(&text).unwrap();
        match cfg.prepare() {
            Err(ConfigError::Invalid { key: "d", .. }) => {}
            other => panic!("expected invalid `d`, got {other:?}"),
        }
    }

    #[test]
    fn bad_system_and_integrator_values_name_their_keys() {
        let mut cfg = parse_scenario_str(&minimal_json()).unwrap();
        cfg.system = Some(SystemConfig {
            separation: 0.0,
            ..SystemConfig::default()
        });
        assert!(matches!(
            cfg.prepare(),
            Err(ConfigError::Invalid {
                key: "separation",
                ..
            })
        ));

        let mut cfg = parse_scenario_str(&minimal_json()).unwrap();
        cfg.integrator.step = Some(-1.0);
        assert!(matches!(
            cfg.prepare(),
            Err(ConfigError::Invalid { key: "step", .. })
        ));

        let mut cfg = parse_scenario_str(&minimal_json()).unwrap();
        cfg.integrator.sample_stride = Some(0);
        assert!(matches!(
            cfg.prepare(),
            Err(ConfigError::Invalid {
                key: "sample_stride",
                ..
            })
        ));
    }

    #[test]
    fn non_finite_initial_state_is_rejected() {
        let mut cfg = parse_scenario_str(&minimal_json()).unwrap();
        cfg.initial_state.v_cs = Vec3::new(f64::NAN, 0.0, 0.0);
        assert!(matches!(
            cfg.prepare(),
            Err(ConfigError::Invalid {
                key: "initial_state",
                ..
            })
        ));
    }

    #[test]
    fn unknown_and_missing_keys_fail_the_parse() {
        let with_typo = minimal_json().replace(r#""t_end""#, r#""tend""#);
        assert!(matches!(
            parse_scenario_str(&with_typo),
            Err(ConfigError::Parse(_))
        ));

        let missing = r#"{"initial_state": {"r_cs": {"x":0,"y":0,"z":0}, "v_cs": {"x":0,"y":0,"z":0}}, "integrator": {"t_end": 1}}"#;
        assert!(matches!(
            parse_scenario_str(missing),
            Err(ConfigError::Parse(_))
        ));

        let extra = minimal_json().replace(r#""integrator""#, r#""plume": 3, "integrator""#);
        assert!(matches!(
            parse_scenario_str(&extra),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn missing_file_reports_the_path() {
        match load_scenario(Path::new("/nonexistent/nowhere.json")) {
            Err(ConfigError::Read { path, .. }) => assert!(path.contains("nowhere.json")),
            other => panic!("expected read error, got {other:?}"),
        }
    }

    #[test]
    fn config_round_trips_through_serialization() {
        let cfg = load_scenario(&repo_config("case2.json")).unwrap();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back = parse_scenario_str(&text).unwrap();
        assert_eq!(cfg, back);

        // Defaults-omitting config round-trips too (None stays None).
        let min = parse_scenario_str(&minimal_json()).unwrap();
        let text = serde_json::to_string(&min).unwrap();
        assert_eq!(min, parse_scenario_str(&text).unwrap());
        assert!(min.system.is_none());
    }
}
