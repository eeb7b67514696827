//! Trajectory CSV serialization: 18 fixed columns, shortest-round-trip
//! decimal formatting, exact re-parse.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::OutputError;
use crate::integrator::{SimulationResult, TrajectorySample};
use crate::vec3::Vec3;

/// Column layout of a trajectory file, in order.
pub const TRAJECTORY_HEADER: [&str; 18] = [
    "t",
    "rx",
    "ry",
    "rz",
    "vx",
    "vy",
    "vz",
    "ux",
    "uy",
    "uz",
    "saturated",
    "V",
    "dVdt",
    "e1_norm",
    "radius_err_frac",
    "ang_mom_err",
    "eps1",
    "eps2",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct TrajectoryRow {
    t: f64,
    rx: f64,
    ry: f64,
    rz: f64,
    vx: f64,
    vy: f64,
    vz: f64,
    ux: f64,
    uy: f64,
    uz: f64,
    saturated: bool,
    #[serde(rename = "V")]
    v: f64,
    #[serde(rename = "dVdt")]
    dvdt: f64,
    e1_norm: f64,
    radius_err_frac: f64,
    ang_mom_err: f64,
    eps1: f64,
    eps2: f64,
}

impl From<&TrajectorySample> for TrajectoryRow {
    fn from(s: &TrajectorySample) -> Self {
        TrajectoryRow {
            t: s.t,
            rx: s.r_cs.x,
            ry: s.r_cs.y,
            rz: s.r_cs.z,
            vx: s.v_cs.x,
            vy: s.v_cs.y,
            vz: s.v_cs.z,
            ux: s.u_applied.x,
            uy: s.u_applied.y,
            uz: s.u_applied.z,
            saturated: s.saturated,
            v: s.v,
            dvdt: s.dvdt_chain,
            e1_norm: s.e1_norm,
            radius_err_frac: s.radius_err_frac,
            ang_mom_err: s.ang_mom_err,
            eps1: s.eps1,
            eps2: s.eps2,
        }
    }
}

impl From<TrajectoryRow> for TrajectorySample {
    fn from(r: TrajectoryRow) -> Self {
        TrajectorySample {
            t: r.t,
            r_cs: Vec3::new(r.rx, r.ry, r.rz),
            v_cs: Vec3::new(r.vx, r.vy, r.vz),
            u_applied: Vec3::new(r.ux, r.uy, r.uz),
            saturated: r.saturated,
            v: r.v,
            dvdt_chain: r.dvdt,
            e1_norm: r.e1_norm,
            radius_err_frac: r.radius_err_frac,
            ang_mom_err: r.ang_mom_err,
            eps1: r.eps1,
            eps2: r.eps2,
        }
    }
}

/// Renders samples as CSV text: header + one row per sample. Floats use the
/// shortest decimal representation that re-parses to the same bits, so
/// format → parse → format is a fixed point.
pub fn format_trajectory_csv(samples: &[TrajectorySample]) -> String {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    wtr.write_record(TRAJECTORY_HEADER)
        .expect("in-memory CSV write cannot fail");
    for sample in samples {
        wtr.serialize(TrajectoryRow::from(sample))
            .expect("in-memory CSV write cannot fail");
    }
    String::from_utf8(wtr.into_inner().expect("in-memory CSV flush cannot fail"))
        .expect("CSV output is ASCII")
}

/// Writes `header + one row per sample` to `path`. An empty sample list
/// produces a header-only file.
pub fn write_trajectory_csv(result: &SimulationResult, path: &Path) -> Result<(), OutputError> {
    std::fs::write(path, format_trajectory_csv(&result.samples)).map_err(|source| OutputError {
        path: path.display().to_string(),
        source,
    })
}

/// Parses trajectory CSV bytes (header required) back into samples.
pub fn parse_trajectory_csv(bytes: &[u8]) -> Result<Vec<TrajectorySample>, csv::Error> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(bytes);
    rdr.deserialize::<TrajectoryRow>()
        .map(|row| row.map(TrajectorySample::from))
        .collect()
}

/// Reads a trajectory CSV file back into samples.
pub fn read_trajectory_csv(path: &Path) -> Result<Vec<TrajectorySample>, csv::Error> {
    let bytes = std::fs::read(path).map_err(csv::Error::from)?;
    parse_trajectory_csv(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::RunStatus;

    fn result_with(samples: Vec<TrajectorySample>) -> SimulationResult {
        SimulationResult {
            samples,
            capture_time: None,
            final_radius_err_frac: 0.0,
            final_ang_mom_err_frac: 0.0,
            monotonicity_violations: 0,
            max_control_norm: 0.0,
            status: RunStatus::Completed,
        }
    }

    fn gnarly_sample() -> TrajectorySample {
        TrajectorySample {
            t: 0.1,
            r_cs: Vec3::new(1.2345678912345678e8, -1e-300, 3.0),
            v_cs: Vec3::new(0.30000000000000004, -0.0, 8000.0),
            u_applied: Vec3::new(-640.1326408822251, 2.0f64.powi(-40), 0.0),
            saturated: true,
            v: 2.592405e17,
            dvdt_chain: -2.690427417215399e16,
            e1_norm: 7.2e8,
            radius_err_frac: 9.000000000000001,
            ang_mom_err: 7.2e8,
            eps1: 1.3009821590581616e-4,
            eps2: -1.3004745907374549e-4,
        }
    }

    #[test]
    fn empty_run_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_trajectory_csv(&result_with(vec![]), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.trim_end(), TRAJECTORY_HEADER.join(","));
        assert_eq!(parse_trajectory_csv(text.as_bytes()).unwrap(), vec![]);
    }

    #[test]
    fn single_sample_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        let sample = gnarly_sample();
        write_trajectory_csv(&result_with(vec![sample]), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back = read_trajectory_csv(&path).unwrap();
        assert_eq!(back.len(), 1);
        // Bit-exact on every field (−0.0 may legitimately come back as
        // −0.0; PartialEq treats it equal to 0.0 either way).
        assert_eq!(back[0], sample);
        assert_eq!(back[0].r_cs.y.to_bits(), (-1e-300f64).to_bits());
    }

    #[test]
    fn every_row_has_exactly_18_columns() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let mut samples = Vec::new();
        for i in 0..5 {
            let mut s = gnarly_sample();
            s.t = i as f64;
            s.saturated = i % 2 == 0;
            samples.push(s);
        }
        write_trajectory_csv(&result_with(samples.clone()), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        for line in text.lines() {
            assert_eq!(line.split(',').count(), 18, "line: {line}");
        }
        assert_eq!(read_trajectory_csv(&path).unwrap(), samples);
    }

    #[test]
    fn booleans_are_literal_true_false() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bool.csv");
        let mut s = gnarly_sample();
        s.saturated = false;
        write_trajectory_csv(&result_with(vec![s]), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.lines().nth(1).unwrap().contains(",false,"));
    }

    #[test]
    fn malformed_rows_are_rejected_not_panicked_on() {
        let header = TRAJECTORY_HEADER.join(",");
        // Too few columns.
        let short = format!("{header}\n1.0,2.0,3.0\n");
        assert!(parse_trajectory_csv(short.as_bytes()).is_err());
        // Non-numeric field.
        let mut row = vec!["1.0"; 10];
        row.push("maybe"); // saturated
        row.extend_from_slice(&["1.0"; 7]);
        let bad = format!("{header}\n{}\n", row.join(","));
        assert!(parse_trajectory_csv(bad.as_bytes()).is_err());
        // Wrong header names.
        let renamed = format!("a{header}\n");
        assert!(
            parse_trajectory_csv(renamed.as_bytes()).is_err()
                || parse_trajectory_csv(renamed.as_bytes()).unwrap().is_empty()
        );
    }

    #[test]
    fn unwritable_path_reports_the_path() {
        let err = write_trajectory_csv(&result_with(vec![]), Path::new("/nonexistent-dir/out.csv"))
            .unwrap_err();
        assert!(err.path.contains("out.csv"));
    }
}
