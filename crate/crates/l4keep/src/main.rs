//! Command-line runner: single scenarios, basin sweeps, and self-checks.
//!
//! Exit codes: 0 = captured (or validation passed), 1 = run completed
//! without capture, 2 = configuration error, 3 = runtime guard/output
//! failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use l4keep::controller;
use l4keep::geometry::{self, earth_moon};
use l4keep::scenario::{self, ScenarioError};
use l4keep::vec3::Vec3;

#[derive(Parser)]
#[command(
    name = "l4keep",
    version,
    about = "Lyapunov station-keeping on circular orbits about L4"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate one scenario and write trajectory CSV + summary JSON.
    Simulate {
        /// Scenario config file (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run one simulation per grid point and write a basin-map CSV.
    Sweep {
        /// Sweep config file (JSON).
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads (default: one per core).
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Run built-in geometry and controller self-checks.
    Validate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Simulate { config, out } => simulate(&config, &out),
        Command::Sweep {
            config,
            out,
            parallel,
        } => sweep(&config, &out, parallel),
        Command::Validate => validate(),
    };
    ExitCode::from(code)
}

fn simulate(config: &Path, out: &Path) -> u8 {
    let cfg = match scenario::load_scenario(config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let artifacts = match scenario::run_scenario(&cfg, out) {
        Ok(a) => a,
        Err(ScenarioError::Config(e)) => {
            eprintln!("error: {e}");
            return 2;
        }
        Err(ScenarioError::Output(e)) => {
            eprintln!("error: {e}");
            return 3;
        }
    };
    let s = &artifacts.summary;
    match s.capture_time {
        Some(t) => println!("capture at t = {t} s"),
        None => println!("no capture within horizon"),
    }
    println!("final radius error fraction: {}", s.final_radius_err_frac);
    println!(
        "final angular momentum error fraction: {}",
        s.final_ang_mom_err_frac
    );
    println!("monotonicity violations: {}", s.monotonicity_violations);
    println!("max control norm: {} m/s^2", s.max_control_norm);
    println!("status: {}", s.status);
    println!("wrote {}", artifacts.trajectory_path.display());
    println!("wrote {}", artifacts.summary_path.display());
    scenario::exit_code_for(&artifacts.result) as u8
}

fn sweep(config: &Path, out: &Path, parallel: Option<usize>) -> u8 {
    let cfg = match scenario::load_sweep(config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let rows = match scenario::run_sweep(&cfg, parallel) {
        Ok(rows) => rows,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = std::fs::create_dir_all(out) {
        eprintln!("error: cannot create {}: {e}", out.display());
        return 3;
    }
    let path = out.join("sweep.csv");
    if let Err(e) = scenario::write_sweep_csv(&rows, &path) {
        eprintln!("error: {e}");
        return 3;
    }
    let captured = rows.iter().filter(|r| r.captured).count();
    let failed = rows.iter().filter(|r| r.status != "completed").count();
    println!(
        "{} grid points: {captured} captured, {failed} failed",
        rows.len()
    );
    println!("wrote {}", path.display());
    0
}

/// Geometry and controller identities that must hold for the bundled
/// Earth–Moon system; failures indicate a broken build or platform.
fn validate() -> u8 {
    let mut failures = 0u32;
    let mut check = |name: &str, ok: bool| {
        println!("{}: {name}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };

    let sys = match geometry::build_system(
        earth_moon::K,
        earth_moon::M1,
        earth_moon::M2,
        earth_moon::SEPARATION,
    ) {
        Ok(sys) => sys,
        Err(e) => {
            eprintln!("error: cannot build default system: {e}");
            return 3;
        }
    };

    let residual = geometry::l4_identity_residual(&sys).norm();
    let residual_bound = 1e-9 * sys.phi_dot.powi(2) * sys.r_c.norm();
    check(
        "triangular libration point is an equilibrium of the gravity field",
        residual <= residual_bound,
    );

    check(
        "frame rotation rate within 1% of the published lunar value",
        (sys.phi_dot - 2.66e-6).abs() <= 0.01 * 2.66e-6,
    );

    let mut coriolis_exact = true;
    for v in [
        Vec3::new(1.0, 2.0, 3.0),
        Vec3::new(-8000.0, 50.0, -0.25),
        Vec3::new(0.0, -7.5e3, 1e-6),
    ] {
        let total = -2.0 * geometry::coriolis_matrix_apply(&sys, v) + v.cross(-2.0 * sys.omega);
        coriolis_exact &= total == Vec3::ZERO;
    }
    check(
        "controller gain cancels the Coriolis term exactly",
        coriolis_exact,
    );

    let clamped = controller::saturate(Vec3::new(900.0, 0.0, 0.0), 500.0);
    check(
        "saturation clamps the norm and keeps direction",
        (clamped - Vec3::new(500.0, 0.0, 0.0)).norm() == 0.0
            && controller::saturate(Vec3::new(1.0, 2.0, 2.0), 500.0) == Vec3::new(1.0, 2.0, 2.0),
    );

    let obj = match l4keep::ControlObjective::new(1e4, Vec3::new(0.0, 0.0, 1e6), 1e-11, 1e4, 500.0)
    {
        Ok(obj) => obj,
        Err(e) => {
            eprintln!("error: cannot build reference objective: {e}");
            return 3;
        }
    };
    let r = Vec3::new(obj.d, 0.0, 0.0);
    let v = obj.l_d.cross(r) / (obj.d * obj.d);
    let e1 = l4keep::lyapunov::momentum_error_e1(&l4keep::SpacecraftState::new(r, v, 0.0), &obj);
    check(
        "momentum error vanishes on the target orbit",
        e1.norm() <= 1e-9 * obj.l_d.norm(),
    );

    if failures == 0 {
        println!("all self-checks passed");
        0
    } else {
        eprintln!("{failures} self-check(s) failed");
        3
    }
}
