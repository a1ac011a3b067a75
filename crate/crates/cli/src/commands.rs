//! The five command bodies.
//!
//! Every command follows the same shape: load and validate the
//! configuration, build the initial state, and only then create the
//! output directory and echo the resolved configuration into it, so a
//! rejected run never leaves files behind. Results funnel through
//! [`CmdError`], whose three variants map one-to-one onto the nonzero
//! process exit codes.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use twonov_core::exact::{peakon, periodic_peakon};
use twonov_core::{
    cont_dependence, integrate, make_phi, mollify_study as core_mollify_study, weak_residual,
    CoreError, Field, Report, SolverConfig, State, Trajectory,
};

use crate::config::{InitialData, RunConfig};
use crate::data::{initial_state, standard_perturbation, study_potential, write_snapshot};

/// Failure channel of a command, tagged by exit code:
/// configuration or usage problems exit 1, solution blow-up exits 2,
/// and a violated run property exits 3. The latter two still leave
/// their output files in place.
#[derive(Debug)]
pub enum CmdError {
    Config(String),
    BlowUp(String),
    Property(String),
}

impl CmdError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CmdError::Config(_) => 1,
            CmdError::BlowUp(_) => 2,
            CmdError::Property(_) => 3,
        }
    }
}

impl fmt::Display for CmdError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            CmdError::Config(m) | CmdError::BlowUp(m) | CmdError::Property(m) => m,
        };
        // one line on the error stream, always
        write!(f, "{}", text.replace('\n', " "))
    }
}

fn config_err(e: impl ToString) -> CmdError {
    CmdError::Config(e.to_string())
}

/// Validated inputs shared by every command.
struct Prepared {
    cfg: RunConfig,
    solver: SolverConfig,
    s0: State,
    out: PathBuf,
}

/// Loads the configuration, applies overrides, builds the initial
/// state, and echoes the resolved configuration into the freshly
/// created output directory.
fn prepare(config: &Path, out: &Path, overrides: &[String]) -> Result<Prepared, CmdError> {
    let cfg = RunConfig::load(config, overrides).map_err(CmdError::Config)?;
    let solver = cfg.solver();
    let grid = solver.validate().map_err(config_err)?;
    let s0 = initial_state(&cfg, grid).map_err(CmdError::Config)?;
    fs::create_dir_all(out).map_err(|e| {
        CmdError::Config(format!(
            "cannot create output directory {}: {e}",
            out.display()
        ))
    })?;
    write_text(&out.join("config.toml"), &cfg.echo())?;
    Ok(Prepared {
        cfg,
        solver,
        s0,
        out: out.to_path_buf(),
    })
}

fn write_text(path: &Path, text: &str) -> Result<(), CmdError> {
    fs::write(path, text)
        .map_err(|e| CmdError::Config(format!("cannot write {}: {e}", path.display())))
}

fn write_diagnostics(out: &Path, traj: &Trajectory) -> Result<(), CmdError> {
    let mut text = String::with_capacity(128 + 360 * traj.diagnostics.len());
    text.push_str(Report::CSV_HEADER);
    text.push('\n');
    for report in &traj.diagnostics {
        text.push_str(&report.csv_row());
        text.push('\n');
    }
    write_text(&out.join("diagnostics.csv"), &text)
}

fn blow_up_message(time: f64, reason: &str) -> String {
    format!("blow-up at t={time:.6e}: {reason}")
}

/// Integrates and, on blow-up, still hands back the partial trajectory
/// so callers can write what was computed before exiting 2.
fn run(p: &Prepared) -> Result<Trajectory, (Option<Box<Trajectory>>, CmdError)> {
    match integrate(&p.s0, &p.solver) {
        Ok(traj) => Ok(traj),
        Err(CoreError::BlowUp {
            time,
            reason,
            partial,
        }) => Err((
            Some(partial),
            CmdError::BlowUp(blow_up_message(time, &reason)),
        )),
        Err(e) => Err((None, config_err(e))),
    }
}

/// `simulate`: integrate the configured state, recording diagnostics
/// and one snapshot file per record.
pub fn simulate(config: &Path, out: &Path, overrides: &[String]) -> Result<(), CmdError> {
    let p = prepare(config, out, overrides)?;
    match run(&p) {
        Ok(traj) => write_run_artifacts(&p.out, &traj),
        Err((Some(partial), e)) => {
            write_run_artifacts(&p.out, &partial)?;
            Err(e)
        }
        Err((None, e)) => Err(e),
    }
}

fn write_run_artifacts(out: &Path, traj: &Trajectory) -> Result<(), CmdError> {
    write_diagnostics(out, traj)?;
    for (idx, (time, state)) in traj.times.iter().zip(&traj.states).enumerate() {
        let path = out.join(format!("snapshot_{idx:06}.dat"));
        write_snapshot(&path, *time, state).map_err(CmdError::Config)?;
    }
    Ok(())
}

/// `peakon-validate`: run a travelling-wave selector and compare every
/// record against the translated reference profile.
pub fn peakon_validate(config: &Path, out: &Path, overrides: &[String]) -> Result<(), CmdError> {
    let p = prepare(config, out, overrides)?;
    match p.cfg.initial_data {
        InitialData::MollifiedPeakon => {}
        InitialData::Peakon | InitialData::PeriodicPeakon => {
            eprintln!(
                "warning: selector {} has a corner; pointwise errors will be dominated by it",
                p.cfg.initial_data.name()
            );
        }
        other => {
            return Err(CmdError::Config(format!(
                "peakon-validate needs a travelling-wave selector, got {}",
                other.name()
            )));
        }
    }

    let (traj, pending) = match run(&p) {
        Ok(traj) => (traj, None),
        Err((Some(partial), e)) => (*partial, Some(e)),
        Err((None, e)) => return Err(e),
    };
    write_diagnostics(&p.out, &traj)?;

    let grid = p.s0.grid();
    let c = p.cfg.c;
    let mut rows = String::from("time,sup_error\n");
    let mut last = f64::NAN;
    for (time, state) in traj.times.iter().zip(&traj.states) {
        let reference: Field = match p.cfg.initial_data {
            InitialData::Peakon => peakon(c, *time, grid).map_err(config_err)?.u,
            InitialData::PeriodicPeakon => periodic_peakon(c, *time, grid).map_err(config_err)?.u,
            _ => p.s0.u.translated(c * *time),
        };
        let err = (&state.u - &reference)
            .sup()
            .max((&state.v - &reference).sup());
        last = err;
        rows.push_str(&format!("{time:.16e},{err:.16e}\n"));
    }
    write_text(&p.out.join("errors.csv"), &rows)?;

    if let Some(e) = pending {
        return Err(e);
    }
    if last <= p.cfg.tolerance {
        Ok(())
    } else {
        Err(CmdError::Property(format!(
            "final sup error {last:.6e} exceeds tolerance {:.6e}",
            p.cfg.tolerance
        )))
    }
}

/// `weak-check`: run, then test the recorded trajectory against the
/// integral form of the equations over a sweep of localized test
/// functions.
pub fn weak_check(config: &Path, out: &Path, overrides: &[String]) -> Result<(), CmdError> {
    let p = prepare(config, out, overrides)?;
    let traj = match run(&p) {
        Ok(traj) => traj,
        Err((Some(partial), e)) => {
            write_diagnostics(&p.out, &partial)?;
            return Err(e);
        }
        Err((None, e)) => return Err(e),
    };
    write_diagnostics(&p.out, &traj)?;

    let st = p.cfg.sweep_st;
    let sx = p.cfg.sweep_sx;
    let t_end = traj.final_time();
    let length = p.s0.grid().length();
    let (t0s, x0s) = sweep_centers(&p.cfg, t_end, length)?;

    let mut rows = String::from("t0,x0,st,sx,r_u,r_v\n");
    let mut worst = 0.0_f64;
    for &t0 in &t0s {
        for &x0 in &x0s {
            let phi = make_phi(t0, x0, st, sx, &traj).map_err(config_err)?;
            let (r_u, r_v) = weak_residual(&traj, &phi);
            worst = worst.max(r_u.abs()).max(r_v.abs());
            rows.push_str(&format!(
                "{t0:.16e},{x0:.16e},{st:.16e},{sx:.16e},{r_u:.16e},{r_v:.16e}\n"
            ));
        }
    }
    write_text(&p.out.join("residuals.csv"), &rows)?;

    let scale = p.s0.u.sup().max(p.s0.v.sup());
    let bound = p.cfg.residual_bound * scale * st * sx;
    if worst <= bound {
        Ok(())
    } else {
        Err(CmdError::Property(format!(
            "max weak residual {worst:.6e} exceeds bound {bound:.6e}"
        )))
    }
}

/// Centers of the test-function sweep: a uniform interior lattice, or
/// seeded uniform draws when `sweep-random` is set.
fn sweep_centers(
    cfg: &RunConfig,
    t_end: f64,
    length: f64,
) -> Result<(Vec<f64>, Vec<f64>), CmdError> {
    let st = cfg.sweep_st;
    if t_end <= 2.0 * st {
        return Err(CmdError::Config(format!(
            "sweep-st {st} leaves no interior time window in a run of duration {t_end}"
        )));
    }
    if cfg.sweep_random {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let t0s = (0..cfg.sweep_t)
            .map(|_| rng.gen_range(st..t_end - st))
            .collect();
        let x0s = (0..cfg.sweep_x)
            .map(|_| rng.gen_range(0.0..length))
            .collect();
        Ok((t0s, x0s))
    } else {
        let nt = cfg.sweep_t as f64;
        let nx = cfg.sweep_x as f64;
        let t0s = (0..cfg.sweep_t)
            .map(|i| st + (t_end - 2.0 * st) * (i as f64 + 0.5) / nt)
            .collect();
        let x0s = (0..cfg.sweep_x)
            .map(|j| length * (j as f64 + 0.5) / nx)
            .collect();
        Ok((t0s, x0s))
    }
}

/// `mollify-study`: smooth the configured potentials at each width in
/// the ladder, rerun from each, and tabulate the gaps between
/// neighbouring rungs.
pub fn mollify_study(config: &Path, out: &Path, overrides: &[String]) -> Result<(), CmdError> {
    let p = prepare(config, out, overrides)?;
    let m0 = study_potential(&p.cfg, &p.s0.u).map_err(CmdError::Config)?;
    let n0 = study_potential(&p.cfg, &p.s0.v).map_err(CmdError::Config)?;
    let table = core_mollify_study(&m0, &n0, &p.cfg.ks, &p.solver).map_err(config_err)?;
    write_text(&p.out.join("convergence.csv"), &table.csv())?;

    if let Some(bad) = table.rows.iter().find(|r| r.status != "ok") {
        return Err(CmdError::Property(format!(
            "rung k={} did not finish: {}",
            bad.k, bad.status
        )));
    }
    let gaps: Vec<f64> = table.rows.iter().filter_map(|r| r.d_k).collect();
    if gaps.len() >= 2 {
        let (prev, lastg) = (gaps[gaps.len() - 2], gaps[gaps.len() - 1]);
        if lastg > prev {
            return Err(CmdError::Property(format!(
                "trajectory gap grew on the finest rungs: {prev:.6e} then {lastg:.6e}"
            )));
        }
    }
    Ok(())
}

/// `depend`: perturb the configured state at each amplitude in the
/// ladder and tabulate initial and final separations against the
/// growth envelope.
pub fn depend(config: &Path, out: &Path, overrides: &[String]) -> Result<(), CmdError> {
    let p = prepare(config, out, overrides)?;
    let perturbation = standard_perturbation(&p.s0.u).map_err(CmdError::Config)?;
    let table = match cont_dependence(&p.s0, &p.cfg.deltas, &perturbation, &p.solver) {
        Ok(table) => table,
        Err(CoreError::BlowUp { time, reason, .. }) => {
            return Err(CmdError::BlowUp(blow_up_message(time, &reason)));
        }
        Err(e) => return Err(config_err(e)),
    };
    let text = format!("# envelope {:.16e}\n{}", table.envelope, table.csv());
    write_text(&p.out.join("dependence.csv"), &text)?;

    if !table.within_envelope() {
        return Err(CmdError::Property(format!(
            "a final separation exceeds the growth envelope {:.6e}",
            table.envelope
        )));
    }
    let finals: Vec<f64> = table.rows.iter().map(|r| r.a_t).collect();
    if finals.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CmdError::Property(
            "final separations do not shrink with the amplitude ladder".into(),
        ));
    }
    Ok(())
}
