//! Numerical experiments built on top of the solver: Cauchy
//! convergence of mollified-data runs and continuous dependence on
//! initial data with a fitted exponential rate.
//!
//! Both studies return plain tables so callers can render CSV or apply
//! their own pass criteria; per-row solver blow-up is recorded rather
//! than propagated, because a scheme study wants to see where the
//! ladder breaks.

use crate::diagnostics::error_norms;
use crate::dynamics::{potentials, State};
use crate::error::{CoreError, Result};
use crate::grid::Field;
use crate::helmholtz::helm_inv;
use crate::mollify::mollify;
use crate::stepper::{integrate, SolverConfig, Trajectory};

/// Pointwise floor below which initial potentials count as signed.
const POTENTIAL_FLOOR: f64 = 1e-12;

/// One ladder rung of a mollified-data study.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    /// Mollifier width parameter for this rung.
    pub k: u32,
    /// Sup over shared record times of the h1 distance (u and v summed)
    /// to the next rung's run; `None` on the final rung.
    pub d_k: Option<f64>,
    /// L1 distance between this rung's mollified first potential and
    /// the raw data.
    pub dist_l1: f64,
    /// Same in L2.
    pub dist_l2: f64,
    /// "ok", or "blow-up t=..." when the run died early.
    pub status: String,
}

/// Cauchy table of a mollified-data ladder, one row per width.
#[derive(Clone, Debug)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub const CSV_HEADER: &'static str = "k,d_k,dist_l1,dist_l2,status";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let d = row.d_k.map(|d| format!("{d:.16e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{}\n",
                row.k, d, row.dist_l1, row.dist_l2, row.status
            ));
        }
        out
    }
}

/// Runs the solver from mollified versions of the potentials (m0, n0)
/// at each width in `ks` and measures how fast neighbouring rungs
/// approach each other.
///
/// Initial data per rung is the velocity pair recovered from the
/// mollified potentials, so each rung starts from smooth, sign-correct
/// data even when (m0, n0) is a bare spike.
pub fn mollify_study(
    m0: &Field,
    n0: &Field,
    ks: &[u32],
    cfg: &SolverConfig,
) -> Result<ConvergenceTable> {
    let grid = cfg.validate()?;
    if ks.is_empty() {
        return Err(CoreError::BadStudyParams(
            "need at least one mollifier width".into(),
        ));
    }
    if !ks.windows(2).all(|w| w[0] < w[1]) {
        return Err(CoreError::BadStudyParams(format!(
            "widths must be strictly increasing, got {ks:?}"
        )));
    }
    for (name, f) in [("m0", m0), ("n0", n0)] {
        if f.grid() != grid {
            return Err(CoreError::GridMismatch(
                f.grid().length(),
                f.grid().points(),
                grid.length(),
                grid.points(),
            ));
        }
        if !f.is_finite() {
            return Err(CoreError::NonFinite { what: "study data" });
        }
        let min = f.min_value();
        if min < -POTENTIAL_FLOOR {
            return Err(CoreError::SignCondition {
                which: if name == "m0" { "m0" } else { "n0" },
                min,
                tol: POTENTIAL_FLOOR,
            });
        }
    }

    struct Rung {
        k: u32,
        dist_l1: f64,
        dist_l2: f64,
        traj: Trajectory,
        status: String,
    }

    let mut rungs = Vec::with_capacity(ks.len());
    for &k in ks {
        let mk = mollify(m0, k)?;
        let nk = mollify(n0, k)?;
        let dist_l1 = (&mk - m0).l1() + (&nk - n0).l1();
        let dist_l2 = (&mk - m0).l2() + (&nk - n0).l2();
        let s0 = State::new(helm_inv(&mk), helm_inv(&nk))?;
        let (traj, status) = match integrate(&s0, cfg) {
            Ok(traj) => (traj, "ok".to_string()),
            Err(CoreError::BlowUp { time, partial, .. }) => {
                (*partial, format!("blow-up t={time:.6e}"))
            }
            Err(other) => return Err(other),
        };
        rungs.push(Rung {
            k,
            dist_l1,
            dist_l2,
            traj,
            status,
        });
    }

    let mut rows = Vec::with_capacity(rungs.len());
    for i in 0..rungs.len() {
        let d_k = if i + 1 < rungs.len() {
            Some(trajectory_distance(&rungs[i].traj, &rungs[i + 1].traj))
        } else {
            None
        };
        rows.push(ConvergenceRow {
            k: rungs[i].k,
            d_k,
            dist_l1: rungs[i].dist_l1,
            dist_l2: rungs[i].dist_l2,
            status: rungs[i].status.clone(),
        });
    }
    Ok(ConvergenceTable { rows })
}

/// Sup over shared record times of h1(u_a - u_b) + h1(v_a - v_b).
/// Truncated (blown-up) runs are compared over their common prefix.
fn trajectory_distance(a: &Trajectory, b: &Trajectory) -> f64 {
    let shared = a
        .times
        .iter()
        .zip(&b.times)
        .take_while(|(ta, tb)| (**ta - **tb).abs() <= 1e-12)
        .count();
    let mut sup = 0.0_f64;
    for i in 0..shared {
        let du = (&a.states[i].u - &b.states[i].u).h1_norm();
        let dv = (&a.states[i].v - &b.states[i].v).h1_norm();
        sup = sup.max(du + dv);
    }
    sup
}

/// One perturbation size of a continuous-dependence study.
#[derive(Clone, Debug)]
pub struct DependenceRow {
    /// Perturbation amplitude applied to u.
    pub delta: f64,
    /// Initial separation in the paired h1 norm.
    pub a0: f64,
    /// Final separation.
    pub a_t: f64,
    /// a_t / a0.
    pub ratio: f64,
    /// Fitted exponential rate ln(ratio) / T.
    pub c_hat: f64,
}

/// Dependence table plus the structural rate bound the runs imply.
#[derive(Clone, Debug)]
pub struct DependenceTable {
    pub rows: Vec<DependenceRow>,
    /// 20 times the largest potential norm any involved run visited;
    /// fitted rates should sit below this.
    pub envelope: f64,
}

impl DependenceTable {
    pub const CSV_HEADER: &'static str = "delta,a0,a_t,ratio,c_hat";

    pub fn csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                row.delta, row.a0, row.a_t, row.ratio, row.c_hat
            ));
        }
        out
    }

    pub fn within_envelope(&self) -> bool {
        self.rows.iter().all(|r| r.c_hat <= self.envelope)
    }
}

/// Structural factor multiplying the measured potential norms to form
/// the admissible exponential rate.
const ENVELOPE_FACTOR: f64 = 20.0;

/// Largest max(l1, l2) potential-norm sum any record of `traj` visited.
fn potential_bound(traj: &Trajectory) -> f64 {
    traj.diagnostics
        .iter()
        .map(|r| r.l1_m.max(r.l2_m) + r.l1_n.max(r.l2_n))
        .fold(0.0_f64, f64::max)
}

/// Integrates the base state and u-perturbed copies at each amplitude
/// in `deltas` and tabulates how the separation grew.
///
/// `perturbation` must be unit-sized in the separation functional
/// (L2 of the field plus L2 of its derivative, the same combination
/// [`error_norms`] uses), so a0 lands on delta exactly; amplitudes must
/// be positive and strictly decreasing. The perturbed potentials must
/// stay sign-admissible at the largest amplitude, which covers all
/// smaller ones.
pub fn cont_dependence(
    s0: &State,
    deltas: &[f64],
    perturbation: &Field,
    cfg: &SolverConfig,
) -> Result<DependenceTable> {
    let grid = cfg.validate()?;
    if deltas.is_empty() {
        return Err(CoreError::BadStudyParams(
            "need at least one perturbation amplitude".into(),
        ));
    }
    if deltas.iter().any(|d| !d.is_finite() || *d <= 0.0) {
        return Err(CoreError::BadStudyParams(format!(
            "amplitudes must be finite and positive, got {deltas:?}"
        )));
    }
    if !deltas.windows(2).all(|w| w[0] > w[1]) {
        return Err(CoreError::BadStudyParams(format!(
            "amplitudes must be strictly decreasing, got {deltas:?}"
        )));
    }
    if perturbation.grid() != grid || s0.grid() != grid {
        return Err(CoreError::GridMismatch(
            perturbation.grid().length(),
            perturbation.grid().points(),
            grid.length(),
            grid.points(),
        ));
    }
    let size = perturbation.l2() + perturbation.deriv().l2();
    if (size - 1.0).abs() > 1e-6 {
        return Err(CoreError::BadStudyParams(format!(
            "perturbation must be unit-sized in the separation norm, got {size}"
        )));
    }

    let perturbed = |delta: f64| -> Result<State> {
        let mut u = s0.u.clone();
        u.axpy(delta, perturbation);
        State::new(u, s0.v.clone())
    };

    let base_potentials = potentials(s0);
    for (which, f) in [("m", &base_potentials.m), ("n", &base_potentials.n)] {
        let min = f.min_value();
        if min < -1e-10 {
            return Err(CoreError::SignCondition {
                which: if which == "m" { "m" } else { "n" },
                min,
                tol: 1e-10,
            });
        }
    }
    let worst = potentials(&perturbed(deltas[0])?);
    let min = worst.m.min_value();
    if min < -1e-10 {
        return Err(CoreError::SignCondition {
            which: "perturbed m",
            min,
            tol: 1e-10,
        });
    }

    let base = integrate(s0, cfg)?;
    let final_time = base.final_time();
    let mut envelope = ENVELOPE_FACTOR * potential_bound(&base);
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let s_delta = perturbed(delta)?;
        let run = integrate(&s_delta, cfg)?;
        envelope = envelope.max(ENVELOPE_FACTOR * potential_bound(&run));
        let a0 = error_norms(&s_delta, s0);
        let a_t = error_norms(run.final_state(), base.final_state());
        let ratio = a_t / a0;
        let c_hat = ratio.ln() / final_time;
        rows.push(DependenceRow {
            delta,
            a0,
            a_t,
            ratio,
            c_hat,
        });
    }
    Ok(DependenceTable { rows, envelope })
}
