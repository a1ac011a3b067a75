//! Residuals of the space-time integral identity that defines weak
//! solutions.
//!
//! A candidate pair satisfies, for every smooth compactly supported
//! test function phi,
//!
//!   0 = int int (u phi_t - B_u phi) dx dt + int u(0, x) phi(0, x) dx,
//!
//! where B_u = -du/dt in the nonlocal form (and symmetrically for v).
//! This module samples separable bump test functions on a trajectory's
//! record lattice and evaluates both identities by trapezoid rule in
//! time and the periodic rectangle rule in space. For a trajectory the
//! integrator produced, the residual measures pure quadrature error;
//! for analytically sampled candidates it measures how close the
//! candidate is to solving the identity at the chosen resolution.
//!
//! By default the test function must sit strictly inside
//! (0, T) x domain, which kills the initial-data term; the term is
//! still always evaluated, so the free mode only relaxes the support
//! check.

use crate::dynamics::rhs_uv;
use crate::error::{CoreError, Result};
use crate::grid::Field;
use crate::mollify::bump;
use crate::stepper::Trajectory;

/// Support placement rule for [`make_phi_with_mode`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportMode {
    /// Support strictly inside (0, T); the initial term vanishes.
    Interior,
    /// Support may touch the time boundary.
    Free,
}

/// d/dy of the bump profile, analytic on the open support.
fn bump_deriv(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        return 0.0;
    }
    let w = y * y - 1.0;
    bump(y) * (-2.0 * y) / (w * w)
}

/// Separable test function phi(t, x) = psi((t - t0)/st) * chi(d(x, x0)/sx)
/// with both factors the standard bump, sampled on one trajectory's
/// record times and grid.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub t0: f64,
    pub x0: f64,
    pub st: f64,
    pub sx: f64,
    chi: Field,
    psi: Vec<f64>,
    dpsi: Vec<f64>,
}

impl TestFunction {
    /// phi at record index `rec`, node index `j`.
    pub fn value(&self, rec: usize, j: usize) -> f64 {
        self.psi[rec] * self.chi.samples()[j]
    }

    /// Exact time derivative of phi at record `rec`, node `j`.
    pub fn dt_value(&self, rec: usize, j: usize) -> f64 {
        self.dpsi[rec] * self.chi.samples()[j]
    }

    pub fn records(&self) -> usize {
        self.psi.len()
    }
}

/// Builds an interior-support test function on the trajectory's lattice.
///
/// Scale preconditions keep the quadrature meaningful: st at least four
/// record spacings, sx at least four grid cells and at most half the
/// circle (so the spatial bump does not wrap onto itself).
pub fn make_phi(t0: f64, x0: f64, st: f64, sx: f64, traj: &Trajectory) -> Result<TestFunction> {
    make_phi_with_mode(t0, x0, st, sx, traj, SupportMode::Interior)
}

/// As [`make_phi`] with an explicit support rule.
pub fn make_phi_with_mode(
    t0: f64,
    x0: f64,
    st: f64,
    sx: f64,
    traj: &Trajectory,
    mode: SupportMode,
) -> Result<TestFunction> {
    if !(st.is_finite()
        && st > 0.0
        && sx.is_finite()
        && sx > 0.0
        && t0.is_finite()
        && x0.is_finite())
    {
        return Err(CoreError::SupportViolation(format!(
            "test function scales must be finite and positive, got st={st}, sx={sx}"
        )));
    }
    let grid = traj.final_state().grid();
    let final_time = traj.final_time();
    let max_spacing = traj
        .times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0_f64, f64::max);
    if st < 4.0 * max_spacing {
        return Err(CoreError::SupportViolation(format!(
            "temporal scale {st} under-resolved: records are {max_spacing} apart"
        )));
    }
    if sx < 4.0 * grid.dx() {
        return Err(CoreError::SupportViolation(format!(
            "spatial scale {sx} under-resolved: grid cells are {} wide",
            grid.dx()
        )));
    }
    if 2.0 * sx > grid.length() {
        return Err(CoreError::SupportViolation(format!(
            "spatial scale {sx} wraps around the length-{} circle",
            grid.length()
        )));
    }
    if mode == SupportMode::Interior && !(t0 - st > 0.0 && t0 + st < final_time) {
        return Err(CoreError::SupportViolation(format!(
            "support [{}, {}] leaves the open interval (0, {final_time})",
            t0 - st,
            t0 + st
        )));
    }

    let chi = Field::from_fn(grid, |x| bump(grid.circle_distance(x, x0) / sx));
    let psi = traj.times.iter().map(|&t| bump((t - t0) / st)).collect();
    let dpsi = traj
        .times
        .iter()
        .map(|&t| bump_deriv((t - t0) / st) / st)
        .collect();
    Ok(TestFunction {
        t0,
        x0,
        st,
        sx,
        chi,
        psi,
        dpsi,
    })
}

/// Evaluates both residuals (r_u, r_v) of the weak identity, with the
/// bracket evaluated like a default (non-dealiased) solver run.
pub fn weak_residual(traj: &Trajectory, phi: &TestFunction) -> (f64, f64) {
    weak_residual_with(traj, phi, false)
}

/// As [`weak_residual`] with the bracket's dealiasing made explicit, for
/// trajectories that were integrated with the mask on.
pub fn weak_residual_with(traj: &Trajectory, phi: &TestFunction, dealias: bool) -> (f64, f64) {
    assert_eq!(
        phi.records(),
        traj.times.len(),
        "test function sampled on a different record lattice"
    );
    let grid = traj.final_state().grid();
    assert_eq!(phi.chi.grid(), grid, "test function lives on another grid");
    let dx = grid.dx();
    let records = traj.times.len();

    // per-record space integrals of (u phi_t - B_u phi), B_u = -du/dt
    let mut space_u = Vec::with_capacity(records);
    let mut space_v = Vec::with_capacity(records);
    for (rec, s) in traj.states.iter().enumerate() {
        let (du, dv) = rhs_uv(s, dealias);
        let mut acc_u = 0.0;
        let mut acc_v = 0.0;
        for j in 0..grid.points() {
            let phi_v = phi.value(rec, j);
            let dphi = phi.dt_value(rec, j);
            acc_u += s.u.samples()[j] * dphi + du.samples()[j] * phi_v;
            acc_v += s.v.samples()[j] * dphi + dv.samples()[j] * phi_v;
        }
        space_u.push(dx * acc_u);
        space_v.push(dx * acc_v);
    }

    let trapezoid = |vals: &[f64]| -> f64 {
        let mut acc = 0.0;
        for (w, pair) in traj.times.windows(2).zip(vals.windows(2)) {
            acc += 0.5 * (w[1] - w[0]) * (pair[0] + pair[1]);
        }
        acc
    };

    // initial-data term; identically zero for interior supports
    let s0 = &traj.states[0];
    let mut init_u = 0.0;
    let mut init_v = 0.0;
    for j in 0..grid.points() {
        let phi0 = phi.value(0, j);
        init_u += s0.u.samples()[j] * phi0;
        init_v += s0.v.samples()[j] * phi0;
    }

    (
        trapezoid(&space_u) + dx * init_u,
        trapezoid(&space_v) + dx * init_v,
    )
}
