//! Numerical laboratory for the two-component Novikov system
//!
//!   m_t + 3 u_x v m + u v m_x = 0,   m = u - u_xx,
//!   n_t + 3 v_x u n + u v n_x = 0,   n = v - v_xx,
//!
//! posed on a periodic interval and discretized pseudospectrally. The
//! evolution is integrated in the nonlocal form obtained by inverting
//! the Helmholtz operator 1 - dxx, which keeps every term of the right
//! hand side under a smoothing convolution and so tolerates peakon-like
//! data. Alongside the solver the crate carries the instruments used to
//! probe the analysis of the system: a conserved-functional monitor,
//! a priori estimate checks, a mollification scheme with a convergence
//! study, a weak-formulation residual, and a continuous-dependence
//! (Gronwall) experiment.
//!
//! All state lives on [`grid::Grid`] / [`grid::Field`]; everything is f64
//! and deterministic: a given input produces bit-identical output.

pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod exact;
pub mod grid;
pub mod helmholtz;
pub mod lab;
pub mod mollify;
mod spectral;
pub mod stepper;
pub mod weakform;

pub use diagnostics::{
    apriori_report, energy, error_norms, measure, negativity, AprioriReport, Report,
};
pub use dynamics::{potentials, rhs_m, rhs_uv, Potentials, State};
pub use error::CoreError;
pub use grid::{Field, Grid};
pub use lab::{cont_dependence, mollify_study, ConvergenceTable, DependenceTable};
pub use stepper::{integrate, step_rk4, SolverConfig, TimeStep, Trajectory};
pub use weakform::{make_phi, weak_residual, TestFunction};
