//! Right-hand sides of the two-component Novikov system.
//!
//! The system transports the potentials m = u - u_xx, n = v - v_xx:
//!
//!   m_t + 3 u_x v m + u v m_x = 0,
//!   n_t + 3 v_x u n + u v n_x = 0.
//!
//! [`rhs_m`] evaluates exactly that. The integrator instead uses
//! [`rhs_uv`], the equivalent nonlocal form obtained by applying
//! (1 - dxx)^-1 = g* to the m equation and moving the derivative of the
//! flux onto the kernel:
//!
//!   u_t = -( g_x*(u v m) + 2 g*(u_x v m) - g*(u v_x m) ),
//!
//! and symmetrically in u <-> v, m <-> n. Every term sits under a
//! smoothing convolution, which is what lets peakon-like potentials be
//! evolved at all; the two forms agree to rounding on resolved fields
//! and that agreement is one of the standing checks.
//!
//! Products are pointwise; with dealiasing on, every factor is passed
//! through the 2/3-rule mask first, which keeps the cubic aliasing of
//! the two formulations in lockstep. Masking surrenders the top third
//! of the resolved band, which is exactly where narrow potentials live,
//! so it is opt-in rather than the default.

use crate::error::{CoreError, Result};
use crate::grid::{ensure_same_grid, Field, Grid};
use crate::helmholtz::{conv_gx, helm_apply, helm_inv};
use crate::spectral;

/// Velocity pair (u, v) on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub u: Field,
    pub v: Field,
}

impl State {
    pub fn new(u: Field, v: Field) -> Result<State> {
        ensure_same_grid(&u, &v)?;
        if !u.is_finite() {
            return Err(CoreError::NonFinite { what: "u" });
        }
        if !v.is_finite() {
            return Err(CoreError::NonFinite { what: "v" });
        }
        Ok(State { u, v })
    }

    pub fn grid(&self) -> Grid {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }
}

/// Potential pair (m, n) = ((1 - dxx) u, (1 - dxx) v).
#[derive(Clone, Debug, PartialEq)]
pub struct Potentials {
    pub m: Field,
    pub n: Field,
}

/// Computes the potentials of a state spectrally.
pub fn potentials(s: &State) -> Potentials {
    Potentials {
        m: helm_apply(&s.u),
        n: helm_apply(&s.v),
    }
}

fn masked(f: &Field, on: bool) -> Field {
    if on {
        let samples = spectral::dealias_mask(f.samples(), f.grid().length());
        Field::from_samples(f.grid(), samples).expect("length preserved")
    } else {
        f.clone()
    }
}

/// -(a + 2 b - c) sample by sample.
fn combine(a: &Field, b: &Field, c: &Field) -> Field {
    let samples = a
        .samples()
        .iter()
        .zip(b.samples())
        .zip(c.samples())
        .map(|((a, b), c)| -(a + 2.0 * b - c))
        .collect();
    Field::from_samples(a.grid(), samples).expect("length preserved")
}

/// Nonlocal-form tendency (du/dt, dv/dt).
///
/// The v component is the exact u <-> v, m <-> n mirror of the u
/// component, so equal components stay bit-identical.
pub fn rhs_uv(s: &State, dealias: bool) -> (Field, Field) {
    let p = potentials(s);
    let u = masked(&s.u, dealias);
    let v = masked(&s.v, dealias);
    let ux = masked(&s.u.deriv(), dealias);
    let vx = masked(&s.v.deriv(), dealias);
    let m = masked(&p.m, dealias);
    let n = masked(&p.n, dealias);

    let uv = &u * &v;
    let du = combine(
        &conv_gx(&(&uv * &m)),
        &helm_inv(&(&(&ux * &v) * &m)),
        &helm_inv(&(&(&u * &vx) * &m)),
    );
    let dv = combine(
        &conv_gx(&(&uv * &n)),
        &helm_inv(&(&(&vx * &u) * &n)),
        &helm_inv(&(&(&v * &ux) * &n)),
    );
    (du, dv)
}

/// Transport-form tendency (dm/dt, dn/dt) for cross-checks against
/// [`rhs_uv`]; the integrator does not step this form.
pub fn rhs_m(s: &State, p: &Potentials, dealias: bool) -> (Field, Field) {
    let u = masked(&s.u, dealias);
    let v = masked(&s.v, dealias);
    let ux = masked(&s.u.deriv(), dealias);
    let vx = masked(&s.v.deriv(), dealias);
    let m = masked(&p.m, dealias);
    let n = masked(&p.n, dealias);
    let mx = m.deriv();
    let nx = n.deriv();

    let uv = &u * &v;
    let dm = {
        let transport = &uv * &mx;
        let stretch = &(&ux * &v) * &m;
        let samples = transport
            .samples()
            .iter()
            .zip(stretch.samples())
            .map(|(t, s)| -(3.0 * s + t))
            .collect();
        Field::from_samples(s.grid(), samples).expect("length preserved")
    };
    let dn = {
        let transport = &uv * &nx;
        let stretch = &(&vx * &u) * &n;
        let samples = transport
            .samples()
            .iter()
            .zip(stretch.samples())
            .map(|(t, s)| -(3.0 * s + t))
            .collect();
        Field::from_samples(s.grid(), samples).expect("length preserved")
    };
    (dm, dn)
}
