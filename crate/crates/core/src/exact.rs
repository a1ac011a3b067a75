//! Closed-form reference solutions: line peakon, periodic peakon, and
//! the mollified peakon used as admissible solver data.
//!
//! Both peakon families have u = v. The line peakon sqrt(c) e^{-|x-ct|}
//! is wrapped onto the circle by distance, which keeps its single corner
//! and is exact up to O(e^{-L/2}); its potential is a point measure, so
//! the raw wave is reference data, not solver data. The mollified
//! variant smooths both components and lands inside the sign-definite
//! class the solver's monitors assume.

use std::f64::consts::{PI, TAU};

use crate::dynamics::State;
use crate::error::{CoreError, Result};
use crate::grid::{Field, Grid};
use crate::helmholtz::helm_inv;
use crate::mollify::mollifier;

fn check_speed(c: f64) -> Result<()> {
    if !(c.is_finite() && c > 0.0) {
        return Err(CoreError::BadPeakonSpeed(c));
    }
    Ok(())
}

/// Line peakon u = v = sqrt(c) e^{-|x - ct|} wrapped by circle distance;
/// the crest sits at ct mod L. Domains L >= 20 keep the wrap-around tail
/// below e^{-10}.
pub fn peakon(c: f64, t: f64, grid: Grid) -> Result<State> {
    check_speed(c)?;
    let amp = c.sqrt();
    let center = (c * t).rem_euclid(grid.length());
    let u = Field::from_fn(grid, |x| amp * (-grid.circle_distance(x, center)).exp());
    State::new(u.clone(), u)
}

/// Periodic peakon (sqrt(c)/cosh(pi)) cosh((x - ct) wrapped to [-pi, pi)),
/// tied to the period 2*pi; other domain lengths are rejected.
pub fn periodic_peakon(c: f64, t: f64, grid: Grid) -> Result<State> {
    check_speed(c)?;
    if grid.length() != TAU {
        return Err(CoreError::PeriodicPeakonLength(grid.length()));
    }
    let amp = c.sqrt() / PI.cosh();
    let u = Field::from_fn(grid, |x| {
        let theta = x - c * t;
        let w = theta - TAU * (theta / TAU).floor() - PI;
        amp * w.cosh()
    });
    State::new(u.clone(), u)
}

/// Peakon with its point-measure potential smeared into the bump
/// 2 sqrt(c) rho_n, then inverted back to a velocity: in the continuum
/// this equals mollifying the velocity itself, but built this way the
/// discrete potential is a sampled non-negative bump exactly, instead
/// of picking up sign-violating ringing from the corner's spectral
/// tail amplified by 1 + k^2.
pub fn mollified_peakon(c: f64, n: u32, grid: Grid) -> Result<State> {
    check_speed(c)?;
    let m0 = mollifier(grid, n)?.scaled(2.0 * c.sqrt());
    let u = helm_inv(&m0);
    State::new(u.clone(), u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::potentials;

    #[test]
    fn rejects_degenerate_speeds() {
        let g = Grid::new(40.0, 1024).unwrap();
        assert!(matches!(
            peakon(0.0, 0.0, g),
            Err(CoreError::BadPeakonSpeed(_))
        ));
        assert!(matches!(
            peakon(-1.0, 0.0, g),
            Err(CoreError::BadPeakonSpeed(_))
        ));
        assert!(matches!(
            periodic_peakon(f64::NAN, 0.0, Grid::new(TAU, 256).unwrap()),
            Err(CoreError::BadPeakonSpeed(_))
        ));
    }

    #[test]
    fn peakon_peak_value_and_decay() {
        // L = 16, N = 1024 puts x = 1 on the lattice (dx = 1/64).
        let g = Grid::new(16.0, 1024).unwrap();
        let s = peakon(1.0, 0.0, g).unwrap();
        assert!((s.u.samples()[0] - 1.0).abs() < 1e-15);
        let at_one = s.u.samples()[64];
        assert!(
            (at_one - 0.3678794411714423).abs() < 1e-14,
            "u(1) = {at_one}"
        );
        // c scales the peak as sqrt(c)
        let s4 = peakon(4.0, 0.0, g).unwrap();
        assert!((s4.u.samples()[0] - 2.0).abs() < 1e-15);
        // even around the crest
        for k in 1..10 {
            let lhs = s.u.samples()[k];
            let rhs = s.u.samples()[1024 - k];
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn peakon_crest_travels_at_speed_c() {
        let g = Grid::new(40.0, 2048).unwrap();
        let argmax = |f: &Field| {
            let mut best = 0;
            for (j, x) in f.samples().iter().enumerate() {
                if *x > f.samples()[best] {
                    best = j;
                }
            }
            best
        };
        let t1 = 0.0;
        let t2 = 0.25;
        let c = 2.0;
        let a = argmax(&peakon(c, t1, g).unwrap().u);
        let b = argmax(&peakon(c, t2, g).unwrap().u);
        let shift = (b as f64 - a as f64).rem_euclid(g.points() as f64) * g.dx();
        let speed = shift / (t2 - t1);
        assert!(
            (speed - c).abs() <= g.dx() / (t2 - t1) + 1e-12,
            "measured speed {speed}"
        );
    }

    #[test]
    fn periodic_peakon_formula_values() {
        let g = Grid::new(TAU, 256).unwrap();
        let s = periodic_peakon(4.0, 0.0, g).unwrap();
        // crest at x = 0: sqrt(c); trough at x = pi: sqrt(c)/cosh(pi)
        assert!((s.u.samples()[0] - 2.0).abs() < 1e-13);
        let trough = s.u.samples()[128];
        assert!(
            (trough - 2.0 / PI.cosh()).abs() < 1e-13,
            "trough {trough} vs {}",
            2.0 / PI.cosh()
        );
        assert!((trough / 2.0 - 0.0863).abs() < 1e-4);
        assert!(matches!(
            periodic_peakon(1.0, 0.0, Grid::new(6.0, 256).unwrap()),
            Err(CoreError::PeriodicPeakonLength(_))
        ));
    }

    #[test]
    fn periodic_peakon_translates_by_whole_cells() {
        let g = Grid::new(TAU, 256).unwrap();
        let c = 2.0;
        // ct = 8 dx exactly: t = 4 dx with c = 2
        let t = 4.0 * g.dx();
        let before = periodic_peakon(c, 0.0, g).unwrap();
        let after = periodic_peakon(c, t, g).unwrap();
        let n = g.points();
        for j in 0..n {
            let rotated = before.u.samples()[j];
            let moved = after.u.samples()[(j + 8) % n];
            assert!(
                (rotated - moved).abs() < 1e-13,
                "node {j}: {rotated} vs {moved}"
            );
        }
    }

    #[test]
    fn mollified_peakon_mass_peak_and_sign() {
        let g = Grid::new(40.0, 2048).unwrap();
        let s = mollified_peakon(1.0, 32, g).unwrap();
        // smoothing strictly lowers the crest, but only slightly at n = 32
        assert!(s.u.sup() < 1.0);
        assert!(s.u.sup() > 0.98);
        // crest sits where the raw peakon's corner was
        let argmax = (0..g.points())
            .max_by(|&a, &b| s.u.samples()[a].total_cmp(&s.u.samples()[b]))
            .unwrap();
        assert_eq!(argmax, 0);
        // the potential is the unit-mass bump scaled by 2 sqrt(c), so its
        // mass is exact and matches the mass of u (the dxx part of the
        // potential integrates to zero)
        let p = potentials(&s);
        let mass = p.m.integrate_x();
        assert!((mass - 2.0).abs() < 1e-4, "potential mass {mass}");
        assert!(
            (p.m.integrate_x() - s.u.integrate_x()).abs() < 1e-10,
            "dxx part leaked mass"
        );
        // the regularized point measure stays non-negative
        assert!(
            p.m.min_value() >= -1e-10,
            "potential dips to {:.3e}",
            p.m.min_value()
        );
        assert!(
            s.u.min_value() >= -1e-9,
            "velocity dips to {:.3e}",
            s.u.min_value()
        );
        assert_eq!(s.u.samples(), s.v.samples());
    }
}
