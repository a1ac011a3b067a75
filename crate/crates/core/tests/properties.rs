//! Property tests for the algebraic identities the operators promise,
//! driven by randomized band-limited fields.

use proptest::prelude::*;
use std::f64::consts::PI;

use twonov_core::helmholtz::{helm_apply, helm_inv};
use twonov_core::mollify::mollify;
use twonov_core::{error_norms, potentials, rhs_uv, Field, Grid, State};

/// Band-limited field from bounded Fourier coefficients; smooth by
/// construction so spectral identities hold to rounding.
fn field_from_coeffs(grid: Grid, coeffs: &[(f64, f64)]) -> Field {
    let length = grid.length();
    Field::from_fn(grid, |x| {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| {
                let phase = 2.0 * PI * (k + 1) as f64 * x / length;
                a * phase.cos() + b * phase.sin()
            })
            .sum::<f64>()
    })
}

fn coeff_strategy(modes: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), modes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn helmholtz_inverse_is_linear(
        ca in coeff_strategy(6),
        cb in coeff_strategy(6),
        a in -4.0..4.0f64,
        b in -4.0..4.0f64,
    ) {
        let grid = Grid::new(2.0 * PI, 128).unwrap();
        let f = field_from_coeffs(grid, &ca);
        let g = field_from_coeffs(grid, &cb);
        let mut combo = f.scaled(a);
        combo.axpy(b, &g);
        let lhs = helm_inv(&combo);
        let mut rhs = helm_inv(&f).scaled(a);
        rhs.axpy(b, &helm_inv(&g));
        let gap = (&lhs - &rhs).sup();
        let scale = lhs.sup().max(1e-12);
        prop_assert!(gap <= 1e-12 * scale.max(1.0), "linearity gap {gap:.3e}");
    }

    #[test]
    fn helmholtz_round_trip_restores_the_field(c in coeff_strategy(8)) {
        let grid = Grid::new(5.0, 128).unwrap();
        let f = field_from_coeffs(grid, &c);
        let back = helm_apply(&helm_inv(&f));
        let gap = (&back - &f).sup();
        prop_assert!(gap <= 1e-9 * f.sup().max(1.0), "round trip gap {gap:.3e}");
    }

    #[test]
    fn norms_scale_homogeneously(c in coeff_strategy(5), lambda in -8.0..8.0f64) {
        let grid = Grid::new(2.0 * PI, 64).unwrap();
        let f = field_from_coeffs(grid, &c);
        for p in [1.0, 2.0, f64::INFINITY] {
            let base = f.lp_norm(p).unwrap();
            let scaled = f.scaled(lambda).lp_norm(p).unwrap();
            let want = lambda.abs() * base;
            prop_assert!(
                (scaled - want).abs() <= 1e-12 * want.max(1e-12),
                "p = {p}: {scaled} vs {want}"
            );
        }
    }

    #[test]
    fn tendency_is_cubically_homogeneous(
        cu in coeff_strategy(4),
        cv in coeff_strategy(4),
        lambda in 0.25..4.0f64,
    ) {
        let grid = Grid::new(2.0 * PI, 128).unwrap();
        let u = field_from_coeffs(grid, &cu);
        let v = field_from_coeffs(grid, &cv);
        let s = State::new(u.clone(), v.clone()).unwrap();
        let scaled = State::new(u.scaled(lambda), v.scaled(lambda)).unwrap();
        let (du, dv) = rhs_uv(&s, false);
        let (du_l, dv_l) = rhs_uv(&scaled, false);
        let cube = lambda.powi(3);
        for (big, small) in [(&du_l, &du), (&dv_l, &dv)] {
            let gap = (big - &small.scaled(cube)).sup();
            let scale = big.sup().max(1e-12);
            prop_assert!(gap <= 1e-10 * scale, "homogeneity gap {gap:.3e}");
        }
    }

    #[test]
    fn separation_norm_satisfies_the_triangle_inequality(
        ca in coeff_strategy(4),
        cb in coeff_strategy(4),
        cc in coeff_strategy(4),
    ) {
        let grid = Grid::new(2.0 * PI, 64).unwrap();
        let mk = |c: &[(f64, f64)], shift: f64| {
            let f = field_from_coeffs(grid, c);
            let g = Field::from_fn(grid, |x| (x + shift).sin());
            State::new(f, g).unwrap()
        };
        let a = mk(&ca, 0.0);
        let b = mk(&cb, 1.0);
        let c = mk(&cc, 2.0);
        let direct = error_norms(&a, &c);
        let detour = error_norms(&a, &b) + error_norms(&b, &c);
        prop_assert!(direct <= detour + 1e-12, "triangle gap: {direct} > {detour}");
    }

    #[test]
    fn mollification_preserves_mass_and_sign(
        c in coeff_strategy(5),
        n in 2u32..40,
    ) {
        let grid = Grid::new(2.0 * PI, 256).unwrap();
        let raw = field_from_coeffs(grid, &c);
        // lift above zero so the data is admissible
        let lift = -raw.min_value() + 0.1;
        let f = Field::from_fn(grid, |_| lift);
        let mut data = raw.clone();
        data.axpy(1.0, &f);
        let smoothed = mollify(&data, n).unwrap();
        let mass_gap = (smoothed.integrate_x() - data.integrate_x()).abs();
        prop_assert!(
            mass_gap <= 1e-10 * data.integrate_x().abs().max(1.0),
            "mass gap {mass_gap:.3e}"
        );
        prop_assert!(
            smoothed.min_value() >= -1e-12 * data.sup(),
            "sign violated: {:.3e}",
            smoothed.min_value()
        );
    }

    #[test]
    fn potentials_round_trip_through_helmholtz(c in coeff_strategy(6)) {
        let grid = Grid::new(2.0 * PI, 128).unwrap();
        let u = field_from_coeffs(grid, &c);
        let s = State::new(u.clone(), u.clone()).unwrap();
        let p = potentials(&s);
        let back = helm_inv(&p.m);
        let gap = (&back - &u).sup();
        prop_assert!(gap <= 1e-9 * u.sup().max(1.0), "round trip gap {gap:.3e}");
    }
}
