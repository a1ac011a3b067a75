//! Inverse Helmholtz operator (1 - dxx)^-1 and friends.
//!
//! On the circle of circumference L the operator inverts to convolution
//! with the periodic kernel
//!
//!   g_L(x) = cosh(d_L(x, 0) - L/2) / (2 sinh(L/2)),
//!
//! the wrap-around of the line kernel e^{-|x|}/2. Spectrally this is the
//! multiplier 1/(1 + k^2), which is how [`helm_inv`] is applied; the
//! sampled kernel exists for inspection and as the reference for the
//! dense-convolution checks. The derivative convolution [`conv_gx`] is
//! the fused multiplier i k/(1 + k^2), so the identity
//! conv_gx = deriv . helm_inv holds to rounding.

use rustfft::num_complex::Complex;

use crate::grid::{Field, Grid};
use crate::spectral;

/// Samples of the periodic kernel, rescaled so the grid quadrature is
/// exactly one (the sampled cosh profile alone integrates to
/// 1 + O((L/N)^2) by aliasing).
pub fn green_kernel(grid: Grid) -> Field {
    // cosh(d - L/2)/(2 sinh(L/2)) written overflow-free for large L.
    let denom = 2.0 * (1.0 - (-grid.length()).exp());
    let raw = Field::from_fn(grid, |x| {
        let d = grid.circle_distance(x, 0.0);
        ((-d).exp() + (d - grid.length()).exp()) / denom
    });
    raw.scaled(1.0 / raw.integrate_x())
}

/// (1 - dxx)^-1 f via the multiplier 1/(1 + k^2).
pub fn helm_inv(f: &Field) -> Field {
    let samples = spectral::apply_multiplier(f.samples(), f.grid().length(), |_, k| {
        Complex::new(1.0 / (1.0 + k * k), 0.0)
    });
    Field::from_samples(f.grid(), samples).expect("length preserved")
}

/// (1 - dxx) f via the multiplier 1 + k^2; exact inverse of [`helm_inv`].
pub fn helm_apply(f: &Field) -> Field {
    let samples = spectral::apply_multiplier(f.samples(), f.grid().length(), |_, k| {
        Complex::new(1.0 + k * k, 0.0)
    });
    Field::from_samples(f.grid(), samples).expect("length preserved")
}

/// Convolution with the kernel derivative, i.e. d/dx (1 - dxx)^-1 f,
/// as the single multiplier i k/(1 + k^2) with the Nyquist mode zeroed.
pub fn conv_gx(f: &Field) -> Field {
    let n = f.grid().points();
    let samples = spectral::apply_multiplier(f.samples(), f.grid().length(), |m, k| {
        if m.unsigned_abs() as usize == n / 2 {
            Complex::new(0.0, 0.0)
        } else {
            Complex::new(0.0, k / (1.0 + k * k))
        }
    });
    Field::from_samples(f.grid(), samples).expect("length preserved")
}
