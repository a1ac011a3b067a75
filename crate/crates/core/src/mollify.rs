//! The standard compactly supported mollifier and grid mollification.
//!
//! The profile is rho(x) = exp(1/(x^2 - 1)) on |x| < 1 and zero outside;
//! rho_n squeezes it to support [-1/n, 1/n] and normalizes to unit mass.
//! On the grid the normalization is taken against the rectangle rule, so
//! mollification preserves constants exactly. Convolution runs through
//! the Fourier side.

use crate::error::{CoreError, Result};
use crate::grid::{Field, Grid};
use crate::spectral;

/// Unit bump profile exp(1/(x^2 - 1)) on |x| < 1, zero elsewhere.
pub fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (1.0 / (x * x - 1.0)).exp()
    } else {
        0.0
    }
}

/// Samples of rho_n centered at node zero, normalized so the grid
/// quadrature is exactly one.
///
/// The support [-1/n, 1/n] must fit the domain and span at least two
/// cells, otherwise the kernel collapses onto too few samples.
pub fn mollifier(grid: Grid, n: u32) -> Result<Field> {
    if n == 0 {
        return Err(CoreError::ZeroMollifier);
    }
    let support = 2.0 / n as f64;
    if support > grid.length() {
        return Err(CoreError::MollifierTooWide {
            n,
            support,
            length: grid.length(),
        });
    }
    let min = 2.0 * grid.dx();
    if support < min {
        return Err(CoreError::UnderResolvedMollifier { n, support, min });
    }
    let nf = n as f64;
    let raw = Field::from_fn(grid, |x| bump(nf * grid.circle_distance(x, 0.0)));
    let mass = raw.integrate_x();
    Ok(raw.scaled(1.0 / mass))
}

/// Periodic convolution rho_n * f through the Fourier side.
pub fn mollify(f: &Field, n: u32) -> Result<Field> {
    let rho = mollifier(f.grid(), n)?;
    let dx = f.grid().dx();
    let mut spec = spectral::forward(rho.samples());
    let spec_f = spectral::forward(f.samples());
    for (a, b) in spec.iter_mut().zip(&spec_f) {
        *a *= b * dx;
    }
    Field::from_samples(f.grid(), spectral::backward(spec))
}
