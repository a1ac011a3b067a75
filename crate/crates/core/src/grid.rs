//! Periodic grid, sampled fields, and the basic spectral calculus.
//!
//! The domain is [0, L) sampled at N equispaced nodes x_j = j*dx with
//! dx = L/N. N is a power of two, so dx*N reproduces L exactly and the
//! FFT sizes stay friendly. Differentiation is spectral (the Nyquist
//! mode of odd derivatives is set to zero), integration is the
//! rectangle rule, which is spectrally accurate on periodic data.

use rustfft::num_complex::Complex;

use crate::error::{CoreError, Result};
use crate::spectral;

/// Uniform periodic lattice on [0, L).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    length: f64,
    points: usize,
}

impl Grid {
    /// Builds a lattice with `points` a power of two >= 16 and positive
    /// finite `length`.
    pub fn new(length: f64, points: usize) -> Result<Grid> {
        if !(length.is_finite() && length > 0.0) {
            return Err(CoreError::BadDomainLength(length));
        }
        if !points.is_power_of_two() || points < 16 {
            return Err(CoreError::BadGridSize(points));
        }
        Ok(Grid { length, points })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Node spacing L/N; exact because N is a power of two.
    pub fn dx(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Coordinate of node `j`.
    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Distance between two coordinates measured around the circle.
    pub fn circle_distance(&self, a: f64, b: f64) -> f64 {
        let r = (a - b).rem_euclid(self.length);
        r.min(self.length - r)
    }
}

/// Real field sampled on a [`Grid`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid,
    samples: Vec<f64>,
}

pub(crate) fn ensure_same_grid(a: &Field, b: &Field) -> Result<()> {
    if a.grid != b.grid {
        return Err(CoreError::GridMismatch(
            a.grid.length,
            a.grid.points,
            b.grid.length,
            b.grid.points,
        ));
    }
    Ok(())
}

impl Field {
    pub fn zeros(grid: Grid) -> Field {
        Field {
            grid,
            samples: vec![0.0; grid.points],
        }
    }

    /// Samples `f` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Field {
        let samples = (0..grid.points).map(|j| f(grid.x(j))).collect();
        Field { grid, samples }
    }

    pub fn from_samples(grid: Grid, samples: Vec<f64>) -> Result<Field> {
        if samples.len() != grid.points {
            return Err(CoreError::SampleCount {
                got: samples.len(),
                want: grid.points,
            });
        }
        Ok(Field { grid, samples })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|x| x.is_finite())
    }

    pub fn min_value(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.samples
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sup norm max_j |f_j|.
    pub fn sup(&self) -> f64 {
        self.samples.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn scaled(&self, a: f64) -> Field {
        Field {
            grid: self.grid,
            samples: self.samples.iter().map(|x| a * x).collect(),
        }
    }

    /// self += a * other, the only in-place update the integrator needs.
    pub fn axpy(&mut self, a: f64, other: &Field) {
        debug_assert_eq!(self.grid, other.grid);
        for (x, y) in self.samples.iter_mut().zip(&other.samples) {
            *x += a * y;
        }
    }

    /// Spectral derivative; the Nyquist mode is zeroed to keep the
    /// result real-symmetric.
    pub fn deriv(&self) -> Field {
        let n = self.grid.points;
        let samples = spectral::apply_multiplier(&self.samples, self.grid.length, |m, k| {
            if m.unsigned_abs() as usize == n / 2 {
                Complex::new(0.0, 0.0)
            } else {
                Complex::new(0.0, k)
            }
        });
        Field {
            grid: self.grid,
            samples,
        }
    }

    /// Samples of f(x - shift) for an arbitrary real shift, via the
    /// spectral phase e^{-ik*shift}; the unpaired Nyquist bin keeps the
    /// real part so the result stays real. Exact to rounding on
    /// band-limited data.
    pub fn translated(&self, shift: f64) -> Field {
        let n = self.grid.points;
        let samples = spectral::apply_multiplier(&self.samples, self.grid.length, |m, k| {
            let phase = -k * shift;
            if m.unsigned_abs() as usize == n / 2 {
                Complex::new(phase.cos(), 0.0)
            } else {
                Complex::new(phase.cos(), phase.sin())
            }
        });
        Field {
            grid: self.grid,
            samples,
        }
    }

    /// Rectangle-rule integral dx * sum f_j over one period.
    pub fn integrate_x(&self) -> f64 {
        self.grid.dx() * self.samples.iter().sum::<f64>()
    }

    /// Grid Lp norm (dx * sum |f|^p)^(1/p); `p = f64::INFINITY` gives the
    /// sup norm. Exponents below one are rejected.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(CoreError::BadLpExponent(p));
        }
        if p == f64::INFINITY {
            return Ok(self.sup());
        }
        let dx = self.grid.dx();
        let sum: f64 = self.samples.iter().map(|x| x.abs().powf(p)).sum();
        Ok((dx * sum).powf(1.0 / p))
    }

    /// L1 norm, infallible shorthand.
    pub fn l1(&self) -> f64 {
        self.grid.dx() * self.samples.iter().map(|x| x.abs()).sum::<f64>()
    }

    /// L2 norm, infallible shorthand.
    pub fn l2(&self) -> f64 {
        (self.grid.dx() * self.samples.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }

    /// H1 norm sqrt(||f||_2^2 + ||f'||_2^2) with the spectral derivative.
    pub fn h1_norm(&self) -> f64 {
        let d = self.deriv();
        (self.l2().powi(2) + d.l2().powi(2)).sqrt()
    }
}

impl std::ops::Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        debug_assert_eq!(self.grid, rhs.grid);
        Field {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&rhs.samples)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl std::ops::Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        debug_assert_eq!(self.grid, rhs.grid);
        Field {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&rhs.samples)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Pointwise product on the shared grid.
impl std::ops::Mul for &Field {
    type Output = Field;
    fn mul(self, rhs: &Field) -> Field {
        debug_assert_eq!(self.grid, rhs.grid);
        Field {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&rhs.samples)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}
