//! FFT plumbing shared by the spectral operators.
//!
//! Real fields are transformed through a complex FFT; operators act as
//! diagonal multipliers on the spectrum. Plans are cached per size and
//! shared across threads, every call carries its own buffers.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

#[derive(Clone)]
struct Plans {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Plans {
    static CACHE: OnceLock<Mutex<HashMap<usize, Plans>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("fft plan cache poisoned");
    map.entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Plans {
                fwd: planner.plan_fft_forward(n),
                inv: planner.plan_fft_inverse(n),
            }
        })
        .clone()
}

/// Signed mode index for bin `j` of an `n`-point transform.
///
/// Layout is [0, 1, ..., n/2, -(n/2-1), ..., -1]; the Nyquist bin n/2
/// is reported as +n/2 and callers decide how to treat it.
pub(crate) fn signed_mode(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

pub(crate) fn forward(samples: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    plans(samples.len()).fwd.process(&mut buf);
    buf
}

/// Unnormalized inverse transform; divides by n and keeps the real part.
pub(crate) fn backward(mut spectrum: Vec<Complex<f64>>) -> Vec<f64> {
    let n = spectrum.len();
    plans(n).inv.process(&mut spectrum);
    let scale = 1.0 / n as f64;
    spectrum.iter().map(|c| c.re * scale).collect()
}

/// Applies a diagonal Fourier multiplier to real samples.
///
/// The symbol receives the signed mode index and the wavenumber
/// k = 2*pi*j/length for each bin.
pub(crate) fn apply_multiplier(
    samples: &[f64],
    length: f64,
    mut symbol: impl FnMut(i64, f64) -> Complex<f64>,
) -> Vec<f64> {
    let n = samples.len();
    let mut spec = forward(samples);
    for (j, c) in spec.iter_mut().enumerate() {
        let m = signed_mode(j, n);
        let k = 2.0 * PI * m as f64 / length;
        *c *= symbol(m, k);
    }
    backward(spec)
}

/// Zeroes every mode with |j| > n/3: the 2/3-rule mask used to tame
/// aliasing in the cubic nonlinearity.
pub(crate) fn dealias_mask(samples: &[f64], length: f64) -> Vec<f64> {
    let cutoff = (samples.len() / 3) as i64;
    apply_multiplier(samples, length, |m, _| {
        if m.abs() <= cutoff {
            Complex::new(1.0, 0.0)
        } else {
            Complex::new(0.0, 0.0)
        }
    })
}
