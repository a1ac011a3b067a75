//! Initial-data construction for every selector, snapshot file IO, and
//! the standard perturbation used by the dependence study.
//!
//! Snapshot format: `#`-prefixed header block carrying the time, the
//! domain length, the point count, and the node coordinates, followed
//! by one `u v` sample row per node with 17 significant digits. The
//! same format is read back by the from-file selector so runs chain.

use std::fs;
use std::io::Write;
use std::path::Path;

use twonov_core::exact::{mollified_peakon, peakon, periodic_peakon};
use twonov_core::helmholtz::{helm_apply, helm_inv};
use twonov_core::mollify::mollifier;
use twonov_core::{Field, Grid, State};

use crate::config::{InitialData, RunConfig};

/// Builds the configured initial state on the configured grid.
pub fn initial_state(cfg: &RunConfig, grid: Grid) -> Result<State, String> {
    match cfg.initial_data {
        InitialData::Peakon => peakon(cfg.c, 0.0, grid).map_err(|e| e.to_string()),
        InitialData::PeriodicPeakon => periodic_peakon(cfg.c, 0.0, grid).map_err(|e| e.to_string()),
        InitialData::MollifiedPeakon => {
            mollified_peakon(cfg.c, cfg.mollifier_n, grid).map_err(|e| e.to_string())
        }
        InitialData::GaussianPotentials => {
            let m0 = gaussian_potential(cfg, grid)?;
            let u = helm_inv(&m0);
            State::new(u.clone(), u).map_err(|e| e.to_string())
        }
        InitialData::FromFile => {
            let path = cfg
                .data_file
                .as_ref()
                .ok_or_else(|| "from-file selector needs data-file".to_string())?;
            read_snapshot_state(path, grid)
        }
    }
}

/// Gaussian first-potential bump centred mid-domain with peak height
/// `c` and width `gaussian-width`.
fn gaussian_potential(cfg: &RunConfig, grid: Grid) -> Result<Field, String> {
    if !(cfg.gaussian_width.is_finite() && cfg.gaussian_width > 0.0) {
        return Err(format!(
            "gaussian-width must be positive, got {}",
            cfg.gaussian_width
        ));
    }
    let center = grid.length() / 2.0;
    let w = cfg.gaussian_width;
    let amplitude = cfg.c;
    Ok(Field::from_fn(grid, |x| {
        let d = grid.circle_distance(x, center);
        amplitude * (-d * d / (2.0 * w * w)).exp()
    }))
}

/// Writes one record to `path` in the snapshot format.
pub fn write_snapshot(path: &Path, time: f64, s: &State) -> Result<(), String> {
    let grid = s.grid();
    let mut out = String::new();
    out.push_str(&format!("# t {time:.16e}\n"));
    out.push_str(&format!("# L {:.16e}\n", grid.length()));
    out.push_str(&format!("# N {}\n", grid.points()));
    out.push_str("# x\n");
    for j in 0..grid.points() {
        out.push_str(&format!("# {:.16e}\n", grid.x(j)));
    }
    for (u, v) in s.u.samples().iter().zip(s.v.samples()) {
        out.push_str(&format!("{u:.16e} {v:.16e}\n"));
    }
    fs::File::create(path)
        .and_then(|mut f| f.write_all(out.as_bytes()))
        .map_err(|e| format!("cannot write snapshot {}: {e}", path.display()))
}

/// Reads a snapshot back as a state on `grid`, rejecting lattice
/// mismatches.
pub fn read_snapshot_state(path: &Path, grid: Grid) -> Result<State, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read data file {}: {e}", path.display()))?;
    let mut length: Option<f64> = None;
    let mut points: Option<usize> = None;
    let mut us = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let mut words = rest.split_whitespace();
            match words.next() {
                Some("L") => {
                    length = words.next().and_then(|w| w.parse().ok());
                }
                Some("N") => {
                    points = words.next().and_then(|w| w.parse().ok());
                }
                _ => {}
            }
            continue;
        }
        let mut words = line.split_whitespace();
        let parse = |w: Option<&str>| -> Result<f64, String> {
            w.ok_or_else(|| format!("{}:{}: expected 'u v'", path.display(), lineno + 1))?
                .parse()
                .map_err(|e| format!("{}:{}: {e}", path.display(), lineno + 1))
        };
        us.push(parse(words.next())?);
        vs.push(parse(words.next())?);
    }
    if let Some(file_n) = points {
        if file_n != grid.points() {
            return Err(format!(
                "data file has {file_n} points, config asks for {}",
                grid.points()
            ));
        }
    }
    if let Some(file_l) = length {
        if (file_l - grid.length()).abs() > 1e-12 * grid.length() {
            return Err(format!(
                "data file domain length {file_l} differs from configured {}",
                grid.length()
            ));
        }
    }
    let u = Field::from_samples(grid, us).map_err(|e| e.to_string())?;
    let v = Field::from_samples(grid, vs).map_err(|e| e.to_string())?;
    State::new(u, v).map_err(|e| e.to_string())
}

/// Potential to feed the mollification study for one velocity
/// component. Selectors with a closed-form potential hand over that
/// exact (sign-clean) expression: peaked selectors use the measure
/// representation, a single grid spike carrying the component's full
/// mass, and the smooth analytic selectors rebuild their non-negative
/// bump directly, dodging the round-trip noise that the Helmholtz
/// operator amplifies by 1 + k^2. Only file-fed data falls back on
/// spectral recovery.
pub fn study_potential(cfg: &RunConfig, component: &Field) -> Result<Field, String> {
    let grid = component.grid();
    match cfg.initial_data {
        InitialData::Peakon | InitialData::PeriodicPeakon => {
            let mass = component.integrate_x();
            let crest = component
                .samples()
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(j, _)| j)
                .unwrap_or(0);
            let mut spike = Field::zeros(grid);
            spike.samples_mut()[crest] = mass / grid.dx();
            Ok(spike)
        }
        InitialData::MollifiedPeakon => Ok(mollifier(grid, cfg.mollifier_n)
            .map_err(|e| e.to_string())?
            .scaled(2.0 * cfg.c.sqrt())),
        InitialData::GaussianPotentials => gaussian_potential(cfg, grid),
        InitialData::FromFile => Ok(helm_apply(component)),
    }
}

/// Smooth positive-potential bump placed at the antipode of the
/// state's crest, unit-sized in the separation norm: the standard
/// perturbation for dependence runs.
pub fn standard_perturbation(u0: &Field) -> Result<Field, String> {
    let grid = u0.grid();
    let rho = mollifier(grid, 4).map_err(|e| e.to_string())?;
    let crest = u0
        .samples()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(j, _)| j)
        .unwrap_or(0);
    let shift = (crest + grid.points() / 2) % grid.points();
    let moved = Field::from_samples(
        grid,
        (0..grid.points())
            .map(|j| rho.samples()[(j + grid.points() - shift) % grid.points()])
            .collect(),
    )
    .map_err(|e| e.to_string())?;
    let p = helm_inv(&moved);
    let size = p.l2() + p.deriv().l2();
    Ok(p.scaled(1.0 / size))
}
