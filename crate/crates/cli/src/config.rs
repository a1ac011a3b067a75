//! Run configuration: one TOML document with kebab-case keys.
//!
//! Unknown keys are hard errors so a typo in a tolerance key cannot
//! silently weaken a check. `--override KEY=VALUE` fragments are merged
//! into the document before deserialization, and the fully resolved
//! configuration (defaults included) is echoed into every output
//! directory so any run can be reproduced from its artifacts alone.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use twonov_core::{SolverConfig, TimeStep};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialData {
    /// Wrapped line peakon; peaked corner data.
    Peakon,
    /// Closed-form periodic peaked wave; requires a circumference-2-pi
    /// domain.
    PeriodicPeakon,
    /// Peakon potential smoothed by the standard mollifier; the
    /// admissible workhorse.
    MollifiedPeakon,
    /// Gaussian first potentials, recovered to velocities.
    GaussianPotentials,
    /// Snapshot file re-used as initial data.
    FromFile,
}

impl InitialData {
    /// The kebab-case selector name as written in configuration files.
    pub fn name(self) -> &'static str {
        match self {
            InitialData::Peakon => "peakon",
            InitialData::PeriodicPeakon => "periodic-peakon",
            InitialData::MollifiedPeakon => "mollified-peakon",
            InitialData::GaussianPotentials => "gaussian-potentials",
            InitialData::FromFile => "from-file",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct RunConfig {
    // lattice and horizon
    pub domain_length: f64,
    pub points: usize,
    pub final_time: f64,
    /// Fixed step size; mutually exclusive with `cfl`. Neither set
    /// means dt = 1e-3.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Adaptive Courant fraction in (0, 1]; mutually exclusive with
    /// `dt`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cfl: Option<f64>,
    pub dealias: bool,
    pub record_every: usize,

    // initial data
    pub initial_data: InitialData,
    pub c: f64,
    pub mollifier_n: u32,
    pub gaussian_width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_file: Option<PathBuf>,
    /// Seed for randomized test-function sweeps.
    pub seed: u64,

    // check bounds
    /// Final sup-error bound for peakon validation.
    pub tolerance: f64,
    /// Weak residuals must satisfy |r| <= residual-bound * sup|u0| * st * sx.
    pub residual_bound: f64,

    // weak-check sweep lattice
    pub sweep_t: usize,
    pub sweep_x: usize,
    pub sweep_st: f64,
    pub sweep_sx: f64,
    /// Place sweep centers by seeded draws instead of the even lattice.
    pub sweep_random: bool,

    // study lists
    pub ks: Vec<u32>,
    pub deltas: Vec<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            domain_length: 40.0,
            points: 2048,
            final_time: 5.0,
            dt: None,
            cfl: None,
            dealias: false,
            record_every: 50,
            initial_data: InitialData::MollifiedPeakon,
            c: 1.0,
            mollifier_n: 32,
            gaussian_width: 2.0,
            data_file: None,
            seed: 0,
            tolerance: 0.1,
            residual_bound: 1e-5,
            sweep_t: 3,
            sweep_x: 3,
            sweep_st: 0.3,
            sweep_sx: 1.0,
            sweep_random: false,
            ks: vec![4, 8, 16, 32],
            deltas: vec![1e-2, 5e-3, 2.5e-3],
        }
    }
}

impl RunConfig {
    /// Reads a config file and merges `--override KEY=VALUE` fragments
    /// on top of it, then validates cross-field rules.
    pub fn load(path: &Path, overrides: &[String]) -> Result<RunConfig, String> {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut table: toml::Table = text
            .parse()
            .map_err(|e| format!("config {} is not valid: {e}", path.display()))?;
        for fragment in overrides {
            let (key, value) = fragment
                .split_once('=')
                .ok_or_else(|| format!("override '{fragment}' is not KEY=VALUE"))?;
            let parsed: toml::Table = format!("{key} = {value}")
                .parse()
                .or_else(|_| format!("{key} = {value:?}").parse())
                .map_err(|e| format!("override '{fragment}' is not a value: {e}"))?;
            for (k, v) in parsed {
                table.insert(k, v);
            }
        }
        let cfg: RunConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e| format!("config: {e}"))?;
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), String> {
        if self.dt.is_some() && self.cfl.is_some() {
            return Err("set at most one of dt and cfl".into());
        }
        if self.sweep_t == 0 || self.sweep_x == 0 {
            return Err("sweep-t and sweep-x must be at least 1".into());
        }
        if self.initial_data == InitialData::FromFile && self.data_file.is_none() {
            return Err("initial-data = \"from-file\" needs data-file".into());
        }
        if self.initial_data == InitialData::PeriodicPeakon
            && (self.domain_length - 2.0 * PI).abs() > 1e-12
        {
            return Err(format!(
                "periodic-peakon runs on the circumference-2-pi circle, not length {}",
                self.domain_length
            ));
        }
        Ok(())
    }

    /// Copy with the time step made explicit, the form that is echoed.
    pub fn resolved(&self) -> RunConfig {
        let mut out = self.clone();
        if out.dt.is_none() && out.cfl.is_none() {
            out.dt = Some(1e-3);
        }
        out
    }

    pub fn solver(&self) -> SolverConfig {
        let step = match (self.dt, self.cfl) {
            (Some(dt), _) => TimeStep::Fixed(dt),
            (None, Some(fraction)) => TimeStep::Cfl(fraction),
            (None, None) => TimeStep::Fixed(1e-3),
        };
        SolverConfig {
            domain_length: self.domain_length,
            points: self.points,
            final_time: self.final_time,
            step,
            dealias: self.dealias,
            record_every: self.record_every.max(1),
        }
    }

    /// Serializes the resolved form for the output directory.
    pub fn echo(&self) -> String {
        toml::to_string_pretty(&self.resolved()).expect("config serializes")
    }
}
