//! Run configuration in TOML.
//!
//! ```toml
//! [phase]
//! lam_l = 0.0
//! lam_r = 1.0
//! a_l = 1.0
//! a_r = 3.0
//!
//! [initial]
//! kind = "random_bv"
//! seed = 7
//! jumps = 12
//! combined_tv = 0.4
//! p = 1.0
//! u = 0.0
//! extent = 1.0
//!
//! [scheme]
//! nu = 8
//! t_max = 4.0
//!
//! [output]
//! dir = "out"
//! ```

use serde::{Deserialize, Serialize};

use crate::eos::PhasePair;
use crate::error::{Error, Result};
use crate::initial::{approximate, DataSpec, StepProfile};
use crate::params::{check_initial_data, choose_parameters, AdmissibilityReport, ParameterSet};
use crate::tracker::{MonitorMode, SchemeSettings, DEFAULT_JITTER, DEFAULT_MAX_EVENTS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    pub lam_l: f64,
    pub lam_r: f64,
    pub a_l: f64,
    pub a_r: f64,
}

fn default_eta0() -> f64 {
    0.5
}
fn default_jitter() -> f64 {
    DEFAULT_JITTER
}
fn default_max_events() -> usize {
    DEFAULT_MAX_EVENTS
}
fn default_data_tolerance() -> f64 {
    1e-3
}
fn default_halvings() -> u32 {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub nu: u32,
    pub t_max: f64,
    #[serde(default = "default_eta0")]
    pub eta0: f64,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub rho: Option<f64>,
    #[serde(default = "default_jitter")]
    pub jitter: f64,
    #[serde(default = "default_max_events")]
    pub max_events: usize,
    #[serde(default)]
    pub sample_times: Vec<f64>,
    /// `L¹` tolerance for sampling smooth presets into steps at `ν = 1`;
    /// refinement `ν` samples to `data_tolerance/ν`.
    #[serde(default = "default_data_tolerance")]
    pub data_tolerance: f64,
    /// Variation budget handed to the parameter choice; defaults to the
    /// combined variation of the data.
    #[serde(default)]
    pub tv_budget: Option<f64>,
    #[serde(default = "default_halvings")]
    pub max_rho_halvings: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Table {
    Events,
    Timeline,
    Functionals,
    Profiles,
}

impl Table {
    pub const ALL: [Table; 4] = [Table::Events, Table::Timeline, Table::Functionals, Table::Profiles];

    pub fn file_name(self) -> &'static str {
        match self {
            Table::Events => "events.csv",
            Table::Timeline => "timeline.csv",
            Table::Functionals => "functionals.csv",
            Table::Profiles => "profiles.csv",
        }
    }
}

fn default_dir() -> String {
    "phasefront-out".into()
}
fn default_tables() -> Vec<Table> {
    Table::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_dir")]
    pub dir: String,
    #[serde(default = "default_tables")]
    pub tables: Vec<Table>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: default_dir(), tables: default_tables() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub phase: PhaseConfig,
    pub initial: DataSpec,
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Everything a run needs, derived from a [`Config`].
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub phases: PhasePair,
    pub profile: StepProfile,
    /// `L¹` distance between the data and `profile`.
    pub data_error: f64,
    pub admissibility: AdmissibilityReport,
    pub params: Result<ParameterSet>,
    pub settings: SchemeSettings,
}

impl Config {
    /// Parses TOML; errors carry the line and the offending key.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let s = &self.scheme;
        if s.nu == 0 {
            return Err(Error::Config("scheme.nu must be at least 1".into()));
        }
        if !(s.t_max > 0.0 && s.t_max.is_finite()) {
            return Err(Error::Config(format!("scheme.t_max must be positive, got {}", s.t_max)));
        }
        for (key, v) in [("scheme.eta", s.eta), ("scheme.rho", s.rho)] {
            if let Some(v) = v {
                if !(v > 0.0) {
                    return Err(Error::Config(format!("{key} must be positive, got {v}")));
                }
            }
        }
        if !(s.eta0 > 0.0) || !(s.data_tolerance > 0.0) || !(s.jitter >= 0.0) {
            return Err(Error::Config("scheme.eta0 and scheme.data_tolerance must be positive, scheme.jitter nonnegative".into()));
        }
        self.initial.validate().map_err(|e| Error::Config(format!("initial: {e}")))?;
        Ok(())
    }

    pub fn phases(&self) -> Result<PhasePair> {
        let p = &self.phase;
        PhasePair::new(p.lam_l, p.lam_r, p.a_l, p.a_r).map_err(|e| Error::Config(format!("phase: {e}")))
    }

    /// Seed of random presets, if any.
    pub fn seed(&self) -> Option<u64> {
        match self.initial {
            DataSpec::RandomBv { seed, .. } => Some(seed),
            _ => None,
        }
    }

    pub fn set_seed(&mut self, new_seed: u64) {
        if let DataSpec::RandomBv { seed, .. } = &mut self.initial {
            *seed = new_seed;
        }
    }

    pub fn settings(&self, nu: u32, monitor: MonitorMode) -> SchemeSettings {
        let s = &self.scheme;
        SchemeSettings {
            nu,
            eta0: s.eta0,
            eta: s.eta,
            rho: s.rho,
            t_max: s.t_max,
            speed_jitter: s.jitter,
            max_events: s.max_events,
            monitor,
            sample_times: s.sample_times.clone(),
            max_rho_halvings: s.max_rho_halvings,
        }
    }

    pub fn prepare(&self, monitor: MonitorMode) -> Result<Prepared> {
        self.prepare_for(self.scheme.nu, monitor)
    }

    /// Data, parameters and settings for refinement `nu`.
    pub fn prepare_for(&self, nu: u32, monitor: MonitorMode) -> Result<Prepared> {
        let phases = self.phases()?;
        let tol = self.scheme.data_tolerance / nu.max(1) as f64;
        let (profile, data_error) = approximate(&self.initial, &phases, tol)?;
        let admissibility = check_initial_data(&profile, &phases)?;
        let budget = self.scheme.tv_budget.unwrap_or(admissibility.combined);
        Ok(Prepared {
            phases,
            profile,
            data_error,
            admissibility,
            params: choose_parameters(&phases, budget),
            settings: self.settings(nu, monitor),
        })
    }
}
