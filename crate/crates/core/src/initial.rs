//! Initial data: analytic presets and their piecewise-constant approximations.
//!
//! A [`StepProfile`] always has a break at `x = 0`, so every cell lies in a
//! single phase. Volumes inside a cell are derived from the cell's pressure
//! when a preset is specified by pressure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::eos::{PhasePair, State};
use crate::error::{Error, Result};

/// Piecewise-constant `(v, u)`: `values[i]` holds between `breaks[i-1]` and
/// `breaks[i]`, with the outer cells extending to infinity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepProfile {
    pub breaks: Vec<f64>,
    pub values: Vec<(f64, f64)>,
}

impl StepProfile {
    pub fn new(breaks: Vec<f64>, values: Vec<(f64, f64)>) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidData(format!(
                "{} values for {} breaks",
                values.len(),
                breaks.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidData("breaks must be finite and strictly increasing".into()));
        }
        for &(v, u) in &values {
            if !(v > 0.0) || !v.is_finite() || !u.is_finite() {
                return Err(Error::InvalidData(format!("bad cell value (v = {v}, u = {u})")));
            }
        }
        let mut profile = StepProfile { breaks, values };
        profile.ensure_interface_break();
        Ok(profile)
    }

    fn ensure_interface_break(&mut self) {
        if let Err(pos) = self.breaks.binary_search_by(|b| b.total_cmp(&0.0)) {
            let value = self.values[pos];
            self.breaks.insert(pos, 0.0);
            self.values.insert(pos, value);
        }
    }

    /// Index of the cell containing `x`; points on a break belong to the right cell.
    pub fn cell(&self, x: f64) -> usize {
        self.breaks.partition_point(|&b| b <= x)
    }

    pub fn eval(&self, x: f64) -> (f64, f64) {
        self.values[self.cell(x)]
    }

    /// Whether cell `i` lies left of the interface.
    pub fn cell_is_left(&self, i: usize) -> bool {
        i < self.breaks.len() && self.breaks[i] <= 0.0
    }

    pub fn state(&self, i: usize, phases: &PhasePair) -> State {
        let (v, u) = self.values[i];
        let lam = if self.cell_is_left(i) { phases.lam_l } else { phases.lam_r };
        State { v, u, lam }
    }

    pub fn v_min(&self) -> f64 {
        self.values.iter().map(|&(v, _)| v).fold(f64::INFINITY, f64::min)
    }

    /// `(TV(log p), TV(u))` with the pressure law of each cell's phase.
    pub fn total_variations(&self, phases: &PhasePair) -> Result<(f64, f64)> {
        let mut tv_log_p = 0.0;
        let mut tv_u = 0.0;
        for i in 1..self.values.len() {
            let (a0, a1) = (self.sound(i - 1, phases), self.sound(i, phases));
            let lp0 = crate::eos::pressure(self.values[i - 1].0, a0)?.ln();
            let lp1 = crate::eos::pressure(self.values[i].0, a1)?.ln();
            tv_log_p += (lp1 - lp0).abs();
            tv_u += (self.values[i].1 - self.values[i - 1].1).abs();
        }
        Ok((tv_log_p, tv_u))
    }

    pub fn combined_variation(&self, phases: &PhasePair) -> Result<f64> {
        let (lp, u) = self.total_variations(phases)?;
        Ok(lp + u / phases.a_min())
    }

    fn sound(&self, i: usize, phases: &PhasePair) -> f64 {
        if self.cell_is_left(i) {
            phases.a_l
        } else {
            phases.a_r
        }
    }

    /// Drops breaks with identical values on both sides, except the interface.
    pub fn simplified(&self) -> StepProfile {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut values = vec![self.values[0]];
        for (i, &b) in self.breaks.iter().enumerate() {
            let next = self.values[i + 1];
            if b == 0.0 || next != *values.last().unwrap() {
                breaks.push(b);
                values.push(next);
            }
        }
        StepProfile { breaks, values }
    }
}

/// Analytic initial data for `(v, u)`; `λ` always jumps at `x = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataSpec {
    /// Two constant states separated at `x = 0`.
    Riemann { v_l: f64, u_l: f64, v_r: f64, u_r: f64 },
    /// Constant pressure and velocity across the interface.
    Uniform { p: f64, u: f64 },
    /// Constant pressure; velocity with a linear ramp of slope
    /// `amplitude/half_width` on `|x - center| < half_width`, zero mean jump.
    NWave { p: f64, u: f64, center: f64, half_width: f64, amplitude: f64 },
    /// Smooth `cos²` bumps in `log p` and `u` of width `2·half_width`.
    Bump { p: f64, u: f64, center: f64, half_width: f64, log_p_amplitude: f64, u_amplitude: f64 },
    /// Random piecewise-constant data with a prescribed combined variation.
    RandomBv { seed: u64, jumps: usize, combined_tv: f64, p: f64, u: f64, extent: f64 },
    /// Rows `(x_i, v_i, u_i)`: row `i` holds on `[x_i, x_{i+1})`, row 0
    /// extends to `-∞`.
    Table { x: Vec<f64>, v: Vec<f64>, u: Vec<f64> },
}

fn bump(x: f64, center: f64, half_width: f64) -> f64 {
    let s = (x - center) / half_width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        let c = (0.5 * std::f64::consts::PI * s).cos();
        c * c
    }
}

impl DataSpec {
    /// Exact step profile for piecewise-constant presets.
    pub fn step_profile(&self, phases: &PhasePair) -> Option<Result<StepProfile>> {
        match self {
            DataSpec::Riemann { v_l, u_l, v_r, u_r } => {
                Some(StepProfile::new(vec![0.0], vec![(*v_l, *u_l), (*v_r, *u_r)]))
            }
            DataSpec::Uniform { p, u } => {
                let (vl, vr) = (phases.a_l.powi(2) / p, phases.a_r.powi(2) / p);
                Some(StepProfile::new(vec![0.0], vec![(vl, *u), (vr, *u)]))
            }
            DataSpec::RandomBv { seed, jumps, combined_tv, p, u, extent } => {
                Some(random_bv(*seed, *jumps, *combined_tv, *p, *u, *extent, phases))
            }
            DataSpec::Table { x, v, u } => Some(table(x, v, u)),
            DataSpec::NWave { .. } | DataSpec::Bump { .. } => None,
        }
    }

    /// Pointwise value; `v` carries the phase-dependent pressure law.
    pub fn eval(&self, x: f64, phases: &PhasePair) -> Result<(f64, f64)> {
        let a = if x < 0.0 { phases.a_l } else { phases.a_r };
        match self {
            DataSpec::NWave { p, u, center, half_width, amplitude } => {
                let s = (x - center) / half_width;
                let du = if s.abs() < 1.0 { amplitude * s } else { 0.0 };
                Ok((a * a / p, u + du))
            }
            DataSpec::Bump { p, u, center, half_width, log_p_amplitude, u_amplitude } => {
                let b = bump(x, *center, *half_width);
                let pressure = p * (log_p_amplitude * b).exp();
                Ok((a * a / pressure, u + u_amplitude * b))
            }
            _ => Ok(self.step_profile(phases).expect("step preset")?.eval(x)),
        }
    }

    /// Interval outside of which the data is constant on each side.
    pub fn support(&self) -> (f64, f64) {
        match self {
            DataSpec::NWave { center, half_width, .. } | DataSpec::Bump { center, half_width, .. } => {
                ((center - half_width).min(0.0), (center + half_width).max(0.0))
            }
            DataSpec::RandomBv { extent, .. } => (-extent, *extent),
            DataSpec::Table { x, .. } => (x.first().copied().unwrap_or(0.0).min(0.0), x.last().copied().unwrap_or(0.0).max(0.0)),
            _ => (0.0, 0.0),
        }
    }

    /// Known discontinuities.
    pub fn jumps(&self) -> Vec<f64> {
        match self {
            DataSpec::NWave { center, half_width, .. } => vec![center - half_width, 0.0, center + half_width],
            _ => vec![0.0],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |what: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidData(format!("{what} must be positive, got {x}")))
            }
        };
        match self {
            DataSpec::Riemann { v_l, v_r, .. } => {
                positive("v_l", *v_l)?;
                positive("v_r", *v_r)
            }
            DataSpec::Uniform { p, .. } => positive("p", *p),
            DataSpec::NWave { p, half_width, .. } => {
                positive("p", *p)?;
                positive("half_width", *half_width)
            }
            DataSpec::Bump { p, half_width, .. } => {
                positive("p", *p)?;
                positive("half_width", *half_width)
            }
            DataSpec::RandomBv { p, extent, combined_tv, .. } => {
                positive("p", *p)?;
                positive("extent", *extent)?;
                if *combined_tv < 0.0 {
                    return Err(Error::InvalidData("combined_tv must be nonnegative".into()));
                }
                Ok(())
            }
            DataSpec::Table { x, v, u } => {
                if x.len() != v.len() || x.len() != u.len() || x.is_empty() {
                    return Err(Error::InvalidData("table columns x, v, u must have equal nonzero length".into()));
                }
                Ok(())
            }
        }
    }
}

fn table(x: &[f64], v: &[f64], u: &[f64]) -> Result<StepProfile> {
    if x.len() != v.len() || x.len() != u.len() || x.is_empty() {
        return Err(Error::InvalidData("table columns x, v, u must have equal nonzero length".into()));
    }
    let breaks = x[1..].to_vec();
    let values = v.iter().copied().zip(u.iter().copied()).collect();
    StepProfile::new(breaks, values)
}

fn random_bv(
    seed: u64,
    jumps: usize,
    combined_tv: f64,
    p0: f64,
    u0: f64,
    extent: f64,
    phases: &PhasePair,
) -> Result<StepProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions: Vec<f64> = (0..jumps).map(|_| rng.random_range(-extent..extent)).collect();
    positions.push(0.0);
    positions.sort_by(f64::total_cmp);
    positions.dedup();

    let raw: Vec<(f64, f64)> = positions
        .iter()
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let raw_tv: f64 = raw.iter().map(|&(lp, du)| lp.abs() + du.abs()).sum();
    let scale = if raw_tv > 0.0 { combined_tv / raw_tv } else { 0.0 };

    let a_min = phases.a_min();
    let mut log_p = p0.ln();
    let mut u = u0;
    let volume = |x_right_of: bool, lp: f64| {
        let a = if x_right_of { phases.a_r } else { phases.a_l };
        a * a / lp.exp()
    };
    let mut values = vec![(volume(positions[0] > 0.0, log_p), u)];
    for (i, &(lp, du)) in raw.iter().enumerate() {
        log_p += scale * lp;
        // Scale velocity jumps so they enter the combined variation with weight 1.
        u += scale * du * a_min;
        values.push((volume(positions[i] >= 0.0, log_p), u));
    }
    StepProfile::new(positions, values)
}

/// Piecewise-constant approximation of `spec` with `L¹` distance at most `tol`.
///
/// Cells are sampled at their midpoints, which never increases the total
/// variation; the grid is aligned with `x = 0` and with known jumps.
pub fn approximate(spec: &DataSpec, phases: &PhasePair, tol: f64) -> Result<(StepProfile, f64)> {
    spec.validate()?;
    if let Some(profile) = spec.step_profile(phases) {
        return Ok((profile?.simplified(), 0.0));
    }
    let (lo, hi) = spec.support();
    let width = (hi - lo).max(1e-12);
    let mut h = width / 8.0;
    for _ in 0..40 {
        let profile = sample_on_grid(spec, phases, h, lo, hi)?;
        let dist = l1_distance_to(spec, phases, &profile, lo, hi)?;
        if dist <= tol {
            return Ok((profile.simplified(), dist));
        }
        h *= 0.5;
    }
    Err(Error::InvalidData(format!("could not reach L1 tolerance {tol}")))
}

fn sample_on_grid(spec: &DataSpec, phases: &PhasePair, h: f64, lo: f64, hi: f64) -> Result<StepProfile> {
    let k_lo = (lo / h).floor() as i64;
    let k_hi = (hi / h).ceil() as i64;
    let mut nodes: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * h).collect();
    nodes.extend(spec.jumps());
    nodes.sort_by(f64::total_cmp);
    nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * h);
    for n in nodes.iter_mut() {
        if n.abs() <= 1e-12 * h {
            *n = 0.0;
        }
    }
    let mut values = Vec::with_capacity(nodes.len() + 1);
    values.push(spec.eval(nodes[0] - h, phases)?);
    for w in nodes.windows(2) {
        values.push(spec.eval(0.5 * (w[0] + w[1]), phases)?);
    }
    values.push(spec.eval(nodes[nodes.len() - 1] + h, phases)?);
    StepProfile::new(nodes, values)
}

/// `∫ |v - v_ν| + |u - u_ν| dx` by composite midpoint quadrature per cell.
pub fn l1_distance_to(spec: &DataSpec, phases: &PhasePair, profile: &StepProfile, lo: f64, hi: f64) -> Result<f64> {
    const SUB: usize = 64;
    let mut nodes: Vec<f64> = profile.breaks.iter().copied().filter(|&b| b >= lo && b <= hi).collect();
    nodes.push(lo);
    nodes.push(hi);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let dx = (w[1] - w[0]) / SUB as f64;
        for j in 0..SUB {
            let x = w[0] + (j as f64 + 0.5) * dx;
            let (v, u) = spec.eval(x, phases)?;
            let (vn, un) = profile.eval(x);
            total += ((v - vn).abs() + (u - un).abs()) * dx;
        }
    }
    Ok(total)
}
