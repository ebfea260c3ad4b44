//! Scheme constants and the admissibility threshold for initial data.
//!
//! The maximal wave size `m` is bracketed by two monotone functions,
//! `w(m) = 2/(cosh m - 1)` (interface strength) and `z(m) = 2m c(m)²`
//! (initial total variation). Everything else follows from `m` and `|δ₂|`.

use serde::{Deserialize, Serialize};

use crate::eos::{c_damp, PhasePair, State};
use crate::error::{Error, Result};
use crate::initial::StepProfile;

/// `log(2 + sqrt 3) = cosh⁻¹(2)`, below which `w(m) > 2 > |δ₂|` always.
pub fn m_bar() -> f64 {
    (2.0 + 3f64.sqrt()).ln()
}

/// Data whose combined variation stays below this value is admissible for
/// every interface strength.
pub fn small_data_bound() -> f64 {
    2.0 / 9.0 * m_bar()
}

pub fn w(m: f64) -> f64 {
    2.0 / (m.cosh() - 1.0)
}

pub fn z(m: f64) -> f64 {
    let c = c_damp(m);
    2.0 * m * c * c
}

const BISECT_TOL: f64 = 1e-13;

fn bisect(mut lo: f64, mut hi: f64, increasing: bool, f: impl Fn(f64) -> f64, target: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECT_TOL * mid.abs().max(1.0) {
            break;
        }
        let above = f(mid) > target;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse of the strictly decreasing `w` on `(0, ∞)`; `+∞` for `r = 0`.
pub fn w_inverse(r: f64) -> Result<f64> {
    if r.is_nan() || r < 0.0 {
        return Err(Error::Domain { what: "interface magnitude", value: r });
    }
    if r == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mut hi = 1.0;
    while w(hi) > r {
        hi *= 2.0;
    }
    let mut lo = hi;
    while w(lo) < r {
        lo *= 0.5;
    }
    Ok(bisect(lo, hi, false, w, r))
}

/// Inverse of the strictly increasing `z` on `[0, ∞)`.
pub fn z_inverse(t: f64) -> Result<f64> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain { what: "total variation budget", value: t });
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while z(hi) < t {
        hi *= 2.0;
    }
    Ok(bisect(0.0, hi, true, z, t))
}

/// Admissible bound on `TV(log p₀) + TV(u₀)/min(a_l, a_r)` for an interface
/// of magnitude `r ∈ (0, 2)`.
pub fn k_threshold(r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::Domain { what: "interface magnitude", value: r });
    }
    let two_over_r = 2.0 / r;
    let arg = two_over_r + 1.0 + two_over_r * (1.0 + r).sqrt();
    Ok(2.0 / ((1.0 + r) * (1.0 + r)) * arg.ln())
}

/// [`k_threshold`] extended by `+∞` at `r = 0`.
pub fn k_budget(r: f64) -> Result<f64> {
    if r == 0.0 {
        Ok(f64::INFINITY)
    } else {
        k_threshold(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificates {
    /// `1 + |δ₂| < ξ ≤ 1/c(m)`
    pub xi_window: bool,
    /// `max{(ξ-1)/2, 1} < K < (ξ-1)/|δ₂|`
    pub k_window: bool,
    /// `0 < K_np < K/C_o`
    pub k_np_bound: bool,
    /// `0 < μ < 1`
    pub mu_below_one: bool,
    /// `c(m) < 1/(1 + |δ₂|)`
    pub m_window: bool,
}

impl Certificates {
    pub fn all(&self) -> bool {
        self.xi_window && self.k_window && self.k_np_bound && self.mu_below_one && self.m_window
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterSet {
    pub m: f64,
    pub xi: f64,
    pub k: f64,
    pub k_np: f64,
    pub c_o: f64,
    pub mu: f64,
    /// `|δ₂|` the set was built for.
    pub delta2: f64,
    pub feasible: Certificates,
}

pub fn simplified_constant(m: f64, a_max: f64) -> f64 {
    if m == 0.0 {
        2.0 * a_max
    } else {
        2.0 * a_max * m.sinh() / m
    }
}

pub fn decay_factor(xi: f64, k: f64, k_np: f64, c_o: f64, delta2: f64) -> f64 {
    let terms = [1.0 / (2.0 * k - 1.0), xi / (2.0 * k + 1.0), (k * delta2 + 1.0) / xi, k_np * c_o / k];
    terms.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

impl ParameterSet {
    /// Assembles a set from `m`, `ξ`, `K` and re-derives the certificates.
    pub fn from_parts(m: f64, xi: f64, k: f64, phases: &PhasePair) -> Self {
        let delta2 = phases.abs_delta2();
        let c_o = simplified_constant(m, phases.a_max());
        let k_np = k / (2.0 * c_o);
        let mu = decay_factor(xi, k, k_np, c_o, delta2);
        let mut set = ParameterSet {
            m,
            xi,
            k,
            k_np,
            c_o,
            mu,
            delta2,
            feasible: Certificates {
                xi_window: false,
                k_window: false,
                k_np_bound: false,
                mu_below_one: false,
                m_window: false,
            },
        };
        set.feasible = set.certify();
        set
    }

    pub fn certify(&self) -> Certificates {
        let c = c_damp(self.m);
        let d = self.delta2;
        let k_upper = if d == 0.0 { f64::INFINITY } else { (self.xi - 1.0) / d };
        Certificates {
            xi_window: 1.0 + d < self.xi && self.xi <= 1.0 / c,
            k_window: ((self.xi - 1.0) / 2.0).max(1.0) < self.k && self.k < k_upper,
            k_np_bound: self.k_np > 0.0 && self.k_np < self.k / self.c_o,
            mu_below_one: self.mu > 0.0 && self.mu < 1.0,
            m_window: self.m > 0.0 && c < 1.0 / (1.0 + d),
        }
    }

    /// Largest wave size the functional bound can guarantee for data with
    /// `L̄(0+) = lbar`.
    pub fn covers(&self, lbar: f64) -> bool {
        let c = c_damp(self.m);
        lbar <= self.m * c * c
    }

    /// A set for data outside the admissible range. Certificates report what
    /// fails; used only for monitored runs in warn-only mode.
    pub fn best_effort(phases: &PhasePair, tv_budget: f64) -> Self {
        match choose_parameters(phases, tv_budget) {
            Ok(set) => set,
            Err(_) => {
                let m = (1.5 * z_inverse(tv_budget.max(0.0)).unwrap_or(1.0)).max(m_bar());
                let xi = (1.0 / c_damp(m)).max(1.0 + 1e-3);
                let k = 1.5 * ((xi - 1.0) / 2.0).max(1.0);
                ParameterSet::from_parts(m, xi, k, phases)
            }
        }
    }
}

/// Picks `m`, `ξ`, `K`, `K_np` at the midpoints of their feasibility windows.
pub fn choose_parameters(phases: &PhasePair, tv_budget: f64) -> Result<ParameterSet> {
    let r = phases.abs_delta2();
    let lower = z_inverse(tv_budget.max(0.0))?;
    let upper = w_inverse(r)?;
    if !(lower < upper) {
        return Err(Error::Infeasible { lower, upper });
    }
    let m = if upper.is_infinite() {
        (2.0 * lower).max(m_bar())
    } else if lower > 0.0 {
        (lower * upper).sqrt()
    } else {
        0.5 * upper
    };

    let xi = 0.5 * ((1.0 + r) + 1.0 / c_damp(m));
    let k_lower = ((xi - 1.0) / 2.0).max(1.0);
    let k = if r == 0.0 { 2.0 * k_lower } else { 0.5 * (k_lower + (xi - 1.0) / r) };
    let set = ParameterSet::from_parts(m, xi, k, phases);
    if !set.feasible.all() || !(z(m) > tv_budget) {
        return Err(Error::Infeasible { lower, upper });
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub tv_log_p: f64,
    pub tv_u: f64,
    pub a_min: f64,
    /// `TV(log p₀) + TV(u₀)/min(a_l, a_r)`
    pub combined: f64,
    pub delta2: f64,
    /// `K(|δ₂|)`, infinite when the phases share a sound coefficient.
    pub threshold: f64,
    pub margin: f64,
    pub admissible: bool,
    pub small_data_bound: f64,
    pub within_small_data_bound: bool,
    pub v_min: f64,
    pub parameters: Option<ParameterSet>,
}

pub fn check_initial_data(profile: &StepProfile, phases: &PhasePair) -> Result<AdmissibilityReport> {
    let (tv_log_p, tv_u) = profile.total_variations(phases)?;
    let a_min = phases.a_min();
    let combined = tv_log_p + tv_u / a_min;
    let threshold = k_budget(phases.abs_delta2())?;
    let admissible = combined < threshold && profile.v_min() > 0.0;
    let parameters = if admissible { choose_parameters(phases, combined).ok() } else { None };
    Ok(AdmissibilityReport {
        tv_log_p,
        tv_u,
        a_min,
        combined,
        delta2: phases.delta2,
        threshold,
        margin: threshold - combined,
        admissible,
        small_data_bound: small_data_bound(),
        within_small_data_bound: combined <= small_data_bound(),
        v_min: profile.v_min(),
        parameters,
    })
}

/// Reflection coefficients of a 1-shock / interface / 3-shock pattern with
/// states `U0 | U1 | U2 | U3`; `U0, U1` lie on the left phase.
pub fn schochet_reflection(states: [State; 4], phases: &PhasePair) -> Result<(f64, f64)> {
    let [u0, u1, u2, u3] = states;
    for s in &states {
        s.validate()?;
    }
    let (a1, a2) = (phases.a_l, phases.a_r);

    let c1 = a1 / u1.v;
    let s_minus = -a1 / (u1.v * u0.v).sqrt();
    let (dv, du) = (u1.v - u0.v, u1.u - u0.u);
    let num = -c1 * dv + du;
    let den = c1 * dv + du;
    if dv == 0.0 || den == 0.0 || c1 - s_minus == 0.0 {
        return Err(Error::DegenerateJump("1-shock of zero strength"));
    }
    let a = ((c1 + s_minus) / (c1 - s_minus) * num / den).abs();

    let c2 = a2 / u2.v;
    let s_plus = a2 / (u2.v * u3.v).sqrt();
    let (dv, du) = (u3.v - u2.v, u3.u - u2.u);
    let num = c2 * dv + du;
    let den = -c2 * dv + du;
    if dv == 0.0 || den == 0.0 || c2 + s_plus == 0.0 {
        return Err(Error::DegenerateJump("3-shock of zero strength"));
    }
    let b = ((c2 - s_plus) / (c2 + s_plus) * num / den).abs();
    Ok((a, b))
}

/// Left side of the finiteness condition in terms of the two damping
/// coefficients.
pub fn finiteness_margin(c1: f64, c3: f64, eps2: f64) -> f64 {
    let e = eps2.abs();
    c1 * c3 * e * e - (c1 + c3) * e + 2.0 * (1.0 - c1 * c3)
}

/// BV-stability of a shock / interface / shock pattern. Returns whether the
/// condition holds and the value of its left side.
pub fn schochet_finiteness(eps1: f64, eps2: f64, eps3: f64) -> (bool, f64) {
    let margin = finiteness_margin(c_damp(eps1.abs()), c_damp(eps3.abs()), eps2);
    (margin > 0.0, margin)
}
