//! The weighted strength `L`, the interaction potential `Q = |δ₂| V`, the
//! functional `F = L + K Q`, and their split by generation order.

use serde::{Deserialize, Serialize};

use crate::eos::{self, PhasePair};
use crate::params::ParameterSet;
use crate::tracker::{Classification, Front, FrontKind};

/// Slack used by every monitored inequality.
pub const LAW_TOL: f64 = 1e-10;

pub fn positive_part(x: f64) -> f64 {
    x.max(0.0)
}

pub fn negative_part(x: f64) -> f64 {
    (-x).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSnapshot {
    pub t: f64,
    pub l: f64,
    pub v: f64,
    pub q: f64,
    pub f: f64,
    pub lbar: f64,
    pub composite_abs: f64,
    pub max_order: u32,
    /// `F̃₂ = Σ_{k≥2} F_k`, zero until a ledger fills it in.
    pub tail2: f64,
    /// `TV(v) + TV(u)`.
    pub tv_vu: f64,
}

fn weight(strength: f64, xi: f64) -> f64 {
    if strength >= 0.0 {
        strength
    } else {
        -xi * strength
    }
}

/// Walks the ordered front list and reports, for every physical front,
/// whether it approaches the composite.
fn approaching_flags(fronts: &[Front]) -> impl Iterator<Item = (&Front, bool)> {
    let mut right_of_composite = false;
    fronts.iter().filter_map(move |f| match f.kind {
        FrontKind::Composite => {
            right_of_composite = true;
            None
        }
        FrontKind::One => Some((f, right_of_composite)),
        FrontKind::Three => Some((f, !right_of_composite)),
    })
}

fn composite_strength(fronts: &[Front]) -> f64 {
    fronts.iter().find(|f| f.kind == FrontKind::Composite).map_or(0.0, |f| f.strength)
}

pub fn snapshot(fronts: &[Front], params: &ParameterSet, t: f64) -> FunctionalSnapshot {
    let mut l = 0.0;
    let mut v = 0.0;
    let mut lbar = 0.0;
    let mut max_order = 0;
    for (front, approaching) in approaching_flags(fronts) {
        let w = weight(front.strength, params.xi);
        l += w;
        lbar += front.strength.abs();
        if approaching {
            v += w;
        }
        max_order = max_order.max(front.order);
    }
    let composite_abs = composite_strength(fronts).abs();
    if let Some(c) = fronts.iter().find(|f| f.kind == FrontKind::Composite) {
        max_order = max_order.max(c.order);
    }
    l += params.k_np * composite_abs;
    let q = params.delta2 * v;
    FunctionalSnapshot { t, l, v, q, f: l + params.k * q, lbar, composite_abs, max_order, tail2: 0.0, tv_vu: tv_v_plus_u(fronts) }
}

/// `½ TV(log p)` straight from the side states of every front.
pub fn half_tv_log_p(fronts: &[Front], phases: &PhasePair) -> f64 {
    let log_p = |s: &eos::State| {
        let a = phases.sound(s.lam);
        (a * a / s.v).ln()
    };
    0.5 * fronts.iter().map(|f| (log_p(&f.right) - log_p(&f.left)).abs()).sum::<f64>()
}

/// `TV(v) + TV(u)` of the piecewise-constant profile.
pub fn tv_v_plus_u(fronts: &[Front]) -> f64 {
    fronts.iter().map(|f| (f.right.v - f.left.v).abs() + (f.right.u - f.left.u).abs()).sum()
}

/// Physical parts of `L_k` and `V_k`, indexed by `k - 1`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct OrderTotals {
    pub l: Vec<f64>,
    pub v: Vec<f64>,
}

impl OrderTotals {
    pub fn from_fronts(fronts: &[Front], xi: f64) -> Self {
        let mut totals = OrderTotals::default();
        for (front, approaching) in approaching_flags(fronts) {
            let k = front.order as usize;
            if totals.l.len() < k {
                totals.l.resize(k, 0.0);
                totals.v.resize(k, 0.0);
            }
            let w = weight(front.strength, xi);
            totals.l[k - 1] += w;
            if approaching {
                totals.v[k - 1] += w;
            }
        }
        totals
    }
}

fn at(values: &[f64], k: usize) -> f64 {
    values.get(k - 1).copied().unwrap_or(0.0)
}

/// Per-order functionals `F_k = L_k + K Q_k` with
/// `L_k = Σ_{order k} |γ| (weighted) + K_np L_k⁰`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationLedger {
    pub xi: f64,
    pub k: f64,
    pub k_np: f64,
    pub delta2: f64,
    pub mu: f64,
    /// Cumulative non-physical production `L_k⁰`, indexed by `k - 1`.
    pub l0: Vec<f64>,
    pub totals: OrderTotals,
    /// `α_k = Σ_{τ ∈ T_{k-1}} [ΔF_k(τ)]_+`, indexed by `k - 1`.
    pub alpha: Vec<f64>,
    pub f1_initial: f64,
    pub history: Vec<(f64, Classification)>,
}

/// Per-order change across one event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationDelta {
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    pub delta: Vec<f64>,
}

impl GenerationDelta {
    pub fn at(&self, k: u32) -> f64 {
        if k == 0 {
            return 0.0;
        }
        at(&self.delta, k as usize)
    }

    pub fn total(&self) -> f64 {
        self.delta.iter().sum()
    }
}

impl GenerationLedger {
    /// Ledger at `t = 0+`; every initial wave and the composite have order 1.
    pub fn new(fronts: &[Front], params: &ParameterSet) -> Self {
        let mut ledger = GenerationLedger {
            xi: params.xi,
            k: params.k,
            k_np: params.k_np,
            delta2: params.delta2,
            mu: params.mu,
            l0: Vec::new(),
            totals: OrderTotals::from_fronts(fronts, params.xi),
            alpha: Vec::new(),
            f1_initial: 0.0,
            history: Vec::new(),
        };
        ledger.f1_initial = ledger.f_values().first().copied().unwrap_or(0.0);
        ledger
    }

    fn orders(&self) -> usize {
        self.totals.l.len().max(self.l0.len())
    }

    pub fn l_values(&self) -> Vec<f64> {
        (1..=self.orders()).map(|k| at(&self.totals.l, k) + self.k_np * at(&self.l0, k)).collect()
    }

    pub fn v_values(&self) -> Vec<f64> {
        (1..=self.orders()).map(|k| at(&self.totals.v, k)).collect()
    }

    pub fn q_values(&self) -> Vec<f64> {
        self.v_values().into_iter().map(|v| self.delta2 * v).collect()
    }

    pub fn f_values(&self) -> Vec<f64> {
        self.l_values().into_iter().zip(self.q_values()).map(|(l, q)| l + self.k * q).collect()
    }

    /// `F̃_k = Σ_{j≥k} F_j`.
    pub fn tail(&self, k: usize) -> f64 {
        self.f_values().iter().skip(k.saturating_sub(1)).sum()
    }

    /// Records one event: `production` is the non-physical amount created at
    /// order `production_order` (zero unless the simplified solver ran).
    pub fn update(
        &mut self,
        fronts: &[Front],
        classification: Classification,
        time: f64,
        production: f64,
        production_order: u32,
    ) -> GenerationDelta {
        let before = self.f_values();
        if production > 0.0 {
            let k = production_order as usize;
            if self.l0.len() < k {
                self.l0.resize(k, 0.0);
            }
            self.l0[k - 1] += production;
        }
        self.totals = OrderTotals::from_fronts(fronts, self.xi);
        let after = self.f_values();
        let n = before.len().max(after.len());
        let delta: Vec<f64> = (1..=n).map(|k| at(&after, k) - at(&before, k)).collect();
        if let Some(h) = classification.order() {
            let k = h as usize + 1;
            if self.alpha.len() < k {
                self.alpha.resize(k, 0.0);
            }
            self.alpha[k - 1] += positive_part(at(&delta, k));
        }
        self.history.push((time, classification));
        GenerationDelta { before, after, delta }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawCheck {
    pub law: String,
    pub order: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl LawCheck {
    fn le(law: &str, order: u32, lhs: f64, rhs: f64) -> Self {
        LawCheck { law: law.into(), order, lhs, rhs, holds: lhs <= rhs + LAW_TOL }
    }
}

pub fn delta_f(before: &FunctionalSnapshot, after: &FunctionalSnapshot) -> f64 {
    after.f - before.f
}

/// Sign pattern and growth bound of the per-order functionals at one event.
pub fn check_generation_laws(
    delta: &GenerationDelta,
    classification: Classification,
    reflected: bool,
    mu: f64,
) -> Vec<LawCheck> {
    let mut checks = Vec::new();
    let Some(h) = classification.order() else {
        for (i, d) in delta.delta.iter().enumerate() {
            checks.push(LawCheck::le("crossing leaves F_k unchanged", i as u32 + 1, d.abs(), 0.0));
        }
        return checks;
    };
    for k in (h + 2)..=(delta.delta.len() as u32) {
        checks.push(LawCheck::le("F_k unchanged above h+1", k, delta.at(k).abs(), 0.0));
    }
    let d_h = delta.at(h);
    let d_next = delta.at(h + 1);
    if reflected {
        checks.push(LawCheck::le("F_h decreases", h, d_h, 0.0));
        checks.push(LawCheck::le("F_{h+1} increases", h + 1, -d_next, 0.0));
    }
    let lower: f64 = (1..h).map(|l| delta.at(l)).sum();
    checks.push(LawCheck::le(
        "[dF_{h+1}]_+ <= mu([dF_h]_- - sum_{l<h} dF_l)",
        h + 1,
        positive_part(d_next),
        mu * (negative_part(d_h) - lower),
    ));
    checks
}

/// `ΔF ≤ -(1-μ)([ΔF_h]_- - Σ_{ℓ<h} ΔF_ℓ)` at events in `I_h` or `J_h`.
///
/// When a lower-order wave takes part the surviving same-family wave keeps
/// the lower order, so `Σ_{ℓ<h} ΔF_ℓ` can be positive and the bound without
/// it ([`check_strengthened_decrease_literal`]) need not hold.
pub fn check_strengthened_decrease(delta: &GenerationDelta, classification: Classification, mu: f64) -> Option<LawCheck> {
    let h = classification.order()?;
    let lower: f64 = (1..h).map(|l| delta.at(l)).sum();
    Some(LawCheck::le(
        "dF <= -(1-mu)([dF_h]_- - sum_{l<h} dF_l)",
        h,
        delta.total(),
        -(1.0 - mu) * (negative_part(delta.at(h)) - lower),
    ))
}

/// `ΔF ≤ -(1-μ)[ΔF_h]_-` with no lower-order correction.
pub fn check_strengthened_decrease_literal(delta: &GenerationDelta, classification: Classification, mu: f64) -> Option<LawCheck> {
    let h = classification.order()?;
    Some(LawCheck::le("dF <= -(1-mu)[dF_h]_-", h, delta.total(), -(1.0 - mu) * negative_part(delta.at(h))))
}

/// `F̃_k(t) ≤ μ^{k-1} F₁(0+)` for every order `k ≥ 2` present.
pub fn check_tail_decay(ledger: &GenerationLedger) -> Vec<LawCheck> {
    let f = ledger.f_values();
    let mut tail = 0.0;
    let mut checks = Vec::new();
    for k in (2..=f.len()).rev() {
        tail += f[k - 1];
        let bound = ledger.mu.powi(k as i32 - 1) * ledger.f1_initial;
        checks.push(LawCheck::le("tail decay", k as u32, tail, bound));
    }
    checks.reverse();
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::{apply_wave, Family, State};
    use crate::params::choose_parameters;

    fn params() -> (PhasePair, ParameterSet) {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap();
        (phases, choose_parameters(&phases, 0.5).unwrap())
    }

    fn composite(phases: &PhasePair, g: f64) -> Front {
        let left = State { v: 1.0, u: 0.0, lam: phases.lam_l };
        let right = eos::apply_composite(left, phases, g).unwrap();
        Front { id: 0, kind: FrontKind::Composite, strength: g, position: 0.0, t_anchor: 0.0, speed: 0.0, left, right, order: 1 }
    }

    fn wave(kind: FrontKind, strength: f64, x: f64, order: u32, left: State, a: f64) -> Front {
        let family = kind.family().unwrap();
        let right = apply_wave(left, family, strength, a);
        Front { id: 1, kind, strength, position: x, t_anchor: 0.0, speed: 0.0, left, right, order }
    }

    #[test]
    fn composite_only() {
        let (phases, p) = params();
        let s = snapshot(&[composite(&phases, 0.3)], &p, 0.0);
        assert!((s.l - p.k_np * 0.3).abs() < 1e-15);
        assert_eq!(s.v, 0.0);
        assert_eq!(s.f, s.l);
    }

    #[test]
    fn single_approaching_shock() {
        let (phases, p) = params();
        let c = composite(&phases, 0.1);
        let w = wave(FrontKind::One, -0.2, 1.0, 1, c.right, 3.0);
        let s = snapshot(&[c, w], &p, 0.0);
        assert!((s.l - (p.xi * 0.2 + p.k_np * 0.1)).abs() < 1e-14);
        assert!((s.v - p.xi * 0.2).abs() < 1e-14);
        assert!((s.f - (s.l + p.k * p.delta2 * p.xi * 0.2)).abs() < 1e-14);
        assert_eq!(s.q, p.delta2 * s.v);
    }

    #[test]
    fn receding_waves_do_not_approach() {
        let (phases, p) = params();
        let c = composite(&phases, 0.0);
        let w3 = wave(FrontKind::Three, 0.2, 1.0, 1, c.right, 3.0);
        let left = eos::unapply_wave(c.left, Family::One, 0.1, 1.0);
        let w1 = wave(FrontKind::One, 0.1, -1.0, 1, left, 1.0);
        let s = snapshot(&[w1, c, w3], &p, 0.0);
        assert_eq!(s.v, 0.0);
        assert!((s.lbar - 0.3).abs() < 1e-15);
        assert!((half_tv_log_p(&[w1, c, w3], &phases) - s.lbar).abs() < 1e-12);
    }

    #[test]
    fn ledger_sums_match_physical_parts() {
        let (phases, p) = params();
        let c = composite(&phases, 0.0);
        let w1 = wave(FrontKind::One, -0.2, 1.0, 1, c.right, 3.0);
        let w2 = wave(FrontKind::One, 0.05, 2.0, 2, w1.right, 3.0);
        let fronts = [c, w1, w2];
        let ledger = GenerationLedger::new(&fronts, &p);
        let s = snapshot(&fronts, &p, 0.0);
        let sum_f: f64 = ledger.f_values().iter().sum();
        assert!((sum_f - s.f).abs() < 1e-12);
        assert!((ledger.tail(2) - (0.05 + p.k * p.delta2 * 0.05)).abs() < 1e-14);
        assert_eq!(check_tail_decay(&ledger).len(), 1);
    }

    #[test]
    fn generation_law_bookkeeping() {
        let delta = GenerationDelta { before: vec![1.0, 0.0], after: vec![0.9, 0.01], delta: vec![-0.1, 0.01] };
        let checks = check_generation_laws(&delta, Classification::Composite { h: 1 }, true, 0.5);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
        let bad = GenerationDelta { before: vec![1.0, 0.0], after: vec![0.9, 0.2], delta: vec![-0.1, 0.2] };
        let checks = check_generation_laws(&bad, Classification::Composite { h: 1 }, true, 0.5);
        assert!(checks.iter().any(|c| !c.holds));
        let cross = check_generation_laws(&delta, Classification::Crossing, false, 0.5);
        assert!(cross.iter().all(|c| !c.holds));
        let strong = check_strengthened_decrease(&delta, Classification::Composite { h: 1 }, 0.5).unwrap();
        assert!(strong.holds);
    }
}
