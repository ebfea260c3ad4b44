//! Event-driven front tracking.
//!
//! Fronts move with constant speed between collisions. Each collision of two
//! adjacent fronts is resolved by a Riemann solver; collisions with the
//! composite wave at `x = 0` use the accurate pseudo solver when the incoming
//! strength is at least `ρ` and the simplified one otherwise.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use crate::eos::{self, apply_wave, unapply_wave, Family, PhasePair, State, NULL_WAVE};
use crate::error::{Error, Result};
use crate::functionals::{self, FunctionalSnapshot, GenerationLedger, LawCheck, LAW_TOL};
use crate::initial::StepProfile;
use crate::params::ParameterSet;
use crate::riemann::{solve_lax, solve_pseudo_accurate, solve_pseudo_simplified};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontKind {
    One,
    Three,
    Composite,
}

impl FrontKind {
    pub fn family(self) -> Option<Family> {
        match self {
            FrontKind::One => Some(Family::One),
            FrontKind::Three => Some(Family::Three),
            FrontKind::Composite => None,
        }
    }

    pub fn of(family: Family) -> Self {
        match family {
            Family::One => FrontKind::One,
            Family::Three => FrontKind::Three,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FrontKind::One => "1",
            FrontKind::Three => "3",
            FrontKind::Composite => "composite",
        }
    }
}

/// A moving discontinuity. `position` is the location at `t_anchor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Front {
    pub id: u64,
    pub kind: FrontKind,
    /// Wave strength, or the composite strength `δ₂,₀` for the composite.
    pub strength: f64,
    pub position: f64,
    pub t_anchor: f64,
    pub speed: f64,
    pub left: State,
    pub right: State,
    pub order: u32,
}

impl Front {
    pub fn x_at(&self, t: f64) -> f64 {
        self.position + self.speed * (t - self.t_anchor)
    }

    pub fn is_composite(&self) -> bool {
        self.kind == FrontKind::Composite
    }

    fn wave(kind: FrontKind, strength: f64, left: State, right: State, speed: f64, order: u32) -> Self {
        Front { id: 0, kind, strength, position: 0.0, t_anchor: 0.0, speed, left, right, order }
    }
}

/// Speed of a single wave front: characteristic speed of the right state for
/// rarefactions, the Rankine–Hugoniot speed for shocks.
pub fn wave_speed(family: Family, strength: f64, left: State, right: State, a: f64) -> Result<f64> {
    if strength >= 0.0 {
        eos::family_char_speed(family, right.v, a)
    } else {
        eos::shock_speed(family, left.v, right.v, a)
    }
}

fn fan(family: Family, eps: f64, pieces: usize, left: State, right: State, a: f64) -> Result<Vec<Front>> {
    let step = eps / pieces as f64;
    let mut out = Vec::with_capacity(pieces);
    let mut state = left;
    for i in 0..pieces {
        let next = if i + 1 == pieces { right } else { apply_wave(state, family, step, a) };
        let speed = eos::family_char_speed(family, next.v, a)?;
        out.push(Front::wave(FrontKind::of(family), step, state, next, speed, 1));
        state = next;
    }
    Ok(out)
}

/// Splits a rarefaction of strength `eps` into `⌊eps/η⌋ + 1` equal fronts.
/// Ids, positions and orders are left for the caller to stamp.
pub fn split_rarefaction(eps: f64, eta: f64, left: State, a: f64, family: Family) -> Result<Vec<Front>> {
    if !(eps > 0.0) {
        return Err(Error::Domain { what: "rarefaction strength", value: eps });
    }
    if !(eta > 0.0) {
        return Err(Error::Domain { what: "rarefaction quantum", value: eta });
    }
    let pieces = (eps / eta).floor() as usize + 1;
    fan(family, eps, pieces, left, apply_wave(left, family, eps, a), a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    SameFamily,
    CrossFamily,
    CompositeAccurate,
    CompositeSimplified,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::SameFamily => "same_family",
            EventKind::CrossFamily => "cross_family",
            EventKind::CompositeAccurate => "composite_accurate",
            EventKind::CompositeSimplified => "composite_simplified",
        }
    }
}

/// Which generation set an event belongs to: `I_h` (with `𝒯_{h,ℓ}` when
/// `ℓ < h`) for same-family collisions, `J_h` at the composite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "set", rename_all = "snake_case")]
pub enum Classification {
    Crossing,
    SameFamily { h: u32, l: u32 },
    Composite { h: u32 },
}

impl Classification {
    pub fn order(self) -> Option<u32> {
        match self {
            Classification::Crossing => None,
            Classification::SameFamily { h, .. } | Classification::Composite { h } => Some(h),
        }
    }

    pub fn label(self) -> String {
        match self {
            Classification::Crossing => "crossing".into(),
            Classification::SameFamily { h, l } if l < h => format!("I_{h};T_{h},{l}"),
            Classification::SameFamily { h, .. } => format!("I_{h}"),
            Classification::Composite { h } => format!("J_{h}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveRef {
    pub id: u64,
    pub kind: FrontKind,
    pub strength: f64,
    pub order: u32,
}

impl From<&Front> for WaveRef {
    fn from(f: &Front) -> Self {
        WaveRef { id: f.id, kind: f.kind, strength: f.strength, order: f.order }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub index: usize,
    pub time: f64,
    pub x: f64,
    pub kind: EventKind,
    pub incoming: [WaveRef; 2],
    pub outgoing: Vec<WaveRef>,
    pub classification: Classification,
    /// Solver defect, or the strength drift for crossings.
    pub residual: f64,
}

/// Outgoing fronts of one collision before ids are assigned.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolution {
    pub fronts: Vec<Front>,
    pub kind: EventKind,
    pub classification: Classification,
    pub residual: f64,
    /// `|Δδ₂,₀|` added to `L⁰` by the simplified solver.
    pub production: f64,
    pub production_order: u32,
    pub reflected: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolveContext {
    pub phases: PhasePair,
    pub eta: f64,
    pub rho: f64,
}

struct Piece {
    kind: FrontKind,
    strength: f64,
    left: State,
    right: State,
    order: u32,
    split: bool,
}

fn piece(kind: FrontKind, strength: f64, left: State, right: State, order: u32, split: bool) -> Piece {
    Piece { kind, strength, left, right, order, split }
}

/// Drops null waves, makes neighbouring states agree exactly and builds the
/// fronts anchored at `(x, t)`.
fn assemble(mut pieces: Vec<Piece>, outer_left: State, outer_right: State, ctx: &ResolveContext, x: f64, t: f64) -> Result<Vec<Front>> {
    pieces.retain(|p| p.kind == FrontKind::Composite || p.strength.abs() >= NULL_WAVE);
    let n = pieces.len();
    for i in 0..n {
        pieces[i].left = if i == 0 { outer_left } else { pieces[i - 1].right };
        if i + 1 == n {
            pieces[i].right = outer_right;
        }
    }
    let mut out = Vec::new();
    for p in pieces {
        let mut fronts = match p.kind.family() {
            None => vec![Front::wave(FrontKind::Composite, p.strength, p.left, p.right, 0.0, p.order)],
            Some(family) => {
                let a = ctx.phases.sound(p.left.lam);
                if p.strength > 0.0 && p.split {
                    let pieces = (p.strength / ctx.eta).floor() as usize + 1;
                    fan(family, p.strength, pieces, p.left, p.right, a)?
                } else {
                    let speed = wave_speed(family, p.strength, p.left, p.right, a)?;
                    vec![Front::wave(p.kind, p.strength, p.left, p.right, speed, p.order)]
                }
            }
        };
        for f in fronts.iter_mut() {
            f.order = p.order;
            f.position = if p.kind == FrontKind::Composite { 0.0 } else { x };
            f.t_anchor = t;
        }
        out.extend(fronts);
    }
    Ok(out)
}

/// Resolves the collision of the adjacent fronts `a` (left) and `b` (right)
/// at time `t`.
pub fn resolve_event(a: &Front, b: &Front, t: f64, ctx: &ResolveContext) -> Result<Resolution> {
    let phases = &ctx.phases;
    let (outer_l, outer_r) = (a.left, b.right);
    match (a.kind, b.kind) {
        (FrontKind::Composite, FrontKind::One) => resolve_composite(b, a, Family::One, t, ctx),
        (FrontKind::Three, FrontKind::Composite) => resolve_composite(a, b, Family::Three, t, ctx),
        (FrontKind::Three, FrontKind::One) => {
            let x = 0.5 * (a.x_at(t) + b.x_at(t));
            let snd = phases.sound(outer_l.lam);
            let fan = solve_lax(outer_l, outer_r, snd, snd)?;
            let drift = (fan.eps1 - b.strength).abs().max((fan.eps3 - a.strength).abs());
            // The two waves cross unchanged; carry the exact incoming strengths.
            let mid = apply_wave(outer_l, Family::One, b.strength, snd);
            let pieces = vec![
                piece(FrontKind::One, b.strength, outer_l, mid, b.order, false),
                piece(FrontKind::Three, a.strength, mid, outer_r, a.order, false),
            ];
            Ok(Resolution {
                fronts: assemble(pieces, outer_l, outer_r, ctx, x, t)?,
                kind: EventKind::CrossFamily,
                classification: Classification::Crossing,
                residual: drift.max(fan.max_residual()),
                production: 0.0,
                production_order: 0,
                reflected: false,
            })
        }
        (fa, fb) if fa == fb && fa != FrontKind::Composite => {
            let family = fa.family().expect("physical");
            let x = 0.5 * (a.x_at(t) + b.x_at(t));
            let snd = phases.sound(outer_l.lam);
            let fan = solve_lax(outer_l, outer_r, snd, snd)?;
            let (h, l) = (a.order.max(b.order), a.order.min(b.order));
            let prolong = a.strength > 0.0 || b.strength > 0.0;
            let (order1, split1, order3, split3) = match family {
                Family::One => (l, !prolong, h + 1, true),
                Family::Three => (h + 1, true, l, !prolong),
            };
            let pieces = vec![
                piece(FrontKind::One, fan.eps1, outer_l, fan.mid_left, order1, split1),
                piece(FrontKind::Three, fan.eps3, fan.mid_left, outer_r, order3, split3),
            ];
            let fronts = assemble(pieces, outer_l, outer_r, ctx, x, t)?;
            let reflected = fronts.iter().any(|f| f.order == h + 1);
            Ok(Resolution {
                fronts,
                kind: EventKind::SameFamily,
                classification: Classification::SameFamily { h, l },
                residual: fan.max_residual(),
                production: 0.0,
                production_order: 0,
                reflected,
            })
        }
        _ => Err(Error::InvalidData(format!(
            "fronts {} ({}) and {} ({}) do not converge",
            a.id,
            a.kind.label(),
            b.id,
            b.kind.label()
        ))),
    }
}

fn resolve_composite(wave: &Front, comp: &Front, family: Family, t: f64, ctx: &ResolveContext) -> Result<Resolution> {
    let phases = &ctx.phases;
    let (outer_l, outer_r) = match family {
        Family::One => (comp.left, wave.right),
        Family::Three => (wave.left, comp.right),
    };
    let delta = wave.strength;
    let h = wave.order;
    let d20 = comp.strength;
    if delta.abs() >= ctx.rho {
        let fan = solve_pseudo_accurate(outer_l, outer_r, d20, phases)?;
        let prolong = delta > 0.0;
        let (order1, split1, order3, split3) = match family {
            Family::One => (h, !prolong, h + 1, true),
            Family::Three => (h + 1, true, h, !prolong),
        };
        let pieces = vec![
            piece(FrontKind::One, fan.eps1, outer_l, fan.mid_left, order1, split1),
            piece(FrontKind::Composite, d20, fan.mid_left, fan.mid_right, comp.order, false),
            piece(FrontKind::Three, fan.eps3, fan.mid_right, outer_r, order3, split3),
        ];
        let fronts = assemble(pieces, outer_l, outer_r, ctx, 0.0, t)?;
        let reflected = fronts.iter().any(|f| !f.is_composite() && f.order == h + 1);
        Ok(Resolution {
            fronts,
            kind: EventKind::CompositeAccurate,
            classification: Classification::Composite { h },
            residual: fan.max_residual(),
            production: 0.0,
            production_order: 0,
            reflected,
        })
    } else {
        let updated = solve_pseudo_simplified(d20, family, delta, phases);
        let pieces = match family {
            Family::One => {
                let q = apply_wave(outer_l, Family::One, delta, phases.a_l);
                vec![
                    piece(FrontKind::One, delta, outer_l, q, h, false),
                    piece(FrontKind::Composite, updated, q, outer_r, h + 1, false),
                ]
            }
            Family::Three => {
                let q = unapply_wave(outer_r, Family::Three, delta, phases.a_r);
                vec![
                    piece(FrontKind::Composite, updated, outer_l, q, h + 1, false),
                    piece(FrontKind::Three, delta, q, outer_r, h, false),
                ]
            }
        };
        // The composite must satisfy its jump relation exactly up to rounding.
        let residual = {
            let c = pieces.iter().find(|p| p.kind == FrontKind::Composite).expect("composite");
            let across = eos::apply_composite(c.left, phases, updated)?;
            ((across.u - c.right.u).abs()).max((across.v / c.right.v - 1.0).abs())
        };
        let production = (updated - d20).abs();
        Ok(Resolution {
            fronts: assemble(pieces, outer_l, outer_r, ctx, 0.0, t)?,
            kind: EventKind::CompositeSimplified,
            classification: Classification::Composite { h },
            residual,
            production,
            production_order: h + 1,
            reflected: production > 0.0,
        })
    }
}

/// Piecewise-constant initial profile resolved into fronts at `t = 0`. Every
/// wave and the composite start with order 1.
pub fn approximate_initial_data(profile: &StepProfile, phases: &PhasePair, eta: f64) -> Result<Vec<Front>> {
    if !(eta > 0.0) {
        return Err(Error::Domain { what: "rarefaction quantum", value: eta });
    }
    let ctx = ResolveContext { phases: *phases, eta, rho: f64::INFINITY };
    let mut fronts = Vec::new();
    for (i, &x) in profile.breaks.iter().enumerate() {
        let left = profile.state(i, phases);
        let right = profile.state(i + 1, phases);
        left.validate()?;
        right.validate()?;
        let a_l = phases.sound(left.lam);
        let a_r = phases.sound(right.lam);
        let fan = solve_lax(left, right, a_l, a_r)?;
        let mut pieces = vec![piece(FrontKind::One, fan.eps1, left, fan.mid_left, 1, true)];
        if x == 0.0 {
            pieces.push(piece(FrontKind::Composite, 0.0, fan.mid_left, fan.mid_right, 1, false));
        }
        pieces.push(piece(FrontKind::Three, fan.eps3, fan.mid_right, right, 1, true));
        fronts.extend(assemble(pieces, left, right, &ctx, x, 0.0)?);
    }
    for (id, f) in fronts.iter_mut().enumerate() {
        f.id = id as u64;
    }
    Ok(fronts)
}

/// Collision time of `a` (left) and `b` (right) after `t`, if they converge.
pub fn collision_time(a: &Front, b: &Front, t: f64) -> Option<f64> {
    if !(a.speed > b.speed) {
        return None;
    }
    let gap = (b.x_at(t) - a.x_at(t)).max(0.0);
    Some(t + gap / (a.speed - b.speed))
}

/// Earliest collision among adjacent pairs of an ordered front list, as
/// `(time, left index)`. Ties go to the leftmost pair.
pub fn next_event(fronts: &[Front], t: f64) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for i in 0..fronts.len().saturating_sub(1) {
        if let Some(tc) = collision_time(&fronts[i], &fronts[i + 1], t) {
            if best.is_none_or(|(bt, _)| tc < bt) {
                best = Some((tc, i));
            }
        }
    }
    best
}

const NIL: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Slot {
    front: Front,
    prev: usize,
    next: usize,
    alive: bool,
    epoch: u64,
}

/// Doubly linked front list on a slab; slots are recycled.
#[derive(Debug, Clone, Default)]
struct FrontList {
    slots: Vec<Slot>,
    free: Vec<usize>,
    head: usize,
    epoch: u64,
}

impl FrontList {
    fn new(fronts: Vec<Front>) -> Self {
        let mut list = FrontList { head: NIL, ..Default::default() };
        let mut prev = NIL;
        for f in fronts {
            let s = list.alloc(f);
            list.slots[s].prev = prev;
            if prev == NIL {
                list.head = s;
            } else {
                list.slots[prev].next = s;
            }
            prev = s;
        }
        list
    }

    fn alloc(&mut self, front: Front) -> usize {
        self.epoch += 1;
        let slot = Slot { front, prev: NIL, next: NIL, alive: true, epoch: self.epoch };
        match self.free.pop() {
            Some(i) => {
                self.slots[i] = slot;
                i
            }
            None => {
                self.slots.push(slot);
                self.slots.len() - 1
            }
        }
    }

    fn touch(&mut self, s: usize) {
        self.epoch += 1;
        self.slots[s].epoch = self.epoch;
    }

    fn next(&self, s: usize) -> Option<usize> {
        let n = self.slots[s].next;
        (n != NIL).then_some(n)
    }

    fn prev(&self, s: usize) -> Option<usize> {
        let p = self.slots[s].prev;
        (p != NIL).then_some(p)
    }

    fn iter(&self) -> impl Iterator<Item = &Front> {
        let mut cur = self.head;
        std::iter::from_fn(move || {
            if cur == NIL {
                return None;
            }
            let slot = &self.slots[cur];
            cur = slot.next;
            Some(&slot.front)
        })
    }

    fn slots_in_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.head;
        while cur != NIL {
            out.push(cur);
            cur = self.slots[cur].next;
        }
        out
    }

    /// Replaces the adjacent slots `first`, `last` by `fronts`; returns the new slots.
    fn splice(&mut self, first: usize, last: usize, fronts: Vec<Front>) -> Vec<usize> {
        let before = self.slots[first].prev;
        let after = self.slots[last].next;
        for s in [first, last] {
            self.slots[s].alive = false;
            self.free.push(s);
        }
        let mut created = Vec::with_capacity(fronts.len());
        let mut prev = before;
        for f in fronts {
            let s = self.alloc(f);
            self.slots[s].prev = prev;
            if prev == NIL {
                self.head = s;
            } else {
                self.slots[prev].next = s;
            }
            prev = s;
            created.push(s);
        }
        if prev == NIL {
            self.head = after;
        } else {
            self.slots[prev].next = after;
        }
        if after != NIL {
            self.slots[after].prev = prev;
        }
        created
    }
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    seq: u64,
    left: usize,
    right: usize,
    left_epoch: u64,
    right_epoch: u64,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed so that the max-heap pops the earliest event first.
    fn cmp(&self, other: &Self) -> Ordering {
        other.time.total_cmp(&self.time).then_with(|| other.seq.cmp(&self.seq))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonitorMode {
    /// Abort the run at the first violated law.
    Strict,
    /// Record violations and keep going.
    Warn,
    Off,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub nu: u32,
    pub eta: f64,
    pub rho: f64,
    pub t_max: f64,
    pub params: ParameterSet,
    pub phases: PhasePair,
    pub initial: StepProfile,
    pub speed_jitter: f64,
    pub max_events: usize,
    pub monitor: MonitorMode,
    pub sample_times: Vec<f64>,
}

pub const DEFAULT_MAX_EVENTS: usize = 10_000_000;
pub const DEFAULT_JITTER: f64 = 1e-9;

impl SimulationConfig {
    fn validate(&self) -> Result<()> {
        for (what, value) in [("eta", self.eta), ("rho", self.rho), ("t_max", self.t_max)] {
            if !(value > 0.0) {
                return Err(Error::Domain { what, value });
            }
        }
        if !(self.speed_jitter >= 0.0) {
            return Err(Error::Domain { what: "speed jitter", value: self.speed_jitter });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub event: usize,
    pub time: f64,
    pub check: LawCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub id: u64,
    pub kind: FrontKind,
    pub order: u32,
    pub strength: f64,
    pub speed: f64,
    pub birth_t: f64,
    pub birth_x: f64,
    pub death_t: Option<f64>,
    pub death_x: Option<f64>,
}

/// Piecewise-constant profile: `states[i]` holds between `x[i-1]` and `x[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub t: f64,
    pub x: Vec<f64>,
    pub states: Vec<State>,
}

impl Profile {
    fn from_fronts<'a>(fronts: impl Iterator<Item = &'a Front>, t: f64) -> Self {
        let mut x = Vec::new();
        let mut states = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for f in fronts {
            if states.is_empty() {
                states.push(f.left);
            }
            // Guard against rounding that would reorder coincident fronts.
            last = f.x_at(t).max(last);
            x.push(last);
            states.push(f.right);
        }
        Profile { t, x, states }
    }

    pub fn eval(&self, x: f64) -> State {
        self.states[self.x.partition_point(|&b| b <= x)]
    }
}

/// `∫ |v₁ - v₂| + |u₁ - u₂| dx`, exact for piecewise-constant profiles.
pub fn l1_distance(p: &Profile, q: &Profile) -> f64 {
    let mut nodes: Vec<f64> = p.x.iter().chain(&q.x).copied().collect();
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    let mut total = 0.0;
    for w in nodes.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let (a, b) = (p.eval(mid), q.eval(mid));
        total += ((a.v - b.v).abs() + (a.u - b.u).abs()) * (w[1] - w[0]);
    }
    let far = |side: f64| {
        let (a, b) = (p.eval(side), q.eval(side));
        (a.v - b.v).abs() + (a.u - b.u).abs()
    };
    if far(f64::NEG_INFINITY) > 0.0 || far(f64::INFINITY) > 0.0 {
        return f64::INFINITY;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub events: usize,
    pub final_time: f64,
    pub initial_fronts: usize,
    pub final_fronts: usize,
    pub max_fronts: usize,
    pub max_order: u32,
    pub f_initial: f64,
    pub l_initial: f64,
    pub lbar_initial: f64,
    pub f_final: f64,
    pub max_composite_abs: f64,
    pub sup_tv: f64,
    pub sup_tv_event: usize,
    pub initial_tv: f64,
    pub cumulative_increase: f64,
    pub max_residual: f64,
    pub max_strength: f64,
    pub accurate_events: usize,
    pub simplified_events: usize,
    pub covered: bool,
    /// Events breaking `ΔF ≤ -(1-μ)[ΔF_h]_-` without the lower-order term,
    /// split by whether a lower-order wave took part.
    pub literal_decrease_failures: usize,
    pub literal_decrease_failures_mixed_orders: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<InteractionRecord>,
    pub snapshots: Vec<FunctionalSnapshot>,
    pub initial_fronts: Vec<Front>,
    pub final_fronts: Vec<Front>,
    pub timeline: Vec<TimelineEntry>,
    pub violations: Vec<Violation>,
    pub profiles: Vec<Profile>,
    pub ledger: GenerationLedger,
    pub stats: RunStats,
}

struct Engine<'a> {
    cfg: &'a SimulationConfig,
    list: FrontList,
    heap: BinaryHeap<Event>,
    seq: u64,
}

impl<'a> Engine<'a> {
    fn schedule(&mut self, left: usize, right: usize, t: f64) {
        let (a, b) = (&self.list.slots[left], &self.list.slots[right]);
        if let Some(time) = collision_time(&a.front, &b.front, t) {
            self.seq += 1;
            self.heap.push(Event {
                time,
                seq: self.seq,
                left,
                right,
                left_epoch: a.epoch,
                right_epoch: b.epoch,
            });
        }
    }

    fn valid(&self, e: &Event) -> bool {
        let (a, b) = (&self.list.slots[e.left], &self.list.slots[e.right]);
        a.alive && b.alive && a.epoch == e.left_epoch && b.epoch == e.right_epoch && a.next == e.right
    }

    fn pair_time(&self, left: Option<usize>, right: Option<usize>, t: f64) -> Option<f64> {
        let (l, r) = (left?, right?);
        collision_time(&self.list.slots[l].front, &self.list.slots[r].front, t)
    }

    fn close(t1: f64, t2: f64) -> bool {
        (t1 - t2).abs() <= 1e-12 * t1.abs().max(1.0)
    }

    /// Perturbs speeds so that no three fronts meet at once near slot `s`.
    fn deconflict(&mut self, s: usize, t: f64) -> Vec<usize> {
        let jitter = self.cfg.speed_jitter;
        if jitter == 0.0 || !self.list.slots[s].alive {
            return Vec::new();
        }
        let prev = self.list.prev(s);
        let next = self.list.next(s);
        let mut touched = Vec::new();

        // Both neighbours hit `s` at once.
        if let (Some(tl), Some(tr)) = (self.pair_time(prev, Some(s), t), self.pair_time(Some(s), next, t)) {
            if Self::close(tl, tr) && !self.list.slots[s].front.is_composite() {
                self.nudge(s, 1.0, t);
                touched.push(s);
            }
        }
        // `s` hits a neighbour that meets its other neighbour at the same time.
        for dir in [-1.0, 1.0] {
            let (g, e) = if dir > 0.0 {
                let g = self.list.next(s);
                (g, g.and_then(|g| self.list.next(g)))
            } else {
                let g = self.list.prev(s);
                (g, g.and_then(|g| self.list.prev(g)))
            };
            let Some(g) = g else { continue };
            let t_sg = if dir > 0.0 { self.pair_time(Some(s), Some(g), t) } else { self.pair_time(Some(g), Some(s), t) };
            let t_ge = if dir > 0.0 { self.pair_time(Some(g), e, t) } else { self.pair_time(e, Some(g), t) };
            if let (Some(t1), Some(t2)) = (t_sg, t_ge) {
                if Self::close(t1, t2) {
                    if !self.list.slots[s].front.is_composite() {
                        // Delay the collision of `s` with `g`.
                        self.nudge(s, -dir, t);
                        touched.push(s);
                    } else if !self.list.slots[g].front.is_composite() {
                        self.nudge(g, dir, t);
                        touched.push(g);
                    }
                }
            }
        }
        touched
    }

    /// Changes the speed of slot `s` by a relative `jitter` in direction `sign`.
    fn nudge(&mut self, s: usize, sign: f64, t: f64) {
        let jitter = self.cfg.speed_jitter;
        let f = &mut self.list.slots[s].front;
        f.position = f.x_at(t);
        f.t_anchor = t;
        f.speed += sign * jitter * f.speed.abs().max(1e-300);
        self.list.touch(s);
    }

    fn schedule_around(&mut self, slots: &[usize], t: f64) {
        let mut pairs = Vec::new();
        for &s in slots {
            if let Some(p) = self.list.prev(s) {
                pairs.push((p, s));
            }
            if let Some(n) = self.list.next(s) {
                pairs.push((s, n));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        for (l, r) in pairs {
            self.schedule(l, r, t);
        }
    }
}

fn describe_recent(records: &[InteractionRecord]) -> String {
    let start = records.len().saturating_sub(10);
    records[start..]
        .iter()
        .map(|r| {
            format!(
                "#{} t={:.6e} x={:.6e} {} in=[{}:{:.3e}/{}, {}:{:.3e}/{}]",
                r.index,
                r.time,
                r.x,
                r.kind.label(),
                r.incoming[0].kind.label(),
                r.incoming[0].strength,
                r.incoming[0].order,
                r.incoming[1].kind.label(),
                r.incoming[1].strength,
                r.incoming[1].order
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Advances the scheme event by event up to `t_max`, monitoring the
/// functional laws after every event.
pub fn run(cfg: &SimulationConfig) -> Result<Trajectory> {
    cfg.validate()?;
    let params = &cfg.params;
    let ctx = ResolveContext { phases: cfg.phases, eta: cfg.eta, rho: cfg.rho };
    let initial = approximate_initial_data(&cfg.initial, &cfg.phases, cfg.eta)?;
    let mut next_id = initial.len() as u64;

    let mut engine = Engine { cfg, list: FrontList::new(initial.clone()), heap: BinaryHeap::new(), seq: 0 };
    let all = engine.list.slots_in_order();
    for &s in &all {
        engine.deconflict(s, 0.0);
    }
    for w in all.windows(2) {
        engine.schedule(w[0], w[1], 0.0);
    }

    let mut timeline: Vec<TimelineEntry> = Vec::new();
    let mut timeline_index: HashMap<u64, usize> = HashMap::new();
    let birth = |f: &Front, t: f64, timeline: &mut Vec<TimelineEntry>, timeline_index: &mut HashMap<u64, usize>| {
        timeline_index.insert(f.id, timeline.len());
        timeline.push(TimelineEntry {
            id: f.id,
            kind: f.kind,
            order: f.order,
            strength: f.strength,
            speed: f.speed,
            birth_t: t,
            birth_x: f.x_at(t),
            death_t: None,
            death_x: None,
        });
    };
    for f in engine.list.iter() {
        birth(f, 0.0, &mut timeline, &mut timeline_index);
    }

    let fronts0: Vec<Front> = engine.list.iter().copied().collect();
    let snap0 = functionals::snapshot(&fronts0, params, 0.0);
    let mut ledger = GenerationLedger::new(&fronts0, params);
    let covered = params.covers(snap0.lbar);
    let initial_tv = snap0.tv_vu;
    let mut stats = RunStats {
        events: 0,
        final_time: cfg.t_max,
        initial_fronts: fronts0.len(),
        final_fronts: fronts0.len(),
        max_fronts: fronts0.len(),
        max_order: snap0.max_order,
        f_initial: snap0.f,
        l_initial: snap0.l,
        lbar_initial: snap0.lbar,
        f_final: snap0.f,
        max_composite_abs: snap0.composite_abs,
        sup_tv: initial_tv,
        sup_tv_event: 0,
        initial_tv,
        cumulative_increase: 0.0,
        max_residual: 0.0,
        max_strength: fronts0.iter().filter(|f| !f.is_composite()).map(|f| f.strength.abs()).fold(0.0, f64::max),
        accurate_events: 0,
        simplified_events: 0,
        covered,
        literal_decrease_failures: 0,
        literal_decrease_failures_mixed_orders: 0,
    };

    let mut records: Vec<InteractionRecord> = Vec::new();
    let mut snapshots = vec![snap0];
    let mut violations = Vec::new();
    let mut profiles = Vec::new();
    let mut samples: Vec<f64> = cfg.sample_times.iter().copied().filter(|&s| s >= 0.0 && s <= cfg.t_max).collect();
    samples.sort_by(f64::total_cmp);
    let mut sample_iter = samples.into_iter().peekable();

    let report = |check: LawCheck, event: usize, time: f64, records: &[InteractionRecord], violations: &mut Vec<Violation>| -> Result<()> {
        if check.holds {
            return Ok(());
        }
        match cfg.monitor {
            MonitorMode::Strict => Err(Error::Monitor {
                time,
                message: format!(
                    "{} at order {}: {:.6e} > {:.6e}; recent events: {}",
                    check.law,
                    check.order,
                    check.lhs,
                    check.rhs,
                    describe_recent(records)
                ),
            }),
            _ => {
                violations.push(Violation { event, time, check });
                Ok(())
            }
        }
    };

    let m_bound = params.m + LAW_TOL;
    while let Some(ev) = engine.heap.pop() {
        if !engine.valid(&ev) {
            continue;
        }
        let t = ev.time;
        if t > cfg.t_max {
            break;
        }
        while let Some(&s) = sample_iter.peek() {
            if s >= t {
                break;
            }
            profiles.push(Profile::from_fronts(engine.list.iter(), s));
            sample_iter.next();
        }
        if stats.events >= cfg.max_events {
            return Err(Error::EventBudget(cfg.max_events));
        }
        stats.events += 1;
        let index = stats.events;

        let a = engine.list.slots[ev.left].front;
        let b = engine.list.slots[ev.right].front;
        let mut res = resolve_event(&a, &b, t, &ctx)?;
        for f in res.fronts.iter_mut() {
            f.id = next_id;
            next_id += 1;
        }
        for f in [&a, &b] {
            if let Some(&i) = timeline_index.get(&f.id) {
                timeline[i].death_t = Some(t);
                timeline[i].death_x = Some(f.x_at(t));
            }
        }
        match res.kind {
            EventKind::CompositeAccurate => stats.accurate_events += 1,
            EventKind::CompositeSimplified => stats.simplified_events += 1,
            _ => {}
        }
        let record = InteractionRecord {
            index,
            time: t,
            x: if a.is_composite() || b.is_composite() { 0.0 } else { 0.5 * (a.x_at(t) + b.x_at(t)) },
            kind: res.kind,
            incoming: [WaveRef::from(&a), WaveRef::from(&b)],
            outgoing: res.fronts.iter().map(WaveRef::from).collect(),
            classification: res.classification,
            residual: res.residual,
        };
        stats.max_residual = stats.max_residual.max(res.residual);

        let created = engine.list.splice(ev.left, ev.right, std::mem::take(&mut res.fronts));
        let mut touched = created.clone();
        for &s in &created {
            touched.extend(engine.deconflict(s, t));
        }
        if created.is_empty() {
            // Full cancellation: the outer neighbours become adjacent.
            let before = engine.list.slots[ev.left].prev;
            if before != NIL {
                touched.push(before);
            }
        }
        engine.schedule_around(&touched, t);
        for &s in &created {
            let f = engine.list.slots[s].front;
            birth(&f, t, &mut timeline, &mut timeline_index);
        }
        // Nudged neighbours keep their identity; refresh their drawn speed.
        for &s in &touched {
            let f = &engine.list.slots[s].front;
            if let Some(&i) = timeline_index.get(&f.id) {
                timeline[i].speed = f.speed;
            }
        }
        records.push(record);

        let fronts: Vec<Front> = engine.list.iter().copied().collect();
        let mut snap = functionals::snapshot(&fronts, params, t);
        let delta = ledger.update(&fronts, res.classification, t, res.production, res.production_order);
        snap.tail2 = ledger.tail(2);
        let prev = *snapshots.last().expect("initial snapshot");
        snapshots.push(snap);

        stats.final_fronts = fronts.len();
        stats.max_fronts = stats.max_fronts.max(fronts.len());
        stats.max_order = stats.max_order.max(snap.max_order);
        stats.f_final = snap.f;
        stats.max_composite_abs = stats.max_composite_abs.max(snap.composite_abs);
        let df = snap.f - prev.f;
        stats.cumulative_increase += df.max(0.0);
        let tv = snap.tv_vu;
        if tv > stats.sup_tv {
            stats.sup_tv = tv;
            stats.sup_tv_event = index;
        }
        for f in fronts.iter().filter(|f| !f.is_composite()) {
            stats.max_strength = stats.max_strength.max(f.strength.abs());
        }

        if let Some(c) = functionals::check_strengthened_decrease_literal(&delta, res.classification, params.mu) {
            if !c.holds {
                stats.literal_decrease_failures += 1;
                if matches!(res.classification, Classification::SameFamily { h, l } if l < h) {
                    stats.literal_decrease_failures_mixed_orders += 1;
                }
            }
        }
        if cfg.monitor == MonitorMode::Off {
            continue;
        }
        let mut checks = vec![
            LawCheck { law: "F non-increasing".into(), order: 0, lhs: df, rhs: 0.0, holds: df <= LAW_TOL },
            LawCheck {
                law: "cumulative F increase".into(),
                order: 0,
                lhs: stats.cumulative_increase,
                rhs: 1e-7,
                holds: stats.cumulative_increase <= 1e-7,
            },
        ];
        checks.extend(functionals::check_generation_laws(&delta, res.classification, res.reflected, params.mu));
        checks.extend(functionals::check_strengthened_decrease(&delta, res.classification, params.mu));
        checks.extend(functionals::check_tail_decay(&ledger));
        if covered {
            checks.push(LawCheck { law: "F <= m".into(), order: 0, lhs: snap.f, rhs: params.m, holds: snap.f <= m_bound });
            checks.push(LawCheck {
                law: "strengths <= m".into(),
                order: 0,
                lhs: stats.max_strength,
                rhs: params.m,
                holds: stats.max_strength <= m_bound,
            });
        }
        for check in checks {
            report(check, index, t, &records, &mut violations)?;
        }
    }
    for s in sample_iter {
        profiles.push(Profile::from_fronts(engine.list.iter(), s));
    }

    let final_fronts: Vec<Front> = engine.list.iter().copied().collect();
    Ok(Trajectory { records, snapshots, initial_fronts: fronts0, final_fronts, timeline, violations, profiles, ledger, stats })
}

/// Settings from which `η` and `ρ` are derived for a given `ν`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeSettings {
    pub nu: u32,
    /// `η = eta0/ν` unless `eta` is given.
    pub eta0: f64,
    pub eta: Option<f64>,
    pub rho: Option<f64>,
    pub t_max: f64,
    pub speed_jitter: f64,
    pub max_events: usize,
    pub monitor: MonitorMode,
    pub sample_times: Vec<f64>,
    pub max_rho_halvings: u32,
}

impl SchemeSettings {
    pub fn new(nu: u32, t_max: f64) -> Self {
        SchemeSettings {
            nu,
            eta0: 0.5,
            eta: None,
            rho: None,
            t_max,
            speed_jitter: DEFAULT_JITTER,
            max_events: DEFAULT_MAX_EVENTS,
            monitor: MonitorMode::Strict,
            sample_times: Vec::new(),
            max_rho_halvings: 20,
        }
    }

    pub fn eta(&self) -> f64 {
        self.eta.unwrap_or(self.eta0 / self.nu.max(1) as f64)
    }
}

/// Smallest `k` with `μ^{k-1} L(0+) (1 + K|δ₂|) ≤ 1/(2ν)`.
pub fn generation_cutoff(params: &ParameterSet, l_initial: f64, nu: u32) -> u32 {
    let target = 1.0 / (2.0 * nu.max(1) as f64);
    let scale = l_initial * (1.0 + params.k * params.delta2);
    let mut k = 1u32;
    while params.mu.powi(k as i32 - 1) * scale > target && k < 100_000 {
        k += 1;
    }
    k
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoAttempt {
    pub rho: f64,
    pub max_composite_abs: f64,
    pub events: usize,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeOutcome {
    pub trajectory: Trajectory,
    pub nu: u32,
    pub eta: f64,
    pub rho: f64,
    pub cutoff_order: u32,
    pub low_order_fronts: usize,
    pub attempts: Vec<RhoAttempt>,
}

/// Runs the scheme for one `ν`, choosing `ρ` so that the composite strength
/// stays below `1/ν`: a pilot run sizes `ρ` against the number of fronts of
/// order below the cutoff, then `ρ` is halved until the bound holds.
pub fn run_scheme(profile: &StepProfile, phases: &PhasePair, params: &ParameterSet, settings: &SchemeSettings) -> Result<SchemeOutcome> {
    let eta = settings.eta();
    let nu = settings.nu.max(1);
    let bound = 1.0 / nu as f64;
    let make = |rho: f64| SimulationConfig {
        nu,
        eta,
        rho,
        t_max: settings.t_max,
        params: params.clone(),
        phases: *phases,
        initial: profile.clone(),
        speed_jitter: settings.speed_jitter,
        max_events: settings.max_events,
        monitor: settings.monitor,
        sample_times: settings.sample_times.clone(),
    };
    let attempt = |traj: &Trajectory, rho: f64, accepted: bool| RhoAttempt {
        rho,
        max_composite_abs: traj.stats.max_composite_abs,
        events: traj.stats.events,
        accepted,
    };

    if let Some(rho) = settings.rho {
        let trajectory = run(&make(rho))?;
        let ok = trajectory.stats.max_composite_abs <= bound;
        let cutoff = generation_cutoff(params, trajectory.stats.l_initial, nu);
        return Ok(SchemeOutcome {
            attempts: vec![attempt(&trajectory, rho, ok)],
            trajectory,
            nu,
            eta,
            rho,
            cutoff_order: cutoff,
            low_order_fronts: 0,
        });
    }

    let rho0 = eta;
    let pilot = run(&make(rho0))?;
    let cutoff = generation_cutoff(params, pilot.stats.l_initial, nu);
    let low_order = pilot.timeline.iter().filter(|e| e.kind != FrontKind::Composite && e.order < cutoff).count();
    let mut rho = if params.delta2 > 0.0 {
        rho0.min(1.0 / (2.0 * nu as f64 * params.c_o * params.delta2 * low_order.max(1) as f64))
    } else {
        rho0
    };
    let mut attempts = Vec::new();
    let mut current = if rho == rho0 { pilot } else { run(&make(rho))? };
    for _ in 0..=settings.max_rho_halvings {
        let ok = current.stats.max_composite_abs <= bound;
        attempts.push(attempt(&current, rho, ok));
        if ok {
            break;
        }
        rho *= 0.5;
        current = run(&make(rho))?;
    }
    if attempts.last().is_none_or(|a| !a.accepted) {
        attempts.push(attempt(&current, rho, current.stats.max_composite_abs <= bound));
    }
    Ok(SchemeOutcome { trajectory: current, nu, eta, rho, cutoff_order: cutoff, low_order_fronts: low_order, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::choose_parameters;

    fn phases() -> PhasePair {
        PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap()
    }

    fn config(profile: StepProfile, eta: f64, rho: f64, t_max: f64) -> SimulationConfig {
        let ph = phases();
        let tv = profile.combined_variation(&ph).unwrap();
        SimulationConfig {
            nu: 4,
            eta,
            rho,
            t_max,
            params: choose_parameters(&ph, tv.max(1e-3)).unwrap(),
            phases: ph,
            initial: profile,
            speed_jitter: DEFAULT_JITTER,
            max_events: 1_000_000,
            monitor: MonitorMode::Strict,
            sample_times: vec![],
        }
    }

    #[test]
    fn split_examples() {
        let s = State { v: 1.0, u: 0.0, lam: 0.0 };
        let fronts = split_rarefaction(0.25, 0.1, s, 1.0, Family::One).unwrap();
        assert_eq!(fronts.len(), 3);
        assert!(fronts.iter().all(|f| (f.strength - 0.25 / 3.0).abs() < 1e-16));
        let end = apply_wave(s, Family::One, 0.25, 1.0);
        assert_eq!(fronts[2].right, end);
        let mut chained = s;
        for _ in 0..3 {
            chained = apply_wave(chained, Family::One, 0.25 / 3.0, 1.0);
        }
        assert!((chained.v - end.v).abs() < 1e-14 && (chained.u - end.u).abs() < 1e-13);
        assert!(fronts.windows(2).all(|w| w[0].speed < w[1].speed && w[0].right == w[1].left));
        assert_eq!(split_rarefaction(0.1 - 1e-15, 0.1, s, 1.0, Family::Three).unwrap().len(), 1);
        assert!(split_rarefaction(-0.1, 0.1, s, 1.0, Family::One).is_err());
    }

    #[test]
    fn next_event_examples() {
        let s = State { v: 1.0, u: 0.0, lam: 0.0 };
        let mk = |x: f64, speed: f64| Front { id: 0, kind: FrontKind::Three, strength: -0.1, position: x, t_anchor: 0.0, speed, left: s, right: s, order: 1 };
        let (t, i) = next_event(&[mk(-1.0, 1.0), mk(1.0, -1.0)], 0.0).unwrap();
        assert_eq!((t, i), (1.0, 0));
        assert!(next_event(&[mk(-1.0, 1.0), mk(1.0, 1.0), mk(2.0, 1.0)], 0.0).is_none());
    }

    #[test]
    fn uniform_data_has_only_the_composite() {
        let ph = phases();
        let profile = crate::initial::DataSpec::Uniform { p: 1.0, u: 0.0 }.step_profile(&ph).unwrap().unwrap();
        let traj = run(&config(profile, 0.1, 0.1, 10.0)).unwrap();
        assert_eq!(traj.stats.events, 0);
        assert_eq!(traj.final_fronts.len(), 1);
        assert!(traj.final_fronts[0].is_composite());
    }

    #[test]
    fn riemann_data_propagates_without_events() {
        let profile = StepProfile::new(vec![0.0], vec![(1.0, 0.0), (9.0, 0.3)]).unwrap();
        let traj = run(&config(profile, 0.05, 0.05, 5.0)).unwrap();
        assert_eq!(traj.stats.events, 0);
        assert_eq!(traj.final_fronts.len(), traj.initial_fronts.len());
    }

    #[test]
    fn composite_accurate_example() {
        let ph = phases();
        let left = State { v: 1.0, u: 0.0, lam: 0.0 };
        let mid = eos::apply_composite(left, &ph, 0.0).unwrap();
        let right = apply_wave(mid, Family::One, -0.5, ph.a_r);
        let comp = Front { id: 0, kind: FrontKind::Composite, strength: 0.0, position: 0.0, t_anchor: 0.0, speed: 0.0, left, right: mid, order: 1 };
        let speed = eos::shock_speed(Family::One, mid.v, right.v, ph.a_r).unwrap();
        let shock = Front { id: 1, kind: FrontKind::One, strength: -0.5, position: 1.0, t_anchor: 0.0, speed, left: mid, right, order: 1 };
        let t = -1.0 / speed;
        let ctx = ResolveContext { phases: ph, eta: 0.1, rho: 0.1 };
        let res = resolve_event(&comp, &shock, t, &ctx).unwrap();
        assert_eq!(res.kind, EventKind::CompositeAccurate);
        assert!(res.residual <= 1e-12);
        let direct = solve_pseudo_accurate(left, right, 0.0, &ph).unwrap();
        let c = res.fronts.iter().find(|f| f.is_composite()).unwrap();
        assert_eq!(c.strength, 0.0);
        assert_eq!(res.fronts[0].strength, direct.eps1);
        assert!(res.fronts.iter().all(|f| f.t_anchor == t));
    }

    #[test]
    fn front_list_splice() {
        let s = State { v: 1.0, u: 0.0, lam: 0.0 };
        let mk = |id: u64| Front { id, kind: FrontKind::One, strength: 0.0, position: id as f64, t_anchor: 0.0, speed: 0.0, left: s, right: s, order: 1 };
        let mut list = FrontList::new(vec![mk(0), mk(1), mk(2), mk(3)]);
        let created = list.splice(1, 2, vec![mk(10), mk(11), mk(12)]);
        assert_eq!(created.len(), 3);
        let ids: Vec<u64> = list.iter().map(|f| f.id).collect();
        assert_eq!(ids, vec![0, 10, 11, 12, 3]);
        list.splice(0, created[0], vec![]);
        let ids: Vec<u64> = list.iter().map(|f| f.id).collect();
        assert_eq!(ids, vec![11, 12, 3]);
    }

    #[test]
    fn profile_distance() {
        let s = |v: f64| State { v, u: 0.0, lam: 0.0 };
        let p = Profile { t: 0.0, x: vec![0.0, 1.0], states: vec![s(1.0), s(2.0), s(1.0)] };
        let q = Profile { t: 0.0, x: vec![0.5, 1.0], states: vec![s(1.0), s(2.0), s(1.0)] };
        assert!((l1_distance(&p, &q) - 0.5).abs() < 1e-15);
        assert_eq!(l1_distance(&p, &p), 0.0);
    }
}
