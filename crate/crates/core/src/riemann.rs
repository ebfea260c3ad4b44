//! Riemann solvers: the exact Lax solver and the two pseudo solvers used at
//! the composite (2,0)-wave.

use serde::{Deserialize, Serialize};

use crate::eos::{self, h, h_prime, Family, PhasePair, State};
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-13;
const MAX_ITER: usize = 200;
const MAX_BRACKET: f64 = 1e4;

/// Outgoing waves of a Riemann problem together with the defects of the two
/// scalar equations they were solved from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannFan {
    pub eps1: f64,
    /// Interface strength `δ₂` for [`solve_lax`], composite strength for the
    /// pseudo accurate solver.
    pub eps2: f64,
    pub eps3: f64,
    pub mid_left: State,
    pub mid_right: State,
    pub residuals: [f64; 2],
}

impl RiemannFan {
    pub fn max_residual(&self) -> f64 {
        self.residuals[0].abs().max(self.residuals[1].abs())
    }
}

/// Solves `2(a_l h(ε)+a_r h(ε+Δ)) = du` for `ε` by Newton's method inside a
/// bisection bracket. The left side is strictly increasing and onto.
fn solve_velocity_equation(a_l: f64, a_r: f64, log_ratio: f64, du: f64) -> Result<f64> {
    let f = |e: f64| 2.0 * (a_l * h(e) + a_r * h(e + log_ratio)) - du;
    let df = |e: f64| 2.0 * (a_l * h_prime(e) + a_r * h_prime(e + log_ratio));

    let mut bound = 1.0;
    while f(-bound) > 0.0 || f(bound) < 0.0 {
        bound *= 2.0;
        if bound > MAX_BRACKET {
            return Err(Error::NonConvergence { lo: -bound, hi: bound, iterations: 0 });
        }
    }
    let (mut lo, mut hi) = (-bound, bound);
    let mut x = 0.0_f64.clamp(lo, hi);
    for _ in 0..MAX_ITER {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - fx / df(x);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= REL_TOL * x.abs().max(1.0) || hi - lo <= REL_TOL * x.abs().max(1.0) {
            return Ok(polish(x, f, df));
        }
    }
    Err(Error::NonConvergence { lo, hi, iterations: MAX_ITER })
}

// A couple of extra Newton steps, kept only while they shrink the residual.
fn polish(mut x: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..3 {
        let fx = f(x);
        let d = df(x);
        if fx == 0.0 || d == 0.0 {
            break;
        }
        let next = x - fx / d;
        if f(next).abs() < fx.abs() {
            x = next;
        } else {
            break;
        }
    }
    x
}

fn lax_with_offset(left: State, right: State, a_l: f64, a_r: f64, du: f64) -> Result<RiemannFan> {
    left.validate()?;
    right.validate()?;
    let p_l = eos::pressure(left.v, a_l)?;
    let p_r = eos::pressure(right.v, a_r)?;
    let log_ratio = 0.5 * (p_r / p_l).ln();
    let eps1 = solve_velocity_equation(a_l, a_r, log_ratio, du)?;
    let eps3 = eps1 + log_ratio;
    let mid_left = eos::apply_wave(left, Family::One, eps1, a_l);
    let mid_right = eos::unapply_wave(right, Family::Three, eps3, a_r);
    Ok(RiemannFan {
        eps1,
        eps2: eos::interface_strength(a_l, a_r),
        eps3,
        mid_left,
        mid_right,
        residuals: [eps3 - eps1 - log_ratio, 2.0 * (a_l * h(eps1) + a_r * h(eps3)) - du],
    })
}

/// Exact solution by simple Lax waves: a 1-wave, the interface, a 3-wave.
pub fn solve_lax(left: State, right: State, a_l: f64, a_r: f64) -> Result<RiemannFan> {
    lax_with_offset(left, right, a_l, a_r, right.u - left.u)
}

/// Interaction of a physical wave with the composite wave of strength `d20`,
/// resolved into `ε₁, d20, ε₃`. The composite strength is unchanged.
pub fn solve_pseudo_accurate(left: State, right: State, d20: f64, phases: &PhasePair) -> Result<RiemannFan> {
    if left.lam != phases.lam_l {
        return Err(Error::PhaseSide { lam: left.lam, expected: phases.lam_l });
    }
    if right.lam != phases.lam_r {
        return Err(Error::PhaseSide { lam: right.lam, expected: phases.lam_r });
    }
    // Shift the left state by the composite strength and solve as if the
    // interface were a plain 2-wave.
    let mut fan = lax_with_offset(left, right, phases.a_l, phases.a_r, right.u - left.u - d20)?;
    fan.eps2 = d20;
    Ok(fan)
}

/// Strength-preserving transmission of an `i`-wave `delta` through the
/// composite; returns the new composite strength.
pub fn solve_pseudo_simplified(d20: f64, family: Family, delta: f64, phases: &PhasePair) -> f64 {
    let change = 2.0 * (phases.a_r - phases.a_l) * h(delta);
    match family {
        Family::One => d20 + change,
        Family::Three => d20 - change,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eos::{apply_composite, apply_wave};

    fn st(v: f64, u: f64) -> State {
        State { v, u, lam: 0.0 }
    }

    #[test]
    fn constant_state_has_no_waves() {
        let fan = solve_lax(st(2.0, 1.0), st(2.0, 1.0), 1.5, 1.5).unwrap();
        assert_eq!((fan.eps1, fan.eps2, fan.eps3), (0.0, 0.0, 0.0));
    }

    #[test]
    fn two_rarefactions() {
        let fan = solve_lax(st(1.0, 0.0), st(1.0, 4.0), 1.0, 1.0).unwrap();
        assert!((fan.eps1 - 1.0).abs() < 1e-13 && (fan.eps3 - 1.0).abs() < 1e-13);
        assert!(fan.max_residual() < 1e-12);
    }

    #[test]
    fn two_shocks() {
        let du = -4.0 * 1f64.sinh();
        let fan = solve_lax(st(1.0, 0.0), st(1.0, du), 1.0, 1.0).unwrap();
        assert!((fan.eps1 + 1.0).abs() < 1e-13 && (fan.eps3 + 1.0).abs() < 1e-13);
        assert!((fan.mid_left.u - fan.mid_right.u).abs() < 1e-13);
    }

    #[test]
    fn lax_mid_states_match_curves() {
        let fan = solve_lax(st(0.7, 0.3), State { v: 2.5, u: -1.2, lam: 1.0 }, 1.0, 2.0).unwrap();
        assert_eq!(fan.eps2, 2.0 / 3.0);
        let p_mid_l = eos::pressure(fan.mid_left.v, 1.0).unwrap();
        let p_mid_r = eos::pressure(fan.mid_right.v, 2.0).unwrap();
        assert!((p_mid_l / p_mid_r - 1.0).abs() < 1e-13);
        assert!((fan.mid_left.u - fan.mid_right.u).abs() < 1e-12);
        assert_eq!(fan.mid_left.lam, 0.0);
        assert_eq!(fan.mid_right.lam, 1.0);
    }

    #[test]
    fn lax_rejects_bad_states() {
        assert!(solve_lax(st(-1.0, 0.0), st(1.0, 0.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn pseudo_accurate_reduces_to_lax() {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 2.0).unwrap();
        let l = st(1.3, 0.2);
        let r = State { v: 3.1, u: -0.4, lam: 1.0 };
        let a = solve_pseudo_accurate(l, r, 0.0, &phases).unwrap();
        let b = solve_lax(l, r, 1.0, 2.0).unwrap();
        assert_eq!(a.eps1, b.eps1);
        assert_eq!(a.eps3, b.eps3);
        assert_eq!(a.mid_left, b.mid_left);
    }

    #[test]
    fn pseudo_accurate_left_and_right_shifts_agree() {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap();
        let d20 = 0.37;
        let l = st(1.1, 0.4);
        let r = State { v: 8.0, u: -0.6, lam: 1.0 };
        let fan = solve_pseudo_accurate(l, r, d20, &phases).unwrap();
        // Shift the right state down instead.
        let alt = solve_lax(l, r.with_u_shift(-d20), phases.a_l, phases.a_r).unwrap();
        let alt_q = alt.mid_right.with_u_shift(d20);
        assert!((fan.eps1 - alt.eps1).abs() < 1e-12);
        assert!((fan.eps3 - alt.eps3).abs() < 1e-12);
        assert!((fan.mid_left.u - alt.mid_left.u).abs() < 1e-12);
        assert!((fan.mid_left.v - alt.mid_left.v).abs() < 1e-12);
        assert!((fan.mid_right.u - alt_q.u).abs() < 1e-12);
        assert!((fan.mid_right.v - alt_q.v).abs() < 1e-12);
        // The composite joins the two middle states.
        let across = apply_composite(fan.mid_left, &phases, d20).unwrap();
        assert!((across.v - fan.mid_right.v).abs() < 1e-12);
        assert!((across.u - fan.mid_right.u).abs() < 1e-12);
    }

    #[test]
    fn pseudo_accurate_checks_phases() {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap();
        let bad = solve_pseudo_accurate(st(1.0, 0.0), st(1.0, 0.0), 0.0, &phases);
        assert!(matches!(bad, Err(Error::PhaseSide { .. })));
    }

    #[test]
    fn pseudo_simplified_examples() {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap();
        assert_eq!(solve_pseudo_simplified(0.5, Family::One, 0.0, &phases), 0.5);
        let got = solve_pseudo_simplified(0.5, Family::One, -1.0, &phases);
        assert!((got - (0.5 - 4.0 * 1f64.sinh())).abs() < 1e-14);
        assert!((got + 4.200_804_774_575_205_5).abs() < 1e-12);
    }

    #[test]
    fn pseudo_simplified_matches_state_bookkeeping() {
        // 1-wave from the right transmitted through the composite.
        let phases = PhasePair::new(0.0, 1.0, 1.2, 2.0).unwrap();
        let d20 = -0.3;
        let delta = -0.4;
        let u_l = st(1.0, 0.5);
        let u_m = apply_composite(u_l, &phases, d20).unwrap();
        let u_r = apply_wave(u_m, Family::One, delta, phases.a_r);
        let u_q = apply_wave(u_l, Family::One, delta, phases.a_l);
        let new = solve_pseudo_simplified(d20, Family::One, delta, &phases);
        assert!((u_r.u - u_q.u - new).abs() < 1e-14);
        assert!((u_r.v / u_q.v - phases.volume_ratio()).abs() < 1e-12);
    }
}
