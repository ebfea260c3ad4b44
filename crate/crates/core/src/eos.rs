//! Pressure law `p = a²/v`, wave curves and the scalar helpers `h` and `c`.
//!
//! Strengths follow the logarithmic convention: positive for rarefactions,
//! negative for shocks. For a 1-wave the volume grows by `exp(2ε)`, for a
//! 3-wave it shrinks by the same factor, and the velocity always moves by
//! `2a·h(ε)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Jumps weaker than this are treated as absent.
pub const NULL_WAVE: f64 = 1e-14;

/// A genuinely nonlinear wave family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    One,
    Three,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Three => 3,
        }
    }

    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Family::One),
            3 => Some(Family::Three),
            _ => None,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Family::One => Family::Three,
            Family::Three => Family::One,
        }
    }

    /// `-1` for the 1-family, `+1` for the 3-family.
    pub fn sign(self) -> f64 {
        match self {
            Family::One => -1.0,
            Family::Three => 1.0,
        }
    }
}

/// A point `(v, u, λ)` of the phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub v: f64,
    pub u: f64,
    pub lam: f64,
}

impl State {
    pub fn new(v: f64, u: f64, lam: f64) -> Result<Self> {
        let s = State { v, u, lam };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v > 0.0) || !self.v.is_finite() {
            return Err(Error::Domain { what: "specific volume", value: self.v });
        }
        if !self.u.is_finite() {
            return Err(Error::Domain { what: "velocity", value: self.u });
        }
        if !(0.0..=1.0).contains(&self.lam) {
            return Err(Error::Domain { what: "vapor fraction", value: self.lam });
        }
        Ok(())
    }

    pub fn with_u_shift(self, du: f64) -> Self {
        State { u: self.u + du, ..self }
    }
}

/// The two phases separated by the interface at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePair {
    pub lam_l: f64,
    pub lam_r: f64,
    pub a_l: f64,
    pub a_r: f64,
    pub delta2: f64,
}

impl PhasePair {
    pub fn new(lam_l: f64, lam_r: f64, a_l: f64, a_r: f64) -> Result<Self> {
        for (what, value) in [("sound coefficient a_l", a_l), ("sound coefficient a_r", a_r)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::Domain { what, value });
            }
        }
        for (what, value) in [("lambda_l", lam_l), ("lambda_r", lam_r)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::Domain { what, value });
            }
        }
        if lam_l == lam_r && a_l != a_r {
            return Err(Error::Domain { what: "sound coefficient jump without phase jump", value: a_r - a_l });
        }
        Ok(PhasePair { lam_l, lam_r, a_l, a_r, delta2: interface_strength(a_l, a_r) })
    }

    /// Sound coefficient of the phase a state belongs to.
    pub fn sound(&self, lam: f64) -> f64 {
        if lam == self.lam_l {
            self.a_l
        } else {
            self.a_r
        }
    }

    /// `|δ₂|`, the quantity the interaction estimates are written in.
    pub fn abs_delta2(&self) -> f64 {
        self.delta2.abs()
    }

    pub fn a_max(&self) -> f64 {
        self.a_l.max(self.a_r)
    }

    pub fn a_min(&self) -> f64 {
        self.a_l.min(self.a_r)
    }

    /// Volume ratio across the interface at equal pressure.
    pub fn volume_ratio(&self) -> f64 {
        (self.a_r * self.a_r) / (self.a_l * self.a_l)
    }

    /// Same phases seen from the mirrored axis `x ↦ -x`.
    pub fn mirrored(&self) -> Self {
        PhasePair {
            lam_l: self.lam_r,
            lam_r: self.lam_l,
            a_l: self.a_r,
            a_r: self.a_l,
            delta2: interface_strength(self.a_r, self.a_l),
        }
    }
}

pub fn interface_strength(a_l: f64, a_r: f64) -> f64 {
    2.0 * (a_r - a_l) / (a_r + a_l)
}

fn check_positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

pub fn pressure(v: f64, a: f64) -> Result<f64> {
    check_positive("specific volume", v)?;
    check_positive("sound coefficient", a)?;
    Ok(a * a / v)
}

/// Magnitude of the nonlinear characteristic speeds, `sqrt(-p_v) = a/v`.
pub fn char_speed(v: f64, a: f64) -> Result<f64> {
    check_positive("specific volume", v)?;
    check_positive("sound coefficient", a)?;
    Ok(a / v)
}

pub fn family_char_speed(family: Family, v: f64, a: f64) -> Result<f64> {
    Ok(family.sign() * char_speed(v, a)?)
}

pub fn shock_speed(family: Family, v_left: f64, v_right: f64, a: f64) -> Result<f64> {
    check_positive("specific volume", v_left)?;
    check_positive("specific volume", v_right)?;
    check_positive("sound coefficient", a)?;
    Ok(family.sign() * a / (v_left * v_right).sqrt())
}

pub fn h(eps: f64) -> f64 {
    if eps >= 0.0 {
        eps
    } else {
        eps.sinh()
    }
}

/// Derivative of [`h`].
pub fn h_prime(eps: f64) -> f64 {
    if eps >= 0.0 {
        1.0
    } else {
        eps.cosh()
    }
}

/// Damping coefficient `c(z) = (cosh z - 1)/(cosh z + 1)`, evaluated as `tanh²(z/2)`.
pub fn c_damp(z: f64) -> f64 {
    let t = (0.5 * z).tanh();
    t * t
}

pub fn strength_of_jump(family: Family, v_from: f64, v_to: f64) -> Result<f64> {
    check_positive("specific volume", v_from)?;
    check_positive("specific volume", v_to)?;
    Ok(match family {
        Family::One => 0.5 * (v_to / v_from).ln(),
        Family::Three => 0.5 * (v_from / v_to).ln(),
    })
}

/// State reached from `state` along the `family` wave curve at strength `eps`.
pub fn apply_wave(state: State, family: Family, eps: f64, a: f64) -> State {
    let factor = match family {
        Family::One => (2.0 * eps).exp(),
        Family::Three => (-2.0 * eps).exp(),
    };
    State { v: state.v * factor, u: state.u + 2.0 * a * h(eps), lam: state.lam }
}

/// Inverse of [`apply_wave`]: the state from which `eps` reaches `state`.
pub fn unapply_wave(state: State, family: Family, eps: f64, a: f64) -> State {
    let factor = match family {
        Family::One => (-2.0 * eps).exp(),
        Family::Three => (2.0 * eps).exp(),
    };
    State { v: state.v * factor, u: state.u - 2.0 * a * h(eps), lam: state.lam }
}

/// Crosses the composite (2,0)-wave of strength `d20` from the left phase.
pub fn apply_composite(state: State, phases: &PhasePair, d20: f64) -> Result<State> {
    if state.lam != phases.lam_l {
        return Err(Error::PhaseSide { lam: state.lam, expected: phases.lam_l });
    }
    Ok(State { v: state.v * phases.volume_ratio(), u: state.u + d20, lam: phases.lam_r })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pressure_examples() {
        assert_eq!(pressure(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(pressure(4.0, 2.0).unwrap(), 1.0);
        assert!(matches!(pressure(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(pressure(1.0, -1.0).is_err());
    }

    #[test]
    fn char_speed_examples() {
        assert_eq!(char_speed(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(char_speed(2.0, 1.0).unwrap(), 0.5);
        assert_eq!(char_speed(0.5, 3.0).unwrap(), 6.0);
        assert_eq!(family_char_speed(Family::One, 2.0, 1.0).unwrap(), -0.5);
        assert!(char_speed(0.0, 1.0).is_err());
    }

    #[test]
    fn shock_speed_examples() {
        assert_eq!(shock_speed(Family::One, 1.0, 1.0, 1.0).unwrap(), -1.0);
        assert_eq!(shock_speed(Family::Three, 1.0, 4.0, 2.0).unwrap(), 1.0);
        assert!(shock_speed(Family::Three, -1.0, 4.0, 2.0).is_err());
    }

    #[test]
    fn h_examples() {
        assert_eq!(h(0.0), 0.0);
        assert_eq!(h(1.0), 1.0);
        assert!((h(-1.0) + 1.175_201_193_643_801_4).abs() < 1e-15);
    }

    #[test]
    fn c_damp_examples() {
        assert_eq!(c_damp(0.0), 0.0);
        let m_bar = (2.0 + 3f64.sqrt()).ln();
        assert!((c_damp(m_bar) - 1.0 / 3.0).abs() < 1e-15);
        let quotient = (3f64.cosh() - 1.0) / (3f64.cosh() + 1.0);
        assert!((c_damp(3.0) - quotient).abs() < 1e-15);
    }

    #[test]
    fn c_damp_monotone_below_one() {
        let mut prev = -1.0;
        for i in 0..=1000 {
            let z = 10.0 * i as f64 / 1000.0;
            let c = c_damp(z);
            assert!(c > prev && c < 1.0, "z = {z}");
            prev = c;
        }
    }

    #[test]
    fn strength_examples() {
        let e2 = 1f64.exp().powi(2);
        assert!((strength_of_jump(Family::One, 1.0, e2).unwrap() - 1.0).abs() < 1e-15);
        assert!((strength_of_jump(Family::Three, 1.0, e2).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(strength_of_jump(Family::One, 3.5, 3.5).unwrap(), 0.0);
        assert!(strength_of_jump(Family::One, 0.0, 1.0).is_err());
    }

    #[test]
    fn apply_wave_examples() {
        let s = State { v: 1.0, u: 0.0, lam: 0.0 };
        assert_eq!(apply_wave(s, Family::One, 0.0, 1.0), s);
        let r = apply_wave(s, Family::One, 1.0, 1.0);
        assert!((r.v - 1f64.exp().powi(2)).abs() < 1e-14);
        assert_eq!(r.u, 2.0);
        let back = unapply_wave(r, Family::One, 1.0, 1.0);
        assert!((back.v - 1.0).abs() < 1e-15 && back.u.abs() < 1e-15);
    }

    #[test]
    fn composite_examples() {
        let phases = PhasePair::new(0.0, 1.0, 1.0, 3.0).unwrap();
        let s = State { v: 1.0, u: 0.0, lam: 0.0 };
        let r = apply_composite(s, &phases, 0.5).unwrap();
        assert_eq!((r.v, r.u, r.lam), (9.0, 0.5, 1.0));

        let same = PhasePair::new(0.0, 1.0, 2.0, 2.0).unwrap();
        let r = apply_composite(s, &same, 0.0).unwrap();
        assert_eq!((r.v, r.u, r.lam), (1.0, 0.0, 1.0));

        let wrong = State { lam: 1.0, ..s };
        assert!(matches!(apply_composite(wrong, &phases, 0.0), Err(Error::PhaseSide { .. })));
    }

    #[test]
    fn phase_pair_delta2() {
        let p = PhasePair::new(0.2, 0.9, 1.0, 3.0).unwrap();
        assert_eq!(p.delta2, 1.0);
        assert_eq!(p.mirrored().delta2, -1.0);
        assert!(PhasePair::new(0.0, 1.0, 0.0, 1.0).is_err());
        assert!(State::new(1.0, 0.0, 1.5).is_err());
    }
}
