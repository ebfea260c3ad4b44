#![allow(dead_code)]

use phasefront::initial::{DataSpec, StepProfile};
use phasefront::params::{choose_parameters, k_threshold, ParameterSet};
use phasefront::tracker::{run_scheme, MonitorMode, SchemeOutcome, SchemeSettings};
use phasefront::PhasePair;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DELTAS: [f64; 4] = [0.2, 0.5, 1.0, 1.5];

/// Phases with `a_l = 1` and interface strength `delta2`.
pub fn phases_for(delta2: f64) -> PhasePair {
    let a_r = (2.0 + delta2) / (2.0 - delta2);
    PhasePair::new(0.0, 1.0, 1.0, a_r).unwrap()
}

pub struct Case {
    pub index: usize,
    pub phases: PhasePair,
    pub combined_tv: f64,
    pub profile: StepProfile,
    pub params: ParameterSet,
}

/// Seeded random admissible data: combined variation drawn in
/// `(0, 0.9 K(|δ₂|))`, interface strengths cycling through [`DELTAS`].
pub fn corpus(count: usize, jumps: usize) -> Vec<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..count)
        .map(|index| {
            let phases = phases_for(DELTAS[index % DELTAS.len()]);
            let budget = 0.9 * k_threshold(phases.abs_delta2()).unwrap();
            let combined_tv = budget * rng.random_range(0.02..1.0);
            let spec = DataSpec::RandomBv { seed: 100 + index as u64, jumps, combined_tv, p: 1.0, u: 0.0, extent: 1.0 };
            let profile = spec.step_profile(&phases).unwrap().unwrap();
            let measured = profile.combined_variation(&phases).unwrap();
            let params = choose_parameters(&phases, measured).unwrap();
            Case { index, phases, combined_tv: measured, profile, params }
        })
        .collect()
}

pub fn run_case(case: &Case, nu: u32, t_max: f64, monitor: MonitorMode) -> SchemeOutcome {
    let mut settings = SchemeSettings::new(nu, t_max);
    settings.monitor = monitor;
    run_scheme(&case.profile, &case.phases, &case.params, &settings).unwrap()
}
