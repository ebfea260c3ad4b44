//! Front tracking for the p-system with a stationary phase interface at `x = 0`.
//!
//! The interface is carried as a composite (2,0)-wave. Interactions with it
//! are resolved by an accurate or a simplified pseudo solver depending on the
//! incoming strength, and the Glimm-type functional `F = L + K Q` is tracked
//! per wave generation.

pub mod config;
pub mod eos;
pub mod error;
pub mod functionals;
pub mod initial;
pub mod oracle;
pub mod params;
pub mod riemann;
pub mod tracker;

pub use eos::{Family, PhasePair, State};
pub use error::{Error, Result};
