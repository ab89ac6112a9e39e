//! Exact and numerical toolkit for diminishing Pólya–Eggenberger urns.
//!
//! An urn starts with a vector of ball counts and evolves by drawing a ball,
//! putting it back, and adding the drawn color's row of the transition matrix
//! to the counts, until a walled color falls to or below its cap. This crate
//! computes the law of the absorbing state exactly ([`dp`]), cross-checks it
//! against brute force ([`oracle`]) and the known closed forms
//! ([`closed_form`]), simulates it ([`montecarlo`]) and measures convergence
//! to the limiting laws ([`limits`]).
//!
//! Two-color states hold `(white, black)` internally, matching the matrix
//! row order; use [`State::pair`] to build them from `(black, white)`.

pub mod cli;
pub mod closed_form;
pub mod dp;
mod error;
pub mod limits;
pub mod montecarlo;
pub mod oracle;
pub mod presets;
pub mod quadrature;
pub mod rational;
pub mod urn;

pub use dp::{absorption_distribution, AbsorptionDistribution, MomentReport, Solver};
pub use error::{Result, UrnError};
pub use presets::ModelPreset;
pub use rational::ExactRational;
pub use urn::{AbsorbingSet, State, TransitionMatrix, TypeLabel, UrnSpec, WeightMode};
