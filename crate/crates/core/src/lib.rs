//! Diffusion in the two-dimensional Margolus-neighbourhood cellular automaton.
//!
//! The single-particle displacement law of the automaton is computed by three
//! independent routes that cross-validate one another:
//!
//! * [`chain`] — exact evolution of the joint position/direction Markov chain
//!   (the ground-truth oracle), in arbitrary-precision rational or `f64`
//!   arithmetic;
//! * [`analytic`] — the closed-form marginal distribution, probability
//!   generating function, exact moments, and diffusion coefficients;
//! * [`sim`] — the full bit-packed two-dimensional automaton with block
//!   rotation rules, particle tracking, and ensemble statistics.
//!
//! The `mcad` binary wires these into reproducible command-line experiments.

pub mod analytic;
pub mod chain;
pub mod combinatorics;
pub mod dist;
pub mod error;
pub mod numeric;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
