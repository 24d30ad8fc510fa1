//! The full two-dimensional Margolus-neighbourhood automaton.
//!
//! Cells live on a bit-packed torus. On even time steps the 2x2 blocks of
//! the even-anchored partition are updated, on odd steps the odd-anchored
//! ones; each active block independently rotates clockwise with probability
//! `p`, counterclockwise with probability `p`, or stays with `1 - 2p`.
//!
//! Every random decision is a pure hash of `(seed, layer, step, block)`, so
//! stepping is embarrassingly parallel and bit-reproducible for any worker
//! count, and a single tracked particle can be advanced without touching the
//! rest of the (empty) grid.

mod ensemble;
mod grid;
mod track;

pub use ensemble::{
    auto_torus_size, endpoint_distribution, ensemble_dispersion, estimate_diffusion,
    write_series_csv, DiffusionEstimate, EnsembleConfig,
};
pub use grid::{rotate_block, Grid, GridConfig, LayerInit, RotationDirection};
pub use track::{track_particle, write_trace_csv, ParticleTrace};

use crate::error::{Error, Result};
use crate::rng::{hash_counter, STREAM_BLOCK, STREAM_SKIP};

/// Block update rule family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RuleParams {
    /// Rotation probability `p` per direction, `0 < p <= 1/2`.
    Type1 { p: f64 },
    /// Always-rotating rule (`p = 1/2`) that skips pairs of consecutive
    /// steps with probability `ps`, drawn once per layer at odd steps.
    Type2 { ps: f64 },
}

impl RuleParams {
    pub fn type1(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 0.5) {
            return Err(Error::InvalidParameter(format!(
                "type-1 rotation probability must lie in (0, 1/2], got {p}"
            )));
        }
        Ok(RuleParams::Type1 { p })
    }

    pub fn type2(ps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&ps) {
            return Err(Error::InvalidParameter(format!(
                "type-2 skip probability must lie in [0, 1], got {ps}"
            )));
        }
        Ok(RuleParams::Type2 { ps })
    }

    /// Per-step rotation probability of the equivalent chain.
    pub fn effective_p(&self) -> f64 {
        match self {
            RuleParams::Type1 { p } => *p,
            RuleParams::Type2 { .. } => 0.5,
        }
    }

    /// Exact diffusion coefficient of the rule in cell^2/step units.
    pub fn diffusion_coefficient(&self) -> f64 {
        match self {
            RuleParams::Type1 { p } => p / (2.0 * (1.0 - p)),
            RuleParams::Type2 { ps } => (1.0 - ps) / 2.0,
        }
    }
}

/// Outcome of one block draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    RotateCw,
    RotateCcw,
    Stay,
}

#[inline]
fn threshold_decision(draw: u64, p: f64) -> Decision {
    let t_cw = (p * 18_446_744_073_709_551_616.0) as u128; // p * 2^64
    let d = draw as u128;
    if d < t_cw {
        Decision::RotateCw
    } else if d < 2 * t_cw {
        Decision::RotateCcw
    } else {
        Decision::Stay
    }
}

/// True when the type-2 rule suppresses rotation at step `t`: the draw is
/// made at each odd step and covers that step and the following even one.
#[inline]
pub(crate) fn skip_active(seed: u64, layer: u32, t: u64, ps: f64) -> bool {
    if t == 0 {
        return false;
    }
    let governing = if t % 2 == 1 { t } else { t - 1 };
    let draw = hash_counter(seed, STREAM_SKIP ^ layer as u64, governing, 0);
    (draw as u128) < (ps * 18_446_744_073_709_551_616.0) as u128
}

/// The rotation decision for one block, a pure function of its coordinates.
#[inline]
pub(crate) fn decide(rule: &RuleParams, seed: u64, layer: u32, t: u64, block: u64) -> Decision {
    match rule {
        RuleParams::Type1 { p } => threshold_decision(
            hash_counter(seed, STREAM_BLOCK ^ layer as u64, t, block),
            *p,
        ),
        RuleParams::Type2 { ps } => {
            if skip_active(seed, layer, t, *ps) {
                Decision::Stay
            } else {
                threshold_decision(
                    hash_counter(seed, STREAM_BLOCK ^ layer as u64, t, block),
                    0.5,
                )
            }
        }
    }
}
