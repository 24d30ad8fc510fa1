//! Exact evolution and sampling of the position/direction Markov chain.
//!
//! Each step the walker either advances one cell along its direction `d`
//! (probability `p`) or stays put and reverses `d` (probability `1 - p`).
//! [`ChainState`] evolves the joint distribution `P_t(x, d)` by the master
//! recurrence; it is the ground-truth oracle the closed-form module and the
//! automaton are validated against.

use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::numeric::{check_closed_unit, check_open_unit, powi, Scalar};
use crate::rng::SplitMix64;

/// Initial direction split: `P_0(0, +1) = epsilon`, `P_0(0, -1) = 1 - epsilon`.
#[derive(Clone, Debug)]
pub struct ChainInit<T> {
    epsilon: T,
}

impl<T: Scalar> ChainInit<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        check_closed_unit(&epsilon, "epsilon")?;
        Ok(ChainInit { epsilon })
    }

    /// The symmetric split used throughout: epsilon = 1/2.
    pub fn symmetric() -> Self {
        ChainInit {
            epsilon: T::ratio(1, 2),
        }
    }

    pub fn epsilon(&self) -> &T {
        &self.epsilon
    }
}

/// Joint distribution `P_t(x, d)` stored densely over its support interval.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState<T> {
    time: u32,
    support_min: i64,
    probs_plus: Vec<T>,
    probs_minus: Vec<T>,
}

impl<T: Scalar> ChainState<T> {
    /// State at t = 0 with all mass at the origin.
    pub fn init(init: &ChainInit<T>) -> Self {
        ChainState {
            time: 0,
            support_min: 0,
            probs_plus: vec![init.epsilon.clone()],
            probs_minus: vec![T::one() - init.epsilon.clone()],
        }
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    /// `P_t(x, d)`; zero outside the support.
    pub fn prob(&self, x: i64, d: i8) -> T {
        let idx = x - self.support_min;
        if idx < 0 || idx as usize >= self.probs_plus.len() {
            return T::zero();
        }
        let idx = idx as usize;
        if d > 0 {
            self.probs_plus[idx].clone()
        } else {
            self.probs_minus[idx].clone()
        }
    }

    pub fn total_mass(&self) -> T {
        self.probs_plus
            .iter()
            .chain(self.probs_minus.iter())
            .fold(T::zero(), |acc, p| acc + p.clone())
    }

    /// One application of the master recurrence
    /// `P_{t+1}(x, d) = p P_t(x - d, d) + (1 - p) P_t(x, -d)`.
    pub fn step(&self, p: &T) -> Result<ChainState<T>> {
        check_open_unit(p, "rotation probability")?;
        let q = T::one() - p.clone();
        let old_len = self.probs_plus.len();
        let len = old_len + 2;
        let mut plus = vec![T::zero(); len];
        let mut minus = vec![T::zero(); len];
        // The new array index i corresponds to x = (support_min - 1) + i,
        // so the old index j maps to the new index j + 1.
        for j in 0..old_len {
            // advance along d
            plus[j + 2] = plus[j + 2].clone() + p.clone() * self.probs_plus[j].clone();
            minus[j] = minus[j].clone() + p.clone() * self.probs_minus[j].clone();
            // stay and reverse
            plus[j + 1] = plus[j + 1].clone() + q.clone() * self.probs_minus[j].clone();
            minus[j + 1] = minus[j + 1].clone() + q.clone() * self.probs_plus[j].clone();
        }
        Ok(ChainState {
            time: self.time + 1,
            support_min: self.support_min - 1,
            probs_plus: plus,
            probs_minus: minus,
        })
    }

    /// `t`-fold application of [`ChainState::step`] to the initial state.
    pub fn evolve(init: &ChainInit<T>, p: &T, t: u32) -> Result<ChainState<T>> {
        let mut state = ChainState::init(init);
        for _ in 0..t {
            state = state.step(p)?;
        }
        Ok(state)
    }

    /// Marginal `P_t(x) = P_t(x, +1) + P_t(x, -1)`.
    pub fn marginal(&self) -> Distribution<T> {
        let probs = self
            .probs_plus
            .iter()
            .zip(self.probs_minus.iter())
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Distribution::new(self.time, self.support_min, probs)
    }

    /// With `direction` given, the raw moment `sum_x x^n P_t(x, d)`.
    /// Without it, the raw moment of the marginal — except `n = 2`, which
    /// returns the central moment (the dispersion).
    pub fn raw_moment(&self, n: u32, direction: Option<i8>) -> T {
        match direction {
            Some(d) => {
                let probs = if d > 0 {
                    &self.probs_plus
                } else {
                    &self.probs_minus
                };
                probs.iter().enumerate().fold(T::zero(), |acc, (i, p)| {
                    let x = self.support_min + i as i64;
                    acc + powi(&T::from_int(x), n) * p.clone()
                })
            }
            None => {
                let marginal = self.marginal();
                if n == 2 {
                    marginal.variance()
                } else {
                    marginal.raw_moment(n)
                }
            }
        }
    }
}

/// A sampled path of the chain: `(x_t, d_t)` for `t = 0..=steps`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub steps: Vec<(i64, i8)>,
}

impl Trajectory {
    pub fn endpoint(&self) -> i64 {
        self.steps.last().map(|&(x, _)| x).unwrap_or(0)
    }
}

/// Draws one trajectory: per step, with probability `p` the position advances
/// along `d`; otherwise `d` is negated.
pub fn sample_path(p: f64, eps: f64, t: u32, rng: &mut SplitMix64) -> Result<Trajectory> {
    check_open_unit(&p, "rotation probability")?;
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1], got {eps}"
        )));
    }
    let mut x = 0i64;
    let mut d: i8 = if rng.next_f64() < eps { 1 } else { -1 };
    let mut steps = Vec::with_capacity(t as usize + 1);
    steps.push((x, d));
    for _ in 0..t {
        if rng.next_f64() < p {
            x += d as i64;
        } else {
            d = -d;
        }
        steps.push((x, d));
    }
    Ok(Trajectory { steps })
}
