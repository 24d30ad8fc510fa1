//! Probability generating functions of the walker, split by direction.
//!
//! The transfer matrix has eigenvalues `(q(z) +- m(z)) / 2` with
//! `q(z) = p (z + 1/z)` and `m(z) = sqrt(p^2 (z + 1/z)^2 - 8p + 4)`.
//! For real `z > 0` the radicand is bounded below by `4 (1 - p)^2 > 0`,
//! so `m` is real and strictly positive; the principal root is taken.

use crate::error::{Error, Result};

/// Spectral data of the transfer matrix at a fixed evaluation point.
#[derive(Clone, Copy, Debug)]
pub struct PgfKernel {
    pub p: f64,
    pub z: f64,
    pub q: f64,
    pub m: f64,
    pub r: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl PgfKernel {
    pub fn new(z: f64, p: f64) -> Result<PgfKernel> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rotation probability must lie in (0, 1), got {p}"
            )));
        }
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "evaluation point must be positive, got {z}"
            )));
        }
        let s = z + 1.0 / z;
        let m2 = p * p * s * s - 8.0 * p + 4.0;
        if m2 < 0.0 {
            return Err(Error::NumericalDomain(format!(
                "m(z)^2 = {m2} < 0 at z = {z}, p = {p}"
            )));
        }
        let m = m2.sqrt();
        let q = p * s;
        Ok(PgfKernel {
            p,
            z,
            q,
            m,
            r: p * (z - 1.0 / z),
            lambda1: 0.5 * (q + m),
            lambda2: 0.5 * (q - m),
        })
    }
}

/// `(G_t^+(z), G_t^-(z))`; their sum is the generating function of the
/// marginal. `G_t(1) = 1` for every `t`.
pub fn pgf_eval(z: f64, t: u32, p: f64) -> Result<(f64, f64)> {
    let k = PgfKernel::new(z, p)?;
    let l1t = k.lambda1.powi(t as i32);
    let l2t = k.lambda2.powi(t as i32);
    let diff = l1t - l2t;
    let g_plus = (-l1t * k.lambda2 + k.lambda1 * l2t + (1.0 - p + p * z) * diff) / (2.0 * k.m);
    let g_minus = (k.lambda1 * l1t - k.lambda2 * l2t + (1.0 - p - p * z) * diff) / (2.0 * k.m);
    Ok((g_plus, g_minus))
}
