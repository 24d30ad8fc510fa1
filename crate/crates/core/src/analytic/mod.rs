//! Closed-form distribution, moments, generating functions, and diffusion
//! coefficients for both automaton types.

mod closed_form;
mod pgf;

pub use closed_form::{
    closed_form_dist, closed_form_dist_exact, closed_form_prob, closed_form_prob_exact,
    closed_form_prob_jacobi, P_ABOVE_HALF_FLOAT_LIMIT,
};
pub use pgf::{pgf_eval, PgfKernel};

use crate::chain::ChainState;
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::numeric::{check_closed_unit, check_open_unit, powi, Scalar};
use std::io::Write;

/// Mean, dispersion and per-direction raw moments at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport<T> {
    pub time: u32,
    pub mean: T,
    pub dispersion: T,
    pub mu1_plus: T,
    pub mu1_minus: T,
    pub mu2_plus: T,
    pub mu2_minus: T,
}

/// Dispersion of the symmetric walk,
/// `D_t = p^2 / (2 (1-p)^2) (-1 + 2 (1-p) t / p + (2p-1)^t)`; the mean is 0.
pub fn variance<T: Scalar>(t: u32, p: &T) -> Result<T> {
    check_open_unit(p, "rotation probability")?;
    let one = T::one();
    let two = T::from_int(2);
    let q = one.clone() - p.clone();
    let lam = two.clone() * p.clone() - one;
    let pref = p.clone() * p.clone() / (two.clone() * q.clone() * q.clone());
    Ok(pref * (powi(&lam, t) - T::one() + two * q * T::from_int(t as i64) / p.clone()))
}

/// Closed-form directional moments for the symmetric initial condition.
pub fn directional_moments<T: Scalar>(t: u32, p: &T) -> Result<MomentReport<T>> {
    check_open_unit(p, "rotation probability")?;
    let one = T::one();
    let two = T::from_int(2);
    let four = T::from_int(4);
    let q = one.clone() - p.clone();
    let lam_t = powi(&(two.clone() * p.clone() - one.clone()), t);
    let mu1_plus = p.clone() / (four.clone() * q.clone()) * (one - lam_t.clone());
    let mu2_plus = p.clone() * p.clone() / (four * q.clone() * q.clone())
        * (lam_t - T::one() + two * q * T::from_int(t as i64) / p.clone());
    Ok(MomentReport {
        time: t,
        mean: T::zero(),
        dispersion: T::from_int(2) * mu2_plus.clone(),
        mu1_plus: mu1_plus.clone(),
        mu1_minus: -mu1_plus,
        mu2_plus: mu2_plus.clone(),
        mu2_minus: mu2_plus,
    })
}

/// Moments measured from an evolved chain state (works for any initial
/// condition, unlike the closed forms above).
pub fn moments_from_state<T: Scalar>(state: &ChainState<T>) -> MomentReport<T> {
    MomentReport {
        time: state.time(),
        mean: state.raw_moment(1, None),
        dispersion: state.raw_moment(2, None),
        mu1_plus: state.raw_moment(1, Some(1)),
        mu1_minus: state.raw_moment(1, Some(-1)),
        mu2_plus: state.raw_moment(2, Some(1)),
        mu2_minus: state.raw_moment(2, Some(-1)),
    }
}

/// CSV dump with header `t,mean,variance,mu1_plus,mu2_plus`.
pub fn write_moments_csv<W: Write + ?Sized, T: Scalar>(
    w: &mut W,
    rows: &[MomentReport<T>],
) -> std::io::Result<()> {
    writeln!(w, "t,mean,variance,mu1_plus,mu2_plus")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.time,
            r.mean.format_csv(),
            r.dispersion.format_csv(),
            r.mu1_plus.format_csv(),
            r.mu2_plus.format_csv()
        )?;
    }
    Ok(())
}

/// Diffusion coefficient of the type-1 automaton in cell^2/step units:
/// `D_c(p) = p / (2 (1 - p))`.
pub fn diffusion_coefficient<T: Scalar>(p: &T) -> Result<T> {
    check_open_unit(p, "rotation probability")?;
    Ok(p.clone() / (T::from_int(2) * (T::one() - p.clone())))
}

/// Inverse of [`diffusion_coefficient`]: `p = 2 D / (1 + 2 D)`.
pub fn calibrate_p<T: Scalar>(target_dc: &T) -> Result<T> {
    if *target_dc <= T::zero() {
        return Err(Error::InvalidParameter(format!(
            "target diffusion coefficient must be positive, got {:?}",
            target_dc
        )));
    }
    let two_d = T::from_int(2) * target_dc.clone();
    Ok(two_d.clone() / (T::one() + two_d))
}

/// The automaton only realizes rotation probabilities up to 1/2; larger `p`
/// is meaningful for the chain alone.
pub fn ca_realizable(p: f64) -> bool {
    p <= 0.5
}

/// Type-2 diffusion coefficient, linear in the skip probability:
/// `(1 - ps) D_c(1/2) = (1 - ps) / 2`.
pub fn type2_diffusion_coefficient<T: Scalar>(ps: &T) -> Result<T> {
    check_closed_unit(ps, "skip probability")?;
    Ok((T::one() - ps.clone()) / T::from_int(2))
}

/// Type-2 dispersion `(1 - ps) D_t(1/2)`, i.e. `(1 - ps)(t - 1/2)` for
/// `t >= 1` and 0 at `t = 0`.
pub fn type2_dispersion<T: Scalar>(t: u32, ps: &T) -> Result<T> {
    check_closed_unit(ps, "skip probability")?;
    Ok((T::one() - ps.clone()) * variance(t, &T::ratio(1, 2))?)
}

/// Gaussian limit density `f_t(x) = sqrt((1-p)/(2 pi t p)) exp(-(1-p) x^2 / (2 t p))`.
pub fn normal_pdf(x: f64, t: u32, p: f64) -> Result<f64> {
    check_open_unit(&p, "rotation probability")?;
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let q = 1.0 - p;
    let tp = t as f64 * p;
    Ok((q / (2.0 * std::f64::consts::PI * tp)).sqrt() * (-q * x * x / (2.0 * tp)).exp())
}

/// Total-variation distance between the lattice distribution and the
/// Gaussian limit sampled at the lattice points.
pub fn tv_distance_to_normal(t: u32, p: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    let dist = closed_form_dist(t, p)?;
    let mut acc = 0.0;
    for x in -(t as i64)..=t as i64 {
        acc += (dist.prob(x) - normal_pdf(x as f64, t, p)?).abs();
    }
    Ok(0.5 * acc)
}

/// True when the distribution increases somewhere on `x >= 0`.
pub fn nonmonotone_on_nonneg(dist: &Distribution<f64>) -> bool {
    crate::dist::nonmonotone_on_nonneg(dist)
}

/// Cited empirical regression `p = -0.35 r^2 + 0.86 r` of the relative
/// diffusion coefficient `r = D_c(p)/D_c(1/2)`; kept for comparison plots.
pub fn regression_p(r: f64) -> f64 {
    -0.35 * r * r + 0.86 * r
}

/// Effective rotation probability of the integer-alphabet percentage rule:
/// `p = xi / 2` for the rotated fraction `xi`.
pub fn xi_to_p(xi: f64) -> Result<f64> {
    if !(xi > 0.0 && xi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "rotated fraction must lie in (0, 1], got {xi}"
        )));
    }
    Ok(xi / 2.0)
}
