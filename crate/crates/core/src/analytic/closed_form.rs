//! Closed-form marginal distribution of the walker position.
//!
//! Evaluation strategy, chosen per parameter regime:
//!
//! * general `p`, exact mode — positive terminating sums obtained by
//!   absorbing the `(1-2p)` power into the hypergeometric series. All terms
//!   are non-negative for `p <= 1/2`, so the same expressions are also the
//!   numerically stable route in floating point.
//! * `p = 1/2` — a dedicated branch of pure binomial constants. The sums
//!   degenerate to their top term there, and the branch constants are pinned
//!   against the master-equation oracle in the tests (the naively printed
//!   constants are off by a factor of two, see `half_branch_matches_oracle`).
//! * `p > 1/2`, floating mode — terms alternate in sign, so the value is
//!   computed in exact rationals and rounded once; refused above
//!   [`P_ABOVE_HALF_FLOAT_LIMIT`] to avoid silent cancellation error.
//! * the verbatim Jacobi-polynomial form is kept as an independent backend
//!   (`closed_form_prob_jacobi`) for cross-checks in exact arithmetic; its
//!   argument diverges at `p = 1/2`, which is exactly why the positive sums
//!   are the primary route.

use crate::combinatorics::{binomial, jacobi};
use crate::dist::Distribution;
use crate::error::{Error, Result};
use crate::numeric::{powi, LnFactorial, Scalar};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;

/// Largest `t` for which floating-mode evaluation at `p > 1/2` silently
/// falls back to exact rationals; beyond it the evaluation is refused.
pub const P_ABOVE_HALF_FLOAT_LIMIT: u32 = 200;

fn validate_p<T: Scalar>(p: &T) -> Result<()> {
    crate::numeric::check_open_unit(p, "rotation probability")
}

/// The four families of multinomial coefficients appearing in the sums.
#[derive(Clone, Copy)]
enum SumKind {
    /// (n+j+k)! / (k! (2j+k)! (n-j-k)!)
    A,
    /// (n+j+k-1)! / (k! (2j+k)! (n-j-1-k)!)
    B,
    /// (n+j+k)! / (k! (2j+1+k)! (n-j-1-k)!)
    C,
    /// (n+j+1+k)! / (k! (2j+1+k)! (n-j-k)!)
    D,
}

impl SumKind {
    fn start(self, n: u64, j: u64) -> BigInt {
        match self {
            SumKind::A => binomial(n + j, 2 * j as i64),
            SumKind::B => binomial(n + j - 1, 2 * j as i64),
            SumKind::C => binomial(n + j, 2 * j as i64 + 1),
            SumKind::D => binomial(n + j + 1, 2 * j as i64 + 1),
        }
    }

    /// Multiplies the exact coefficient from index `k` to `k + 1`.
    fn advance(self, coeff: BigInt, n: u64, j: u64, k: u64) -> BigInt {
        let (num_a, num_b, den_b) = match self {
            SumKind::A => (n + j + k + 1, n - j - k, 2 * j + k + 1),
            SumKind::B => (n + j + k, n - j - 1 - k, 2 * j + k + 1),
            SumKind::C => (n + j + k + 1, n - j - 1 - k, 2 * j + k + 2),
            SumKind::D => (n + j + k + 2, n - j - k, 2 * j + k + 2),
        };
        coeff * num_a * num_b / ((k + 1) * den_b)
    }

    /// ln of the coefficient at index `k`, for the floating path.
    fn ln_coeff(self, n: u64, j: u64, k: u64, ln: &LnFactorial) -> f64 {
        let (top, mid, bot) = match self {
            SumKind::A => (n + j + k, 2 * j + k, n - j - k),
            SumKind::B => (n + j + k - 1, 2 * j + k, n - j - 1 - k),
            SumKind::C => (n + j + k, 2 * j + 1 + k, n - j - 1 - k),
            SumKind::D => (n + j + 1 + k, 2 * j + 1 + k, n - j - k),
        };
        ln.ln_fact(top as usize)
            - ln.ln_fact(k as usize)
            - ln.ln_fact(mid as usize)
            - ln.ln_fact(bot as usize)
    }
}

/// Numerator of `sum_{k=0}^{kmax} coeff_kind(k) p^{2k} (1-2p)^{e-k}` over
/// the common denominator `dp^(e+kmax)`, where `p = np/dp` and
/// `1-2p = (dp-2np)/dp`. Pure integer arithmetic; valid for every `p` in
/// (0, 1), and at `p = 1/2` only the `k = e` term survives.
#[allow(clippy::too_many_arguments)]
fn sum_num(
    kind: SumKind,
    n: u64,
    j: u64,
    kmax: u64,
    e: u64,
    np: &BigInt,
    dp: &BigInt,
    nw: &BigInt,
) -> BigInt {
    let np2 = np * np;
    let mut nw_pows = Vec::with_capacity(e as usize + 1);
    nw_pows.push(BigInt::one());
    for m in 1..=e as usize {
        nw_pows.push(&nw_pows[m - 1] * nw);
    }
    let mut dp_pows = Vec::with_capacity(kmax as usize + 1);
    dp_pows.push(BigInt::one());
    for m in 1..=kmax as usize {
        dp_pows.push(&dp_pows[m - 1] * dp);
    }
    let mut np2k = BigInt::one();
    let mut coeff = kind.start(n, j);
    let mut acc = BigInt::from(0);
    for k in 0..=kmax {
        acc += &coeff * &np2k * &nw_pows[(e - k) as usize] * &dp_pows[(kmax - k) as usize];
        if k < kmax {
            coeff = kind.advance(coeff, n, j, k);
            np2k *= &np2;
        }
    }
    acc
}

/// Floating counterpart of [`sum_num`]; all terms are non-negative for
/// `p <= 1/2`, and magnitudes are kept in range by working in logs.
#[allow(clippy::too_many_arguments)]
fn sum_f64(
    kind: SumKind,
    n: u64,
    j: u64,
    kmax: u64,
    e: u64,
    ln_p: f64,
    ln_w: f64,
    ln: &LnFactorial,
) -> f64 {
    let mut acc = 0.0f64;
    for k in 0..=kmax {
        let pw = e - k;
        let mut l = kind.ln_coeff(n, j, k, ln) + 2.0 * k as f64 * ln_p;
        if pw > 0 {
            l += pw as f64 * ln_w;
        }
        acc += l.exp();
    }
    acc
}

/// Interior probability for general `p = np/dp` as an integer numerator
/// over the denominator `dp^t`, doubled when `halved` is set. Combining the
/// two sums of the mixed-parity cases happens in exact integers, so no
/// floating cancellation is possible even for `p > 1/2`.
fn interior_num(t: u32, xa: u64, np: &BigInt, dp: &BigInt) -> (BigInt, bool) {
    let t = t as u64;
    let nw = dp - BigInt::from(2) * np;
    let np2j = |j: u64| num::pow::pow(np.clone(), 2 * j as usize);
    if t % 2 == 1 {
        let n = (t - 1) / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            let s = sum_num(SumKind::A, n, j, n - j, n - j, np, dp, &nw);
            ((dp - np) * np2j(j) * s, false)
        } else {
            let j = (xa - 1) / 2;
            let s_c = sum_num(SumKind::C, n, j, n - j - 1, n - j, np, dp, &nw);
            let s_d = sum_num(SumKind::D, n, j, n - j, n - j, np, dp, &nw);
            (np * np2j(j) * (dp * s_c + s_d), true)
        }
    } else {
        let n = t / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            let s_a = sum_num(SumKind::A, n, j, n - j, n - j, np, dp, &nw);
            let s_b = sum_num(SumKind::B, n, j, n - j - 1, n - j, np, dp, &nw);
            (np2j(j) * (s_a + dp * s_b), true)
        } else {
            let j = (xa - 1) / 2;
            let s = sum_num(SumKind::C, n, j, n - j - 1, n - j - 1, np, dp, &nw);
            ((dp - np) * np * np2j(j) * s, false)
        }
    }
}

/// Exact interior probability for general `p` via the positive sums.
fn interior_exact(t: u32, xa: u64, p: &BigRational) -> BigRational {
    let (num, halved) = interior_num(t, xa, p.numer(), p.denom());
    let mut den = num::pow::pow(p.denom().clone(), t as usize);
    if halved {
        den *= 2;
    }
    BigRational::new(num, den)
}

/// Floating interior probability for `p > 1/2`: the alternating sums are
/// evaluated in exact integers and rounded once at the end.
fn interior_above_half_f64(t: u32, xa: u64, p: &BigRational) -> f64 {
    let (num, halved) = interior_num(t, xa, p.numer(), p.denom());
    let mut den = num::pow::pow(p.denom().clone(), t as usize);
    if halved {
        den *= 2;
    }
    BigRational::new_raw(num, den).to_f64()
}

/// Floating interior probability for `p < 1/2`.
fn interior_f64(t: u32, xa: u64, p: f64, ln: &LnFactorial) -> f64 {
    let t = t as u64;
    let ln_p = p.ln();
    let ln_w = (1.0 - 2.0 * p).ln();
    if t % 2 == 1 {
        let n = (t - 1) / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            (1.0 - p)
                * p.powi(2 * j as i32)
                * sum_f64(SumKind::A, n, j, n - j, n - j, ln_p, ln_w, ln)
        } else {
            let j = (xa - 1) / 2;
            0.5 * p.powi(2 * j as i32 + 1)
                * (sum_f64(SumKind::C, n, j, n - j - 1, n - j, ln_p, ln_w, ln)
                    + sum_f64(SumKind::D, n, j, n - j, n - j, ln_p, ln_w, ln))
        }
    } else {
        let n = t / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            0.5 * p.powi(2 * j as i32)
                * (sum_f64(SumKind::A, n, j, n - j, n - j, ln_p, ln_w, ln)
                    + sum_f64(SumKind::B, n, j, n - j - 1, n - j, ln_p, ln_w, ln))
        } else {
            let j = (xa - 1) / 2;
            (1.0 - p)
                * p.powi(2 * j as i32 + 1)
                * sum_f64(SumKind::C, n, j, n - j - 1, n - j - 1, ln_p, ln_w, ln)
        }
    }
}

/// Interior probability at `p = 1/2` is `C(top, k) / 2^shift` with the
/// oracle-verified constants; this returns `(top, k, shift)`.
fn half_indices(t: u32, xa: u64) -> (u64, u64, usize) {
    let t = t as u64;
    if t % 2 == 1 {
        let n = (t - 1) / 2;
        if xa.is_multiple_of(2) {
            (2 * n, n + xa / 2, (2 * n + 1) as usize)
        } else {
            (2 * n + 1, n + (xa - 1) / 2 + 1, (2 * n + 2) as usize)
        }
    } else {
        let n = t / 2;
        if xa.is_multiple_of(2) {
            (2 * n, n + xa / 2, (2 * n + 1) as usize)
        } else {
            (2 * n - 1, n + (xa - 1) / 2, (2 * n) as usize)
        }
    }
}

fn interior_half_exact(t: u32, xa: u64) -> BigRational {
    let (top, k, shift) = half_indices(t, xa);
    BigRational::new(binomial(top, k as i64), BigInt::one() << shift)
}

fn interior_half_f64(t: u32, xa: u64, ln: &LnFactorial) -> f64 {
    let (top, k, shift) = half_indices(t, xa);
    (ln.ln_binomial(top as usize, k as usize) - shift as f64 * std::f64::consts::LN_2).exp()
}

/// Exact marginal probability `P_t(x)` for the symmetric initial condition.
pub fn closed_form_prob_exact(t: u32, x: i64, p: &BigRational) -> Result<BigRational> {
    validate_p(p)?;
    let xa = x.unsigned_abs();
    if xa > t as u64 {
        return Ok(BigRational::from_int(0));
    }
    if t == 0 {
        return Ok(BigRational::one());
    }
    if xa == t as u64 {
        return Ok(powi(p, t) / BigRational::from_int(2));
    }
    if *p == BigRational::ratio(1, 2) {
        return Ok(interior_half_exact(t, xa));
    }
    Ok(interior_exact(t, xa, p))
}

/// Floating marginal probability `P_t(x)`.
pub fn closed_form_prob(t: u32, x: i64, p: f64) -> Result<f64> {
    validate_p(&p)?;
    let xa = x.unsigned_abs();
    if xa > t as u64 {
        return Ok(0.0);
    }
    if t == 0 {
        return Ok(1.0);
    }
    if xa == t as u64 {
        return Ok(0.5 * p.powi(t as i32));
    }
    if p == 0.5 {
        let ln = LnFactorial::new(t as usize + 2);
        return Ok(interior_half_f64(t, xa, &ln));
    }
    if p > 0.5 {
        let r = above_half_f64(t, p)?;
        return Ok(interior_above_half_f64(t, xa, &r));
    }
    let ln = LnFactorial::new(t as usize + 2);
    Ok(interior_f64(t, xa, p, &ln))
}

fn above_half_f64(t: u32, p: f64) -> Result<BigRational> {
    if t > P_ABOVE_HALF_FLOAT_LIMIT {
        return Err(Error::NumericalDomain(format!(
            "floating evaluation refused for p > 1/2 at t = {t} (limit {P_ABOVE_HALF_FLOAT_LIMIT}); use exact mode",
        )));
    }
    BigRational::from_float(p)
        .ok_or_else(|| Error::InvalidParameter(format!("probability is not finite: {p}")))
}

/// Exact full marginal over `[-t, t]`.
pub fn closed_form_dist_exact(t: u32, p: &BigRational) -> Result<Distribution<BigRational>> {
    validate_p(p)?;
    let mut upper = Vec::with_capacity(t as usize + 1);
    for x in 0..=t as i64 {
        upper.push(closed_form_prob_exact(t, x, p)?);
    }
    Ok(mirror(t, upper))
}

/// Floating full marginal over `[-t, t]`.
pub fn closed_form_dist(t: u32, p: f64) -> Result<Distribution<f64>> {
    validate_p(&p)?;
    if p > 0.5 {
        let r = above_half_f64(t, p)?;
        let mut upper = Vec::with_capacity(t as usize + 1);
        for x in 0..=t as u64 {
            let v = if t == 0 {
                1.0
            } else if x == t as u64 {
                0.5 * p.powi(t as i32)
            } else {
                interior_above_half_f64(t, x, &r)
            };
            upper.push(v);
        }
        return Ok(mirror(t, upper));
    }
    let ln = LnFactorial::new(t as usize + 2);
    let mut upper = Vec::with_capacity(t as usize + 1);
    for x in 0..=t as u64 {
        let v = if t == 0 {
            1.0
        } else if x == t as u64 {
            0.5 * p.powi(t as i32)
        } else if p == 0.5 {
            interior_half_f64(t, x, &ln)
        } else {
            interior_f64(t, x, p, &ln)
        };
        upper.push(v);
    }
    Ok(mirror(t, upper))
}

/// Assembles the symmetric distribution from values at `x = 0..=t`.
fn mirror<T: Scalar>(t: u32, upper: Vec<T>) -> Distribution<T> {
    let mut probs = Vec::with_capacity(2 * t as usize + 1);
    for x in (1..=t as usize).rev() {
        probs.push(upper[x].clone());
    }
    probs.extend(upper);
    Distribution::new(t, -(t as i64), probs)
}

/// Second backend: the Jacobi-polynomial expressions evaluated verbatim in
/// exact arithmetic. Singular at `p = 1/2` (the argument diverges).
pub fn closed_form_prob_jacobi(t: u32, x: i64, p: &BigRational) -> Result<BigRational> {
    validate_p(p)?;
    if *p == BigRational::ratio(1, 2) {
        return Err(Error::NumericalDomain(
            "the Jacobi-argument form is singular at p = 1/2".into(),
        ));
    }
    let xa = x.unsigned_abs();
    if xa > t as u64 {
        return Ok(BigRational::from_int(0));
    }
    if t == 0 {
        return Ok(BigRational::one());
    }
    if xa == t as u64 {
        return Ok(powi(p, t) / BigRational::from_int(2));
    }
    let one = BigRational::one();
    let two = BigRational::from_int(2);
    let q = one.clone() - p.clone();
    let w = one.clone() - two.clone() * p.clone();
    // argument 2 p^2 / (1 - 2p) + 1
    let y = two * p.clone() * p.clone() / w.clone() + one;
    let t = t as u64;
    let v = if t % 2 == 1 {
        let n = (t - 1) / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            q * powi(p, 2 * j as u32)
                * powi(&w, (n - j) as u32)
                * jacobi((n - j) as u32, 2 * j as u32, 0, &y)
        } else {
            let j = (xa - 1) / 2;
            q.clone()
                * q
                * powi(p, 2 * j as u32 + 1)
                * powi(&w, (n - j - 1) as u32)
                * BigRational::ratio(2 * n as i64 + 1, 2 * (n - j) as i64)
                * jacobi((n - j - 1) as u32, 2 * j as u32 + 1, 1, &y)
        }
    } else {
        let n = t / 2;
        if xa.is_multiple_of(2) {
            let j = xa / 2;
            q.clone()
                * q
                * powi(p, 2 * j as u32)
                * powi(&w, (n - j - 1) as u32)
                * BigRational::ratio(n as i64, (n - j) as i64)
                * jacobi((n - j - 1) as u32, 2 * j as u32, 1, &y)
        } else {
            let j = (xa - 1) / 2;
            q * powi(p, 2 * j as u32 + 1)
                * powi(&w, (n - j - 1) as u32)
                * jacobi((n - j - 1) as u32, 2 * j as u32 + 1, 0, &y)
        }
    };
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{ChainInit, ChainState};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    fn oracle_exact(t: u32, p: &BigRational) -> Distribution<BigRational> {
        ChainState::evolve(&ChainInit::symmetric(), p, t)
            .unwrap()
            .marginal()
    }

    #[test]
    fn rejects_bad_p() {
        assert!(closed_form_prob(3, 0, 0.0).is_err());
        assert!(closed_form_prob(3, 0, 1.0).is_err());
        assert!(closed_form_prob_exact(3, 0, &rat(7, 5)).is_err());
    }

    #[test]
    fn named_point_values() {
        // edge: P_1(1) = p/2
        assert!((closed_form_prob(1, 1, 0.4).unwrap() - 0.2).abs() < 1e-15);
        // P_2(0) = (1-p)^2
        assert!((closed_form_prob(2, 0, 0.25).unwrap() - 0.5625).abs() < 1e-12);
        // P_3(0) = (1-p)(2p^2 - 2p + 1)
        assert!((closed_form_prob(3, 0, 0.3).unwrap() - 0.406).abs() < 1e-12);
        // symmetry
        assert_eq!(
            closed_form_prob(5, -2, 0.3).unwrap(),
            closed_form_prob(5, 2, 0.3).unwrap()
        );
        // outside support
        assert_eq!(closed_form_prob(4, 5, 0.3).unwrap(), 0.0);
    }

    #[test]
    fn dist_t0_and_t3_half() {
        let d = closed_form_dist(0, 0.37).unwrap();
        assert_eq!(d.prob(0), 1.0);
        let d = closed_form_dist_exact(3, &rat(1, 2)).unwrap();
        assert_eq!(d.prob(0), rat(1, 4));
        assert_eq!(d.prob(1), rat(3, 16));
        assert_eq!(d.prob(2), rat(1, 8));
        assert_eq!(d.prob(3), rat(1, 16));
        assert_eq!(d.total(), rat(1, 1));
    }

    #[test]
    fn half_branch_matches_oracle() {
        // The printed p = 1/2 constants sum to 2; the oracle fixes the
        // factor. Frozen here: P_1(0) = 1/2, P_2(0) = 1/4, P_3(1) = 3/16.
        assert_eq!(interior_half_exact(1, 0), rat(1, 2));
        assert_eq!(interior_half_exact(2, 0), rat(1, 4));
        assert_eq!(interior_half_exact(3, 1), rat(3, 16));
        for t in 1..=30u32 {
            let oracle = oracle_exact(t, &rat(1, 2));
            let closed = closed_form_dist_exact(t, &rat(1, 2)).unwrap();
            assert_eq!(oracle, closed, "t = {t}");
        }
    }

    #[test]
    fn general_exact_handles_p_half_via_vanishing_terms() {
        // The positive sums remain valid at p = 1/2 (0^0 = 1 convention);
        // they must agree with the dedicated branch.
        for t in 1..=20u32 {
            for x in 0..t as i64 {
                let a = interior_exact(t, x as u64, &rat(1, 2));
                let b = closed_form_prob_exact(t, x, &rat(1, 2)).unwrap();
                assert_eq!(a, b, "t={t} x={x}");
            }
        }
    }

    #[test]
    fn exact_equals_oracle_small_grid() {
        for p in [
            rat(1, 20),
            rat(1, 4),
            rat(1, 3),
            rat(1, 2),
            rat(2, 3),
            rat(9, 10),
        ] {
            for t in 0..=25u32 {
                let oracle = oracle_exact(t, &p);
                let closed = closed_form_dist_exact(t, &p).unwrap();
                assert_eq!(oracle, closed, "p = {p}, t = {t}");
            }
        }
    }

    #[test]
    fn jacobi_backend_agrees_with_positive_sums() {
        for p in [rat(1, 10), rat(1, 4), rat(2, 5), rat(3, 4), rat(9, 10)] {
            for t in 1..=20u32 {
                for x in 0..=t as i64 {
                    let a = closed_form_prob_exact(t, x, &p).unwrap();
                    let b = closed_form_prob_jacobi(t, x, &p).unwrap();
                    assert_eq!(a, b, "p = {p}, t = {t}, x = {x}");
                }
            }
        }
        assert!(closed_form_prob_jacobi(4, 0, &rat(1, 2)).is_err());
    }

    #[test]
    fn float_matches_exact_below_half() {
        for &p in &[0.05f64, 0.1, 0.25, 1.0 / 3.0, 0.49] {
            let pr = BigRational::from_float(p).unwrap();
            for t in [1u32, 7, 20, 60] {
                let exact = closed_form_dist_exact(t, &pr).unwrap();
                let float = closed_form_dist(t, p).unwrap();
                for x in -(t as i64)..=t as i64 {
                    let e = exact.prob(x).to_f64();
                    let f = float.prob(x);
                    assert!(
                        (e - f).abs() <= 1e-12,
                        "p={p} t={t} x={x}: exact {e} float {f}"
                    );
                }
            }
        }
    }

    #[test]
    fn float_above_half_falls_back_to_exact() {
        let d = closed_form_dist(40, 0.75).unwrap();
        assert!((d.total() - 1.0).abs() < 1e-12);
        let pr = BigRational::from_float(0.75).unwrap();
        let e = closed_form_prob_exact(40, 6, &pr).unwrap().to_f64();
        assert_eq!(d.prob(6), e);
        // refused above the limit
        assert!(matches!(
            closed_form_prob(P_ABOVE_HALF_FLOAT_LIMIT + 1, 0, 0.75),
            Err(Error::NumericalDomain(_))
        ));
    }

    #[test]
    fn continuous_at_p_half() {
        // |1 - 2p| = 1e-5 on both sides. The floating path must agree with
        // exact arithmetic at the same p to 1e-9 (numerical stability), and
        // the exact values drift from the p = 1/2 branch only by O(t |1-2p|).
        for &p in &[0.4999950f64, 0.5000050f64] {
            let pr = BigRational::from_float(p).unwrap();
            let t = 60u32;
            let float = closed_form_dist(t, p).unwrap();
            let exact = closed_form_dist_exact(t, &pr).unwrap();
            let half = closed_form_dist_exact(t, &rat(1, 2)).unwrap();
            let delta = (1.0 - 2.0 * p).abs();
            for x in 0..=t as i64 {
                let f = float.prob(x);
                let e = exact.prob(x).to_f64();
                let h = half.prob(x).to_f64();
                assert!((f - e).abs() <= 1e-9, "p={p} x={x}: float {f} exact {e}");
                assert!(
                    (e - h).abs() <= 10.0 * t as f64 * delta,
                    "p={p} x={x}: exact {e} half {h}"
                );
            }
        }
    }

    #[test]
    fn edge_probability_is_half_p_to_t() {
        for p in [rat(1, 4), rat(1, 2), rat(4, 5)] {
            for t in 1..=50u32 {
                assert_eq!(
                    closed_form_prob_exact(t, t as i64, &p).unwrap(),
                    powi(&p, t) / rat(2, 1)
                );
            }
        }
    }
}
