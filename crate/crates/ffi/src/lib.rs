//! C ABI over the diffusion library: opaque handles, status codes, and a
//! cbindgen-generated header (`include/mcad.h`).
//!
//! Conventions: every fallible call returns [`McadStatus`] and writes its
//! result through out-pointers; handles are created by `*_new`-style calls
//! and released by the matching `*_free`. All functions are panic-safe
//! (panics are caught and reported as `MCAD_STATUS_INTERNAL_ERROR`).

use mcad_core::analytic;
use mcad_core::chain::{ChainInit, ChainState};
use mcad_core::dist::Distribution;
use mcad_core::error::Error;
use mcad_core::sim::{
    auto_torus_size, ensemble_dispersion, estimate_diffusion, EnsembleConfig, RuleParams,
};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McadStatus {
    Ok = 0,
    /// A parameter violates a precondition.
    InvalidArgument = 1,
    /// The evaluation left the numerically safe domain.
    NumericalDomain = 2,
    /// A required pointer was null.
    NullPointer = 3,
    /// Unexpected internal failure.
    InternalError = 4,
}

fn status_of(e: &Error) -> McadStatus {
    match e {
        Error::InvalidParameter(_) | Error::Parse(_) => McadStatus::InvalidArgument,
        Error::NumericalDomain(_) | Error::Pole { .. } => McadStatus::NumericalDomain,
        Error::Io(_) => McadStatus::InternalError,
    }
}

fn guarded(f: impl FnOnce() -> McadStatus) -> McadStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(McadStatus::InternalError)
}

/// Writes `value` through `out` if non-null.
unsafe fn write_out<T>(out: *mut T, value: T) -> McadStatus {
    if out.is_null() {
        return McadStatus::NullPointer;
    }
    unsafe { out.write(value) };
    McadStatus::Ok
}

macro_rules! scalar_out {
    ($expr:expr, $out:ident) => {
        guarded(|| match $expr {
            Ok(v) => unsafe { write_out($out, v) },
            Err(e) => status_of(&e),
        })
    };
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

/// Opaque probability distribution over integer positions.
pub struct McadDistribution {
    inner: Distribution<f64>,
}

/// Closed-form marginal distribution after `t` steps with rotation
/// probability `p`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_closed_form_dist(
    t: u32,
    p: f64,
    out: *mut *mut McadDistribution,
) -> McadStatus {
    guarded(|| match analytic::closed_form_dist(t, p) {
        Ok(d) => unsafe { write_out(out, Box::into_raw(Box::new(McadDistribution { inner: d }))) },
        Err(e) => status_of(&e),
    })
}

/// Marginal distribution of the master-equation chain after `t` steps with
/// initial direction split `eps`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_chain_dist(
    t: u32,
    p: f64,
    eps: f64,
    out: *mut *mut McadDistribution,
) -> McadStatus {
    guarded(|| {
        let run = || -> Result<Distribution<f64>, Error> {
            let init = ChainInit::new(eps)?;
            Ok(ChainState::evolve(&init, &p, t)?.marginal())
        };
        match run() {
            Ok(d) => unsafe {
                write_out(out, Box::into_raw(Box::new(McadDistribution { inner: d })))
            },
            Err(e) => status_of(&e),
        }
    })
}

/// Time step the distribution was taken at.
/// # Safety
/// `dist` must be null or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_time(dist: *const McadDistribution) -> u32 {
    if dist.is_null() {
        return 0;
    }
    unsafe { &*dist }.inner.time()
}

/// Lowest position of the stored support.
/// # Safety
/// `dist` must be null or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_support_min(dist: *const McadDistribution) -> i64 {
    if dist.is_null() {
        return 0;
    }
    unsafe { &*dist }.inner.support_min()
}

/// Number of stored support points.
/// # Safety
/// `dist` must be null or a live distribution handle.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_len(dist: *const McadDistribution) -> usize {
    if dist.is_null() {
        return 0;
    }
    unsafe { &*dist }.inner.len()
}

/// Probability at position `x` (zero outside the support).
/// # Safety
/// `dist` must be null or a live handle; `out` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_prob(
    dist: *const McadDistribution,
    x: i64,
    out: *mut f64,
) -> McadStatus {
    guarded(|| {
        if dist.is_null() {
            return McadStatus::NullPointer;
        }
        let v = unsafe { &*dist }.inner.prob(x);
        unsafe { write_out(out, v) }
    })
}

/// Copies the dense probability vector (length `mcad_dist_len`) into `buf`.
/// # Safety
/// `dist` must be null or a live handle; `buf` null or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_copy_probs(
    dist: *const McadDistribution,
    buf: *mut f64,
    len: usize,
) -> McadStatus {
    guarded(|| {
        if dist.is_null() || buf.is_null() {
            return McadStatus::NullPointer;
        }
        let d = unsafe { &*dist };
        if len < d.inner.len() {
            return McadStatus::InvalidArgument;
        }
        let slice = unsafe { std::slice::from_raw_parts_mut(buf, d.inner.len()) };
        for (dst, (_, p)) in slice.iter_mut().zip(d.inner.iter()) {
            *dst = *p;
        }
        McadStatus::Ok
    })
}

/// Releases a distribution handle; null is a no-op.
/// # Safety
/// `dist` must be null or a handle not yet freed; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mcad_dist_free(dist: *mut McadDistribution) {
    if !dist.is_null() {
        drop(unsafe { Box::from_raw(dist) });
    }
}

// ---------------------------------------------------------------------------
// Scalar evaluations
// ---------------------------------------------------------------------------

/// `D_c(p) = p / (2 (1 - p))` in cell^2/step units.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_diffusion_coefficient(p: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::diffusion_coefficient(&p), out)
}

/// Rotation probability realizing a target diffusion coefficient.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_calibrate_p(target_dc: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::calibrate_p(&target_dc), out)
}

/// Type-2 diffusion coefficient `(1 - ps) / 2`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_type2_diffusion_coefficient(ps: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::type2_diffusion_coefficient(&ps), out)
}

/// Type-2 dispersion at step `t`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_type2_dispersion(t: u32, ps: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::type2_dispersion(t, &ps), out)
}

/// Dispersion of the walk at step `t`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_variance(t: u32, p: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::variance(t, &p), out)
}

/// Gaussian limit density at `x`.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_normal_pdf(x: f64, t: u32, p: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::normal_pdf(x, t, p), out)
}

/// Total-variation distance between the lattice law and its Gaussian limit.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_tv_distance_to_normal(t: u32, p: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::tv_distance_to_normal(t, p), out)
}

/// Cited empirical regression of `p` against the relative diffusion
/// coefficient; provided for comparison plots.
#[no_mangle]
pub extern "C" fn mcad_regression_p(r: f64) -> f64 {
    analytic::regression_p(r)
}

/// Rotation probability equivalent to rotating the fraction `xi` of
/// particles under the integer-alphabet percentage rule.
/// # Safety
/// `out` must be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_xi_to_p(xi: f64, out: *mut f64) -> McadStatus {
    scalar_out!(analytic::xi_to_p(xi), out)
}

/// Direction-split generating functions `(G_t^+(z), G_t^-(z))`.
/// # Safety
/// `g_plus` and `g_minus` must each be null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_pgf_eval(
    z: f64,
    t: u32,
    p: f64,
    g_plus: *mut f64,
    g_minus: *mut f64,
) -> McadStatus {
    guarded(|| match analytic::pgf_eval(z, t, p) {
        Ok((gp, gm)) => {
            let s = unsafe { write_out(g_plus, gp) };
            if s != McadStatus::Ok {
                return s;
            }
            unsafe { write_out(g_minus, gm) }
        }
        Err(e) => status_of(&e),
    })
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Rule family selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum McadVariant {
    Type1 = 0,
    Type2 = 1,
}

/// Ensemble run parameters. `width`/`height` of 0 request the automatic
/// torus size; `fit_from`/`fit_to` of 0 request the default window
/// `[steps/2, steps]`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct McadSimConfig {
    pub variant: McadVariant,
    /// Type-1 rotation probability (ignored for type 2).
    pub p: f64,
    /// Type-2 skip probability (ignored for type 1).
    pub ps: f64,
    pub steps: u32,
    pub trials: u64,
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub dx: f64,
    pub dt: f64,
    pub fit_from: u32,
    pub fit_to: u32,
}

/// Result of a diffusion estimate.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct McadEstimate {
    pub k: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub fit_from: u32,
    pub fit_to: u32,
    pub dx: f64,
    pub dt: f64,
    pub seed: u64,
}

/// Opaque simulation handle; configured at creation, holds the dispersion
/// series after `mcad_simulation_run`.
pub struct McadSimulation {
    ensemble: EnsembleConfig,
    dx: f64,
    dt: f64,
    fit_from: u32,
    fit_to: u32,
    series: Option<Vec<(u32, f64)>>,
}

/// Validates the configuration and creates a simulation handle.
/// # Safety
/// `config` must be null or valid for a read; `out` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_simulation_new(
    config: *const McadSimConfig,
    out: *mut *mut McadSimulation,
) -> McadStatus {
    guarded(|| {
        if config.is_null() {
            return McadStatus::NullPointer;
        }
        let cfg = unsafe { &*config };
        let rule = match cfg.variant {
            McadVariant::Type1 => RuleParams::type1(cfg.p),
            McadVariant::Type2 => RuleParams::type2(cfg.ps),
        };
        let rule = match rule {
            Ok(r) => r,
            Err(e) => return status_of(&e),
        };
        let side = auto_torus_size(rule.diffusion_coefficient(), cfg.steps);
        let sim = McadSimulation {
            ensemble: EnsembleConfig {
                rule,
                steps: cfg.steps,
                trials: cfg.trials,
                seed: cfg.seed,
                width: if cfg.width == 0 { side } else { cfg.width },
                height: if cfg.height == 0 { side } else { cfg.height },
            },
            dx: cfg.dx,
            dt: cfg.dt,
            fit_from: if cfg.fit_from == 0 {
                (cfg.steps / 2).max(1)
            } else {
                cfg.fit_from
            },
            fit_to: if cfg.fit_to == 0 {
                cfg.steps
            } else {
                cfg.fit_to
            },
            series: None,
        };
        unsafe { write_out(out, Box::into_raw(Box::new(sim))) }
    })
}

/// Runs the ensemble and writes the diffusion estimate.
/// # Safety
/// `sim` must be null or a live simulation handle; `out` null or valid for one write.
#[no_mangle]
pub unsafe extern "C" fn mcad_simulation_run(
    sim: *mut McadSimulation,
    out: *mut McadEstimate,
) -> McadStatus {
    guarded(|| {
        if sim.is_null() {
            return McadStatus::NullPointer;
        }
        let sim = unsafe { &mut *sim };
        let mut run = || -> Result<McadEstimate, Error> {
            let series = ensemble_dispersion(&sim.ensemble)?;
            let est = estimate_diffusion(
                &series,
                sim.fit_from,
                sim.fit_to,
                sim.dx,
                sim.dt,
                sim.ensemble.seed,
            )?;
            sim.series = Some(series);
            Ok(McadEstimate {
                k: est.k,
                ci_low: est.ci_low,
                ci_high: est.ci_high,
                fit_from: est.window[0],
                fit_to: est.window[1],
                dx: est.dx,
                dt: est.dt,
                seed: est.seed,
            })
        };
        match run() {
            Ok(est) => unsafe { write_out(out, est) },
            Err(e) => status_of(&e),
        }
    })
}

/// Number of points in the recorded dispersion series (0 before a run).
/// # Safety
/// `sim` must be null or a live simulation handle.
#[no_mangle]
pub unsafe extern "C" fn mcad_simulation_series_len(sim: *const McadSimulation) -> usize {
    if sim.is_null() {
        return 0;
    }
    unsafe { &*sim }
        .series
        .as_ref()
        .map(|s| s.len())
        .unwrap_or(0)
}

/// Copies the dispersion series into parallel arrays of length `len`.
/// # Safety
/// `sim` must be null or a live handle; the buffers null or valid for `len` writes each.
#[no_mangle]
pub unsafe extern "C" fn mcad_simulation_series(
    sim: *const McadSimulation,
    t_buf: *mut u32,
    dispersion_buf: *mut f64,
    len: usize,
) -> McadStatus {
    guarded(|| {
        if sim.is_null() || t_buf.is_null() || dispersion_buf.is_null() {
            return McadStatus::NullPointer;
        }
        let series = match unsafe { &*sim }.series.as_ref() {
            Some(s) => s,
            None => return McadStatus::InvalidArgument,
        };
        if len < series.len() {
            return McadStatus::InvalidArgument;
        }
        let ts = unsafe { std::slice::from_raw_parts_mut(t_buf, series.len()) };
        let ds = unsafe { std::slice::from_raw_parts_mut(dispersion_buf, series.len()) };
        for (i, &(t, d)) in series.iter().enumerate() {
            ts[i] = t;
            ds[i] = d;
        }
        McadStatus::Ok
    })
}

/// Releases a simulation handle; null is a no-op.
/// # Safety
/// `sim` must be null or a handle not yet freed; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn mcad_simulation_free(sim: *mut McadSimulation) {
    if !sim.is_null() {
        drop(unsafe { Box::from_raw(sim) });
    }
}
