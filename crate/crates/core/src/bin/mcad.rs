//! Command-line front end: reproducible experiments over the chain oracle,
//! the closed forms, and the Monte Carlo automaton.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mcad_core::analytic::{self, MomentReport};
use mcad_core::chain::{ChainInit, ChainState};
use mcad_core::dist::Distribution;
use mcad_core::error::{Error, Result};
use mcad_core::numeric::{parse_ratio, Scalar};
use mcad_core::sim::{
    auto_torus_size, endpoint_distribution, ensemble_dispersion, estimate_diffusion,
    write_series_csv, EnsembleConfig, RuleParams,
};
use num::rational::BigRational;
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "mcad",
    about = "Margolus-automaton diffusion: exact chain, closed forms, Monte Carlo",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the master-equation oracle; dump the marginal and moments.
    Chain(ChainArgs),
    /// Closed-form distribution and moments, diffusion coefficients,
    /// calibration, and the percentage-rule mapping.
    Analytic(AnalyticArgs),
    /// Monte Carlo dispersion of the 2D automaton plus a diffusion estimate.
    Simulate(SimulateArgs),
    /// Side-by-side comparison tables and total-variation summaries.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Type1,
    Type2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct ChainArgs {
    /// Rotation probability, as a decimal or fraction (e.g. 0.25 or 1/3).
    #[arg(long)]
    p: String,
    /// Number of steps.
    #[arg(long)]
    t: u32,
    /// Initial probability of direction +1.
    #[arg(long, default_value = "1/2")]
    eps: String,
    /// Exact rational arithmetic; probabilities printed as num/den.
    #[arg(long)]
    exact: bool,
    /// Distribution table destination (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Moment table destination (not written when omitted).
    #[arg(long)]
    moments_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct AnalyticArgs {
    /// Rotation probability, as a decimal or fraction.
    #[arg(long)]
    p: Option<String>,
    /// Type-2 skip probability (selects the type-2 coefficient with --dc).
    #[arg(long)]
    ps: Option<String>,
    /// Number of steps for the distribution table.
    #[arg(long)]
    t: Option<u32>,
    /// Print the exact diffusion coefficient and exit.
    #[arg(long)]
    dc: bool,
    /// Print the rotation probability that realizes this diffusion
    /// coefficient and exit.
    #[arg(long)]
    calibrate: Option<f64>,
    /// Print the rotation probability equivalent to rotating this fraction
    /// of particles under the integer-alphabet percentage rule, and exit.
    #[arg(long)]
    xi: Option<f64>,
    /// Exact rational arithmetic; probabilities printed as num/den.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    moments_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = Variant::Type1)]
    variant: Variant,
    /// Type-1 rotation probability.
    #[arg(long)]
    p: Option<f64>,
    /// Type-2 skip probability.
    #[arg(long)]
    ps: Option<f64>,
    /// Number of steps per trial.
    #[arg(long)]
    t: u32,
    /// Number of independent single-particle trials.
    #[arg(long)]
    trials: u64,
    /// RNG seed; drawn from system entropy (and printed) when omitted.
    #[arg(long)]
    seed: Option<u64>,
    /// Torus width in cells (auto-sized to the diffusion length when omitted).
    #[arg(long)]
    width: Option<u32>,
    /// Torus height in cells.
    #[arg(long)]
    height: Option<u32>,
    /// Cell side length.
    #[arg(long, default_value_t = 1.0)]
    dx: f64,
    /// Step duration.
    #[arg(long, default_value_t = 1.0)]
    dt: f64,
    /// First step of the fit window (default t/2).
    #[arg(long)]
    fit_from: Option<u32>,
    /// Last step of the fit window (default t).
    #[arg(long)]
    fit_to: Option<u32>,
    /// Worker threads (0 = library default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Dispersion series CSV destination (not written when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Estimate JSON destination (stdout when omitted).
    #[arg(long)]
    estimate_out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    /// Rotation probability.
    #[arg(long)]
    p: String,
    /// Number of steps.
    #[arg(long)]
    t: u32,
    /// Add a simulated-frequency column from this many automaton trials.
    #[arg(long, default_value_t = 0)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the two-rule dispersion-versus-time table instead (requires --ps).
    #[arg(long)]
    dispersion: bool,
    /// Type-2 skip probability for --dispersion.
    #[arg(long)]
    ps: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Chain(args) => cmd_chain(args),
        Command::Analytic(args) => cmd_analytic(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Compare(args) => cmd_compare(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn parse_prob(s: &str, what: &str) -> Result<BigRational> {
    parse_ratio(s).ok_or_else(|| Error::InvalidParameter(format!("cannot parse {what}: {s:?}")))
}

fn with_output<F>(path: Option<&Path>, f: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            f(&mut w)
        }
    }
}

fn entropy_seed() -> u64 {
    use std::hash::{BuildHasher, Hasher};
    std::collections::hash_map::RandomState::new()
        .build_hasher()
        .finish()
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s = entropy_seed();
            eprintln!("seed: {s}");
            s
        }
    }
}

fn write_distribution<T: Scalar>(
    w: &mut dyn Write,
    dist: &Distribution<T>,
    format: Format,
) -> Result<()> {
    match format {
        Format::Csv => dist.write_csv(w)?,
        Format::Json => {
            let rows: Vec<serde_json::Value> = dist
                .iter()
                .map(|(x, p)| {
                    serde_json::json!({
                        "t": dist.time(),
                        "x": x,
                        "prob": if T::EXACT {
                            serde_json::Value::String(p.format_csv())
                        } else {
                            serde_json::json!(p.to_f64())
                        },
                    })
                })
                .collect();
            serde_json::to_writer_pretty(&mut *w, &rows)
                .map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn cmd_chain(args: ChainArgs) -> Result<()> {
    let p = parse_prob(&args.p, "--p")?;
    let eps = parse_prob(&args.eps, "--eps")?;
    if args.exact {
        run_chain(&args, &p, &eps)
    } else {
        run_chain(&args, &p.to_f64(), &eps.to_f64())
    }
}

fn run_chain<T: Scalar>(args: &ChainArgs, p: &T, eps: &T) -> Result<()> {
    let init = ChainInit::new(eps.clone())?;
    let mut state = ChainState::init(&init);
    let mut moments = Vec::with_capacity(args.t as usize + 1);
    moments.push(analytic::moments_from_state(&state));
    for _ in 0..args.t {
        state = state.step(p)?;
        moments.push(analytic::moments_from_state(&state));
    }
    with_output(args.out.as_deref(), |w| {
        write_distribution(w, &state.marginal(), args.format)
    })?;
    if let Some(path) = &args.moments_out {
        with_output(Some(path), |w| {
            analytic::write_moments_csv(w, &moments).map_err(Error::from)
        })?;
    }
    Ok(())
}

fn cmd_analytic(args: AnalyticArgs) -> Result<()> {
    if args.dc {
        if let Some(ps) = &args.ps {
            let ps = parse_prob(ps, "--ps")?.to_f64();
            println!("{}", analytic::type2_diffusion_coefficient(&ps)?);
        } else {
            let p = required_p(&args.p)?.to_f64();
            println!("{}", analytic::diffusion_coefficient(&p)?);
        }
        return Ok(());
    }
    if let Some(target) = args.calibrate {
        let p = analytic::calibrate_p(&target)?;
        if !analytic::ca_realizable(p) {
            eprintln!("warning: p = {p} exceeds 1/2 and is not realizable by the automaton");
        }
        println!("{p}");
        return Ok(());
    }
    if let Some(xi) = args.xi {
        println!("{}", analytic::xi_to_p(xi)?);
        return Ok(());
    }
    let t = args.t.ok_or_else(|| {
        Error::InvalidParameter("--t is required for the distribution table".into())
    })?;
    let p = required_p(&args.p)?;
    if args.exact {
        let dist = analytic::closed_form_dist_exact(t, &p)?;
        write_analytic_outputs(&args, t, &p, &dist)
    } else {
        let p = p.to_f64();
        let dist = analytic::closed_form_dist(t, p)?;
        write_analytic_outputs(&args, t, &p, &dist)
    }
}

fn required_p(p: &Option<String>) -> Result<BigRational> {
    let s = p
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("--p is required".into()))?;
    parse_prob(s, "--p")
}

fn write_analytic_outputs<T: Scalar>(
    args: &AnalyticArgs,
    t: u32,
    p: &T,
    dist: &Distribution<T>,
) -> Result<()> {
    with_output(args.out.as_deref(), |w| {
        write_distribution(w, dist, args.format)
    })?;
    if let Some(path) = &args.moments_out {
        let rows = closed_moments(t, p)?;
        with_output(Some(path), |w| {
            analytic::write_moments_csv(w, &rows).map_err(Error::from)
        })?;
    }
    Ok(())
}

fn closed_moments<T: Scalar>(t: u32, p: &T) -> Result<Vec<MomentReport<T>>> {
    (0..=t)
        .map(|s| analytic::directional_moments(s, p))
        .collect()
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let rule = match args.variant {
        Variant::Type1 => RuleParams::type1(args.p.ok_or_else(|| {
            Error::InvalidParameter("--p is required for --variant type1".into())
        })?)?,
        Variant::Type2 => RuleParams::type2(args.ps.ok_or_else(|| {
            Error::InvalidParameter("--ps is required for --variant type2".into())
        })?)?,
    };
    let seed = resolve_seed(args.seed);
    let side = auto_torus_size(rule.diffusion_coefficient(), args.t);
    let cfg = EnsembleConfig {
        rule,
        steps: args.t,
        trials: args.trials,
        seed,
        width: args.width.unwrap_or(side),
        height: args.height.unwrap_or(side),
    };
    let series = run_in_pool(args.threads, || ensemble_dispersion(&cfg))?;
    let fit_from = args.fit_from.unwrap_or_else(|| (args.t / 2).max(1));
    let fit_to = args.fit_to.unwrap_or(args.t);
    let estimate = estimate_diffusion(&series, fit_from, fit_to, args.dx, args.dt, seed)?;
    if let Some(path) = &args.out {
        with_output(Some(path), |w| {
            write_series_csv(w, &series).map_err(Error::from)
        })?;
    }
    with_output(args.estimate_out.as_deref(), |w| {
        serde_json::to_writer(&mut *w, &estimate).map_err(|e| Error::Parse(e.to_string()))?;
        writeln!(w)?;
        Ok(())
    })
}

fn run_in_pool<T, F>(threads: usize, f: F) -> Result<T>
where
    F: FnOnce() -> Result<T> + Send,
    T: Send,
{
    if threads == 0 {
        f()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))?;
        pool.install(f)
    }
}

#[derive(Serialize)]
struct CompareSummary {
    t: u32,
    p: f64,
    tv_analytic_normal: f64,
    tv_analytic_oracle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tv_simulated_analytic: Option<f64>,
    nonmonotonic_nonneg: bool,
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    if args.dispersion {
        return cmd_compare_dispersion(&args);
    }
    let p = parse_prob(&args.p, "--p")?.to_f64();
    let t = args.t;
    let analytic_dist = analytic::closed_form_dist(t, p)?;
    let oracle = ChainState::evolve(&ChainInit::<f64>::symmetric(), &p, t)?.marginal();
    let simulated = if args.trials > 0 {
        let rule = RuleParams::type1(p)?;
        let cfg = EnsembleConfig::with_auto_torus(rule, t, args.trials, resolve_seed(args.seed));
        Some(endpoint_distribution(&cfg)?)
    } else {
        None
    };
    with_output(args.out.as_deref(), |w| {
        if simulated.is_some() {
            writeln!(w, "t,x,analytic,oracle,normal,simulated")?;
        } else {
            writeln!(w, "t,x,analytic,oracle,normal")?;
        }
        for x in -(t as i64)..=t as i64 {
            let f = analytic::normal_pdf(x as f64, t, p)?;
            match &simulated {
                Some(sim) => writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                    t,
                    x,
                    analytic_dist.prob(x),
                    oracle.prob(x),
                    f,
                    sim.prob(x)
                )?,
                None => writeln!(
                    w,
                    "{},{},{:.16e},{:.16e},{:.16e}",
                    t,
                    x,
                    analytic_dist.prob(x),
                    oracle.prob(x),
                    f
                )?,
            }
        }
        Ok(())
    })?;
    let summary = CompareSummary {
        t,
        p,
        tv_analytic_normal: analytic::tv_distance_to_normal(t, p)?,
        tv_analytic_oracle: analytic_dist.tv_distance(&oracle),
        tv_simulated_analytic: simulated.as_ref().map(|s| s.tv_distance(&analytic_dist)),
        nonmonotonic_nonneg: analytic::nonmonotone_on_nonneg(&analytic_dist),
    };
    println!(
        "{}",
        serde_json::to_string(&summary).map_err(|e| Error::Parse(e.to_string()))?
    );
    Ok(())
}

fn cmd_compare_dispersion(args: &CompareArgs) -> Result<()> {
    let p = parse_prob(&args.p, "--p")?.to_f64();
    let ps = parse_prob(
        args.ps
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("--dispersion requires --ps".into()))?,
        "--ps",
    )?
    .to_f64();
    with_output(args.out.as_deref(), |w| {
        writeln!(w, "t,dispersion_type1,dispersion_type2")?;
        for t in 0..=args.t {
            writeln!(
                w,
                "{},{:.16e},{:.16e}",
                t,
                analytic::variance(t, &p)?,
                analytic::type2_dispersion(t, &ps)?
            )?;
        }
        Ok(())
    })
}
