//! Command-line front end: every computation as a subcommand writing CSV.
//!
//! Exit codes: 0 success, 1 usage error, 2 numerical (or I/O) failure,
//! 3 verification failure.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use sakaguchi::avm::{avm_density, avm_functionals, AvmPoint};
use sakaguchi::bessel::{bessel_i, bessel_i_range};
use sakaguchi::consistency::{solve_selfconsistency, trace_branch};
use sakaguchi::meanfield::{self, Params, SpectralState};
use sakaguchi::output::{self, Metadata};
use sakaguchi::particles::{self, ParticleEnsemble, ParticleParams, SimulationConfig};
use sakaguchi::verify::{self, alternating_square_sum_residual, Suite};

#[derive(Parser)]
#[command(name = "sakaguchi", version, about = "Mean-field Sakaguchi-Kuramoto toolkit")]
struct Cli {
    /// Write outputs as `<dir>/<command>.csv` (and companions) instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Modified Bessel functions I_n(r).
    Bessel {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "n_max")]
        n: Option<i64>,
        /// Print the table I_0..I_{n_max} and the identity residual.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
    },
    /// Functionals of the asymmetric von Mises density; optionally sampled on a grid.
    Avm {
        #[arg(long, allow_hyphen_values = true)]
        k: f64,
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        /// Number of uniform nodes for `phi,chi,rho` rows.
        #[arg(long)]
        grid: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Solve the self-consistency system at (mu, alpha).
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[command(flatten)]
        alpha: Angle,
        #[command(flatten)]
        out: Output,
    },
    /// Sample the bifurcation branch on r in [0, r_max].
    Trace {
        #[command(flatten)]
        alpha: Angle,
        #[arg(long, default_value_t = 30.0)]
        r_max: f64,
        #[arg(short = 'n', long = "points", default_value_t = 100)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Spectral McKean-Vlasov run.
    Pde(PdeArgs),
    /// Euler-Maruyama particle run.
    Particles(ParticleArgs),
    /// Run an invariant suite and print a pass/fail table.
    Verify {
        /// identities, avm, consistency or all.
        #[arg(long, default_value = "all")]
        suite: Suite,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Angle {
    /// Frustration in radians.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Frustration in degrees.
    #[arg(long, allow_hyphen_values = true)]
    alpha_deg: Option<f64>,
}

impl Angle {
    fn radians(&self) -> f64 {
        match (self.alpha, self.alpha_deg) {
            (Some(a), _) => a,
            (None, Some(d)) => d.to_radians(),
            (None, None) => unreachable!("clap enforces one of --alpha/--alpha-deg"),
        }
    }
}

#[derive(Args)]
struct Output {
    /// Output file (default: stdout, or `--out-dir`).
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PdeArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[command(flatten)]
    alpha: Angle,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    #[arg(long, default_value_t = meanfield::DEFAULT_MODES)]
    n_modes: usize,
    #[arg(long, default_value_t = meanfield::DEFAULT_DT)]
    dt: f64,
    #[arg(long = "T", default_value_t = meanfield::DEFAULT_T)]
    t_end: f64,
    /// Amplitude of the initial `cos θ` perturbation.
    #[arg(long, default_value_t = meanfield::DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long, default_value_t = 100)]
    observe_every: usize,
    /// Also write the final coefficient table `n,re,im`.
    #[arg(long)]
    coefficients: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args)]
struct ParticleArgs {
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    #[command(flatten)]
    alpha: Angle,
    #[arg(long, default_value_t = 1.0)]
    d: f64,
    /// Number of oscillators.
    #[arg(long = "n", default_value_t = particles::DEFAULT_N)]
    n: usize,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long = "T", default_value_t = 50.0)]
    t_end: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = particles::DEFAULT_BINS)]
    bins: usize,
    #[arg(long, default_value_t = 10)]
    observe_every: usize,
    /// Start of the averaging window (default T/2).
    #[arg(long)]
    transient: Option<f64>,
    /// Histogram file `bin_center,density`.
    #[arg(long)]
    histogram: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Numerical(String),
    Verification,
}

impl From<sakaguchi::Error> for Failure {
    fn from(e: sakaguchi::Error) -> Self {
        Failure::Numerical(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("I/O error: {e}"))
    }
}

type CmdResult = Result<(), Failure>;

/// Resolve the destination: explicit path, else `<out_dir>/<default_name>`, else stdout.
fn sink(explicit: Option<&Path>, out_dir: Option<&Path>, default_name: &str) -> io::Result<Box<dyn Write>> {
    let path = match (explicit, out_dir) {
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(dir)) => Some(dir.join(default_name)),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Ok(Box::new(BufWriter::new(File::create(p)?)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let out_dir = cli.out_dir.as_deref();
    let result = match cli.command {
        Command::Bessel { n, n_max, r } => cmd_bessel(n, n_max, r, out_dir),
        Command::Avm { k, r, grid, out } => cmd_avm(k, r, grid, out.output.as_deref(), out_dir),
        Command::Solve { mu, alpha, out } => cmd_solve(mu, alpha.radians(), out.output.as_deref(), out_dir),
        Command::Trace { alpha, r_max, n, out } => cmd_trace(alpha.radians(), r_max, n, out.output.as_deref(), out_dir),
        Command::Pde(args) => cmd_pde(&args, out_dir),
        Command::Particles(args) => cmd_particles(&args, out_dir),
        Command::Verify { suite } => cmd_verify(suite),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(3),
    }
}

fn cmd_bessel(n: Option<i64>, n_max: Option<usize>, r: f64, out_dir: Option<&Path>) -> CmdResult {
    match (n, n_max) {
        (Some(n), _) => {
            let mut w = sink(None, out_dir, "bessel.txt")?;
            writeln!(w, "{}", bessel_i(n, r)?)?;
            w.flush()?;
        }
        (None, n_max) => {
            let n_max = n_max.unwrap_or_else(|| sakaguchi::bessel::default_order(r));
            let table = bessel_i_range(n_max, r)?;
            let full = sakaguchi::bessel::BesselEvaluator::with_default_order(r)?;
            let identity = if r.abs() <= sakaguchi::bessel::SERIES_LIMIT {
                alternating_square_sum_residual(&full)
            } else {
                f64::NAN
            };
            let meta = Metadata::new("bessel")
                .with("r", r)
                .with("n_max", n_max)
                .with("identity_residual", identity);
            let mut w = sink(None, out_dir, "bessel.csv")?;
            output::write_table(
                &mut w,
                &meta,
                &["n", "value"],
                table.values().iter().enumerate().map(|(i, &v)| [i as f64, v]),
            )?;
            w.flush()?;
            eprintln!("sum (-1)^n I_n(r)^2 - 1 = {identity:e}");
        }
    }
    Ok(())
}

fn cmd_avm(k: f64, r: f64, grid: Option<usize>, output_path: Option<&Path>, out_dir: Option<&Path>) -> CmdResult {
    if !k.is_finite() || !r.is_finite() {
        return Err(Failure::Numerical("k and r must be finite".into()));
    }
    let point = AvmPoint::new(k, r);
    let f = avm_functionals(point);
    let meta = Metadata::new("functionals").with("k", k).with("r", r);
    // with a grid and nowhere else to put them, the functionals ride along in
    // the density metadata so stdout carries a single table
    let separate = grid.is_none() || output_path.is_some() || out_dir.is_some();
    if separate {
        let mut w = sink(output_path, out_dir, "functionals.csv")?;
        output::write_functionals(&mut w, &meta, &[output::functional_row(k, r, &f)])?;
        w.flush()?;
    }
    if let Some(m) = grid {
        if m == 0 {
            return Err(Failure::Numerical("grid needs at least one node".into()));
        }
        let d = avm_density(point);
        let mut meta = Metadata::new("density")
            .with("k", k)
            .with("r", r)
            .with("nodes", m)
            .with("c0", d.c0())
            .with("flux_constant", d.flux_constant());
        if !separate {
            for (name, value) in output::FUNCTIONAL_COLUMNS
                .iter()
                .zip(output::functional_row(k, r, &f))
                .skip(2)
            {
                meta.push(name, value);
            }
        }
        let mut w = sink(None, out_dir, "density.csv")?;
        let rows = sakaguchi::quadrature::periodic_nodes(m).map(|phi| [phi, d.chi(phi), d.pdf(phi)]);
        output::write_table(&mut w, &meta, &["phi", "chi", "rho"], rows)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_solve(mu: f64, alpha: f64, output_path: Option<&Path>, out_dir: Option<&Path>) -> CmdResult {
    let solution = solve_selfconsistency(mu, alpha)?;
    let mut meta = Metadata::new("branch").with("mu", mu).with("alpha", alpha);
    let points = match solution {
        Some(p) => {
            meta.push("result", "coherent traveling wave");
            vec![p]
        }
        None => {
            meta.push("result", "incoherent only");
            Vec::new()
        }
    };
    let mut w = sink(output_path, out_dir, "solve.csv")?;
    output::write_branch(&mut w, &meta, &points)?;
    w.flush()?;
    Ok(())
}

fn cmd_trace(alpha: f64, r_max: f64, n: usize, output_path: Option<&Path>, out_dir: Option<&Path>) -> CmdResult {
    let curve = trace_branch(alpha, r_max, n)?;
    let max_iterations = curve.iterations.iter().copied().max().unwrap_or(0);
    let mut meta = Metadata::new("branch")
        .with("alpha", alpha)
        .with("r_max", r_max)
        .with("points", n)
        .with("r_step", curve.r_step)
        .with("max_inner_iterations", max_iterations);
    if let Some((i, e)) = &curve.failure {
        meta.push("failure_index", i);
        meta.push("failure", e);
    }
    let mut w = sink(output_path, out_dir, "trace.csv")?;
    output::write_branch(&mut w, &meta, &curve.points)?;
    w.flush()?;
    match curve.failure {
        Some((i, e)) => Err(Failure::Numerical(format!("branch tracing stopped at point {i}: {e}"))),
        None => Ok(()),
    }
}

fn cmd_pde(a: &PdeArgs, out_dir: Option<&Path>) -> CmdResult {
    let alpha = a.alpha.radians();
    if a.n_modes == 0 {
        return Err(Failure::Numerical("need at least one Fourier mode".into()));
    }
    let params = Params {
        mu: a.mu,
        alpha,
        d: a.d,
    };
    let initial = SpectralState::perturbed(params, a.n_modes, a.epsilon);
    let (diag, end) = meanfield::evolve(&initial, a.t_end, a.dt, a.observe_every)?;
    let meta = Metadata::new("pde")
        .with("mu", a.mu)
        .with("alpha", alpha)
        .with("D", a.d)
        .with("n_modes", a.n_modes)
        .with("dt", a.dt)
        .with("T", a.t_end)
        .with("epsilon", a.epsilon)
        .with("observe_every", a.observe_every)
        .with("initial", "uniform + epsilon cos(theta)")
        .with("scheme", "integrating-factor RK4");
    let mut w = sink(a.out.output.as_deref(), out_dir, "pde.csv")?;
    output::write_pde(&mut w, &meta, &diag)?;
    w.flush()?;
    let coefficients = a
        .coefficients
        .clone()
        .or_else(|| out_dir.map(|_| PathBuf::from("coefficients.csv")));
    if let Some(path) = coefficients {
        let mut w = sink(Some(&path), out_dir, "coefficients.csv")?;
        let meta = meta.with("t", end.t);
        output::write_coefficients(&mut w, &meta, &end)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_particles(a: &ParticleArgs, out_dir: Option<&Path>) -> CmdResult {
    let alpha = a.alpha.radians();
    if a.n == 0 {
        return Err(Failure::Numerical("need at least one oscillator".into()));
    }
    let params = ParticleParams {
        mu: a.mu,
        alpha,
        d: a.d,
    };
    let cfg = SimulationConfig {
        t_end: a.t_end,
        dt: a.dt,
        observe_every: a.observe_every,
        transient: a.transient.unwrap_or(0.5 * a.t_end),
        bins: a.bins,
    };
    let mut ens = ParticleEnsemble::new(params, a.n, a.seed);
    let diag = particles::simulate(&mut ens, cfg)?;
    let meta = Metadata::new("particles")
        .with("mu", a.mu)
        .with("alpha", alpha)
        .with("D", a.d)
        .with("N", a.n)
        .with("dt", a.dt)
        .with("T", a.t_end)
        .with("seed", a.seed)
        .with("rng", particles::RNG_NAME)
        .with("observe_every", a.observe_every)
        .with("transient", cfg.transient)
        .with("bins", a.bins)
        .with("mean_R", diag.mean_r())
        .with("stderr_R", diag.standard_error_r());
    let mut w = sink(a.out.output.as_deref(), out_dir, "particles.csv")?;
    output::write_particles(&mut w, &meta, &diag)?;
    w.flush()?;
    let histogram = a
        .histogram
        .clone()
        .or_else(|| out_dir.map(|_| PathBuf::from("histogram.csv")));
    if let Some(path) = histogram {
        let emp = particles::empirical_density(&diag, None)?;
        let meta = meta
            .with("frame", "co-rotating with Psi")
            .with("l1_to_uniform", emp.l1_distance);
        let mut w = sink(Some(&path), out_dir, "histogram.csv")?;
        output::write_histogram(&mut w, &meta, &emp)?;
        w.flush()?;
    }
    Ok(())
}

fn cmd_verify(suite: Suite) -> CmdResult {
    let checks = verify::run_suite(suite);
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{c}")?;
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    writeln!(out, "{} checks, {} failed", checks.len(), failed)?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
