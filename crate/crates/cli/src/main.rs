use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wh_cli::{
    exit, run_approx, run_check, run_job, run_norms, ApproxConfig, ApproxInput, CliError, JobConfig, NormsConfig, Sweep,
};
use wh_core::Tolerances;

#[derive(Parser)]
#[command(
    name = "whfact",
    version,
    about = "Wiener-Hopf factorization of homogeneous matrix symbols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factorize a symbol over one or more directions ω.
    Factorize(JobArgs),
    /// Validate a symbol and report its Jordan data and total indices.
    Check(JobArgs),
    /// Bernstein approximation chains and their rational transforms.
    Approx(ApproxArgs),
    /// W^r norms and membership test of a rational function of t.
    Norms(NormsArgs),
}

#[derive(Args)]
struct JobArgs {
    /// builtin:NAME or path to a symbol spec (JSON).
    #[arg(long)]
    symbol: Option<String>,
    /// Number of directions on a great circle of S^{n−2}.
    #[arg(long)]
    omega_sweep: Option<usize>,
    /// Ambient dimension n.
    #[arg(long)]
    space_dim: Option<usize>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(8..=20))]
    grid_log2: Option<u32>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    tol_fact: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file with the same fields; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl JobArgs {
    fn into_config(self) -> Result<JobConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => JobConfig::from_file(p)?,
            None => JobConfig::default(),
        };
        if let Some(s) = self.symbol {
            cfg.symbol = s;
        }
        if let Some(n) = self.omega_sweep {
            cfg.omega = None;
            let mut sweep = cfg.sweep.take().unwrap_or(Sweep {
                count: n,
                u: None,
                v: None,
            });
            sweep.count = n;
            cfg.sweep = Some(sweep);
        }
        if let Some(n) = self.space_dim {
            cfg.space_dim = n;
        }
        if let Some(g) = self.grid_log2 {
            cfg.log2_grid = g;
        }
        if self.r.is_some() {
            cfg.r = self.r;
        }
        if let Some(t) = self.tol_fact {
            cfg.tolerances.tol_fact = t;
        }
        if let Some(o) = self.out {
            cfg.out = o;
        }
        Ok(cfg)
    }
}

#[derive(Args)]
struct ApproxArgs {
    /// Support [a, b] of the bump profile.
    #[arg(long, num_args = 2, value_names = ["A", "B"], default_values_t = [1.0, 2.0])]
    support: Vec<f64>,
    /// Run the full cutoff/mollifier chain on e^{−|x|} with this ε instead.
    #[arg(long)]
    exp_decay_eps: Option<f64>,
    /// Mollifier width for --exp-decay-eps.
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 80])]
    degrees: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    r: usize,
    /// Approximate the θ⁻ side.
    #[arg(long)]
    flip: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct NormsArgs {
    /// Rational expression in t, e.g. "1/(t^2 + 1)".
    #[arg(long)]
    expr: String,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(8..=20))]
    grid_log2: u32,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Factorize(args) => {
            let summary = run_job(&args.into_config()?)?;
            for d in &summary.directions {
                println!(
                    "omega #{:03}: kappa_total {} kappa {:?} winding {:.6} residual {:.2e}",
                    d.index, d.kappa_total, d.kappa_partial, d.winding, d.residual
                );
            }
        }
        Command::Check(args) => {
            let report = run_check(&args.into_config()?)?;
            println!(
                "{}: valid (min |det| {:.3e}, homogeneity defect {:.1e}), delta0 {:.4}",
                report.symbol,
                report.validation.min_abs_det,
                report.validation.homogeneity_defect,
                report.jordan.delta0
            );
            for i in &report.indices {
                println!(
                    "omega #{:03}: kappa_total {} winding {:.6}",
                    i.index, i.total.kappa_total, i.total.winding
                );
            }
        }
        Command::Approx(args) => {
            let input = match args.exp_decay_eps {
                Some(eps) => ApproxInput::ExpDecay { eps, delta: args.delta },
                None => ApproxInput::Bump {
                    a: args.support[0],
                    b: args.support[1],
                },
            };
            let cfg = ApproxConfig {
                input,
                degrees: args.degrees,
                r: args.r,
                flip: args.flip,
                out: args.out,
            };
            for s in run_approx(&cfg)? {
                println!(
                    "M = {:>3}: sup-error {:.3e}, L1 error {:.3e}, bounds {}",
                    s.degree,
                    s.eps,
                    s.l1_error,
                    if s.bounds_hold { "hold" } else { "violated" }
                );
            }
        }
        Command::Norms(args) => {
            let cfg = NormsConfig {
                expr: args.expr,
                r: args.r,
                delta: args.delta,
                log2_grid: args.grid_log2,
                tolerances: Tolerances::default(),
                out: args.out,
            };
            let rep = run_norms(&cfg)?;
            println!(
                "W^{} norm {:.6e}; membership (delta {}): {}",
                rep.norms.r, rep.norms.total, cfg.delta, rep.membership.pass
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
