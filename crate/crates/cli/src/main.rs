//! Command-line front end for the rational-model toolkit: exact spectra,
//! flag checks, QES blocks, hidden-algebra verification, Pol₂ decomposition,
//! commutant discovery and Cartesian cross-checks, with versioned
//! machine-readable reports.

mod commands;
mod report;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use report::JobSpec;

#[derive(Parser)]
#[command(
    name = "rqes",
    about = "Exact spectra, flags, hidden algebras and cross-checks of rational (quasi)-exactly-solvable models",
    version
)]
struct Cli {
    /// JSON job file supplying the whole job (alternative to a subcommand)
    #[arg(long, global = true)]
    job: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_parser = ["json", "csv", "text"])]
    format: Option<String>,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Include wall-clock timing in the report (breaks byte determinism)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Model name: on, z2n, calogero, bcn, g2, h3, h4
    #[arg(long)]
    model: Option<String>,
    /// Body count N for the N-parameterized families
    #[arg(long)]
    n_bodies: Option<usize>,
    /// Oscillator frequency ω as an exact rational "p/q"
    #[arg(long)]
    omega: Option<String>,
    /// Coupling ν as an exact rational "p/q"
    #[arg(long)]
    nu: Option<String>,
    /// Second BC_N coupling ν₂
    #[arg(long)]
    nu2: Option<String>,
    /// G2 three-body coupling μ
    #[arg(long)]
    mu: Option<String>,
    /// QES coefficient a
    #[arg(long)]
    a: Option<String>,
    /// QES (or shift) coefficient γ
    #[arg(long)]
    gamma: Option<String>,
    /// QES block degree k
    #[arg(long)]
    k: Option<u32>,
    /// Weighted degree bound n
    #[arg(long, allow_negative_numbers = true)]
    degree: Option<i64>,
    /// Random seed for sample points
    #[arg(long)]
    seed: Option<u64>,
    /// Number of sample points
    #[arg(long)]
    points: Option<usize>,
    /// Also compute exact eigenfunctions (spectrum)
    #[arg(long)]
    eigenfunctions: bool,
    /// Read the H3 degree-6 invariant with its tail as a monomial
    #[arg(long)]
    tau2_homogeneous: bool,
    /// Generator set for algebra checks: gl or g2
    #[arg(long)]
    set: Option<String>,
    /// Dimension d of the gl(d+1) realization
    #[arg(long)]
    dim: Option<usize>,
    /// Representation mark n of the generator set
    #[arg(long)]
    mark: Option<i64>,
    /// Commutant: max total degree of second-order coefficients
    #[arg(long)]
    max_coeff_degree: Option<u32>,
    /// Commutant: max total degree of first-order coefficients
    #[arg(long)]
    first_order_degree: Option<u32>,
    /// Commutant: force the radial row and radial first-order term to zero
    #[arg(long)]
    zero_radial: bool,
    /// Cross-check selection: e0, gauge, invariants, qes, all
    #[arg(long)]
    check: Option<String>,
    /// Cross-check: weighted-degree bound for gauge monomials
    #[arg(long)]
    wdeg_max: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact eigenvalues, degeneracies and the linear-form comparison
    Spectrum(CommonArgs),
    /// Invariant-flag preservation with witness reporting
    FlagCheck(CommonArgs),
    /// Finite QES block, characteristic polynomial, root brackets, escape
    Qes(CommonArgs),
    /// Generator-set closure, invariance and nilpotency checks
    Algebra(CommonArgs),
    /// Degree-2 decomposition over hidden-algebra generators
    Decompose(CommonArgs),
    /// Discovery of commuting second-order operators
    Commutant(CommonArgs),
    /// Numeric Cartesian cross-checks (hyper-dual derivatives)
    Xcheck(CommonArgs),
}

fn job_from_args(sub: &str, a: &CommonArgs) -> JobSpec {
    JobSpec {
        subcommand: sub.to_string(),
        model: a.model.clone(),
        n_bodies: a.n_bodies,
        omega: a.omega.clone(),
        nu: a.nu.clone(),
        nu2: a.nu2.clone(),
        mu: a.mu.clone(),
        a: a.a.clone(),
        gamma: a.gamma.clone(),
        k: a.k,
        degree: a.degree,
        seed: a.seed,
        points: a.points,
        format: None,
        eigenfunctions: if a.eigenfunctions { Some(true) } else { None },
        tau2_homogeneous: if a.tau2_homogeneous { Some(true) } else { None },
        set: a.set.clone(),
        dim: a.dim,
        mark: a.mark,
        max_coeff_degree: a.max_coeff_degree,
        first_order_degree: a.first_order_degree,
        zero_radial: if a.zero_radial { Some(true) } else { None },
        check: a.check.clone(),
        wdeg_max: a.wdeg_max,
    }
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = Cli::parse();
    let started = Instant::now();

    let job = match (&cli.job, &cli.command) {
        (Some(path), None) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: cannot read job file {}: {e}", path.display());
                    return 2;
                }
            };
            match serde_json::from_str::<JobSpec>(&text) {
                Ok(j) => j,
                Err(e) => {
                    eprintln!("error: invalid job file: {e}");
                    return 2;
                }
            }
        }
        (None, Some(cmd)) => match cmd {
            Command::Spectrum(a) => job_from_args("spectrum", a),
            Command::FlagCheck(a) => job_from_args("flag-check", a),
            Command::Qes(a) => job_from_args("qes", a),
            Command::Algebra(a) => job_from_args("algebra", a),
            Command::Decompose(a) => job_from_args("decompose", a),
            Command::Commutant(a) => job_from_args("commutant", a),
            Command::Xcheck(a) => job_from_args("xcheck", a),
        },
        (Some(_), Some(_)) => {
            eprintln!("error: --job and a subcommand are mutually exclusive");
            return 2;
        }
        (None, None) => {
            eprintln!("error: a subcommand or --job is required (see --help)");
            return 2;
        }
    };

    let format = cli
        .format
        .clone()
        .or_else(|| job.format.clone())
        .unwrap_or_else(|| "json".to_string());

    match commands::run(&job) {
        Ok(mut rep) => {
            if cli.timing {
                rep.timing_ms = Some(started.elapsed().as_millis() as u64);
            }
            let rendered = rep.render(&format);
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{rendered}");
            }
            rep.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
