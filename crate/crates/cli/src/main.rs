//! `divgeo`: divergence fits, quantum relative-entropy identities and weak
//! values from the shell. Reports are JSON on standard output (or `--out`);
//! failures are `{"error": {"kind", "detail"}}` on standard error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod io;

use io::Failure;

#[derive(Parser, Debug)]
#[command(name = "divgeo", version, about = "Divergence geometry toolkit")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Parse and shape-check the inputs, then stop.
    #[arg(long, global = true)]
    validate_only: bool,

    /// Gradient tolerance for the iterative fits.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Iteration cap for the iterative fits.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Seed for sampling commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fit (beta, mu) to occupation data.
    FitBose {
        #[arg(long)]
        input: PathBuf,
    },
    /// Metric, connection and covariant Hessian at a point.
    BoseGeometry {
        /// Spectrum with occupations and/or a point (beta, mu).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, requires = "mu")]
        beta: Option<f64>,
        #[arg(long, requires = "beta", allow_hyphen_values = true)]
        mu: Option<f64>,
    },
    /// Quantum relative entropy D(sigma || rho).
    Relent {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        rho: PathBuf,
    },
    /// Project a state onto an exponential family.
    Qproject {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Pythagorean decomposition, through a diagonal rho or onto a model.
    Pythagoras {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, conflicts_with = "model", required_unless_present = "model")]
        rho: Option<PathBuf>,
        #[arg(long)]
        model: Option<PathBuf>,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Conditioned model state, and the conditioned objectives when sigma is given.
    CondManifold {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        sigma: Option<PathBuf>,
        #[command(flatten)]
        basis: BasisArg,
    },
    /// Divergence along a path towards the border of the state space.
    BorderProbe {
        #[arg(long)]
        sigma: PathBuf,
        #[arg(long, value_enum, default_value_t = PathFamily::Canonical)]
        path_family: PathFamily,
        /// Strictly decreasing t values, e.g. `2^-10..2^-20` or `0.1,0.01`.
        #[arg(long, default_value = "2^-10..2^-20")]
        t_grid: String,
    },
    /// Weak value of an observable for a pre/post selection.
    WeakValue {
        /// Selection file with both vectors.
        #[arg(long, conflicts_with_all = ["pre", "post"], required_unless_present_all = ["pre", "post"])]
        input: Option<PathBuf>,
        #[arg(long, requires = "post")]
        pre: Option<PathBuf>,
        #[arg(long, requires = "pre")]
        post: Option<PathBuf>,
        #[arg(long)]
        op: PathBuf,
    },
    /// |weak value| and overlap probability along the delta family.
    AmpScan {
        #[arg(long, value_enum, default_value_t = Family::Delta)]
        family: Family,
        /// Observable; sigma_z when omitted.
        #[arg(long)]
        op: Option<PathBuf>,
        /// Distances eps = 1 - delta from the orthogonal selection.
        #[arg(long, default_value = "2^-1..2^-30")]
        eps: String,
    },
    /// Average of independent occupation draws at (beta, mu).
    SampleBose {
        /// Spectrum with beta and mu.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        shots: usize,
    },
}

#[derive(Args, Debug)]
struct BasisArg {
    /// Conditioning basis as a complex matrix of column vectors; standard basis when omitted.
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PathFamily {
    /// diag(t, (1 - t)/(d - 1), ...)
    Canonical,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Family {
    /// pre (1, delta), post (1, -1)
    Delta,
}

fn report_failure(failure: &Failure) -> ExitCode {
    let json = serde_json::to_string(&failure.to_json()).expect("error serializes");
    eprintln!("{json}");
    ExitCode::from(failure.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DIVGEO_LOG", "off")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            return report_failure(&Failure::Input {
                kind: "UsageError",
                detail: e.render().to_string().trim().to_string(),
            })
        }
    };
    log::info!("running {:?}", cli.command);
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            log::info!("failed: {failure:?}");
            report_failure(&failure)
        }
    }
}
