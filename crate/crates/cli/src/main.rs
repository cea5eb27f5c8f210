mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "quiver-dt", version, about = "Wall-crossing factorizations for acyclic quivers, computed exactly")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Quiver file (JSON with `vertices`, `arrows`, `theta`).
    #[arg(long, global = true)]
    pub quiver: Option<PathBuf>,

    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 6)]
    pub order: u32,

    /// Dimension vector, comma separated in the order the file lists the vertices.
    #[arg(long, global = true)]
    pub dim: Option<String>,

    /// Restrict to one slope, written `a/b` or `a`.
    #[arg(long, global = true)]
    pub slope: Option<String>,

    /// Field size for the point-counting oracle.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(2..=3))]
    pub q: Option<u32>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Representation points the oracle may enumerate per dimension vector.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget_reps: u128,

    /// Subspace tuples the oracle may enumerate per representation.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub budget_subspaces: u128,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print e_d and p_d for one dimension vector or all of total dimension at most N.
    Hn,
    /// Per-slope Poincare polynomials and Euler characteristics of framed smooth models.
    Wallcross,
    /// Run verification suites and exit nonzero on any failure.
    Verify {
        /// Comma separated: hn, factorization, integrality, poisson, oracle, dynkin, kronecker, or all.
        #[arg(long)]
        suites: Option<String>,
        /// JSON previously written by `hn` or `wallcross --format json`, checked against a recomputation.
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Exponents c(mu,k) and d(a,b) for the Kronecker quiver K_m.
    Kronecker {
        #[arg(long)]
        m: usize,
    },
    /// Factor the vertex composite of a Dynkin quiver into positive-root automorphisms.
    Dynkin {
        /// A<n>, D<n> or E<n>.
        #[arg(long = "type")]
        kind: String,
        #[arg(long, value_enum, default_value_t = Orientation::Linear)]
        orientation: Orientation,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Orientation {
    Linear,
    Alternating,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", render::to_pretty(&out.json)),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
