//! Command-line front end for `nahm-core`.
//!
//! Algebras are given as `catalog:NAME` or as a path to a JSON algebra
//! document (see [`document`]). Exit codes: 0 when every check passes,
//! 1 when a check fails, 2 on bad input.

pub mod commands;
pub mod document;
pub mod report;

use clap::{Parser, Subcommand};

pub use report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad arguments, unreadable or invalid input, unmet preconditions.
    #[error("{0}")]
    Input(String),
    /// A computation that ran but could not produce its result.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<nahm_core::Error> for CliError {
    fn from(e: nahm_core::Error) -> Self {
        use nahm_core::Error as E;
        match e {
            E::Numerical(_) | E::Inconsistent(_) => CliError::Failure(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "nahm",
    version,
    about = "Exact and numerical computations in Nahm algebras A(g)"
)]
pub struct Cli {
    /// Print the JSON envelope instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check antisymmetry and the Jacobi identity of an algebra.
    Validate { source: String },
    /// Structure of the Lie algebra g.
    Info { source: String },
    /// Structure of the Nahm algebra A(g).
    NahmInfo { source: String },
    /// Exact product XY in A(g).
    Product {
        source: String,
        /// Element as `a,b,..;c,d,..;e,f,..` with rational entries.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Exact basis of Der A(g).
    Derivations {
        source: String,
        /// Compare Der A(g) with diag(ad g) + so(3) (g simple).
        #[arg(long)]
        check_decomposition: bool,
    },
    /// Find an idempotent E = E² in A(g).
    Idempotent {
        source: String,
        /// Use Newton's method from a seeded random start.
        #[arg(long)]
        newton: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Integrate dX/dt = X² from P.
    Integrate {
        source: String,
        /// Initial element, or `idempotent` for the first basis idempotent.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        t_end: f64,
        /// Comma-separated: potential, square_norm, confinement.
        #[arg(long, value_delimiter = ',')]
        monitors: Vec<String>,
        /// Write the trajectory CSV here.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long)]
        rel_tol: Option<f64>,
        #[arg(long)]
        abs_tol: Option<f64>,
    },
    /// Run every structural and dynamical check for an algebra.
    CheckTheorems {
        source: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Skip the integrator-based checks.
        #[arg(long)]
        no_flow: bool,
    },
    /// List the built-in algebras.
    Catalog,
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    use commands as c;
    match &cli.command {
        Command::Validate { source } => c::validate(source),
        Command::Info { source } => c::info(source),
        Command::NahmInfo { source } => c::nahm_info(source),
        Command::Product { source, x, y } => c::product(source, x, y),
        Command::Derivations {
            source,
            check_decomposition,
        } => c::derivations(source, *check_decomposition),
        Command::Idempotent {
            source,
            newton,
            seed,
            tol,
        } => c::idempotent(source, *newton, *seed, *tol),
        Command::Integrate {
            source,
            p,
            t_end,
            monitors,
            out,
            rel_tol,
            abs_tol,
        } => c::integrate(c::IntegrateArgs {
            source,
            p,
            t_end: *t_end,
            monitors,
            out: out.as_deref(),
            rel_tol: *rel_tol,
            abs_tol: *abs_tol,
        }),
        Command::CheckTheorems { source, seed, no_flow } => c::check_theorems(source, *seed, !*no_flow),
        Command::Catalog => c::catalog_listing(),
    }
}

/// Full command-line behavior: returns the exit code, stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (2, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    match execute(&cli) {
        Ok(report) => (report.exit_code(), report.render(cli.json), String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
