use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ptone_cli::commands;
use ptone_cli::config::{ConfigFile, ListSpec};
use ptone_cli::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "ptone", version, about = "First Dirichlet p-Laplacian eigenvalues of radial models and their certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues over the (p, m, c, r) grid.
    Eig(Opts),
    /// Critical radius of the restriction inequality.
    Rstar(Opts),
    /// Lower-bound certificates next to the eigenvalue.
    Barta(Opts),
    /// Transplanted-eigenfunction certificates on warped balls.
    Compare(Opts),
    /// Bands on the plane and the catenoid.
    Surface(Opts),
    /// Statistics of the logarithmic transform.
    Kazdan(Opts),
    /// Eigenvalue, certificates and Rayleigh estimate in one table.
    Sweep(Opts),
    /// The acceptance suite.
    Selftest(Opts),
}

#[derive(Args, Clone, Default)]
struct Opts {
    /// JSON config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// p values, e.g. `2,3` or `1.5:3:0.5`.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    m: Option<String>,
    /// Curvatures of the model space.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Radii.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Perturbation amplitudes for `compare`.
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Grid intervals.
    #[arg(long)]
    n: Option<usize>,
    /// Relative eigenvalue tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Mean-curvature bound used by `barta`.
    #[arg(long)]
    h: Option<f64>,
    /// Comma-separated surfaces for `surface`.
    #[arg(long)]
    surfaces: Option<String>,
    /// Tabulated warping profile (`t,f` CSV) for `compare`.
    #[arg(long)]
    profile_csv: Option<PathBuf>,
    /// Criterion id, tag or name fragment for `selftest`.
    #[arg(long)]
    filter: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

impl Opts {
    fn into_config(self) -> CliResult<ConfigFile> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            p: self.p.map(ListSpec::Text),
            m: self.m.map(ListSpec::Text),
            c: self.c.map(ListSpec::Text),
            r: self.r.map(ListSpec::Text),
            eps: self.eps.map(ListSpec::Text),
            n: self.n,
            tol: self.tol,
            seed: self.seed,
            h: self.h,
            surfaces: self.surfaces.map(|s| s.split(',').map(|x| x.trim().to_string()).collect()),
            profile_csv: self.profile_csv,
            filter: self.filter,
            fixtures: None,
            out: self.out,
            json: self.json,
        };
        Ok(base.overlay(flags))
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let (name, opts) = match cli.command {
        Command::Eig(o) => ("eig", o),
        Command::Rstar(o) => ("rstar", o),
        Command::Barta(o) => ("barta", o),
        Command::Compare(o) => ("compare", o),
        Command::Surface(o) => ("surface", o),
        Command::Kazdan(o) => ("kazdan", o),
        Command::Sweep(o) => ("sweep", o),
        Command::Selftest(o) => ("selftest", o),
    };
    let file = opts.into_config()?;
    let pool = commands::pool()?;
    let (cfg, report) = pool.install(|| commands::run(name, file))?;
    report.table.emit(cfg.out.as_deref(), cfg.json.as_deref())?;
    if report.failures.is_empty() {
        Ok(())
    } else {
        for f in &report.failures {
            eprintln!("FAILED {f}");
        }
        Err(CliError::Acceptance(format!("{} check(s) failed", report.failures.len())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptone: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
