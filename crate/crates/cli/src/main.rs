use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rootgap_core::report::{
    run_bounds, run_roots, run_verify, GridEntry, NRange, OutputFormat, SweepConfig, VerifyOptions, DEFAULT_N_MAX,
};
use rootgap_core::{Error, FamilyKind, PolynomialFamily, DEFAULT_TOLERANCE};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Roots of classical orthogonal polynomials, the spectra of their inverse
/// covariance matrices, and root-gap bounds.
#[derive(Debug, Parser)]
#[command(name = "rootgap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ordered roots and consecutive gaps.
    Roots(SweepArgs),
    /// Spectra, trace identities and matrix-route consistency checks.
    Verify {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Perturb one matrix entry before checking (negative control).
        #[arg(long, hide = true)]
        corrupt_entry: bool,
    },
    /// Every bound and comparator, with sharpness summaries.
    Bounds(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    Hermite,
    Laguerre,
    Jacobi,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Restrict to one family; all three when omitted.
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Laguerre parameters (comma separated or repeated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    nu: Vec<f64>,
    /// Jacobi α values, paired with --beta.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    alpha: Vec<f64>,
    /// Jacobi β values, paired with --alpha.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    beta: Vec<f64>,
    /// A single N.
    #[arg(long, conflicts_with_all = ["n_min", "n_max"])]
    n: Option<usize>,
    #[arg(long)]
    n_min: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long, default_value_t = 1)]
    n_step: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Relative tolerance for bounds and identities.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

impl SweepArgs {
    fn kinds(&self) -> Vec<FamilyKind> {
        match self.family {
            Some(Family::Hermite) => vec![FamilyKind::Hermite],
            Some(Family::Laguerre) => vec![FamilyKind::Laguerre],
            Some(Family::Jacobi) => vec![FamilyKind::Jacobi],
            None => vec![FamilyKind::Hermite, FamilyKind::Laguerre, FamilyKind::Jacobi],
        }
    }

    fn families(&self, kind: FamilyKind) -> Result<Vec<PolynomialFamily>, String> {
        let defaults: Vec<PolynomialFamily> = SweepConfig::default_grid(kind).into_iter().map(|e| e.family).collect();
        match kind {
            FamilyKind::Hermite => Ok(defaults),
            FamilyKind::Laguerre if self.nu.is_empty() => Ok(defaults),
            FamilyKind::Laguerre => Ok(self.nu.iter().map(|&nu| PolynomialFamily::Laguerre { nu }).collect()),
            FamilyKind::Jacobi => match (self.alpha.len(), self.beta.len()) {
                (0, 0) => Ok(defaults),
                (a, b) if a == b => Ok(self
                    .alpha
                    .iter()
                    .zip(&self.beta)
                    .map(|(&alpha, &beta)| PolynomialFamily::Jacobi { alpha, beta })
                    .collect()),
                (1, _) => {
                    Ok(self.beta.iter().map(|&beta| PolynomialFamily::Jacobi { alpha: self.alpha[0], beta }).collect())
                }
                (_, 1) => {
                    Ok(self.alpha.iter().map(|&alpha| PolynomialFamily::Jacobi { alpha, beta: self.beta[0] }).collect())
                }
                (a, b) => Err(format!("--alpha has {a} values but --beta has {b}")),
            },
        }
    }

    fn n_range(&self, kind: FamilyKind) -> Result<NRange, Error> {
        if let Some(n) = self.n {
            return NRange::new(n, n, 1);
        }
        let default_min = if kind == FamilyKind::Hermite { 2 } else { 1 };
        let min = self.n_min.unwrap_or(default_min);
        let max = self.n_max.unwrap_or(DEFAULT_N_MAX.max(min));
        NRange::new(min, max, self.n_step)
    }

    fn config(&self) -> Result<SweepConfig, String> {
        let kinds = self.kinds();
        if self.family.is_some() {
            let kind = kinds[0];
            if kind != FamilyKind::Laguerre && !self.nu.is_empty() {
                return Err("--nu only applies to --family laguerre".into());
            }
            if kind != FamilyKind::Jacobi && !(self.alpha.is_empty() && self.beta.is_empty()) {
                return Err("--alpha/--beta only apply to --family jacobi".into());
            }
        }
        let mut grid = Vec::new();
        for kind in kinds {
            let n = self.n_range(kind).map_err(|e| e.to_string())?;
            for family in self.families(kind)? {
                grid.push(GridEntry { family, n });
            }
        }
        let format = match self.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        };
        SweepConfig::new(grid, self.tol, format).map_err(|e| e.to_string())
    }

    fn emit(&self, text: &str) -> io::Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text),
            None => io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}

fn render(config: &SweepConfig, csv: impl FnOnce() -> String, json: impl FnOnce(&SweepConfig) -> String) -> String {
    match config.format {
        OutputFormat::Csv => csv(),
        OutputFormat::Json => json(config),
    }
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    let (args, corrupt) = match &cli.command {
        Command::Roots(a) | Command::Bounds(a) => (a, false),
        Command::Verify { sweep, corrupt_entry } => (sweep, *corrupt_entry),
    };
    let config = args.config().map_err(|e| (EXIT_USAGE, e))?;
    let numerical = |e: Error| (EXIT_NUMERICAL, e.to_string());

    let (text, failures) = match &cli.command {
        Command::Roots(_) => {
            let out = run_roots(&config).map_err(numerical)?;
            (render(&config, || out.to_csv(), |c| out.to_json(c)), 0)
        }
        Command::Verify { .. } => {
            let out = run_verify(&config, VerifyOptions { corrupt_entry: corrupt }).map_err(numerical)?;
            for row in out.rows.iter().filter(|r| !r.pass) {
                eprintln!(
                    "FAILED {} {} N={} {}: {:e} > {:e}",
                    row.family, row.params, row.n, row.check, row.value, row.tolerance
                );
            }
            (render(&config, || out.to_csv(), |c| out.to_json(c)), out.failures())
        }
        Command::Bounds(_) => {
            let out = run_bounds(&config).map_err(numerical)?;
            for row in out.rows.iter().filter(|r| r.is_violation()) {
                eprintln!(
                    "VIOLATED {} {} N={} {} index={:?}: slack {:e}",
                    row.family.kind().name(),
                    row.family.params_label(),
                    row.n,
                    row.bound_id,
                    row.index,
                    row.slack
                );
            }
            (render(&config, || out.to_csv(), |c| out.to_json(c)), out.violations())
        }
    };
    args.emit(&text).map_err(|e| (EXIT_NUMERICAL, format!("cannot write output: {e}")))?;
    Ok(if failures > 0 { EXIT_CHECK_FAILED } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            eprintln!("rootgap: {msg}");
            ExitCode::from(code)
        }
    }
}
