//! Command-line front-end: `kernel`, `solve`, `sweep`, `bifurcate`, `verify`.
//!
//! Exit codes: 0 success, 1 acceptance failure, 2 usage or parameter error,
//! 3 numerical failure, 4 partial results. The worker-thread count is read
//! from `FRACYAMABE_THREADS`.

pub mod config;
pub mod output;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bifurcation::{find_l0, Method};
use crate::error::Error;
use crate::kernel::{kernel_closed, kernel_direct, kernel_periodized, KernelParams, ModelParams};
use crate::minimize::{sweep_l, sweep_refined, Classification, InitKind, RunSummary, SolveConfig, SweepRecord};
use crate::verify;

use config::ConfigFile;
use output::{csv_header, emit, num, profile_csv, to_json, ProfileBody};

pub const THREADS_ENV: &str = "FRACYAMABE_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Numerical(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Model(e) if e.is_parameter_error() => 2,
            CliError::Model(_) | CliError::Numerical(_) => 3,
        }
    }
}

/// Successful completion, possibly with a non-zero exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    AcceptanceFailed,
    NotConverged,
    Partial,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::AcceptanceFailed => 1,
            Status::NotConverged => 3,
            Status::Partial => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

/// Arithmetic grid `start:stop:step`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

const MAX_GRID_POINTS: usize = 1_000_000;

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, h] = parts.as_slice() else {
            return Err(format!("grid {s:?} is not of the form start:stop:step"));
        };
        let p = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("grid {s:?}: {e}"));
        let g = GridSpec {
            start: p(a)?,
            stop: p(b)?,
            step: p(h)?,
        };
        if !(g.start.is_finite() && g.stop.is_finite() && g.step > 0.0 && g.stop >= g.start) {
            return Err(format!("grid {s:?} needs finite start <= stop and step > 0"));
        }
        if (g.stop - g.start) / g.step >= MAX_GRID_POINTS as f64 {
            return Err(format!("grid {s:?} has more than {MAX_GRID_POINTS} points"));
        }
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "fracyamabe",
    version,
    about = "Periodic solutions of the fractional Yamabe equation on the cylinder"
)]
pub struct Cli {
    /// File of `key = value` lines; explicit flags take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Dimension n [default: 3].
    #[arg(long)]
    pub n: Option<u32>,
    /// Order γ of the fractional Laplacian [default: 0.5].
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file (written atomically); stdout if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// Grid size N (power of two) [default: 256].
    #[arg(long = "N")]
    pub grid_n: Option<usize>,
    /// Tolerance on the Euler–Lagrange residual [default: 1e-10].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Seed of the randomized initialization [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Iteration cap per initialization [default: 20000].
    #[arg(long)]
    pub max_iter: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate K by closed form and by quadrature, and K_L if --L is given.
    Kernel {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Comma-separated ξ values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        xi: Vec<f64>,
        /// ξ grid `start:stop:step` [default: 0.25:10:0.25].
        #[arg(long = "xi-grid")]
        xi_grid: Option<GridSpec>,
        /// Period for the K_L column.
        #[arg(long = "L")]
        l: Option<f64>,
        /// Truncation tolerance of the periodized sum [default: 1e-15].
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Minimize the energy quotient at one period.
    Solve {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Period L.
        #[arg(long = "L")]
        l: Option<f64>,
        /// Summary JSON file; stdout if absent.
        #[arg(long, value_name = "FILE")]
        summary: Option<PathBuf>,
    },
    /// Solve over a grid of periods.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Period grid `start:stop:step`.
        #[arg(long = "L-grid")]
        l_grid: Option<GridSpec>,
        /// Bisect the constant → nonconstant flip to this width [default: 1e-3].
        #[arg(long)]
        refine: Option<f64>,
        /// Only solve on the grid points.
        #[arg(long)]
        no_refine: bool,
    },
    /// Locate the bifurcation period L0.
    Bifurcate {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// gamma, symbol or both [default: both].
        #[arg(long)]
        method: Option<Method>,
    },
    /// Run the acceptance battery.
    Verify {
        #[command(flatten)]
        output: OutputArgs,
        /// Kernel and symbol checks only.
        #[arg(long)]
        quick: bool,
        /// Comma-separated criterion ids (overrides --quick).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<u8>,
    },
}

/// Fully resolved model parameters.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub mp: ModelParams,
    pub kp: KernelParams,
    pub format: Format,
}

fn resolve_model(m: &ModelArgs, o: &OutputArgs, cfg: &ConfigFile, extended: bool) -> Result<RunConfig, CliError> {
    let n = m.n.or(cfg.n).unwrap_or(3);
    let gamma = m.gamma.or(cfg.gamma).unwrap_or(0.5);
    let mp = if extended {
        let mp = ModelParams::new_extended(n, gamma)?;
        if ModelParams::new(n, gamma).is_err() {
            log::warn!(
                "(n, gamma) = ({n}, {gamma}) lies outside n >= 2 + 2 gamma; kernel positivity and scaling are not guaranteed"
            );
        }
        mp
    } else {
        ModelParams::new(n, gamma)?
    };
    let kp = KernelParams::from_model(&mp)?;
    Ok(RunConfig {
        mp,
        kp,
        format: o.format.or(cfg.format).unwrap_or(Format::Csv),
    })
}

fn out_path<'a>(o: &'a OutputArgs, cfg: &'a ConfigFile) -> Option<&'a Path> {
    o.out.as_deref().or(cfg.out.as_deref())
}

fn solve_config(s: &SolverArgs, cfg: &ConfigFile) -> Result<SolveConfig, CliError> {
    let d = SolveConfig::default();
    let sc = SolveConfig {
        n: s.grid_n.or(cfg.grid_n).unwrap_or(d.n),
        grad_tol: s.tol.or(cfg.tol).unwrap_or(d.grad_tol),
        seed: s.seed.or(cfg.seed).unwrap_or(d.seed),
        max_iter: s.max_iter.or(cfg.max_iter).unwrap_or(d.max_iter),
        ..d
    };
    sc.validate()?;
    Ok(sc)
}

fn classification_name(c: Option<Classification>) -> &'static str {
    match c {
        Some(Classification::Constant) => "constant",
        Some(Classification::Nonconstant) => "nonconstant",
        Some(Classification::Ambiguous) => "ambiguous",
        None => "error",
    }
}

fn cmd_kernel(
    rc: &RunConfig,
    out: Option<&Path>,
    xi: &[f64],
    grid: Option<GridSpec>,
    l: Option<f64>,
    tol: f64,
) -> Result<Status, CliError> {
    let points = if !xi.is_empty() {
        xi.to_vec()
    } else {
        grid.unwrap_or(GridSpec {
            start: 0.25,
            stop: 10.0,
            step: 0.25,
        })
        .values()
    };
    if let Some(l) = l {
        if !(l > 0.0 && l.is_finite()) {
            return Err(CliError::Usage(format!("period L = {l} must be positive")));
        }
    }
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance {tol} must be positive")));
    }
    #[derive(Serialize)]
    struct Row {
        xi: f64,
        k_closed: Option<f64>,
        k_direct: f64,
        relative_gap: Option<f64>,
        #[serde(rename = "K_L", skip_serializing_if = "Option::is_none")]
        k_l: Option<f64>,
    }
    let mut rows = Vec::new();
    let mut warned_degenerate = false;
    for &x in &points {
        if x == 0.0 || !x.is_finite() {
            log::warn!("skipping singular point xi = {x}");
            continue;
        }
        let closed = match kernel_closed(&rc.kp, x) {
            Ok(v) => Some(v),
            Err(Error::DegenerateParameters { .. }) => {
                if !warned_degenerate {
                    log::warn!("closed form is degenerate for these parameters; only quadrature values are reported");
                    warned_degenerate = true;
                }
                None
            }
            Err(e) => return Err(e.into()),
        };
        let direct = kernel_direct(&rc.kp, x)?;
        let k_l = match l {
            Some(l) => match kernel_periodized(&rc.kp, l, x, tol) {
                Ok(v) => Some(v),
                Err(Error::SingularArgument(_)) => {
                    log::warn!("skipping xi = {x}: a lattice point of the period {l}");
                    continue;
                }
                Err(e) => return Err(e.into()),
            },
            None => None,
        };
        rows.push(Row {
            xi: x,
            k_closed: closed,
            k_direct: direct,
            relative_gap: closed.map(|c| ((c - direct) / c).abs()),
            k_l,
        });
    }
    let text = match rc.format {
        Format::Csv => {
            let mut fields = vec![("n", rc.mp.n.to_string()), ("gamma", num(rc.mp.gamma))];
            if let Some(l) = l {
                fields.push(("L", num(l)));
            }
            let mut s = csv_header("kernel", &fields);
            s += if l.is_some() {
                "xi,K_closed,K_direct,relative_gap,K_L\n"
            } else {
                "xi,K_closed,K_direct,relative_gap\n"
            };
            let opt = |v: Option<f64>| v.map_or("nan".to_string(), num);
            for r in &rows {
                s += &format!(
                    "{},{},{},{}",
                    num(r.xi),
                    opt(r.k_closed),
                    num(r.k_direct),
                    opt(r.relative_gap)
                );
                if let Some(v) = r.k_l {
                    s += &format!(",{}", num(v));
                }
                s.push('\n');
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                n: u32,
                gamma: f64,
                #[serde(rename = "L")]
                l: Option<f64>,
                rows: &'a [Row],
            }
            to_json(
                "kernel",
                Body {
                    n: rc.mp.n,
                    gamma: rc.mp.gamma,
                    l,
                    rows: &rows,
                },
            )?
        }
    };
    emit(out, &text)?;
    Ok(Status::Ok)
}

#[derive(Debug, Serialize)]
struct SolveSummary {
    n: u32,
    gamma: f64,
    #[serde(rename = "L")]
    l: f64,
    #[serde(rename = "N")]
    grid_n: usize,
    seed: u64,
    grad_tol: f64,
    c: f64,
    cstar: f64,
    classification: Classification,
    residual: f64,
    iterations: usize,
    converged: bool,
    amplitude: f64,
    init_used: InitKind,
    abs_projections: usize,
    runs: Vec<RunSummary>,
    /// The final iterate, included when it was not converged and no profile file was requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    best_iterate: Option<ProfileBody>,
}

fn cmd_solve(
    rc: &RunConfig,
    sc: &SolveConfig,
    l: f64,
    out: Option<&Path>,
    summary_path: Option<&Path>,
) -> Result<Status, CliError> {
    let r = crate::minimize::minimize_f(&rc.mp, &rc.kp, l, sc)?;
    let mut summary = SolveSummary {
        n: rc.mp.n,
        gamma: rc.mp.gamma,
        l,
        grid_n: sc.n,
        seed: sc.seed,
        grad_tol: sc.grad_tol,
        c: r.c_value,
        cstar: r.cstar_value,
        classification: r.classification,
        residual: r.residual,
        iterations: r.iterations,
        converged: r.converged,
        amplitude: r.amplitude,
        init_used: r.init_used,
        abs_projections: r.abs_projections,
        runs: r.runs.clone(),
        best_iterate: None,
    };
    if !r.converged {
        log::error!(
            "solver did not reach residual {:e} (best {:e} after {} iterations); dumping the best iterate",
            sc.grad_tol,
            r.residual,
            r.iterations
        );
    }
    match out {
        Some(path) => {
            let text = match rc.format {
                Format::Csv => profile_csv(
                    rc.mp.n,
                    rc.mp.gamma,
                    &r.profile,
                    &[
                        ("c", num(r.c_value)),
                        ("classification", classification_name(Some(r.classification)).into()),
                        ("converged", r.converged.to_string()),
                    ],
                ),
                Format::Json => to_json("profile", ProfileBody::new(rc.mp.n, rc.mp.gamma, &r.profile))?,
            };
            emit(Some(path), &text)?;
        }
        None if !r.converged => summary.best_iterate = Some(ProfileBody::new(rc.mp.n, rc.mp.gamma, &r.profile)),
        None => {}
    }
    emit(summary_path, &to_json("solve-summary", &summary)?)?;
    Ok(if r.converged { Status::Ok } else { Status::NotConverged })
}

fn cmd_sweep(
    rc: &RunConfig,
    sc: &SolveConfig,
    grid: GridSpec,
    refine: Option<f64>,
    out: Option<&Path>,
) -> Result<Status, CliError> {
    let ls = grid.values();
    if ls[0] <= 0.0 {
        return Err(CliError::Usage(format!("L grid {grid} must be positive")));
    }
    let (records, bracket, l0_estimate) = match refine {
        Some(dl) => {
            if !(dl > 0.0) {
                return Err(CliError::Usage(format!("refinement width {dl} must be positive")));
            }
            let s = sweep_refined(&rc.mp, &rc.kp, &ls, sc, dl)?;
            (s.records, s.bracket, s.l0_estimate)
        }
        None => (sweep_l(&rc.mp, &rc.kp, &ls, sc), None, None),
    };
    for r in records.iter().filter(|r| r.error.is_some()) {
        log::error!("L = {}: {}", r.l, r.error.as_deref().unwrap_or(""));
    }
    let text = match rc.format {
        Format::Csv => {
            let mut fields = vec![
                ("n", rc.mp.n.to_string()),
                ("gamma", num(rc.mp.gamma)),
                ("N", sc.n.to_string()),
                ("seed", sc.seed.to_string()),
                ("L_grid", grid.to_string()),
            ];
            if let Some((lo, hi)) = bracket {
                fields.push(("bracket", format!("{}:{}", num(lo), num(hi))));
            }
            let mut s = csv_header("sweep", &fields);
            s += "L,c,cstar,classification,amplitude,residual,converged,error\n";
            for r in &records {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    num(r.l),
                    num(r.c),
                    num(r.cstar),
                    classification_name(r.classification),
                    num(r.amplitude),
                    num(r.residual),
                    r.converged,
                    r.error.as_deref().unwrap_or("").replace([',', '\n'], ";")
                );
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                n: u32,
                gamma: f64,
                #[serde(rename = "N")]
                grid_n: usize,
                seed: u64,
                records: &'a [SweepRecord],
                bracket: Option<(f64, f64)>,
                l0_estimate: Option<f64>,
            }
            to_json(
                "sweep",
                Body {
                    n: rc.mp.n,
                    gamma: rc.mp.gamma,
                    grid_n: sc.n,
                    seed: sc.seed,
                    records: &records,
                    bracket,
                    l0_estimate,
                },
            )?
        }
    };
    emit(out, &text)?;
    Ok(if records.iter().any(|r| r.error.is_some()) {
        Status::Partial
    } else {
        Status::Ok
    })
}

fn cmd_bifurcate(rc: &RunConfig, method: Method, out: Option<&Path>) -> Result<Status, CliError> {
    let r = find_l0(&rc.mp, &rc.kp, method)?;
    let text = match rc.format {
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or("nan".to_string(), num);
            let mut s = csv_header(
                "bifurcation",
                &[
                    ("n", rc.mp.n.to_string()),
                    ("gamma", num(rc.mp.gamma)),
                    ("method", format!("{method:?}").to_lowercase()),
                    ("L0", num(r.l0())),
                    ("L0_gamma_formula", opt(r.l0_gamma_formula)),
                    ("L0_symbol", opt(r.l0_symbol)),
                    ("lambda0", num(r.lambda0)),
                    ("agreement", opt(r.agreement)),
                ],
            );
            s += "L,delta\n";
            for (l, d) in &r.delta_samples {
                s += &format!("{},{}\n", num(*l), num(*d));
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                n: u32,
                gamma: f64,
                #[serde(rename = "L0")]
                l0: f64,
                #[serde(flatten)]
                result: &'a crate::bifurcation::BifurcationResult,
            }
            to_json(
                "bifurcation",
                Body {
                    n: rc.mp.n,
                    gamma: rc.mp.gamma,
                    l0: r.l0(),
                    result: &r,
                },
            )?
        }
    };
    emit(out, &text)?;
    Ok(Status::Ok)
}

fn cmd_verify(ids: &[u8], format: Format, out: Option<&Path>) -> Result<Status, CliError> {
    if let Some(bad) = ids.iter().find(|i| !(1..=12).contains(*i)) {
        return Err(CliError::Usage(format!("criterion id {bad} is not in 1..=12")));
    }
    let report = verify::run_selected(ids, |r| eprintln!("{}", r.line()));
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                passed: bool,
                failing: Vec<u8>,
                criteria: &'a [verify::CriterionResult],
            }
            to_json(
                "verify",
                Body {
                    passed: report.passed,
                    failing: report.failing(),
                    criteria: &report.criteria,
                },
            )?
        }
        Format::Csv => {
            let mut s = csv_header("verify", &[("passed", report.passed.to_string())]);
            s += "id,name,passed,checks_passed,known_unattainable,seconds,budget_seconds,detail\n";
            for c in &report.criteria {
                s += &format!(
                    "{},{},{},{},{},{},{},\"{}\"\n",
                    c.id,
                    c.name,
                    c.passed,
                    c.checks_passed,
                    c.known_unattainable,
                    num(c.seconds),
                    num(c.budget_seconds),
                    c.detail.replace('"', "'")
                );
            }
            s
        }
    };
    emit(out, &text)?;
    let failing = report.failing();
    if failing.is_empty() {
        Ok(Status::Ok)
    } else {
        eprintln!("failing criteria: {failing:?}");
        Ok(Status::AcceptanceFailed)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} = {v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))
}

/// Execute a parsed command line.
pub fn run(cli: Cli) -> Result<Status, CliError> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    configure_threads()?;
    match cli.command {
        Command::Kernel {
            model,
            output,
            xi,
            xi_grid,
            l,
            tol,
        } => {
            let rc = resolve_model(&model, &output, &cfg, false)?;
            let xi = if xi.is_empty() {
                cfg.xi.clone().unwrap_or_default()
            } else {
                xi
            };
            cmd_kernel(
                &rc,
                out_path(&output, &cfg),
                &xi,
                xi_grid.or(cfg.xi_grid),
                l.or(cfg.l),
                tol.or(cfg.tol).unwrap_or(1e-15),
            )
        }
        Command::Solve {
            model,
            output,
            solver,
            l,
            summary,
        } => {
            let rc = resolve_model(&model, &output, &cfg, false)?;
            let sc = solve_config(&solver, &cfg)?;
            let l = l.or(cfg.l).ok_or_else(|| CliError::Usage("solve needs --L".into()))?;
            cmd_solve(
                &rc,
                &sc,
                l,
                out_path(&output, &cfg),
                summary.as_deref().or(cfg.summary.as_deref()),
            )
        }
        Command::Sweep {
            model,
            output,
            solver,
            l_grid,
            refine,
            no_refine,
        } => {
            let rc = resolve_model(&model, &output, &cfg, false)?;
            let sc = solve_config(&solver, &cfg)?;
            let grid = l_grid
                .or(cfg.l_grid)
                .ok_or_else(|| CliError::Usage("sweep needs --L-grid start:stop:step".into()))?;
            let refine = if no_refine {
                None
            } else {
                Some(refine.or(cfg.refine).unwrap_or(1e-3))
            };
            cmd_sweep(&rc, &sc, grid, refine, out_path(&output, &cfg))
        }
        Command::Bifurcate { model, output, method } => {
            let rc = resolve_model(&model, &output, &cfg, true)?;
            cmd_bifurcate(
                &rc,
                method.or(cfg.method).unwrap_or(Method::Both),
                out_path(&output, &cfg),
            )
        }
        Command::Verify {
            output,
            quick,
            criteria,
        } => {
            let quick = quick || cfg.quick.unwrap_or(false);
            let ids: Vec<u8> = if !criteria.is_empty() {
                criteria
            } else if quick {
                verify::QUICK.to_vec()
            } else {
                (1..=12).collect()
            };
            let format = output.format.or(cfg.format).unwrap_or(Format::Json);
            cmd_verify(&ids, format, out_path(&output, &cfg))
        }
    }
}

/// Entry point of the `fracyamabe` binary.
pub fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_spec() {
        let g: GridSpec = "4.5:6:0.25".parse().unwrap();
        assert_eq!(g.values(), vec![4.5, 4.75, 5.0, 5.25, 5.5, 5.75, 6.0]);
        let g: GridSpec = "0.1:0.3:0.1".parse().unwrap();
        assert_eq!(g.values().len(), 3);
        for bad in ["1:2", "2:1:0.1", "1:2:0", "a:2:1", "0:1e9:1e-3"] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Model(Error::InvalidParams("x".into())).exit_code(), 2);
        assert_eq!(CliError::Model(Error::ZeroProfile).exit_code(), 2);
        assert_eq!(CliError::Model(Error::PositivityCollapse(0.0)).exit_code(), 3);
        assert_eq!(Status::Partial.exit_code(), 4);
    }
}
