mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use radial_disperse::decay::{scan, KernelPart, WeightSpec, XyGrid};
use radial_disperse::evolution::{full_kernel, Engine};
use radial_disperse::spectral::{eigenvalue, spectral_density, ProblemParams};
use radial_disperse::validate::{run_suite, Fault};

use config::{RunConfig, Settings, WeightChoice, DECAY_DEFAULTS, KERNEL_DEFAULTS};
use error::CliError;
use output::{Cell, Table};

/// Spectral data, evolution kernels and dispersive decay scans for
/// `-d^2/dx^2 + l(l+1)/x^2` on the half-line with boundary parameter alpha.
#[derive(Parser, Debug)]
#[command(name = "radial-disperse", version)]
struct Cli {
    /// TOML file with any of the flag settings; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral density on a lambda grid and the eigenvalue record.
    Spectrum,
    /// Evolution kernel on a (t, x, y) grid.
    Kernel,
    /// Weighted sup-norm scan over time with its fitted decay exponent.
    Decay,
    /// Oracle and property self-checks; exit code 4 if any fails.
    Validate {
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    ScaleCl,
    BranchPhase,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("radial-disperse: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("RADIAL_DISPERSE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("RADIAL_DISPERSE_THREADS must be a positive integer, got {v:?}")))?;
    if n == 0 {
        return Err(CliError::Usage("RADIAL_DISPERSE_THREADS must be at least 1".into()));
    }
    // Fails only if a pool already exists, which cannot happen this early.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let file = match &cli.config {
        Some(p) => Settings::from_file(p)?,
        None => Settings::default(),
    };
    let settings = cli.settings.or(file);
    match cli.command {
        Command::Spectrum => cmd_spectrum(&RunConfig::resolve(&settings, &KERNEL_DEFAULTS)?),
        Command::Kernel => cmd_kernel(&RunConfig::resolve(&settings, &KERNEL_DEFAULTS)?),
        Command::Decay => cmd_decay(&RunConfig::resolve(&settings, &DECAY_DEFAULTS)?),
        Command::Validate { inject_fault } => {
            let fault = inject_fault.map(|f| match f {
                FaultArg::ScaleCl => Fault::ScaleCl,
                FaultArg::BranchPhase => Fault::BranchPhase,
            });
            cmd_validate(&RunConfig::resolve(&settings, &KERNEL_DEFAULTS)?, fault)
        }
    }
}

fn params(cfg: &RunConfig) -> Result<ProblemParams<f64>, CliError> {
    ProblemParams::new(cfg.l, cfg.alpha).map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))
}

fn engine_name(e: Engine) -> &'static str {
    match e {
        Engine::Contour => "contour",
        Engine::DampedLadder => "damped_ladder",
    }
}

fn opt(v: Option<f64>) -> Cell {
    v.map_or(Cell::Missing, Cell::Num)
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg)?;
    let info = eigenvalue(&p)?;
    let rows = cfg
        .lambda
        .points()
        .into_iter()
        .map(|lam| vec![Cell::Num(lam), Cell::Num(spectral_density(&p, lam))])
        .collect();
    Table {
        command: "spectrum",
        meta: vec![
            ("l", Cell::Num(cfg.l)),
            ("alpha", Cell::Num(cfg.alpha)),
            ("eigenvalue", opt(info.energy)),
            ("eigenvalue_norm_sq", opt(info.norm_sq)),
        ],
        columns: &["lambda", "rho_prime"],
        rows,
    }
    .write(cfg.format, cfg.out.as_deref())
}

fn cmd_kernel(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg)?;
    let xs = cfg.x.points();
    let mut tasks = Vec::new();
    for t in cfg.t.points() {
        for &x in &xs {
            for &y in &xs {
                tasks.push((t, x, y));
            }
        }
    }
    let values: Vec<_> = tasks.par_iter().map(|&(t, x, y)| full_kernel(&p, &cfg.quadrature, t, x, y)).collect();
    let mut rows = Vec::with_capacity(tasks.len());
    for (&(t, x, y), v) in tasks.iter().zip(values) {
        let k = v?;
        rows.push(vec![
            Cell::Num(t),
            Cell::Num(x),
            Cell::Num(y),
            Cell::Num(k.value.re),
            Cell::Num(k.value.im),
            Cell::Num(k.est_error),
            Cell::Text(k.method.as_str().into()),
        ]);
    }
    Table {
        command: "kernel",
        meta: vec![
            ("l", Cell::Num(cfg.l)),
            ("alpha", Cell::Num(cfg.alpha)),
            ("engine", Cell::Text(engine_name(cfg.quadrature.engine).into())),
        ],
        columns: &["t", "x", "y", "re", "im", "est_error", "method"],
        rows,
    }
    .write(cfg.format, cfg.out.as_deref())
}

fn cmd_decay(cfg: &RunConfig) -> Result<(), CliError> {
    let p = params(cfg)?;
    let weight = match cfg.weight {
        WeightChoice::Unweighted => WeightSpec::unweighted(cfg.l),
        WeightChoice::FriedrichsWeight => WeightSpec::friedrichs(cfg.l),
        WeightChoice::Auto if cfg.l > 0.0 => WeightSpec::friedrichs(cfg.l),
        WeightChoice::Auto => WeightSpec::unweighted(cfg.l),
    };
    let part = if cfg.include_bound_state { KernelPart::Full } else { KernelPart::Continuous };
    let grid = XyGrid::log_tensor(cfg.x.min, cfg.x.max, cfg.x.count);
    let times = cfg.t.points();
    if times.iter().any(|t| *t <= 0.0) {
        return Err(CliError::Usage("decay scans need positive times".into()));
    }
    let s = scan(&p, &cfg.quadrature, part, &times, &grid, &weight)?;
    let rows = s.times.iter().zip(&s.norms).map(|(&t, &n)| vec![Cell::Num(t), Cell::Num(n)]).collect();
    Table {
        command: "decay",
        meta: vec![
            ("l", Cell::Num(s.l)),
            ("alpha", Cell::Num(s.alpha)),
            ("weight", Cell::Text(s.weight.as_str().into())),
            ("part", Cell::Text(if cfg.include_bound_state { "full" } else { "continuous" }.into())),
            ("grid", Cell::Text(s.grid.clone())),
            ("engine", Cell::Text(engine_name(cfg.quadrature.engine).into())),
            ("fitted_exponent", Cell::Num(s.fitted_exponent)),
            ("fit_residual", Cell::Num(s.fit_residual)),
        ],
        columns: &["t", "norm"],
        rows,
    }
    .write(cfg.format, cfg.out.as_deref())
}

fn cmd_validate(cfg: &RunConfig, fault: Option<Fault>) -> Result<(), CliError> {
    let report = run_suite(cfg.seed, fault);
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        let line = format!("{verdict} {:<24} max_error={:.3e} tolerance={:.1e}", c.name, c.max_error, c.tolerance);
        println!("{line}");
    }
    if let Some(out) = cfg.out.as_deref() {
        let rows = report
            .checks
            .iter()
            .map(|c| {
                vec![
                    Cell::Text(c.name.into()),
                    Cell::Bool(c.passed),
                    Cell::Num(c.max_error),
                    Cell::Num(c.tolerance),
                    Cell::Text(c.detail.clone()),
                ]
            })
            .collect();
        Table {
            command: "validate",
            meta: vec![
                ("seed", Cell::Text(report.seed.to_string())),
                ("fault", Cell::Text(fault.map_or("none", |f| f.as_str()).into())),
                ("all_passed", Cell::Bool(report.all_passed)),
            ],
            columns: &["check", "passed", "max_error", "tolerance", "detail"],
            rows,
        }
        .write(cfg.format, Some(out))?;
    }
    if report.all_passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err(CliError::ChecksFailed(format!("failed checks: {}", failed.join(", "))))
    }
}
