use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use radial_disperse::decay::{DEFAULT_T_RANGE, DEFAULT_XY_RANGE};
use radial_disperse::evolution::{Engine, QuadratureSpec};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WeightChoice {
    /// Friedrichs weights for `l > 0`, unweighted otherwise.
    Auto,
    Unweighted,
    FriedrichsWeight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EngineChoice {
    Contour,
    DampedLadder,
}

/// Settings shared by every subcommand. Each field may also come from the
/// TOML file given by `--config`; flags win over the file, the file over the
/// built-in defaults.
#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Angular momentum, |l| < 1/2.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub l: Option<f64>,
    /// Boundary parameter in [0, pi).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_count: Option<usize>,
    /// Log-spaced times (`--t-log false` for linear spacing).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub t_log: Option<bool>,

    /// Position grid, shared by x and y.
    #[arg(long, global = true)]
    pub x_min: Option<f64>,
    #[arg(long, global = true)]
    pub x_max: Option<f64>,
    #[arg(long, global = true)]
    pub x_count: Option<usize>,

    /// Spectral grid for `spectrum` (log-spaced).
    #[arg(long, global = true)]
    pub lambda_min: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_max: Option<f64>,
    #[arg(long, global = true)]
    pub lambda_count: Option<usize>,

    /// First damping parameter of the damped ladder (selects that engine).
    #[arg(long, global = true)]
    pub eps0: Option<f64>,
    /// Real-axis cutoff of the damped ladder (selects that engine).
    #[arg(long, global = true)]
    pub kmax: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub engine: Option<EngineChoice>,
    #[arg(long, global = true)]
    pub panels_per_period: Option<usize>,
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,

    /// Weighting of the decay scan.
    #[arg(long, global = true, value_enum)]
    pub weight: Option<WeightChoice>,
    /// Include the bound-state term in decay scans.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub include_bound_state: Option<bool>,

    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed of the randomized checks in `validate`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// Fills unset fields from `other`.
    pub fn or(mut self, other: Settings) -> Settings {
        overlay!(self, other; l, alpha, t_min, t_max, t_count, t_log, x_min, x_max, x_count, lambda_min, lambda_max,
            lambda_count, eps0, kmax, engine, panels_per_period, tolerance, weight, include_bound_state, out, format, seed);
        self
    }

    pub fn from_file(path: &Path) -> Result<Settings, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Range of a sampled axis.
#[derive(Clone, Copy, Debug)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        if self.log {
            radial_disperse::logspace(self.min, self.max, self.count)
        } else {
            radial_disperse::linspace(self.min, self.max, self.count)
        }
    }

    fn check(&self, name: &str, positive: bool) -> Result<(), CliError> {
        if self.count == 0 {
            return Err(CliError::Usage(format!("{name}: count must be at least 1")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(CliError::Usage(format!("{name}: need finite min <= max, got [{}, {}]", self.min, self.max)));
        }
        if (positive || self.log) && !(self.min > 0.0) {
            return Err(CliError::Usage(format!("{name}: values must be positive, got min = {}", self.min)));
        }
        if self.count > 1 && self.min == self.max {
            return Err(CliError::Usage(format!("{name}: {} points need min < max", self.count)));
        }
        Ok(())
    }
}

/// Per-subcommand defaults for the grids.
pub struct Defaults {
    pub t: (f64, f64, usize, bool),
    pub x: (f64, f64, usize),
}

pub const KERNEL_DEFAULTS: Defaults = Defaults { t: (1.0, 10.0, 3, true), x: (0.5, 2.0, 3) };
pub const DECAY_DEFAULTS: Defaults = Defaults {
    t: (DEFAULT_T_RANGE.0, DEFAULT_T_RANGE.1, DEFAULT_T_RANGE.2, true),
    x: DEFAULT_XY_RANGE,
};

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub l: f64,
    pub alpha: f64,
    pub t: Range,
    pub x: Range,
    pub lambda: Range,
    pub quadrature: QuadratureSpec<f64>,
    pub weight: WeightChoice,
    pub include_bound_state: bool,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    pub fn resolve(s: &Settings, d: &Defaults) -> Result<RunConfig, CliError> {
        let t = Range {
            min: s.t_min.unwrap_or(d.t.0),
            max: s.t_max.unwrap_or(d.t.1.max(s.t_min.unwrap_or(d.t.0))),
            count: s.t_count.unwrap_or(d.t.2),
            log: s.t_log.unwrap_or(d.t.3),
        };
        let x = Range {
            min: s.x_min.unwrap_or(d.x.0),
            max: s.x_max.unwrap_or(d.x.1.max(s.x_min.unwrap_or(d.x.0))),
            count: s.x_count.unwrap_or(d.x.2),
            log: true,
        };
        let lambda = Range {
            min: s.lambda_min.unwrap_or(0.01),
            max: s.lambda_max.unwrap_or(100.0),
            count: s.lambda_count.unwrap_or(50),
            log: true,
        };
        t.check("t", false)?;
        x.check("x", true)?;
        lambda.check("lambda", true)?;
        if !t.log && t.min <= 0.0 && t.max >= 0.0 {
            return Err(CliError::Usage("t grid must not contain t = 0".into()));
        }
        let mut quadrature = QuadratureSpec::default();
        quadrature.eps0 = s.eps0;
        quadrature.k_max = s.kmax;
        if let Some(p) = s.panels_per_period {
            quadrature.panels_per_period = p;
        }
        if let Some(tol) = s.tolerance {
            quadrature.tolerance = tol;
        }
        quadrature.engine = match s.engine {
            Some(EngineChoice::Contour) => Engine::Contour,
            Some(EngineChoice::DampedLadder) => Engine::DampedLadder,
            None if s.eps0.is_some() || s.kmax.is_some() => Engine::DampedLadder,
            None => Engine::Contour,
        };
        Ok(RunConfig {
            l: s.l.unwrap_or(0.0),
            alpha: s.alpha.unwrap_or(std::f64::consts::FRAC_PI_2),
            t,
            x,
            lambda,
            quadrature,
            weight: s.weight.unwrap_or(WeightChoice::Auto),
            include_bound_state: s.include_bound_state.unwrap_or(false),
            out: s.out.clone(),
            format: s.format.unwrap_or(Format::Csv),
            seed: s.seed.unwrap_or(0),
        })
    }
}
