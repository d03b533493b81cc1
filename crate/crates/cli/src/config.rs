//! Scenario files: one JSON object per experiment.

use std::path::{Path, PathBuf};

use conlaw_core::fronts::FrontKind;
use conlaw_core::{ConvexFlux, FluxKind, FrontState, Mode, Window};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_flux")]
    pub flux: FluxKind,
    /// State bound `R`; defaults to the data's sup norm plus one.
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub initial: InitialData,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub delta_u: Option<f64>,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default)]
    pub windows: Vec<Window>,
    #[serde(default)]
    pub family: FamilyConfig,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub trapezoid: Option<TrapezoidConfig>,
    #[serde(default)]
    pub hopflax: HopfLaxConfig,
    #[serde(default)]
    pub delta_pairs: Vec<(f64, f64)>,
    #[serde(default)]
    pub expect: Expectations,
}

fn default_flux() -> FluxKind {
    FluxKind::Burgers
}
fn default_mode() -> Mode {
    Mode::Entropic
}
fn default_t_end() -> f64 {
    1.0
}

impl Default for Scenario {
    fn default() -> Self {
        serde_json::from_str("{}").expect("empty scenario")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Riemann { u_l: f64, u_r: f64 },
    Piecewise { xs: Vec<f64>, us: Vec<f64> },
    Fixture { name: Fixture },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Riemann { u_l: 1.0, u_r: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fixture {
    /// Burgers `(1, 0)` at the origin.
    Shock,
    /// `(-1, 1)` at the origin.
    Rarefaction,
    /// Two shocks `2 | 1 | 0` at `x = 0, 1`; they merge at `t = 1`.
    Merge,
    /// `0 | 1 | 0` on `[-1, 1]`: a rarefaction runs into a shock.
    Bump,
    /// `-1 | 1 | 0` at `x = 0, 3`: an expansion jump followed by a shock.
    Expansion,
}

impl Fixture {
    pub fn data(self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Fixture::Shock => (vec![0.0], vec![1.0, 0.0]),
            Fixture::Rarefaction => (vec![0.0], vec![-1.0, 1.0]),
            Fixture::Merge => (vec![0.0, 1.0], vec![2.0, 1.0, 0.0]),
            Fixture::Bump => (vec![-1.0, 1.0], vec![0.0, 1.0, 0.0]),
            Fixture::Expansion => (vec![0.0, 3.0], vec![-1.0, 1.0, 0.0]),
        }
    }
}

impl InitialData {
    /// Jump positions and values.
    pub fn data(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            InitialData::Riemann { u_l, u_r } => (vec![0.0], vec![*u_l, *u_r]),
            InitialData::Piecewise { xs, us } => (xs.clone(), us.clone()),
            InitialData::Fixture { name } => name.data(),
        }
    }

    pub fn riemann_pair(&self) -> Option<(f64, f64)> {
        let (xs, us) = self.data();
        (xs.len() == 1).then(|| (us[0], us[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    Random { max_intermediates: usize, members: usize },
    EqualSplit { splits: Vec<usize> },
}

impl Default for FamilyConfig {
    fn default() -> Self {
        FamilyConfig::Random { max_intermediates: 5, members: 20 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Agreement of the two EP evaluations and of closed-form expectations.
    pub ep: f64,
    pub residual: f64,
    pub l1: f64,
    /// E-condition slack; defaults to `delta_u`.
    pub e_slack: Option<f64>,
    pub min_order: f64,
    pub discrete_entropy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { ep: 1e-10, residual: 1e-7, l1: 5e-3, e_slack: None, min_order: 0.5, discrete_entropy: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_cells: usize,
    pub cfl: f64,
    pub resolutions: Vec<usize>,
    pub snapshot_every: Option<usize>,
    /// Domain override; defaults to the data support padded by the reach of the fastest wave.
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n_cells: 1600, cfl: 0.9, resolutions: vec![200, 400, 800, 1600], snapshot_every: None, x_min: None, x_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapezoidConfig {
    pub t1: f64,
    pub t2: f64,
    pub delta: f64,
    /// Defaults to `0.9 min(lambda0, 1)`.
    #[serde(default)]
    pub lambda_hat: Option<f64>,
    /// Defaults to the first expansion front at `t1`.
    #[serde(default)]
    pub center: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopfLaxConfig {
    pub samples: usize,
    pub step: f64,
}

impl Default for HopfLaxConfig {
    fn default() -> Self {
        Self { samples: 401, step: conlaw_core::hjb::DEFAULT_STEP }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expectations {
    /// Expected `total_abs` of the first window.
    pub ep_total_abs: Option<f64>,
}

/// Command-line overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub flux: Option<FluxKind>,
    pub tol_ep: Option<f64>,
    pub delta_u: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Scenario, CliError> {
    let mut sc = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
            let de = &mut serde_json::Deserializer::from_str(&text);
            serde_path_to_error::deserialize(de).map_err(|e| {
                let at = e.path().to_string();
                CliError::Config(format!("{}: at `{at}`: {}", p.display(), e.inner()))
            })?
        }
        None => Scenario::default(),
    };
    if let Some(f) = overrides.flux {
        sc.flux = f;
    }
    if let Some(t) = overrides.tol_ep {
        sc.tolerances.ep = t;
    }
    if let Some(d) = overrides.delta_u {
        sc.delta_u = Some(d);
    }
    if let Some(s) = overrides.seed {
        sc.seed = s;
    }
    if let Some(o) = &overrides.out {
        sc.out_dir = Some(o.clone());
    }
    sc.validate()?;
    Ok(sc)
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Config(format!("`{name}` must be positive and finite, got {v}")))
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<(), CliError> {
        positive("t_end", self.t_end)?;
        if let Some(r) = self.radius {
            positive("radius", r)?;
        }
        if let Some(d) = self.delta_u {
            positive("delta_u", d)?;
        }
        positive("tolerances.ep", self.tolerances.ep)?;
        positive("tolerances.residual", self.tolerances.residual)?;
        positive("tolerances.l1", self.tolerances.l1)?;
        positive("grid.cfl", self.grid.cfl)?;
        if self.grid.cfl > 1.0 {
            return Err(CliError::Config(format!("`grid.cfl` must not exceed 1, got {}", self.grid.cfl)));
        }
        if self.grid.n_cells < 2 || self.grid.resolutions.iter().any(|&n| n < 2) {
            return Err(CliError::Config("grid resolutions need at least 2 cells".into()));
        }
        if let (Some(a), Some(b)) = (self.grid.x_min, self.grid.x_max) {
            if !(a < b) {
                return Err(CliError::Config(format!("`grid`: need x_min < x_max, got {a} and {b}")));
            }
        }
        if self.hopflax.samples < 2 {
            return Err(CliError::Config("`hopflax.samples` must be at least 2".into()));
        }
        positive("hopflax.step", self.hopflax.step)?;
        let (xs, us) = self.initial.data();
        if us.len() != xs.len() + 1 {
            return Err(CliError::Config(format!("`initial`: {} jumps need {} values, got {}", xs.len(), xs.len() + 1, us.len())));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) || xs.iter().chain(&us).any(|v| !v.is_finite()) {
            return Err(CliError::Config("`initial`: positions must be finite and strictly increasing".into()));
        }
        let flux = self.flux()?;
        for &u in &us {
            flux.check_state(u).map_err(|e| CliError::Config(format!("`initial`: {e}")))?;
        }
        for (i, w) in self.windows.iter().enumerate() {
            w.check_span(0.0, self.t_end).map_err(|e| CliError::Config(format!("`windows[{i}]`: {e}")))?;
        }
        if let Some(tz) = &self.trapezoid {
            if !(tz.t1 > 0.0 && tz.t2 > tz.t1 && tz.t2 <= self.t_end && tz.delta > 0.0) {
                return Err(CliError::Config("`trapezoid`: need 0 < t1 < t2 <= t_end and delta > 0".into()));
            }
        }
        match &self.family {
            FamilyConfig::Random { members, .. } if *members == 0 => {
                return Err(CliError::Config("`family.members` must be positive".into()))
            }
            FamilyConfig::EqualSplit { splits } if splits.is_empty() => {
                return Err(CliError::Config("`family.splits` must not be empty".into()))
            }
            _ => {}
        }
        Ok(())
    }

    pub fn flux(&self) -> Result<ConvexFlux, CliError> {
        let (_, us) = self.initial.data();
        let sup = us.iter().fold(0.0f64, |m, u| m.max(u.abs()));
        let radius = self.radius.unwrap_or(sup + 1.0);
        ConvexFlux::from_kind(self.flux, radius).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn delta_u(&self) -> f64 {
        self.delta_u.unwrap_or(1e-2)
    }

    pub fn e_slack(&self) -> f64 {
        self.tolerances.e_slack.unwrap_or(self.delta_u())
    }

    pub fn initial_state(&self, flux: &ConvexFlux) -> Result<FrontState, CliError> {
        let (xs, us) = self.initial.data();
        Ok(FrontState::from_piecewise(flux, 0.0, &xs, &us, self.mode, self.delta_u())?)
    }

    /// The configured windows, or the whole span.
    pub fn windows_or_default(&self) -> Vec<Window> {
        if self.windows.is_empty() {
            vec![Window::Rect { t_lo: 0.0, t_hi: self.t_end, x_lo: None, x_hi: None }]
        } else {
            self.windows.clone()
        }
    }

    /// `[x_lo, x_hi]` that no wave leaves before `t_end`.
    pub fn extent(&self, flux: &ConvexFlux) -> (f64, f64) {
        let (xs, us) = self.initial.data();
        let speed = us.iter().map(|&u| flux.df(u).abs()).fold(0.0, f64::max);
        let (lo, hi) = (xs.first().copied().unwrap_or(0.0), xs.last().copied().unwrap_or(0.0));
        let pad = 1.02 * self.t_end * speed + 1e-2;
        (self.grid.x_min.unwrap_or(lo - pad), self.grid.x_max.unwrap_or(hi + pad))
    }
}

pub fn count_expansions(state: &FrontState) -> usize {
    state.front_kinds.iter().filter(|&&k| k == FrontKind::ExpansionShock).count()
}
