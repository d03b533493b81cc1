use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::ConvexFlux;
use crate::profile::Profile;
use crate::selfsim::{Wave, WaveFan};

const RH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrontKind {
    EntropicShock,
    ExpansionShock,
    RarefactionFragment,
}

impl FrontKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FrontKind::EntropicShock => "entropic_shock",
            FrontKind::ExpansionShock => "expansion_shock",
            FrontKind::RarefactionFragment => "rarefaction_fragment",
        }
    }
}

/// How collisions are resolved during evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every Riemann problem is re-solved entropically.
    Entropic,
    /// Expansion shocks survive collisions whenever a single jump can carry them.
    AsGiven,
}

/// A piecewise-constant weak solution at one instant.
///
/// `states[i]` is the value left of `positions[i]`; `states[m]` the value right
/// of the last front. Coincident positions are allowed only for fronts that
/// move apart, which is how a staircase looks at the instant it is emitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontState {
    pub time: f64,
    pub positions: Vec<f64>,
    pub states: Vec<f64>,
    pub speeds: Vec<f64>,
    pub front_kinds: Vec<FrontKind>,
}

/// States `a = s_0, s_1, ..., s_n = b` crossing every multiple of `step` strictly between `a` and `b`.
pub fn staircase(a: f64, b: f64, step: f64) -> Vec<f64> {
    let (lo, hi) = (a.min(b), a.max(b));
    let tol = 1e-9 * step;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    let mut inner: Vec<f64> = (first..=last)
        .map(|k| k as f64 * step)
        .filter(|&s| s > lo + tol && s < hi - tol)
        .collect();
    if a > b {
        inner.reverse();
    }
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(a);
    out.extend(inner);
    out.push(b);
    out
}

/// Fronts produced by resolving the jump `(a | b)` at a point.
pub(crate) fn resolve_jump(a: f64, b: f64, mode: Mode, keep_expansion: bool, step: f64) -> Vec<(f64, f64, FrontKind)> {
    if a > b {
        vec![(a, b, FrontKind::EntropicShock)]
    } else if a < b {
        if mode == Mode::AsGiven && keep_expansion {
            vec![(a, b, FrontKind::ExpansionShock)]
        } else {
            staircase(a, b, step)
                .windows(2)
                .map(|w| (w[0], w[1], FrontKind::RarefactionFragment))
                .collect()
        }
    } else {
        Vec::new()
    }
}

impl FrontState {
    /// Builds a state from explicit fronts, computing speeds from the chord slopes.
    pub fn new(flux: &ConvexFlux, time: f64, positions: Vec<f64>, states: Vec<f64>, kinds: Vec<FrontKind>) -> Result<Self> {
        if states.len() != positions.len() + 1 || kinds.len() != positions.len() {
            return Err(Error::InvalidState(format!(
                "{} positions need {} states and kinds, got {} states and {} kinds",
                positions.len(),
                positions.len() + 1,
                states.len(),
                kinds.len()
            )));
        }
        let speeds = states
            .windows(2)
            .map(|w| flux.chord_slope(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        let state = Self { time, positions, states, speeds, front_kinds: kinds };
        state.check_structure(flux)?;
        Ok(state)
    }

    /// Piecewise-constant data with jumps at `xs` and values `us` (`us.len() == xs.len() + 1`).
    ///
    /// Entropic mode turns upward jumps into staircases of step `delta_u`;
    /// as-given mode keeps them as expansion shocks.
    pub fn from_piecewise(flux: &ConvexFlux, time: f64, xs: &[f64], us: &[f64], mode: Mode, delta_u: f64) -> Result<Self> {
        if us.len() != xs.len() + 1 {
            return Err(Error::InvalidState(format!("{} jump positions need {} values, got {}", xs.len(), xs.len() + 1, us.len())));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidState("jump positions must be strictly increasing".into()));
        }
        check_step(delta_u)?;
        for &u in us {
            flux.check_state(u)?;
        }
        let mut positions = Vec::new();
        let mut states = vec![us[0]];
        let mut kinds = Vec::new();
        for (i, &x) in xs.iter().enumerate() {
            for (_, b, kind) in resolve_jump(us[i], us[i + 1], mode, true, delta_u) {
                positions.push(x);
                states.push(b);
                kinds.push(kind);
            }
        }
        Self::new(flux, time, positions, states, kinds)
    }

    /// Snapshot of a fan at time `t > 0`, rarefactions replaced by staircases of step `delta_u`.
    pub fn from_fan(fan: &WaveFan, flux: &ConvexFlux, t: f64, delta_u: f64) -> Result<Self> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("snapshot time must be positive, got {t}")));
        }
        check_step(delta_u)?;
        let mut positions = Vec::new();
        let mut states = vec![fan.left_state];
        let mut kinds = Vec::new();
        for wave in &fan.waves {
            match *wave {
                Wave::Shock { u_minus, u_plus, sigma } => {
                    positions.push(sigma * t);
                    states.push(u_plus);
                    kinds.push(if u_minus > u_plus { FrontKind::EntropicShock } else { FrontKind::ExpansionShock });
                }
                Wave::Rarefaction { u_lo, u_hi, .. } => {
                    for w in staircase(u_lo, u_hi, delta_u).windows(2) {
                        positions.push(flux.chord_slope(w[0], w[1])? * t);
                        states.push(w[1]);
                        kinds.push(FrontKind::RarefactionFragment);
                    }
                }
            }
        }
        Self::new(flux, t, positions, states, kinds)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn far_left(&self) -> f64 {
        self.states[0]
    }

    pub fn far_right(&self) -> f64 {
        *self.states.last().expect("states is never empty")
    }

    fn check_structure(&self, flux: &ConvexFlux) -> Result<()> {
        for (i, w) in self.positions.windows(2).enumerate() {
            if w[1] < w[0] || (w[1] == w[0] && self.speeds[i] > self.speeds[i + 1]) {
                return Err(Error::InvalidState(format!(
                    "fronts {i} and {} out of order at x = {}, {}",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        for (i, (w, &s)) in self.states.windows(2).zip(&self.speeds).enumerate() {
            let chord = flux.chord_slope(w[0], w[1])?;
            if (s - chord).abs() > RH_TOL {
                return Err(Error::InvalidState(format!("front {i} speed {s} violates Rankine-Hugoniot (chord {chord})")));
            }
        }
        Ok(())
    }

    /// Structural checks plus the entropic-mode bound on upward jumps.
    pub fn validate(&self, flux: &ConvexFlux, mode: Mode, delta_u: f64) -> Result<()> {
        if self.states.len() != self.positions.len() + 1
            || self.speeds.len() != self.positions.len()
            || self.front_kinds.len() != self.positions.len()
        {
            return Err(Error::InvalidState("inconsistent field lengths".into()));
        }
        for &u in &self.states {
            flux.check_state(u)?;
        }
        self.check_structure(flux)?;
        if mode == Mode::Entropic {
            for (i, w) in self.states.windows(2).enumerate() {
                if w[1] - w[0] > delta_u * (1.0 + 1e-9) {
                    return Err(Error::InvalidState(format!(
                        "front {i} jumps up by {} > delta_u = {delta_u} in entropic mode",
                        w[1] - w[0]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn profile(&self) -> Profile {
        Profile::piecewise_constant(self.time, &self.positions, &self.states)
    }

    /// Value at `x`, left limit at a front.
    pub fn value_at(&self, x: f64) -> f64 {
        let i = self.positions.partition_point(|&p| p < x);
        self.states[i]
    }

    pub fn sup_norm(&self) -> f64 {
        self.states.iter().fold(0.0, |m, u| m.max(u.abs()))
    }

    /// `∫ u dx` over `[x_lo, x_hi]`.
    pub fn mass_between(&self, x_lo: f64, x_hi: f64) -> f64 {
        let mut total = 0.0;
        let mut lo = f64::NEG_INFINITY;
        for (i, &u) in self.states.iter().enumerate() {
            let hi = self.positions.get(i).copied().unwrap_or(f64::INFINITY);
            let a = lo.max(x_lo);
            let b = hi.min(x_hi);
            if b > a {
                total += u * (b - a);
            }
            lo = hi;
        }
        total
    }

    /// Total mass; `None` unless both far states vanish.
    pub fn mass(&self) -> Option<f64> {
        if self.far_left() != 0.0 || self.far_right() != 0.0 {
            return None;
        }
        match (self.positions.first(), self.positions.last()) {
            (Some(&a), Some(&b)) => Some(self.mass_between(a, b)),
            _ => Some(0.0),
        }
    }
}

fn check_step(delta_u: f64) -> Result<()> {
    if delta_u.is_finite() && delta_u > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("rarefaction step must be positive, got {delta_u}")))
    }
}
