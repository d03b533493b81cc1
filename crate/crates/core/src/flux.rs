//! Strictly convex fluxes and the calculus built on them.
//!
//! A [`ConvexFlux`] pairs a [`FluxFunction`] with the radius `R` of the state
//! interval `[-R, R]` the computation lives in. Closed forms are used where the
//! flux provides them; otherwise inverse derivatives fall back to bracketed
//! root-finding and antiderivatives to adaptive Simpson quadrature.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

const QUAD_TOL: f64 = 1e-10;
const QUAD_MAX_INTERVALS: usize = 1 << 20;
const BISECTION_WIDTH: f64 = 1e-6;
const NEWTON_TOL: f64 = 1e-12;

/// The scalar flux `f` together with whatever closed forms it knows.
///
/// Only `value`, `derivative`, `second_derivative` and `convexity_bound` are
/// mandatory. The remaining methods return `None` when no closed form exists.
pub trait FluxFunction: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    fn value(&self, u: f64) -> f64;
    fn derivative(&self, u: f64) -> f64;
    fn second_derivative(&self, u: f64) -> f64;
    /// The constant `c > 0` with `f'' >= c`.
    fn convexity_bound(&self) -> f64;

    fn inverse_derivative(&self, _slope: f64) -> Option<f64> {
        None
    }
    /// `F(u) = ∫₀ᵘ f(s) ds`.
    fn antiderivative(&self, _u: f64) -> Option<f64> {
        None
    }
    /// `G(u) = ∫₀ᵘ s f'(s) ds`, the flux of the entropy `u²/2`.
    fn moment_antiderivative(&self, _u: f64) -> Option<f64> {
        None
    }
    /// Cancellation-free chord slope, `a != b`.
    fn chord(&self, a: f64, b: f64) -> Option<f64> {
        let _ = (a, b);
        None
    }
}

/// `f(u) = u²/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Burgers;

impl FluxFunction for Burgers {
    fn name(&self) -> &str {
        "burgers"
    }
    fn value(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn derivative(&self, u: f64) -> f64 {
        u
    }
    fn second_derivative(&self, _u: f64) -> f64 {
        1.0
    }
    fn convexity_bound(&self) -> f64 {
        1.0
    }
    fn inverse_derivative(&self, slope: f64) -> Option<f64> {
        Some(slope)
    }
    fn antiderivative(&self, u: f64) -> Option<f64> {
        Some(u * u * u / 6.0)
    }
    fn moment_antiderivative(&self, u: f64) -> Option<f64> {
        Some(u * u * u / 3.0)
    }
    fn chord(&self, a: f64, b: f64) -> Option<f64> {
        Some(0.5 * (a + b))
    }
}

/// `f(u) = cosh(u) - 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cosh;

impl FluxFunction for Cosh {
    fn name(&self) -> &str {
        "cosh"
    }
    fn value(&self, u: f64) -> f64 {
        // cosh(u) - 1 = 2 sinh²(u/2), accurate near zero
        let s = (0.5 * u).sinh();
        2.0 * s * s
    }
    fn derivative(&self, u: f64) -> f64 {
        u.sinh()
    }
    fn second_derivative(&self, u: f64) -> f64 {
        u.cosh()
    }
    fn convexity_bound(&self) -> f64 {
        1.0
    }
    fn inverse_derivative(&self, slope: f64) -> Option<f64> {
        Some(slope.asinh())
    }
    fn antiderivative(&self, u: f64) -> Option<f64> {
        Some(u.sinh() - u)
    }
    fn moment_antiderivative(&self, u: f64) -> Option<f64> {
        Some(u * u.cosh() - u.sinh())
    }
    fn chord(&self, a: f64, b: f64) -> Option<f64> {
        let h = 0.5 * (a - b);
        Some((0.5 * (a + b)).sinh() * h.sinh() / h)
    }
}

/// `f(u) = u²/2 + u⁴/12`; its derivative is inverted numerically.
#[derive(Debug, Clone, Copy, Default)]
pub struct Poly4;

impl FluxFunction for Poly4 {
    fn name(&self) -> &str {
        "poly4"
    }
    fn value(&self, u: f64) -> f64 {
        let u2 = u * u;
        0.5 * u2 + u2 * u2 / 12.0
    }
    fn derivative(&self, u: f64) -> f64 {
        u + u * u * u / 3.0
    }
    fn second_derivative(&self, u: f64) -> f64 {
        1.0 + u * u
    }
    fn convexity_bound(&self) -> f64 {
        1.0
    }
    fn antiderivative(&self, u: f64) -> Option<f64> {
        let u3 = u * u * u;
        Some(u3 / 6.0 + u3 * u * u / 60.0)
    }
    fn moment_antiderivative(&self, u: f64) -> Option<f64> {
        let u3 = u * u * u;
        Some(u3 / 3.0 + u3 * u * u / 15.0)
    }
    fn chord(&self, a: f64, b: f64) -> Option<f64> {
        let cubic = a * a * a + a * a * b + a * b * b + b * b * b;
        Some(0.5 * (a + b) + cubic / 12.0)
    }
}

/// Names of the built-in fluxes, as used in configs and on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxKind {
    Burgers,
    Cosh,
    Poly4,
}

impl FluxKind {
    pub const ALL: [FluxKind; 3] = [FluxKind::Burgers, FluxKind::Cosh, FluxKind::Poly4];

    pub fn as_str(self) -> &'static str {
        match self {
            FluxKind::Burgers => "burgers",
            FluxKind::Cosh => "cosh",
            FluxKind::Poly4 => "poly4",
        }
    }

    fn function(self) -> Arc<dyn FluxFunction> {
        match self {
            FluxKind::Burgers => Arc::new(Burgers),
            FluxKind::Cosh => Arc::new(Cosh),
            FluxKind::Poly4 => Arc::new(Poly4),
        }
    }
}

impl fmt::Display for FluxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FluxKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "burgers" => Ok(FluxKind::Burgers),
            "cosh" => Ok(FluxKind::Cosh),
            "poly4" => Ok(FluxKind::Poly4),
            other => Err(Error::UnknownFlux(other.to_string())),
        }
    }
}

/// A strictly convex C² flux on the state interval `[-R, R]`.
///
/// Immutable and cheap to clone.
#[derive(Clone)]
pub struct ConvexFlux {
    func: Arc<dyn FluxFunction>,
    radius: f64,
}

impl fmt::Debug for ConvexFlux {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConvexFlux")
            .field("name", &self.func.name())
            .field("radius", &self.radius)
            .finish()
    }
}

impl ConvexFlux {
    /// Wraps a flux function, validating convexity on a sampled grid.
    pub fn new(func: Arc<dyn FluxFunction>, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidFlux(format!("domain radius must be positive, got {radius}")));
        }
        let c = func.convexity_bound();
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidFlux(format!("convexity bound must be positive, got {c}")));
        }
        let flux = Self { func, radius };
        flux.validate(64)?;
        Ok(flux)
    }

    pub fn from_kind(kind: FluxKind, radius: f64) -> Result<Self> {
        Self::new(kind.function(), radius)
    }

    /// Radius defaults to `1 + max |u0|`.
    pub fn for_data(kind: FluxKind, max_abs_state: f64) -> Result<Self> {
        Self::from_kind(kind, 1.0 + max_abs_state.abs())
    }

    pub fn burgers(radius: f64) -> Self {
        Self::from_kind(FluxKind::Burgers, radius).expect("burgers flux is valid")
    }

    pub fn cosh(radius: f64) -> Self {
        Self::from_kind(FluxKind::Cosh, radius).expect("cosh flux is valid")
    }

    pub fn poly4(radius: f64) -> Self {
        Self::from_kind(FluxKind::Poly4, radius).expect("poly4 flux is valid")
    }

    pub fn name(&self) -> &str {
        self.func.name()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Same flux on a different state interval.
    pub fn with_radius(&self, radius: f64) -> Result<Self> {
        Self::new(self.func.clone(), radius)
    }

    pub fn f(&self, u: f64) -> f64 {
        self.func.value(u)
    }

    pub fn df(&self, u: f64) -> f64 {
        self.func.derivative(u)
    }

    pub fn ddf(&self, u: f64) -> f64 {
        self.func.second_derivative(u)
    }

    /// The constant `c` with `f'' >= c`.
    pub fn ddf_lower_bound(&self) -> f64 {
        self.func.convexity_bound()
    }

    /// True when `F`, `G` are closed forms rather than quadrature.
    pub fn has_closed_antiderivatives(&self) -> bool {
        self.func.antiderivative(0.0).is_some() && self.func.moment_antiderivative(0.0).is_some()
    }

    /// `[f'(-R), f'(R)]`.
    pub fn slope_range(&self) -> (f64, f64) {
        (self.df(-self.radius), self.df(self.radius))
    }

    /// Largest characteristic speed magnitude on `[-R, R]`.
    pub fn max_speed(&self) -> f64 {
        let (lo, hi) = self.slope_range();
        lo.abs().max(hi.abs())
    }

    pub fn check_state(&self, u: f64) -> Result<()> {
        if u.is_finite() && u.abs() <= self.radius * (1.0 + 1e-12) {
            Ok(())
        } else {
            Err(Error::StateOutOfRange { value: u, radius: self.radius })
        }
    }

    /// `(f')⁻¹(slope)`, restricted to `[-R, R]`.
    pub fn inverse_derivative(&self, slope: f64) -> Result<f64> {
        let (lo, hi) = self.slope_range();
        let slack = 1e-12 * slope.abs().max(1.0);
        if !(slope >= lo - slack && slope <= hi + slack) {
            return Err(Error::SlopeOutOfRange { slope, lo, hi });
        }
        if slope <= lo {
            return Ok(-self.radius);
        }
        if slope >= hi {
            return Ok(self.radius);
        }
        if let Some(u) = self.func.inverse_derivative(slope) {
            return Ok(u.clamp(-self.radius, self.radius));
        }
        Ok(self.solve_derivative(slope))
    }

    /// Bisection to width 1e-6, then safeguarded Newton to 1e-12.
    fn solve_derivative(&self, slope: f64) -> f64 {
        let mut a = -self.radius;
        let mut b = self.radius;
        while b - a > BISECTION_WIDTH {
            let m = 0.5 * (a + b);
            if self.df(m) < slope {
                a = m;
            } else {
                b = m;
            }
        }
        let mut u = 0.5 * (a + b);
        for _ in 0..50 {
            let r = self.df(u) - slope;
            if r.abs() <= NEWTON_TOL * slope.abs().max(1.0) {
                break;
            }
            let next = u - r / self.ddf(u);
            u = if next > a && next < b { next } else { 0.5 * (a + b) };
            if self.df(u) < slope {
                a = u;
            } else {
                b = u;
            }
        }
        u
    }

    /// `f*(p) = sup_{|u| <= R} (p u - f(u))`.
    pub fn convex_conjugate(&self, p: f64) -> Result<f64> {
        let u = self.inverse_derivative(p)?;
        Ok(p * u - self.f(u))
    }

    /// `(f(a) - f(b)) / (a - b)`.
    pub fn chord_slope(&self, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Err(Error::DegenerateChord(a));
        }
        Ok(self.chord_unchecked(a, b))
    }

    /// Chord slope falling back to `f'(a)` when `a == b`.
    pub fn speed(&self, a: f64, b: f64) -> f64 {
        if a == b {
            self.df(a)
        } else {
            self.chord_unchecked(a, b)
        }
    }

    fn chord_unchecked(&self, a: f64, b: f64) -> f64 {
        self.func.chord(a, b).unwrap_or_else(|| (self.f(a) - self.f(b)) / (a - b))
    }

    /// `F(u) = ∫₀ᵘ f(s) ds`.
    pub fn antiderivative_f(&self, u: f64) -> f64 {
        self.func
            .antiderivative(u)
            .unwrap_or_else(|| adaptive_simpson(|s| self.f(s), 0.0, u, QUAD_TOL, QUAD_MAX_INTERVALS).value)
    }

    /// `G(u) = ∫₀ᵘ s f'(s) ds`.
    pub fn antiderivative_g(&self, u: f64) -> f64 {
        self.func.moment_antiderivative(u).unwrap_or_else(|| {
            adaptive_simpson(|s| s * self.df(s), 0.0, u, QUAD_TOL, QUAD_MAX_INTERVALS).value
        })
    }

    /// `∫ₐᵇ f(s) ds`.
    pub fn integral_f(&self, a: f64, b: f64) -> f64 {
        match (self.func.antiderivative(a), self.func.antiderivative(b)) {
            (Some(fa), Some(fb)) => fb - fa,
            _ => adaptive_simpson(|s| self.f(s), a, b, QUAD_TOL, QUAD_MAX_INTERVALS).value,
        }
    }

    /// Sampled checks of convexity, monotone derivative and antiderivative consistency.
    pub fn validate(&self, samples: usize) -> Result<()> {
        let n = samples.max(4);
        let r = self.radius;
        let c = self.ddf_lower_bound();
        let grid: Vec<f64> = (0..=n).map(|i| -r + 2.0 * r * i as f64 / n as f64).collect();
        for w in grid.windows(2) {
            let (u1, u2) = (w[0], w[1]);
            let q = (self.df(u2) - self.df(u1)) / (u2 - u1);
            if q < c - 1e-9 * c.max(1.0) {
                return Err(Error::InvalidFlux(format!(
                    "{}: derivative quotient {q} below convexity bound {c} on [{u1}, {u2}]",
                    self.name()
                )));
            }
            if self.df(u2) <= self.df(u1) {
                return Err(Error::InvalidFlux(format!("{}: f' not increasing on [{u1}, {u2}]", self.name())));
            }
        }
        if self.has_closed_antiderivatives() {
            let h = 1e-5;
            for &u in grid.iter().step_by(8) {
                let df = (self.antiderivative_f(u + h) - self.antiderivative_f(u - h)) / (2.0 * h);
                let dg = (self.antiderivative_g(u + h) - self.antiderivative_g(u - h)) / (2.0 * h);
                let scale = 1.0 + self.f(u).abs() + (u * self.df(u)).abs();
                if (df - self.f(u)).abs() > 1e-6 * scale || (dg - u * self.df(u)).abs() > 1e-6 * scale {
                    return Err(Error::InvalidFlux(format!(
                        "{}: antiderivative inconsistent with flux at u = {u}",
                        self.name()
                    )));
                }
            }
        }
        Ok(())
    }
}
