//! Viscosity solution of `g_t + f(g_x) = 0` by the Hopf-Lax formula, and
//! `u = ∂ₓg` as an independent entropy-solution oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flux::ConvexFlux;

const GRID_SEEDS: usize = 201;
const Y_TOL: f64 = 1e-10;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// `g0(x) = ∫₀ˣ u0` for piecewise-constant `u0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialData {
    breaks: Vec<f64>,
    values: Vec<f64>,
    /// `g0` at each break.
    at_breaks: Vec<f64>,
}

impl PotentialData {
    /// `u0 = values[i]` between `breaks[i-1]` and `breaks[i]`.
    pub fn piecewise(breaks: &[f64], values: &[f64]) -> Result<Self> {
        if values.len() != breaks.len() + 1 {
            return Err(Error::InvalidState(format!("{} breaks need {} values, got {}", breaks.len(), breaks.len() + 1, values.len())));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidState("breaks must be strictly increasing".into()));
        }
        let mut data = Self { breaks: breaks.to_vec(), values: values.to_vec(), at_breaks: vec![0.0; breaks.len()] };
        data.at_breaks = breaks.iter().map(|&b| data.integrate_from_zero(b)).collect();
        Ok(data)
    }

    pub fn riemann(u_l: f64, u_r: f64) -> Self {
        Self { breaks: vec![0.0], values: vec![u_l, u_r], at_breaks: vec![0.0] }
    }

    fn integrate_from_zero(&self, x: f64) -> f64 {
        let (lo, hi, sign) = if x >= 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
        let mut total = 0.0;
        let mut left = f64::NEG_INFINITY;
        for (i, &u) in self.values.iter().enumerate() {
            let right = self.breaks.get(i).copied().unwrap_or(f64::INFINITY);
            let a = left.max(lo);
            let b = right.min(hi);
            if b > a {
                total += u * (b - a);
            }
            left = right;
        }
        sign * total
    }

    /// `g0(x)`.
    pub fn g0(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b <= x);
        match i.checked_sub(1) {
            Some(k) => self.at_breaks[k] + self.values[i] * (x - self.breaks[k]),
            None => match self.breaks.first() {
                Some(&b0) => self.at_breaks[0] + self.values[0] * (x - b0),
                None => self.values[0] * x,
            },
        }
    }

    /// Lipschitz constant `‖u0‖∞`.
    pub fn lipschitz(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

fn golden_min<F: Fn(f64) -> f64>(phi: F, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (phi(c), phi(d));
    while b - a > Y_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = phi(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = phi(d);
        }
    }
    let y = 0.5 * (a + b);
    (y, phi(y))
}

/// `g(x,t) = min_y g0(y) + t f*((x - y)/t)` over `y ∈ [x - t f'(R), x - t f'(-R)]`.
pub fn hopf_lax_value(data: &PotentialData, flux: &ConvexFlux, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("Hopf-Lax needs t > 0, got {t}")));
    }
    let (p_lo, p_hi) = flux.slope_range();
    let (y_lo, y_hi) = (x - t * p_hi, x - t * p_lo);
    let phi = |y: f64| {
        let p = ((x - y) / t).clamp(p_lo, p_hi);
        data.g0(y) + t * flux.convex_conjugate(p).unwrap_or(f64::INFINITY)
    };

    let mut best = phi(y_lo).min(phi(y_hi));
    for &b in data.breaks.iter().filter(|&&b| b > y_lo && b < y_hi) {
        best = best.min(phi(b));
    }

    // grid seed, then refine around the best grid point
    let h = (y_hi - y_lo) / (GRID_SEEDS - 1) as f64;
    let (k_best, v_best) = (0..GRID_SEEDS)
        .map(|k| (k, phi(y_lo + h * k as f64)))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    best = best.min(v_best);
    let a = y_lo + h * k_best.saturating_sub(1) as f64;
    let b = (y_lo + h * (k_best + 1) as f64).min(y_hi);
    best = best.min(golden_min(phi, a, b).1);

    // on each linear piece of g0 the objective is convex
    let mut edges = vec![y_lo];
    edges.extend(data.breaks.iter().copied().filter(|&b| b > y_lo && b < y_hi));
    edges.push(y_hi);
    for w in edges.windows(2) {
        best = best.min(golden_min(phi, w[0], w[1]).1);
    }
    Ok(best)
}

/// `(g(x+h,t) - g(x-h,t)) / 2h`.
pub fn oracle_u(data: &PotentialData, flux: &ConvexFlux, x: f64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("difference step must be positive, got {h}")));
    }
    Ok((hopf_lax_value(data, flux, x + h, t)? - hopf_lax_value(data, flux, x - h, t)?) / (2.0 * h))
}

pub const DEFAULT_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HlSample {
    pub x: f64,
    pub t: f64,
    pub g: f64,
    pub u: f64,
}

/// `g` and `u` at every `x` of `xs`.
pub fn sample(data: &PotentialData, flux: &ConvexFlux, xs: &[f64], t: f64) -> Result<Vec<HlSample>> {
    xs.iter()
        .map(|&x| {
            Ok(HlSample { x, t, g: hopf_lax_value(data, flux, x, t)?, u: oracle_u(data, flux, x, t, DEFAULT_STEP)? })
        })
        .collect()
}
