//! Time slices `x ↦ u(x, t)` built from constant pieces and centred rarefactions.

use serde::Serialize;

use crate::flux::ConvexFlux;
use crate::quadrature::GaussLegendre;

/// One piece of a profile. `x_lo` of the first piece is `-inf`, `x_hi` of the last `+inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Constant { x_lo: f64, x_hi: f64, u: f64 },
    /// `u(x) = (f')⁻¹((x - x0) / (t - t0))`, between `u_lo` and `u_hi`.
    Rarefaction { x_lo: f64, x_hi: f64, u_lo: f64, u_hi: f64, x0: f64, t0: f64 },
}

impl Piece {
    pub fn x_lo(&self) -> f64 {
        match *self {
            Piece::Constant { x_lo, .. } | Piece::Rarefaction { x_lo, .. } => x_lo,
        }
    }

    pub fn x_hi(&self) -> f64 {
        match *self {
            Piece::Constant { x_hi, .. } | Piece::Rarefaction { x_hi, .. } => x_hi,
        }
    }
}

/// A piecewise description of `u(·, t)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub t: f64,
    pub pieces: Vec<Piece>,
}

impl Profile {
    /// Builds a piecewise-constant profile from jump positions and the states between them.
    ///
    /// `states.len()` must be `positions.len() + 1`.
    pub fn piecewise_constant(t: f64, positions: &[f64], states: &[f64]) -> Self {
        assert_eq!(states.len(), positions.len() + 1, "states must bracket the jumps");
        let mut pieces = Vec::with_capacity(states.len());
        let mut lo = f64::NEG_INFINITY;
        for (i, &u) in states.iter().enumerate() {
            let hi = positions.get(i).copied().unwrap_or(f64::INFINITY);
            pieces.push(Piece::Constant { x_lo: lo, x_hi: hi, u });
            lo = hi;
        }
        Self { t, pieces }
    }

    /// Value at `x`; at a jump the left limit is returned.
    pub fn value_at(&self, flux: &ConvexFlux, x: f64) -> f64 {
        for piece in &self.pieces {
            if x <= piece.x_hi() {
                return piece_value(flux, piece, self.t, x);
            }
        }
        match self.pieces.last() {
            Some(p) => piece_value(flux, p, self.t, x),
            None => 0.0,
        }
    }

    /// Largest `|u|` attained.
    pub fn sup_norm(&self) -> f64 {
        self.pieces
            .iter()
            .map(|p| match *p {
                Piece::Constant { u, .. } => u.abs(),
                Piece::Rarefaction { u_lo, u_hi, .. } => u_lo.abs().max(u_hi.abs()),
            })
            .fold(0.0, f64::max)
    }

    /// `∫ u dx` over `[x_lo, x_hi]`.
    pub fn integral(&self, flux: &ConvexFlux, x_lo: f64, x_hi: f64) -> f64 {
        let gl = GaussLegendre::new(24);
        self.pieces
            .iter()
            .map(|p| {
                let a = p.x_lo().max(x_lo);
                let b = p.x_hi().min(x_hi);
                if b <= a {
                    return 0.0;
                }
                match *p {
                    Piece::Constant { u, .. } => u * (b - a),
                    Piece::Rarefaction { .. } => gl.integrate(|x| piece_value(flux, p, self.t, x), a, b),
                }
            })
            .sum()
    }

    /// Breakpoints strictly inside `(x_lo, x_hi)`.
    pub fn breakpoints_within(&self, x_lo: f64, x_hi: f64) -> Vec<f64> {
        self.pieces
            .iter()
            .map(|p| p.x_hi())
            .filter(|&x| x > x_lo && x < x_hi)
            .collect()
    }
}

pub(crate) fn piece_value(flux: &ConvexFlux, piece: &Piece, t: f64, x: f64) -> f64 {
    match *piece {
        Piece::Constant { u, .. } => u,
        Piece::Rarefaction { u_lo, u_hi, x0, t0, .. } => {
            let dt = t - t0;
            if dt <= 0.0 {
                return if x <= x0 { u_lo } else { u_hi };
            }
            let omega = (x - x0) / dt;
            flux.inverse_derivative(omega).map_or_else(
                |_| if omega < flux.df(u_lo) { u_lo } else { u_hi },
                |u| u.clamp(u_lo, u_hi),
            )
        }
    }
}

/// `∫ |u - v| dx` over `[x_lo, x_hi]`, exact on constant pieces.
pub fn l1_distance(flux: &ConvexFlux, a: &Profile, b: &Profile, x_lo: f64, x_hi: f64) -> f64 {
    let mut breaks = vec![x_lo, x_hi];
    breaks.extend(a.breakpoints_within(x_lo, x_hi));
    breaks.extend(b.breakpoints_within(x_lo, x_hi));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let smooth = a.pieces.iter().chain(&b.pieces).any(|p| matches!(p, Piece::Rarefaction { .. }));
    let gl = GaussLegendre::new(16);
    breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            if smooth {
                gl.integrate(|x| (a.value_at(flux, x) - b.value_at(flux, x)).abs(), lo, hi)
            } else {
                let mid = 0.5 * (lo + hi);
                (a.value_at(flux, mid) - b.value_at(flux, mid)).abs() * (hi - lo)
            }
        })
        .sum()
}
