//! Weak-formulation residual against a fixed battery of smooth bumps.
//!
//! `R(ψ) = ∫∫_{t > t0} u ψ_t + f(u) ψ_x dx dt + ∫ u(x, t0) ψ(x, t0) dx`
//! with `ψ(x, t) = B((x - xc)/rx) B((t - tc)/rt)` and `B(s) = (1 - s²)⁴`.

use serde::Serialize;

use crate::flux::ConvexFlux;
use crate::fronts::FrontHistory;
use crate::profile::{piece_value, Piece, Profile};
use crate::quadrature::GaussLegendre;
use crate::selfsim::WaveFan;

/// A solution known slice by slice, with the straight lines its slices jump across.
pub trait SpaceTimeField {
    fn time_span(&self) -> (f64, f64);
    fn profile(&self, t: f64) -> Profile;
    /// `(t0, x0, t1, x1)` for every line on which the slices are not smooth.
    fn lines(&self) -> Vec<(f64, f64, f64, f64)>;
}

impl SpaceTimeField for FrontHistory {
    fn time_span(&self) -> (f64, f64) {
        (self.t_start, self.t_end)
    }
    fn profile(&self, t: f64) -> Profile {
        self.slice(t)
    }
    fn lines(&self) -> Vec<(f64, f64, f64, f64)> {
        self.segments.iter().map(|s| (s.t0, s.x0, s.t1, s.x1)).collect()
    }
}

/// A fan restricted to `[0, t_end]`.
pub struct FanField<'a> {
    pub fan: &'a WaveFan,
    pub t_end: f64,
}

impl SpaceTimeField for FanField<'_> {
    fn time_span(&self) -> (f64, f64) {
        (0.0, self.t_end)
    }
    fn profile(&self, t: f64) -> Profile {
        self.fan.profile_at(t)
    }
    fn lines(&self) -> Vec<(f64, f64, f64, f64)> {
        self.fan.wave_speeds().into_iter().map(|w| (0.0, 0.0, self.t_end, w * self.t_end)).collect()
    }
}

fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        q * q * q * q
    }
}

fn bump_prime(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - s * s;
        -8.0 * s * q * q * q
    }
}

/// `∫₀ˢ B`, constant outside `[-1, 1]`.
fn bump_integral(s: f64) -> f64 {
    let s = s.clamp(-1.0, 1.0);
    let s2 = s * s;
    s * (1.0 + s2 * (-4.0 / 3.0 + s2 * (6.0 / 5.0 + s2 * (-4.0 / 7.0 + s2 / 9.0))))
}

/// A tensor-product bump test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestFunction {
    pub xc: f64,
    pub rx: f64,
    pub tc: f64,
    pub rt: f64,
}

impl TestFunction {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        bump((x - self.xc) / self.rx) * bump((t - self.tc) / self.rt)
    }

    /// `∫ u ψ_t + f(u) ψ_x dx` at time `t`.
    fn slice_integral(&self, flux: &ConvexFlux, profile: &Profile, t: f64, gl: &GaussLegendre) -> f64 {
        let st = (t - self.tc) / self.rt;
        let (bt, dbt) = (bump(st), bump_prime(st) / self.rt);
        if bt == 0.0 && dbt == 0.0 {
            return 0.0;
        }
        let (lo, hi) = (self.xc - self.rx, self.xc + self.rx);
        let mut total = 0.0;
        for piece in &profile.pieces {
            let a = piece.x_lo().max(lo);
            let b = piece.x_hi().min(hi);
            if b <= a {
                continue;
            }
            let (sa, sb) = ((a - self.xc) / self.rx, (b - self.xc) / self.rx);
            match *piece {
                Piece::Constant { u, .. } => {
                    total += u * dbt * self.rx * (bump_integral(sb) - bump_integral(sa));
                    total += flux.f(u) * bt * (bump(sb) - bump(sa));
                }
                Piece::Rarefaction { .. } => {
                    total += gl.integrate(
                        |x| {
                            let u = piece_value(flux, piece, t, x);
                            let s = (x - self.xc) / self.rx;
                            u * dbt * bump(s) + flux.f(u) * bt * bump_prime(s) / self.rx
                        },
                        a,
                        b,
                    );
                }
            }
        }
        total
    }

    /// `∫ u ψ dx` at time `t`.
    fn initial_integral(&self, flux: &ConvexFlux, profile: &Profile, t: f64, gl: &GaussLegendre) -> f64 {
        let bt = bump((t - self.tc) / self.rt);
        if bt == 0.0 {
            return 0.0;
        }
        let (lo, hi) = (self.xc - self.rx, self.xc + self.rx);
        profile
            .pieces
            .iter()
            .map(|piece| {
                let a = piece.x_lo().max(lo);
                let b = piece.x_hi().min(hi);
                if b <= a {
                    return 0.0;
                }
                match *piece {
                    Piece::Constant { u, .. } => {
                        u * bt * self.rx * (bump_integral((b - self.xc) / self.rx) - bump_integral((a - self.xc) / self.rx))
                    }
                    Piece::Rarefaction { .. } => {
                        gl.integrate(|x| piece_value(flux, piece, t, x) * bt * bump((x - self.xc) / self.rx), a, b)
                    }
                }
            })
            .sum()
    }
}

/// Weak residual of `field` against `psi`.
pub fn weak_residual<F: SpaceTimeField + ?Sized>(field: &F, flux: &ConvexFlux, psi: &TestFunction) -> f64 {
    let (t0, t_end) = field.time_span();
    let lo = t0.max(psi.tc - psi.rt);
    let hi = t_end.min(psi.tc + psi.rt);
    let inner = GaussLegendre::new(32);
    let outer = GaussLegendre::new(24);

    let mut breaks = vec![lo, hi];
    let edges = [psi.xc - psi.rx, psi.xc + psi.rx];
    for (ta, xa, tb, xb) in field.lines() {
        for t in [ta, tb] {
            if t > lo && t < hi {
                breaks.push(t);
            }
        }
        if tb > ta {
            for e in edges {
                // x(t) = e
                if (xa - e) * (xb - e) < 0.0 {
                    let t = ta + (e - xa) / (xb - xa) * (tb - ta);
                    if t > lo && t < hi {
                        breaks.push(t);
                    }
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() <= 1e-14);

    let mut total = 0.0;
    if hi > lo {
        total += outer.integrate_panels(|t| psi.slice_integral(flux, &field.profile(t), t, &inner), &breaks);
    }
    if psi.tc - psi.rt < t0 {
        total += psi.initial_integral(flux, &field.profile(t0), t0, &inner);
    }
    total
}

/// The 20 bumps: 5 centres in `x` across `[x_lo, x_hi]` by 4 centres in `t` across the field's span.
pub fn battery(x_lo: f64, x_hi: f64, t0: f64, t_end: f64) -> Vec<TestFunction> {
    let (lx, lt) = (x_hi - x_lo, t_end - t0);
    let mut out = Vec::with_capacity(20);
    for j in 0..4 {
        for k in 0..5 {
            out.push(TestFunction {
                xc: x_lo + lx * k as f64 / 4.0,
                rx: 0.4 * lx,
                tc: t0 + lt * j as f64 / 4.0,
                rt: 0.24 * lt,
            });
        }
    }
    out
}

/// Largest `|R(ψ)|` over the battery.
pub fn max_weak_residual<F: SpaceTimeField + ?Sized>(field: &F, flux: &ConvexFlux, x_lo: f64, x_hi: f64) -> f64 {
    let (t0, t_end) = field.time_span();
    battery(x_lo, x_hi, t0, t_end)
        .iter()
        .map(|psi| weak_residual(field, flux, psi).abs())
        .fold(0.0, f64::max)
}
