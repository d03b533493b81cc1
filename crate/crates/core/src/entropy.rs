//! Entropy production of jumps and of front-tracking solutions, the combined
//! shock entropy of fans, and the E-condition and entropy-inequality checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::ConvexFlux;
use crate::fronts::{FrontHistory, FrontState, Window};
use crate::profile::{piece_value, Piece, Profile};
use crate::quadrature::adaptive_simpson;
use crate::selfsim::WaveFan;

/// Tolerance of the level quadrature in [`kinetic_ep_rate`].
pub const KINETIC_QUAD_TOL: f64 = 1e-14;
const KINETIC_MAX_INTERVALS: usize = 1 << 20;
const CHEBYSHEV_LEVELS: usize = 33;
const RAREFACTION_SAMPLES: usize = 33;

/// An entropy `η` with flux `ξ`, `ξ' = η' f'`.
pub trait EntropyPair {
    fn eta(&self, u: f64) -> f64;
    fn eta_prime(&self, u: f64) -> f64;
    fn xi(&self, u: f64) -> f64;
    /// Point where `η` is not differentiable.
    fn kink(&self) -> Option<f64> {
        None
    }
}

/// `η = u²/2`, `ξ = G`.
#[derive(Debug, Clone)]
pub struct QuadraticEntropy {
    pub flux: ConvexFlux,
}

impl QuadraticEntropy {
    pub fn new(flux: &ConvexFlux) -> Self {
        Self { flux: flux.clone() }
    }
}

impl EntropyPair for QuadraticEntropy {
    fn eta(&self, u: f64) -> f64 {
        0.5 * u * u
    }
    fn eta_prime(&self, u: f64) -> f64 {
        u
    }
    fn xi(&self, u: f64) -> f64 {
        self.flux.antiderivative_g(u)
    }
}

/// `η_a = (u - a)⁺`, `ξ_a = sign(u - a)⁺ (f(u) - f(a))`.
#[derive(Debug, Clone)]
pub struct KruzhkovPair {
    pub a: f64,
    pub flux: ConvexFlux,
}

impl KruzhkovPair {
    pub fn new(flux: &ConvexFlux, a: f64) -> Self {
        Self { a, flux: flux.clone() }
    }
}

impl EntropyPair for KruzhkovPair {
    fn eta(&self, u: f64) -> f64 {
        (u - self.a).max(0.0)
    }
    fn eta_prime(&self, u: f64) -> f64 {
        if u > self.a {
            1.0
        } else {
            0.0
        }
    }
    fn xi(&self, u: f64) -> f64 {
        if u > self.a {
            self.flux.f(u) - self.flux.f(self.a)
        } else {
            0.0
        }
    }
    fn kink(&self) -> Option<f64> {
        Some(self.a)
    }
}

/// Samples `ξ' = η' f'` by central differences on `[lo, hi]`.
pub fn check_pair<P: EntropyPair + ?Sized>(pair: &P, flux: &ConvexFlux, lo: f64, hi: f64) -> Result<()> {
    let h = 1e-6;
    let n = 64;
    for i in 0..=n {
        let u = lo + (hi - lo) * i as f64 / n as f64;
        if pair.kink().is_some_and(|k| (u - k).abs() < 4.0 * h) {
            continue;
        }
        let lhs = (pair.xi(u + h) - pair.xi(u - h)) / (2.0 * h);
        let rhs = pair.eta_prime(u) * flux.df(u);
        if (lhs - rhs).abs() > 1e-5 * (1.0 + rhs.abs()) {
            return Err(Error::IncompatiblePair(format!("xi' = {lhs} but eta' f' = {rhs} at u = {u}")));
        }
    }
    Ok(())
}

/// Per-unit-time density of `m = ∂ₜ(u∧a) + ∂ₓ f(u∧a)` at level `a` across the jump `(u_minus | u_plus)`.
pub fn kinetic_density(flux: &ConvexFlux, u_minus: f64, u_plus: f64, a: f64) -> f64 {
    let (lo, hi) = (u_minus.min(u_plus), u_minus.max(u_plus));
    if u_minus == u_plus || a <= lo || a >= hi {
        return 0.0;
    }
    let sigma = flux.chord_slope(u_minus, u_plus).unwrap_or_else(|_| flux.df(u_minus));
    let (p, m) = (u_plus.min(a), u_minus.min(a));
    (flux.f(p) - flux.f(m)) - sigma * (p - m)
}

/// Signed production per unit time, `D = (u₋ - u₊)(f(u₋) + f(u₊))/2 + ∫_{u₋}^{u₊} f`.
pub fn jump_ep_rate(flux: &ConvexFlux, u_minus: f64, u_plus: f64) -> f64 {
    if u_minus == u_plus {
        return 0.0;
    }
    (u_minus - u_plus) * 0.5 * (flux.f(u_minus) + flux.f(u_plus)) + flux.integral_f(u_minus, u_plus)
}

/// `∫ |kinetic_density| da` by adaptive quadrature over the levels.
pub fn kinetic_ep_rate(flux: &ConvexFlux, u_minus: f64, u_plus: f64) -> f64 {
    if u_minus == u_plus {
        return 0.0;
    }
    let (lo, hi) = (u_minus.min(u_plus), u_minus.max(u_plus));
    adaptive_simpson(|a| kinetic_density(flux, u_minus, u_plus, a).abs(), lo, hi, KINETIC_QUAD_TOL, KINETIC_MAX_INTERVALS)
        .value
}

/// Production per unit arc length of the jump set, `|D| / √(1 + σ²)`.
pub fn delta_density(flux: &ConvexFlux, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let sigma = flux.chord_slope(a, b).unwrap_or_else(|_| flux.df(a));
    jump_ep_rate(flux, a, b).abs() / (1.0 + sigma * sigma).sqrt()
}

/// The density with the integral term taken in the `∫_a^b` orientation:
/// `[(a-b)²(f(a)+f(b))/2 - (a-b)∫_a^b f] / √((a-b)² + (f(a)-f(b))²)`.
pub fn delta_density_literal(flux: &ConvexFlux, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let d = a - b;
    let num = d * d * 0.5 * (flux.f(a) + flux.f(b)) - d * flux.integral_f(a, b);
    let df = flux.f(a) - flux.f(b);
    num / (d * d + df * df).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaAuditRow {
    pub u_minus: f64,
    pub u_plus: f64,
    pub sigma: f64,
    pub d: f64,
    pub kinetic: f64,
    pub literal: f64,
    pub ratio: f64,
}

/// Kinetic and literal densities side by side.
pub fn delta_audit(flux: &ConvexFlux, pairs: &[(f64, f64)]) -> Vec<DeltaAuditRow> {
    pairs
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| {
            let kinetic = delta_density(flux, a, b);
            let literal = delta_density_literal(flux, a, b);
            DeltaAuditRow {
                u_minus: a,
                u_plus: b,
                sigma: flux.speed(a, b),
                d: jump_ep_rate(flux, a, b),
                kinetic,
                literal,
                ratio: literal / kinetic,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpMode {
    Signed,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub front_id: u64,
    pub t_start: f64,
    pub t_end: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub sigma: f64,
    pub d: f64,
    pub abs_d: f64,
    pub delta: f64,
}

impl LedgerEntry {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }

    /// Length of the front's path inside the window.
    pub fn arc_length(&self) -> f64 {
        self.duration() * (1.0 + self.sigma * self.sigma).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyLedger {
    pub per_front: Vec<LedgerEntry>,
    pub window: Window,
    pub total_signed: f64,
    pub total_abs: f64,
}

impl EntropyLedger {
    pub fn total(&self, mode: EpMode) -> f64 {
        match mode {
            EpMode::Signed => self.total_signed,
            EpMode::Abs => self.total_abs,
        }
    }

    /// `Σ Δ · H¹`, which equals `total_abs` up to rounding.
    pub fn total_by_arc_length(&self) -> f64 {
        self.per_front.iter().map(|e| e.delta * e.arc_length()).sum()
    }

    /// `Σ ∫|m| da · duration` with the level integral done by quadrature.
    pub fn total_kinetic(&self, flux: &ConvexFlux) -> f64 {
        self.per_front.iter().map(|e| kinetic_ep_rate(flux, e.u_minus, e.u_plus) * e.duration()).sum()
    }
}

/// Production of every front inside `window`, front by front.
pub fn total_ep(history: &FrontHistory, flux: &ConvexFlux, window: &Window) -> Result<EntropyLedger> {
    window.check_span(history.t_start, history.t_end)?;
    let mut per_front = Vec::new();
    let (mut total_signed, mut total_abs) = (0.0, 0.0);
    for seg in &history.segments {
        if seg.u_minus == seg.u_plus {
            continue;
        }
        let Some((t_start, t_end)) = window.clip(seg) else { continue };
        let dur = t_end - t_start;
        let d = jump_ep_rate(flux, seg.u_minus, seg.u_plus);
        per_front.push(LedgerEntry {
            front_id: seg.id,
            t_start,
            t_end,
            u_minus: seg.u_minus,
            u_plus: seg.u_plus,
            sigma: seg.sigma,
            d,
            abs_d: d.abs(),
            delta: d.abs() / (1.0 + seg.sigma * seg.sigma).sqrt(),
        });
        total_signed += d * dur;
        total_abs += d.abs() * dur;
    }
    Ok(EntropyLedger { per_front, window: *window, total_signed, total_abs })
}

/// `P = Σ_shocks ξ(v₊) - ξ(v₋) - σ (η(v₊) - η(v₋))`; rarefactions contribute nothing.
pub fn combined_entropy_p<P: EntropyPair + ?Sized>(fan: &WaveFan, pair: &P) -> f64 {
    fan.shocks()
        .map(|(m, p, sigma)| pair.xi(p) - pair.xi(m) - sigma * (pair.eta(p) - pair.eta(m)))
        .sum::<f64>()
        + 0.0
}

/// `Ḣ = P + ξ(u_l) - ξ(u_r)`.
pub fn entropy_rate_hdot<P: EntropyPair + ?Sized>(fan: &WaveFan, pair: &P) -> f64 {
    combined_entropy_p(fan, pair) + pair.xi(fan.left_state) - pair.xi(fan.right_state)
}

/// [`combined_entropy_p`] after checking the pair on the fan's state range.
pub fn combined_entropy_p_checked<P: EntropyPair + ?Sized>(fan: &WaveFan, pair: &P, flux: &ConvexFlux) -> Result<f64> {
    let (lo, hi) = fan_state_range(fan);
    check_pair(pair, flux, lo, hi)?;
    Ok(combined_entropy_p(fan, pair))
}

fn fan_state_range(fan: &WaveFan) -> (f64, f64) {
    fan.waves.iter().fold((fan.left_state.min(fan.right_state), fan.left_state.max(fan.right_state)), |(lo, hi), w| {
        (lo.min(w.left_state()).min(w.right_state()), hi.max(w.left_state()).max(w.right_state()))
    })
}

/// Production per unit time of a fan, `Σ_shocks |D|`.
pub fn fan_ep_rate(flux: &ConvexFlux, fan: &WaveFan) -> f64 {
    fan.shocks().map(|(m, p, _)| jump_ep_rate(flux, m, p).abs()).sum::<f64>() + 0.0
}

/// Outcome of an E-condition check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EConditionReport {
    pub holds: bool,
    /// `max u(y) - u(x) - (y - x)/(c t)` over sampled `x < y`; zero when no pair does worse than a constant.
    pub worst_excess: f64,
    pub worst_pair: Option<(f64, f64)>,
    pub slack: f64,
}

/// Checks `u(y,t) - u(x,t) <= (y - x)/(c t) + slack` for all `x < y` on a profile.
///
/// Constant pieces are handled exactly, rarefaction pieces by sampling.
pub fn check_e_condition(profile: &Profile, flux: &ConvexFlux, c: f64, slack: f64) -> EConditionReport {
    let t = profile.t;
    // (x_lo, x_hi, u) in increasing position
    let mut atoms: Vec<(f64, f64, f64)> = Vec::new();
    for piece in &profile.pieces {
        match *piece {
            Piece::Constant { x_lo, x_hi, u } => atoms.push((x_lo, x_hi, u)),
            Piece::Rarefaction { x_lo, x_hi, .. } => {
                for k in 0..RAREFACTION_SAMPLES {
                    let x = x_lo + (x_hi - x_lo) * k as f64 / (RAREFACTION_SAMPLES - 1) as f64;
                    atoms.push((x, x, piece_value(flux, piece, t, x)));
                }
            }
        }
    }
    scan_atoms(&atoms, t, c, slack)
}

/// Same check on point samples `(x, u)` sorted by `x`.
pub fn check_e_condition_points(points: &[(f64, f64)], t: f64, c: f64, slack: f64) -> EConditionReport {
    let atoms: Vec<(f64, f64, f64)> = points.iter().map(|&(x, u)| (x, x, u)).collect();
    scan_atoms(&atoms, t, c, slack)
}

/// `atoms` are `(x_lo, x_hi, u)` in increasing position; the sup over `x < y`
/// is attained at the nearest ends, so a running minimum suffices.
fn scan_atoms(atoms: &[(f64, f64, f64)], t: f64, c: f64, slack: f64) -> EConditionReport {
    let scale = 1.0 / (c * t);
    let mut worst = 0.0;
    let mut worst_pair = None;
    let mut best_left: Option<(f64, f64)> = None;
    for &(x_lo, x_hi, u) in atoms {
        if let Some((value, at)) = best_left {
            let excess = u - x_lo * scale - value;
            if excess > worst {
                worst = excess;
                worst_pair = Some((at, x_lo));
            }
        }
        if x_hi.is_finite() {
            let candidate = u - x_hi * scale;
            if best_left.is_none_or(|(v, _)| candidate < v) {
                best_left = Some((candidate, x_hi));
            }
        }
    }
    EConditionReport { holds: worst <= slack + 1e-12 * (1.0 + slack), worst_excess: worst, worst_pair, slack }
}

pub fn check_e_condition_state(state: &FrontState, flux: &ConvexFlux, slack: f64) -> EConditionReport {
    check_e_condition(&state.profile(), flux, flux.ddf_lower_bound(), slack)
}

pub fn check_e_condition_fan(fan: &WaveFan, flux: &ConvexFlux, t: f64, slack: f64) -> EConditionReport {
    check_e_condition(&fan.profile_at(t), flux, flux.ddf_lower_bound(), slack)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontSign {
    pub index: usize,
    pub u_minus: f64,
    pub u_plus: f64,
    pub entropic: bool,
    pub min_density: f64,
    pub max_density: f64,
    /// Sampled densities carry the sign `sign(u₋ - u₊)`.
    pub consistent: bool,
}

/// Levels at which [`kinetic_density`] is sampled: Chebyshev points plus both ends nudged by `1e-6`.
pub fn sample_levels(u_minus: f64, u_plus: f64) -> Vec<f64> {
    let (lo, hi) = (u_minus.min(u_plus), u_minus.max(u_plus));
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let mut levels: Vec<f64> = (0..CHEBYSHEV_LEVELS)
        .map(|k| mid + half * ((2 * k + 1) as f64 * std::f64::consts::PI / (2 * CHEBYSHEV_LEVELS) as f64).cos())
        .collect();
    levels.extend([lo - 1e-6, lo + 1e-6, hi - 1e-6, hi + 1e-6]);
    levels
}

/// Per-front sign of the entropy defect.
pub fn check_entropy_inequality(state: &FrontState, flux: &ConvexFlux) -> Vec<FrontSign> {
    (0..state.len())
        .map(|i| {
            let (m, p) = (state.states[i], state.states[i + 1]);
            let densities: Vec<f64> = sample_levels(m, p).into_iter().map(|a| kinetic_density(flux, m, p, a)).collect();
            let min_density = densities.iter().copied().fold(0.0, f64::min);
            let max_density = densities.iter().copied().fold(0.0, f64::max);
            let entropic = m >= p;
            let tol = 1e-14 * (1.0 + m.abs().max(p.abs())).powi(3);
            let consistent = if entropic { min_density >= -tol } else { max_density <= tol };
            FrontSign { index: i, u_minus: m, u_plus: p, entropic, min_density, max_density, consistent }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fronts::{evolve, FrontKind, Mode};
    use crate::quadrature::GaussLegendre;
    use crate::selfsim::{non_entropic_family, solve_riemann, SegmentKind};
    use approx::assert_abs_diff_eq;

    #[test]
    fn kinetic_density_examples() {
        let flux = ConvexFlux::burgers(3.0);
        assert_eq!(kinetic_density(&flux, 1.0, 0.0, 2.0), 0.0);
        assert_eq!(kinetic_density(&flux, 1.0, 0.0, -5.0), 0.0);
        assert_abs_diff_eq!(kinetic_density(&flux, 1.0, 0.0, 0.5), 0.125, epsilon = 1e-15);
        let total = GaussLegendre::new(8).integrate(|a| kinetic_density(&flux, 1.0, 0.0, a), 0.0, 1.0);
        assert_abs_diff_eq!(total, 1.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn jump_rates() {
        let flux = ConvexFlux::burgers(3.0);
        assert_abs_diff_eq!(jump_ep_rate(&flux, 1.0, 0.0), 1.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(jump_ep_rate(&flux, -1.0, 1.0), -2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(jump_ep_rate(&flux, 0.4, 0.4), 0.0);
        assert_abs_diff_eq!(kinetic_ep_rate(&flux, 1.0, 0.0), 1.0 / 12.0, epsilon = 1e-15);
    }

    #[test]
    fn delta_examples() {
        let flux = ConvexFlux::burgers(3.0);
        assert_abs_diff_eq!(delta_density(&flux, 1.0, 0.0), 1.0 / (6.0 * 5f64.sqrt()), epsilon = 1e-15);
        assert_abs_diff_eq!(delta_density(&flux, -1.0, 1.0), 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(delta_density(&flux, 0.2, 0.2), 0.0);
        assert_abs_diff_eq!(delta_density_literal(&flux, 1.0, 0.0), 5.0 / 12.0 * 2.0 / 5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn ledger_single_shock_and_merge() {
        let flux = ConvexFlux::burgers(3.0);
        let w = Window::Rect { t_lo: 0.0, t_hi: 2.0, x_lo: None, x_hi: None };

        let one = FrontState::new(&flux, 0.0, vec![0.0], vec![1.0, 0.0], vec![FrontKind::EntropicShock]).unwrap();
        let h = evolve(&one, &flux, 2.0, Mode::Entropic, 0.01).unwrap().history();
        let ledger = total_ep(&h, &flux, &w).unwrap();
        assert_abs_diff_eq!(ledger.total_abs, 1.0 / 6.0, epsilon = 1e-15);

        let two = FrontState::new(&flux, 0.0, vec![0.0, 1.0], vec![2.0, 1.0, 0.0], vec![FrontKind::EntropicShock; 2]).unwrap();
        let h = evolve(&two, &flux, 2.0, Mode::Entropic, 0.01).unwrap().history();
        let ledger = total_ep(&h, &flux, &w).unwrap();
        assert_abs_diff_eq!(ledger.total_abs, 5.0 / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ledger.total_signed, 5.0 / 6.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ledger.total_by_arc_length(), 5.0 / 6.0, epsilon = 1e-14);
        let sum: f64 = ledger.per_front.iter().map(|e| e.abs_d * e.duration()).sum();
        assert_abs_diff_eq!(sum, ledger.total_abs, epsilon = 1e-15);

        let late = Window::Rect { t_lo: 1.0, t_hi: 3.0, x_lo: None, x_hi: None };
        assert!(matches!(total_ep(&h, &flux, &late), Err(Error::WindowOutsideSpan(_))));
    }

    #[test]
    fn ledger_x_clipped_window() {
        let flux = ConvexFlux::burgers(3.0);
        let one = FrontState::new(&flux, 0.0, vec![0.0], vec![1.0, 0.0], vec![FrontKind::EntropicShock]).unwrap();
        let h = evolve(&one, &flux, 4.0, Mode::Entropic, 0.01).unwrap().history();
        let w = Window::Rect { t_lo: 0.0, t_hi: 4.0, x_lo: Some(-1.0), x_hi: Some(1.0) };
        let ledger = total_ep(&h, &flux, &w).unwrap();
        assert_abs_diff_eq!(ledger.total_abs, 2.0 / 12.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ledger.per_front[0].duration(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn combined_entropy_examples() {
        let flux = ConvexFlux::burgers(3.0);
        let q = QuadraticEntropy::new(&flux);
        let shock = solve_riemann(&flux, 1.0, -1.0).unwrap();
        assert_abs_diff_eq!(combined_entropy_p(&shock, &q), -2.0 / 3.0, epsilon = 1e-15);
        let raref = solve_riemann(&flux, -1.0, 1.0).unwrap();
        assert_eq!(combined_entropy_p(&raref, &q), 0.0);
        let exp = non_entropic_family(&flux, -1.0, 1.0, &[], &[SegmentKind::ExpansionShock]).unwrap();
        assert_abs_diff_eq!(combined_entropy_p(&exp, &q), 2.0 / 3.0, epsilon = 1e-15);
        // Ḣ = P + ξ(-1) - ξ(1) = 2/3 - 2/3
        assert_abs_diff_eq!(entropy_rate_hdot(&exp, &q), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy_rate_hdot(&raref, &q), -2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn incompatible_pair_is_rejected() {
        struct Wrong;
        impl EntropyPair for Wrong {
            fn eta(&self, u: f64) -> f64 {
                0.5 * u * u
            }
            fn eta_prime(&self, u: f64) -> f64 {
                u
            }
            fn xi(&self, u: f64) -> f64 {
                u
            }
        }
        let flux = ConvexFlux::burgers(3.0);
        let fan = solve_riemann(&flux, 1.0, 0.0).unwrap();
        assert!(matches!(combined_entropy_p_checked(&fan, &Wrong, &flux), Err(Error::IncompatiblePair(_))));
        assert!(combined_entropy_p_checked(&fan, &QuadraticEntropy::new(&flux), &flux).is_ok());
        assert!(check_pair(&KruzhkovPair::new(&flux, 0.3), &flux, -1.0, 1.0).is_ok());
    }

    #[test]
    fn e_condition_examples() {
        let flux = ConvexFlux::burgers(3.0);
        let shock = FrontState::new(&flux, 1.0, vec![0.5], vec![1.0, 0.0], vec![FrontKind::EntropicShock]).unwrap();
        let r = check_e_condition_state(&shock, &flux, 0.0);
        assert!(r.holds);
        assert!(r.worst_excess <= 0.0);

        let raref = solve_riemann(&flux, -1.0, 1.0).unwrap();
        let r = check_e_condition_fan(&raref, &flux, 1.0, 0.0);
        assert!(r.holds);
        assert!(r.worst_excess.abs() <= 1e-12);

        let exp = FrontState::new(&flux, 1.0, vec![0.0], vec![-1.0, 1.0], vec![FrontKind::ExpansionShock]).unwrap();
        let r = check_e_condition_state(&exp, &flux, 0.0);
        assert!(!r.holds);
        assert_abs_diff_eq!(r.worst_excess, 2.0, epsilon = 1e-15);
        assert_eq!(r.worst_pair, Some((0.0, 0.0)));
    }

    #[test]
    fn entropy_inequality_labels() {
        let flux = ConvexFlux::burgers(3.0);
        let s = FrontState::new(
            &flux,
            0.0,
            vec![0.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![FrontKind::EntropicShock, FrontKind::ExpansionShock],
        )
        .unwrap();
        let report = check_entropy_inequality(&s, &flux);
        assert!(report[0].entropic && report[0].consistent);
        assert!(!report[1].entropic && report[1].consistent);
        assert!(report[1].min_density < 0.0);
    }
}
