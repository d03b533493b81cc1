//! Self-similar solutions `u(x, t) = v(x/t)` of the Riemann problem.
//!
//! [`solve_riemann`] returns the unique entropic fan. [`non_entropic_family`]
//! builds the other self-similar weak solutions for increasing data: the
//! states are split by intermediate values and every segment is crossed either
//! by a rarefaction or by an expansion shock travelling at the chord speed.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flux::ConvexFlux;
use crate::profile::{Piece, Profile};

const RH_TOL: f64 = 1e-12;
const ORDER_TOL: f64 = 1e-12;

/// A single wave in a fan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Wave {
    Shock {
        u_minus: f64,
        u_plus: f64,
        sigma: f64,
    },
    Rarefaction {
        #[serde(rename = "u_minus")]
        u_lo: f64,
        #[serde(rename = "u_plus")]
        u_hi: f64,
        omega_lo: f64,
        omega_hi: f64,
    },
}

impl Wave {
    pub fn left_state(&self) -> f64 {
        match *self {
            Wave::Shock { u_minus, .. } => u_minus,
            Wave::Rarefaction { u_lo, .. } => u_lo,
        }
    }

    pub fn right_state(&self) -> f64 {
        match *self {
            Wave::Shock { u_plus, .. } => u_plus,
            Wave::Rarefaction { u_hi, .. } => u_hi,
        }
    }

    /// The ω-interval the wave occupies.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { sigma, .. } => (sigma, sigma),
            Wave::Rarefaction { omega_lo, omega_hi, .. } => (omega_lo, omega_hi),
        }
    }

    pub fn is_shock(&self) -> bool {
        matches!(self, Wave::Shock { .. })
    }

    fn shock(flux: &ConvexFlux, u_minus: f64, u_plus: f64) -> Result<Self> {
        Ok(Wave::Shock { u_minus, u_plus, sigma: flux.chord_slope(u_minus, u_plus)? })
    }

    fn rarefaction(flux: &ConvexFlux, u_lo: f64, u_hi: f64) -> Self {
        Wave::Rarefaction { u_lo, u_hi, omega_lo: flux.df(u_lo), omega_hi: flux.df(u_hi) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropicFlag {
    Entropic,
    NonEntropic,
    Unknown,
}

/// How a segment between consecutive states of a family member is crossed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    ExpansionShock,
    Rarefaction,
}

/// A self-similar solution as an ordered sequence of waves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveFan {
    pub left_state: f64,
    pub right_state: f64,
    pub waves: Vec<Wave>,
    pub entropic_flag: EntropicFlag,
}

/// The entropic fan for Riemann data `(u_l, u_r)`.
pub fn solve_riemann(flux: &ConvexFlux, u_l: f64, u_r: f64) -> Result<WaveFan> {
    flux.check_state(u_l)?;
    flux.check_state(u_r)?;
    let waves = if u_l > u_r {
        vec![Wave::shock(flux, u_l, u_r)?]
    } else if u_l < u_r {
        vec![Wave::rarefaction(flux, u_l, u_r)]
    } else {
        Vec::new()
    };
    Ok(WaveFan { left_state: u_l, right_state: u_r, waves, entropic_flag: EntropicFlag::Entropic })
}

/// A non-entropic self-similar weak solution for `u_l < u_r`.
///
/// `kinds` has one entry per segment (`intermediates.len() + 1`), and at least
/// one segment must be an expansion shock.
pub fn non_entropic_family(
    flux: &ConvexFlux,
    u_l: f64,
    u_r: f64,
    intermediates: &[f64],
    kinds: &[SegmentKind],
) -> Result<WaveFan> {
    if u_l >= u_r {
        return Err(Error::UnsupportedFamily(format!(
            "u_l = {u_l} >= u_r = {u_r}: the entropic shock is the only self-similar fan for convex flux"
        )));
    }
    if !kinds.contains(&SegmentKind::ExpansionShock) {
        return Err(Error::InvalidFamily("at least one segment must be an expansion shock".into()));
    }
    let mut fan = WaveFan::from_segments(flux, u_l, u_r, intermediates, kinds)?;
    fan.entropic_flag = EntropicFlag::NonEntropic;
    Ok(fan)
}

impl WaveFan {
    /// Assembles a fan from states and per-segment kinds, then validates it.
    ///
    /// Descending segments are always shocks; `SegmentKind::Rarefaction` on a
    /// descending segment is rejected. The ω-ordering is checked, never repaired.
    pub fn from_segments(
        flux: &ConvexFlux,
        u_l: f64,
        u_r: f64,
        intermediates: &[f64],
        kinds: &[SegmentKind],
    ) -> Result<Self> {
        if kinds.len() != intermediates.len() + 1 {
            return Err(Error::InvalidFamily(format!(
                "{} segment kinds given for {} segments",
                kinds.len(),
                intermediates.len() + 1
            )));
        }
        let mut states = Vec::with_capacity(intermediates.len() + 2);
        states.push(u_l);
        states.extend_from_slice(intermediates);
        states.push(u_r);
        for &u in &states {
            flux.check_state(u)?;
        }

        let mut waves = Vec::with_capacity(kinds.len());
        for (w, &kind) in states.windows(2).zip(kinds) {
            let (a, b) = (w[0], w[1]);
            if a == b {
                return Err(Error::InvalidFamily(format!("repeated state {a}")));
            }
            match kind {
                SegmentKind::ExpansionShock => waves.push(Wave::shock(flux, a, b)?),
                SegmentKind::Rarefaction if a < b => waves.push(Wave::rarefaction(flux, a, b)),
                SegmentKind::Rarefaction => {
                    return Err(Error::InvalidFamily(format!("rarefaction cannot connect {a} down to {b}")))
                }
            }
        }
        let fan = WaveFan { left_state: u_l, right_state: u_r, waves, entropic_flag: EntropicFlag::Unknown };
        fan.validate(flux)?;
        Ok(fan)
    }

    /// Checks state chaining, Rankine-Hugoniot, rarefaction bounds and ω-ordering.
    pub fn validate(&self, flux: &ConvexFlux) -> Result<()> {
        let mut state = self.left_state;
        for (i, wave) in self.waves.iter().enumerate() {
            if wave.left_state() != state {
                return Err(Error::FanOrdering(format!(
                    "wave {i} starts at {} but the preceding state is {state}",
                    wave.left_state()
                )));
            }
            match *wave {
                Wave::Shock { u_minus, u_plus, sigma } => {
                    let chord = flux.chord_slope(u_minus, u_plus)?;
                    if (sigma - chord).abs() > RH_TOL {
                        return Err(Error::FanOrdering(format!(
                            "shock {i} speed {sigma} violates Rankine-Hugoniot (chord {chord})"
                        )));
                    }
                }
                Wave::Rarefaction { u_lo, u_hi, omega_lo, omega_hi } => {
                    if !(u_lo < u_hi) || omega_lo != flux.df(u_lo) || omega_hi != flux.df(u_hi) {
                        return Err(Error::FanOrdering(format!("rarefaction {i} has inconsistent bounds")));
                    }
                }
            }
            state = wave.right_state();
        }
        if state != self.right_state {
            return Err(Error::FanOrdering(format!(
                "last wave ends at {state}, expected right state {}",
                self.right_state
            )));
        }
        let offending: Vec<String> = self
            .waves
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].support().1 > w[1].support().0 + ORDER_TOL)
            .map(|(i, w)| format!("waves {i},{}: {} > {}", i + 1, w[0].support().1, w[1].support().0))
            .collect();
        if !offending.is_empty() {
            return Err(Error::FanOrdering(offending.join("; ")));
        }
        Ok(())
    }

    /// `v(ω)`; exactly at a shock the left limit is returned.
    pub fn evaluate(&self, flux: &ConvexFlux, omega: f64) -> f64 {
        for wave in &self.waves {
            match *wave {
                Wave::Shock { u_minus, sigma, .. } => {
                    if omega <= sigma {
                        return u_minus;
                    }
                }
                Wave::Rarefaction { u_lo, u_hi, omega_lo, omega_hi } => {
                    if omega <= omega_lo {
                        return u_lo;
                    }
                    if omega < omega_hi {
                        return flux.inverse_derivative(omega).map_or(u_lo, |u| u.clamp(u_lo, u_hi));
                    }
                }
            }
        }
        self.right_state
    }

    pub fn shocks(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.waves.iter().filter_map(|w| match *w {
            Wave::Shock { u_minus, u_plus, sigma } => Some((u_minus, u_plus, sigma)),
            Wave::Rarefaction { .. } => None,
        })
    }

    /// Smallest jump among upward (expansion) shocks, if any.
    pub fn min_expansion_jump(&self) -> Option<f64> {
        self.shocks().filter(|(m, p, _)| p > m).map(|(m, p, _)| p - m).reduce(f64::min)
    }

    /// The slice `u(·, t)` for `t > 0`; at `t = 0` the Riemann data itself.
    pub fn profile_at(&self, t: f64) -> Profile {
        if t <= 0.0 {
            return Profile::piecewise_constant(0.0, &[0.0], &[self.left_state, self.right_state]);
        }
        let mut pieces = Vec::with_capacity(2 * self.waves.len() + 1);
        let mut lo = f64::NEG_INFINITY;
        let mut state = self.left_state;
        for wave in &self.waves {
            let (w_lo, w_hi) = wave.support();
            let x_lo = w_lo * t;
            if x_lo > lo {
                pieces.push(Piece::Constant { x_lo: lo, x_hi: x_lo, u: state });
            }
            if let Wave::Rarefaction { u_lo, u_hi, .. } = *wave {
                pieces.push(Piece::Rarefaction { x_lo, x_hi: w_hi * t, u_lo, u_hi, x0: 0.0, t0: 0.0 });
            }
            lo = w_hi * t;
            state = wave.right_state();
        }
        pieces.push(Piece::Constant { x_lo: lo, x_hi: f64::INFINITY, u: state });
        Profile { t, pieces }
    }

    /// Lines `x = ω t` bounding each wave.
    pub fn wave_speeds(&self) -> Vec<f64> {
        let mut speeds: Vec<f64> = self
            .waves
            .iter()
            .flat_map(|w| {
                let (a, b) = w.support();
                [a, b]
            })
            .collect();
        speeds.dedup();
        speeds
    }
}

/// A generated comparison class for `u_l < u_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub entropic: WaveFan,
    pub members: Vec<WaveFan>,
}

/// Draws `members` non-entropic fans with up to `max_intermediates` states.
///
/// The first member is always the single expansion shock; the rest cycle
/// through the number of intermediates, with states drawn from a seeded
/// generator and at least one expansion segment.
pub fn random_family(
    flux: &ConvexFlux,
    u_l: f64,
    u_r: f64,
    max_intermediates: usize,
    members: usize,
    seed: u64,
) -> Result<Family> {
    let entropic = solve_riemann(flux, u_l, u_r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(members);
    for i in 0..members {
        let k = if i == 0 { 0 } else { i % (max_intermediates + 1) };
        let mut inter: Vec<f64> = (0..k).map(|_| rng.random_range(u_l..u_r)).collect();
        inter.sort_by(f64::total_cmp);
        inter.dedup();
        if inter.iter().any(|&s| s <= u_l || s >= u_r) {
            inter.retain(|&s| s > u_l && s < u_r);
        }
        let mut kinds: Vec<SegmentKind> = (0..=inter.len())
            .map(|_| if rng.random_bool(0.5) { SegmentKind::ExpansionShock } else { SegmentKind::Rarefaction })
            .collect();
        if i == 0 {
            kinds.fill(SegmentKind::ExpansionShock);
        }
        if !kinds.contains(&SegmentKind::ExpansionShock) {
            let j = rng.random_range(0..kinds.len());
            kinds[j] = SegmentKind::ExpansionShock;
        }
        out.push(non_entropic_family(flux, u_l, u_r, &inter, &kinds)?);
    }
    Ok(Family { entropic, members: out })
}

/// Members with `n` equally spaced intermediate states, all segments expansion shocks.
pub fn equal_split_family(flux: &ConvexFlux, u_l: f64, u_r: f64, splits: &[usize]) -> Result<Family> {
    let entropic = solve_riemann(flux, u_l, u_r)?;
    let members = splits
        .iter()
        .map(|&n| {
            let inter: Vec<f64> = (1..=n).map(|k| u_l + (u_r - u_l) * k as f64 / (n + 1) as f64).collect();
            non_entropic_family(flux, u_l, u_r, &inter, &vec![SegmentKind::ExpansionShock; n + 1])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Family { entropic, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn burgers() -> ConvexFlux {
        ConvexFlux::burgers(2.0)
    }

    #[test]
    fn riemann_examples() {
        let f = burgers();
        let shock = solve_riemann(&f, 1.0, 0.0).unwrap();
        assert_eq!(shock.waves, vec![Wave::Shock { u_minus: 1.0, u_plus: 0.0, sigma: 0.5 }]);
        assert_eq!(shock.entropic_flag, EntropicFlag::Entropic);

        let rare = solve_riemann(&f, -1.0, 1.0).unwrap();
        assert_eq!(
            rare.waves,
            vec![Wave::Rarefaction { u_lo: -1.0, u_hi: 1.0, omega_lo: -1.0, omega_hi: 1.0 }]
        );
        for &w in &[-0.7, 0.0, 0.5] {
            assert_abs_diff_eq!(rare.evaluate(&f, w), w);
        }

        let flat = solve_riemann(&f, 0.0, 0.0).unwrap();
        assert!(flat.waves.is_empty());
        assert_eq!(flat.evaluate(&f, 3.0), 0.0);
    }

    #[test]
    fn family_examples() {
        let f = burgers();
        let one = non_entropic_family(&f, -1.0, 1.0, &[], &[SegmentKind::ExpansionShock]).unwrap();
        assert_eq!(one.waves, vec![Wave::Shock { u_minus: -1.0, u_plus: 1.0, sigma: 0.0 }]);
        assert_eq!(one.entropic_flag, EntropicFlag::NonEntropic);

        let two = non_entropic_family(&f, -1.0, 1.0, &[0.0], &[SegmentKind::ExpansionShock; 2]).unwrap();
        let sigmas: Vec<f64> = two.shocks().map(|s| s.2).collect();
        assert_eq!(sigmas, vec![-0.5, 0.5]);
        assert_eq!(two.evaluate(&f, 0.0), 0.0);

        let mixed = non_entropic_family(
            &f,
            -1.0,
            1.0,
            &[0.0],
            &[SegmentKind::Rarefaction, SegmentKind::ExpansionShock],
        )
        .unwrap();
        assert_eq!(mixed.waves[0].support(), (-1.0, 0.0));
        assert_eq!(mixed.waves[1].support(), (0.5, 0.5));
    }

    #[test]
    fn evaluate_conventions() {
        let f = burgers();
        let shock = solve_riemann(&f, 1.0, 0.0).unwrap();
        assert_eq!(shock.evaluate(&f, 0.49), 1.0);
        assert_eq!(shock.evaluate(&f, 0.5), 1.0);
        assert_eq!(shock.evaluate(&f, 0.51), 0.0);
    }

    #[test]
    fn family_rejects_bad_input() {
        let f = burgers();
        assert!(matches!(
            non_entropic_family(&f, 1.0, -1.0, &[], &[SegmentKind::ExpansionShock]),
            Err(Error::UnsupportedFamily(_))
        ));
        assert!(matches!(
            non_entropic_family(&f, -1.0, 1.0, &[], &[SegmentKind::Rarefaction]),
            Err(Error::InvalidFamily(_))
        ));
        assert!(matches!(
            non_entropic_family(&f, -1.0, 1.0, &[0.0], &[SegmentKind::ExpansionShock]),
            Err(Error::InvalidFamily(_))
        ));
    }

    #[test]
    fn downward_split_reports_offending_speeds() {
        let err = WaveFan::from_segments(&burgers(), 1.0, -1.0, &[0.0], &[SegmentKind::ExpansionShock; 2])
            .unwrap_err();
        match err {
            Error::FanOrdering(msg) => assert!(msg.contains("0.5 > -0.5"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fan_json_shape() {
        let fan = non_entropic_family(
            &burgers(),
            -1.0,
            1.0,
            &[0.0],
            &[SegmentKind::Rarefaction, SegmentKind::ExpansionShock],
        )
        .unwrap();
        let v = serde_json::to_value(&fan).unwrap();
        assert_eq!(v["waves"][0]["kind"], "rarefaction");
        assert_eq!(v["waves"][0]["u_minus"], -1.0);
        assert_eq!(v["waves"][0]["omega_hi"], 0.0);
        assert_eq!(v["waves"][1]["sigma"], 0.5);
        assert_eq!(v["entropic_flag"], "non_entropic");
        let back: WaveFan = serde_json::from_value(v).unwrap();
        assert_eq!(back, fan);
    }

    #[test]
    fn random_family_is_deterministic_and_valid() {
        let f = ConvexFlux::cosh(2.0);
        let a = random_family(&f, -0.5, 1.5, 5, 20, 11).unwrap();
        let b = random_family(&f, -0.5, 1.5, 5, 20, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.members.len(), 20);
        for m in &a.members {
            m.validate(&f).unwrap();
            assert!(m.min_expansion_jump().is_some());
        }
    }

    proptest! {
        // for convex flux no downward multi-jump fan is ordered
        #[test]
        fn downward_splits_never_order(
            ul in -1.5f64..1.5,
            drop in 0.05f64..1.5,
            cuts in proptest::collection::vec(0.01f64..0.99, 1..5),
            flux_id in 0usize..3,
        ) {
            let flux = ConvexFlux::from_kind(crate::flux::FluxKind::ALL[flux_id], 3.0).unwrap();
            let ur = ul - drop;
            let mut inter: Vec<f64> = cuts.iter().map(|c| ul - c * drop).collect();
            inter.sort_by(|a, b| b.total_cmp(a));
            inter.dedup();
            let kinds = vec![SegmentKind::ExpansionShock; inter.len() + 1];
            let res = WaveFan::from_segments(&flux, ul, ur, &inter, &kinds);
            prop_assert!(matches!(res, Err(Error::FanOrdering(_))), "{:?}", res);
        }

        #[test]
        fn upward_families_are_ordered(
            ul in -1.5f64..0.0,
            rise in 0.1f64..1.5,
            cuts in proptest::collection::vec(0.01f64..0.99, 0..5),
            mask in 1u32..64,
        ) {
            let flux = ConvexFlux::poly4(3.0);
            let ur = ul + rise;
            let mut inter: Vec<f64> = cuts.iter().map(|c| ul + c * rise).collect();
            inter.sort_by(f64::total_cmp);
            inter.dedup();
            let mut kinds: Vec<SegmentKind> = (0..=inter.len())
                .map(|i| if mask >> (i % 6) & 1 == 1 { SegmentKind::ExpansionShock } else { SegmentKind::Rarefaction })
                .collect();
            if !kinds.contains(&SegmentKind::ExpansionShock) {
                kinds[0] = SegmentKind::ExpansionShock;
            }
            let fan = non_entropic_family(&flux, ul, ur, &inter, &kinds).unwrap();
            prop_assert!(fan.validate(&flux).is_ok());
        }
    }
}
