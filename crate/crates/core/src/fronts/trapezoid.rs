//! The trapezoid `Γ = {γ(x) < t < t2}` with lower boundary `Λ`, traces on `Λ`,
//! and the entropic re-solve spliced into a trajectory.

use serde::{Deserialize, Serialize};

use super::history::{clip_to, FrontHistory, HalfPlane, Segment};
use super::state::{FrontState, Mode};
use super::tracker::{Tracker, Trajectory};
use crate::error::{Error, Result};
use crate::flux::ConvexFlux;

const TANGENCY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapezoidDomain {
    pub t1: f64,
    pub t2: f64,
    pub delta: f64,
    pub lambda_hat: f64,
    /// Midpoint of the flat part.
    #[serde(default)]
    pub center: f64,
}

impl TrapezoidDomain {
    pub fn new(t1: f64, t2: f64, delta: f64, lambda_hat: f64) -> Result<Self> {
        let dom = Self { t1, t2, delta, lambda_hat, center: 0.0 };
        dom.check_shape()?;
        Ok(dom)
    }

    pub fn centered_at(self, center: f64) -> Self {
        Self { center, ..self }
    }

    fn check_shape(&self) -> Result<()> {
        if !(self.t1 > 0.0 && self.t2 > self.t1 && self.t2.is_finite()) {
            return Err(Error::InvalidDomain(format!("need 0 < t1 < t2, got t1 = {}, t2 = {}", self.t1, self.t2)));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidDomain(format!("delta must be positive, got {}", self.delta)));
        }
        if !self.center.is_finite() {
            return Err(Error::InvalidDomain(format!("center must be finite, got {}", self.center)));
        }
        if !(self.lambda_hat > 0.0 && self.lambda_hat <= 1.0) {
            return Err(Error::InvalidDomain(format!("lambda_hat must lie in (0, 1], got {}", self.lambda_hat)));
        }
        Ok(())
    }

    /// Lower boundary: flat on `|x - center| <= delta`, slopes `∓lambda_hat` outside.
    pub fn gamma(&self, x: f64) -> f64 {
        self.t1 + self.lambda_hat * ((x - self.center).abs() - self.delta).max(0.0)
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        self.gamma(x) < t && t < self.t2
    }

    /// Arc parameter range `[s1, s2]` of `Λ`, parametrized by `x`.
    pub fn s_range(&self) -> (f64, f64) {
        let half = (self.t2 - self.t1) / self.lambda_hat + self.delta;
        (self.center - half, self.center + half)
    }

    /// Largest admissible slope: `1 / max(|f'(R + 1 + v)|, |f'(-R - 1 - v)|)` with `v = ‖v1‖∞`.
    pub fn lambda0(flux: &ConvexFlux, v1_sup: f64) -> f64 {
        let reach = flux.radius() + 1.0 + v1_sup;
        1.0 / flux.df(reach).abs().max(flux.df(-reach).abs())
    }

    /// Shape checks plus `lambda_hat <= lambda0`.
    pub fn check(&self, flux: &ConvexFlux, v1_sup: f64) -> Result<()> {
        self.check_shape()?;
        let l0 = Self::lambda0(flux, v1_sup);
        if self.lambda_hat > l0 {
            return Err(Error::InvalidDomain(format!("lambda_hat = {} exceeds lambda0 = {l0}", self.lambda_hat)));
        }
        Ok(())
    }

    pub(crate) fn half_planes(&self) -> Vec<HalfPlane> {
        let l = self.lambda_hat;
        let c = l * self.delta - self.t1;
        vec![
            HalfPlane { a: 0.0, b: -1.0, c: -self.t1 },
            HalfPlane { a: 0.0, b: 1.0, c: self.t2 },
            HalfPlane { a: l, b: -1.0, c: c + l * self.center },
            HalfPlane { a: -l, b: -1.0, c: c - l * self.center },
        ]
    }

    /// Points where the segment meets `Λ`, as arc parameters.
    fn crossings(&self, seg: &Segment) -> Result<Vec<f64>> {
        let mut out = Vec::new();
        if seg.t1 < self.t1 || seg.t0 > self.t2 {
            return Ok(out);
        }
        if seg.t0 <= self.t1 && self.t1 <= seg.t1 {
            let x = seg.x_at(self.t1);
            if (x - self.center).abs() <= self.delta {
                out.push(x);
            }
        }
        let l = self.lambda_hat;
        // t = t1 + l (±(x - center) - delta) along x = x0 + sigma (t - t0)
        for side in [1.0, -1.0] {
            let k = 1.0 - side * l * seg.sigma;
            if k <= TANGENCY_TOL {
                return Err(Error::Tangency { speed: seg.sigma, slope: l });
            }
            let t = (self.t1 + l * (side * (seg.x0 - seg.sigma * seg.t0 - self.center) - self.delta)) / k;
            if t >= seg.t0 && t <= seg.t1 && t >= self.t1 && t <= self.t2 {
                let x = seg.x_at(t);
                if side * (x - self.center) >= self.delta {
                    out.push(x);
                }
            }
        }
        Ok(out)
    }
}

/// Piecewise-constant data on `Λ` as a function of the arc parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub domain: TrapezoidDomain,
    /// Interior breakpoints, increasing.
    pub breaks: Vec<f64>,
    /// `values.len() == breaks.len() + 1`.
    pub values: Vec<f64>,
}

impl Trace {
    /// Value at arc parameter `s`, left limit at a breakpoint.
    pub fn value_at(&self, s: f64) -> f64 {
        self.values[self.breaks.partition_point(|&b| b < s)]
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn trace_on_lambda(traj: &Trajectory, dom: &TrapezoidDomain) -> Result<Trace> {
    let events: Vec<f64> = traj.events.iter().map(|e| e.t).collect();
    trace_history(&traj.history(), &events, dom)
}

/// Trace of a history; `event_times` are the times `t1` must avoid.
pub fn trace_history(history: &FrontHistory, event_times: &[f64], dom: &TrapezoidDomain) -> Result<Trace> {
    dom.check_shape()?;
    if dom.t1 < history.t_start || dom.t2 > history.t_end {
        return Err(Error::InvalidDomain(format!(
            "trapezoid t in [{}, {}] leaves the span [{}, {}]",
            dom.t1, dom.t2, history.t_start, history.t_end
        )));
    }
    if let Some(t) = event_times.iter().find(|&&t| (t - dom.t1).abs() <= 1e-12) {
        return Err(Error::InvalidDomain(format!("t1 = {} coincides with an event at t = {t}", dom.t1)));
    }
    let (s1, s2) = dom.s_range();
    let mut cuts = Vec::new();
    for seg in &history.segments {
        cuts.extend(dom.crossings(seg)?.into_iter().filter(|&s| s > s1 && s < s2));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(s1);
    edges.extend(cuts);
    edges.push(s2);
    let mut breaks = Vec::new();
    let mut values = Vec::new();
    for w in edges.windows(2) {
        let s = 0.5 * (w[0] + w[1]);
        let v = history.value_at(s, dom.gamma(s));
        if let Some(&last) = values.last() {
            if last == v {
                continue;
            }
            breaks.push(w[0]);
        }
        values.push(v);
    }
    Ok(Trace { domain: *dom, breaks, values })
}

/// A trajectory with its restriction to `Γ` replaced by the entropic re-solve of its trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Splice {
    pub domain: TrapezoidDomain,
    pub trace: Trace,
    /// Front tracking from the trace; only its part inside `Γ` is used.
    pub interior: Trajectory,
    /// The spliced solution on `[t_start, t2]`.
    pub history: FrontHistory,
}

pub fn trapezoid_splice(traj: &Trajectory, dom: &TrapezoidDomain, flux: &ConvexFlux, delta_u: f64) -> Result<Splice> {
    let trace = trace_on_lambda(traj, dom)?;
    dom.check(flux, trace.sup_norm())?;
    for &v in &trace.values {
        flux.check_state(v)?;
    }
    let interior = resolve_trace(&trace, flux, delta_u)?;

    let original = traj.history();
    let planes = dom.half_planes();
    let mut segments = Vec::new();
    for seg in &original.segments {
        if seg.t0 >= dom.t2 {
            continue;
        }
        let seg = seg.restrict(seg.t0, seg.t1.min(dom.t2));
        match clip_to(&seg, &planes) {
            Some((lo, hi)) => {
                if lo > seg.t0 {
                    segments.push(seg.restrict(seg.t0, lo));
                }
                if hi < seg.t1 {
                    segments.push(seg.restrict(hi, seg.t1));
                }
            }
            None => segments.push(seg),
        }
    }
    let offset = segments.iter().map(|s| s.id + 1).max().unwrap_or(0);
    for seg in &interior.history().segments {
        if let Some((lo, hi)) = clip_to(seg, &planes) {
            let mut piece = seg.restrict(lo, hi);
            piece.id += offset;
            segments.push(piece);
        }
    }
    segments.retain(|s| s.t1 - s.t0 > 1e-14);

    let history = FrontHistory {
        t_start: original.t_start,
        t_end: dom.t2,
        far_left: original.far_left,
        far_right: original.far_right,
        segments,
    };
    Ok(Splice { domain: *dom, trace, interior, history })
}

/// Entropic front tracking of the trace: initial data on the flat part at `t1`,
/// slanted-boundary data entering as the boundary sweeps outward.
fn resolve_trace(trace: &Trace, flux: &ConvexFlux, delta_u: f64) -> Result<Trajectory> {
    let dom = &trace.domain;
    let (lo, hi) = (dom.center - dom.delta, dom.center + dom.delta);
    let flat: Vec<f64> = trace.breaks.iter().copied().filter(|&s| s > lo && s < hi).collect();
    let mut edges = vec![lo];
    edges.extend(&flat);
    edges.push(hi);
    let states: Vec<f64> = edges.windows(2).map(|w| trace.value_at(0.5 * (w[0] + w[1]))).collect();
    let initial = FrontState::from_piecewise(flux, dom.t1, &flat, &states, Mode::Entropic, delta_u)?;

    // (time, x, new state, left side?)
    let mut injections: Vec<(f64, f64, f64, bool)> = Vec::new();
    for (k, &s) in trace.breaks.iter().enumerate() {
        if s <= lo {
            injections.push((dom.gamma(s), s, trace.values[k], true));
        } else if s >= hi {
            injections.push((dom.gamma(s), s, trace.values[k + 1], false));
        }
    }
    injections.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let mut tracker = Tracker::new(&initial, flux, Mode::Entropic, delta_u)?;
    for (t, x, v, left) in injections {
        tracker.advance_to(t)?;
        if left {
            tracker.inject_left(x, v);
        } else {
            tracker.inject_right(x, v);
        }
        tracker.snapshot();
    }
    tracker.advance_to(dom.t2)?;
    tracker.snapshot();
    Ok(tracker.into_trajectory())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fronts::state::FrontKind;
    use crate::fronts::tracker::evolve;
    use approx::assert_abs_diff_eq;

    fn expansion(flux: &ConvexFlux) -> Trajectory {
        let s = FrontState::from_piecewise(flux, 0.0, &[0.0], &[-1.0, 1.0], Mode::AsGiven, 0.01).unwrap();
        evolve(&s, flux, 3.0, Mode::AsGiven, 0.01).unwrap()
    }

    #[test]
    fn gamma_shape() {
        let d = TrapezoidDomain::new(1.0, 2.0, 0.5, 0.25).unwrap();
        assert_eq!(d.gamma(0.3), 1.0);
        assert_abs_diff_eq!(d.gamma(1.5), 1.25);
        assert_abs_diff_eq!(d.gamma(-1.5), 1.25);
        assert_eq!(d.s_range(), (-4.5, 4.5));
        assert!(d.contains(0.0, 1.5));
        assert!(!d.contains(4.0, 1.5));
        assert!(TrapezoidDomain::new(1.0, 1.0, 0.5, 0.25).is_err());
        assert!(TrapezoidDomain::new(1.0, 2.0, 0.5, 1.5).is_err());
    }

    #[test]
    fn lambda0_for_burgers() {
        let flux = ConvexFlux::burgers(2.0);
        // 1 / (2 + 1 + 1)
        assert_abs_diff_eq!(TrapezoidDomain::lambda0(&flux, 1.0), 0.25);
    }

    #[test]
    fn trace_of_constant_is_constant() {
        let flux = ConvexFlux::burgers(2.0);
        let s = FrontState::from_piecewise(&flux, 0.0, &[], &[0.0], Mode::Entropic, 0.01).unwrap();
        let traj = evolve(&s, &flux, 2.0, Mode::Entropic, 0.01).unwrap();
        let d = TrapezoidDomain::new(0.5, 1.5, 1.0, 0.2).unwrap();
        let tr = trace_on_lambda(&traj, &d).unwrap();
        assert!(tr.breaks.is_empty());
        assert_eq!(tr.values, vec![0.0]);
    }

    #[test]
    fn trace_of_stationary_expansion_shock() {
        let flux = ConvexFlux::burgers(2.0);
        let d = TrapezoidDomain::new(1.0, 2.0, 1.0, 0.2).unwrap();
        let tr = trace_on_lambda(&expansion(&flux), &d).unwrap();
        assert_eq!(tr.breaks, vec![0.0]);
        assert_eq!(tr.values, vec![-1.0, 1.0]);
    }

    #[test]
    fn trace_of_moving_shock() {
        let flux = ConvexFlux::burgers(2.0);
        let s = FrontState::new(&flux, 0.0, vec![0.0], vec![1.0, 0.0], vec![FrontKind::EntropicShock]).unwrap();
        let traj = evolve(&s, &flux, 3.0, Mode::Entropic, 0.01).unwrap();
        let t1 = 1.2;
        let d = TrapezoidDomain::new(t1, 2.0, 1.0, 0.2).unwrap();
        let tr = trace_on_lambda(&traj, &d).unwrap();
        assert_eq!(tr.breaks.len(), 1);
        assert_abs_diff_eq!(tr.breaks[0], 0.5 * t1, epsilon = 1e-14);
        assert_eq!(tr.values, vec![1.0, 0.0]);
    }

    #[test]
    fn trace_rejects_tangent_front() {
        let flux = ConvexFlux::burgers(8.0);
        let s = FrontState::new(&flux, 0.0, vec![0.0], vec![6.0, 4.0], vec![FrontKind::EntropicShock]).unwrap();
        let traj = evolve(&s, &flux, 3.0, Mode::Entropic, 0.01).unwrap();
        let d = TrapezoidDomain::new(1.0, 2.0, 1.0, 0.2).unwrap();
        assert!(matches!(trace_on_lambda(&traj, &d), Err(Error::Tangency { .. })));
    }

    #[test]
    fn splice_removes_expansion_shock() {
        let flux = ConvexFlux::burgers(2.0);
        let traj = expansion(&flux);
        let d = TrapezoidDomain::new(1.0, 2.0, 0.5, 0.2).unwrap();
        let sp = trapezoid_splice(&traj, &d, &flux, 0.01).unwrap();
        assert!(sp.history.segments.iter().any(|s| s.kind == FrontKind::RarefactionFragment));
        // the expansion shock is only kept below Λ
        let inside = sp.history.segments.iter().filter(|s| s.kind == FrontKind::ExpansionShock);
        for s in inside {
            assert!(s.t1 <= d.t1 + 1e-12);
        }
        for t in [1.1, 1.5, 1.9] {
            assert!(sp.history.consistency_defect(t) < 1e-12);
        }
    }

    #[test]
    fn splice_in_constant_region_changes_nothing() {
        let flux = ConvexFlux::burgers(2.0);
        let traj = expansion(&flux);
        let d = TrapezoidDomain::new(1.0, 1.5, 0.1, 0.2).unwrap().centered_at(5.0);
        let sp = trapezoid_splice(&traj, &d, &flux, 0.01).unwrap();
        assert_eq!(sp.trace.values, vec![1.0]);
        let orig = traj.history();
        assert_eq!(sp.history.segments.len(), 1);
        assert_eq!(sp.history.segments[0].t0, orig.segments[0].t0);
        assert_eq!(sp.history.segments[0].t1, 1.5);
        assert_eq!(sp.history.value_at(5.0, 1.2), 1.0);
    }
}
