//! Space-time view of a trajectory: every front as a straight segment.

use serde::{Deserialize, Serialize};

use super::state::{FrontKind, FrontState};
use super::tracker::Trajectory;
use super::trapezoid::TrapezoidDomain;
use crate::error::{Error, Result};
use crate::profile::Profile;

const STITCH_TOL: f64 = 1e-9;

/// A front moving on `x = x0 + sigma (t - t0)` for `t` in `[t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub id: u64,
    pub t0: f64,
    pub x0: f64,
    pub t1: f64,
    pub x1: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub sigma: f64,
    pub kind: FrontKind,
}

impl Segment {
    pub fn x_at(&self, t: f64) -> f64 {
        self.x0 + self.sigma * (t - self.t0)
    }

    pub fn duration(&self) -> f64 {
        self.t1 - self.t0
    }

    /// Sub-segment on `[lo, hi]`, which must lie inside `[t0, t1]`.
    pub fn restrict(&self, lo: f64, hi: f64) -> Segment {
        Segment { t0: lo, x0: self.x_at(lo), t1: hi, x1: self.x_at(hi), ..*self }
    }
}

/// A piecewise-constant weak solution on `[t_start, t_end]`, stored as front segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontHistory {
    pub t_start: f64,
    pub t_end: f64,
    pub far_left: f64,
    pub far_right: f64,
    pub segments: Vec<Segment>,
}

impl FrontHistory {
    /// Segments between consecutive snapshots; a front that crosses a snapshot
    /// unchanged keeps its id and stays one segment.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let first = traj.initial();
        let mut segments: Vec<Segment> = Vec::new();
        let mut next_id = 0u64;
        // open segment index for each front of the current snapshot
        let mut open: Vec<usize> = Vec::new();
        for (i, &x) in first.positions.iter().enumerate() {
            open.push(segments.len());
            segments.push(open_segment(first, i, x, next_id));
            next_id += 1;
        }

        for pair in traj.snapshots.windows(2) {
            let (prev, cur) = (&pair[0], &pair[1]);
            let t = cur.time;
            let advanced: Vec<f64> = prev.positions.iter().zip(&prev.speeds).map(|(x, s)| x + s * (t - prev.time)).collect();
            for &k in &open {
                let s = &mut segments[k];
                s.t1 = t;
                s.x1 = s.x_at(t);
            }
            let mut next_open = Vec::with_capacity(cur.len());
            for (j, &x) in cur.positions.iter().enumerate() {
                let lo = advanced.partition_point(|&p| p < x - STITCH_TOL);
                let matched = (lo..advanced.len())
                    .take_while(|&i| advanced[i] <= x + STITCH_TOL)
                    .find(|&i| prev.states[i] == cur.states[j] && prev.states[i + 1] == cur.states[j + 1]);
                match matched {
                    Some(i) => next_open.push(open[i]),
                    None => {
                        next_open.push(segments.len());
                        let mut seg = open_segment(cur, j, x, next_id);
                        seg.t0 = t;
                        segments.push(seg);
                        next_id += 1;
                    }
                }
            }
            open = next_open;
        }
        let t_end = traj.t_end();
        for &k in &open {
            let s = &mut segments[k];
            s.t1 = t_end;
            s.x1 = s.x_at(t_end);
        }
        segments.retain(|s| s.t1 > s.t0);

        Self {
            t_start: traj.t_start(),
            t_end,
            far_left: first.far_left(),
            far_right: first.far_right(),
            segments,
        }
    }

    fn active(&self, t: f64) -> Vec<&Segment> {
        let mut active: Vec<&Segment> = self
            .segments
            .iter()
            .filter(|s| s.t0 <= t && (t < s.t1 || (t == self.t_end && s.t1 == self.t_end)))
            .collect();
        active.sort_by(|a, b| a.x_at(t).total_cmp(&b.x_at(t)).then(a.sigma.total_cmp(&b.sigma)));
        active
    }

    /// Profile at `t`; segments are half-open `[t0, t1)` except at `t_end`.
    pub fn slice(&self, t: f64) -> Profile {
        let active = self.active(t);
        let positions: Vec<f64> = active.iter().map(|s| s.x_at(t)).collect();
        let mut states = Vec::with_capacity(active.len() + 1);
        states.push(active.first().map_or(self.far_left, |s| s.u_minus));
        states.extend(active.iter().map(|s| s.u_plus));
        Profile::piecewise_constant(t, &positions, &states)
    }

    /// Value at `(x, t)`, left limit at a front.
    pub fn value_at(&self, x: f64, t: f64) -> f64 {
        let active = self.active(t);
        let i = active.partition_point(|s| s.x_at(t) < x);
        if i == 0 {
            active.first().map_or(self.far_left, |s| s.u_minus)
        } else {
            active[i - 1].u_plus
        }
    }

    /// Largest mismatch between the right state of a front and the left state of its neighbour at `t`.
    pub fn consistency_defect(&self, t: f64) -> f64 {
        let active = self.active(t);
        let inner = active.windows(2).map(|w| (w[0].u_plus - w[1].u_minus).abs()).fold(0.0, f64::max);
        let ends = match (active.first(), active.last()) {
            (Some(a), Some(b)) => (a.u_minus - self.far_left).abs().max((b.u_plus - self.far_right).abs()),
            _ => (self.far_left - self.far_right).abs(),
        };
        inner.max(ends)
    }

    /// Segment start and end times, sorted and deduplicated.
    pub fn event_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self.segments.iter().flat_map(|s| [s.t0, s.t1]).collect();
        times.push(self.t_start);
        times.push(self.t_end);
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}

fn open_segment(state: &FrontState, i: usize, x: f64, id: u64) -> Segment {
    Segment {
        id,
        t0: state.time,
        x0: x,
        t1: state.time,
        x1: x,
        u_minus: state.states[i],
        u_plus: state.states[i + 1],
        sigma: state.speeds[i],
        kind: state.front_kinds[i],
    }
}

/// Space-time region over which entropy production is accumulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Window {
    /// `[t_lo, t_hi] × [x_lo, x_hi]`; a missing x bound means unbounded.
    Rect { t_lo: f64, t_hi: f64, x_lo: Option<f64>, x_hi: Option<f64> },
    Trapezoid(TrapezoidDomain),
}

/// `a x + b t <= c`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Time interval of `[t0, t1]` on which the segment satisfies every constraint.
pub(crate) fn clip_to(seg: &Segment, planes: &[HalfPlane]) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (seg.t0, seg.t1);
    for p in planes {
        // (a sigma + b) t <= c - a (x0 - sigma t0)
        let k = p.a * seg.sigma + p.b;
        let rhs = p.c - p.a * (seg.x0 - seg.sigma * seg.t0);
        if k.abs() < 1e-300 {
            if rhs < 0.0 {
                return None;
            }
        } else if k > 0.0 {
            hi = hi.min(rhs / k);
        } else {
            lo = lo.max(rhs / k);
        }
    }
    (hi > lo).then_some((lo, hi))
}

impl Window {
    pub fn time_range(&self) -> (f64, f64) {
        match *self {
            Window::Rect { t_lo, t_hi, .. } => (t_lo, t_hi),
            Window::Trapezoid(d) => (d.t1, d.t2),
        }
    }

    pub(crate) fn half_planes(&self) -> Vec<HalfPlane> {
        match *self {
            Window::Rect { t_lo, t_hi, x_lo, x_hi } => {
                let mut planes = vec![HalfPlane { a: 0.0, b: -1.0, c: -t_lo }, HalfPlane { a: 0.0, b: 1.0, c: t_hi }];
                if let Some(x) = x_lo {
                    planes.push(HalfPlane { a: -1.0, b: 0.0, c: -x });
                }
                if let Some(x) = x_hi {
                    planes.push(HalfPlane { a: 1.0, b: 0.0, c: x });
                }
                planes
            }
            Window::Trapezoid(d) => d.half_planes(),
        }
    }

    /// Time interval the segment spends inside the window.
    pub fn clip(&self, seg: &Segment) -> Option<(f64, f64)> {
        clip_to(seg, &self.half_planes())
    }

    pub fn duration_inside(&self, seg: &Segment) -> f64 {
        self.clip(seg).map_or(0.0, |(lo, hi)| hi - lo)
    }

    /// Window must lie within `[t_start, t_end]`.
    pub fn check_span(&self, t_start: f64, t_end: f64) -> Result<()> {
        let (lo, hi) = self.time_range();
        let tol = 1e-12 * (1.0 + t_end.abs());
        if !(lo < hi) || lo < t_start - tol || hi > t_end + tol {
            return Err(Error::WindowOutsideSpan(format!(
                "window t in [{lo}, {hi}] is not inside the span [{t_start}, {t_end}]"
            )));
        }
        Ok(())
    }
}
