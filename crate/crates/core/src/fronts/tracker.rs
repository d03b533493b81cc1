//! Event-driven front tracking.
//!
//! Fronts move on straight lines between events. Candidate collisions of
//! adjacent fronts sit in a min-heap keyed by time; entries whose fronts are
//! no longer adjacent are discarded lazily when popped. Collisions within
//! `SIMULTANEITY` of the earliest one are handled together, and all fronts
//! meeting at one point form a single Riemann problem.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use serde::{Deserialize, Serialize};

use super::history::FrontHistory;
use super::state::{resolve_jump, FrontKind, FrontState, Mode};
use crate::error::{Error, Result};
use crate::flux::ConvexFlux;

const SIMULTANEITY: f64 = 1e-12;
const MAX_GROUP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    /// Outgoing single entropic shock.
    Shock,
    /// Outgoing staircase of rarefaction fragments.
    Staircase,
    /// As-given mode kept an upward jump as one expansion shock.
    ExpansionKept,
    /// Incoming fronts cancelled exactly.
    Annihilated,
    /// Boundary data entered the domain (trapezoid re-solve).
    Injection,
}

/// One resolved Riemann problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub t: f64,
    pub x: f64,
    pub incoming: usize,
    pub outgoing: usize,
    pub u_left: f64,
    pub u_right: f64,
    pub resolution: Resolution,
}

/// Snapshots at the initial time, after every event, and at the final time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub mode: Mode,
    pub delta_u: f64,
    pub snapshots: Vec<FrontState>,
    pub events: Vec<EventRecord>,
}

impl Trajectory {
    pub fn t_start(&self) -> f64 {
        self.snapshots[0].time
    }

    pub fn t_end(&self) -> f64 {
        self.snapshots.last().expect("trajectory has snapshots").time
    }

    pub fn initial(&self) -> &FrontState {
        &self.snapshots[0]
    }

    pub fn last(&self) -> &FrontState {
        self.snapshots.last().expect("trajectory has snapshots")
    }

    /// State at time `t`, fronts advanced linearly from the latest snapshot.
    pub fn state_at(&self, t: f64) -> FrontState {
        let k = self.snapshots.partition_point(|s| s.time <= t).saturating_sub(1);
        let snap = &self.snapshots[k];
        let dt = t - snap.time;
        FrontState {
            time: t,
            positions: snap.positions.iter().zip(&snap.speeds).map(|(x, s)| x + s * dt).collect(),
            states: snap.states.clone(),
            speeds: snap.speeds.clone(),
            front_kinds: snap.front_kinds.clone(),
        }
    }

    pub fn history(&self) -> FrontHistory {
        FrontHistory::from_trajectory(self)
    }

    /// Largest `|u|` over all snapshots, per snapshot.
    pub fn sup_norms(&self) -> Vec<f64> {
        self.snapshots.iter().map(FrontState::sup_norm).collect()
    }
}

/// Evolves `initial` to `t_end`.
pub fn evolve(initial: &FrontState, flux: &ConvexFlux, t_end: f64, mode: Mode, delta_u: f64) -> Result<Trajectory> {
    if !(t_end > initial.time) {
        return Err(Error::Domain(format!("t_end = {t_end} must exceed the initial time {}", initial.time)));
    }
    initial.validate(flux, mode, delta_u)?;
    let mut tracker = Tracker::new(initial, flux, mode, delta_u)?;
    tracker.advance_to(t_end)?;
    tracker.snapshot();
    Ok(tracker.into_trajectory())
}

#[derive(Debug, Clone, Copy)]
struct TrackedFront {
    id: u64,
    x_ref: f64,
    t_ref: f64,
    sigma: f64,
    kind: FrontKind,
}

impl TrackedFront {
    fn at(&self, t: f64) -> f64 {
        self.x_ref + self.sigma * (t - self.t_ref)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    t: f64,
    left: u64,
    right: u64,
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.t
            .total_cmp(&other.t)
            .then(self.left.cmp(&other.left))
            .then(self.right.cmp(&other.right))
    }
}

/// Mutable front-tracking engine. Used directly by the trapezoid re-solve.
pub(crate) struct Tracker<'a> {
    flux: &'a ConvexFlux,
    mode: Mode,
    delta_u: f64,
    time: f64,
    fronts: Vec<TrackedFront>,
    states: Vec<f64>,
    index: HashMap<u64, usize>,
    queue: BinaryHeap<Reverse<Candidate>>,
    next_id: u64,
    snapshots: Vec<FrontState>,
    events: Vec<EventRecord>,
}

impl<'a> Tracker<'a> {
    pub(crate) fn new(initial: &FrontState, flux: &'a ConvexFlux, mode: Mode, delta_u: f64) -> Result<Self> {
        let mut tracker = Self {
            flux,
            mode,
            delta_u,
            time: initial.time,
            fronts: Vec::with_capacity(initial.len()),
            states: initial.states.clone(),
            index: HashMap::new(),
            queue: BinaryHeap::new(),
            next_id: 0,
            snapshots: Vec::new(),
            events: Vec::new(),
        };
        for i in 0..initial.len() {
            let id = tracker.fresh_id();
            tracker.fronts.push(TrackedFront {
                id,
                x_ref: initial.positions[i],
                t_ref: initial.time,
                sigma: initial.speeds[i],
                kind: initial.front_kinds[i],
            });
        }
        tracker.reindex();
        for i in 0..tracker.fronts.len().saturating_sub(1) {
            tracker.schedule(i);
        }
        tracker.snapshot();
        Ok(tracker)
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn reindex(&mut self) {
        self.index.clear();
        self.index.extend(self.fronts.iter().enumerate().map(|(i, f)| (f.id, i)));
    }

    /// Pushes the collision candidate for fronts `i` and `i + 1`, if they converge.
    fn schedule(&mut self, i: usize) {
        if i + 1 >= self.fronts.len() {
            return;
        }
        let (l, r) = (self.fronts[i], self.fronts[i + 1]);
        if l.sigma <= r.sigma {
            return;
        }
        let gap = (r.at(self.time) - l.at(self.time)).max(0.0);
        let t = self.time + gap / (l.sigma - r.sigma);
        self.queue.push(Reverse(Candidate { t, left: l.id, right: r.id }));
    }

    fn is_live(&self, c: &Candidate) -> Option<usize> {
        let &i = self.index.get(&c.left)?;
        let &j = self.index.get(&c.right)?;
        (j == i + 1).then_some(i)
    }

    fn next_collision(&mut self) -> Option<Candidate> {
        while let Some(Reverse(c)) = self.queue.peek().copied() {
            if self.is_live(&c).is_some() {
                return Some(c);
            }
            self.queue.pop();
        }
        None
    }

    pub(crate) fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while let Some(first) = self.next_collision() {
            if first.t > t_target {
                break;
            }
            let t_c = first.t.max(self.time);
            let mut pairs = Vec::new();
            while let Some(c) = self.next_collision() {
                if c.t > first.t + SIMULTANEITY {
                    break;
                }
                self.queue.pop();
                if let Some(i) = self.is_live(&c) {
                    pairs.push(i);
                }
            }
            self.time = t_c;
            self.collide(pairs)?;
            self.snapshot();
        }
        self.time = self.time.max(t_target);
        Ok(())
    }

    /// Groups colliding pairs into runs of fronts meeting at one point and resolves each run.
    fn collide(&mut self, mut pairs: Vec<usize>) -> Result<()> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut groups: Vec<(usize, usize)> = Vec::new();
        for i in pairs {
            match groups.last_mut() {
                Some((_, end)) if *end == i => *end = i + 1,
                _ => groups.push((i, i + 1)),
            }
        }

        let mut new_ids = Vec::new();
        for &(start, end) in groups.iter().rev() {
            let count = end - start + 1;
            let x = self.fronts[start..=end].iter().map(|f| f.at(self.time)).sum::<f64>() / count as f64;
            if count > MAX_GROUP {
                return Err(Error::CollisionOverflow { count, x, t: self.time });
            }
            let u_left = self.states[start];
            let u_right = self.states[end + 1];
            let had_expansion = self.fronts[start..=end].iter().any(|f| f.kind == FrontKind::ExpansionShock);
            let outgoing = resolve_jump(u_left, u_right, self.mode, had_expansion, self.delta_u);
            let resolution = match outgoing.first() {
                None => Resolution::Annihilated,
                Some((_, _, FrontKind::EntropicShock)) => Resolution::Shock,
                Some((_, _, FrontKind::ExpansionShock)) => Resolution::ExpansionKept,
                Some((_, _, FrontKind::RarefactionFragment)) => Resolution::Staircase,
            };

            let mut replacement = Vec::with_capacity(outgoing.len());
            let mut inner_states = Vec::with_capacity(outgoing.len().saturating_sub(1));
            for (k, &(a, b, kind)) in outgoing.iter().enumerate() {
                let id = self.fresh_id();
                new_ids.push(id);
                replacement.push(TrackedFront { id, x_ref: x, t_ref: self.time, sigma: self.flux.speed(a, b), kind });
                if k + 1 < outgoing.len() {
                    inner_states.push(b);
                }
            }
            self.events.push(EventRecord {
                t: self.time,
                x,
                incoming: count,
                outgoing: replacement.len(),
                u_left,
                u_right,
                resolution,
            });
            self.fronts.splice(start..=end, replacement);
            if outgoing.is_empty() {
                // u_left == u_right: keep one copy
                self.states.drain(start + 1..=end + 1);
            } else {
                self.states.splice(start + 1..=end, inner_states);
            }
            if outgoing.is_empty() {
                // neighbours of an annihilated group become adjacent
                self.reindex();
                if start > 0 {
                    self.schedule(start - 1);
                }
            }
        }
        self.reindex();
        self.schedule_around(&new_ids);
        Ok(())
    }

    fn schedule_around(&mut self, ids: &[u64]) {
        let mut slots: Vec<usize> = ids
            .iter()
            .filter_map(|id| self.index.get(id).copied())
            .flat_map(|i| [i.saturating_sub(1), i])
            .collect();
        slots.sort_unstable();
        slots.dedup();
        for i in slots {
            self.schedule(i);
        }
    }

    /// Enters boundary data on the left: the jump `(new_state | current far-left state)` at `x`.
    pub(crate) fn inject_left(&mut self, x: f64, new_state: f64) {
        let u_right = self.states[0];
        let outgoing = resolve_jump(new_state, u_right, Mode::Entropic, false, self.delta_u);
        let mut fronts = Vec::with_capacity(outgoing.len());
        let mut states = vec![new_state];
        let mut ids = Vec::new();
        for &(a, b, kind) in &outgoing {
            let id = self.fresh_id();
            ids.push(id);
            fronts.push(TrackedFront { id, x_ref: x, t_ref: self.time, sigma: self.flux.speed(a, b), kind });
            states.push(b);
        }
        states.pop();
        self.record_injection(x, new_state, u_right, fronts.len());
        self.fronts.splice(0..0, fronts);
        self.states.splice(0..1, states.into_iter().chain(std::iter::once(u_right)));
        self.reindex();
        self.schedule_around(&ids);
    }

    /// Enters boundary data on the right: the jump `(current far-right state | new_state)` at `x`.
    pub(crate) fn inject_right(&mut self, x: f64, new_state: f64) {
        let u_left = *self.states.last().expect("states is never empty");
        let outgoing = resolve_jump(u_left, new_state, Mode::Entropic, false, self.delta_u);
        let mut ids = Vec::new();
        let n = outgoing.len();
        self.record_injection(x, u_left, new_state, n);
        for &(a, b, kind) in &outgoing {
            let id = self.fresh_id();
            ids.push(id);
            self.fronts.push(TrackedFront { id, x_ref: x, t_ref: self.time, sigma: self.flux.speed(a, b), kind });
            self.states.push(b);
        }
        self.reindex();
        self.schedule_around(&ids);
    }

    fn record_injection(&mut self, x: f64, u_left: f64, u_right: f64, outgoing: usize) {
        self.events.push(EventRecord {
            t: self.time,
            x,
            incoming: 0,
            outgoing,
            u_left,
            u_right,
            resolution: Resolution::Injection,
        });
    }

    pub(crate) fn current_state(&self) -> FrontState {
        FrontState {
            time: self.time,
            positions: self.fronts.iter().map(|f| f.at(self.time)).collect(),
            states: self.states.clone(),
            speeds: self.fronts.iter().map(|f| f.sigma).collect(),
            front_kinds: self.fronts.iter().map(|f| f.kind).collect(),
        }
    }

    pub(crate) fn snapshot(&mut self) {
        let state = self.current_state();
        match self.snapshots.last_mut() {
            Some(last) if last.time == state.time => *last = state,
            _ => self.snapshots.push(state),
        }
    }

    pub(crate) fn into_trajectory(self) -> Trajectory {
        Trajectory { mode: self.mode, delta_u: self.delta_u, snapshots: self.snapshots, events: self.events }
    }
}
