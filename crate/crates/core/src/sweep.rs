//! Event-driven sweep of `σ + t` along a line of translations.
//!
//! Every combinatorial change of the free space along the sweep is a root of
//! a small polynomial: a corner entering or leaving the free space, a
//! critical point appearing or disappearing at an interior tangency, or two
//! grid lines crossing where a point is at distance `δ` from two vertices.
//! The grid graph is updated only on the strips an event touches.

use std::fmt;

use serde::Serialize;

use crate::backend::{make_backend, BackendKind, BackendStats, ReachabilityBackend};
use crate::curve::{Curve, Translation2};
use crate::error::{Error, Result};
use crate::freespace::{build_skeleton, column_intervals, row_intervals, FreeSpaceSkeleton};
use crate::geom::{
    circle_circle_intersections, solve_quadratic, within_radius, Direction2, Point2, Segment2, Tolerance,
};
use crate::grid::{grid_from_skeleton, Axis, PlaceholderGrid, WeightChange};

/// Per-event weight-change budget for vertex–edge events is `VE_CHANGE_FACTOR · (n_π + n_σ) + 1`.
pub const VE_CHANGE_FACTOR: usize = 6;
/// Per-event weight-change budget for vertex–vertex–edge events.
pub const VVE_CHANGE_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EventKind {
    Entering,
    Leaving,
    Appearing,
    Disappearing,
    Overlapping,
    Separating,
}

impl EventKind {
    pub fn is_ve(self) -> bool {
        !matches!(self, EventKind::Overlapping | EventKind::Separating)
    }
}

/// Which curve supplies the vertices: `Row` means vertices of `π` against an
/// edge of `σ` (row strips), `Column` the reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    Row,
    Column,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum EventPayload {
    /// `π_i` and `σ_j` at distance exactly `δ`.
    Corner { i: usize, j: usize },
    /// A vertex at distance `δ` from the interior point `foot` of an opposing edge.
    Tangency {
        side: Side,
        vertex: usize,
        edge: usize,
        foot: f64,
    },
    /// Vertices `a < b` both at distance `δ` from the point `s` of an opposing edge.
    Vve {
        side: Side,
        a: usize,
        b: usize,
        edge: usize,
        s: f64,
    },
}

impl EventPayload {
    fn sort_key(&self) -> (u8, usize, usize, usize, usize) {
        match *self {
            EventPayload::Corner { i, j } => (0, i, j, 0, 0),
            EventPayload::Tangency { side, vertex, edge, .. } => (1, side as usize, vertex, edge, 0),
            EventPayload::Vve { side, a, b, edge, .. } => (2, side as usize, a, b, edge),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Event {
    pub lambda: f64,
    pub kind: EventKind,
    pub payload: EventPayload,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {} ({:?})", self.kind, self.lambda, self.payload)
    }
}

/// Events whose `λ` agree within tolerance; applied together.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tick {
    pub lambda: f64,
    pub first: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepPlan {
    pub direction: Direction2,
    pub range: (f64, f64),
    pub events: Vec<Event>,
    pub ticks: Vec<Tick>,
    pub tol: Tolerance,
}

impl SweepPlan {
    pub fn ve_count(&self) -> usize {
        self.events.iter().filter(|e| e.kind.is_ve()).count()
    }

    pub fn vve_count(&self) -> usize {
        self.events.len() - self.ve_count()
    }

    pub fn tick_events(&self, t: &Tick) -> &[Event] {
        &self.events[t.first..t.first + t.len]
    }
}

fn in_range(lambda: f64, range: (f64, f64), tol: Tolerance) -> bool {
    lambda >= range.0 - tol.eps && lambda <= range.1 + tol.eps
}

/// `λ` with `‖(π_i − σ_j) − λv‖ = δ`, clipped to `range`.
pub fn ve_corner_lambdas(
    pi_i: Point2,
    sigma_j: Point2,
    v: Direction2,
    delta: f64,
    range: (f64, f64),
    tol: Tolerance,
) -> Vec<crate::geom::Root> {
    let d = pi_i - sigma_j;
    let v = v.as_vector();
    // |d − λv|² = δ² with |v| = 1.
    let roots = solve_quadratic(1.0, -2.0 * d.dot(v), d.norm_sq() - delta * delta, tol).unwrap_or_default();
    roots.into_iter().filter(|r| in_range(r.value, range, tol)).collect()
}

/// `(λ, foot)` where `p` is at distance `δ` from `edge + λv` with the closest
/// point strictly inside the edge.
pub fn ve_tangency_lambdas(
    p: Point2,
    edge: &Segment2,
    v: Direction2,
    delta: f64,
    range: (f64, f64),
    tol: Tolerance,
) -> Vec<(f64, f64)> {
    if delta <= 0.0 {
        return Vec::new();
    }
    let e = edge.delta();
    let len = e.norm();
    let n = e.perp() * (1.0 / len);
    let v = v.as_vector();
    let vn = v.dot(n);
    if vn.abs() <= 1e-12 {
        return Vec::new();
    }
    let base = (p - edge.a).dot(n);
    let mut out: Vec<(f64, f64)> = [-delta, delta]
        .into_iter()
        .map(|target| (target - base) / -vn)
        .map(|lambda| {
            let foot = (p - edge.a - v * lambda).dot(e) / (len * len);
            (lambda, foot)
        })
        .filter(|&(lambda, foot)| foot > tol.eps && foot < 1.0 - tol.eps && in_range(lambda, range, tol))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// `(λ, s)` where a point at distance `δ` from both `p_a` and `p_b` lies on
/// `edge + λv` at parameter `s`. When the edge moves along its own line
/// through such a point, the two ends of the overlap are returned.
pub fn vve_lambdas(
    p_a: Point2,
    p_b: Point2,
    edge: &Segment2,
    v: Direction2,
    delta: f64,
    range: (f64, f64),
    tol: Tolerance,
) -> Result<Vec<(f64, f64, EventKind)>> {
    if p_a == p_b {
        return Err(Error::DegenerateInput(
            "coincident vertices have no overlap events".into(),
        ));
    }
    if delta <= 0.0 {
        return Ok(Vec::new());
    }
    let e = edge.delta();
    let v = v.as_vector();
    let det = v.cross(e);
    let mut out = Vec::new();
    for z in circle_circle_intersections(p_a, p_b, delta, tol)? {
        let w = z - edge.a;
        if det.abs() > 1e-12 * e.norm() {
            let lambda = w.cross(e) / det;
            let s = v.cross(w) / det;
            if s >= -tol.eps && s <= 1.0 + tol.eps && in_range(lambda, range, tol) {
                out.push((lambda, s.clamp(0.0, 1.0), EventKind::Overlapping));
            }
        } else if w.cross(v).abs() <= tol.eps * (1.0 + w.norm()) {
            let c = e.dot(v);
            let (l0, l1) = (w.dot(v), w.dot(v) - c);
            let (lo, hi, s_lo, s_hi) = if l0 <= l1 {
                (l0, l1, 0.0, 1.0)
            } else {
                (l1, l0, 1.0, 0.0)
            };
            if in_range(lo, range, tol) {
                out.push((lo, s_lo, EventKind::Overlapping));
            }
            if in_range(hi, range, tol) {
                out.push((hi, s_hi, EventKind::Separating));
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// All events for `σ + λv`, `λ ∈ range`, sorted and grouped into ticks.
pub fn enumerate_sweep_events(
    pi: &Curve,
    sigma: &Curve,
    v: Direction2,
    range: (f64, f64),
    delta: f64,
    tol: Tolerance,
) -> SweepPlan {
    let mut events = Vec::new();
    let clamp = |l: f64| l.clamp(range.0, range.1);
    for (i, &p) in pi.vertices().iter().enumerate() {
        for (j, &q) in sigma.vertices().iter().enumerate() {
            let roots = ve_corner_lambdas(p, q, v, delta, range, tol);
            let double = roots.len() == 1;
            for (k, r) in roots.iter().enumerate() {
                let kind = if k == 0 || double {
                    EventKind::Entering
                } else {
                    EventKind::Leaving
                };
                events.push(Event {
                    lambda: clamp(r.value),
                    kind,
                    payload: EventPayload::Corner { i, j },
                });
            }
        }
    }
    let sides = [(Side::Row, pi, sigma, v), (Side::Column, sigma, pi, v.reversed())];
    for (side, verts, edges, dir) in sides {
        for (vertex, &p) in verts.vertices().iter().enumerate() {
            for (edge, seg) in edges.edges().enumerate() {
                let hits = ve_tangency_lambdas(p, &seg, dir, delta, range, tol);
                for (k, &(lambda, foot)) in hits.iter().enumerate() {
                    let kind = if k == 0 {
                        EventKind::Appearing
                    } else {
                        EventKind::Disappearing
                    };
                    events.push(Event {
                        lambda: clamp(lambda),
                        kind,
                        payload: EventPayload::Tangency {
                            side,
                            vertex,
                            edge,
                            foot,
                        },
                    });
                }
            }
        }
        for a in 0..verts.len() {
            for b in a + 1..verts.len() {
                let (pa, pb) = (verts.vertex(a), verts.vertex(b));
                if pa == pb || pa.dist(pb) > 2.0 * delta + tol.eps {
                    continue;
                }
                for (edge, seg) in edges.edges().enumerate() {
                    let hits = vve_lambdas(pa, pb, &seg, dir, delta, range, tol).unwrap_or_default();
                    for (lambda, s, kind) in hits {
                        events.push(Event {
                            lambda: clamp(lambda),
                            kind,
                            payload: EventPayload::Vve { side, a, b, edge, s },
                        });
                    }
                }
            }
        }
    }
    // Chained clustering on λ first, then a deterministic order inside each tick.
    events.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let mut ticks = Vec::new();
    let mut start = 0;
    for k in 1..=events.len() {
        if k == events.len() || events[k].lambda - events[k - 1].lambda > tol.eps {
            events[start..k].sort_by(|a, b| {
                a.kind
                    .cmp(&b.kind)
                    .then(a.payload.sort_key().cmp(&b.payload.sort_key()))
            });
            let lambda = events[start..k].iter().map(|e| e.lambda).fold(f64::INFINITY, f64::min);
            ticks.push(Tick {
                lambda,
                first: start,
                len: k - start,
            });
            start = k;
        }
    }
    SweepPlan {
        direction: v,
        range,
        events,
        ticks,
        tol,
    }
}

/// Sweep range used when none is given: far enough that the free space is
/// empty beyond it.
pub fn default_range(pi: &Curve, sigma: &Curve, delta: f64) -> (f64, f64) {
    let (a, b) = (pi.bbox(), sigma.bbox());
    let ca = (a.min + a.max) * 0.5;
    let cb = (b.min + b.max) * 0.5;
    let r = a.diameter() + b.diameter() + ca.dist(cb) + delta;
    (-r, r)
}

/// Grid, skeleton and backend for `σ + t` at one translation, updated event by event.
pub struct SweepState {
    pi: Curve,
    sigma: Curve,
    delta: f64,
    tol: Tolerance,
    translation: Point2,
    skeleton: FreeSpaceSkeleton,
    grid: PlaceholderGrid,
    backend: Box<dyn ReachabilityBackend>,
    writes: u64,
}

impl SweepState {
    pub fn new(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance, t: Point2, backend: BackendKind) -> Self {
        let shifted = sigma.translate(Translation2::from_vector(t));
        let skeleton = build_skeleton(pi, &shifted, delta, tol);
        let grid = grid_from_skeleton(&skeleton);
        let mut backend = make_backend(backend);
        backend.init(grid.lattice());
        SweepState {
            pi: pi.clone(),
            sigma: sigma.clone(),
            delta,
            tol,
            translation: t,
            skeleton,
            grid,
            backend,
            writes: 0,
        }
    }

    pub fn translation(&self) -> Point2 {
        self.translation
    }

    pub fn grid(&self) -> &PlaceholderGrid {
        &self.grid
    }

    pub fn skeleton(&self) -> &FreeSpaceSkeleton {
        &self.skeleton
    }

    pub fn backend_stats(&self) -> BackendStats {
        self.backend.stats()
    }

    /// Weight writes issued by events so far.
    pub fn writes(&self) -> u64 {
        self.writes
    }

    pub fn query(&mut self) -> bool {
        self.backend.query()
    }

    fn rebuild(&self) -> PlaceholderGrid {
        let shifted = self.sigma.translate(Translation2::from_vector(self.translation));
        grid_from_skeleton(&build_skeleton(&self.pi, &shifted, self.delta, self.tol))
    }

    /// Whether the maintained lattice equals one built from scratch at the current translation.
    /// Coincident lines may sit in a different slot order than a rebuild puts them.
    pub fn matches_rebuild(&self) -> bool {
        self.rebuild().lattice() == self.grid.lattice()
    }

    /// Whether a lattice built from scratch at the current translation has the same reachability.
    pub fn rebuild_agrees(&self) -> bool {
        let mut a = make_backend(BackendKind::Baseline);
        a.init(self.rebuild().lattice());
        let mut b = make_backend(BackendKind::Baseline);
        b.init(self.grid.lattice());
        a.query() == b.query()
    }

    /// Applies `e` with the geometry taken at translation `target`.
    pub fn apply_event(&mut self, e: &Event, target: Point2) -> Result<Vec<WeightChange>> {
        self.translation = target;
        let shifted = self.sigma.translate(Translation2::from_vector(target));
        let (n_pi, n_sigma) = (self.pi.len(), self.sigma.len());
        let mut corners = Vec::new();
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        match e.payload {
            EventPayload::Corner { i, j } => {
                corners.push((i, j));
                rows.extend([j.wrapping_sub(1), j].into_iter().filter(|&r| r < n_sigma - 1));
                cols.extend([i.wrapping_sub(1), i].into_iter().filter(|&c| c < n_pi - 1));
            }
            EventPayload::Tangency { side, edge, .. } | EventPayload::Vve { side, edge, .. } => match side {
                Side::Row => rows.push(edge),
                Side::Column => cols.push(edge),
            },
        }
        for &(i, j) in &corners {
            let free = within_radius(self.pi.vertex(i), shifted.vertex(j), self.delta, self.tol);
            self.skeleton.set_corner(i, j, free);
        }
        for &r in &rows {
            for (i, iv) in row_intervals(&self.pi, &shifted, self.delta, r, self.tol)
                .into_iter()
                .enumerate()
            {
                self.skeleton.set_vertical(i, r, iv);
            }
        }
        for &c in &cols {
            for (j, iv) in column_intervals(&self.pi, &shifted, self.delta, c, self.tol)
                .into_iter()
                .enumerate()
            {
                self.skeleton.set_horizontal(j, c, iv);
            }
        }
        let mut changes = Vec::new();
        for &(i, j) in &corners {
            let w = u8::from(self.skeleton.corner(i, j));
            changes.extend(self.grid.apply_corner_op(i, j, w)?);
        }
        for &r in &rows {
            changes.extend(self.grid.sync_strip(Axis::Row, r, &self.skeleton)?);
        }
        for &c in &cols {
            changes.extend(self.grid.sync_strip(Axis::Col, c, &self.skeleton)?);
        }
        for ch in &changes {
            self.backend.set_weight(ch.col, ch.row, ch.weight);
        }
        self.writes += changes.len() as u64;
        Ok(changes)
    }
}

/// Weight-change budget for one event.
pub fn change_bound(kind: EventKind, n_pi: usize, n_sigma: usize) -> usize {
    if kind.is_ve() {
        VE_CHANGE_FACTOR * (n_pi + n_sigma) + 1
    } else {
        VVE_CHANGE_BOUND
    }
}

/// Decision on a closed point (`lo == hi`, an event tick) or an open gap between ticks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub lo: f64,
    pub hi: f64,
    pub decision: bool,
    /// `λ` at which the maintained state was queried.
    pub probe: f64,
}

impl Sample {
    pub fn is_tick(&self) -> bool {
        self.lo == self.hi
    }
}

/// Weight changes one event caused, split by half-step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventRecord {
    pub event: Event,
    /// Changes while moving onto the event.
    pub onto: usize,
    /// Changes while moving off it into the next gap.
    pub off: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepStats {
    pub m_ve: usize,
    pub m_vve: usize,
    pub ticks: usize,
    /// Weight writes issued by events (the initial build excluded).
    pub weight_writes: u64,
    pub lattice_size: usize,
    pub records: Vec<EventRecord>,
    /// Ticks whose total changes exceeded the summed per-event budgets.
    pub bound_violations: Vec<String>,
    /// Gap probes where a rebuilt lattice answered differently (only checked when auditing).
    pub rebuild_mismatches: Vec<f64>,
    pub backend: BackendStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SweepOptions {
    pub backend: BackendKind,
    /// Compare the lattice with a from-scratch rebuild at every gap probe.
    pub audit: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOutcome {
    /// Maximal closed `λ`-intervals where `d_F(π, σ + λv) ≤ δ`.
    pub intervals: Vec<(f64, f64)>,
    pub samples: Vec<Sample>,
    pub stats: SweepStats,
    pub plan: SweepPlan,
}

/// Runs the ticks of `plan` on `state`, which must sit at `base + range.0 · v`.
/// Returns the decision on every tick and every gap, in order.
pub fn run_plan(
    state: &mut SweepState,
    base: Point2,
    plan: &SweepPlan,
    audit: bool,
    stats: &mut SweepStats,
) -> Result<Vec<Sample>> {
    let v = plan.direction.as_vector();
    let (lo, hi) = plan.range;
    let at = |lambda: f64| base + v * lambda;
    let (n_pi, n_sigma) = (state.pi.len(), state.sigma.len());
    let mut samples = Vec::new();
    let mut current = state.query();
    let mut prev = lo;
    let mut probe = lo;
    for (k, tick) in plan.ticks.iter().enumerate() {
        let events = plan.tick_events(tick);
        if tick.lambda > prev {
            samples.push(Sample {
                lo: prev,
                hi: tick.lambda,
                decision: current,
                probe,
            });
        }
        let mut onto = Vec::with_capacity(events.len());
        for e in events {
            onto.push(state.apply_event(e, at(tick.lambda))?.len());
        }
        let at_tick = state.query();
        samples.push(Sample {
            lo: tick.lambda,
            hi: tick.lambda,
            decision: at_tick,
            probe: tick.lambda,
        });
        current = at_tick;
        let next = plan.ticks.get(k + 1).map_or(hi, |t| t.lambda);
        let mut off = vec![0; events.len()];
        if next > tick.lambda {
            probe = 0.5 * (tick.lambda + next);
            for (e, slot) in events.iter().zip(off.iter_mut()) {
                *slot = state.apply_event(e, at(probe))?.len();
            }
            current = state.query();
            if audit && !state.rebuild_agrees() {
                stats.rebuild_mismatches.push(probe);
            }
        }
        let total: usize = onto.iter().sum::<usize>() + off.iter().sum::<usize>();
        let budget: usize = events.iter().map(|e| change_bound(e.kind, n_pi, n_sigma)).sum();
        if total > budget {
            stats.bound_violations.push(format!(
                "tick at {} with {} events made {total} changes, budget {budget}",
                tick.lambda,
                events.len()
            ));
        }
        for ((e, a), b) in events.iter().zip(onto).zip(off) {
            stats.records.push(EventRecord {
                event: *e,
                onto: a,
                off: b,
            });
        }
        prev = tick.lambda;
    }
    if prev < hi || plan.ticks.is_empty() {
        samples.push(Sample {
            lo: prev,
            hi,
            decision: current,
            probe,
        });
    }
    stats.m_ve += plan.ve_count();
    stats.m_vve += plan.vve_count();
    stats.ticks += plan.ticks.len();
    Ok(samples)
}

/// Closed hulls of maximal runs of feasible samples.
pub fn feasible_intervals(samples: &[Sample]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut open: Option<(f64, f64)> = None;
    for s in samples {
        if s.decision {
            open = Some(match open {
                Some((a, _)) => (a, s.hi),
                None => (s.lo, s.hi),
            });
        } else if let Some(iv) = open.take() {
            out.push(iv);
        }
    }
    out.extend(open);
    out
}

/// Feasible `λ` for `d_F(π, σ + λv) ≤ δ` over `range`.
pub fn sweep_decide(
    pi: &Curve,
    sigma: &Curve,
    v: Direction2,
    range: (f64, f64),
    delta: f64,
    tol: Tolerance,
    options: SweepOptions,
) -> Result<SweepOutcome> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    if !(range.0 <= range.1) {
        return Err(Error::InvalidArgument(format!(
            "empty range [{}, {}]",
            range.0, range.1
        )));
    }
    let plan = enumerate_sweep_events(pi, sigma, v, range, delta, tol);
    let start = v.as_vector() * range.0;
    let mut state = SweepState::new(pi, sigma, delta, tol, start, options.backend);
    let mut stats = SweepStats {
        lattice_size: {
            let (a, b) = state.grid().dimensions();
            a * b
        },
        ..SweepStats::default()
    };
    let samples = run_plan(&mut state, Point2::new(0.0, 0.0), &plan, options.audit, &mut stats)?;
    stats.weight_writes = state.writes();
    stats.backend = state.backend_stats();
    Ok(SweepOutcome {
        intervals: feasible_intervals(&samples),
        samples,
        stats,
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freespace::alt_godau_decide;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn dir(x: f64, y: f64) -> Direction2 {
        Direction2::new(x, y).unwrap()
    }

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    const WIDE: (f64, f64) = (-100.0, 100.0);

    #[test]
    fn corner_solver_examples() {
        let r = ve_corner_lambdas(p(0.0, 0.0), p(0.0, 1.0), dir(0.0, -1.0), 0.5, WIDE, tol());
        let vals: Vec<f64> = r.iter().map(|r| r.value).collect();
        assert_eq!(vals.len(), 2);
        assert!((vals[0] - 0.5).abs() < 1e-12 && (vals[1] - 1.5).abs() < 1e-12);
        assert!(ve_corner_lambdas(p(0.0, 0.0), p(3.0, 0.0), dir(1.0, 0.0), 0.5, (0.0, 10.0), tol()).is_empty());
        let r = ve_corner_lambdas(p(0.0, 0.0), p(0.0, 1.0), dir(0.0, -1.0), 0.0, WIDE, tol());
        assert_eq!(r.len(), 1);
        assert!((r[0].value - 1.0).abs() < 1e-12);
        assert_eq!(r[0].multiplicity, 2);
    }

    #[test]
    fn tangency_solver_examples() {
        let edge = Segment2::new(p(-2.0, 3.0), p(2.0, 3.0)).unwrap();
        let r = ve_tangency_lambdas(p(0.0, 0.0), &edge, dir(0.0, -1.0), 1.0, WIDE, tol());
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - 2.0).abs() < 1e-12 && (r[1].0 - 4.0).abs() < 1e-12);
        assert!((r[0].1 - 0.5).abs() < 1e-12 && (r[1].1 - 0.5).abs() < 1e-12);

        let edge = Segment2::new(p(0.0, 1.0), p(2.0, 1.0)).unwrap();
        assert!(ve_tangency_lambdas(p(0.0, 0.0), &edge, dir(0.0, -1.0), 0.5, WIDE, tol()).is_empty());

        let edge = Segment2::new(p(1.0, -1.0), p(1.0, 1.0)).unwrap();
        assert!(ve_tangency_lambdas(p(0.0, 0.0), &edge, dir(1.0, 0.0), 0.5, (0.0, 10.0), tol()).is_empty());
        let r = ve_tangency_lambdas(p(0.0, 0.0), &edge, dir(1.0, 0.0), 0.5, WIDE, tol());
        assert!((r[0].0 + 1.5).abs() < 1e-12 && (r[1].0 + 0.5).abs() < 1e-12);
    }

    #[test]
    fn vve_solver_examples() {
        let edge = Segment2::new(p(0.0, 2.0), p(2.0, 2.0)).unwrap();
        let r = vve_lambdas(p(0.0, 0.0), p(2.0, 0.0), &edge, dir(0.0, -1.0), 1.25, WIDE, tol()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - 1.25).abs() < 1e-12 && (r[1].0 - 2.75).abs() < 1e-12);
        assert!(
            vve_lambdas(p(0.0, 0.0), p(3.0, 0.0), &edge, dir(0.0, -1.0), 1.0, WIDE, tol())
                .unwrap()
                .is_empty()
        );
        let vertical = Segment2::new(p(5.0, 0.0), p(5.0, 1.0)).unwrap();
        assert!(
            vve_lambdas(p(0.0, 0.0), p(2.0, 0.0), &vertical, dir(0.0, 1.0), 1.25, WIDE, tol())
                .unwrap()
                .is_empty()
        );
        assert!(vve_lambdas(p(1.0, 1.0), p(1.0, 1.0), &edge, dir(0.0, 1.0), 1.0, WIDE, tol()).is_err());
    }

    #[test]
    fn vve_parallel_motion_reports_overlap_ends() {
        // The edge slides along y = 0.75 through the intersection point (1, 0.75).
        let edge = Segment2::new(p(3.0, 0.75), p(5.0, 0.75)).unwrap();
        let r = vve_lambdas(p(0.0, 0.0), p(2.0, 0.0), &edge, dir(-1.0, 0.0), 1.25, WIDE, tol()).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].0 - 2.0).abs() < 1e-12 && r[0].2 == EventKind::Overlapping);
        assert!((r[1].0 - 4.0).abs() < 1e-12 && r[1].2 == EventKind::Separating);
    }

    fn example_a() -> (Curve, Curve) {
        (
            Curve::from_xy(&[(0.0, 0.0), (2.0, 0.0)]),
            Curve::from_xy(&[(0.0, 1.0), (2.0, 1.0)]),
        )
    }

    #[test]
    fn example_a_plan_ticks() {
        let (pi, sigma) = example_a();
        let plan = enumerate_sweep_events(&pi, &sigma, dir(0.0, -1.0), (0.0, 3.0), 0.5, tol());
        let ticks: Vec<f64> = plan.ticks.iter().map(|t| t.lambda).collect();
        assert_eq!(ticks.len(), 2);
        assert!((ticks[0] - 0.5).abs() < 1e-12 && (ticks[1] - 1.5).abs() < 1e-12);
        assert!(plan
            .events
            .iter()
            .all(|e| matches!(e.payload, EventPayload::Corner { .. })));
    }

    #[test]
    fn far_away_sigma_has_no_events() {
        let (pi, sigma) = example_a();
        let far = sigma.translate(Translation2 { tx: 100.0, ty: 100.0 });
        let plan = enumerate_sweep_events(&pi, &far, dir(1.0, 0.0), (0.0, 1.0), 0.5, tol());
        assert!(plan.events.is_empty());
    }

    #[test]
    fn zero_delta_has_only_corner_events() {
        let c = Curve::from_xy(&[(0.0, 0.0), (1.0, 0.3), (2.0, -0.4)]);
        let plan = enumerate_sweep_events(&c, &c, dir(0.6, 0.8), (-1.0, 1.0), 0.0, tol());
        assert!(!plan.events.is_empty());
        assert!(plan
            .events
            .iter()
            .all(|e| matches!(e.payload, EventPayload::Corner { .. })));
    }

    #[test]
    fn example_a_sweep() {
        let (pi, sigma) = example_a();
        let out = sweep_decide(
            &pi,
            &sigma,
            dir(0.0, -1.0),
            (0.0, 3.0),
            0.5,
            tol(),
            SweepOptions::default(),
        )
        .unwrap();
        assert_eq!(out.intervals.len(), 1);
        let (a, b) = out.intervals[0];
        assert!((a - 0.5).abs() <= 1e-9 && (b - 1.5).abs() <= 1e-9, "{a} {b}");
        for k in 0..50 {
            let lambda = 3.0 * (k as f64 + 0.5) / 50.0;
            let shifted = sigma.translate(Translation2 { tx: 0.0, ty: -lambda });
            let inside = out.intervals.iter().any(|&(a, b)| lambda >= a && lambda <= b);
            assert_eq!(inside, alt_godau_decide(&pi, &shifted, 0.5), "λ = {lambda}");
        }
    }

    #[test]
    fn identical_curves_at_zero_delta() {
        let c = Curve::from_xy(&[(0.0, 0.0), (1.0, 0.3), (2.0, -0.4)]);
        let out = sweep_decide(&c, &c, dir(0.6, 0.8), (-1.0, 1.0), 0.0, tol(), SweepOptions::default()).unwrap();
        assert_eq!(out.intervals.len(), 1);
        let (a, b) = out.intervals[0];
        assert!(a.abs() < 1e-12 && b.abs() < 1e-12, "{a} {b}");
    }

    #[test]
    fn no_events_and_infeasible_is_empty() {
        let (pi, sigma) = example_a();
        let far = sigma.translate(Translation2 { tx: 100.0, ty: 100.0 });
        let out = sweep_decide(
            &pi,
            &far,
            dir(1.0, 0.0),
            (0.0, 1.0),
            0.5,
            tol(),
            SweepOptions::default(),
        )
        .unwrap();
        assert!(out.intervals.is_empty());
        assert_eq!(out.stats.weight_writes, 0);
    }

    #[test]
    fn gap_states_match_rebuild() {
        let pi = Curve::from_xy(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]);
        let sigma = Curve::from_xy(&[(0.0, 0.3), (1.5, 0.8), (3.0, 0.2)]);
        let options = SweepOptions {
            audit: true,
            ..Default::default()
        };
        let out = sweep_decide(&pi, &sigma, dir(0.3, 1.0), (-3.0, 3.0), 0.6, tol(), options).unwrap();
        assert!(
            out.stats.rebuild_mismatches.is_empty(),
            "{:?}",
            out.stats.rebuild_mismatches
        );
        assert!(
            out.stats.bound_violations.is_empty(),
            "{:?}",
            out.stats.bound_violations
        );
        assert!(out.stats.ticks > 0);
    }
}
