//! Existence of a translation `t` with `d_F(π, σ + t) ≤ δ`.
//!
//! The decision is constant on every face of the arrangement formed by the
//! critical curves in the translation plane, and every non-empty feasible
//! region contains a point of some vertex or edge of that arrangement. So it
//! suffices to test one translation per arrangement vertex and per arc
//! between consecutive vertices.
//!
//! Only translations are handled. Rotations, scalings or general
//! rationally parameterized families would need their own critical curves.

use rayon::prelude::*;
use serde::Serialize;

use crate::backend::BackendKind;
use crate::curve::{Curve, Translation2};
use crate::error::{Error, Result};
use crate::freespace::alt_godau_decide_with;
use crate::geom::{
    circle_circle_intersections, circle_segment_intersections, segment_intersections, Direction2, Point2, Segment2,
    Tolerance,
};
pub use crate::sweep::Side;
use crate::sweep::{enumerate_sweep_events, run_plan, SweepState, SweepStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveKind {
    Ve,
    Vve,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Piece {
    Circle { center: Point2, radius: f64 },
    Segment(Segment2),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CurvePayload {
    /// A vertex against an opposing edge.
    Ve { side: Side, vertex: usize, edge: usize },
    /// Two vertices against an opposing edge.
    Vve {
        side: Side,
        a: usize,
        b: usize,
        edge: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalCurve2D {
    pub kind: CurveKind,
    pub payload: CurvePayload,
    pub pieces: Vec<Piece>,
}

/// Critical curves in the translation plane (`δ > 0`).
///
/// A vertex–edge curve is the boundary of the stadium of translations that
/// bring the vertex within `δ` of the edge, completed to the two full circles
/// around the edge endpoints (a corner crossing either circle changes the
/// free space even where the circle lies inside the stadium).
pub fn critical_curves_2d(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance) -> Result<Vec<CriticalCurve2D>> {
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument("critical curves need delta > 0".into()));
    }
    let mut out = Vec::new();
    // Row side: t moves σ's edge; a point t solves |π_i − σ(s) − t| = δ.
    // Column side: t moves σ's vertex; |σ_j + t − π(s)| = δ.
    for (side, verts, edges) in [(Side::Row, pi, sigma), (Side::Column, sigma, pi)] {
        // Map "vertex minus edge point" into the t-plane.
        let to_t = |vertex: Point2, edge_point: Point2| match side {
            Side::Row => vertex - edge_point,
            Side::Column => edge_point - vertex,
        };
        for (vi, &p) in verts.vertices().iter().enumerate() {
            for (w, seg) in edges.edges().enumerate() {
                let n = seg.delta().perp() * (delta / seg.length());
                let a = to_t(p, seg.a);
                let b = to_t(p, seg.b);
                let mut pieces = vec![
                    Piece::Segment(Segment2::new_unchecked(a + n, b + n)),
                    Piece::Segment(Segment2::new_unchecked(a - n, b - n)),
                ];
                pieces.push(Piece::Circle {
                    center: a,
                    radius: delta,
                });
                pieces.push(Piece::Circle {
                    center: b,
                    radius: delta,
                });
                out.push(CriticalCurve2D {
                    kind: CurveKind::Ve,
                    payload: CurvePayload::Ve {
                        side,
                        vertex: vi,
                        edge: w,
                    },
                    pieces,
                });
            }
        }
        for ia in 0..verts.len() {
            for ib in ia + 1..verts.len() {
                let (pa, pb) = (verts.vertex(ia), verts.vertex(ib));
                if pa == pb || pa.dist(pb) > 2.0 * delta + tol.eps {
                    continue;
                }
                let zs = circle_circle_intersections(pa, pb, delta, tol)?;
                for (w, seg) in edges.edges().enumerate() {
                    let pieces = zs
                        .iter()
                        .map(|&z| Piece::Segment(Segment2::new_unchecked(to_t(z, seg.a), to_t(z, seg.b))))
                        .collect();
                    out.push(CriticalCurve2D {
                        kind: CurveKind::Vve,
                        payload: CurvePayload::Vve {
                            side,
                            a: ia,
                            b: ib,
                            edge: w,
                        },
                        pieces,
                    });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CandidateTag {
    /// Intersection of two curve pieces, or a segment endpoint.
    ArrangementVertex,
    /// Between consecutive vertices along a piece.
    EdgeSample,
    /// On a piece that meets no other piece.
    IsolatedSample,
    /// No critical curve at all.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub t: Point2,
    pub tag: CandidateTag,
    /// Index of the generating piece in the deduplicated piece list.
    pub piece: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateSet {
    pub candidates: Vec<Candidate>,
    pub pieces: usize,
    pub arrangement_vertices: usize,
    pub edge_samples: usize,
}

/// Disk that every feasible translation lies in (endpoints must match within `δ`).
#[derive(Debug, Clone, Copy)]
pub struct Region {
    pub centers: [Point2; 2],
    pub radius: f64,
}

impl Region {
    pub fn for_curves(pi: &Curve, sigma: &Curve, delta: f64) -> Self {
        Region {
            centers: [pi.first() - sigma.first(), pi.last() - sigma.last()],
            radius: delta,
        }
    }

    pub fn contains(&self, t: Point2, slack: f64) -> bool {
        self.centers.iter().all(|c| c.dist(t) <= self.radius + slack)
    }

    fn touches(&self, piece: &Piece, slack: f64) -> bool {
        self.centers.iter().all(|&c| match *piece {
            Piece::Circle { center, radius } => (center.dist(c) - radius).abs() <= self.radius + slack,
            Piece::Segment(s) => crate::geom::point_segment_distance(c, &s).0 <= self.radius + slack,
        })
    }
}

fn angle_of(center: Point2, p: Point2) -> f64 {
    let a = (p.y - center.y).atan2(p.x - center.x);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

fn circle_point(center: Point2, radius: f64, angle: f64) -> Point2 {
    center + Point2::new(angle.cos(), angle.sin()) * radius
}

fn dedup_pieces(curves: &[CriticalCurve2D], tol: Tolerance) -> Vec<Piece> {
    let mut pieces: Vec<Piece> = Vec::new();
    for p in curves.iter().flat_map(|c| c.pieces.iter()) {
        let dup = pieces.iter().any(|q| match (p, q) {
            (Piece::Circle { center: a, radius: ra }, Piece::Circle { center: b, radius: rb }) => {
                a.dist(*b) <= tol.eps && (ra - rb).abs() <= tol.eps
            }
            (Piece::Segment(s), Piece::Segment(r)) => {
                (s.a.dist(r.a) <= tol.eps && s.b.dist(r.b) <= tol.eps)
                    || (s.a.dist(r.b) <= tol.eps && s.b.dist(r.a) <= tol.eps)
            }
            _ => false,
        });
        if !dup {
            pieces.push(*p);
        }
    }
    pieces
}

/// One translation per arrangement vertex and per arc between vertices,
/// restricted to `region` when given. Falls back to the endpoint-matching
/// translation `π_1 − σ_1` when there is no curve.
pub fn candidate_transformations(
    curves: &[CriticalCurve2D],
    region: Option<Region>,
    fallback: Point2,
    tol: Tolerance,
) -> CandidateSet {
    let slack = 1e-7;
    let mut pieces = dedup_pieces(curves, tol);
    if let Some(r) = region {
        pieces.retain(|p| r.touches(p, slack));
    }
    // Parameters of arrangement vertices along each piece: segment s ∈ [0, 1], circle angle.
    let mut params: Vec<Vec<f64>> = vec![Vec::new(); pieces.len()];
    let mut vertices: Vec<Point2> = Vec::new();
    for a in 0..pieces.len() {
        for b in a + 1..pieces.len() {
            match (pieces[a], pieces[b]) {
                (Piece::Segment(s), Piece::Segment(r)) => {
                    for (ps, pr) in segment_intersections(&s, &r, tol) {
                        params[a].push(ps);
                        params[b].push(pr);
                        vertices.push(s.at(ps));
                    }
                }
                (Piece::Segment(s), Piece::Circle { center, radius })
                | (Piece::Circle { center, radius }, Piece::Segment(s)) => {
                    let (si, ci) = if matches!(pieces[a], Piece::Segment(_)) {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    for ps in circle_segment_intersections(center, radius, &s, tol) {
                        let q = s.at(ps);
                        params[si].push(ps);
                        params[ci].push(angle_of(center, q));
                        vertices.push(q);
                    }
                }
                (Piece::Circle { center: c1, radius: r1 }, Piece::Circle { center: c2, .. }) => {
                    if c1.dist(c2) <= tol.eps {
                        continue;
                    }
                    for q in circle_circle_intersections(c1, c2, r1, tol).unwrap_or_default() {
                        params[a].push(angle_of(c1, q));
                        params[b].push(angle_of(c2, q));
                        vertices.push(q);
                    }
                }
            }
        }
    }
    let mut candidates: Vec<Candidate> = vertices
        .into_iter()
        .map(|t| Candidate {
            t,
            tag: CandidateTag::ArrangementVertex,
            piece: None,
        })
        .collect();
    for (k, piece) in pieces.iter().enumerate() {
        let ps = &mut params[k];
        ps.sort_by(f64::total_cmp);
        match *piece {
            Piece::Segment(s) => {
                ps.insert(0, 0.0);
                ps.push(1.0);
                for &e in [0.0, 1.0].iter() {
                    candidates.push(Candidate {
                        t: s.at(e),
                        tag: CandidateTag::ArrangementVertex,
                        piece: Some(k),
                    });
                }
                for w in ps.windows(2) {
                    if w[1] - w[0] > tol.eps {
                        candidates.push(Candidate {
                            t: s.at(0.5 * (w[0] + w[1])),
                            tag: CandidateTag::EdgeSample,
                            piece: Some(k),
                        });
                    }
                }
            }
            Piece::Circle { center, radius } => {
                if ps.is_empty() {
                    // Two antipodal samples keep the set symmetric under t -> -t.
                    for angle in [0.0, std::f64::consts::PI] {
                        candidates.push(Candidate {
                            t: circle_point(center, radius, angle),
                            tag: CandidateTag::IsolatedSample,
                            piece: Some(k),
                        });
                    }
                    continue;
                }
                for idx in 0..ps.len() {
                    let a0 = ps[idx];
                    let a1 = if idx + 1 < ps.len() {
                        ps[idx + 1]
                    } else {
                        ps[0] + std::f64::consts::TAU
                    };
                    if a1 - a0 > tol.eps {
                        candidates.push(Candidate {
                            t: circle_point(center, radius, 0.5 * (a0 + a1)),
                            tag: CandidateTag::EdgeSample,
                            piece: Some(k),
                        });
                    }
                }
            }
        }
    }
    if let Some(r) = region {
        candidates.retain(|c| r.contains(c.t, slack));
    }
    if pieces.is_empty() {
        candidates.push(Candidate {
            t: fallback,
            tag: CandidateTag::Fallback,
            piece: None,
        });
    }
    candidates.sort_by(|a, b| a.t.x.total_cmp(&b.t.x).then(a.t.y.total_cmp(&b.t.y)));
    let mut kept: Vec<Candidate> = Vec::with_capacity(candidates.len());
    for c in candidates {
        let dup = kept
            .iter()
            .rev()
            .take_while(|k| c.t.x - k.t.x <= tol.eps)
            .any(|k| (c.t.y - k.t.y).abs() <= tol.eps);
        if !dup {
            kept.push(c);
        }
    }
    let arrangement_vertices = kept.iter().filter(|c| c.tag == CandidateTag::ArrangementVertex).count();
    let edge_samples = kept.len() - arrangement_vertices;
    CandidateSet {
        candidates: kept,
        pieces: pieces.len(),
        arrangement_vertices,
        edge_samples,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecideMode {
    /// Run the free-space decision independently at every candidate.
    Oracle,
    /// Visit candidates in lexicographic order, sweeping the grid graph between them.
    Events,
}

impl std::str::FromStr for DecideMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(DecideMode::Oracle),
            "events" => Ok(DecideMode::Events),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Decision2D {
    pub feasible: bool,
    pub witness: Option<Translation2>,
    pub candidates: usize,
    /// Candidates examined before the answer was known.
    pub evaluated: usize,
    pub counts: Option<Fact17Counts>,
    pub sweep: Option<SweepStats>,
}

pub fn decide_translation_2d(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    mode: DecideMode,
    backend: BackendKind,
    tol: Tolerance,
) -> Result<Decision2D> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    let t0 = pi.first() - sigma.first();
    if delta == 0.0 {
        // Zero width forces the first vertices to coincide.
        let ok = alt_godau_decide_with(pi, &sigma.translate(Translation2::from_vector(t0)), 0.0, tol);
        return Ok(Decision2D {
            feasible: ok,
            witness: ok.then(|| Translation2::from_vector(t0)),
            candidates: 1,
            evaluated: 1,
            counts: None,
            sweep: None,
        });
    }
    let curves = critical_curves_2d(pi, sigma, delta, tol)?;
    let set = candidate_transformations(&curves, Some(Region::for_curves(pi, sigma, delta)), t0, tol);
    let counts = Some(counts_from(&curves, &set));
    let ts: Vec<Point2> = set.candidates.iter().map(|c| c.t).collect();
    if ts.is_empty() {
        return Ok(Decision2D {
            feasible: false,
            witness: None,
            candidates: 0,
            evaluated: 0,
            counts,
            sweep: None,
        });
    }
    match mode {
        DecideMode::Oracle => {
            let hit = ts.par_iter().position_first(|&t| {
                alt_godau_decide_with(pi, &sigma.translate(Translation2::from_vector(t)), delta, tol)
            });
            Ok(Decision2D {
                feasible: hit.is_some(),
                witness: hit.map(|k| Translation2::from_vector(ts[k])),
                candidates: ts.len(),
                evaluated: hit.map_or(ts.len(), |k| k + 1),
                counts,
                sweep: None,
            })
        }
        DecideMode::Events => {
            let mut state = SweepState::new(pi, sigma, delta, tol, ts[0], backend);
            let (w, h) = state.grid().dimensions();
            let mut stats = SweepStats {
                lattice_size: w * h,
                ..SweepStats::default()
            };
            let mut hit = state.query().then_some(0);
            for (k, &target) in ts.iter().enumerate().skip(1) {
                if hit.is_some() {
                    break;
                }
                let from = state.translation();
                let leg = target - from;
                let length = leg.norm();
                if length == 0.0 {
                    if state.query() {
                        hit = Some(k);
                    }
                    continue;
                }
                let dir = Direction2::new(leg.x, leg.y)?;
                let shifted = sigma.translate(Translation2::from_vector(from));
                let plan = enumerate_sweep_events(pi, &shifted, dir, (0.0, length), delta, tol);
                let samples = run_plan(&mut state, from, &plan, false, &mut stats)?;
                let end = samples.last().expect("a plan always yields a sample");
                if end.decision {
                    hit = Some(k);
                }
            }
            stats.weight_writes = state.writes();
            stats.backend = state.backend_stats();
            Ok(Decision2D {
                feasible: hit.is_some(),
                witness: hit.map(|k| Translation2::from_vector(ts[k])),
                candidates: ts.len(),
                evaluated: hit.map_or(ts.len(), |k| k + 1),
                counts,
                sweep: Some(stats),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Fact17Counts {
    pub ve_curves: usize,
    pub vve_curves: usize,
    pub vve_segments: usize,
    pub pieces: usize,
    pub arrangement_vertices: usize,
    pub edge_samples: usize,
}

fn counts_from(curves: &[CriticalCurve2D], set: &CandidateSet) -> Fact17Counts {
    let ve = curves.iter().filter(|c| c.kind == CurveKind::Ve).count();
    let vve: Vec<_> = curves.iter().filter(|c| c.kind == CurveKind::Vve).collect();
    Fact17Counts {
        ve_curves: ve,
        vve_curves: vve.len(),
        vve_segments: vve.iter().map(|c| c.pieces.len()).sum(),
        pieces: set.pieces,
        arrangement_vertices: set.arrangement_vertices,
        edge_samples: set.edge_samples,
    }
}

/// Curve, vertex and sample counts over the whole plane (no region restriction).
pub fn verify_fact17_counts(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance) -> Result<Fact17Counts> {
    let curves = critical_curves_2d(pi, sigma, delta, tol)?;
    let set = candidate_transformations(&curves, None, pi.first() - sigma.first(), tol);
    Ok(counts_from(&curves, &set))
}
