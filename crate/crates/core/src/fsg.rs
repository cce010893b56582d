//! The refined free-space graph: FSD boundaries plus one grid line through
//! every critical point, with a weight on every line crossing.

use serde::Serialize;

use crate::freespace::{interval_critical_ends, BoundaryId, End, FreeSpaceSkeleton};
use crate::geom::Interval;

/// What defines a grid line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum LineOrigin {
    /// An FSD boundary `l(π_i)` or `l(σ_j)`.
    Boundary(usize),
    /// The line through one end of a boundary's free interval.
    Critical { boundary: BoundaryId, end: End },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GridLineId {
    pub origin: LineOrigin,
    /// Creation order; breaks ties between lines at the same position.
    pub seq: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FsgLine {
    pub id: GridLineId,
    /// Position in diagram coordinates: strip index plus local parameter.
    pub pos: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VertexClass {
    Corner,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefinedFsg {
    /// Left to right.
    pub vertical: Vec<FsgLine>,
    /// Bottom to top.
    pub horizontal: Vec<FsgLine>,
    /// `weights[x * horizontal.len() + y]`.
    weights: Vec<u8>,
}

impl RefinedFsg {
    pub fn weight(&self, x: usize, y: usize) -> u8 {
        self.weights[x * self.horizontal.len() + y]
    }

    pub fn class(&self, x: usize, y: usize) -> VertexClass {
        let vb = matches!(self.vertical[x].id.origin, LineOrigin::Boundary(_));
        let hb = matches!(self.horizontal[y].id.origin, LineOrigin::Boundary(_));
        match (vb, hb) {
            (true, true) => VertexClass::Corner,
            (false, false) => VertexClass::Interior,
            _ => VertexClass::Boundary,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    /// JSON dump with line orderings and the weight matrix (rows bottom to top).
    pub fn to_json(&self) -> serde_json::Value {
        let nx = self.vertical.len();
        let matrix: Vec<Vec<u8>> = (0..self.horizontal.len())
            .map(|y| (0..nx).map(|x| self.weight(x, y)).collect())
            .collect();
        serde_json::json!({
            "vertical": self.vertical,
            "horizontal": self.horizontal,
            "weights": matrix,
        })
    }
}

/// Ordered lines crossing one axis: boundaries at integer positions, critical
/// lines inside their strip, ties by creation order.
fn ordered_lines(n_boundaries: usize, critical: impl Iterator<Item = (BoundaryId, End, f64)>) -> Vec<FsgLine> {
    let mut seq = 0u64;
    let mut next = || {
        seq += 1;
        seq - 1
    };
    let mut lines: Vec<FsgLine> = (0..n_boundaries)
        .map(|k| FsgLine {
            id: GridLineId {
                origin: LineOrigin::Boundary(k),
                seq: next(),
            },
            pos: k as f64,
        })
        .collect();
    for (boundary, end, param) in critical {
        lines.push(FsgLine {
            id: GridLineId {
                origin: LineOrigin::Critical { boundary, end },
                seq: next(),
            },
            pos: boundary.strip as f64 + param,
        });
    }
    lines.sort_by(|a, b| a.pos.total_cmp(&b.pos).then(a.id.seq.cmp(&b.id.seq)));
    lines
}

fn contains(iv: Option<Interval>, t: f64, slack: f64) -> bool {
    iv.is_some_and(|iv| iv.contains(t, slack))
}

pub fn build_fsg(sk: &FreeSpaceSkeleton) -> RefinedFsg {
    let slack = sk.tolerance().eps;
    let column_critical = (0..sk.columns()).flat_map(|c| {
        (0..sk.n_sigma()).flat_map(move |j| {
            let b = BoundaryId::horizontal(j, c);
            sk.horizontal(j, c)
                .map(|iv| interval_critical_ends(&iv).collect::<Vec<_>>())
                .unwrap_or_default()
                .into_iter()
                .map(move |(end, t)| (b, end, t))
        })
    });
    let row_critical = (0..sk.rows()).flat_map(|r| {
        (0..sk.n_pi()).flat_map(move |i| {
            let b = BoundaryId::vertical(i, r);
            sk.vertical(i, r)
                .map(|iv| interval_critical_ends(&iv).collect::<Vec<_>>())
                .unwrap_or_default()
                .into_iter()
                .map(move |(end, t)| (b, end, t))
        })
    });
    let vertical = ordered_lines(sk.n_pi(), column_critical);
    let horizontal = ordered_lines(sk.n_sigma(), row_critical);

    let mut weights = Vec::with_capacity(vertical.len() * horizontal.len());
    for vx in &vertical {
        for hy in &horizontal {
            let w = match (vx.id.origin, hy.id.origin) {
                (LineOrigin::Boundary(i), LineOrigin::Boundary(j)) => sk.corner(i, j),
                (LineOrigin::Boundary(i), LineOrigin::Critical { boundary, .. }) => {
                    let t = hy.pos - boundary.strip as f64;
                    contains(sk.vertical(i, boundary.strip), t, slack)
                }
                (LineOrigin::Critical { boundary, .. }, LineOrigin::Boundary(j)) => {
                    let t = vx.pos - boundary.strip as f64;
                    contains(sk.horizontal(j, boundary.strip), t, slack)
                }
                (LineOrigin::Critical { .. }, LineOrigin::Critical { .. }) => true,
            };
            weights.push(u8::from(w));
        }
    }
    RefinedFsg {
        vertical,
        horizontal,
        weights,
    }
}

/// Monotone (right/up) reachability from the bottom-left to the top-right corner.
pub fn fsg_reachable(g: &RefinedFsg) -> bool {
    let (nx, ny) = (g.vertical.len(), g.horizontal.len());
    let mut prev = vec![false; ny];
    let mut cur = vec![false; ny];
    for x in 0..nx {
        for y in 0..ny {
            let from = if x == 0 && y == 0 {
                true
            } else {
                (x > 0 && prev[y]) || (y > 0 && cur[y - 1])
            };
            cur[y] = from && g.weight(x, y) == 1;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[ny - 1]
}
