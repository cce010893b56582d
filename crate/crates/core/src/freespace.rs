//! Free-space skeleton of a curve pair at a fixed `δ`, and the classical
//! interval-propagation decision procedure that every faster path in this
//! crate is checked against.
//!
//! Indices are zero-based. The vertical boundary of `π_i` within row `j` is
//! parameterized by the position along edge `σ_j σ_{j+1}`; the horizontal
//! boundary of `σ_j` within column `i` by the position along `π_i π_{i+1}`.

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::geom::{free_interval, within_radius, Interval, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Orientation {
    /// `l(π_i)`, crossing a row strip. Its critical points are row critical points.
    Vertical,
    /// `l(σ_j)`, crossing a column strip. Its critical points are column critical points.
    Horizontal,
}

/// One cell boundary: a curve vertex line restricted to one strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryId {
    pub orientation: Orientation,
    /// Vertex index on the curve that defines the line (`i` of `π_i` or `j` of `σ_j`).
    pub boundary: usize,
    /// Strip index (row for vertical boundaries, column for horizontal ones).
    pub strip: usize,
}

impl BoundaryId {
    pub fn vertical(i: usize, row: usize) -> Self {
        BoundaryId {
            orientation: Orientation::Vertical,
            boundary: i,
            strip: row,
        }
    }

    pub fn horizontal(j: usize, column: usize) -> Self {
        BoundaryId {
            orientation: Orientation::Horizontal,
            boundary: j,
            strip: column,
        }
    }
}

/// Which end of a boundary's free interval a critical point is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    Lo,
    Hi,
}

/// An endpoint of a free interval lying strictly inside its boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub boundary: BoundaryId,
    pub end: End,
    /// Local parameter in `(0, 1)` along the strip.
    pub param: f64,
}

/// Free intervals on every cell boundary plus corner membership.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeSpaceSkeleton {
    delta: f64,
    tol: Tolerance,
    n_pi: usize,
    n_sigma: usize,
    /// Indexed `i * (n_sigma - 1) + row`.
    vertical: Vec<Option<Interval>>,
    /// Indexed `j * (n_pi - 1) + column`.
    horizontal: Vec<Option<Interval>>,
    /// Indexed `i * n_sigma + j`.
    corners: Vec<bool>,
}

/// Endpoints of `iv` that are critical (strictly inside the boundary).
pub fn interval_critical_ends(iv: &Interval) -> impl Iterator<Item = (End, f64)> {
    let lo = (iv.lo > 0.0 && iv.lo < 1.0).then_some((End::Lo, iv.lo));
    let hi = (iv.hi > 0.0 && iv.hi < 1.0).then_some((End::Hi, iv.hi));
    lo.into_iter().chain(hi)
}

impl FreeSpaceSkeleton {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    pub fn n_pi(&self) -> usize {
        self.n_pi
    }

    pub fn n_sigma(&self) -> usize {
        self.n_sigma
    }

    pub fn rows(&self) -> usize {
        self.n_sigma - 1
    }

    pub fn columns(&self) -> usize {
        self.n_pi - 1
    }

    /// Free interval of `l(π_i)` within row `row`.
    pub fn vertical(&self, i: usize, row: usize) -> Option<Interval> {
        self.vertical[i * (self.n_sigma - 1) + row]
    }

    /// Free interval of `l(σ_j)` within column `column`.
    pub fn horizontal(&self, j: usize, column: usize) -> Option<Interval> {
        self.horizontal[j * (self.n_pi - 1) + column]
    }

    pub fn interval(&self, b: BoundaryId) -> Option<Interval> {
        match b.orientation {
            Orientation::Vertical => self.vertical(b.boundary, b.strip),
            Orientation::Horizontal => self.horizontal(b.boundary, b.strip),
        }
    }

    pub fn corner(&self, i: usize, j: usize) -> bool {
        self.corners[i * self.n_sigma + j]
    }

    pub(crate) fn set_vertical(&mut self, i: usize, row: usize, iv: Option<Interval>) {
        let k = i * (self.n_sigma - 1) + row;
        self.vertical[k] = iv;
    }

    pub(crate) fn set_horizontal(&mut self, j: usize, column: usize, iv: Option<Interval>) {
        let k = j * (self.n_pi - 1) + column;
        self.horizontal[k] = iv;
    }

    pub(crate) fn set_corner(&mut self, i: usize, j: usize, free: bool) {
        self.corners[i * self.n_sigma + j] = free;
    }

    /// Critical points on the vertical boundaries of row `row`, grouped by boundary.
    pub fn row_critical_points(&self, row: usize) -> Vec<CriticalPoint> {
        (0..self.n_pi)
            .flat_map(|i| {
                let b = BoundaryId::vertical(i, row);
                self.vertical(i, row)
                    .into_iter()
                    .flat_map(move |iv| interval_critical_ends(&iv).collect::<Vec<_>>())
                    .map(move |(end, param)| CriticalPoint {
                        boundary: b,
                        end,
                        param,
                    })
            })
            .collect()
    }

    /// Critical points on the horizontal boundaries of column `column`.
    pub fn column_critical_points(&self, column: usize) -> Vec<CriticalPoint> {
        (0..self.n_sigma)
            .flat_map(|j| {
                let b = BoundaryId::horizontal(j, column);
                self.horizontal(j, column)
                    .into_iter()
                    .flat_map(move |iv| interval_critical_ends(&iv).collect::<Vec<_>>())
                    .map(move |(end, param)| CriticalPoint {
                        boundary: b,
                        end,
                        param,
                    })
            })
            .collect()
    }

    /// `m_j^r`: number of row critical points in row `row`.
    pub fn m_row(&self, row: usize) -> usize {
        self.row_critical_points(row).len()
    }

    /// `m_i^c`: number of column critical points in column `column`.
    pub fn m_col(&self, column: usize) -> usize {
        self.column_critical_points(column).len()
    }

    pub fn critical_point_count(&self) -> usize {
        (0..self.rows()).map(|r| self.m_row(r)).sum::<usize>()
            + (0..self.columns()).map(|c| self.m_col(c)).sum::<usize>()
    }
}

/// Free intervals of all vertical boundaries in one row.
pub(crate) fn row_intervals(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    row: usize,
    tol: Tolerance,
) -> Vec<Option<Interval>> {
    let edge = sigma.edge(row);
    pi.vertices()
        .iter()
        .map(|&p| free_interval(p, delta, &edge, tol))
        .collect()
}

/// Free intervals of all horizontal boundaries in one column.
pub(crate) fn column_intervals(
    pi: &Curve,
    sigma: &Curve,
    delta: f64,
    column: usize,
    tol: Tolerance,
) -> Vec<Option<Interval>> {
    let edge = pi.edge(column);
    sigma
        .vertices()
        .iter()
        .map(|&q| free_interval(q, delta, &edge, tol))
        .collect()
}

/// Free-space skeleton for `(π, σ, δ)`.
pub fn build_skeleton(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance) -> FreeSpaceSkeleton {
    let (n_pi, n_sigma) = (pi.len(), sigma.len());
    let mut vertical = vec![None; n_pi * (n_sigma - 1)];
    for row in 0..n_sigma - 1 {
        for (i, iv) in row_intervals(pi, sigma, delta, row, tol).into_iter().enumerate() {
            vertical[i * (n_sigma - 1) + row] = iv;
        }
    }
    let mut horizontal = vec![None; n_sigma * (n_pi - 1)];
    for column in 0..n_pi - 1 {
        for (j, iv) in column_intervals(pi, sigma, delta, column, tol).into_iter().enumerate() {
            horizontal[j * (n_pi - 1) + column] = iv;
        }
    }
    let mut corners = vec![false; n_pi * n_sigma];
    for i in 0..n_pi {
        for j in 0..n_sigma {
            corners[i * n_sigma + j] = within_radius(pi.vertex(i), sigma.vertex(j), delta, tol);
        }
    }
    FreeSpaceSkeleton {
        delta,
        tol,
        n_pi,
        n_sigma,
        vertical,
        horizontal,
        corners,
    }
}

/// Exact (closed) free-space membership of corner `(i, j)`.
pub fn corner_free(pi: &Curve, sigma: &Curve, delta: f64, i: usize, j: usize) -> bool {
    pi.vertex(i).dist(sigma.vertex(j)) <= delta
}

/// Decides `d_F(π, σ) ≤ δ` with the default tolerance.
pub fn alt_godau_decide(pi: &Curve, sigma: &Curve, delta: f64) -> bool {
    alt_godau_decide_with(pi, sigma, delta, Tolerance::default())
}

pub fn alt_godau_decide_with(pi: &Curve, sigma: &Curve, delta: f64, tol: Tolerance) -> bool {
    decide_skeleton(&build_skeleton(pi, sigma, delta, tol))
}

/// Row-by-row propagation of the lowest reachable parameter on each boundary.
///
/// The reachable part of a boundary is always `[low, interval.hi]`, so one
/// number per boundary suffices.
pub fn decide_skeleton(sk: &FreeSpaceSkeleton) -> bool {
    let (n_pi, n_sigma) = (sk.n_pi, sk.n_sigma);
    let slack = sk.tol.eps;
    if !sk.corner(0, 0) || !sk.corner(n_pi - 1, n_sigma - 1) {
        return false;
    }
    let rows = n_sigma - 1;
    let cols = n_pi - 1;
    // reach_v[i * rows + j]: lowest reachable parameter on l(π_i) in row j.
    let mut reach_v: Vec<Option<f64>> = vec![None; n_pi * rows];
    // reach_h[j * cols + i]: lowest reachable parameter on l(σ_j) in column i.
    let mut reach_h: Vec<Option<f64>> = vec![None; n_sigma * cols];

    let starts_at_corner = |iv: Option<Interval>| iv.is_some_and(|iv| iv.lo == 0.0);
    let ends_at_corner = |iv: Option<Interval>| iv.is_some_and(|iv| iv.hi == 1.0);

    for j in 0..rows {
        let below_ok = j == 0 || (reach_v[j - 1].is_some() && ends_at_corner(sk.vertical(0, j - 1)));
        if below_ok && starts_at_corner(sk.vertical(0, j)) {
            reach_v[j] = Some(0.0);
        }
    }
    for i in 0..cols {
        let left_ok = i == 0 || (reach_h[i - 1].is_some() && ends_at_corner(sk.horizontal(0, i - 1)));
        if left_ok && starts_at_corner(sk.horizontal(0, i)) {
            reach_h[i] = Some(0.0);
        }
    }

    let propagate = |from_side: Option<f64>, from_across: Option<f64>, target: Option<Interval>| -> Option<f64> {
        let iv = target?;
        if from_across.is_some() {
            return Some(iv.lo);
        }
        let low = from_side?;
        let start = iv.lo.max(low);
        (start <= iv.hi + slack).then_some(start.min(iv.hi))
    };

    for j in 0..rows {
        for i in 0..cols {
            let left = reach_v[i * rows + j];
            let bottom = reach_h[j * cols + i];
            if left.is_none() && bottom.is_none() {
                continue;
            }
            reach_v[(i + 1) * rows + j] = propagate(left, bottom, sk.vertical(i + 1, j));
            reach_h[(j + 1) * cols + i] = propagate(bottom, left, sk.horizontal(j + 1, i));
        }
    }

    let via_right = reach_v[(n_pi - 1) * rows + rows - 1].is_some() && ends_at_corner(sk.vertical(n_pi - 1, rows - 1));
    let via_top =
        reach_h[(n_sigma - 1) * cols + cols - 1].is_some() && ends_at_corner(sk.horizontal(n_sigma - 1, cols - 1));
    via_right || via_top
}

/// Fréchet distance to within `value_tol`, by bisection over the decision procedure.
pub fn frechet_value(pi: &Curve, sigma: &Curve, value_tol: f64) -> f64 {
    assert!(value_tol > 0.0, "value_tol must be positive");
    let tol = Tolerance::default();
    let mut hi = 0.0f64;
    for p in pi.vertices() {
        for q in sigma.vertices() {
            hi = hi.max(p.dist(*q));
        }
    }
    hi += pi.total_length().max(sigma.total_length()) * 1e-9;
    let mut lo = 0.0f64;
    if alt_godau_decide_with(pi, sigma, 0.0, tol) {
        return 0.0;
    }
    while hi - lo > value_tol {
        let mid = 0.5 * (lo + hi);
        if alt_godau_decide_with(pi, sigma, mid, tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
