//! Planar primitives shared by every other module: points, directions,
//! segments, a global tolerance, a stable quadratic solver, and the handful of
//! disk/segment/circle intersection routines that all event and critical-point
//! formulas reduce to under translation.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or free vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point2, s: f64) -> Point2 {
        Point2::new(self.x + s * (o.x - self.x), self.y + s * (o.y - self.y))
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// A unit-length direction vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction2 {
    dx: f64,
    dy: f64,
}

impl Direction2 {
    /// Normalizes `(dx, dy)`; the zero vector has no direction.
    pub fn new(dx: f64, dy: f64) -> Result<Self> {
        if !(dx.is_finite() && dy.is_finite()) {
            return Err(Error::InvalidArgument("direction must be finite".into()));
        }
        let len = dx.hypot(dy);
        if len == 0.0 {
            return Err(Error::InvalidArgument("direction must be non-zero".into()));
        }
        Ok(Direction2 {
            dx: dx / len,
            dy: dy / len,
        })
    }

    pub fn dx(self) -> f64 {
        self.dx
    }

    pub fn dy(self) -> f64 {
        self.dy
    }

    pub fn as_vector(self) -> Point2 {
        Point2::new(self.dx, self.dy)
    }

    pub fn reversed(self) -> Direction2 {
        Direction2 {
            dx: -self.dx,
            dy: -self.dy,
        }
    }
}

/// Closed segment `a + s (b - a)`, `s ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment2 {
    pub a: Point2,
    pub b: Point2,
}

impl Segment2 {
    pub fn new(a: Point2, b: Point2) -> Result<Self> {
        if a == b {
            return Err(Error::DegenerateInput("zero-length segment".into()));
        }
        Ok(Segment2 { a, b })
    }

    /// Builds a segment without the non-degeneracy check; callers guarantee `a != b`.
    pub(crate) fn new_unchecked(a: Point2, b: Point2) -> Self {
        Segment2 { a, b }
    }

    pub fn at(&self, s: f64) -> Point2 {
        self.a.lerp(self.b, s)
    }

    pub fn delta(&self) -> Point2 {
        self.b - self.a
    }

    pub fn length(&self) -> f64 {
        self.delta().norm()
    }

    pub fn translated(&self, t: Point2) -> Segment2 {
        Segment2 {
            a: self.a + t,
            b: self.b + t,
        }
    }
}

/// Global numeric tolerance for root coincidence and boundary classification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: 1e-9 }
    }
}

impl Tolerance {
    pub const ENV_VAR: &'static str = "FRECHET_EPS";

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && (0.0..1e-3).contains(&eps)) {
            return Err(Error::InvalidArgument(format!(
                "tolerance must satisfy 0 <= eps < 1e-3, got {eps}"
            )));
        }
        Ok(Tolerance { eps })
    }

    /// Default tolerance, overridden by `FRECHET_EPS` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Ok(raw) => {
                let eps: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("{} is not a number: {raw:?}", Self::ENV_VAR)))?;
                Tolerance::new(eps)
            }
            Err(_) => Ok(Tolerance::default()),
        }
    }
}

/// A real root together with its multiplicity (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u8,
}

impl Root {
    fn simple(value: f64) -> Self {
        Root { value, multiplicity: 1 }
    }

    fn double(value: f64) -> Self {
        Root { value, multiplicity: 2 }
    }
}

/// Real roots of `a x² + b x + c`, ascending.
///
/// Uses the sign-matched `q` formulation so that neither root suffers from
/// cancellation. Roots closer than `tol.eps`, and near-tangent cases whose
/// discriminant is negative only by rounding noise, collapse into a single
/// root of multiplicity 2. A vanishing leading coefficient degrades to the
/// linear case.
pub fn solve_quadratic(a: f64, b: f64, c: f64, tol: Tolerance) -> Result<Vec<Root>> {
    if a == 0.0 && b == 0.0 && c == 0.0 {
        return Err(Error::DegenerateInput("all quadratic coefficients are zero".into()));
    }
    if a == 0.0 {
        if b == 0.0 {
            return Ok(Vec::new());
        }
        return Ok(vec![Root::simple(-c / b)]);
    }
    let disc = b * b - 4.0 * a * c;
    let rounding = 8.0 * f64::EPSILON * (b * b + (4.0 * a * c).abs());
    let merge = (tol.eps * a).powi(2);
    if disc < 0.0 {
        if -disc <= rounding + merge {
            return Ok(vec![Root::double(-b / (2.0 * a))]);
        }
        return Ok(Vec::new());
    }
    if disc <= merge {
        return Ok(vec![Root::double(-b / (2.0 * a))]);
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + if b >= 0.0 { sq } else { -sq });
    let r1 = q / a;
    let r2 = c / q;
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    Ok(vec![Root::simple(lo), Root::simple(hi)])
}

/// Distance from `p` to segment `s`, and the (clamped) parameter of the foot point.
pub fn point_segment_distance(p: Point2, s: &Segment2) -> (f64, f64) {
    let d = s.delta();
    let t = ((p - s.a).dot(d) / d.norm_sq()).clamp(0.0, 1.0);
    (p.dist(s.at(t)), t)
}

/// A closed parameter interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Within-tolerance disk membership test used for every corner classification.
pub fn within_radius(center: Point2, p: Point2, radius: f64, tol: Tolerance) -> bool {
    center.dist(p) <= radius + tol.eps
}

/// Parameters `s ∈ [0,1]` with `‖seg(s) − center‖ ≤ radius`.
///
/// The disk is convex, so the set is empty or a single closed interval. An
/// endpoint that lies in the disk (within `tol`) pins the interval bound to
/// exactly 0 or 1, which keeps interval bounds and corner membership
/// consistent for the callers that classify critical points. A touch within
/// `tol` yields a degenerate interval at the foot point.
pub fn free_interval(center: Point2, radius: f64, s: &Segment2, tol: Tolerance) -> Option<Interval> {
    let (dist, foot) = point_segment_distance(center, s);
    if dist > radius + tol.eps {
        return None;
    }
    let a_free = within_radius(center, s.a, radius, tol);
    let b_free = within_radius(center, s.b, radius, tol);
    if a_free && b_free {
        return Some(Interval::new(0.0, 1.0));
    }
    let d = s.delta();
    let f = s.a - center;
    let roots = solve_quadratic(d.norm_sq(), 2.0 * d.dot(f), f.norm_sq() - radius * radius, tol).unwrap_or_default();
    let (r_lo, r_hi) = match roots.as_slice() {
        [lo, hi] => (lo.value, hi.value),
        _ => (foot, foot),
    };
    let mut lo = if a_free { 0.0 } else { r_lo.clamp(0.0, 1.0) };
    let mut hi = if b_free { 1.0 } else { r_hi.clamp(0.0, 1.0) };
    lo = lo.min(foot);
    hi = hi.max(foot);
    if !a_free && lo <= 0.0 {
        lo = foot.min(hi);
    }
    if !b_free && hi >= 1.0 {
        hi = foot.max(lo);
    }
    Some(Interval::new(lo, hi))
}

/// Intersection points of two circles of equal `radius`.
///
/// The first returned point lies to the left of the directed line `c1 → c2`.
/// A tangency within `tol` returns the single midpoint.
pub fn circle_circle_intersections(c1: Point2, c2: Point2, radius: f64, tol: Tolerance) -> Result<Vec<Point2>> {
    if c1 == c2 {
        return Err(Error::DegenerateInput("coincident circle centers".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("circle radius must be positive".into()));
    }
    let axis = c2 - c1;
    let d = axis.norm();
    let half = 0.5 * d;
    if half > radius + tol.eps {
        return Ok(Vec::new());
    }
    let mid = c1.lerp(c2, 0.5);
    let h2 = radius * radius - half * half;
    if (radius - half).abs() <= tol.eps || h2 <= 0.0 {
        return Ok(vec![mid]);
    }
    let offset = axis.perp() * (h2.sqrt() / d);
    Ok(vec![mid + offset, mid - offset])
}

/// Parameters along `s` (within `[0, 1]`) where it meets the circle.
pub fn circle_segment_intersections(center: Point2, radius: f64, s: &Segment2, tol: Tolerance) -> Vec<f64> {
    let d = s.delta();
    let f = s.a - center;
    let slack = tol.eps / d.norm();
    solve_quadratic(d.norm_sq(), 2.0 * d.dot(f), f.norm_sq() - radius * radius, tol)
        .unwrap_or_default()
        .into_iter()
        .map(|r| r.value)
        .filter(|&t| t >= -slack && t <= 1.0 + slack)
        .map(|t| t.clamp(0.0, 1.0))
        .collect()
}

/// Intersection of two closed segments, as parameter pairs `(s on p, t on q)`.
///
/// Proper crossings yield one pair; collinear overlaps yield the pairs at both
/// ends of the shared piece.
pub fn segment_intersections(p: &Segment2, q: &Segment2, tol: Tolerance) -> Vec<(f64, f64)> {
    let r = p.delta();
    let s = q.delta();
    let qp = q.a - p.a;
    let denom = r.cross(s);
    let scale = r.norm() * s.norm();
    if denom.abs() > 1e-12 * scale {
        let t_p = qp.cross(s) / denom;
        let t_q = qp.cross(r) / denom;
        let sp = tol.eps / r.norm();
        let sq = tol.eps / s.norm();
        if t_p >= -sp && t_p <= 1.0 + sp && t_q >= -sq && t_q <= 1.0 + sq {
            return vec![(t_p.clamp(0.0, 1.0), t_q.clamp(0.0, 1.0))];
        }
        return Vec::new();
    }
    // Parallel: only collinear overlaps matter.
    if qp.cross(r).abs() > tol.eps * r.norm() {
        return Vec::new();
    }
    let rr = r.norm_sq();
    let t0 = qp.dot(r) / rr;
    let t1 = (q.b - p.a).dot(r) / rr;
    let (lo, hi) = (t0.min(t1).max(0.0), t0.max(t1).min(1.0));
    if lo > hi {
        return Vec::new();
    }
    let param_on_q = |tp: f64| {
        let pt = p.at(tp);
        ((pt - q.a).dot(s) / s.norm_sq()).clamp(0.0, 1.0)
    };
    let mut out = vec![(lo, param_on_q(lo))];
    if hi > lo {
        out.push((hi, param_on_q(hi)));
    }
    out
}
