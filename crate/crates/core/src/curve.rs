//! Polygonal curves, their text file format, translation, and seeded random
//! instance generation.
//!
//! File format: the first non-comment line holds the vertex count `n`, followed
//! by `n` lines of `x y`. Lines starting with `#` are ignored.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Direction2, Point2, Segment2};

/// An ordered list of at least two vertices with no consecutive duplicates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    vertices: Vec<Point2>,
}

/// A translation vector `(tx, ty)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Translation2 {
    pub tx: f64,
    pub ty: f64,
}

impl Translation2 {
    pub const fn new(tx: f64, ty: f64) -> Self {
        Translation2 { tx, ty }
    }

    /// The translation `λ·v`.
    pub fn along(dir: Direction2, lambda: f64) -> Self {
        Translation2::new(lambda * dir.dx(), lambda * dir.dy())
    }

    pub fn as_vector(self) -> Point2 {
        Point2::new(self.tx, self.ty)
    }

    pub fn from_vector(p: Point2) -> Self {
        Translation2::new(p.x, p.y)
    }
}

impl std::ops::Neg for Translation2 {
    type Output = Translation2;
    fn neg(self) -> Translation2 {
        Translation2::new(-self.tx, -self.ty)
    }
}

impl std::ops::Add for Translation2 {
    type Output = Translation2;
    fn add(self, o: Translation2) -> Translation2 {
        Translation2::new(self.tx + o.tx, self.ty + o.ty)
    }
}

/// Result of parsing a curve file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCurve {
    pub curve: Curve,
    /// Number of consecutive duplicate vertices that were dropped.
    pub collapsed_duplicates: usize,
}

/// Axis-aligned box used for random generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    pub fn new(min: Point2, max: Point2) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min.x > max.x || min.y > max.y {
            return Err(Error::InvalidArgument("bounding box corners out of order".into()));
        }
        Ok(BBox { min, max })
    }

    pub fn unit() -> Self {
        BBox {
            min: Point2::new(0.0, 0.0),
            max: Point2::new(1.0, 1.0),
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn diameter(&self) -> f64 {
        self.min.dist(self.max)
    }
}

impl Curve {
    /// Builds a curve, collapsing consecutive duplicate vertices.
    ///
    /// Returns the curve and the number of vertices that were dropped.
    pub fn from_points(points: Vec<Point2>) -> Result<(Self, usize)> {
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite vertex ({}, {})", p.x, p.y)));
        }
        let before = points.len();
        let mut vertices: Vec<Point2> = Vec::with_capacity(before);
        for p in points {
            if vertices.last() != Some(&p) {
                vertices.push(p);
            }
        }
        let collapsed = before - vertices.len();
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a curve needs n >= 2 distinct consecutive vertices, got {}",
                vertices.len()
            )));
        }
        Ok((Curve { vertices }, collapsed))
    }

    /// Builds a curve that must already be normalized.
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        let (c, collapsed) = Curve::from_points(points)?;
        if collapsed > 0 {
            return Err(Error::InvalidArgument("consecutive duplicate vertices".into()));
        }
        Ok(c)
    }

    /// Convenience constructor from coordinate pairs; panics on invalid input.
    pub fn from_xy(coords: &[(f64, f64)]) -> Self {
        Curve::new(coords.iter().map(|&(x, y)| Point2::new(x, y)).collect()).expect("valid curve")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point2 {
        self.vertices[i]
    }

    pub fn first(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn last(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    /// Number of edges, `n - 1`.
    pub fn edge_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn edge(&self, w: usize) -> Segment2 {
        Segment2::new_unchecked(self.vertices[w], self.vertices[w + 1])
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment2> + '_ {
        self.vertices.windows(2).map(|w| Segment2::new_unchecked(w[0], w[1]))
    }

    pub fn translate(&self, t: Translation2) -> Curve {
        Curve {
            vertices: self
                .vertices
                .iter()
                .map(|p| Point2::new(p.x + t.tx, p.y + t.ty))
                .collect(),
        }
    }

    /// Tight bounding box of the vertices.
    pub fn bbox(&self) -> BBox {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for p in &self.vertices[1..] {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BBox { min, max }
    }

    pub fn total_length(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    /// Point at global parameter `x ∈ [0, n-1]`.
    pub fn point_at(&self, x: f64) -> Point2 {
        let last = self.edge_count();
        let w = (x.floor().max(0.0) as usize).min(last - 1);
        self.edge(w).at((x - w as f64).clamp(0.0, 1.0))
    }

    /// Serializes in the curve file format. Coordinates use the shortest
    /// decimal representation that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.vertices.len());
        for p in &self.vertices {
            let _ = writeln!(out, "{:?} {:?}", p.x, p.y);
        }
        out
    }
}

/// Parses the curve file format.
pub fn parse_curve(text: &str) -> Result<ParsedCurve> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: header_line,
        message: format!("vertex count {header:?} is not a non-negative integer"),
    })?;

    let mut points = Vec::with_capacity(n);
    let mut last_line = header_line;
    for (line, content) in lines {
        last_line = line;
        if points.len() == n {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {n} vertices"),
            });
        }
        let mut fields = content.split_whitespace();
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line,
                message: format!("expected \"x y\", got {content:?}"),
            });
        };
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("{s:?} is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("{s:?} is not finite"),
                });
            }
            Ok(v)
        };
        points.push(Point2::new(parse(xs)?, parse(ys)?));
    }
    if points.len() != n {
        return Err(Error::Parse {
            line: last_line,
            message: format!("declared {n} vertices, found {}", points.len()),
        });
    }
    let (curve, collapsed_duplicates) = Curve::from_points(points).map_err(|e| Error::Parse {
        line: last_line,
        message: match e {
            Error::InvalidArgument(_) => "n < 2 after collapsing duplicates".into(),
            other => other.to_string(),
        },
    })?;
    Ok(ParsedCurve {
        curve,
        collapsed_duplicates,
    })
}

/// Deterministic random curve with `n` vertices drawn uniformly from `bbox`.
pub fn random_curve(seed: u64, n: usize, bbox: BBox) -> Result<Curve> {
    if n < 2 {
        return Err(Error::InvalidArgument("random_curve needs n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_curve_with(&mut rng, n, bbox)
}

/// Like [`random_curve`] but draws from a caller-owned generator.
pub fn random_curve_with<R: Rng>(rng: &mut R, n: usize, bbox: BBox) -> Result<Curve> {
    if n < 2 {
        return Err(Error::InvalidArgument("random_curve needs n >= 2".into()));
    }
    let sample = |rng: &mut R| {
        Point2::new(
            sample_range(rng, bbox.min.x, bbox.max.x),
            sample_range(rng, bbox.min.y, bbox.max.y),
        )
    };
    let mut pts: Vec<Point2> = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while pts.len() < n {
        let p = sample(rng);
        attempts += 1;
        if pts.last() == Some(&p) {
            if attempts > 1000 * n {
                return Err(Error::InvalidArgument(
                    "bounding box too small to sample distinct vertices".into(),
                ));
            }
            continue;
        }
        pts.push(p);
    }
    Curve::new(pts)
}

fn sample_range<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_curve() {
        let p = parse_curve("2\n0 0\n2 0\n").unwrap();
        assert_eq!(p.curve, Curve::from_xy(&[(0.0, 0.0), (2.0, 0.0)]));
        assert_eq!(p.collapsed_duplicates, 0);
    }

    #[test]
    fn collapses_duplicates() {
        let p = parse_curve("3\n0 0\n0 0\n1 1\n").unwrap();
        assert_eq!(p.curve, Curve::from_xy(&[(0.0, 0.0), (1.0, 1.0)]));
        assert_eq!(p.collapsed_duplicates, 1);
    }

    #[test]
    fn rejects_single_vertex() {
        let err = parse_curve("1\n0 0\n").unwrap_err();
        assert!(
            matches!(err, Error::Parse { ref message, .. } if message.contains("n < 2")),
            "{err}"
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse_curve("2\n0 0\n1\n"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(
            parse_curve("2\n0 0\n1 x\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_curve("3\n0 0\n1 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_curve("2\n0 0\n1 1\n2 2\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(parse_curve("two\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_curve(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn skips_comments() {
        let p = parse_curve("# header\n2\n# a vertex\n0 0\n1.5 -2\n").unwrap();
        assert_eq!(p.curve.vertex(1), Point2::new(1.5, -2.0));
    }

    #[test]
    fn translate_examples() {
        let c = Curve::from_xy(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(c.translate(Translation2::new(0.0, 0.0)), c);
        assert_eq!(
            c.translate(Translation2::new(-5.0, -5.0)),
            Curve::from_xy(&[(-5.0, -5.0), (-4.0, -5.0)])
        );
        let t = Translation2::new(0.25, -8.0);
        assert_eq!(c.translate(t).translate(-t), c);
    }

    #[test]
    fn random_curve_examples() {
        let a = random_curve(7, 5, BBox::unit()).unwrap();
        let b = random_curve(7, 5, BBox::unit()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(a.vertices().iter().all(|&p| BBox::unit().contains(p)));
        assert_ne!(a, random_curve(8, 5, BBox::unit()).unwrap());
    }

    fn coord() -> impl Strategy<Value = f64> {
        prop_oneof![-1e6..1e6f64, any::<i32>().prop_map(f64::from), -1.0..1.0f64]
    }

    proptest! {
        #[test]
        fn text_round_trip_is_bit_exact(pts in prop::collection::vec((coord(), coord()), 2..12)) {
            let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
            if let Ok((c, _)) = Curve::from_points(pts) {
                let back = parse_curve(&c.to_text()).unwrap();
                prop_assert_eq!(back.collapsed_duplicates, 0);
                for (p, q) in c.vertices().iter().zip(back.curve.vertices()) {
                    prop_assert_eq!(p.x.to_bits(), q.x.to_bits());
                    prop_assert_eq!(p.y.to_bits(), q.y.to_bits());
                }
            }
        }

        #[test]
        fn translate_preserves_shape(seed in any::<u64>(), tx in -100.0..100.0f64, ty in -100.0..100.0f64) {
            let c = random_curve(seed, 6, BBox::unit()).unwrap();
            let t = c.translate(Translation2::new(tx, ty));
            prop_assert_eq!(t.len(), c.len());
            for i in 0..c.len() {
                for j in 0..c.len() {
                    let d0 = c.vertex(i).dist(c.vertex(j));
                    let d1 = t.vertex(i).dist(t.vertex(j));
                    prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + tx.abs() + ty.abs()));
                }
            }
        }
    }
}
