use serde::{Deserialize, Serialize};

use super::{Color, ColoringError, PlaneColoring};
use crate::geom::{clip_param_range, Point, Region, Segment, DEFAULT_TOLERANCE};

/// A boundary piece through `p` and `q`. An unbounded flag on an endpoint
/// extends the piece past that endpoint to infinity, so a piece is a segment,
/// a ray, or a full line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolySegment {
    pub p: Point,
    pub q: Point,
    #[serde(default, skip_serializing_if = "is_false")]
    pub p_unbounded: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub q_unbounded: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl PolySegment {
    pub fn segment(p: Point, q: Point) -> Self {
        PolySegment { p, q, p_unbounded: false, q_unbounded: false }
    }

    /// Ray from `origin` through `through`.
    pub fn ray(origin: Point, through: Point) -> Self {
        PolySegment { p: origin, q: through, p_unbounded: false, q_unbounded: true }
    }

    pub fn line(p: Point, q: Point) -> Self {
        PolySegment { p, q, p_unbounded: true, q_unbounded: true }
    }

    fn dir(&self) -> Point {
        self.q - self.p
    }

    /// Parameter range along `p + t(q − p)`.
    fn range(&self) -> (f64, f64) {
        (
            if self.p_unbounded { f64::NEG_INFINITY } else { 0.0 },
            if self.q_unbounded { f64::INFINITY } else { 1.0 },
        )
    }

    fn finite_ends(&self) -> impl Iterator<Item = Point> {
        let p = (!self.p_unbounded).then_some(self.p);
        let q = (!self.q_unbounded).then_some(self.q);
        p.into_iter().chain(q)
    }

    fn closest_param(&self, x: Point) -> f64 {
        let d = self.dir();
        let (t0, t1) = self.range();
        ((x - self.p).dot(d) / d.norm_sq()).clamp(t0, t1)
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        let t = self.closest_param(x);
        (self.p + self.dir() * t).dist(x)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub point: Point,
    pub color: Color,
}

/// A coloring given by its boundary pieces, one seed point per face and an
/// explicit color for every boundary piece. Face colors are resolved by
/// crossing parity along a path from a seed.
#[derive(Clone, Debug, PartialEq)]
pub struct PolygonalColoring {
    segments: Vec<PolySegment>,
    seeds: Vec<Seed>,
    boundary_colors: Vec<Color>,
    tol: f64,
}

enum Crossings {
    Count(usize),
    Ambiguous,
}

impl PolygonalColoring {
    pub fn new(segments: Vec<PolySegment>, seeds: Vec<Seed>, boundary_colors: Vec<Color>) -> Result<Self, ColoringError> {
        Self::with_tolerance_checked(segments, seeds, boundary_colors, DEFAULT_TOLERANCE)
    }

    fn with_tolerance_checked(
        segments: Vec<PolySegment>,
        seeds: Vec<Seed>,
        boundary_colors: Vec<Color>,
        tol: f64,
    ) -> Result<Self, ColoringError> {
        let bad = |m: String| Err(ColoringError::InvalidPolygonal(m));
        if seeds.is_empty() {
            return bad("at least one seed is required".into());
        }
        if boundary_colors.len() != segments.len() {
            return bad(format!("{} boundary colors for {} segments", boundary_colors.len(), segments.len()));
        }
        for (k, s) in segments.iter().enumerate() {
            if !(s.p.is_finite() && s.q.is_finite()) {
                return bad(format!("segment {k} has a non-finite coordinate"));
            }
            if s.p.dist(s.q) <= tol {
                return bad(format!("segment {k} has coincident endpoints"));
            }
        }
        for i in 0..segments.len() {
            for j in (i + 1)..segments.len() {
                if let Some(x) = improper_meeting(&segments[i], &segments[j], tol) {
                    return bad(format!("segments {i} and {j} meet at {x}, which is not a shared endpoint"));
                }
            }
        }
        let pc = PolygonalColoring { segments, seeds, boundary_colors, tol };
        for (k, s) in pc.seeds.iter().enumerate() {
            if !s.point.is_finite() || pc.boundary_distance(s.point) <= tol {
                return bad(format!("seed {k} at {} lies on the boundary", s.point));
            }
        }
        Ok(pc)
    }

    /// One color everywhere.
    pub fn uniform(color: Color) -> Self {
        PolygonalColoring {
            segments: Vec::new(),
            seeds: vec![Seed { point: Point::ORIGIN, color }],
            boundary_colors: Vec::new(),
            tol: DEFAULT_TOLERANCE,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn segments(&self) -> &[PolySegment] {
        &self.segments
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn boundary_colors(&self) -> &[Color] {
        &self.boundary_colors
    }

    /// Color of `p`, or `UnresolvedFace` when every tried path from a seed
    /// passes through a boundary vertex or runs along a piece.
    pub fn color_at(&self, p: Point) -> Result<Color, ColoringError> {
        let mut nearest: Option<(f64, usize)> = None;
        for (k, s) in self.segments.iter().enumerate() {
            let d = s.distance_to(p);
            if d <= self.tol && nearest.is_none_or(|(best, _)| d < best) {
                nearest = Some((d, k));
            }
        }
        if let Some((_, k)) = nearest {
            return Ok(self.boundary_colors[k]);
        }
        let mut order: Vec<&Seed> = self.seeds.iter().collect();
        order.sort_by(|a, b| a.point.dist(p).total_cmp(&b.point.dist(p)));
        for seed in &order {
            if let Crossings::Count(n) = self.crossings(seed.point, p) {
                return Ok(flip_if_odd(seed.color, n));
            }
        }
        for seed in &order {
            let mid = seed.point.lerp(p, 0.5);
            let span = seed.point.dist(p).max(1e-6);
            let normal = (p - seed.point).perp() * (1.0 / span);
            for k in 1..=16 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let w = mid + normal * (sign * span * 0.037 * k as f64);
                if self.boundary_distance(w) <= self.tol {
                    continue;
                }
                if let (Crossings::Count(a), Crossings::Count(b)) = (self.crossings(seed.point, w), self.crossings(w, p)) {
                    return Ok(flip_if_odd(seed.color, a + b));
                }
            }
        }
        Err(ColoringError::UnresolvedFace(p))
    }

    /// Number of pieces the open path `a → b` crosses transversally.
    fn crossings(&self, a: Point, b: Point) -> Crossings {
        let path = Segment { p: a, q: b, oriented: false };
        let d = b - a;
        let mut n = 0;
        for s in &self.segments {
            if s.finite_ends().any(|v| path.distance_to(v) <= self.tol) {
                return Crossings::Ambiguous;
            }
            let e = s.dir();
            let den = d.cross(e);
            let w = s.p - a;
            if den.abs() <= 1e-15 * d.norm() * e.norm() {
                let off = w.cross(d).abs() / d.norm();
                if off <= self.tol {
                    let (t0, t1) = s.range();
                    let ua = (a - s.p).dot(e) / e.norm_sq();
                    let ub = (b - s.p).dot(e) / e.norm_sq();
                    if ua.max(ub) >= t0 && ua.min(ub) <= t1 {
                        return Crossings::Ambiguous;
                    }
                }
                continue;
            }
            let u = w.cross(e) / den;
            let t = w.cross(d) / den;
            let (t0, t1) = s.range();
            if u > 0.0 && u < 1.0 && t > t0 && t < t1 {
                n += 1;
            }
        }
        Crossings::Count(n)
    }

    fn probe_offset(&self) -> f64 {
        (100.0 * self.tol).max(1e-7)
    }
}

fn flip_if_odd(c: Color, n: usize) -> Color {
    if n % 2 == 1 {
        c.flip()
    } else {
        c
    }
}

/// A point where two pieces meet other than at an endpoint shared by both.
fn improper_meeting(s: &PolySegment, r: &PolySegment, tol: f64) -> Option<Point> {
    let shared = |x: Point| s.finite_ends().any(|v| v.dist(x) <= tol) && r.finite_ends().any(|v| v.dist(x) <= tol);
    let d = s.dir();
    let e = r.dir();
    let den = d.cross(e);
    let w = r.p - s.p;
    if den.abs() <= 1e-12 * d.norm() * e.norm() {
        if w.cross(d).abs() / d.norm() > tol {
            return None;
        }
        let (s0, s1) = s.range();
        let a = (r.p - s.p).dot(d) / d.norm_sq();
        let b = (r.q - s.p).dot(d) / d.norm_sq();
        let (u0, u1) = r.range();
        let (x0, x1) = (a + (b - a) * u0, a + (b - a) * u1);
        let lo = s0.max(x0.min(x1));
        let hi = s1.min(x0.max(x1));
        if hi < lo - tol / d.norm() {
            return None;
        }
        if (hi - lo) * d.norm() > tol {
            return Some(s.p + d * if lo.is_finite() { lo } else { hi });
        }
        let x = s.p + d * lo;
        if !shared(x) {
            return Some(x);
        }
        return None;
    }
    let t = w.cross(e) / den;
    let u = w.cross(d) / den;
    let (s0, s1) = s.range();
    let (r0, r1) = r.range();
    let slack_s = tol / d.norm();
    let slack_r = tol / e.norm();
    if t < s0 - slack_s || t > s1 + slack_s || u < r0 - slack_r || u > r1 + slack_r {
        return None;
    }
    let x = s.p + d * t;
    if shared(x) {
        None
    } else {
        Some(x)
    }
}

impl PlaneColoring for PolygonalColoring {
    /// Panics if the face of `p` cannot be resolved from any seed; this needs
    /// every straight and detoured path to hit a boundary vertex exactly.
    fn color(&self, p: Point) -> Color {
        self.color_at(p).unwrap_or_else(|e| panic!("{e}"))
    }

    fn is_on_boundary(&self, p: Point) -> bool {
        self.boundary_distance(p) <= self.tol
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        self.segments.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    fn boundary_segments(&self, window: &Region) -> Vec<Segment> {
        let delta = self.probe_offset();
        let mut out = Vec::new();
        for s in &self.segments {
            let (t0, t1) = s.range();
            let Some((a, b)) = clip_param_range(s.p, s.dir(), t0, t1, window) else { continue };
            let seg = Segment::oriented(s.p + s.dir() * a, s.p + s.dir() * b);
            if seg.length() <= self.tol {
                continue;
            }
            let left = seg.midpoint() + seg.direction().perp() * (delta / seg.length());
            match self.color_at(left) {
                Ok(Color::Black) => out.push(seg.reversed()),
                _ => out.push(seg),
            }
        }
        out
    }

    fn boundary_vertices(&self, window: &Region) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for v in self.segments.iter().flat_map(|s| s.finite_ends()) {
            if window.contains(v) && !out.iter().any(|w| w.dist(v) <= self.tol) {
                out.push(v);
            }
        }
        out
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}
