//! Planar primitives shared by every other module: points, rigid motions,
//! segments, circles and the handful of predicates built on them.
//!
//! All predicates take an explicit absolute tolerance `tol`; the crate-wide
//! default is [`DEFAULT_TOLERANCE`].

use std::f64::consts::{FRAC_PI_2, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("distance mismatch: expected {expected}, found {actual}")]
    DistanceMismatch { expected: f64, actual: f64 },
    #[error("infeasible side lengths ({0}, {1}, {2}): triangle inequality fails")]
    Infeasible(f64, f64, f64),
    #[error("degenerate segment: endpoints coincide")]
    DegenerateSegment,
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// A direction of length one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct UnitVector {
    dx: f64,
    dy: f64,
}

impl UnitVector {
    pub const X: UnitVector = UnitVector { dx: 1.0, dy: 0.0 };
    pub const Y: UnitVector = UnitVector { dx: 0.0, dy: 1.0 };

    /// Accepts `(dx, dy)` only if it already has unit length within `tol`.
    pub fn new(dx: f64, dy: f64, tol: f64) -> Result<Self, GeomError> {
        let n = dx.hypot(dy);
        if !n.is_finite() || (n - 1.0).abs() > tol {
            return Err(GeomError::Invalid {
                what: "unit vector",
                detail: format!("({dx}, {dy}) has length {n}"),
            });
        }
        Ok(UnitVector { dx, dy })
    }

    /// Rescales any non-zero finite vector to unit length.
    pub fn normalize(v: Point) -> Result<Self, GeomError> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(UnitVector { dx: v.x / n, dy: v.y / n })
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitVector { dx: theta.cos(), dy: theta.sin() }
    }

    pub fn dx(self) -> f64 {
        self.dx
    }

    pub fn dy(self) -> f64 {
        self.dy
    }

    pub fn as_point(self) -> Point {
        Point::new(self.dx, self.dy)
    }

    pub fn perp(self) -> UnitVector {
        UnitVector { dx: -self.dy, dy: self.dx }
    }
}

impl TryFrom<[f64; 2]> for UnitVector {
    type Error = GeomError;
    fn try_from(a: [f64; 2]) -> Result<Self, GeomError> {
        UnitVector::new(a[0], a[1], DEFAULT_TOLERANCE)
    }
}

impl From<UnitVector> for [f64; 2] {
    fn from(u: UnitVector) -> Self {
        [u.dx, u.dy]
    }
}

/// Rotation about the origin followed by a translation. No reflections.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    angle: f64,
    translation: Point,
}

impl RigidMotion {
    pub const IDENTITY: RigidMotion = RigidMotion { angle: 0.0, translation: Point::ORIGIN };

    /// `angle` is reduced into `[0, 2π)`.
    pub fn new(angle: f64, translation: Point) -> Self {
        let mut a = angle.rem_euclid(TAU);
        if a >= TAU {
            a = 0.0;
        }
        RigidMotion { angle: a, translation }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn translation(&self) -> Point {
        self.translation
    }

    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.angle.sin_cos();
        Point::new(c * p.x - s * p.y + self.translation.x, s * p.x + c * p.y + self.translation.y)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidMotion) -> RigidMotion {
        let t = self.apply(other.translation);
        RigidMotion::new(self.angle + other.angle, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub p: Point,
    pub q: Point,
    /// Set when `p → q` is the boundary orientation (white face on the left).
    pub oriented: bool,
}

impl Segment {
    pub fn new(p: Point, q: Point, tol: f64) -> Result<Self, GeomError> {
        if p.dist(q) <= tol {
            return Err(GeomError::DegenerateSegment);
        }
        Ok(Segment { p, q, oriented: false })
    }

    pub fn oriented(p: Point, q: Point) -> Self {
        Segment { p, q, oriented: true }
    }

    pub fn direction(&self) -> Point {
        self.q - self.p
    }

    pub fn length(&self) -> f64 {
        self.p.dist(self.q)
    }

    pub fn reversed(&self) -> Segment {
        Segment { p: self.q, q: self.p, oriented: self.oriented }
    }

    pub fn midpoint(&self) -> Point {
        self.p.lerp(self.q, 0.5)
    }

    pub fn closest_point(&self, x: Point) -> Point {
        let d = self.direction();
        let l2 = d.norm_sq();
        if l2 == 0.0 {
            return self.p;
        }
        let t = ((x - self.p).dot(d) / l2).clamp(0.0, 1.0);
        self.p + d * t
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        self.closest_point(x).dist(x)
    }

    /// Clips to a closed rectangle (Liang–Barsky). Returns `None` when the
    /// clipped piece is shorter than `tol`.
    pub fn clip(&self, window: &Region, tol: f64) -> Option<Segment> {
        let (t0, t1) = clip_param_range(self.p, self.direction(), 0.0, 1.0, window)?;
        let p = self.p.lerp(self.q, t0);
        let q = self.p.lerp(self.q, t1);
        if p.dist(q) <= tol {
            return None;
        }
        Some(Segment { p, q, oriented: self.oriented })
    }
}

/// Liang–Barsky clip of the parametric line `origin + t·dir`, `t ∈ [t0, t1]`
/// (either bound may be infinite) against a closed rectangle.
pub fn clip_param_range(origin: Point, dir: Point, t0: f64, t1: f64, window: &Region) -> Option<(f64, f64)> {
    let mut lo = t0;
    let mut hi = t1;
    let checks = [
        (-dir.x, origin.x - window.x0),
        (dir.x, window.x1 - origin.x),
        (-dir.y, origin.y - window.y0),
        (dir.y, window.y1 - origin.y),
    ];
    for (p, q) in checks {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                lo = lo.max(r);
            } else {
                hi = hi.min(r);
            }
        }
    }
    if lo > hi || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self, GeomError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(GeomError::Invalid { what: "circle", detail: format!("radius {radius}") });
        }
        Ok(Circle { center, radius })
    }

    pub fn unit(center: Point) -> Self {
        Circle { center, radius: 1.0 }
    }
}

/// Closed axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self, GeomError> {
        let ok = [x0, y0, x1, y1].iter().all(|v| v.is_finite()) && x0 < x1 && y0 < y1;
        if !ok {
            return Err(GeomError::Invalid {
                what: "region",
                detail: format!("[{x0}, {x1}] x [{y0}, {y1}]"),
            });
        }
        Ok(Region { x0, y0, x1, y1 })
    }

    /// The square `Q(a)` with corners `(±a, ±a)`.
    pub fn centered_square(a: f64) -> Self {
        Region { x0: -a, y0: -a, x1: a, y1: a }
    }

    pub fn around(center: Point, half_width: f64) -> Self {
        Region {
            x0: center.x - half_width,
            y0: center.y - half_width,
            x1: center.x + half_width,
            y1: center.y + half_width,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ]
    }

    pub fn expanded(&self, d: f64) -> Region {
        Region { x0: self.x0 - d, y0: self.y0 - d, x1: self.x1 + d, y1: self.y1 + d }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Ccw,
    Cw,
}

/// Side lengths `(a, b, c)` of a sought congruence class, listed
/// anticlockwise. Collinear (degenerate) triples are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangleSpec {
    a: f64,
    b: f64,
    c: f64,
}

impl TriangleSpec {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GeomError> {
        Self::with_tolerance(a, b, c, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(a: f64, b: f64, c: f64, tol: f64) -> Result<Self, GeomError> {
        let positive = [a, b, c].iter().all(|v| v.is_finite() && *v > 0.0);
        if !positive || a > b + c + tol || b > a + c + tol || c > a + b + tol {
            return Err(GeomError::Infeasible(a, b, c));
        }
        Ok(TriangleSpec { a, b, c })
    }

    pub fn equilateral(a: f64) -> Result<Self, GeomError> {
        Self::new(a, a, a)
    }

    pub fn sides(&self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn scaled(&self, s: f64) -> Result<Self, GeomError> {
        Self::new(self.a * s, self.b * s, self.c * s)
    }

    /// The `(b, a, c)` spec.
    pub fn swapped(&self) -> Self {
        TriangleSpec { a: self.b, b: self.a, c: self.c }
    }

    /// First vertex at the origin, second on the positive x-axis, third in
    /// the closed upper half-plane.
    pub fn canonical_vertices(&self) -> [Point; 3] {
        let p0 = Point::ORIGIN;
        let p1 = Point::new(self.a, 0.0);
        let x = (self.a * self.a + self.c * self.c - self.b * self.b) / (2.0 * self.a);
        let h = (self.c * self.c - x * x).max(0.0).sqrt();
        [p0, p1, Point::new(x, h)]
    }
}

impl TryFrom<[f64; 3]> for TriangleSpec {
    type Error = GeomError;
    fn try_from(s: [f64; 3]) -> Result<Self, GeomError> {
        TriangleSpec::new(s[0], s[1], s[2])
    }
}

impl From<TriangleSpec> for [f64; 3] {
    fn from(t: TriangleSpec) -> Self {
        t.sides()
    }
}

pub fn rotate_about(p: Point, center: Point, angle: f64) -> Point {
    let (s, c) = angle.sin_cos();
    let d = p - center;
    Point::new(center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y)
}

/// Point `C` with `|CA| = apex_dist_a`, `|CB| = apex_dist_b`, on the side of
/// `AB` selected by `orientation`. A tight triangle inequality yields a
/// collinear `C`.
pub fn third_vertex(
    a: Point,
    b: Point,
    side: f64,
    apex_dist_a: f64,
    apex_dist_b: f64,
    orientation: Orientation,
    tol: f64,
) -> Result<Point, GeomError> {
    let ab = a.dist(b);
    if (ab - side).abs() > tol {
        return Err(GeomError::DistanceMismatch { expected: side, actual: ab });
    }
    if ab <= tol {
        return Err(GeomError::DegenerateSegment);
    }
    let (da, db) = (apex_dist_a, apex_dist_b);
    if !(da >= 0.0 && db >= 0.0) || da > ab + db + tol || db > ab + da + tol || ab > da + db + tol {
        return Err(GeomError::Infeasible(side, apex_dist_a, apex_dist_b));
    }
    let u = (b - a) * (1.0 / ab);
    let x = (ab * ab + da * da - db * db) / (2.0 * ab);
    let h = (da * da - x * x).max(0.0).sqrt();
    let n = u.perp();
    let h = match orientation {
        Orientation::Ccw => h,
        Orientation::Cw => -h,
    };
    Ok(a + u * x + n * h)
}

/// Places `spec` in canonical position and applies `motion`.
pub fn place_triangle(spec: &TriangleSpec, motion: &RigidMotion) -> [Point; 3] {
    spec.canonical_vertices().map(|p| motion.apply(p))
}

/// Signed area test: positive when `a, b, c` turn counter-clockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleHit {
    pub point: Point,
    /// Index into the chain passed to [`circle_polyline_intersections`].
    pub segment: usize,
    pub tangent: bool,
}

/// Every point of `chain` at distance `c.radius` from `c.center` (within
/// `tol`). Hits closer than `tol` to an earlier hit are merged; a tangential
/// contact is reported once and flagged.
pub fn circle_polyline_intersections(c: &Circle, chain: &[Segment], tol: f64) -> Vec<CircleHit> {
    let mut hits: Vec<CircleHit> = Vec::new();
    let mut push = |hit: CircleHit| {
        if !hits.iter().any(|h| h.point.dist(hit.point) <= tol) {
            hits.push(hit);
        }
    };
    for (idx, seg) in chain.iter().enumerate() {
        let d = seg.direction();
        let len2 = d.norm_sq();
        if len2 == 0.0 {
            continue;
        }
        let len = len2.sqrt();
        let f = seg.p - c.center;
        let t_foot = -f.dot(d) / len2;
        let foot = seg.p + d * t_foot;
        let dmin = foot.dist(c.center);
        let slack = tol / len;
        let in_range = |t: f64| t >= -slack && t <= 1.0 + slack;
        if (dmin - c.radius).abs() <= tol {
            if in_range(t_foot) {
                push(CircleHit { point: foot, segment: idx, tangent: true });
            }
            continue;
        }
        if dmin > c.radius {
            continue;
        }
        let half_chord = (c.radius * c.radius - dmin * dmin).sqrt() / len;
        for t in [t_foot - half_chord, t_foot + half_chord] {
            if in_range(t) {
                let t = t.clamp(0.0, 1.0);
                push(CircleHit { point: seg.p + d * t, segment: idx, tangent: false });
            }
        }
    }
    hits
}

/// Acute angle in `[0, π/2]` between the line through `a, b` and `direction`.
/// Exactly symmetric in `a` and `b`.
pub fn acute_angle_with(direction: UnitVector, a: Point, b: Point, tol: f64) -> Result<f64, GeomError> {
    let d = b - a;
    if d.norm() <= tol {
        return Err(GeomError::DegenerateSegment);
    }
    let u = direction.as_point();
    let theta = u.cross(d).abs().atan2(u.dot(d).abs());
    Ok(theta.min(FRAC_PI_2))
}
