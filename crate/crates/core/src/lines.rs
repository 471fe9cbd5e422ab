//! Unit equilateral triangles with one vertex on each of three lines.

use std::f64::consts::{FRAC_PI_3, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{Orientation, Point, RigidMotion};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinesError {
    #[error("all three lines are parallel")]
    AllParallel,
    #[error("invalid line `{0}`: expected `a,b` for y = ax + b or `vertical:k` for x = k")]
    InvalidLine(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum Line {
    /// `y = a·x + b`.
    Sloped { a: f64, b: f64 },
    /// `x = k`.
    Vertical { k: f64 },
}

impl Line {
    pub fn sloped(a: f64, b: f64) -> Line {
        Line::Sloped { a, b }
    }

    pub fn vertical(k: f64) -> Line {
        Line::Vertical { k }
    }

    pub fn through(p: Point, dir: Point) -> Line {
        if dir.x.abs() <= 1e-12 * dir.norm() {
            Line::Vertical { k: p.x }
        } else {
            let a = dir.y / dir.x;
            Line::Sloped { a, b: p.y - a * p.x }
        }
    }

    /// A point on the line and a unit direction.
    pub fn point_dir(&self) -> (Point, Point) {
        match *self {
            Line::Sloped { a, b } => {
                let n = (1.0 + a * a).sqrt();
                (Point::new(0.0, b), Point::new(1.0 / n, a / n))
            }
            Line::Vertical { k } => (Point::new(k, 0.0), Point::new(0.0, 1.0)),
        }
    }

    /// Unit normal `n` and offset `c` with the line being `n·p = c`.
    fn normal_form(&self) -> (Point, f64) {
        let (p, d) = self.point_dir();
        let n = d.perp();
        (n, n.dot(p))
    }

    pub fn distance_to(&self, x: Point) -> f64 {
        let (n, c) = self.normal_form();
        (n.dot(x) - c).abs()
    }

    pub fn transformed(&self, m: &RigidMotion) -> Line {
        let (p, d) = self.point_dir();
        let q = m.apply(p);
        let e = m.apply(p + d) - q;
        Line::through(q, e)
    }

    fn is_finite(&self) -> bool {
        match *self {
            Line::Sloped { a, b } => a.is_finite() && b.is_finite(),
            Line::Vertical { k } => k.is_finite(),
        }
    }
}

impl FromStr for Line {
    type Err = LinesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LinesError::InvalidLine(s.to_string());
        let t = s.trim();
        let line = if let Some(k) = t.strip_prefix("vertical:") {
            Line::Vertical { k: k.trim().parse().map_err(|_| bad())? }
        } else {
            let (a, b) = t.split_once(',').ok_or_else(bad)?;
            Line::Sloped { a: a.trim().parse().map_err(|_| bad())?, b: b.trim().parse().map_err(|_| bad())? }
        };
        if line.is_finite() {
            Ok(line)
        } else {
            Err(bad())
        }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Sloped { a, b } => write!(f, "{a},{b}"),
            Line::Vertical { k } => write!(f, "vertical:{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolutionKind {
    DegenerateConcurrent,
    Finite,
}

/// `a ∈ q1`, `b ∈ q2`, `c ∈ q3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LabeledTriangle {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub orientation: Orientation,
}

impl LabeledTriangle {
    pub fn vertices(&self) -> [Point; 3] {
        [self.a, self.b, self.c]
    }

    /// Sorted coordinates rounded to `1e-8`.
    pub fn point_set_key(&self) -> [(i64, i64); 3] {
        let mut k = self.vertices().map(|p| ((p.x * 1e8).round() as i64, (p.y * 1e8).round() as i64));
        k.sort();
        k
    }

    pub fn max_side_error(&self) -> f64 {
        [self.a.dist(self.b), self.b.dist(self.c), self.a.dist(self.c)]
            .iter()
            .map(|d| (d - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchAudit {
    pub orientation: Orientation,
    /// Roots of the branch quadratic before deduplication.
    pub roots: usize,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinesSolution {
    pub kind: SolutionKind,
    pub triangles: Vec<LabeledTriangle>,
    /// Index (0-based) of the line used as the frame's vertical axis.
    pub axis_line: usize,
    pub branches: Vec<BranchAudit>,
}

fn parallel(l: &Line, m: &Line) -> bool {
    let (_, d) = l.point_dir();
    let (_, e) = m.point_dir();
    d.cross(e).abs() <= 1e-12
}

/// Frame whose y-axis is the given line: origin on it, `ŷ` along it and
/// `x̂ = (ŷ.y, −ŷ.x)`.
struct Frame {
    origin: Point,
    x_hat: Point,
    y_hat: Point,
}

impl Frame {
    fn on(line: &Line) -> Frame {
        let (o, d) = line.point_dir();
        Frame { origin: o, x_hat: Point::new(d.y, -d.x), y_hat: d }
    }

    fn to_local(&self, p: Point) -> Point {
        let r = p - self.origin;
        Point::new(r.dot(self.x_hat), r.dot(self.y_hat))
    }

    fn to_world(&self, p: Point) -> Point {
        self.origin + self.x_hat * p.x + self.y_hat * p.y
    }

    /// Slope and intercept in this frame of a line not parallel to the axis.
    fn slope_intercept(&self, line: &Line) -> (f64, f64) {
        let (p, d) = line.point_dir();
        let q = self.to_local(p);
        let e = Point::new(d.dot(self.x_hat), d.dot(self.y_hat));
        let a = e.y / e.x;
        (a, q.y - a * q.x)
    }
}

/// Real roots of `A x² + B x + C` with `A > 0`.
fn quadratic_roots(qa: f64, qb: f64, qc: f64) -> Vec<f64> {
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-qb / (2.0 * qa)];
    }
    let sq = disc.sqrt();
    // Stable form avoiding cancellation.
    let q = -0.5 * (qb + qb.signum() * sq);
    let (r1, r2) = if q != 0.0 { (q / qa, qc / q) } else { (sq / (2.0 * qa), -sq / (2.0 * qa)) };
    if r1 < r2 {
        vec![r1, r2]
    } else {
        vec![r2, r1]
    }
}

/// Enumerates unit equilateral triangles `ABC` with `A ∈ q1`, `B ∈ q2`,
/// `C ∈ q3`, or reports the degenerate case of three concurrent lines at
/// mutual angles π/3.
///
/// A line parallel to neither other line serves as the y-axis of the working
/// frame. With `A = (x₁, a₁x₁ + b₁)` and `B = (x₂, a₂x₂ + b₂)`, the apex
/// lies on the axis iff `αx₁ + βx₂ + γ = 0`, and `|AB| = 1` then gives a
/// quadratic with positive leading coefficient.
pub fn solve_unit_triangles(q1: Line, q2: Line, q3: Line, tol: f64) -> Result<LinesSolution, LinesError> {
    let lines = [q1, q2, q3];
    let axis = [2, 1, 0]
        .into_iter()
        .find(|&m| (0..3).filter(|&i| i != m).all(|i| !parallel(&lines[i], &lines[m])))
        .ok_or(LinesError::AllParallel)?;
    let (i1, i2) = match axis {
        2 => (0, 1),
        1 => (0, 2),
        _ => (1, 2),
    };
    let frame = Frame::on(&lines[axis]);
    let (a1, b1) = frame.slope_intercept(&lines[i1]);
    let (a2, b2) = frame.slope_intercept(&lines[i2]);

    let mut triangles: Vec<LabeledTriangle> = Vec::new();
    let mut branches = Vec::new();
    for orientation in [Orientation::Ccw, Orientation::Cw] {
        let sign = match orientation {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        };
        let alpha = (1.0 + sign * SQRT_3 * a1) / 2.0;
        let beta = (1.0 - sign * SQRT_3 * a2) / 2.0;
        let gamma = sign * (SQRT_3 / 2.0) * (b1 - b2);
        if alpha.abs() < tol && beta.abs() < tol {
            let degenerate = gamma.abs() < tol;
            branches.push(BranchAudit { orientation, roots: 0, degenerate });
            if degenerate {
                return Ok(LinesSolution {
                    kind: SolutionKind::DegenerateConcurrent,
                    triangles: Vec::new(),
                    axis_line: axis,
                    branches,
                });
            }
            continue;
        }
        // One x as an affine function of the other: x_dep = p·x_free + q.
        let solve_first = alpha.abs() >= beta.abs();
        let (p, q) = if solve_first { (-beta / alpha, -gamma / alpha) } else { (-alpha / beta, -gamma / beta) };
        // Free-variable line (slope, intercept) and dependent one.
        let ((af, bf), (ad, bd)) = if solve_first { ((a2, b2), (a1, b1)) } else { ((a1, b1), (a2, b2)) };
        // AB = (x_f − x_d, y_f − y_d) is affine in x_f: u·x_f + v.
        let ux = 1.0 - p;
        let vx = -q;
        let uy = af - ad * p;
        let vy = bf - ad * q - bd;
        let roots = quadratic_roots(ux * ux + uy * uy, 2.0 * (ux * vx + uy * vy), vx * vx + vy * vy - 1.0);
        branches.push(BranchAudit { orientation, roots: roots.len(), degenerate: false });
        for xf in roots {
            let xd = p * xf + q;
            let (x1, x2) = if solve_first { (xd, xf) } else { (xf, xd) };
            let pa = Point::new(x1, a1 * x1 + b1);
            let pb = Point::new(x2, a2 * x2 + b2);
            let m = pa.lerp(pb, 0.5);
            let pc = m + Point::new(pa.y - pb.y, pb.x - pa.x) * (sign * SQRT_3 / 2.0);
            let [wa, wb, wc] = [pa, pb, pc].map(|x| frame.to_world(x));
            let mut labeled = [Point::ORIGIN; 3];
            labeled[i1] = wa;
            labeled[i2] = wb;
            labeled[axis] = wc;
            // Relabeling may reverse the orientation of (A, B, C).
            let orient = if (labeled[1] - labeled[0]).cross(labeled[2] - labeled[0]) > 0.0 {
                Orientation::Ccw
            } else {
                Orientation::Cw
            };
            let t = LabeledTriangle { a: labeled[0], b: labeled[1], c: labeled[2], orientation: orient };
            if !triangles.iter().any(|s| s.point_set_key() == t.point_set_key()) {
                triangles.push(t);
            }
        }
    }
    Ok(LinesSolution { kind: SolutionKind::Finite, triangles, axis_line: axis, branches })
}

/// Independent cross-check: sweeps the pose angle `φ` of a unit triangle.
/// For fixed `φ` the vertices are affine in the translation, so two of the
/// three incidences fix it and the third leaves a scalar residual, whose
/// sign changes are bracketed at `angle_step` and refined by bisection.
pub fn sweep_oracle(q1: Line, q2: Line, q3: Line, angle_step: f64) -> Result<Vec<LabeledTriangle>, LinesError> {
    let lines = [q1, q2, q3];
    if parallel(&q1, &q2) && parallel(&q2, &q3) {
        return Err(LinesError::AllParallel);
    }
    let forms = lines.map(|l| l.normal_form());
    // Use the least parallel pair to solve for the translation.
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    let &(i, j, k) = pairs
        .iter()
        .max_by(|x, y| {
            let cx = forms[x.0].0.cross(forms[x.1].0).abs();
            let cy = forms[y.0].0.cross(forms[y.1].0).abs();
            cx.total_cmp(&cy)
        })
        .expect("three pairs");
    let steps = (TAU / angle_step).ceil() as usize;
    let mut out: Vec<LabeledTriangle> = Vec::new();
    for orientation in [Orientation::Ccw, Orientation::Cw] {
        let turn = match orientation {
            Orientation::Ccw => FRAC_PI_3,
            Orientation::Cw => -FRAC_PI_3,
        };
        let offsets = |phi: f64| {
            let (s, c) = phi.sin_cos();
            let (s2, c2) = (phi + turn).sin_cos();
            [Point::ORIGIN, Point::new(c, s), Point::new(c2, s2)]
        };
        let place = |phi: f64| -> (f64, [Point; 3]) {
            let off = offsets(phi);
            let (ni, ci) = forms[i];
            let (nj, cj) = forms[j];
            let ri = ci - ni.dot(off[i]);
            let rj = cj - nj.dot(off[j]);
            let det = ni.cross(nj);
            let t = Point::new((ri * nj.y - rj * ni.y) / det, (ni.x * rj - nj.x * ri) / det);
            let (nk, ck) = forms[k];
            let verts = off.map(|o| t + o);
            (nk.dot(verts[k]) - ck, verts)
        };
        let mut push = |phi: f64| {
            let (_, v) = place(phi);
            let t = LabeledTriangle { a: v[0], b: v[1], c: v[2], orientation };
            if !out.iter().any(|s| s.point_set_key() == t.point_set_key()) {
                out.push(t);
            }
        };
        let mut prev_phi = 0.0;
        let mut prev = place(0.0).0;
        for n in 1..=steps {
            let phi = (n as f64 * angle_step).min(TAU);
            let cur = place(phi).0;
            if prev.abs() < 1e-12 {
                push(prev_phi);
            } else if prev.signum() != cur.signum() && cur.abs() >= 1e-12 {
                let (mut lo, mut hi, mut flo) = (prev_phi, phi, prev);
                while hi - lo > 1e-13 {
                    let mid = 0.5 * (lo + hi);
                    let fm = place(mid).0;
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                push(0.5 * (lo + hi));
            }
            prev_phi = phi;
            prev = cur;
        }
    }
    Ok(out)
}
