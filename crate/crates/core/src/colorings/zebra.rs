//! Zebra-like colorings: a 1-periodic piecewise-linear curve `L_0` along `x̂`,
//! its translates `L_i = L_0 + i·ẑ` with `ẑ = ½x̂ + (√3/2)ŷ`, and alternating
//! colors on the regions between consecutive curves.
//!
//! Internally everything is computed in the frame `(s, t) = (p·x̂, p·ŷ)`,
//! where `L_i = {(i/2 + u, i·√3/2 + f(u))}` and `f` is the profile.

use serde::Serialize;

use super::{Color, ColoringError, Parity, PlaneColoring};
use crate::geom::{Point, Region, Segment, UnitVector, DEFAULT_TOLERANCE};

const SQRT_3: f64 = 1.732_050_807_568_877_2;
const HALF_SQRT_3: f64 = SQRT_3 / 2.0;

/// One period of the boundary curve as breakpoints `(u, v)`, `u` running
/// from 0 to 1 and `v` the offset along `ŷ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZebraProfile {
    points: Vec<(f64, f64)>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl ZebraProfile {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self, ColoringError> {
        Self::with_tolerance(points, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(points: Vec<[f64; 2]>, tol: f64) -> Result<Self, ColoringError> {
        let bad = |m: String| Err(ColoringError::MalformedProfile(m));
        if points.len() < 2 {
            return bad("needs at least two breakpoints".into());
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return bad("non-finite coordinate".into());
        }
        let first = points[0];
        let last = points[points.len() - 1];
        if first[0].abs() > tol || (last[0] - 1.0).abs() > tol {
            return bad(format!("u must run from 0 to 1, got {} .. {}", first[0], last[0]));
        }
        if (first[1] - last[1]).abs() > tol {
            return bad(format!("profile not periodic: first v = {} but last v = {}", first[1], last[1]));
        }
        for w in points.windows(2) {
            if w[1][0] - w[0][0] <= tol {
                return bad(format!("u not strictly increasing at u = {}", w[1][0]));
            }
        }
        let mut pts: Vec<(f64, f64)> = points.iter().map(|p| (p[0], p[1])).collect();
        let n = pts.len();
        pts[0] = (0.0, first[1]);
        pts[n - 1] = (1.0, first[1]);
        let slopes: Vec<f64> = pts.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
        for (k, w) in slopes.windows(2).enumerate() {
            if (w[0] - w[1]).abs() <= tol {
                return bad(format!("consecutive pieces collinear at u = {}", pts[k + 1].0));
            }
        }
        Ok(ZebraProfile { points: pts, slopes })
    }

    /// `v ≡ 0`.
    pub fn flat() -> Self {
        Self::new(vec![[0.0, 0.0], [1.0, 0.0]]).expect("valid")
    }

    /// `[(0,0), (½, amplitude), (1,0)]`.
    pub fn zigzag(amplitude: f64) -> Result<Self, ColoringError> {
        Self::new(vec![[0.0, 0.0], [0.5, amplitude], [1.0, 0.0]])
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn piece_count(&self) -> usize {
        self.slopes.len()
    }

    /// Value and slope of the periodic extension at `u`.
    pub fn eval(&self, u: f64) -> (f64, f64) {
        let w = u - u.floor();
        let k = self.points.partition_point(|p| p.0 <= w).saturating_sub(1).min(self.slopes.len() - 1);
        let (u0, v0) = self.points[k];
        let m = self.slopes[k];
        (v0 + m * (w - u0), m)
    }

    pub fn value(&self, u: f64) -> f64 {
        self.eval(u).0
    }

    /// Whether `u = 0` is a corner of the periodic curve.
    fn wraps_with_corner(&self) -> bool {
        (self.slopes[0] - self.slopes[self.slopes.len() - 1]).abs() > 1e-12
    }

    /// Breakpoint parameters in `[0, 1)` that are corners of the curve.
    pub fn vertex_params(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if self.wraps_with_corner() {
            out.push(0.0);
        }
        out.extend(self.points[1..self.points.len() - 1].iter().map(|p| p.0));
        out
    }

    pub fn min_v(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min)
    }

    pub fn max_v(&self) -> f64 {
        self.points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Number of pieces that are not collinear with their predecessor,
    /// counting across the period boundary.
    pub fn distinct_direction_changes(&self) -> usize {
        let n = self.slopes.len();
        (0..n).filter(|&k| (self.slopes[k] - self.slopes[(k + n - 1) % n]).abs() > 1e-12).count()
    }

    /// Linear pieces with `u` overlapping `[umin, umax]`, as frame-free
    /// `((u0, v0), (u1, v1))` pairs in increasing `u`, clipped to the range.
    fn pieces_in(&self, umin: f64, umax: f64) -> Vec<((f64, f64), (f64, f64))> {
        let mut out = Vec::new();
        let kmin = umin.floor() as i64;
        let kmax = umax.floor() as i64;
        for period in kmin..=kmax {
            let off = period as f64;
            for (j, w) in self.points.windows(2).enumerate() {
                let a = off + w[0].0;
                let b = off + w[1].0;
                let lo = a.max(umin);
                let hi = b.min(umax);
                if hi <= lo {
                    continue;
                }
                let m = self.slopes[j];
                out.push(((lo, w[0].1 + m * (lo - a)), (hi, w[0].1 + m * (hi - a))));
            }
        }
        out
    }
}

/// Which curve, if any, a point sits on, and the region index `i` such that
/// the point lies between `L_i` (inclusive) and `L_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Location {
    region: i64,
    on_curve: Option<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZebraColoring {
    profile: ZebraProfile,
    x_hat: UnitVector,
    y_hat: UnitVector,
    parity_rule: Parity,
    boundary_parity: Parity,
    tol: f64,
}

impl ZebraColoring {
    pub fn new(
        profile: ZebraProfile,
        x_hat: UnitVector,
        parity_rule: Parity,
        boundary_parity: Parity,
    ) -> Result<Self, ColoringError> {
        let zc = ZebraColoring {
            profile,
            x_hat,
            y_hat: x_hat.perp(),
            parity_rule,
            boundary_parity,
            tol: DEFAULT_TOLERANCE,
        };
        zc.validate()?;
        Ok(zc)
    }

    /// Frame `x̂ = (1, 0)`, even regions and even curves black.
    pub fn standard(profile: ZebraProfile) -> Result<Self, ColoringError> {
        Self::new(profile, UnitVector::X, Parity::EvenBlack, Parity::EvenBlack)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Consecutive curves must be disjoint: `√3/2 + f(u − ½) − f(u) > 0`.
    fn validate(&self) -> Result<(), ColoringError> {
        let gap = self.min_curve_gap();
        if gap <= self.tol {
            return Err(ColoringError::MalformedProfile(format!(
                "consecutive curves L_i and L_(i+1) meet (minimum vertical gap {gap})"
            )));
        }
        Ok(())
    }

    /// Minimum over `u` of the vertical gap between `L_0` and `L_1`.
    pub fn min_curve_gap(&self) -> f64 {
        let f = &self.profile;
        f.points
            .iter()
            .flat_map(|p| [p.0, p.0 + 0.5])
            .map(|u| HALF_SQRT_3 + f.value(u - 0.5) - f.value(u))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn profile(&self) -> &ZebraProfile {
        &self.profile
    }

    pub fn x_hat(&self) -> UnitVector {
        self.x_hat
    }

    pub fn y_hat(&self) -> UnitVector {
        self.y_hat
    }

    /// `ẑ = ½x̂ + (√3/2)ŷ`.
    pub fn z_vec(&self) -> Point {
        self.x_hat.as_point() * 0.5 + self.y_hat.as_point() * HALF_SQRT_3
    }

    pub fn parity_rule(&self) -> Parity {
        self.parity_rule
    }

    pub fn boundary_parity(&self) -> Parity {
        self.boundary_parity
    }

    /// Same boundary and interior colors, boundary points recolored.
    pub fn twin(&self, new_boundary_parity: Parity) -> ZebraColoring {
        ZebraColoring { boundary_parity: new_boundary_parity, ..self.clone() }
    }

    fn to_frame(&self, p: Point) -> (f64, f64) {
        (p.dot(self.x_hat.as_point()), p.dot(self.y_hat.as_point()))
    }

    fn frame_to_point(&self, s: f64, t: f64) -> Point {
        self.x_hat.as_point() * s + self.y_hat.as_point() * t
    }

    /// Height of `L_i` above frame abscissa `s`, and its slope there.
    fn curve_height(&self, i: i64, s: f64) -> (f64, f64) {
        let (v, m) = self.profile.eval(s - 0.5 * i as f64);
        (i as f64 * HALF_SQRT_3 + v, m)
    }

    fn locate(&self, p: Point) -> Location {
        let (s, t) = self.to_frame(p);
        let mut i = ((t - self.profile.min_v()) / HALF_SQRT_3).floor() as i64;
        let (mut g, mut m) = self.curve_height(i, s);
        while g > t {
            i -= 1;
            (g, m) = self.curve_height(i, s);
        }
        if (t - g) <= self.tol * (1.0 + m * m).sqrt() {
            return Location { region: i, on_curve: Some(i) };
        }
        let (g1, m1) = self.curve_height(i + 1, s);
        if (g1 - t) <= self.tol * (1.0 + m1 * m1).sqrt() {
            return Location { region: i, on_curve: Some(i + 1) };
        }
        Location { region: i, on_curve: None }
    }

    pub fn zebra_color(&self, p: Point) -> Color {
        let loc = self.locate(p);
        match loc.on_curve {
            Some(j) => self.boundary_parity.color_of(j),
            None => self.parity_rule.color_of(loc.region),
        }
    }

    /// Index of the region containing `p`, or of the curve through it.
    pub fn region_index(&self, p: Point) -> i64 {
        self.locate(p).region
    }

    /// Distance from frame point `(s, t)` to `L_i`, given that some point of
    /// `L_i` lies within `bound`.
    fn distance_to_curve(&self, i: i64, s: f64, t: f64, bound: f64) -> f64 {
        let shift = 0.5 * i as f64;
        let lift = i as f64 * HALF_SQRT_3;
        let x = Point::new(s, t);
        self.profile
            .pieces_in(s - shift - bound, s - shift + bound)
            .into_iter()
            .map(|(a, b)| {
                let seg = Segment {
                    p: Point::new(a.0 + shift, a.1 + lift),
                    q: Point::new(b.0 + shift, b.1 + lift),
                    oriented: false,
                };
                seg.distance_to(x)
            })
            .fold(bound, f64::min)
    }

    /// Polyline `L_i` clipped to `window`, oriented white-left.
    pub fn zebra_curve(&self, i: i64, window: &Region) -> Vec<Segment> {
        let pts = self.curve_polyline(i, window);
        let forward = self.parity_rule.color_of(i) == Color::White;
        pts.windows(2)
            .filter_map(|w| {
                let seg = if forward { Segment::oriented(w[0], w[1]) } else { Segment::oriented(w[1], w[0]) };
                seg.clip(window, self.tol)
            })
            .collect()
    }

    /// Unclipped polyline of `L_i` in increasing `u`, reaching one period
    /// past the window on both sides.
    pub fn curve_polyline(&self, i: i64, window: &Region) -> Vec<Point> {
        let (smin, smax) = self.frame_s_range(window);
        let shift = 0.5 * i as f64;
        let (umin, umax) = (smin - shift - 1.0, smax - shift + 1.0);
        let mut params = vec![umin];
        let corners = self.profile.vertex_params();
        for period in (umin.floor() as i64)..=(umax.floor() as i64) {
            for c in &corners {
                let u = period as f64 + c;
                if u > umin && u < umax {
                    params.push(u);
                }
            }
        }
        params.push(umax);
        params.iter().map(|&u| self.curve_point(i, u)).collect()
    }

    /// Closed polygon bounded by `L_i` and `L_{i+1}`, covering the window's
    /// extent along `x̂`; clip it to get the region's part inside `window`.
    pub fn band_polygon(&self, i: i64, window: &Region) -> Vec<Point> {
        let mut poly = self.curve_polyline(i, window);
        let mut upper = self.curve_polyline(i + 1, window);
        upper.reverse();
        poly.extend(upper);
        poly
    }

    fn frame_s_range(&self, window: &Region) -> (f64, f64) {
        let ss = window.corners().map(|c| self.to_frame(c).0);
        (ss.iter().cloned().fold(f64::INFINITY, f64::min), ss.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Indices of curves that can meet `window`.
    pub fn curves_meeting(&self, window: &Region) -> std::ops::RangeInclusive<i64> {
        let ts = window.corners().map(|c| self.to_frame(c).1);
        let tmin = ts.iter().cloned().fold(f64::INFINITY, f64::min);
        let tmax = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = ((tmin - self.profile.max_v()) / HALF_SQRT_3).floor() as i64;
        let hi = ((tmax - self.profile.min_v()) / HALF_SQRT_3).ceil() as i64;
        lo..=hi
    }

    /// Plane point of `L_i` at profile parameter `u`.
    pub fn curve_point(&self, i: i64, u: f64) -> Point {
        let shift = 0.5 * i as f64;
        self.frame_to_point(shift + u, i as f64 * HALF_SQRT_3 + self.profile.value(u))
    }
}

impl PlaneColoring for ZebraColoring {
    fn color(&self, p: Point) -> Color {
        self.zebra_color(p)
    }

    fn is_on_boundary(&self, p: Point) -> bool {
        self.locate(p).on_curve.is_some()
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        let (s, t) = self.to_frame(p);
        let i = self.locate(p).region;
        let below = t - self.curve_height(i, s).0;
        let above = self.curve_height(i + 1, s).0 - t;
        let d0 = self.distance_to_curve(i, s, t, below.abs());
        let d1 = self.distance_to_curve(i + 1, s, t, above.abs());
        d0.min(d1)
    }

    fn boundary_segments(&self, window: &Region) -> Vec<Segment> {
        self.curves_meeting(window).flat_map(|i| self.zebra_curve(i, window)).collect()
    }

    fn boundary_vertices(&self, window: &Region) -> Vec<Point> {
        let (smin, smax) = self.frame_s_range(window);
        let corners = self.profile.vertex_params();
        let mut out = Vec::new();
        for i in self.curves_meeting(window) {
            let shift = 0.5 * i as f64;
            for period in ((smin - shift).floor() as i64 - 1)..=((smax - shift).ceil() as i64) {
                for c in &corners {
                    let p = self.curve_point(i, period as f64 + c);
                    if window.contains(p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionVerdict {
    pub passed: bool,
    pub detail: String,
}

/// A pair `A ∈ L_i`, `B ∈ L_{i+1}` breaking `‖AB‖ > 1 ⟺ θ_AB < π/3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairWitness {
    pub a: Point,
    pub b: Point,
    pub distance: f64,
    pub theta: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LensFailure {
    /// A point of `L_{i+1}` between `B₁` and `B₂` lies outside the lens.
    PortionOutside,
    /// A point of `L_{i+1}` outside the `B₁..B₂` arc lies inside the lens.
    RemainderInside,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensWitness {
    pub a: Point,
    pub b: Point,
    pub failure: LensFailure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionD {
    pub passed: bool,
    /// Exact check of the biconditional over every pair of linear pieces.
    pub biconditional_holds: bool,
    /// Lens form checked at every breakpoint and piece midpoint of `L_0`.
    pub lens_form_holds: bool,
    pub segment_pairs_checked: usize,
    pub lens_centers_checked: usize,
    pub witness: Option<PairWitness>,
    pub lens_witness: Option<LensWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZebraReport {
    pub a: ConditionVerdict,
    pub b: ConditionVerdict,
    pub c: ConditionVerdict,
    pub d: ConditionD,
}

impl ZebraReport {
    pub fn all_pass(&self) -> bool {
        self.a.passed && self.b.passed && self.c.passed && self.d.passed
    }
}

/// Checks the four zebra-like conditions. (a)–(c) hold by construction of
/// the representation; (d) is decided exactly on the piecewise-linear data.
pub fn check_zebra_conditions(zc: &ZebraColoring) -> Result<ZebraReport, ColoringError> {
    let pts: Vec<[f64; 2]> = zc.profile.points.iter().map(|p| [p.0, p.1]).collect();
    ZebraProfile::with_tolerance(pts, zc.tol)?;
    zc.validate()?;
    let f = &zc.profile;
    let closure = f.points[0].1 == f.points[f.points.len() - 1].1;
    let a = ConditionVerdict {
        passed: closure,
        detail: "holds by construction: the profile is 1-periodic in u and |x̂| = 1".into(),
    };
    let ortho = zc.x_hat.as_point().dot(zc.y_hat.as_point()).abs() <= zc.tol;
    let b = ConditionVerdict {
        passed: ortho,
        detail: "holds by construction: L_(i+1) = L_i + ½x̂ + (√3/2)ŷ with ŷ ⟂ x̂".into(),
    };
    let gap = zc.min_curve_gap();
    let c = ConditionVerdict {
        passed: gap > zc.tol,
        detail: format!(
            "holds by construction: region colors alternate by parity; curves disjoint (minimum vertical gap {gap:.6})"
        ),
    };
    let d = check_condition_d(zc);
    Ok(ZebraReport { a, b, c, d })
}

fn check_condition_d(zc: &ZebraColoring) -> ConditionD {
    let f = &zc.profile;
    let spread = f.max_v() - f.min_v();
    let reach = 1.0_f64.max((HALF_SQRT_3 + spread) / SQRT_3) + 1.0;
    let lower = f.pieces_in(0.0, 1.0);
    let upper = f.pieces_in(-reach - 1.0, reach + 1.0);
    let to_l1 = |(u, v): (f64, f64)| Point::new(0.5 + u, HALF_SQRT_3 + v);
    let tol = zc.tol;

    let mut pairs = 0;
    let mut witness = None;
    'outer: for &(a0, a1) in &lower {
        let (pa0, pa1) = (Point::new(a0.0, a0.1), Point::new(a1.0, a1.1));
        for &(b0, b1) in &upper {
            pairs += 1;
            if let Some((s, t)) = pair_violation(pa0, pa1, to_l1(b0), to_l1(b1), tol) {
                let a = pa0.lerp(pa1, s);
                let b = to_l1(b0).lerp(to_l1(b1), t);
                witness = Some(frame_witness(zc, a, b));
                break 'outer;
            }
        }
    }

    let mut centers: Vec<f64> = f.points[..f.points.len() - 1].iter().map(|p| p.0).collect();
    centers.extend(f.points.windows(2).map(|w| 0.5 * (w[0].0 + w[1].0)));
    let mut lens_witness = None;
    for &u in &centers {
        let a = Point::new(u, f.value(u));
        if let Some((b, failure)) = lens_violation(f, a, tol) {
            lens_witness = Some(LensWitness {
                a: zc.frame_to_point(a.x, a.y),
                b: zc.frame_to_point(b.x, b.y),
                failure,
            });
            break;
        }
    }

    ConditionD {
        passed: witness.is_none() && lens_witness.is_none(),
        biconditional_holds: witness.is_none(),
        lens_form_holds: lens_witness.is_none(),
        segment_pairs_checked: pairs,
        lens_centers_checked: centers.len(),
        witness,
        lens_witness,
    }
}

fn frame_witness(zc: &ZebraColoring, a: Point, b: Point) -> PairWitness {
    let d = b - a;
    PairWitness {
        a: zc.frame_to_point(a.x, a.y),
        b: zc.frame_to_point(b.x, b.y),
        distance: d.norm(),
        theta: d.y.abs().atan2(d.x.abs()),
    }
}

/// Half-plane `α·s + β·t + γ ≥ 0` clip of a convex polygon in `(s, t)`.
fn clip_half_plane(poly: &[Point], alpha: f64, beta: f64, gamma: f64) -> Vec<Point> {
    let val = |p: Point| alpha * p.x + beta * p.y + gamma;
    let mut out = Vec::with_capacity(poly.len() + 2);
    for k in 0..poly.len() {
        let cur = poly[k];
        let next = poly[(k + 1) % poly.len()];
        let (vc, vn) = (val(cur), val(next));
        if vc >= 0.0 {
            out.push(cur);
        }
        if (vc >= 0.0) != (vn >= 0.0) {
            out.push(cur.lerp(next, vc / (vc - vn)));
        }
    }
    out
}

/// Searches the parameter square of pieces `A(s) = a0 + s(a1 − a0)` and
/// `B(t) = b0 + t(b1 − b0)` for a pair with `‖AB‖ > 1` while steep
/// (`θ ≥ π/3`), or `‖AB‖ < 1` while shallow (`θ < π/3`).
///
/// Steepness and shallowness are each a union of two convex cones in the
/// difference vector, hence convex polygons in `(s, t)`. `‖AB‖²` is convex,
/// so its maximum over a steep polygon sits at a vertex and its minimum over
/// a shallow polygon on an edge.
fn pair_violation(a0: Point, a1: Point, b0: Point, b1: Point, tol: f64) -> Option<(f64, f64)> {
    let e = b0 - a0;
    let da = a1 - a0;
    let db = b1 - b0;
    let diff = |st: Point| e + db * st.y - da * st.x;
    let square = [Point::new(0.0, 0.0), Point::new(1.0, 0.0), Point::new(1.0, 1.0), Point::new(0.0, 1.0)];
    // Linear form k·d ≥ 0 in (s, t): α = −k·da, β = k·db, γ = k·e.
    let cone = |k1: Point, k2: Point| {
        let p = clip_half_plane(&square, -k1.dot(da), k1.dot(db), k1.dot(e));
        clip_half_plane(&p, -k2.dot(da), k2.dot(db), k2.dot(e))
    };
    let steep = [
        cone(Point::new(-SQRT_3, 1.0), Point::new(SQRT_3, 1.0)),
        cone(Point::new(-SQRT_3, -1.0), Point::new(SQRT_3, -1.0)),
    ];
    for poly in &steep {
        for &v in poly {
            if diff(v).norm_sq() > 1.0 + tol {
                return Some((v.x, v.y));
            }
        }
    }
    let shallow = [
        cone(Point::new(SQRT_3, -1.0), Point::new(SQRT_3, 1.0)),
        cone(Point::new(-SQRT_3, -1.0), Point::new(-SQRT_3, 1.0)),
    ];
    for poly in &shallow {
        let n = poly.len();
        if n == 0 {
            continue;
        }
        for k in 0..n {
            let p = poly[k];
            let q = poly[(k + 1) % n];
            let (dp, dq) = (diff(p), diff(q));
            let delta = dq - dp;
            let l2 = delta.norm_sq();
            let lam = if l2 > 0.0 { (-dp.dot(delta) / l2).clamp(0.0, 1.0) } else { 0.0 };
            let st = p.lerp(q, lam);
            if diff(st).norm_sq() < 1.0 - tol && is_shallow(diff(st), tol) {
                return Some((st.x, st.y));
            }
        }
    }
    None
}

/// Strictly shallow, with the cone boundary (θ = π/3 exactly) excluded.
fn is_shallow(d: Point, tol: f64) -> bool {
    d.y.abs() < SQRT_3 * d.x.abs() - tol
}

/// Open interval of `t` where `|p + t·d − c| < r`, if any.
fn disc_interval(p: Point, d: Point, c: Point, r: f64) -> Option<(f64, f64)> {
    let f = p - c;
    let qa = d.norm_sq();
    let qb = 2.0 * f.dot(d);
    let qc = f.norm_sq() - r * r;
    let disc = qb * qb - 4.0 * qa * qc;
    if qa == 0.0 || disc <= 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    Some(((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)))
}

/// Lens form at one center `a = (u, f(u))` of `L_0`: the arc of `L_1` from
/// `B₁` to `B₂` stays in `D(A) ∩ D(A')`, and the rest of `L_1` stays out of it.
fn lens_violation(f: &ZebraProfile, a: Point, tol: f64) -> Option<(Point, LensFailure)> {
    let a_up = Point::new(a.x, a.y + SQRT_3);
    let u = a.x;
    let to_l1 = |(w, v): (f64, f64)| Point::new(0.5 + w, HALF_SQRT_3 + v);
    let r_out = (1.0 + tol) * (1.0 + tol);
    for (p, q) in f.pieces_in(u - 1.0, u) {
        for b in [to_l1(p), to_l1(q)] {
            if b.dist(a).powi(2) > r_out || b.dist(a_up).powi(2) > r_out {
                return Some((b, LensFailure::PortionOutside));
            }
        }
    }
    let r_in = 1.0 - tol;
    let rest = f.pieces_in(u - 3.0, u - 1.0).into_iter().chain(f.pieces_in(u, u + 2.0));
    for (p, q) in rest {
        let (bp, bq) = (to_l1(p), to_l1(q));
        let d = bq - bp;
        let (Some(i1), Some(i2)) = (disc_interval(bp, d, a, r_in), disc_interval(bp, d, a_up, r_in)) else {
            continue;
        };
        let lo = i1.0.max(i2.0).max(0.0);
        let hi = i1.1.min(i2.1).min(1.0);
        if hi > lo {
            return Some((bp.lerp(bq, 0.5 * (lo + hi)), LensFailure::RemainderInside));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colorings::{StripBoundaryRule, StripColoring};
    use crate::geom::acute_angle_with;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::FRAC_PI_3;

    fn zigzag() -> ZebraColoring {
        ZebraColoring::standard(ZebraProfile::zigzag(0.1).unwrap()).unwrap()
    }

    fn sawtooth() -> ZebraColoring {
        let p = ZebraProfile::new(vec![[0.0, 0.0], [0.75, 0.8], [1.0, 0.0]]).unwrap();
        ZebraColoring::standard(p).unwrap()
    }

    fn unordered_eq(s: &Segment, p: Point, q: Point, eps: f64) -> bool {
        (s.p.dist(p) < eps && s.q.dist(q) < eps) || (s.p.dist(q) < eps && s.q.dist(p) < eps)
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(ZebraProfile::new(vec![[0.0, 0.0], [1.0, 0.5]]), Err(ColoringError::MalformedProfile(_))));
        assert!(ZebraProfile::new(vec![[0.0, 0.0], [0.6, 0.1], [0.5, 0.0], [1.0, 0.0]]).is_err());
        assert!(ZebraProfile::new(vec![[0.0, 0.0], [0.25, 0.1], [0.5, 0.2], [1.0, 0.0]]).is_err());
        assert!(ZebraProfile::new(vec![[0.1, 0.0], [1.0, 0.0]]).is_err());
        let big = ZebraProfile::zigzag(0.9).unwrap();
        assert!(ZebraColoring::standard(big).is_err(), "curves intersect");
    }

    #[test]
    fn curve_examples() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        let w = Region::new(-1.0, -1.0, 1.0, 1.0).unwrap();
        let c = flat.zebra_curve(0, &w);
        assert_eq!(c.len(), 1);
        assert!(unordered_eq(&c[0], Point::new(-1.0, 0.0), Point::new(1.0, 0.0), 1e-12));

        assert!(flat.zebra_curve(2, &w).is_empty());
        let tall = Region::new(-1.0, 0.0, 1.0, 2.0).unwrap();
        let c = flat.zebra_curve(2, &tall);
        assert_eq!(c.len(), 1);
        assert!(unordered_eq(&c[0], Point::new(-1.0, SQRT_3), Point::new(1.0, SQRT_3), 1e-12));

        let zz = zigzag();
        let c = zz.zebra_curve(0, &Region::new(0.0, -1.0, 1.0, 1.0).unwrap());
        assert_eq!(c.len(), 2);
        assert!(unordered_eq(&c[0], Point::new(0.0, 0.0), Point::new(0.5, 0.1), 1e-12));
        assert!(unordered_eq(&c[1], Point::new(0.5, 0.1), Point::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn color_examples() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        assert_eq!(flat.zebra_color(Point::new(0.3, 0.4)), Color::Black);
        assert_eq!(flat.zebra_color(Point::new(0.3, 1.0)), Color::White);
        assert_eq!(flat.zebra_color(Point::new(7.25, 0.0)), Color::Black);
        assert_eq!(flat.zebra_color(Point::new(7.25, HALF_SQRT_3)), Color::White);
    }

    #[test]
    fn flat_zebra_matches_strip() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        let upper = StripColoring::standard();
        let lower = StripColoring::new(1.0, StripBoundaryRule::LowerClosed).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100_000 {
            let p = Point::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0));
            assert_eq!(flat.color(p), upper.color(p), "{p}");
        }
        // Even curves black with even regions black is the lower-closed rule,
        // boundary lines included.
        for k in -6..6 {
            let p = Point::new(0.37, k as f64 * HALF_SQRT_3);
            assert_eq!(flat.color(p), lower.color(p));
        }
    }

    #[test]
    fn periodicity_and_antiperiodicity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let colorings = [
            zigzag(),
            sawtooth(),
            ZebraColoring::new(
                ZebraProfile::new(vec![[0.0, 0.05], [0.3, -0.1], [0.7, 0.12], [1.0, 0.05]]).unwrap(),
                UnitVector::from_angle(0.7),
                Parity::EvenWhite,
                Parity::EvenBlack,
            )
            .unwrap(),
        ];
        for zc in &colorings {
            let x = zc.x_hat().as_point();
            let z = zc.z_vec();
            for _ in 0..10_000 {
                let p = Point::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0));
                assert_eq!(zc.color(p), zc.color(p + x), "period at {p}");
                if zc.boundary_distance(p) > 1e-6 {
                    assert_ne!(zc.color(p), zc.color(p + z), "anti-period at {p}");
                }
            }
        }
    }

    #[test]
    fn boundary_distance_matches_brute_force() {
        let zc = sawtooth();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let window = Region::new(-6.0, -6.0, 6.0, 6.0).unwrap();
        let segs = zc.boundary_segments(&window);
        for _ in 0..500 {
            let p = Point::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let brute = segs.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min);
            assert!((zc.boundary_distance(p) - brute).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn segments_are_oriented_white_left() {
        for zc in [zigzag(), sawtooth()] {
            let w = Region::new(-2.0, -2.0, 2.0, 2.0).unwrap();
            for s in zc.boundary_segments(&w) {
                let left = s.midpoint() + s.direction().perp() * (1e-4 / s.length());
                assert_eq!(zc.color(left), Color::White);
            }
        }
    }

    #[test]
    fn vertices_are_profile_corners() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        assert!(flat.boundary_vertices(&Region::new(-2.0, -2.0, 2.0, 2.0).unwrap()).is_empty());
        let zz = zigzag();
        let v = zz.boundary_vertices(&Region::new(-0.01, -0.2, 1.01, 0.2).unwrap());
        assert_eq!(v.len(), 3);
        assert_eq!(zz.profile().distinct_direction_changes(), 2);
    }

    /// Independent sampling oracle: random pairs `A ∈ L_0`, `B ∈ L_1`, counting
    /// failures of `‖AB‖ > 1 ⟺ θ_AB < π/3`.
    fn sampled_violations(zc: &ZebraColoring, n: usize, seed: u64) -> usize {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut bad = 0;
        for _ in 0..n {
            let ua: f64 = rng.random_range(0.0..1.0);
            let ub = ua + rng.random_range(-2.0..2.0);
            let a = zc.curve_point(0, ua);
            let b = zc.curve_point(1, ub);
            let long = a.dist(b) > 1.0;
            let shallow = acute_angle_with(zc.x_hat(), a, b, 1e-12).unwrap() < FRAC_PI_3;
            if long != shallow {
                bad += 1;
            }
        }
        bad
    }

    /// Steep pairs include `θ = π/3` exactly, where witnesses often land.
    fn witness_violates(zc: &ZebraColoring, w: &PairWitness) -> bool {
        let long = w.a.dist(w.b) > 1.0;
        let theta = acute_angle_with(zc.x_hat(), w.a, w.b, 1e-12).unwrap();
        if long {
            theta >= FRAC_PI_3 - 1e-12
        } else {
            theta < FRAC_PI_3
        }
    }

    #[test]
    fn condition_d_examples() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        let r = check_zebra_conditions(&flat).unwrap();
        assert!(r.all_pass(), "{r:?}");

        let zz = zigzag();
        assert_eq!(sampled_violations(&zz, 10_000, 1), 0);
        let r = check_zebra_conditions(&zz).unwrap();
        assert!(r.all_pass(), "{r:?}");
        assert!(r.d.biconditional_holds && r.d.lens_form_holds);

        let saw = sawtooth();
        assert!(sampled_violations(&saw, 10_000, 1) > 0);
        let r = check_zebra_conditions(&saw).unwrap();
        assert!(!r.d.passed);
        assert!(witness_violates(&saw, &r.d.witness.expect("witness")));
    }

    #[test]
    fn larger_zigzag_fails() {
        let zz = ZebraColoring::standard(ZebraProfile::zigzag(0.2).unwrap()).unwrap();
        assert!(sampled_violations(&zz, 10_000, 4) > 0);
        assert!(!check_zebra_conditions(&zz).unwrap().d.passed);
    }

    #[test]
    fn exact_checker_agrees_with_sampling_on_random_profiles() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let mut both_fail = 0;
        let mut both_pass = 0;
        for _ in 0..60 {
            let k = rng.random_range(1..4);
            let mut us: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
            us.sort_by(f64::total_cmp);
            let amp = rng.random_range(0.01..0.3);
            let mut pts = vec![[0.0, 0.0]];
            pts.extend(us.iter().map(|&u| [u, rng.random_range(-amp..amp)]));
            pts.push([1.0, 0.0]);
            let Ok(p) = ZebraProfile::new(pts) else { continue };
            let Ok(zc) = ZebraColoring::standard(p) else { continue };
            let r = check_zebra_conditions(&zc).unwrap();
            let sampled = sampled_violations(&zc, 4000, 3);
            if sampled > 0 {
                assert!(!r.d.passed, "sampling found a violation the exact check missed: {:?}", zc.profile());
                both_fail += 1;
            } else if r.d.passed {
                both_pass += 1;
            }
            if let Some(w) = r.d.witness {
                assert!(witness_violates(&zc, &w), "{w:?} {:?}", zc.profile());
            }
        }
        assert!(both_fail > 0 && both_pass > 0, "fail {both_fail} pass {both_pass}");
    }

    #[test]
    fn twin_examples() {
        let flat = ZebraColoring::standard(ZebraProfile::flat()).unwrap();
        let t = flat.twin(Parity::EvenWhite);
        for k in -4..4 {
            let p = Point::new(0.25, k as f64 * HALF_SQRT_3);
            assert_ne!(flat.color(p), t.color(p));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..1000 {
            let p = Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            assert_eq!(flat.color(p), t.color(p));
        }
        assert_eq!(t.twin(Parity::EvenBlack), flat);
        for zc in [zigzag(), sawtooth()] {
            let a = check_zebra_conditions(&zc).unwrap();
            let b = check_zebra_conditions(&zc.twin(zc.boundary_parity().flip())).unwrap();
            assert_eq!(a.all_pass(), b.all_pass());
        }
    }
}
