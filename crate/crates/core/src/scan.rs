//! Searches over colorings: grid scans for monochromatic copies, avoidance
//! counts, ε-almost unit triangles, and probes of the boundary structure.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colorings::{Color, PlaneColoring};
use crate::geom::{
    circle_polyline_intersections, place_triangle, Circle, GeomError, Point, Region, RigidMotion, Segment,
    TriangleSpec,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScanError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("invalid scan grid: {0}")]
    InvalidGrid(String),
    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),
    #[error("point {0} is not on the boundary")]
    NotOnBoundary(Point),
}

/// Placements `(angle index, x index, y index)`: angles `k·2π/angle_count`
/// and translations on a square lattice anchored at the region's lower-left
/// corner.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanGrid {
    pub region: Region,
    pub position_step: f64,
    pub angle_count: usize,
}

impl ScanGrid {
    pub const DEFAULT_ANGLES: usize = 720;
    pub const DEFAULT_STEP: f64 = 0.01;

    pub fn new(region: Region, position_step: f64, angle_count: usize) -> Result<Self, ScanError> {
        if !(position_step.is_finite() && position_step > 0.0) {
            return Err(ScanError::InvalidGrid(format!("position step must be positive, got {position_step}")));
        }
        if angle_count == 0 {
            return Err(ScanError::InvalidGrid("angle count must be at least 1".into()));
        }
        Ok(ScanGrid { region, position_step, angle_count })
    }

    fn axis_count(&self, span: f64) -> usize {
        (span / self.position_step + 1e-9).floor() as usize + 1
    }

    pub fn x_count(&self) -> usize {
        self.axis_count(self.region.width())
    }

    pub fn y_count(&self) -> usize {
        self.axis_count(self.region.height())
    }

    pub fn placement_count(&self) -> u64 {
        (self.angle_count * self.x_count() * self.y_count()) as u64
    }

    pub fn motion(&self, k: usize, ix: usize, iy: usize) -> RigidMotion {
        RigidMotion::new(
            k as f64 * TAU / self.angle_count as f64,
            Point::new(
                self.region.x0 + ix as f64 * self.position_step,
                self.region.y0 + iy as f64 * self.position_step,
            ),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanWitness {
    pub spec: TriangleSpec,
    pub angle: f64,
    pub translation: Point,
    pub vertices: [Point; 3],
    pub color: Color,
    pub margin: f64,
}

impl ScanWitness {
    pub fn motion(&self) -> RigidMotion {
        RigidMotion::new(self.angle, self.translation)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum ScanOutcome {
    Witness(ScanWitness),
    /// Every grid placement was tested; a sampling verdict, not a proof.
    Exhausted { placements_tested: u64, note: String },
}

impl ScanOutcome {
    pub fn witness(&self) -> Option<&ScanWitness> {
        match self {
            ScanOutcome::Witness(w) => Some(w),
            ScanOutcome::Exhausted { .. } => None,
        }
    }
}

/// Per-angle vertex offsets, computed exactly as [`place_triangle`] does.
fn angle_offsets(spec: &TriangleSpec, grid: &ScanGrid, k: usize) -> [Point; 3] {
    let m = RigidMotion::new(grid.motion(k, 0, 0).angle(), Point::ORIGIN);
    place_triangle(spec, &m)
}

fn margin_of<C: PlaneColoring + ?Sized>(coloring: &C, v: &[Point; 3]) -> f64 {
    v.iter().map(|&p| coloring.boundary_distance(p)).fold(f64::INFINITY, f64::min)
}

/// The lexicographically least placement (angle index, x, y) whose three
/// vertices share a color and lie at least `min_margin` from the boundary.
pub fn find_monochromatic_copy<C: PlaneColoring + Sync + ?Sized>(
    coloring: &C,
    spec: &TriangleSpec,
    grid: &ScanGrid,
    min_margin: f64,
) -> Result<ScanOutcome, ScanError> {
    TriangleSpec::with_tolerance(spec.sides()[0], spec.sides()[1], spec.sides()[2], coloring.tolerance())?;
    let (nx, ny) = (grid.x_count(), grid.y_count());
    let found = (0..grid.angle_count).into_par_iter().find_map_first(|k| {
        let off = angle_offsets(spec, grid, k);
        for ix in 0..nx {
            for iy in 0..ny {
                let t = grid.motion(k, ix, iy).translation();
                let v = off.map(|o| o + t);
                let c0 = coloring.color(v[0]);
                if coloring.color(v[1]) != c0 || coloring.color(v[2]) != c0 {
                    continue;
                }
                let margin = margin_of(coloring, &v);
                if margin >= min_margin {
                    let m = grid.motion(k, ix, iy);
                    return Some(ScanWitness {
                        spec: *spec,
                        angle: m.angle(),
                        translation: m.translation(),
                        vertices: place_triangle(spec, &m),
                        color: c0,
                        margin,
                    });
                }
            }
        }
        None
    });
    Ok(match found {
        Some(w) => ScanOutcome::Witness(w),
        None => ScanOutcome::Exhausted {
            placements_tested: grid.placement_count(),
            note: "no monochromatic placement on this grid; this does not prove avoidance".into(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NearMiss {
    pub angle: f64,
    pub translation: Point,
    pub vertices: [Point; 3],
    /// Index of the vertex whose color differs.
    pub odd_vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvoidanceReport {
    pub placements_tested: u64,
    pub monochromatic_count: u64,
    pub near_misses: u64,
    pub first_monochromatic: Option<ScanWitness>,
    /// The first few near misses in placement order.
    pub near_miss_examples: Vec<NearMiss>,
}

const NEAR_MISS_EXAMPLES: usize = 5;

/// Counts monochromatic placements over the whole grid, and placements where
/// two vertices agree and the third lies on the boundary.
pub fn avoidance_scan<C: PlaneColoring + Sync + ?Sized>(
    coloring: &C,
    spec: &TriangleSpec,
    grid: &ScanGrid,
) -> Result<AvoidanceReport, ScanError> {
    TriangleSpec::with_tolerance(spec.sides()[0], spec.sides()[1], spec.sides()[2], coloring.tolerance())?;
    let (nx, ny) = (grid.x_count(), grid.y_count());
    let per_angle: Vec<AvoidanceReport> = (0..grid.angle_count)
        .into_par_iter()
        .map(|k| {
            let off = angle_offsets(spec, grid, k);
            let mut r = AvoidanceReport {
                placements_tested: 0,
                monochromatic_count: 0,
                near_misses: 0,
                first_monochromatic: None,
                near_miss_examples: Vec::new(),
            };
            for ix in 0..nx {
                for iy in 0..ny {
                    r.placements_tested += 1;
                    let t = grid.motion(k, ix, iy).translation();
                    let v = off.map(|o| o + t);
                    let c = v.map(|p| coloring.color(p));
                    if c[0] == c[1] && c[1] == c[2] {
                        r.monochromatic_count += 1;
                        if r.first_monochromatic.is_none() {
                            let m = grid.motion(k, ix, iy);
                            r.first_monochromatic = Some(ScanWitness {
                                spec: *spec,
                                angle: m.angle(),
                                translation: m.translation(),
                                vertices: place_triangle(spec, &m),
                                color: c[0],
                                margin: margin_of(coloring, &v),
                            });
                        }
                        continue;
                    }
                    let odd = if c[0] == c[1] {
                        2
                    } else if c[0] == c[2] {
                        1
                    } else {
                        0
                    };
                    if coloring.is_on_boundary(v[odd]) {
                        r.near_misses += 1;
                        if r.near_miss_examples.len() < NEAR_MISS_EXAMPLES {
                            let m = grid.motion(k, ix, iy);
                            r.near_miss_examples.push(NearMiss {
                                angle: m.angle(),
                                translation: m.translation(),
                                vertices: place_triangle(spec, &m),
                                odd_vertex: odd,
                            });
                        }
                    }
                }
            }
            r
        })
        .collect();
    let mut total = AvoidanceReport {
        placements_tested: 0,
        monochromatic_count: 0,
        near_misses: 0,
        first_monochromatic: None,
        near_miss_examples: Vec::new(),
    };
    for r in per_angle {
        total.placements_tested += r.placements_tested;
        total.monochromatic_count += r.monochromatic_count;
        total.near_misses += r.near_misses;
        if total.first_monochromatic.is_none() {
            total.first_monochromatic = r.first_monochromatic;
        }
        for n in r.near_miss_examples {
            if total.near_miss_examples.len() < NEAR_MISS_EXAMPLES {
                total.near_miss_examples.push(n);
            }
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStrategy {
    /// Walk around a unit circle centered at one point of a close
    /// opposite-colored pair.
    Walk,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlmostUnitTriangle {
    pub vertices: [Point; 3],
    pub strategy: SearchStrategy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlmostUnitPair {
    pub black_triangle: AlmostUnitTriangle,
    pub white_triangle: AlmostUnitTriangle,
    pub epsilon: f64,
    pub tries_used: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum AlmostUnitOutcome {
    Found(AlmostUnitPair),
    Failure { missing: Vec<Color>, tries_used: u64 },
}

/// Whether all sides lie in `[1−ε, 1+ε]`.
pub fn is_almost_unit(v: &[Point; 3], epsilon: f64) -> bool {
    [v[0].dist(v[1]), v[1].dist(v[2]), v[0].dist(v[2])].iter().all(|d| (d - 1.0).abs() <= epsilon)
}

struct AlmostSearch<'a, C: ?Sized> {
    coloring: &'a C,
    epsilon: f64,
    q3: Region,
    tries: u64,
    budget: u64,
    black: Option<AlmostUnitTriangle>,
    white: Option<AlmostUnitTriangle>,
}

impl<C: PlaneColoring + ?Sized> AlmostSearch<'_, C> {
    fn done(&self) -> bool {
        self.black.is_some() && self.white.is_some()
    }

    fn spent(&self) -> bool {
        self.tries >= self.budget
    }

    fn offer(&mut self, v: [Point; 3], strategy: SearchStrategy) {
        self.tries += 1;
        if !v.iter().all(|&p| self.q3.contains(p)) || !is_almost_unit(&v, self.epsilon) {
            return;
        }
        let c = self.coloring.color(v[0]);
        if self.coloring.color(v[1]) != c || self.coloring.color(v[2]) != c {
            return;
        }
        let slot = match c {
            Color::Black => &mut self.black,
            Color::White => &mut self.white,
        };
        if slot.is_none() {
            *slot = Some(AlmostUnitTriangle { vertices: v, strategy });
        }
    }

    /// A pair in Q(1) with different colors and `|R − S| < ε`, using at
    /// most half the budget.
    fn close_pair(&mut self, rng: &mut ChaCha8Rng) -> Option<(Point, Point)> {
        let q1 = Region::centered_square(1.0);
        while self.tries < self.budget / 2 {
            self.tries += 1;
            let p = Point::new(rng.random_range(q1.x0..=q1.x1), rng.random_range(q1.y0..=q1.y1));
            let q = Point::new(rng.random_range(q1.x0..=q1.x1), rng.random_range(q1.y0..=q1.y1));
            let (mut s, mut r) = (p, q);
            let cs = self.coloring.color(s);
            if self.coloring.color(r) == cs {
                continue;
            }
            while s.dist(r) >= self.epsilon {
                let m = s.lerp(r, 0.5);
                if self.coloring.color(m) == cs {
                    s = m;
                } else {
                    r = m;
                }
            }
            return Some((s, r));
        }
        None
    }

    fn walk(&mut self, s: Point, r: Point) {
        let step = self.epsilon / 4.0;
        let n = (TAU / step).ceil() as usize;
        for center in [s, r] {
            for i in 0..n {
                let beta = i as f64 * step;
                let kb = center + Point::new(beta.cos(), beta.sin());
                for m in -2..=2 {
                    let gamma = beta + FRAC_PI_3 + m as f64 * step;
                    let kg = center + Point::new(gamma.cos(), gamma.sin());
                    for y in [s, r] {
                        self.offer([y, kb, kg], SearchStrategy::Walk);
                        if self.done() || self.spent() {
                            return;
                        }
                    }
                }
            }
        }
    }

    fn random(&mut self, rng: &mut ChaCha8Rng) {
        let e = self.epsilon;
        while !self.done() && !self.spent() {
            let p = Point::new(rng.random_range(-2.0..=2.0), rng.random_range(-2.0..=2.0));
            let phi: f64 = rng.random_range(0.0..TAU);
            let l1 = 1.0 + rng.random_range(-e / 2.0..=e / 2.0);
            let l2 = 1.0 + rng.random_range(-e / 2.0..=e / 2.0);
            let turn = FRAC_PI_3 + rng.random_range(-e / 4.0..=e / 4.0);
            let b = p + Point::new(phi.cos(), phi.sin()) * l1;
            let c = p + Point::new((phi + turn).cos(), (phi + turn).sin()) * l2;
            self.offer([p, b, c], SearchStrategy::Random);
        }
    }
}

/// Looks for an ε-almost unit triangle inside Q(3) in each color class.
/// First a close opposite-colored pair `R, S` is located in Q(1) by random
/// sampling and bisection, then triples `{S or R, K(β), K(γ)}` with `K` on
/// the unit circle around `S` (or `R`) are examined; uniform random triangles
/// are the fallback. `tries` bounds the total number of candidates examined.
pub fn find_almost_unit<C: PlaneColoring + ?Sized>(
    coloring: &C,
    epsilon: f64,
    tries: u64,
    seed: u64,
) -> Result<AlmostUnitOutcome, ScanError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(ScanError::InvalidEpsilon(epsilon));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut search = AlmostSearch {
        coloring,
        epsilon,
        q3: Region::centered_square(3.0),
        tries: 0,
        budget: tries,
        black: None,
        white: None,
    };
    if let Some((s, r)) = search.close_pair(&mut rng) {
        search.walk(s, r);
    }
    search.random(&mut rng);
    Ok(match (search.black, search.white) {
        (Some(b), Some(w)) => AlmostUnitOutcome::Found(AlmostUnitPair {
            black_triangle: b,
            white_triangle: w,
            epsilon,
            tries_used: search.tries,
        }),
        (b, w) => {
            let mut missing = Vec::new();
            if b.is_none() {
                missing.push(Color::Black);
            }
            if w.is_none() {
                missing.push(Color::White);
            }
            AlmostUnitOutcome::Failure { missing, tries_used: search.tries }
        }
    })
}

/// Default angular tolerance for hexagon regularity.
pub const HEXAGON_ANGULAR_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HexagonProbe {
    pub center: Point,
    /// Direction of the boundary segment through `center`, white on its left.
    pub segment_direction: Point,
    /// Angle of `P₀` from `segment_direction`, when some hit lies within π/6 of it.
    pub alpha: Option<f64>,
    /// Intersections with `C(center)`, starting at `P₀` and running anticlockwise.
    pub points: Vec<Point>,
    pub tangent_hits: usize,
    pub max_angular_deviation: Option<f64>,
    pub orientation_pattern_ok: bool,
    pub regular: bool,
    pub feasible: bool,
}

/// Intersects the unit circle around the boundary point `a` with the
/// boundary inside `window` and tests for the regular-hexagon structure:
/// six transversal hits at consecutive angles π/3, the first and fourth on
/// segments oriented like the one through `a`, the rest oriented opposite.
pub fn hexagon_probe<C: PlaneColoring + ?Sized>(
    coloring: &C,
    a: Point,
    window: &Region,
    angular_tol: f64,
) -> Result<HexagonProbe, ScanError> {
    let tol = coloring.tolerance();
    let segs = coloring.boundary_segments(window);
    let home = segs
        .iter()
        .map(|s| (s.distance_to(a), s))
        .filter(|(d, _)| *d <= tol)
        .min_by(|x, y| x.0.total_cmp(&y.0))
        .map(|(_, s)| *s)
        .ok_or(ScanError::NotOnBoundary(a))?;
    let e = home.direction() * (1.0 / home.length());
    let vertices = coloring.boundary_vertices(window);
    let feasible = vertices.iter().all(|v| v.dist(a) > tol && (v.dist(a) - 1.0).abs() > tol);

    let hits = circle_polyline_intersections(&Circle::unit(a), &segs, tol);
    let tangent_hits = hits.iter().filter(|h| h.tangent).count();
    let mut angled: Vec<(f64, Point, Segment)> = hits
        .iter()
        .map(|h| {
            let d = h.point - a;
            (e.cross(d).atan2(e.dot(d)), h.point, segs[h.segment])
        })
        .collect();
    angled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let start = angled
        .iter()
        .enumerate()
        .filter(|(_, h)| h.0.abs() < FRAC_PI_6)
        .min_by(|x, y| x.1 .0.abs().total_cmp(&y.1 .0.abs()))
        .map(|(i, _)| i);
    if let Some(i) = start {
        angled.rotate_left(i);
    }
    let alpha = start.map(|_| angled[0].0);
    let points: Vec<Point> = angled.iter().map(|h| h.1).collect();

    let mut max_dev = None;
    let mut pattern = false;
    if angled.len() == 6 {
        let mut dev: f64 = 0.0;
        for i in 0..6 {
            let gap = (angled[(i + 1) % 6].0 - angled[i].0).rem_euclid(TAU);
            dev = dev.max((gap - FRAC_PI_3).abs());
        }
        max_dev = Some(dev);
        pattern = angled.iter().enumerate().all(|(i, h)| {
            let d = h.2.direction() * (1.0 / h.2.length());
            let same = i % 3 == 0;
            let aligned = if same { d.dot(e) > 0.0 } else { d.dot(e) < 0.0 };
            aligned && d.cross(e).abs() <= angular_tol.sin().max(1e-12)
        });
    }
    let regular = tangent_hits == 0
        && alpha.is_some_and(|al| al.abs() < FRAC_PI_6)
        && max_dev.is_some_and(|d| d <= angular_tol)
        && pattern;
    Ok(HexagonProbe {
        center: a,
        segment_direction: e,
        alpha,
        points,
        tangent_hits,
        max_angular_deviation: max_dev,
        orientation_pattern_ok: pattern,
        regular,
        feasible,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AngleEntry {
    pub vertex: Point,
    pub convex_angle: f64,
}

/// Boundary vertices in `window` where exactly two segments meet at a convex
/// angle of at most 2π/3.
pub fn boundary_angle_audit<C: PlaneColoring + ?Sized>(coloring: &C, window: &Region) -> Vec<AngleEntry> {
    let tol = coloring.tolerance();
    let segs = coloring.boundary_segments(window);
    let mut out = Vec::new();
    for v in coloring.boundary_vertices(window) {
        let away: Vec<Point> = segs
            .iter()
            .filter_map(|s| {
                if s.p.dist(v) <= tol {
                    Some(s.q - s.p)
                } else if s.q.dist(v) <= tol {
                    Some(s.p - s.q)
                } else {
                    None
                }
            })
            .collect();
        if away.len() != 2 {
            continue;
        }
        let angle = away[0].cross(away[1]).abs().atan2(away[0].dot(away[1]));
        if angle <= 2.0 * PI / 3.0 + tol {
            out.push(AngleEntry { vertex: v, convex_angle: angle });
        }
    }
    out
}
