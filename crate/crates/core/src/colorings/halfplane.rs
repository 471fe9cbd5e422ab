use super::{Color, PlaneColoring};
use crate::geom::{clip_param_range, Point, Region, Segment, UnitVector, DEFAULT_TOLERANCE};

/// The closed half-plane `{p : p·normal ≥ offset}` gets `closed_color`, its
/// open complement the other color.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlaneColoring {
    normal: UnitVector,
    offset: f64,
    closed_color: Color,
    tol: f64,
}

impl HalfPlaneColoring {
    pub fn new(normal: UnitVector, offset: f64, closed_color: Color) -> Self {
        HalfPlaneColoring { normal, offset, closed_color, tol: DEFAULT_TOLERANCE }
    }

    /// `y ≥ 0` black.
    pub fn upper_black() -> Self {
        Self::new(UnitVector::Y, 0.0, Color::Black)
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn normal(&self) -> UnitVector {
        self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn closed_color(&self) -> Color {
        self.closed_color
    }

    fn signed(&self, p: Point) -> f64 {
        p.dot(self.normal.as_point()) - self.offset
    }
}

impl PlaneColoring for HalfPlaneColoring {
    fn color(&self, p: Point) -> Color {
        if self.signed(p) >= -self.tol {
            self.closed_color
        } else {
            self.closed_color.flip()
        }
    }

    fn is_on_boundary(&self, p: Point) -> bool {
        self.signed(p).abs() <= self.tol
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        self.signed(p).abs()
    }

    fn boundary_segments(&self, window: &Region) -> Vec<Segment> {
        let n = self.normal.as_point();
        let origin = n * self.offset;
        // The left of `dir` is the open side.
        let dir = n.perp();
        let dir = if self.closed_color == Color::Black { dir } else { -dir };
        match clip_param_range(origin, dir, f64::NEG_INFINITY, f64::INFINITY, window) {
            Some((t0, t1)) if t1 - t0 > self.tol => vec![Segment::oriented(origin + dir * t0, origin + dir * t1)],
            _ => Vec::new(),
        }
    }

    fn boundary_vertices(&self, _window: &Region) -> Vec<Point> {
        Vec::new()
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let h = HalfPlaneColoring::upper_black();
        assert_eq!(h.color(Point::new(0.0, 1.0)), Color::Black);
        assert_eq!(h.color(Point::new(0.0, -1.0)), Color::White);
        assert_eq!(h.color(Point::new(3.0, 0.0)), Color::Black);
        assert!(h.is_on_boundary(Point::new(3.0, 0.0)));
    }

    #[test]
    fn boundary_segment_orientation() {
        for closed in [Color::Black, Color::White] {
            let h = HalfPlaneColoring::new(UnitVector::normalize(Point::new(1.0, 2.0)).unwrap(), 0.3, closed);
            let segs = h.boundary_segments(&Region::new(-3.0, -3.0, 3.0, 3.0).unwrap());
            assert_eq!(segs.len(), 1);
            let s = segs[0];
            let left = s.midpoint() + s.direction().perp() * (0.01 / s.length());
            assert_eq!(h.color(left), Color::White);
            assert!(h.boundary_distance(s.p) < 1e-12 && h.boundary_distance(s.q) < 1e-12);
        }
    }
}
