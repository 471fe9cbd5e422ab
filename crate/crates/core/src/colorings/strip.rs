use serde::{Deserialize, Serialize};

use super::{Color, ColoringError, PlaneColoring};
use crate::geom::{Point, Region, Segment, DEFAULT_TOLERANCE};

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Which edge of each strip belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StripBoundaryRule {
    /// Black iff `n·l√3 < y ≤ (n+½)·l√3`.
    #[serde(rename = "upper-closed")]
    UpperClosed,
    /// Black iff `n·l√3 ≤ y < (n+½)·l√3`.
    #[serde(rename = "lower-closed")]
    LowerClosed,
}

/// Alternating horizontal strips of width `l·√3/2`; strip `j` (between the
/// lines `y = j·w` and `y = (j+1)·w`) is black iff `j` is even.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StripColoring {
    scale: f64,
    rule: StripBoundaryRule,
    width: f64,
    tol: f64,
}

impl StripColoring {
    pub fn new(scale: f64, rule: StripBoundaryRule) -> Result<Self, ColoringError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(ColoringError::InvalidParameter { field: "scale", detail: format!("must be positive, got {scale}") });
        }
        Ok(StripColoring { scale, rule, width: scale * SQRT_3 / 2.0, tol: DEFAULT_TOLERANCE })
    }

    /// The unit-scale, upper-closed coloring.
    pub fn standard() -> Self {
        Self::new(1.0, StripBoundaryRule::UpperClosed).expect("valid")
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn rule(&self) -> StripBoundaryRule {
        self.rule
    }

    /// Distance between consecutive boundary lines.
    pub fn strip_width(&self) -> f64 {
        self.width
    }

    fn nearest_line(&self, y: f64) -> (i64, f64) {
        let k = (y / self.width).round();
        (k as i64, (y - k * self.width).abs())
    }

    fn line_color(&self, k: i64) -> Color {
        let odd = k.rem_euclid(2) == 1;
        match (self.rule, odd) {
            (StripBoundaryRule::UpperClosed, true) | (StripBoundaryRule::LowerClosed, false) => Color::Black,
            _ => Color::White,
        }
    }

    pub fn strip_color(&self, p: Point) -> Color {
        let (k, gap) = self.nearest_line(p.y);
        if gap <= self.tol {
            return self.line_color(k);
        }
        let j = (p.y / self.width).floor() as i64;
        if j.rem_euclid(2) == 0 {
            Color::Black
        } else {
            Color::White
        }
    }

    fn line_range(&self, window: &Region) -> std::ops::RangeInclusive<i64> {
        let lo = (window.y0 / self.width).ceil() as i64;
        let hi = (window.y1 / self.width).floor() as i64;
        lo..=hi
    }
}

impl PlaneColoring for StripColoring {
    fn color(&self, p: Point) -> Color {
        self.strip_color(p)
    }

    fn is_on_boundary(&self, p: Point) -> bool {
        self.nearest_line(p.y).1 <= self.tol
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        self.nearest_line(p.y).1
    }

    fn boundary_segments(&self, window: &Region) -> Vec<Segment> {
        self.line_range(window)
            .map(|k| {
                let y = k as f64 * self.width;
                let left = Point::new(window.x0, y);
                let right = Point::new(window.x1, y);
                // White above line k iff strip k is white, i.e. k odd.
                if k.rem_euclid(2) == 1 {
                    Segment::oriented(left, right)
                } else {
                    Segment::oriented(right, left)
                }
            })
            .collect()
    }

    fn boundary_vertices(&self, _window: &Region) -> Vec<Point> {
        Vec::new()
    }

    fn tolerance(&self) -> f64 {
        self.tol
    }
}
