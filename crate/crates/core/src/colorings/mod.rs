//! Concrete two-colorings of the plane.
//!
//! Every family implements [`PlaneColoring`]: a total color query plus the
//! boundary accessors the scans and structural probes need. Boundary segments
//! handed out by [`PlaneColoring::boundary_segments`] are oriented so that the
//! white face lies on the left of `p → q`.

mod halfplane;
mod polygonal;
mod strip;
mod zebra;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{GeomError, Point, Region, Segment};

pub use crate::geom::TriangleSpec;
pub use halfplane::HalfPlaneColoring;
pub use polygonal::{PolySegment, PolygonalColoring, Seed};
pub use strip::{StripBoundaryRule, StripColoring};
pub use zebra::{
    check_zebra_conditions, ConditionD, ConditionVerdict, LensFailure, LensWitness, PairWitness, ZebraColoring, ZebraProfile,
    ZebraReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Black,
    White,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Color::Black => "black",
            Color::White => "white",
        }
    }
}

/// Which color the even-indexed members of an alternating family receive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    #[serde(rename = "even-black")]
    EvenBlack,
    #[serde(rename = "even-white")]
    EvenWhite,
}

impl Parity {
    pub fn color_of(self, index: i64) -> Color {
        let even = index.rem_euclid(2) == 0;
        match (self, even) {
            (Parity::EvenBlack, true) | (Parity::EvenWhite, false) => Color::Black,
            _ => Color::White,
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::EvenBlack => Parity::EvenWhite,
            Parity::EvenWhite => Parity::EvenBlack,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ColoringError {
    #[error("malformed zebra profile: {0}")]
    MalformedProfile(String),
    #[error("invalid polygonal coloring: {0}")]
    InvalidPolygonal(String),
    #[error("no seed reaches {0} without passing through a boundary vertex or along a segment")]
    UnresolvedFace(Point),
    #[error("invalid parameter `{field}`: {detail}")]
    InvalidParameter { field: &'static str, detail: String },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A total two-coloring of the plane with a piecewise-linear boundary.
pub trait PlaneColoring {
    fn color(&self, p: Point) -> Color;

    /// Whether `p` lies within the coloring's tolerance of the boundary.
    fn is_on_boundary(&self, p: Point) -> bool;

    /// Euclidean distance from `p` to the boundary (`f64::INFINITY` when the
    /// coloring has none).
    fn boundary_distance(&self, p: Point) -> f64;

    /// Boundary pieces meeting `window`, clipped to it and oriented with the
    /// white face on the left.
    fn boundary_segments(&self, window: &Region) -> Vec<Segment>;

    /// Boundary vertices (segment endpoints that are corners of the boundary,
    /// not clip artifacts) inside `window`.
    fn boundary_vertices(&self, window: &Region) -> Vec<Point>;

    fn tolerance(&self) -> f64;
}

/// Any of the four implemented families.
#[derive(Clone, Debug, PartialEq)]
pub enum Coloring {
    Strip(StripColoring),
    Zebra(ZebraColoring),
    HalfPlane(HalfPlaneColoring),
    Polygonal(PolygonalColoring),
}

impl Coloring {
    pub fn kind(&self) -> &'static str {
        match self {
            Coloring::Strip(_) => "strip",
            Coloring::Zebra(_) => "zebra",
            Coloring::HalfPlane(_) => "halfplane",
            Coloring::Polygonal(_) => "polygonal",
        }
    }

    pub fn with_tolerance(self, tol: f64) -> Coloring {
        match self {
            Coloring::Strip(c) => Coloring::Strip(c.with_tolerance(tol)),
            Coloring::Zebra(c) => Coloring::Zebra(c.with_tolerance(tol)),
            Coloring::HalfPlane(c) => Coloring::HalfPlane(c.with_tolerance(tol)),
            Coloring::Polygonal(c) => Coloring::Polygonal(c.with_tolerance(tol)),
        }
    }
}

macro_rules! dispatch {
    ($self:ident, $c:ident => $e:expr) => {
        match $self {
            Coloring::Strip($c) => $e,
            Coloring::Zebra($c) => $e,
            Coloring::HalfPlane($c) => $e,
            Coloring::Polygonal($c) => $e,
        }
    };
}

impl PlaneColoring for Coloring {
    fn color(&self, p: Point) -> Color {
        dispatch!(self, c => c.color(p))
    }

    fn is_on_boundary(&self, p: Point) -> bool {
        dispatch!(self, c => c.is_on_boundary(p))
    }

    fn boundary_distance(&self, p: Point) -> f64 {
        dispatch!(self, c => c.boundary_distance(p))
    }

    fn boundary_segments(&self, window: &Region) -> Vec<Segment> {
        dispatch!(self, c => c.boundary_segments(window))
    }

    fn boundary_vertices(&self, window: &Region) -> Vec<Point> {
        dispatch!(self, c => c.boundary_vertices(window))
    }

    fn tolerance(&self) -> f64 {
        dispatch!(self, c => c.tolerance())
    }
}

impl From<StripColoring> for Coloring {
    fn from(c: StripColoring) -> Self {
        Coloring::Strip(c)
    }
}

impl From<ZebraColoring> for Coloring {
    fn from(c: ZebraColoring) -> Self {
        Coloring::Zebra(c)
    }
}

impl From<HalfPlaneColoring> for Coloring {
    fn from(c: HalfPlaneColoring) -> Self {
        Coloring::HalfPlane(c)
    }
}

impl From<PolygonalColoring> for Coloring {
    fn from(c: PolygonalColoring) -> Self {
        Coloring::Polygonal(c)
    }
}
