//! Two-colorings of the plane and tools for finding (or failing to find)
//! monochromatic congruent copies of triangles in them.

pub mod cli;
pub mod colorings;
pub mod forcing;
pub mod geom;
pub mod io;
pub mod lines;
pub mod scan;
pub mod svg;
