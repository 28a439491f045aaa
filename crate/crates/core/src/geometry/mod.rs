//! Exact 2D convex geometry over the integer lattice.
//!
//! Polygons carry rational vertices in canonical order and an integral inequality
//! description; every predicate is evaluated by cross-multiplication in checked
//! 128-bit arithmetic. Degenerate regions (empty, point, segment) are ordinary values.

mod interval;
mod polygon;
mod vector;

pub use interval::{decompose_interval, RationalInterval};
pub use polygon::{
    face_in_direction, hull, hull_rational, intersect_halfplanes, lattice_points, minkowski_sum,
    pick_count, Axis, ConvexLatticePolygon, Dim, Face, HalfPlane, Slice,
};
pub use vector::{LatticeVector, RationalPoint, COORD_BOUND};
