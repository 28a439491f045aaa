//! Lattice-polygon combinatorics of section multiplication on smooth projective toric
//! surfaces.
//!
//! A line bundle `O(D)` on the surface of a complete smooth fan corresponds to the
//! polygon `P_D = { u : <u, v_i> >= -a_i }`, and its sections to the lattice points of
//! `P_D`. Multiplying sections is adding lattice points, so surjectivity of
//! `H^0(D) ⊗ H^0(E) -> H^0(D + E)` becomes a statement about sumsets of lattice points.
//!
//! - [`geometry`]: exact rational convex geometry (hulls, half-plane intersections,
//!   Minkowski sums, lattice point enumeration).
//! - [`toric`]: fans, torus-invariant divisors, their polygons and positivity classes.
//! - [`multiplication`]: decomposition witnesses, surjectivity checks and cokernels.
//! - [`reduction`]: rounding to globally generated divisors and cokernel sweeps.
//! - [`io`] and [`cli`]: file formats, CSV/SVG output and the command-line front end.

pub mod cli;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod io;
pub mod multiplication;
pub mod reduction;
pub mod toric;

pub use error::{Error, Result};

/// Exact rational scalar.
pub type Rational = num_rational::Ratio<i128>;
