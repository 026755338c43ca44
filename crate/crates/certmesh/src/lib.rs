//! Certified topology and ε-isotopic meshing of implicit algebraic plane
//! curves and surfaces, including singular ones.
//!
//! All certificates are computed in exact rational arithmetic: every decision
//! that affects topology (root counting, box exclusion, sign evaluation) is
//! either an exact computation over ℚ or a one-sided interval certificate.
//! Floating point never enters the pipeline.
//!
//! The crate is organised bottom-up:
//!
//! * [`ratpoly`] — sparse multivariate polynomials over ℚ in x, y, z:
//!   arithmetic, gcd, resultants, square-free decomposition, factor lists.
//! * [`interval`] — rational intervals and boxes, the box evaluation form
//!   `□f(B)` and the exclusion predicate built on it.
//! * [`rootiso`] — real-root isolation for triangular systems of one to three
//!   levels inside a box, with refinement of isolated points.
//! * [`curvetop`] — topology graphs of plane algebraic curves clipped to a
//!   box, with branch-number certificates and a cell decomposition.
//! * [`curvemesh`] — ε-accurate isotopic curve meshes combining subdivision
//!   in the regular region with isolation boxes around special points.
//! * [`surftop`] — topology polyhedra of algebraic surfaces via a projection
//!   curve, lifted columns, and exact incidence counting.
//! * [`surfmesh`] — ε-accurate isotopic surface meshes: extremal-point
//!   analysis, spatial-curve segregation, guarded octree subdivision, and a
//!   merge step that joins the singular and regular meshes watertightly.
//! * [`emit`] — JSON, SVG and OBJ output with deterministic byte layout.
//! * [`cli`] — the `certmesh` command-line front end.

pub mod cli;
pub mod curvemesh;
pub mod curvetop;
pub mod emit;
mod error;
pub mod interval;
pub mod ratpoly;
pub mod rootiso;
pub mod surfmesh;
pub mod surftop;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
