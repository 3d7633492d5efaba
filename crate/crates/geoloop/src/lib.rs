//! Geodesic loops on tetrahedra in spaces of constant curvature.
//!
//! The library works intrinsically: a tetrahedron is six edge lengths plus a
//! curvature sign, its faces are triangles of the model surface (unit sphere,
//! Euclidean plane, or upper hyperboloid), and every construction goes through
//! developments — isometric unfoldings of face sequences onto the model
//! surface, where surface geodesics become model geodesics.
//!
//! Module map:
//! - [`kernel`]: points, isometries, distances, triangle solvers and segment
//!   predicates for curvature +1, 0, −1, all as 3-vectors / 3×3 matrices.
//! - [`tetra`]: the combinatorial tetrahedron, intrinsic metric data,
//!   validity checks and per-vertex derived quantities.
//! - [`develop`]: unfoldings, edge-walking of geodesic segments through an
//!   unfolding, convexity of the unfolded polygon.
//! - [`trace`]: geodesic tracing on the tetrahedron surface, simplicity and
//!   crossing-signature analysis, (p,q) cutting sequences.
//! - [`sph_loops`]: existence / non-existence machinery for spherical
//!   geodesic loops through a vertex.
//! - [`hyp_loops`]: holonomy of (p,q) unfoldings, the closed geodesic as the
//!   holonomy axis, and vertex loops of type (p,q).
//! - [`cli`]: JSON schemas, SVG rendering and the command-line entry points.

pub mod cli;
pub mod develop;
pub mod hyp_loops;
pub mod kernel;
pub mod sph_loops;
pub mod tetra;
pub mod tol;
pub mod trace;

pub use kernel::Curvature;
