//! Tolerance constants used across the crate.
//!
//! Developments compose at most a few hundred isometries at desk scale, and
//! points are renormalized onto the model surface after every application, so
//! accumulated drift stays well below the incidence tolerance.

/// Constraint residual on model-surface membership and isometry structure.
pub const EPS_NORM: f64 = 1e-10;

/// Incidence / containment tolerance (on-segment tests, gluing residuals).
pub const EPS_GEOM: f64 = 1e-9;

/// Consistency tolerance for the triangle solvers (law-of-sines residuals,
/// angle/side round trips).
pub const EPS_TRIG: f64 = 1e-8;

/// Classification radius for vertex hits. A traced segment that passes
/// within this distance of a vertex image is reported as hitting the vertex;
/// this is a semantic outcome, not an error, so it gets its own looser
/// threshold.
pub const EPS_VERTEX: f64 = 1e-7;

/// Closure detection for traced geodesics: positional tolerance and the
/// angular tolerance on the return direction, both in model units / radians.
pub const EPS_CLOSE: f64 = 1e-7;

/// Spherical pairs farther apart than π minus this have no unique geodesic
/// and are rejected wherever one is required.
pub const EPS_ANTIPODAL: f64 = 1e-7;

/// Spectral tolerance for classifying hyperbolic-plane isometries.
pub const EPS_CLASS: f64 = 1e-8;

/// Runtime-adjustable subset of the tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub geom: f64,
    pub vertex: f64,
    pub close: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            geom: EPS_GEOM,
            vertex: EPS_VERTEX,
            close: EPS_CLOSE,
        }
    }
}
