//! 2D constant-curvature geometry kernel.
//!
//! One concrete model per curvature, all living in `R^3`:
//! - κ = +1: unit sphere `x² + y² + z² = 1`,
//! - κ = 0: plane `z = 0` (isometries act in homogeneous form on `(x, y, 1)`),
//! - κ = −1: upper sheet of `x² + y² − z² = −1` with the bilinear form
//!   `diag(1, 1, −1)`.
//!
//! Points are 3-vectors, isometries are 3×3 matrices, and the curvature is
//! carried on every value so that operations can reject mixed-curvature
//! input. All kernel types are immutable values and all operations are pure.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::tol::{EPS_ANTIPODAL, EPS_GEOM};

/// Sectional curvature of the model surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Curvature {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Curvature {
    /// The curvature value κ ∈ {+1, 0, −1}.
    pub fn kappa(self) -> i32 {
        match self {
            Curvature::Spherical => 1,
            Curvature::Euclidean => 0,
            Curvature::Hyperbolic => -1,
        }
    }

    pub fn from_kappa(kappa: i32) -> Option<Self> {
        match kappa {
            1 => Some(Curvature::Spherical),
            0 => Some(Curvature::Euclidean),
            -1 => Some(Curvature::Hyperbolic),
            _ => None,
        }
    }

    /// Generalized cosine: `cos t`, `1`, `cosh t`.
    pub fn cos_k(self, t: f64) -> f64 {
        match self {
            Curvature::Spherical => t.cos(),
            Curvature::Euclidean => 1.0,
            Curvature::Hyperbolic => t.cosh(),
        }
    }

    /// Generalized sine: `sin t`, `t`, `sinh t`.
    pub fn sin_k(self, t: f64) -> f64 {
        match self {
            Curvature::Spherical => t.sin(),
            Curvature::Euclidean => t,
            Curvature::Hyperbolic => t.sinh(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("mixed curvature: {0:?} vs {1:?}")]
    MixedCurvature(Curvature, Curvature),
    #[error("antipodal pair: no unique geodesic")]
    AntipodalPair,
    #[error("degenerate angle: coincident points")]
    DegenerateAngle,
    #[error("zero-length segment")]
    DegenerateSegment,
    #[error("no such triangle: {0}")]
    NoSuchTriangle(String),
    #[error("angles do not determine a Euclidean side")]
    EuclideanSideUnderdetermined,
    #[error("direction is not a unit tangent at the base point")]
    NonTangentDirection,
    #[error("collinear overlap")]
    CollinearOverlap,
    #[error("point does not satisfy the model constraint")]
    OffModel,
}

pub type Result<T> = std::result::Result<T, KernelError>;

/// A point of the model surface in ambient coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelPoint {
    coords: Vector3<f64>,
    kappa: Curvature,
}

/// Minkowski inner product for the `diag(1, 1, −1)` form.
fn mdot(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

fn clamp1(x: f64) -> f64 {
    x.clamp(-1.0, 1.0)
}

impl ModelPoint {
    /// Wraps raw coordinates, verifying the model constraint within a loose
    /// multiple of the normalization tolerance.
    pub fn new(coords: Vector3<f64>, kappa: Curvature) -> Result<Self> {
        let residual = match kappa {
            Curvature::Spherical => (coords.norm_squared() - 1.0).abs(),
            Curvature::Euclidean => coords.z.abs(),
            Curvature::Hyperbolic => {
                if coords.z <= 0.0 {
                    return Err(KernelError::OffModel);
                }
                (mdot(&coords, &coords) + 1.0).abs()
            }
        };
        if residual > 1e-6 {
            return Err(KernelError::OffModel);
        }
        Ok(Self::renormalized(coords, kappa))
    }

    /// Projects coordinates exactly onto the model surface.
    pub fn renormalized(coords: Vector3<f64>, kappa: Curvature) -> Self {
        let coords = match kappa {
            Curvature::Spherical => coords / coords.norm(),
            Curvature::Euclidean => Vector3::new(coords.x, coords.y, 0.0),
            Curvature::Hyperbolic => {
                let q = -mdot(&coords, &coords);
                coords * (1.0 / q.sqrt())
            }
        };
        ModelPoint { coords, kappa }
    }

    /// Base point of the canonical charts: `(0,0,1)` on the sphere and
    /// hyperboloid, the origin in the plane.
    pub fn base(kappa: Curvature) -> Self {
        let coords = match kappa {
            Curvature::Euclidean => Vector3::zeros(),
            _ => Vector3::z(),
        };
        ModelPoint { coords, kappa }
    }

    pub fn coords(&self) -> Vector3<f64> {
        self.coords
    }

    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    /// Homogeneous representative used by incidence computations: the plane
    /// lifts to `z = 1`, sphere and hyperboloid coordinates are used as-is.
    pub fn lifted(&self) -> Vector3<f64> {
        match self.kappa {
            Curvature::Euclidean => Vector3::new(self.coords.x, self.coords.y, 1.0),
            _ => self.coords,
        }
    }

    /// Residual of the model constraint (diagnostic).
    pub fn constraint_residual(&self) -> f64 {
        match self.kappa {
            Curvature::Spherical => (self.coords.norm_squared() - 1.0).abs(),
            Curvature::Euclidean => self.coords.z.abs(),
            Curvature::Hyperbolic => (mdot(&self.coords, &self.coords) + 1.0).abs(),
        }
    }
}

fn check_same(a: &ModelPoint, b: &ModelPoint) -> Result<Curvature> {
    if a.kappa != b.kappa {
        return Err(KernelError::MixedCurvature(a.kappa, b.kappa));
    }
    Ok(a.kappa)
}

/// Inner product on tangent vectors at a common base point.
fn tangent_dot(kappa: Curvature, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    match kappa {
        Curvature::Hyperbolic => mdot(a, b),
        _ => a.dot(b),
    }
}

/// Geodesic distance between two points of the same model.
///
/// Uses `atan2` (sphere) and the half-chord form (hyperboloid) so that tiny
/// separations are not drowned by the `acos`/`acosh` noise floor near 1.
pub fn dist(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    let kappa = check_same(p, q)?;
    Ok(match kappa {
        Curvature::Spherical => {
            let cross = p.coords.cross(&q.coords).norm();
            let dot = p.coords.dot(&q.coords);
            cross.atan2(dot)
        }
        Curvature::Euclidean => (p.coords - q.coords).norm(),
        Curvature::Hyperbolic => {
            let d = p.coords - q.coords;
            let chord2 = mdot(&d, &d);
            2.0 * (0.5 * chord2.max(0.0).sqrt()).asinh()
        }
    })
}

/// Euclidean norm of the coordinate difference; agrees with the geodesic
/// distance to first order and is the right metric for residual checks.
pub fn coord_distance(p: &ModelPoint, q: &ModelPoint) -> f64 {
    (p.coords - q.coords).norm()
}

/// Unit tangent at `p` pointing along the geodesic towards `q`.
///
/// Spherical antipodal pairs are rejected: they admit no unique geodesic.
pub fn direction_to(p: &ModelPoint, q: &ModelPoint) -> Result<Vector3<f64>> {
    let kappa = check_same(p, q)?;
    match kappa {
        Curvature::Spherical => {
            let c = p.coords.dot(&q.coords);
            if c < -1.0 + EPS_ANTIPODAL {
                return Err(KernelError::AntipodalPair);
            }
            let u = q.coords - p.coords * c;
            let n = u.norm();
            if n < EPS_GEOM {
                return Err(KernelError::DegenerateAngle);
            }
            Ok(u / n)
        }
        Curvature::Euclidean => {
            let u = q.coords - p.coords;
            let n = u.norm();
            if n < EPS_GEOM {
                return Err(KernelError::DegenerateAngle);
            }
            Ok(u / n)
        }
        Curvature::Hyperbolic => {
            let u = q.coords + p.coords * mdot(&p.coords, &q.coords);
            let n = mdot(&u, &u);
            if n < EPS_GEOM * EPS_GEOM {
                return Err(KernelError::DegenerateAngle);
            }
            Ok(u / n.sqrt())
        }
    }
}

/// Point at arc length `t` from `p` along the geodesic with initial unit
/// tangent `dir`.
pub fn exp_point(p: &ModelPoint, dir: &Vector3<f64>, t: f64) -> Result<ModelPoint> {
    let kappa = p.kappa;
    let ortho = tangent_dot(kappa, &p.lifted_tangent_base(), dir).abs();
    let unit = (tangent_dot(kappa, dir, dir) - 1.0).abs();
    if ortho > 1e-8 || unit > 1e-8 {
        return Err(KernelError::NonTangentDirection);
    }
    Ok(ModelPoint::renormalized(
        p.coords * kappa.cos_k(t) + dir * kappa.sin_k(t),
        kappa,
    ))
}

impl ModelPoint {
    /// Vector against which tangency at this point is measured: the point
    /// itself for the curved models, the surface normal `e_z` for the plane
    /// (planar tangents must have zero `z`-component).
    fn lifted_tangent_base(&self) -> Vector3<f64> {
        match self.kappa {
            Curvature::Euclidean => Vector3::z(),
            _ => self.coords,
        }
    }
}

/// Tangent transported along the geodesic `exp_point(p, dir, ·)` to the
/// parameter-`t` point: the unit velocity of the geodesic there.
pub fn transported_direction(p: &ModelPoint, dir: &Vector3<f64>, t: f64) -> Vector3<f64> {
    let k = p.kappa.kappa() as f64;
    *dir * p.kappa.cos_k(t) - p.coords * (k * p.kappa.sin_k(t))
}

/// Projects `v` onto the tangent space at `p` and normalizes; used to stop
/// tangency drift when directions are pushed through many isometries.
pub fn orthonormal_tangent(p: &ModelPoint, v: &Vector3<f64>) -> Vector3<f64> {
    let mut u = *v;
    match p.kappa {
        Curvature::Spherical => {
            u -= p.coords * p.coords.dot(&u);
            u / u.norm()
        }
        Curvature::Euclidean => {
            u.z = 0.0;
            u / u.norm()
        }
        Curvature::Hyperbolic => {
            u += p.coords * mdot(&p.coords, &u);
            u / mdot(&u, &u).sqrt()
        }
    }
}

/// Completes `(p, d)` to an oriented tangent frame: the tangent obtained by
/// rotating `d` a quarter turn counterclockwise at `p`.
pub fn perp_tangent(p: &ModelPoint, d: &Vector3<f64>) -> Vector3<f64> {
    match p.kappa {
        Curvature::Spherical => p.coords.cross(d),
        Curvature::Euclidean => Vector3::new(-d.y, d.x, 0.0),
        Curvature::Hyperbolic => {
            let c = p.coords.cross(d);
            let w = Vector3::new(c.x, c.y, -c.z);
            let n = mdot(&w, &w).sqrt();
            w / n
        }
    }
}

/// Rotates the unit tangent `d` at `p` by `theta` (counterclockwise).
pub fn rotate_tangent(p: &ModelPoint, d: &Vector3<f64>, theta: f64) -> Vector3<f64> {
    let w = perp_tangent(p, d);
    *d * theta.cos() + w * theta.sin()
}

/// Angle at `vertex` between the geodesics towards `p` and `q`, in `[0, π]`.
pub fn angle_at(vertex: &ModelPoint, p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    let kappa = check_same(vertex, p)?;
    check_same(vertex, q)?;
    let d1 = direction_to(vertex, p)?;
    let d2 = direction_to(vertex, q)?;
    Ok(clamp1(tangent_dot(kappa, &d1, &d2)).acos())
}

/// Side length opposite `alpha_i` of the κ ≠ 0 triangle with angles
/// `(alpha_i, alpha_j, alpha_k)`, by the dual law of cosines.
pub fn solve_side_from_angles(
    alpha_i: f64,
    alpha_j: f64,
    alpha_k: f64,
    kappa: Curvature,
) -> Result<f64> {
    let angles = [alpha_i, alpha_j, alpha_k];
    if angles.iter().any(|a| !(0.0..std::f64::consts::PI).contains(a) || *a <= 0.0) {
        return Err(KernelError::NoSuchTriangle("angle out of (0, π)".into()));
    }
    let sum: f64 = angles.iter().sum();
    let c = (alpha_i.cos() + alpha_j.cos() * alpha_k.cos()) / (alpha_j.sin() * alpha_k.sin());
    match kappa {
        Curvature::Spherical => {
            if sum <= std::f64::consts::PI {
                return Err(KernelError::NoSuchTriangle("spherical angle sum ≤ π".into()));
            }
            if alpha_j + alpha_k - alpha_i >= std::f64::consts::PI
                || alpha_i + alpha_k - alpha_j >= std::f64::consts::PI
                || alpha_i + alpha_j - alpha_k >= std::f64::consts::PI
            {
                return Err(KernelError::NoSuchTriangle(
                    "spherical polar triangle inequality".into(),
                ));
            }
            Ok(clamp1(c).acos())
        }
        Curvature::Hyperbolic => {
            if sum >= std::f64::consts::PI {
                return Err(KernelError::NoSuchTriangle("hyperbolic angle sum ≥ π".into()));
            }
            Ok(c.max(1.0).acosh())
        }
        Curvature::Euclidean => Err(KernelError::EuclideanSideUnderdetermined),
    }
}

/// Angle opposite side `a` of the triangle with sides `(a, b, c)`.
pub fn solve_angle_from_sides(a: f64, b: f64, c: f64, kappa: Curvature) -> Result<f64> {
    validate_triangle_sides(a, b, c, kappa)?;
    let cos_angle = match kappa {
        Curvature::Spherical => (a.cos() - b.cos() * c.cos()) / (b.sin() * c.sin()),
        Curvature::Euclidean => (b * b + c * c - a * a) / (2.0 * b * c),
        Curvature::Hyperbolic => (b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh()),
    };
    Ok(clamp1(cos_angle).acos())
}

/// Triangle-inequality (and, for the sphere, size) checks shared by the
/// solvers and the tetrahedron validator.
pub fn validate_triangle_sides(a: f64, b: f64, c: f64, kappa: Curvature) -> Result<()> {
    let sides = [a, b, c];
    if sides.iter().any(|s| !s.is_finite() || *s <= 0.0) {
        return Err(KernelError::NoSuchTriangle("non-positive side".into()));
    }
    if a >= b + c || b >= a + c || c >= a + b {
        return Err(KernelError::NoSuchTriangle("triangle inequality".into()));
    }
    if kappa == Curvature::Spherical {
        if sides.iter().any(|s| *s >= std::f64::consts::PI) {
            return Err(KernelError::NoSuchTriangle("spherical side ≥ π".into()));
        }
        if a + b + c >= 2.0 * std::f64::consts::PI {
            return Err(KernelError::NoSuchTriangle("spherical perimeter ≥ 2π".into()));
        }
    }
    Ok(())
}

/// An oriented geodesic segment with both endpoints on one model surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicSegment {
    pub start: ModelPoint,
    pub end: ModelPoint,
    pub length: f64,
}

impl GeodesicSegment {
    /// Builds the segment, rejecting spherical (near-)antipodal endpoints,
    /// which have no unique minor arc.
    pub fn new(start: ModelPoint, end: ModelPoint) -> Result<Self> {
        let kappa = check_same(&start, &end)?;
        let length = dist(&start, &end)?;
        if kappa == Curvature::Spherical && length > std::f64::consts::PI - EPS_ANTIPODAL {
            return Err(KernelError::AntipodalPair);
        }
        Ok(GeodesicSegment { start, end, length })
    }

    pub fn kappa(&self) -> Curvature {
        self.start.kappa
    }

    pub fn is_degenerate(&self) -> bool {
        self.length < EPS_GEOM
    }

    /// Unit tangent at the start towards the end.
    pub fn direction(&self) -> Result<Vector3<f64>> {
        if self.is_degenerate() {
            return Err(KernelError::DegenerateSegment);
        }
        direction_to(&self.start, &self.end)
    }

    /// Point at fraction `s ∈ [0, 1]` of the arc length.
    pub fn point_at(&self, s: f64) -> Result<ModelPoint> {
        if self.is_degenerate() {
            return Ok(self.start);
        }
        exp_point(&self.start, &self.direction()?, s * self.length)
    }

    /// Homogeneous coefficients of the supporting geodesic. A point `x` is
    /// on the geodesic iff `x.lifted() · pole == 0`, and the sign of that
    /// product is the side of `x` (consistent across all three models).
    pub fn pole(&self) -> Result<Vector3<f64>> {
        geodesic_pole(&self.start, &self.end)
    }
}

/// Homogeneous coefficients of the geodesic through two points; see
/// [`GeodesicSegment::pole`]. The result is normalized to unit Euclidean
/// length for conditioning only; its scale carries no meaning.
pub fn geodesic_pole(p: &ModelPoint, q: &ModelPoint) -> Result<Vector3<f64>> {
    check_same(p, q)?;
    let c = p.lifted().cross(&q.lifted());
    let n = c.norm();
    if n < EPS_GEOM * EPS_GEOM {
        return Err(KernelError::DegenerateSegment);
    }
    Ok(c / n)
}

/// Signed incidence of `x` with the geodesic of homogeneous coefficients
/// `pole`: zero on the geodesic, sign = side.
pub fn side_value(x: &ModelPoint, pole: &Vector3<f64>) -> f64 {
    x.lifted().dot(pole)
}

/// Parameters `t > 0` at which the geodesic ray `exp_point(p, d, t)` meets
/// the geodesic with the given pole, in increasing order, up to `t_max`.
pub fn ray_geodesic_crossings(
    p: &ModelPoint,
    d: &Vector3<f64>,
    pole: &Vector3<f64>,
    t_max: f64,
) -> Vec<f64> {
    let a = p.lifted().dot(pole);
    let b = match p.kappa {
        Curvature::Euclidean => Vector3::new(d.x, d.y, 0.0).dot(pole),
        _ => d.dot(pole),
    };
    let mut out = Vec::new();
    match p.kappa {
        Curvature::Spherical => {
            // a cos t + b sin t = 0, solutions t0 + kπ.
            if a.abs() < 1e-300 && b.abs() < 1e-300 {
                return out;
            }
            let t0 = (-a).atan2(b);
            let mut k = ((1e-12 - t0) / std::f64::consts::PI).ceil() as i64;
            loop {
                let t = t0 + (k as f64) * std::f64::consts::PI;
                if t > t_max {
                    break;
                }
                if t > 1e-12 {
                    out.push(t);
                }
                k += 1;
            }
        }
        Curvature::Euclidean => {
            if b.abs() > 1e-300 {
                let t = -a / b;
                if t > 1e-12 && t <= t_max {
                    out.push(t);
                }
            }
        }
        Curvature::Hyperbolic => {
            // a cosh t + b sinh t = 0 ⇔ tanh t = −a/b.
            if b.abs() > 1e-300 && (a / b).abs() < 1.0 {
                let t = (-a / b).atanh();
                if t > 1e-12 && t <= t_max {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A rigid motion of one model surface, as a 3×3 matrix: orthogonal for
/// κ = +1, Lorentz (preserving `diag(1,1,−1)` and the upper sheet) for
/// κ = −1, homogeneous planar motion for κ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry2 {
    matrix: Matrix3<f64>,
    kappa: Curvature,
}

impl Isometry2 {
    pub fn identity(kappa: Curvature) -> Self {
        Isometry2 {
            matrix: Matrix3::identity(),
            kappa,
        }
    }

    pub fn from_matrix(matrix: Matrix3<f64>, kappa: Curvature) -> Result<Self> {
        let iso = Isometry2 { matrix, kappa };
        if iso.structure_residual() > 1e-6 {
            return Err(KernelError::OffModel);
        }
        Ok(iso)
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        self.matrix
    }

    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    /// Deviation from the defining matrix identity of the isometry group.
    pub fn structure_residual(&self) -> f64 {
        let m = &self.matrix;
        match self.kappa {
            Curvature::Spherical => (m.transpose() * m - Matrix3::identity()).norm(),
            Curvature::Hyperbolic => {
                let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
                let r = (m.transpose() * j * m - j).norm();
                // The upper sheet must map to itself.
                if m[(2, 2)] <= 0.0 {
                    r + 1.0
                } else {
                    r
                }
            }
            Curvature::Euclidean => {
                let lin = m.fixed_view::<2, 2>(0, 0);
                let ortho = (lin.transpose() * lin - nalgebra::Matrix2::identity()).norm();
                let bottom = (m[(2, 0)].abs() + m[(2, 1)].abs() + (m[(2, 2)] - 1.0).abs()).abs();
                ortho + bottom
            }
        }
    }

    pub fn apply(&self, p: &ModelPoint) -> ModelPoint {
        debug_assert_eq!(self.kappa, p.kappa);
        match self.kappa {
            Curvature::Euclidean => {
                let v = self.matrix * p.lifted();
                ModelPoint::renormalized(Vector3::new(v.x, v.y, 0.0), self.kappa)
            }
            _ => ModelPoint::renormalized(self.matrix * p.coords, self.kappa),
        }
    }

    /// Pushes forward a tangent vector (the linear action).
    pub fn apply_tangent(&self, v: &Vector3<f64>) -> Vector3<f64> {
        match self.kappa {
            Curvature::Euclidean => {
                let w = self.matrix * Vector3::new(v.x, v.y, 0.0);
                Vector3::new(w.x, w.y, 0.0)
            }
            _ => self.matrix * v,
        }
    }

    pub fn compose(&self, other: &Isometry2) -> Isometry2 {
        debug_assert_eq!(self.kappa, other.kappa);
        Isometry2 {
            matrix: self.matrix * other.matrix,
            kappa: self.kappa,
        }
    }

    pub fn inverse(&self) -> Isometry2 {
        let m = match self.kappa {
            Curvature::Spherical => self.matrix.transpose(),
            Curvature::Hyperbolic => {
                let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
                j * self.matrix.transpose() * j
            }
            Curvature::Euclidean => {
                let r = self.matrix.fixed_view::<2, 2>(0, 0).transpose();
                let t = self.matrix.fixed_view::<2, 1>(0, 2);
                let ti = -r * t;
                Matrix3::new(
                    r[(0, 0)],
                    r[(0, 1)],
                    ti[0],
                    r[(1, 0)],
                    r[(1, 1)],
                    ti[1],
                    0.0,
                    0.0,
                    1.0,
                )
            }
        };
        Isometry2 {
            matrix: m,
            kappa: self.kappa,
        }
    }

    /// The orientation-preserving isometry taking the chart base point to `p`
    /// and the base direction `(1, 0, 0)` to the unit tangent `d` at `p`.
    pub fn frame_at(p: &ModelPoint, d: &Vector3<f64>) -> Isometry2 {
        let w = perp_tangent(p, d);
        let m = match p.kappa {
            Curvature::Euclidean => Matrix3::new(
                d.x, w.x, p.coords.x, d.y, w.y, p.coords.y, 0.0, 0.0, 1.0,
            ),
            _ => Matrix3::from_columns(&[*d, w, p.coords]),
        };
        Isometry2 {
            matrix: m,
            kappa: p.kappa,
        }
    }

    pub fn det(&self) -> f64 {
        self.matrix.determinant()
    }

    /// Re-projects the matrix onto the isometry group (Gram–Schmidt in the
    /// model's bilinear form) when that is numerically safe, stopping
    /// structural drift in long chains of compositions.
    ///
    /// Far from the origin, hyperboloid isometries have near-lightlike
    /// columns: their Minkowski norms are tiny differences of huge squares,
    /// and re-normalizing there *injects* error of order ‖M‖²ε instead of
    /// removing drift. Plain matrix products keep relative accuracy, so
    /// beyond a scale cutoff the matrix is returned unchanged.
    pub fn renormalized(&self) -> Isometry2 {
        if self.kappa == Curvature::Hyperbolic && self.matrix.norm() > 1e3 {
            return *self;
        }
        self.reproject()
    }

    fn reproject(&self) -> Isometry2 {
        let m = &self.matrix;
        let matrix = match self.kappa {
            Curvature::Spherical => {
                let mut c0 = m.column(0).into_owned();
                c0 /= c0.norm();
                let mut c1 = m.column(1).into_owned();
                c1 -= c0 * c0.dot(&c1);
                c1 /= c1.norm();
                let mut c2 = m.column(2).into_owned();
                c2 -= c0 * c0.dot(&c2) + c1 * c1.dot(&c2);
                c2 /= c2.norm();
                Matrix3::from_columns(&[c0, c1, c2])
            }
            Curvature::Hyperbolic => {
                // Columns: two spacelike, one timelike (upper sheet).
                let mut c2 = m.column(2).into_owned();
                c2 /= (-mdot(&c2, &c2)).sqrt();
                let mut c0 = m.column(0).into_owned();
                c0 += c2 * mdot(&c2, &c0);
                c0 /= mdot(&c0, &c0).sqrt();
                let mut c1 = m.column(1).into_owned();
                c1 += c2 * mdot(&c2, &c1);
                c1 -= c0 * mdot(&c0, &c1);
                c1 /= mdot(&c1, &c1).sqrt();
                Matrix3::from_columns(&[c0, c1, c2])
            }
            Curvature::Euclidean => {
                let mut c0 = Vector3::new(m[(0, 0)], m[(1, 0)], 0.0);
                c0 /= c0.norm();
                let mut c1 = Vector3::new(m[(0, 1)], m[(1, 1)], 0.0);
                c1 -= c0 * c0.dot(&c1);
                c1 /= c1.norm();
                Matrix3::new(
                    c0.x,
                    c1.x,
                    m[(0, 2)],
                    c0.y,
                    c1.y,
                    m[(1, 2)],
                    0.0,
                    0.0,
                    1.0,
                )
            }
        };
        Isometry2 {
            matrix,
            kappa: self.kappa,
        }
    }
}

/// Parameter `s ∈ [0, 1]` at which the segment's supporting geodesic meets
/// the geodesic of the given homogeneous coefficients, if the root falls on
/// the segment. Closed form per curvature from the incidence of the
/// arc-length parametrization.
pub fn segment_geodesic_root(seg: &GeodesicSegment, pole: &Vector3<f64>) -> Option<f64> {
    let s = segment_geodesic_root_any(seg, pole)?;
    (-1e-12..=1.0 + 1e-12)
        .contains(&s)
        .then(|| s.clamp(0.0, 1.0))
}

/// As [`segment_geodesic_root`] but returns the root of the supporting
/// geodesic even if it falls outside the segment.
pub fn segment_geodesic_root_any(seg: &GeodesicSegment, pole: &Vector3<f64>) -> Option<f64> {
    let l = seg.length;
    if l < EPS_GEOM {
        return None;
    }
    let a = seg.start.lifted().dot(pole);
    let b = seg.end.lifted().dot(pole);
    let u = match seg.kappa() {
        // x(u) ∝ sin(L−u)·A + sin(u)·B: root where tan u = a sin L / (a cos L − b).
        Curvature::Spherical => {
            let denom = a * l.cos() - b;
            (a * l.sin()).atan2(denom)
        }
        // Linear interpolation of the incidence value.
        Curvature::Euclidean => {
            if (a - b).abs() < 1e-300 {
                return None;
            }
            l * a / (a - b)
        }
        // x(u) ∝ sinh(L−u)·A + sinh(u)·B: tanh u = a sinh L / (a cosh L − b).
        Curvature::Hyperbolic => {
            let denom = a * l.cosh() - b;
            if denom.abs() < 1e-300 {
                return None;
            }
            let r = a * l.sinh() / denom;
            if r.abs() >= 1.0 {
                return None;
            }
            r.atanh()
        }
    };
    Some(u / l)
}

/// The involutive isometry fixing the supporting geodesic of `seg` pointwise.
pub fn reflect_across(seg: &GeodesicSegment) -> Result<Isometry2> {
    if seg.is_degenerate() {
        return Err(KernelError::DegenerateSegment);
    }
    let pole = seg.pole()?;
    let kappa = seg.kappa();
    let m = match kappa {
        Curvature::Spherical => {
            let n = pole / pole.norm();
            Matrix3::identity() - 2.0 * n * n.transpose()
        }
        Curvature::Hyperbolic => {
            let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
            let q = mdot(&pole, &pole); //, with pole = p̃×q̃: n^T J n of the Minkowski normal
            let jn = j * pole;
            Matrix3::identity() - (2.0 / q) * jn * pole.transpose()
        }
        Curvature::Euclidean => {
            // pole = (a, b, c) with ax + by + c = 0.
            let s = (pole.x * pole.x + pole.y * pole.y).sqrt();
            let (a, b, c) = (pole.x / s, pole.y / s, pole.z / s);
            Matrix3::new(
                1.0 - 2.0 * a * a,
                -2.0 * a * b,
                -2.0 * a * c,
                -2.0 * a * b,
                1.0 - 2.0 * b * b,
                -2.0 * b * c,
                0.0,
                0.0,
                1.0,
            )
        }
    };
    Ok(Isometry2 { matrix: m, kappa })
}

/// The unique transversal intersection point interior to both segments, if
/// any. Segments supported by one common geodesic yield `CollinearOverlap`
/// when they share more than boundary contact, `None` otherwise.
pub fn intersect_segments(
    s1: &GeodesicSegment,
    s2: &GeodesicSegment,
) -> Result<Option<ModelPoint>> {
    let kappa = check_same(&s1.start, &s2.start)?;
    if s1.is_degenerate() || s2.is_degenerate() {
        return Err(KernelError::DegenerateSegment);
    }
    let n1 = s1.pole()?;
    let n2 = s2.pole()?;
    let c = n1.cross(&n2);
    if c.norm() < 1e-12 {
        // Same supporting geodesic (for the plane, possibly the same line).
        let overlap = strictly_on_arc(s1, &s2.start)
            || strictly_on_arc(s1, &s2.end)
            || strictly_on_arc(s2, &s1.start)
            || strictly_on_arc(s2, &s1.end);
        if overlap {
            return Err(KernelError::CollinearOverlap);
        }
        return Ok(None);
    }
    let mut candidates: Vec<ModelPoint> = Vec::new();
    match kappa {
        Curvature::Spherical => {
            let u = c / c.norm();
            candidates.push(ModelPoint::renormalized(u, kappa));
            candidates.push(ModelPoint::renormalized(-u, kappa));
        }
        Curvature::Euclidean => {
            if c.z.abs() > 1e-12 * c.norm() {
                candidates.push(ModelPoint::renormalized(
                    Vector3::new(c.x / c.z, c.y / c.z, 0.0),
                    kappa,
                ));
            }
        }
        Curvature::Hyperbolic => {
            let q = mdot(&c, &c);
            if q < 0.0 {
                let mut u = c / (-q).sqrt();
                if u.z < 0.0 {
                    u = -u;
                }
                candidates.push(ModelPoint::renormalized(u, kappa));
            }
        }
    }
    for x in candidates {
        if interior_to_arc(s1, &x) && interior_to_arc(s2, &x) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `x` lies on the closed arc of `seg` (within the incidence tolerance).
pub fn on_arc(seg: &GeodesicSegment, x: &ModelPoint) -> bool {
    let d1 = dist(&seg.start, x).unwrap_or(f64::INFINITY);
    let d2 = dist(x, &seg.end).unwrap_or(f64::INFINITY);
    (d1 + d2 - seg.length).abs() < 10.0 * EPS_GEOM
}

fn interior_to_arc(seg: &GeodesicSegment, x: &ModelPoint) -> bool {
    if !on_arc(seg, x) {
        return false;
    }
    let d1 = dist(&seg.start, x).unwrap_or(0.0);
    let d2 = dist(x, &seg.end).unwrap_or(0.0);
    d1 > EPS_GEOM && d2 > EPS_GEOM
}

fn strictly_on_arc(seg: &GeodesicSegment, x: &ModelPoint) -> bool {
    interior_to_arc(seg, x)
}

/// Minimum distance from `p` to the segment, with the minimizing point.
/// If the orthogonal foot falls within the incidence tolerance of an
/// endpoint, the endpoint is reported.
pub fn point_segment_distance(p: &ModelPoint, seg: &GeodesicSegment) -> Result<(f64, ModelPoint)> {
    let kappa = check_same(p, &seg.start)?;
    if seg.is_degenerate() {
        return Ok((dist(p, &seg.start)?, seg.start));
    }
    let d_start = dist(p, &seg.start)?;
    let d_end = dist(p, &seg.end)?;
    let mut best = if d_start <= d_end {
        (d_start, seg.start)
    } else {
        (d_end, seg.end)
    };

    let pole = seg.pole()?;
    let feet: Vec<ModelPoint> = match kappa {
        Curvature::Spherical => {
            let n = pole / pole.norm();
            let u = p.coords - n * p.coords.dot(&n);
            if u.norm() < EPS_GEOM {
                // p is a pole of the supporting great circle: every point of
                // the segment is at distance π/2.
                return Ok((std::f64::consts::FRAC_PI_2, seg.start));
            }
            let f = u / u.norm();
            vec![
                ModelPoint::renormalized(f, kappa),
                ModelPoint::renormalized(-f, kappa),
            ]
        }
        Curvature::Euclidean => {
            let a = seg.start.coords;
            let b = seg.end.coords;
            let t = (p.coords - a).dot(&(b - a)) / (b - a).norm_squared();
            if (0.0..=1.0).contains(&t) {
                vec![ModelPoint::renormalized(a + (b - a) * t, kappa)]
            } else {
                vec![]
            }
        }
        Curvature::Hyperbolic => {
            let j = Matrix3::from_diagonal(&Vector3::new(1.0, 1.0, -1.0));
            let m = j * pole;
            let q = mdot(&m, &m);
            if q <= 0.0 {
                vec![]
            } else {
                let mh = m / q.sqrt();
                let u = p.coords - mh * mdot(&p.coords, &mh);
                let uu = mdot(&u, &u);
                if uu >= 0.0 {
                    vec![]
                } else {
                    let mut f = u / (-uu).sqrt();
                    if f.z < 0.0 {
                        f = -f;
                    }
                    vec![ModelPoint::renormalized(f, kappa)]
                }
            }
        }
    };
    for f in feet {
        if !on_arc(seg, &f) {
            continue;
        }
        let t = dist(&seg.start, &f)?;
        if t < EPS_GEOM {
            best = (d_start.min(best.0), seg.start);
            continue;
        }
        if t > seg.length - EPS_GEOM {
            best = (d_end.min(best.0), seg.end);
            continue;
        }
        let d = dist(p, &f)?;
        if d < best.0 {
            best = (d, f);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn sph(x: f64, y: f64, z: f64) -> ModelPoint {
        ModelPoint::new(Vector3::new(x, y, z), Curvature::Spherical).unwrap()
    }

    fn euc(x: f64, y: f64) -> ModelPoint {
        ModelPoint::new(Vector3::new(x, y, 0.0), Curvature::Euclidean).unwrap()
    }

    fn hyp(x: f64, y: f64, z: f64) -> ModelPoint {
        ModelPoint::new(Vector3::new(x, y, z), Curvature::Hyperbolic).unwrap()
    }

    #[test]
    fn dist_identity_and_axes() {
        let p = sph(1.0, 0.0, 0.0);
        assert_abs_diff_eq!(dist(&p, &p).unwrap(), 0.0, epsilon = 1e-15);
        let q = sph(0.0, 1.0, 0.0);
        assert_abs_diff_eq!(dist(&p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-15);
    }

    #[test]
    fn dist_hyperboloid_arc_length_parametrization() {
        let p = hyp(0.0, 0.0, 1.0);
        let q = hyp(1f64.sinh(), 0.0, 1f64.cosh());
        assert_abs_diff_eq!(dist(&p, &q).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dist_rejects_mixed_curvature() {
        let p = sph(1.0, 0.0, 0.0);
        let q = euc(1.0, 0.0);
        assert!(matches!(
            dist(&p, &q),
            Err(KernelError::MixedCurvature(_, _))
        ));
    }

    #[test]
    fn exp_point_identity_and_quarter_circle() {
        let p = sph(1.0, 0.0, 0.0);
        let d = Vector3::new(0.0, 1.0, 0.0);
        let r0 = exp_point(&p, &d, 0.0).unwrap();
        assert_abs_diff_eq!((r0.coords() - p.coords()).norm(), 0.0, epsilon = 1e-15);
        let r = exp_point(&p, &d, FRAC_PI_2).unwrap();
        assert_abs_diff_eq!((r.coords() - Vector3::new(0.0, 1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_point_hyperbolic_regular_edge() {
        // cosh/sinh evaluated at the edge length a with cosh a = √2 + 1,
        // the regular-tetrahedron edge for face angle π/4.
        let a = (2f64.sqrt() + 1.0).acosh();
        assert_abs_diff_eq!(a, 1.5285709194809982, epsilon = 1e-12);
        let p = hyp(0.0, 0.0, 1.0);
        let d = Vector3::new(1.0, 0.0, 0.0);
        let r = exp_point(&p, &d, a).unwrap();
        assert_abs_diff_eq!(r.coords().x, a.sinh(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.coords().z, 2f64.sqrt() + 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dist(&p, &r).unwrap(), a, epsilon = 1e-12);
    }

    #[test]
    fn exp_point_rejects_non_tangent() {
        let p = sph(1.0, 0.0, 0.0);
        let d = Vector3::new(1.0, 1.0, 0.0); // not orthogonal to p
        assert!(matches!(
            exp_point(&p, &d, 1.0),
            Err(KernelError::NonTangentDirection)
        ));
    }

    #[test]
    fn angle_at_coordinate_frame() {
        let v = sph(1.0, 0.0, 0.0);
        let p = sph(0.0, 1.0, 0.0);
        let q = sph(0.0, 0.0, 1.0);
        assert_abs_diff_eq!(angle_at(&v, &p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-12);
        // p on the geodesic v → q gives angle zero.
        let mid = exp_point(&v, &direction_to(&v, &q).unwrap(), 0.3).unwrap();
        assert_abs_diff_eq!(angle_at(&v, &mid, &q).unwrap(), 0.0, epsilon = 1e-7);
    }

    #[test]
    fn equilateral_right_angled_spherical_triangle() {
        // All sides and angles π/2.
        let a = sph(1.0, 0.0, 0.0);
        let b = sph(0.0, 1.0, 0.0);
        let c = sph(0.0, 0.0, 1.0);
        for (v, p, q) in [(a, b, c), (b, c, a), (c, a, b)] {
            assert_abs_diff_eq!(angle_at(&v, &p, &q).unwrap(), FRAC_PI_2, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            solve_angle_from_sides(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, Curvature::Spherical).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            solve_side_from_angles(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2, Curvature::Spherical).unwrap(),
            FRAC_PI_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn dual_law_examples() {
        // cos a = cos α / (1 − cos α) for the equilateral triangle.
        let alpha = 2.0 * PI / 3.0;
        let expected = (alpha.cos() / (1.0 - alpha.cos())).acos();
        let a = solve_side_from_angles(alpha, alpha, alpha, Curvature::Spherical).unwrap();
        assert_abs_diff_eq!(a, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 1.9106332362490186, epsilon = 1e-12);
        let back = solve_angle_from_sides(a, a, a, Curvature::Spherical).unwrap();
        assert_abs_diff_eq!(back, alpha, epsilon = 1e-12);

        let alpha = PI / 4.0;
        let expected = (alpha.cos() / (1.0 - alpha.cos())).acosh();
        let a = solve_side_from_angles(alpha, alpha, alpha, Curvature::Hyperbolic).unwrap();
        assert_abs_diff_eq!(a, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(a, 1.5285709194809982, epsilon = 1e-8);
        let back = solve_angle_from_sides(a, a, a, Curvature::Hyperbolic).unwrap();
        assert_abs_diff_eq!(back, alpha, epsilon = 1e-12);
    }

    #[test]
    fn euclidean_equilateral_angle() {
        let a = solve_angle_from_sides(1.0, 1.0, 1.0, Curvature::Euclidean).unwrap();
        assert_abs_diff_eq!(a, PI / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn side_solver_rejects_bad_angle_sums() {
        assert!(solve_side_from_angles(0.4, 0.4, 0.4, Curvature::Spherical).is_err());
        assert!(solve_side_from_angles(1.2, 1.2, 1.2, Curvature::Hyperbolic).is_err());
        assert!(matches!(
            solve_side_from_angles(1.0, 1.0, 1.2, Curvature::Euclidean),
            Err(KernelError::EuclideanSideUnderdetermined)
        ));
    }

    #[test]
    fn reflection_is_involutive_and_fixes_line() {
        let a = hyp(0.0, 0.0, 1.0);
        let b = hyp(1f64.sinh(), 0.0, 1f64.cosh());
        let seg = GeodesicSegment::new(a, b).unwrap();
        let r = reflect_across(&seg).unwrap();
        // diag(1, −1, 1) fixes the y = 0 geodesic on the hyperboloid.
        let expect = Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, 1.0));
        assert!((r.matrix() - expect).norm() < 1e-12);
        let p = hyp(0.3f64.sinh() * 0.6, 0.3f64.sinh() * 0.8, 0.3f64.cosh());
        let rp = r.apply(&p);
        let rrp = r.apply(&rp);
        assert!((rrp.coords() - p.coords()).norm() < crate::tol::EPS_NORM);
        assert_abs_diff_eq!(rp.coords().y, -p.coords().y, epsilon = 1e-12);
        let on_line = seg.point_at(0.5).unwrap();
        assert!((r.apply(&on_line).coords() - on_line.coords()).norm() < 1e-12);
    }

    #[test]
    fn segment_intersection_euclidean() {
        let s1 = GeodesicSegment::new(euc(-1.0, -1.0), euc(1.0, 1.0)).unwrap();
        let s2 = GeodesicSegment::new(euc(-1.0, 1.0), euc(1.0, -1.0)).unwrap();
        let x = intersect_segments(&s1, &s2).unwrap().unwrap();
        assert!((x.coords() - Vector3::zeros()).norm() < 1e-12);

        let s3 = GeodesicSegment::new(euc(0.0, 2.0), euc(1.0, 2.0)).unwrap();
        let s4 = GeodesicSegment::new(euc(0.0, 3.0), euc(1.0, 3.0)).unwrap();
        assert!(intersect_segments(&s3, &s4).unwrap().is_none());

        let s5 = GeodesicSegment::new(euc(0.0, 0.0), euc(2.0, 0.0)).unwrap();
        let s6 = GeodesicSegment::new(euc(1.0, 0.0), euc(3.0, 0.0)).unwrap();
        assert!(matches!(
            intersect_segments(&s5, &s6),
            Err(KernelError::CollinearOverlap)
        ));
    }

    #[test]
    fn segment_intersection_spherical_equator_meridian() {
        let equator = GeodesicSegment::new(sph(1.0, 0.0, 0.0), sph(0.0, 1.0, 0.0)).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mid = sph(s, s, 0.0);
        let north_dir = direction_to(&mid, &sph(0.0, 0.0, 1.0)).unwrap();
        let a = exp_point(&mid, &north_dir, 0.5).unwrap();
        let b = exp_point(&mid, &north_dir, -0.5).unwrap();
        let meridian = GeodesicSegment::new(a, b).unwrap();
        let x = intersect_segments(&equator, &meridian).unwrap().unwrap();
        assert!((x.coords() - mid.coords()).norm() < 1e-12);
    }

    #[test]
    fn point_segment_distance_euclidean() {
        let seg = GeodesicSegment::new(euc(-1.0, 0.0), euc(1.0, 0.0)).unwrap();
        let (d, foot) = point_segment_distance(&euc(0.0, 1.0), &seg).unwrap();
        assert_abs_diff_eq!(d, 1.0, epsilon = 1e-14);
        assert!((foot.coords() - Vector3::zeros()).norm() < 1e-14);
        let (d2, foot2) = point_segment_distance(&seg.start, &seg).unwrap();
        assert_abs_diff_eq!(d2, 0.0, epsilon = 1e-14);
        assert!((foot2.coords() - seg.start.coords()).norm() < 1e-14);
    }

    #[test]
    fn hyperbolic_foot_right_triangle_relations() {
        // The orthogonal foot from the apex of an isosceles triangle with
        // legs h and apex angle 2α̃ bisects the base. The right triangle cut
        // off by the foot (hypotenuse h, legs b and d, angle α̃ at the apex)
        // satisfies sinh b = sinh h sin α̃, cosh h = cosh d cosh b, and
        // tanh b = sinh d tan α̃.
        let alpha_tilde = 0.35f64;
        let h = 1.3f64;
        let apex = hyp(0.0, 0.0, 1.0);
        let d1 = Vector3::new(1.0, 0.0, 0.0);
        let d2 = rotate_tangent(&apex, &d1, 2.0 * alpha_tilde);
        let p1 = exp_point(&apex, &d1, h).unwrap();
        let p2 = exp_point(&apex, &d2, h).unwrap();
        let seg = GeodesicSegment::new(p1, p2).unwrap();
        let (d, foot) = point_segment_distance(&apex, &seg).unwrap();
        let b = dist(&p1, &foot).unwrap();
        assert_abs_diff_eq!(b, seg.length / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(b.sinh(), h.sinh() * alpha_tilde.sin(), epsilon = 1e-9);
        assert_abs_diff_eq!(h.cosh(), d.cosh() * b.cosh(), epsilon = 1e-9);
        assert_abs_diff_eq!(b.tanh(), d.sinh() * alpha_tilde.tan(), epsilon = 1e-9);
    }

    #[test]
    fn ray_crossing_matches_segment_intersection() {
        let p = euc(0.0, -1.0);
        let d = Vector3::new(0.0, 1.0, 0.0);
        let line = GeodesicSegment::new(euc(-1.0, 0.5), euc(1.0, 0.5)).unwrap();
        let ts = ray_geodesic_crossings(&p, &d, &line.pole().unwrap(), 10.0);
        assert_eq!(ts.len(), 1);
        assert_abs_diff_eq!(ts[0], 1.5, epsilon = 1e-12);
    }

    #[test]
    fn frames_are_isometries() {
        for kappa in [Curvature::Spherical, Curvature::Euclidean, Curvature::Hyperbolic] {
            let base = ModelPoint::base(kappa);
            let d0 = Vector3::new(1.0, 0.0, 0.0);
            let p = exp_point(&base, &rotate_tangent(&base, &d0, 0.4), 0.8).unwrap();
            let d = rotate_tangent(&p, &direction_to(&p, &base).unwrap(), 1.1);
            let f = Isometry2::frame_at(&p, &d);
            assert!(f.structure_residual() < 1e-9, "kappa {kappa:?}");
            assert!((f.apply(&base).coords() - p.coords()).norm() < 1e-9);
            let pushed = f.apply_tangent(&d0);
            assert!((pushed - d).norm() < 1e-9);
            let inv = f.inverse();
            let round = inv.compose(&f);
            assert!((round.matrix() - Matrix3::identity()).norm() < 1e-9);
        }
    }
}
