//! SVG rendering of developments and curves.
//!
//! Projections: stereographic from the point antipodal to the development
//! centroid (κ = +1), Poincaré disk (κ = −1), identity (κ = 0). Output is
//! deterministic: fixed element order, nine decimal digits.

use nalgebra::{Matrix3, Vector3};

use crate::develop::Development;
use crate::kernel::{Curvature, GeodesicSegment, ModelPoint};
use crate::trace::SurfaceCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    Stereographic,
    Poincare,
    Plane,
}

impl Projection {
    pub fn parse(s: &str) -> Option<Projection> {
        match s {
            "stereographic" => Some(Projection::Stereographic),
            "poincare" => Some(Projection::Poincare),
            "plane" => Some(Projection::Plane),
            _ => None,
        }
    }

    pub fn matches(self, kappa: Curvature) -> bool {
        matches!(
            (self, kappa),
            (Projection::Stereographic, Curvature::Spherical)
                | (Projection::Poincare, Curvature::Hyperbolic)
                | (Projection::Plane, Curvature::Euclidean)
        )
    }
}

struct Projector {
    projection: Projection,
    /// Rotation taking the development centroid to the projection pole.
    rotation: Matrix3<f64>,
}

impl Projector {
    fn new(projection: Projection, dev: &Development) -> Projector {
        let rotation = if projection == Projection::Stereographic {
            let mut sum = Vector3::zeros();
            for im in dev.vertex_images() {
                sum += im.point.coords();
            }
            let c = if sum.norm() > 1e-9 {
                sum / sum.norm()
            } else {
                Vector3::z()
            };
            rotation_to_pole(&c)
        } else {
            Matrix3::identity()
        };
        Projector {
            projection,
            rotation,
        }
    }

    fn project(&self, p: &ModelPoint) -> (f64, f64) {
        match self.projection {
            Projection::Plane => (p.coords().x, p.coords().y),
            Projection::Poincare => {
                let c = p.coords();
                (c.x / (1.0 + c.z), c.y / (1.0 + c.z))
            }
            Projection::Stereographic => {
                let c = self.rotation * p.coords();
                (c.x / (1.0 + c.z), c.y / (1.0 + c.z))
            }
        }
    }
}

/// Rotation matrix taking `c` to the north pole `(0,0,1)`.
fn rotation_to_pole(c: &Vector3<f64>) -> Matrix3<f64> {
    let target = Vector3::z();
    let axis = c.cross(&target);
    let s = axis.norm();
    let cos = c.dot(&target);
    if s < 1e-12 {
        if cos > 0.0 {
            return Matrix3::identity();
        }
        // Antipodal: rotate π about the x axis.
        return Matrix3::from_diagonal(&Vector3::new(1.0, -1.0, -1.0));
    }
    let k = axis / s;
    let kx = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
    Matrix3::identity() + kx * s + kx * kx * (1.0 - cos)
}

const SAMPLES: usize = 32;

fn fmt(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // normalize -0.0
    format!("{v:.9}")
}

fn sample_segment(seg: &GeodesicSegment, proj: &Projector, out: &mut Vec<(f64, f64)>) {
    for i in 0..=SAMPLES {
        let s = i as f64 / SAMPLES as f64;
        let p = seg.point_at(s).expect("sample");
        out.push(proj.project(&p));
    }
}

fn path_data(points: &[(f64, f64)], close: bool) -> String {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let cmd = if i == 0 { "M" } else { "L" };
        d.push_str(&format!("{cmd}{} {} ", fmt(*x), fmt(*y)));
    }
    if close {
        d.push('Z');
    } else if d.ends_with(' ') {
        d.pop();
    }
    d
}

/// Renders a development with optional curves. `curves` pairs each curve
/// with the placed-face index its first segment occupies.
pub fn render_development(
    dev: &Development,
    curves: &[(&SurfaceCurve, usize, &str)],
    projection: Projection,
) -> String {
    let proj = Projector::new(projection, dev);

    let mut face_paths: Vec<String> = Vec::new();
    for placed in dev.faces() {
        let mut pts = Vec::new();
        let [a, b, c] = placed.corners;
        for seg in [
            GeodesicSegment::new(a, b).expect("edge"),
            GeodesicSegment::new(b, c).expect("edge"),
            GeodesicSegment::new(c, a).expect("edge"),
        ] {
            sample_segment(&seg, &proj, &mut pts);
        }
        face_paths.push(path_data(&pts, true));
    }

    let mut glue_paths: Vec<String> = Vec::new();
    for g in dev.gluings() {
        let mut pts = Vec::new();
        sample_segment(&g.segment(), &proj, &mut pts);
        glue_paths.push(path_data(&pts, false));
    }

    let mut curve_paths: Vec<(String, String)> = Vec::new();
    for (curve, offset, class) in curves {
        let mut pts = Vec::new();
        for (i, seg) in curve.segments.iter().enumerate() {
            let placed = &dev.faces()[offset + i];
            debug_assert_eq!(placed.face, seg.face);
            let developed = GeodesicSegment::new(
                placed.placement.apply(&seg.chord.start),
                placed.placement.apply(&seg.chord.end),
            )
            .expect("developed chord");
            sample_segment(&developed, &proj, &mut pts);
        }
        curve_paths.push((class.to_string(), path_data(&pts, false)));
    }

    let mut labels: Vec<(String, f64, f64)> = Vec::new();
    for im in dev.vertex_images() {
        let (x, y) = proj.project(&im.point);
        labels.push((im.vertex.name().to_string(), x, y));
    }

    // Bounds over everything drawn.
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut visit = |x: f64, y: f64| {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    };
    for placed in dev.faces() {
        for corner in &placed.corners {
            let (x, y) = proj.project(corner);
            visit(x, y);
        }
    }
    for (_, x, y) in &labels {
        visit(*x, *y);
    }
    if !min_x.is_finite() {
        min_x = -1.0;
        max_x = 1.0;
        min_y = -1.0;
        max_y = 1.0;
    }
    let pad = 0.05 * ((max_x - min_x).max(max_y - min_y).max(1e-6));
    let (vx, vy) = (min_x - pad, min_y - pad);
    let (vw, vh) = (max_x - min_x + 2.0 * pad, max_y - min_y + 2.0 * pad);
    let stroke = 0.004 * vw.max(vh);
    let font = 0.03 * vw.max(vh);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt(vx),
        fmt(vy),
        fmt(vw),
        fmt(vh)
    ));
    svg.push_str(&format!(
        "<g fill=\"#f5f1e8\" stroke=\"#444444\" stroke-width=\"{}\">\n",
        fmt(stroke)
    ));
    for d in &face_paths {
        svg.push_str(&format!("<path class=\"face\" d=\"{d}\"/>\n"));
    }
    svg.push_str("</g>\n");
    svg.push_str(&format!(
        "<g fill=\"none\" stroke=\"#7a7a7a\" stroke-dasharray=\"{} {}\" stroke-width=\"{}\">\n",
        fmt(2.0 * stroke),
        fmt(2.0 * stroke),
        fmt(stroke)
    ));
    for d in &glue_paths {
        svg.push_str(&format!("<path class=\"glue\" d=\"{d}\"/>\n"));
    }
    svg.push_str("</g>\n");
    for (class, d) in &curve_paths {
        let color = match class.as_str() {
            "geodesic" => "#1f6fb2",
            _ => "#c23b22",
        };
        svg.push_str(&format!(
            "<path class=\"{class}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"{}\" d=\"{d}\"/>\n",
            fmt(1.5 * stroke)
        ));
    }
    svg.push_str(&format!("<g font-size=\"{}\" fill=\"#222222\">\n", fmt(font)));
    for (name, x, y) in &labels {
        svg.push_str(&format!(
            "<text class=\"label\" x=\"{}\" y=\"{}\">{name}</text>\n",
            fmt(*x),
            fmt(*y)
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::develop;
    use crate::kernel::Isometry2;
    use crate::tetra::{FaceId, TetraMetric};

    #[test]
    fn face_polygon_count_matches_development() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = develop::unroll_faces(
            &t,
            &[FaceId::F123, FaceId::F234, FaceId::F134],
            &Isometry2::identity(Curvature::Euclidean),
        )
        .unwrap();
        let svg = render_development(&dev, &[], Projection::Plane);
        assert_eq!(svg.matches("class=\"face\"").count(), 3);
    }

    #[test]
    fn deterministic_output() {
        let t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, 0.2).unwrap();
        let dev = develop::unroll_faces(
            &t,
            &[FaceId::F123, FaceId::F234],
            &Isometry2::identity(Curvature::Hyperbolic),
        )
        .unwrap();
        let a = render_development(&dev, &[], Projection::Poincare);
        let b = render_development(&dev, &[], Projection::Poincare);
        assert_eq!(a, b);
    }
}
