//! Spherical geodesic loops through a tetrahedron vertex.
//!
//! A loop through a vertex can cross only two edges — two of the three edges
//! of the opposite face, sharing a middle vertex — so each vertex has
//! exactly three candidates, one per middle vertex. A candidate is resolved
//! by developing its 3-face strip, taking the great circle through the two
//! apex images, and walking the arc that enters the strip; existence is
//! exactly survival of that walk.

use nalgebra::Vector3;
use thiserror::Error;

use crate::develop::{self, Development, DevelopError, WalkFailure};
use crate::kernel::{self, Curvature, KernelError, ModelPoint};
use crate::tetra::{FaceId, TetraMetric, VertexId, EDGES, FACES, VERTICES};
use crate::tol::{Tolerances, EPS_ANTIPODAL};
use crate::trace::{self, SurfaceCurve, TraceError};

#[derive(Debug, Error)]
pub enum SphError {
    #[error("spherical only")]
    SphericalOnly,
    #[error("theorem hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("kernel: {0}")]
    Kernel(#[from] KernelError),
    #[error("develop: {0}")]
    Develop(#[from] DevelopError),
    #[error("trace: {0}")]
    Trace(#[from] TraceError),
}

/// Why a candidate admits no loop, with a conditioning indicator: how far
/// the witness sits from the degenerate boundary of its class.
#[derive(Debug, Clone)]
pub enum BlockedWitness {
    /// Apex images (nearly) antipodal: no unique great circle through them.
    Antipodal { dist: f64 },
    /// Neither arc of the great circle enters the first face at the apex.
    DoesNotEnterStrip { margin: f64 },
    /// The arc leaves the strip through a non-scheduled edge.
    ExitBoundary {
        face_index: usize,
        edge: crate::tetra::EdgeId,
        point: ModelPoint,
        condition: f64,
    },
    /// The arc passes through a vertex image.
    VertexHit { vertex: VertexId, dist: f64 },
    /// The arc ends before reaching the scheduled edge (internal).
    RanOut,
    /// The walk finished away from the second apex image (internal).
    EndMismatch { dist: f64 },
}

impl BlockedWitness {
    pub fn kind(&self) -> &'static str {
        match self {
            BlockedWitness::Antipodal { .. } => "antipodal",
            BlockedWitness::DoesNotEnterStrip { .. } => "exit",
            BlockedWitness::ExitBoundary { .. } => "exit",
            BlockedWitness::VertexHit { .. } => "vertex hit",
            BlockedWitness::RanOut => "ran out",
            BlockedWitness::EndMismatch { .. } => "end mismatch",
        }
    }
}

#[derive(Debug, Clone)]
pub enum CandidateStatus {
    Unresolved,
    Exists {
        curve: SurfaceCurve,
        arc_length: f64,
    },
    Blocked {
        witness: BlockedWitness,
    },
}

/// One loop candidate: an apex, a middle vertex of the opposite face, and
/// the developed 3-face strip joining the two apex images.
#[derive(Debug, Clone)]
pub struct LoopCandidate {
    pub apex: VertexId,
    pub middle: VertexId,
    pub development: Development,
    pub apex_images: (ModelPoint, ModelPoint),
    pub status: CandidateStatus,
}

impl LoopCandidate {
    /// The two edges the candidate loop would cross: the edges of the face
    /// opposite the apex that contain the middle vertex.
    pub fn crossed_edges(&self) -> [crate::tetra::EdgeId; 2] {
        let opposite = FaceId::opposite_vertex(self.apex);
        let mut out = Vec::with_capacity(2);
        for e in opposite.edges() {
            if e.contains(self.middle) {
                out.push(e);
            }
        }
        [out[0], out[1]]
    }
}

/// Builds the three unresolved candidates at `apex`.
pub fn enumerate_candidates(
    t: &TetraMetric,
    apex: VertexId,
) -> Result<Vec<LoopCandidate>, SphError> {
    if t.kappa() != Curvature::Spherical {
        return Err(SphError::SphericalOnly);
    }
    let mut out = Vec::with_capacity(3);
    let mut middles: Vec<VertexId> = FaceId::opposite_vertex(apex).vertices().to_vec();
    middles.sort();
    for middle in middles {
        let development = develop::vertex_pair_development(t, apex, middle)?;
        let apex_images = develop::apex_images(&development, apex);
        out.push(LoopCandidate {
            apex,
            middle,
            development,
            apex_images,
            status: CandidateStatus::Unresolved,
        });
    }
    Ok(out)
}

/// Images become indistinguishable below this separation; the candidate
/// circle is then fixed by the flat-cone limit construction.
const EPS_COINCIDENT: f64 = 1e-6;

/// Decides the candidate: computes the great-circle arc between the apex
/// images that enters the strip and walks it. On success the folded curve is
/// a simple geodesic loop at the apex.
pub fn resolve_candidate(c: &LoopCandidate) -> Result<LoopCandidate, SphError> {
    let tol = Tolerances::default();
    let (img1, img2) = c.apex_images;
    let d12 = kernel::dist(&img1, &img2)?;
    let mut resolved = c.clone();

    if d12 > std::f64::consts::PI - EPS_ANTIPODAL {
        resolved.status = CandidateStatus::Blocked {
            witness: BlockedWitness::Antipodal { dist: d12 },
        };
        return Ok(resolved);
    }

    let first_face = &c.development.faces()[0];
    let two_pi = 2.0 * std::f64::consts::PI;
    // Arcs of the great circle through the two images, from the first image:
    // lengths d12 + 2πk and (2π − d12) + 2πk per direction. The loop's three
    // chords are each shorter than π, so arcs of length ≥ 3π are excluded;
    // the winding arc is what wrapped strips (hub cone angle > 2π) need.
    let dirs: Vec<(Vector3<f64>, f64)> = if d12 < EPS_COINCIDENT {
        // Flat-cone limit: the circle of radius π/2 centered on the ray from
        // the image through the hub, traversed full turn.
        let hub = first_face.corner(c.middle);
        let to_hub = kernel::direction_to(&img1, &hub)?;
        let tangent = kernel::perp_tangent(&img1, &to_hub);
        vec![(tangent, two_pi), (-tangent, two_pi)]
    } else {
        let u = kernel::direction_to(&img1, &img2)?;
        let mut v = vec![
            (u, d12),
            (-u, two_pi - d12),
            (u, two_pi + d12),
            (-u, 2.0 * two_pi - d12),
        ];
        v.retain(|(_, l)| *l < 3.0 * std::f64::consts::PI);
        v.sort_by(|a, b| a.1.total_cmp(&b.1));
        v
    };

    // Walk the arcs whose initial direction enters the first face's corner
    // wedge, shortest first. Directions grazing the wedge boundary (margin
    // near zero, e.g. the right-angled regular tetrahedron where the arc
    // runs along edges) are walked anyway so that the vertex-hit logic can
    // classify them.
    let mut entered_any = false;
    let mut best_margin = f64::NEG_INFINITY;
    let mut failure: Option<BlockedWitness> = None;
    for (dir, arc_len) in &dirs {
        let margin = wedge_entry_margin(first_face, c.apex, dir);
        best_margin = best_margin.max(margin);
        if margin < -1e-9 {
            continue;
        }
        entered_any = true;
        match develop::walk_ray(&c.development, &img1, dir, *arc_len, Some(&img2), &tol)? {
            Ok(walk) => {
                let curve =
                    trace::fold_walk(&c.development, &img1, &img2, &walk, Some(c.apex), None)?;
                let (simple, _witness) = trace::is_simple(&curve);
                debug_assert!(simple, "resolved spherical loop must be simple");
                resolved.status = CandidateStatus::Exists {
                    curve,
                    arc_length: *arc_len,
                };
                return Ok(resolved);
            }
            Err(fail) => {
                let witness = match fail {
                    WalkFailure::ExitBoundary {
                        face_index,
                        edge,
                        point,
                        ..
                    } => {
                        // Conditioning: distance of the exit point to the
                        // nearest endpoint image of the exit edge.
                        let seg = c.development.faces()[face_index].placed_edge(edge);
                        let condition = kernel::dist(&point, &seg.start)?
                            .min(kernel::dist(&point, &seg.end)?);
                        BlockedWitness::ExitBoundary {
                            face_index,
                            edge,
                            point,
                            condition,
                        }
                    }
                    WalkFailure::VertexHit { vertex, dist, .. } => {
                        BlockedWitness::VertexHit { vertex, dist }
                    }
                    WalkFailure::RanOut { .. } => BlockedWitness::RanOut,
                    WalkFailure::EndMismatch { dist, .. } => BlockedWitness::EndMismatch { dist },
                };
                let rank = |w: &BlockedWitness| match w {
                    BlockedWitness::VertexHit { .. } => 0,
                    BlockedWitness::ExitBoundary { .. } => 1,
                    BlockedWitness::EndMismatch { .. } => 2,
                    BlockedWitness::RanOut => 3,
                    _ => 4,
                };
                if failure.as_ref().map_or(true, |f| rank(&witness) < rank(f)) {
                    failure = Some(witness);
                }
            }
        }
    }
    resolved.status = CandidateStatus::Blocked {
        witness: if entered_any {
            failure.expect("walked at least one arc")
        } else {
            BlockedWitness::DoesNotEnterStrip {
                margin: best_margin,
            }
        },
    };
    Ok(resolved)
}

/// Minimum inward derivative of the two first-face edges through the apex
/// corner: positive iff `dir` points into the corner wedge.
fn wedge_entry_margin(
    face: &crate::develop::PlacedFace,
    apex: VertexId,
    dir: &Vector3<f64>,
) -> f64 {
    let lifted_dir = match face.corners[0].kappa() {
        Curvature::Euclidean => Vector3::new(dir.x, dir.y, 0.0),
        _ => *dir,
    };
    let mut margin = f64::INFINITY;
    for (k, e) in face.face.edges().iter().enumerate() {
        if !e.contains(apex) {
            continue;
        }
        margin = margin.min(lifted_dir.dot(&face.inward_poles[k]));
    }
    margin
}

/// The explicit positive-curvature construction: the pole `O` of the great
/// circle through the two apex images, on the middle-vertex side, and the
/// circle of radius π/2 around it. Requires every face angle and every edge
/// to exceed π/2.
#[derive(Debug, Clone)]
pub struct Thm2SCertificate {
    pub o_point: ModelPoint,
    /// Distance from O to the middle vertex image (must be < π/2).
    pub dist_middle: f64,
    /// Distances from O to the two other boundary vertex images (> π/2).
    pub dist_others: [(VertexId, f64); 2],
    /// Greatest deviation of the walked arc from the π/2 circle around O.
    pub radius_residual: f64,
    /// Coordinate agreement between the O-construction arc and the
    /// walk-resolved arc (crossing points and endpoints).
    pub agreement: f64,
}

pub fn construct_loop_thm2s(
    t: &TetraMetric,
    apex: VertexId,
    middle: VertexId,
) -> Result<(SurfaceCurve, Thm2SCertificate), SphError> {
    if t.kappa() != Curvature::Spherical {
        return Err(SphError::SphericalOnly);
    }
    for f in FACES {
        for v in f.vertices() {
            if t.face_angle(f, v) <= std::f64::consts::FRAC_PI_2 {
                return Err(SphError::HypothesesNotMet(format!(
                    "face angle at {v} of {f} is ≤ π/2"
                )));
            }
        }
    }
    for e in EDGES {
        if t.edge_length(e) <= std::f64::consts::FRAC_PI_2 {
            return Err(SphError::HypothesesNotMet(format!("edge {e} is ≤ π/2")));
        }
    }
    let development = develop::vertex_pair_development(t, apex, middle)?;
    let (img1, img2) = develop::apex_images(&development, apex);
    let hub = development.faces()[0].corner(middle);
    let d12 = kernel::dist(&img1, &img2)?;
    let o_point = if d12 < EPS_COINCIDENT {
        let to_hub = kernel::direction_to(&img1, &hub)?;
        kernel::exp_point(&img1, &to_hub, std::f64::consts::FRAC_PI_2)?
    } else {
        let pole = kernel::geodesic_pole(&img1, &img2)?;
        let mut o = ModelPoint::renormalized(pole, Curvature::Spherical);
        if o.coords().dot(&hub.coords()) < 0.0 {
            o = ModelPoint::renormalized(-pole, Curvature::Spherical);
        }
        o
    };
    let dist_middle = kernel::dist(&o_point, &hub)?;
    // The other two boundary vertices of the strip.
    let mut others: Vec<(VertexId, f64)> = Vec::new();
    for v in VERTICES {
        if v == apex || v == middle {
            continue;
        }
        let image = development
            .vertex_images()
            .iter()
            .find(|im| im.vertex == v)
            .expect("strip contains the vertex");
        others.push((v, kernel::dist(&o_point, &image.point)?));
    }
    let candidate = LoopCandidate {
        apex,
        middle,
        development: development.clone(),
        apex_images: (img1, img2),
        status: CandidateStatus::Unresolved,
    };
    let resolved = resolve_candidate(&candidate)?;
    let curve = match resolved.status {
        CandidateStatus::Exists { curve, .. } => curve,
        CandidateStatus::Blocked { witness } => {
            return Err(SphError::HypothesesNotMet(format!(
                "walk blocked ({}) under theorem hypotheses",
                witness.kind()
            )))
        }
        CandidateStatus::Unresolved => unreachable!(),
    };
    // Certificate cross-checks: every developed point of the curve is at
    // distance π/2 from O.
    let mut radius_residual = 0.0f64;
    let mut agreement = 0.0f64;
    for (seg, placed) in curve.segments.iter().zip(development.faces()) {
        for pt in [&seg.chord.start, &seg.chord.end] {
            let developed = placed.placement.apply(pt);
            let r = kernel::dist(&o_point, &developed)?;
            radius_residual = radius_residual.max((r - std::f64::consts::FRAC_PI_2).abs());
        }
    }
    for (pt, img) in [(curve.segments[0].chord.start, img1)] {
        let developed = development.faces()[0].placement.apply(&pt);
        agreement = agreement.max(kernel::coord_distance(&developed, &img));
    }
    let cert = Thm2SCertificate {
        o_point,
        dist_middle,
        dist_others: [others[0], others[1]],
        radius_residual,
        agreement,
    };
    Ok((curve, cert))
}

/// One row of the per-vertex loop census.
#[derive(Debug, Clone)]
pub struct CensusRow {
    pub apex: VertexId,
    pub middle: VertexId,
    pub candidate: LoopCandidate,
}

#[derive(Debug, Clone, Default)]
pub struct Census {
    pub rows: Vec<CensusRow>,
}

impl Census {
    pub fn exists_count(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.candidate.status, CandidateStatus::Exists { .. }))
            .count()
    }

    pub fn all_blocked_by_vertex_hit(&self) -> bool {
        self.rows.iter().all(|r| {
            matches!(
                &r.candidate.status,
                CandidateStatus::Blocked {
                    witness: BlockedWitness::VertexHit { .. }
                }
            )
        })
    }
}

/// Resolves all 4 × 3 candidates, ordered by (apex, middle).
pub fn loop_census(t: &TetraMetric) -> Result<Census, SphError> {
    if t.kappa() != Curvature::Spherical {
        return Err(SphError::SphericalOnly);
    }
    let mut rows = Vec::with_capacity(12);
    for apex in VERTICES {
        for candidate in enumerate_candidates(t, apex)? {
            let resolved = resolve_candidate(&candidate)?;
            rows.push(CensusRow {
                apex,
                middle: resolved.middle,
                candidate: resolved,
            });
        }
    }
    Ok(Census { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn candidates_enumerate_middles_of_opposite_face() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.55 * PI).unwrap();
        let cands = enumerate_candidates(&t, VertexId::A4).unwrap();
        let middles: Vec<VertexId> = cands.iter().map(|c| c.middle).collect();
        assert_eq!(middles, vec![VertexId::A1, VertexId::A2, VertexId::A3]);
        for c in &cands {
            let [e1, e2] = c.crossed_edges();
            assert!(e1.contains(c.middle) && e2.contains(c.middle));
            assert!(!e1.contains(c.apex) && !e2.contains(c.apex));
        }
        let flat = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        assert!(matches!(
            enumerate_candidates(&flat, VertexId::A1),
            Err(SphError::SphericalOnly)
        ));
    }

    #[test]
    fn small_angle_regular_blocked() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.45 * PI).unwrap();
        let census = loop_census(&t).unwrap();
        assert_eq!(census.exists_count(), 0);
    }

    #[test]
    fn right_angled_regular_blocked_by_vertex_hits() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, FRAC_PI_2).unwrap();
        let census = loop_census(&t).unwrap();
        assert_eq!(census.exists_count(), 0);
        assert!(census.all_blocked_by_vertex_hit());
    }

    #[test]
    fn obtuse_regular_has_twelve_loops() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.55 * PI).unwrap();
        let census = loop_census(&t).unwrap();
        assert_eq!(census.exists_count(), 12);
        for row in &census.rows {
            if let CandidateStatus::Exists { curve, .. } = &row.candidate.status {
                assert!(trace::is_simple(curve).0);
                assert_eq!(curve.loop_vertex, Some(row.apex));
                let sig = trace::signature(curve).unwrap();
                let crossed: usize = sig.counts.iter().sum();
                assert_eq!(crossed, 2);
                for e in row.candidate.crossed_edges() {
                    assert_eq!(sig.count(e), 1);
                }
            }
        }
    }

    #[test]
    fn flat_cone_regular_has_twelve_loops() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 2.0 * PI / 3.0).unwrap();
        let census = loop_census(&t).unwrap();
        assert_eq!(census.exists_count(), 12);
    }

    #[test]
    fn thm2s_certificate_on_flat_cone_regular() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 2.0 * PI / 3.0).unwrap();
        let (curve, cert) = construct_loop_thm2s(&t, VertexId::A4, VertexId::A1).unwrap();
        // |OA1| = a − π/2 in the coincident-image limit.
        let a = t.edge_length(crate::tetra::EdgeId::A1A2);
        assert_abs_diff_eq!(cert.dist_middle, a - FRAC_PI_2, epsilon = 1e-9);
        assert!(cert.dist_middle < FRAC_PI_2 - 1e-6);
        for (_, d) in cert.dist_others {
            assert!(d > FRAC_PI_2 + 1e-6);
        }
        assert!(cert.radius_residual < 1e-8);
        assert!(trace::is_simple(&curve).0);
    }

    #[test]
    fn thm2s_rejects_acute_regular() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.45 * PI).unwrap();
        assert!(matches!(
            construct_loop_thm2s(&t, VertexId::A4, VertexId::A1),
            Err(SphError::HypothesesNotMet(_))
        ));
    }

    #[test]
    fn three_loops_at_one_apex_of_regular_are_congruent() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 2.0 * PI / 3.0).unwrap();
        let cands = enumerate_candidates(&t, VertexId::A4).unwrap();
        let mut lengths = Vec::new();
        for c in cands {
            let r = resolve_candidate(&c).unwrap();
            match r.status {
                CandidateStatus::Exists { curve, .. } => lengths.push(curve.length),
                other => panic!("expected exists, got {other:?}"),
            }
        }
        for w in lengths.windows(2) {
            assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-9);
        }
    }
}
