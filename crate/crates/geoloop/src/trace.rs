//! Geodesic tracing on the tetrahedron surface.
//!
//! A surface curve is stored per face: each piece is a geodesic chord of the
//! face's canonical chart, and consecutive pieces meet on a shared edge at
//! equal parameters. Tracing works by local unrolling: extend straight in
//! the current chart, cross an edge by the fixed chart-to-chart transition
//! isometry, repeat.

use std::collections::HashMap;

use nalgebra::Vector3;
use thiserror::Error;

use crate::develop::{self, CuttingSequence, Development, DevelopError, WalkSuccess};
use crate::kernel::{self, Curvature, GeodesicSegment, Isometry2, KernelError, ModelPoint};
use crate::tetra::{ClearanceBound, EdgeId, FaceId, TetraMetric, VertexId};
use crate::tol::Tolerances;

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("kernel: {0}")]
    Kernel(#[from] KernelError),
    #[error("develop: {0}")]
    Develop(#[from] DevelopError),
    #[error("start point is not on the named face")]
    StartOutsideFace,
    #[error("max_length must be positive")]
    NonPositiveLength,
    #[error("not coprime")]
    NotCoprime,
    #[error("curve is not closed")]
    OpenCurve,
    #[error("clearance check requires a hyperbolic metric")]
    ClearanceNeedsHyperbolic,
    #[error("curve/development face sequences disagree")]
    CurveDevelopmentMismatch,
    #[error("trace did not close: {0}")]
    NoClosure(String),
}

/// Where a surface point sits relative to the face boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Incidence {
    Interior,
    OnEdge { edge: EdgeId, param: f64 },
    AtVertex(VertexId),
}

/// A point on the tetrahedron surface: a face and a position in its
/// canonical chart.
#[derive(Debug, Clone, Copy)]
pub struct SurfacePoint {
    pub face: FaceId,
    pub position: ModelPoint,
    pub tag: Incidence,
}

impl SurfacePoint {
    /// Point on `edge` at parameter `s ∈ (0, 1)` from its lower vertex, in
    /// the chart of `face` (which must contain the edge).
    pub fn on_edge(
        t: &TetraMetric,
        face: FaceId,
        edge: EdgeId,
        s: f64,
    ) -> Result<Self, TraceError> {
        if !face.edges().contains(&edge) {
            return Err(TraceError::StartOutsideFace);
        }
        let seg = t.chart_edge(face, edge);
        let position = seg.point_at(s)?;
        Ok(SurfacePoint {
            face,
            position,
            tag: Incidence::OnEdge { edge, param: s },
        })
    }

    /// The chart corner of `vertex` on `face`.
    pub fn at_vertex(t: &TetraMetric, face: FaceId, vertex: VertexId) -> Result<Self, TraceError> {
        if !face.contains(vertex) {
            return Err(TraceError::StartOutsideFace);
        }
        Ok(SurfacePoint {
            face,
            position: t.chart_vertex(face, vertex),
            tag: Incidence::AtVertex(vertex),
        })
    }
}

/// One geodesic piece of a surface curve.
#[derive(Debug, Clone)]
pub struct CurveSegment {
    pub face: FaceId,
    pub chord: GeodesicSegment,
}

/// An edge crossing between consecutive curve segments.
#[derive(Debug, Clone, Copy)]
pub struct EdgeCrossing {
    pub edge: EdgeId,
    /// Parameter from the lower vertex of the edge, in (0, 1).
    pub param: f64,
}

/// Why a trace stopped.
#[derive(Debug, Clone)]
pub enum StopReason {
    /// Returned to the start point with matching direction. The closure
    /// crossing is the last junction.
    Closed,
    /// Passed within the vertex-hit radius of a tetrahedron vertex.
    VertexHit { vertex: VertexId, dist: f64 },
    /// Arc-length budget exhausted.
    MaxLength,
    /// Safety cap on the number of crossings.
    StepLimit,
}

/// A curve on the tetrahedron surface: an ordered list of per-face geodesic
/// chords with edge-crossing records.
///
/// For closed curves crossing an edge at the closure point, `junctions` has
/// one entry per segment (the last one closes back to the first segment).
/// For vertex loops the closure happens at `loop_vertex` and `junctions` has
/// one entry fewer than `segments`.
#[derive(Debug, Clone)]
pub struct SurfaceCurve {
    pub kappa: Curvature,
    pub segments: Vec<CurveSegment>,
    pub junctions: Vec<EdgeCrossing>,
    pub closed: bool,
    pub loop_vertex: Option<VertexId>,
    pub length: f64,
}

impl SurfaceCurve {
    pub fn face_path(&self) -> Vec<FaceId> {
        self.segments.iter().map(|s| s.face).collect()
    }

    /// Largest angular deviation from π at the junctions: zero for a true
    /// geodesic. Each junction is checked by pushing the incoming direction
    /// through the chart transition and comparing with the outgoing chord.
    pub fn geodesic_residual(&self, t: &TetraMetric) -> Result<f64, TraceError> {
        let charts = ChartCache::new(t);
        let mut worst = 0.0f64;
        let n = self.segments.len();
        if n == 0 {
            return Ok(0.0);
        }
        let pairs = if self.closed && self.loop_vertex.is_none() {
            n
        } else {
            n - 1
        };
        for i in 0..pairs.min(self.junctions.len()) {
            let a = &self.segments[i];
            let b = &self.segments[(i + 1) % n];
            let edge = self.junctions[i].edge;
            let trans = charts.transition(a.face, edge)?;
            let end_dir = kernel::transported_direction(
                &a.chord.start,
                &a.chord.direction()?,
                a.chord.length,
            );
            let pushed = trans.apply_tangent(&end_dir);
            let pushed = kernel::orthonormal_tangent(&b.chord.start, &pushed);
            let out_dir = b.chord.direction()?;
            // Difference of unit tangents; equals the angle to first order
            // and avoids the acos noise floor near zero deviation.
            worst = worst.max((pushed - out_dir).norm());
        }
        Ok(worst)
    }
}

/// Per-edge crossing counts with the (p, q) classification when the counts
/// fit the pattern (p, p, q, q, p+q, p+q) over the opposite-edge pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingSignature {
    pub counts: [usize; 6],
    pub classified: Option<(u32, u32)>,
}

impl CrossingSignature {
    pub fn count(&self, e: EdgeId) -> usize {
        self.counts[e.index()]
    }

    /// Counts grouped by opposite pairs, sorted ascending.
    pub fn pair_counts_sorted(&self) -> [usize; 3] {
        let mut pairs: Vec<usize> = EdgeId::opposite_pairs()
            .iter()
            .map(|(a, _)| self.counts[a.index()])
            .collect();
        pairs.sort_unstable();
        [pairs[0], pairs[1], pairs[2]]
    }
}

/// Counts edge crossings of a closed curve; the loop-vertex junction is not
/// an edge crossing. Classification follows the opposite-pair pattern.
pub fn signature(c: &SurfaceCurve) -> Result<CrossingSignature, TraceError> {
    if !c.closed {
        return Err(TraceError::OpenCurve);
    }
    let mut counts = [0usize; 6];
    for j in &c.junctions {
        counts[j.edge.index()] += 1;
    }
    let mut classified = None;
    let pairs = EdgeId::opposite_pairs();
    let mut pair_counts = Vec::new();
    let mut pattern_ok = true;
    for (a, b) in pairs {
        if counts[a.index()] != counts[b.index()] {
            pattern_ok = false;
            break;
        }
        pair_counts.push(counts[a.index()]);
    }
    if pattern_ok {
        pair_counts.sort_unstable();
        let (p, q, r) = (pair_counts[0], pair_counts[1], pair_counts[2]);
        if r == p + q && r > 0 && num_integer::gcd(p, q) == 1 {
            classified = Some((p as u32, q as u32));
        }
    }
    Ok(CrossingSignature { counts, classified })
}

/// Cached canonical charts and chart-to-chart transitions.
pub struct ChartCache {
    corners: [[ModelPoint; 3]; 4],
    transitions: HashMap<(FaceId, EdgeId), Isometry2>,
}

impl ChartCache {
    pub fn new(t: &TetraMetric) -> Self {
        let mut corners = [[ModelPoint::base(t.kappa()); 3]; 4];
        for f in crate::tetra::FACES {
            corners[f.index()] = t.face_chart(f);
        }
        let mut transitions = HashMap::new();
        for f in crate::tetra::FACES {
            for e in f.edges() {
                let g = e.other_face(f);
                let step = develop::chart_step(t, f, g, e).expect("chart step");
                transitions.insert((f, e), step.inverse());
            }
        }
        ChartCache {
            corners,
            transitions,
        }
    }

    pub fn corners(&self, f: FaceId) -> &[ModelPoint; 3] {
        &self.corners[f.index()]
    }

    /// Map from the chart of `f` (extended across `e`) to the chart of the
    /// face on the other side of `e`.
    pub fn transition(&self, f: FaceId, e: EdgeId) -> Result<&Isometry2, TraceError> {
        self.transitions
            .get(&(f, e))
            .ok_or(TraceError::StartOutsideFace)
    }
}

/// Outcome of [`shoot`].
#[derive(Debug, Clone)]
pub struct TraceOutcome {
    pub curve: SurfaceCurve,
    pub stop: StopReason,
    pub end: SurfacePoint,
}

const STEP_LIMIT: usize = 20_000;

/// Traces the geodesic from `start` with initial chart tangent `dir` for at
/// most `max_length`, stopping at closure or a vertex hit.
pub fn shoot(
    t: &TetraMetric,
    start: &SurfacePoint,
    dir: &Vector3<f64>,
    max_length: f64,
    tol: &Tolerances,
) -> Result<TraceOutcome, TraceError> {
    let charts = ChartCache::new(t);
    shoot_cached(t, &charts, start, dir, max_length, tol)
}

/// [`shoot`] against a prebuilt chart cache (for sweeps).
pub fn shoot_cached(
    t: &TetraMetric,
    charts: &ChartCache,
    start: &SurfacePoint,
    dir: &Vector3<f64>,
    max_length: f64,
    tol: &Tolerances,
) -> Result<TraceOutcome, TraceError> {
    if !(max_length > 0.0) {
        return Err(TraceError::NonPositiveLength);
    }
    let kappa = t.kappa();
    let mut face = start.face;
    let mut x = start.position;
    let mut d = kernel::orthonormal_tangent(&x, dir);
    let mut remaining = max_length;
    let mut segments: Vec<CurveSegment> = Vec::new();
    let mut junctions: Vec<EdgeCrossing> = Vec::new();
    let mut length = 0.0f64;

    // Closure bookkeeping for edge starts.
    let start_edge = match start.tag {
        Incidence::OnEdge { edge, param } => Some((edge, param)),
        _ => None,
    };
    let start_dir = d;

    for _step in 0..STEP_LIMIT {
        let corners = charts.corners(face);
        // Earliest boundary crossing of the current face.
        let mut first: Option<(f64, EdgeId, ModelPoint)> = None;
        for e in face.edges() {
            let seg = chart_edge_of(charts, face, e);
            let pole = seg.pole()?;
            for tc in kernel::ray_geodesic_crossings(&x, &d, &pole, remaining) {
                if tc <= 1e-9 {
                    continue;
                }
                let y = kernel::exp_point(&x, &d, tc)?;
                if !kernel::on_arc(&seg, &y) {
                    continue;
                }
                if first.map_or(true, |(tf, _, _)| tc < tf) {
                    first = Some((tc, e, y));
                }
            }
        }
        let chord_len = first.map_or(remaining, |(tc, _, _)| tc.min(remaining));
        let chord_end = kernel::exp_point(&x, &d, chord_len)?;
        let chord = GeodesicSegment::new(x, chord_end)?;

        // Vertex proximity along this chord; corners at the chord start were
        // already classified at the previous junction (or are the start).
        for (slot, corner) in corners.iter().enumerate() {
            if kernel::coord_distance(corner, &x) < tol.vertex {
                continue;
            }
            let (dv, foot) = kernel::point_segment_distance(corner, &chord)?;
            if dv < tol.vertex {
                let end_seg = GeodesicSegment::new(x, foot)?;
                length += end_seg.length;
                segments.push(CurveSegment {
                    face,
                    chord: end_seg,
                });
                let vertex = face.vertices()[slot];
                let curve = SurfaceCurve {
                    kappa,
                    segments,
                    junctions,
                    closed: false,
                    loop_vertex: None,
                    length,
                };
                return Ok(TraceOutcome {
                    curve,
                    stop: StopReason::VertexHit { vertex, dist: dv },
                    end: SurfacePoint {
                        face,
                        position: foot,
                        tag: Incidence::AtVertex(vertex),
                    },
                });
            }
        }

        match first {
            Some((tc, e, y)) if tc <= remaining => {
                segments.push(CurveSegment {
                    face,
                    chord: GeodesicSegment::new(x, y)?,
                });
                length += tc;
                remaining -= tc;
                let edge_seg = chart_edge_of(charts, face, e);
                let s = kernel::dist(&edge_seg.start, &y)? / edge_seg.length;
                junctions.push(EdgeCrossing { edge: e, param: s });

                let trans = charts.transition(face, e)?;
                let next_face = e.other_face(face);
                let y_next = trans.apply(&y);
                let d_next =
                    kernel::orthonormal_tangent(&y_next, &trans.apply_tangent(&kernel::transported_direction(&x, &d, tc)));

                // Closure: crossing the start edge into the start face at the
                // start parameter with the start direction.
                if let Some((e0, s0)) = start_edge {
                    if e == e0 && next_face == start.face {
                        let ds = (s - s0).abs() * edge_seg.length;
                        let dd = angle_between(kappa, &d_next, &start_dir);
                        if ds < tol.close && dd < tol.close {
                            let curve = SurfaceCurve {
                                kappa,
                                segments,
                                junctions,
                                closed: true,
                                loop_vertex: None,
                                length,
                            };
                            return Ok(TraceOutcome {
                                curve,
                                stop: StopReason::Closed,
                                end: SurfacePoint {
                                    face: next_face,
                                    position: y_next,
                                    tag: Incidence::OnEdge { edge: e, param: s },
                                },
                            });
                        }
                    }
                }

                face = next_face;
                x = y_next;
                d = d_next;
            }
            _ => {
                segments.push(CurveSegment {
                    face,
                    chord: chord.clone(),
                });
                length += chord.length;
                let curve = SurfaceCurve {
                    kappa,
                    segments,
                    junctions,
                    closed: false,
                    loop_vertex: None,
                    length,
                };
                return Ok(TraceOutcome {
                    curve,
                    stop: StopReason::MaxLength,
                    end: SurfacePoint {
                        face,
                        position: chord.end,
                        tag: Incidence::Interior,
                    },
                });
            }
        }
    }
    let curve = SurfaceCurve {
        kappa,
        segments,
        junctions,
        closed: false,
        loop_vertex: None,
        length,
    };
    let end = SurfacePoint {
        face,
        position: x,
        tag: Incidence::Interior,
    };
    Ok(TraceOutcome {
        curve,
        stop: StopReason::StepLimit,
        end,
    })
}

fn chart_edge_of(charts: &ChartCache, face: FaceId, e: EdgeId) -> GeodesicSegment {
    let verts = face.vertices();
    let (lo, hi) = e.vertices();
    let pos_lo = verts.iter().position(|v| *v == lo).expect("edge on face");
    let pos_hi = verts.iter().position(|v| *v == hi).expect("edge on face");
    let c = charts.corners(face);
    GeodesicSegment::new(c[pos_lo], c[pos_hi]).expect("chart edge")
}

fn angle_between(kappa: Curvature, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let c = match kappa {
        Curvature::Hyperbolic => a.x * b.x + a.y * b.y - a.z * b.z,
        _ => a.dot(b),
    };
    c.clamp(-1.0, 1.0).acos()
}

/// Shot aimed from a point on an edge, direction given as the angle from the
/// edge direction (lower to upper vertex) rotated into the face interior.
pub fn shoot_from_edge(
    t: &TetraMetric,
    face: FaceId,
    edge: EdgeId,
    s: f64,
    angle: f64,
    max_length: f64,
    tol: &Tolerances,
) -> Result<TraceOutcome, TraceError> {
    let start = SurfacePoint::on_edge(t, face, edge, s)?;
    let seg = t.chart_edge(face, edge);
    let along = kernel::transported_direction(
        &seg.start,
        &seg.direction()?,
        s * seg.length,
    );
    // Rotate towards the interior: the face's third vertex fixes the side.
    let third = t.chart_vertex(face, face.vertex_off_edge(edge));
    let pole = seg.pole()?;
    let sign = if kernel::side_value(&third, &pole) >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let dir = kernel::rotate_tangent(&start.position, &along, sign * angle);
    shoot(t, &start, &dir, max_length, tol)
}

/// First self-intersection witness of a structurally valid curve, if any.
///
/// Within every face, any contact between two non-consecutive chords (an
/// interior crossing, an endpoint landing on the other chord, or coincident
/// endpoints) is a self-intersection; consecutive chords may touch only at
/// their shared junction.
pub fn is_simple(c: &SurfaceCurve) -> (bool, Option<ModelPoint>) {
    let n = c.segments.len();
    let tol = 10.0 * crate::tol::EPS_GEOM;
    let mut by_face: HashMap<FaceId, Vec<usize>> = HashMap::new();
    for (i, s) in c.segments.iter().enumerate() {
        by_face.entry(s.face).or_default().push(i);
    }
    for indices in by_face.values() {
        for (ai, &i) in indices.iter().enumerate() {
            for &j in indices.iter().skip(ai + 1) {
                let adjacent =
                    j == i + 1 || (c.closed && i == 0 && j + 1 == n && n > 1);
                let s1 = &c.segments[i].chord;
                let s2 = &c.segments[j].chord;
                match chord_contact(s1, s2, tol) {
                    None => {}
                    Some(contact) => {
                        if adjacent {
                            // The only allowed contact is the shared junction
                            // point (for wrapped pairs: the curve endpoint).
                            let shared = if j == i + 1 { s1.end } else { s2.end };
                            if kernel::coord_distance(&contact, &shared) > tol {
                                return (false, Some(contact));
                            }
                        } else {
                            return (false, Some(contact));
                        }
                    }
                }
            }
        }
    }
    (true, None)
}

/// Any contact point between two chords of one chart, endpoints included.
fn chord_contact(s1: &GeodesicSegment, s2: &GeodesicSegment, tol: f64) -> Option<ModelPoint> {
    match kernel::intersect_segments(s1, s2) {
        Ok(Some(x)) => return Some(x),
        Err(KernelError::CollinearOverlap) => {
            for pt in [&s2.start, &s2.end] {
                if let Ok((d, _)) = kernel::point_segment_distance(pt, s1) {
                    if d < tol {
                        return Some(*pt);
                    }
                }
            }
            for pt in [&s1.start, &s1.end] {
                if let Ok((d, _)) = kernel::point_segment_distance(pt, s2) {
                    if d < tol {
                        return Some(*pt);
                    }
                }
            }
            return Some(s1.start);
        }
        _ => {}
    }
    for pt in [&s2.start, &s2.end] {
        if let Ok((d, _)) = kernel::point_segment_distance(pt, s1) {
            if d < tol {
                return Some(*pt);
            }
        }
    }
    for pt in [&s1.start, &s1.end] {
        if let Ok((d, _)) = kernel::point_segment_distance(pt, s2) {
            if d < tol {
                return Some(*pt);
            }
        }
    }
    None
}

/// Builds the surface curve of a successful development walk: chord `i` is
/// the walked piece inside placed face `i`, folded back into that face's
/// chart.
pub fn fold_walk(
    dev: &Development,
    start: &ModelPoint,
    end: &ModelPoint,
    walk: &WalkSuccess,
    loop_vertex: Option<VertexId>,
    closure: Option<EdgeCrossing>,
) -> Result<SurfaceCurve, TraceError> {
    let mut points = Vec::with_capacity(walk.crossings.len() + 2);
    points.push(*start);
    for c in &walk.crossings {
        points.push(c.point);
    }
    points.push(*end);
    let mut segments = Vec::with_capacity(dev.faces().len());
    let mut length = 0.0;
    for (i, placed) in dev.faces().iter().enumerate() {
        let inv = placed.placement.inverse();
        let a = inv.apply(&points[i]);
        let b = inv.apply(&points[i + 1]);
        let chord = GeodesicSegment::new(a, b)?;
        length += chord.length;
        segments.push(CurveSegment {
            face: placed.face,
            chord,
        });
    }
    let mut junctions: Vec<EdgeCrossing> = walk
        .crossings
        .iter()
        .map(|c| EdgeCrossing {
            edge: c.edge,
            param: c.edge_param,
        })
        .collect();
    if let Some(j) = closure {
        junctions.push(j);
    }
    Ok(SurfaceCurve {
        kappa: dev.kappa(),
        segments,
        junctions,
        closed: loop_vertex.is_some() || closure.is_some(),
        loop_vertex,
        length,
    })
}

/// Greatest common divisor guard shared by the (p, q) entry points.
pub fn canonical_pq(p: u32, q: u32) -> Result<(u32, u32, bool), TraceError> {
    let (cp, cq, swapped) = if p <= q { (p, q, false) } else { (q, p, true) };
    if cp == 0 && cq == 0 {
        return Err(TraceError::NotCoprime);
    }
    if num_integer::gcd(cp, cq) != 1 {
        return Err(TraceError::NotCoprime);
    }
    Ok((cp, cq, swapped))
}

/// Which side of the base-edge midpoint the generating flat shot starts on.
///
/// The two sides give the two anchorings of the development at the base
/// edge's endpoints: for q > 1 they are genuinely different cyclic words,
/// exchanged by the tetrahedron symmetry swapping the base edge's vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OffsetSide {
    Above,
    Below,
}

/// The edge-crossing schedule of the type-(p, q) simple closed geodesic,
/// generated by shooting on the flat regular tetrahedron in the standard
/// unfolding direction, from parameter 1/2 + 1/(4(p+q+1)) on edge A1A2.
///
/// The schedule starts and ends on A1A2; its crossing count is
/// 2p + 2q + 2(p+q). The flat (p, q) combinatorics transfers to the other
/// curvatures unchanged.
pub fn cutting_sequence(p: u32, q: u32) -> Result<CuttingSequence, TraceError> {
    cutting_sequence_anchored(p, q, OffsetSide::Above)
}

/// As [`cutting_sequence`], with an explicit anchoring side.
pub fn cutting_sequence_anchored(
    p: u32,
    q: u32,
    side: OffsetSide,
) -> Result<CuttingSequence, TraceError> {
    let (p, q, _swapped) = canonical_pq(p, q)?;
    let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0)
        .expect("flat regular tetrahedron");
    let delta = 1.0 / (4.0 * (p + q + 1) as f64);
    let offset = match side {
        OffsetSide::Above => 0.5 + delta,
        OffsetSide::Below => 0.5 - delta,
    };
    // Direction of the closing translation in the chart of face A1A2A3 with
    // A1 at the origin and A2 at (1, 0): p steps along (1, 0) plus q along
    // (1/2, √3/2), doubled.
    let vx = (2 * p + q) as f64;
    let vy = (q as f64) * 3f64.sqrt();
    let v_len = (vx * vx + vy * vy).sqrt();
    let angle = vy.atan2(vx);
    let out = shoot_from_edge(
        &t,
        FaceId::F123,
        EdgeId::A1A2,
        offset,
        angle,
        v_len + 1.0,
        &Tolerances::default(),
    )?;
    match out.stop {
        StopReason::Closed => {}
        other => {
            return Err(TraceError::NoClosure(format!(
                "flat ({p},{q}) shot stopped with {other:?}"
            )))
        }
    }
    let mut edges = Vec::with_capacity(out.curve.junctions.len() + 1);
    edges.push(EdgeId::A1A2);
    for j in &out.curve.junctions {
        edges.push(j.edge);
    }
    let expected = 2 * (p as usize) + 2 * (q as usize) + 2 * ((p + q) as usize);
    if edges.len() != expected + 1 || *edges.last().unwrap() != EdgeId::A1A2 {
        return Err(TraceError::NoClosure(format!(
            "flat ({p},{q}) shot crossed {} edges, expected {expected}",
            edges.len() - 1
        )));
    }
    Ok(CuttingSequence {
        edges,
        p,
        q,
        offset,
    })
}

/// Vertex-image table of a face chain, built combinatorially: corners on the
/// shared edge of consecutive faces are identified, every other corner is a
/// fresh image. Returns per-face image ids (slots follow `face.vertices()`)
/// and the image vertex labels.
pub fn chain_corner_images(chain: &[FaceId]) -> (Vec<[usize; 3]>, Vec<VertexId>) {
    let mut per_face: Vec<[usize; 3]> = Vec::with_capacity(chain.len());
    let mut labels: Vec<VertexId> = Vec::new();
    for (i, face) in chain.iter().enumerate() {
        let shared = if i == 0 {
            None
        } else {
            chain[i - 1]
                .edges()
                .iter()
                .copied()
                .find(|e| face.edges().contains(e))
        };
        let mut ids = [usize::MAX; 3];
        for (slot, v) in face.vertices().iter().enumerate() {
            let inherited = shared.and_then(|e| {
                if e.contains(*v) {
                    let prev = chain[i - 1];
                    let prev_slot = prev.vertices().iter().position(|w| w == v).unwrap();
                    Some(per_face[i - 1][prev_slot])
                } else {
                    None
                }
            });
            ids[slot] = inherited.unwrap_or_else(|| {
                labels.push(*v);
                labels.len() - 1
            });
        }
        per_face.push(ids);
    }
    (per_face, labels)
}

/// One row of a clearance report.
///
/// Two margins are reported. The `sinh`-form margin uses the bound as the
/// lemma states it; the operative `margin` uses the threshold the lemma's
/// own right-triangle computation actually yields (`tanh d` against
/// `cos α̃ tanh h`), which is the one simple loops are guaranteed to clear.
#[derive(Debug, Clone, Copy)]
pub struct ClearanceRow {
    pub vertex: VertexId,
    pub image_index: usize,
    /// Distance from the vertex image to the developed curve.
    pub distance: f64,
    /// arcsinh(cos α̃ sinh h) for this vertex, when the lemma applies.
    pub bound: Option<f64>,
    /// tanh d − cos α̃ tanh h; positive is consistent with simplicity.
    pub margin: Option<f64>,
    /// sinh d − cos α̃ sinh h (the stated form, reported as data).
    pub sinh_margin: Option<f64>,
    pub applicable: bool,
}

/// Transported coordinates larger than this are numerically meaningless for
/// small-distance queries and certainly far from any chord that matters.
const CLEARANCE_COORD_CAP: f64 = 1e6;

/// Vertex-clearance report of a curve against its own development: for each
/// vertex image of the unrolled face chain not identified with the loop
/// vertex, the minimum distance from the developed curve and the margin over
/// the self-intersection bound.
///
/// Distances are isometry invariants, so they are evaluated chart-locally:
/// each image is transported into nearby charts through the fixed gluing
/// transitions and measured against that chart's chord. Transport stops once
/// coordinates exceed a cap; such pairs are farther than any bound of
/// interest.
pub fn clearance_check(t: &TetraMetric, c: &SurfaceCurve) -> Result<Vec<ClearanceRow>, TraceError> {
    if t.kappa() != Curvature::Hyperbolic {
        return Err(TraceError::ClearanceNeedsHyperbolic);
    }
    let charts = ChartCache::new(t);
    let chain = c.face_path();
    let m = chain.len();
    let (per_face, labels) = chain_corner_images(&chain);
    let mut min_dist: Vec<f64> = vec![f64::INFINITY; labels.len()];

    // For each chart i, transport corner positions of charts j (window
    // growing until the cap) into chart i and measure against chord i.
    for i in 0..m {
        let chord = &c.segments[i].chord;
        let mut measure = |j: usize, iso: Option<&Isometry2>| -> Result<(), TraceError> {
            let corners = charts.corners(chain[j]);
            for (slot, corner) in corners.iter().enumerate() {
                let pos = match iso {
                    Some(g) => g.apply(corner),
                    None => *corner,
                };
                if pos.lifted().norm() > CLEARANCE_COORD_CAP {
                    continue;
                }
                let (d, _) = kernel::point_segment_distance(&pos, chord)?;
                let id = per_face[j][slot];
                if d < min_dist[id] {
                    min_dist[id] = d;
                }
            }
            Ok(())
        };
        measure(i, None)?;
        // Walk outward to the right: transition from chart j into chart j−1
        // is the inverse of the forward step.
        let mut acc = Isometry2::identity(t.kappa());
        for j in i + 1..m {
            let edge = shared_edge(chain[j - 1], chain[j]).ok_or(TraceError::CurveDevelopmentMismatch)?;
            let back = charts.transition(chain[j - 1], edge)?.inverse();
            acc = acc.compose(&back).renormalized();
            if acc.matrix().norm() > CLEARANCE_COORD_CAP {
                break;
            }
            measure(j, Some(&acc))?;
        }
        // And to the left.
        let mut acc = Isometry2::identity(t.kappa());
        for j in (0..i).rev() {
            let edge = shared_edge(chain[j], chain[j + 1]).ok_or(TraceError::CurveDevelopmentMismatch)?;
            let fwd = *charts.transition(chain[j], edge)?;
            acc = acc.compose(&fwd).renormalized();
            if acc.matrix().norm() > CLEARANCE_COORD_CAP {
                break;
            }
            measure(j, Some(&acc))?;
        }
    }

    let mut rows = Vec::new();
    for (id, vertex) in labels.iter().enumerate() {
        if Some(*vertex) == c.loop_vertex {
            continue;
        }
        let d = min_dist[id];
        if !d.is_finite() {
            continue;
        }
        let vd = t.vertex_data(*vertex);
        let (bound, margin, sinh_margin, applicable) = match vd.clearance_bound {
            ClearanceBound::Bound(b) => (
                Some(b),
                Some(d.tanh() - vd.alpha_tilde.cos() * vd.height.tanh()),
                Some(d.sinh() - vd.alpha_tilde.cos() * vd.height.sinh()),
                true,
            ),
            _ => (None, None, None, false),
        };
        rows.push(ClearanceRow {
            vertex: *vertex,
            image_index: id,
            distance: d,
            bound,
            margin,
            sinh_margin,
            applicable,
        });
    }
    Ok(rows)
}

fn shared_edge(a: FaceId, b: FaceId) -> Option<EdgeId> {
    a.edges().iter().copied().find(|e| b.edges().contains(e))
}

/// Result of a straightening run.
#[derive(Debug, Clone)]
pub enum StraightenOutcome {
    Converged(SurfaceCurve),
    /// A junction converged onto (or the curve passes within the vertex-hit
    /// radius of) a vertex image; unrealizable combinatorial words end up
    /// here, pressed against an edge endpoint.
    VertexHit {
        vertex: VertexId,
        face_index: usize,
        dist: f64,
    },
    NoConvergence { residual: f64 },
}

const STRAIGHTEN_MAX_SWEEPS: usize = 200_000;

/// Gauss–Seidel geodesic straightening over the junction parameters of a
/// face chain. Works entirely in per-face canonical charts, so it is
/// well-conditioned regardless of how far the development would extend.
///
/// For an open chain the endpoints are fixed chart points of the first and
/// last faces and `edges[i]` joins `faces[i]` to `faces[i+1]`. For a cyclic
/// chain `edges[i]` is crossed entering `faces[i]` from `faces[(i+m−1) % m]`
/// and the first junction doubles as the closure.
pub fn straighten(
    t: &TetraMetric,
    charts: &ChartCache,
    faces: &[FaceId],
    edges: &[EdgeId],
    endpoints: Option<(ModelPoint, ModelPoint)>,
    loop_vertex: Option<VertexId>,
    tol: &Tolerances,
) -> Result<StraightenOutcome, TraceError> {
    let m = faces.len();
    let cyclic = endpoints.is_none();
    let n = edges.len();
    if (cyclic && n != m) || (!cyclic && n + 1 != m) {
        return Err(TraceError::CurveDevelopmentMismatch);
    }
    let edge_seg = |face: FaceId, e: EdgeId| chart_edge_of(charts, face, e);
    let mut params = vec![0.5f64; n];

    // Chart position of junction j expressed in the chart of `face`.
    let junction_point = |face: FaceId, e: EdgeId, s: f64| -> Result<ModelPoint, TraceError> {
        Ok(edge_seg(face, e).point_at(s)?)
    };

    let mut converged = false;
    for _sweep in 0..STRAIGHTEN_MAX_SWEEPS {
        let mut max_move = 0.0f64;
        for j in 0..n {
            // Express the two neighboring points in one chart adjacent to
            // junction j and re-intersect their geodesic with the edge.
            let (chart, before, after) = if cyclic {
                // edges[j] enters faces[j] from faces[j−1]; solve in faces[j].
                let chart = faces[j];
                let prev_face = faces[(j + m - 1) % m];
                let jb = (j + n - 1) % n;
                let ja = (j + 1) % n;
                let before_local = junction_point(prev_face, edges[jb], params[jb])?;
                let before = charts.transition(prev_face, edges[j])?.apply(&before_local);
                let after = junction_point(chart, edges[ja], params[ja])?;
                (chart, before, after)
            } else {
                // edges[j] joins faces[j] and faces[j+1]; solve in faces[j].
                let chart = faces[j];
                let before = if j == 0 {
                    endpoints.as_ref().unwrap().0
                } else {
                    junction_point(chart, edges[j - 1], params[j - 1])?
                };
                let after_chart = faces[j + 1];
                let after_local = if j + 1 == n {
                    endpoints.as_ref().unwrap().1
                } else {
                    junction_point(after_chart, edges[j + 1], params[j + 1])?
                };
                let after = charts.transition(after_chart, edges[j])?.apply(&after_local);
                (chart, before, after)
            };
            let seg = edge_seg(chart, edges[j]);
            let pole = match kernel::geodesic_pole(&before, &after) {
                Ok(p) => p,
                Err(_) => continue, // coincident neighbors; keep the param
            };
            // Clamp transient excursions; a word that is not realized by a
            // geodesic converges against the clamp and is classified as a
            // vertex hit below.
            if let Some(s) = kernel::segment_geodesic_root_any(&seg, &pole) {
                let s = s.clamp(1e-9, 1.0 - 1e-9);
                max_move = max_move.max((s - params[j]).abs());
                params[j] = s;
            }
        }
        if max_move < 1e-14 {
            converged = true;
            break;
        }
    }

    // Build the curve from the converged parameters.
    let mut segments = Vec::with_capacity(m);
    let mut junctions = Vec::with_capacity(n);
    let mut length = 0.0;
    for i in 0..m {
        let (a, b) = if cyclic {
            (
                junction_point(faces[i], edges[i], params[i])?,
                junction_point(faces[i], edges[(i + 1) % n], params[(i + 1) % n])?,
            )
        } else {
            let a = if i == 0 {
                endpoints.as_ref().unwrap().0
            } else {
                junction_point(faces[i], edges[i - 1], params[i - 1])?
            };
            let b = if i == n {
                endpoints.as_ref().unwrap().1
            } else {
                junction_point(faces[i], edges[i], params[i])?
            };
            (a, b)
        };
        let chord = GeodesicSegment::new(a, b)?;
        length += chord.length;
        segments.push(CurveSegment {
            face: faces[i],
            chord,
        });
    }
    for (j, e) in edges.iter().enumerate() {
        junctions.push(EdgeCrossing {
            edge: *e,
            param: params[j],
        });
    }
    if cyclic {
        // Junction i of the curve sits after segment i: segment i exits
        // through edges[(i+1) % n], and the rotated-out first entry is the
        // closure crossing.
        junctions.rotate_left(1);
    }

    let curve = SurfaceCurve {
        kappa: t.kappa(),
        segments,
        junctions,
        closed: true,
        loop_vertex,
        length,
    };

    // Vertex proximity: junctions pressed against edge endpoints or chords
    // grazing a corner are vertex hits, not geodesics. Checked before the
    // residual so that degenerate limits classify as hits.
    for (i, seg) in curve.segments.iter().enumerate() {
        let corners = charts.corners(seg.face);
        for (slot, corner) in corners.iter().enumerate() {
            let is_curve_endpoint = !cyclic
                && ((i == 0
                    && kernel::coord_distance(corner, &curve.segments[0].chord.start)
                        < tol.vertex)
                    || (i == m - 1
                        && kernel::coord_distance(corner, &curve.segments[m - 1].chord.end)
                            < tol.vertex));
            if is_curve_endpoint {
                continue;
            }
            let (d, _) = kernel::point_segment_distance(corner, &seg.chord)?;
            if d < tol.vertex {
                return Ok(StraightenOutcome::VertexHit {
                    vertex: seg.face.vertices()[slot],
                    face_index: i,
                    dist: d,
                });
            }
        }
    }

    let residual = curve.geodesic_residual(t)?;
    if !converged || residual > 1e-9 {
        return Ok(StraightenOutcome::NoConvergence { residual });
    }
    Ok(StraightenOutcome::Converged(curve))
}

/// Total length of the curve compared against the single-chart chord of its
/// full development; equal for geodesics.
pub fn developed_chord_length(t: &TetraMetric, c: &SurfaceCurve) -> Result<f64, TraceError> {
    let chain = c.face_path();
    let dev = develop::unroll_faces(t, &chain, &Isometry2::identity(t.kappa()))?;
    let first = dev.faces().first().ok_or(TraceError::OpenCurve)?;
    let last = dev.faces().last().unwrap();
    let a = first.placement.apply(&c.segments[0].chord.start);
    let b = last
        .placement
        .apply(&c.segments.last().unwrap().chord.end);
    Ok(kernel::dist(&a, &b)?)
}

/// Configuration of a vertex-return shooting sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepConfig {
    /// Directions per incident face (three faces are swept).
    pub per_face: usize,
    pub max_length: f64,
    /// Coarse capture radius: grid minima below this are refined.
    pub capture: f64,
    /// A refined direction counts as a return when the miss distance drops
    /// below this.
    pub refine_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            per_face: 3334,
            max_length: 4.0 * std::f64::consts::PI,
            capture: 2e-2,
            refine_tol: 1e-9,
        }
    }
}

/// A geodesic loop through the swept vertex found by shooting.
#[derive(Debug, Clone)]
pub struct VertexReturn {
    pub launch_face: FaceId,
    pub launch_angle: f64,
    pub curve: SurfaceCurve,
    pub length: f64,
    pub simple: bool,
    pub signature: CrossingSignature,
    pub miss: f64,
}

/// Distance from the traced curve to the nearest image of `vertex` in the
/// visited charts, ignoring the launch corner.
fn vertex_miss(curve: &SurfaceCurve, charts: &ChartCache, vertex: VertexId) -> f64 {
    let mut best = f64::INFINITY;
    let launch = match curve.segments.first() {
        Some(s) => s.chord.start,
        None => return best,
    };
    for (i, seg) in curve.segments.iter().enumerate() {
        let corners = charts.corners(seg.face);
        for (slot, v) in seg.face.vertices().iter().enumerate() {
            if *v != vertex {
                continue;
            }
            let corner = &corners[slot];
            if i == 0 && kernel::coord_distance(corner, &launch) < 1e-9 {
                continue;
            }
            if let Ok((d, _)) = kernel::point_segment_distance(corner, &seg.chord) {
                best = best.min(d);
            }
        }
    }
    best
}

/// Sweeps shooting directions out of `vertex` over its three incident faces,
/// refines local minima of the miss distance, and returns every verified
/// geodesic loop through the vertex.
pub fn vertex_return_sweep(
    t: &TetraMetric,
    vertex: VertexId,
    cfg: &SweepConfig,
    tol: &Tolerances,
) -> Result<Vec<VertexReturn>, TraceError> {
    let charts = ChartCache::new(t);
    let mut found: Vec<VertexReturn> = Vec::new();
    for face in FaceId::around_vertex(vertex) {
        let wedge = t.face_angle(face, vertex);
        let corner = t.chart_vertex(face, vertex);
        let others: Vec<VertexId> = face
            .vertices()
            .iter()
            .copied()
            .filter(|v| *v != vertex)
            .collect();
        let d0 = kernel::direction_to(&corner, &t.chart_vertex(face, others[0]))?;
        let d1 = kernel::direction_to(&corner, &t.chart_vertex(face, others[1]))?;
        // Rotation sign that sweeps from d0 towards d1.
        let sign = {
            let probe = kernel::rotate_tangent(&corner, &d0, wedge);
            if (probe - d1).norm() < (kernel::rotate_tangent(&corner, &d0, -wedge) - d1).norm() {
                1.0
            } else {
                -1.0
            }
        };
        let start = SurfacePoint {
            face,
            position: corner,
            tag: Incidence::AtVertex(vertex),
        };
        let miss_of = |theta: f64| -> f64 {
            let dir = kernel::rotate_tangent(&corner, &d0, sign * theta);
            match shoot_cached(t, &charts, &start, &dir, cfg.max_length, tol) {
                Ok(out) => vertex_miss(&out.curve, &charts, vertex),
                Err(_) => f64::INFINITY,
            }
        };
        let n = cfg.per_face;
        let thetas: Vec<f64> = (0..n)
            .map(|i| wedge * (i as f64 + 0.5) / (n as f64))
            .collect();
        let misses: Vec<f64> = thetas.iter().map(|th| miss_of(*th)).collect();
        for i in 0..n {
            let left = if i == 0 { f64::INFINITY } else { misses[i - 1] };
            let right = if i + 1 == n {
                f64::INFINITY
            } else {
                misses[i + 1]
            };
            if !(misses[i] < cfg.capture && misses[i] <= left && misses[i] <= right) {
                continue;
            }
            // Ternary refinement of the V-shaped minimum.
            let mut lo = if i == 0 { thetas[0] } else { thetas[i - 1] };
            let mut hi = if i + 1 == n { thetas[n - 1] } else { thetas[i + 1] };
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                if miss_of(m1) <= miss_of(m2) {
                    hi = m2;
                } else {
                    lo = m1;
                }
                if hi - lo < 1e-15 {
                    break;
                }
            }
            let theta = 0.5 * (lo + hi);
            let miss = miss_of(theta);
            if miss > cfg.refine_tol {
                continue;
            }
            let dir = kernel::rotate_tangent(&corner, &d0, sign * theta);
            let out = shoot_cached(t, &charts, &start, &dir, cfg.max_length, tol)?;
            let hit_vertex = match out.stop {
                StopReason::VertexHit { vertex: v, .. } => v,
                _ => continue,
            };
            if hit_vertex != vertex || out.curve.length < 1e-6 {
                continue;
            }
            // Snap the final chord end onto the corner image to close the
            // loop at the vertex.
            let mut curve = out.curve;
            let last = curve.segments.last_mut().unwrap();
            let corner_img = t.chart_vertex(last.face, vertex);
            let snapped = GeodesicSegment::new(last.chord.start, corner_img)?;
            curve.length += snapped.length - last.chord.length;
            last.chord = snapped;
            curve.closed = true;
            curve.loop_vertex = Some(vertex);
            let (simple, _) = is_simple(&curve);
            let sig = signature(&curve)?;
            let ret = VertexReturn {
                launch_face: face,
                launch_angle: theta,
                length: curve.length,
                simple,
                signature: sig,
                curve,
                miss,
            };
            let duplicate = found.iter().any(|f| {
                (f.length - ret.length).abs() < 1e-6 && f.signature.counts == ret.signature.counts
            });
            if !duplicate {
                found.push(ret);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn flat_belt_geodesic_closes() {
        // The (0,1) closed geodesic through the edge midpoints of the flat
        // regular tetrahedron has length 2a and closes up.
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let out = shoot_from_edge(
            &t,
            FaceId::F123,
            EdgeId::A1A2,
            0.5,
            PI / 3.0,
            3.0,
            &Tolerances::default(),
        )
        .unwrap();
        assert!(matches!(out.stop, StopReason::Closed), "{:?}", out.stop);
        assert_abs_diff_eq!(out.curve.length, 2.0, epsilon = 1e-9);
        let sig = signature(&out.curve).unwrap();
        assert_eq!(sig.classified, Some((0, 1)));
        assert_eq!(sig.pair_counts_sorted(), [0, 1, 1]);
        let (simple, _) = is_simple(&out.curve);
        assert!(simple);
        assert!(out.curve.geodesic_residual(&t).unwrap() < 1e-9);
    }

    #[test]
    fn aiming_at_a_vertex_stops_with_vertex_hit() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        // From the midpoint of A1A2 straight at A3's corner.
        let start = SurfacePoint::on_edge(&t, FaceId::F123, EdgeId::A1A2, 0.5).unwrap();
        let corner = t.chart_vertex(FaceId::F123, VertexId::A3);
        let dir = kernel::direction_to(&start.position, &corner).unwrap();
        let out = shoot(&t, &start, &dir, 5.0, &Tolerances::default()).unwrap();
        match out.stop {
            StopReason::VertexHit { vertex, .. } => assert_eq!(vertex, VertexId::A3),
            other => panic!("expected vertex hit, got {other:?}"),
        }
    }

    #[test]
    fn cutting_sequences_have_forced_combinatorics() {
        for (p, q, crossings) in [(0u32, 1u32, 4usize), (1, 1, 8), (1, 2, 12), (2, 3, 20)] {
            let seq = cutting_sequence(p, q).unwrap();
            assert_eq!(seq.crossing_count(), crossings, "({p},{q})");
            assert_eq!(seq.base_edge(), EdgeId::A1A2);
            assert_eq!(*seq.edges.last().unwrap(), EdgeId::A1A2);
            // Per-pair counts (q, p, p+q) over the bookended list minus the
            // duplicate base entry.
            let mut counts = [0usize; 6];
            for e in &seq.edges[1..] {
                counts[e.index()] += 1;
            }
            assert_eq!(counts[EdgeId::A1A2.index()], q as usize);
            assert_eq!(counts[EdgeId::A3A4.index()], q as usize);
            assert_eq!(counts[EdgeId::A1A3.index()], p as usize);
            assert_eq!(counts[EdgeId::A2A4.index()], p as usize);
            assert_eq!(counts[EdgeId::A1A4.index()], (p + q) as usize);
            assert_eq!(counts[EdgeId::A2A3.index()], (p + q) as usize);
            seq.face_path().unwrap();
        }
    }

    #[test]
    fn non_coprime_pairs_rejected() {
        assert!(matches!(cutting_sequence(2, 4), Err(TraceError::NotCoprime)));
        assert!(matches!(cutting_sequence(0, 0), Err(TraceError::NotCoprime)));
        assert!(cutting_sequence(1, 1).is_ok());
        // Canonicalization swaps into p ≤ q.
        let seq = cutting_sequence(3, 1).unwrap();
        assert_eq!((seq.p, seq.q), (1, 3));
    }

    #[test]
    fn figure_eight_is_not_simple() {
        let mk = |x: f64, y: f64| {
            ModelPoint::new(Vector3::new(x, y, 0.0), Curvature::Euclidean).unwrap()
        };
        let c1 = GeodesicSegment::new(mk(0.2, 0.05), mk(0.6, 0.25)).unwrap();
        let c2 = GeodesicSegment::new(mk(0.6, 0.05), mk(0.2, 0.25)).unwrap();
        let curve = SurfaceCurve {
            kappa: Curvature::Euclidean,
            segments: vec![
                CurveSegment {
                    face: FaceId::F123,
                    chord: c1,
                },
                CurveSegment {
                    face: FaceId::F124,
                    chord: GeodesicSegment::new(mk(0.1, 0.1), mk(0.2, 0.2)).unwrap(),
                },
                CurveSegment {
                    face: FaceId::F123,
                    chord: c2,
                },
            ],
            junctions: vec![],
            closed: false,
            loop_vertex: None,
            length: 0.0,
        };
        let (simple, witness) = is_simple(&curve);
        assert!(!simple);
        let w = witness.unwrap();
        assert_abs_diff_eq!(w.coords().x, 0.4, epsilon = 1e-9);
        assert_abs_diff_eq!(w.coords().y, 0.15, epsilon = 1e-9);
    }

    #[test]
    fn single_open_chord_is_simple() {
        let mk = |x: f64, y: f64| {
            ModelPoint::new(Vector3::new(x, y, 0.0), Curvature::Euclidean).unwrap()
        };
        let curve = SurfaceCurve {
            kappa: Curvature::Euclidean,
            segments: vec![CurveSegment {
                face: FaceId::F123,
                chord: GeodesicSegment::new(mk(0.2, 0.1), mk(0.5, 0.2)).unwrap(),
            }],
            junctions: vec![],
            closed: false,
            loop_vertex: None,
            length: 0.3,
        };
        assert!(is_simple(&curve).0);
    }

    #[test]
    fn length_additivity_for_traced_geodesics() {
        let t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, 0.2 * PI).unwrap();
        let out = shoot_from_edge(
            &t,
            FaceId::F123,
            EdgeId::A1A2,
            0.41,
            0.9,
            4.0,
            &Tolerances::default(),
        )
        .unwrap();
        let chord = developed_chord_length(&t, &out.curve).unwrap();
        assert_abs_diff_eq!(out.curve.length, chord, epsilon = 1e-8);
        assert!(out.curve.geodesic_residual(&t).unwrap() < 1e-9);
    }

    #[test]
    fn signature_requires_closed_curves() {
        let mk = |x: f64, y: f64| {
            ModelPoint::new(Vector3::new(x, y, 0.0), Curvature::Euclidean).unwrap()
        };
        let curve = SurfaceCurve {
            kappa: Curvature::Euclidean,
            segments: vec![CurveSegment {
                face: FaceId::F123,
                chord: GeodesicSegment::new(mk(0.2, 0.1), mk(0.5, 0.2)).unwrap(),
            }],
            junctions: vec![],
            closed: false,
            loop_vertex: None,
            length: 0.3,
        };
        assert!(matches!(signature(&curve), Err(TraceError::OpenCurve)));
    }

    #[test]
    fn double_crossing_of_one_edge_has_no_type() {
        let mk = |x: f64, y: f64| {
            ModelPoint::new(Vector3::new(x, y, 0.0), Curvature::Euclidean).unwrap()
        };
        let curve = SurfaceCurve {
            kappa: Curvature::Euclidean,
            segments: vec![
                CurveSegment {
                    face: FaceId::F123,
                    chord: GeodesicSegment::new(mk(0.2, 0.1), mk(0.5, 0.2)).unwrap(),
                },
                CurveSegment {
                    face: FaceId::F124,
                    chord: GeodesicSegment::new(mk(0.5, 0.2), mk(0.2, 0.1)).unwrap(),
                },
            ],
            junctions: vec![
                EdgeCrossing {
                    edge: EdgeId::A1A2,
                    param: 0.3,
                },
                EdgeCrossing {
                    edge: EdgeId::A1A2,
                    param: 0.6,
                },
            ],
            closed: true,
            loop_vertex: None,
            length: 0.6,
        };
        let sig = signature(&curve).unwrap();
        assert_eq!(sig.count(EdgeId::A1A2), 2);
        assert_eq!(sig.classified, None);
    }
}
