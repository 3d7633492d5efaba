//! Developments: isometric unfoldings of face sequences onto the model
//! surface.
//!
//! A development places a chain of faces by successive edge gluings, each
//! gluing realized as "reflect the previous placement across the shared
//! placed edge, then relabel", which here is implemented directly as the
//! unique placement matching the shared edge endpoint images with the next
//! face's third vertex on the far side. Geodesics of the tetrahedron surface
//! develop to model geodesics, so containment of a curve in a development is
//! decided by walking a single model geodesic face to face.

use nalgebra::Vector3;
use thiserror::Error;

use crate::kernel::{self, Curvature, GeodesicSegment, Isometry2, KernelError, ModelPoint};
use crate::tetra::{EdgeId, FaceId, TetraMetric, VertexId};
use crate::tol::Tolerances;

/// The fixed combinatorial tetrahedron: adjacency queries used when
/// unrolling. The relations themselves live on the id types in [`crate::tetra`].
#[derive(Debug, Clone, Copy, Default)]
pub struct FaceAdjacency;

impl FaceAdjacency {
    /// Each edge bounds exactly two faces and each vertex lies in exactly
    /// three; returns false if the tables are inconsistent.
    pub fn check() -> bool {
        crate::tetra::EDGES.iter().all(|e| {
            let [f, g] = e.faces();
            f != g && f.edges().contains(e) && g.edges().contains(e)
        }) && crate::tetra::VERTICES
            .iter()
            .all(|v| FaceId::around_vertex(*v).iter().all(|f| f.contains(*v)))
    }
}

#[derive(Debug, Error)]
pub enum DevelopError {
    #[error("not a gluing schedule: {0}")]
    NotAGluingSchedule(String),
    #[error("bad vertex choice: {0}")]
    BadVertexChoice(String),
    #[error("convexity undefined on an overlapping development")]
    ConvexityUndefined,
    #[error("segment endpoint not in the expected placed face")]
    EndpointOutsideFace,
    #[error("kernel: {0}")]
    Kernel(#[from] KernelError),
}

/// The edge-crossing schedule of a closed surface geodesic, written with the
/// base edge as both first and last entry; the faces traversed sit between
/// consecutive entries.
#[derive(Debug, Clone, PartialEq)]
pub struct CuttingSequence {
    /// Bookended edge list: `edges[0] == edges[len-1]` is the base edge.
    pub edges: Vec<EdgeId>,
    pub p: u32,
    pub q: u32,
    /// Start parameter on the base edge used to generate the schedule.
    pub offset: f64,
}

impl CuttingSequence {
    /// Number of distinct edge crossings of the closed geodesic.
    pub fn crossing_count(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn base_edge(&self) -> EdgeId {
        self.edges[0]
    }

    /// The face chain `F_1 .. F_k` determined by consecutive edge pairs.
    pub fn face_path(&self) -> Result<Vec<FaceId>, DevelopError> {
        face_path(&self.edges)
    }
}

/// Derives the face chain of a bookended edge list, validating that it is a
/// combinatorially possible geodesic schedule.
pub fn face_path(edges: &[EdgeId]) -> Result<Vec<FaceId>, DevelopError> {
    if edges.len() < 2 {
        return Err(DevelopError::NotAGluingSchedule(
            "need at least two edge entries".into(),
        ));
    }
    let mut faces = Vec::with_capacity(edges.len() - 1);
    let first = FaceId::common_face(edges[0], edges[1]).ok_or_else(|| {
        DevelopError::NotAGluingSchedule(format!(
            "edges {} and {} share no face",
            edges[0], edges[1]
        ))
    })?;
    faces.push(first);
    for i in 1..edges.len() - 1 {
        let prev = *faces.last().unwrap();
        let next = edges[i].other_face(prev);
        if !next.edges().contains(&edges[i + 1]) {
            return Err(DevelopError::NotAGluingSchedule(format!(
                "after crossing {} into {}, edge {} is not reachable",
                edges[i],
                next,
                edges[i + 1]
            )));
        }
        faces.push(next);
    }
    Ok(faces)
}

/// One face of the chain with its placement onto the model surface.
#[derive(Debug, Clone)]
pub struct PlacedFace {
    pub face: FaceId,
    /// Chart-to-model isometry.
    pub placement: Isometry2,
    /// Placed images of `face.vertices()`, in that order.
    pub corners: [ModelPoint; 3],
    /// Vertex-image table indices of the corners.
    pub corner_images: [usize; 3],
    /// Supporting geodesics of the placed edges (order of `face.edges()`),
    /// oriented so the interior has positive side value.
    pub inward_poles: [Vector3<f64>; 3],
}

impl PlacedFace {
    pub fn corner(&self, v: VertexId) -> ModelPoint {
        let pos = self
            .face
            .vertices()
            .iter()
            .position(|w| *w == v)
            .expect("vertex not on face");
        self.corners[pos]
    }

    pub fn corner_image(&self, v: VertexId) -> usize {
        let pos = self
            .face
            .vertices()
            .iter()
            .position(|w| *w == v)
            .expect("vertex not on face");
        self.corner_images[pos]
    }

    /// Placed copy of one of this face's edges, oriented from the lower
    /// vertex id.
    pub fn placed_edge(&self, e: EdgeId) -> GeodesicSegment {
        let (lo, hi) = e.vertices();
        GeodesicSegment::new(self.corner(lo), self.corner(hi)).expect("placed edge")
    }

    /// Signed containment margin: minimum inward side value over the three
    /// edges (nonnegative inside, up to tolerance), normalized by the
    /// coordinate magnitude so the scale is comparable far from the origin.
    pub fn containment_margin(&self, p: &ModelPoint) -> f64 {
        let scale = p.lifted().norm().max(1.0);
        self.inward_poles
            .iter()
            .map(|n| kernel::side_value(p, n) / scale)
            .fold(f64::INFINITY, f64::min)
    }
}

/// An interior gluing edge between consecutive placed faces.
#[derive(Debug, Clone)]
pub struct GluingRecord {
    pub edge: EdgeId,
    /// Placed-face indices `(i, i+1)` it glues.
    pub between: (usize, usize),
    /// Placed endpoint images `(lower vertex, upper vertex)`.
    pub endpoints: (ModelPoint, ModelPoint),
    pub length: f64,
}

impl GluingRecord {
    pub fn segment(&self) -> GeodesicSegment {
        GeodesicSegment::new(self.endpoints.0, self.endpoints.1).expect("gluing segment")
    }
}

/// A distinct vertex image of the development. Corners of different placed
/// faces are identified only through the gluing chain, never by position, so
/// wrapped spherical developments keep coincident but distinct images apart.
#[derive(Debug, Clone)]
pub struct VertexImage {
    pub vertex: VertexId,
    pub point: ModelPoint,
    /// Placed-face indices whose corner maps to this image.
    pub incident_faces: Vec<usize>,
    /// Sum of the incident face angles at this image.
    pub total_angle: f64,
}

/// An unrolled chain of faces.
#[derive(Debug, Clone)]
pub struct Development {
    kappa: Curvature,
    faces: Vec<PlacedFace>,
    gluings: Vec<GluingRecord>,
    vertex_images: Vec<VertexImage>,
    overlapping: bool,
    max_residual: f64,
}

impl Development {
    pub fn kappa(&self) -> Curvature {
        self.kappa
    }

    pub fn faces(&self) -> &[PlacedFace] {
        &self.faces
    }

    pub fn gluings(&self) -> &[GluingRecord] {
        &self.gluings
    }

    pub fn vertex_images(&self) -> &[VertexImage] {
        &self.vertex_images
    }

    /// Whether placed faces overlap in the model (wrapped cone angles or
    /// interior triangle intersections).
    pub fn is_overlapping(&self) -> bool {
        self.overlapping
    }

    /// Largest gluing / length residual accumulated while unrolling.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    /// Interior gluing edge schedule as edge ids.
    pub fn interior_edge_schedule(&self) -> Vec<EdgeId> {
        self.gluings.iter().map(|g| g.edge).collect()
    }
}

/// Unrolls an explicit face chain; consecutive faces must share an edge.
///
/// Placements are composed from fixed chart-to-chart step isometries
/// evaluated at the chart origin; re-deriving each placement from already
/// placed (far from the origin) corners would compound rounding
/// catastrophically on the hyperboloid.
pub fn unroll_faces(
    t: &TetraMetric,
    chain: &[FaceId],
    base: &Isometry2,
) -> Result<Development, DevelopError> {
    if chain.is_empty() {
        return Err(DevelopError::NotAGluingSchedule("empty face chain".into()));
    }
    let kappa = t.kappa();
    let mut faces: Vec<PlacedFace> = Vec::with_capacity(chain.len());
    let mut gluings: Vec<GluingRecord> = Vec::with_capacity(chain.len().saturating_sub(1));
    let mut images: Vec<VertexImage> = Vec::new();
    let mut max_residual = 0.0f64;
    let mut steps: std::collections::HashMap<(FaceId, EdgeId), Isometry2> =
        std::collections::HashMap::new();

    let place = |face: FaceId, iso: &Isometry2| -> [ModelPoint; 3] {
        let chart = t.face_chart(face);
        [
            iso.apply(&chart[0]),
            iso.apply(&chart[1]),
            iso.apply(&chart[2]),
        ]
    };

    for (i, &face) in chain.iter().enumerate() {
        let (placement, shared_edge) = if i == 0 {
            (*base, None)
        } else {
            let prev = &faces[i - 1];
            let edge = prev
                .face
                .edges()
                .iter()
                .copied()
                .find(|e| face.edges().contains(e) && face != prev.face)
                .ok_or_else(|| {
                    DevelopError::NotAGluingSchedule(format!(
                        "faces {} and {} share no edge",
                        prev.face, face
                    ))
                })?;
            let step = match steps.get(&(prev.face, edge)) {
                Some(s) => *s,
                None => {
                    let s = chart_step(t, prev.face, face, edge)?;
                    steps.insert((prev.face, edge), s);
                    s
                }
            };
            let iso = prev.placement.compose(&step).renormalized();
            (iso, Some(edge))
        };
        let corners = place(face, &placement);
        let poles = inward_poles(&corners)?;
        let mut corner_images = [usize::MAX; 3];
        let verts = face.vertices();
        for (slot, v) in verts.iter().enumerate() {
            let inherited = shared_edge.and_then(|edge| {
                if edge.contains(*v) {
                    Some(faces[i - 1].corner_image(*v))
                } else {
                    None
                }
            });
            corner_images[slot] = match inherited {
                Some(idx) => idx,
                None => {
                    images.push(VertexImage {
                        vertex: *v,
                        point: corners[slot],
                        incident_faces: Vec::new(),
                        total_angle: 0.0,
                    });
                    images.len() - 1
                }
            };
            let img = &mut images[corner_images[slot]];
            img.incident_faces.push(i);
            img.total_angle += t.face_angle(face, *v);
            let drift = kernel::dist(&img.point, &corners[slot]).unwrap_or(f64::INFINITY);
            max_residual = max_residual.max(drift);
        }
        if let Some(edge) = shared_edge {
            let (lo, hi) = edge.vertices();
            let prev = &faces[i - 1];
            let e_lo = prev.corner(lo);
            let e_hi = prev.corner(hi);
            let len = kernel::dist(&e_lo, &e_hi)?;
            max_residual = max_residual.max((len - t.edge_length(edge)).abs());
            gluings.push(GluingRecord {
                edge,
                between: (i - 1, i),
                endpoints: (e_lo, e_hi),
                length: len,
            });
        }
        faces.push(PlacedFace {
            face,
            placement,
            corners,
            corner_images,
            inward_poles: poles,
        });
    }

    let overlapping = detect_overlap(&faces, &images);
    Ok(Development {
        kappa,
        faces,
        gluings,
        vertex_images: images,
        overlapping,
        max_residual,
    })
}

/// Unrolls the face chain of a cutting sequence.
pub fn unroll(
    t: &TetraMetric,
    seq: &CuttingSequence,
    base: &Isometry2,
) -> Result<Development, DevelopError> {
    let chain = seq.face_path()?;
    unroll_faces(t, &chain, base)
}

/// The step isometry placing the chart of `next` against the identity-placed
/// chart of `prev_face`, glued across `edge`: shared endpoint images match
/// and the third vertex lands on the far side. Everything is evaluated at
/// chart scale, where the frame construction is well-conditioned.
pub fn chart_step(
    t: &TetraMetric,
    prev_face: FaceId,
    next: FaceId,
    edge: EdgeId,
) -> Result<Isometry2, DevelopError> {
    let (lo, hi) = edge.vertices();
    let target_lo = t.chart_vertex(prev_face, lo);
    let target_hi = t.chart_vertex(prev_face, hi);
    let chart_lo = t.chart_vertex(next, lo);
    let chart_hi = t.chart_vertex(next, hi);

    let d_target = kernel::direction_to(&target_lo, &target_hi)?;
    let d_chart = kernel::direction_to(&chart_lo, &chart_hi)?;
    let to_target = Isometry2::frame_at(&target_lo, &d_target);
    let from_chart = Isometry2::frame_at(&chart_lo, &d_chart).inverse();
    let candidate = to_target.compose(&from_chart);

    let seg = GeodesicSegment::new(target_lo, target_hi)?;
    let pole = seg.pole()?;
    let prev_third = t.chart_vertex(prev_face, prev_face.vertex_off_edge(edge));
    let next_third_chart = t.chart_vertex(next, next.vertex_off_edge(edge));
    let placed_third = candidate.apply(&next_third_chart);
    let s_prev = kernel::side_value(&prev_third, &pole);
    let s_next = kernel::side_value(&placed_third, &pole);
    if s_prev * s_next > 0.0 {
        let flip = kernel::reflect_across(&seg)?;
        Ok(flip.compose(&candidate))
    } else {
        Ok(candidate)
    }
}

fn inward_poles(corners: &[ModelPoint; 3]) -> Result<[Vector3<f64>; 3], DevelopError> {
    // Edge order matches FaceId::edges(): (v0v1, v0v2, v1v2); the inward
    // side is the one containing the remaining corner.
    let pairs = [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)];
    let mut out = [Vector3::zeros(); 3];
    for (k, (a, b, c)) in pairs.iter().enumerate() {
        let mut pole = kernel::geodesic_pole(&corners[*a], &corners[*b])?;
        if kernel::side_value(&corners[*c], &pole) < 0.0 {
            pole = -pole;
        }
        out[k] = pole;
    }
    Ok(out)
}

fn detect_overlap(faces: &[PlacedFace], images: &[VertexImage]) -> bool {
    let two_pi = 2.0 * std::f64::consts::PI;
    if images.iter().any(|im| im.total_angle > two_pi + 1e-9) {
        return true;
    }
    // A development whose every vertex image turns by at most π bounds a
    // convex region; convex developments cannot self-overlap, and skipping
    // the pairwise scan also avoids sign noise on far-out coordinates.
    if images
        .iter()
        .all(|im| im.total_angle <= std::f64::consts::PI + 1e-9)
    {
        return false;
    }
    // Pairwise interior intersection of non-adjacent placed faces: a
    // transversal interior edge crossing, or a corner strictly inside.
    for i in 0..faces.len() {
        for j in i + 2..faces.len() {
            if faces_overlap(&faces[i], &faces[j]) {
                return true;
            }
        }
    }
    false
}

fn faces_overlap(a: &PlacedFace, b: &PlacedFace) -> bool {
    let margin = 1e-9;
    for (fa, fb) in [(a, b), (b, a)] {
        for corner in &fb.corners {
            if fa.containment_margin(corner) > margin {
                return true;
            }
        }
    }
    for ea in a.face.edges() {
        let sa = a.placed_edge(ea);
        for eb in b.face.edges() {
            let sb = b.placed_edge(eb);
            if let Ok(Some(_)) = kernel::intersect_segments(&sa, &sb) {
                return true;
            }
            // Collinear boundary contact is not interior overlap.
        }
    }
    false
}

/// The 3-face strip around `middle` joining the two developments of `apex`:
/// (apex, middle, x), the face opposite apex, then (apex, middle, y).
pub fn vertex_pair_development(
    t: &TetraMetric,
    apex: VertexId,
    middle: VertexId,
) -> Result<Development, DevelopError> {
    if apex == middle {
        return Err(DevelopError::BadVertexChoice(
            "apex and middle coincide".into(),
        ));
    }
    let opposite = FaceId::opposite_vertex(apex);
    if !opposite.contains(middle) {
        return Err(DevelopError::BadVertexChoice(format!(
            "{middle} is not on the face opposite {apex}"
        )));
    }
    let mut others: Vec<VertexId> = opposite
        .vertices()
        .iter()
        .copied()
        .filter(|v| *v != middle)
        .collect();
    others.sort();
    let (x, y) = (others[0], others[1]);
    let face_a = FaceId::opposite_vertex(y); // contains apex, middle, x
    let face_c = FaceId::opposite_vertex(x); // contains apex, middle, y
    debug_assert!(face_a.contains(apex) && face_a.contains(middle) && face_a.contains(x));
    debug_assert!(face_c.contains(apex) && face_c.contains(middle) && face_c.contains(y));
    unroll_faces(
        t,
        &[face_a, opposite, face_c],
        &Isometry2::identity(t.kappa()),
    )
}

/// The two apex images of a [`vertex_pair_development`], in strip order.
pub fn apex_images(dev: &Development, apex: VertexId) -> (ModelPoint, ModelPoint) {
    let first = dev.faces().first().expect("nonempty development");
    let last = dev.faces().last().expect("nonempty development");
    (first.corner(apex), last.corner(apex))
}

/// One recorded edge crossing of a walked geodesic.
#[derive(Debug, Clone)]
pub struct WalkCrossing {
    /// Index into the development's gluing list.
    pub gluing_index: usize,
    pub edge: EdgeId,
    pub point: ModelPoint,
    /// Arc-length parameter along the walked geodesic.
    pub ray_param: f64,
    /// Parameter along the placed edge from its lower vertex, in (0, 1).
    pub edge_param: f64,
}

/// Successful walk through every scheduled gluing edge.
#[derive(Debug, Clone)]
pub struct WalkSuccess {
    pub crossings: Vec<WalkCrossing>,
    pub end: ModelPoint,
    /// Smallest distance from the walked chords to any non-endpoint vertex
    /// image (the conditioning of the walk).
    pub min_vertex_clearance: f64,
}

/// Why a walk failed; the witness carries the first offending contact.
#[derive(Debug, Clone)]
pub enum WalkFailure {
    /// The geodesic leaves the development through a non-scheduled edge.
    ExitBoundary {
        face_index: usize,
        edge: EdgeId,
        point: ModelPoint,
        ray_param: f64,
    },
    /// The geodesic passes within the vertex-hit radius of a vertex image.
    VertexHit {
        face_index: usize,
        vertex: VertexId,
        image: ModelPoint,
        dist: f64,
    },
    /// The geodesic ends inside a face before reaching the scheduled edge.
    RanOut { face_index: usize },
    /// The walk finished but away from the expected endpoint.
    EndMismatch { end: ModelPoint, dist: f64 },
}

impl WalkFailure {
    pub fn kind(&self) -> &'static str {
        match self {
            WalkFailure::ExitBoundary { .. } => "exit",
            WalkFailure::VertexHit { .. } => "vertex hit",
            WalkFailure::RanOut { .. } => "ran out",
            WalkFailure::EndMismatch { .. } => "end mismatch",
        }
    }
}

/// Walks the geodesic `t ↦ exp(start, dir, t)`, `t ∈ [0, length]`, through
/// the development: it must cross exactly the scheduled gluing edges, in
/// order, strictly between their endpoint images, and may be required to end
/// at `expected_end`.
pub fn walk_ray(
    dev: &Development,
    start: &ModelPoint,
    dir: &Vector3<f64>,
    length: f64,
    expected_end: Option<&ModelPoint>,
    tol: &Tolerances,
) -> Result<std::result::Result<WalkSuccess, WalkFailure>, DevelopError> {
    let n = dev.faces.len();
    let mut crossings: Vec<WalkCrossing> = Vec::with_capacity(n.saturating_sub(1));
    let mut tau = 0.0f64;
    let mut min_clearance = f64::INFINITY;
    let at = |t: f64| -> Result<ModelPoint, DevelopError> { Ok(kernel::exp_point(start, dir, t)?) };

    for i in 0..n {
        let placed = &dev.faces[i];
        let scheduled: Option<EdgeId> = if i + 1 < n {
            Some(dev.gluings[i].edge)
        } else {
            None
        };
        // First boundary crossing of this face after tau.
        let mut first: Option<(f64, EdgeId, ModelPoint)> = None;
        for e in placed.face.edges() {
            let seg = placed.placed_edge(e);
            let pole = seg.pole()?;
            for t in kernel::ray_geodesic_crossings(start, dir, &pole, length + tol.geom) {
                if t <= tau + 1e-9 {
                    continue;
                }
                let x = at(t)?;
                if !kernel::on_arc(&seg, &x) {
                    continue;
                }
                if first.map_or(true, |(tf, _, _)| t < tf) {
                    first = Some((t, e, x));
                }
            }
        }

        let chord_end_t = match &first {
            Some((t, _, _)) => (*t).min(length),
            None => length,
        };
        let chord_start = at(tau)?;
        let chord_end = at(chord_end_t)?;
        // Vertex proximity along this chord, skipping the walk's own
        // endpoints where they are corners of the first/last face.
        if let Ok(chord) = GeodesicSegment::new(chord_start, chord_end) {
            for (slot, corner) in placed.corners.iter().enumerate() {
                let skip_start =
                    i == 0 && kernel::dist(corner, start).unwrap_or(f64::INFINITY) < tol.vertex;
                let skip_end = i + 1 == n
                    && expected_end
                        .map(|e| kernel::dist(corner, e).unwrap_or(f64::INFINITY) < tol.vertex)
                        .unwrap_or(false);
                if skip_start || skip_end {
                    continue;
                }
                let (d, _) = kernel::point_segment_distance(corner, &chord)?;
                if d < tol.vertex {
                    return Ok(Err(WalkFailure::VertexHit {
                        face_index: i,
                        vertex: placed.face.vertices()[slot],
                        image: *corner,
                        dist: d,
                    }));
                }
                min_clearance = min_clearance.min(d);
            }
        }

        match scheduled {
            Some(sched) => match first {
                Some((t, e, x)) if e == sched && t <= length + tol.geom => {
                    let g = &dev.gluings[i];
                    let d_lo = kernel::dist(&g.endpoints.0, &x)?;
                    crossings.push(WalkCrossing {
                        gluing_index: i,
                        edge: e,
                        point: x,
                        ray_param: t,
                        edge_param: d_lo / g.length,
                    });
                    tau = t;
                }
                Some((t, e, x)) => {
                    return Ok(Err(WalkFailure::ExitBoundary {
                        face_index: i,
                        edge: e,
                        point: x,
                        ray_param: t,
                    }))
                }
                None => return Ok(Err(WalkFailure::RanOut { face_index: i })),
            },
            None => {
                if let Some((t, e, x)) = first {
                    if t < length - 10.0 * tol.geom {
                        return Ok(Err(WalkFailure::ExitBoundary {
                            face_index: i,
                            edge: e,
                            point: x,
                            ray_param: t,
                        }));
                    }
                }
                let end = at(length)?;
                if let Some(target) = expected_end {
                    let d = kernel::dist(&end, target)?;
                    if d > tol.close.max(10.0 * tol.geom) {
                        return Ok(Err(WalkFailure::EndMismatch { end, dist: d }));
                    }
                }
                return Ok(Ok(WalkSuccess {
                    crossings,
                    end,
                    min_vertex_clearance: min_clearance,
                }));
            }
        }
    }
    unreachable!("loop returns from the last face");
}

/// Walks a geodesic segment whose endpoints lie in the first and last placed
/// faces.
pub fn walk_segment(
    dev: &Development,
    seg: &GeodesicSegment,
    tol: &Tolerances,
) -> Result<std::result::Result<WalkSuccess, WalkFailure>, DevelopError> {
    let first = dev.faces.first().ok_or(DevelopError::EndpointOutsideFace)?;
    let last = dev.faces.last().unwrap();
    if first.containment_margin(&seg.start) < -10.0 * tol.geom
        || last.containment_margin(&seg.end) < -10.0 * tol.geom
    {
        return Err(DevelopError::EndpointOutsideFace);
    }
    let dir = seg.direction()?;
    walk_ray(dev, &seg.start, &dir, seg.length, Some(&seg.end), tol)
}

/// True iff the development is non-overlapping and every boundary vertex
/// image has interior angle at most π (within the incidence tolerance).
pub fn is_convex(dev: &Development) -> Result<bool, DevelopError> {
    if dev.is_overlapping() {
        return Err(DevelopError::ConvexityUndefined);
    }
    Ok(dev
        .vertex_images
        .iter()
        .all(|im| im.total_angle <= std::f64::consts::PI + 1e-9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tetra::{EdgeId::*, FaceId::*, VertexId::*};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn adjacency_tables() {
        assert!(FaceAdjacency::check());
    }

    #[test]
    fn face_path_of_belt_schedule() {
        let edges = vec![A1A2, A2A3, A3A4, A1A4, A1A2];
        let path = face_path(&edges).unwrap();
        assert_eq!(path, vec![F123, F234, F134, F124]);
        assert!(face_path(&[A1A2, A3A4]).is_err());
    }

    #[test]
    fn single_face_development() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = unroll_faces(&t, &[F123], &Isometry2::identity(Curvature::Euclidean)).unwrap();
        assert_eq!(dev.faces().len(), 1);
        assert!(dev.gluings().is_empty());
        assert_eq!(dev.vertex_images().len(), 3);
        assert!(!dev.is_overlapping());
        assert!(is_convex(&dev).unwrap());
    }

    #[test]
    fn gluing_consistency_and_lengths() {
        for t in [
            TetraMetric::regular_from_angle(Curvature::Spherical, 0.55 * PI).unwrap(),
            TetraMetric::regular_from_angle(Curvature::Hyperbolic, 0.2 * PI).unwrap(),
            TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap(),
        ] {
            let seq = CuttingSequence {
                edges: vec![A1A2, A2A3, A3A4, A1A4, A1A2],
                p: 0,
                q: 1,
                offset: 0.625,
            };
            let dev = unroll(&t, &seq, &Isometry2::identity(t.kappa())).unwrap();
            assert_eq!(dev.faces().len(), 4);
            assert_eq!(dev.gluings().len(), 3);
            assert!(dev.max_residual() < 1e-9, "residual {}", dev.max_residual());
            for g in dev.gluings() {
                assert_abs_diff_eq!(g.length, t.edge_length(g.edge), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn euclidean_vertex_pair_strip_is_straight_at_middle() {
        // Flat regular tetrahedron: the three face angles at the middle
        // vertex sum to π, so the two apex images are collinear with it.
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = vertex_pair_development(&t, A4, A1).unwrap();
        assert_eq!(dev.faces().len(), 3);
        let (img1, img2) = apex_images(&dev, A4);
        let middle = dev
            .vertex_images()
            .iter()
            .find(|im| im.vertex == A1 && im.incident_faces.len() == 3)
            .expect("middle image");
        assert_abs_diff_eq!(middle.total_angle, PI, epsilon = 1e-12);
        let angle = kernel::angle_at(&middle.point, &img1, &img2).unwrap();
        assert_abs_diff_eq!(angle, PI, epsilon = 1e-7);
    }

    #[test]
    fn spherical_strip_hub_angle_additivity() {
        // The strip turns by 3α at the hub; for α = 0.55π the geodesic angle
        // between the apex images is the complement 2π − 3α.
        let alpha = 0.55 * PI;
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, alpha).unwrap();
        let dev = vertex_pair_development(&t, A4, A1).unwrap();
        let (img1, img2) = apex_images(&dev, A4);
        let middle = dev
            .vertex_images()
            .iter()
            .find(|im| im.incident_faces.len() == 3)
            .unwrap();
        assert_abs_diff_eq!(middle.total_angle, 3.0 * alpha, epsilon = 1e-9);
        let angle = kernel::angle_at(&middle.point, &img1, &img2).unwrap();
        assert_abs_diff_eq!(angle, 2.0 * PI - 3.0 * alpha, epsilon = 1e-9);
    }

    #[test]
    fn spherical_strip_apex_images_coincide_at_flat_cone() {
        // α = 2π/3 gives cone angle exactly 2π at the hub: the two apex
        // images land on the same model point but stay distinct images.
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 2.0 * PI / 3.0).unwrap();
        let dev = vertex_pair_development(&t, A4, A1).unwrap();
        let (img1, img2) = apex_images(&dev, A4);
        assert!(kernel::coord_distance(&img1, &img2) < 1e-9);
        let a4_images = dev
            .vertex_images()
            .iter()
            .filter(|im| im.vertex == A4)
            .count();
        assert_eq!(a4_images, 2);
        assert!(!dev.is_overlapping());
    }

    #[test]
    fn wrapped_spherical_strip_is_flagged() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 0.75 * PI).unwrap();
        let dev = vertex_pair_development(&t, A4, A1).unwrap();
        assert!(dev.is_overlapping());
        assert!(matches!(
            is_convex(&dev),
            Err(DevelopError::ConvexityUndefined)
        ));
    }

    #[test]
    fn hyperbolic_belt_development_counts_two_base_vertex_images() {
        let t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, PI / 4.0).unwrap();
        let seq = CuttingSequence {
            edges: vec![A1A2, A2A3, A3A4, A1A4, A1A2],
            p: 0,
            q: 1,
            offset: 0.625,
        };
        let dev = unroll(&t, &seq, &Isometry2::identity(Curvature::Hyperbolic)).unwrap();
        let a1_images: Vec<_> = dev
            .vertex_images()
            .iter()
            .filter(|im| im.vertex == A1)
            .collect();
        assert_eq!(a1_images.len(), 2);
        assert!(!dev.is_overlapping());
        assert!(is_convex(&dev).unwrap());
    }

    #[test]
    fn base_invariance_up_to_global_isometry() {
        // Unrollings with different bases differ by one global isometry:
        // conjugate by it and compare every vertex image.
        let t = TetraMetric::regular_from_angle(Curvature::Hyperbolic, 0.2 * PI).unwrap();
        let seq = CuttingSequence {
            edges: vec![A1A2, A2A3, A3A4, A1A4, A1A2],
            p: 0,
            q: 1,
            offset: 0.625,
        };
        let base1 = Isometry2::identity(Curvature::Hyperbolic);
        let p = ModelPoint::base(Curvature::Hyperbolic);
        let d = kernel::rotate_tangent(&p, &Vector3::new(1.0, 0.0, 0.0), 0.9);
        let moved = kernel::exp_point(&p, &d, 0.7).unwrap();
        let d2 = kernel::rotate_tangent(&moved, &kernel::direction_to(&moved, &p).unwrap(), 0.3);
        let base2 = Isometry2::frame_at(&moved, &d2);
        let dev1 = unroll(&t, &seq, &base1).unwrap();
        let dev2 = unroll(&t, &seq, &base2).unwrap();
        let g = base2.compose(&base1.inverse());
        for (im1, im2) in dev1.vertex_images().iter().zip(dev2.vertex_images()) {
            assert_eq!(im1.vertex, im2.vertex);
            let mapped = g.apply(&im1.point);
            assert!(kernel::dist(&mapped, &im2.point).unwrap() < 1e-8);
        }
    }

    #[test]
    fn walk_segment_inside_single_face() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = unroll_faces(&t, &[F123], &Isometry2::identity(Curvature::Euclidean)).unwrap();
        let a = ModelPoint::new(Vector3::new(0.2, 0.1, 0.0), Curvature::Euclidean).unwrap();
        let b = ModelPoint::new(Vector3::new(0.6, 0.2, 0.0), Curvature::Euclidean).unwrap();
        let seg = GeodesicSegment::new(a, b).unwrap();
        let out = walk_segment(&dev, &seg, &Tolerances::default())
            .unwrap()
            .unwrap();
        assert!(out.crossings.is_empty());
    }

    #[test]
    fn walk_detects_boundary_exit() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = unroll_faces(
            &t,
            &[F123, F234],
            &Isometry2::identity(Curvature::Euclidean),
        )
        .unwrap();
        // Aim from inside face 1 out through edge A1A3 instead of the
        // scheduled A2A3.
        let start = ModelPoint::new(Vector3::new(0.4, 0.1, 0.0), Curvature::Euclidean).unwrap();
        let dir = Vector3::new(-0.6f64, 0.4, 0.0).normalize();
        let out = walk_ray(&dev, &start, &dir, 2.0, None, &Tolerances::default()).unwrap();
        match out {
            Err(WalkFailure::ExitBoundary { edge, .. }) => assert_eq!(edge, A1A3),
            other => panic!("expected boundary exit, got {other:?}"),
        }
    }

    #[test]
    fn euclidean_apex_segment_hits_middle_vertex() {
        // The flat strip's apex-to-apex segment passes through the straight
        // middle vertex image.
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        let dev = vertex_pair_development(&t, A4, A1).unwrap();
        let (img1, img2) = apex_images(&dev, A4);
        let seg = GeodesicSegment::new(img1, img2).unwrap();
        let out = walk_segment(&dev, &seg, &Tolerances::default()).unwrap();
        match out {
            Err(WalkFailure::VertexHit { vertex, .. }) => assert_eq!(vertex, A1),
            other => panic!("expected vertex hit, got {other:?}"),
        }
    }
}
