//! Hyperbolic (p, q) machinery: holonomy of the unrolled cutting sequence,
//! the closed geodesic realized as the holonomy axis, and the vertex loop
//! joining the two base-vertex images of the development.
//!
//! Unrolling the (p, q) schedule and continuing one face past the final base
//! edge yields the deck transformation mapping the first copy of the base
//! edge onto the last, vertex labels matched. Its translation length is the
//! closed geodesic's length and its axis meets the base edge at the
//! geodesic's base point. The curves themselves are realized chart-locally
//! by straightening the junction parameters, which stays well-conditioned on
//! developments far too long for any single hyperboloid chart.

use nalgebra::{Matrix3, Vector3};
use thiserror::Error;

use crate::develop::{self, CuttingSequence, Development, DevelopError};
use crate::kernel::{self, Curvature, GeodesicSegment, Isometry2, KernelError, ModelPoint};
use crate::tetra::{EdgeId, FaceId, TetraMetric, VertexId};
use crate::tol::{Tolerances, EPS_CLASS};
use crate::trace::{
    self, ChartCache, ClearanceRow, CrossingSignature, StraightenOutcome, SurfaceCurve,
    SweepConfig, TraceError,
};

#[derive(Debug, Error)]
pub enum HypError {
    #[error("hyperbolic only")]
    HyperbolicOnly,
    #[error("no axis: holonomy classified {0}")]
    NoAxis(&'static str),
    #[error("axis outside edge (intersection parameter {0})")]
    AxisOutsideEdge(f64),
    #[error("loop construction failed: {0}")]
    LoopConstructionFailed(String),
    #[error("loop vertex must be an endpoint of the base edge A1A2")]
    BadLoopVertex,
    #[error("outside the small-angle hypotheses: face angle at {0} of {1} exceeds π/4")]
    OutsideSmallAngles(VertexId, FaceId),
    #[error("kernel: {0}")]
    Kernel(#[from] KernelError),
    #[error("develop: {0}")]
    Develop(#[from] DevelopError),
    #[error("trace: {0}")]
    Trace(#[from] TraceError),
}

/// Spectral type of a hyperbolic-plane isometry.
#[derive(Debug, Clone)]
pub enum HolonomyClass {
    /// Translation along an axis: length and an axis segment representative
    /// (one fundamental translation step).
    Hyperbolic { length: f64, axis: GeodesicSegment },
    Parabolic,
    Elliptic,
    Identity,
}

impl HolonomyClass {
    pub fn name(&self) -> &'static str {
        match self {
            HolonomyClass::Hyperbolic { .. } => "hyperbolic",
            HolonomyClass::Parabolic => "parabolic",
            HolonomyClass::Elliptic => "elliptic",
            HolonomyClass::Identity => "identity",
        }
    }

    pub fn translation_length(&self) -> Option<f64> {
        match self {
            HolonomyClass::Hyperbolic { length, .. } => Some(*length),
            _ => None,
        }
    }
}

/// The edge-identification isometry of an unrolled (p, q) schedule.
#[derive(Debug, Clone)]
pub struct Holonomy {
    /// Maps the last copy of the base edge back onto the first.
    pub isometry: Isometry2,
    /// Deck transformation (first copy onto last): the inverse of the above.
    pub deck: Isometry2,
    pub class: HolonomyClass,
    pub sequence: CuttingSequence,
}

/// The deck transformation of a schedule: unrolling one continuation face
/// past the final base edge places a fresh copy of the first face, and since
/// the first face carries the identity placement, that placement *is* the
/// deck map in first-chart coordinates.
pub fn deck_transform(t: &TetraMetric, seq: &CuttingSequence) -> Result<Isometry2, HypError> {
    let chain = seq.face_path()?;
    let first = chain[0];
    let last = *chain.last().unwrap();
    let continuation = seq.base_edge().other_face(last);
    if continuation != first {
        return Err(HypError::LoopConstructionFailed(format!(
            "schedule does not return to its first face: {continuation} vs {first}"
        )));
    }
    let mut extended = chain;
    extended.push(continuation);
    let base = Isometry2::identity(t.kappa());
    let dev_ext = develop::unroll_faces(t, &extended, &base)?;
    Ok(dev_ext.faces().last().unwrap().placement)
}

/// Classifies an orientation-preserving isometry of the hyperbolic plane.
pub fn classify_isometry(iso: &Isometry2) -> Result<HolonomyClass, HypError> {
    if iso.kappa() != Curvature::Hyperbolic {
        return Err(HypError::HyperbolicOnly);
    }
    let m = iso.matrix();
    if (m - Matrix3::identity()).norm() < EPS_CLASS {
        return Ok(HolonomyClass::Identity);
    }
    let tr = m.trace();
    if tr > 3.0 + EPS_CLASS {
        let length = ((tr - 1.0) / 2.0).acosh();
        let axis = axis_of(iso, length)?;
        Ok(HolonomyClass::Hyperbolic { length, axis })
    } else if tr >= 3.0 - EPS_CLASS {
        Ok(HolonomyClass::Parabolic)
    } else {
        Ok(HolonomyClass::Elliptic)
    }
}

fn mdot(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    a.x * b.x + a.y * b.y - a.z * b.z
}

/// Fixed spacelike eigenvector of the isometry via the spectral projector
/// `M² − (τ−1)M + I`, which annihilates the translation eigenpair exactly
/// and stays well-conditioned for large translation lengths.
fn fixed_spacelike(iso: &Isometry2) -> Result<Vector3<f64>, HypError> {
    let m = iso.matrix();
    let tau = m.trace();
    let proj = m * m - (tau - 1.0) * m + Matrix3::identity();
    let mut s = Vector3::zeros();
    for c in 0..3 {
        let col = proj.column(c).into_owned();
        if col.norm() > s.norm() {
            s = col;
        }
    }
    let q = mdot(&s, &s);
    if !(q > 0.0) {
        return Err(HypError::NoAxis("fixed vector not spacelike"));
    }
    Ok(s / q.sqrt())
}

/// The invariant geodesic of a hyperbolic translation. At tame translation
/// lengths the representative runs one full translation step, from a point
/// on the axis to its image; at large lengths the image's coordinates are
/// beyond reliable renormalization and a unit segment along the axis is
/// returned instead. Consistency is checked scale-relatively either way.
fn axis_of(iso: &Isometry2, length: f64) -> Result<GeodesicSegment, HypError> {
    let s = fixed_spacelike(iso)?;
    // A point on the axis: project the hyperboloid apex onto the plane
    // Minkowski-orthogonal to s.
    let ez = Vector3::z();
    let u = ez - s * mdot(&ez, &s);
    let uu = mdot(&u, &u);
    if !(uu < 0.0) {
        return Err(HypError::NoAxis("axis projection degenerate"));
    }
    let mut p = u / (-uu).sqrt();
    if p.z < 0.0 {
        p = -p;
    }
    let p0 = ModelPoint::renormalized(p, Curvature::Hyperbolic);
    // Tangent of the axis at p0, oriented along the translation: M·p0 must
    // equal cosh(ℓ)·p0 + sinh(ℓ)·w, compared relatively so that far images
    // never need renormalizing.
    let mut w = {
        let c = p0.coords().cross(&s);
        let jc = Vector3::new(c.x, c.y, -c.z);
        jc / mdot(&jc, &jc).sqrt()
    };
    let image = iso.matrix() * p0.coords();
    let predict = |w: &Vector3<f64>| p0.coords() * length.cosh() + w * length.sinh();
    let res_plus = (image - predict(&w)).norm() / image.norm();
    let res_minus = (image - predict(&(-w))).norm() / image.norm();
    if res_minus < res_plus {
        w = -w;
    }
    // The fixed eigenvector carries an e^ℓ-amplified rounding component, so
    // the acceptable residual grows with the trace.
    let tau = iso.matrix().trace();
    if res_plus.min(res_minus) > 1e-7 + tau.abs() * 1e-13 {
        return Err(HypError::NoAxis("translation length mismatch on axis"));
    }
    if length.cosh() * p0.coords().z < 1e5 {
        let end = ModelPoint::renormalized(image, Curvature::Hyperbolic);
        Ok(GeodesicSegment::new(p0, end)?)
    } else {
        let end = kernel::exp_point(&p0, &w, 1.0)?;
        Ok(GeodesicSegment::new(p0, end)?)
    }
}

/// Homogeneous coefficients of the axis: `x.lifted() · pole = 0` on the axis.
fn axis_pole(iso: &Isometry2) -> Result<Vector3<f64>, HypError> {
    let s = fixed_spacelike(iso)?;
    let js = Vector3::new(s.x, s.y, -s.z);
    Ok(js / js.norm())
}

/// Composes the (p, q) holonomy: unrolls the cutting sequence, extends one
/// face, and classifies the edge identification. Non-hyperbolic
/// classifications are surfaced as hard errors.
pub fn holonomy(t: &TetraMetric, p: u32, q: u32) -> Result<Holonomy, HypError> {
    if t.kappa() != Curvature::Hyperbolic {
        return Err(HypError::HyperbolicOnly);
    }
    let (p, q, _) = trace::canonical_pq(p, q)?;
    let sequence = trace::cutting_sequence(p, q)?;
    let deck = deck_transform(t, &sequence)?;
    let class = classify_isometry(&deck)?;
    if !matches!(class, HolonomyClass::Hyperbolic { .. }) {
        return Err(HypError::NoAxis(match class {
            HolonomyClass::Parabolic => "parabolic",
            HolonomyClass::Elliptic => "elliptic",
            HolonomyClass::Identity => "identity",
            HolonomyClass::Hyperbolic { .. } => unreachable!(),
        }));
    }
    Ok(Holonomy {
        isometry: deck.inverse(),
        deck,
        class,
        sequence,
    })
}

/// Intersection parameter of the axis with the first placed copy of the base
/// edge, which in first-chart coordinates is the chart edge itself.
pub fn axis_base_param(t: &TetraMetric, hol: &Holonomy) -> Result<f64, HypError> {
    let chain = hol.sequence.face_path()?;
    let first_copy = t.chart_edge(chain[0], hol.sequence.base_edge());
    let pole = axis_pole(&hol.deck)?;
    match kernel::segment_geodesic_root(&first_copy, &pole) {
        Some(s) if (1e-12..=1.0 - 1e-12).contains(&s) => Ok(s),
        Some(s) => Err(HypError::AxisOutsideEdge(s)),
        None => Err(HypError::AxisOutsideEdge(f64::NAN)),
    }
}

/// The type-(p, q) simple closed geodesic, realized by cyclic straightening
/// of the cutting sequence and verified against the holonomy.
#[derive(Debug, Clone)]
pub struct ClosedGeodesic {
    pub curve: SurfaceCurve,
    /// Translation length of the holonomy (the curve length agrees within
    /// the stated tolerance).
    pub length: f64,
    /// Parameter of the base point on the first base-edge copy, from the
    /// lower vertex, as found by the straightening.
    pub base_param: f64,
    /// The same parameter from the holonomy axis intersection; agrees with
    /// `base_param` whenever the development is small enough for the global
    /// axis to be well-conditioned.
    pub axis_param: Option<f64>,
    pub holonomy: Holonomy,
}

pub fn closed_geodesic(t: &TetraMetric, p: u32, q: u32) -> Result<ClosedGeodesic, HypError> {
    let hol = holonomy(t, p, q)?;
    let tol = Tolerances::default();
    let length = hol.class.translation_length().expect("hyperbolic class");
    let chain = hol.sequence.face_path()?;
    let edges: Vec<EdgeId> = hol.sequence.edges[..hol.sequence.edges.len() - 1].to_vec();
    let charts = ChartCache::new(t);
    let curve = match trace::straighten(t, &charts, &chain, &edges, None, None, &tol)? {
        StraightenOutcome::Converged(c) => c,
        StraightenOutcome::VertexHit { vertex, dist, .. } => {
            return Err(HypError::LoopConstructionFailed(format!(
                "closed geodesic passes through vertex {vertex} (distance {dist:e})"
            )))
        }
        StraightenOutcome::NoConvergence { residual } => {
            return Err(HypError::LoopConstructionFailed(format!(
                "straightening did not converge (residual {residual:e})"
            )))
        }
    };
    // Double-entry bookkeeping: the summed length must match the holonomy
    // translation length.
    if (curve.length - length).abs() > 1e-8 * (1.0 + length) {
        return Err(HypError::LoopConstructionFailed(format!(
            "length {} disagrees with holonomy translation length {length}",
            curve.length
        )));
    }
    let (simple, _) = trace::is_simple(&curve);
    if !simple {
        return Err(HypError::LoopConstructionFailed(
            "closed geodesic is not simple".into(),
        ));
    }
    let sig = trace::signature(&curve)?;
    if sig.classified != Some((hol.sequence.p, hol.sequence.q)) {
        return Err(HypError::LoopConstructionFailed(format!(
            "signature {:?} does not classify as ({}, {})",
            sig.counts, hol.sequence.p, hol.sequence.q
        )));
    }
    // The closure junction is the base-edge crossing.
    let base_param = curve
        .junctions
        .last()
        .expect("cyclic curve has junctions")
        .param;
    let axis_param = axis_base_param(t, &hol).ok();
    Ok(ClosedGeodesic {
        curve,
        length,
        base_param,
        axis_param,
        holonomy: hol,
    })
}

/// A constructed vertex loop with its companion closed geodesic.
#[derive(Debug, Clone)]
pub struct LoopResult {
    pub pq: (u32, u32),
    pub vertex: VertexId,
    pub loop_curve: SurfaceCurve,
    pub loop_length: f64,
    pub loop_signature: CrossingSignature,
    pub closed: Option<ClosedGeodesic>,
    /// Full development of the loop's marking of the (p, q) schedule; the
    /// loop traverses the sub-chain starting at `chain_offset`.
    pub development: Development,
    pub chain_offset: usize,
    pub clearance: Vec<ClearanceRow>,
}

/// The simple geodesic loop of type (p, q) through `vertex` (an endpoint of
/// the base edge A1A2): the geodesic joining the two images of the vertex in
/// the unrolled (p, q) development. Runs for κ = −1 and, as a negative
/// control, κ = 0, where it fails by hitting a vertex image.
pub fn vertex_loop(
    t: &TetraMetric,
    p: u32,
    q: u32,
    vertex: VertexId,
) -> Result<LoopResult, HypError> {
    if t.kappa() == Curvature::Spherical {
        return Err(HypError::HyperbolicOnly);
    }
    let (lo, hi) = EdgeId::A1A2.vertices();
    if vertex != lo && vertex != hi {
        return Err(HypError::BadLoopVertex);
    }
    let (p, q, _) = trace::canonical_pq(p, q)?;
    let charts = ChartCache::new(t);
    let tol = Tolerances::default();

    // The development can be cut at any of the q base-edge crossings of the
    // closed geodesic, in either orientation; the loop at `vertex` lives in
    // one of these markings. Within a marking, crossings whose edges contain
    // the vertex and sit next to the cut are absorbed into the vertex, so
    // the loop traverses a trimmed sub-chain. Enumerate markings and trims
    // deterministically and keep the first realized loop.
    let canonical = trace::cutting_sequence(p, q)?;
    let cyclic: Vec<EdgeId> = canonical.edges[..canonical.edges.len() - 1].to_vec();
    let k = cyclic.len();
    let mut last_failure: Option<String> = None;
    for reversed in [false, true] {
        let word: Vec<EdgeId> = if reversed {
            cyclic.iter().rev().copied().collect()
        } else {
            cyclic.clone()
        };
        for rot in 0..k {
            if word[rot] != EdgeId::A1A2 {
                continue;
            }
            let mut edges: Vec<EdgeId> = Vec::with_capacity(k + 1);
            for i in 0..=k {
                edges.push(word[(rot + i) % k]);
            }
            let chain = match develop::face_path(&edges) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let m = chain.len();
            let mut start_run: Vec<usize> = vec![0];
            while {
                let i = *start_run.last().unwrap();
                i + 1 < m && edges[i + 1].contains(vertex)
            } {
                start_run.push(start_run.last().unwrap() + 1);
            }
            let mut end_run: Vec<usize> = vec![m - 1];
            while {
                let i = *end_run.last().unwrap();
                i > 0 && edges[i].contains(vertex)
            } {
                end_run.push(end_run.last().unwrap() - 1);
            }
            let mut trims: Vec<(usize, usize)> = Vec::new();
            for &s in &start_run {
                for &e in &end_run {
                    if e > s {
                        trims.push((s, e));
                    }
                }
            }
            trims.sort_by_key(|(s, e)| (e - s, *s));

            for &(start, end) in &trims {
                let faces = &chain[start..=end];
                let jedges = &edges[start + 1..=end];
                let start_pt = t.chart_vertex(faces[0], vertex);
                let end_pt = t.chart_vertex(*faces.last().unwrap(), vertex);
                let outcome = if t.kappa() == Curvature::Euclidean {
                    // The plane needs no relaxation: the developed chord is
                    // the straight segment between the two vertex images.
                    euclidean_candidate(t, faces, jedges, vertex, &tol)?
                } else {
                    trace::straighten(
                        t,
                        &charts,
                        faces,
                        jedges,
                        Some((start_pt, end_pt)),
                        Some(vertex),
                        &tol,
                    )?
                };
                match outcome {
                    StraightenOutcome::Converged(loop_curve) => {
                        let (simple, _) = trace::is_simple(&loop_curve);
                        if !simple {
                            last_failure = Some("converged loop is not simple".into());
                            continue;
                        }
                        let crossed: Vec<EdgeId> =
                            loop_curve.junctions.iter().map(|j| j.edge).collect();
                        if crossed != jedges {
                            last_failure =
                                Some("loop crossings disagree with its schedule".into());
                            continue;
                        }
                        let loop_signature = trace::signature(&loop_curve)?;
                        // The development of the loop's own marking.
                        let marked = CuttingSequence {
                            edges,
                            p,
                            q,
                            offset: canonical.offset,
                        };
                        let development =
                            develop::unroll(t, &marked, &Isometry2::identity(t.kappa()))?;
                        let (closed, clearance) = if t.kappa() == Curvature::Hyperbolic {
                            let closed = closed_geodesic(t, p, q)?;
                            let clearance = trace::clearance_check(t, &loop_curve)?;
                            (Some(closed), clearance)
                        } else {
                            (None, Vec::new())
                        };
                        return Ok(LoopResult {
                            pq: (p, q),
                            vertex,
                            loop_length: loop_curve.length,
                            loop_signature,
                            loop_curve,
                            closed,
                            development,
                            chain_offset: start,
                            clearance,
                        });
                    }
                    StraightenOutcome::VertexHit { vertex: v, dist, .. } => {
                        if last_failure.is_none() {
                            last_failure = Some(format!("vertex hit at {v} (distance {dist:e})"));
                        }
                    }
                    StraightenOutcome::NoConvergence { residual } => {
                        if last_failure.is_none() {
                            last_failure = Some(format!("no convergence (residual {residual:e})"));
                        }
                    }
                }
            }
        }
    }
    Err(HypError::LoopConstructionFailed(
        last_failure.unwrap_or_else(|| "no loop chain candidate".into()),
    ))
}

/// The general-tetrahedron variant: with every face angle at most π/4 the
/// development of any (p, q) schedule is a convex polygon, which guarantees
/// the loop construction; convexity is still checked, then the construction
/// proceeds as for [`vertex_loop`].
pub fn general_vertex_loop(
    t: &TetraMetric,
    p: u32,
    q: u32,
    vertex: VertexId,
) -> Result<LoopResult, HypError> {
    if t.kappa() != Curvature::Hyperbolic {
        return Err(HypError::HyperbolicOnly);
    }
    for f in crate::tetra::FACES {
        for v in f.vertices() {
            if t.face_angle(f, v) > std::f64::consts::FRAC_PI_4 + 1e-12 {
                return Err(HypError::OutsideSmallAngles(v, f));
            }
        }
    }
    let (p, q, _) = trace::canonical_pq(p, q)?;
    let sequence = trace::cutting_sequence(p, q)?;
    let development = develop::unroll(t, &sequence, &Isometry2::identity(t.kappa()))?;
    if !develop::is_convex(&development)? {
        return Err(HypError::LoopConstructionFailed(
            "development is not convex under the small-angle hypotheses".into(),
        ));
    }
    vertex_loop(t, p, q, vertex)
}

/// Report of the shooting uniqueness probe.
#[derive(Debug, Clone)]
pub struct UniquenessReport {
    pub pq: (u32, u32),
    /// Simple returns whose crossing counts match the (p, q) loop pattern up
    /// to a vertex-fixing relabeling.
    pub matching: usize,
    /// Equivalence classes among the matching returns (length + counts up to
    /// relabeling).
    pub classes: usize,
    /// The constructed loop's length was found among the returns.
    pub matches_constructed: bool,
    /// No returns found at all (cap or density too small).
    pub inconclusive: bool,
}

/// Sweeps shooting directions from the loop vertex and checks that all
/// simple (p, q) returns found coincide with the constructed loop up to the
/// vertex-fixing symmetries of the regular tetrahedron.
pub fn uniqueness_probe(
    t: &TetraMetric,
    p: u32,
    q: u32,
    cfg: &SweepConfig,
) -> Result<UniquenessReport, HypError> {
    let vertex = VertexId::A1;
    let constructed = vertex_loop(t, p, q, vertex)?;
    let tol = Tolerances::default();
    let returns = trace::vertex_return_sweep(t, vertex, cfg, &tol)?;
    if returns.is_empty() {
        return Ok(UniquenessReport {
            pq: constructed.pq,
            matching: 0,
            classes: 0,
            matches_constructed: false,
            inconclusive: true,
        });
    }
    let target = canonical_loop_counts(&constructed.loop_signature.counts, vertex);
    let mut lengths: Vec<f64> = Vec::new();
    let mut matching = 0;
    let mut matches_constructed = false;
    for r in &returns {
        if !r.simple {
            continue;
        }
        if canonical_loop_counts(&r.signature.counts, vertex) != target {
            continue;
        }
        matching += 1;
        if (r.length - constructed.loop_length).abs() < 1e-6 {
            matches_constructed = true;
        }
        if !lengths.iter().any(|l| (l - r.length).abs() < 1e-6) {
            lengths.push(r.length);
        }
    }
    Ok(UniquenessReport {
        pq: constructed.pq,
        matching,
        classes: lengths.len(),
        matches_constructed,
        inconclusive: false,
    })
}

/// Resolves a flat loop candidate by walking the straight segment between
/// the two vertex images through the unrolled chain.
fn euclidean_candidate(
    t: &TetraMetric,
    faces: &[FaceId],
    jedges: &[EdgeId],
    vertex: VertexId,
    tol: &Tolerances,
) -> Result<StraightenOutcome, HypError> {
    let dev = develop::unroll_faces(t, faces, &Isometry2::identity(t.kappa()))?;
    let schedule = dev.interior_edge_schedule();
    if schedule != jedges {
        return Ok(StraightenOutcome::NoConvergence { residual: f64::NAN });
    }
    let start = dev.faces()[0].corner(vertex);
    let end = dev.faces().last().unwrap().corner(vertex);
    let seg = kernel::GeodesicSegment::new(start, end)?;
    match develop::walk_segment(&dev, &seg, tol)? {
        Ok(walk) => {
            let curve = trace::fold_walk(&dev, &start, &end, &walk, Some(vertex), None)?;
            Ok(StraightenOutcome::Converged(curve))
        }
        Err(develop::WalkFailure::VertexHit {
            vertex: v,
            dist,
            face_index,
            ..
        }) => Ok(StraightenOutcome::VertexHit {
            vertex: v,
            face_index,
            dist,
        }),
        Err(_) => Ok(StraightenOutcome::NoConvergence { residual: f64::NAN }),
    }
}

/// Crossing counts normalized over the relabelings of the three vertices
/// other than `fixed` (the symmetries of the regular tetrahedron fixing the
/// loop vertex): the lexicographically smallest permuted count vector.
fn canonical_loop_counts(counts: &[usize; 6], fixed: VertexId) -> [usize; 6] {
    use crate::tetra::VERTICES;
    let movable: Vec<VertexId> = VERTICES.iter().copied().filter(|v| *v != fixed).collect();
    let mut best: Option<[usize; 6]> = None;
    let perms = [
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for perm in perms {
        let map = |v: VertexId| -> VertexId {
            if v == fixed {
                fixed
            } else {
                let i = movable.iter().position(|w| *w == v).unwrap();
                movable[perm[i]]
            }
        };
        let mut permuted = [0usize; 6];
        for e in crate::tetra::EDGES {
            let (a, b) = e.vertices();
            let e2 = EdgeId::between(map(a), map(b)).unwrap();
            permuted[e2.index()] = counts[e.index()];
        }
        if best.map_or(true, |b| permuted < b) {
            best = Some(permuted);
        }
    }
    best.unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn regular(alpha: f64) -> TetraMetric {
        TetraMetric::regular_from_angle(Curvature::Hyperbolic, alpha).unwrap()
    }

    #[test]
    fn identity_has_no_axis() {
        let id = Isometry2::identity(Curvature::Hyperbolic);
        assert!(matches!(classify_isometry(&id), Ok(HolonomyClass::Identity)));
    }

    #[test]
    fn holonomy_of_belt_schedule_is_hyperbolic() {
        let t = regular(PI / 4.0);
        let h = holonomy(&t, 0, 1).unwrap();
        match &h.class {
            HolonomyClass::Hyperbolic { length, axis } => {
                assert!(*length > 0.0);
                assert_abs_diff_eq!(axis.length, *length, epsilon = 1e-9);
            }
            other => panic!("expected hyperbolic, got {other:?}"),
        }
        // The deck transformation maps the axis to itself.
        let pole = axis_pole(&h.deck).unwrap();
        if let HolonomyClass::Hyperbolic { axis, .. } = &h.class {
            for pt in [&axis.start, &axis.end] {
                let image = h.deck.apply(pt);
                let scale = image.lifted().norm();
                assert!(kernel::side_value(&image, &pole).abs() / scale < 1e-8);
            }
        }
    }

    #[test]
    fn longer_schedules_have_longer_axes() {
        let t = regular(PI / 4.0);
        let l01 = holonomy(&t, 0, 1).unwrap().class.translation_length().unwrap();
        let l11 = holonomy(&t, 1, 1).unwrap().class.translation_length().unwrap();
        assert!(l11 > l01);
    }

    #[test]
    fn closed_geodesic_belt_type() {
        let t = regular(PI / 4.0);
        let cg = closed_geodesic(&t, 0, 1).unwrap();
        assert_eq!(cg.curve.junctions.len(), 4);
        let sig = trace::signature(&cg.curve).unwrap();
        assert_eq!(sig.classified, Some((0, 1)));
        assert!(trace::is_simple(&cg.curve).0);
        assert_abs_diff_eq!(cg.curve.length, cg.length, epsilon = 1e-8);
        assert!(cg.curve.geodesic_residual(&t).unwrap() < 1e-9);
        // The straightened base point agrees with the holonomy axis.
        let axis_param = cg.axis_param.expect("tame development");
        assert_abs_diff_eq!(cg.base_param, axis_param, epsilon = 1e-8);
    }

    #[test]
    fn closed_geodesic_one_two_type() {
        let t = regular(PI / 4.0);
        let cg = closed_geodesic(&t, 1, 2).unwrap();
        assert_eq!(cg.curve.junctions.len(), 12);
        let sig = trace::signature(&cg.curve).unwrap();
        assert_eq!(sig.classified, Some((1, 2)));
        assert!(trace::is_simple(&cg.curve).0);
        let axis_param = cg.axis_param.expect("tame development");
        assert_abs_diff_eq!(cg.base_param, axis_param, epsilon = 1e-7);
    }

    #[test]
    fn vertex_loop_belt() {
        let t = regular(PI / 4.0);
        let lr = vertex_loop(&t, 0, 1, VertexId::A1).unwrap();
        assert_eq!(lr.loop_curve.loop_vertex, Some(VertexId::A1));
        assert!(trace::is_simple(&lr.loop_curve).0);
        // The (0,1) loop's arrival is absorbed by the base vertex on the
        // last gluing edge: it crosses the two non-incident edges only.
        assert_eq!(lr.loop_curve.junctions.len(), 2);
        let crossed: Vec<EdgeId> = lr.loop_curve.junctions.iter().map(|j| j.edge).collect();
        assert_eq!(crossed, vec![EdgeId::A2A3, EdgeId::A3A4]);
        for row in &lr.clearance {
            assert!(row.applicable);
            assert!(row.margin.unwrap() > 0.0, "margin {:?}", row.margin);
        }
        // The loop is at least as long as the closed geodesic (the axis
        // minimizes displacement).
        let cg = lr.closed.as_ref().unwrap();
        assert!(lr.loop_length >= cg.length);
    }

    #[test]
    fn vertex_loop_from_other_base_endpoint_matches_by_symmetry() {
        let t = regular(PI / 4.0);
        let l1 = vertex_loop(&t, 0, 1, VertexId::A1).unwrap();
        let l2 = vertex_loop(&t, 0, 1, VertexId::A2).unwrap();
        assert_abs_diff_eq!(l1.loop_length, l2.loop_length, epsilon = 1e-9);
        assert!(matches!(
            vertex_loop(&t, 0, 1, VertexId::A3),
            Err(HypError::BadLoopVertex)
        ));
    }

    #[test]
    fn euclidean_pipeline_fails_with_vertex_hit() {
        let t = TetraMetric::regular_from_edge(Curvature::Euclidean, 1.0).unwrap();
        match vertex_loop(&t, 0, 1, VertexId::A1) {
            Err(HypError::LoopConstructionFailed(detail)) => {
                assert!(detail.contains("vertex hit"), "detail: {detail}");
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn general_vertex_loop_boundary_angle() {
        let t = regular(PI / 4.0);
        let lr = general_vertex_loop(&t, 0, 1, VertexId::A1).unwrap();
        assert!(trace::is_simple(&lr.loop_curve).0);
        let t_big = regular(0.3 * PI);
        assert!(matches!(
            general_vertex_loop(&t_big, 0, 1, VertexId::A1),
            Err(HypError::OutsideSmallAngles(_, _))
        ));
    }

    #[test]
    fn alternative_edge_matching_is_rejected() {
        // Identifying the base edge with swapped endpoints composes the deck
        // with the half-turn about the edge midpoint; the result is not the
        // holonomy of any (p, q) geodesic on this development.
        let t = regular(PI / 4.0);
        let h = holonomy(&t, 0, 1).unwrap();
        let chain = h.sequence.face_path().unwrap();
        let base = t.chart_edge(chain[0], EdgeId::A1A2);
        let mid = base.point_at(0.5).unwrap();
        let d_mid = kernel::transported_direction(
            &base.start,
            &base.direction().unwrap(),
            base.length / 2.0,
        );
        let half_turn = Isometry2::frame_at(&mid, &(-d_mid))
            .compose(&Isometry2::frame_at(&mid, &d_mid).inverse());
        let alt = h.deck.compose(&half_turn);
        let ok_axis = match classify_isometry(&alt) {
            Ok(HolonomyClass::Hyperbolic { .. }) => {
                let pole = axis_pole(&alt).unwrap();
                matches!(kernel::segment_geodesic_root(&base, &pole), Some(s) if (0.0..=1.0).contains(&s))
            }
            _ => false,
        };
        assert!(!ok_axis, "swapped matching must not yield a valid axis");
    }
}
