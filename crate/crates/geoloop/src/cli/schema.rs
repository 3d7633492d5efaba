//! JSON schemas of the command-line interface.
//!
//! Input documents are parsed strictly (unknown fields rejected); reports
//! are emitted with fixed field order so identical inputs give identical
//! bytes.

use serde::{Deserialize, Serialize};

use crate::kernel::Curvature;
use crate::sph_loops::{BlockedWitness, CandidateStatus};
use crate::tetra::{TetraMetric, TetraError, EDGES};
use crate::trace::{ClearanceRow, SurfaceCurve};
use crate::tol;

/// Tetrahedron description: curvature plus either the six edge lengths or a
/// regular constructor.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TetraSpecFile {
    pub curvature: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<EdgeLengthsDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<RegularDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EdgeLengthsDoc {
    #[serde(rename = "A1A2")]
    pub a1a2: f64,
    #[serde(rename = "A1A3")]
    pub a1a3: f64,
    #[serde(rename = "A1A4")]
    pub a1a4: f64,
    #[serde(rename = "A2A3")]
    pub a2a3: f64,
    #[serde(rename = "A2A4")]
    pub a2a4: f64,
    #[serde(rename = "A3A4")]
    pub a3a4: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RegularDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub face_angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<f64>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("curvature must be 1, 0 or -1")]
    BadCurvature,
    #[error("exactly one of \"edges\" and \"regular\" must be present")]
    EdgesOrRegular,
    #[error("exactly one of \"face_angle\" and \"edge\" must be present")]
    FaceAngleOrEdge,
    #[error("numbers must be finite and positive")]
    BadNumber,
    #[error("{0}")]
    Metric(#[from] TetraError),
}

impl TetraSpecFile {
    pub fn to_metric(&self) -> Result<TetraMetric, SpecError> {
        let kappa = Curvature::from_kappa(self.curvature).ok_or(SpecError::BadCurvature)?;
        match (&self.edges, &self.regular) {
            (Some(e), None) => {
                let lengths = [e.a1a2, e.a1a3, e.a1a4, e.a2a3, e.a2a4, e.a3a4];
                if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
                    return Err(SpecError::BadNumber);
                }
                Ok(TetraMetric::new(kappa, lengths)?)
            }
            (None, Some(r)) => match (r.face_angle, r.edge) {
                (Some(alpha), None) => {
                    if !(alpha.is_finite() && alpha > 0.0) {
                        return Err(SpecError::BadNumber);
                    }
                    Ok(TetraMetric::regular_from_angle(kappa, alpha)?)
                }
                (None, Some(a)) => {
                    if !(a.is_finite() && a > 0.0) {
                        return Err(SpecError::BadNumber);
                    }
                    Ok(TetraMetric::regular_from_edge(kappa, a)?)
                }
                _ => Err(SpecError::FaceAngleOrEdge),
            },
            _ => Err(SpecError::EdgesOrRegular),
        }
    }

    pub fn from_metric_echo(t: &TetraMetric) -> TetraSpecFile {
        let l = t.edge_lengths();
        TetraSpecFile {
            curvature: t.kappa().kappa(),
            edges: Some(EdgeLengthsDoc {
                a1a2: l[0],
                a1a3: l[1],
                a1a4: l[2],
                a2a3: l[3],
                a2a4: l[4],
                a3a4: l[5],
            }),
            regular: None,
        }
    }
}

/// Endpoint of a curve segment: an edge crossing or a tetrahedron vertex.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SegmentEnd {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub face: String,
    pub enter: SegmentEnd,
    pub exit: SegmentEnd,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ClearanceDoc {
    pub vertex: String,
    pub d: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EpsilonsDoc {
    pub norm: f64,
    pub geom: f64,
    pub trig: f64,
    pub vertex: f64,
    pub close: f64,
}

impl EpsilonsDoc {
    pub fn current(geom_override: Option<f64>) -> Self {
        EpsilonsDoc {
            norm: tol::EPS_NORM,
            geom: geom_override.unwrap_or(tol::EPS_GEOM),
            trig: tol::EPS_TRIG,
            vertex: tol::EPS_VERTEX,
            close: tol::EPS_CLOSE,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NumericsDoc {
    pub epsilons: EpsilonsDoc,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
}

/// One loop report.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LoopReportFile {
    pub tetra: TetraSpecFile,
    pub vertex: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub middle: Option<String>,
    #[serde(rename = "type")]
    pub loop_type: Option<[u32; 2]>,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    pub segments: Vec<SegmentDoc>,
    pub signature: std::collections::BTreeMap<String, usize>,
    pub clearance: Vec<ClearanceDoc>,
    pub numerics: NumericsDoc,
}

pub fn signature_map(counts: &[usize; 6]) -> std::collections::BTreeMap<String, usize> {
    let mut map = std::collections::BTreeMap::new();
    for e in EDGES {
        map.insert(e.name().to_string(), counts[e.index()]);
    }
    map
}

/// Serializes a surface curve into chained segment documents.
pub fn segments_doc(curve: &SurfaceCurve) -> Vec<SegmentDoc> {
    let n = curve.segments.len();
    let mut out = Vec::with_capacity(n);
    for (i, seg) in curve.segments.iter().enumerate() {
        let enter = if i == 0 {
            match (curve.loop_vertex, curve.closed) {
                (Some(v), _) => SegmentEnd {
                    edge: None,
                    t: None,
                    vertex: Some(v.name().to_string()),
                },
                (None, true) => {
                    let j = curve.junctions.last().unwrap();
                    SegmentEnd {
                        edge: Some(j.edge.name().to_string()),
                        t: Some(j.param),
                        vertex: None,
                    }
                }
                (None, false) => SegmentEnd {
                    edge: None,
                    t: None,
                    vertex: None,
                },
            }
        } else {
            let j = &curve.junctions[i - 1];
            SegmentEnd {
                edge: Some(j.edge.name().to_string()),
                t: Some(j.param),
                vertex: None,
            }
        };
        let exit = if i < curve.junctions.len() {
            let j = &curve.junctions[i];
            SegmentEnd {
                edge: Some(j.edge.name().to_string()),
                t: Some(j.param),
                vertex: None,
            }
        } else {
            match curve.loop_vertex {
                Some(v) => SegmentEnd {
                    edge: None,
                    t: None,
                    vertex: Some(v.name().to_string()),
                },
                None => SegmentEnd {
                    edge: None,
                    t: None,
                    vertex: None,
                },
            }
        };
        out.push(SegmentDoc {
            face: seg.face.name().to_string(),
            enter,
            exit,
        });
    }
    out
}

pub fn clearance_doc(rows: &[ClearanceRow]) -> Vec<ClearanceDoc> {
    rows.iter()
        .map(|r| ClearanceDoc {
            vertex: r.vertex.name().to_string(),
            d: r.distance,
            bound: r.bound,
            margin: r.margin,
        })
        .collect()
}

pub fn witness_doc(w: &BlockedWitness) -> WitnessDoc {
    match w {
        BlockedWitness::Antipodal { dist } => WitnessDoc {
            kind: "antipodal".into(),
            edge: None,
            vertex: None,
            detail: None,
            condition: Some(*dist),
        },
        BlockedWitness::DoesNotEnterStrip { margin } => WitnessDoc {
            kind: "exit".into(),
            edge: None,
            vertex: None,
            detail: Some("does not enter the strip".into()),
            condition: Some(*margin),
        },
        BlockedWitness::ExitBoundary {
            edge, condition, ..
        } => WitnessDoc {
            kind: "exit".into(),
            edge: Some(edge.name().to_string()),
            vertex: None,
            detail: None,
            condition: Some(*condition),
        },
        BlockedWitness::VertexHit { vertex, dist } => WitnessDoc {
            kind: "vertex hit".into(),
            edge: None,
            vertex: Some(vertex.name().to_string()),
            detail: None,
            condition: Some(*dist),
        },
        BlockedWitness::RanOut => WitnessDoc {
            kind: "ran out".into(),
            edge: None,
            vertex: None,
            detail: None,
            condition: None,
        },
        BlockedWitness::EndMismatch { dist } => WitnessDoc {
            kind: "end mismatch".into(),
            edge: None,
            vertex: None,
            detail: None,
            condition: Some(*dist),
        },
    }
}

pub fn status_name(status: &CandidateStatus) -> &'static str {
    match status {
        CandidateStatus::Unresolved => "error",
        CandidateStatus::Exists { .. } => "exists",
        CandidateStatus::Blocked { .. } => "blocked",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_parsing() {
        let ok: TetraSpecFile =
            serde_json::from_str(r#"{"curvature": 1, "regular": {"face_angle": 2.0}}"#).unwrap();
        assert!(ok.to_metric().is_ok());

        let both = r#"{"curvature": 1, "regular": {"face_angle": 2.0}, "edges": {"A1A2": 1, "A1A3": 1, "A1A4": 1, "A2A3": 1, "A2A4": 1, "A3A4": 1}}"#;
        let parsed: TetraSpecFile = serde_json::from_str(both).unwrap();
        assert!(matches!(
            parsed.to_metric(),
            Err(SpecError::EdgesOrRegular)
        ));

        let unknown = r#"{"curvature": 1, "regular": {"face_angle": 2.0}, "extra": 1}"#;
        assert!(serde_json::from_str::<TetraSpecFile>(unknown).is_err());

        let missing = r#"{"regular": {"face_angle": 2.0}}"#;
        assert!(serde_json::from_str::<TetraSpecFile>(missing).is_err());
    }

    #[test]
    fn edges_document_round_trip() {
        let t = TetraMetric::regular_from_angle(Curvature::Spherical, 2.0).unwrap();
        let doc = TetraSpecFile::from_metric_echo(&t);
        let json = serde_json::to_string(&doc).unwrap();
        let back: TetraSpecFile = serde_json::from_str(&json).unwrap();
        let t2 = back.to_metric().unwrap();
        assert_eq!(t.edge_lengths(), t2.edge_lengths());
    }
}
