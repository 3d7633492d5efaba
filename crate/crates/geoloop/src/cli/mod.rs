//! Command-line surface: schema validation, loop construction and census,
//! tracing, and SVG rendering.
//!
//! Exit codes: 0 when everything requested exists / is valid, 1 when data is
//! valid but a requested loop is blocked (or the metric is invalid), 2 on
//! usage, parse or internal errors.

pub mod render;
pub mod schema;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::hyp_loops::{self, LoopResult};
use crate::kernel::Curvature;
use crate::sph_loops::{self, CandidateStatus};
use crate::tetra::{self, FaceId, TetraMetric, VertexId, VERTICES};
use crate::tol::Tolerances;
use crate::trace::{self, StopReason};
use render::Projection;
use schema::{
    clearance_doc, segments_doc, signature_map, status_name, witness_doc, EpsilonsDoc,
    LoopReportFile, NumericsDoc, TetraSpecFile, WitnessDoc,
};

#[derive(Parser)]
#[command(
    name = "geoloop",
    about = "Geodesic loops on tetrahedra in spherical, Euclidean and hyperbolic geometry",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a tetrahedron description.
    Validate(ValidateArgs),
    /// Construct vertex loops and report existence.
    Loops(LoopsArgs),
    /// Trace a geodesic from a point on an edge.
    Trace(TraceArgs),
    /// Render a development (and its loop) to SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Tetrahedron JSON file.
    path: PathBuf,
}

#[derive(Args)]
struct LoopsArgs {
    path: PathBuf,
    /// Loop vertex (spherical: apex; hyperbolic: A1 or A2).
    #[arg(long)]
    vertex: Option<String>,
    /// Loop type "p,q" (hyperbolic and Euclidean).
    #[arg(long)]
    pq: Option<String>,
    /// All vertices (spherical: the 12-candidate census).
    #[arg(long)]
    all: bool,
    /// Directory for one report file per loop (stdout always gets JSON lines).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    path: PathBuf,
    /// Face chart in which the shot starts, e.g. A1A2A3.
    #[arg(long)]
    face: String,
    /// Edge id and parameter in (0,1), e.g. --edge-point A1A2 0.5.
    #[arg(long, num_args = 2, value_names = ["EDGE", "T"])]
    edge_point: Vec<String>,
    /// Angle from the edge direction, rotated into the face (radians).
    #[arg(long)]
    angle: f64,
    /// Arc-length budget.
    #[arg(long)]
    max_length: f64,
}

#[derive(Args)]
struct RenderArgs {
    path: PathBuf,
    /// Development to draw for κ ∈ {0, −1}: the (p,q) schedule.
    #[arg(long)]
    pq: Option<String>,
    /// Spherical strip: apex vertex.
    #[arg(long)]
    apex: Option<String>,
    /// Spherical strip: middle vertex.
    #[arg(long)]
    middle: Option<String>,
    /// stereographic | poincare | plane (must match the curvature).
    #[arg(long)]
    projection: String,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match cli.command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Loops(a) => cmd_loops(&a),
        Command::Trace(a) => cmd_trace(&a),
        Command::Render(a) => cmd_render(&a),
    }
}

fn geom_override() -> Option<f64> {
    std::env::var("GEOLOOP_EPS_GEOM")
        .ok()
        .and_then(|s| s.parse::<f64>().ok())
        .filter(|v| v.is_finite() && *v > 0.0)
}

fn tolerances() -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(g) = geom_override() {
        tol.geom = g;
    }
    tol
}

fn load_spec(path: &PathBuf) -> Result<(TetraSpecFile, TetraMetric), i32> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(2);
        }
    };
    let doc: TetraSpecFile = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: parse failure: {e}");
            return Err(2);
        }
    };
    match doc.to_metric() {
        Ok(t) => Ok((doc, t)),
        Err(e) => {
            println!("{}", serde_json::json!({ "violation": e.to_string() }));
            Err(1)
        }
    }
}

fn cmd_validate(args: &ValidateArgs) -> i32 {
    match load_spec(&args.path) {
        Ok(_) => 0,
        Err(code) => code,
    }
}

fn parse_pq(s: &str) -> Option<(u32, u32)> {
    let mut parts = s.split(',');
    let p = parts.next()?.trim().parse::<u32>().ok()?;
    let q = parts.next()?.trim().parse::<u32>().ok()?;
    if parts.next().is_some() {
        return None;
    }
    Some((p, q))
}

fn numerics(max_residual: f64) -> NumericsDoc {
    NumericsDoc {
        epsilons: EpsilonsDoc::current(geom_override()),
        max_residual,
    }
}

fn sph_report(doc: &TetraSpecFile, row: &sph_loops::CensusRow) -> LoopReportFile {
    let c = &row.candidate;
    let (witness, length, segments, signature) = match &c.status {
        CandidateStatus::Exists { curve, .. } => (
            None,
            Some(curve.length),
            segments_doc(curve),
            signature_map(&trace::signature(curve).map(|s| s.counts).unwrap_or([0; 6])),
        ),
        CandidateStatus::Blocked { witness } => (
            Some(witness_doc(witness)),
            None,
            Vec::new(),
            signature_map(&[0; 6]),
        ),
        CandidateStatus::Unresolved => (None, None, Vec::new(), signature_map(&[0; 6])),
    };
    LoopReportFile {
        tetra: doc.clone(),
        vertex: row.apex.name().to_string(),
        middle: Some(row.middle.name().to_string()),
        loop_type: None,
        status: status_name(&c.status).to_string(),
        witness,
        length,
        segments,
        signature,
        clearance: Vec::new(),
        numerics: numerics(c.development.max_residual()),
    }
}

fn hyp_report_ok(doc: &TetraSpecFile, lr: &LoopResult) -> LoopReportFile {
    LoopReportFile {
        tetra: doc.clone(),
        vertex: lr.vertex.name().to_string(),
        middle: None,
        loop_type: Some([lr.pq.0, lr.pq.1]),
        status: "exists".into(),
        witness: None,
        length: Some(lr.loop_length),
        segments: segments_doc(&lr.loop_curve),
        signature: signature_map(&lr.loop_signature.counts),
        clearance: clearance_doc(&lr.clearance),
        numerics: numerics(lr.development.max_residual()),
    }
}

fn hyp_report_failure(
    doc: &TetraSpecFile,
    vertex: VertexId,
    pq: (u32, u32),
    detail: String,
) -> LoopReportFile {
    let kind = if detail.contains("vertex hit") {
        "vertex hit"
    } else {
        "blocked"
    };
    LoopReportFile {
        tetra: doc.clone(),
        vertex: vertex.name().to_string(),
        middle: None,
        loop_type: Some([pq.0, pq.1]),
        status: "blocked".into(),
        witness: Some(WitnessDoc {
            kind: kind.into(),
            edge: None,
            vertex: None,
            detail: Some(detail),
            condition: None,
        }),
        length: None,
        segments: Vec::new(),
        signature: signature_map(&[0; 6]),
        clearance: Vec::new(),
        numerics: numerics(0.0),
    }
}

fn emit_reports(reports: &[LoopReportFile], out: &Option<PathBuf>) -> Result<(), i32> {
    let stdout = std::io::stdout();
    let mut handle = stdout.lock();
    for r in reports {
        let line = serde_json::to_string(r).expect("serialize report");
        if writeln!(handle, "{line}").is_err() {
            return Err(2);
        }
    }
    if let Some(dir) = out {
        if std::fs::create_dir_all(dir).is_err() {
            eprintln!("error: cannot create {}", dir.display());
            return Err(2);
        }
        for r in reports {
            let name = match (&r.middle, &r.loop_type) {
                (Some(m), _) => format!("loop_{}_{}.json", r.vertex, m),
                (None, Some([p, q])) => format!("loop_{}_{}_{}.json", r.vertex, p, q),
                _ => format!("loop_{}.json", r.vertex),
            };
            let body = serde_json::to_string_pretty(r).expect("serialize report");
            if std::fs::write(dir.join(name), body).is_err() {
                return Err(2);
            }
        }
    }
    Ok(())
}

fn cmd_loops(args: &LoopsArgs) -> i32 {
    let (doc, t) = match load_spec(&args.path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let pq = match &args.pq {
        Some(s) => match parse_pq(s) {
            Some(pq) => Some(pq),
            None => {
                eprintln!("error: --pq expects \"p,q\"");
                return 2;
            }
        },
        None => None,
    };

    match t.kappa() {
        Curvature::Spherical => {
            if pq.is_some() {
                eprintln!("error: --pq does not apply to spherical loops");
                return 2;
            }
            let apexes: Vec<VertexId> = if args.all {
                VERTICES.to_vec()
            } else {
                match args.vertex.as_deref().and_then(VertexId::parse) {
                    Some(v) => vec![v],
                    None => {
                        eprintln!("error: --vertex or --all required");
                        return 2;
                    }
                }
            };
            let mut rows: Vec<sph_loops::CensusRow> = Vec::new();
            for apex in apexes {
                let candidates = match sph_loops::enumerate_candidates(&t, apex) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                };
                let resolved: Vec<_> = candidates
                    .par_iter()
                    .map(sph_loops::resolve_candidate)
                    .collect();
                for r in resolved {
                    match r {
                        Ok(c) => rows.push(sph_loops::CensusRow {
                            apex,
                            middle: c.middle,
                            candidate: c,
                        }),
                        Err(e) => {
                            eprintln!("error: {e}");
                            return 2;
                        }
                    }
                }
            }
            rows.sort_by_key(|r| (r.apex, r.middle));
            let reports: Vec<LoopReportFile> = rows.iter().map(|r| sph_report(&doc, r)).collect();
            if emit_reports(&reports, &args.out).is_err() {
                return 2;
            }
            if rows
                .iter()
                .all(|r| matches!(r.candidate.status, CandidateStatus::Exists { .. }))
            {
                0
            } else {
                1
            }
        }
        Curvature::Hyperbolic | Curvature::Euclidean => {
            let (p, q) = match pq {
                Some(pq) => pq,
                None => {
                    eprintln!("error: --pq p,q is required for this curvature");
                    return 2;
                }
            };
            if trace::canonical_pq(p, q).is_err() {
                eprintln!("error: not coprime");
                return 2;
            }
            let vertices: Vec<VertexId> = if args.all {
                vec![VertexId::A1, VertexId::A2]
            } else {
                match args.vertex.as_deref() {
                    None => vec![VertexId::A1],
                    Some(s) => match VertexId::parse(s) {
                        Some(v) => vec![v],
                        None => {
                            eprintln!("error: unknown vertex {s}");
                            return 2;
                        }
                    },
                }
            };
            let results: Vec<(VertexId, Result<LoopResult, hyp_loops::HypError>)> = vertices
                .par_iter()
                .map(|v| (*v, hyp_loops::vertex_loop(&t, p, q, *v)))
                .collect();
            let mut reports = Vec::new();
            let mut all_exist = true;
            for (v, res) in &results {
                match res {
                    Ok(lr) => reports.push(hyp_report_ok(&doc, lr)),
                    Err(hyp_loops::HypError::LoopConstructionFailed(detail)) => {
                        all_exist = false;
                        reports.push(hyp_report_failure(&doc, *v, (p, q), detail.clone()));
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        return 2;
                    }
                }
            }
            reports.sort_by(|a, b| a.vertex.cmp(&b.vertex));
            if emit_reports(&reports, &args.out).is_err() {
                return 2;
            }
            if all_exist {
                0
            } else {
                1
            }
        }
    }
}

fn cmd_trace(args: &TraceArgs) -> i32 {
    let (_, t) = match load_spec(&args.path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    if !(args.max_length > 0.0) {
        eprintln!("error: --max-length must be positive");
        return 2;
    }
    let face = match FaceId::parse(&args.face) {
        Some(f) => f,
        None => {
            eprintln!("error: unknown face {}", args.face);
            return 2;
        }
    };
    if args.edge_point.len() != 2 {
        eprintln!("error: --edge-point expects EDGE T");
        return 2;
    }
    let edge = match tetra::EdgeId::parse(&args.edge_point[0]) {
        Some(e) if face.edges().contains(&e) => e,
        _ => {
            eprintln!(
                "error: edge {} is not on face {}",
                args.edge_point[0], face
            );
            return 2;
        }
    };
    let s: f64 = match args.edge_point[1].parse() {
        Ok(v) if (0.0..=1.0).contains(&v) => v,
        _ => {
            eprintln!("error: edge parameter must be in [0, 1]");
            return 2;
        }
    };
    let out = match trace::shoot_from_edge(
        &t,
        face,
        edge,
        s,
        args.angle,
        args.max_length,
        &tolerances(),
    ) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let stop = match &out.stop {
        StopReason::Closed => "closed".to_string(),
        StopReason::VertexHit { vertex, .. } => format!("vertex hit {vertex}"),
        StopReason::MaxLength => "max length".to_string(),
        StopReason::StepLimit => "step limit".to_string(),
    };
    let crossings: Vec<serde_json::Value> = out
        .curve
        .junctions
        .iter()
        .map(|j| serde_json::json!({ "edge": j.edge.name(), "t": j.param }))
        .collect();
    let report = serde_json::json!({
        "stop": stop,
        "length": out.curve.length,
        "crossings": crossings,
        "closed": out.curve.closed,
        "numerics": numerics(0.0),
    });
    println!("{report}");
    0
}

fn cmd_render(args: &RenderArgs) -> i32 {
    let (_, t) = match load_spec(&args.path) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let projection = match Projection::parse(&args.projection) {
        Some(p) => p,
        None => {
            eprintln!("error: unknown projection {}", args.projection);
            return 2;
        }
    };
    if !projection.matches(t.kappa()) {
        eprintln!(
            "error: projection {} does not match curvature {}",
            args.projection,
            t.kappa().kappa()
        );
        return 2;
    }
    let svg = match t.kappa() {
        Curvature::Spherical => {
            let apex = args.apex.as_deref().and_then(VertexId::parse);
            let middle = args.middle.as_deref().and_then(VertexId::parse);
            let (apex, middle) = match (apex, middle) {
                (Some(a), Some(m)) => (a, m),
                _ => {
                    eprintln!("error: spherical rendering needs --apex and --middle");
                    return 2;
                }
            };
            let candidates = match sph_loops::enumerate_candidates(&t, apex) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let candidate = match candidates.into_iter().find(|c| c.middle == middle) {
                Some(c) => c,
                None => {
                    eprintln!("error: {middle} is not opposite {apex}");
                    return 2;
                }
            };
            let resolved = match sph_loops::resolve_candidate(&candidate) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let mut curves: Vec<(&trace::SurfaceCurve, usize, &str)> = Vec::new();
            if let CandidateStatus::Exists { curve, .. } = &resolved.status {
                curves.push((curve, 0, "curve"));
            }
            render::render_development(&resolved.development, &curves, projection)
        }
        Curvature::Hyperbolic => {
            let (p, q) = match args.pq.as_deref().and_then(parse_pq) {
                Some(pq) => pq,
                None => {
                    eprintln!("error: hyperbolic rendering needs --pq p,q");
                    return 2;
                }
            };
            let lr = match hyp_loops::vertex_loop(&t, p, q, VertexId::A1) {
                Ok(lr) => lr,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let mut curves: Vec<(&trace::SurfaceCurve, usize, &str)> = Vec::new();
            if let Some(cg) = &lr.closed {
                // Draw the closed geodesic when its marking matches this
                // development's face chain.
                if cg.curve.segments.len() == lr.development.faces().len()
                    && cg
                        .curve
                        .face_path()
                        .iter()
                        .zip(lr.development.faces())
                        .all(|(f, p)| *f == p.face)
                {
                    curves.push((&cg.curve, 0, "geodesic"));
                }
            }
            curves.push((&lr.loop_curve, lr.chain_offset, "curve"));
            render::render_development(&lr.development, &curves, projection)
        }
        Curvature::Euclidean => {
            let (p, q) = match args.pq.as_deref().and_then(parse_pq) {
                Some(pq) => pq,
                None => {
                    eprintln!("error: planar rendering needs --pq p,q");
                    return 2;
                }
            };
            let seq = match trace::cutting_sequence(p, q) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            let dev = match crate::develop::unroll(
                &t,
                &seq,
                &crate::kernel::Isometry2::identity(Curvature::Euclidean),
            ) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("error: {e}");
                    return 2;
                }
            };
            render::render_development(&dev, &[], projection)
        }
    };
    if std::fs::write(&args.out, svg).is_err() {
        eprintln!("error: cannot write {}", args.out.display());
        return 2;
    }
    0
}
