//! Versioned JSON documents. Every document carries a `"schema"` field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::certify::Certificate;
use crate::complex::{ComplexRay, Segment, TropicalComplex};
use crate::elimination::{LatticeMap, LatticePolygon};
use crate::error::{Error, Result};
use crate::exactnum::{PuiseuxElement, Rat};
use crate::newton::TropicalPolynomial;
use crate::potential::{Divisor, PLFunction};
use crate::skeleton::{Ball, Edge, Ray, Skeleton, SkeletonKind, Vertex};
use crate::tropicalize::{CellImage, EdgeExpansion, EdgeExpansionReport, SkeletonCell};

pub const SKELETON: &str = "skeleton.v1";
pub const DIVISOR: &str = "divisor.v1";
pub const PLFUNCTION: &str = "plfunction.v1";
pub const TROPCOMPLEX: &str = "tropcomplex.v1";
pub const TROPPOLY: &str = "troppoly.v1";
pub const CERTIFICATE: &str = "certificate.v1";
pub const POLYGON: &str = "polygon.v1";
pub const LATTICEMAP: &str = "latticemap.v1";

fn check_schema(v: &Value, expected: &str) -> Result<()> {
    match v.get("schema").and_then(Value::as_str) {
        Some(s) if s == expected => Ok(()),
        Some(s) => Err(Error::Parse(format!("expected schema `{expected}`, found `{s}`"))),
        None => Err(Error::Parse(format!("missing `schema` field (expected `{expected}`)"))),
    }
}

fn with_schema(name: &str, body: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), Value::String(name.into()));
    if let Value::Object(m) = body {
        out.extend(m);
    }
    Value::Object(out)
}

#[derive(Serialize, Deserialize)]
struct BallDoc {
    center: PuiseuxElement,
    depth: Rat,
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: usize,
    label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ball: Option<BallDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    position: Option<Rat>,
}

#[derive(Serialize, Deserialize)]
struct EdgeDoc {
    u: usize,
    v: usize,
    len: Rat,
}

#[derive(Serialize, Deserialize)]
struct RayDoc {
    base: usize,
    puncture: String,
}

#[derive(Serialize, Deserialize)]
struct SkeletonDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    loop_length: Option<Rat>,
    vertices: Vec<VertexDoc>,
    edges: Vec<EdgeDoc>,
    rays: Vec<RayDoc>,
    base_vertex: usize,
    #[serde(default)]
    loops_allowed: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    points: BTreeMap<String, PuiseuxElement>,
}

pub fn skeleton_to_json(sk: &Skeleton) -> Value {
    let doc = SkeletonDoc {
        kind: match sk.kind {
            SkeletonKind::P1 => "p1",
            SkeletonKind::Tate => "tate",
            SkeletonKind::Graph => "graph",
        }
        .into(),
        loop_length: sk.loop_length.clone(),
        vertices: sk
            .vertices
            .iter()
            .enumerate()
            .map(|(id, v)| VertexDoc {
                id,
                label: v.label.clone(),
                ball: v.ball.as_ref().map(|b| BallDoc { center: b.center.clone(), depth: b.depth.clone() }),
                position: v.position.clone(),
            })
            .collect(),
        edges: sk.edges.iter().map(|e| EdgeDoc { u: e.u, v: e.v, len: e.length.clone() }).collect(),
        rays: sk.rays.iter().map(|r| RayDoc { base: r.base, puncture: r.puncture.clone() }).collect(),
        base_vertex: sk.base_vertex,
        loops_allowed: sk.loops_allowed,
        points: sk.points.clone(),
    };
    with_schema(SKELETON, serde_json::to_value(doc).expect("serializable"))
}

pub fn skeleton_from_json(v: &Value) -> Result<Skeleton> {
    check_schema(v, SKELETON)?;
    let doc: SkeletonDoc = serde_json::from_value(v.clone())?;
    let kind = match doc.kind.as_str() {
        "p1" => SkeletonKind::P1,
        "tate" => SkeletonKind::Tate,
        "graph" => SkeletonKind::Graph,
        k => return Err(Error::Parse(format!("unknown skeleton kind `{k}`"))),
    };
    for (i, vd) in doc.vertices.iter().enumerate() {
        if vd.id != i {
            return Err(Error::Parse(format!("vertex ids must be 0..n in order; found {} at {i}", vd.id)));
        }
    }
    let vertices = doc
        .vertices
        .into_iter()
        .map(|vd| Vertex {
            label: vd.label,
            ball: vd.ball.map(|b| Ball { center: b.center, depth: b.depth }),
            position: vd.position,
        })
        .collect();
    let edges = doc.edges.into_iter().map(|e| Edge { u: e.u, v: e.v, length: e.len }).collect();
    let rays = doc.rays.into_iter().map(|r| Ray { base: r.base, puncture: r.puncture }).collect();
    let mut sk = Skeleton::from_parts(kind, vertices, edges, rays, doc.base_vertex)?;
    if let Some(l) = doc.loop_length {
        sk.loop_length = Some(l);
    }
    sk.points = doc.points;
    Ok(sk)
}

/// Accepts `{"schema": "divisor.v1", "orders": {...}}` or a bare mapping.
pub fn divisor_from_json(v: &Value) -> Result<Divisor> {
    let orders = if v.get("schema").is_some() {
        check_schema(v, DIVISOR)?;
        v.get("orders").cloned().ok_or_else(|| Error::Parse("divisor has no `orders`".into()))?
    } else {
        v.clone()
    };
    let map: BTreeMap<String, i64> = serde_json::from_value(orders)?;
    Ok(Divisor::new(map))
}

pub fn divisor_to_json(d: &Divisor) -> Value {
    json!({"schema": DIVISOR, "orders": d.orders()})
}

fn edge_key(sk: &Skeleton, i: usize) -> String {
    format!("e{i}:{}->{}", sk.edges[i].u, sk.edges[i].v)
}

pub fn plfunction_to_json(sk: &Skeleton, f: &PLFunction) -> Value {
    let edges: serde_json::Map<String, Value> =
        (0..sk.edges.len()).map(|i| (edge_key(sk, i), json!(f.edge_slopes[i]))).collect();
    let rays: serde_json::Map<String, Value> =
        sk.rays.iter().zip(&f.ray_slopes).map(|(r, s)| (r.puncture.clone(), json!(s))).collect();
    json!({
        "schema": PLFUNCTION,
        "edge_slopes": edges,
        "ray_slopes": rays,
        "base_value": f.base_value,
        "vertex_values": f.values,
    })
}

pub fn plfunction_from_json(sk: &Skeleton, v: &Value) -> Result<PLFunction> {
    check_schema(v, PLFUNCTION)?;
    let edges: BTreeMap<String, i64> = serde_json::from_value(v["edge_slopes"].clone())?;
    let rays: BTreeMap<String, i64> = serde_json::from_value(v["ray_slopes"].clone())?;
    let base_value: Rat = serde_json::from_value(v["base_value"].clone())?;
    let edge_slopes = (0..sk.edges.len())
        .map(|i| edges.get(&edge_key(sk, i)).copied().ok_or_else(|| Error::Parse(format!("missing slope for {}", edge_key(sk, i)))))
        .collect::<Result<Vec<_>>>()?;
    let ray_slopes = sk.rays.iter().map(|r| rays.get(&r.puncture).copied().unwrap_or(0)).collect();
    let mut f = PLFunction { edge_slopes, ray_slopes, base_value: base_value.clone(), values: vec![] };
    f.values = (0..sk.vertices.len()).map(|x| f.evaluate(sk, x)).collect();
    Ok(f)
}

#[derive(Serialize, Deserialize)]
struct ComplexRayDoc {
    base: usize,
    dir: Vec<i64>,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct SegmentDoc {
    u: usize,
    v: usize,
    mult: u64,
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    dim: usize,
    vertices: Vec<Vec<Rat>>,
    segments: Vec<SegmentDoc>,
    rays: Vec<ComplexRayDoc>,
}

pub fn complex_to_json(tc: &TropicalComplex) -> Value {
    let doc = ComplexDoc {
        dim: tc.dim,
        vertices: tc.vertices.clone(),
        segments: tc.segments.iter().map(|s| SegmentDoc { u: s.u, v: s.v, mult: s.mult }).collect(),
        rays: tc.rays.iter().map(|r| ComplexRayDoc { base: r.base, dir: r.dir.clone(), mult: r.mult }).collect(),
    };
    with_schema(TROPCOMPLEX, serde_json::to_value(doc).expect("serializable"))
}

/// Reads a complex; the result is re-normalized so overlapping input cells merge.
pub fn complex_from_json(v: &Value) -> Result<TropicalComplex> {
    check_schema(v, TROPCOMPLEX)?;
    let doc: ComplexDoc = serde_json::from_value(v.clone())?;
    let n = doc.vertices.len();
    if doc.vertices.iter().any(|p| p.len() != doc.dim) {
        return Err(Error::Parse("vertex coordinates do not match `dim`".into()));
    }
    for s in &doc.segments {
        if s.u >= n || s.v >= n || s.u == s.v {
            return Err(Error::Parse(format!("bad segment {}-{}", s.u, s.v)));
        }
    }
    for r in &doc.rays {
        if r.base >= n || r.dir.len() != doc.dim || r.dir.iter().all(|&x| x == 0) {
            return Err(Error::Parse(format!("bad ray at {}", r.base)));
        }
    }
    let raw = TropicalComplex {
        dim: doc.dim,
        vertices: doc.vertices,
        segments: doc.segments.into_iter().map(|s| Segment { u: s.u, v: s.v, mult: s.mult }).collect(),
        rays: doc.rays.into_iter().map(|r| ComplexRay { base: r.base, dir: r.dir, mult: r.mult }).collect(),
    };
    Ok(raw.normalized())
}

fn image_json(img: &CellImage) -> Value {
    match img {
        CellImage::Collapsed(p) => json!({"collapsed": p}),
        CellImage::Segment(a, b) => json!({"segment": [a, b]}),
        CellImage::Ray(a, d) => json!({"ray": {"base": a, "dir": d}}),
    }
}

fn expansion_json(e: &EdgeExpansion) -> Value {
    let cell = match &e.cell {
        SkeletonCell::Edge(i) => json!({"edge": i}),
        SkeletonCell::Ray(p) => json!({"ray": p}),
    };
    json!({"cell": cell, "slopes": e.slopes, "expansion": e.expansion, "image": image_json(&e.image)})
}

pub fn expansion_report_to_json(rep: &EdgeExpansionReport) -> Value {
    json!({
        "edges": rep.edges.iter().map(expansion_json).collect::<Vec<_>>(),
        "rays": rep.rays.iter().map(expansion_json).collect::<Vec<_>>(),
    })
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    exp: (i64, i64),
    val: Rat,
}

#[derive(Serialize, Deserialize)]
struct PolyDoc {
    terms: Vec<TermDoc>,
}

pub fn troppoly_to_json(tp: &TropicalPolynomial) -> Value {
    let doc = PolyDoc { terms: tp.terms().iter().map(|(u, v)| TermDoc { exp: *u, val: v.clone() }).collect() };
    with_schema(TROPPOLY, serde_json::to_value(doc).expect("serializable"))
}

pub fn troppoly_from_json(v: &Value) -> Result<TropicalPolynomial> {
    check_schema(v, TROPPOLY)?;
    let doc: PolyDoc = serde_json::from_value(v.clone())?;
    TropicalPolynomial::new(doc.terms.into_iter().map(|t| (t.exp, t.val)))
}

pub fn certificate_to_json(c: &Certificate) -> Value {
    with_schema(CERTIFICATE, serde_json::to_value(c).expect("serializable"))
}

pub fn polygon_to_json(p: &LatticePolygon) -> Value {
    json!({"schema": POLYGON, "vertices": p.vertices})
}

pub fn polygon_from_json(v: &Value) -> Result<LatticePolygon> {
    check_schema(v, POLYGON)?;
    let vertices: Vec<(i64, i64)> = serde_json::from_value(v["vertices"].clone())?;
    Ok(LatticePolygon::from_points(&vertices))
}

pub fn latticemap_to_json(m: &LatticeMap) -> Value {
    json!({"schema": LATTICEMAP, "matrix": m.matrix, "delta": m.delta})
}

pub fn latticemap_from_json(v: &Value) -> Result<LatticeMap> {
    check_schema(v, LATTICEMAP)?;
    let matrix: Vec<Vec<i64>> = serde_json::from_value(v["matrix"].clone())?;
    let delta = v.get("delta").map_or(Ok(1), |d| serde_json::from_value(d.clone()))?;
    LatticeMap::new(matrix, delta)
}
