//! Combinatorial certificates on tropical curves.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::complex::{CellRef, TropicalComplex};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::{dot_int_rat, rank, IntVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Certified,
    NotCertified,
    Refuted,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "CERTIFIED",
            Verdict::NotCertified => "NOT_CERTIFIED",
            Verdict::Refuted => "REFUTED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub rule: String,
    pub reason: String,
    pub witness: Value,
}

impl Certificate {
    fn new(verdict: Verdict, rule: &str, reason: impl Into<String>, witness: Value) -> Certificate {
        Certificate { verdict, rule: rule.to_string(), reason: reason.into(), witness }
    }
}

fn point_json(p: &[Rat]) -> Value {
    Value::Array(p.iter().map(|x| Value::String(x.to_fraction_string())).collect())
}

/// Checks that one of the cells at `vertex` has multiplicity one, i.e.
/// that the vertex has tropical multiplicity one.
///
/// Certified when the vertex is balanced and either it is trivalent with an
/// incident multiplicity 1, or its `r` directions span a space of dimension
/// `r - 1` and the incident multiplicities are coprime.
pub fn vertex_mult_one(tc: &TropicalComplex, vertex: usize) -> Certificate {
    const RULE: &str = "vertex-multiplicity-one";
    let inc = tc.incidences(vertex);
    let mults: Vec<u64> = inc.iter().map(|i| i.mult).collect();
    let dirs: Vec<IntVec> = inc.iter().map(|i| i.dir.clone()).collect();
    let residual = &tc.check_balancing().residuals[vertex];
    let r = inc.len();
    let span = rank(&dirs);
    let gcd = tc.mult_gcd_at(vertex);
    let witness = json!({
        "vertex": vertex,
        "point": point_json(&tc.vertices[vertex]),
        "valence": r,
        "multiplicities": mults,
        "directions": dirs,
        "span_dimension": span,
        "multiplicity_gcd": gcd,
        "balancing_residual": residual,
    });
    if residual.iter().any(|&x| x != 0) {
        return Certificate::new(Verdict::NotCertified, RULE, "vertex is not balanced", witness);
    }
    if r == 3 && mults.contains(&1) {
        return Certificate::new(Verdict::Certified, RULE, "trivalent with an incident edge of multiplicity 1", witness);
    }
    if r >= 2 && span == r - 1 && gcd == 1 {
        return Certificate::new(
            Verdict::Certified,
            RULE,
            "edge directions span a space of dimension r - 1 and multiplicities are coprime",
            witness,
        );
    }
    Certificate::new(Verdict::NotCertified, RULE, "neither criterion applies", witness)
}

fn first_bad_valence(tc: &TropicalComplex) -> Option<(usize, usize)> {
    (0..tc.vertices.len()).map(|v| (v, tc.valence(v))).find(|&(_, k)| k != 3)
}

fn first_heavy_cell(tc: &TropicalComplex) -> Option<(CellRef, u64)> {
    let segs = tc.segments.iter().enumerate().map(|(i, s)| (CellRef::Segment(i), s.mult));
    let rays = tc.rays.iter().enumerate().map(|(i, r)| (CellRef::Ray(i), r.mult));
    segs.chain(rays).find(|&(_, m)| m != 1)
}

fn cell_json(c: CellRef) -> Value {
    match c {
        CellRef::Segment(i) => json!({"segment": i}),
        CellRef::Ray(i) => json!({"ray": i}),
    }
}

/// Checks the hypotheses under which tropicalization restricted to the
/// minimal skeleton of a genus `curve_genus` curve is an isometry.
pub fn certify_faithful(tc: &TropicalComplex, curve_genus: usize) -> Certificate {
    const RULE: &str = "faithful-tropicalization";
    let betti = match tc.betti_one() {
        Ok(b) => b,
        Err(e) => return Certificate::new(Verdict::NotCertified, RULE, e.to_string(), Value::Null),
    };
    let core = tc.cycle_segments();
    let bad_valence = first_bad_valence(tc);
    let heavy = first_heavy_cell(tc);
    let witness = json!({
        "betti_number": betti,
        "genus": curve_genus,
        "core_segments": core,
        "core_vertices": core.iter().flat_map(|&i| [tc.segments[i].u, tc.segments[i].v]).collect::<BTreeSet<_>>(),
        "non_trivalent_vertex": bad_valence.map(|(v, k)| json!({"vertex": v, "valence": k})),
        "heavy_cell": heavy.map(|(c, m)| json!({"cell": cell_json(c), "mult": m})),
    });
    if betti != curve_genus {
        let reason = format!("bridgeless core has first Betti number {betti}, genus is {curve_genus}");
        return Certificate::new(Verdict::NotCertified, RULE, reason, witness);
    }
    if let Some((c, m)) = heavy {
        return Certificate::new(Verdict::NotCertified, RULE, format!("cell {c:?} has multiplicity {m}"), witness);
    }
    if let Some((v, k)) = bad_valence {
        return Certificate::new(Verdict::NotCertified, RULE, format!("vertex {v} has valence {k}"), witness);
    }
    Certificate::new(Verdict::Certified, RULE, "trivalent, multiplicity one, Betti number equals genus", witness)
}

/// The unique cycle: its segments and total lattice length.
fn unique_cycle(tc: &TropicalComplex) -> Result<(Vec<usize>, Rat)> {
    match tc.betti_one()? {
        0 => Err(Error::NoCycle),
        1 => {
            let cyc = tc.cycle_segments();
            let len = cyc.iter().map(|&i| tc.segment_length(i)).sum();
            Ok((cyc, len))
        }
        b => Err(Error::MultipleCycles(b)),
    }
}

/// Compares the lattice length of the cycle with `-val(j)`.
pub fn kmm_check(tc: &TropicalComplex, val_j: &Rat) -> Result<Certificate> {
    const RULE: &str = "cycle-length-equals-minus-val-j";
    let (cycle, length) = unique_cycle(tc)?;
    let expected = -val_j;
    let bad_valence = first_bad_valence(tc);
    let heavy = first_heavy_cell(tc);
    let witness = json!({
        "cycle_segments": cycle,
        "cycle_length": length.to_fraction_string(),
        "expected_length": expected.to_fraction_string(),
        "non_trivalent_vertex": bad_valence.map(|(v, k)| json!({"vertex": v, "valence": k})),
        "heavy_cell": heavy.map(|(c, m)| json!({"cell": cell_json(c), "mult": m})),
    });
    let mismatch = if length == expected { "" } else { " (cycle length differs from -val(j))" };
    if let Some((c, m)) = heavy {
        let reason = format!("cell {c:?} has multiplicity {m}{mismatch}");
        return Ok(Certificate::new(Verdict::NotCertified, RULE, reason, witness));
    }
    if let Some((v, k)) = bad_valence {
        let reason = format!("vertex {v} has valence {k}{mismatch}");
        return Ok(Certificate::new(Verdict::NotCertified, RULE, reason, witness));
    }
    if length == expected {
        Ok(Certificate::new(Verdict::Certified, RULE, format!("cycle length {length} equals -val(j)"), witness))
    } else {
        let reason = format!("hypotheses hold but cycle length {length} differs from {expected}");
        Ok(Certificate::new(Verdict::Refuted, RULE, reason, witness))
    }
}

/// Lattice-length distances along segments from a set of source vertices.
pub fn distances_from(tc: &TropicalComplex, sources: &BTreeSet<usize>) -> Vec<Option<Rat>> {
    let n = tc.vertices.len();
    let mut dist: Vec<Option<Rat>> = (0..n).map(|v| sources.contains(&v).then(Rat::zero)).collect();
    let mut done = vec![false; n];
    let lengths: Vec<Rat> = (0..tc.segments.len()).map(|i| tc.segment_length(i)).collect();
    loop {
        let next = (0..n).filter(|&v| !done[v] && dist[v].is_some()).min_by(|&a, &b| dist[a].cmp(&dist[b]));
        let Some(v) = next else { break };
        done[v] = true;
        let dv = dist[v].clone().unwrap();
        for (i, s) in tc.segments.iter().enumerate() {
            let other = if s.u == v { s.v } else if s.v == v { s.u } else { continue };
            let cand = &dv + &lengths[i];
            if dist[other].as_ref().is_none_or(|d| cand < *d) {
                dist[other] = Some(cand);
            }
        }
    }
    dist
}

/// Checks that the part of the curve leaving the hyperplane `<u, x> = c`
/// is not closest to the cycle at a single point.
pub fn well_spaced_check(tc: &TropicalComplex, normal: &[i64], level: &Rat) -> Result<Certificate> {
    const RULE: &str = "well-spacedness";
    if normal.len() != tc.dim {
        return Err(Error::InvalidInput(format!("normal has length {}, complex has dimension {}", normal.len(), tc.dim)));
    }
    let (cycle, _) = unique_cycle(tc)?;
    let in_h = |v: usize| dot_int_rat(normal, &tc.vertices[v]) == *level;
    let cycle_vertices: BTreeSet<usize> = cycle.iter().flat_map(|&i| [tc.segments[i].u, tc.segments[i].v]).collect();
    if let Some(&v) = cycle_vertices.iter().find(|&&v| !in_h(v)) {
        return Err(Error::CycleNotInHyperplane(v));
    }

    // Cells of the closure of the off-hyperplane part, and their vertices.
    let mut w_valence = vec![0usize; tc.vertices.len()];
    for s in &tc.segments {
        if !(in_h(s.u) && in_h(s.v)) {
            w_valence[s.u] += 1;
            w_valence[s.v] += 1;
        }
    }
    for r in &tc.rays {
        if !in_h(r.base) || normal.iter().zip(&r.dir).map(|(a, b)| a * b).sum::<i64>() != 0 {
            w_valence[r.base] += 1;
        }
    }
    let w_vertices: Vec<usize> = (0..tc.vertices.len()).filter(|&v| w_valence[v] > 0).collect();
    let dist = distances_from(tc, &cycle_vertices);
    let bad_valence = first_bad_valence(tc);
    let heavy = first_heavy_cell(tc);

    let attached: Vec<(usize, Rat)> =
        w_vertices.iter().filter_map(|&v| dist[v].clone().map(|d| (v, d))).collect();
    let min = attached.iter().map(|(_, d)| d.clone()).min();
    let closest: Vec<usize> =
        attached.iter().filter(|(_, d)| Some(d) == min.as_ref()).map(|(v, _)| *v).collect();
    let two_point = closest.len() >= 2;
    let valence_escape = closest.iter().any(|&v| w_valence[v] >= 3);
    let witness = json!({
        "cycle_segments": cycle,
        "departures": attached
            .iter()
            .map(|(v, d)| json!({
                "vertex": v,
                "point": point_json(&tc.vertices[*v]),
                "distance": d.to_fraction_string(),
                "valence_in_w": w_valence[*v],
            }))
            .collect::<Vec<_>>(),
        "minimum_distance": min.as_ref().map(Rat::to_fraction_string),
        "closest": closest,
        "attained_twice": two_point,
        "closest_has_valence_three": valence_escape,
        "non_trivalent_vertex": bad_valence.map(|(v, k)| json!({"vertex": v, "valence": k})),
        "heavy_cell": heavy.map(|(c, m)| json!({"cell": cell_json(c), "mult": m})),
    });
    if let Some((v, k)) = bad_valence {
        return Ok(Certificate::new(Verdict::NotCertified, RULE, format!("vertex {v} has valence {k}"), witness));
    }
    if let Some((c, m)) = heavy {
        return Ok(Certificate::new(Verdict::NotCertified, RULE, format!("cell {c:?} has multiplicity {m}"), witness));
    }
    if min.is_none() {
        return Ok(Certificate::new(Verdict::Certified, RULE, "nothing leaves the hyperplane", witness));
    }
    if two_point || valence_escape {
        let how = if two_point { "minimum distance attained at two points" } else { "closest point has valence at least 3" };
        Ok(Certificate::new(Verdict::Certified, RULE, how, witness))
    } else {
        Ok(Certificate::new(Verdict::Refuted, RULE, "a single point is closest to the cycle", witness))
    }
}
