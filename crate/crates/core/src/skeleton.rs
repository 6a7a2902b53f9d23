//! Skeleta of punctured curves as finite metric graphs with rays.
//!
//! Two constructions are provided: the ultrametric tree spanned by finitely
//! many punctures of the projective line, and the circle of a Tate curve
//! with rays attached at the retractions of the punctures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::exactnum::{pairwise_valuations, PuiseuxElement, Rat, Valuation};

/// Puncture id used for the point at infinity of the projective line.
pub const INFINITY: &str = "inf";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkeletonKind {
    /// Tree skeleton of the projective line minus finitely many points.
    P1,
    /// Circle skeleton of a Tate curve minus finitely many points.
    Tate,
    /// Any other metric graph, e.g. one read from JSON.
    Graph,
}

/// The closed ball `B(center, |t|^depth)`; locates a vertex of a tree skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: PuiseuxElement,
    pub depth: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub label: String,
    pub ball: Option<Ball>,
    /// Coordinate on the circle `R / loop_length Z` for Tate skeleta.
    pub position: Option<Rat>,
}

/// A bounded edge, oriented from `u` to `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub length: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub base: usize,
    pub puncture: String,
}

/// Where a puncture's ray leaves the skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturePlacement {
    pub puncture: String,
    pub retraction_vertex: usize,
}

/// One tangent direction at a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tangent {
    /// Along edge `edge`; `forward` when leaving through its `u` end.
    Edge { edge: usize, forward: bool },
    Ray(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub kind: SkeletonKind,
    pub loop_length: Option<Rat>,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub rays: Vec<Ray>,
    pub base_vertex: usize,
    pub loops_allowed: bool,
    /// Field points of the punctures, when known (tree skeleta only).
    pub points: BTreeMap<String, PuiseuxElement>,
}

impl Skeleton {
    /// Assembles and validates an arbitrary skeleton.
    pub fn from_parts(
        kind: SkeletonKind,
        vertices: Vec<Vertex>,
        edges: Vec<Edge>,
        rays: Vec<Ray>,
        base_vertex: usize,
    ) -> Result<Skeleton> {
        let mut sk = Skeleton {
            kind,
            loop_length: None,
            vertices,
            edges,
            rays,
            base_vertex,
            loops_allowed: false,
            points: BTreeMap::new(),
        };
        sk.loops_allowed = sk.betti_number() > 0;
        if kind == SkeletonKind::Tate {
            sk.loop_length = Some(sk.edges.iter().map(|e| e.length.clone()).sum());
        }
        sk.validate()?;
        Ok(sk)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        let bad = |m: String| Err(Error::InvalidInput(m));
        if n == 0 {
            return bad("skeleton has no vertices".into());
        }
        if self.base_vertex >= n {
            return bad(format!("base vertex {} out of range", self.base_vertex));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return bad(format!("edge {i} has an endpoint out of range"));
            }
            if !e.length.is_positive() {
                return bad(format!("edge {i} has non-positive length {}", e.length));
            }
        }
        let mut seen = BTreeSet::new();
        for r in &self.rays {
            if r.base >= n {
                return bad(format!("ray `{}` has base out of range", r.puncture));
            }
            if !seen.insert(r.puncture.as_str()) {
                return bad(format!("puncture `{}` labels more than one ray", r.puncture));
            }
        }
        if self.component_count() != 1 {
            return bad("skeleton is disconnected".into());
        }
        let b1 = self.betti_number();
        match self.kind {
            SkeletonKind::P1 if b1 != 0 => bad("tree skeleton has a cycle".into()),
            SkeletonKind::Tate if b1 != 1 => bad(format!("Tate skeleton has first Betti number {b1}")),
            _ => Ok(()),
        }
    }

    fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        (0..self.vertices.len()).filter(|&i| uf.find(i) == i).count()
    }

    /// First Betti number `E - V + C`.
    pub fn betti_number(&self) -> usize {
        self.edges.len() + self.component_count() - self.vertices.len()
    }

    pub fn ray_of(&self, puncture: &str) -> Option<usize> {
        self.rays.iter().position(|r| r.puncture == puncture)
    }

    pub fn placements(&self) -> Vec<PuncturePlacement> {
        self.rays
            .iter()
            .map(|r| PuncturePlacement { puncture: r.puncture.clone(), retraction_vertex: r.base })
            .collect()
    }

    /// All tangent directions at `v`; a self-loop contributes both of its ends.
    pub fn tangents(&self, v: usize) -> Vec<Tangent> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u == v {
                out.push(Tangent::Edge { edge: i, forward: true });
            }
            if e.v == v {
                out.push(Tangent::Edge { edge: i, forward: false });
            }
        }
        out.extend(self.rays.iter().enumerate().filter(|(_, r)| r.base == v).map(|(i, _)| Tangent::Ray(i)));
        out
    }

    /// Shortest-path distances from `from` along bounded edges.
    pub fn distances_from(&self, from: usize) -> Vec<Option<Rat>> {
        let n = self.vertices.len();
        let mut dist: Vec<Option<Rat>> = vec![None; n];
        dist[from] = Some(Rat::zero());
        // Bellman-Ford style relaxation; graphs here have at most a few dozen edges.
        for _ in 0..n {
            let mut changed = false;
            for e in &self.edges {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if let Some(da) = dist[a].clone() {
                        let cand = da + &e.length;
                        if dist[b].as_ref().is_none_or(|db| cand < *db) {
                            dist[b] = Some(cand);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist
    }

    /// A spanning tree rooted at the base vertex, as `(vertex, parent tangent)` in BFS order.
    pub(crate) fn bfs_tree(&self) -> Vec<(usize, Option<(usize, usize)>)> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([(self.base_vertex, None)]);
        seen[self.base_vertex] = true;
        while let Some((v, via)) = queue.pop_front() {
            order.push((v, via));
            for (i, e) in self.edges.iter().enumerate() {
                for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        queue.push_back((b, Some((i, a))));
                    }
                }
            }
        }
        order
    }

    /// Splits `edge` at distance `position` from its `u` end.
    ///
    /// The new vertex is appended; the old edge keeps its index and now ends
    /// at the new vertex, and the remainder is appended as a new edge.
    pub fn subdivide(&self, edge: usize, position: &Rat) -> Result<Skeleton> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::InvalidInput(format!("no edge {edge}")))?
            .clone();
        if !position.is_positive() || *position >= e.length {
            return Err(Error::PositionOutOfRange {
                position: position.to_string(),
                length: e.length.to_string(),
            });
        }
        let (a, b) = (&self.vertices[e.u], &self.vertices[e.v]);
        let ball = match (&a.ball, &b.ball) {
            (Some(ba), Some(bb)) if bb.depth > ba.depth => {
                Some(Ball { center: bb.center.clone(), depth: &ba.depth + position })
            }
            (Some(ba), Some(_)) => Some(Ball { center: ba.center.clone(), depth: &ba.depth - position }),
            _ => None,
        };
        let pos = match (&a.position, &self.loop_length) {
            (Some(p), Some(l)) => Some((p + position).rem_euclid(l)),
            _ => None,
        };
        let mut sk = self.clone();
        let id = sk.vertices.len();
        sk.vertices.push(Vertex { label: format!("s{id}"), ball, position: pos });
        sk.edges[edge] = Edge { u: e.u, v: id, length: position.clone() };
        sk.edges.push(Edge { u: id, v: e.v, length: &e.length - position });
        Ok(sk)
    }
}

/// A named puncture of the projective line at a finite point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Puncture {
    pub id: String,
    pub point: PuiseuxElement,
}

impl Puncture {
    pub fn new(id: impl Into<String>, point: PuiseuxElement) -> Self {
        Puncture { id: id.into(), point }
    }

    /// Uses the printed literal as the id.
    pub fn unnamed(point: PuiseuxElement) -> Self {
        Puncture { id: point.to_string(), point }
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// Builds the minimal skeleton of `P^1` minus the given finite punctures
/// (and `∞` when `include_infinity`).
///
/// Branch points are created bottom-up: distinct meet depths
/// `val(a_i - a_j)` are processed from deepest to shallowest and the
/// clusters joined at each depth receive a new vertex. The ray toward `∞`
/// hangs off the shallowest vertex. Vertex ids are ordered by depth, then by
/// the smallest puncture index they contain, so the root is vertex 0.
pub fn build_p1_skeleton(punctures: &[Puncture], include_infinity: bool) -> Result<Skeleton> {
    let n = punctures.len();
    let total = n + usize::from(include_infinity);
    if total < 2 {
        return Err(Error::TooFewPunctures(total));
    }
    let mut ids = BTreeSet::new();
    for p in punctures {
        if !ids.insert(p.id.as_str()) || (include_infinity && p.id == INFINITY) {
            return Err(Error::InvalidInput(format!("duplicate puncture id `{}`", p.id)));
        }
    }
    let points: Vec<PuiseuxElement> = punctures.iter().map(|p| p.point.clone()).collect();
    let matrix = pairwise_valuations(&points)?;

    // Temporary nodes: (depth, smallest member, child nodes, leaf rays).
    struct Node {
        depth: Rat,
        min_member: usize,
        children: Vec<usize>,
        leaves: Vec<usize>,
    }
    let mut nodes: Vec<Node> = Vec::new();

    if n == 1 {
        nodes.push(Node { depth: Rat::zero(), min_member: 0, children: vec![], leaves: vec![0] });
    } else {
        let mut depths: Vec<Rat> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if let Valuation::Finite(d) = &matrix[i][j] {
                    depths.push(d.clone());
                }
            }
        }
        depths.sort();
        depths.dedup();
        let mut uf = UnionFind::new(n);
        let mut cluster_node: Vec<Option<usize>> = vec![None; n];
        for d in depths.iter().rev() {
            let before: Vec<usize> = (0..n).map(|i| uf.find(i)).collect();
            for i in 0..n {
                for j in (i + 1)..n {
                    if matrix[i][j] == Valuation::Finite(d.clone()) {
                        uf.union(i, j);
                    }
                }
            }
            let mut groups: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
            for i in 0..n {
                groups.entry(uf.find(i)).or_default().insert(before[i]);
            }
            for (root, olds) in groups {
                if olds.len() < 2 {
                    continue;
                }
                let mut node = Node { depth: d.clone(), min_member: root, children: vec![], leaves: vec![] };
                for old in olds {
                    match cluster_node[old] {
                        Some(child) => node.children.push(child),
                        None => node.leaves.push(old),
                    }
                }
                nodes.push(node);
                cluster_node[root] = Some(nodes.len() - 1);
            }
        }
    }

    let root = nodes.len() - 1;
    let mut order: Vec<usize> = (0..nodes.len()).collect();
    order.sort_by(|&a, &b| {
        nodes[a].depth.cmp(&nodes[b].depth).then(nodes[a].min_member.cmp(&nodes[b].min_member))
    });
    let mut id_of = vec![0usize; nodes.len()];
    for (id, &k) in order.iter().enumerate() {
        id_of[k] = id;
    }

    let vertices: Vec<Vertex> = order
        .iter()
        .map(|&k| {
            let node = &nodes[k];
            let center = points[node.min_member].clone();
            Vertex {
                label: format!("zeta({center}; {})", node.depth),
                ball: Some(Ball { center, depth: node.depth.clone() }),
                position: None,
            }
        })
        .collect();

    let mut edges: Vec<Edge> = Vec::new();
    let mut rays: Vec<(usize, usize, String)> = Vec::new();
    for (k, node) in nodes.iter().enumerate() {
        for &c in &node.children {
            edges.push(Edge { u: id_of[k], v: id_of[c], length: &nodes[c].depth - &node.depth });
        }
        for &leaf in &node.leaves {
            rays.push((id_of[k], leaf, punctures[leaf].id.clone()));
        }
    }
    if include_infinity {
        rays.push((id_of[root], n, INFINITY.to_string()));
    }
    edges.sort_by_key(|a| (a.u, a.v));
    rays.sort_by_key(|a| (a.0, a.1));

    let sk = Skeleton {
        kind: SkeletonKind::P1,
        loop_length: None,
        vertices,
        edges,
        rays: rays.into_iter().map(|(base, _, puncture)| Ray { base, puncture }).collect(),
        base_vertex: id_of[root],
        loops_allowed: false,
        points: punctures.iter().map(|p| (p.id.clone(), p.point.clone())).collect(),
    };
    sk.validate()?;
    Ok(sk)
}

/// Builds the skeleton of a Tate curve with circle `R / loop_length Z`,
/// punctured at points retracting to the given positions.
///
/// The circle is cut at every distinct position (canonicalised into
/// `[0, loop_length)`); punctures sharing a position share a vertex. With no
/// punctures a single auxiliary vertex carries a loop.
pub fn build_tate_skeleton(loop_length: &Rat, punctures: &[(String, Rat)]) -> Result<Skeleton> {
    if !loop_length.is_positive() {
        return Err(Error::InvalidInput(format!("loop length {loop_length} must be positive")));
    }
    let mut ids = BTreeSet::new();
    for (id, _) in punctures {
        if !ids.insert(id.as_str()) {
            return Err(Error::InvalidInput(format!("duplicate puncture id `{id}`")));
        }
    }
    let canon: Vec<Rat> = punctures.iter().map(|(_, p)| p.rem_euclid(loop_length)).collect();
    let mut positions: Vec<Rat> = canon.clone();
    positions.sort();
    positions.dedup();
    if positions.is_empty() {
        positions.push(Rat::zero());
    }
    let k = positions.len();
    let vertices = positions
        .iter()
        .map(|p| Vertex { label: format!("@{p}"), ball: None, position: Some(p.clone()) })
        .collect();
    let edges = (0..k)
        .map(|i| {
            let j = (i + 1) % k;
            let length = if j == 0 { loop_length - &positions[i] + &positions[0] } else { &positions[j] - &positions[i] };
            Edge { u: i, v: j, length }
        })
        .collect();
    let mut rays: Vec<(usize, usize, String)> = punctures
        .iter()
        .zip(&canon)
        .enumerate()
        .map(|(idx, ((id, _), pos))| (positions.binary_search(pos).expect("position present"), idx, id.clone()))
        .collect();
    rays.sort_by_key(|a| (a.0, a.1));
    let sk = Skeleton {
        kind: SkeletonKind::Tate,
        loop_length: Some(loop_length.clone()),
        vertices,
        edges,
        rays: rays.into_iter().map(|(base, _, puncture)| Ray { base, puncture }).collect(),
        base_vertex: 0,
        loops_allowed: true,
        points: BTreeMap::new(),
    };
    sk.validate()?;
    Ok(sk)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn pts(lits: &[&str]) -> Vec<Puncture> {
        lits.iter().map(|s| Puncture::unnamed(s.parse().unwrap())).collect()
    }

    fn ray_base(sk: &Skeleton, p: &str) -> usize {
        sk.rays[sk.ray_of(p).unwrap()].base
    }

    #[test]
    fn example_one_tree() {
        let sk = build_p1_skeleton(&pts(&["0", "1", "p"]), true).unwrap();
        assert_eq!(sk.vertices.len(), 2);
        assert_eq!(sk.edges, vec![Edge { u: 0, v: 1, length: r(1, 1) }]);
        assert_eq!(sk.base_vertex, 0);
        assert_eq!(ray_base(&sk, "inf"), 0);
        assert_eq!(ray_base(&sk, "1"), 0);
        assert_eq!(ray_base(&sk, "0"), 1);
        assert_eq!(ray_base(&sk, "t"), 1);
        assert_eq!(sk.vertices[1].ball.as_ref().unwrap().depth, r(1, 1));
    }

    #[test]
    fn line_skeleton_of_gm() {
        let sk = build_p1_skeleton(&pts(&["0"]), true).unwrap();
        assert_eq!(sk.vertices.len(), 1);
        assert!(sk.edges.is_empty());
        assert_eq!(sk.rays.len(), 2);
    }

    #[test]
    fn nested_tree() {
        let sk = build_p1_skeleton(&pts(&["0", "1", "p", "p^2"]), true).unwrap();
        let depths: Vec<Rat> = sk.vertices.iter().map(|v| v.ball.as_ref().unwrap().depth.clone()).collect();
        assert_eq!(depths, vec![r(0, 1), r(1, 1), r(2, 1)]);
        assert_eq!(sk.edges.iter().map(|e| e.length.clone()).collect::<Vec<_>>(), vec![r(1, 1), r(1, 1)]);
        assert_eq!(ray_base(&sk, "t"), 1);
        assert_eq!(ray_base(&sk, "t^2"), 2);
        assert_eq!(ray_base(&sk, "0"), 2);
        assert_eq!(ray_base(&sk, "1"), 0);
    }

    #[test]
    fn too_few_and_duplicates() {
        assert!(matches!(build_p1_skeleton(&pts(&["0"]), false), Err(Error::TooFewPunctures(1))));
        assert!(matches!(build_p1_skeleton(&pts(&["t", "t"]), false), Err(Error::InvalidInput(_))));
        let p = vec![Puncture::new("a", "t".parse().unwrap()), Puncture::new("b", "t".parse().unwrap())];
        assert!(matches!(build_p1_skeleton(&p, false), Err(Error::DuplicatePoint(0, 1))));
    }

    #[test]
    fn finite_only_root_has_no_infinity_ray() {
        let sk = build_p1_skeleton(&pts(&["t", "t^2", "0"]), false).unwrap();
        assert_eq!(sk.vertices.len(), 2);
        assert!(sk.ray_of(INFINITY).is_none());
        assert_eq!(sk.tangents(0).len(), 2);
    }

    #[test]
    fn tate_three_points() {
        let l = r(7, 2);
        let p = vec![("0".to_string(), r(0, 1)), ("alpha".into(), &l / r(3, 1)), ("beta".into(), &l * r(2, 3))];
        let sk = build_tate_skeleton(&l, &p).unwrap();
        assert_eq!(sk.vertices.len(), 3);
        assert!(sk.edges.iter().all(|e| e.length == &l / r(3, 1)));
        assert_eq!(sk.betti_number(), 1);
        assert_eq!((ray_base(&sk, "0"), ray_base(&sk, "alpha"), ray_base(&sk, "beta")), (0, 1, 2));
    }

    #[test]
    fn tate_shared_positions() {
        let p: Vec<(String, Rat)> = [("inf", 0), ("P3", 0), ("Q1", 2), ("Q2", 2), ("P1", 2), ("P2", 6)]
            .iter()
            .map(|(s, x)| (s.to_string(), r(*x, 1)))
            .collect();
        let sk = build_tate_skeleton(&r(4, 1), &p).unwrap();
        assert_eq!(sk.vertices.len(), 2);
        assert_eq!(sk.edges.len(), 2);
        assert!(sk.edges.iter().all(|e| e.length == r(2, 1)));
        assert_eq!(sk.tangents(1).len(), 6);
        assert_eq!(ray_base(&sk, "P2"), 1);
    }

    #[test]
    fn bare_circle() {
        let sk = build_tate_skeleton(&r(1, 1), &[]).unwrap();
        assert_eq!(sk.vertices.len(), 1);
        assert_eq!(sk.edges, vec![Edge { u: 0, v: 0, length: r(1, 1) }]);
        assert_eq!(sk.betti_number(), 1);
        assert!(build_tate_skeleton(&r(0, 1), &[]).is_err());
    }

    #[test]
    fn subdivide_edges() {
        let sk = build_p1_skeleton(&pts(&["0", "1", "p"]), true).unwrap();
        let s = sk.subdivide(0, &r(1, 2)).unwrap();
        assert_eq!(s.edges[0].length, r(1, 2));
        assert_eq!(s.edges[1].length, r(1, 2));
        assert_eq!(s.vertices[2].ball.as_ref().unwrap().depth, r(1, 2));
        assert!(matches!(sk.subdivide(0, &r(1, 1)), Err(Error::PositionOutOfRange { .. })));
        assert!(matches!(sk.subdivide(0, &r(0, 1)), Err(Error::PositionOutOfRange { .. })));

        let p: Vec<(String, Rat)> = vec![("a".into(), r(0, 1)), ("b".into(), r(2, 1))];
        let tate = build_tate_skeleton(&r(4, 1), &p).unwrap();
        let s = tate.subdivide(1, &r(1, 1)).unwrap();
        assert_eq!(s.betti_number(), 1);
        assert_eq!(s.vertices[2].position, Some(r(3, 1)));
    }
}
