//! Weighted one-dimensional polyhedral complexes in `Q^n`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::{content, neg_int, param_on_line, primitive_int, primitive_rat, sub_points, IntVec, Point};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub u: usize,
    pub v: usize,
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComplexRay {
    pub base: usize,
    /// Primitive integer direction.
    pub dir: IntVec,
    pub mult: u64,
}

/// A weighted cell given by coordinates rather than vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    Segment(Point, Point, u64),
    /// `dir` need not be primitive; only its direction matters.
    Ray(Point, IntVec, u64),
}

/// A cell incident to a vertex, seen from that vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub cell: CellRef,
    pub dir: IntVec,
    pub mult: u64,
    /// The other endpoint, for segments.
    pub other: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CellRef {
    Segment(usize),
    Ray(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancingReport {
    pub residuals: Vec<IntVec>,
}

impl BalancingReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn unbalanced(&self) -> Vec<usize> {
        (0..self.residuals.len()).filter(|&i| self.residuals[i].iter().any(|&x| x != 0)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalComplex {
    pub dim: usize,
    pub vertices: Vec<Point>,
    pub segments: Vec<Segment>,
    pub rays: Vec<ComplexRay>,
}

fn on_piece_interior(piece: &Piece, p: &[Rat]) -> Option<Rat> {
    match piece {
        Piece::Segment(a, b, _) => {
            let lambda = param_on_line(a, &sub_points(b, a), p)?;
            (lambda.is_positive() && lambda < Rat::one()).then_some(lambda)
        }
        Piece::Ray(a, d, _) => {
            let d: Point = d.iter().map(|&x| Rat::from_int(x)).collect();
            let lambda = param_on_line(a, &d, p)?;
            lambda.is_positive().then_some(lambda)
        }
    }
}

impl TropicalComplex {
    pub fn empty(dim: usize) -> TropicalComplex {
        TropicalComplex { dim, vertices: vec![], segments: vec![], rays: vec![] }
    }

    /// Builds the refined complex carried by `pieces`.
    ///
    /// Every piece is cut at every endpoint of every piece and at every point
    /// of `cut_points` lying in its relative interior; coincident cells are
    /// merged with multiplicities summed. Transverse crossings are not cut.
    /// Degenerate pieces (zero length, zero direction, zero weight) are dropped.
    pub fn from_pieces(dim: usize, pieces: &[Piece], cut_points: &[Point]) -> TropicalComplex {
        let pieces: Vec<Piece> = pieces
            .iter()
            .filter(|p| match p {
                Piece::Segment(a, b, m) => *m > 0 && a != b,
                Piece::Ray(_, d, m) => *m > 0 && d.iter().any(|&x| x != 0),
            })
            .cloned()
            .collect();
        let mut cuts: BTreeSet<Point> = cut_points.iter().cloned().collect();
        for p in &pieces {
            match p {
                Piece::Segment(a, b, _) => {
                    cuts.insert(a.clone());
                    cuts.insert(b.clone());
                }
                Piece::Ray(a, _, _) => {
                    cuts.insert(a.clone());
                }
            }
        }

        let mut seg_mult: BTreeMap<(Point, Point), u64> = BTreeMap::new();
        let mut ray_mult: BTreeMap<(Point, IntVec), u64> = BTreeMap::new();
        for piece in &pieces {
            let mut inner: Vec<(Rat, &Point)> =
                cuts.iter().filter_map(|c| on_piece_interior(piece, c).map(|l| (l, c))).collect();
            inner.sort();
            match piece {
                Piece::Segment(a, b, m) => {
                    let mut chain: Vec<&Point> = vec![a];
                    chain.extend(inner.iter().map(|(_, c)| *c));
                    chain.push(b);
                    for w in chain.windows(2) {
                        let key = if w[0] < w[1] { (w[0].clone(), w[1].clone()) } else { (w[1].clone(), w[0].clone()) };
                        *seg_mult.entry(key).or_insert(0) += m;
                    }
                }
                Piece::Ray(a, d, m) => {
                    let (dir, _) = primitive_int(d).expect("nonzero ray direction");
                    let mut chain: Vec<&Point> = vec![a];
                    chain.extend(inner.iter().map(|(_, c)| *c));
                    for w in chain.windows(2) {
                        let key = if w[0] < w[1] { (w[0].clone(), w[1].clone()) } else { (w[1].clone(), w[0].clone()) };
                        *seg_mult.entry(key).or_insert(0) += m;
                    }
                    *ray_mult.entry((chain.last().copied().unwrap().clone(), dir)).or_insert(0) += m;
                }
            }
        }

        let mut pts: BTreeSet<Point> = BTreeSet::new();
        for (a, b) in seg_mult.keys() {
            pts.insert(a.clone());
            pts.insert(b.clone());
        }
        for (a, _) in ray_mult.keys() {
            pts.insert(a.clone());
        }
        let vertices: Vec<Point> = pts.into_iter().collect();
        let index: BTreeMap<&Point, usize> = vertices.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let segments = seg_mult
            .iter()
            .map(|((a, b), m)| Segment { u: index[a], v: index[b], mult: *m })
            .collect();
        let rays = ray_mult
            .iter()
            .map(|((a, d), m)| ComplexRay { base: index[a], dir: d.clone(), mult: *m })
            .collect();
        TropicalComplex { dim, vertices: vertices.clone(), segments, rays }
    }

    pub fn pieces(&self) -> Vec<Piece> {
        let mut out: Vec<Piece> = self
            .segments
            .iter()
            .map(|s| Piece::Segment(self.vertices[s.u].clone(), self.vertices[s.v].clone(), s.mult))
            .collect();
        out.extend(self.rays.iter().map(|r| Piece::Ray(self.vertices[r.base].clone(), r.dir.clone(), r.mult)));
        out
    }

    /// Re-normalizes (cuts overlaps, merges duplicates, sorts).
    pub fn normalized(&self) -> TropicalComplex {
        TropicalComplex::from_pieces(self.dim, &self.pieces(), &[])
    }

    pub fn vertex_index(&self, p: &[Rat]) -> Option<usize> {
        self.vertices.iter().position(|q| q.as_slice() == p)
    }

    /// Primitive direction from `u` to `v` and lattice length of segment `i`.
    pub fn segment_direction(&self, i: usize) -> (IntVec, Rat) {
        let s = &self.segments[i];
        primitive_rat(&sub_points(&self.vertices[s.v], &self.vertices[s.u])).expect("segment endpoints are distinct")
    }

    pub fn segment_length(&self, i: usize) -> Rat {
        self.segment_direction(i).1
    }

    pub fn incidences(&self, v: usize) -> Vec<Incidence> {
        let mut out = Vec::new();
        for (i, s) in self.segments.iter().enumerate() {
            if s.u == v || s.v == v {
                let (d, _) = self.segment_direction(i);
                let (dir, other) = if s.u == v { (d, s.v) } else { (neg_int(&d), s.u) };
                out.push(Incidence { cell: CellRef::Segment(i), dir, mult: s.mult, other: Some(other) });
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.base == v {
                out.push(Incidence { cell: CellRef::Ray(i), dir: r.dir.clone(), mult: r.mult, other: None });
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.incidences(v).len()
    }

    pub fn check_balancing(&self) -> BalancingReport {
        let residuals = (0..self.vertices.len())
            .map(|v| {
                let mut acc = vec![0i64; self.dim];
                for inc in self.incidences(v) {
                    for (a, d) in acc.iter_mut().zip(&inc.dir) {
                        *a += inc.mult as i64 * d;
                    }
                }
                acc
            })
            .collect();
        BalancingReport { residuals }
    }

    fn component_labels(&self, skip: Option<usize>) -> Vec<usize> {
        let n = self.vertices.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn find(l: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while l[r] != r {
                r = l[r];
            }
            l[x] = r;
            r
        }
        for (i, s) in self.segments.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let (a, b) = (find(&mut label, s.u), find(&mut label, s.v));
            if a != b {
                label[a.max(b)] = a.min(b);
            }
        }
        (0..n).map(|x| find(&mut label, x)).collect()
    }

    pub fn component_count(&self) -> usize {
        let labels = self.component_labels(None);
        labels.iter().enumerate().filter(|(i, l)| i == *l).count()
    }

    /// First Betti number of the bounded part.
    pub fn betti_one(&self) -> Result<usize> {
        let c = self.component_count();
        if c > 1 {
            return Err(Error::DisconnectedComplex(c));
        }
        Ok((self.segments.len() + c).saturating_sub(self.vertices.len()))
    }

    /// Segments whose removal disconnects their endpoints.
    pub fn bridges(&self) -> Vec<usize> {
        (0..self.segments.len())
            .filter(|&i| {
                let labels = self.component_labels(Some(i));
                let s = &self.segments[i];
                labels[s.u] != labels[s.v]
            })
            .collect()
    }

    /// Segments lying on some cycle: the bounded part with bridges removed.
    pub fn cycle_segments(&self) -> Vec<usize> {
        let bridges: BTreeSet<usize> = self.bridges().into_iter().collect();
        (0..self.segments.len()).filter(|i| !bridges.contains(i)).collect()
    }

    /// The subcomplex on the given segments (no rays), vertex ids renumbered.
    pub fn sub_complex(&self, segs: &[usize]) -> TropicalComplex {
        let pieces: Vec<Piece> = segs
            .iter()
            .map(|&i| {
                let s = &self.segments[i];
                Piece::Segment(self.vertices[s.u].clone(), self.vertices[s.v].clone(), s.mult)
            })
            .collect();
        TropicalComplex::from_pieces(self.dim, &pieces, &[])
    }

    /// Removes two-valent vertices whose two cells are opposite with equal
    /// multiplicity, fusing the cells.
    pub fn merge_collinear(&self) -> TropicalComplex {
        self.fuse_straight(false)
    }

    /// Minimal presentation; two complexes carry the same weighted point set
    /// exactly when their canonical forms are equal. Besides the collinear
    /// merges this dissolves vertices that only mark a crossing, where the
    /// cells pair up into opposite directions of equal multiplicity.
    pub fn canonical(&self) -> TropicalComplex {
        self.normalized().fuse_straight(true)
    }

    /// Pairs of opposite incidences at `v`, when every incidence has an
    /// opposite partner of the same multiplicity and at least one cell of
    /// each pair is bounded.
    fn straight_pairs(&self, v: usize) -> Option<Vec<(Incidence, Incidence)>> {
        let mut inc = self.incidences(v);
        if inc.is_empty() || inc.len() % 2 == 1 {
            return None;
        }
        let mut pairs = Vec::new();
        while let Some(a) = inc.pop() {
            let back = neg_int(&a.dir);
            let j = inc.iter().position(|b| b.dir == back && b.mult == a.mult)?;
            let b = inc.swap_remove(j);
            if a.other.is_none() && b.other.is_none() {
                return None;
            }
            pairs.push((a, b));
        }
        Some(pairs)
    }

    fn fuse_straight(&self, crossings: bool) -> TropicalComplex {
        let mut tc = TropicalComplex::from_pieces(self.dim, &self.pieces(), &[]);
        loop {
            let found = (0..tc.vertices.len())
                .filter(|&v| crossings || tc.valence(v) == 2)
                .find_map(|v| tc.straight_pairs(v));
            let Some(pairs) = found else { return tc };
            let cells: BTreeSet<CellRef> = pairs.iter().flat_map(|(a, b)| [a.cell, b.cell]).collect();
            let mut pieces: Vec<Piece> = tc
                .segments
                .iter()
                .enumerate()
                .filter(|(i, _)| !cells.contains(&CellRef::Segment(*i)))
                .map(|(_, s)| Piece::Segment(tc.vertices[s.u].clone(), tc.vertices[s.v].clone(), s.mult))
                .chain(
                    tc.rays
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| !cells.contains(&CellRef::Ray(*i)))
                        .map(|(_, r)| Piece::Ray(tc.vertices[r.base].clone(), r.dir.clone(), r.mult)),
                )
                .collect();
            for (a, b) in pairs {
                pieces.push(match (a.other, b.other) {
                    (Some(x), Some(y)) => Piece::Segment(tc.vertices[x].clone(), tc.vertices[y].clone(), a.mult),
                    (Some(x), None) => Piece::Ray(tc.vertices[x].clone(), b.dir, a.mult),
                    (None, Some(y)) => Piece::Ray(tc.vertices[y].clone(), a.dir, a.mult),
                    (None, None) => unreachable!("excluded by straight_pairs"),
                });
            }
            tc = TropicalComplex::from_pieces(self.dim, &pieces, &[]);
        }
    }

    /// Sum over rays of multiplicity times direction.
    pub fn ray_sum(&self) -> IntVec {
        let mut acc = vec![0i64; self.dim];
        for r in &self.rays {
            for (a, d) in acc.iter_mut().zip(&r.dir) {
                *a += r.mult as i64 * d;
            }
        }
        acc
    }

    /// gcd of the multiplicities at `v`.
    pub fn mult_gcd_at(&self, v: usize) -> u64 {
        content(&self.incidences(v).iter().map(|i| i.mult as i64).collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn example_one_pieces() -> Vec<Piece> {
        vec![
            Piece::Segment(pt(&[0, 0]), pt(&[2, 0]), 2),
            Piece::Ray(pt(&[2, 0]), vec![1, 0], 1),
            Piece::Ray(pt(&[2, 0]), vec![1, 0], 1),
            Piece::Ray(pt(&[0, 0]), vec![0, 1], 1),
            Piece::Ray(pt(&[0, 0]), vec![-2, -1], 1),
        ]
    }

    #[test]
    fn merge_duplicates_and_collinear() {
        let tc = TropicalComplex::from_pieces(2, &example_one_pieces(), &[]);
        assert_eq!(tc.vertices, vec![pt(&[0, 0]), pt(&[2, 0])]);
        assert_eq!(tc.segments, vec![Segment { u: 0, v: 1, mult: 2 }]);
        assert_eq!(tc.rays.len(), 3);
        assert!(tc.rays.contains(&ComplexRay { base: 1, dir: vec![1, 0], mult: 2 }));
        assert!(tc.check_balancing().passed());

        let m = tc.merge_collinear();
        assert_eq!(m.vertices, vec![pt(&[0, 0])]);
        assert!(m.segments.is_empty());
        assert!(m.rays.contains(&ComplexRay { base: 0, dir: vec![1, 0], mult: 2 }));
        assert!(m.check_balancing().passed());
        assert_eq!(m.betti_one(), Ok(0));
    }

    #[test]
    fn ray_cut_by_segment_endpoint() {
        // A ray passing through the endpoint of an overlapping segment.
        let pieces = vec![
            Piece::Ray(pt(&[0, 0]), vec![2, 1], 1),
            Piece::Segment(pt(&[0, 0]), pt(&[6, 3]), 1),
        ];
        let tc = TropicalComplex::from_pieces(2, &pieces, &[]);
        assert_eq!(tc.segments, vec![Segment { u: 0, v: 1, mult: 2 }]);
        assert_eq!(tc.rays, vec![ComplexRay { base: 1, dir: vec![2, 1], mult: 1 }]);
        assert_eq!(tc.segment_length(0), Rat::from_int(3));
    }

    #[test]
    fn crossings_are_not_vertices() {
        let pieces = vec![
            Piece::Segment(pt(&[-1, 0]), pt(&[1, 0]), 1),
            Piece::Segment(pt(&[0, -1]), pt(&[0, 1]), 1),
        ];
        let tc = TropicalComplex::from_pieces(2, &pieces, &[]);
        assert_eq!(tc.vertices.len(), 4);
        assert_eq!(tc.betti_one(), Err(Error::DisconnectedComplex(2)));
    }

    #[test]
    fn square_cycle_and_bridges() {
        let sq = [[0, 0], [2, 0], [2, 2], [0, 2]];
        let mut pieces: Vec<Piece> =
            (0..4).map(|i| Piece::Segment(pt(&sq[i]), pt(&sq[(i + 1) % 4]), 1)).collect();
        pieces.push(Piece::Segment(pt(&[0, 0]), pt(&[-1, -1]), 1));
        let tc = TropicalComplex::from_pieces(2, &pieces, &[]);
        assert_eq!(tc.betti_one(), Ok(1));
        assert_eq!(tc.bridges().len(), 1);
        assert_eq!(tc.cycle_segments().len(), 4);
    }

    #[test]
    fn canonical_forms_agree() {
        let a = TropicalComplex::from_pieces(2, &example_one_pieces(), &[]);
        let b = TropicalComplex::from_pieces(
            2,
            &[
                Piece::Ray(pt(&[0, 0]), vec![3, 0], 2),
                Piece::Ray(pt(&[0, 0]), vec![0, 1], 1),
                Piece::Ray(pt(&[0, 0]), vec![-2, -1], 1),
            ],
            &[],
        );
        assert_eq!(a.canonical(), b.canonical());
        assert_ne!(a, b);
    }

    #[test]
    fn crossing_vertices_are_not_canonical() {
        let plain = vec![
            Piece::Segment(pt(&[-1, 0]), pt(&[1, 0]), 1),
            Piece::Segment(pt(&[0, -1]), pt(&[0, 1]), 2),
            Piece::Ray(pt(&[1, 0]), vec![0, 1], 1),
        ];
        let a = TropicalComplex::from_pieces(2, &plain, &[]);
        let b = TropicalComplex::from_pieces(2, &plain, &[pt(&[0, 0])]);
        assert_eq!(b.valence(b.vertex_index(&pt(&[0, 0])).unwrap()), 4);
        assert_eq!(b.merge_collinear(), b);
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(a.canonical().vertices.len(), 4);
    }

    #[test]
    fn cut_points_refine() {
        let tc = TropicalComplex::from_pieces(2, &[Piece::Ray(pt(&[0, 0]), vec![1, 1], 1)], &[pt(&[3, 3]), pt(&[1, 0])]);
        assert_eq!(tc.vertices.len(), 2);
        assert_eq!(tc.segment_length(0), Rat::from_int(3));
    }
}
