//! Images of tropical curves under integer linear maps, and Newton polygons
//! read off from plane tropical curves.

use crate::complex::{Piece, TropicalComplex};
use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::lattice::{angle_cmp, content, IntVec, Point};
use crate::newton::{convex_hull, Exp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    /// `m x n`, row-major.
    pub matrix: Vec<IntVec>,
    /// Degree of the map from the curve onto its image.
    pub delta: u64,
}

impl LatticeMap {
    pub fn new(matrix: Vec<IntVec>, delta: u64) -> Result<LatticeMap> {
        let n = matrix.first().map_or(0, Vec::len);
        if matrix.is_empty() || n == 0 || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix must be non-empty and rectangular".into()));
        }
        if delta == 0 {
            return Err(Error::InvalidInput("degree must be positive".into()));
        }
        Ok(LatticeMap { matrix, delta })
    }

    pub fn identity(n: usize) -> LatticeMap {
        let matrix = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        LatticeMap { matrix, delta: 1 }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn apply_int(&self, v: &[i64]) -> IntVec {
        self.matrix.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply(&self, p: &[Rat]) -> Point {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(p).map(|(&a, x)| Rat::from_int(a) * x).sum())
            .collect()
    }

    /// `self` after `first`, with degrees multiplied.
    pub fn compose(&self, first: &LatticeMap) -> LatticeMap {
        let matrix = self
            .matrix
            .iter()
            .map(|row| (0..first.cols()).map(|j| row.iter().zip(&first.matrix).map(|(a, r)| a * r[j]).sum()).collect())
            .collect();
        LatticeMap { matrix, delta: self.delta * first.delta }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PushforwardReport {
    pub collapsed_segments: Vec<usize>,
    pub collapsed_rays: Vec<usize>,
}

/// Image of a curve complex: the cell `A(sigma)` receives
/// `m(sigma) * [N' : A(N_sigma)]`, summed over preimages and divided by `delta`.
/// The lattice index of a one-dimensional cell is the content of `A v`.
pub fn pushforward(tc: &TropicalComplex, map: &LatticeMap) -> Result<(TropicalComplex, PushforwardReport)> {
    if map.cols() != tc.dim {
        return Err(Error::InvalidInput(format!("map has {} columns, complex has dimension {}", map.cols(), tc.dim)));
    }
    let images: Vec<Point> = tc.vertices.iter().map(|p| map.apply(p)).collect();
    let mut pieces = Vec::new();
    let mut report = PushforwardReport::default();
    for (i, s) in tc.segments.iter().enumerate() {
        let (dir, _) = tc.segment_direction(i);
        let index = content(&map.apply_int(&dir));
        if index == 0 {
            report.collapsed_segments.push(i);
        } else {
            pieces.push(Piece::Segment(images[s.u].clone(), images[s.v].clone(), s.mult * index));
        }
    }
    for (i, r) in tc.rays.iter().enumerate() {
        let image = map.apply_int(&r.dir);
        let index = content(&image);
        if index == 0 {
            report.collapsed_rays.push(i);
        } else {
            pieces.push(Piece::Ray(images[r.base].clone(), image, r.mult * index));
        }
    }
    let mut out = TropicalComplex::from_pieces(map.rows(), &pieces, &images);
    for m in out.segments.iter_mut().map(|s| &mut s.mult).chain(out.rays.iter_mut().map(|r| &mut r.mult)) {
        if *m % map.delta != 0 {
            return Err(Error::NonIntegralMultiplicity { sum: *m, degree: map.delta });
        }
        *m /= map.delta;
    }
    Ok((out, report))
}

/// A convex lattice polygon up to translation: corners counter-clockwise,
/// starting at the lexicographically smallest one, which sits at the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolygon {
    pub vertices: Vec<Exp>,
}

impl LatticePolygon {
    /// Convex hull of `points`, translated to the canonical position.
    pub fn from_points(points: &[Exp]) -> LatticePolygon {
        let hull = convex_hull(points);
        let o = hull.first().copied().unwrap_or((0, 0));
        LatticePolygon { vertices: hull.iter().map(|&(a, b)| (a - o.0, b - o.1)).collect() }
    }

    /// Twice the area.
    pub fn double_area(&self) -> i64 {
        let v = &self.vertices;
        (0..v.len()).map(|i| v[i].0 * v[(i + 1) % v.len()].1 - v[i].1 * v[(i + 1) % v.len()].0).sum()
    }
}

/// Chains the edge vectors `(m / delta) * rot_cw(v)` over all rays, in angular order.
pub fn newton_polygon_from_curve(tc: &TropicalComplex, delta: u64) -> Result<LatticePolygon> {
    if tc.dim != 2 {
        return Err(Error::UnsupportedDimension(tc.dim));
    }
    if tc.rays.is_empty() {
        return Err(Error::InvalidInput("complex has no rays".into()));
    }
    if delta == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let mut edges: Vec<(i64, i64)> = Vec::new();
    for r in &tc.rays {
        if r.mult % delta != 0 {
            return Err(Error::NonIntegralMultiplicity { sum: r.mult, degree: delta });
        }
        let m = (r.mult / delta) as i64;
        edges.push((m * r.dir[1], -m * r.dir[0]));
    }
    let (sx, sy) = edges.iter().fold((0, 0), |(x, y), e| (x + e.0, y + e.1));
    if (sx, sy) != (0, 0) {
        return Err(Error::NotClosed(sx, sy));
    }
    edges.sort_by(|a, b| angle_cmp(*a, *b));
    let mut pts = vec![(0i64, 0i64)];
    for e in &edges {
        let last = *pts.last().unwrap();
        pts.push((last.0 + e.0, last.1 + e.1));
    }
    Ok(LatticePolygon::from_points(&pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexRay;

    fn pt(xs: &[i64]) -> Point {
        xs.iter().map(|&x| Rat::from_int(x)).collect()
    }

    fn line() -> TropicalComplex {
        let o = pt(&[0, 0]);
        TropicalComplex::from_pieces(
            2,
            &[Piece::Ray(o.clone(), vec![1, 0], 1), Piece::Ray(o.clone(), vec![0, 1], 1), Piece::Ray(o, vec![-1, -1], 1)],
            &[],
        )
    }

    #[test]
    fn identity_is_trivial() {
        let (img, rep) = pushforward(&line(), &LatticeMap::identity(2)).unwrap();
        assert_eq!(img, line());
        assert_eq!(rep, PushforwardReport::default());
    }

    #[test]
    fn sum_map_on_line() {
        let (img, _) = pushforward(&line(), &LatticeMap::new(vec![vec![1, 1]], 1).unwrap()).unwrap();
        assert_eq!(
            img.rays,
            vec![ComplexRay { base: 0, dir: vec![-1], mult: 2 }, ComplexRay { base: 0, dir: vec![1], mult: 2 }]
        );
        assert!(img.check_balancing().passed());
        let err = pushforward(&line(), &LatticeMap::new(vec![vec![1, 1]], 4).unwrap()).unwrap_err();
        assert_eq!(err, Error::NonIntegralMultiplicity { sum: 2, degree: 4 });
    }

    #[test]
    fn collapse_is_reported() {
        let (img, rep) = pushforward(&line(), &LatticeMap::new(vec![vec![0, 1]], 1).unwrap()).unwrap();
        assert_eq!(rep.collapsed_rays.len(), 1);
        assert!(img.check_balancing().passed());
    }

    #[test]
    fn polygons() {
        assert_eq!(newton_polygon_from_curve(&line(), 1).unwrap().vertices, vec![(0, 0), (1, 0), (0, 1)]);
        let half = TropicalComplex::from_pieces(2, &[Piece::Ray(pt(&[0, 0]), vec![1, 0], 1)], &[]);
        assert_eq!(newton_polygon_from_curve(&half, 1), Err(Error::NotClosed(0, -1)));
        assert_eq!(LatticePolygon::from_points(&[(3, 3), (4, 3), (3, 5)]).vertices, vec![(0, 0), (1, 0), (0, 2)]);
        assert_eq!(LatticePolygon::from_points(&[(0, 0), (1, 0), (0, 2)]).double_area(), 2);
    }

    #[test]
    fn composition() {
        let a = LatticeMap::new(vec![vec![1, 2], vec![0, 1]], 1).unwrap();
        let b = LatticeMap::new(vec![vec![1, 1]], 1).unwrap();
        let (step, _) = pushforward(&line(), &a).unwrap();
        let (two, _) = pushforward(&step, &b).unwrap();
        let (one, _) = pushforward(&line(), &b.compose(&a)).unwrap();
        assert_eq!(two.canonical(), one.canonical());
    }
}
