//! Plane tropical curves of implicit equations via Newton subdivisions.
//!
//! Conventions: `trop(f)(w) = min_u (val(a_u) + <u, w>)`. The subdivision is
//! the projection of the lower hull of the lifted points `(u, val(a_u))`.
//! The tropical vertex dual to a 2-cell is `w = -g` where `g` is the gradient
//! of the cell's supporting affine function; the ray dual to a boundary edge
//! with counter-clockwise edge vector `e` points along `rot_ccw(e)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::{Piece, TropicalComplex};
use crate::error::{Error, Result};
use crate::exactnum::{parse_series, Cursor, PuiseuxElement, Rat, Valuation};
use crate::lattice::{content, primitive_int, Point};
use crate::potential::solve_linear;

pub type Exp = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    terms: BTreeMap<Exp, Rat>,
}

impl TropicalPolynomial {
    pub fn new<I: IntoIterator<Item = (Exp, Rat)>>(terms: I) -> Result<TropicalPolynomial> {
        let mut map = BTreeMap::new();
        for (u, v) in terms {
            if map.insert(u, v).is_some() {
                return Err(Error::InvalidInput(format!("repeated exponent {u:?}")));
            }
        }
        if map.len() < 2 {
            return Err(Error::InvalidInput(format!("need at least two terms, got {}", map.len())));
        }
        Ok(TropicalPolynomial { terms: map })
    }

    pub fn terms(&self) -> &BTreeMap<Exp, Rat> {
        &self.terms
    }

    /// `val(a_u) + <u, w>` for one term.
    pub fn term_value(&self, u: Exp, w: &[Rat]) -> Rat {
        &self.terms[&u] + &(Rat::from_int(u.0) * &w[0]) + Rat::from_int(u.1) * &w[1]
    }

    pub fn evaluate(&self, w: &[Rat]) -> Rat {
        self.terms.keys().map(|&u| self.term_value(u, w)).min().expect("at least two terms")
    }

    /// Exponents attaining the minimum at `w`.
    pub fn argmin(&self, w: &[Rat]) -> Vec<Exp> {
        let m = self.evaluate(w);
        self.terms.keys().copied().filter(|&u| self.term_value(u, w) == m).collect()
    }
}

/// A polynomial in `x, y` (optionally `z`) with series coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub terms: BTreeMap<Exp, PuiseuxElement>,
}

impl Polynomial {
    /// Parses sums of terms such as `(2 - p)*y`, `-3*x^2*y`, `(1/t)*x*y`, `t^4*z^4`.
    ///
    /// With `dehomogenize`, `z` is set to 1; otherwise `z` is rejected.
    pub fn parse(src: &str, dehomogenize: bool) -> Result<Polynomial> {
        let mut cur = Cursor::new(src);
        let mut terms: BTreeMap<Exp, PuiseuxElement> = BTreeMap::new();
        let mut first = true;
        loop {
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            let negative = if cur.eat('-') {
                true
            } else if cur.eat('+') || first {
                false
            } else {
                return Err(cur.error("expected `+` or `-`"));
            };
            first = false;
            let (u, uses_z, c) = parse_term(&mut cur)?;
            if uses_z && !dehomogenize {
                return Err(Error::InvalidInput("polynomial uses `z`; dehomogenize it first".into()));
            }
            let c = if negative { c.neg() } else { c };
            let sum = match terms.remove(&u) {
                Some(prev) => prev.add(&c)?,
                None => c,
            };
            terms.insert(u, sum);
        }
        if first {
            return Err(cur.error("empty polynomial"));
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(Polynomial { terms })
    }

    pub fn tropicalize(&self) -> Result<TropicalPolynomial> {
        TropicalPolynomial::new(self.terms.iter().map(|(u, c)| match c.val() {
            Valuation::Finite(v) => (*u, v),
            Valuation::Infinite => unreachable!("zero coefficients are dropped"),
        }))
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<(Exp, bool, PuiseuxElement)> {
    let mut scalar = Rat::one();
    let mut texp = Rat::zero();
    let mut series: Option<PuiseuxElement> = None;
    let mut exps = [0i64; 3];
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some('(') => {
                cur.bump();
                let s = parse_series(cur)?;
                cur.expect(')')?;
                if series.replace(s).is_some() {
                    return Err(cur.error("at most one series factor per term"));
                }
            }
            Some(c) if c.is_ascii_digit() => {
                scalar = scalar * cur.unsigned_rational()?.expect("digit present");
            }
            c if Cursor::is_series_var(c) => texp += &cur.series_monomial()?,
            Some(c @ ('x' | 'y' | 'z')) => {
                cur.bump();
                let k = if cur.eat('^') {
                    let e = cur.exponent()?;
                    e.to_i64().filter(|k| e.is_integer() && *k >= 0).ok_or_else(|| cur.error("variable exponents must be nonnegative integers"))?
                } else {
                    1
                };
                exps[(c as u8 - b'x') as usize] += k;
            }
            _ => return Err(cur.error("expected a factor")),
        }
        cur.skip_ws();
        if cur.eat('*') {
            continue;
        }
        if cur.peek() == Some('/') {
            cur.bump();
            texp -= &cur.series_monomial()?;
            cur.skip_ws();
            if cur.eat('*') {
                continue;
            }
        }
        break;
    }
    let base = series.unwrap_or_else(|| PuiseuxElement::constant(Rat::one()));
    Ok(((exps[0], exps[1]), exps[2] != 0, base.mul_monomial(&scalar, &texp)))
}

/// One maximal cell of the subdivision together with its dual vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// All exponents on the supporting face, sorted.
    pub points: Vec<Exp>,
    /// Corners in counter-clockwise order.
    pub polygon: Vec<Exp>,
    pub vertex: Point,
}

/// When all exponents are collinear the subdivision is one-dimensional:
/// each lower edge `[p, q]` is dual to a whole line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineCell {
    pub p: Exp,
    pub q: Exp,
    /// The point of the dual line closest to the origin.
    pub anchor: Point,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualEdge {
    pub p: Exp,
    pub q: Exp,
    /// One or two cells containing the edge.
    pub cells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSubdivision {
    /// Corners of the Newton polygon, counter-clockwise.
    pub hull: Vec<Exp>,
    pub cells: Vec<Cell>,
    pub edges: Vec<DualEdge>,
    pub lines: Vec<LineCell>,
}

impl DualSubdivision {
    pub fn is_triangulation(&self) -> bool {
        self.cells.iter().all(|c| c.polygon.len() == 3)
    }

    /// Every cell is a lattice triangle of normalized area one.
    pub fn is_unimodular(&self) -> bool {
        self.cells.iter().all(|c| {
            c.polygon.len() == 3 && c.points.len() == 3 && cross(c.polygon[0], c.polygon[1], c.polygon[2]).abs() == 1
        })
    }
}

fn cross(o: Exp, a: Exp, b: Exp) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Strict convex hull corners, counter-clockwise from the lexicographic minimum.
pub fn convex_hull(points: &[Exp]) -> Vec<Exp> {
    let mut pts: Vec<Exp> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Exp> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Exp> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Regular subdivision induced by the coefficient valuations.
pub fn dual_subdivision(tp: &TropicalPolynomial) -> DualSubdivision {
    let pts: Vec<Exp> = tp.terms.keys().copied().collect();
    let hull = convex_hull(&pts);
    let n = pts.len();
    let lift = |u: Exp| tp.terms[&u].clone();

    let mut faces: BTreeMap<Vec<Exp>, Point> = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (a, b, c) = (pts[i], pts[j], pts[k]);
                if cross(a, b, c) == 0 {
                    continue;
                }
                let row = |u: Exp| vec![Rat::one(), Rat::from_int(u.0), Rat::from_int(u.1)];
                let sol = solve_linear(vec![row(a), row(b), row(c)], vec![lift(a), lift(b), lift(c)])
                    .expect("affinely independent");
                let h = |u: Exp| &sol[0] + &(Rat::from_int(u.0) * &sol[1]) + Rat::from_int(u.1) * &sol[2];
                if pts.iter().all(|&u| lift(u) >= h(u)) {
                    let on: Vec<Exp> = pts.iter().copied().filter(|&u| lift(u) == h(u)).collect();
                    faces.entry(on).or_insert_with(|| vec![-&sol[1], -&sol[2]]);
                }
            }
        }
    }

    let cells: Vec<Cell> = faces
        .into_iter()
        .map(|(points, vertex)| Cell { polygon: convex_hull(&points), points, vertex })
        .collect();
    let mut edge_map: BTreeMap<(Exp, Exp), (Exp, Exp, Vec<usize>)> = BTreeMap::new();
    for (ci, c) in cells.iter().enumerate() {
        let k = c.polygon.len();
        for i in 0..k {
            let (p, q) = (c.polygon[i], c.polygon[(i + 1) % k]);
            let key = if p < q { (p, q) } else { (q, p) };
            edge_map.entry(key).or_insert((p, q, vec![])).2.push(ci);
        }
    }
    let edges = edge_map.into_values().map(|(p, q, cells)| DualEdge { p, q, cells }).collect();

    let lines = if cells.is_empty() { line_cells(tp, &pts) } else { vec![] };
    DualSubdivision { hull, cells, edges, lines }
}

fn line_cells(tp: &TropicalPolynomial, pts: &[Exp]) -> Vec<LineCell> {
    // Points are sorted, hence ordered along the common line.
    let mut lower: Vec<Exp> = Vec::new();
    let d = (pts[pts.len() - 1].0 - pts[0].0, pts[pts.len() - 1].1 - pts[0].1);
    let s = |u: Exp| Rat::from_int((u.0 - pts[0].0) * d.0 + (u.1 - pts[0].1) * d.1);
    let turn = |a: Exp, b: Exp, c: Exp| {
        let (sa, sb, sc) = (s(a), s(b), s(c));
        let (va, vb, vc) = (tp.terms[&a].clone(), tp.terms[&b].clone(), tp.terms[&c].clone());
        (&sb - &sa) * (&vc - &va) - (&vb - &va) * (&sc - &sa)
    };
    for &p in pts {
        while lower.len() >= 2 && !turn(lower[lower.len() - 2], lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p);
    }
    lower
        .windows(2)
        .map(|w| {
            let (p, q) = (w[0], w[1]);
            let e = (q.0 - p.0, q.1 - p.1);
            let norm = Rat::from_int(e.0 * e.0 + e.1 * e.1);
            let k = (&tp.terms[&p] - &tp.terms[&q]) / norm;
            LineCell { p, q, anchor: vec![&k * Rat::from_int(e.0), &k * Rat::from_int(e.1)] }
        })
        .collect()
}

fn rot_ccw(e: Exp) -> Vec<i64> {
    vec![-e.1, e.0]
}

/// The tropical curve as the corner locus of `trop(f)`.
pub fn corner_locus(tp: &TropicalPolynomial) -> Result<TropicalComplex> {
    corner_locus_of(&dual_subdivision(tp))
}

pub fn corner_locus_of(sub: &DualSubdivision) -> Result<TropicalComplex> {
    let mut pieces = Vec::new();
    for e in &sub.edges {
        let m = content(&[e.q.0 - e.p.0, e.q.1 - e.p.1]);
        if m == 0 {
            return Err(Error::DegenerateCell(e.p, e.q));
        }
        match e.cells.as_slice() {
            [a, b] => {
                let (wa, wb) = (&sub.cells[*a].vertex, &sub.cells[*b].vertex);
                if wa == wb {
                    return Err(Error::DegenerateCell(e.p, e.q));
                }
                pieces.push(Piece::Segment(wa.clone(), wb.clone(), m));
            }
            [a] => {
                // Boundary edges are stored in the orientation of their cell.
                let dir = rot_ccw((e.q.0 - e.p.0, e.q.1 - e.p.1));
                pieces.push(Piece::Ray(sub.cells[*a].vertex.clone(), dir, m));
            }
            _ => return Err(Error::InvalidInput("edge shared by more than two cells".into())),
        }
    }
    for l in &sub.lines {
        let e = (l.q.0 - l.p.0, l.q.1 - l.p.1);
        let (dir, m) = primitive_int(&rot_ccw(e)).expect("distinct exponents");
        pieces.push(Piece::Ray(l.anchor.clone(), dir.clone(), m));
        pieces.push(Piece::Ray(l.anchor.clone(), dir.iter().map(|x| -x).collect(), m));
    }
    Ok(TropicalComplex::from_pieces(2, &pieces, &[]))
}

/// Result of the duality check: every cell's exponents attain the minimum at
/// its vertex and every other exponent is strictly larger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityCertificate {
    pub ok: bool,
    pub failures: Vec<String>,
}

pub fn duality_certificate(tp: &TropicalPolynomial, sub: &DualSubdivision) -> DualityCertificate {
    let mut failures = Vec::new();
    for (i, c) in sub.cells.iter().enumerate() {
        let attained: BTreeSet<Exp> = tp.argmin(&c.vertex).into_iter().collect();
        let expected: BTreeSet<Exp> = c.points.iter().copied().collect();
        if attained != expected {
            failures.push(format!("cell {i}: minimum attained at {attained:?}, expected {expected:?}"));
        }
    }
    for (i, l) in sub.lines.iter().enumerate() {
        let attained = tp.argmin(&l.anchor);
        if !attained.contains(&l.p) || !attained.contains(&l.q) {
            failures.push(format!("line {i}: minimum at {attained:?} misses {:?} or {:?}", l.p, l.q));
        }
    }
    DualityCertificate { ok: failures.is_empty(), failures }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheck {
    pub equal: bool,
    pub only_in_first: Vec<Piece>,
    pub only_in_second: Vec<Piece>,
}

/// Compares two complexes as weighted point sets.
pub fn crosscheck(a: &TropicalComplex, b: &TropicalComplex) -> CrossCheck {
    let pa: BTreeSet<Piece> = a.canonical().pieces().into_iter().collect();
    let pb: BTreeSet<Piece> = b.canonical().pieces().into_iter().collect();
    let only_in_first: Vec<Piece> = pa.difference(&pb).cloned().collect();
    let only_in_second: Vec<Piece> = pb.difference(&pa).cloned().collect();
    CrossCheck { equal: only_in_first.is_empty() && only_in_second.is_empty() && a.dim == b.dim, only_in_first, only_in_second }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ComplexRay;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    fn tp(src: &str) -> TropicalPolynomial {
        Polynomial::parse(src, true).unwrap().tropicalize().unwrap()
    }

    fn rays(tc: &TropicalComplex) -> Vec<(Point, Vec<i64>, u64)> {
        let mut v: Vec<_> = tc.rays.iter().map(|r| (tc.vertices[r.base].clone(), r.dir.clone(), r.mult)).collect();
        v.sort();
        v
    }

    #[test]
    fn parse_polynomials() {
        let p = Polynomial::parse("y^2 + (2-p)*y - x - (p-1)", false).unwrap();
        assert_eq!(p.terms.len(), 4);
        assert_eq!(p.terms[&(0, 0)].to_string(), "1 - t");
        let p = Polynomial::parse("x^2*y + x*y^2 + (1/t)*x*y + x + y", false).unwrap();
        assert_eq!(p.terms[&(1, 1)].val(), Valuation::Finite(r(-1, 1)));
        let p = Polynomial::parse("3*t^2*x - x/t + 2*x*y", false).unwrap();
        assert_eq!(p.terms[&(1, 0)].val(), Valuation::Finite(r(-1, 1)));
        assert_eq!(p.terms[&(1, 1)].to_string(), "2");
        assert!(Polynomial::parse("x*z + 1", false).is_err());
        assert_eq!(Polynomial::parse("x*z + y*z^2", true).unwrap().terms.len(), 2);
        assert!(Polynomial::parse("x + x - 2*x + 1", false).unwrap().tropicalize().is_err());
        assert!(Polynomial::parse("x ++ y", false).is_err());
    }

    #[test]
    fn tropical_line() {
        let tc = corner_locus(&tp("x + y + 1")).unwrap();
        assert_eq!(tc.vertices, vec![vec![r(0, 1), r(0, 1)]]);
        let dirs: Vec<_> = rays(&tc).into_iter().map(|(_, d, m)| (d, m)).collect();
        assert_eq!(dirs, vec![(vec![-1, -1], 1), (vec![0, 1], 1), (vec![1, 0], 1)]);
    }

    #[test]
    fn example_one_implicit() {
        let tc = corner_locus(&tp("y^2 + (2-p)*y - x - (p-1)")).unwrap();
        assert_eq!(tc.rays.len(), 3);
        assert!(tc.rays.contains(&ComplexRay { base: 0, dir: vec![1, 0], mult: 2 }));
    }

    #[test]
    fn square_example() {
        let t = tp("x^2*y + x*y^2 + (1/t)*x*y + x + y");
        let sub = dual_subdivision(&t);
        assert_eq!(sub.cells.len(), 4);
        assert!(sub.cells.iter().all(|c| c.points.contains(&(1, 1))));
        assert!(duality_certificate(&t, &sub).ok);
        let tc = corner_locus_of(&sub).unwrap();
        assert_eq!(tc.vertices.len(), 4);
        assert_eq!(tc.betti_one(), Ok(1));
        let total: Rat = (0..tc.segments.len()).map(|i| tc.segment_length(i)).sum();
        assert_eq!(total, r(8, 1));
        assert!(tc.check_balancing().passed());
    }

    #[test]
    fn triangle_example() {
        let t = tp("x^3*y - x^2*y^2 - 2*x*y^3 - 3*x^2*y + 2*x*y - p");
        let tc = corner_locus(&t).unwrap();
        let o = vec![r(0, 1), r(0, 1)];
        let a = vec![r(1, 1), r(0, 1)];
        let b = vec![r(0, 1), r(1, 1)];
        assert_eq!(tc.vertices, vec![o.clone(), b.clone(), a.clone()]);
        assert_eq!(rays(&tc), vec![(o, vec![-1, -1], 2), (b, vec![-1, 3], 1), (a, vec![3, -1], 1)]);
        let mut mults: Vec<u64> = tc.segments.iter().map(|s| s.mult).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2, 2]);
        assert!(tc.check_balancing().passed());
    }

    #[test]
    fn trivial_subdivision() {
        let t = tp("x^2 + x*y + y + 1");
        let sub = dual_subdivision(&t);
        assert_eq!(sub.cells.len(), 1);
        assert_eq!(sub.cells[0].polygon, sub.hull);
    }

    #[test]
    fn collinear_exponents() {
        let t = tp("x^2 + x + t");
        let sub = dual_subdivision(&t);
        assert!(sub.cells.is_empty());
        assert_eq!(sub.lines.len(), 2);
        assert!(duality_certificate(&t, &sub).ok);
        let tc = corner_locus_of(&sub).unwrap();
        assert_eq!(tc.vertices, vec![vec![r(0, 1), r(0, 1)], vec![r(1, 1), r(0, 1)]]);
        assert!(tc.check_balancing().passed());
        // Two parallel vertical lines, each of weight one.
        assert_eq!(tc.rays.len(), 4);
    }

    #[test]
    fn crosscheck_detects_perturbation() {
        let a = corner_locus(&tp("x^2*y + x*y^2 + (1/t)*x*y + x + y")).unwrap();
        assert!(crosscheck(&a, &a).equal);
        let b = corner_locus(&tp("x^2*y + x*y^2 + (1/t^2)*x*y + x + y")).unwrap();
        let diff = crosscheck(&a, &b);
        assert!(!diff.equal);
        assert!(!diff.only_in_first.is_empty() && !diff.only_in_second.is_empty());
    }

    #[test]
    fn hull_order() {
        assert_eq!(convex_hull(&[(0, 0), (2, 0), (1, 1), (0, 2), (1, 0)]), vec![(0, 0), (2, 0), (0, 2)]);
        assert_eq!(convex_hull(&[(0, 0), (3, 0), (1, 0)]), vec![(0, 0), (3, 0)]);
    }
}
