//! Piecewise-linear potentials `F = -log|f| = val(f)` on skeleta.
//!
//! Unknowns are the values of `F` at vertices. Harmonicity at a vertex reads
//! `sum_e (F(other) - F(v)) / len(e) + sum_rays ord = 0`; the system is the
//! weighted graph Laplacian with the ray orders on the right-hand side, and
//! one row is replaced by `F(base) = 0`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactnum::{Rat, Valuation};
use crate::skeleton::{Skeleton, Tangent, INFINITY};

/// A degree-zero combination of punctures, stored without zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    orders: BTreeMap<String, i64>,
}

impl Divisor {
    pub fn new<I, S>(entries: I) -> Divisor
    where
        I: IntoIterator<Item = (S, i64)>,
        S: Into<String>,
    {
        let mut d = Divisor::default();
        for (p, n) in entries {
            *d.orders.entry(p.into()).or_insert(0) += n;
        }
        d.orders.retain(|_, n| *n != 0);
        d
    }

    pub fn order(&self, puncture: &str) -> i64 {
        self.orders.get(puncture).copied().unwrap_or(0)
    }

    pub fn orders(&self) -> &BTreeMap<String, i64> {
        &self.orders
    }

    pub fn degree(&self) -> i64 {
        self.orders.values().sum()
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor::new(self.orders.iter().chain(&other.orders).map(|(p, n)| (p.clone(), *n)))
    }

    pub fn scale(&self, k: i64) -> Divisor {
        Divisor::new(self.orders.iter().map(|(p, n)| (p.clone(), n * k)))
    }
}

/// `F` on a skeleton: integer slopes on edges (in the `u -> v` direction)
/// and rays (pointing away from the skeleton), plus vertex values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLFunction {
    pub edge_slopes: Vec<i64>,
    pub ray_slopes: Vec<i64>,
    pub base_value: Rat,
    pub values: Vec<Rat>,
}

impl PLFunction {
    /// The function with all slopes zero and constant value `c`.
    pub fn constant(sk: &Skeleton, c: Rat) -> PLFunction {
        PLFunction {
            edge_slopes: vec![0; sk.edges.len()],
            ray_slopes: vec![0; sk.rays.len()],
            values: vec![c.clone(); sk.vertices.len()],
            base_value: c,
        }
    }

    /// Adds a constant to `F`.
    pub fn shifted(&self, c: &Rat) -> PLFunction {
        PLFunction {
            edge_slopes: self.edge_slopes.clone(),
            ray_slopes: self.ray_slopes.clone(),
            base_value: &self.base_value + c,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Pointwise sum, i.e. the potential of a product of functions.
    pub fn add(&self, other: &PLFunction) -> PLFunction {
        PLFunction {
            edge_slopes: self.edge_slopes.iter().zip(&other.edge_slopes).map(|(a, b)| a + b).collect(),
            ray_slopes: self.ray_slopes.iter().zip(&other.ray_slopes).map(|(a, b)| a + b).collect(),
            base_value: &self.base_value + &other.base_value,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        }
    }

    /// Slope leaving `v` along the given tangent direction.
    pub fn outgoing_slope(&self, t: Tangent) -> i64 {
        match t {
            Tangent::Edge { edge, forward: true } => self.edge_slopes[edge],
            Tangent::Edge { edge, forward: false } => -self.edge_slopes[edge],
            Tangent::Ray(r) => self.ray_slopes[r],
        }
    }

    /// Value at `vertex`, integrating slopes along a spanning tree from the base.
    pub fn evaluate(&self, sk: &Skeleton, vertex: usize) -> Rat {
        let mut vals: Vec<Option<Rat>> = vec![None; sk.vertices.len()];
        for (v, via) in sk.bfs_tree() {
            let val = match via {
                None => self.base_value.clone(),
                Some((edge, parent)) => {
                    let e = &sk.edges[edge];
                    let s = if e.u == parent { self.edge_slopes[edge] } else { -self.edge_slopes[edge] };
                    vals[parent].clone().expect("parent visited first") + Rat::from_int(s) * &e.length
                }
            };
            if v == vertex {
                return val;
            }
            vals[v] = Some(val);
        }
        panic!("vertex {vertex} not reachable from the base vertex")
    }

    /// Outgoing slopes at `v`, one per tangent direction.
    pub fn slopes_at(&self, sk: &Skeleton, v: usize) -> Vec<(Tangent, i64)> {
        sk.tangents(v).into_iter().map(|t| (t, self.outgoing_slope(t))).collect()
    }

    /// Sum of outgoing slopes at `v`; zero wherever `F` is harmonic.
    pub fn change_of_slope(&self, sk: &Skeleton, v: usize) -> i64 {
        self.slopes_at(sk, v).iter().map(|(_, s)| s).sum()
    }
}

/// Solves `A x = b` exactly; `None` if `A` is singular.
pub fn solve_linear(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = &a[r][c] / &a[c][c];
                for k in c..n {
                    let delta = &f * &a[c][k];
                    a[r][k] -= &delta;
                }
                let delta = &f * &b[c];
                b[r] -= &delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Solves for `F` with `F(base) = 0`, the ray toward each puncture having
/// slope equal to its order in `divisor`.
pub fn solve_slope(sk: &Skeleton, divisor: &Divisor) -> Result<PLFunction> {
    for p in divisor.orders().keys() {
        if sk.ray_of(p).is_none() {
            return Err(Error::UnknownPuncture(p.clone()));
        }
    }
    let deg = divisor.degree();
    if deg != 0 {
        return Err(Error::DegreeNonZero(deg));
    }
    let n = sk.vertices.len();
    let mut a = vec![vec![Rat::zero(); n]; n];
    let mut b = vec![Rat::zero(); n];
    for e in &sk.edges {
        if e.u == e.v {
            continue;
        }
        let w = Rat::one() / &e.length;
        for (x, y) in [(e.u, e.v), (e.v, e.u)] {
            a[x][x] -= &w;
            a[x][y] += &w;
        }
    }
    let ray_slopes: Vec<i64> = sk.rays.iter().map(|r| divisor.order(&r.puncture)).collect();
    for (r, s) in sk.rays.iter().zip(&ray_slopes) {
        b[r.base] -= &Rat::from_int(*s);
    }
    let base = sk.base_vertex;
    a[base] = (0..n).map(|j| if j == base { Rat::one() } else { Rat::zero() }).collect();
    b[base] = Rat::zero();
    let values = solve_linear(a, b).ok_or_else(|| Error::InvalidInput("singular Laplacian".into()))?;

    let mut edge_slopes = Vec::with_capacity(sk.edges.len());
    for (i, e) in sk.edges.iter().enumerate() {
        let s = (&values[e.v] - &values[e.u]) / &e.length;
        match s.to_i64().filter(|_| s.is_integer()) {
            Some(k) => edge_slopes.push(k),
            None => return Err(Error::NonPrincipalOnTate { edge: i, slope: s.to_string() }),
        }
    }
    Ok(PLFunction { edge_slopes, ray_slopes, base_value: Rat::zero(), values })
}

/// `val(f)` at the base vertex of a tree skeleton for
/// `f = c * prod (x - a_i)^(n_i)` with `val(c) = scalar_val`.
///
/// On the ball `B(a, r)` the Gauss norm gives
/// `val(f) = val(c) + sum n_i min(r, val(a - a_i))`; the factor at `∞` is absent.
pub fn p1_base_value(sk: &Skeleton, divisor: &Divisor, scalar_val: &Rat) -> Result<Rat> {
    let ball = sk.vertices[sk.base_vertex]
        .ball
        .as_ref()
        .ok_or_else(|| Error::InvalidInput("base vertex carries no ball".into()))?;
    let mut total = scalar_val.clone();
    for (p, n) in divisor.orders() {
        if p == INFINITY {
            continue;
        }
        let a = sk.points.get(p).ok_or_else(|| Error::UnknownPuncture(p.clone()))?;
        let d = match ball.center.sub(a)?.val() {
            Valuation::Finite(v) => Rat::min_of(&v, &ball.depth).clone(),
            Valuation::Infinite => ball.depth.clone(),
        };
        total += &(Rat::from_int(*n) * d);
    }
    Ok(total)
}

/// The potential of `f` on a tree skeleton with its true additive constant.
pub fn solve_p1_function(sk: &Skeleton, divisor: &Divisor, scalar_val: &Rat) -> Result<PLFunction> {
    let f = solve_slope(sk, divisor)?;
    Ok(f.shifted(&p1_base_value(sk, divisor, scalar_val)?))
}
