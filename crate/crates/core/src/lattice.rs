//! Integer-vector helpers: contents, primitive directions, ranks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::Rat;

pub type Point = Vec<Rat>;
pub type IntVec = Vec<i64>;

/// gcd of the absolute values of the entries; 0 for the zero vector.
pub fn content(v: &[i64]) -> u64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)).unsigned_abs()
}

/// Splits a nonzero integer vector into `(primitive, content)`.
pub fn primitive_int(v: &[i64]) -> Option<(IntVec, u64)> {
    let g = content(v);
    if g == 0 {
        return None;
    }
    Some((v.iter().map(|&x| x / g as i64).collect(), g))
}

/// Writes a nonzero rational vector as `scale * primitive` with `scale > 0`.
///
/// `scale` is the lattice length of the vector.
pub fn primitive_rat(v: &[Rat]) -> Option<(IntVec, Rat)> {
    if v.iter().all(Rat::is_zero) {
        return None;
    }
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let prim = ints
        .iter()
        .map(|x| (x / &g).to_i64().expect("primitive direction entry exceeds i64"))
        .collect();
    Some((prim, Rat::from(num_rational::BigRational::new(g.abs(), lcm))))
}

pub fn sub_points(a: &[Rat], b: &[Rat]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_scaled(base: &[Rat], dir: &[i64], scale: &Rat) -> Point {
    base.iter().zip(dir).map(|(b, &d)| b + &(scale * Rat::from_int(d))).collect()
}

pub fn dot_int_rat(u: &[i64], w: &[Rat]) -> Rat {
    u.iter().zip(w).map(|(&a, x)| Rat::from_int(a) * x).sum()
}

pub fn neg_int(v: &[i64]) -> IntVec {
    v.iter().map(|x| -x).collect()
}

/// Lattice length of the segment `[a, b]`.
pub fn lattice_length(a: &[Rat], b: &[Rat]) -> Rat {
    primitive_rat(&sub_points(b, a)).map(|(_, s)| s).unwrap_or_else(Rat::zero)
}

/// If `p = a + lambda * (b - a)` returns `lambda`, otherwise `None`.
pub fn param_on_line(a: &[Rat], dir: &[Rat], p: &[Rat]) -> Option<Rat> {
    let k = dir.iter().position(|x| !x.is_zero())?;
    let lambda = (&p[k] - &a[k]) / &dir[k];
    let on_line = a.iter().zip(dir).zip(p).all(|((ai, di), pi)| &(ai + &(&lambda * di)) == pi);
    on_line.then_some(lambda)
}

/// Rank over `Q` of a family of integer vectors.
pub fn rank(vectors: &[IntVec]) -> usize {
    let mut rows: Vec<Vec<Rat>> =
        vectors.iter().map(|v| v.iter().map(|&x| Rat::from_int(x)).collect()).collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for k in c..cols {
                    let delta = &f * &rows[rank][k];
                    rows[r][k] -= &delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Orders nonzero plane vectors by angle in `[0, 2pi)`, exactly.
pub fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> std::cmp::Ordering {
    let half = |v: (i64, i64)| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_of_rational_vector() {
        let v = vec![Rat::new(1, 1), Rat::new(2, 3), Rat::zero()];
        let (p, s) = primitive_rat(&v).unwrap();
        assert_eq!(p, vec![3, 2, 0]);
        assert_eq!(s, Rat::new(1, 3));
        let (p, s) = primitive_rat(&[Rat::new(-4, 1), Rat::new(-2, 1)]).unwrap();
        assert_eq!((p, s), (vec![-2, -1], Rat::from_int(2)));
        assert!(primitive_rat(&[Rat::zero()]).is_none());
    }

    #[test]
    fn contents_and_ranks() {
        assert_eq!(content(&[-6, 4, 0]), 2);
        assert_eq!(primitive_int(&[0, -3]), Some((vec![0, -1], 3)));
        assert_eq!(rank(&[vec![1, 0], vec![0, 1], vec![-1, -1]]), 2);
        assert_eq!(rank(&[vec![1, 2], vec![-2, -4]]), 1);
    }

    #[test]
    fn angle_order() {
        let mut v = vec![(0, -1), (-1, 0), (1, 1), (1, 0), (-1, -1), (0, 1)];
        v.sort_by(|a, b| angle_cmp(*a, *b));
        assert_eq!(v, vec![(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]);
    }
}
