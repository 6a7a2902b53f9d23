//! Exact rationals and truncated Puiseux series.
//!
//! Every length, valuation and coordinate in the crate is a [`Rat`]. Field
//! elements are modelled by [`PuiseuxElement`], a finite sum of rational
//! monomials `c*t^e` with an optional truncation order `O(t^k)`. Only
//! valuations of differences are ever consumed downstream, so the series
//! support addition, subtraction and scaling by monomials and nothing more.
//! The `p`-adic examples are run with `t` standing in for `p`; the parser
//! accepts either letter.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    /// Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// The value as an `i64`, if it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    /// Lossy conversion, used only for drawing.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Always `num/den`, including integers (`2/1`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Reduce into the half-open interval `[0, modulus)`.
    pub fn rem_euclid(&self, modulus: &Rat) -> Rat {
        assert!(modulus.is_positive());
        let q = (&self.0 / &modulus.0).floor();
        Rat(&self.0 - q * &modulus.0)
    }

    pub fn min_of<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::from_int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
    };
}

rat_binop!(Add, add);
rat_binop!(Sub, sub);
rat_binop!(Mul, mul);
rat_binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl std::iter::Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num.strip_prefix('+').unwrap_or(num).parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        struct RatVisitor;

        impl de::Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational as \"num/den\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_bigint(BigInt::from(v)))
            }
        }

        deserializer.deserialize_any(RatVisitor)
    }
}

/// `gcd` of the absolute values; `gcd(0, 0) = 0`.
pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// A value of `val: K -> Q ∪ {+∞}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(Rat),
    Infinite,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(r) => r.serialize(serializer),
            Valuation::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// A truncated generalized power series `sum c_i t^{e_i} + O(t^k)` over `Q`.
///
/// Terms are kept sorted by strictly increasing exponent with nonzero
/// coefficients, all below the truncation order. `truncation == None` means
/// the element is known exactly.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PuiseuxElement {
    terms: Vec<(Rat, Rat)>,
    truncation: Option<Rat>,
}

impl PuiseuxElement {
    pub fn zero() -> Self {
        PuiseuxElement { terms: Vec::new(), truncation: None }
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, Rat::zero())
    }

    pub fn monomial(coefficient: Rat, exponent: Rat) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        PuiseuxElement { terms: vec![(exponent, coefficient)], truncation: None }
    }

    /// Builds an element from `(exponent, coefficient)` pairs in any order.
    ///
    /// Equal exponents are combined, vanishing coefficients and terms at or
    /// beyond the truncation order are dropped. An element that is zero up to
    /// a finite truncation order has no determined valuation and is rejected.
    pub fn from_terms<I>(terms: I, truncation: Option<Rat>) -> Result<Self>
    where
        I: IntoIterator<Item = (Rat, Rat)>,
    {
        let mut collected: Vec<(Rat, Rat)> = terms.into_iter().collect();
        collected.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rat, Rat)> = Vec::with_capacity(collected.len());
        for (e, c) in collected {
            match merged.last_mut() {
                Some(last) if last.0 == e => last.1 += &c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(e, c)| !c.is_zero() && truncation.as_ref().is_none_or(|k| e < k));
        if merged.is_empty() {
            if let Some(k) = truncation {
                return Err(Error::PrecisionLoss { order: k.to_string() });
            }
        }
        Ok(PuiseuxElement { terms: merged, truncation })
    }

    pub fn terms(&self) -> &[(Rat, Rat)] {
        &self.terms
    }

    pub fn truncation(&self) -> Option<&Rat> {
        self.truncation.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The smallest exponent, or `+∞` for zero.
    pub fn val(&self) -> Valuation {
        match self.terms.first() {
            Some((e, _)) => Valuation::Finite(e.clone()),
            None => Valuation::Infinite,
        }
    }

    /// Coefficient of the leading term, zero for the zero element.
    pub fn leading_coefficient(&self) -> Rat {
        self.terms.first().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    fn combined_truncation(&self, other: &Self) -> Option<Rat> {
        match (&self.truncation, &other.truncation) {
            (Some(a), Some(b)) => Some(Rat::min_of(a, b).clone()),
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let terms = self.terms.iter().chain(other.terms.iter()).cloned();
        Self::from_terms(terms, self.combined_truncation(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .cloned()
            .chain(other.terms.iter().map(|(e, c)| (e.clone(), -c)));
        Self::from_terms(terms, self.combined_truncation(other))
    }

    pub fn neg(&self) -> Self {
        PuiseuxElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            truncation: self.truncation.clone(),
        }
    }

    /// Multiply by the monomial `c * t^e`.
    pub fn mul_monomial(&self, coefficient: &Rat, exponent: &Rat) -> Self {
        if coefficient.is_zero() {
            return Self::zero();
        }
        PuiseuxElement {
            terms: self.terms.iter().map(|(e, c)| (e + exponent, c * coefficient)).collect(),
            truncation: self.truncation.as_ref().map(|k| k + exponent),
        }
    }
}

impl fmt::Display for PuiseuxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() && self.truncation.is_none() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let (sign, mag) = if c.is_negative() { ("-", c.abs()) } else { ("+", c.clone()) };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            let mono = format_monomial(e);
            match (mag == Rat::one(), mono.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) => f.write_str(&mono)?,
                (false, false) => write!(f, "{mag}*{mono}")?,
            }
        }
        if let Some(k) = &self.truncation {
            let prefix = if self.terms.is_empty() { "" } else { " + " };
            let mono = format_monomial(k);
            let mono = if mono.is_empty() { "1".to_string() } else { mono };
            write!(f, "{prefix}O({mono})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PuiseuxElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxElement({self})")
    }
}

fn format_monomial(e: &Rat) -> String {
    if e.is_zero() {
        String::new()
    } else if *e == Rat::one() {
        "t".to_string()
    } else if e.is_integer() && e.is_positive() {
        format!("t^{e}")
    } else {
        format!("t^({e})")
    }
}

impl FromStr for PuiseuxElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cur = Cursor::new(s);
        let el = parse_series(&mut cur)?;
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.error("trailing input"));
        }
        Ok(el)
    }
}

impl Serialize for PuiseuxElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PuiseuxElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Byte cursor shared by the series and polynomial parsers.
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub(crate) fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    pub(crate) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    pub(crate) fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub(crate) fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in `{}`", self.pos, self.src))
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            None
        } else {
            self.src[start..self.pos].parse().ok()
        }
    }

    /// Unsigned `n` or `n/d`; the slash is consumed only when a digit follows.
    pub(crate) fn unsigned_rational(&mut self) -> Result<Option<Rat>> {
        self.skip_ws();
        let Some(num) = self.digits() else { return Ok(None) };
        let save = self.pos;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            if let Some(den) = self.digits() {
                if den.is_zero() {
                    return Err(self.error("zero denominator"));
                }
                return Ok(Some(Rat(BigRational::new(num, den))));
            }
        }
        self.pos = save;
        Ok(Some(Rat::from_bigint(num)))
    }

    /// `k`, `-k`, or a parenthesised signed rational `(a/b)`.
    pub(crate) fn exponent(&mut self) -> Result<Rat> {
        self.skip_ws();
        if self.eat('(') {
            let neg = self.eat('-');
            if !neg {
                self.eat('+');
            }
            let r = self.unsigned_rational()?.ok_or_else(|| self.error("expected exponent"))?;
            self.expect(')')?;
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat('-');
            self.skip_ws();
            let n = self.digits().ok_or_else(|| self.error("expected exponent"))?;
            let r = Rat::from_bigint(n);
            Ok(if neg { -r } else { r })
        }
    }

    pub(crate) fn is_series_var(c: Option<char>) -> bool {
        matches!(c, Some('t') | Some('p'))
    }

    /// `t`, `t^k`, `t^(a/b)`; returns the exponent.
    pub(crate) fn series_monomial(&mut self) -> Result<Rat> {
        self.skip_ws();
        if !Self::is_series_var(self.peek()) {
            return Err(self.error("expected `t`"));
        }
        self.bump();
        if self.eat('^') {
            self.exponent()
        } else {
            Ok(Rat::one())
        }
    }
}

/// Parses one signed term `c`, `c*t^e`, `c/t^e`, `t^e` (sign handled by caller).
fn parse_series_term(cur: &mut Cursor<'_>) -> Result<(Rat, Rat)> {
    cur.skip_ws();
    if let Some(c) = cur.unsigned_rational()? {
        cur.skip_ws();
        if cur.peek() == Some('*') && Cursor::is_series_var({
            let mut probe = Cursor { src: cur.src, pos: cur.pos + 1 };
            probe.skip_ws();
            probe.peek()
        }) {
            cur.bump();
            let e = cur.series_monomial()?;
            return Ok((e, c));
        }
        if cur.peek() == Some('/') {
            cur.bump();
            let e = cur.series_monomial()?;
            return Ok((-e, c));
        }
        return Ok((Rat::zero(), c));
    }
    let e = cur.series_monomial()?;
    Ok((e, Rat::one()))
}

pub(crate) fn parse_series(cur: &mut Cursor<'_>) -> Result<PuiseuxElement> {
    let mut terms = Vec::new();
    let mut truncation = None;
    let mut first = true;
    loop {
        cur.skip_ws();
        let negative = if first {
            if cur.eat('-') {
                true
            } else {
                cur.eat('+');
                false
            }
        } else if cur.eat('+') {
            false
        } else if cur.eat('-') {
            true
        } else {
            break;
        };
        cur.skip_ws();
        if cur.peek() == Some('O') {
            if negative {
                return Err(cur.error("truncation must be added, not subtracted"));
            }
            cur.bump();
            cur.expect('(')?;
            cur.skip_ws();
            let k = if Cursor::is_series_var(cur.peek()) {
                cur.series_monomial()?
            } else {
                let one = cur.unsigned_rational()?;
                if one != Some(Rat::one()) {
                    return Err(cur.error("expected `t^k` inside O(...)"));
                }
                Rat::zero()
            };
            cur.expect(')')?;
            truncation = Some(k);
            break;
        }
        let (e, c) = parse_series_term(cur)?;
        terms.push((e, if negative { -c } else { c }));
        first = false;
    }
    if terms.is_empty() && truncation.is_none() {
        return Err(cur.error("empty series literal"));
    }
    PuiseuxElement::from_terms(terms, truncation)
}

/// `v[i][j] = val(points[i] - points[j])`, with `+∞` on the diagonal.
///
/// Fails with [`Error::DuplicatePoint`] when two inputs are exactly equal and
/// with [`Error::PrecisionLoss`] when a difference is undetermined. The output
/// is checked against the ultrametric inequality before it is returned.
pub fn pairwise_valuations(points: &[PuiseuxElement]) -> Result<Vec<Vec<Valuation>>> {
    let n = points.len();
    let mut m = vec![vec![Valuation::Infinite; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let diff = points[i].sub(&points[j])?;
            if diff.is_zero() {
                return Err(Error::DuplicatePoint(i, j));
            }
            m[i][j] = diff.val();
            m[j][i] = m[i][j].clone();
        }
    }
    if !is_ultrametric(&m) {
        return Err(Error::InvalidInput("pairwise valuations violate the ultrametric inequality".into()));
    }
    Ok(m)
}

/// `v(i,j) >= min(v(i,k), v(k,j))` for all triples.
pub fn is_ultrametric(m: &[Vec<Valuation>]) -> bool {
    let n = m.len();
    (0..n).all(|i| {
        (0..n).all(|j| (0..n).all(|k| m[i][j] >= std::cmp::min(m[i][k].clone(), m[k][j].clone())))
    })
}
