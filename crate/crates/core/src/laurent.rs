//! Sparse Laurent polynomials with arbitrary-precision integer coefficients
//! in one variable (`t`) and two commuting variables (`t1`, `t2` or any
//! other chart the caller names).
//!
//! Terms live in a `BTreeMap`, so iteration order is the lexicographic
//! order of exponents and structural equality is polynomial equality.
//! No stored coefficient is ever zero.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A unit sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^e`.
    pub fn pow_neg_one(e: i64) -> Sign {
        if e.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_bigint(self) -> BigInt {
        BigInt::from(self.to_i64())
    }

    pub fn apply(self, c: BigInt) -> BigInt {
        match self {
            Sign::Plus => c,
            Sign::Minus => -c,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

pub(crate) fn accumulate<K: Ord>(terms: &mut BTreeMap<K, BigInt>, key: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, first: bool, c: &BigInt) -> fmt::Result {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if !mag.is_one() {
        write!(f, "{}", mag)?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// One variable
// ---------------------------------------------------------------------------

/// An element of `Z[t, t^-1]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly1 {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly1 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c.into());
        p
    }

    /// `t^e`.
    pub fn t(e: i64) -> Self {
        Self::monomial(e, 1)
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        accumulate(&mut self.terms, e, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// The involution `t^k -> t^-k`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiply by `t^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + s, c.clone())).collect(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// True when no stored coefficient is zero.
    pub fn is_well_formed(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero())
    }
}

impl fmt::Display for LaurentPoly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            write_coeff(f, i == 0, c)?;
            write!(f, "t^{}", e)?;
        }
        Ok(())
    }
}

impl AddAssign<&LaurentPoly1> for LaurentPoly1 {
    fn add_assign(&mut self, rhs: &LaurentPoly1) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly1> for LaurentPoly1 {
    fn sub_assign(&mut self, rhs: &LaurentPoly1) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &LaurentPoly1 {
    type Output = LaurentPoly1;
    fn add(self, rhs: &LaurentPoly1) -> LaurentPoly1 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn add(mut self, rhs: LaurentPoly1) -> LaurentPoly1 {
        self += &rhs;
        self
    }
}

impl Sub for &LaurentPoly1 {
    type Output = LaurentPoly1;
    fn sub(self, rhs: &LaurentPoly1) -> LaurentPoly1 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn sub(mut self, rhs: LaurentPoly1) -> LaurentPoly1 {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly1 {
    type Output = LaurentPoly1;
    fn neg(self) -> LaurentPoly1 {
        LaurentPoly1 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly1 {
    type Output = LaurentPoly1;
    fn neg(self) -> LaurentPoly1 {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Two variables
// ---------------------------------------------------------------------------

/// An element of `Z[x^±1, y^±1]`; which two variables are meant is up to
/// the caller (`(t1,t2)` for hexagon elements, `(t1,t3)` for brackets).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly2 {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl LaurentPoly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(a: i64, b: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term((a, b), c.into());
        p
    }

    pub fn from_terms<C: Into<BigInt>>(
        terms: impl IntoIterator<Item = ((i64, i64), C)>,
    ) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: (i64, i64), c: BigInt) {
        accumulate(&mut self.terms, e, c);
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: (i64, i64)) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiply by the monomial `x^a y^b`.
    pub fn shift(&self, a: i64, b: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|((x, y), c)| ((x + a, y + b), c.clone()))
                .collect(),
        }
    }

    /// Send every monomial `(a,b)` to `map(a,b)` and multiply coefficients
    /// by `sign`. Fails if `map` has no integer inverse.
    pub fn reindex(&self, map: &AffineMap2, sign: Sign) -> Result<Self> {
        map.check_invertible()?;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            out.add_term(map.apply(*e), sign.apply(c.clone()));
        }
        Ok(out)
    }

    pub fn is_well_formed(&self) -> bool {
        self.terms.values().all(|c| !c.is_zero())
    }

    /// Render with the given variable names.
    pub fn display_with<'a>(&'a self, x: &'a str, y: &'a str) -> impl fmt::Display + 'a {
        Display2 { p: self, x, y }
    }
}

struct Display2<'a> {
    p: &'a LaurentPoly2,
    x: &'a str,
    y: &'a str,
}

impl fmt::Display for Display2<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.p.terms.iter().enumerate() {
            write_coeff(f, i == 0, c)?;
            write!(f, "{}^{} {}^{}", self.x, a, self.y, b)?;
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with("t1", "t2"))
    }
}

impl AddAssign<&LaurentPoly2> for LaurentPoly2 {
    fn add_assign(&mut self, rhs: &LaurentPoly2) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly2> for LaurentPoly2 {
    fn sub_assign(&mut self, rhs: &LaurentPoly2) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Add for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn add(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        self += &rhs;
        self
    }
}

impl Sub for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(self, rhs: &LaurentPoly2) -> LaurentPoly2 {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn sub(mut self, rhs: LaurentPoly2) -> LaurentPoly2 {
        self -= &rhs;
        self
    }
}

impl Neg for &LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        LaurentPoly2 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly2 {
    type Output = LaurentPoly2;
    fn neg(self) -> LaurentPoly2 {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Affine reindexing
// ---------------------------------------------------------------------------

/// `(a,b) -> (m00*a + m01*b + c0, m10*a + m11*b + c1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap2 {
    pub linear: [[i64; 2]; 2],
    pub offset: [i64; 2],
}

impl AffineMap2 {
    pub const IDENTITY: AffineMap2 = AffineMap2::linear(1, 0, 0, 1);

    /// Order-6 rotation `(a,b) -> (a-b, a)`.
    pub const HEX_ROTATION: AffineMap2 = AffineMap2::linear(1, -1, 1, 0);

    /// Reflection `(a,b) -> (-b, -a)`.
    pub const HEX_REFLECTION: AffineMap2 = AffineMap2::linear(0, -1, -1, 0);

    pub const fn linear(m00: i64, m01: i64, m10: i64, m11: i64) -> Self {
        AffineMap2 {
            linear: [[m00, m01], [m10, m11]],
            offset: [0, 0],
        }
    }

    pub const fn with_offset(self, c0: i64, c1: i64) -> Self {
        AffineMap2 {
            linear: self.linear,
            offset: [c0, c1],
        }
    }

    pub fn apply(&self, (a, b): (i64, i64)) -> (i64, i64) {
        let m = &self.linear;
        (
            m[0][0] * a + m[0][1] * b + self.offset[0],
            m[1][0] * a + m[1][1] * b + self.offset[1],
        )
    }

    pub fn det(&self) -> i64 {
        let m = &self.linear;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    fn check_invertible(&self) -> Result<()> {
        match self.det() {
            1 | -1 => Ok(()),
            det => Err(Error::NonInvertibleMap { det }),
        }
    }

    pub fn inverse(&self) -> Result<AffineMap2> {
        self.check_invertible()?;
        let d = self.det();
        let m = &self.linear;
        // det = ±1 so the adjugate divided by det is integral
        let inv = [[m[1][1] * d, -m[0][1] * d], [-m[1][0] * d, m[0][0] * d]];
        let c = self.offset;
        let off = [
            -(inv[0][0] * c[0] + inv[0][1] * c[1]),
            -(inv[1][0] * c[0] + inv[1][1] * c[1]),
        ];
        Ok(AffineMap2 { linear: inv, offset: off })
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &AffineMap2) -> AffineMap2 {
        let a = &self.linear;
        let b = &other.linear;
        let mut m = [[0i64; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let (o0, o1) = self.apply((other.offset[0], other.offset[1]));
        AffineMap2 { linear: m, offset: [o0, o1] }
    }
}

// ---------------------------------------------------------------------------
// Arity-tagged polynomials
// ---------------------------------------------------------------------------

/// A Laurent polynomial whose arity is only known at runtime (e.g. parsed
/// from JSON).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LaurentPoly {
    One(LaurentPoly1),
    Two(LaurentPoly2),
}

impl LaurentPoly {
    pub fn arity(&self) -> usize {
        match self {
            LaurentPoly::One(_) => 1,
            LaurentPoly::Two(_) => 2,
        }
    }

    pub fn try_add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        match (self, other) {
            (LaurentPoly::One(p), LaurentPoly::One(q)) => Ok(LaurentPoly::One(p + q)),
            (LaurentPoly::Two(p), LaurentPoly::Two(q)) => Ok(LaurentPoly::Two(p + q)),
            _ => Err(Error::ArityMismatch {
                left: self.arity(),
                right: other.arity(),
            }),
        }
    }

    /// Parse either JSON form; the arity is read off the term keys.
    pub fn from_json(s: &str) -> Result<LaurentPoly> {
        let v: serde_json::Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let two = v
            .get("terms")
            .and_then(|t| t.as_array())
            .and_then(|a| a.first())
            .map(|t| t.get("e1").is_some())
            .unwrap_or(false);
        if two {
            serde_json::from_value(v)
                .map(LaurentPoly::Two)
                .map_err(|e| Error::Parse(e.to_string()))
        } else {
            serde_json::from_value(v)
                .map(LaurentPoly::One)
                .map_err(|e| Error::Parse(e.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// JSON: coefficients as decimal strings
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
pub(crate) enum CoeffRepr {
    Str(String),
    Int(i64),
}

impl CoeffRepr {
    pub(crate) fn into_bigint(self) -> std::result::Result<BigInt, String> {
        match self {
            CoeffRepr::Int(i) => Ok(BigInt::from(i)),
            CoeffRepr::Str(s) => s
                .trim()
                .parse::<BigInt>()
                .map_err(|_| format!("not a decimal integer: {:?}", s)),
        }
    }
}

#[derive(Serialize)]
struct Term1Out {
    e: i64,
    c: String,
}

#[derive(Deserialize)]
struct Term1In {
    e: i64,
    c: CoeffRepr,
}

#[derive(Serialize)]
struct Term2Out {
    e1: i64,
    e2: i64,
    c: String,
}

#[derive(Deserialize)]
struct Term2In {
    e1: i64,
    e2: i64,
    c: CoeffRepr,
}

#[derive(Serialize)]
struct TermsOut<T> {
    terms: Vec<T>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermsIn<T> {
    terms: Vec<T>,
}

impl Serialize for LaurentPoly1 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TermsOut {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| Term1Out { e: *e, c: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly1 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TermsIn::<Term1In>::deserialize(d)?;
        let mut p = LaurentPoly1::zero();
        for t in raw.terms {
            p.add_term(t.e, t.c.into_bigint().map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TermsOut {
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| Term2Out { e1: *a, e2: *b, c: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TermsIn::<Term2In>::deserialize(d)?;
        let mut p = LaurentPoly2::zero();
        for t in raw.terms {
            p.add_term((t.e1, t.e2), t.c.into_bigint().map_err(serde::de::Error::custom)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p1(terms: &[(i64, i64)]) -> LaurentPoly1 {
        LaurentPoly1::from_terms(terms.iter().copied())
    }

    #[test]
    fn additive_inverse_cancels() {
        assert!((&LaurentPoly1::t(2) + &p1(&[(2, -1)])).is_zero());
    }

    #[test]
    fn telescoping_sum() {
        let a = p1(&[(1, 1), (0, -1)]);
        let b = p1(&[(2, 1), (1, -1)]);
        assert_eq!(&a + &b, p1(&[(2, 1), (0, -1)]));
    }

    #[test]
    fn doubling_two_variables() {
        let m = LaurentPoly2::monomial(1, 0, 1);
        assert_eq!(&m + &m, LaurentPoly2::monomial(1, 0, 2));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly1::t(3).bar(), LaurentPoly1::t(-3));
        assert_eq!(LaurentPoly1::t(0).bar(), LaurentPoly1::t(0));
        assert_eq!(p1(&[(1, 2), (-2, -1)]).bar(), p1(&[(-1, 2), (2, -1)]));
    }

    #[test]
    fn reindex_examples() {
        let m = LaurentPoly2::monomial(1, 0, 1);
        let r = m.reindex(&AffineMap2::HEX_ROTATION, Sign::Plus).unwrap();
        assert_eq!(r, LaurentPoly2::monomial(1, 1, 1));
        let s = m.reindex(&AffineMap2::HEX_REFLECTION, Sign::Plus).unwrap();
        assert_eq!(s, LaurentPoly2::monomial(0, -1, 1));
    }

    #[test]
    fn rotation_has_order_six() {
        // compose the linear map with itself by hand, independent of reindex
        let mut m = [[1i64, 0], [0, 1]];
        let r = [[1i64, -1], [1, 0]];
        let mut orders = vec![];
        for k in 1..=6 {
            let mut n = [[0i64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    n[i][j] = r[i][0] * m[0][j] + r[i][1] * m[1][j];
                }
            }
            m = n;
            if m == [[1, 0], [0, 1]] {
                orders.push(k);
            }
        }
        assert_eq!(orders, vec![6]);

        let p = LaurentPoly2::from_terms([((3, -2), 5), ((0, 7), -1), ((1, 1), 2)]);
        let mut q = p.clone();
        for _ in 0..6 {
            q = q.reindex(&AffineMap2::HEX_ROTATION, Sign::Plus).unwrap();
        }
        assert_eq!(p, q);
    }

    #[test]
    fn singular_map_is_rejected() {
        let m = LaurentPoly2::monomial(1, 0, 1);
        let err = m.reindex(&AffineMap2::linear(2, 0, 0, 1), Sign::Plus).unwrap_err();
        assert_eq!(err, Error::NonInvertibleMap { det: 2 });
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let a = LaurentPoly::One(LaurentPoly1::t(1));
        let b = LaurentPoly::Two(LaurentPoly2::monomial(1, 0, 1));
        assert_eq!(a.try_add(&b), Err(Error::ArityMismatch { left: 1, right: 2 }));
    }

    #[test]
    fn json_uses_decimal_strings() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let p = LaurentPoly1::monomial(-4, big.clone());
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"terms":[{"e":-4,"c":"123456789012345678901234567890"}]}"#);
        let back: LaurentPoly1 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);

        let q = LaurentPoly2::monomial(2, -1, -3);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"terms":[{"e1":2,"e2":-1,"c":"-3"}]}"#);
        assert_eq!(LaurentPoly::from_json(&s).unwrap(), LaurentPoly::Two(q));
    }

    #[test]
    fn json_merges_duplicates_and_drops_zeros() {
        let p: LaurentPoly1 =
            serde_json::from_str(r#"{"terms":[{"e":1,"c":"2"},{"e":1,"c":-2},{"e":3,"c":0}]}"#)
                .unwrap();
        assert!(p.is_zero());
    }

    fn arb_poly2() -> impl Strategy<Value = LaurentPoly2> {
        prop::collection::vec(((-6i64..6, -6i64..6), -5i64..5), 0..12)
            .prop_map(LaurentPoly2::from_terms)
    }

    fn arb_poly1() -> impl Strategy<Value = LaurentPoly1> {
        prop::collection::vec((-10i64..10, -5i64..5), 0..12).prop_map(LaurentPoly1::from_terms)
    }

    fn arb_map() -> impl Strategy<Value = AffineMap2> {
        // products of a few generators of GL2(Z) plus a translation
        let gens = [
            AffineMap2::HEX_ROTATION,
            AffineMap2::HEX_REFLECTION,
            AffineMap2::linear(1, 1, 0, 1),
            AffineMap2::linear(0, 1, 1, 0),
        ];
        (prop::collection::vec(0usize..4, 0..5), -4i64..4, -4i64..4).prop_map(
            move |(word, c0, c1)| {
                word.iter()
                    .fold(AffineMap2::IDENTITY, |acc, &g| acc.compose(&gens[g]))
                    .with_offset(c0, c1)
            },
        )
    }

    proptest! {
        #[test]
        fn addition_is_associative_and_commutative(a in arb_poly2(), b in arb_poly2(), c in arb_poly2()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a + &b).is_well_formed());
        }

        #[test]
        fn bar_is_an_involution(p in arb_poly1()) {
            prop_assert_eq!(p.bar().bar(), p.clone());
            prop_assert!(p.bar().is_well_formed());
        }

        #[test]
        fn reindex_inverse_round_trips(p in arb_poly2(), m in arb_map(), minus in any::<bool>()) {
            let sign = if minus { Sign::Minus } else { Sign::Plus };
            let inv = m.inverse().unwrap();
            let there = p.reindex(&m, sign).unwrap();
            prop_assert!(there.is_well_formed());
            prop_assert_eq!(there.reindex(&inv, sign).unwrap(), p);
        }
    }
}
