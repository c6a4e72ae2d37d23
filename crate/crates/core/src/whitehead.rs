//! Rational homotopy of the three-point configuration space of `S^1 x B^n`.
//!
//! Degree-n generators are `t_i^e w_ij` (i < j). Degree-(2n-1) classes are
//! combinations of triple terms `t1^a t3^b [w12, w23]` and pair terms
//! `t_i^c [w_ij, t_i^l w_ij]`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{accumulate, LaurentPoly1, LaurentPoly2, Sign};

fn check_point(i: u8) -> Result<()> {
    if (1..=3).contains(&i) {
        Ok(())
    } else {
        Err(Error::PointIndexOutOfRange(i))
    }
}

fn check_same_n(a: i64, b: i64) -> Result<()> {
    if a != b {
        return Err(Error::ContextMismatch(format!("n = {} vs n = {}", a, b)));
    }
    Ok(())
}

/// Sign of `w_ji = sign * w_ij`.
fn swap_sign(n: i64) -> Sign {
    Sign::pow_neg_one(n + 1)
}

/// Canonical degree-n generator `t_i^e w_ij` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DegNGen {
    pub i: u8,
    pub j: u8,
    pub e: i64,
}

/// Integer combination of canonical degree-n generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegNElem {
    n: i64,
    terms: BTreeMap<DegNGen, BigInt>,
}

impl DegNElem {
    pub fn zero(n: i64) -> Self {
        DegNElem { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (DegNGen, &BigInt)> + '_ {
        self.terms.iter().map(|(g, c)| (*g, c))
    }

    pub fn coeff(&self, g: DegNGen) -> BigInt {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    /// `t_i^e w_ij` for `i < j`.
    pub fn generator(i: u8, j: u8, e: i64, n: i64) -> Result<Self> {
        let mut exps = [0; 3];
        check_point(i)?;
        exps[i as usize - 1] = e;
        deg_n_normalize(i, j, exps, n)
    }

    pub fn add_scaled(&mut self, other: &DegNElem, c: &BigInt) {
        assert_eq!(self.n, other.n, "adding elements for different n");
        for (g, v) in other.terms() {
            accumulate(&mut self.terms, g, v * c);
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut out = DegNElem::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    /// Action of the monomial `t1^m1 t2^m2 t3^m3`.
    pub fn act(&self, m: [i64; 3]) -> Self {
        let mut out = DegNElem::zero(self.n);
        for (g, c) in self.terms() {
            let e = g.e + m[g.i as usize - 1] - m[g.j as usize - 1];
            accumulate(&mut out.terms, DegNGen { e, ..g }, c.clone());
        }
        out
    }
}

impl std::ops::Add for &DegNElem {
    type Output = DegNElem;
    fn add(self, rhs: &DegNElem) -> DegNElem {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl fmt::Display for DegNElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (g, c)) in self.terms.iter().enumerate() {
            write_signed(f, k == 0, c)?;
            write!(f, "t{}^{} w{}{}", g.i, g.e, g.i, g.j)?;
        }
        Ok(())
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, first: bool, c: &BigInt) -> fmt::Result {
    let neg = c.sign() == num_bigint::Sign::Minus;
    let mag = if neg { -c } else { c.clone() };
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if !mag.is_one() {
        write!(f, "{}*", mag)?;
    }
    Ok(())
}

/// Normalize `t1^a1 t2^a2 t3^a3 . w_ij` to a canonical generator.
pub fn deg_n_normalize(i: u8, j: u8, exps: [i64; 3], n: i64) -> Result<DegNElem> {
    check_point(i)?;
    check_point(j)?;
    let mut out = DegNElem::zero(n);
    if i == j {
        return Ok(out);
    }
    let net = exps[i as usize - 1] - exps[j as usize - 1];
    let (g, s) = if i < j {
        (DegNGen { i, j, e: net }, Sign::Plus)
    } else {
        (DegNGen { i: j, j: i, e: -net }, swap_sign(n))
    };
    out.terms.insert(g, s.to_bigint());
    Ok(out)
}

// ---------------------------------------------------------------------------
// Brackets
// ---------------------------------------------------------------------------

/// Basis element in degree 2n-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BracketKey {
    /// `t1^a t3^b [w12, w23]`
    Triple { a: i64, b: i64 },
    /// `t_i^c [w_ij, t_i^l w_ij]`
    Pair { i: u8, j: u8, c: i64, l: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BracketElem {
    n: i64,
    terms: BTreeMap<BracketKey, BigInt>,
}

impl BracketElem {
    pub fn zero(n: i64) -> Self {
        BracketElem { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (BracketKey, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: BracketKey) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn from_triple(p: &LaurentPoly2, n: i64) -> Self {
        let mut out = BracketElem::zero(n);
        for ((a, b), c) in p.terms() {
            accumulate(&mut out.terms, BracketKey::Triple { a, b }, c.clone());
        }
        out
    }

    pub fn add_term(&mut self, k: BracketKey, c: BigInt) {
        accumulate(&mut self.terms, k, c);
    }

    pub fn add_scaled(&mut self, other: &BracketElem, c: &BigInt) {
        assert_eq!(self.n, other.n, "adding elements for different n");
        for (k, v) in other.terms() {
            accumulate(&mut self.terms, k, v * c);
        }
    }

    /// The `[w12, w23]` summand as a polynomial in the `(t1, t3)` chart.
    pub fn triple_part(&self) -> LaurentPoly2 {
        LaurentPoly2::from_terms(self.terms().filter_map(|(k, c)| match k {
            BracketKey::Triple { a, b } => Some(((a, b), c.clone())),
            BracketKey::Pair { .. } => None,
        }))
    }

    /// Pair terms on `[w_ij, t_i^l w_ij]` for the given point pair.
    pub fn pair_part(&self, i: u8, j: u8) -> BracketElem {
        let mut out = BracketElem::zero(self.n);
        for (k, c) in self.terms() {
            if matches!(k, BracketKey::Pair { i: pi, j: pj, .. } if pi == i && pj == j) {
                out.terms.insert(k, c.clone());
            }
        }
        out
    }

    /// Drop the pair terms of the listed point pairs.
    pub fn without_pairs(&self, pairs: &[(u8, u8)]) -> BracketElem {
        let mut out = self.clone();
        out.terms.retain(|k, _| match k {
            BracketKey::Pair { i, j, .. } => !pairs.contains(&(*i, *j)),
            BracketKey::Triple { .. } => true,
        });
        out
    }

    /// Action of the monomial `t1^m1 t2^m2 t3^m3`.
    pub fn act(&self, m: [i64; 3]) -> Self {
        let mut out = BracketElem::zero(self.n);
        for (k, c) in self.terms() {
            let k = match k {
                BracketKey::Triple { a, b } => BracketKey::Triple {
                    a: a + m[0] - m[1],
                    b: b + m[2] - m[1],
                },
                BracketKey::Pair { i, j, c, l } => BracketKey::Pair {
                    i,
                    j,
                    c: c + m[i as usize - 1] - m[j as usize - 1],
                    l,
                },
            };
            accumulate(&mut out.terms, k, c.clone());
        }
        out
    }
}

impl std::ops::Sub for &BracketElem {
    type Output = BracketElem;
    fn sub(self, rhs: &BracketElem) -> BracketElem {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::from(-1));
        out
    }
}

impl std::ops::Add for &BracketElem {
    type Output = BracketElem;
    fn add(self, rhs: &BracketElem) -> BracketElem {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl fmt::Display for BracketElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (key, c)) in self.terms.iter().enumerate() {
            write_signed(f, k == 0, c)?;
            match key {
                BracketKey::Triple { a, b } => write!(f, "t1^{} t3^{} [w12,w23]", a, b)?,
                BracketKey::Pair { i, j, c, l } => {
                    write!(f, "t{}^{} [w{}{}, t{}^{} w{}{}]", i, c, i, j, i, l, i, j)?
                }
            }
        }
        Ok(())
    }
}

impl Serialize for BracketElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "lowercase")]
        enum Term {
            Triple { a: i64, b: i64, c: String },
            Pair { i: u8, j: u8, shift: i64, l: i64, c: String },
        }
        #[derive(Serialize)]
        struct Out {
            n: i64,
            terms: Vec<Term>,
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| match *k {
                BracketKey::Triple { a, b } => Term::Triple { a, b, c: c.to_string() },
                BracketKey::Pair { i, j, c: shift, l } => Term::Pair { i, j, shift, l, c: c.to_string() },
            })
            .collect();
        Out { n: self.n, terms }.serialize(s)
    }
}

/// `[t_i^a w_ij, t_i^b w_ij]` in the pair basis.
fn same_pair_bracket(i: u8, j: u8, a: i64, b: i64, n: i64) -> Option<(BracketKey, Sign)> {
    let l = b - a;
    if l > 0 {
        Some((BracketKey::Pair { i, j, c: a, l }, Sign::Plus))
    } else if l < 0 {
        Some((BracketKey::Pair { i, j, c: b, l: -l }, Sign::pow_neg_one(n)))
    } else if n.is_even() {
        Some((BracketKey::Pair { i, j, c: a, l: 0 }, Sign::Plus))
    } else {
        // graded symmetry forces 2[x,x] = 0
        None
    }
}

/// `[g, h]` for canonical generators sharing exactly one point.
fn crossed_bracket(g: DegNGen, h: DegNGen, n: i64) -> (BracketKey, Sign) {
    let v = if g.i == h.i || g.i == h.j { g.i } else { g.j };
    // g = s1 t_u^a w_uv
    let (u, s1, a) = if g.j == v {
        (g.i, Sign::Plus, g.e)
    } else {
        (g.j, swap_sign(n), -g.e)
    };
    // h = s2 t_v^b w_vz
    let (z, s2, b) = if h.i == v {
        (h.j, Sign::Plus, h.e)
    } else {
        (h.i, swap_sign(n), -h.e)
    };
    let cyclic = matches!((u, v, z), (1, 2, 3) | (2, 3, 1) | (3, 1, 2));
    let orient = if cyclic { Sign::Plus } else { Sign::pow_neg_one(n) };
    let mut mono = [0i64; 3];
    mono[u as usize - 1] = a;
    mono[z as usize - 1] = -b;
    let key = BracketKey::Triple {
        a: mono[0] - mono[1],
        b: mono[2] - mono[1],
    };
    (key, s1 * s2 * orient)
}

fn gen_bracket(g: DegNGen, h: DegNGen, n: i64) -> Option<(BracketKey, Sign)> {
    if (g.i, g.j) == (h.i, h.j) {
        same_pair_bracket(g.i, g.j, g.e, h.e, n)
    } else {
        Some(crossed_bracket(g, h, n))
    }
}

/// Bilinear Whitehead bracket expanded in the canonical basis.
pub fn bracket(x: &DegNElem, y: &DegNElem) -> Result<BracketElem> {
    check_same_n(x.n, y.n)?;
    let mut out = BracketElem::zero(x.n);
    for (g, cg) in x.terms() {
        for (h, ch) in y.terms() {
            if let Some((k, s)) = gen_bracket(g, h, x.n) {
                accumulate(&mut out.terms, k, s.apply(cg * ch));
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Facet maps
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Facet {
    /// first point at the start of the interval
    T1Zero,
    /// first point doubled
    T1EqT2,
    /// second point doubled
    T2EqT3,
    /// third point at the end of the interval
    T3One,
}

impl Facet {
    pub const ALL: [Facet; 4] = [Facet::T1Zero, Facet::T1EqT2, Facet::T2EqT3, Facet::T3One];

    pub fn label(self) -> &'static str {
        match self {
            Facet::T1Zero => "t1=0",
            Facet::T1EqT2 => "t1=t2",
            Facet::T2EqT3 => "t2=t3",
            Facet::T3One => "t3=1",
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Facet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(' ', "").as_str() {
            "t1=0" | "1" => Ok(Facet::T1Zero),
            "t1=t2" | "2" => Ok(Facet::T1EqT2),
            "t2=t3" | "3" => Ok(Facet::T2EqT3),
            "t3=1" | "4" => Ok(Facet::T3One),
            _ => Err(Error::UnknownFacet(s.to_string())),
        }
    }
}

/// An element on two points: a combination of `t1^a w12`, or of brackets
/// `[t1^alpha w12, t1^beta w12]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwoPointElem {
    Gen(LaurentPoly1),
    Bracket(BTreeMap<(i64, i64), BigInt>),
}

impl TwoPointElem {
    /// `t1^a t2^b w12`, which equals `t1^(a-b) w12`.
    pub fn generator(a: i64, b: i64) -> Self {
        TwoPointElem::Gen(LaurentPoly1::t(a - b))
    }

    pub fn bracket(alpha: i64, beta: i64) -> Self {
        TwoPointElem::Bracket(BTreeMap::from([((alpha, beta), BigInt::one())]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThreePointElem {
    Gen(DegNElem),
    Bracket(BracketElem),
}

/// Image of `t1^e w12` under the facet inclusion; `vel` is the degree of
/// the velocity vector map on doubling facets.
pub fn facet_generator(f: Facet, e: i64, vel: i64, n: i64) -> DegNElem {
    let raw = |i: u8, j: u8, exps: [i64; 3]| {
        deg_n_normalize(i, j, exps, n).expect("indices are in range")
    };
    let mut out = DegNElem::zero(n);
    let one = BigInt::one();
    let v = BigInt::from(vel);
    match f {
        Facet::T1Zero => out.add_scaled(&raw(2, 3, [0, e, 0]), &one),
        Facet::T1EqT2 => {
            let m = [e, e, 0];
            out.add_scaled(&raw(1, 3, m), &one);
            out.add_scaled(&raw(2, 3, m), &one);
            out.add_scaled(&raw(2, 1, m), &v);
        }
        Facet::T2EqT3 => {
            let m = [e, 0, 0];
            out.add_scaled(&raw(1, 2, m), &one);
            out.add_scaled(&raw(1, 3, m), &one);
            out.add_scaled(&raw(2, 3, m), &v);
        }
        Facet::T3One => out.add_scaled(&raw(1, 2, [e, 0, 0]), &one),
    }
    out
}

pub fn facet_map(f: Facet, x: &TwoPointElem, vel: i64, n: i64) -> ThreePointElem {
    match x {
        TwoPointElem::Gen(p) => {
            let mut out = DegNElem::zero(n);
            for (e, c) in p.terms() {
                out.add_scaled(&facet_generator(f, e, vel, n), c);
            }
            ThreePointElem::Gen(out)
        }
        TwoPointElem::Bracket(terms) => {
            let mut out = BracketElem::zero(n);
            for (&(alpha, beta), c) in terms {
                let b = bracket(
                    &facet_generator(f, alpha, vel, n),
                    &facet_generator(f, beta, vel, n),
                )
                .expect("same n");
                out.add_scaled(&b, c);
            }
            ThreePointElem::Bracket(out)
        }
    }
}

/// Facet image of `[t1^alpha w12, t1^beta w12]`.
pub fn facet_bracket(f: Facet, alpha: i64, beta: i64, vel: i64, n: i64) -> BracketElem {
    match facet_map(f, &TwoPointElem::bracket(alpha, beta), vel, n) {
        ThreePointElem::Bracket(b) => b,
        ThreePointElem::Gen(_) => unreachable!("brackets map to brackets"),
    }
}

/// The relator on `[w12, w23]` obtained by comparing the two doubling
/// facets at `(alpha, beta)`, after discarding the pair summands killed
/// by the end facets. Returned in the `(t1, t3)` chart.
pub fn derive_relator(alpha: i64, beta: i64, n: i64) -> Result<LaurentPoly2> {
    let d3 = facet_bracket(Facet::T2EqT3, alpha, beta, 0, n);
    let d2 = facet_bracket(Facet::T1EqT2, alpha, beta, 0, n);
    let diff = (&d3 - &d2).without_pairs(&[(1, 2), (2, 3)]);
    if !diff.pair_part(1, 3).is_zero() {
        return Err(Error::Unnormalizable(format!(
            "w13 brackets survive at (alpha, beta) = ({}, {}): {}",
            alpha,
            beta,
            diff.pair_part(1, 3)
        )));
    }
    Ok(diff.triple_part())
}

/// Derived relators for every `(alpha, beta)` in `[lo, hi]^2`, in row-major
/// order; zero relators are kept so that indices stay aligned.
pub fn derive_r_relators(n: i64, lo: i64, hi: i64) -> Result<Vec<((i64, i64), LaurentPoly2)>> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    (lo..=hi)
        .into_par_iter()
        .flat_map_iter(|alpha| (lo..=hi).map(move |beta| (alpha, beta)))
        .map(|(alpha, beta)| derive_relator(alpha, beta, n).map(|r| ((alpha, beta), r)))
        .collect()
}

/// The four-monomial relator as printed, in the `(t1, t3)` chart.
pub fn printed_relator(alpha: i64, beta: i64, n: i64) -> LaurentPoly2 {
    let s = Sign::pow_neg_one(n - 1).to_i64();
    LaurentPoly2::from_terms([
        ((alpha - beta, -beta), 1),
        ((alpha, alpha - beta), -1),
        ((beta, beta - alpha), s),
        ((beta - alpha, -alpha), -s),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gen(i: u8, j: u8, e: i64, n: i64) -> DegNElem {
        DegNElem::generator(i, j, e, n).unwrap()
    }

    fn raw(i: u8, j: u8, exps: [i64; 3], n: i64) -> DegNElem {
        deg_n_normalize(i, j, exps, n).unwrap()
    }

    fn triple(terms: &[((i64, i64), i64)], n: i64) -> BracketElem {
        BracketElem::from_triple(&LaurentPoly2::from_terms(terms.iter().copied()), n)
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(raw(1, 2, [2, 3, 5], 3), gen(1, 2, -1, 3));
        assert_eq!(raw(2, 1, [0, 0, 0], 3), gen(1, 2, 0, 3));
        assert_eq!(raw(2, 1, [0, 0, 0], 4), gen(1, 2, 0, 4).scale(&BigInt::from(-1)));
        assert!(raw(1, 1, [4, 0, 0], 3).is_zero());
        assert_eq!(deg_n_normalize(0, 2, [0; 3], 3), Err(Error::PointIndexOutOfRange(0)));
        assert_eq!(deg_n_normalize(1, 4, [0; 3], 3), Err(Error::PointIndexOutOfRange(4)));
    }

    #[test]
    fn t_action_moves_between_points() {
        // t_i . w_ij = t_j^-1 . w_ij
        for n in [3, 4] {
            assert_eq!(raw(1, 3, [1, 0, 0], n), raw(1, 3, [0, 0, -1], n));
        }
    }

    #[test]
    fn same_pair_brackets() {
        for n in [3, 4] {
            let b = bracket(&gen(1, 2, 0, n), &gen(1, 2, 2, n)).unwrap();
            assert_eq!(b.coeff(BracketKey::Pair { i: 1, j: 2, c: 0, l: 2 }), BigInt::one());
            let rev = bracket(&gen(1, 2, 2, n), &gen(1, 2, 0, n)).unwrap();
            assert_eq!(
                rev.coeff(BracketKey::Pair { i: 1, j: 2, c: 0, l: 2 }),
                Sign::pow_neg_one(n).to_bigint()
            );
        }
        assert!(bracket(&gen(1, 3, 5, 3), &gen(1, 3, 5, 3)).unwrap().is_zero());
        assert!(!bracket(&gen(1, 3, 5, 4), &gen(1, 3, 5, 4)).unwrap().is_zero());
    }

    #[test]
    fn cyclic_identity() {
        for n in 3..=6 {
            let b123 = bracket(&raw(1, 2, [0; 3], n), &raw(2, 3, [0; 3], n)).unwrap();
            let b231 = bracket(&raw(2, 3, [0; 3], n), &raw(3, 1, [0; 3], n)).unwrap();
            let b312 = bracket(&raw(3, 1, [0; 3], n), &raw(1, 2, [0; 3], n)).unwrap();
            assert_eq!(b123, triple(&[((0, 0), 1)], n));
            assert_eq!(b123, b231);
            assert_eq!(b123, b312);
        }
    }

    #[test]
    fn graded_symmetry_on_triples() {
        for n in 3..=6 {
            let x = raw(1, 2, [2, 0, 1], n);
            let y = raw(2, 3, [0, -1, 3], n);
            let xy = bracket(&x, &y).unwrap();
            let yx = bracket(&y, &x).unwrap();
            assert_eq!(yx, BracketElem::zero(n).add_scaled_ret(&xy, Sign::pow_neg_one(n)));
        }
    }

    impl BracketElem {
        fn add_scaled_ret(mut self, other: &BracketElem, s: Sign) -> BracketElem {
            self.add_scaled(other, &s.to_bigint());
            self
        }
    }

    #[test]
    fn bracket_rejects_mixed_n() {
        assert!(matches!(
            bracket(&gen(1, 2, 0, 3), &gen(1, 3, 0, 4)),
            Err(Error::ContextMismatch(_))
        ));
    }

    #[test]
    fn facet_end_maps() {
        for n in [3, 4] {
            for (a, b) in [(0, 1), (2, -1), (3, 3)] {
                let f1 = facet_bracket(Facet::T1Zero, a, b, 0, n);
                assert_eq!(f1, bracket(&gen(2, 3, a, n), &gen(2, 3, b, n)).unwrap());
                let f4 = facet_bracket(Facet::T3One, a, b, 0, n);
                assert_eq!(f4, bracket(&gen(1, 2, a, n), &gen(1, 2, b, n)).unwrap());
            }
        }
    }

    #[test]
    fn facet_doubling_first_point_matches_display() {
        for n in 3..=6 {
            let s = Sign::pow_neg_one(n - 1).to_i64();
            for (a, b) in [(1, 0), (2, 5), (-3, 1)] {
                let mut want = triple(&[((a - b, -b), -1), ((b - a, -a), s)], n);
                want = &want + &bracket(&gen(1, 3, a, n), &gen(1, 3, b, n)).unwrap();
                want = &want + &bracket(&gen(2, 3, a, n), &gen(2, 3, b, n)).unwrap();
                assert_eq!(facet_bracket(Facet::T1EqT2, a, b, 0, n), want, "n={} ({},{})", n, a, b);
            }
        }
    }

    #[test]
    fn facet_doubling_second_point_matches_display() {
        for n in 3..=6 {
            let s = Sign::pow_neg_one(n + 1).to_i64();
            for (a, b) in [(1, 0), (2, 5), (-3, 1)] {
                let mut want = triple(&[((a, a - b), -1), ((b, b - a), s)], n);
                want = &want + &bracket(&gen(1, 3, a, n), &gen(1, 3, b, n)).unwrap();
                want = &want + &bracket(&gen(1, 2, a, n), &gen(1, 2, b, n)).unwrap();
                assert_eq!(facet_bracket(Facet::T2EqT3, a, b, 0, n), want, "n={} ({},{})", n, a, b);
            }
        }
    }

    #[test]
    fn velocity_degree_drops_out() {
        for n in 3..=6 {
            for vel in -3..=3 {
                for (a, b) in [(1, 0), (2, -2), (0, 3)] {
                    for (f, pair) in [(Facet::T1EqT2, (1, 2)), (Facet::T2EqT3, (2, 3))] {
                        let base = facet_bracket(f, a, b, 0, n);
                        let moved = facet_bracket(f, a, b, vel, n);
                        if n % 2 == 1 {
                            assert_eq!(base, moved);
                        } else {
                            assert_eq!(base.without_pairs(&[pair]), moved.without_pairs(&[pair]));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn derived_relator_examples() {
        assert!(derive_relator(0, 0, 3).unwrap().is_zero());
        let want = LaurentPoly2::from_terms([((1, 0), 1), ((1, 1), -1), ((0, -1), 1), ((-1, -1), -1)]);
        assert_eq!(derive_relator(1, 0, 3).unwrap(), want);
    }

    #[test]
    fn derived_relators_match_printed_form() {
        for n in 3..=6 {
            for (ab, r) in derive_r_relators(n, -4, 4).unwrap() {
                assert_eq!(r, printed_relator(ab.0, ab.1, n), "n={} {:?}", n, ab);
            }
        }
    }

    #[test]
    fn facet_parsing() {
        assert_eq!("t1=t2".parse::<Facet>().unwrap(), Facet::T1EqT2);
        assert_eq!(" T3=1 ".parse::<Facet>().unwrap(), Facet::T3One);
        assert!(matches!("t2=0".parse::<Facet>(), Err(Error::UnknownFacet(_))));
    }

    fn arb_elem(n: i64) -> impl Strategy<Value = DegNElem> {
        prop::collection::vec((1u8..=3, 1u8..=3, prop::array::uniform3(-4i64..=4), -3i64..=3), 0..5)
            .prop_map(move |gs| {
                let mut x = DegNElem::zero(n);
                for (i, j, exps, c) in gs {
                    x.add_scaled(&raw(i, j, exps, n), &BigInt::from(c));
                }
                x
            })
    }

    fn arb_pair() -> impl Strategy<Value = (DegNElem, DegNElem)> {
        (3i64..=6).prop_flat_map(|n| (arb_elem(n), arb_elem(n)))
    }

    proptest! {
        #[test]
        fn bracket_commutes_with_t_action(
            (x, y) in arb_pair(),
            m in prop::array::uniform3(-5i64..=5),
        ) {
            let lhs = bracket(&x.act(m), &y.act(m)).unwrap();
            let rhs = bracket(&x, &y).unwrap().act(m);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bracket_is_graded_symmetric((x, y) in arb_pair()) {
            let xy = bracket(&x, &y).unwrap();
            let mut yx = bracket(&y, &x).unwrap();
            yx.add_scaled(&xy, &(-Sign::pow_neg_one(x.n())).to_bigint());
            prop_assert!(yx.is_zero());
        }
    }
}
