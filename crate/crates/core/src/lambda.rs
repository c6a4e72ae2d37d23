//! W2 target groups.
//!
//! `Λ = Z[t^±] / <t^0, t^-1, t^k + (-1)^n t^(W0-1-k)>` for a circle
//! component of degree `W0`, and `Z[t^±] / <t^0>` for arcs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::intlat::{cokernel_structure, IntMatrix, QuotientStructure};
use crate::laurent::{accumulate, CoeffRepr, LaurentPoly1, Sign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LambdaContext {
    pub w0: i64,
    pub n: i64,
}

impl LambdaContext {
    pub fn new(w0: i64, n: i64) -> Result<Self> {
        if n < 3 {
            return Err(Error::DimensionTooSmall(n));
        }
        Ok(LambdaContext { w0, n })
    }

    /// Exponents set to zero by the relations.
    pub fn is_killed(&self, k: i64) -> bool {
        k == -1 || k == 0 || k == self.w0 || k == self.w0 - 1
    }

    /// The exponent fixed by `k -> W0-1-k`, if any.
    pub fn fixed_exponent(&self) -> Option<i64> {
        (self.w0 - 1).is_even().then(|| (self.w0 - 1) / 2)
    }

    /// Whether the fixed exponent survives as a 2-torsion class.
    pub fn has_torsion(&self) -> bool {
        self.n.is_even() && self.fixed_exponent().is_some_and(|k| !self.is_killed(k))
    }

    /// `t^k = fold_sign * t^(W0-1-k)`
    fn fold_sign(&self) -> Sign {
        -Sign::pow_neg_one(self.n)
    }

    /// Surviving free generators with exponents in `[lo, hi]`, ascending.
    pub fn free_generators(&self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi)
            .filter(|&k| 2 * k >= self.w0 - 1 && !self.is_killed(k))
            .filter(|&k| !(self.has_torsion() && Some(k) == self.fixed_exponent()))
            .collect()
    }
}

/// Normal form of an element of `Λ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaElement {
    pub ctx: LambdaContext,
    pub free_part: LaurentPoly1,
    pub torsion_bit: u8,
}

impl LambdaElement {
    pub fn zero(ctx: LambdaContext) -> Self {
        LambdaElement {
            ctx,
            free_part: LaurentPoly1::zero(),
            torsion_bit: 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_part.is_zero() && self.torsion_bit == 0
    }

    /// A polynomial representing this class.
    pub fn to_poly(&self) -> LaurentPoly1 {
        let mut p = self.free_part.clone();
        if self.torsion_bit == 1 {
            let k = self.ctx.fixed_exponent().expect("torsion needs a fixed exponent");
            p.add_term(k, BigInt::one());
        }
        p
    }

    pub fn checked_add(&self, other: &LambdaElement) -> Result<LambdaElement> {
        self.check_ctx(other)?;
        Ok(lambda_reduce(&(self.to_poly() + other.to_poly()), self.ctx))
    }

    pub fn checked_sub(&self, other: &LambdaElement) -> Result<LambdaElement> {
        self.check_ctx(other)?;
        Ok(lambda_reduce(&(self.to_poly() - other.to_poly()), self.ctx))
    }

    fn check_ctx(&self, other: &LambdaElement) -> Result<()> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch(format!("{:?} vs {:?}", self.ctx, other.ctx)));
        }
        Ok(())
    }

    /// Integer coordinates on `ctx.free_generators(lo, hi)`, followed by the
    /// torsion bit when the torsion case applies.
    pub fn coordinates(&self, lo: i64, hi: i64) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self
            .ctx
            .free_generators(lo, hi)
            .into_iter()
            .map(|k| self.free_part.coeff(k))
            .collect();
        if self.ctx.has_torsion() {
            v.push(BigInt::from(self.torsion_bit));
        }
        v
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.free_part.is_zero(), self.torsion_bit) {
            (true, 0) => write!(f, "0"),
            (false, 0) => write!(f, "{}", self.free_part),
            (true, _) => write!(f, "[t^{}]_2", self.ctx.fixed_exponent().unwrap_or_default()),
            (false, _) => write!(
                f,
                "{} + [t^{}]_2",
                self.free_part,
                self.ctx.fixed_exponent().unwrap_or_default()
            ),
        }
    }
}

impl Serialize for LambdaElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            w0: i64,
            n: i64,
            free_part: &'a LaurentPoly1,
            torsion_bit: u8,
        }
        Out {
            w0: self.ctx.w0,
            n: self.ctx.n,
            free_part: &self.free_part,
            torsion_bit: self.torsion_bit,
        }
        .serialize(s)
    }
}

/// Closed-form normal form in `Λ`.
pub fn lambda_reduce(p: &LaurentPoly1, ctx: LambdaContext) -> LambdaElement {
    let mut free = BTreeMap::new();
    let mut parity = BigInt::zero();
    let fold = ctx.fold_sign();
    for (k, c) in p.terms() {
        if ctx.is_killed(k) {
            continue;
        }
        let (k, c) = if 2 * k < ctx.w0 - 1 {
            (ctx.w0 - 1 - k, fold.apply(c.clone()))
        } else {
            (k, c.clone())
        };
        if ctx.has_torsion() && Some(k) == ctx.fixed_exponent() {
            parity += c;
        } else {
            accumulate(&mut free, k, c);
        }
    }
    LambdaElement {
        ctx,
        free_part: LaurentPoly1::from_terms(free),
        torsion_bit: if parity.is_odd() { 1 } else { 0 },
    }
}

fn check_window(ctx: LambdaContext, lo: i64, hi: i64) -> Result<()> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let need = ctx.w0.abs() + 2;
    if lo > -need || hi < need {
        return Err(Error::WindowTooSmall { lo, hi, need_lo: -need, need_hi: need });
    }
    Ok(())
}

/// The full relator matrix of `Λ` restricted to exponents in `[lo, hi]`.
/// Column `j` is the monomial `t^(lo+j)`; a relation is included only when
/// all its monomials lie in the window.
pub fn lambda_relator_matrix(ctx: LambdaContext, lo: i64, hi: i64) -> Result<IntMatrix> {
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let width = (hi - lo + 1) as usize;
    let inside = |k: i64| (lo..=hi).contains(&k);
    let col = |k: i64| (k - lo) as usize;
    let mut rows: Vec<Vec<i64>> = vec![];
    for k in [0, -1] {
        if inside(k) {
            let mut r = vec![0; width];
            r[col(k)] = 1;
            rows.push(r);
        }
    }
    let sign = Sign::pow_neg_one(ctx.n).to_i64();
    for k in lo..=hi {
        let partner = ctx.w0 - 1 - k;
        if inside(partner) {
            let mut r = vec![0; width];
            r[col(k)] += 1;
            r[col(partner)] += sign;
            if r.iter().any(|&x| x != 0) {
                rows.push(r);
            }
        }
    }
    Ok(IntMatrix::from_rows(width, &rows))
}

/// Brute-force structure of the windowed quotient.
pub fn lambda_structure(ctx: LambdaContext, lo: i64, hi: i64) -> Result<QuotientStructure> {
    check_window(ctx, lo, hi)?;
    Ok(cokernel_structure(&lambda_relator_matrix(ctx, lo, hi)?))
}

fn step(k: i64) -> LaurentPoly1 {
    LaurentPoly1::from_terms([(k, 1), (k - 1, -1)])
}

/// W2 of the loop family θ_k.
pub fn w2_theta(k: i64, ctx: LambdaContext) -> LambdaElement {
    lambda_reduce(&step(k), ctx)
}

/// W2 of the loop family γ_k; same value as θ_k.
pub fn w2_gamma(k: i64, ctx: LambdaContext) -> LambdaElement {
    lambda_reduce(&step(k), ctx)
}

/// W2 of the generator α_i, defined for `W0 = 1`.
pub fn w2_alpha(i: i64, ctx: LambdaContext) -> Result<LambdaElement> {
    if ctx.w0 != 1 {
        return Err(Error::AlphaNeedsUnitDegree(ctx.w0));
    }
    if i < 1 {
        return Err(Error::NonPositiveAlphaIndex(i));
    }
    let p = LaurentPoly1::from_terms([(i + 1, 1), (i, -2), (i - 1, 1)]);
    Ok(lambda_reduce(&p, ctx))
}

/// W2 target for arcs: drop the constant term.
pub fn w2_arc_reduce(p: &LaurentPoly1) -> LaurentPoly1 {
    LaurentPoly1::from_terms(p.terms().filter(|(k, _)| *k != 0).map(|(k, c)| (k, c.clone())))
}

// ---------------------------------------------------------------------------
// α-combinations and the covering endomorphism
// ---------------------------------------------------------------------------

/// Integer combination of the generators α_i, `i >= 1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct AlphaCombination {
    terms: BTreeMap<i64, BigInt>,
}

impl AlphaCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn alpha(i: i64) -> Result<Self> {
        Self::from_terms([(i, 1)])
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Result<Self> {
        let mut out = Self::zero();
        for (i, c) in terms {
            if i < 1 {
                return Err(Error::NonPositiveAlphaIndex(i));
            }
            accumulate(&mut out.terms, i, c.into());
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i64) -> BigInt {
        self.terms.get(&i).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn add(&self, other: &AlphaCombination) -> AlphaCombination {
        let mut out = self.clone();
        for (i, c) in other.terms() {
            accumulate(&mut out.terms, i, c.clone());
        }
        out
    }
}

impl fmt::Display for AlphaCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (i, c)) in self.terms.iter().enumerate() {
            let sep = match (n, c.sign()) {
                (0, num_bigint::Sign::Minus) => "-",
                (0, _) => "",
                (_, num_bigint::Sign::Minus) => " - ",
                _ => " + ",
            };
            let mag = num_traits::Signed::abs(c);
            if mag.is_one() {
                write!(f, "{}a{}", sep, i)?;
            } else {
                write!(f, "{}{}*a{}", sep, mag, i)?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct AlphaTermOut {
    i: i64,
    c: String,
}

#[derive(Deserialize)]
struct AlphaTermIn {
    i: i64,
    c: CoeffRepr,
}

impl Serialize for AlphaCombination {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            terms: Vec<AlphaTermOut>,
        }
        Out {
            terms: self
                .terms
                .iter()
                .map(|(i, c)| AlphaTermOut { i: *i, c: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlphaCombination {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct In {
            terms: Vec<AlphaTermIn>,
        }
        use serde::de::Error as _;
        let raw = In::deserialize(d)?;
        let mut pairs = vec![];
        for t in raw.terms {
            pairs.push((t.i, t.c.into_bigint().map_err(D::Error::custom)?));
        }
        AlphaCombination::from_terms(pairs).map_err(D::Error::custom)
    }
}

/// Pull-back along the `m`-fold cyclic cover: `α_i -> m α_(i/m)` when
/// `m | i`, otherwise `α_i -> 0`.
pub fn cover_pullback(m: i64, x: &AlphaCombination) -> Result<AlphaCombination> {
    if m < 1 {
        return Err(Error::NonPositiveCoverDegree(m));
    }
    let mb = BigInt::from(m);
    let mut out = AlphaCombination::zero();
    for (i, c) in x.terms() {
        if i % m == 0 {
            accumulate(&mut out.terms, i / m, c * &mb);
        }
    }
    Ok(out)
}

/// Whether `depth` applications of the cover pull-back annihilate `x`.
pub fn cover_kernel_iterate(x: &AlphaCombination, m: i64, depth: i64) -> Result<bool> {
    if depth < 1 {
        return Err(Error::NonPositiveDepth(depth));
    }
    let mut y = x.clone();
    for _ in 0..depth {
        y = cover_pullback(m, &y)?;
        if y.is_zero() {
            return Ok(true);
        }
    }
    Ok(y.is_zero())
}
