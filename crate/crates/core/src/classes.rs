//! The class algebra on the free module spanned by `G(p, q)`.
//!
//! Derived classes (`G*`, `E`, `D`, roman forms, `F_k`, `δ_k`) are fixed
//! integer combinations of primitive classes. Relations only enter through
//! [`w3`] and the hexagon quotient.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hexagon::{hex_normal_form, HexElement};
use crate::intlat::{rank_over_rationals, IntMatrix};
use crate::laurent::{accumulate, CoeffRepr, LaurentPoly2, Sign};

/// `sum c_pq G(p, q)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GClass {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl GClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = ((i64, i64), C)>) -> Self {
        let mut out = Self::zero();
        for (pq, c) in terms {
            accumulate(&mut out.terms, pq, c.into());
        }
        out
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

    pub fn coeff(&self, p: i64, q: i64) -> BigInt {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn add_term(&mut self, pq: (i64, i64), c: BigInt) {
        accumulate(&mut self.terms, pq, c);
    }

    pub fn add_scaled(&mut self, other: &GClass, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for (pq, v) in other.terms() {
            accumulate(&mut self.terms, pq, v * c);
        }
    }

    pub fn scale(&self, c: impl Into<BigInt>) -> GClass {
        let mut out = GClass::zero();
        out.add_scaled(self, &c.into());
        out
    }

    /// Keep only the terms `G(p0, q)`.
    pub fn project_first_index(&self, p0: i64) -> GClass {
        GClass::from_terms(self.terms().filter(|((p, _), _)| *p == p0).map(|(k, c)| (k, c.clone())))
    }
}

fn lin(parts: &[(i64, &GClass)]) -> GClass {
    let mut out = GClass::zero();
    for (c, x) in parts {
        out.add_scaled(x, &BigInt::from(*c));
    }
    out
}

impl std::ops::Add for &GClass {
    type Output = GClass;
    fn add(self, rhs: &GClass) -> GClass {
        lin(&[(1, self), (1, rhs)])
    }
}

impl std::ops::Sub for &GClass {
    type Output = GClass;
    fn sub(self, rhs: &GClass) -> GClass {
        lin(&[(1, self), (-1, rhs)])
    }
}

impl std::ops::Neg for &GClass {
    type Output = GClass;
    fn neg(self) -> GClass {
        lin(&[(-1, self)])
    }
}

impl std::ops::Add for GClass {
    type Output = GClass;
    fn add(self, rhs: GClass) -> GClass {
        &self + &rhs
    }
}

impl std::ops::Sub for GClass {
    type Output = GClass;
    fn sub(self, rhs: GClass) -> GClass {
        &self - &rhs
    }
}

impl std::ops::Neg for GClass {
    type Output = GClass;
    fn neg(self) -> GClass {
        -&self
    }
}

impl std::iter::Sum for GClass {
    fn sum<I: Iterator<Item = GClass>>(iter: I) -> GClass {
        let mut out = GClass::zero();
        for x in iter {
            out.add_scaled(&x, &BigInt::one());
        }
        out
    }
}

impl fmt::Display for GClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((p, q), c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            write!(f, "G({},{})", p, q)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct GTermOut {
    p: i64,
    q: i64,
    c: String,
}

#[derive(Deserialize)]
struct GTermIn {
    p: i64,
    q: i64,
    c: CoeffRepr,
}

impl Serialize for GClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            terms: Vec<GTermOut>,
        }
        Out {
            terms: self
                .terms
                .iter()
                .map(|((p, q), c)| GTermOut { p: *p, q: *q, c: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct In {
            terms: Vec<GTermIn>,
        }
        use serde::de::Error as _;
        let raw = In::deserialize(d)?;
        let mut out = GClass::zero();
        for t in raw.terms {
            out.add_term((t.p, t.q), t.c.into_bigint().map_err(D::Error::custom)?);
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Primitive and derived classes
// ---------------------------------------------------------------------------

pub fn g(p: i64, q: i64) -> GClass {
    GClass::from_terms([((p, q), 1)])
}

/// `G*(p, q) = -G(p, p-q)`
pub fn gstar(p: i64, q: i64) -> GClass {
    GClass::from_terms([((p, p - q), -1)])
}

/// `E(p, q) = -G(-q, p) + G(p, -q)`
pub fn e(p: i64, q: i64) -> GClass {
    GClass::from_terms([((-q, p), -1), ((p, -q), 1)])
}

/// `D(p, q) = -G(q, -p) + G(-q, p) - G(p, -q) + G(-p, q)`
pub fn d(p: i64, q: i64) -> GClass {
    GClass::from_terms([((q, -p), -1), ((-q, p), 1), ((p, -q), -1), ((-p, q), 1)])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RomanForm {
    I,
    IIb,
    IIbe,
    IIr,
    IIre,
}

impl RomanForm {
    pub const ALL: [RomanForm; 5] = [RomanForm::I, RomanForm::IIb, RomanForm::IIbe, RomanForm::IIr, RomanForm::IIre];
}

impl FromStr for RomanForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" => Ok(RomanForm::I),
            "IIb" => Ok(RomanForm::IIb),
            "IIbe" => Ok(RomanForm::IIbe),
            "IIr" => Ok(RomanForm::IIr),
            "IIre" => Ok(RomanForm::IIre),
            _ => Err(Error::UnknownRomanForm(s.to_string())),
        }
    }
}

impl fmt::Display for RomanForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RomanForm::I => "I",
            RomanForm::IIb => "IIb",
            RomanForm::IIbe => "IIbe",
            RomanForm::IIr => "IIr",
            RomanForm::IIre => "IIre",
        })
    }
}

pub fn roman(form: RomanForm, p: i64, q: i64) -> GClass {
    match form {
        RomanForm::I => d(p, -q),
        RomanForm::IIb => lin(&[(1, &d(-q, p)), (-1, &d(p - q, -p))]),
        RomanForm::IIbe => lin(&[
            (1, &d(-q, p)),
            (-1, &d(-p - q, p)),
            (-1, &d(p - q, -p)),
            (1, &d(-q, -p)),
        ]),
        RomanForm::IIr => lin(&[(1, &d(p, -q)), (-1, &d(p - q, q))]),
        RomanForm::IIre => lin(&[
            (1, &d(p, -q)),
            (-1, &d(p + q, -q)),
            (-1, &d(p - q, q)),
            (1, &d(p, q)),
        ]),
    }
}

// ---------------------------------------------------------------------------
// F_k
// ---------------------------------------------------------------------------

fn check_fk_args(k: i64, p: i64, q: i64) -> Result<()> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange(format!("k must be at least 2, got {}", k)));
    }
    for (name, v) in [("p", p), ("q", q)] {
        if !(1..k).contains(&v) {
            return Err(Error::ParameterOutOfRange(format!(
                "{} must lie in [1, {}], got {}",
                name,
                k - 1,
                v
            )));
        }
    }
    Ok(())
}

/// Contribution of level `L` to `F_k(p, q)`.
pub fn f_level(k: i64, level: i64, p: i64, q: i64) -> Result<GClass> {
    check_fk_args(k, p, q)?;
    if !(1..k).contains(&level) {
        return Err(Error::ParameterOutOfRange(format!(
            "L must lie in [1, {}], got {}",
            k - 1,
            level
        )));
    }
    let blue_off = p >= k - level;
    let red_off = q >= level;
    let wide = p + q >= k;
    Ok(match (blue_off, red_off) {
        (true, true) => d(p, -q),
        (true, false) => {
            let (s, r) = if wide {
                (d(p, -q), -d(p - q, q))
            } else {
                (&d(p, -q) - &d(p + q, -q), &d(p, q) - &d(p - q, q))
            };
            s + r
        }
        (false, true) => {
            let (s, r) = if wide {
                (d(-q, p), -d(p - q, -p))
            } else {
                (&d(-q, p) - &d(-p - q, p), &d(-q, -p) - &d(p - q, -p))
            };
            s + r
        }
        (false, false) => GClass::zero(),
    })
}

/// Closed form of `F_k(p, q)`.
pub fn f_closed(k: i64, p: i64, q: i64) -> Result<GClass> {
    check_fk_args(k, p, q)?;
    Ok(if p + q < k {
        lin(&[(p, &roman(RomanForm::IIre, p, q)), (q, &roman(RomanForm::IIbe, p, q))])
    } else {
        lin(&[
            (k - p - 1, &roman(RomanForm::IIb, p, q)),
            (k - q - 1, &roman(RomanForm::IIr, p, q)),
            (p + q + 1 - k, &roman(RomanForm::I, p, q)),
        ])
    })
}

/// `F_k(p, q)` as the sum of its levels.
pub fn f_by_levels(k: i64, p: i64, q: i64) -> Result<GClass> {
    let mut out = GClass::zero();
    for level in 1..k {
        out.add_scaled(&f_level(k, level, p, q)?, &BigInt::one());
    }
    Ok(out)
}

/// The full `(k-1) x (k-1)` matrix, row `p-1`, column `q-1`.
pub fn fk_matrix(k: i64) -> Result<Vec<Vec<GClass>>> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange(format!("k must be at least 2, got {}", k)));
    }
    (1..k)
        .into_par_iter()
        .map(|p| (1..k).map(|q| f_closed(k, p, q)).collect())
        .collect()
}

/// Twisted class `sum v_p w_q F_k(p, q)`.
pub fn twist_class(k: i64, v: &[i64], w: &[i64]) -> Result<GClass> {
    if k < 2 {
        return Err(Error::ParameterOutOfRange(format!("k must be at least 2, got {}", k)));
    }
    let want = (k - 1) as usize;
    for x in [v, w] {
        if x.len() != want {
            return Err(Error::LengthMismatch { got: x.len(), want });
        }
    }
    let mut out = GClass::zero();
    for (pi, &vp) in v.iter().enumerate() {
        for (qi, &wq) in w.iter().enumerate() {
            let c = BigInt::from(vp) * BigInt::from(wq);
            if !c.is_zero() {
                out.add_scaled(&f_closed(k, pi as i64 + 1, qi as i64 + 1)?, &c);
            }
        }
    }
    Ok(out)
}

fn check_delta_k(k: i64) -> Result<()> {
    if k < 3 {
        return Err(Error::ParameterOutOfRange(format!("delta needs k >= 3, got {}", k)));
    }
    Ok(())
}

/// `δ_k = F_k(k-1, k-2)`.
pub fn delta(k: i64) -> Result<GClass> {
    check_delta_k(k)?;
    f_closed(k, k - 1, k - 2)
}

/// The eight-term expansion of `δ_k` written out directly.
pub fn delta_expanded(k: i64) -> Result<GClass> {
    check_delta_k(k)?;
    let m = k - 1;
    let mut x = GClass::from_terms([
        ((k - 2, k - 1), m),
        ((k - 1, k - 2), -m),
        ((1 - k, 2 - k), m),
        ((2 - k, 1 - k), -m),
    ]);
    x.add_scaled(
        &GClass::from_terms([((k - 2, -1), -1), ((2 - k, 1), 1), ((1, 2 - k), -1), ((-1, k - 2), 1)]),
        &BigInt::from(-1),
    );
    Ok(x)
}

/// `G(p,q) - G(q,q-p) + (-1)^(n-1) (G(p,p-q) - G(q,p))`; for odd `n` this
/// is `G(p,q) + G(p,p-q) - G(q,p) - G(q,q-p)`.
pub fn hexagon_combination(p: i64, q: i64, n: i64) -> GClass {
    let s = Sign::pow_neg_one(n - 1).to_i64();
    GClass::from_terms([((p, q), 1), ((q, q - p), -1), ((p, p - q), s), ((q, p), -s)])
}

/// `W3(G(p, q)) = t1^p t2^q [w13, w23]`, extended linearly.
pub fn w3(x: &GClass, n: i64) -> HexElement {
    HexElement::new(LaurentPoly2::from_terms(x.terms().map(|(pq, c)| (pq, c.clone()))), n)
}

// ---------------------------------------------------------------------------
// Independence
// ---------------------------------------------------------------------------

/// Rows are the free normal-form coordinates of `W3` of each input; columns
/// are `(orbit representative, coordinate index)`.
#[derive(Debug, Clone, Serialize)]
pub struct IndependenceCertificate {
    pub rank: usize,
    pub count: usize,
    pub columns: Vec<((i64, i64), usize)>,
    pub matrix: IntMatrix,
}

impl IndependenceCertificate {
    pub fn is_independent(&self) -> bool {
        self.rank == self.count
    }
}

pub fn independence_rank(classes: &[GClass], n: i64) -> Result<IndependenceCertificate> {
    if classes.is_empty() {
        return Err(Error::EmptyInput("independence needs at least one class"));
    }
    let forms: Vec<_> = classes.par_iter().map(|x| hex_normal_form(&w3(x, n))).collect();
    let mut columns: BTreeMap<((i64, i64), usize), usize> = BTreeMap::new();
    for nf in &forms {
        for (rep, c) in &nf.orbits {
            for i in 0..c.free.len() {
                columns.insert((*rep, i), 0);
            }
        }
    }
    for (j, v) in columns.values_mut().enumerate() {
        *v = j;
    }
    let mut m = IntMatrix::zeros(classes.len(), columns.len());
    for (r, nf) in forms.iter().enumerate() {
        for (rep, c) in &nf.orbits {
            for (i, x) in c.free.iter().enumerate() {
                m[(r, columns[&(*rep, i)])] = x.clone();
            }
        }
    }
    Ok(IndependenceCertificate {
        rank: rank_over_rationals(&m),
        count: classes.len(),
        columns: columns.into_keys().collect(),
        matrix: m,
    })
}

/// Projection check on the free module: keeping only `G(k-1, *)`, `δ_k`
/// survives while every `δ_m` with `3 <= m < k` vanishes. Returns the
/// first `k` in range where this fails.
pub fn projection_diagnostic(kmin: i64, kmax: i64) -> Result<Option<i64>> {
    for k in kmin.max(4)..=kmax {
        if delta(k)?.project_first_index(k - 1).is_zero() {
            return Ok(Some(k));
        }
        for m in 3..k {
            if !delta(m)?.project_first_index(k - 1).is_zero() {
                return Ok(Some(k));
            }
        }
    }
    Ok(None)
}
