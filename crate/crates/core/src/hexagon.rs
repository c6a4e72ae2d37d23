//! The W3 target group: `Z[t1^±, t2^±] [w13, w23]` modulo the hexagon
//! relators, decomposed into orbits of the dihedral group of the hexagon
//! acting on exponent pairs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intlat::{Cokernel, CokernelCoords, IntMatrix, QuotientStructure};
use crate::laurent::{AffineMap2, LaurentPoly2, Sign};

/// `r: (a, b) -> (a - b, a)`, order 6.
pub fn rotate((a, b): (i64, i64)) -> (i64, i64) {
    (a - b, a)
}

/// `s: (a, b) -> (-b, -a)`, order 2.
pub fn reflect((a, b): (i64, i64)) -> (i64, i64) {
    (-b, -a)
}

/// Whether a nonzero point has a six-element orbit.
pub fn on_short_orbit_line((a, b): (i64, i64)) -> bool {
    a + b == 0 || a == b || a == 0 || b == 0 || 2 * a == b || 2 * b == a
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitType {
    Origin,
    Six,
    Twelve,
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrbitType::Origin => "origin",
            OrbitType::Six => "six",
            OrbitType::Twelve => "twelve",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HexOrbit {
    pub rep: (i64, i64),
    /// `r^0..r^5` of the representative, then their reflections,
    /// duplicates removed.
    pub elements: Vec<(i64, i64)>,
    pub otype: OrbitType,
}

impl HexOrbit {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        self.elements.contains(&p)
    }

    pub fn index_of(&self, p: (i64, i64)) -> Option<usize> {
        self.elements.iter().position(|&e| e == p)
    }
}

fn rotations(p: (i64, i64)) -> [(i64, i64); 6] {
    let mut out = [p; 6];
    for k in 1..6 {
        out[k] = rotate(out[k - 1]);
    }
    out
}

/// Canonical representative: the lexicographically least orbit element.
pub fn orbit_rep(p: (i64, i64)) -> (i64, i64) {
    let r = rotations(p);
    r.iter().chain(r.map(reflect).iter()).copied().min().expect("nonempty")
}

pub fn orbit_of(a: i64, b: i64) -> HexOrbit {
    let rep = orbit_rep((a, b));
    let r = rotations(rep);
    let mut elements: Vec<(i64, i64)> = Vec::with_capacity(12);
    for p in r.iter().chain(r.map(reflect).iter()) {
        if !elements.contains(p) {
            elements.push(*p);
        }
    }
    let otype = match elements.len() {
        1 => OrbitType::Origin,
        6 => OrbitType::Six,
        12 => OrbitType::Twelve,
        k => unreachable!("dihedral orbit of size {}", k),
    };
    HexOrbit { rep, elements, otype }
}

/// A relator family indexed by `(p, q)` and `n`, valued in the `(t1, t2)`
/// chart.
pub type RelatorFn = fn(i64, i64, i64) -> LaurentPoly2;

/// The hexagon relator at `(p, q)`:
/// `t(p,q) - t(q,q-p) + (-1)^(n-1) (t(p,p-q) - t(q,p))`.
pub fn hex_relator(p: i64, q: i64, n: i64) -> LaurentPoly2 {
    let s = Sign::pow_neg_one(n - 1).to_i64();
    LaurentPoly2::from_terms([
        ((p, q), 1),
        ((q, q - p), -1),
        ((p, p - q), s),
        ((q, p), -s),
    ])
}

fn normalize_row_sign(row: &mut [BigInt]) {
    if row.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in row.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
}

/// Relator matrix of an orbit built from a custom relator family.
pub fn orbit_relators_with(o: &HexOrbit, n: i64, relator: RelatorFn) -> Result<IntMatrix> {
    let mut rows: Vec<Vec<BigInt>> = vec![];
    for &(p, q) in &o.elements {
        let rel = relator(p, q, n);
        let mut row = vec![BigInt::zero(); o.len()];
        for (m, c) in rel.terms() {
            let j = o.index_of(m).ok_or(Error::NotOrbitLocal { p, q })?;
            row[j] += c;
        }
        if row.iter().all(Zero::is_zero) {
            continue;
        }
        normalize_row_sign(&mut row);
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    Ok(IntMatrix::from_rows(o.len(), &rows))
}

/// Distinct hexagon relators supported on the orbit, one per sign class;
/// columns follow `o.elements`.
pub fn orbit_relators(o: &HexOrbit, n: i64) -> IntMatrix {
    orbit_relators_with(o, n, hex_relator).expect("hexagon relators are orbit-local")
}

pub fn orbit_structure(o: &HexOrbit, n: i64) -> QuotientStructure {
    Cokernel::new(&orbit_relators(o, n)).structure()
}

/// First `(p, q)` in `[lo, hi]^2` whose relator leaves its orbit.
pub fn locality_violation(relator: RelatorFn, n: i64, lo: i64, hi: i64) -> Option<(i64, i64)> {
    (lo..=hi)
        .flat_map(|p| (lo..=hi).map(move |q| (p, q)))
        .find(|&(p, q)| {
            let o = orbit_of(p, q);
            relator(p, q, n).terms().any(|(m, _)| !o.contains(m))
        })
}

// ---------------------------------------------------------------------------
// Elements and normal forms
// ---------------------------------------------------------------------------

/// `sum c_pq t1^p t2^q [w13, w23]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HexElement {
    pub poly: LaurentPoly2,
    pub n: i64,
}

impl HexElement {
    pub fn new(poly: LaurentPoly2, n: i64) -> Self {
        HexElement { poly, n }
    }
}

/// Per-orbit cokernel coordinates. Orbits where the element vanishes are
/// omitted, so the zero class has an empty map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HexNormalForm {
    pub n_parity: u8,
    pub orbits: BTreeMap<(i64, i64), CokernelCoords>,
}

impl HexNormalForm {
    pub fn is_zero(&self) -> bool {
        self.orbits.is_empty()
    }
}

impl Serialize for HexNormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct OrbitOut {
            rep: (i64, i64),
            free: Vec<String>,
            torsion: Vec<String>,
        }
        #[derive(Serialize)]
        struct Out {
            n_parity: u8,
            orbits: Vec<OrbitOut>,
        }
        let str_vec = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect();
        Out {
            n_parity: self.n_parity,
            orbits: self
                .orbits
                .iter()
                .map(|(rep, c)| OrbitOut {
                    rep: *rep,
                    free: str_vec(&c.free),
                    torsion: str_vec(&c.torsion),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl fmt::Display for HexNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orbits.is_empty() {
            return writeln!(f, "0");
        }
        for (rep, c) in &self.orbits {
            let fr: Vec<String> = c.free.iter().map(|x| x.to_string()).collect();
            let tr: Vec<String> = c.torsion.iter().map(|x| x.to_string()).collect();
            writeln!(
                f,
                "orbit ({}, {}): free [{}] torsion [{}]",
                rep.0,
                rep.1,
                fr.join(", "),
                tr.join(", ")
            )?;
        }
        Ok(())
    }
}

/// Split a polynomial into per-orbit coefficient vectors.
fn orbit_vectors(poly: &LaurentPoly2) -> BTreeMap<(i64, i64), (HexOrbit, Vec<BigInt>)> {
    let mut out: BTreeMap<(i64, i64), (HexOrbit, Vec<BigInt>)> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let rep = orbit_rep(m);
        let (o, v) = out.entry(rep).or_insert_with(|| {
            let o = orbit_of(m.0, m.1);
            let len = o.len();
            (o, vec![BigInt::zero(); len])
        });
        let j = o.index_of(m).expect("monomial lies in its orbit");
        v[j] += c;
    }
    out
}

pub fn hex_normal_form(x: &HexElement) -> HexNormalForm {
    let parts: Vec<_> = orbit_vectors(&x.poly).into_iter().collect();
    let orbits = parts
        .into_par_iter()
        .filter_map(|(rep, (o, v))| {
            let c = Cokernel::new(&orbit_relators(&o, x.n)).coords(&v);
            (!c.is_zero()).then_some((rep, c))
        })
        .collect();
    HexNormalForm {
        n_parity: (x.n.rem_euclid(2)) as u8,
        orbits,
    }
}

// ---------------------------------------------------------------------------
// Basis change between [w12, w23] in (t1, t3) and [w13, w23] in (t1, t2)
// ---------------------------------------------------------------------------

/// `t1^m t3^k [w12, w23] = -t1^(m-k) t2^(-k) [w13, w23]`.
pub const BASIS_CHANGE: AffineMap2 = AffineMap2 {
    linear: [[1, -1], [0, -1]],
    offset: [0, 0],
};

pub const BASIS_CHANGE_SIGN: Sign = Sign::Minus;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisDirection {
    /// from `(t1, t3) [w12, w23]` to `(t1, t2) [w13, w23]`
    To12,
    /// the inverse
    To13,
}

impl std::str::FromStr for BasisDirection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "13to12" => Ok(BasisDirection::To12),
            "12to13" => Ok(BasisDirection::To13),
            _ => Err(Error::Parse(format!("unknown direction `{}` (expected 13to12 or 12to13)", s))),
        }
    }
}

pub fn basis_change(p: &LaurentPoly2, dir: BasisDirection) -> LaurentPoly2 {
    let map = match dir {
        BasisDirection::To12 => BASIS_CHANGE,
        BasisDirection::To13 => BASIS_CHANGE.inverse().expect("unimodular"),
    };
    p.reindex(&map, BASIS_CHANGE_SIGN).expect("unimodular")
}

pub fn basis_change_13_to_12(p: &LaurentPoly2) -> LaurentPoly2 {
    basis_change(p, BasisDirection::To12)
}

pub fn basis_change_12_to_13(p: &LaurentPoly2) -> LaurentPoly2 {
    basis_change(p, BasisDirection::To13)
}
