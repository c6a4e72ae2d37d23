//! Integer lattice normal forms.
//!
//! Everything here works on small dense matrices of `BigInt`: Smith normal
//! form with unimodular transforms, row-style Hermite normal form, exact
//! rational rank by Bareiss elimination, and cokernel coordinates used to
//! decide membership in a row lattice.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from row vectors; every row must have `cols` entries.
    pub fn from_rows<C: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<C>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {} has {} entries, expected {}", i, r.len(), cols);
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone().into();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let m = &self[(i, j)];
                if !m.is_zero() {
                    *o += xi * m;
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.to_string()).collect())
            .collect();
        rows.serialize(s)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// `d = u * m * v` with `u`, `v` unimodular and `d` diagonal,
/// `d[0][0] | d[1][1] | ...`, all diagonal entries nonnegative.
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct SnfCalc {
    a: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
}

impl SnfCalc {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row_multiple(dst, src, q);
        self.u.add_row_multiple(dst, src, q);
    }

    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col_multiple(dst, src, q);
        self.v.add_col_multiple(dst, src, q);
    }

    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        for i in t..self.a.rows {
            for j in t..self.a.cols {
                let x = &self.a[(i, j)];
                if x.is_zero() {
                    continue;
                }
                let m = x.abs();
                if best.as_ref().is_none_or(|(_, b)| m < *b) {
                    best = Some(((i, j), m));
                }
            }
        }
        best.map(|(p, _)| p)
    }

    /// Smallest nonzero entry in row t or column t (beyond the diagonal).
    fn smallest_on_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<((usize, usize), BigInt)> = None;
        let mut consider = |p: (usize, usize), x: &BigInt| {
            if !x.is_zero() {
                let m = x.abs();
                if best.as_ref().is_none_or(|(_, b)| m < *b) {
                    best = Some((p, m));
                }
            }
        };
        for i in t..self.a.rows {
            consider((i, t), &self.a[(i, t)]);
        }
        for j in t + 1..self.a.cols {
            consider((t, j), &self.a[(t, j)]);
        }
        best.map(|(p, _)| p)
    }

    fn move_to_pivot(&mut self, t: usize, (i, j): (usize, usize)) {
        self.swap_rows(t, i);
        self.swap_cols(t, j);
    }

    fn run(mut self) -> Snf {
        let bound = self.a.rows.min(self.a.cols);
        for t in 0..bound {
            let Some(p) = self.smallest_in_block(t) else {
                break;
            };
            self.move_to_pivot(t, p);
            loop {
                let piv = self.a[(t, t)].clone();
                let mut clean = true;
                for i in t + 1..self.a.rows {
                    if !self.a[(i, t)].is_zero() {
                        let q = -self.a[(i, t)].div_floor(&piv);
                        self.add_row(i, t, &q);
                        clean &= self.a[(i, t)].is_zero();
                    }
                }
                for j in t + 1..self.a.cols {
                    if !self.a[(t, j)].is_zero() {
                        let q = -self.a[(t, j)].div_floor(&piv);
                        self.add_col(j, t, &q);
                        clean &= self.a[(t, j)].is_zero();
                    }
                }
                if !clean {
                    let p = self.smallest_on_cross(t).expect("pivot is nonzero");
                    self.move_to_pivot(t, p);
                    continue;
                }
                // pivot must divide the rest of the block
                let bad = (t + 1..self.a.rows).find(|&i| {
                    (t + 1..self.a.cols).any(|j| !self.a[(i, j)].is_multiple_of(&piv))
                });
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[(t, t)].is_negative() {
                self.a.negate_row(t);
                self.u.negate_row(t);
            }
        }
        Snf { d: self.a, u: self.u, v: self.v }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    SnfCalc {
        a: m.clone(),
        u: IntMatrix::identity(m.rows),
        v: IntMatrix::identity(m.cols),
    }
    .run()
}

// ---------------------------------------------------------------------------
// Quotient structure
// ---------------------------------------------------------------------------

/// `Z^free_rank ⊕ Z/d1 ⊕ Z/d2 ⊕ ...` with `d1 | d2 | ...`, every `di >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientStructure {
    pub free_rank: usize,
    #[serde(serialize_with = "ser_bigints")]
    pub torsion: Vec<BigInt>,
}

fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

impl QuotientStructure {
    pub fn free(n: usize) -> Self {
        QuotientStructure { free_rank: n, torsion: vec![] }
    }

    pub fn with_torsion<T: Into<BigInt>>(free_rank: usize, torsion: impl IntoIterator<Item = T>) -> Self {
        QuotientStructure {
            free_rank,
            torsion: torsion.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for QuotientStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = vec![];
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        for t in &self.torsion {
            parts.push(format!("Z_{}", t));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Presentation of `Z^ngens / rowspan(relations)`, prepared for repeated
/// reduction of vectors.
#[derive(Debug, Clone)]
pub struct Cokernel {
    ngens: usize,
    /// column transform from the Smith form
    v: IntMatrix,
    factors: Vec<BigInt>,
}

/// Coordinates of a vector in a [`Cokernel`]: free coordinates are exact
/// integers, torsion coordinates are residues in `[0, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CokernelCoords {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
}

impl CokernelCoords {
    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero) && self.torsion.iter().all(Zero::is_zero)
    }
}

impl Cokernel {
    pub fn new(relations: &IntMatrix) -> Self {
        let snf = smith_normal_form(relations);
        Cokernel {
            ngens: relations.cols,
            factors: snf.invariant_factors(),
            v: snf.v,
        }
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn structure(&self) -> QuotientStructure {
        QuotientStructure {
            free_rank: self.ngens - self.factors.len(),
            torsion: self.factors.iter().filter(|d| !d.is_one()).cloned().collect(),
        }
    }

    /// Canonical coordinates of `x` (a row vector over the generators).
    pub fn coords(&self, x: &[BigInt]) -> CokernelCoords {
        let y = self.v.left_apply(x);
        let r = self.factors.len();
        let torsion = self
            .factors
            .iter()
            .zip(&y[..r])
            .filter(|(d, _)| !d.is_one())
            .map(|(d, yi)| yi.mod_floor(d))
            .collect();
        CokernelCoords {
            free: y[r..].to_vec(),
            torsion,
        }
    }

    /// Whether `x` lies in the integer row span of the relations.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.coords(x).is_zero()
    }
}

pub fn cokernel_structure(relations: &IntMatrix) -> QuotientStructure {
    Cokernel::new(relations).structure()
}

// ---------------------------------------------------------------------------
// Rank, determinant, kernel, Hermite form
// ---------------------------------------------------------------------------

/// Fraction-free Gaussian elimination. Returns (rank, sign of row swaps,
/// eliminated matrix).
fn bareiss(m: &IntMatrix) -> (usize, i64, IntMatrix) {
    let mut a = m.clone();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1;
    for col in 0..a.cols {
        if rank == a.rows {
            break;
        }
        let Some(p) = (rank..a.rows).find(|&i| !a[(i, col)].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap_rows(p, rank);
            sign = -sign;
        }
        let piv = a[(rank, col)].clone();
        for i in rank + 1..a.rows {
            let lead = a[(i, col)].clone();
            for j in col + 1..a.cols {
                let num = &piv * &a[(i, j)] - &lead * &a[(rank, j)];
                let (q, r) = num.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = q;
            }
            a[(i, col)] = BigInt::zero();
        }
        prev = piv;
        rank += 1;
    }
    (rank, sign, a)
}

/// Rank over the rationals, computed exactly.
pub fn rank_over_rationals(m: &IntMatrix) -> usize {
    bareiss(m).0
}

pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if m.rows == 0 {
        return BigInt::one();
    }
    let (rank, sign, a) = bareiss(m);
    if rank < m.rows {
        return BigInt::zero();
    }
    let n = m.rows;
    a[(n - 1, n - 1)].clone() * sign
}

/// Basis of the integer right kernel `{x : m x = 0}`, as columns of the
/// returned matrix.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let mut k = IntMatrix::zeros(m.cols, m.cols - r);
    for i in 0..m.cols {
        for j in r..m.cols {
            k[(i, j - r)] = snf.v[(i, j)].clone();
        }
    }
    k
}

/// Row-style Hermite normal form of the lattice spanned by the rows:
/// echelon, positive pivots, entries above a pivot reduced into
/// `[0, pivot)`. Zero rows are dropped, so two matrices span the same
/// lattice iff their Hermite forms are equal.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut p = 0;
    for col in 0..a.cols {
        if p == a.rows {
            break;
        }
        loop {
            let best = (p..a.rows)
                .filter(|&i| !a[(i, col)].is_zero())
                .min_by_key(|&i| a[(i, col)].abs());
            let Some(b) = best else { break };
            a.swap_rows(p, b);
            let piv = a[(p, col)].clone();
            let mut done = true;
            for i in p + 1..a.rows {
                if !a[(i, col)].is_zero() {
                    let q = -a[(i, col)].div_floor(&piv);
                    a.add_row_multiple(i, p, &q);
                    done &= a[(i, col)].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if a[(p, col)].is_zero() {
            continue;
        }
        if a[(p, col)].is_negative() {
            a.negate_row(p);
        }
        let piv = a[(p, col)].clone();
        for i in 0..p {
            let q = -a[(i, col)].div_floor(&piv);
            a.add_row_multiple(i, p, &q);
        }
        p += 1;
    }
    let keep: Vec<Vec<BigInt>> = (0..p).map(|i| a.row(i).to_vec()).collect();
    IntMatrix::from_rows(a.cols, &keep)
}

/// Whether the row lattices of `a` and `b` coincide.
pub fn same_row_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    assert_eq!(a.cols, b.cols);
    hermite_normal_form(a) == hermite_normal_form(b)
}
