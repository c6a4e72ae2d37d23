//! Invariant suite run by `barbell selfcheck`.
//!
//! Every check is deterministic: random inputs come from a fixed-seed
//! ChaCha stream.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classes::{
    delta, delta_expanded, e, f_by_levels, f_closed, fk_matrix, gstar, hexagon_combination,
    independence_rank, w3, GClass,
};
use crate::hexagon::{
    basis_change_12_to_13, basis_change_13_to_12, hex_normal_form, hex_relator, locality_violation,
    orbit_of, orbit_relators_with, reflect, rotate, HexElement, RelatorFn,
};
use crate::intlat::{
    cokernel_structure, determinant, rank_over_rationals, same_row_lattice, smith_normal_form,
    Cokernel, IntMatrix, QuotientStructure,
};
use crate::lambda::{
    cover_pullback, lambda_reduce, lambda_relator_matrix, w2_alpha, w2_theta, AlphaCombination,
    LambdaContext,
};
use crate::laurent::{AffineMap2, LaurentPoly1, LaurentPoly2, Sign};
use crate::whitehead::{bracket, deg_n_normalize, derive_relator, facet_bracket, printed_relator, DegNElem, Facet};

const SEED: u64 = 0x0062_6172_6265_6c6c;

pub struct SelfcheckConfig {
    pub kmax: i64,
    pub relator: RelatorFn,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        SelfcheckConfig { kmax: 12, relator: hex_relator }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfcheckReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

type Check = fn(&SelfcheckConfig, &mut ChaCha8Rng) -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rand_poly1(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> LaurentPoly1 {
    let n = rng.gen_range(0..8);
    LaurentPoly1::from_terms((0..n).map(|_| (rng.gen_range(lo..=hi), rng.gen_range(-4i64..=4))))
}

fn rand_poly2(rng: &mut ChaCha8Rng, r: i64) -> LaurentPoly2 {
    let n = rng.gen_range(0..8);
    LaurentPoly2::from_terms(
        (0..n).map(|_| ((rng.gen_range(-r..=r), rng.gen_range(-r..=r)), rng.gen_range(-4i64..=4))),
    )
}

fn rand_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let (r, c) = (rng.gen_range(1..6usize), rng.gen_range(1..6usize));
    let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
    IntMatrix::from_rows(c, &rows)
}

// --- laurent -----------------------------------------------------------------

fn laurent_bar_involution(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let p = rand_poly1(rng, -20, 20);
        ensure(p.bar().bar() == p && p.bar().is_well_formed(), || format!("bar failed on {}", p))?;
    }
    Ok(())
}

fn laurent_reindex_inverse(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let r = AffineMap2::HEX_ROTATION;
    let r_inv = r.inverse().map_err(|e| e.to_string())?;
    for _ in 0..200 {
        let p = rand_poly2(rng, 20);
        let back = p
            .reindex(&r, Sign::Plus)
            .and_then(|x| x.reindex(&r_inv, Sign::Plus))
            .map_err(|e| e.to_string())?;
        ensure(back == p, || format!("reindex round trip failed on {}", p))?;
        let mut six = p.clone();
        for _ in 0..6 {
            six = six.reindex(&r, Sign::Plus).map_err(|e| e.to_string())?;
        }
        ensure(six == p, || format!("rotation does not have order 6 on {}", p))?;
    }
    Ok(())
}

// --- intlat ------------------------------------------------------------------

fn smith_factorisation(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let m = rand_matrix(rng);
        let s = smith_normal_form(&m);
        ensure(s.u.mul(&m).mul(&s.v) == s.d && s.d.is_diagonal(), || format!("U M V != D for\n{}", m))?;
        let unimodular = |x: &IntMatrix| {
            let det = determinant(x);
            det == BigInt::one() || det == -BigInt::one()
        };
        ensure(unimodular(&s.u) && unimodular(&s.v), || format!("transform not unimodular for\n{}", m))?;
        ensure(rank_over_rationals(&m) == s.rank(), || format!("rank disagrees with SNF for\n{}", m))?;
    }
    Ok(())
}

fn cokernel_row_invariance(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let m = rand_matrix(rng);
        let mut rows = m.row_vecs();
        let (i, j) = (rng.gen_range(0..rows.len()), rng.gen_range(0..rows.len()));
        match rng.gen_range(0..3) {
            0 => rows.swap(i, j),
            1 => rows[i].iter_mut().for_each(|x| *x = -x.clone()),
            _ if i != j => {
                let add = rows[j].clone();
                rows[i].iter_mut().zip(add).for_each(|(x, y)| *x += y);
            }
            _ => {}
        }
        let b = IntMatrix::from_rows(m.cols(), &rows);
        ensure(cokernel_structure(&m) == cokernel_structure(&b), || format!("structure changed for\n{}", m))?;
    }
    Ok(())
}

// --- lambda ------------------------------------------------------------------

fn lambda_oracle(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for w0 in -6..=6 {
        for n in 3..=6 {
            let ctx = LambdaContext::new(w0, n).map_err(|e| e.to_string())?;
            let coker = Cokernel::new(&lambda_relator_matrix(ctx, -20, 20).map_err(|e| e.to_string())?);
            for _ in 0..50 {
                let p = rand_poly1(rng, -10, 10);
                let v: Vec<BigInt> = (-20..=20).map(|k| p.coeff(k)).collect();
                let closed = lambda_reduce(&p, ctx);
                ensure(closed.is_zero() == coker.contains(&v), || {
                    format!("W0={} n={}: closed form and SNF disagree on {}", w0, n, p)
                })?;
                ensure(lambda_reduce(&closed.to_poly(), ctx) == closed, || {
                    format!("W0={} n={}: reduce not idempotent on {}", w0, n, p)
                })?;
            }
        }
    }
    Ok(())
}

fn alpha_theta_identity(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = LambdaContext::new(1, 3).map_err(|e| e.to_string())?;
    for i in 1..=50 {
        let a = w2_alpha(i, ctx).map_err(|e| e.to_string())?;
        let t = w2_theta(i + 1, ctx).checked_sub(&w2_theta(i, ctx)).map_err(|e| e.to_string())?;
        ensure(a == t, || format!("alpha_{} != theta_{} - theta_{}", i, i + 1, i))?;
    }
    Ok(())
}

fn cover_composition(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let terms: Vec<(i64, i64)> = (0..rng.gen_range(0..6))
            .map(|_| (rng.gen_range(1..200), rng.gen_range(-5..=5)))
            .collect();
        let x = AlphaCombination::from_terms(terms).map_err(|e| e.to_string())?;
        let (a, b) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let lhs = cover_pullback(a * b, &x).map_err(|e| e.to_string())?;
        let rhs = cover_pullback(a, &cover_pullback(b, &x).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(lhs == rhs, || format!("cover {}*{} does not compose on {}", a, b, x))?;
    }
    Ok(())
}

// --- whitehead ---------------------------------------------------------------

fn cyclic_identity(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 3..=6 {
        let w = |i, j| deg_n_normalize(i, j, [0; 3], n).expect("valid indices");
        let b = |x: &DegNElem, y: &DegNElem| bracket(x, y).expect("same n");
        let a = b(&w(1, 2), &w(2, 3));
        ensure(a == b(&w(2, 3), &w(3, 1)) && a == b(&w(3, 1), &w(1, 2)), || {
            format!("cyclic identity fails for n={}", n)
        })?;
    }
    Ok(())
}

fn t_action_compatibility(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let n = rng.gen_range(3..=6);
        let rand_elem = |rng: &mut ChaCha8Rng| {
            let mut x = DegNElem::zero(n);
            for _ in 0..rng.gen_range(0..4) {
                let (i, j) = (rng.gen_range(1..=3u8), rng.gen_range(1..=3u8));
                let exps = [rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
                x.add_scaled(&deg_n_normalize(i, j, exps, n).expect("valid"), &BigInt::from(rng.gen_range(-3..=3)));
            }
            x
        };
        let (x, y) = (rand_elem(rng), rand_elem(rng));
        let m = [rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-5..=5)];
        let lhs = bracket(&x.act(m), &y.act(m)).map_err(|e| e.to_string())?;
        let rhs = bracket(&x, &y).map_err(|e| e.to_string())?.act(m);
        ensure(lhs == rhs, || format!("t-action does not commute with bracket: [{}, {}]", x, y))?;
    }
    Ok(())
}

fn velocity_independence(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 3..=6 {
        for vel in -3..=3 {
            for (a, b) in [(1, 0), (2, -3), (0, 4), (-2, -1)] {
                for (f, pair) in [(Facet::T1EqT2, (1, 2)), (Facet::T2EqT3, (2, 3))] {
                    let (mut base, mut moved) = (facet_bracket(f, a, b, 0, n), facet_bracket(f, a, b, vel, n));
                    if n % 2 == 0 {
                        // the velocity term survives only on the collapsing pair
                        base = base.without_pairs(&[pair]);
                        moved = moved.without_pairs(&[pair]);
                    }
                    ensure(base == moved, || format!("facet {} depends on velocity {} (n={})", f, vel, n))?;
                }
            }
        }
    }
    Ok(())
}

fn derived_relators(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 3..=6 {
        for a in -6..=6 {
            for b in -6..=6 {
                let r = derive_relator(a, b, n).map_err(|e| e.to_string())?;
                ensure(r == printed_relator(a, b, n), || format!("derived relator differs at ({},{}) n={}", a, b, n))?;
            }
        }
    }
    Ok(())
}

// --- hexagon -----------------------------------------------------------------

fn relator_locality(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for n in [3, 4] {
        if let Some((p, q)) = locality_violation(cfg.relator, n, -10, 10) {
            return Err(format!("relator at ({},{}) leaves its orbit (n={})", p, q, n));
        }
    }
    Ok(())
}

fn dihedral_action(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..1000 {
        let p = (rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
        let mut r6 = p;
        for _ in 0..6 {
            r6 = rotate(r6);
        }
        ensure(r6 == p && reflect(reflect(p)) == p, || format!("group relations fail at {:?}", p))?;
        ensure(reflect(rotate(reflect(p))) == rotate(rotate(rotate(rotate(rotate(p))))), || {
            format!("s r s != r^-1 at {:?}", p)
        })?;
        let q = (rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
        let (a, b) = (orbit_of(p.0, p.1), orbit_of(q.0, q.1));
        let disjoint = a.elements.iter().all(|x| !b.contains(*x));
        ensure(a == b || disjoint, || format!("orbits of {:?} and {:?} overlap", p, q))?;
    }
    Ok(())
}

fn orbit_structures(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    let z2 = |free| QuotientStructure::with_torsion(free, [2]);
    let cases = [
        ((0, 0), 3, QuotientStructure::free(1)),
        ((0, 0), 4, QuotientStructure::free(1)),
        ((3, 1), 3, QuotientStructure::free(7)),
        ((3, 1), 4, QuotientStructure::free(7)),
        ((0, 1), 3, QuotientStructure::free(4)),
        ((0, 1), 4, z2(3)),
        ((1, 2), 3, z2(3)),
        ((1, 2), 4, QuotientStructure::free(4)),
    ];
    for ((a, b), n, want) in cases {
        let m = orbit_relators_with(&orbit_of(a, b), n, cfg.relator).map_err(|e| e.to_string())?;
        let got = cokernel_structure(&m);
        ensure(got == want, || format!("orbit ({},{}) n={}: got {}, want {}", a, b, n, got, want))?;
    }
    for n in [3, 4] {
        for a in -6..=6 {
            for b in -6..=6 {
                let m = orbit_relators_with(&orbit_of(a, b), n, cfg.relator).map_err(|e| e.to_string())?;
                let s = cokernel_structure(&m);
                ensure(s.torsion.iter().all(|t| *t == BigInt::from(2)), || {
                    format!("orbit ({},{}) n={} has torsion other than 2: {}", a, b, n, s)
                })?;
            }
        }
    }
    Ok(())
}

fn normal_form_soundness(cfg: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..100 {
        let n = rng.gen_range(3..=4);
        let x = rand_poly2(rng, 5);
        // x plus a random combination of relators must have the same normal form
        let mut y = x.clone();
        for _ in 0..rng.gen_range(0..4) {
            let (p, q) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            let c = BigInt::from(rng.gen_range(-3..=3));
            y += &(cfg.relator)(p, q, n).scale(&c);
        }
        let (nx, ny) = (hex_normal_form(&HexElement::new(x.clone(), n)), hex_normal_form(&HexElement::new(y, n)));
        ensure(nx == ny, || format!("normal form moved by relators on {} (n={})", x, n))?;
    }
    Ok(())
}

fn relator_family_equivalence(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for n in [3, 4] {
        for a in -4..=4 {
            for b in -4..=4 {
                let o = orbit_of(a, b);
                if o.rep != (a, b) {
                    continue;
                }
                let mut rows = vec![];
                for &(x, y) in &o.elements {
                    let pushed = basis_change_13_to_12(&derive_relator(x, y, n).map_err(|e| e.to_string())?);
                    let mut row = vec![BigInt::zero(); o.len()];
                    for (m, c) in pushed.terms() {
                        let j = o.index_of(m).ok_or_else(|| format!("derived relator at ({},{}) leaves orbit", x, y))?;
                        row[j] += c;
                    }
                    rows.push(row);
                }
                let derived = IntMatrix::from_rows(o.len(), &rows);
                let hard = orbit_relators_with(&o, n, cfg.relator).map_err(|e| e.to_string())?;
                ensure(same_row_lattice(&derived, &hard), || {
                    format!("derived and hexagon relators span different lattices on orbit ({},{}) n={}", a, b, n)
                })?;
            }
        }
    }
    Ok(())
}

fn basis_change_coherence(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut eps: Option<i64> = None;
    for _ in 0..100 {
        let (p, q) = (rng.gen_range(-50..=50), rng.gen_range(-50..=50));
        let moved = basis_change_13_to_12(&LaurentPoly2::monomial(p - q, -q, 1));
        let s = [1i64, -1]
            .into_iter()
            .find(|s| moved == LaurentPoly2::monomial(p, q, *s))
            .ok_or_else(|| format!("basis change of ({},{}) is not a signed monomial t1^{} t2^{}", p, q, p, q))?;
        if *eps.get_or_insert(s) != s {
            return Err(format!("sign flips at ({},{})", p, q));
        }
        let x = rand_poly2(rng, 20);
        ensure(basis_change_12_to_13(&basis_change_13_to_12(&x)) == x, || format!("round trip fails on {}", x))?;
    }
    Ok(())
}

// --- classes -----------------------------------------------------------------

fn skew_symmetry(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 2..=cfg.kmax {
        let m = fk_matrix(k).map_err(|e| e.to_string())?;
        for (p, row) in m.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                ensure((x + &m[q][p]).is_zero(), || format!("F_{}({},{}) not skew", k, p + 1, q + 1))?;
            }
        }
    }
    Ok(())
}

fn theta_hat_trivial(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 2..=cfg.kmax {
        let total: GClass = fk_matrix(k).map_err(|e| e.to_string())?.into_iter().flatten().sum();
        ensure(total.is_zero(), || format!("sum of F_{} entries is {}", k, total))?;
    }
    Ok(())
}

fn levels_agree(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 2..=cfg.kmax {
        for p in 1..k {
            for q in 1..k {
                let by_levels = f_by_levels(k, p, q).map_err(|e| e.to_string())?;
                let closed = f_closed(k, p, q).map_err(|e| e.to_string())?;
                ensure(by_levels == closed, || format!("level sum differs from closed form at k={} ({},{})", k, p, q))?;
            }
        }
    }
    Ok(())
}

fn delta_formula(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for k in 3..=cfg.kmax.max(3) {
        let a = delta(k).map_err(|e| e.to_string())?;
        let b = delta_expanded(k).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("delta_{} differs from its eight-term expansion", k))?;
    }
    Ok(())
}

fn symmetric_g(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    for p in -8..=8 {
        for q in -8..=8 {
            let gap = &e(p, q) - &(&gstar(p, -q) - &gstar(-q, p));
            ensure(gap == hexagon_combination(p, -q, 3), || format!("E/G* gap at ({},{}) is {}", p, q, gap))?;
        }
    }
    Ok(())
}

fn w3_factors_through_hexagon(_: &SelfcheckConfig, rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let (p, q) = (rng.gen_range(-30..=30), rng.gen_range(-30..=30));
        for n in [3, 4] {
            let x = w3(&hexagon_combination(p, q, n), n);
            ensure(hex_normal_form(&x).is_zero(), || format!("hexagon combination ({},{}) survives for n={}", p, q, n))?;
        }
    }
    Ok(())
}

fn delta3_vanishes(_: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    let d3 = delta(3).map_err(|e| e.to_string())?;
    ensure(hex_normal_form(&w3(&d3, 3)).is_zero(), || "W3(delta_3) is nonzero".into())
}

fn delta_independence(cfg: &SelfcheckConfig, _: &mut ChaCha8Rng) -> Result<(), String> {
    let kmax = cfg.kmax.max(4);
    let ds: Vec<GClass> = (4..=kmax).map(delta).collect::<crate::Result<_>>().map_err(|e| e.to_string())?;
    let cert = independence_rank(&ds, 3).map_err(|e| e.to_string())?;
    ensure(cert.is_independent(), || format!("rank {} / {}", cert.rank, cert.count))
}

const CHECKS: &[(&str, Check)] = &[
    ("laurent bar involution", laurent_bar_involution),
    ("laurent reindex inverse", laurent_reindex_inverse),
    ("smith form factorisation", smith_factorisation),
    ("cokernel row-operation invariance", cokernel_row_invariance),
    ("lambda oracle agreement", lambda_oracle),
    ("alpha-theta identity", alpha_theta_identity),
    ("cover pull-back composition", cover_composition),
    ("whitehead cyclic identity", cyclic_identity),
    ("whitehead t-action compatibility", t_action_compatibility),
    ("facet velocity independence", velocity_independence),
    ("derived relators", derived_relators),
    ("relator orbit-locality", relator_locality),
    ("dihedral action and orbit partition", dihedral_action),
    ("orbit structures", orbit_structures),
    ("normal-form soundness", normal_form_soundness),
    ("relator family equivalence", relator_family_equivalence),
    ("basis-change sign coherence", basis_change_coherence),
    ("F_k skew symmetry", skew_symmetry),
    ("theta-hat triviality", theta_hat_trivial),
    ("per-level agreement", levels_agree),
    ("delta expansion", delta_formula),
    ("symmetric-G compatibility", symmetric_g),
    ("W3 factors through hexagon relation", w3_factors_through_hexagon),
    ("delta_3 vanishing", delta3_vanishes),
    ("delta independence", delta_independence),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run(cfg: &SelfcheckConfig) -> SelfcheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let checks = CHECKS
        .iter()
        .map(|(name, check)| {
            let t = Instant::now();
            let res = check(cfg, &mut rng);
            CheckOutcome {
                name,
                passed: res.is_ok(),
                detail: res.err().unwrap_or_default(),
                millis: t.elapsed().as_millis(),
            }
        })
        .collect();
    SelfcheckReport { checks }
}
