use std::process::ExitCode;
use std::time::{Duration, Instant};

use barbell_core::classes::{delta, delta_expanded, f_by_levels, f_closed, fk_matrix, independence_rank, w3};
use barbell_core::hexagon::{basis_change_13_to_12, hex_normal_form, orbit_of, orbit_relators, orbit_structure};
use barbell_core::intlat::{same_row_lattice, Cokernel};
use barbell_core::lambda::{cover_pullback, lambda_reduce, lambda_relator_matrix, w2_alpha, w2_theta};
use barbell_core::whitehead::{bracket, derive_relator, facet_bracket, BracketElem, DegNElem, Facet};
use barbell_core::{AlphaCombination, GClass, IntMatrix, LambdaContext, LaurentPoly1, LaurentPoly2, QuotientStructure, Sign};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: barbell_core::Error) -> String {
    e.to_string()
}

fn skew_symmetry() -> Outcome {
    for k in 2..=30 {
        for p in 1..k {
            for q in p..k {
                let s = f_closed(k, p, q).map_err(err)? + f_closed(k, q, p).map_err(err)?;
                ensure(s.is_zero(), || format!("k={} ({},{}): F(p,q)+F(q,p) = {}", k, p, q, s))?;
            }
        }
    }
    Ok(())
}

fn theta_hat_trivial() -> Outcome {
    for k in 2..=30 {
        let total: GClass = fk_matrix(k).map_err(err)?.into_iter().flatten().sum();
        ensure(total.is_zero(), || format!("k={}: sum = {}", k, total))?;
    }
    Ok(())
}

fn per_level() -> Outcome {
    for k in 2..=20 {
        for p in 1..k {
            for q in 1..k {
                ensure(f_by_levels(k, p, q).map_err(err)? == f_closed(k, p, q).map_err(err)?, || {
                    format!("k={} ({},{})", k, p, q)
                })?;
            }
        }
    }
    Ok(())
}

fn delta_expansion() -> Outcome {
    for k in 3..=30 {
        let closed = f_closed(k, k - 1, k - 2).map_err(err)?;
        ensure(closed == delta(k).map_err(err)?, || format!("delta({}) is not F(k-1,k-2)", k))?;
        ensure(closed == delta_expanded(k).map_err(err)?, || format!("k={}: {}", k, closed))?;
    }
    Ok(())
}

fn independence() -> Outcome {
    let ds: Vec<GClass> = (4..=40).map(delta).collect::<Result<_, _>>().map_err(err)?;
    let cert = independence_rank(&ds, 3).map_err(err)?;
    ensure(cert.rank == 37 && cert.count == 37, || format!("rank {} / {}", cert.rank, cert.count))
}

fn delta3_vanishing() -> Outcome {
    let nf = hex_normal_form(&w3(&delta(3).map_err(err)?, 3));
    ensure(nf.is_zero(), || format!("normal form {}", nf))
}

fn orbit_structures() -> Outcome {
    for n in 3..=6 {
        let odd = n % 2 == 1;
        let z2 = QuotientStructure::with_torsion(3, [2]);
        let cases = [
            ((0, 0), QuotientStructure::free(1)),
            ((3, 1), QuotientStructure::free(7)),
            ((5, -2), QuotientStructure::free(7)),
            ((0, 1), if odd { QuotientStructure::free(4) } else { z2.clone() }),
            ((1, 2), if odd { z2.clone() } else { QuotientStructure::free(4) }),
            ((2, 4), if odd { z2.clone() } else { QuotientStructure::free(4) }),
        ];
        for ((a, b), want) in cases {
            let got = orbit_structure(&orbit_of(a, b), n);
            ensure(got == want, || format!("orbit ({},{}) n={}: {} != {}", a, b, n, got, want))?;
        }
    }
    Ok(())
}

fn lambda_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (lo, hi) = (-20i64, 20i64);
    for w0 in -6..=6 {
        for n in 3..=6 {
            let ctx = LambdaContext::new(w0, n).map_err(err)?;
            let rel = lambda_relator_matrix(ctx, lo, hi).map_err(err)?;
            let coker = Cokernel::new(&rel);
            let vec_of = |p: &LaurentPoly1| (lo..=hi).map(|k| p.coeff(k)).collect::<Vec<BigInt>>();
            let poly_of = |v: &[BigInt]| LaurentPoly1::from_terms((lo..).zip(v.iter().cloned()));
            // keep supports where every fold partner stays inside the window
            let (elo, ehi) = (lo + 7, hi - 7);
            for i in 0..500 {
                let mut p = LaurentPoly1::zero();
                for _ in 0..rng.gen_range(0..8) {
                    p.add_term(rng.gen_range(elo..=ehi), BigInt::from(rng.gen_range(-5..=5)));
                }
                // every other sample gets a random relator combination mixed in
                let mut q = vec_of(&p);
                if i % 2 == 0 && rel.rows() > 0 {
                    for _ in 0..rng.gen_range(1..4) {
                        let r = rel.row(rng.gen_range(0..rel.rows()));
                        let c = BigInt::from(rng.gen_range(-3..=3));
                        q.iter_mut().zip(r).for_each(|(x, y)| *x += &c * y);
                    }
                }
                let (rp, rq) = (lambda_reduce(&p, ctx), lambda_reduce(&poly_of(&q), ctx));
                ensure(rp.is_zero() == coker.contains(&vec_of(&p)), || {
                    format!("W0={} n={}: membership of {} disagrees", w0, n, p)
                })?;
                let diff: Vec<BigInt> = q.iter().zip(vec_of(&p)).map(|(a, b)| a - b).collect();
                ensure((rp == rq) == coker.contains(&diff), || {
                    format!("W0={} n={}: equality test disagrees at {}", w0, n, p)
                })?;
            }
        }
    }
    Ok(())
}

fn alpha_identities() -> Outcome {
    let ctx = LambdaContext::new(1, 3).map_err(err)?;
    for i in 1..=50 {
        let a = w2_alpha(i, ctx).map_err(err)?;
        let b = w2_theta(i + 1, ctx).checked_sub(&w2_theta(i, ctx)).map_err(err)?;
        ensure(a == b, || format!("i={}: {} != {}", i, a, b))?;
    }
    let expected = lambda_reduce(&LaurentPoly1::t(2), ctx);
    let got = w2_alpha(1, ctx).map_err(err)?;
    ensure(got == expected, || format!("W2(alpha_1) = {}, expected t^2", got))?;
    let expected = lambda_reduce(&LaurentPoly1::t(3), ctx);
    let got = w2_alpha(2, ctx).map_err(err)?;
    ensure(got == expected, || format!("W2(alpha_2) = {}, expected t^3", got))
}

fn cover_rule() -> Outcome {
    for m in 1..=8 {
        for i in 1..=64 {
            let got = cover_pullback(m, &AlphaCombination::alpha(i).map_err(err)?).map_err(err)?;
            let want = if i % m == 0 {
                AlphaCombination::from_terms([(i / m, m)]).map_err(err)?
            } else {
                AlphaCombination::zero()
            };
            ensure(got == want, || format!("m={} i={}: {}", m, i, got))?;
        }
    }
    Ok(())
}

fn facets() -> Outcome {
    let gen = |i, j, e, n| DegNElem::generator(i, j, e, n).expect("valid generator");
    let br = |x: &DegNElem, y: &DegNElem| bracket(x, y).expect("same n");
    let triple = |terms: &[((i64, i64), i64)], n| BracketElem::from_triple(&LaurentPoly2::from_terms(terms.iter().copied()), n);
    for n in 3..=6 {
        let s = Sign::pow_neg_one(n - 1).to_i64();
        for a in -3..=3 {
            for b in -3..=3 {
                let displays = [
                    (Facet::T1Zero, br(&gen(2, 3, a, n), &gen(2, 3, b, n))),
                    (
                        Facet::T1EqT2,
                        &(&triple(&[((a - b, -b), -1), ((b - a, -a), s)], n) + &br(&gen(1, 3, a, n), &gen(1, 3, b, n)))
                            + &br(&gen(2, 3, a, n), &gen(2, 3, b, n)),
                    ),
                    (
                        Facet::T2EqT3,
                        &(&triple(&[((a, a - b), -1), ((b, b - a), s)], n) + &br(&gen(1, 3, a, n), &gen(1, 3, b, n)))
                            + &br(&gen(1, 2, a, n), &gen(1, 2, b, n)),
                    ),
                    (Facet::T3One, br(&gen(1, 2, a, n), &gen(1, 2, b, n))),
                ];
                for (f, want) in displays {
                    let got = facet_bracket(f, a, b, 0, n);
                    ensure(got == want, || format!("facet {} at ({},{}) n={}: {}", f, a, b, n, got))?;
                }
                // velocity degrees a1, a2 must drop out
                for vel in -3..=3 {
                    for (f, pair) in [(Facet::T1EqT2, (1u8, 2u8)), (Facet::T2EqT3, (2, 3))] {
                        let (x, y) = (facet_bracket(f, a, b, 0, n), facet_bracket(f, a, b, vel, n));
                        let same = if n % 2 == 1 { x == y } else { x.without_pairs(&[pair]) == y.without_pairs(&[pair]) };
                        ensure(same, || format!("facet {} depends on a={} at ({},{}) n={}", f, vel, a, b, n))?;
                    }
                }
            }
        }
    }
    for n in [3, 4] {
        let mut reps = std::collections::BTreeSet::new();
        for a in -8..=8 {
            for b in -8..=8 {
                reps.insert(orbit_of(a, b).rep);
            }
        }
        for (a, b) in reps {
            let o = orbit_of(a, b);
            let mut rows = vec![];
            for &(x, y) in &o.elements {
                let pushed = basis_change_13_to_12(&derive_relator(x, y, n).map_err(err)?);
                let mut row = vec![BigInt::zero(); o.len()];
                for (m, c) in pushed.terms() {
                    let j = o.index_of(m).ok_or_else(|| format!("derived relator ({},{}) leaves its orbit", x, y))?;
                    row[j] += c;
                }
                rows.push(row);
            }
            let derived = IntMatrix::from_rows(o.len(), &rows);
            ensure(same_row_lattice(&derived, &orbit_relators(&o, n)), || {
                format!("orbit ({},{}) n={}: spans differ", a, b, n)
            })?;
        }
    }
    Ok(())
}

fn basis_change_sign() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut eps = None;
    for _ in 0..100 {
        let (p, q) = (rng.gen_range(-1000..=1000), rng.gen_range(-1000..=1000));
        let got = basis_change_13_to_12(&LaurentPoly2::monomial(p - q, -q, 1));
        let s = [1i64, -1]
            .into_iter()
            .find(|s| got == LaurentPoly2::monomial(p, q, *s))
            .ok_or_else(|| format!("({},{}) maps to {}", p, q, got))?;
        ensure(*eps.get_or_insert(s) == s, || format!("sign flips at ({},{})", p, q))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("F_k skew symmetry, k in [2,30]", skew_symmetry, 10),
        ("theta-hat triviality, k in [2,30]", theta_hat_trivial, 10),
        ("per-level sums equal closed form, k in [2,20]", per_level, 30),
        ("delta_k eight-term expansion, k in [3,30]", delta_expansion, 1),
        ("independence of delta_4..delta_40 at n=3", independence, 60),
        ("delta_3 vanishes under W3", delta3_vanishing, 1),
        ("hexagon orbit structures", orbit_structures, 1),
        ("lambda closed form vs SNF oracle", lambda_oracle, 60),
        ("W2 generator identities", alpha_identities, 1),
        ("cover pull-back rule, m <= 8, i <= 64", cover_rule, 1),
        ("facet expansions and relator spans", facets, 30),
        ("basis-change sign coherence", basis_change_sign, 1),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let res = run();
        let el = t.elapsed();
        let over = el > Duration::from_secs(budget);
        let tag = if res.is_ok() && !over { "PASS" } else { "FAIL" };
        println!("[{}] {:>2} {} ({:.2} s / {} s)", tag, i + 1, name, el.as_secs_f64(), budget);
        if let Err(e) = &res {
            println!("       {}", e);
        } else if over {
            println!("       over the time budget");
        }
        if tag == "FAIL" {
            failed += 1;
        }
    }
    println!("{} / 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
