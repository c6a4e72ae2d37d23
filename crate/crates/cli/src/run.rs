use std::fmt::{self, Write};

use barbell_core::classes::{delta, delta_expanded, f_level, fk_matrix, independence_rank, twist_class, w3};
use barbell_core::hexagon::{basis_change, hex_normal_form, hex_relator, orbit_of, orbit_structure, BasisDirection};
use barbell_core::lambda::{cover_kernel_iterate, cover_pullback, lambda_reduce, lambda_structure};
use barbell_core::selfcheck::{self, SelfcheckConfig};
use barbell_core::whitehead::{derive_r_relators, facet_bracket, Facet};
use barbell_core::{
    AlphaCombination, Error, GClass, HexElement, LambdaContext, LaurentPoly, LaurentPoly1, LaurentPoly2,
};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::args::*;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invariant(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Invariant(_) => 3,
            Failure::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "invalid input: {}", m),
            Failure::Invariant(m) => write!(f, "invariant violated: {}", m),
            Failure::Io(m) => write!(f, "i/o error: {}", m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unnormalizable(_) | Error::NotOrbitLocal { .. } => Failure::Invariant(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Res<T> = Result<T, Failure>;

/// One result in every output format; CSV only where a table makes sense.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Report { json, text: text.into(), csv: None }
    }

    fn render(self, format: Format) -> Res<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("serializable") + "\n"),
            Format::Text => {
                let mut t = self.text;
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                Ok(t)
            }
            Format::Csv => self
                .csv
                .ok_or_else(|| Failure::Usage("csv output is only available for fk".into())),
        }
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn parse_window(s: &str) -> Res<(i64, i64)> {
    let bad = || Failure::Usage(format!("window must be LO,HI, got {:?}", s));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(Error::EmptyWindow { lo, hi }.into());
    }
    Ok((lo, hi))
}

fn parse_csv(name: &str, s: &str) -> Res<Vec<i64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("--{} must be comma-separated integers, got {:?}", name, s)))
        })
        .collect()
}

fn parse_poly1(s: &str) -> Res<LaurentPoly1> {
    match LaurentPoly::from_json(s)? {
        LaurentPoly::One(p) => Ok(p),
        LaurentPoly::Two(_) => Err(Failure::Usage("expected a one-variable polynomial (keys e, c)".into())),
    }
}

fn parse_poly2(s: &str) -> Res<LaurentPoly2> {
    match LaurentPoly::from_json(s)? {
        LaurentPoly::Two(p) => Ok(p),
        LaurentPoly::One(p) if p.is_zero() => Ok(LaurentPoly2::zero()),
        LaurentPoly::One(_) => Err(Failure::Usage("expected a two-variable polynomial (keys e1, e2, c)".into())),
    }
}

fn parse_alpha(s: &str) -> Res<AlphaCombination> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("malformed alpha combination: {}", e)))
}

pub fn dispatch(cli: &Cli) -> Res<String> {
    let report = match &cli.command {
        Command::Lambda(c) => lambda(c)?,
        Command::Cover(c) => cover(c)?,
        Command::Whitehead(c) => whitehead(c)?,
        Command::Orbit(a) => orbit(a)?,
        Command::Hex(c) => hex(c)?,
        Command::Fk(a) => fk(a)?,
        Command::Delta(a) => delta_cmd(a)?,
        Command::Twist(a) => {
            let x = twist_class(a.k, &parse_csv("v", &a.v)?, &parse_csv("w", &a.w)?)?;
            Report::new(to_json(&x), x.to_string())
        }
        Command::Independence(a) => independence(a)?,
        Command::Selfcheck(a) => return selfcheck_cmd(a, cli.format),
    };
    report.render(cli.format)
}

fn lambda(c: &LambdaCmd) -> Res<Report> {
    Ok(match c {
        LambdaCmd::Reduce { w0, n, poly } => {
            let ctx = LambdaContext::new(*w0, *n)?;
            let x = lambda_reduce(&parse_poly1(poly)?, ctx);
            Report::new(to_json(&x), x.to_string())
        }
        LambdaCmd::Structure { w0, n, window } => {
            let ctx = LambdaContext::new(*w0, *n)?;
            let (lo, hi) = parse_window(window)?;
            let s = lambda_structure(ctx, lo, hi)?;
            let gens = ctx.free_generators(lo, hi);
            // exponents whose fold partner falls outside the window stay free here
            let edge: Vec<i64> = (lo..=hi)
                .filter(|&k| 2 * k < w0 - 1 && !ctx.is_killed(k) && !(lo..=hi).contains(&(w0 - 1 - k)))
                .collect();
            let monos = |ks: &[i64]| ks.iter().map(|k| format!("t^{}", k)).collect::<Vec<_>>().join(" ");
            let mut text = format!("structure   {}\n", s);
            let _ = writeln!(text, "generators  {}", monos(&gens));
            if !edge.is_empty() {
                let _ = writeln!(text, "edge        {}", monos(&edge));
            }
            if let Some(e) = ctx.fixed_exponent().filter(|_| ctx.has_torsion()) {
                let _ = writeln!(text, "torsion     t^{} (order 2)", e);
            }
            Report::new(
                json!({"w0": w0, "n": n, "window": [lo, hi], "structure": s, "free_generators": gens, "edge_generators": edge}),
                text,
            )
        }
    })
}

fn cover(c: &CoverCmd) -> Res<Report> {
    Ok(match c {
        CoverCmd::Apply { m, alpha } => {
            let x = cover_pullback(*m, &parse_alpha(alpha)?)?;
            Report::new(to_json(&x), x.to_string())
        }
        CoverCmd::Kernel { m, depth, alpha } => {
            let x = parse_alpha(alpha)?;
            let killed = cover_kernel_iterate(&x, *m, *depth)?;
            let text = if killed {
                format!("annihilated within {} pull-backs", depth)
            } else {
                format!("survives {} pull-backs", depth)
            };
            Report::new(json!({"m": m, "depth": depth, "annihilated": killed}), text)
        }
    })
}

fn whitehead(c: &WhiteheadCmd) -> Res<Report> {
    Ok(match c {
        WhiteheadCmd::Facet { facet, alpha, beta, n, velocity } => {
            let f: Facet = facet.parse()?;
            if *n < 3 {
                return Err(Error::DimensionTooSmall(*n).into());
            }
            let x = facet_bracket(f, *alpha, *beta, *velocity, *n);
            Report::new(
                json!({"facet": f.label(), "alpha": alpha, "beta": beta, "n": n, "image": to_json(&x)}),
                x.to_string(),
            )
        }
        WhiteheadCmd::Relators { n, window } => {
            let (lo, hi) = parse_window(window)?;
            let rels = derive_r_relators(*n, lo, hi)?;
            let mut text = String::new();
            let mut rows = vec![];
            for ((a, b), r) in &rels {
                let _ = writeln!(text, "R({},{}) = {}", a, b, r.display_with("t1", "t3"));
                rows.push(json!({"alpha": a, "beta": b, "relator": to_json(r)}));
            }
            Report::new(json!({"n": n, "window": [lo, hi], "relators": rows}), text)
        }
    })
}

fn orbit(a: &OrbitArgs) -> Res<Report> {
    if let Some(OrbitCmd::Structure { alpha, beta, n }) = &a.command {
        if *n < 3 {
            return Err(Error::DimensionTooSmall(*n).into());
        }
        let o = orbit_of(*alpha, *beta);
        let s = orbit_structure(&o, *n);
        return Ok(Report::new(
            json!({"rep": o.rep, "size": o.len(), "n": n, "structure": s}),
            format!("orbit of ({},{}): {} elements, quotient {}", o.rep.0, o.rep.1, o.len(), s),
        ));
    }
    let (Some(alpha), Some(beta)) = (a.alpha, a.beta) else {
        return Err(Failure::Usage("orbit needs --alpha and --beta".into()));
    };
    let o = orbit_of(alpha, beta);
    let elems: Vec<String> = o.elements.iter().map(|(x, y)| format!("({},{})", x, y)).collect();
    Ok(Report::new(
        to_json(&o),
        format!("rep ({},{})  type {}  size {}\n{}", o.rep.0, o.rep.1, o.otype, o.len(), elems.join(" ")),
    ))
}

fn hex(c: &HexCmd) -> Res<Report> {
    Ok(match c {
        HexCmd::Reduce { n, poly } => {
            if *n < 3 {
                return Err(Error::DimensionTooSmall(*n).into());
            }
            let nf = hex_normal_form(&HexElement::new(parse_poly2(poly)?, *n));
            Report::new(to_json(&nf), nf.to_string())
        }
        HexCmd::ChangeBasis { dir, poly } => {
            let d: BasisDirection = dir.parse()?;
            let p = basis_change(&parse_poly2(poly)?, d);
            let text = match d {
                BasisDirection::To12 => p.display_with("t1", "t2").to_string(),
                BasisDirection::To13 => p.display_with("t1", "t3").to_string(),
            };
            Report::new(to_json(&p), text)
        }
    })
}

fn fk(a: &FkArgs) -> Res<Report> {
    let k = a.k;
    let m = fk_matrix(k)?;
    let mut text = String::new();
    let mut json = serde_json::Map::new();
    json.insert("k".into(), json!(k));
    let mut csv = String::from("k,p,q,level,gp,gq,c\n");

    if a.check_skew {
        let mut bad = vec![];
        for (p, row) in m.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                if !(x + &m[q][p]).is_zero() {
                    bad.push((p + 1, q + 1));
                }
            }
        }
        if let Some((p, q)) = bad.first() {
            return Err(Failure::Invariant(format!("F_{} is not skew symmetric at ({},{})", k, p, q)));
        }
        text.push_str("skew: OK\n");
        json.insert("skew".into(), json!("OK"));
    }
    if a.sum {
        let total: GClass = m.iter().flatten().cloned().sum();
        let _ = writeln!(text, "sum: {}", total);
        json.insert("sum".into(), to_json(&total));
    }
    if a.per_level {
        let mut levels = vec![];
        for p in 1..k {
            for q in 1..k {
                for l in 1..k {
                    let x = f_level(k, l, p, q)?;
                    if x.is_zero() {
                        continue;
                    }
                    let _ = writeln!(text, "L={} F({},{}) += {}", l, p, q, x);
                    for ((gp, gq), c) in x.terms() {
                        let _ = writeln!(csv, "{},{},{},{},{},{},{}", k, p, q, l, gp, gq, c);
                    }
                    levels.push(json!({"level": l, "p": p, "q": q, "class": to_json(&x)}));
                }
            }
        }
        json.insert("levels".into(), Value::Array(levels));
    } else {
        for (pi, row) in m.iter().enumerate() {
            for (qi, x) in row.iter().enumerate() {
                for ((gp, gq), c) in x.terms() {
                    let _ = writeln!(csv, "{},{},{},,{},{},{}", k, pi + 1, qi + 1, gp, gq, c);
                }
            }
        }
    }
    if !a.check_skew && !a.sum && !a.per_level {
        for (pi, row) in m.iter().enumerate() {
            for (qi, x) in row.iter().enumerate() {
                let _ = writeln!(text, "F({},{}) = {}", pi + 1, qi + 1, x);
            }
        }
    }
    json.insert(
        "matrix".into(),
        Value::Array(m.iter().map(|row| Value::Array(row.iter().map(to_json).collect())).collect()),
    );
    Ok(Report { json: Value::Object(json), text, csv: Some(csv) })
}

fn delta_cmd(a: &DeltaArgs) -> Res<Report> {
    let x = if a.expand { delta_expanded(a.k)? } else { delta(a.k)? };
    if !a.w3 {
        return Ok(Report::new(to_json(&x), x.to_string()));
    }
    if a.n < 3 {
        return Err(Error::DimensionTooSmall(a.n).into());
    }
    let nf = hex_normal_form(&w3(&x, a.n));
    let text = format!("delta_{} = {}\nW3 normal form (n={}): {}", a.k, x, a.n, nf);
    Ok(Report::new(json!({"k": a.k, "n": a.n, "class": to_json(&x), "w3": to_json(&nf)}), text))
}

fn independence(a: &IndependenceArgs) -> Res<Report> {
    if a.kmin < 3 || a.kmin > a.kmax {
        return Err(Failure::Usage(format!("need 3 <= kmin <= kmax, got kmin={} kmax={}", a.kmin, a.kmax)));
    }
    let ds: Vec<GClass> = (a.kmin..=a.kmax).map(delta).collect::<Result<_, _>>()?;
    let cert = independence_rank(&ds, a.n)?;
    let verdict = if cert.is_independent() { "independent" } else { "dependent" };
    Ok(Report::new(
        json!({"kmin": a.kmin, "kmax": a.kmax, "n": a.n, "verdict": verdict, "certificate": to_json(&cert)}),
        format!("rank {} / {}: {}", cert.rank, cert.count, verdict),
    ))
}

/// Test fixture for `--inject-fault relator-table`: one stray monomial per relator.
fn corrupted_relator(p: i64, q: i64, n: i64) -> LaurentPoly2 {
    let mut r = hex_relator(p, q, n);
    r.add_term((p + 1, q), BigInt::from(1));
    r
}

fn selfcheck_cmd(a: &SelfcheckArgs, format: Format) -> Res<String> {
    if a.kmax < 4 {
        return Err(Failure::Usage(format!("--kmax must be at least 4, got {}", a.kmax)));
    }
    let relator = match a.inject_fault {
        Some(Fault::RelatorTable) => corrupted_relator,
        None => hex_relator,
    };
    let report = selfcheck::run(&SelfcheckConfig { kmax: a.kmax, relator });
    if let Some(f) = report.first_failure() {
        return Err(Failure::Invariant(format!("{}: {}", f.name, f.detail)));
    }
    let mut text = String::new();
    for c in &report.checks {
        let _ = writeln!(text, "[PASS] {} ({} ms)", c.name, c.millis);
    }
    let _ = writeln!(text, "{} checks passed", report.checks.len());
    // timings vary between runs; keep them out of the JSON contract
    let names: Vec<&str> = report.checks.iter().map(|c| c.name).collect();
    Report::new(json!({"kmax": a.kmax, "passed": names}), text).render(format)
}
