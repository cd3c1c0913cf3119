//! The invariant suite behind `fanocalc verify`.
//!
//! Every check either passes or reports the expected and actual values. The
//! randomized checks draw from a seeded generator, so a run is reproducible.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::chow::{
    basis_map_a, basis_map_b, derived_context, intersection_degree, lh_to_minus_k_h, reduce, BasisMap, RawPoly,
    RingCtx, RingElem,
};
use crate::classify::{
    enumerate_congruences, enumerate_type_c, enumerate_type_d, enumerate_type_p, exclude_1_4, exclude_2_1,
    family_table, to_csv, CongruenceTuple, WitnessValue,
};
use crate::context_file::ContextFile;
use crate::dataset::Dataset;
use crate::exact::{arg_less_than, cos_sq_pi_over, int, rat, tan_sq_pi_over, QuadNum, Rat};
use crate::expr::{evaluate, parse_str, Expr};
use crate::slope::{
    adjunction_check, boundary_delta, check_rho_tau, kprime_degree_formulas, solve_nu_prime, InvariantTuple, Kind,
};

pub const DEFAULT_SEED: u64 = 0x5eed_fa40;

/// Golden tables, transcribed by hand.
pub const GOLDEN_C: [(u32, &str); 3] = [
    (2, include_str!("../golden/type_c_n2.csv")),
    (3, include_str!("../golden/type_c_n3.csv")),
    (5, include_str!("../golden/type_c_n5.csv")),
];

/// The bundled context files, by file name.
pub const CONTEXTS: [(&str, &str); 6] = [
    ("p2.ctx", include_str!("../../../contexts/p2.ctx")),
    ("v4-3.ctx", include_str!("../../../contexts/v4-3.ctx")),
    ("q3.ctx", include_str!("../../../contexts/q3.ctx")),
    ("v4-5.ctx", include_str!("../../../contexts/v4-5.ctx")),
    ("w36.ctx", include_str!("../../../contexts/w36.ctx")),
    ("w36-13.ctx", include_str!("../../../contexts/w36-13.ctx")),
];

/// The raw type-D table as `(n, i, τ, c₁, c₂, d, d′, τ′, i′)`.
pub const TYPE_D_TABLE: [[i64; 9]; 4] = [
    [2, 3, 2, 0, 1, 1, 2, 1, 3],
    [3, 2, 1, -1, 1, 3, 1, 2, 4],
    [4, 2, 1, -1, 1, 3, 1, 3, 5],
    [4, 4, 3, -1, 1, 1, 3, 1, 3],
];

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    /// What the check is about, printed on failure.
    pub anchor: &'static str,
    pub result: Result<String, String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

fn diff<T: std::fmt::Debug + PartialEq>(expected: T, got: T) -> Result<String, String> {
    if expected == got {
        Ok(format!("{got:?}"))
    } else {
        Err(format!("expected {expected:?}, got {got:?}"))
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

// ---- Random inputs ----

pub fn small_rat(rng: &mut StdRng) -> Rat {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn negative_rat(rng: &mut StdRng) -> Rat {
    rat(-rng.gen_range(1..=12), rng.gen_range(1..=4))
}

pub fn random_ctx(rng: &mut StdRng) -> Arc<RingCtx> {
    let n = rng.gen_range(2..=6);
    let deg = int(rng.gen_range(1..=36));
    RingCtx::new(n, ("G1", "G2"), small_rat(rng), small_rat(rng), deg).expect("valid random context")
}

pub fn random_raw(rng: &mut StdRng, n: u32) -> RawPoly {
    let mut p = RawPoly::new();
    for _ in 0..rng.gen_range(0..=4) {
        let a = rng.gen_range(0..=4);
        let b = rng.gen_range(0..=n + 1);
        *p.entry((a, b)).or_insert_with(Rat::zero) += small_rat(rng);
    }
    p
}

pub fn raw_add(p: &RawPoly, q: &RawPoly) -> RawPoly {
    let mut out = p.clone();
    for (k, v) in q {
        *out.entry(*k).or_insert_with(Rat::zero) += v;
    }
    out
}

pub fn raw_mul(p: &RawPoly, q: &RawPoly) -> RawPoly {
    let mut out = RawPoly::new();
    for (&(a, b), x) in p {
        for (&(c, d), y) in q {
            *out.entry((a + c, b + d)).or_insert_with(Rat::zero) += x * y;
        }
    }
    out
}

pub fn random_quad(rng: &mut StdRng, delta: &Rat) -> QuadNum {
    QuadNum::new(small_rat(rng), small_rat(rng), delta.clone()).expect("negative discriminant")
}

/// A random expression over the given symbols, with nonnegative literals.
pub fn random_expr(rng: &mut StdRng, symbols: &[&str], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.5) {
            Expr::Sym(symbols[rng.gen_range(0..symbols.len())].to_string())
        } else {
            Expr::Num(rat(rng.gen_range(0..=9), rng.gen_range(1..=3)))
        };
    }
    let op = rng.gen_range(0..6);
    let a = Box::new(random_expr(rng, symbols, depth - 1));
    match op {
        0 => Expr::Neg(a),
        1 => Expr::Add(a, Box::new(random_expr(rng, symbols, depth - 1))),
        2 => Expr::Sub(a, Box::new(random_expr(rng, symbols, depth - 1))),
        3 => Expr::Mul(a, Box::new(random_expr(rng, symbols, depth - 1))),
        4 => Expr::Div(a, Box::new(Expr::Num(int(rng.gen_range(1..=5))))),
        _ => Expr::Pow(a, rng.gen_range(0..=3)),
    }
}

// ---- Checks ----

struct Suite {
    checks: Vec<Check>,
}

impl Suite {
    fn add(&mut self, module: &'static str, name: &'static str, anchor: &'static str, result: Result<String, String>) {
        self.checks.push(Check {
            module,
            name,
            anchor,
            result,
        });
    }
}

fn trials(n: usize, what: &str) -> Result<String, String> {
    Ok(format!("{n} {what}"))
}

fn exact_checks(s: &mut Suite, rng: &mut StdRng) {
    let pow = (|| {
        for _ in 0..200 {
            let delta = negative_rat(rng);
            let z = random_quad(rng, &delta);
            let (a, b) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
            ensure(z.pow(a + b) == &z.pow(a) * &z.pow(b), || {
                format!("z = {z:?}, a = {a}, b = {b}")
            })?;
            let w = random_quad(rng, &delta);
            ensure((&z * &w).norm() == z.norm() * w.norm(), || {
                format!("norm of {z:?} * {w:?}")
            })?;
        }
        trials(200, "random pairs")
    })();
    s.add(
        "exact",
        "power and norm multiplicativity",
        "arithmetic in Q(sqrt Delta)",
        pow,
    );

    let anti = (|| {
        let mut seen = 0;
        while seen < 200 {
            let delta = negative_rat(rng);
            let z = random_quad(rng, &delta);
            if z.im_coeff().is_negative() || z.is_zero() {
                continue;
            }
            seen += 1;
            let flags: Vec<bool> = (2..=12)
                .map(|q| arg_less_than(&z, q).expect("upper half plane"))
                .collect();
            ensure(flags.windows(2).all(|w| w[0] || !w[1]), || format!("{z:?}: {flags:?}"))?;
        }
        trials(seen, "points in the upper half plane")
    })();
    s.add(
        "exact",
        "arg_less_than antitone in q",
        "exact comparison of arguments",
        anti,
    );

    let niven = diff(
        vec![
            Some(int(0)),
            Some(rat(1, 4)),
            Some(rat(1, 2)),
            None,
            Some(rat(3, 4)),
            None,
        ],
        (2..=7).map(cos_sq_pi_over).collect(),
    )
    .and_then(|_| {
        diff(
            vec![Some(int(3)), Some(int(1)), Some(rat(1, 3))],
            [3, 4, 6].map(tan_sq_pi_over).to_vec(),
        )
    });
    s.add("exact", "rational cos^2 and tan^2 values", "Niven's theorem", niven);

    let boundary = (|| {
        for n in [2, 3, 5] {
            for tau in 1..=4 {
                let delta = boundary_delta(n, &int(tau)).expect("rational tangent");
                let z = QuadNum::shifted_root(int(tau), delta).expect("negative");
                ensure(z.pow(n + 1).is_negative_real(), || format!("n = {n}, tau = {tau}"))?;
            }
        }
        trials(12, "boundary discriminants")
    })();
    s.add(
        "exact",
        "boundary discriminant gives a negative real power",
        "arg(tau + sqrt Delta) = pi/(n+1)",
        boundary,
    );
}

fn chow_checks(s: &mut Suite, rng: &mut StdRng) {
    let ring = (|| {
        for _ in 0..1000 {
            let ctx = random_ctx(rng);
            let (p, q) = (random_raw(rng, ctx.n()), random_raw(rng, ctx.n()));
            let (rp, rq) = (reduce(&p, &ctx), reduce(&q, &ctx));
            ensure(reduce(&rp.to_raw(), &ctx) == rp, || format!("idempotence for {p:?}"))?;
            ensure(reduce(&raw_add(&p, &q), &ctx) == &rp + &rq, || {
                format!("linearity for {p:?}, {q:?}")
            })?;
            ensure(reduce(&raw_mul(&p, &q), &ctx) == &rp * &rq, || {
                format!("multiplicativity for {p:?}, {q:?}")
            })?;
        }
        trials(1000, "random contexts")
    })();
    s.add(
        "chow",
        "reduce is idempotent, linear and multiplicative",
        "normal form modulo the Chern-Wu relation",
        ring,
    );

    let chern_wu = (|| {
        for _ in 0..20 {
            let n = rng.gen_range(2..=7);
            let c1 = -rng.gen_range(0..=1);
            let delta = negative_rat(rng);
            let c2 = (int(c1 * c1) - &delta) / int(4);
            let ctx = RingCtx::from_chern(n, int(c1), c2, int(rng.gen_range(1..=20))).map_err(|e| e.to_string())?;
            let k = RingElem::linear(&ctx, int(-2), int(c1));
            let h = RingElem::g2(&ctx);
            ensure(&k * &k == (&h * &h).scale(&delta), || {
                format!("n = {n}, c1 = {c1}, Delta = {delta}")
            })?;
        }
        trials(20, "random contexts")
    })();
    s.add("chow", "K^2 = Delta H^2", "Chern-Wu relation", chern_wu);

    let roundtrip = (|| {
        let mut count = 0;
        for _ in 0..200 {
            let (nu, nu_p, mu) = (rng.gen_range(1..=6), rng.gen_range(1..=6), rng.gen_range(1..=3));
            let lambda = rng.gen_range(1..=2);
            let Ok(a) = basis_map_a(nu, nu_p, mu, mu, lambda) else {
                continue;
            };
            let Ok(inv) = a.inverse() else { continue };
            count += 1;
            ensure(a.compose(&inv).entries == BasisMap::identity().entries, || {
                format!("{a:?}")
            })?;
            ensure(inv.inverse().map(|b| b.entries) == Ok(a.entries.clone()), || {
                format!("{a:?}")
            })?;
        }
        trials(count, "invertible maps")
    })();
    s.add("chow", "basis map round trip", "matrix A and its inverse", roundtrip);

    let w36 = RingCtx::from_chern(5, int(-1), rat(1, 3), int(18)).expect("valid");
    let sum = &RingElem::g1(&w36) + &RingElem::g2(&w36);
    let p5 = sum.pow(5);
    s.add(
        "chow",
        "(G1+G2)^5 in the conic context",
        "hand reduction with G1^2 = -G1G2 - G2^2/3",
        diff((rat(1, 9), int(0)), (p5.coeff(1, 4), p5.coeff(0, 5))),
    );
    let minus_k = RingElem::linear(&w36, int(2), int(1));
    s.add(
        "chow",
        "-K H^5 = 2 L H^5",
        "degree normalization on G1 G2^n",
        intersection_degree(&(&minus_k * &RingElem::g2(&w36).pow(5)))
            .map_err(|e| e.to_string())
            .and_then(|v| diff(int(36), v)),
    );
    let derived = basis_map_a(1, 4, 1, 1, 1)
        .map(|a| lh_to_minus_k_h(&int(-1)).compose(&a))
        .and_then(|m| derived_context(&w36, &m, ("mKp", "Hp")))
        .map_err(|e| e.to_string())
        .and_then(|d| {
            diff(
                (int(-5), int(-7), int(2)),
                (d.rel_a().clone(), d.rel_b().clone(), d.degree_s().clone()),
            )
        });
    s.add(
        "chow",
        "derived context for (1,4)",
        "relation in the basis (-K', H')",
        derived,
    );

    let b = (|| {
        let (map, rep) = basis_map_b(&int(2), &int(1), &int(1), &int(0), &int(-4), &int(1), &int(1), &int(2));
        ensure(rep.ok(), || format!("{rep:?}"))?;
        diff(int(1), map.entries[1][0].clone())
    })();
    s.add(
        "chow",
        "matrix B on the first type-D row",
        "integral unimodular change of codimension-two basis",
        b,
    );
}

fn all_table_rows(ds: &Dataset) -> Result<Vec<InvariantTuple>, String> {
    let mut rows = Vec::new();
    for n in [2, 3, 5] {
        rows.extend(enumerate_type_c(n, ds).map_err(|e| e.to_string())?.rows);
        rows.extend(enumerate_type_p(n, ds).map_err(|e| e.to_string())?);
    }
    let d = enumerate_type_d(6, 8, ds).map_err(|e| e.to_string())?;
    rows.extend(d.generated);
    Ok(rows)
}

/// `(passes, perturbed failures)`: every row satisfies the argument
/// condition, and each perturbation of `τ` by ±1 or of `Δ` by a factor two
/// breaks it.
pub fn rho_tau_suite(ds: &Dataset) -> Result<(usize, usize), String> {
    let rows = all_table_rows(ds)?;
    let mut perturbed = 0;
    for t in &rows {
        let expect_rho = match t.kind {
            Kind::D => &t.tau - int(2) / &t.tau_p,
            _ => t.tau.clone(),
        };
        ensure(t.rho == expect_rho, || format!("rho of {:?}", t.sort_key()))?;
        ensure(check_rho_tau(t.n, &t.tau, &t.rho, &t.delta) == Ok(true), || {
            format!("row {:?} fails", t.sort_key())
        })?;
        let variants = [
            (&t.tau + int(1), t.delta.clone()),
            (&t.tau - int(1), t.delta.clone()),
            (t.tau.clone(), &t.delta * int(2)),
        ];
        for (tau, delta) in variants {
            if !tau.is_positive() {
                continue;
            }
            let rho = match t.kind {
                Kind::D => &tau - int(2) / &t.tau_p,
                _ => tau.clone(),
            };
            ensure(check_rho_tau(t.n, &tau, &rho, &delta) == Ok(false), || {
                format!("perturbed row {:?} still passes", t.sort_key())
            })?;
            perturbed += 1;
        }
    }
    Ok((rows.len(), perturbed))
}

fn slope_checks(s: &mut Suite, ds: &Dataset) {
    let rt = rho_tau_suite(ds).and_then(|(rows, bad)| {
        ensure(bad >= 10, || format!("only {bad} perturbations"))?;
        Ok(format!("{rows} rows, {bad} perturbations rejected"))
    });
    s.add(
        "slope",
        "rho-tau relation on every table row",
        "n arg(tau+sqrt D) + arg(rho+sqrt D) = pi",
        rt,
    );

    let kp = kprime_degree_formulas(3, &int(2), 1, 1, &int(4)).map_err(|e| e.to_string());
    s.add(
        "slope",
        "K' degree formulas",
        "closed forms for -K'H'^n and K'^2H'^(n-1)",
        kp.and_then(|v| diff((int(4), int(-4)), v)),
    );

    let nu_p = (|| {
        for row in TYPE_D_TABLE {
            let (n, tau, tau_p) = (row[0] as u32, int(row[2]), row[7]);
            let d_p = row[6];
            let p = row[5] * (row[2] / d_p);
            let delta = &tau * &tau - int(4) * &tau / int(p);
            ensure(solve_nu_prime(n, &tau, &delta, 1) == Some(tau_p), || {
                format!("row {row:?}")
            })?;
        }
        trials(4, "type-D rows")
    })();
    s.add("slope", "solve_nu_prime recovers tau'", "type-D table", nu_p);

    let adj = (|| {
        let mut count = 0;
        for n in [2, 3, 5] {
            for t in enumerate_type_c(n, ds).map_err(|e| e.to_string())?.rows {
                let ctx = RingCtx::from_chern(n, int(t.c1), t.c2_over_d.clone(), t.deg_x.clone().expect("survivor"))
                    .map_err(|e| e.to_string())?;
                let map = basis_map_a(t.nu, t.nu_p, t.mu, t.mu_p, t.lambda)
                    .map(|a| lh_to_minus_k_h(&int(t.c1)).compose(&a))
                    .map_err(|e| e.to_string())?;
                let dctx = derived_context(&ctx, &map, ("mKp", "Hp")).map_err(|e| e.to_string())?;
                let ok = adjunction_check(
                    &dctx,
                    t.c1_p.as_ref().expect("conic"),
                    t.deg_x_p.as_ref().expect("survivor"),
                );
                ensure(ok == Ok(true), || format!("row {:?}", t.sort_key()))?;
                count += 1;
            }
        }
        trials(count, "conic rows")
    })();
    s.add(
        "slope",
        "adjunction K'^2 H'^(n-1) = c1' deg X'",
        "conic bundle adjunction",
        adj,
    );
}

/// `(n, i, τ, c₁, c₂, d, d′, τ′, i′)` of a type-D row.
pub fn type_d_columns(t: &InvariantTuple) -> Option<[i64; 9]> {
    let c2 = crate::exact::to_i64(&(&t.c2_over_d * int(t.d?)))?;
    Some([
        i64::from(t.n),
        t.i,
        crate::exact::to_i64(&t.tau)?,
        t.c1,
        c2,
        t.d?,
        t.d_p?,
        crate::exact::to_i64(&t.tau_p)?,
        t.i_p,
    ])
}

/// Brute-force scan of the congruence conditions, independent of the
/// enumerator's loop structure.
pub fn brute_force_congruences(m_max: u32) -> Vec<CongruenceTuple> {
    let mut out = Vec::new();
    for alpha in 3..=m_max {
        for z in 1..=m_max {
            for m in 1..=m_max {
                if 3 * z <= 2 * m && m > z + 1 && alpha * (m - z - 1) == m - 1 {
                    out.push(CongruenceTuple { alpha, z, m });
                }
            }
        }
    }
    out
}

fn classify_checks(s: &mut Suite, ds: &Dataset) {
    for (n, golden) in GOLDEN_C {
        let got = enumerate_type_c(n, ds).map(|r| to_csv(r.table_rows().iter()));
        let res = match got {
            Ok(text) if text == golden => Ok(format!("{} rows", text.lines().count() - 1)),
            Ok(text) => Err(format!("expected\n{golden}got\n{text}")),
            Err(e) => Err(e.to_string()),
        };
        s.add("classify", "type-C table matches golden", "conic-bundle tables", res);
    }

    let ex = (|| {
        let r = enumerate_type_c(5, ds).map_err(|e| e.to_string())?;
        let rules: Vec<_> = r.exclusions.iter().map(|e| e.rule.as_str()).collect();
        diff(
            vec!["r-effectivity", "pushforward-r", "schwarzenberger", "blowdown-degree"],
            rules,
        )?;
        diff(Some(&int(-2)), r.exclusions[0].get_rat("pi_prime_R"))?;
        diff(
            Some(&WitnessValue::List(vec![int(-9), int(-3), int(-1), int(0)])),
            r.exclusions[1].get("pi_R"),
        )?;
        let a = exclude_2_1(ds).map_err(|e| e.to_string())?;
        diff(Some(&rat(4, 3)), a.get_rat("m"))?;
        let b = exclude_1_4(ds).map_err(|e| e.to_string())?;
        diff(Some(&int(-395)), b.get_rat("value"))?;
        diff(Some(true), b.get_flag("parity_violated"))
    })();
    s.add("classify", "type-C exclusion witnesses", "fivefold exclusions", ex);

    let d = (|| {
        let r = enumerate_type_d(6, 8, ds).map_err(|e| e.to_string())?;
        let raw: Vec<_> = r.raw_table().into_iter().map(type_d_columns).collect();
        diff(TYPE_D_TABLE.iter().copied().map(Some).collect::<Vec<_>>(), raw)?;
        let surv: Vec<_> = r.survivors().iter().map(|t| t.label.clone()).collect();
        diff(vec![Some("D1".to_string())], surv)?;
        let labels: Vec<_> = r.fin.outcomes.iter().map(|o| o.label.as_str()).collect();
        diff(vec!["D2", "D3"], labels)?;
        diff(vec![(2, 1)], r.fin.vanishing.clone())?;
        let ns: Vec<_> = r.fin.rational_n.iter().map(|(n, _)| *n).collect();
        diff(vec![2, 3], ns)
    })();
    s.add(
        "classify",
        "type-D table, survivor and finite branch",
        "codimension-two blow-downs",
        d,
    );

    let p = (|| {
        let mut got = Vec::new();
        for n in [2, 3, 5] {
            for t in enumerate_type_p(n, ds).map_err(|e| e.to_string())? {
                got.push((n, t.nu * t.nu_p, t.label.clone().unwrap_or_default()));
            }
        }
        diff(
            vec![
                (2, 1, "P1".to_string()),
                (3, 2, "P2/P3".to_string()),
                (5, 3, "P4/P5".to_string()),
            ],
            got,
        )
    })();
    s.add(
        "classify",
        "type-P factorizations",
        "two projective-bundle structures",
        p,
    );

    let c = diff(brute_force_congruences(19), enumerate_congruences(19));
    s.add(
        "classify",
        "congruence tuples agree with brute force",
        "congruences of lines",
        c,
    );

    let f = diff(
        vec![int(2), int(1), int(1), int(1), int(1)],
        family_table().into_iter().map(|r| r.factor).collect(),
    );
    s.add(
        "classify",
        "family table factors",
        "families of curves through a point",
        f,
    );
}

fn expr_checks(s: &mut Suite, rng: &mut StdRng) {
    let syms = ["L", "H", "K'", "c1"];
    let rt = (|| {
        for _ in 0..100 {
            let e = random_expr(rng, &syms, 5);
            let printed = e.to_string();
            let back = parse_str(&printed).map_err(|err| format!("{printed}: {err}"))?;
            ensure(back == e, || format!("{printed} reparsed as {back:?}"))?;
        }
        trials(100, "random expressions")
    })();
    s.add("expr", "parse . print . parse = parse", "pretty-printer round trip", rt);

    let dist = (|| {
        let ctx = random_ctx(rng);
        let mut b = crate::expr::generator_bindings(&ctx);
        b.insert("L".into(), b["G1"].clone());
        b.insert("H".into(), b["G2"].clone());
        b.insert(
            "K'".into(),
            crate::expr::Value::Elem(RingElem::linear(&ctx, int(2), int(1))),
        );
        b.insert("c1".into(), crate::expr::Value::Scalar(int(-1)));
        for _ in 0..100 {
            let (x, y) = (random_expr(rng, &syms, 3), random_expr(rng, &syms, 3));
            let sum = Expr::Add(Box::new(x.clone()), Box::new(y.clone()));
            let (ex, ey, es) = (evaluate(&x, &ctx, &b), evaluate(&y, &ctx, &b), evaluate(&sum, &ctx, &b));
            let (Ok(ex), Ok(ey), Ok(es)) = (ex, ey, es) else {
                continue;
            };
            let as_elem = |v: crate::expr::Value| match v {
                crate::expr::Value::Scalar(r) => RingElem::scalar(&ctx, r),
                crate::expr::Value::Elem(e) => e,
            };
            let (vx, vy, vs) = (as_elem(ex.value), as_elem(ey.value), as_elem(es.value));
            ensure(&vx + &vy == vs, || format!("{x} + {y}"))?;
            ensure(reduce(&vs.to_raw(), &ctx) == vs, || format!("{x} + {y} not normal"))?;
        }
        trials(100, "random sums")
    })();
    s.add(
        "expr",
        "evaluation distributes over sums",
        "evaluator is a ring map",
        dist,
    );

    let examples = (|| {
        let ctx = |name: &str| -> Result<ContextFile, String> {
            let text = CONTEXTS.iter().find(|(n, _)| *n == name).expect("bundled").1;
            ContextFile::parse(text).map_err(|e| e.to_string())
        };
        let eval = |file: &ContextFile, text: &str| -> Result<String, String> {
            let b = file.bindings().map_err(|e| e.to_string())?;
            let e = parse_str(text).map_err(|e| e.to_string())?;
            evaluate(&e, &file.ctx, &b)
                .map(|v| v.to_string())
                .map_err(|e| e.to_string())
        };
        let w = ctx("w36.ctx")?;
        diff("-2".to_string(), eval(&w, "(4*L+3*H)*(L+H)^5")?)?;
        diff(
            "-395".to_string(),
            eval(
                &w,
                "(1/2)*Kp^4*Hp^2 - (cp/4)*Kp^3*Hp^3 + (cp^2/8)*Kp^2*Hp^4 - (cp^3/16)*Kp*Hp^5",
            )?,
        )?;
        for (name, _) in CONTEXTS {
            let f = ctx(name)?;
            diff("0".to_string(), eval(&f, "K^2 - D*H^2")?)?;
        }
        Ok("3 examples".to_string())
    })();
    s.add(
        "expr",
        "worked evaluations",
        "cross-basis oracle and Chern-Wu identity",
        examples,
    );
}

fn context_checks(s: &mut Suite) {
    let rt = (|| {
        for (name, text) in CONTEXTS {
            let f = ContextFile::parse(text).map_err(|e| format!("{name}: {e}"))?;
            let canon = f.to_text();
            let g = ContextFile::parse(&canon).map_err(|e| format!("{name}: {e}"))?;
            ensure(g == f && g.to_text() == canon, || format!("{name} does not round-trip"))?;
            let b = f.bindings().map_err(|e| e.to_string())?;
            // Each bundled context satisfies adjunction for its K', H'.
            let (kp, hp, cp) = (&b["K'"], &b["H'"], &b["c1'"]);
            let n = f.ctx.n();
            let (crate::expr::Value::Elem(kp), crate::expr::Value::Elem(hp), crate::expr::Value::Scalar(cp)) =
                (kp, hp, cp)
            else {
                return Err(format!("{name}: K', H', c1' have the wrong kinds"));
            };
            // A conic has -K'-degree two, so deg X' = -K'·H'ⁿ / 2.
            let lhs = intersection_degree(&(&kp.pow(2) * &hp.pow(n - 1))).map_err(|e| e.to_string())?;
            let minus_k_hn = intersection_degree(&(&kp.scale(&-Rat::one()) * &hp.pow(n))).map_err(|e| e.to_string())?;
            let rhs = cp * &minus_k_hn / int(2);
            ensure(lhs == rhs, || {
                format!("{name}: K'^2 H'^(n-1) = {lhs}, c1' deg X' = {rhs}")
            })?;
            let top = intersection_degree(&hp.pow(n + 1)).map_err(|e| e.to_string())?;
            ensure(top.is_zero(), || format!("{name}: H'^(n+1) = {top}"))?;
        }
        trials(CONTEXTS.len(), "bundled contexts")
    })();
    s.add(
        "context",
        "bundled contexts round-trip and satisfy adjunction",
        "flat text ring contexts",
        rt,
    );
}

/// Runs every check with the given seed.
pub fn run_all(ds: &Dataset, seed: u64) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut s = Suite { checks: Vec::new() };
    exact_checks(&mut s, &mut rng);
    chow_checks(&mut s, &mut rng);
    slope_checks(&mut s, ds);
    classify_checks(&mut s, ds);
    expr_checks(&mut s, &mut rng);
    context_checks(&mut s);
    s.checks
}
