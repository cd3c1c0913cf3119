//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;

use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use fanocalc_core::chow::{basis_map_a, derived_context, intersection_degree, lh_to_minus_k_h, reduce};
use fanocalc_core::classify::{
    congruence_profile, enumerate_type_c, enumerate_type_d, enumerate_type_p, CongruenceTuple, WitnessValue,
};
use fanocalc_core::exact::{arg_less_than, int, quad_pow, rat};
use fanocalc_core::expr::parse_str;
use fanocalc_core::verify::{
    negative_rat, random_ctx, random_expr, random_quad, random_raw, raw_add, raw_mul, rho_tau_suite, type_d_columns,
};
use fanocalc_core::{BasisMap, Dataset, Rat, RingCtx, RingElem};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn same<T: PartialEq + std::fmt::Debug>(what: &str, expected: T, got: T) -> Result<(), String> {
    ensure(expected == got, || {
        format!("{what}: expected {expected:?}, got {got:?}")
    })
}

fn fanocalc(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_fanocalc"))
        .args(args)
        .env_remove("FANOCALC_DATA")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || {
        format!(
            "fanocalc {args:?} exited {:?}: {}",
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        )
    })?;
    String::from_utf8(o.stdout).map_err(|e| e.to_string())
}

fn csv_records(text: &str) -> Result<Vec<csv::StringRecord>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| e.to_string())?;
            ensure(rec.len() == header.len(), || "ragged row".into())?;
            Ok(rec)
        })
        .collect()
}

fn field(header: &str, name: &str) -> usize {
    header.split(',').position(|h| h == name).expect("known column")
}

/// Conic tables at n = 2, 3, 5 from the command line.
fn type_c_tables() -> Outcome {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..");
    let mut survivors = Vec::new();
    for n in ["2", "3", "5"] {
        let out = fanocalc(&["enumerate", "--type", "C", "--n", n, "--format", "csv"])?;
        let golden = std::fs::read_to_string(root.join(format!("crates/core/golden/type_c_n{n}.csv")))
            .map_err(|e| e.to_string())?;
        same(&format!("n = {n} csv"), golden.as_str(), out.as_str())?;
        let header = out.lines().next().unwrap_or_default().to_string();
        for rec in csv_records(&out)? {
            if &rec[field(&header, "status")] == "admissible" {
                let get = |name: &str| rec[field(&header, name)].to_string();
                let c2 = match (get("c2_over_d").parse::<Rat>(), get("d").parse::<Rat>()) {
                    (Ok(c), Ok(d)) => (c * d).to_string(),
                    _ => String::new(),
                };
                survivors.push(vec![
                    get("n"),
                    get("tau"),
                    get("tau_prime"),
                    get("d"),
                    get("Delta"),
                    c2,
                    get("deg_X"),
                    get("deg_X_prime"),
                    get("name_X"),
                    get("name_X_prime"),
                    get("c1_prime"),
                    get("y_dot_f"),
                ]);
            }
        }
    }
    let row = |v: [&str; 12]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let expected = vec![
        row(["2", "2", "1", "1", "-12", "3", "1", "1", "P^2", "P^2", "-3", "1"]),
        row(["3", "1", "2", "4", "-1", "2", "4", "1", "V_4^3", "P^3", "-4", "0"]),
        row(["3", "2", "1", "2", "-4", "2", "2", "2", "Q^3", "Q^3", "-2", "0"]),
        row(["5", "1", "3", "", "-1/3", "", "36", "2", "W_36^5", "Q^5", "-6", "0"]),
        row(["5", "3", "1", "", "-3", "", "4", "18", "V_4^5", "K(G2)", "-2", "0"]),
    ];
    same("surviving rows", expected, survivors)?;
    Ok("n=2: 1 row, n=3: 2 rows, n=5: 2 rows, byte-equal to goldens".into())
}

/// The four fivefold conic exclusions and their witnesses.
fn type_c_dossiers() -> Outcome {
    let ds = Dataset::builtin();
    let res = enumerate_type_c(5, &ds).map_err(|e| e.to_string())?;
    let keys: Vec<(i64, i64, &str)> = res
        .exclusions
        .iter()
        .map(|e| {
            let t = &e.candidate;
            (
                t.tau.to_integer().try_into().unwrap_or(-1),
                t.tau_p.to_integer().try_into().unwrap_or(-1),
                e.rule.as_str(),
            )
        })
        .collect();
    same(
        "exclusions",
        vec![
            (1, 1, "r-effectivity"),
            (1, 2, "pushforward-r"),
            (1, 4, "schwarzenberger"),
            (2, 1, "blowdown-degree"),
        ],
        keys,
    )?;
    let by = |tau: i64, tp: i64| {
        res.exclusions
            .iter()
            .find(|e| e.candidate.tau == int(tau) && e.candidate.tau_p == int(tp))
            .expect("listed above")
    };
    same("(1,1) pi'_*R", Some(&int(-2)), by(1, 1).get_rat("pi_prime_R"))?;
    same(
        "(1,2) pi_*R",
        Some(&WitnessValue::List(vec![int(-9), int(-3), int(-1), int(0)])),
        by(1, 2).get("pi_R"),
    )?;
    same("(1,2) zero case", Some(true), by(1, 2).get_flag("zero_case_rule"))?;
    same("(2,1) m", Some(&rat(4, 3)), by(2, 1).get_rat("m"))?;
    same("(2,1) integral", Some(false), by(2, 1).get_flag("m_integral"))?;
    same("(1,4) value", Some(&int(-395)), by(1, 4).get_rat("value"))?;
    same("(1,4) odd", Some(true), by(1, 4).get_flag("value_odd"))?;
    same("(1,4) parity", Some(true), by(1, 4).get_flag("parity_violated"))?;
    let cli = fanocalc(&["exclusions", "--case", "1-4"])?;
    ensure(cli.contains("value = -395"), || {
        "CLI dossier for 1-4 lacks the value".into()
    })?;
    let cli = fanocalc(&["exclusions", "--case", "2-1"])?;
    ensure(cli.contains("m = 4/3"), || "CLI dossier for 2-1 lacks m".into())?;
    Ok("(1,1) -2; (1,2) [-9,-3,-1,0] + zero rule; (2,1) m = 4/3; (1,4) -395 odd".into())
}

/// Blow-down table, survivor and finite branch.
fn type_d() -> Outcome {
    let r = enumerate_type_d(6, 8, &Dataset::builtin()).map_err(|e| e.to_string())?;
    let raw: Vec<Option<[i64; 9]>> = r.raw_table().into_iter().map(type_d_columns).collect();
    same(
        "raw table",
        vec![
            Some([2, 3, 2, 0, 1, 1, 2, 1, 3]),
            Some([3, 2, 1, -1, 1, 3, 1, 2, 4]),
            Some([4, 2, 1, -1, 1, 3, 1, 3, 5]),
            Some([4, 4, 3, -1, 1, 1, 3, 1, 3]),
        ],
        raw,
    )?;
    let surv: Vec<Option<&str>> = r.survivors().iter().map(|t| t.label.as_deref()).collect();
    same("survivors", vec![Some("D1")], surv)?;
    let tps: BTreeSet<i64> = r.fin.vanishing.iter().map(|(tp, _)| *tp).collect();
    same("fin tau'", BTreeSet::from([2]), tps)?;
    let ns: Vec<u32> = r.fin.rational_n.iter().map(|(n, _)| *n).collect();
    same("fin n", vec![2, 3], ns)?;
    let outcomes: Vec<(&str, u32)> = r.fin.outcomes.iter().map(|o| (o.label.as_str(), o.n)).collect();
    same("fin outcomes", vec![("D2", 2), ("D3", 3)], outcomes)?;
    Ok("4 raw rows, D1 survives, fin branch tau'=2, n in {2,3}, D2 and D3".into())
}

/// Double projective-bundle structures.
fn type_p() -> Outcome {
    let ds = Dataset::builtin();
    let mut got = Vec::new();
    for n in [2, 3, 5] {
        let rows = enumerate_type_p(n, &ds).map_err(|e| e.to_string())?;
        let prods: BTreeSet<i64> = rows.iter().map(|t| t.nu * t.nu_p).collect();
        let names: Vec<(String, String, String)> = rows
            .iter()
            .map(|t| {
                (
                    t.label.clone().unwrap_or_default(),
                    t.name_x.clone().unwrap_or_default(),
                    t.name_x_p.clone().unwrap_or_default(),
                )
            })
            .collect();
        got.push((n, prods, names));
    }
    let s = |a: &str, b: &str, c: &str| (a.to_string(), b.to_string(), c.to_string());
    same(
        "type P",
        vec![
            (2, BTreeSet::from([1]), vec![s("P1", "P^2", "P^2")]),
            (3, BTreeSet::from([2]), vec![s("P2/P3", "P^3", "Q^3")]),
            (5, BTreeSet::from([3]), vec![s("P4/P5", "Q^5", "K(G2)")]),
        ],
        got,
    )?;
    Ok("nu nu' = 1, 2, 3 on n = 2, 3, 5 with P1..P5".into())
}

fn combination(k: &[Rat; 4], c: &Rat) -> Rat {
    // k = (K'^4H'^2, K'^3H'^3, K'^2H'^4, K'H'^5)
    &k[0] / int(2) - c * &k[1] / int(4) + c * c * &k[2] / int(8) - c * c * c * &k[3] / int(16)
}

/// The (1,4) monomials, two ways.
fn ring_kernel() -> Outcome {
    let expected = [int(-110), int(-36), int(-10), int(-2)];
    let c1p = int(-10);

    // Directly in (L, H): L^2 = -LH - H^2/3, LH^5 = 18.
    let ctx = RingCtx::new(5, ("L", "H"), int(-1), rat(-1, 3), int(18)).map_err(|e| e.to_string())?;
    let kp = RingElem::linear(&ctx, int(4), int(3));
    let hp = RingElem::linear(&ctx, int(1), int(1));
    let direct: Vec<Rat> = (0..4u32)
        .map(|j| intersection_degree(&(&kp.pow(4 - j) * &hp.pow(2 + j))))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let direct: [Rat; 4] = direct.try_into().expect("four monomials");
    same("direct monomials", &expected, &direct)?;

    // Through the derived context in the basis (-K', H').
    let map = basis_map_a(1, 4, 1, 1, 1)
        .map(|a| lh_to_minus_k_h(&int(-1)).compose(&a))
        .map_err(|e| e.to_string())?;
    let base = RingCtx::from_chern(5, int(-1), rat(1, 3), int(18)).map_err(|e| e.to_string())?;
    let d = derived_context(&base, &map, ("mKp", "Hp")).map_err(|e| e.to_string())?;
    let derived: Vec<Rat> = (0..4u32)
        .map(|j| {
            let a = 4 - j;
            let e = &RingElem::g1(&d).pow(a) * &RingElem::g2(&d).pow(2 + j);
            intersection_degree(&e).map(|v| if a % 2 == 1 { -v } else { v })
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let derived: [Rat; 4] = derived.try_into().expect("four monomials");
    same("derived monomials", &direct, &derived)?;

    let (v1, v2) = (combination(&direct, &c1p), combination(&derived, &c1p));
    same("combination", (int(-395), int(-395)), (v1, v2))?;
    Ok("(-110, -36, -10, -2) and -395 in both bases".into())
}

/// Argument relation on every emitted row, and its failure under perturbation.
fn rho_tau() -> Outcome {
    let (rows, perturbed) = rho_tau_suite(&Dataset::builtin())?;
    ensure(perturbed >= 10, || {
        format!("only {perturbed} perturbed tuples rejected")
    })?;
    Ok(format!("{rows} rows pass, {perturbed} perturbed tuples fail"))
}

/// Congruence tuples from the command line against a scan of all triples.
fn congruences() -> Outcome {
    let out = fanocalc(&["enumerate", "--type", "congruence", "--m-max", "19", "--format", "csv"])?;
    let header = out.lines().next().unwrap_or_default().to_string();
    let recs = csv_records(&out)?;
    let num = |rec: &csv::StringRecord, name: &str| rec[field(&header, name)].parse::<u32>().map_err(|e| e.to_string());
    let mut got = BTreeSet::new();
    for rec in &recs {
        got.insert((num(rec, "alpha")?, num(rec, "z")?, num(rec, "m")?));
    }
    let expected = BTreeSet::from([
        (3, 2, 4),
        (3, 4, 7),
        (3, 6, 10),
        (3, 8, 13),
        (3, 10, 16),
        (3, 12, 19),
        (4, 3, 5),
        (4, 6, 9),
        (5, 4, 6),
    ]);
    same("tuples", &expected, &got)?;

    // Every (α, z, m) with α ≥ 3 lines through a point, each a P^{m−z−1}
    // family of dimension m − 1, and a fundamental locus of dimension at
    // most 2m/3.
    let mut scan = BTreeSet::new();
    for m in 1..=19u32 {
        for z in 0..m {
            for alpha in 3..=m {
                if z + 1 < m && alpha * (m - z - 1) == m - 1 && 3 * z <= 2 * m {
                    scan.insert((alpha, z, m));
                }
            }
        }
    }
    same("brute force", &scan, &got)?;

    for k in 1..=6u32 {
        let t = CongruenceTuple {
            alpha: 3,
            z: 2 * k,
            m: 3 * k + 1,
        };
        let p = congruence_profile(t, &int(1)).map_err(|e| e.to_string())?;
        same(&format!("profile k = {k}"), (3, k - 1), (p.components, p.vmrt_dim))?;
        let rec = recs
            .iter()
            .find(|r| num(r, "z").ok() == Some(2 * k) && num(r, "alpha").ok() == Some(3))
            .ok_or_else(|| format!("no row for k = {k}"))?;
        same(
            &format!("cli profile k = {k}"),
            (3, k - 1),
            (num(rec, "components")?, num(rec, "vmrt_dim")?),
        )?;
    }
    Ok("9 tuples, equal to brute force; (3,2k,3k+1) has 3 components of dim k-1".into())
}

/// Randomized algebraic identities.
fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0xacce97);
    for _ in 0..1000 {
        let ctx = random_ctx(&mut rng);
        let (p, q) = (random_raw(&mut rng, ctx.n()), random_raw(&mut rng, ctx.n()));
        let (rp, rq) = (reduce(&p, &ctx), reduce(&q, &ctx));
        same("idempotence", &rp, &reduce(&rp.to_raw(), &ctx))?;
        same("linearity", &rp + &rq, reduce(&raw_add(&p, &q), &ctx))?;
        same("multiplicativity", &rp * &rq, reduce(&raw_mul(&p, &q), &ctx))?;
    }

    for _ in 0..20 {
        let ctx: Arc<RingCtx> = random_ctx(&mut rng);
        let k = RingElem::linear(&ctx, int(-2), ctx.rel_a().clone());
        let h = RingElem::g2(&ctx);
        same("Chern-Wu", (&h * &h).scale(&ctx.discriminant()), &k * &k)?;
    }

    let mut roundtrips = 0;
    while roundtrips < 100 {
        let (nu, nu_p, mu) = (rng.gen_range(1..=6), rng.gen_range(1..=6), rng.gen_range(1..=3));
        let Ok(a) = basis_map_a(nu, nu_p, mu, mu, rng.gen_range(1..=2)) else {
            continue;
        };
        let Ok(inv) = a.inverse() else { continue };
        same("A A^-1", BasisMap::identity().entries, a.compose(&inv).entries)?;
        same("A^-1 A", BasisMap::identity().entries, inv.compose(&a).entries)?;
        roundtrips += 1;
    }

    for _ in 0..200 {
        let delta = negative_rat(&mut rng);
        let z = random_quad(&mut rng, &delta);
        let (a, b) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        same("quad_pow", quad_pow(&z, a + b), &quad_pow(&z, a) * &quad_pow(&z, b))?;
    }

    let mut upper = 0;
    while upper < 200 {
        let delta = negative_rat(&mut rng);
        let z = random_quad(&mut rng, &delta);
        if !z.im_coeff().is_zero() && z.im_coeff() > &Rat::zero() {
            let flags: Vec<bool> = (2..=12)
                .map(|q| arg_less_than(&z, q).expect("upper half plane"))
                .collect();
            ensure(flags.windows(2).all(|w| w[0] || !w[1]), || {
                format!("antitonicity at {z:?}")
            })?;
            upper += 1;
        }
    }

    for _ in 0..100 {
        let e = random_expr(&mut rng, &["L", "H", "K'", "c1"], 5);
        let printed = e.to_string();
        same(
            "parser round trip",
            Ok(e),
            parse_str(&printed).map_err(|err| err.to_string()),
        )?;
    }
    Ok("1000 reductions, 20 Chern-Wu, 100 basis round trips, 200 powers, 200 arguments, 100 parses".into())
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("type-C tables", type_c_tables),
        ("type-C exclusion dossiers", type_c_dossiers),
        ("type-D table and finite branch", type_d),
        ("type-P factorizations", type_p),
        ("ring kernel two ways", ring_kernel),
        ("rho-tau suite", rho_tau),
        ("congruences of lines", congruences),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
