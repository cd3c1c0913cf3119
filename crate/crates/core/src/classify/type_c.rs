//! Pairs whose second contraction is a conic bundle.
//!
//! With `μ = 1` and `arg(τ+√Δ) = π/(n+1)`, every invariant is a function of
//! `(n, τ, τ′)`. Candidates are filtered in order by effectivity of the
//! discriminant divisor, degree matching against the dataset, the
//! pushforward of the discriminant divisor, and the two scripted exclusions.

use num_traits::{Signed, Zero};

use super::exclusions::{exclude_1_4, exclude_2_1};
use super::{sort_rows, ClassifyError, ExclusionReport, WitnessValue};
use crate::chow::{RingCtx, RingElem};
use crate::dataset::{Dataset, FanoEntry};
use crate::exact::{cos_sq_pi_over, int, to_i64, Rat};
use crate::slope::{
    base_degree_ratio, boundary_delta, c1_prime, pushforward_r, y_dot_f, InvariantTuple, Kind, Status, TupleData,
};

const CITE_R_EFF: &str = "the discriminant divisor of a conic bundle is effective and pushes forward to -c1' H_X'";
const CITE_PUSH: &str = "the pushforward of the discriminant divisor to X must be effective; a zero pushforward \
                         contradicts uniform splitting type (0,-1) on lines when tau = 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeCResult {
    pub n: u32,
    /// Surviving rows, sorted by `(τ, τ′)`.
    pub rows: Vec<InvariantTuple>,
    pub exclusions: Vec<ExclusionReport>,
    /// Candidates with no pair of manifolds of matching degrees.
    pub unrealized: Vec<InvariantTuple>,
}

impl TypeCResult {
    /// Survivors and excluded candidates together, sorted by `(n, τ, τ′)`.
    pub fn table_rows(&self) -> Vec<InvariantTuple> {
        let mut all: Vec<_> = self.rows.clone();
        all.extend(self.exclusions.iter().map(|r| r.candidate.clone()));
        sort_rows(&mut all);
        all
    }
}

/// Row data determined by `(n, τ, τ′)` alone.
pub(crate) fn conic_data(n: u32, tau: i64, tau_p: i64) -> Result<TupleData, ClassifyError> {
    let delta = boundary_delta(n, &int(tau)).ok_or_else(|| unsupported(n))?;
    let i = tau + 1;
    let c1 = if i % 2 == 0 { -1 } else { 0 };
    let mut t = TupleData::derive(n, Kind::C, 1, tau, tau_p, c1, delta);
    let c1p = c1_prime(n, &int(tau), &int(tau_p))?;
    t.y_dot_f = Some(y_dot_f(&c1p, &int(tau_p), 1));
    t.c1_p = Some(c1p);
    Ok(t)
}

fn unsupported(n: u32) -> ClassifyError {
    ClassifyError::UnsupportedN {
        n,
        reason: "a conic bundle needs arg(tau + sqrt Delta) = pi/(n+1) with n in {2, 3, 5}".into(),
    }
}

fn excluded(
    t: TupleData,
    rule: &str,
    witness: Vec<(String, WitnessValue)>,
    citation: &str,
) -> Result<ExclusionReport, ClassifyError> {
    let mut t = t;
    t.status = Status::Excluded(rule.to_string());
    Ok(ExclusionReport {
        candidate: InvariantTuple::new(t)?,
        rule: rule.to_string(),
        witness,
        citation: citation.to_string(),
    })
}

/// A possible `(X, X′)` with degrees.
#[derive(Debug, Clone)]
struct Pair {
    name_x: String,
    deg_x: Rat,
    name_x_p: Option<String>,
    deg_x_p: Rat,
}

fn w_name(n: u32, deg: &Rat) -> String {
    format!("W_{deg}^{n}")
}

/// Pairs of manifolds whose degrees satisfy `H_{X′}ⁿ = r·H_Xⁿ`.
fn degree_pairs(n: u32, i: u32, i_p: u32, ratio: &Rat, ds: &Dataset) -> Option<Vec<Pair>> {
    let usable = |dim, index| -> Vec<&FanoEntry> {
        ds.with_index(dim, index)
            .into_iter()
            .filter(|e| e.cyclic_h4())
            .collect()
    };
    let deg = |e: &FanoEntry| int(e.degree as i64);
    match (ds.covers(n, i), ds.covers(n, i_p)) {
        (true, true) => {
            let xs = usable(n, i);
            let xps = usable(n, i_p);
            Some(
                xs.iter()
                    .flat_map(|x| xps.iter().map(move |xp| (*x, *xp)))
                    .filter(|(x, xp)| deg(xp) == ratio * deg(x))
                    .map(|(x, xp)| Pair {
                        name_x: x.name.clone(),
                        deg_x: deg(x),
                        name_x_p: Some(xp.name.clone()),
                        deg_x_p: deg(xp),
                    })
                    .collect(),
            )
        }
        (false, true) => Some(
            usable(n, i_p)
                .into_iter()
                .filter_map(|xp| {
                    let dx = deg(xp) / ratio;
                    dx.is_integer().then(|| Pair {
                        name_x: w_name(n, &dx),
                        deg_x: dx,
                        name_x_p: Some(xp.name.clone()),
                        deg_x_p: deg(xp),
                    })
                })
                .collect(),
        ),
        _ => None,
    }
}

/// Coefficient of `H_X` in `π_*π′^*H_{X′}²`: the `L·H` coefficient of `H′²`,
/// with `H′ = L + ((τ − c₁)/2)·H`.
fn h_prime_square_push(t: &TupleData) -> Result<Rat, ClassifyError> {
    let ctx = RingCtx::from_chern(t.n, int(t.c1), t.c2_over_d.clone(), int(1))?;
    let shift = (int(t.nu) - int(t.c1)) / int(2);
    let hp = RingElem::linear(&ctx, int(1), shift);
    Ok((&hp * &hp).coeff(1, 1))
}

/// Classifies conic-bundle pairs over an `n`-fold, `n ∈ {2, 3, 5}`.
pub fn enumerate_type_c(n: u32, ds: &Dataset) -> Result<TypeCResult, ClassifyError> {
    let two_k = cos_sq_pi_over(n + 1)
        .map(|c| c * int(8))
        .filter(|v| v.is_integer() && v.is_positive())
        .ok_or_else(|| unsupported(n))?;
    boundary_delta(n, &int(1)).ok_or_else(|| unsupported(n))?;
    let two_k = to_i64(&two_k).expect("small");
    let mut rows = Vec::new();
    let mut exclusions = Vec::new();
    let mut unrealized = Vec::new();
    for tau in (1..=i64::from(n)).filter(|t| two_k % t == 0) {
        for tau_p in 1..=i64::from(n) - 1 {
            let t = conic_data(n, tau, tau_p)?;
            InvariantTuple::new(t.clone())?;
            let c1p = t.c1_p.clone().expect("conic");
            if c1p.is_positive() {
                let w = vec![("pi_prime_R".to_string(), WitnessValue::Rat(-c1p))];
                exclusions.push(excluded(t, "r-effectivity", w, CITE_R_EFF)?);
                continue;
            }
            let ratio = base_degree_ratio(n, &int(tau))?;
            let pairs = degree_pairs(n, t.i as u32, t.i_p as u32, &ratio, ds);
            let pairs = match pairs {
                Some(p) if !p.is_empty() => p,
                _ => {
                    let mut u = t;
                    u.status = Status::Excluded("no-degree-match".into());
                    unrealized.push(InvariantTuple::new(u)?);
                    continue;
                }
            };
            let push_coeff = h_prime_square_push(&t)?;
            let mut values = Vec::new();
            let mut degrees = Vec::new();
            let mut kept = Vec::new();
            for p in pairs {
                let a = p.name_x_p.as_deref().and_then(|name| ds.c2_coeff(name));
                match a {
                    Some(a) => {
                        let v = pushforward_r(t.nu, t.nu_p, &(a * &push_coeff));
                        let bad = v.is_negative() || (v.is_zero() && tau == 1);
                        values.push(v);
                        degrees.push(p.deg_x_p.clone());
                        if !bad {
                            kept.push(p);
                        }
                    }
                    None => kept.push(p),
                }
            }
            if kept.is_empty() {
                let w = vec![
                    ("deg_X_prime".to_string(), WitnessValue::List(degrees)),
                    ("pi_R".to_string(), WitnessValue::List(values)),
                    ("zero_case_rule".to_string(), WitnessValue::Flag(tau == 1)),
                ];
                exclusions.push(excluded(t, "pushforward-r", w, CITE_PUSH)?);
                continue;
            }
            if (n, tau, tau_p) == (5, 2, 1) {
                exclusions.push(exclude_2_1(ds)?);
                continue;
            }
            if n == 5 && t.i_p == i64::from(n) + 1 {
                exclusions.push(exclude_1_4(ds)?);
                continue;
            }
            for p in kept {
                let mut row = t.clone();
                if n <= 3 {
                    row.d = to_i64(&p.deg_x);
                }
                row.name_x = Some(p.name_x);
                row.deg_x = Some(p.deg_x);
                row.name_x_p = p.name_x_p;
                row.deg_x_p = Some(p.deg_x_p);
                row.status = Status::Admissible;
                rows.push(InvariantTuple::new(row)?);
            }
        }
    }
    sort_rows(&mut rows);
    sort_rows(&mut unrealized);
    exclusions.sort_by_key(|r| r.candidate.sort_key());
    Ok(TypeCResult {
        n,
        rows,
        exclusions,
        unrealized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn brief(n: u32) -> Vec<(Rat, Rat, String, String, Rat, Rat)> {
        enumerate_type_c(n, &Dataset::builtin())
            .unwrap()
            .rows
            .iter()
            .map(|t| {
                (
                    t.tau.clone(),
                    t.tau_p.clone(),
                    t.name_x.clone().unwrap(),
                    t.name_x_p.clone().unwrap(),
                    t.c1_p.clone().unwrap(),
                    t.y_dot_f.clone().unwrap(),
                )
            })
            .collect()
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(
            brief(2),
            [(int(2), int(1), "P^2".into(), "P^2".into(), int(-3), int(1))]
        );
        assert_eq!(
            brief(3),
            [
                (int(1), int(2), "V_4^3".into(), "P^3".into(), int(-4), int(0)),
                (int(2), int(1), "Q^3".into(), "Q^3".into(), int(-2), int(0)),
            ]
        );
    }

    #[test]
    fn fivefolds() {
        let res = enumerate_type_c(5, &Dataset::builtin()).unwrap();
        let got: Vec<_> = res
            .rows
            .iter()
            .map(|t| {
                (
                    t.tau.clone(),
                    t.tau_p.clone(),
                    t.deg_x.clone().unwrap(),
                    t.deg_x_p.clone().unwrap(),
                    t.delta.clone(),
                )
            })
            .collect();
        assert_eq!(
            got,
            [
                (int(1), int(3), int(36), int(2), rat(-1, 3)),
                (int(3), int(1), int(4), int(18), int(-3)),
            ]
        );
        let rules: Vec<_> = res.exclusions.iter().map(|r| r.rule.as_str()).collect();
        assert_eq!(
            rules,
            ["r-effectivity", "pushforward-r", "schwarzenberger", "blowdown-degree"]
        );
        assert_eq!(res.exclusions[0].get_rat("pi_prime_R"), Some(&int(-2)));
        assert_eq!(
            res.exclusions[1].get("pi_R"),
            Some(&WitnessValue::List(vec![int(-9), int(-3), int(-1), int(0)]))
        );
    }

    #[test]
    fn unsupported() {
        assert!(enumerate_type_c(4, &Dataset::builtin()).is_err());
    }
}
