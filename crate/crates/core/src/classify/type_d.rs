//! Pairs whose second contraction blows down a divisor onto a codimension-two
//! center.
//!
//! Here `μ = 1`, so `τ = ν` and `τ′ = ν′` are integers and `ρ = τ − 2/τ′`.
//! When the exceptional divisor contains a fiber, `b = 1` and the unit
//! determinant of `B` gives `Δ = τ² − 4τ/P` with `P = B₂₁·d`, so `τP < 4`.

use num_traits::{Signed, Zero};

use super::{sort_rows, ClassifyError, ExclusionReport, WitnessValue};
use crate::chow::basis_map_b;
use crate::dataset::{Dataset, FanoEntry};
use crate::exact::{arg_less_than, int, tan_sq_pi_over, QuadNum, Rat};
use crate::slope::{check_rho_tau, solve_nu_prime, InvariantTuple, Kind, Status, TupleData};

const CITE_DATASET: &str = "classification of Fano manifolds of small coindex (Fujita, Mukai)";
const CITE_B4: &str = "the even-dimensional quadric and the listed exceptions have fourth Betti number two";
const CITE_HKG2: &str =
    "hyperplane sections of K(G2) in its Pluecker embedding have H^4 of rank two (Mukai degree list)";
const CITE_LAZ: &str = "Lazarsfeld: a finite cover with ample dual cokernel bundle preserves H^2";
const CITE_NIVEN: &str = "Niven: tan^2 of a rational multiple of pi is rational only at 0, 1/3, 1, 3";
const CITE_SECANT: &str = "classification of codimension-two varieties with one apparent n-tuple point";

/// A classification outcome that is a lookup rather than a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedOutcome {
    pub label: String,
    pub n: u32,
    pub name_x: String,
    pub name_x_p: String,
    pub citation: String,
}

/// The branch where the exceptional divisor is finite over the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinAnalysis {
    /// `(τ′, j)` for which a factor of the top Chern class vanishes.
    pub vanishing: Vec<(i64, i64)>,
    /// `n` with `tan²(π/2n)` rational, and the forced `Δ = −tan²(π/2n)`.
    pub rational_n: Vec<(u32, Rat)>,
    /// Why each rational `n` is impossible when the target is not projective space.
    pub contradictions: Vec<(u32, String)>,
    pub outcomes: Vec<NamedOutcome>,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeDResult {
    /// Every candidate, sorted by `(n, τ, τ′)`, with its status.
    pub generated: Vec<InvariantTuple>,
    pub exclusions: Vec<ExclusionReport>,
    pub fin: FinAnalysis,
    pub n_max: u32,
    pub tau_p_max: u32,
}

impl TypeDResult {
    /// Candidates that pass the existence check for both manifolds.
    pub fn raw_table(&self) -> Vec<&InvariantTuple> {
        self.generated
            .iter()
            .filter(|t| t.status.reason() != "no-manifold")
            .collect()
    }

    pub fn survivors(&self) -> Vec<&InvariantTuple> {
        self.generated
            .iter()
            .filter(|t| t.status == Status::Admissible)
            .collect()
    }
}

/// Fiber-containing branch and finite branch, merged.
pub fn enumerate_type_d(n_max: u32, tau_p_max: u32, ds: &Dataset) -> Result<TypeDResult, ClassifyError> {
    if n_max < 2 {
        return Err(ClassifyError::Bound {
            name: "n-max",
            value: n_max,
        });
    }
    let mut generated = Vec::new();
    let mut exclusions = Vec::new();
    for tau in 1i64..4 {
        for p in (1i64..).take_while(|p| tau * p < 4) {
            let delta = int(tau * tau) - Rat::new((4 * tau).into(), p.into());
            let z = QuadNum::shifted_root(int(tau), delta.clone()).expect("tau * P < 4");
            for n in 2..=n_max {
                if !arg_less_than(&z, n + 1).expect("upper half plane") {
                    break;
                }
                let Some(tau_p) = solve_nu_prime(n, &int(tau), &delta, 1) else {
                    continue;
                };
                if tau_p > i64::from(tau_p_max) {
                    continue;
                }
                for b21 in (1..=tau).filter(|b| tau % b == 0 && p % b == 0) {
                    let t = candidate(n, tau, tau_p, delta.clone(), p / b21, tau / b21)?;
                    let (t, report) = judge(t, ds)?;
                    generated.push(t);
                    exclusions.extend(report);
                }
            }
        }
    }
    sort_rows(&mut generated);
    exclusions.sort_by_key(|r| r.candidate.sort_key());
    Ok(TypeDResult {
        generated,
        exclusions,
        fin: type_d_fin_analysis(tau_p_max, n_max, ds),
        n_max,
        tau_p_max,
    })
}

fn candidate(n: u32, tau: i64, tau_p: i64, delta: Rat, d: i64, d_p: i64) -> Result<InvariantTuple, ClassifyError> {
    let i = tau + 1;
    let c1 = if i % 2 == 0 { -1 } else { 0 };
    let mut t = TupleData::derive(n, Kind::D, 1, tau, tau_p, c1, delta);
    t.d = Some(d);
    t.d_p = Some(d_p);
    t.b = Some(1);
    Ok(InvariantTuple::new(t)?)
}

fn entries_named(v: &[&FanoEntry]) -> WitnessValue {
    WitnessValue::Text(v.iter().map(|e| e.name.as_str()).collect::<Vec<_>>().join(" "))
}

/// Applies the realizability rules in order; the first that fires wins.
fn judge(t: InvariantTuple, ds: &Dataset) -> Result<(InvariantTuple, Option<ExclusionReport>), ClassifyError> {
    let n = t.n;
    let (i, i_p) = (t.i as u32, t.i_p as u32);
    let (d, d_p) = (t.d.expect("set"), t.d_p.expect("set"));
    let (_, rep) = basis_map_b(
        &int(t.nu),
        &int(t.nu_p),
        &int(t.mu),
        &int(t.c1),
        &t.delta,
        &int(d),
        &int(1),
        &int(d_p),
    );
    let exclude = |t: InvariantTuple, rule: &str, witness: Vec<(String, WitnessValue)>, citation: &str| {
        let t = t.with_status(Status::Excluded(rule.to_string()));
        let report = ExclusionReport {
            candidate: t.clone(),
            rule: rule.to_string(),
            witness,
            citation: citation.to_string(),
        };
        Ok((t, Some(report)))
    };
    if !rep.ok() {
        let w = vec![("det".to_string(), WitnessValue::Rat(rep.det.clone()))];
        return exclude(
            t,
            "matrix-b",
            w,
            "the two bases of H^4 differ by a unimodular integral matrix",
        );
    }
    let xs = ds.with_index(n, i);
    let xps = ds.with_index(n + 1, i_p);
    for (dim, index, list) in [(n, i, &xs), (n + 1, i_p, &xps)] {
        if list.is_empty() && ds.covers(dim, index) {
            let w = vec![
                ("dim".to_string(), WitnessValue::Rat(int(dim.into()))),
                ("index".to_string(), WitnessValue::Rat(int(index.into()))),
            ];
            return exclude(t, "no-manifold", w, CITE_DATASET);
        }
    }
    for list in [&xs, &xps] {
        if !list.is_empty() && list.iter().all(|e| !e.cyclic_h4()) {
            let w = vec![("manifolds".to_string(), entries_named(list))];
            return exclude(t, "b4-rank", w, CITE_B4);
        }
    }
    let divisible = |e: &&FanoEntry, dim: u32, dd: i64| {
        let m = num_traits::pow(dd as u64, (dim / 2) as usize);
        e.degree.is_multiple_of(m)
    };
    let x_ok: Vec<&FanoEntry> = xs.iter().copied().filter(|e| divisible(e, n, d)).collect();
    let xp_ok: Vec<&FanoEntry> = xps.iter().copied().filter(|e| divisible(e, n + 1, d_p)).collect();
    for (list, all, dd, dim) in [(&x_ok, &xs, d, n), (&xp_ok, &xps, d_p, n + 1)] {
        if !all.is_empty() && list.iter().all(|e| !e.cyclic_h4()) {
            let w = vec![
                (
                    "degree_divisor".to_string(),
                    WitnessValue::Rat(int(num_traits::pow(dd, (dim / 2) as usize))),
                ),
                ("remaining".to_string(), entries_named(list)),
            ];
            let rule = if list.is_empty() {
                "degree-divisibility"
            } else {
                "hkg2-section"
            };
            return exclude(t, rule, w, CITE_HKG2);
        }
    }
    let mut data = t.into_data();
    if let ([x], [xp]) = (x_ok.as_slice(), xp_ok.as_slice()) {
        data.name_x = Some(x.name.clone());
        data.name_x_p = Some(xp.name.clone());
        data.deg_x = Some(int(x.degree as i64));
        data.deg_x_p = Some(int(xp.degree as i64));
    }
    data.label = Some("D1".to_string());
    data.status = Status::Admissible;
    Ok((InvariantTuple::new(data)?, None))
}

/// The finite branch: vanishing of the top Chern class forces `τ′ = 2`, the
/// argument condition then needs `tan²(π/2n)` rational, and both resulting
/// `n` contradict the hypotheses unless the target is projective space.
pub fn type_d_fin_analysis(tau_p_max: u32, n_max: u32, ds: &Dataset) -> FinAnalysis {
    let mut vanishing = Vec::new();
    for tp in 1..=i64::from(tau_p_max) {
        for j in 0..=tp {
            // (τ′−j)(−1+√Δ)/2 + j(−1−√Δ)/2 + τ′−1 = (τ′−2)/2 + (τ′−2j)/2·√Δ,
            // and √Δ is not real.
            if tp - 2 == 0 && tp - 2 * j == 0 {
                vanishing.push((tp, j));
            }
        }
    }
    let mut rational_n = Vec::new();
    let mut contradictions = Vec::new();
    for n in 2..=n_max {
        let Some(t2) = tan_sq_pi_over(2 * n) else {
            continue;
        };
        let delta = -t2;
        debug_assert!(delta.is_negative());
        // E = −K, so τ = i − 1 = 1 and ρ = 0.
        if !check_rho_tau(n, &int(1), &Rat::zero(), &delta).unwrap_or(false) {
            continue;
        }
        rational_n.push((n, delta));
        let xs = ds.with_index(n, 2);
        let xps: Vec<_> = ds.with_index(n + 1, 4);
        let why = if xs.is_empty() {
            format!("no {n}-fold of index 2 with Picard number one")
        } else if !xps.is_empty() && xps.iter().all(|e| !e.cyclic_h4()) {
            let names: Vec<_> = xps.iter().map(|e| e.name.as_str()).collect();
            format!("target of index 4 would be {} with b4 = 2", names.join(" "))
        } else {
            "not excluded by the dataset".to_string()
        };
        contradictions.push((n, why));
    }
    let outcomes = vec![
        NamedOutcome {
            label: "D2".into(),
            n: 2,
            name_x: "v_2(P^2)".into(),
            name_x_p: "P^3".into(),
            citation: format!("{CITE_SECANT}: secant lines of the twisted cubic"),
        },
        NamedOutcome {
            label: "D3".into(),
            n: 3,
            name_x: "V_5^3".into(),
            name_x_p: "P^4".into(),
            citation: format!("{CITE_SECANT}: trisecant lines of the projected Veronese surface"),
        },
    ];
    FinAnalysis {
        vanishing,
        rational_n,
        contradictions,
        outcomes,
        citation: format!("{CITE_LAZ}; {CITE_NIVEN}"),
    }
}
