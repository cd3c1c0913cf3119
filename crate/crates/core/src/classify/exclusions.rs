//! The two conic-bundle candidates over fivefolds that survive every generic
//! filter, each ruled out by its own computation.

use num_traits::{Signed, Zero};

use super::type_c::conic_data;
use super::{ClassifyError, ExclusionReport, WitnessValue};
use crate::chow::{basis_map_a, derived_context, intersection_degree, lh_to_minus_k_h, RingCtx, RingElem};
use crate::dataset::Dataset;
use crate::exact::{fmt_rat, int, Rat};
use crate::slope::{base_degree_ratio, InvariantTuple, Status};

/// Degree bound for prime Fano manifolds of coindex three.
const MUKAI_BOUND: i64 = 22;

const CITE_2_1: &str = "Mukai's classification of coindex-three Fano manifolds: the contracted \
                        manifold Z has degree at most 22, and the section class must be an \
                        integral multiple of the ample generator of Z";
const CITE_1_4: &str = "Schwarzenberger's condition for rank-two bundles on P^5: the Riemann-Roch \
                        integer attached to the pullback must have the parity of c1'";

fn w(key: &str, v: WitnessValue) -> (String, WitnessValue) {
    (key.to_string(), v)
}

/// `(n, τ, τ′) = (5, 2, 1)`: the divisor `Y` with `Y·f < 0` contracts to a
/// Fano sevenfold `Z` of coindex three, and pulling its ample generator back
/// gives a non-integral multiple.
pub fn exclude_2_1(ds: &Dataset) -> Result<ExclusionReport, ClassifyError> {
    let n = 5;
    let mut t = conic_data(n, 2, 1)?;
    let ratio = base_degree_ratio(n, &t.tau)?;
    let (i, i_p) = (t.i as u32, t.i_p as u32);
    let pair = ds
        .with_index(n, i)
        .into_iter()
        .filter(|x| x.cyclic_h4())
        .flat_map(|x| ds.with_index(n, i_p).into_iter().map(move |xp| (x, xp)))
        .find(|(x, xp)| xp.cyclic_h4() && int(xp.degree as i64) == &ratio * int(x.degree as i64))
        .ok_or_else(|| ClassifyError::MissingEntry("Mukai fivefolds with degrees in ratio 8/9".into()))?;
    let deg_x = int(pair.0.degree as i64);
    let deg_x_p = int(pair.1.degree as i64);

    // d_Z³·u ≤ 22 for the degree of Z, and d_Z² must divide H_X⁵.
    let deg_x_int = pair.0.degree as i64;
    let d_z: Vec<Rat> = (1..)
        .take_while(|d: &i64| d * d * d <= MUKAI_BOUND)
        .filter(|d| deg_x_int % (d * d) == 0)
        .map(int)
        .collect();
    // Restricted to X, the generator of Z satisfies x² = (c₂/d + c₁ + 1)·H_X²
    // while x·H_X⁴ = H_X⁵, so x = m·H_X with m² = m·(c₂/d + c₁ + 1).
    let x_sq = &t.c2_over_d + int(t.c1) + int(1);
    let m = &x_sq * &deg_x / &deg_x;
    let integral = m.is_integer();

    t.deg_x = Some(deg_x.clone());
    t.deg_x_p = Some(deg_x_p.clone());
    t.name_x = Some(pair.0.name.clone());
    t.name_x_p = Some(pair.1.name.clone());
    t.status = Status::Excluded("blowdown-degree".into());
    let witness = vec![
        w("deg_X", WitnessValue::Rat(deg_x)),
        w("deg_X_prime", WitnessValue::Rat(deg_x_p)),
        w("y_dot_f", WitnessValue::Rat(t.y_dot_f.clone().expect("conic"))),
        w("mukai_bound", WitnessValue::Rat(int(MUKAI_BOUND))),
        w("d_Z", WitnessValue::List(d_z)),
        w("x_squared", WitnessValue::Rat(x_sq)),
        w("m", WitnessValue::Rat(m)),
        w("m_integral", WitnessValue::Flag(integral)),
    ];
    Ok(ExclusionReport {
        candidate: InvariantTuple::new(t)?,
        rule: "blowdown-degree".into(),
        witness,
        citation: CITE_2_1.into(),
    })
}

/// `(n, τ, τ′) = (5, 1, 4)`: here `X′ = P⁵` and the bundle `E′` would have
/// an odd Riemann–Roch integer while `c₁′` is even.
pub fn exclude_1_4(ds: &Dataset) -> Result<ExclusionReport, ClassifyError> {
    let n = 5;
    let mut t = conic_data(n, 1, 4)?;
    let xp = ds
        .with_index(n, t.i_p as u32)
        .into_iter()
        .next()
        .ok_or_else(|| ClassifyError::MissingEntry("P^5".into()))?;
    let deg_x_p = int(xp.degree as i64);
    let deg_x = &deg_x_p / base_degree_ratio(n, &t.tau)?;

    let ctx = RingCtx::from_chern(n, int(t.c1), t.c2_over_d.clone(), deg_x.clone())?;
    let map = lh_to_minus_k_h(&int(t.c1)).compose(&basis_map_a(t.nu, t.nu_p, t.mu, t.mu_p, t.lambda)?);
    let dctx = derived_context(&ctx, &map, ("mKp", "Hp"))?;
    // K′^a·H′^{6−a} = (−1)^a·(−K′)^a·H′^{6−a}.
    let mono = |a: u32| -> Result<Rat, ClassifyError> {
        let e = &RingElem::g1(&dctx).pow(a) * &RingElem::g2(&dctx).pow(n + 1 - a);
        let v = intersection_degree(&e)?;
        Ok(if a % 2 == 1 { -v } else { v })
    };
    let c = t.c1_p.clone().expect("conic");
    let k1 = mono(1)?;
    let k2 = mono(2)?;
    let k3 = mono(3)?;
    let k4 = mono(4)?;
    let value = &k4 / int(2) - &c * &k3 / int(4) + &c * &c * &k2 / int(8) - &c * &c * &c * &k1 / int(16);
    let odd = value.is_integer() && !(value.to_integer() % 2u8).is_zero();
    let c_even = c.is_integer() && (c.to_integer() % 2u8).is_zero();
    let rel_b = dctx.rel_b();
    let relation = format!(
        "K'^2 = {}*K'*H' {} {}*H'^2",
        fmt_rat(&-dctx.rel_a()),
        if rel_b.is_negative() { '-' } else { '+' },
        fmt_rat(&rel_b.abs())
    );

    t.deg_x = Some(deg_x.clone());
    t.deg_x_p = Some(deg_x_p.clone());
    t.name_x = Some(format!("W_{}^{n}", fmt_rat(&deg_x)));
    t.name_x_p = Some(xp.name.clone());
    t.status = Status::Excluded("schwarzenberger".into());
    let witness = vec![
        w("deg_X", WitnessValue::Rat(deg_x)),
        w("deg_X_prime", WitnessValue::Rat(deg_x_p)),
        w("relation", WitnessValue::Text(relation)),
        w("K'H'^5", WitnessValue::Rat(k1)),
        w("K'^2H'^4", WitnessValue::Rat(k2)),
        w("K'^3H'^3", WitnessValue::Rat(k3)),
        w("K'^4H'^2", WitnessValue::Rat(k4)),
        w("c1_prime", WitnessValue::Rat(c)),
        w("value", WitnessValue::Rat(value)),
        w("value_odd", WitnessValue::Flag(odd)),
        w("c1_prime_even", WitnessValue::Flag(c_even)),
        w("parity_violated", WitnessValue::Flag(odd && c_even)),
    ];
    Ok(ExclusionReport {
        candidate: InvariantTuple::new(t)?,
        rule: "schwarzenberger".into(),
        witness,
        citation: CITE_1_4.into(),
    })
}
