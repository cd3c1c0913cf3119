//! Pairs whose second contraction is again a `P¹`-bundle.
//!
//! Writing `−KHⁿ` in the other basis and back gives
//! `νν′ = μ²ττ′ = 4cos²(π/(n+1))`, which is an integer only for `n = 2, 3, 5`.

use num_traits::Zero;

use super::{sort_rows, ClassifyError};
use crate::dataset::{Dataset, FanoEntry};
use crate::exact::{cos_pow_pi_over, cos_sq_pi_over, int, Rat};
use crate::slope::{boundary_delta, InvariantTuple, Kind, Status, TupleData};

fn label(n: u32) -> &'static str {
    match n {
        2 => "P1",
        3 => "P2/P3",
        _ => "P4/P5",
    }
}

/// `H_Xⁿ / H_{X′}ⁿ = (μτ′ / (2cos(π/(n+1))))^{n−1}`.
fn degree_factor(n: u32, mu: i64, tau_p: &Rat) -> Option<Rat> {
    let cos = cos_pow_pi_over(n + 1, n - 1)?;
    let num = num_traits::pow(int(mu) * tau_p, (n - 1) as usize);
    Some(num / (int(1 << (n - 1)) * cos))
}

/// All factorizations `νν′ = 4cos²(π/(n+1))` realized by a pair of manifolds
/// in the dataset, one row per unordered pair with `ν ≥ ν′`.
pub fn enumerate_type_p(n: u32, ds: &Dataset) -> Result<Vec<InvariantTuple>, ClassifyError> {
    let k = cos_sq_pi_over(n + 1)
        .map(|c| c * int(4))
        .filter(|k| k.is_integer() && !k.is_zero())
        .ok_or_else(|| ClassifyError::UnsupportedN {
            n,
            reason: "no rational cos^2(pi/(n+1))".into(),
        })?;
    let k = crate::exact::to_i64(&k).expect("small integer");
    let mut rows = Vec::new();
    for nu in 1..=k {
        if k % nu != 0 || nu < k / nu {
            continue;
        }
        let nu_p = k / nu;
        for mu in 1..=(2 + nu.min(nu_p)) {
            if (2 + nu) % mu != 0 || (2 + nu_p) % mu != 0 {
                continue;
            }
            if let Some(t) = realize(n, mu, nu, nu_p, ds)? {
                rows.push(t);
            }
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

fn realize(n: u32, mu: i64, nu: i64, nu_p: i64, ds: &Dataset) -> Result<Option<InvariantTuple>, ClassifyError> {
    let tau = Rat::new(nu.into(), mu.into());
    let delta = boundary_delta(n, &tau).expect("n has a rational tangent");
    // Normalize c₁ by twisting so that c₂/d is integral when possible.
    let c1 = [0, -1]
        .into_iter()
        .find(|&c| ((int(c * c) - &delta) / int(4)).is_integer())
        .unwrap_or(0);
    let mut t = TupleData::derive(n, Kind::P, mu, nu, nu_p, c1, delta);
    let (Ok(i), Ok(i_p)) = (u32::try_from(t.i), u32::try_from(t.i_p)) else {
        return Ok(None);
    };
    let factor = degree_factor(n, mu, &t.tau_p).expect("rational for supported n");
    let xs = ds.with_index(n, i);
    let xps = ds.with_index(n, i_p);
    let pairs: Vec<(&FanoEntry, &FanoEntry)> = xs
        .iter()
        .flat_map(|x| xps.iter().map(move |xp| (*x, *xp)))
        .filter(|(x, xp)| x.cyclic_h4() && xp.cyclic_h4())
        .filter(|(x, xp)| int(x.degree as i64) == &factor * int(xp.degree as i64))
        .collect();
    let [(x, xp)] = pairs.as_slice() else {
        return Ok(None);
    };
    t.deg_x = Some(int(x.degree as i64));
    t.deg_x_p = Some(int(xp.degree as i64));
    t.name_x = Some(x.name.clone());
    t.name_x_p = Some(xp.name.clone());
    if n <= 3 {
        t.d = Some(x.degree as i64);
    }
    t.label = Some(label(n).to_string());
    t.status = Status::Admissible;
    Ok(Some(InvariantTuple::new(t)?))
}
