//! Manifolds carrying a family of curves through every point, paired with the
//! pairs of contractions they produce.

use serde::Serialize;

use crate::exact::{int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyRow {
    pub x_prime: &'static str,
    pub family: &'static str,
    pub tau_family: i64,
    pub x: &'static str,
    pub tau: i64,
    /// `τ_ℳ / τ`.
    #[serde(serialize_with = "ser_rat")]
    pub factor: Rat,
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::fmt_rat(r))
}

/// One row per conic or line family, in increasing dimension.
pub fn family_table() -> Vec<FamilyRow> {
    const ROWS: [(&str, &str, i64, &str, i64); 5] = [
        ("P^2", "P^2", 2, "P^2", 1),
        ("P^3", "G(1,3)", 1, "V_4^3", 1),
        ("Q^3", "P^3", 2, "Q^3", 2),
        ("K(G2)", "Q^5", 3, "V_4^5", 3),
        ("Q^5", "G(1,6)_Q5", 1, "W_36^5", 1),
    ];
    ROWS.iter()
        .map(|&(x_prime, family, tau_family, x, tau)| FamilyRow {
            x_prime,
            family,
            tau_family,
            x,
            tau,
            factor: int(tau_family) / int(tau),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors() {
        let f: Vec<_> = family_table().into_iter().map(|r| r.factor).collect();
        assert_eq!(f, [int(2), int(1), int(1), int(1), int(1)]);
    }
}
