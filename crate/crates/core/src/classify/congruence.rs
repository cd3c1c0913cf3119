//! Integer solutions of the congruence corollary and the invariants they
//! force on the contracted manifold.

use num_traits::{One, Signed};
use serde::Serialize;

use super::ClassifyError;
use crate::exact::{int, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CongruenceTuple {
    pub alpha: u32,
    pub z: u32,
    pub m: u32,
}

/// All `(α, z, m)` with `m ≤ m_max`, `0 < z`, `3z ≤ 2m`, `α ≥ 3` and
/// `α = (m−1)/(m−z−1)` integral, sorted by `(α, z, m)`.
pub fn enumerate_congruences(m_max: u32) -> Vec<CongruenceTuple> {
    let mut out = Vec::new();
    for m in 2..=m_max {
        for z in (1..m).filter(|z| 3 * z <= 2 * m) {
            let den = m - z - 1;
            if den == 0 || (m - 1) % den != 0 {
                continue;
            }
            let alpha = (m - 1) / den;
            if alpha >= 3 {
                out.push(CongruenceTuple { alpha, z, m });
            }
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceProfile {
    pub tuple: CongruenceTuple,
    pub index: u32,
    pub components: u32,
    pub vmrt_dim: u32,
    /// `L^{z+1}·H^{m−z−1}`.
    pub l_top: Rat,
    pub deg_z: Rat,
    pub bound: Rat,
}

/// Invariants forced by a tuple, given the positive number `L^z·H`
/// restricted to the exceptional locus.
pub fn congruence_profile(t: CongruenceTuple, lz_h: &Rat) -> Result<CongruenceProfile, ClassifyError> {
    if !lz_h.is_positive() {
        return Err(ClassifyError::InvalidInput(format!(
            "L^z*H must be positive, got {}",
            crate::exact::fmt_rat(lz_h)
        )));
    }
    let alpha = int(t.alpha.into());
    // L^kH^{m−k} = α·L^{k+1}H^{m−k−1}, starting from L^m = 1.
    let mut l_top = Rat::one();
    for _ in (t.z + 1)..t.m {
        l_top = &l_top * &alpha;
    }
    let bound = &l_top * &alpha;
    Ok(CongruenceProfile {
        tuple: t,
        index: t.m - t.z,
        components: t.alpha,
        vmrt_dim: t.m - t.z - 2,
        deg_z: &bound - lz_h,
        l_top,
        bound,
    })
}
