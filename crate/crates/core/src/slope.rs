//! Nef and pseudoeffective thresholds, the argument condition tying them to
//! the discriminant, and the closed forms used in the conic-bundle case.
//!
//! `τ` is the nef threshold of `−K + tH`, `ρ` the pseudoeffective one. Both
//! satisfy `n·arg(τ+√Δ) + arg(ρ+√Δ) = π`, which is tested exactly as
//! "`(ρ+√Δ)(τ+√Δ)ⁿ` is a negative real".

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chow::{intersection_degree, RingCtx, RingElem};
use crate::exact::{cos_pow_pi_over, cos_sq_pi_over, fmt_rat, int, tan_sq_pi_over, QuadNum, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("discriminant must be negative, got {0}")]
    NonNegativeDelta(String),
    #[error("threshold must be positive, got {0}")]
    NonPositiveTau(String),
    #[error("cos(pi/{0}) has no rational power of the required parity")]
    IrrationalCos(u32),
    #[error(transparent)]
    Chow(#[from] crate::chow::ChowError),
}

fn require_delta(delta: &Rat) -> Result<(), SlopeError> {
    if delta.is_negative() {
        Ok(())
    } else {
        Err(SlopeError::NonNegativeDelta(fmt_rat(delta)))
    }
}

fn require_tau(tau: &Rat) -> Result<(), SlopeError> {
    if tau.is_positive() {
        Ok(())
    } else {
        Err(SlopeError::NonPositiveTau(fmt_rat(tau)))
    }
}

/// `true` iff `(ρ+√Δ)·(τ+√Δ)ⁿ` is a negative real.
pub fn check_rho_tau(n: u32, tau: &Rat, rho: &Rat, delta: &Rat) -> Result<bool, SlopeError> {
    require_delta(delta)?;
    require_tau(tau)?;
    let t = QuadNum::shifted_root(tau.clone(), delta.clone()).expect("delta checked");
    let r = QuadNum::shifted_root(rho.clone(), delta.clone()).expect("delta checked");
    Ok((&r * &t.pow(n)).is_negative_real())
}

/// Discriminant for which `arg(τ+√Δ) = π/(n+1)`, i.e. `−τ²·tan²(π/(n+1))`.
pub fn boundary_delta(n: u32, tau: &Rat) -> Option<Rat> {
    tan_sq_pi_over(n + 1).map(|t| -(tau * tau * t))
}

/// `ν′ = 2·b_n / (μ·b_{n+1})` where `(τ+√Δ)^k = a_k + b_k√Δ`, when it is a
/// positive integer for which `ρ = τ − 2/(μν′)` satisfies the argument
/// condition.
pub fn solve_nu_prime(n: u32, tau: &Rat, delta: &Rat, mu: i64) -> Option<i64> {
    if !delta.is_negative() || !tau.is_positive() || mu <= 0 {
        return None;
    }
    let z = QuadNum::shifted_root(tau.clone(), delta.clone()).ok()?;
    let zn = z.pow(n);
    let zn1 = &zn * &z;
    if zn1.im_coeff().is_zero() {
        return None;
    }
    let nu_p = int(2) * zn.im_coeff() / (int(mu) * zn1.im_coeff());
    if !nu_p.is_integer() || !nu_p.is_positive() {
        return None;
    }
    let rho = tau - int(2) / (int(mu) * &nu_p);
    match check_rho_tau(n, tau, &rho, delta) {
        Ok(true) => crate::exact::to_i64(&nu_p),
        _ => None,
    }
}

/// `c₁′ = (8/τ)·cos²(π/(n+1)) − 4τ′`.
pub fn c1_prime(n: u32, tau: &Rat, tau_p: &Rat) -> Result<Rat, SlopeError> {
    require_tau(tau)?;
    let c2 = cos_sq_pi_over(n + 1).ok_or(SlopeError::IrrationalCos(n + 1))?;
    Ok(int(8) / tau * c2 - int(4) * tau_p)
}

/// Factor `τ^{n−1} / (2ⁿ·cos^{n−1}(π/(n+1)))` with `H_{X′}ⁿ = factor·H_Xⁿ`.
pub fn base_degree_ratio(n: u32, tau: &Rat) -> Result<Rat, SlopeError> {
    require_tau(tau)?;
    let c = cos_pow_pi_over(n + 1, n - 1).ok_or(SlopeError::IrrationalCos(n + 1))?;
    if c.is_zero() {
        return Err(SlopeError::IrrationalCos(n + 1));
    }
    Ok(num_traits::pow(tau.clone(), (n - 1) as usize) / (int(1 << n) * c))
}

/// `Y·f = −(c₁′μ + 2τ′)`.
pub fn y_dot_f(c1_p: &Rat, tau_p: &Rat, mu: i64) -> Rat {
    -(c1_p * int(mu) + int(2) * tau_p)
}

/// `(ν′+2)(νν′−1) + 2(ν+1)`, the coefficient of `H_X` in `π_*R` before the
/// tangent-class correction.
pub fn pushforward_first_term(nu: i64, nu_p: i64) -> Rat {
    int((nu_p + 2) * (nu * nu_p - 1) + 2 * (nu + 1))
}

/// Coefficient of `H_X` in `π_*R`, given the coefficient of `π_*π′^*c₂(T_{X′})`.
pub fn pushforward_r(nu: i64, nu_p: i64, c2_push_coeff: &Rat) -> Rat {
    pushforward_first_term(nu, nu_p) - c2_push_coeff
}

/// `K′²·H′^{n−1} = c₁′·H_{X′}ⁿ` in a context whose generators are `(−K′, H′)`.
pub fn adjunction_check(ctx_p: &Arc<RingCtx>, c1_p: &Rat, deg_x_p: &Rat) -> Result<bool, SlopeError> {
    let n = ctx_p.n();
    let e = &RingElem::g1(ctx_p).pow(2) * &RingElem::g2(ctx_p).pow(n - 1);
    Ok(intersection_degree(&e)? == c1_p * deg_x_p)
}

/// `(−K′H′ⁿ, K′²H′^{n−1})` from `−KHⁿ` in the conic case.
pub fn kprime_degree_formulas(
    n: u32,
    tau: &Rat,
    nu_p: i64,
    mu: i64,
    minus_khn: &Rat,
) -> Result<(Rat, Rat), SlopeError> {
    require_tau(tau)?;
    let q = n + 1;
    let cos_n1 = cos_pow_pi_over(q, n - 1).ok_or(SlopeError::IrrationalCos(q))?;
    let cos_sq = cos_sq_pi_over(q).ok_or(SlopeError::IrrationalCos(q))?;
    let mu_r = int(mu);
    let pow = |r: &Rat, e: i64| -> Rat {
        if e >= 0 {
            num_traits::pow(r.clone(), e as usize)
        } else {
            Rat::one() / num_traits::pow(r.clone(), (-e) as usize)
        }
    };
    let n_i = i64::from(n);
    let first = pow(&(&mu_r * tau), n_i - 1) / (int(1 << n) * &cos_n1) * minus_khn;
    let second = pow(&mu_r, n_i - 3) * pow(tau, n_i - 2) / (int(1 << (n - 1)) * &cos_n1)
        * (int(2) * cos_sq - int(nu_p) * &mu_r * tau)
        * minus_khn;
    Ok((first, second))
}

// ---- Invariant tuples ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Kind {
    P,
    D,
    C,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::P => "P",
            Kind::D => "D",
            Kind::C => "C",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Candidate,
    Admissible,
    Excluded(String),
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Candidate => "candidate",
            Status::Admissible => "admissible",
            Status::Excluded(_) => "excluded",
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Status::Excluded(r) => r,
            _ => "",
        }
    }
}

/// Raw fields of a candidate row. Turn it into an [`InvariantTuple`] with
/// [`InvariantTuple::new`], which checks every structural constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleData {
    pub n: u32,
    pub kind: Kind,
    pub lambda: i64,
    pub mu: i64,
    pub mu_p: i64,
    pub nu: i64,
    pub nu_p: i64,
    pub tau: Rat,
    pub tau_p: Rat,
    pub rho: Rat,
    pub i: i64,
    pub i_p: i64,
    pub c1: i64,
    pub delta: Rat,
    pub c2_over_d: Rat,
    pub deg_x: Option<Rat>,
    pub deg_x_p: Option<Rat>,
    pub c1_p: Option<Rat>,
    pub y_dot_f: Option<Rat>,
    pub d: Option<i64>,
    pub d_p: Option<i64>,
    pub b: Option<i64>,
    pub name_x: Option<String>,
    pub name_x_p: Option<String>,
    /// Case label such as `P1` or `D1`, when the row is identified.
    pub label: Option<String>,
    pub status: Status,
}

impl TupleData {
    /// Fills the fields forced by `(n, kind, μ, ν, ν′, c₁, Δ)`: `λ`, `τ`,
    /// `τ′`, `i`, `i′`, `c₂/d`, `ρ`.
    pub fn derive(n: u32, kind: Kind, mu: i64, nu: i64, nu_p: i64, c1: i64, delta: Rat) -> Self {
        let lambda = if kind == Kind::P { 2 } else { 1 };
        let tau = Rat::new(nu.into(), mu.into());
        let tau_p = Rat::new(nu_p.into(), mu.into());
        let rho = match kind {
            Kind::D => Rat::new((nu * nu_p - 2).into(), (mu * nu_p).into()),
            _ => tau.clone(),
        };
        let c2_over_d = (int(c1 * c1) - &delta) / int(4);
        Self {
            n,
            kind,
            lambda,
            mu,
            mu_p: mu,
            nu,
            nu_p,
            tau,
            tau_p,
            rho,
            i: (lambda + nu) / mu,
            i_p: (2 + nu_p) / mu,
            c1,
            delta,
            c2_over_d,
            deg_x: None,
            deg_x_p: None,
            c1_p: None,
            y_dot_f: None,
            d: None,
            d_p: None,
            b: None,
            name_x: None,
            name_x_p: None,
            label: None,
            status: Status::Candidate,
        }
    }
}

/// Reason a [`TupleData`] was rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TupleError {
    #[error("lambda must be 2 exactly for kind P")]
    Lambda,
    #[error("mu and mu' must agree")]
    MuMismatch,
    #[error("mu must be positive")]
    MuPositive,
    #[error("tau must equal nu/mu and tau' must equal nu'/mu'")]
    TauRatio,
    #[error("i*mu - nu must equal lambda")]
    IndexRelation,
    #[error("i'*mu' - nu' must equal 2")]
    IndexPrimeRelation,
    #[error("discriminant must be negative")]
    DeltaSign,
    #[error("c2/d must equal (c1^2 - Delta)/4")]
    C2Relation,
    #[error("c1 - i must be odd")]
    ParityC1,
    #[error("mu must be odd")]
    ParityMu,
    #[error("mu must be 1 for kinds D and C")]
    MuNotOne,
    #[error("rho does not match the kind")]
    Rho,
    #[error("(rho + sqrt Delta)(tau + sqrt Delta)^n is not a negative real")]
    RhoTau,
    #[error("c2 = (c2/d)*d is not an integer")]
    C2Integral,
    #[error("conic data c1' and Y.f are set exactly for kind C")]
    ConicFields,
}

impl TupleError {
    pub fn code(&self) -> &'static str {
        match self {
            TupleError::Lambda => "lambda",
            TupleError::MuMismatch => "mu-mismatch",
            TupleError::MuPositive => "mu-positive",
            TupleError::TauRatio => "tau-ratio",
            TupleError::IndexRelation => "index",
            TupleError::IndexPrimeRelation => "index-prime",
            TupleError::DeltaSign => "delta-sign",
            TupleError::C2Relation => "c2-relation",
            TupleError::ParityC1 => "parity-c1",
            TupleError::ParityMu => "parity-mu",
            TupleError::MuNotOne => "mu-not-one",
            TupleError::Rho => "rho",
            TupleError::RhoTau => "rho-tau",
            TupleError::C2Integral => "c2-integral",
            TupleError::ConicFields => "conic-fields",
        }
    }
}

/// A validated candidate row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantTuple(TupleData);

impl std::ops::Deref for InvariantTuple {
    type Target = TupleData;
    fn deref(&self) -> &TupleData {
        &self.0
    }
}

impl InvariantTuple {
    pub fn new(t: TupleData) -> Result<Self, TupleError> {
        if (t.kind == Kind::P) != (t.lambda == 2) || !(t.lambda == 1 || t.lambda == 2) {
            return Err(TupleError::Lambda);
        }
        if t.mu <= 0 {
            return Err(TupleError::MuPositive);
        }
        if t.mu != t.mu_p {
            return Err(TupleError::MuMismatch);
        }
        if t.tau != Rat::new(t.nu.into(), t.mu.into()) || t.tau_p != Rat::new(t.nu_p.into(), t.mu_p.into()) {
            return Err(TupleError::TauRatio);
        }
        if t.i * t.mu - t.nu != t.lambda {
            return Err(TupleError::IndexRelation);
        }
        if t.i_p * t.mu_p - t.nu_p != 2 {
            return Err(TupleError::IndexPrimeRelation);
        }
        if !t.delta.is_negative() {
            return Err(TupleError::DeltaSign);
        }
        if t.c2_over_d != (int(t.c1 * t.c1) - &t.delta) / int(4) {
            return Err(TupleError::C2Relation);
        }
        if t.kind != Kind::P {
            if (t.c1 - t.i).rem_euclid(2) != 1 {
                return Err(TupleError::ParityC1);
            }
            if t.mu % 2 == 0 {
                return Err(TupleError::ParityMu);
            }
            if t.mu != 1 {
                return Err(TupleError::MuNotOne);
            }
        }
        let rho = match t.kind {
            Kind::D => Rat::new((t.nu * t.nu_p - 2).into(), (t.mu * t.nu_p).into()),
            _ => t.tau.clone(),
        };
        if t.rho != rho {
            return Err(TupleError::Rho);
        }
        if !check_rho_tau(t.n, &t.tau, &t.rho, &t.delta).unwrap_or(false) {
            return Err(TupleError::RhoTau);
        }
        if let Some(d) = t.d {
            if !(&t.c2_over_d * int(d)).is_integer() {
                return Err(TupleError::C2Integral);
            }
        }
        let conic = t.kind == Kind::C;
        if conic != t.c1_p.is_some() || conic != t.y_dot_f.is_some() {
            return Err(TupleError::ConicFields);
        }
        Ok(Self(t))
    }

    pub fn data(&self) -> &TupleData {
        &self.0
    }

    pub fn into_data(self) -> TupleData {
        self.0
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.0.status = status;
        self
    }

    /// `c₂ = (c₂/d)·d` when `d` is known.
    pub fn c2(&self) -> Option<Rat> {
        self.d.map(|d| &self.c2_over_d * int(d))
    }

    /// Sort key `(n, τ, τ′)`.
    pub fn sort_key(&self) -> (u32, Rat, Rat) {
        (self.n, self.tau.clone(), self.tau_p.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chow::{basis_map_a, derived_context, lh_to_minus_k_h};
    use crate::exact::rat;

    #[test]
    fn rho_tau_examples() {
        assert!(check_rho_tau(2, &int(2), &int(2), &int(-12)).unwrap());
        assert!(check_rho_tau(2, &int(2), &int(0), &int(-4)).unwrap());
        assert!(!check_rho_tau(3, &int(1), &int(1), &int(-3)).unwrap());
        assert!(check_rho_tau(2, &int(1), &int(1), &int(0)).is_err());
    }

    #[test]
    fn nu_prime_examples() {
        assert_eq!(solve_nu_prime(3, &int(1), &rat(-1, 3), 1), Some(2));
        assert_eq!(solve_nu_prime(4, &int(3), &int(-3), 1), Some(1));
        assert_eq!(solve_nu_prime(3, &int(3), &int(-3), 1), None);
        assert_eq!(solve_nu_prime(2, &int(2), &int(-4), 1), Some(1));
        assert_eq!(solve_nu_prime(4, &int(1), &rat(-1, 3), 1), Some(3));
    }

    #[test]
    fn conic_closed_forms() {
        assert_eq!(c1_prime(5, &int(3), &int(1)).unwrap(), int(-2));
        assert_eq!(c1_prime(3, &int(1), &int(2)).unwrap(), int(-4));
        assert_eq!(c1_prime(2, &int(2), &int(1)).unwrap(), int(-3));
        assert_eq!(c1_prime(5, &int(1), &int(4)).unwrap(), int(-10));
        assert_eq!(base_degree_ratio(5, &int(1)).unwrap(), rat(1, 18));
        assert_eq!(base_degree_ratio(5, &int(3)).unwrap(), rat(9, 2));
        assert_eq!(base_degree_ratio(3, &int(2)).unwrap(), int(1));
        assert_eq!(base_degree_ratio(2, &int(2)).unwrap(), int(1));
        assert_eq!(y_dot_f(&int(-3), &int(1), 1), int(1));
        assert_eq!(y_dot_f(&int(-4), &int(2), 1), int(0));
        assert_eq!(y_dot_f(&int(-6), &int(3), 1), int(0));
    }

    #[test]
    fn pushforward_list() {
        assert_eq!(pushforward_first_term(1, 2), int(8));
        assert_eq!(pushforward_r(1, 2, &int(8)), int(0));
        assert_eq!(pushforward_r(1, 2, &int(17)), int(-9));
    }

    #[test]
    fn kprime_formulas() {
        assert_eq!(
            kprime_degree_formulas(5, &int(1), 3, 1, &int(72)).unwrap(),
            (int(4), int(-12))
        );
        assert_eq!(
            kprime_degree_formulas(3, &int(2), 1, 1, &int(4)).unwrap(),
            (int(4), int(-4))
        );
    }

    #[test]
    fn adjunction_in_derived_contexts() {
        let conic = |nu_p: i64, deg: i64| {
            let ctx = RingCtx::from_chern(5, int(-1), rat(1, 3), int(deg)).unwrap();
            let map = lh_to_minus_k_h(&int(-1)).compose(&basis_map_a(1, nu_p, 1, 1, 1).unwrap());
            derived_context(&ctx, &map, ("mKp", "Hp")).unwrap()
        };
        assert!(adjunction_check(&conic(4, 18), &int(-10), &int(1)).unwrap());
        assert!(adjunction_check(&conic(3, 36), &int(-6), &int(2)).unwrap());
        assert!(!adjunction_check(&conic(4, 18), &int(-5), &int(1)).unwrap());
    }

    fn p2_row() -> TupleData {
        let mut t = TupleData::derive(2, Kind::C, 1, 2, 1, 0, int(-12));
        t.c1_p = Some(int(-3));
        t.y_dot_f = Some(int(1));
        t.d = Some(1);
        t
    }

    #[test]
    fn constructor_accepts_table_row() {
        let t = InvariantTuple::new(p2_row()).unwrap();
        assert_eq!(t.i, 3);
        assert_eq!(t.c2(), Some(int(3)));
    }

    #[test]
    fn constructor_reasons_are_distinct() {
        let mut cases = Vec::new();
        let mut t = p2_row();
        t.mu_p = 3;
        cases.push(t);
        let mut t = p2_row();
        t.i = 4;
        cases.push(t);
        let mut t = p2_row();
        t.i_p = 4;
        cases.push(t);
        let mut t = p2_row();
        t.delta = int(1);
        cases.push(t);
        let mut t = p2_row();
        t.c1 = -1;
        t.c2_over_d = (int(1) - &t.delta) / int(4);
        cases.push(t);
        let mut t = p2_row();
        t.lambda = 2;
        cases.push(t);
        let mut t = p2_row();
        t.c2_over_d = int(5);
        cases.push(t);
        let mut t = p2_row();
        t.rho = int(1);
        cases.push(t);
        let mut t = p2_row();
        t.delta = int(-4);
        t.c2_over_d = int(1);
        cases.push(t);
        let codes: Vec<_> = cases
            .into_iter()
            .map(|t| InvariantTuple::new(t).unwrap_err().code())
            .collect();
        assert_eq!(
            codes,
            [
                "mu-mismatch",
                "index",
                "index-prime",
                "delta-sign",
                "parity-c1",
                "lambda",
                "c2-relation",
                "rho",
                "rho-tau"
            ]
        );
        let mut set = codes.clone();
        set.sort();
        set.dedup();
        assert_eq!(set.len(), codes.len());
    }
}
