//! Truncated two-generator intersection ring of a projectivized rank-two
//! bundle, in Chern–Wu normal form.
//!
//! A context fixes `n = dim X`, one quadratic relation
//! `G1² = rel_a·G1·G2 + rel_b·G2²`, the vanishing `G2^{n+1} = 0`, and the
//! degree functional `G1·G2ⁿ ↦ degree_s`. Every element is stored on the
//! basis `G1^i·G2^j` with `i ∈ {0, 1}`, `j ≤ n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{fmt_rat, int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChowError {
    #[error("dimension n must be at least 2, got {0}")]
    SmallDimension(u32),
    #[error("degree_s must be positive, got {0}")]
    NonPositiveDegree(String),
    #[error("elements belong to different contexts")]
    ContextMismatch,
    #[error("element is not homogeneous of top degree {expected}")]
    NotTopDegree { expected: u32 },
    #[error("basis map is singular")]
    SingularMap,
    #[error("mapped classes do not span a valid context: {0}")]
    DegenerateMap(String),
    #[error("lambda must be 1 or 2, got {0}")]
    BadLambda(i64),
    #[error("mu and mu' must be positive and equal, got {0} and {1}")]
    BadMu(i64, i64),
}

/// Ring data shared by all elements built in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingCtx {
    n: u32,
    gen_names: (String, String),
    rel_a: Rat,
    rel_b: Rat,
    degree_s: Rat,
}

impl RingCtx {
    pub fn new(n: u32, gen_names: (&str, &str), rel_a: Rat, rel_b: Rat, degree_s: Rat) -> Result<Arc<Self>, ChowError> {
        if n < 2 {
            return Err(ChowError::SmallDimension(n));
        }
        if !degree_s.is_positive() {
            return Err(ChowError::NonPositiveDegree(fmt_rat(&degree_s)));
        }
        Ok(Arc::new(Self {
            n,
            gen_names: (gen_names.0.to_string(), gen_names.1.to_string()),
            rel_a,
            rel_b,
            degree_s,
        }))
    }

    /// The `(L, H)` context of `P(ℰ)` over an `n`-fold of degree `deg_x`:
    /// `L² = c₁·LH − (c₂/d)·H²`, `L·Hⁿ = deg_x`.
    pub fn from_chern(n: u32, c1: Rat, c2_over_d: Rat, deg_x: Rat) -> Result<Arc<Self>, ChowError> {
        Self::new(n, ("L", "H"), c1, -c2_over_d, deg_x)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn gen_names(&self) -> (&str, &str) {
        (&self.gen_names.0, &self.gen_names.1)
    }

    pub fn rel_a(&self) -> &Rat {
        &self.rel_a
    }

    pub fn rel_b(&self) -> &Rat {
        &self.rel_b
    }

    pub fn degree_s(&self) -> &Rat {
        &self.degree_s
    }

    /// `rel_a² + 4·rel_b`; for an `(L, H)` context this is `c₁² − 4c₂/d`.
    pub fn discriminant(&self) -> Rat {
        &self.rel_a * &self.rel_a + int(4) * &self.rel_b
    }

    /// Coefficients `(p, q)` with `G1^a ≡ p·G1·G2^{a−1} + q·G2^a`, `a ≥ 1`.
    fn g1_power(&self, a: u32) -> (Rat, Rat) {
        let (mut p, mut q) = (Rat::one(), Rat::zero());
        for _ in 1..a {
            let next_p = &p * &self.rel_a + &q;
            q = &p * &self.rel_b;
            p = next_p;
        }
        (p, q)
    }
}

/// Polynomial in the two generators before reduction: `(a, b) ↦ coeff` for
/// `G1^a·G2^b`.
pub type RawPoly = BTreeMap<(u32, u32), Rat>;

/// Element of a [`RingCtx`], always in normal form.
#[derive(Debug, Clone)]
pub struct RingElem {
    ctx: Arc<RingCtx>,
    coeffs: BTreeMap<(u8, u32), Rat>,
}

impl PartialEq for RingElem {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl Eq for RingElem {}

fn same_ctx(a: &Arc<RingCtx>, b: &Arc<RingCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Normal form of a raw polynomial.
pub fn reduce(raw: &RawPoly, ctx: &Arc<RingCtx>) -> RingElem {
    let mut out = RingElem::zero(ctx);
    for (&(a, b), c) in raw {
        out.add_monomial(a, b, c);
    }
    out
}

impl RingElem {
    pub fn zero(ctx: &Arc<RingCtx>) -> Self {
        Self {
            ctx: Arc::clone(ctx),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(ctx: &Arc<RingCtx>, r: Rat) -> Self {
        Self::monomial(ctx, 0, 0, r)
    }

    pub fn one(ctx: &Arc<RingCtx>) -> Self {
        Self::scalar(ctx, Rat::one())
    }

    pub fn g1(ctx: &Arc<RingCtx>) -> Self {
        Self::monomial(ctx, 1, 0, Rat::one())
    }

    pub fn g2(ctx: &Arc<RingCtx>) -> Self {
        Self::monomial(ctx, 0, 1, Rat::one())
    }

    /// `coeff·G1^a·G2^b`, reduced.
    pub fn monomial(ctx: &Arc<RingCtx>, a: u32, b: u32, coeff: Rat) -> Self {
        let mut out = Self::zero(ctx);
        out.add_monomial(a, b, &coeff);
        out
    }

    /// `x·G1 + y·G2`.
    pub fn linear(ctx: &Arc<RingCtx>, x: Rat, y: Rat) -> Self {
        let mut out = Self::monomial(ctx, 1, 0, x);
        out.add_monomial(0, 1, &y);
        out
    }

    pub fn ctx(&self) -> &Arc<RingCtx> {
        &self.ctx
    }

    /// Coefficient of `G1^i·G2^j` in normal form.
    pub fn coeff(&self, i: u8, j: u32) -> Rat {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, u32, &Rat)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `true` iff every term has total degree `d` (the zero element counts).
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.coeffs.keys().all(|&(i, j)| u32::from(i) + j == d)
    }

    /// Total degree when the element is nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.coeffs.keys().map(|&(i, j)| u32::from(i) + j);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The scalar value when the element lives in degree 0.
    pub fn as_scalar(&self) -> Option<Rat> {
        self.is_homogeneous_of(0).then(|| self.coeff(0, 0))
    }

    fn add_monomial(&mut self, a: u32, b: u32, c: &Rat) {
        let n = self.ctx.n;
        if c.is_zero() || a + b > n + 1 {
            return;
        }
        if a == 0 {
            if b <= n {
                self.bump(0, b, c.clone());
            }
            return;
        }
        let (p, q) = self.ctx.g1_power(a);
        let j = a - 1 + b;
        if j <= n {
            self.bump(1, j, c * p);
        }
        if j < n {
            self.bump(0, j + 1, c * q);
        }
    }

    fn bump(&mut self, i: u8, j: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    fn check(&self, other: &Self) -> Result<(), ChowError> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(ChowError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ChowError> {
        self.check(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.coeffs {
            out.bump(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ChowError> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ChowError> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (&(i, j), c) in &self.coeffs {
            for (&(k, l), e) in &other.coeffs {
                out.add_monomial(u32::from(i + k), j + l, &(c * e));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rat) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (&(i, j), c) in &self.coeffs {
            out.bump(i, j, c * r);
        }
        out
    }

    fn neg_ref(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn pow(&self, mut m: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.try_mul(&base).expect("same context");
            }
            m >>= 1;
            if m > 0 {
                base = base.try_mul(&base).expect("same context");
            }
        }
        acc
    }

    /// The element as a raw polynomial (already reduced).
    pub fn to_raw(&self) -> RawPoly {
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| ((u32::from(i), j), c.clone()))
            .collect()
    }
}

/// Degree of a top-degree class: coefficient of `G1·G2ⁿ` times `degree_s`.
pub fn intersection_degree(e: &RingElem) -> Result<Rat, ChowError> {
    let top = e.ctx.n + 1;
    if !e.is_homogeneous_of(top) {
        return Err(ChowError::NotTopDegree { expected: top });
    }
    Ok(e.coeff(1, e.ctx.n) * &e.ctx.degree_s)
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.try_add(rhs).expect("RingElem addition across contexts")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.try_sub(rhs).expect("RingElem subtraction across contexts")
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.try_mul(rhs).expect("RingElem product across contexts")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.coeffs.keys().copied().collect();
        keys.sort_by_key(|&(i, j)| (u32::from(i) + j, std::cmp::Reverse(i)));
        let (g1, g2) = self.ctx.gen_names();
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.coeffs[key];
            let mut factors = Vec::new();
            if key.0 == 1 {
                factors.push(g1.to_string());
            }
            match key.1 {
                0 => {}
                1 => factors.push(g2.to_string()),
                j => factors.push(format!("{g2}^{j}")),
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

// ---- Basis changes ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapLabel {
    /// Divisors: rows express `(−K, H)` in `(−K′, H′)`.
    A,
    AInverse,
    /// Codimension-two classes.
    B,
    /// Any other change of generators.
    Change,
}

/// A 2×2 rational matrix. As a change of generators, row `r` writes the
/// `r`-th old generator in terms of the new ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisMap {
    pub entries: [[Rat; 2]; 2],
    pub label: MapLabel,
}

impl BasisMap {
    pub fn new(entries: [[Rat; 2]; 2], label: MapLabel) -> Self {
        Self { entries, label }
    }

    pub fn identity() -> Self {
        Self::new([[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]], MapLabel::Change)
    }

    pub fn det(&self) -> Rat {
        let e = &self.entries;
        &e[0][0] * &e[1][1] - &e[0][1] * &e[1][0]
    }

    pub fn inverse(&self) -> Result<Self, ChowError> {
        let det = self.det();
        if det.is_zero() {
            return Err(ChowError::SingularMap);
        }
        let e = &self.entries;
        let label = match self.label {
            MapLabel::A => MapLabel::AInverse,
            MapLabel::AInverse => MapLabel::A,
            other => other,
        };
        Ok(Self::new(
            [
                [&e[1][1] / &det, -(&e[0][1] / &det)],
                [-(&e[1][0] / &det), &e[0][0] / &det],
            ],
            label,
        ))
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let (a, b) = (&self.entries, &rhs.entries);
        let cell = |r: usize, c: usize| &a[r][0] * &b[0][c] + &a[r][1] * &b[1][c];
        Self::new([[cell(0, 0), cell(0, 1)], [cell(1, 0), cell(1, 1)]], MapLabel::Change)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().flatten().all(|e| e.is_integer())
    }
}

/// Matrix `A` relating `(−K, H)` to `(−K′, H′)`.
pub fn basis_map_a(nu: i64, nu_p: i64, mu: i64, mu_p: i64, lambda: i64) -> Result<BasisMap, ChowError> {
    if lambda != 1 && lambda != 2 {
        return Err(ChowError::BadLambda(lambda));
    }
    if mu <= 0 || mu_p <= 0 || mu != mu_p {
        return Err(ChowError::BadMu(mu, mu_p));
    }
    let (nu, nu_p, mu, mu_p, l) = (int(nu), int(nu_p), int(mu), int(mu_p), int(lambda));
    let entries = [
        [-(&nu / &l), (int(2) * &l - &nu * &nu_p) / (&l * &mu_p)],
        [&mu / &l, &mu * &nu_p / (&mu_p * &l)],
    ];
    Ok(BasisMap::new(entries, MapLabel::A))
}

/// Change of generators from `(L, H)` to `(−K, H)` with `K = −2L + c₁H`.
pub fn lh_to_minus_k_h(c1: &Rat) -> BasisMap {
    let half = Rat::new(1.into(), 2.into());
    BasisMap::new(
        [[half.clone(), c1 * &half], [Rat::zero(), Rat::one()]],
        MapLabel::Change,
    )
}

/// Context whose generators are the new classes of `map`, with relation and
/// degree recomputed so that every intersection number agrees with `ctx`.
pub fn derived_context(ctx: &Arc<RingCtx>, map: &BasisMap, names: (&str, &str)) -> Result<Arc<RingCtx>, ChowError> {
    let inv = map.inverse()?;
    let (g1, g2) = new_generators(ctx, &inv);
    let sq = &g1 * &g1;
    let mixed = &g1 * &g2;
    let g2sq = &g2 * &g2;
    // Solve sq = a·mixed + b·g2sq on the basis (G1G2, G2²) of degree two.
    let (m1, m2) = (mixed.coeff(1, 1), mixed.coeff(0, 2));
    let (q1, q2) = (g2sq.coeff(1, 1), g2sq.coeff(0, 2));
    let (s1, s2) = (sq.coeff(1, 1), sq.coeff(0, 2));
    let det = &m1 * &q2 - &q1 * &m2;
    if det.is_zero() {
        return Err(ChowError::DegenerateMap("degree-two classes are dependent".into()));
    }
    let rel_a = (&s1 * &q2 - &q1 * &s2) / &det;
    let rel_b = (&m1 * &s2 - &s1 * &m2) / &det;
    let n = ctx.n;
    let vanish = intersection_degree(&g2.pow(n + 1))?;
    if !vanish.is_zero() {
        return Err(ChowError::DegenerateMap(format!(
            "second generator has top power of degree {vanish}"
        )));
    }
    let degree_s = intersection_degree(&(&g1 * &g2.pow(n)))?;
    if !degree_s.is_positive() {
        return Err(ChowError::DegenerateMap(format!(
            "first generator times top power of the second has degree {degree_s}"
        )));
    }
    RingCtx::new(n, names, rel_a, rel_b, degree_s)
}

/// The new generators written in `ctx`, given the inverse of a change map.
fn new_generators(ctx: &Arc<RingCtx>, inv: &BasisMap) -> (RingElem, RingElem) {
    let e = &inv.entries;
    (
        RingElem::linear(ctx, e[0][0].clone(), e[0][1].clone()),
        RingElem::linear(ctx, e[1][0].clone(), e[1][1].clone()),
    )
}

/// Rewrites `elem` (in the old context) in `target`, whose generators are the
/// new classes of `map`.
pub fn transport(elem: &RingElem, map: &BasisMap, target: &Arc<RingCtx>) -> RingElem {
    let e = &map.entries;
    let old1 = RingElem::linear(target, e[0][0].clone(), e[0][1].clone());
    let old2 = RingElem::linear(target, e[1][0].clone(), e[1][1].clone());
    let mut out = RingElem::zero(target);
    for (i, j, c) in elem.terms() {
        let mut term = old2.pow(j).scale(c);
        if i == 1 {
            term = &term * &old1;
        }
        out = &out + &term;
    }
    out
}

/// Integrality and unimodularity checks for matrix `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BReport {
    pub all_integral: bool,
    pub det: Rat,
    pub det_is_unit: bool,
    /// `d·(ν² − Δμ²)`.
    pub identity_lhs: Rat,
    /// `4·b·d′`.
    pub identity_rhs: Rat,
    pub identity_holds: bool,
}

impl BReport {
    pub fn ok(&self) -> bool {
        self.all_integral && self.det_is_unit && self.identity_holds
    }
}

/// Matrix `B` between the two codimension-two bases and its report.
#[allow(clippy::too_many_arguments)]
pub fn basis_map_b(
    nu: &Rat,
    nu_p: &Rat,
    mu: &Rat,
    c1: &Rat,
    delta: &Rat,
    d: &Rat,
    b: &Rat,
    d_p: &Rat,
) -> (BasisMap, BReport) {
    let one = Rat::one();
    let two = int(2);
    let four = int(4);
    let nn = nu * nu_p;
    let b11 = (&nn - &one) / b;
    let b12 = d / (&four * b * mu) * (nu_p * mu * mu * delta + &two * c1 * (&one - &nn) * mu + nu * (&nn - &two));
    let b21 = nu * mu / d_p;
    let b22 = d / (&four * d_p) * (delta * mu * mu - &two * c1 * nu * mu + nu * nu);
    let map = BasisMap::new([[b11, b12], [b21, b22]], MapLabel::B);
    let det = map.det();
    let lhs = d * (nu * nu - delta * mu * mu);
    let rhs = &four * b * d_p;
    let report = BReport {
        all_integral: map.is_integral(),
        det_is_unit: det.abs().is_one(),
        det,
        identity_holds: lhs.abs() == rhs.abs(),
        identity_lhs: lhs,
        identity_rhs: rhs,
    };
    (map, report)
}
