//! Exact scalars: arbitrary-precision rationals and the imaginary quadratic
//! extension `Q(√Δ)`, `Δ < 0`.
//!
//! A [`QuadNum`] `a + b√Δ` is a complex number whose imaginary part has the
//! sign of `b`. Everything that the cone computations need (signs of imaginary
//! parts, "is a negative real", comparisons of arguments against `π/q`) is
//! decided exactly from the rational coordinates.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// `p/q` as a [`Rat`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// The integer `p` as a [`Rat`].
pub fn int(p: i64) -> Rat {
    Rat::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"` (optional leading `-`), rejecting zero denominators.
pub fn parse_rat(text: &str) -> Result<Rat, ExactError> {
    let text = text.trim();
    let bad = || ExactError::BadRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(ExactError::ZeroDenominator(text.to_string()));
    }
    Ok(Rat::new(num, den))
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    r.to_string()
}

/// `true` iff `r` is an integer.
pub fn is_integral(r: &Rat) -> bool {
    r.is_integer()
}

/// The integer value of `r` if it is integral and fits an `i64`.
pub fn to_i64(r: &Rat) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("discriminant must be negative, got {0}")]
    NonNegativeDelta(String),
    #[error("cannot combine numbers over different discriminants {left} and {right}")]
    DeltaMismatch { left: String, right: String },
    #[error("argument is undefined for zero")]
    Zero,
    #[error("{0} lies in the open lower half plane")]
    LowerHalfPlane(String),
    #[error("malformed rational {0:?}")]
    BadRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// An element `re + im·√Δ` of `Q(√Δ)` with `Δ < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNum {
    re: Rat,
    im: Rat,
    delta: Rat,
}

impl QuadNum {
    pub fn new(re: Rat, im_coeff: Rat, delta: Rat) -> Result<Self, ExactError> {
        if !delta.is_negative() {
            return Err(ExactError::NonNegativeDelta(fmt_rat(&delta)));
        }
        Ok(Self {
            re,
            im: im_coeff,
            delta,
        })
    }

    /// The rational `r` viewed in `Q(√Δ)`.
    pub fn from_rat(r: Rat, delta: Rat) -> Result<Self, ExactError> {
        Self::new(r, Rat::zero(), delta)
    }

    /// `t + √Δ`.
    pub fn shifted_root(t: Rat, delta: Rat) -> Result<Self, ExactError> {
        Self::new(t, Rat::one(), delta)
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im_coeff(&self) -> &Rat {
        &self.im
    }

    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `a² − Δb²`, i.e. `|z|²`.
    pub fn norm(&self) -> Rat {
        &self.re * &self.re - &self.delta * &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
            delta: self.delta.clone(),
        }
    }

    /// Sign of the imaginary part.
    pub fn im_sign(&self) -> Ordering {
        self.im.cmp(&Rat::zero())
    }

    fn same_field(&self, other: &Self) -> Result<(), ExactError> {
        if self.delta != other.delta {
            return Err(ExactError::DeltaMismatch {
                left: fmt_rat(&self.delta),
                right: fmt_rat(&other.delta),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        Ok(Self {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            delta: self.delta.clone(),
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        Ok(Self {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
            delta: self.delta.clone(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ExactError> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let re = &self.re * &other.re + &self.delta * &self.im * &other.im;
        let im = &self.re * &other.im + &self.im * &other.re;
        Self {
            re,
            im,
            delta: self.delta.clone(),
        }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self {
            re: &self.re * r,
            im: &self.im * r,
            delta: self.delta.clone(),
        }
    }

    /// Exact `m`-th power by repeated squaring.
    pub fn pow(&self, mut m: u32) -> Self {
        let mut acc = Self {
            re: Rat::one(),
            im: Rat::zero(),
            delta: self.delta.clone(),
        };
        let mut base = self.clone();
        while m > 0 {
            if m & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            m >>= 1;
            if m > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// `true` iff the number is a strictly negative real.
    pub fn is_negative_real(&self) -> bool {
        self.im.is_zero() && self.re.is_negative()
    }

    /// Decides `arg(z) < π/q` for `z` in the closed upper half plane.
    ///
    /// With `θ = arg z ∈ (0, π)`, `θ < π/q` holds exactly when `Im(z^k) > 0`
    /// for all `1 ≤ k ≤ q`: if `θ ≥ π/q`, the first `k` with `kθ ≥ π` has
    /// `kθ < π + θ < 2π`, so `Im(z^k) ≤ 0`.
    pub fn arg_less_than(&self, q: u32) -> Result<bool, ExactError> {
        if self.is_zero() {
            return Err(ExactError::Zero);
        }
        if self.im.is_negative() {
            return Err(ExactError::LowerHalfPlane(self.to_string()));
        }
        if self.im.is_zero() {
            // arg is 0 on the positive axis and π on the negative one.
            return Ok(self.re.is_positive() && q >= 1);
        }
        let mut power = self.clone();
        for _ in 2..=q {
            power = power.mul_unchecked(self);
            if !power.im.is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√({})", self.re, self.im, self.delta)
    }
}

impl Add for &QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &QuadNum) -> QuadNum {
        self.try_add(rhs).expect("QuadNum addition across discriminants")
    }
}

impl Sub for &QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &QuadNum) -> QuadNum {
        self.try_sub(rhs).expect("QuadNum subtraction across discriminants")
    }
}

impl Mul for &QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &QuadNum) -> QuadNum {
        self.try_mul(rhs).expect("QuadNum product across discriminants")
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            re: -self.re.clone(),
            im: -self.im.clone(),
            delta: self.delta.clone(),
        }
    }
}

pub fn quad_pow(z: &QuadNum, m: u32) -> QuadNum {
    z.pow(m)
}

pub fn is_negative_real(z: &QuadNum) -> bool {
    z.is_negative_real()
}

pub fn arg_less_than(z: &QuadNum, q: u32) -> Result<bool, ExactError> {
    z.arg_less_than(q)
}

/// `cos²(π/q)` when it is rational.
///
/// `cos²(π/q) = (1 + cos(2π/q))/2`, and by Niven's theorem `cos(2π/q)` is
/// rational only for `q ∈ {1, 2, 3, 4, 6}`. Returns `None` for every other
/// `q` (the value is irrational) and for `q < 2`.
pub fn cos_sq_pi_over(q: u32) -> Option<Rat> {
    match q {
        2 => Some(Rat::zero()),
        3 => Some(rat(1, 4)),
        4 => Some(rat(1, 2)),
        6 => Some(rat(3, 4)),
        _ => None,
    }
}

/// `tan²(π/q)` when it is rational and finite: 3, 1, 1/3 for `q = 3, 4, 6`.
/// `q = 2` is a pole; other `q` give irrational values.
pub fn tan_sq_pi_over(q: u32) -> Option<Rat> {
    let c2 = cos_sq_pi_over(q)?;
    if c2.is_zero() {
        return None;
    }
    Some((Rat::one() - &c2) / c2)
}

/// `cos(π/q)^e` when rational. Even powers go through [`cos_sq_pi_over`];
/// odd powers need `cos(π/q)` itself rational (`q ∈ {2, 3}`).
pub fn cos_pow_pi_over(q: u32, e: u32) -> Option<Rat> {
    if e.is_multiple_of(2) {
        let c2 = cos_sq_pi_over(q)?;
        return Some(num_traits::pow(c2, (e / 2) as usize));
    }
    let c = match q {
        2 => Rat::zero(),
        3 => rat(1, 2),
        _ => return None,
    };
    Some(num_traits::pow(c, e as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(re: i64, im: i64, delta: Rat) -> QuadNum {
        QuadNum::new(int(re), int(im), delta).unwrap()
    }

    #[test]
    fn powers_match_hand_expansion() {
        assert_eq!(q(1, 1, int(-1)).pow(4), q(-4, 0, int(-1)));
        assert_eq!(q(2, 1, int(-12)).pow(3), q(-64, 0, int(-12)));
        assert_eq!(q(3, 1, int(-3)).pow(3), q(0, 24, int(-3)));
        assert_eq!(q(3, 1, int(-3)).pow(0), q(1, 0, int(-3)));
    }

    #[test]
    fn negative_real_detection() {
        assert!(q(-64, 0, int(-12)).is_negative_real());
        assert!(!q(0, 24, int(-3)).is_negative_real());
        assert!(q(-4, 0, int(-1)).is_negative_real());
        assert!(!q(4, 0, int(-1)).is_negative_real());
    }

    #[test]
    fn arg_comparisons() {
        assert!(!q(1, 1, int(-3)).arg_less_than(3).unwrap());
        assert!(q(2, 1, int(-4)).arg_less_than(3).unwrap());
        assert!(!q(1, 1, int(-1)).arg_less_than(4).unwrap());
        assert!(q(1, 1, int(-1)).arg_less_than(3).unwrap());
        assert!(q(5, 0, int(-1)).arg_less_than(7).unwrap());
        assert!(!q(-5, 0, int(-1)).arg_less_than(2).unwrap());
        assert_eq!(q(0, 0, int(-1)).arg_less_than(3), Err(ExactError::Zero));
        assert!(matches!(
            q(1, -1, int(-1)).arg_less_than(3),
            Err(ExactError::LowerHalfPlane(_))
        ));
    }

    #[test]
    fn niven_lookup() {
        assert_eq!(tan_sq_pi_over(6), Some(rat(1, 3)));
        assert_eq!(tan_sq_pi_over(4), Some(int(1)));
        assert_eq!(tan_sq_pi_over(3), Some(int(3)));
        assert_eq!(tan_sq_pi_over(5), None);
        assert_eq!(tan_sq_pi_over(2), None);
        assert_eq!(cos_sq_pi_over(2), Some(int(0)));
        assert_eq!(cos_sq_pi_over(6), Some(rat(3, 4)));
        assert_eq!(cos_sq_pi_over(8), None);
        assert_eq!(cos_pow_pi_over(3, 1), Some(rat(1, 2)));
        assert_eq!(cos_pow_pi_over(6, 4), Some(rat(9, 16)));
        assert_eq!(cos_pow_pi_over(4, 1), None);
    }

    #[test]
    fn mixing_discriminants_is_reported() {
        let a = q(1, 1, int(-1));
        let b = q(1, 1, int(-3));
        assert!(matches!(a.try_mul(&b), Err(ExactError::DeltaMismatch { .. })));
        assert!(QuadNum::new(int(1), int(1), int(0)).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rat("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rat("18").unwrap(), int(18));
        assert_eq!(parse_rat("4/6").unwrap(), rat(2, 3));
        assert!(matches!(parse_rat("2/0"), Err(ExactError::ZeroDenominator(_))));
        assert!(parse_rat("x").is_err());
        assert_eq!(fmt_rat(&rat(-1, 3)), "-1/3");
    }
}
