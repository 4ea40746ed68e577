//! Extended reals `ℝ ∪ {−∞, +∞}`.
//!
//! Finite values are carried by [`Scalar`], which is either an exact rational
//! or a finite `f64`. Mixing the two degrades to float. Which one the boundary
//! produces when parsing is decided once, by [`Backing`].
//!
//! Two additions are provided because `(+∞) + (−∞)` has no canonical value:
//! [`ExtReal::lower_add`] makes `−∞` absorbing and [`ExtReal::upper_add`]
//! makes `+∞` absorbing. Scalar multiplication follows `0 × (±∞) = 0`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A finite scalar. The `Float` variant never holds NaN; it may only hold an
/// infinity transiently, and [`ExtReal::finite`] folds that into `±∞`.
#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num / den`. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn float(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(Scalar::Float(x))
        } else {
            Err(Error::Arithmetic(format!("non-finite scalar {x}")))
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(x) => *x == 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(x) => *x < 0.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(x) => *x > 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(x) => *x,
        }
    }

    /// Exact value of the scalar, if it is exact or a finite float.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Exact(r) => Some(r.clone()),
            Scalar::Float(x) => BigRational::from_float(*x),
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn powi(&self, exp: u32) -> Self {
        match self {
            Scalar::Exact(r) => Scalar::Exact(num::pow::pow(r.clone(), exp as usize)),
            Scalar::Float(x) => Scalar::Float(x.powi(exp as i32)),
        }
    }

    /// `self^(1/p)` for nonnegative `self` and `p ≥ 1`. Stays exact when `p`
    /// is an integer and `self` is a perfect `p`-th power.
    pub fn root(&self, p: &Scalar) -> Self {
        if let (Scalar::Exact(r), Some(k)) = (self, p.as_small_integer()) {
            if k >= 1 && !r.is_negative() {
                let k = k as u32;
                let n = r.numer().nth_root(k);
                let d = r.denom().nth_root(k);
                if num::pow::pow(n.clone(), k as usize) == *r.numer()
                    && num::pow::pow(d.clone(), k as usize) == *r.denom()
                {
                    return Scalar::Exact(BigRational::new(n, d));
                }
            }
        }
        Scalar::Float(self.to_f64().powf(1.0 / p.to_f64()))
    }

    /// `self^p` for nonnegative `self`; exact for integer `p`.
    pub fn pow(&self, p: &Scalar) -> Self {
        match p.as_small_integer() {
            Some(k) if k >= 0 => self.powi(k as u32),
            _ => Scalar::Float(self.to_f64().powf(p.to_f64())),
        }
    }

    /// The value as an `i64` when it is an exact (or float-exact) integer of
    /// moderate size.
    pub fn as_small_integer(&self) -> Option<i64> {
        match self {
            Scalar::Exact(r) if r.is_integer() => r.to_integer().to_i64(),
            Scalar::Float(x) if x.fract() == 0.0 && x.abs() < 1e15 => Some(*x as i64),
            _ => None,
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(x) = r.to_f64() {
        return x;
    }
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    n / d
}

fn float_binop(a: &Scalar, b: &Scalar, op: impl Fn(f64, f64) -> f64) -> Scalar {
    Scalar::Float(op(a.to_f64(), b.to_f64()))
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => float_binop(self, rhs, |x, y| x + y),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => float_binop(self, rhs, |x, y| x - y),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => float_binop(self, rhs, |x, y| x * y),
        }
    }
}

impl Scalar {
    /// Division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        if rhs.is_zero() {
            return None;
        }
        Some(match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            _ => float_binop(self, rhs, |x, y| x / y),
        })
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Float(x) => Scalar::Float(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b).unwrap_or_else(|| a.total_cmp(b)),
            (Scalar::Exact(a), Scalar::Float(b)) => cmp_exact_float(a, *b),
            (Scalar::Float(a), Scalar::Exact(b)) => cmp_exact_float(b, *a).reverse(),
        }
    }
}

fn cmp_exact_float(a: &BigRational, b: f64) -> Ordering {
    match BigRational::from_float(b) {
        Some(b) => a.cmp(&b),
        None if b > 0.0 => Ordering::Less,
        None => Ordering::Greater,
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x:?}"),
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

/// Numeric backing selected at the parsing boundary.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backing {
    #[default]
    Rational,
    Float,
}

impl Backing {
    pub const ENV_VAR: &'static str = "INTERLAB_BACKING";

    /// Reads `INTERLAB_BACKING` (`rational` or `float`); unset means rational.
    pub fn from_env() -> Result<Self> {
        match std::env::var(Self::ENV_VAR) {
            Err(_) => Ok(Backing::Rational),
            Ok(v) => v.parse(),
        }
    }

    /// Parses a decimal literal (`-12`, `2.5`, `1e9`, `3.2E-4`) or a
    /// fraction `p/q`.
    pub fn parse_scalar(self, text: &str) -> Result<Scalar> {
        let exact = parse_exact(text.trim())
            .ok_or_else(|| Error::schema(format!("not a number: {text:?}")))?;
        Ok(match self {
            Backing::Rational => Scalar::Exact(exact),
            Backing::Float => Scalar::float(rational_to_f64(&exact))?,
        })
    }

    /// Converts a scalar produced elsewhere into this backing.
    pub fn coerce(self, s: Scalar) -> Scalar {
        match (self, &s) {
            (Backing::Float, Scalar::Exact(r)) => Scalar::Float(rational_to_f64(r)),
            _ => s,
        }
    }

    pub fn default_tolerance(self) -> Scalar {
        match self {
            Backing::Rational => Scalar::zero(),
            Backing::Float => Scalar::Float(1e-9),
        }
    }
}

impl std::str::FromStr for Backing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rational" | "exact" => Ok(Backing::Rational),
            "float" => Ok(Backing::Float),
            other => Err(Error::schema(format!("unknown backing {other:?}"))),
        }
    }
}

fn parse_exact(text: &str) -> Option<BigRational> {
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(all);
    if scale >= 0 {
        value *= BigRational::from_integer(num::pow::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num::pow::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// An element of `ℝ̄`. The derived order is the usual total order
/// `−∞ < finite < +∞`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtReal {
    NegInf,
    Finite(Scalar),
    PosInf,
}

impl ExtReal {
    pub fn zero() -> Self {
        ExtReal::Finite(Scalar::zero())
    }

    pub fn int(n: i64) -> Self {
        ExtReal::Finite(Scalar::int(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        ExtReal::Finite(Scalar::ratio(num, den))
    }

    /// Wraps a scalar, folding a transient float overflow into `±∞`.
    pub fn finite(s: Scalar) -> Self {
        match s {
            Scalar::Float(x) if x == f64::INFINITY => ExtReal::PosInf,
            Scalar::Float(x) if x == f64::NEG_INFINITY => ExtReal::NegInf,
            s => ExtReal::Finite(s),
        }
    }

    /// Float constructor; `±inf` map to the infinities, NaN is rejected.
    pub fn from_f64(x: f64) -> Result<Self> {
        if x.is_nan() {
            Err(Error::Arithmetic("NaN is not an extended real".into()))
        } else {
            Ok(ExtReal::finite(Scalar::Float(x)))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    pub fn is_neg_inf(&self) -> bool {
        matches!(self, ExtReal::NegInf)
    }

    pub fn as_finite(&self) -> Option<&Scalar> {
        match self {
            ExtReal::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_finite().is_some_and(Scalar::is_zero)
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExtReal::NegInf => true,
            ExtReal::Finite(s) => s.is_negative(),
            ExtReal::PosInf => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::NegInf => f64::NEG_INFINITY,
            ExtReal::Finite(s) => s.to_f64(),
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    /// Addition with `−∞` absorbing: `(+∞) ∔ (−∞) = −∞`.
    pub fn lower_add(&self, other: &ExtReal) -> ExtReal {
        use ExtReal::*;
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => ExtReal::finite(a + b),
        }
    }

    /// Addition with `+∞` absorbing: `(+∞) ∓ (−∞) = +∞`.
    pub fn upper_add(&self, other: &ExtReal) -> ExtReal {
        use ExtReal::*;
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => ExtReal::finite(a + b),
        }
    }

    /// Plain addition; `None` for the undefined `(+∞) + (−∞)`.
    pub fn checked_add(&self, other: &ExtReal) -> Option<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => None,
            _ => Some(self.lower_add(other)),
        }
    }

    /// `λ × a` with `0 × (±∞) = 0` and sign flip for negative `λ`.
    pub fn scalar_mul(&self, lambda: &Scalar) -> ExtReal {
        match self {
            ExtReal::Finite(a) => ExtReal::finite(lambda * a),
            _ if lambda.is_zero() => ExtReal::zero(),
            inf if lambda.is_positive() => inf.clone(),
            inf => -inf,
        }
    }

    /// `max(0, a)`
    pub fn pos_part(&self) -> ExtReal {
        self.clone().max(ExtReal::zero())
    }

    /// `max(0, −a)`
    pub fn neg_part(&self) -> ExtReal {
        (-self).max(ExtReal::zero())
    }

    /// `|a − b|` for finite operands.
    pub fn finite_distance(&self, other: &ExtReal) -> Option<Scalar> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some((a - b).abs()),
            _ => None,
        }
    }

    /// Equality up to `tol` for finite values; infinities must match exactly.
    pub fn approx_eq(&self, other: &ExtReal, tol: &Scalar) -> bool {
        match self.finite_distance(other) {
            Some(d) => d <= *tol,
            None => self == other,
        }
    }

    /// `self ≤ other + tol`; infinities compare exactly.
    pub fn leq_within(&self, other: &ExtReal, tol: &Scalar) -> bool {
        if self <= other {
            return true;
        }
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b) <= *tol,
            _ => false,
        }
    }
}

impl Neg for &ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        match self {
            ExtReal::NegInf => ExtReal::PosInf,
            ExtReal::PosInf => ExtReal::NegInf,
            ExtReal::Finite(s) => ExtReal::Finite(-s),
        }
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;
    fn neg(self) -> ExtReal {
        -&self
    }
}

impl From<Scalar> for ExtReal {
    fn from(s: Scalar) -> Self {
        ExtReal::finite(s)
    }
}

impl From<i64> for ExtReal {
    fn from(n: i64) -> Self {
        ExtReal::int(n)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => f.write_str("-inf"),
            ExtReal::PosInf => f.write_str("+inf"),
            ExtReal::Finite(s) => s.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(v: i64) -> ExtReal {
        ExtReal::int(v)
    }
    const P: ExtReal = ExtReal::PosInf;
    const M: ExtReal = ExtReal::NegInf;

    #[test]
    fn lower_add_cases() {
        assert_eq!(P.lower_add(&M), M);
        assert_eq!(M.lower_add(&P), M);
        assert_eq!(n(3).lower_add(&n(4)), n(7));
        assert_eq!(P.lower_add(&P), P);
    }

    #[test]
    fn upper_add_cases() {
        assert_eq!(P.upper_add(&M), P);
        assert_eq!(n(-5).upper_add(&M), M);
        assert_eq!(n(0).upper_add(&n(0)), n(0));
    }

    #[test]
    fn scalar_mul_cases() {
        assert_eq!(P.scalar_mul(&Scalar::zero()), n(0));
        assert_eq!(M.scalar_mul(&Scalar::zero()), n(0));
        assert_eq!(P.scalar_mul(&Scalar::int(-2)), M);
        assert_eq!(M.scalar_mul(&Scalar::int(-2)), P);
        assert_eq!(n(4).scalar_mul(&Scalar::int(3)), n(12));
    }

    #[test]
    fn parts_and_negation() {
        assert_eq!(M.pos_part(), n(0));
        assert_eq!(M.neg_part(), P);
        assert_eq!(-P, M);
        assert_eq!(n(3).pos_part(), n(3));
        assert_eq!(n(3).neg_part(), n(0));
    }

    #[test]
    fn order_and_mixed_backing() {
        assert!(M < n(-1_000_000) && n(1_000_000) < P);
        assert_eq!(ExtReal::ratio(1, 2), ExtReal::from_f64(0.5).unwrap());
        assert!(ExtReal::ratio(1, 3) < ExtReal::from_f64(0.34).unwrap());
        assert!(ExtReal::from_f64(f64::NAN).is_err());
        assert_eq!(ExtReal::from_f64(f64::INFINITY).unwrap(), P);
    }

    #[test]
    fn float_overflow_folds_to_infinity() {
        let big = ExtReal::from_f64(f64::MAX).unwrap();
        assert_eq!(big.lower_add(&big), P);
    }

    #[test]
    fn decimal_parsing_is_exact() {
        let b = Backing::Rational;
        assert_eq!(b.parse_scalar("2.5").unwrap(), Scalar::ratio(5, 2));
        assert_eq!(b.parse_scalar("-1e9").unwrap(), Scalar::int(-1_000_000_000));
        assert_eq!(b.parse_scalar("3.2E-1").unwrap(), Scalar::ratio(8, 25));
        assert_eq!(b.parse_scalar("1/3").unwrap(), Scalar::ratio(1, 3));
        assert_eq!(b.parse_scalar("0.1").unwrap(), Scalar::ratio(1, 10));
        assert!(b.parse_scalar("1/0").is_err());
        assert!(b.parse_scalar("abc").is_err());
        assert!(b.parse_scalar(".").is_err());
        let f = Backing::Float.parse_scalar("0.1").unwrap();
        assert!(matches!(f, Scalar::Float(x) if x == 0.1));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(Scalar::ratio(4, 9).root(&Scalar::int(2)), Scalar::ratio(2, 3));
        assert!(!Scalar::int(2).root(&Scalar::int(2)).is_exact());
    }

    fn ext() -> impl Strategy<Value = ExtReal> {
        prop_oneof![
            1 => Just(ExtReal::NegInf),
            1 => Just(ExtReal::PosInf),
            6 => (-20i64..20, 1i64..5).prop_map(|(a, b)| ExtReal::ratio(a, b)),
        ]
    }

    proptest! {
        #[test]
        fn lower_le_upper(a in ext(), b in ext()) {
            let lo = a.lower_add(&b);
            let up = a.upper_add(&b);
            prop_assert!(lo <= up);
            let mixed = (a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf());
            prop_assert_eq!(lo == up, !mixed);
        }

        #[test]
        fn additions_commutative_associative(a in ext(), b in ext(), c in ext()) {
            prop_assert_eq!(a.lower_add(&b), b.lower_add(&a));
            prop_assert_eq!(a.upper_add(&b), b.upper_add(&a));
            prop_assert_eq!(a.lower_add(&b).lower_add(&c), a.lower_add(&b.lower_add(&c)));
            prop_assert_eq!(a.upper_add(&b).upper_add(&c), a.upper_add(&b.upper_add(&c)));
            prop_assert_eq!(a.lower_add(&ExtReal::zero()), a.clone());
            prop_assert_eq!(a.upper_add(&ExtReal::zero()), a);
        }

        #[test]
        fn additions_monotone(a in ext(), a2 in ext(), b in ext()) {
            let (lo, hi) = if a <= a2 { (a, a2) } else { (a2, a) };
            prop_assert!(lo.lower_add(&b) <= hi.lower_add(&b));
            prop_assert!(lo.upper_add(&b) <= hi.upper_add(&b));
        }

        #[test]
        fn positive_negative_decomposition(a in ext()) {
            let p = a.pos_part();
            let m = a.neg_part();
            prop_assert!(p.is_zero() || m.is_zero());
            prop_assert_eq!(p.checked_add(&-m).unwrap(), a);
        }
    }
}
