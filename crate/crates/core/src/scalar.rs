//! Exact scalars: big rationals and the quadratic field `Q(√3)`.
//!
//! Every coordinate in the crate is a [`Scalar`]. Rationals cover all strip
//! tilings with a rational start height; the field `Q(√3)` is needed only for
//! the critical tiling at height `1/√3`. Floats appear solely through
//! [`Scalar::to_f64`] for rendering and reports.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_rational::BigRational as Rational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Writes a rational as `p/q`, always with an explicit denominator.
pub fn rational_to_text(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid rational {text:?}"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn rational_bits(r: &Rational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

fn rational_sign(r: &Rational) -> Ordering {
    r.numer().sign().cmp(&num_bigint::Sign::NoSign)
}

/// An element `r + s·√3` of the quadratic field `Q(√3)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub r: Rational,
    pub s: Rational,
}

impl QuadExt {
    pub fn new(r: Rational, s: Rational) -> Self {
        QuadExt { r, s }
    }

    pub fn sqrt3() -> Self {
        QuadExt::new(Rational::zero(), Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// Exact sign. Since √3 is irrational, `r² = 3s²` forces `r = s = 0`.
    pub fn sign(&self) -> Ordering {
        let sr = rational_sign(&self.r);
        let ss = rational_sign(&self.s);
        match (sr, ss) {
            (_, Ordering::Equal) => sr,
            (Ordering::Equal, _) => ss,
            _ if sr == ss => sr,
            _ => {
                let r2 = &self.r * &self.r;
                let s2 = &self.s * &self.s * Rational::from_integer(BigInt::from(3));
                if r2 > s2 {
                    sr
                } else {
                    ss
                }
            }
        }
    }

    /// Field norm `r² − 3s²`.
    pub fn norm(&self) -> Rational {
        &self.r * &self.r - &self.s * &self.s * Rational::from_integer(BigInt::from(3))
    }

    pub fn conjugate(&self) -> Self {
        QuadExt::new(self.r.clone(), -self.s.clone())
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadExt::new(&self.r / &n, -(&self.s / &n)))
    }

    fn mul(&self, o: &QuadExt) -> QuadExt {
        let three = Rational::from_integer(BigInt::from(3));
        QuadExt::new(
            &self.r * &o.r + &self.s * &o.s * three,
            &self.r * &o.s + &self.s * &o.r,
        )
    }
}

/// Exact real number: a rational, or an element of `Q(√3)` with nonzero
/// irrational part. The representation is canonical, so derived equality and
/// hashing agree with numeric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(Rational),
    Quad(QuadExt),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Rat(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(rational(num, den))
    }

    /// `r + s·√3`, collapsed to a rational when `s = 0`.
    pub fn quad(r: Rational, s: Rational) -> Self {
        if s.is_zero() {
            Scalar::Rat(r)
        } else {
            Scalar::Quad(QuadExt::new(r, s))
        }
    }

    pub fn sqrt3() -> Self {
        Scalar::quad(Rational::zero(), Rational::one())
    }

    /// `1/√3 = √3/3`.
    pub fn inv_sqrt3() -> Self {
        Scalar::quad(Rational::zero(), rational(1, 3))
    }

    fn from_quad(q: QuadExt) -> Self {
        Scalar::quad(q.r, q.s)
    }

    fn as_quad(&self) -> QuadExt {
        match self {
            Scalar::Rat(r) => QuadExt::new(r.clone(), Rational::zero()),
            Scalar::Quad(q) => q.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Quad(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rat(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Quad(_) => false,
        }
    }

    pub fn sign(&self) -> Ordering {
        match self {
            Scalar::Rat(r) => rational_sign(r),
            Scalar::Quad(q) => q.sign(),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Scalar {
        self * self
    }

    pub fn max(a: &Scalar, b: &Scalar) -> Scalar {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Scalar, b: &Scalar) -> Scalar {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn recip(&self) -> Option<Scalar> {
        match self {
            Scalar::Rat(r) if r.is_zero() => None,
            Scalar::Rat(r) => Some(Scalar::Rat(r.recip())),
            Scalar::Quad(q) => q.inverse().map(Scalar::from_quad),
        }
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Option<Scalar> {
        rhs.recip().map(|inv| self * &inv)
    }

    /// Largest bit length among the integers of the representation.
    pub fn bits(&self) -> u64 {
        match self {
            Scalar::Rat(r) => rational_bits(r),
            Scalar::Quad(q) => rational_bits(&q.r).max(rational_bits(&q.s)),
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        match self {
            Scalar::Rat(r) => r.floor().to_integer(),
            Scalar::Quad(q) => {
                // Float guess corrected by exact comparisons.
                let approx =
                    q.r.to_f64().unwrap_or(0.0) + q.s.to_f64().unwrap_or(0.0) * 3f64.sqrt();
                let mut k = BigInt::from(approx.floor() as i64);
                while Scalar::Rat(Rational::from_integer(k.clone())) > *self {
                    k -= 1;
                }
                while Scalar::Rat(Rational::from_integer(&k + 1)) <= *self {
                    k += 1;
                }
                k
            }
        }
    }

    /// Nearest double. Errors when the value is outside the finite float range.
    pub fn to_f64(&self) -> Result<f64> {
        let conv = |r: &Rational| -> Result<f64> {
            match r.to_f64() {
                Some(v) if v.is_finite() => Ok(v),
                _ => Err(Error::FloatOverflow(rational_to_text(r))),
            }
        };
        let value = match self {
            Scalar::Rat(r) => conv(r)?,
            Scalar::Quad(q) => conv(&q.r)? + conv(&q.s)? * 3f64.sqrt(),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::FloatOverflow(self.to_string()))
        }
    }

    /// Float conversion for rendering paths where overflow cannot occur.
    pub fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::Rat(r)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            _ => (self - other).sign(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact total order on scalars.
pub fn scalar_cmp(a: &Scalar, b: &Scalar) -> Ordering {
    a.cmp(b)
}

/// Float export of a scalar, for rendering only.
pub fn scalar_to_float(a: &Scalar) -> Result<f64> {
    a.to_f64()
}

fn add_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
        _ => {
            let (x, y) = (a.as_quad(), b.as_quad());
            Scalar::quad(x.r + y.r, x.s + y.s)
        }
    }
}

fn sub_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
        _ => {
            let (x, y) = (a.as_quad(), b.as_quad());
            Scalar::quad(x.r - y.r, x.s - y.s)
        }
    }
}

fn mul_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (a, b) {
        (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
        (Scalar::Rat(x), Scalar::Quad(q)) | (Scalar::Quad(q), Scalar::Rat(x)) => {
            Scalar::quad(x * &q.r, x * &q.s)
        }
        (Scalar::Quad(p), Scalar::Quad(q)) => Scalar::from_quad(p.mul(q)),
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $imp(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $imp(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                $imp(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $imp(self, &rhs)
            }
        }
    };
}

fn div_ref(a: &Scalar, b: &Scalar) -> Scalar {
    a.checked_div(b).expect("division of a scalar by zero")
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Quad(q) => Scalar::Quad(QuadExt::new(-&q.r, -&q.s)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `p/q` for rationals, `p/q+r/s*sqrt3` otherwise.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => f.write_str(&rational_to_text(r)),
            Scalar::Quad(q) => write!(
                f,
                "{}+{}*sqrt3",
                rational_to_text(&q.r),
                rational_to_text(&q.s)
            ),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        match text.strip_suffix("*sqrt3") {
            Some(body) => {
                let (r, s) = body
                    .split_once('+')
                    .ok_or_else(|| Error::Parse(format!("invalid quadratic scalar {text:?}")))?;
                Ok(Scalar::quad(parse_rational(r)?, parse_rational(s)?))
            }
            None => Ok(Scalar::Rat(parse_rational(text)?)),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `r` is the square of a rational; returns the root.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn canonical_rationals_compare_equal() {
        assert_eq!(
            scalar_cmp(&Scalar::ratio(1, 3), &Scalar::ratio(2, 6)),
            Ordering::Equal
        );
        assert_eq!(Scalar::ratio(1, 3), Scalar::ratio(2, 6));
    }

    #[test]
    fn inv_sqrt3_is_below_three_fifths() {
        // (1/3)² · 3 = 1/3 < 9/25
        assert_eq!(
            scalar_cmp(&Scalar::inv_sqrt3(), &Scalar::ratio(3, 5)),
            Ordering::Less
        );
    }

    #[test]
    fn two_minus_sqrt3_is_positive() {
        let v = Scalar::int(2) - Scalar::sqrt3();
        assert_eq!(scalar_cmp(&v, &Scalar::zero()), Ordering::Greater);
        assert!((Scalar::sqrt3() - Scalar::int(2)).is_negative());
    }

    #[test]
    fn float_export() {
        assert_eq!(scalar_to_float(&Scalar::ratio(1, 2)).unwrap(), 0.5);
        assert_eq!(
            scalar_to_float(&Scalar::sqrt3()).unwrap(),
            1.7320508075688772
        );
        assert_eq!(scalar_to_float(&Scalar::ratio(17, 8)).unwrap(), 2.125);
    }

    #[test]
    fn float_overflow_is_an_error() {
        let huge = Scalar::Rat(Rational::from_integer(BigInt::from(10).pow(400)));
        assert!(matches!(huge.to_f64(), Err(Error::FloatOverflow(_))));
    }

    #[test]
    fn quadratic_inverse() {
        // 1/(1 − 1/√3) = (3 + √3)/2
        let v = (Scalar::one() - Scalar::inv_sqrt3()).recip().unwrap();
        assert_eq!(v, Scalar::quad(rational(3, 2), rational(1, 2)));
        assert!(Scalar::zero().recip().is_none());
    }

    #[test]
    fn product_rule() {
        let a = Scalar::quad(rational(1, 2), rational(1, 3));
        let b = Scalar::quad(rational(-2, 1), rational(5, 7));
        // (r1 r2 + 3 s1 s2) + (r1 s2 + s1 r2)√3
        let expect = Scalar::quad(
            rational(-1, 1) + rational(5, 7),
            rational(5, 14) - rational(2, 3),
        );
        assert_eq!(&a * &b, expect);
        // √3 · √3 collapses to a rational.
        assert_eq!(Scalar::sqrt3() * Scalar::sqrt3(), Scalar::int(3));
    }

    #[test]
    fn text_forms() {
        assert_eq!(Scalar::ratio(3, 5).to_string(), "3/5");
        assert_eq!(Scalar::int(2).to_string(), "2/1");
        let q = Scalar::quad(rational(1, 2), rational(-1, 2));
        assert_eq!(q.to_string(), "1/2+-1/2*sqrt3");
        assert_eq!(s("1/2+-1/2*sqrt3"), q);
        assert_eq!(s("-4"), Scalar::int(-4));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
        assert!("1/2*sqrt3".parse::<Scalar>().is_err());
    }

    #[test]
    fn exact_floor() {
        assert_eq!(Scalar::ratio(-1, 2).floor(), BigInt::from(-1));
        assert_eq!(Scalar::ratio(7, 2).floor(), BigInt::from(3));
        assert_eq!(Scalar::sqrt3().floor(), BigInt::from(1));
        assert_eq!((-Scalar::sqrt3()).floor(), BigInt::from(-2));
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(rational_sqrt(&rational(9, 4)), Some(rational(3, 2)));
        assert_eq!(rational_sqrt(&rational(2, 1)), None);
        assert_eq!(rational_sqrt(&rational(-1, 1)), None);
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-500i64..500, 1i64..60).prop_map(|(n, d)| rational(n, d))
    }

    fn any_scalar() -> impl Strategy<Value = Scalar> {
        prop_oneof![
            small_rational().prop_map(Scalar::Rat),
            (small_rational(), small_rational()).prop_map(|(r, s)| Scalar::quad(r, s)),
        ]
    }

    proptest! {
        #[test]
        fn field_axioms(a in any_scalar(), b in any_scalar(), c in any_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a - &a, Scalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip().unwrap(), Scalar::one());
            }
        }

        #[test]
        fn sign_agrees_with_float(a in any_scalar()) {
            let f = a.to_f64().unwrap();
            if f.abs() > 1e-9 {
                prop_assert_eq!(a.sign(), f.partial_cmp(&0.0).unwrap());
            }
        }

        #[test]
        fn zero_iff_both_parts_zero(r in small_rational(), s in small_rational()) {
            let v = Scalar::quad(r.clone(), s.clone());
            prop_assert_eq!(v.is_zero(), r.is_zero() && s.is_zero());
            prop_assert_eq!(v.sign() == Ordering::Equal, r.is_zero() && s.is_zero());
        }

        #[test]
        fn text_round_trip(a in any_scalar()) {
            let back: Scalar = a.to_string().parse().unwrap();
            prop_assert_eq!(back.to_string(), a.to_string());
            prop_assert_eq!(back, a);
        }

        #[test]
        fn order_matches_difference_sign(a in any_scalar(), b in any_scalar()) {
            prop_assert_eq!(a.cmp(&b), (&a - &b).sign());
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }
    }
}
