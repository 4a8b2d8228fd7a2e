//! Exact rational scalars.
//!
//! Values whose reduced numerator and denominator fit in an `i64` are stored
//! inline; everything else spills to a heap-allocated [`BigRational`]. The
//! representation is canonical (a value that fits inline is never stored as
//! big), so structural equality and hashing coincide with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
enum Repr {
    /// Reduced, `den > 0`, neither component equal to `i64::MIN`.
    Small(i64, i64),
    Big(Box<BigRational>),
}

/// An exact rational number.
#[derive(Clone)]
pub struct Scalar(Repr);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn fits(v: i128) -> bool {
    v > i64::MIN as i128 && v <= i64::MAX as i128
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    pub fn from_int(n: i64) -> Self {
        if n == i64::MIN {
            Self::from_big(BigRational::from_integer(BigInt::from(n)))
        } else {
            Scalar(Repr::Small(n, 1))
        }
    }

    /// `num / den`. Panics when `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        if num == 0 {
            return Self::zero();
        }
        let g = gcd_u128(num.unsigned_abs(), den as u128) as i128;
        if g > 1 {
            num /= g;
            den /= g;
        }
        if fits(num) && fits(den) {
            Scalar(Repr::Small(num as i64, den as i64))
        } else {
            Scalar(Repr::Big(Box::new(BigRational::new_raw(
                BigInt::from(num),
                BigInt::from(den),
            ))))
        }
    }

    /// Wraps an already reduced big rational, demoting it when it fits inline.
    pub fn from_big(r: BigRational) -> Self {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN && d != i64::MIN {
                return Scalar(Repr::Small(n, d));
            }
        }
        Scalar(Repr::Big(Box::new(r)))
    }

    pub fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i32,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        match &self.0 {
            Repr::Small(0, _) => None,
            Repr::Small(n, d) => Some(Self::from_i128(*d as i128, *n as i128)),
            Repr::Big(b) => Some(Self::from_big(b.recip())),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    /// Best rational approximation of `x` with denominator at most
    /// `max_den`, by continued-fraction convergents. `None` for non-finite
    /// input or a numerator that overflows `i64`.
    pub fn approximate(x: f64, max_den: i64) -> Option<Self> {
        if !x.is_finite() || max_den < 1 {
            return None;
        }
        let neg = x < 0.0;
        let mut r = x.abs();
        // convergents h/k
        let (mut h0, mut h1) = (0i128, 1i128);
        let (mut k0, mut k1) = (1i128, 0i128);
        for _ in 0..64 {
            let a = r.floor();
            if a > 9.0e18 {
                return None;
            }
            let a_i = a as i128;
            let h2 = a_i * h1 + h0;
            let k2 = a_i * k1 + k0;
            if k2 > max_den as i128 {
                break;
            }
            h0 = h1;
            h1 = h2;
            k0 = k1;
            k1 = k2;
            let frac = r - a;
            if frac < 1e-15 {
                break;
            }
            r = 1.0 / frac;
        }
        if k1 == 0 || !fits(h1) {
            return None;
        }
        let v = Self::from_i128(h1, k1);
        Some(if neg { -v } else { v })
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<i32> for Scalar {
    fn from(n: i32) -> Self {
        Self::from_int(n as i64)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Self::from_big(r)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn add_ref(x: &Scalar, y: &Scalar) -> Scalar {
    match (&x.0, &y.0) {
        (Repr::Small(0, _), _) => y.clone(),
        (_, Repr::Small(0, _)) => x.clone(),
        (Repr::Small(a, b), Repr::Small(c, d)) => {
            if b == d {
                Scalar::from_i128(*a as i128 + *c as i128, *b as i128)
            } else {
                Scalar::from_i128(
                    *a as i128 * *d as i128 + *c as i128 * *b as i128,
                    *b as i128 * *d as i128,
                )
            }
        }
        _ => Scalar::from_big(x.to_big() + y.to_big()),
    }
}

fn mul_ref(x: &Scalar, y: &Scalar) -> Scalar {
    match (&x.0, &y.0) {
        (Repr::Small(0, _), _) | (_, Repr::Small(0, _)) => Scalar::zero(),
        (Repr::Small(1, 1), _) => y.clone(),
        (_, Repr::Small(1, 1)) => x.clone(),
        (Repr::Small(a, b), Repr::Small(c, d)) => Scalar::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128),
        _ => Scalar::from_big(x.to_big() * y.to_big()),
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => Scalar(Repr::Small(-n, *d)),
            Repr::Big(b) => Scalar::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        add_ref(self, rhs)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        add_ref(self, &-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        mul_ref(self, rhs)
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        mul_ref(self, &rhs.recip().expect("division by zero"))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

macro_rules! forward_assign {
    ($tr:ident, $method:ident, $op:ident) => {
        impl $tr<&Scalar> for Scalar {
            fn $method(&mut self, rhs: &Scalar) {
                *self = (&*self).$op(rhs);
            }
        }
        impl $tr<Scalar> for Scalar {
            fn $method(&mut self, rhs: Scalar) {
                *self = (&*self).$op(&rhs);
            }
        }
    };
}

forward_assign!(AddAssign, add_assign, add);
forward_assign!(SubAssign, sub_assign, sub);
forward_assign!(MulAssign, mul_assign, mul);
forward_assign!(DivAssign, div_assign, div);

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Self {
        iter.fold(Scalar::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) if b.is_integer() => write!(f, "{}", b.numer()),
            Repr::Big(b) => write!(f, "{}/{}", b.numer(), b.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from parsing a `num` or `num/den` literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = d.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Scalar::from_big(BigRational::new_raw(num, den)))
    }
}

/// Shorthand for `Scalar::new(num, den)`.
pub fn q(num: i64, den: i64) -> Scalar {
    Scalar::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(q(2, 4), q(1, 2));
        assert_eq!(q(3, -6), q(-1, 2));
        assert_eq!(q(0, -5), Scalar::zero());
        assert_eq!(q(-4, -2).to_string(), "2");
    }

    #[test]
    fn overflow_spills_to_big_and_back() {
        let big = Scalar::from_int(i64::MAX) * Scalar::from_int(i64::MAX);
        assert_eq!(big.to_string(), "85070591730234615847396907784232501249");
        let back = &big / &Scalar::from_int(i64::MAX);
        assert_eq!(back, Scalar::from_int(i64::MAX));
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Scalar::from_int(i64::MIN);
        assert_eq!((-&m).to_string(), "9223372036854775808");
        assert_eq!(m.clone() - m, Scalar::zero());
    }

    #[test]
    fn parse_literals() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), q(1, 2));
        assert_eq!(" -7 ".parse::<Scalar>().unwrap(), Scalar::from_int(-7));
        assert_eq!("1/-3".parse::<Scalar>().unwrap(), q(-1, 3));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("0.5".parse::<Scalar>().is_err());
        let huge: Scalar = "123456789012345678901234567890/11".parse().unwrap();
        assert_eq!(huge.to_string(), "123456789012345678901234567890/11");
    }

    #[test]
    fn continued_fraction_rounding() {
        assert_eq!(Scalar::approximate(0.5 + 1e-12, 1_000_000), Some(q(1, 2)));
        assert_eq!(Scalar::approximate(-1.0 / 3.0, 1_000_000), Some(q(-1, 3)));
        assert_eq!(Scalar::approximate(std::f64::consts::PI, 1000), Some(q(355, 113)));
        assert_eq!(Scalar::approximate(f64::NAN, 10), None);
    }

    proptest! {
        #[test]
        fn field_laws_match_bigrational(a in -1_000_000_000_000i64..1_000_000_000_000, b in 1i64..1_000_000_000,
                                        c in -1_000_000_000_000i64..1_000_000_000_000, d in 1i64..1_000_000_000) {
            let x = q(a, b);
            let y = q(c, d);
            let bx = BigRational::new(BigInt::from(a), BigInt::from(b));
            let by = BigRational::new(BigInt::from(c), BigInt::from(d));
            prop_assert_eq!((&x + &y).to_big(), &bx + &by);
            prop_assert_eq!((&x - &y).to_big(), &bx - &by);
            prop_assert_eq!((&x * &y).to_big(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_big(), &bx / &by);
            }
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        }
    }
}
