//! Exact rational scalars.
//!
//! Every breakpoint, distance, window endpoint and integral in this crate is a
//! [`Rat`]. There is no floating point anywhere on the checked paths.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction `num/den` with `den > 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num.into(), den.into())))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rat) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn min_of(&self, other: &Rat) -> Rat {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max_of(&self, other: &Rat) -> Rat {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

/// The binary operations exposed by [`rat_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    /// Absolute value of the left operand; the right operand is ignored.
    Abs,
    Cmp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithValue {
    Value(Rat),
    Ordering(Ordering),
}

/// Uniform entry point over the scalar operations. Division by zero is the
/// only failure.
pub fn rat_arith(x: &Rat, y: &Rat, op: ArithOp) -> Result<ArithValue> {
    Ok(match op {
        ArithOp::Add => ArithValue::Value(x + y),
        ArithOp::Sub => ArithValue::Value(x - y),
        ArithOp::Mul => ArithValue::Value(x * y),
        ArithOp::Div => ArithValue::Value(x.checked_div(y)?),
        ArithOp::Min => ArithValue::Value(x.min_of(y)),
        ArithOp::Max => ArithValue::Value(x.max_of(y)),
        ArithOp::Abs => ArithValue::Value(x.abs()),
        ArithOp::Cmp => ArithValue::Ordering(x.cmp(y)),
    })
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }

        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat(r)
    }
}

impl fmt::Display for Rat {
    /// `p/q`, or just `p` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, "1"),
        };
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn adds_fractions_exactly() {
        assert_eq!(r(1, 3) + r(1, 6), r(1, 2));
        assert_eq!(
            rat_arith(&r(1, 3), &r(1, 6), ArithOp::Add).unwrap(),
            ArithValue::Value(r(1, 2))
        );
    }

    #[test]
    fn reduces_on_construction() {
        let x = r(2, 4);
        assert_eq!(x.to_string(), "1/2");
        assert_eq!(*x.numer(), BigInt::from(1));
        assert_eq!(*x.denom(), BigInt::from(2));
        let y = r(3, -6);
        assert_eq!(y.to_string(), "-1/2");
        assert!(y.denom().is_positive());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            rat_arith(&Rat::one(), &Rat::zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        ));
        assert!(Rat::new(1, 0).is_err());
        assert!("3/0".parse::<Rat>().is_err());
        assert!(Rat::zero().recip().is_err());
    }

    #[test]
    fn min_max_abs_cmp() {
        let a = r(-2, 3);
        let b = r(1, 5);
        assert_eq!(
            rat_arith(&a, &b, ArithOp::Min).unwrap(),
            ArithValue::Value(a.clone())
        );
        assert_eq!(
            rat_arith(&a, &b, ArithOp::Max).unwrap(),
            ArithValue::Value(b.clone())
        );
        assert_eq!(
            rat_arith(&a, &b, ArithOp::Abs).unwrap(),
            ArithValue::Value(r(2, 3))
        );
        assert_eq!(
            rat_arith(&a, &b, ArithOp::Cmp).unwrap(),
            ArithValue::Ordering(Ordering::Less)
        );
    }

    #[test]
    fn text_forms() {
        assert_eq!(Rat::from_int(7).to_string(), "7");
        assert_eq!("6/8".parse::<Rat>().unwrap(), r(3, 4));
        assert_eq!("-5".parse::<Rat>().unwrap(), Rat::from_int(-5));
        assert!("x/2".parse::<Rat>().is_err());
        let json = serde_json::to_string(&r(1, 4)).unwrap();
        assert_eq!(json, "\"1/4\"");
        assert_eq!(serde_json::from_str::<Rat>(&json).unwrap(), r(1, 4));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn field_laws_hold_exactly(x in arb_rat(), y in arb_rat(), z in arb_rat()) {
            prop_assert_eq!((&x + &y) + z.clone(), &x + &(&y + &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!((&x - &x).is_zero());
        }

        #[test]
        fn always_reduced(x in arb_rat(), y in arb_rat()) {
            let p = &x * &y;
            prop_assert!(p.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(p.numer(), p.denom()).is_one());
        }

        #[test]
        fn display_parse_roundtrip(x in arb_rat()) {
            prop_assert_eq!(x.to_string().parse::<Rat>().unwrap(), x);
        }
    }
}
