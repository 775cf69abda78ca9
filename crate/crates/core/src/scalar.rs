//! The field `Q(√21)`.
//!
//! Every weight the module theory needs (including the two irrational
//! critical values `−1/2 ± √21/6`) lives here, so it is the only scalar type
//! in the crate.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

/// The radicand of the quadratic extension.
pub const RADICAND: i64 = 21;

/// `a + b·√21` with rational `a`, `b`.
///
/// The representation is unique because `√21` is irrational, so the derived
/// equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    a: Rational,
    b: Rational,
}

impl Scalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(Rational::from_integer(BigInt::from(n)), Rational::zero())
    }

    /// `num/den` as a rational scalar. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::new(Rational::new(BigInt::from(num), BigInt::from(den)), Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        Scalar::new(a, Rational::zero())
    }

    /// `√21`.
    pub fn sqrt21() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    /// Rational part.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `√21`.
    pub fn surd_part(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a − b√21`.
    pub fn conjugate(&self) -> Self {
        Scalar::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 21b²`, nonzero unless `self == 0`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(RADICAND))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Scalar::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn scale_int(&self, n: i64) -> Self {
        if self.is_zero() || n == 0 {
            return Scalar::zero();
        }
        let n = Rational::from_integer(BigInt::from(n));
        Scalar::new(&self.a * &n, &self.b * &n)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(a: Rational) -> Self {
        Scalar::from_rational(a)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        // the rational case dominates in practice
        if self.b.is_zero() && rhs.b.is_zero() {
            return Scalar::new(&self.a * &rhs.a, Rational::zero());
        }
        let d = Rational::from_integer(BigInt::from(RADICAND));
        Scalar::new(
            &self.a * &rhs.a + &self.b * &rhs.b * d,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a.clone(), -self.b.clone())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.a, -self.b)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Text form `p/q`, `p/q+r/s*r21` or `p/q-r/s*r21`, with `p` for `p/1`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.a)?;
        if !self.b.is_zero() {
            if self.b.is_negative() {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            write_rational(f, &self.b.abs())?;
            f.write_str("*r21")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(a: (i64, i64), b: (i64, i64)) -> Scalar {
        Scalar::new(
            Rational::new(a.0.into(), a.1.into()),
            Rational::new(b.0.into(), b.1.into()),
        )
    }

    #[test]
    fn sqrt21_squares_to_21() {
        let r = Scalar::sqrt21();
        assert_eq!(&r * &r, Scalar::from_int(21));
    }

    #[test]
    fn halves_add_to_one() {
        let h = Scalar::from_ratio(1, 2);
        assert_eq!(&h + &h, Scalar::one());
    }

    #[test]
    fn divide_by_two_plus_root() {
        let q = Scalar::one().checked_div(&s((2, 1), (1, 1))).unwrap();
        assert_eq!(q, s((-2, 17), (1, 17)));
        // multiply back
        assert_eq!(&q * &s((2, 1), (1, 1)), Scalar::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn critical_root_satisfies_quadratic() {
        // −1/2 + √21/6 is a root of 3λ²+3λ−1
        let l = s((-1, 2), (1, 6));
        let three = Scalar::from_int(3);
        let v = &(&(&three * &(&l * &l)) + &(&three * &l)) - &Scalar::one();
        assert!(v.is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_ratio(-1, 2).to_string(), "-1/2");
        assert_eq!(s((-1, 2), (1, 6)).to_string(), "-1/2+1/6*r21");
        assert_eq!(s((3, 1), (-2, 1)).to_string(), "3-2*r21");
        assert_eq!(Scalar::sqrt21().to_string(), "0+1*r21");
        assert_eq!(Scalar::zero().to_string(), "0");
    }

    #[test]
    fn inverse_of_conjugate_pair() {
        let x = s((5, 3), (-7, 2));
        let p = &x * &x.inv().unwrap();
        assert!(p.is_one());
        assert!((&x * &x.conjugate()).is_rational());
    }
}
