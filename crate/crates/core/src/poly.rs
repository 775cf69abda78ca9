//! Dense univariate polynomials over [`Scalar`].

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use crate::{Result, Scalar};

/// `Σ coeffs[i]·xⁱ`; the last stored coefficient is nonzero, the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Poly::monomial(Scalar::one(), 1)
    }

    /// `c·xⁿ`
    pub fn monomial(c: Scalar, n: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    /// `xⁿ`
    pub fn x_pow(n: usize) -> Self {
        Poly::monomial(Scalar::one(), n)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `xⁱ` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `times`-fold derivative.
    pub fn derivative(&self, times: usize) -> Poly {
        if times == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= times {
            return Poly::zero();
        }
        let out = (times..self.coeffs.len())
            .map(|i| {
                // i·(i−1)⋯(i−times+1)
                let falling: i64 = ((i - times + 1)..=i).map(|v| v as i64).product();
                self.coeffs[i].scale_int(falling)
            })
            .collect();
        Poly::new(out)
    }

    /// Horner evaluation.
    pub fn eval(&self, at: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * at) + c)
    }

    /// Euclidean division `self = q·divisor + r`, `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let lead_inv = divisor.leading().ok_or(crate::Error::DivisionByZero)?.inv()?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &(&c * d);
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        match a.leading() {
            None => Ok(a),
            Some(l) => Ok(a.scale(&l.inv()?)),
        }
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Signed terms in descending power order, as used by the printers.
    pub(crate) fn render_terms(&self, standalone: bool) -> Vec<(bool, String)> {
        let single = self.term_count() == 1;
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| render_term(c, k, standalone && single))
            .collect()
    }
}

fn x_power(k: usize) -> String {
    if k == 1 {
        String::from("x")
    } else {
        alloc::format!("x^{k}")
    }
}

/// One term `c·x^k` as (negative, unsigned body). Coefficients with a surd
/// part are parenthesized unless `bare` (the whole expression is that constant).
fn render_term(c: &Scalar, k: usize, bare: bool) -> (bool, String) {
    if c.is_rational() {
        let r = c.rational_part();
        let mag = Scalar::from_rational(r.abs());
        let body = match (k, mag.rational_part().is_one()) {
            (0, _) => alloc::format!("{mag}"),
            (_, true) => x_power(k),
            (_, false) => alloc::format!("{mag}*{}", x_power(k)),
        };
        (r.is_negative(), body)
    } else if k == 0 {
        if bare {
            (false, alloc::format!("{c}"))
        } else {
            (false, alloc::format!("({c})"))
        }
    } else {
        (false, alloc::format!("({c})*{}", x_power(k)))
    }
}

pub(crate) fn join_terms(f: &mut impl Write, terms: &[(bool, String)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (idx, (neg, body)) in terms.iter().enumerate() {
        match (idx, neg) {
            (0, false) => f.write_str(body)?,
            (0, true) => write!(f, "-{body}")?,
            (_, false) => write!(f, " + {body}")?,
            (_, true) => write!(f, " - {body}")?,
        }
    }
    Ok(())
}

/// Canonical text: descending powers, unit coefficients elided, `0` for zero.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(f, &self.render_terms(true))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<Scalar> for Poly {
    fn from(c: Scalar) -> Self {
        Poly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    /// schoolbook product written independently of `Mul`
    fn convolve(p: &[i64], q: &[i64]) -> Vec<i64> {
        let mut out = vec![0; p.len() + q.len() - 1];
        for i in 0..p.len() {
            for j in 0..q.len() {
                out[i + j] += p[i] * q[j];
            }
        }
        out
    }

    #[test]
    fn x_times_x() {
        assert_eq!(&Poly::x() * &Poly::x(), Poly::x_pow(2));
    }

    #[test]
    fn cancellation_trims_to_zero() {
        let p = Poly::from_ints(&[-1, 0, 1]);
        let q = Poly::from_ints(&[1, 0, -1]);
        let s = &p + &q;
        assert!(s.is_zero());
        assert!(s.coeffs().is_empty());
    }

    #[test]
    fn difference_of_squares() {
        let p = &Poly::from_ints(&[1, 1]) * &Poly::from_ints(&[-1, 1]);
        assert_eq!(p, Poly::from_ints(&convolve(&[1, 1], &[-1, 1])));
        assert_eq!(p, Poly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn derivatives() {
        assert_eq!(Poly::x_pow(3).derivative(1), Poly::from_ints(&[0, 0, 3]));
        assert!(Poly::x_pow(3).derivative(4).is_zero());
        let mut p = Poly::x_pow(4);
        for _ in 0..4 {
            p = p.derivative(1);
        }
        assert_eq!(p, Poly::from_ints(&[24]));
        assert_eq!(Poly::x_pow(4).derivative(4), p);
    }

    #[test]
    fn evaluation() {
        let p = &Poly::x_pow(2) - &Poly::from_ints(&[21]);
        assert!(p.eval(&Scalar::sqrt21()).is_zero());
        assert_eq!(Poly::one().eval(&Scalar::from_ratio(7, 3)), Scalar::one());
        assert_eq!(
            Poly::from_ints(&[1, 1, 1]).eval(&Scalar::from_int(2)),
            Scalar::from_int(7)
        );
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]);
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let g = Poly::from_ints(&[0, 1, 1])
            .gcd(&Poly::from_ints(&[0, 2, 0, 1]))
            .unwrap();
        assert_eq!(g, Poly::x());
    }

    #[test]
    fn printing() {
        assert_eq!(Poly::x().to_string(), "x");
        assert_eq!(
            (&Poly::x_pow(2) - &Poly::constant(Scalar::from_ratio(1, 2))).to_string(),
            "x^2 - 1/2"
        );
        assert_eq!((-Poly::x_pow(3)).to_string(), "-x^3");
        assert_eq!(Poly::zero().to_string(), "0");
        let surd = Poly::new(alloc::vec![Scalar::sqrt21(), Scalar::from_int(2)]);
        assert_eq!(surd.to_string(), "2*x + (0+1*r21)");
        assert_eq!(Poly::constant(Scalar::sqrt21()).to_string(), "0+1*r21");
    }
}
