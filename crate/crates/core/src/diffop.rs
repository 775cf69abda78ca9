//! Differential operators `A = Σ aᵢ(x)·dⁱ/dxⁱ` acting on densities of a
//! fixed weight, and the module structure `ad L_X^λ` on them.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::density::{Density, VectorField};
use crate::poly::join_terms;
use crate::{Error, Poly, Result, Scalar};

/// An operator in `D^k_λ`: `coeffs[i]` multiplies `dⁱ/dxⁱ`.
///
/// The stored order is `coeffs.len() − 1` and is not trimmed implicitly:
/// leading zero coefficients are kept so that an operator of lower order can
/// be viewed inside a higher `D^k`. Use [`DiffOp::normalized`] to trim.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DiffOp {
    pub weight: Scalar,
    coeffs: Vec<Poly>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

impl DiffOp {
    pub fn new(weight: Scalar, mut coeffs: Vec<Poly>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Poly::zero());
        }
        DiffOp { weight, coeffs }
    }

    pub fn zero(weight: Scalar, order: usize) -> Self {
        DiffOp::new(weight, vec![Poly::zero(); order + 1])
    }

    pub fn identity(weight: Scalar) -> Self {
        DiffOp::multiplication(weight, Poly::one())
    }

    /// The order-0 operator `φ ↦ fφ`.
    pub fn multiplication(weight: Scalar, f: Poly) -> Self {
        DiffOp::new(weight, vec![f])
    }

    /// `f·dʲ/dxʲ`
    pub fn monomial(weight: Scalar, f: Poly, j: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); j + 1];
        coeffs[j] = f;
        DiffOp::new(weight, coeffs)
    }

    /// `L_X^λ = X·d/dx − λX′`
    pub fn lie(x: &VectorField, weight: Scalar) -> Self {
        let a0 = -x.jet(1).scale(&weight);
        DiffOp::new(weight, vec![a0, x.component().clone()])
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Stored order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// Trims leading zero coefficients (keeps at least `a_0`).
    pub fn normalized(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        DiffOp::new(self.weight.clone(), coeffs)
    }

    /// Same operator stored at order `k`. Fails if a coefficient above `k`
    /// is nonzero.
    pub fn with_order(&self, k: usize) -> Result<Self> {
        if self.coeffs.iter().skip(k + 1).any(|c| !c.is_zero()) {
            return Err(Error::UnsupportedOrder {
                order: self.normalized().order(),
                reason: "operator does not fit in the requested order",
            });
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(k + 1, Poly::zero());
        Ok(DiffOp::new(self.weight.clone(), coeffs))
    }

    /// Equality as operators, ignoring stored order.
    pub fn same_operator(&self, other: &DiffOp) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn with_weight(&self, weight: Scalar) -> Self {
        DiffOp::new(weight, self.coeffs.clone())
    }

    fn expect_weight(&self, other: &Scalar) -> Result<()> {
        if &self.weight == other {
            Ok(())
        } else {
            Err(Error::WeightMismatch {
                expected: self.weight.clone(),
                found: other.clone(),
            })
        }
    }

    /// `A(φ) = Σ aᵢ φ⁽ⁱ⁾`
    pub fn apply(&self, phi: &Density) -> Result<Density> {
        self.expect_weight(&phi.weight)?;
        let value = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .fold(Poly::zero(), |acc, (i, a)| &acc + &(a * &phi.value.derivative(i)));
        Ok(Density::new(phi.weight.clone(), value))
    }

    pub fn checked_add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.expect_weight(&other.weight)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.expect_weight(&other.weight)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &DiffOp, f: impl Fn(&Poly, &Poly) -> Poly) -> DiffOp {
        let n = self.coeffs.len().max(other.coeffs.len());
        DiffOp::new(
            self.weight.clone(),
            (0..n).map(|i| f(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        DiffOp::new(self.weight.clone(), self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// `A ∘ B` by the Leibniz rule `Dⁱ∘b = Σ_l C(i,l) b⁽ˡ⁾ D^{i−l}`.
    pub fn compose(&self, other: &DiffOp) -> Result<DiffOp> {
        self.expect_weight(&other.weight)?;
        Ok(DiffOp::new(
            self.weight.clone(),
            compose_coeffs(&self.coeffs, &other.coeffs),
        ))
    }

    /// `ad L_X^λ(A) = L_X^λ∘A − A∘L_X^λ`, stored at the order of `A`.
    pub fn ad(&self, x: &VectorField) -> DiffOp {
        let lie = DiffOp::lie(x, self.weight.clone());
        let mut left = compose_coeffs(&lie.coeffs, &self.coeffs);
        let right = compose_coeffs(&self.coeffs, &lie.coeffs);
        for (l, r) in left.iter_mut().zip(&right) {
            *l = &*l - r;
        }
        // the order k+1 term X·a_k − a_k·X cancels identically
        debug_assert!(left[self.coeffs.len()..].iter().all(Poly::is_zero));
        left.truncate(self.coeffs.len());
        DiffOp::new(self.weight.clone(), left)
    }

    /// Formal adjoint `A* = Σ_{i=0}^k (−1)ⁱ dⁱ/dxⁱ ∘ aᵢ`, an operator on
    /// densities of weight `−1−λ`.
    pub fn adjoint(&self) -> DiffOp {
        let k = self.order();
        let mut out = vec![Poly::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for l in 0..=i {
                let mut c = binomial(i, l);
                if i % 2 == 1 {
                    c = -c;
                }
                let term = a.derivative(l).scale(&Scalar::from_int(c));
                out[i - l] = &out[i - l] + &term;
            }
        }
        let weight = &(-&self.weight) - &Scalar::one();
        DiffOp::new(weight, out)
    }

    /// `[A, B]_+ = A∘B + B∘A`
    pub fn anticommutator(&self, other: &DiffOp) -> Result<DiffOp> {
        self.compose(other)?.checked_add(&other.compose(self)?)
    }

    /// `Sym_{X,Y,Z}(L_X^λ∘L_Y^λ∘L_Z^λ)`, the sum over all six orderings.
    pub fn sym3(x: &VectorField, y: &VectorField, z: &VectorField, weight: &Scalar) -> DiffOp {
        let l = [x, y, z].map(|v| DiffOp::lie(v, weight.clone()));
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut acc = DiffOp::zero(weight.clone(), 3);
        for [i, j, k] in PERMS {
            let c = compose_coeffs(&compose_coeffs(&l[i].coeffs, &l[j].coeffs), &l[k].coeffs);
            acc = acc.zip_with(&DiffOp::new(weight.clone(), c), |a, b| a + b);
        }
        acc
    }
}

pub(crate) fn compose_coeffs(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            for l in 0..=i {
                let d = bj.derivative(l);
                if d.is_zero() {
                    break;
                }
                let term = (ai * &d).scale(&Scalar::from_int(binomial(i, l)));
                out[i - l + j] = &out[i - l + j] + &term;
            }
        }
    }
    out
}

/// Signed terms of `Σ p_j·Dʲ` (or `Σ p_j·ξʲ`) in descending `j`.
pub(crate) fn render_operator_terms(coeffs: &[Poly], gen: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    let only_constant_term = coeffs.iter().skip(1).all(Poly::is_zero);
    for (j, p) in coeffs.iter().enumerate().rev() {
        if p.is_zero() {
            continue;
        }
        if j == 0 {
            out.extend(p.render_terms(only_constant_term));
            continue;
        }
        let power = if j == 1 {
            String::from(gen)
        } else {
            alloc::format!("{gen}^{j}")
        };
        if p.term_count() == 1 {
            let (neg, body) = p.render_terms(false).remove(0);
            if body == "1" {
                out.push((neg, power));
            } else {
                out.push((neg, alloc::format!("{body}*{power}")));
            }
        } else {
            out.push((false, alloc::format!("({p})*{power}")));
        }
    }
    out
}

/// Canonical normal-form text `Σ p_j(x)·D^j`, highest `D` power first.
impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(f, &render_operator_terms(&self.coeffs, "D"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn w(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    fn d(weight: &Scalar, j: usize) -> DiffOp {
        DiffOp::monomial(weight.clone(), Poly::one(), j)
    }

    #[test]
    fn apply_examples() {
        let l = w(1, 3);
        let phi = Density::new(l.clone(), Poly::from_ints(&[1, 4, 2]));
        assert_eq!(DiffOp::identity(l.clone()).apply(&phi).unwrap(), phi);
        let sq = Density::new(l.clone(), Poly::x_pow(2));
        assert_eq!(d(&l, 1).apply(&sq).unwrap().value, Poly::from_ints(&[0, 2]));
        let a = DiffOp::new(l.clone(), vec![Poly::one(), Poly::zero(), Poly::x()]);
        let out = a.apply(&Density::new(l.clone(), Poly::x_pow(3))).unwrap();
        assert_eq!(out.value, Poly::from_ints(&[0, 0, 6, 1]));
        let wrong = Density::new(w(1, 2), Poly::x());
        assert!(matches!(a.apply(&wrong), Err(Error::WeightMismatch { .. })));
    }

    #[test]
    fn compose_examples() {
        let l = w(-2, 7);
        let x = DiffOp::multiplication(l.clone(), Poly::x());
        let got = d(&l, 1).compose(&x).unwrap();
        assert_eq!(got.normalized(), DiffOp::new(l.clone(), vec![Poly::one(), Poly::x()]));
        let f = DiffOp::multiplication(l.clone(), Poly::from_ints(&[1, 1]));
        let g = DiffOp::multiplication(l.clone(), Poly::from_ints(&[0, 3]));
        assert_eq!(
            f.compose(&g).unwrap(),
            DiffOp::multiplication(l.clone(), Poly::from_ints(&[0, 3, 3]))
        );
        let xd = DiffOp::monomial(l.clone(), Poly::x(), 1);
        let got = d(&l, 2).compose(&xd).unwrap();
        let expected = DiffOp::new(
            l.clone(),
            vec![Poly::zero(), Poly::zero(), Poly::from_ints(&[2]), Poly::x()],
        );
        assert_eq!(got, expected);
        assert!(d(&l, 1).compose(&d(&w(1, 1), 1)).is_err());
    }

    #[test]
    fn lie_operator() {
        let l = w(3, 4);
        assert!(DiffOp::lie(&VectorField::monomial(0), l.clone()).same_operator(&d(&l, 1)));
        let got = DiffOp::lie(&VectorField::monomial(1), l.clone());
        assert_eq!(got, DiffOp::new(l.clone(), vec![Poly::constant(-&l), Poly::x()]));
    }

    #[test]
    fn ad_examples() {
        let l = w(5, 3);
        let x = VectorField::new(Poly::from_ints(&[1, -2, 0, 1]));
        assert!(DiffOp::identity(l.clone()).ad(&x).is_zero());
        let a0 = Poly::from_ints(&[2, 0, 1, 1]);
        let got = DiffOp::multiplication(l.clone(), a0.clone()).ad(&x);
        assert_eq!(got, DiffOp::multiplication(l, x.component() * &a0.derivative(1)));
    }

    #[test]
    fn adjoint_examples() {
        let l = w(1, 5);
        assert_eq!(
            d(&l, 1).adjoint(),
            d(&l, 1).scale(&Scalar::from_int(-1)).with_weight(w(-6, 5))
        );
        let f = DiffOp::multiplication(l.clone(), Poly::from_ints(&[3, 1]));
        assert_eq!(f.adjoint().coeffs(), f.coeffs());
        let xd = DiffOp::monomial(l.clone(), Poly::x(), 1);
        let expected = DiffOp::new(w(-6, 5), vec![Poly::from_ints(&[-1]), Poly::from_ints(&[0, -1])]);
        assert_eq!(xd.adjoint(), expected);
    }

    #[test]
    fn anticommutator_of_lie_derivatives() {
        let l = w(-2, 3);
        let x = VectorField::new(Poly::from_ints(&[1, 2, 0, -1]));
        let y = VectorField::new(Poly::from_ints(&[0, 1, 3]));
        let lx = DiffOp::lie(&x, l.clone());
        let ly = DiffOp::lie(&y, l.clone());
        let got = lx.anticommutator(&ly).unwrap();
        let (xp, yp) = (x.component(), y.component());
        let xy = xp * yp;
        let a2 = xy.scale(&Scalar::from_int(2));
        let a1 = xy.derivative(1).scale(&(&Scalar::one() - &l.scale_int(2)));
        let a0 = &(&(xp * &yp.derivative(2)) + &(&xp.derivative(2) * yp)).scale(&-&l)
            + &(&xp.derivative(1) * &yp.derivative(1)).scale(&(&l * &l).scale_int(2));
        assert!(got.same_operator(&DiffOp::new(l.clone(), vec![a0, a1, a2])));
        assert_eq!(
            lx.anticommutator(&lx).unwrap(),
            lx.compose(&lx).unwrap().scale(&Scalar::from_int(2))
        );
        let one = DiffOp::lie(&VectorField::monomial(0), l.clone());
        assert!(one
            .anticommutator(&one)
            .unwrap()
            .same_operator(&d(&l, 2).scale(&Scalar::from_int(2))));
    }

    #[test]
    fn sym3_examples() {
        let l = w(1, 7);
        let x = VectorField::new(Poly::from_ints(&[1, 1]));
        let y = VectorField::new(Poly::from_ints(&[0, 0, 2]));
        let z = VectorField::new(Poly::from_ints(&[3, 0, 0, 1]));
        let lx = DiffOp::lie(&x, l.clone());
        let cube = lx.compose(&lx).unwrap().compose(&lx).unwrap();
        assert!(DiffOp::sym3(&x, &x, &x, &l).same_operator(&cube.scale(&Scalar::from_int(6))));
        let s = DiffOp::sym3(&x, &y, &z, &l);
        assert_eq!(
            s.coeff(3),
            (&(x.component() * y.component()) * z.component()).scale(&Scalar::from_int(6))
        );
        assert_eq!(s, DiffOp::sym3(&y, &x, &z, &l));
        assert_eq!(s, DiffOp::sym3(&x, &z, &y, &l));
    }

    #[test]
    fn printing() {
        let l = w(1, 2);
        assert_eq!(
            DiffOp::lie(&VectorField::monomial(2), l.clone()).to_string(),
            "x^2*D - x"
        );
        assert_eq!(DiffOp::zero(l.clone(), 3).to_string(), "0");
        let op = DiffOp::new(
            l.clone(),
            vec![
                Poly::constant(Scalar::sqrt21()),
                Poly::from_ints(&[1, 1]),
                Poly::zero(),
                Poly::constant(w(-1, 2)),
            ],
        );
        assert_eq!(op.to_string(), "-1/2*D^3 + (x + 1)*D + (0+1*r21)");
        assert_eq!(
            DiffOp::multiplication(l, Poly::constant(Scalar::sqrt21())).to_string(),
            "0+1*r21"
        );
    }
}
