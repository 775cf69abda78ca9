//! Vector fields, tensor densities and the bilinear invariant operations
//! between densities.
//!
//! A density is labelled by the parameter `λ` of its Lie derivative
//! `L_X^λ φ = Xφ′ − λX′φ` (geometrically a density of degree `−λ`).

use crate::{Error, Poly, Result, Scalar};

/// The vector field `X(x)·d/dx`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct VectorField(pub Poly);

impl VectorField {
    pub fn new(component: Poly) -> Self {
        VectorField(component)
    }

    /// `xⁿ·d/dx`
    pub fn monomial(n: usize) -> Self {
        VectorField(Poly::x_pow(n))
    }

    pub fn component(&self) -> &Poly {
        &self.0
    }

    /// `[X, Y] = (XY′ − X′Y)·d/dx`
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        VectorField(&(&self.0 * &other.0.derivative(1)) - &(&self.0.derivative(1) * &other.0))
    }

    /// `k`-th derivative of the component.
    pub fn jet(&self, k: usize) -> Poly {
        self.0.derivative(k)
    }
}

/// A polynomial density with its module label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Density {
    pub weight: Scalar,
    pub value: Poly,
}

impl Density {
    pub fn new(weight: Scalar, value: Poly) -> Self {
        Density { weight, value }
    }

    pub fn zero(weight: Scalar) -> Self {
        Density::new(weight, Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub(crate) fn expect_weight(&self, expected: &Scalar) -> Result<()> {
        if &self.weight == expected {
            Ok(())
        } else {
            Err(Error::WeightMismatch {
                expected: expected.clone(),
                found: self.weight.clone(),
            })
        }
    }

    pub fn checked_add(&self, other: &Density) -> Result<Density> {
        other.expect_weight(&self.weight)?;
        Ok(Density::new(self.weight.clone(), &self.value + &other.value))
    }

    pub fn checked_sub(&self, other: &Density) -> Result<Density> {
        other.expect_weight(&self.weight)?;
        Ok(Density::new(self.weight.clone(), &self.value - &other.value))
    }

    pub fn scale(&self, c: &Scalar) -> Density {
        Density::new(self.weight.clone(), self.value.scale(c))
    }
}

/// `Xφ′ − λX′φ` on a bare polynomial.
pub fn lie_derivative_poly(x: &VectorField, weight: &Scalar, phi: &Poly) -> Poly {
    let transport = &x.0 * &phi.derivative(1);
    if weight.is_zero() {
        return transport;
    }
    &transport - &(&x.0.derivative(1) * phi).scale(weight)
}

/// `L_X^λ φ` where `λ` is the label of `φ`.
pub fn lie_derivative(x: &VectorField, phi: &Density) -> Density {
    Density::new(phi.weight.clone(), lie_derivative_poly(x, &phi.weight, &phi.value))
}

/// `∏_{u=from}^{to−1} (w − u)`, the falling factorial standing in for
/// `w!/(w−(to−from))!` shifted to start at `w − from`.
pub fn falling_factorial(w: &Scalar, from: usize, to: usize) -> Scalar {
    (from..to).fold(Scalar::one(), |acc, u| &acc * &(w - &Scalar::from_int(u as i64)))
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Transvectant `j_n(φ, ψ)`: the sl₂-invariant bilinear map
/// `F_λ ⊗ F_μ → F_{λ+μ−n}`,
///
/// `Σ_{i+j=n} (−1)^i C(n,i)·FF(2λ,i,n)·FF(2μ,j,n)·φ^{(i)}ψ^{(j)}`
///
/// with `FF(w,t,n) = ∏_{u=t}^{n−1}(w−u)`.
pub fn transvectant(n: usize, phi: &Density, psi: &Density) -> Density {
    let two = Scalar::from_int(2);
    let two_lambda = &two * &phi.weight;
    let two_mu = &two * &psi.weight;
    let mut value = Poly::zero();
    for i in 0..=n {
        let j = n - i;
        let mut c = &falling_factorial(&two_lambda, i, n) * &falling_factorial(&two_mu, j, n);
        if c.is_zero() {
            continue;
        }
        let b = binomial(n, i);
        c = c.scale_int(if i % 2 == 0 { b } else { -b });
        value = &value + &(&phi.value.derivative(i) * &psi.value.derivative(j)).scale(&c);
    }
    let weight = &(&phi.weight + &psi.weight) - &Scalar::from_int(n as i64);
    Density::new(weight, value)
}

/// The bilinear expressions `J_3`, `J_4`, `J_5` pairing a vector field with
/// a slot-`s` coefficient:
///
/// * `J_3(X, a) = X‴a`
/// * `J_4(X, a) = sX⁗a + 2X‴a′`
/// * `J_5(X, a) = s(2s−1)X⁽⁵⁾a + 5(2s−1)X⁗a′ + 10X‴a″`
pub fn j_operator(m: usize, s: &Scalar, x: &VectorField, a: &Poly) -> Result<Poly> {
    let two_s_minus_one = &s.scale_int(2) - &Scalar::one();
    match m {
        3 => Ok(&x.jet(3) * a),
        4 => Ok(&(&x.jet(4) * a).scale(s) + &(&x.jet(3) * &a.derivative(1)).scale(&Scalar::from_int(2))),
        5 => {
            let t0 = (&x.jet(5) * a).scale(&(s * &two_s_minus_one));
            let t1 = (&x.jet(4) * &a.derivative(1)).scale(&two_s_minus_one.scale_int(5));
            let t2 = (&x.jet(3) * &a.derivative(2)).scale(&Scalar::from_int(10));
            Ok(&(&t0 + &t1) + &t2)
        }
        _ => Err(Error::UnsupportedOrder {
            order: m,
            reason: "J operators exist for m in {3, 4, 5}",
        }),
    }
}
