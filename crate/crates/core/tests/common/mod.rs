#![allow(dead_code)]

use opmod::{DiffOp, Poly, Scalar, VectorField};
use proptest::prelude::*;

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

/// `a + b√21`
pub fn surd(a: Scalar, b: Scalar) -> Scalar {
    &a + &(&b * &Scalar::sqrt21())
}

/// `−1/2 ± √21/6`, the roots of `3λ²+3λ−1`.
pub fn quadratic_root(sign: i64) -> Scalar {
    surd(q(-1, 2), q(sign, 6))
}

pub fn scalar() -> impl Strategy<Value = Scalar> {
    (-30i64..30, 1i64..12, -4i64..4, 1i64..7).prop_map(|(a, b, c, d)| surd(q(a, b), q(c, d)))
}

pub fn rational() -> impl Strategy<Value = Scalar> {
    (-30i64..30, 1i64..12).prop_map(|(a, b)| q(a, b))
}

pub fn poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(scalar(), 0..=max_degree + 1).prop_map(Poly::new)
}

pub fn small_poly(max_degree: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..5).prop_map(Scalar::from_int), 0..=max_degree + 1).prop_map(Poly::new)
}

pub fn field(max_degree: usize) -> impl Strategy<Value = VectorField> {
    small_poly(max_degree).prop_map(VectorField::new)
}

/// An operator of stored order `order` with small integer coefficients.
pub fn operator(weight: Scalar, order: usize, max_degree: usize) -> impl Strategy<Value = DiffOp> {
    prop::collection::vec(small_poly(max_degree), order + 1).prop_map(move |c| DiffOp::new(weight.clone(), c))
}

/// Weights used by basis sweeps: integers, the half-integer and a root of
/// the quadratic critical factor.
pub fn sweep_weights() -> Vec<Scalar> {
    vec![
        Scalar::zero(),
        Scalar::from_int(-1),
        q(-1, 2),
        q(1, 3),
        quadratic_root(1),
    ]
}
