mod common;

use common::{field, q, quadratic_root, small_poly, sweep_weights};
use opmod::density::{j_operator, lie_derivative, transvectant};
use opmod::{Density, Poly, Scalar, VectorField};
use proptest::prelude::*;

#[test]
fn lie_derivative_is_a_representation_on_the_monomial_basis() {
    let weights = [
        q(-1, 2),
        quadratic_root(1),
        Scalar::zero(),
        q(7, 3),
        Scalar::from_int(-2),
    ];
    for l in &weights {
        for p in 0..=8 {
            let x = VectorField::monomial(p);
            for r in 0..=8 {
                let phi = Density::new(l.clone(), Poly::x_pow(r));
                for s in 0..=8 {
                    let y = VectorField::monomial(s);
                    let lhs = lie_derivative(&x, &lie_derivative(&y, &phi))
                        .checked_sub(&lie_derivative(&y, &lie_derivative(&x, &phi)))
                        .unwrap();
                    assert_eq!(lhs, lie_derivative(&x.bracket(&y), &phi), "p={p} q={s} r={r} λ={l}");
                }
            }
        }
    }
}

#[test]
fn transvectants_are_sl2_equivariant() {
    let pairs = [
        (q(1, 3), q(-5, 2)),
        (q(-1, 2), Scalar::from_int(2)),
        (quadratic_root(-1), q(3, 4)),
        (Scalar::from_int(1), q(2, 5)),
    ];
    for (l, m) in &pairs {
        for n in 0..=5 {
            for xdeg in 0..=2 {
                let x = VectorField::monomial(xdeg);
                for r in 0..=6 {
                    for t in 0..=6 {
                        let phi = Density::new(l.clone(), Poly::x_pow(r));
                        let psi = Density::new(m.clone(), Poly::x_pow(t));
                        let lhs = lie_derivative(&x, &transvectant(n, &phi, &psi));
                        let rhs = transvectant(n, &lie_derivative(&x, &phi), &psi)
                            .checked_add(&transvectant(n, &phi, &lie_derivative(&x, &psi)))
                            .unwrap();
                        assert_eq!(lhs, rhs, "n={n} X=x^{xdeg} r={r} t={t}");
                    }
                }
            }
        }
    }
}

#[test]
fn transvectants_fail_equivariance_beyond_sl2() {
    let phi = Density::new(q(1, 3), Poly::x_pow(4));
    let psi = Density::new(q(2, 7), Poly::x_pow(3));
    let x = VectorField::monomial(3);
    let lhs = lie_derivative(&x, &transvectant(2, &phi, &psi));
    let rhs = transvectant(2, &lie_derivative(&x, &phi), &psi)
        .checked_add(&transvectant(2, &phi, &lie_derivative(&x, &psi)))
        .unwrap();
    assert_ne!(lhs, rhs);
}

/// `J_m(X, a) = κ_m(s)·j_m(X, a)` with `X` labelled 1 and `a` labelled `s`;
/// `κ_m` is fixed by one monomial and checked on the rest.
#[test]
fn j_operators_are_proportional_to_transvectants() {
    let weights = [q(1, 3), q(-2, 5), q(7, 4), quadratic_root(1), Scalar::from_int(3)];
    for s in &weights {
        for m in 3..=5usize {
            let j_of = |xp: usize, r: usize| {
                let x = Density::new(Scalar::one(), Poly::x_pow(xp));
                let a = Density::new(s.clone(), Poly::x_pow(r));
                transvectant(m, &x, &a).value
            };
            let big_j = |xp: usize, r: usize| j_operator(m, s, &VectorField::monomial(xp), &Poly::x_pow(r)).unwrap();
            let probe_j = j_of(m + 2, 2);
            let probe_big = big_j(m + 2, 2);
            let lead = probe_j.degree().expect("probe nonzero");
            let kappa = probe_big.coeff(lead).checked_div(&probe_j.coeff(lead)).unwrap();
            assert!(!kappa.is_zero());
            for xp in 0..=m + 3 {
                for r in 0..=4 {
                    assert_eq!(big_j(xp, r), j_of(xp, r).scale(&kappa), "m={m} s={s} x^{xp} a=x^{r}");
                }
            }
        }
    }
}

#[test]
fn transvectant_weights() {
    for l in sweep_weights() {
        let phi = Density::new(l.clone(), Poly::one());
        let psi = Density::new(q(1, 2), Poly::one());
        for n in 0..=5 {
            assert_eq!(
                transvectant(n, &phi, &psi).weight,
                &(&l + &q(1, 2)) - &Scalar::from_int(n as i64)
            );
        }
    }
}

proptest! {
    #[test]
    fn lie_derivative_is_a_representation(x in field(5), y in field(5), phi in small_poly(6), num in -6i64..6, den in 1i64..5) {
        let phi = Density::new(q(num, den), phi);
        let lhs = lie_derivative(&x, &lie_derivative(&y, &phi))
            .checked_sub(&lie_derivative(&y, &lie_derivative(&x, &phi)))
            .unwrap();
        prop_assert_eq!(lhs, lie_derivative(&x.bracket(&y), &phi));
    }

    #[test]
    fn bracket_satisfies_jacobi(x in field(4), y in field(4), z in field(4)) {
        let a = x.bracket(&y.bracket(&z));
        let b = y.bracket(&z.bracket(&x));
        let c = z.bracket(&x.bracket(&y));
        prop_assert!((&(&a.0 + &b.0) + &c.0).is_zero());
    }
}
