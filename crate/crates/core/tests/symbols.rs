mod common;

use common::{q, quadratic_root, small_poly, sweep_weights};
use opmod::density::lie_derivative_poly;
use opmod::symbol::{derive_scheme, eq_nac_reference, scheme_solution_dimensions, symbol_action, to_symbol};
use opmod::{DiffOp, NormalSymbol, Poly, Scalar, SymbolCalculus, VectorField};
use proptest::prelude::*;

/// `ā_i = Σ_j α[j][i]·a_j^{(j−i)}` for `k = 4`, as polynomials in `λ`.
fn printed_order4_scheme(j: usize, i: usize) -> Poly {
    let lin = |a: i64, b: i64| Poly::from_ints(&[b, a]); // aλ + b
    let prod = |c: Scalar, fs: &[Poly]| fs.iter().fold(Poly::constant(c), |acc, f| &acc * f);
    let l = Poly::x();
    let l1 = lin(1, -1);
    let l2 = lin(2, -1);
    let l3 = lin(2, -3);
    match (j, i) {
        (j, i) if j == i => Poly::one(),
        (4, 3) => prod(q(1, 2), &[l3]),
        (3, 2) => l1,
        (4, 2) => prod(q(2, 7), &[l1, l3]),
        (2, 1) => prod(q(1, 2), &[l2]),
        (3, 1) => prod(q(3, 10), &[l1, l2]),
        (4, 1) => prod(q(1, 15), &[l1, l2, l3]),
        (1, 0) => l,
        (2, 0) => prod(q(1, 3), &[l, l2]),
        (3, 0) => prod(q(1, 6), &[l, l1, l2]),
        (4, 0) => prod(q(1, 30), &[l, l1, l2, l3]),
        _ => unreachable!(),
    }
}

fn interpolate(points: &[(Scalar, Scalar)]) -> Poly {
    let mut out = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::constant(yi.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if i != j {
                let factor = Poly::new(vec![-xj, Scalar::one()]);
                basis = (&basis * &factor).scale(&(xi - xj).inv().unwrap());
            }
        }
        out = &out + &basis;
    }
    out
}

#[test]
fn symbol_columns_are_unique_up_to_scale() {
    let mut weights = sweep_weights();
    weights.push(quadratic_root(-1));
    weights.push(q(5, 2));
    for l in &weights {
        for k in 0..=5 {
            assert_eq!(scheme_solution_dimensions(k, l), vec![1; k + 1], "k={k} λ={l}");
        }
    }
}

#[test]
fn scheme_entries_interpolate_to_the_printed_polynomials() {
    let nodes: Vec<Scalar> = [q(1, 3), q(-2, 5), q(7, 2), Scalar::from_int(2), q(-9, 4), q(5, 7)].to_vec();
    let schemes: Vec<_> = nodes.iter().map(|l| derive_scheme(4, l).unwrap()).collect();
    for j in 0..=4 {
        for i in 0..=j {
            let points: Vec<(Scalar, Scalar)> = nodes
                .iter()
                .zip(&schemes)
                .map(|(l, s)| (l.clone(), s.alpha(j, i)))
                .collect();
            let fitted = interpolate(&points);
            assert!(
                fitted.degree().unwrap_or(0) <= j - i,
                "α[{j}][{i}] has degree above {}",
                j - i
            );
            assert_eq!(fitted, printed_order4_scheme(j, i), "α[{j}][{i}]");
        }
    }
}

#[test]
fn scheme_does_not_depend_on_the_order() {
    let l = q(-4, 9);
    let big = derive_scheme(6, &l).unwrap();
    for k in 0..6 {
        let small = derive_scheme(k, &l).unwrap();
        for j in 0..=k {
            for i in 0..=j {
                assert_eq!(small.alpha(j, i), big.alpha(j, i));
            }
        }
    }
}

#[test]
fn normal_symbol_is_sl2_equivariant() {
    for l in sweep_weights() {
        for k in 0..=5 {
            let calc = SymbolCalculus::new(k, &l).unwrap();
            for p in 0..=2 {
                let x = VectorField::monomial(p);
                for j in 0..=k {
                    for d in 0..=k + 2 {
                        let s = NormalSymbol::slot(l.clone(), k, j, Poly::x_pow(d));
                        let acted = calc.action(&x, &s).unwrap();
                        for i in 0..=k {
                            let expected = lie_derivative_poly(&x, &Scalar::from_int(i as i64), &s.bar(i));
                            assert_eq!(acted.bar(i), expected, "λ={l} k={k} X=x^{p} slot {j} x^{d}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn transported_action_is_a_lie_action() {
    for l in [q(1, 3), q(-1, 2), quadratic_root(1)] {
        let calc = SymbolCalculus::new(4, &l).unwrap();
        for j in 0..=4 {
            for d in 0..=4 {
                let s = NormalSymbol::slot(l.clone(), 4, j, Poly::x_pow(d));
                for p in 0..=6 {
                    for r in p + 1..=6 {
                        let (x, y) = (VectorField::monomial(p), VectorField::monomial(r));
                        let xy = calc.action(&x, &calc.action(&y, &s).unwrap()).unwrap();
                        let yx = calc.action(&y, &calc.action(&x, &s).unwrap()).unwrap();
                        let br = calc.action(&x.bracket(&y), &s).unwrap();
                        for i in 0..=4 {
                            assert_eq!(&xy.bar(i) - &yx.bar(i), br.bar(i));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn zero_padding_commutes_with_the_symbol() {
    let l = q(3, 5);
    let a = DiffOp::new(
        l.clone(),
        vec![
            Poly::from_ints(&[1, 2]),
            Poly::x_pow(3),
            Poly::from_ints(&[0, 1, 1]),
            Poly::x_pow(4),
        ],
    );
    let padded = a.with_order(5).unwrap();
    let small = to_symbol(&a).unwrap();
    let big = to_symbol(&padded).unwrap();
    assert_eq!(big.order(), 5);
    for i in 0..=3 {
        assert_eq!(small.bar(i), big.bar(i));
    }
    assert!(big.bar(4).is_zero() && big.bar(5).is_zero());
    // a calculus only accepts its own stored order
    assert!(SymbolCalculus::new(4, &l).unwrap().to_symbol(&a).is_err());
}

proptest! {
    #[test]
    fn symbol_round_trip(c in prop::collection::vec(small_poly(4), 5), num in -8i64..8, den in 1i64..6) {
        let a = DiffOp::new(q(num, den), c);
        let calc = SymbolCalculus::new(4, &a.weight).unwrap();
        let s = calc.to_symbol(&a).unwrap();
        prop_assert_eq!(calc.from_symbol(&s).unwrap(), a.clone());
        prop_assert_eq!(s.bar(4), a.coeff(4));
    }

    #[test]
    fn transcribed_action_matches_transport(bars in prop::collection::vec(small_poly(5), 5), x in prop::collection::vec(-4i64..4, 0..8), num in -8i64..8, den in 1i64..6) {
        let s = NormalSymbol::new(q(num, den), bars);
        let x = VectorField::new(Poly::from_ints(&x));
        prop_assert_eq!(eq_nac_reference(&x, &s).unwrap(), symbol_action(&x, &s).unwrap());
    }
}
