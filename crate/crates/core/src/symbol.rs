//! The sl₂-equivariant normal symbol.
//!
//! For `A = Σ a_j Dʲ ∈ D^k_λ` the normal symbol is `(ā_0, …, ā_k)` with
//!
//! `ā_i = Σ_{j≥i} α[j][i]·a_j^{(j−i)}`,  `α[i][i] = 1`,
//!
//! where the constants `α` are fixed by requiring that under the sl₂ fields
//! `1, x, x²` each `ā_i` transform as a density of label `i`. Constancy of
//! `α` and the grading `j − i` come from the translation and Euler fields;
//! the remaining condition, equivariance under `x²·d/dx`, is imposed here as
//! a linear system solved column by column.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::density::{j_operator, lie_derivative_poly, VectorField};
use crate::diffop::render_operator_terms;
use crate::linalg::RowReducer;
use crate::poly::join_terms;
use crate::{DiffOp, Error, Poly, Result, Scalar};

/// The unitriangular change of coordinates `a ↦ ā` for `D^k_λ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymbolScheme {
    order: usize,
    weight: Scalar,
    /// `alpha[j][i]` for `i ≤ j`.
    alpha: Vec<Vec<Scalar>>,
}

impl SymbolScheme {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    /// `α[j][i]`, zero above the diagonal.
    pub fn alpha(&self, j: usize, i: usize) -> Scalar {
        if i > j {
            return Scalar::zero();
        }
        self.alpha[j][i].clone()
    }

    /// Rows `j = 0..=k`, each holding `α[j][0..=j]`.
    pub fn table(&self) -> &[Vec<Scalar>] {
        &self.alpha
    }

    pub fn is_identity(&self) -> bool {
        (0..=self.order).all(|j| (0..j).all(|i| self.alpha[j][i].is_zero()))
    }
}

/// A normal symbol `Σ ξⁱ ā_i(x)` of an operator in `D^k_λ`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalSymbol {
    pub weight: Scalar,
    bars: Vec<Poly>,
}

impl NormalSymbol {
    pub fn new(weight: Scalar, mut bars: Vec<Poly>) -> Self {
        if bars.is_empty() {
            bars.push(Poly::zero());
        }
        NormalSymbol { weight, bars }
    }

    /// Symbol concentrated in one slot.
    pub fn slot(weight: Scalar, order: usize, slot: usize, value: Poly) -> Self {
        let mut bars = vec![Poly::zero(); order + 1];
        bars[slot] = value;
        NormalSymbol::new(weight, bars)
    }

    pub fn order(&self) -> usize {
        self.bars.len() - 1
    }

    pub fn bars(&self) -> &[Poly] {
        &self.bars
    }

    pub fn bar(&self, i: usize) -> Poly {
        self.bars.get(i).cloned().unwrap_or_default()
    }

    pub fn into_bars(self) -> Vec<Poly> {
        self.bars
    }
}

/// Text `Σ p_i(x)·xi^i`, highest power of the fiber coordinate first.
impl fmt::Display for NormalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        join_terms(f, &render_operator_terms(&self.bars, "xi"))
    }
}

/// Derives the scheme for `D^k_λ` and reports the solution dimension of each
/// column's homogeneous system (with `α[i][i]` left free).
fn solve_columns(order: usize, weight: &Scalar) -> (Vec<usize>, Vec<Option<Vec<Scalar>>>) {
    let field = VectorField::monomial(2);
    // column i has unknowns α[i..=k][i]
    let mut reducers: Vec<RowReducer> = (0..=order).map(|i| RowReducer::new(order - i + 1)).collect();
    for j in 0..=order {
        for q in 0..=order + 2 {
            let a = DiffOp::monomial(weight.clone(), Poly::x_pow(q), j);
            let ad = a.ad(&field);
            for (i, reducer) in reducers.iter_mut().enumerate().take(j + 1) {
                if reducer.is_full_rank() {
                    continue;
                }
                let residues: Vec<Poly> = (i..=order)
                    .map(|jj| {
                        let t = jj - i;
                        let moved = ad.coeff(jj).derivative(t);
                        let transformed =
                            lie_derivative_poly(&field, &Scalar::from_int(i as i64), &a.coeff(jj).derivative(t));
                        &moved - &transformed
                    })
                    .collect();
                let top = residues.iter().filter_map(Poly::degree).max();
                if let Some(top) = top {
                    for e in 0..=top {
                        reducer.push(residues.iter().map(|p| p.coeff(e)).collect());
                    }
                }
            }
        }
    }
    let dims = reducers.iter().map(|r| r.cols() - r.rank()).collect();
    let columns = reducers
        .iter()
        .map(|r| {
            let ns = r.nullspace();
            if ns.len() != 1 || ns[0][0].is_zero() {
                return None;
            }
            let scale = ns[0][0].inv().ok()?;
            Some(ns[0].iter().map(|c| c * &scale).collect())
        })
        .collect();
    (dims, columns)
}

/// Dimension of the solution space of each column's equivariance system
/// when `α[i][i]` is not normalized. Uniqueness of the normal symbol up to
/// slotwise scaling means every entry is 1.
pub fn scheme_solution_dimensions(order: usize, weight: &Scalar) -> Vec<usize> {
    solve_columns(order, weight).0
}

/// The unique unitriangular scheme for `D^k_λ`.
pub fn derive_scheme(order: usize, weight: &Scalar) -> Result<SymbolScheme> {
    let (dims, columns) = solve_columns(order, weight);
    let mut alpha: Vec<Vec<Scalar>> = (0..=order).map(|j| vec![Scalar::zero(); j + 1]).collect();
    for (i, col) in columns.into_iter().enumerate() {
        let col = col.ok_or(Error::SingularScheme {
            order,
            column: i,
            dimension: dims[i],
        })?;
        for (t, v) in col.into_iter().enumerate() {
            alpha[i + t][i] = v;
        }
    }
    Ok(SymbolScheme {
        order,
        weight: weight.clone(),
        alpha,
    })
}

/// Symbol coordinates for a fixed `(k, λ)`; derive once, reuse for many
/// conversions.
#[derive(Clone, Debug)]
pub struct SymbolCalculus {
    scheme: SymbolScheme,
}

impl SymbolCalculus {
    pub fn new(order: usize, weight: &Scalar) -> Result<Self> {
        Ok(SymbolCalculus {
            scheme: derive_scheme(order, weight)?,
        })
    }

    pub fn from_scheme(scheme: SymbolScheme) -> Self {
        SymbolCalculus { scheme }
    }

    pub fn scheme(&self) -> &SymbolScheme {
        &self.scheme
    }

    pub fn order(&self) -> usize {
        self.scheme.order
    }

    pub fn weight(&self) -> &Scalar {
        &self.scheme.weight
    }

    fn check(&self, weight: &Scalar, order: usize) -> Result<()> {
        if weight != &self.scheme.weight {
            return Err(Error::WeightMismatch {
                expected: self.scheme.weight.clone(),
                found: weight.clone(),
            });
        }
        if order != self.scheme.order {
            return Err(Error::UnsupportedOrder {
                order,
                reason: "stored order differs from the scheme order",
            });
        }
        Ok(())
    }

    pub fn to_symbol(&self, a: &DiffOp) -> Result<NormalSymbol> {
        self.check(&a.weight, a.order())?;
        Ok(NormalSymbol::new(a.weight.clone(), self.bars_of(a.coeffs())))
    }

    fn bars_of(&self, coeffs: &[Poly]) -> Vec<Poly> {
        let k = self.scheme.order;
        (0..=k)
            .map(|i| {
                (i..=k).fold(Poly::zero(), |acc, j| {
                    let c = &self.scheme.alpha[j][i];
                    if c.is_zero() {
                        acc
                    } else {
                        &acc + &coeffs[j].derivative(j - i).scale(c)
                    }
                })
            })
            .collect()
    }

    pub fn from_symbol(&self, s: &NormalSymbol) -> Result<DiffOp> {
        self.check(&s.weight, s.order())?;
        let k = self.scheme.order;
        let mut a = vec![Poly::zero(); k + 1];
        for i in (0..=k).rev() {
            let mut v = s.bars[i].clone();
            for (j, aj) in a.iter().enumerate().skip(i + 1) {
                let c = &self.scheme.alpha[j][i];
                if !c.is_zero() {
                    v = &v - &aj.derivative(j - i).scale(c);
                }
            }
            a[i] = v;
        }
        Ok(DiffOp::new(s.weight.clone(), a))
    }

    /// The module action transported to symbol coordinates:
    /// `to_symbol(ad L_X(from_symbol(S)))`.
    pub fn action(&self, x: &VectorField, s: &NormalSymbol) -> Result<NormalSymbol> {
        let a = self.from_symbol(s)?;
        self.to_symbol(&a.ad(x))
    }
}

/// Normal symbol of `A`, using the scheme at `A`'s stored order.
pub fn to_symbol(a: &DiffOp) -> Result<NormalSymbol> {
    SymbolCalculus::new(a.order(), &a.weight)?.to_symbol(a)
}

/// Inverse of [`to_symbol`].
pub fn from_symbol(s: &NormalSymbol) -> Result<DiffOp> {
    SymbolCalculus::new(s.order(), &s.weight)?.from_symbol(s)
}

pub fn symbol_action(x: &VectorField, s: &NormalSymbol) -> Result<NormalSymbol> {
    SymbolCalculus::new(s.order(), &s.weight)?.action(x, s)
}

/// Literal evaluation of the published order-4 action in symbol
/// coordinates: each slot transforms as a density plus the `J_m` correction
/// terms with their λ-polynomial coefficients. Used as an oracle against
/// [`symbol_action`].
pub fn eq_nac_reference(x: &VectorField, s: &NormalSymbol) -> Result<NormalSymbol> {
    if s.order() != 4 {
        return Err(Error::UnsupportedOrder {
            order: s.order(),
            reason: "the transcribed order-4 action needs a symbol of order 4",
        });
    }
    let l = &s.weight;
    let q = |n: i64, d: i64| Scalar::from_ratio(n, d);
    let one = Scalar::one();
    let l1 = l * &(l + &one); // λ(λ+1)
    let l2 = &l1 * &(&l.scale_int(2) + &one); // λ(λ+1)(2λ+1)
    let sq = &(l * l).scale_int(6) + &l.scale_int(6); // 6λ²+6λ
    let c_2_4 = &q(2, 7) * &(&sq - &Scalar::from_int(5));
    let c_1_3 = &q(2, 5) * &(&(&(l * l).scale_int(3) + &l.scale_int(3)) - &one);
    let c_1_4 = &q(1, 6) * &l2;
    let c_0_2 = &q(2, 3) * &l1;
    let c_0_3 = &q(1, 6) * &l2;
    let c_0_4 = &(&q(1, 420) * &l1) * &(&(&(l * l).scale_int(12) + &l.scale_int(12)) + &Scalar::from_int(11));

    let b = |i: usize| &s.bars[i];
    let lie = |i: usize| lie_derivative_poly(x, &Scalar::from_int(i as i64), b(i));
    let j = |m: usize, slot: usize| j_operator(m, &Scalar::from_int(slot as i64), x, b(slot));

    let bar4 = lie(4);
    let bar3 = lie(3);
    let bar2 = &lie(2) + &j(3, 4)?.scale(&c_2_4);
    let bar1 = &(&lie(1) + &j(3, 3)?.scale(&c_1_3)) + &j(4, 4)?.scale(&c_1_4);
    let bar0 = &(&(&lie(0) + &j(3, 2)?.scale(&c_0_2)) + &j(4, 3)?.scale(&c_0_3)) + &j(5, 4)?.scale(&c_0_4);
    Ok(NormalSymbol::new(l.clone(), vec![bar0, bar1, bar2, bar3, bar4]))
}

/// Text of a scheme table, one row `j: α[j][0] … α[j][j]` per line.
pub fn render_scheme(scheme: &SymbolScheme) -> String {
    let mut out = String::new();
    for (j, row) in scheme.alpha.iter().enumerate() {
        out.push_str(&alloc::format!("{j}:"));
        for c in row {
            out.push_str(&alloc::format!(" {c}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn order_four_subdiagonal() {
        let l = w(2, 9);
        let s = derive_scheme(4, &l).unwrap();
        assert_eq!(s.alpha(4, 3), &l - &w(3, 2));
        for i in 0..=4 {
            assert!(s.alpha(i, i).is_one());
        }
    }

    #[test]
    fn order_one_scheme() {
        let l = w(-7, 4);
        let s = derive_scheme(1, &l).unwrap();
        assert!(s.alpha(1, 1).is_one());
        assert_eq!(s.alpha(1, 0), l);
    }

    #[test]
    fn symbol_of_multiplication_operator() {
        let f = Poly::from_ints(&[1, -3, 0, 2]);
        let s = to_symbol(&DiffOp::multiplication(w(3, 5), f.clone())).unwrap();
        assert_eq!(s.bars(), &[f]);
    }

    #[test]
    fn symbol_of_lie_derivative_is_xi_x() {
        let l = w(-4, 3);
        let x = VectorField::new(Poly::from_ints(&[2, 0, 1, 5]));
        let s = to_symbol(&DiffOp::lie(&x, l.clone())).unwrap();
        assert_eq!(s.bars(), &[Poly::zero(), x.component().clone()]);
        let back = from_symbol(&s).unwrap();
        assert_eq!(back, DiffOp::lie(&x, l));
    }

    #[test]
    fn nac_requires_order_four() {
        let s = NormalSymbol::slot(w(1, 2), 3, 3, Poly::one());
        assert!(eq_nac_reference(&VectorField::monomial(3), &s).is_err());
    }

    #[test]
    fn weight_mismatch_is_rejected() {
        let calc = SymbolCalculus::new(2, &w(1, 3)).unwrap();
        let a = DiffOp::zero(w(1, 4), 2);
        assert!(matches!(calc.to_symbol(&a), Err(Error::WeightMismatch { .. })));
    }
}
