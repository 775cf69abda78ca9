//! Module isomorphisms between `D^k_λ` and `D^k_μ`.
//!
//! Any intertwiner is diagonal in normal-symbol coordinates (the normal
//! symbol is unique up to slotwise scaling), so the search space is the
//! `k+1` slot multipliers. [`solve_diagonal_intertwiner`] finds all of them
//! by exact linear algebra; [`apply_t`] is the distinguished third-order
//! intertwiner `T`.

use alloc::vec;
use alloc::vec::Vec;

use crate::density::VectorField;
use crate::linalg::RowReducer;
use crate::{CriticalFactor, DiffOp, Error, NormalSymbol, Poly, Result, Scalar, SymbolCalculus, WeightRole};

/// Slotwise scaling `ā_i ↦ α_i ā_i` from `D^k_λ` to `D^k_μ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagonalMap {
    pub order: usize,
    pub source: Scalar,
    pub target: Scalar,
    pub alphas: Vec<Scalar>,
}

impl DiagonalMap {
    pub fn is_invertible(&self) -> bool {
        self.alphas.iter().all(|a| !a.is_zero())
    }

    pub fn apply_symbol(&self, s: &NormalSymbol) -> Result<NormalSymbol> {
        if s.weight != self.source {
            return Err(Error::WeightMismatch {
                expected: self.source.clone(),
                found: s.weight.clone(),
            });
        }
        if s.order() != self.order {
            return Err(Error::UnsupportedOrder {
                order: s.order(),
                reason: "symbol order differs from the diagonal map order",
            });
        }
        let bars = s.bars().iter().zip(&self.alphas).map(|(b, a)| b.scale(a)).collect();
        Ok(NormalSymbol::new(self.target.clone(), bars))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Isomorphic,
    NotIsomorphic,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntertwinerVerdict {
    pub status: Status,
    pub solution_dimension: usize,
    pub basis: Vec<DiagonalMap>,
    /// Slots `i` on which every solution vanishes.
    pub degenerate_slots: Vec<usize>,
}

/// The transported action `symbol_action(xᵖ, x^q in slot j)` for every basis
/// pair used by the intertwiner constraints, at one weight.
#[derive(Clone, Debug)]
pub struct ActionTable {
    order: usize,
    weight: Scalar,
    /// `entries[(p·(k+1) + j)·(qmax+1) + q]`
    entries: Vec<Vec<Poly>>,
}

impl ActionTable {
    /// Field degrees `p ≤ k+4` and slot degrees `q ≤ k+2`: the corrections
    /// involve at most `k+1` derivatives of `X` and two of the slot.
    pub fn new(order: usize, weight: &Scalar) -> Result<Self> {
        let calc = SymbolCalculus::new(order, weight)?;
        let fields: Vec<VectorField> = (0..=Self::pmax(order)).map(VectorField::monomial).collect();
        let slots = (order + 1) * (Self::qmax(order) + 1);
        let mut entries = vec![Vec::new(); fields.len() * slots];
        for j in 0..=order {
            for q in 0..=Self::qmax(order) {
                let s = NormalSymbol::slot(weight.clone(), order, j, Poly::x_pow(q));
                let op = calc.from_symbol(&s)?;
                for (p, x) in fields.iter().enumerate() {
                    entries[p * slots + j * (Self::qmax(order) + 1) + q] = calc.to_symbol(&op.ad(x))?.into_bars();
                }
            }
        }
        Ok(ActionTable {
            order,
            weight: weight.clone(),
            entries,
        })
    }

    fn pmax(order: usize) -> usize {
        order + 4
    }

    fn qmax(order: usize) -> usize {
        order + 2
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weight(&self) -> &Scalar {
        &self.weight
    }

    fn iter(&self) -> impl Iterator<Item = (usize, &Vec<Poly>)> {
        let per_p = (self.order + 1) * (Self::qmax(self.order) + 1);
        self.entries
            .iter()
            .enumerate()
            .map(move |(idx, bars)| ((idx % per_p) / (Self::qmax(self.order) + 1), bars))
    }
}

/// All diagonal intertwiners `D^k_λ → D^k_μ`.
pub fn solve_diagonal_intertwiner(order: usize, source: &Scalar, target: &Scalar) -> Result<IntertwinerVerdict> {
    let from = ActionTable::new(order, source)?;
    let to = if source == target {
        from.clone()
    } else {
        ActionTable::new(order, target)?
    };
    solve_with_tables(&from, &to)
}

/// [`solve_diagonal_intertwiner`] with precomputed action tables, for sweeps
/// over many weight pairs.
pub fn solve_with_tables(from: &ActionTable, to: &ActionTable) -> Result<IntertwinerVerdict> {
    if from.order != to.order {
        return Err(Error::UnsupportedOrder {
            order: to.order,
            reason: "action tables of different orders",
        });
    }
    let k = from.order;
    if k == 0 {
        return Err(Error::UnsupportedOrder {
            order: 0,
            reason: "the intertwiner classification needs k >= 1",
        });
    }
    let mut reducer = RowReducer::new(k + 1);
    // Φ(act_λ(X, e_j)) = act_μ(X, α_j e_j), slot i, power e:
    //   α_i·act_λ[i][e] − α_j·act_μ[i][e] = 0
    'outer: for ((j, src), (_, dst)) in from.iter().zip(to.iter()) {
        for i in 0..=k {
            let top = src[i].degree().max(dst[i].degree());
            let Some(top) = top else { continue };
            for e in 0..=top {
                let mut row = vec![Scalar::zero(); k + 1];
                row[i] = src[i].coeff(e);
                row[j] = &row[j] - &dst[i].coeff(e);
                reducer.push(row);
                if reducer.is_full_rank() {
                    break 'outer;
                }
            }
        }
    }
    let null = reducer.nullspace();
    let degenerate_slots: Vec<usize> = (0..=k).filter(|&i| null.iter().all(|v| v[i].is_zero())).collect();
    let status = if degenerate_slots.is_empty() {
        Status::Isomorphic
    } else {
        Status::NotIsomorphic
    };
    let basis = null
        .into_iter()
        .map(|alphas| DiagonalMap {
            order: k,
            source: from.weight.clone(),
            target: to.weight.clone(),
            alphas,
        })
        .collect::<Vec<_>>();
    Ok(IntertwinerVerdict {
        status,
        solution_dimension: basis.len(),
        basis,
        degenerate_slots,
    })
}

/// Weights at which `D^k` is special: `k = 3` gives the roots of `λ(λ+1)`,
/// `2λ+1` and `3λ²+3λ−1`; `k = 2` gives the roots of `λ(λ+1)`.
pub fn critical_set(order: usize) -> Result<Vec<Scalar>> {
    let half = Scalar::from_ratio(-1, 2);
    let shift = &Scalar::sqrt21() * &Scalar::from_ratio(1, 6);
    match order {
        2 => Ok(vec![Scalar::zero(), Scalar::from_int(-1)]),
        3 => Ok(vec![
            Scalar::zero(),
            Scalar::from_int(-1),
            half.clone(),
            &half + &shift,
            &half - &shift,
        ]),
        _ => Err(Error::UnsupportedOrder {
            order,
            reason: "critical sets are tabulated for k in {2, 3}",
        }),
    }
}

const T_FACTORS: [CriticalFactor; 3] = [
    CriticalFactor::ProductWithSuccessor,
    CriticalFactor::Linear,
    CriticalFactor::Quadratic,
];

/// Rejects weights where one of the factors of `T` vanishes.
pub fn check_noncritical(weight: &Scalar, role: WeightRole) -> Result<()> {
    for factor in T_FACTORS {
        if factor.evaluate(weight).is_zero() {
            return Err(Error::CriticalWeight {
                weight: weight.clone(),
                factor,
                role,
            });
        }
    }
    Ok(())
}

/// Slot multipliers of `T: D³_λ → D³_μ` normalized by `α_3 = 1`:
/// `(μ(μ+1)(2μ+1)/λ(λ+1)(2λ+1), (3μ²+3μ−1)/(3λ²+3λ−1), (2μ+1)/(2λ+1), 1)`.
pub fn t_alphas(source: &Scalar, target: &Scalar) -> Result<[Scalar; 4]> {
    check_noncritical(source, WeightRole::Source)?;
    check_noncritical(target, WeightRole::Target)?;
    let ratio = |f: &dyn Fn(&Scalar) -> Scalar| f(target).checked_div(&f(source));
    let cubic = |w: &Scalar| &CriticalFactor::ProductWithSuccessor.evaluate(w) * &CriticalFactor::Linear.evaluate(w);
    Ok([
        ratio(&cubic)?,
        ratio(&|w| CriticalFactor::Quadratic.evaluate(w))?,
        ratio(&|w| CriticalFactor::Linear.evaluate(w))?,
        Scalar::one(),
    ])
}

/// The intertwiner `T` as a [`DiagonalMap`] on `D³`.
pub fn t_map(source: &Scalar, target: &Scalar) -> Result<DiagonalMap> {
    Ok(DiagonalMap {
        order: 3,
        source: source.clone(),
        target: target.clone(),
        alphas: t_alphas(source, target)?.to_vec(),
    })
}

/// `T(A) ∈ D³_μ` for `A ∈ D³_λ` (`λ` is `A`'s weight).
pub fn apply_t(a: &DiffOp, target: &Scalar) -> Result<DiffOp> {
    let map = t_map(&a.weight, target)?;
    let a = a.with_order(3)?;
    let from = SymbolCalculus::new(3, &a.weight)?;
    let to = SymbolCalculus::new(3, target)?;
    to.from_symbol(&map.apply_symbol(&from.to_symbol(&a)?)?)
}

/// The four families that span `D³`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `φ ↦ fφ`
    Multiplication(Poly),
    /// `L_X`
    Lie(VectorField),
    /// `[L_X, L_Y]_+`
    Anticommutator(VectorField, VectorField),
    /// `[L_X, L_Y, L_Z]_+`
    Sym3(VectorField, VectorField, VectorField),
}

impl Generator {
    pub fn build(&self, weight: &Scalar) -> DiffOp {
        match self {
            Generator::Multiplication(f) => DiffOp::multiplication(weight.clone(), f.clone()),
            Generator::Lie(x) => DiffOp::lie(x, weight.clone()),
            Generator::Anticommutator(x, y) => DiffOp::lie(x, weight.clone())
                .anticommutator(&DiffOp::lie(y, weight.clone()))
                .expect("equal weights"),
            Generator::Sym3(x, y, z) => DiffOp::sym3(x, y, z, weight),
        }
    }
}

/// `T` on a generator, read off the closed form: the same generator at
/// weight `μ` times a ratio of critical polynomials.
pub fn eq_int_reference(generator: &Generator, source: &Scalar, target: &Scalar) -> Result<DiffOp> {
    let [a0, a1, a2, _] = t_alphas(source, target)?;
    let factor = match generator {
        Generator::Multiplication(_) => a0,
        Generator::Lie(_) => a1,
        Generator::Anticommutator(..) => a2,
        Generator::Sym3(..) => Scalar::one(),
    };
    Ok(generator.build(target).scale(&factor))
}

/// Literal transcription of the published coefficient formula for `T`.
/// Kept as an oracle; [`exp_audit`] reports where it departs from
/// [`apply_t`].
pub fn eq_exp_reference(a: &DiffOp, target: &Scalar) -> Result<DiffOp> {
    let l = &a.weight;
    let m = target;
    check_noncritical(l, WeightRole::Source)?;
    check_noncritical(m, WeightRole::Target)?;
    let a = a.with_order(3)?;
    let one = Scalar::one();
    let int = Scalar::from_int;
    let l2 = l * l;
    let l3 = &l2 * l;
    let l4 = &l3 * l;
    let m2 = m * m;
    let m3 = &m2 * m;
    let lin_l = CriticalFactor::Linear.evaluate(l); // 2λ+1
    let quad_l = CriticalFactor::Quadratic.evaluate(l); // 3λ²+3λ−1
    let lp1 = l + &one;
    let den = &lin_l * &quad_l;
    let den0 = &lp1 * &den;
    let [t0, t1, t2, _] = t_alphas(l, m)?;
    let d = |p: usize, t: usize| a.coeff(p).derivative(t);
    let div = |n: Scalar, dd: &Scalar| n.checked_div(dd);

    // a_2^T
    let c23 = div((m - l).scale_int(3), &lin_l)?;
    let a2 = &d(2, 0).scale(&t2) + &d(3, 1).scale(&c23);

    // a_1^T
    let n12 = &(l - m) * &(&(&(m * &(&l.scale_int(12) - &one)) - l) + &int(3));
    let c12 = div(n12, &den.scale_int(2))?;
    let n13 = &(&(&m2 * &(&l.scale_int(5) - &one)) - &(m * &(&(&l2.scale_int(6) + l) - &one)))
        + &(&(&l3 + &l2.scale_int(2)) - l);
    let c13 = &Scalar::from_ratio(3, 2) * &div(n13, &den)?;
    let a1 = &(&d(1, 0).scale(&t1) + &d(2, 1).scale(&c12)) + &d(3, 2).scale(&c13);

    // a_0^T
    let n01 = &(&(&m3 * &(&l.scale_int(3) + &int(5))) - &(&m2 * &(&l2.scale_int(3) - &int(6))))
        - &(m * &(&l2.scale_int(5) + &l.scale_int(6)));
    let c01 = -div(n01, &den0)?;
    let n02 = &(&(&m3 * &(&int(3) - l)) - &(&m2 * &(&(&l2.scale_int(6) + &l.scale_int(7)) - &int(5))))
        + &(m * &(&(&l3.scale_int(7) + &l2.scale_int(4)) - &l.scale_int(5)));
    let c02 = div(n02, &den0.scale_int(2))?;
    let n03 = &(&(&m3 * &(&l2.scale_int(3) + &one)) - &(&m2 * &(&(&l2 + &l.scale_int(2)) - &one)).scale_int(3))
        - &(m * &(&(&(&l4.scale_int(3) - &l3.scale_int(3)) - &l2.scale_int(5)) + &l.scale_int(3)));
    let c03 = -div(n03, &den0.scale_int(2))?;
    let a0 = &(&(&d(0, 0).scale(&t0) + &d(1, 1).scale(&c01)) + &d(2, 2).scale(&c02)) + &d(3, 3).scale(&c03);

    Ok(DiffOp::new(m.clone(), vec![a0, a1, a2, d(3, 0)]))
}

/// One coefficient of `a_i^T` in front of `a_j^{(j−i)}` where the
/// transcription and the computed `T` disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpDiscrepancy {
    pub target_slot: usize,
    pub source_slot: usize,
    pub derivative: usize,
    pub transcribed: Scalar,
    pub computed: Scalar,
}

/// Compares [`eq_exp_reference`] with [`apply_t`] coefficient by
/// coefficient. `a_i^T` depends only on the `a_j^{(j−i)}`, so feeding
/// `a_j = x^{j−i}` isolates each coefficient times `(j−i)!`.
pub fn exp_audit(source: &Scalar, target: &Scalar) -> Result<Vec<ExpDiscrepancy>> {
    let mut out = Vec::new();
    for j in 0..=3 {
        for i in 0..=j {
            let t = j - i;
            let mut a = DiffOp::monomial(source.clone(), Poly::x_pow(t), j);
            a = a.with_order(3)?;
            let fact = Scalar::from_int((1..=t as i64).product());
            let computed = apply_t(&a, target)?.coeff(i).coeff(0).checked_div(&fact)?;
            let transcribed = eq_exp_reference(&a, target)?.coeff(i).coeff(0).checked_div(&fact)?;
            if computed != transcribed {
                out.push(ExpDiscrepancy {
                    target_slot: i,
                    source_slot: j,
                    derivative: t,
                    transcribed,
                    computed,
                });
            }
        }
    }
    Ok(out)
}
