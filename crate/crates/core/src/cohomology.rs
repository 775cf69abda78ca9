//! 1-cochains of vector fields with values in `Hom(F_s, F_{s+1−m})`, the
//! coboundary operator on translation-invariant local maps, and the
//! three-parameter deformation of `F_3 ⊕ F_2 ⊕ F_1 ⊕ F_0`.
//!
//! Cochains are translation-invariant bilinear expressions
//! `c(X)(a) = Σ β_{p,q} X^{(p)} a^{(q)}` homogeneous of grade `p + q = m`.
//! The differential preserves the grade, so every search here is done one
//! grade at a time.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::density::{j_operator, lie_derivative_poly, Density, VectorField};
use crate::linalg::{self, RowReducer};
use crate::{Error, Poly, Result, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Cochain1 {
    source: Scalar,
    shift: usize,
    terms: BTreeMap<(usize, usize), Scalar>,
}

impl Cochain1 {
    /// Fails if a nonzero term is outside grade `shift`.
    pub fn new(source: Scalar, shift: usize, terms: BTreeMap<(usize, usize), Scalar>) -> Result<Self> {
        let mut kept = BTreeMap::new();
        for ((p, q), c) in terms {
            if c.is_zero() {
                continue;
            }
            if p + q != shift {
                return Err(Error::Inhomogeneous { p, q, grade: shift });
            }
            kept.insert((p, q), c);
        }
        Ok(Cochain1 {
            source,
            shift,
            terms: kept,
        })
    }

    fn from_pairs(source: Scalar, shift: usize, pairs: &[((usize, usize), Scalar)]) -> Self {
        Cochain1::new(source, shift, pairs.iter().cloned().collect()).expect("homogeneous by construction")
    }

    /// `c_3(X)(a) = X‴a`
    pub fn c3(s: &Scalar) -> Self {
        Cochain1::from_pairs(s.clone(), 3, &[((3, 0), Scalar::one())])
    }

    /// `c_4(X)(a) = sX⁗a + 2X‴a′`
    pub fn c4(s: &Scalar) -> Self {
        Cochain1::from_pairs(s.clone(), 4, &[((4, 0), s.clone()), ((3, 1), Scalar::from_int(2))])
    }

    /// `X‴a + 2X″a′`
    pub fn tilde_c3(s: &Scalar) -> Self {
        Cochain1::from_pairs(s.clone(), 3, &[((3, 0), Scalar::one()), ((2, 1), Scalar::from_int(2))])
    }

    /// `X‴a′ + X″a″`
    pub fn tilde_c4(s: &Scalar) -> Self {
        Cochain1::from_pairs(s.clone(), 4, &[((3, 1), Scalar::one()), ((2, 2), Scalar::one())])
    }

    pub fn source(&self) -> &Scalar {
        &self.source
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    /// `s + 1 − m`
    pub fn target(&self) -> Scalar {
        &(&self.source + &Scalar::one()) - &Scalar::from_int(self.shift as i64)
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Cochain1 {
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        Cochain1::new(self.source.clone(), self.shift, terms).expect("same grade")
    }

    fn eval_poly(&self, x: &VectorField, a: &Poly) -> Poly {
        self.terms.iter().fold(Poly::zero(), |acc, ((p, q), c)| {
            &acc + &(&x.jet(*p) * &a.derivative(*q)).scale(c)
        })
    }

    /// `c(X)(a)`, a density of weight `s + 1 − m`.
    pub fn eval(&self, x: &VectorField, a: &Density) -> Result<Density> {
        a.expect_weight(&self.source)?;
        Ok(Density::new(self.target(), self.eval_poly(x, &a.value)))
    }

    /// `[L_X, c(Y)] − [L_Y, c(X)] − c([X,Y])` applied to `a`; identically
    /// zero iff `c` is a cocycle.
    pub fn cocycle_defect(&self, x: &VectorField, y: &VectorField, a: &Density) -> Result<Density> {
        a.expect_weight(&self.source)?;
        Ok(Density::new(self.target(), self.defect_poly(x, y, &a.value)))
    }

    fn defect_poly(&self, x: &VectorField, y: &VectorField, a: &Poly) -> Poly {
        let s = &self.source;
        let t = self.target();
        let lx_a = lie_derivative_poly(x, s, a);
        let ly_a = lie_derivative_poly(y, s, a);
        let mut d = &lie_derivative_poly(x, &t, &self.eval_poly(y, a)) - &self.eval_poly(y, &lx_a);
        d = &d - &lie_derivative_poly(y, &t, &self.eval_poly(x, a));
        d = &d + &self.eval_poly(x, &ly_a);
        &d - &self.eval_poly(&x.bracket(y), a)
    }

    /// First basis triple `(xᵖ, x^q, xʳ)` with `p, q ≤ field_degree`,
    /// `r ≤ density_degree` where the cocycle identity fails, if any.
    pub fn first_defect(&self, field_degree: usize, density_degree: usize) -> Option<(usize, usize, usize)> {
        for p in 0..=field_degree {
            for q in p + 1..=field_degree {
                for r in 0..=density_degree {
                    let d = self.defect_poly(&VectorField::monomial(p), &VectorField::monomial(q), &Poly::x_pow(r));
                    if !d.is_zero() {
                        return Some((p, q, r));
                    }
                }
            }
        }
        None
    }
}

/// The translation-invariant local map `b(a) = Σ β_t a^{(t)}` from `F_s`
/// to `F_{s+1−m}`, a 0-cochain whose differential lands in grade `m`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LocalMap {
    pub source: Scalar,
    pub shift: usize,
    pub betas: Vec<Scalar>,
}

impl LocalMap {
    pub fn new(source: Scalar, shift: usize, betas: Vec<Scalar>) -> Self {
        LocalMap { source, shift, betas }
    }

    pub fn target(&self) -> Scalar {
        &(&self.source + &Scalar::one()) - &Scalar::from_int(self.shift as i64)
    }

    pub fn apply(&self, a: &Density) -> Result<Density> {
        a.expect_weight(&self.source)?;
        let value = self
            .betas
            .iter()
            .enumerate()
            .fold(Poly::zero(), |acc, (t, b)| &acc + &a.value.derivative(t).scale(b));
        Ok(Density::new(self.target(), value))
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Terms of `δ(a ↦ a^{(t)})(X)(a) = L^{s+1−m}_X(a^{(t)}) − (L^s_X a)^{(t)}`,
/// expanded by Leibniz and collected by `(p, q)`.
fn coboundary_terms(source: &Scalar, shift: usize, t: usize) -> BTreeMap<(usize, usize), Scalar> {
    let target = &(source + &Scalar::one()) - &Scalar::from_int(shift as i64);
    let mut out = BTreeMap::new();
    // the X·a^{(t+1)} terms cancel
    let c1 = &(source - &target) - &Scalar::from_int(t as i64);
    out.insert((1, t), c1);
    for l in 2..=t + 1 {
        let c = &source.scale_int(binomial(t, l - 1)) - &Scalar::from_int(binomial(t, l));
        out.insert((l, t + 1 - l), c);
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `δb(X) = L_X ∘ b − b ∘ L_X`. Fails if `b` has components whose
/// differential leaves grade `m`.
pub fn coboundary(b: &LocalMap) -> Result<Cochain1> {
    let mut terms: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
    for (t, beta) in b.betas.iter().enumerate() {
        if beta.is_zero() {
            continue;
        }
        for (k, c) in coboundary_terms(&b.source, b.shift, t) {
            let e = terms.entry(k).or_default();
            *e += &(&c * beta);
        }
    }
    Cochain1::new(b.source.clone(), b.shift, terms)
}

/// Dimension of the space of grade-`m` cocycles `F_s → F_{s+1−m}`, computed
/// by imposing the cocycle identity on a monomial basis.
pub fn cocycle_space_dimension(source: &Scalar, shift: usize) -> usize {
    let m = shift;
    let elementary: Vec<Cochain1> = (0..=m)
        .map(|p| Cochain1::from_pairs(source.clone(), m, &[((p, m - p), Scalar::one())]))
        .collect();
    let mut reducer = RowReducer::new(m + 1);
    let bound = m + 2;
    for p in 0..=bound {
        for q in p + 1..=bound {
            let (x, y) = (VectorField::monomial(p), VectorField::monomial(q));
            for r in 0..=bound {
                let a = Poly::x_pow(r);
                let defects: Vec<Poly> = elementary.iter().map(|c| c.defect_poly(&x, &y, &a)).collect();
                let top = defects.iter().filter_map(Poly::degree).max();
                if let Some(top) = top {
                    for e in 0..=top {
                        reducer.push(defects.iter().map(|d| d.coeff(e)).collect());
                    }
                }
            }
        }
    }
    m + 1 - reducer.rank()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryReport {
    /// `b` with `δb = c`, when one exists within the ansatz.
    pub solution: Option<LocalMap>,
    pub cocycle_dimension: usize,
    pub coboundary_dimension: usize,
    /// Proportionality constant with `c − κ·c′ ∈ im δ` for the supplied
    /// reference `c′`, when one exists.
    pub kappa: Option<Scalar>,
}

impl CoboundaryReport {
    /// `dim Z¹ − dim B¹` in this grade.
    pub fn quotient_dimension(&self) -> usize {
        self.cocycle_dimension.saturating_sub(self.coboundary_dimension)
    }
}

/// Looks for `b(a) = Σ_{t ≤ max_order} β_t a^{(t)}` with `δb = c`.
pub fn solve_coboundary(c: &Cochain1, max_order: usize, reference: Option<&Cochain1>) -> CoboundaryReport {
    let images: Vec<BTreeMap<(usize, usize), Scalar>> = (0..=max_order)
        .map(|t| coboundary_terms(&c.source, c.shift, t))
        .collect();
    let mut keys: BTreeSet<(usize, usize)> = c.terms.keys().copied().collect();
    for img in &images {
        keys.extend(img.keys().copied());
    }
    if let Some(r) = reference {
        keys.extend(r.terms.keys().copied());
    }
    let n = max_order + 1;
    let row_for = |key: &(usize, usize)| -> Vec<Scalar> {
        images
            .iter()
            .map(|img| img.get(key).cloned().unwrap_or_default())
            .collect()
    };
    let rhs = |key: &(usize, usize)| c.terms.get(key).cloned().unwrap_or_default();

    let solution = linalg::solve(n, keys.iter().map(|k| (row_for(k), rhs(k))))
        .map(|betas| LocalMap::new(c.source.clone(), c.shift, betas));

    let kappa = reference.and_then(|r| {
        let eqs = keys.iter().map(|k| {
            let mut row = row_for(k);
            row.push(r.terms.get(k).cloned().unwrap_or_default());
            (row, rhs(k))
        });
        linalg::solve(n + 1, eqs).map(|v| v[n].clone())
    });

    // image of δ inside grade m: β with no off-grade output, then its rank
    let off_grade = keys.iter().filter(|(p, q)| p + q != c.shift).map(row_for);
    let inside = linalg::nullspace(n, off_grade);
    let on_grade: Vec<(usize, usize)> = keys.iter().copied().filter(|(p, q)| p + q == c.shift).collect();
    let mut image = RowReducer::new(on_grade.len().max(1));
    for v in &inside {
        let row: Vec<Scalar> = on_grade
            .iter()
            .map(|k| {
                row_for(k)
                    .iter()
                    .zip(v)
                    .fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect();
        if !row.is_empty() {
            image.push(row);
        }
    }

    CoboundaryReport {
        solution,
        cocycle_dimension: cocycle_space_dimension(&c.source, c.shift),
        coboundary_dimension: image.rank(),
        kappa,
    }
}

/// The action on `F_3 ⊕ F_2 ⊕ F_1 ⊕ F_0`
///
/// * `ρ_X(a_3) = L³_X a_3`
/// * `ρ_X(a_2) = L²_X a_2`
/// * `ρ_X(a_1) = L¹_X a_1 + α₁ J_3(X, a_3)`
/// * `ρ_X(a_0) = L⁰_X a_0 + α₂ J_3(X, a_2) + α₃ J_4(X, a_3)`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deformation {
    pub alpha1: Scalar,
    pub alpha2: Scalar,
    pub alpha3: Scalar,
}

/// Which deformation parameters vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformationCase {
    /// all three nonzero
    Generic,
    /// only `α₁ = 0`
    Alpha1Vanishes,
    /// only `α₂ = 0`
    Alpha2Vanishes,
    /// only `α₃ = 0`
    Alpha3Vanishes,
    /// any other pattern, `true` marking a vanishing parameter
    Other([bool; 3]),
}

pub const DEFORMATION_WEIGHTS: [i64; 4] = [3, 2, 1, 0];

impl Deformation {
    pub fn new(alpha1: Scalar, alpha2: Scalar, alpha3: Scalar) -> Self {
        Deformation { alpha1, alpha2, alpha3 }
    }

    /// Parameters realized by `D³_λ` in symbol coordinates:
    /// `α₁ = (2/5)(3λ²+3λ−1)`, `α₂ = (2/3)λ(λ+1)`, `α₃ = (1/6)λ(λ+1)(2λ+1)`.
    pub fn from_weight(l: &Scalar) -> Self {
        let [p1, p2, p3] = deformation_polynomials();
        Deformation::new(p1.eval(l), p2.eval(l), p3.eval(l))
    }

    /// `ρ_X` on `(a_3, a_2, a_1, a_0)`.
    pub fn act(&self, x: &VectorField, slots: &[Density; 4]) -> Result<[Density; 4]> {
        for (d, w) in slots.iter().zip(DEFORMATION_WEIGHTS) {
            d.expect_weight(&Scalar::from_int(w))?;
        }
        let [a3, a2, a1, a0] = slots;
        let lie = |d: &Density| lie_derivative_poly(x, &d.weight, &d.value);
        let three = Scalar::from_int(3);
        let two = Scalar::from_int(2);
        let r1 = &lie(a1) + &j_operator(3, &three, x, &a3.value)?.scale(&self.alpha1);
        let r0 = &(&lie(a0) + &j_operator(3, &two, x, &a2.value)?.scale(&self.alpha2))
            + &j_operator(4, &three, x, &a3.value)?.scale(&self.alpha3);
        Ok([
            Density::new(a3.weight.clone(), lie(a3)),
            Density::new(a2.weight.clone(), lie(a2)),
            Density::new(a1.weight.clone(), r1),
            Density::new(a0.weight.clone(), r0),
        ])
    }

    pub fn case(&self) -> DeformationCase {
        let z = [self.alpha1.is_zero(), self.alpha2.is_zero(), self.alpha3.is_zero()];
        match z {
            [false, false, false] => DeformationCase::Generic,
            [true, false, false] => DeformationCase::Alpha1Vanishes,
            [false, true, false] => DeformationCase::Alpha2Vanishes,
            [false, false, true] => DeformationCase::Alpha3Vanishes,
            other => DeformationCase::Other(other),
        }
    }
}

/// `(2/5)(3λ²+3λ−1)`, `(2/3)λ(λ+1)`, `(1/6)λ(λ+1)(2λ+1)` as polynomials in `λ`.
pub fn deformation_polynomials() -> [Poly; 3] {
    let q = Scalar::from_ratio;
    let p1 = Poly::new(vec![q(-2, 5), q(6, 5), q(6, 5)]);
    let p2 = Poly::new(vec![Scalar::zero(), q(2, 3), q(2, 3)]);
    let p3 = Poly::new(vec![Scalar::zero(), q(1, 6), q(1, 2), q(1, 3)]);
    [p1, p2, p3]
}
