use core::fmt;

use crate::Scalar;

/// Polynomial factors whose vanishing makes a weight critical for `D^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriticalFactor {
    /// `λ(λ+1)`
    ProductWithSuccessor,
    /// `2λ+1`
    Linear,
    /// `3λ²+3λ−1`
    Quadratic,
}

impl CriticalFactor {
    pub fn evaluate(self, w: &Scalar) -> Scalar {
        let one = Scalar::one();
        match self {
            CriticalFactor::ProductWithSuccessor => w * &(w + &one),
            CriticalFactor::Linear => &(w * &Scalar::from_int(2)) + &one,
            CriticalFactor::Quadratic => {
                let three = Scalar::from_int(3);
                &(&(&three * &(w * w)) + &(&three * w)) - &one
            }
        }
    }

    fn render(self, symbol: &str) -> alloc::string::String {
        match self {
            CriticalFactor::ProductWithSuccessor => alloc::format!("{symbol}({symbol}+1)"),
            CriticalFactor::Linear => alloc::format!("2{symbol}+1"),
            CriticalFactor::Quadratic => alloc::format!("3{symbol}²+3{symbol}−1"),
        }
    }
}

/// Which side of an intertwiner a weight belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightRole {
    Source,
    Target,
}

impl WeightRole {
    fn symbol(self) -> &'static str {
        match self {
            WeightRole::Source => "λ",
            WeightRole::Target => "μ",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: Scalar, found: Scalar },
    #[error("{}", CriticalDisplay { weight, factor: *factor, role: *role })]
    CriticalWeight {
        weight: Scalar,
        factor: CriticalFactor,
        role: WeightRole,
    },
    #[error("unsupported order {order}: {reason}")]
    UnsupportedOrder { order: usize, reason: &'static str },
    #[error("cochain term ({p},{q}) does not lie in grade {grade}")]
    Inhomogeneous { p: usize, q: usize, grade: usize },
    #[error("normal symbol scheme for k={order} is singular in column {column} (solution dimension {dimension})")]
    SingularScheme {
        order: usize,
        column: usize,
        dimension: usize,
    },
}

struct CriticalDisplay<'a> {
    weight: &'a Scalar,
    factor: CriticalFactor,
    role: WeightRole,
}

impl fmt::Display for CriticalDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.role.symbol();
        write!(
            f,
            "critical weight {sym} = {}: {} = 0",
            self.weight,
            self.factor.render(sym)
        )
    }
}
