//! Exact arithmetic for the modules `D^k_λ` of linear differential operators
//! on the real line under the Lie algebra of polynomial vector fields.
//!
//! Everything is computed over the quadratic field `Q(√21)` ([`Scalar`]) and
//! polynomials over it ([`Poly`]). Coefficient functions, vector fields and
//! densities are polynomials; every identity checked here is a polynomial
//! identity in finitely many jets, so checking it on a monomial basis of
//! sufficient degree is conclusive.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// errors carry the offending exact weights; they are not on a hot path
#![allow(clippy::result_large_err)]

extern crate alloc;

pub mod cohomology;
pub mod density;
pub mod diffop;
mod error;
pub mod intertwiner;
pub mod linalg;
pub mod poly;
pub mod scalar;
pub mod symbol;

pub use density::{Density, VectorField};
pub use diffop::DiffOp;
pub use error::{CriticalFactor, Error, WeightRole};
pub use poly::Poly;
pub use scalar::{Rational, Scalar};
pub use symbol::{NormalSymbol, SymbolCalculus, SymbolScheme};

pub type Result<T, E = Error> = core::result::Result<T, E>;
