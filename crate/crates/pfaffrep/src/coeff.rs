//! The coefficient abstraction shared by the polynomial and matrix layers.
//!
//! Polynomials in this crate come in exactly two flavors: coefficients that
//! are themselves integer polynomials in named symbols (the symbolic side),
//! and coefficients that are elements of a concrete commutative ring (the
//! evaluated side). Everything that operates on matrices and trivariate
//! polynomials is generic over [`Coefficient`] so the Pfaffian expansions are
//! written once and exercised on both sides.

use num_bigint::BigInt;

use crate::error::Result;

/// Operations a coefficient type must support.
///
/// Addition and multiplication are fallible because concrete ring elements
/// from *different* rings must not be combined; the symbolic implementation
/// never fails. Negation and integer scaling are total in every ring.
pub trait Coefficient: Clone + Eq + std::fmt::Debug + std::fmt::Display {
    fn is_zero(&self) -> bool;

    fn try_add(&self, rhs: &Self) -> Result<Self>;

    fn try_mul(&self, rhs: &Self) -> Result<Self>;

    fn neg(&self) -> Self;

    /// Multiply by an integer, mapped through the canonical homomorphism.
    fn scale_int(&self, k: &BigInt) -> Self;

    /// True when the coefficient mentions at least one symbol. Concrete ring
    /// elements never do; the structured Pfaffian expansion uses this to
    /// prove it never multiplies two unknown-bearing entries.
    fn has_symbols(&self) -> bool;

    /// How this coefficient renders when it multiplies a monomial.
    fn as_factor(&self) -> Factor;

    fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }
}

/// Display form of a coefficient used as a multiplicative factor.
pub enum Factor {
    /// `+1`: the factor is omitted entirely.
    One,
    /// `-1`: only a leading minus is emitted.
    MinusOne,
    /// A single product term; the sign can be folded into the surrounding
    /// `+`/`-` separators and `text` holds the magnitude.
    Simple { negative: bool, text: String },
    /// A sum that needs parentheses when multiplied by anything.
    Wrapped(String),
}
