//! Symbols and symbolic coefficients.
//!
//! A template matrix entry is a linear form in x, y, z whose coefficients
//! are *symbols*: either a target coefficient `Theta[i,j,k]`, an unknown
//! entry coefficient `a[r,c]` / `b[r,c]` / `c[r,c]`, or a free parameter
//! `t[n]` of a solved system. [`SymbolicCoefficient`] is an integer-linear
//! combination of products of such symbols — a polynomial in the symbols
//! with `BigInt` coefficients. The pipeline only ever *produces* affine
//! combinations (symbol degree <= 1); general products are supported so that
//! violations are detectable rather than unrepresentable.

mod parse;
mod tripoly;

pub use parse::parse_tripoly;
pub use tripoly::{Monomial3, TriPoly};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Factor};
use crate::error::Result;
use crate::ring::{Ring, RingValue};

/// Which variable of the ternary form a coefficient slot belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// coefficient of x
    A,
    /// coefficient of y
    B,
    /// coefficient of z
    C,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::A, Axis::B, Axis::C];

    pub fn letter(self) -> char {
        match self {
            Axis::A => 'a',
            Axis::B => 'b',
            Axis::C => 'c',
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::A => 0,
            Axis::B => 1,
            Axis::C => 2,
        }
    }
}

/// A named indeterminate.
///
/// The derived ordering (thetas, then entry coefficients by
/// `(row, col, axis)`, then free parameters) is the canonical symbol order
/// used for deterministic displays and for the columns of extracted linear
/// systems.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolId {
    /// Target coefficient of the monomial x^i y^j z^k.
    Theta { i: usize, j: usize, k: usize },
    /// Unknown coefficient in matrix entry (row, col), row < col, 1-based.
    Entry { row: usize, col: usize, axis: Axis },
    /// Free parameter `t[n]` of a parametric solution, n >= 1.
    Free { index: usize },
}

impl SymbolId {
    pub fn theta(i: usize, j: usize, k: usize) -> Self {
        SymbolId::Theta { i, j, k }
    }

    pub fn entry(axis: Axis, row: usize, col: usize) -> Self {
        debug_assert!(row < col);
        SymbolId::Entry { row, col, axis }
    }

    pub fn free(index: usize) -> Self {
        SymbolId::Free { index }
    }
}

impl std::fmt::Display for SymbolId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SymbolId::Theta { i, j, k } => write!(f, "Theta[{i},{j},{k}]"),
            SymbolId::Entry { row, col, axis } => write!(f, "{}[{row},{col}]", axis.letter()),
            SymbolId::Free { index } => write!(f, "t[{index}]"),
        }
    }
}

/// A product of symbol powers in canonical form: sorted by symbol, all
/// exponents >= 1. The empty product is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymMonomial(Vec<(SymbolId, u32)>);

impl SymMonomial {
    pub fn unit() -> Self {
        SymMonomial(Vec::new())
    }

    pub fn single(sym: SymbolId) -> Self {
        SymMonomial(vec![(sym, 1)])
    }

    pub fn new(mut factors: Vec<(SymbolId, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(SymbolId, u32)> = Vec::with_capacity(factors.len());
        for (sym, e) in factors {
            match merged.last_mut() {
                Some((last, exp)) if *last == sym => *exp += e,
                _ => merged.push((sym, e)),
            }
        }
        SymMonomial(merged)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, e)| *e as usize).sum()
    }

    pub fn factors(&self) -> &[(SymbolId, u32)] {
        &self.0
    }

    fn times(&self, other: &SymMonomial) -> SymMonomial {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        SymMonomial::new(v)
    }

    /// The single symbol if this is a degree-1 monomial.
    pub fn as_single(&self) -> Option<&SymbolId> {
        match self.0.as_slice() {
            [(sym, 1)] => Some(sym),
            _ => None,
        }
    }
}

impl std::fmt::Display for SymMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(sym, e)| {
                if *e == 1 {
                    sym.to_string()
                } else {
                    format!("{sym}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// An integer polynomial in symbols, kept in canonical sparse form
/// (no explicit zero coefficients, monomials in canonical order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicCoefficient {
    terms: BTreeMap<SymMonomial, BigInt>,
}

impl SymbolicCoefficient {
    pub fn zero() -> Self {
        SymbolicCoefficient {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(BigInt::one())
    }

    pub fn from_int(n: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !n.is_zero() {
            terms.insert(SymMonomial::unit(), n);
        }
        SymbolicCoefficient { terms }
    }

    pub fn from_symbol(sym: SymbolId) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(SymMonomial::single(sym), BigInt::one());
        SymbolicCoefficient { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.symbol_degree() == 0
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms
            .get(&SymMonomial::unit())
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Maximum total symbol degree over all terms; 0 for constants and for
    /// the zero polynomial.
    pub fn symbol_degree(&self) -> usize {
        self.terms.keys().map(SymMonomial::degree).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, mono: SymMonomial, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(coef);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coef;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &SymbolicCoefficient) -> SymbolicCoefficient {
        let mut out = self.clone();
        for (mono, coef) in &rhs.terms {
            out.add_term(mono.clone(), coef.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &SymbolicCoefficient) -> SymbolicCoefficient {
        self.add(&rhs.negate())
    }

    pub fn negate(&self) -> SymbolicCoefficient {
        SymbolicCoefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Full product; symbol degrees add. The pipeline keeps its own outputs
    /// affine, but the arithmetic itself is unrestricted.
    pub fn mul(&self, rhs: &SymbolicCoefficient) -> SymbolicCoefficient {
        let mut out = SymbolicCoefficient::zero();
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                out.add_term(ml.times(mr), cl * cr);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> SymbolicCoefficient {
        if k.is_zero() {
            return SymbolicCoefficient::zero();
        }
        SymbolicCoefficient {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Decompose an affine coefficient into constant and linear parts.
    /// Returns `None` when some term has symbol degree >= 2.
    pub fn affine_view(&self) -> Option<AffineView> {
        let mut view = AffineView {
            constant: BigInt::zero(),
            linear: Vec::new(),
        };
        for (mono, coef) in &self.terms {
            match mono.degree() {
                0 => view.constant = coef.clone(),
                1 => view
                    .linear
                    .push((mono.as_single().unwrap().clone(), coef.clone())),
                _ => return None,
            }
        }
        Some(view)
    }

    /// Evaluate in `ring` under a symbol assignment.
    pub fn eval(
        &self,
        ring: &Ring,
        assign: &mut impl FnMut(&SymbolId) -> Result<RingValue>,
    ) -> Result<RingValue> {
        let mut acc = ring.zero();
        for (mono, coef) in &self.terms {
            let mut term = ring.from_integer(coef);
            for (sym, exp) in mono.factors() {
                let value = assign(sym)?;
                for _ in 0..*exp {
                    term = term.mul(&value)?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Replace symbols by symbolic values; unmapped symbols stay themselves.
    pub fn substitute(
        &self,
        map: &mut impl FnMut(&SymbolId) -> Option<SymbolicCoefficient>,
    ) -> SymbolicCoefficient {
        let mut out = SymbolicCoefficient::zero();
        for (mono, coef) in &self.terms {
            let mut term = SymbolicCoefficient::from_int(coef.clone());
            for (sym, exp) in mono.factors() {
                let factor = map(sym).unwrap_or_else(|| SymbolicCoefficient::from_symbol(sym.clone()));
                for _ in 0..*exp {
                    term = term.mul(&factor);
                }
            }
            out = out.add(&term);
        }
        out
    }
}

/// Constant plus linear terms of an affine symbolic coefficient.
pub struct AffineView {
    pub constant: BigInt,
    pub linear: Vec<(SymbolId, BigInt)>,
}

impl std::fmt::Display for SymbolicCoefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (idx, (mono, coef)) in self.terms.iter().enumerate() {
            let negative = coef.is_negative();
            let mag = coef.abs();
            let body = if mono.factors().is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono.to_string()
            } else {
                format!("{mag}*{mono}")
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

impl Coefficient for SymbolicCoefficient {
    fn is_zero(&self) -> bool {
        SymbolicCoefficient::is_zero(self)
    }

    fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(self.add(rhs))
    }

    fn try_mul(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(rhs))
    }

    fn neg(&self) -> Self {
        self.negate()
    }

    fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(k)
    }

    fn has_symbols(&self) -> bool {
        self.symbol_degree() > 0
    }

    fn as_factor(&self) -> Factor {
        if self.terms.len() != 1 {
            return Factor::Wrapped(self.to_string());
        }
        let (mono, coef) = self.terms.iter().next().unwrap();
        if mono.factors().is_empty() {
            if coef.is_one() {
                return Factor::One;
            }
            if (-coef).is_one() {
                return Factor::MinusOne;
            }
            return Factor::Simple {
                negative: coef.is_negative(),
                text: coef.abs().to_string(),
            };
        }
        let mag = coef.abs();
        let text = if mag.is_one() {
            mono.to_string()
        } else {
            format!("{mag}*{mono}")
        };
        Factor::Simple {
            negative: coef.is_negative(),
            text,
        }
    }
}

// Serialized form: a list of terms, each a factor list plus a decimal
// coefficient. JSON object keys must be strings, so the map cannot be
// serialized directly.
#[derive(Serialize, Deserialize)]
struct TermRepr {
    syms: Vec<(SymbolId, u32)>,
    coef: String,
}

impl Serialize for SymbolicCoefficient {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(mono, coef)| TermRepr {
                syms: mono.factors().to_vec(),
                coef: coef.to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymbolicCoefficient {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut out = SymbolicCoefficient::zero();
        for term in terms {
            let coef: BigInt = term
                .coef
                .parse()
                .map_err(|_| D::Error::custom(format!("invalid integer `{}`", term.coef)))?;
            out.add_term(SymMonomial::new(term.syms), coef);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(c: &SymbolicCoefficient) -> String {
        c.to_string()
    }

    #[test]
    fn display_conventions() {
        let theta = SymbolicCoefficient::from_symbol(SymbolId::theta(5, 0, 0));
        assert_eq!(sym(&theta), "Theta[5,0,0]");
        let b12 = SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::B, 1, 2));
        assert_eq!(sym(&b12), "b[1,2]");
        let expr = theta.sub(&b12.scale(&BigInt::from(2)));
        assert_eq!(sym(&expr), "Theta[5,0,0] - 2*b[1,2]");
        assert_eq!(sym(&SymbolicCoefficient::zero()), "0");
        assert_eq!(
            sym(&SymbolicCoefficient::from_int(BigInt::from(-3))),
            "-3"
        );
    }

    #[test]
    fn addition_cancels_exactly() {
        let a1 = SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::A, 1, 2));
        let b2 = SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::B, 2, 3));
        let sum = a1.add(&b2).add(&a1.negate());
        assert_eq!(sum, b2);
        assert!(a1.sub(&a1).is_zero());
    }

    #[test]
    fn products_raise_symbol_degree() {
        let a1 = SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::A, 1, 2));
        let b2 = SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::B, 2, 3));
        let prod = a1.mul(&b2);
        assert_eq!(prod.symbol_degree(), 2);
        assert_eq!(a1.mul(&a1).symbol_degree(), 2);
        assert_eq!(sym(&a1.mul(&a1)), "a[1,2]^2");
        assert!(prod.affine_view().is_none());
        // (Theta + 3) * 1 = Theta + 3
        let t = SymbolicCoefficient::from_symbol(SymbolId::theta(0, 5, 0))
            .add(&SymbolicCoefficient::from_int(BigInt::from(3)));
        assert_eq!(t.mul(&SymbolicCoefficient::one()), t);
    }

    #[test]
    fn affine_view_splits_constant_and_linear() {
        let expr = SymbolicCoefficient::from_symbol(SymbolId::theta(0, 5, 0))
            .negate()
            .add(&SymbolicCoefficient::from_symbol(SymbolId::entry(Axis::C, 2, 4)))
            .add(&SymbolicCoefficient::from_int(BigInt::from(7)));
        let view = expr.affine_view().unwrap();
        assert_eq!(view.constant, BigInt::from(7));
        assert_eq!(view.linear.len(), 2);
    }

    #[test]
    fn eval_respects_ring_arithmetic() {
        use crate::ring::Ring;
        // 2*a - 3 at a = 4 over Z/6: 8 - 3 = 5
        let a = SymbolId::entry(Axis::A, 1, 2);
        let expr = SymbolicCoefficient::from_symbol(a.clone())
            .scale(&BigInt::from(2))
            .add(&SymbolicCoefficient::from_int(BigInt::from(-3)));
        let z6 = Ring::modulus(6u32).unwrap();
        let got = expr
            .eval(&z6, &mut |s| {
                assert_eq!(*s, a);
                Ok(z6.from_i64(4))
            })
            .unwrap();
        assert_eq!(got, z6.from_i64(5));
    }

    #[test]
    fn serde_round_trip() {
        let expr = SymbolicCoefficient::from_symbol(SymbolId::theta(2, 2, 1))
            .scale(&BigInt::from(-5))
            .add(&SymbolicCoefficient::from_symbol(SymbolId::free(3)))
            .add(&SymbolicCoefficient::from_int(BigInt::from(11)));
        let json = serde_json::to_string(&expr).unwrap();
        let back: SymbolicCoefficient = serde_json::from_str(&json).unwrap();
        assert_eq!(back, expr);
    }

    fn arb_symbol() -> impl Strategy<Value = SymbolId> {
        prop_oneof![
            (0usize..4, 0usize..4, 0usize..4).prop_map(|(i, j, k)| SymbolId::theta(i, j, k)),
            (1usize..5, 5usize..8, 0usize..3).prop_map(|(r, c, a)| SymbolId::entry(
                Axis::ALL[a],
                r,
                c
            )),
            (1usize..6).prop_map(SymbolId::free),
        ]
    }

    fn arb_coeff() -> impl Strategy<Value = SymbolicCoefficient> {
        proptest::collection::vec((arb_symbol(), -4i64..=4), 0..4).prop_map(|terms| {
            let mut out = SymbolicCoefficient::zero();
            for (sym, c) in terms {
                out = out.add(&SymbolicCoefficient::from_symbol(sym).scale(&BigInt::from(c)));
            }
            out
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_coeff(), b in arb_coeff(), c in arb_coeff()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&SymbolicCoefficient::zero()), a.clone());
            prop_assert_eq!(a.mul(&SymbolicCoefficient::one()), a.clone());
            prop_assert!(a.sub(&a).is_zero());
        }
    }
}
