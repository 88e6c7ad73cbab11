//! Homogeneous trivariate polynomials with generic coefficients.
//!
//! A [`TriPoly`] is a homogeneous polynomial in x, y, z of a declared total
//! degree. Homogeneity is structural: inserting a monomial of the wrong
//! total degree is an error, so every value of the type is homogeneous by
//! construction. The zero polynomial still carries its declared degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Factor};
use crate::error::{Error, Result};

/// Exponents (i, j, k) of a monomial x^i y^j z^k.
///
/// The ordering is graded lexicographic with x > y > z: first by total
/// degree, then by exponent of x, then of y. All deterministic output walks
/// monomials in descending graded-lex order, i.e. x-heavy terms first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monomial3 {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl Monomial3 {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        Monomial3 { i, j, k }
    }

    pub fn degree(&self) -> usize {
        self.i + self.j + self.k
    }

    /// All monomials of total degree `d` in descending graded-lex order.
    pub fn all_of_degree(d: usize) -> Vec<Monomial3> {
        let mut out = Vec::with_capacity((d + 1) * (d + 2) / 2);
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                out.push(Monomial3::new(i, j, d - i - j));
            }
        }
        out
    }

    pub fn is_pure_power(&self) -> bool {
        let d = self.degree();
        self.i == d || self.j == d || self.k == d
    }
}

impl Ord for Monomial3 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.i, self.j).cmp(&(other.degree(), other.i, other.j))
    }
}

impl PartialOrd for Monomial3 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Monomial3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        for (var, exp) in [('x', self.i), ('y', self.j), ('z', self.k)] {
            match exp {
                0 => {}
                1 => parts.push(var.to_string()),
                e => parts.push(format!("{var}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// A homogeneous polynomial of fixed total degree in x, y, z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriPoly<C: Coefficient> {
    degree: usize,
    terms: BTreeMap<Monomial3, C>,
}

impl<C: Coefficient> TriPoly<C> {
    pub fn zero(degree: usize) -> Self {
        TriPoly {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (Monomial3, C)>,
    ) -> Result<Self> {
        let mut poly = TriPoly::zero(degree);
        for (mono, coef) in terms {
            poly.add_term(mono, coef)?;
        }
        Ok(poly)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order (reverse for display order).
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial3, &C)> {
        self.terms.iter()
    }

    /// The stored coefficient of `mono`, `None` when it is zero.
    pub fn coefficient(&self, mono: &Monomial3) -> Result<Option<&C>> {
        if mono.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: mono.degree(),
            });
        }
        Ok(self.terms.get(mono))
    }

    /// Accumulate `coef` onto the monomial's coefficient.
    pub fn add_term(&mut self, mono: Monomial3, coef: C) -> Result<()> {
        if mono.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: mono.degree(),
            });
        }
        if coef.is_zero() {
            return Ok(());
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mono) {
            Entry::Vacant(slot) => {
                slot.insert(coef);
            }
            Entry::Occupied(mut slot) => {
                let sum = slot.get().try_add(&coef)?;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.degree != rhs.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: rhs.degree,
            });
        }
        let mut out = self.clone();
        for (mono, coef) in &rhs.terms {
            out.add_term(*mono, coef.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.negate())
    }

    pub fn negate(&self) -> Self {
        TriPoly {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.neg()))
                .collect(),
        }
    }

    /// Product of homogeneous polynomials; degrees add.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out = TriPoly::zero(self.degree + rhs.degree);
        for (ml, cl) in &self.terms {
            for (mr, cr) in &rhs.terms {
                let mono = Monomial3::new(ml.i + mr.i, ml.j + mr.j, ml.k + mr.k);
                out.add_term(mono, cl.try_mul(cr)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &C) -> Result<Self> {
        let mut out = TriPoly::zero(self.degree);
        for (mono, coef) in &self.terms {
            out.add_term(*mono, coef.try_mul(k)?)?;
        }
        Ok(out)
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let mut terms = BTreeMap::new();
        for (mono, coef) in &self.terms {
            let scaled = coef.scale_int(k);
            if !scaled.is_zero() {
                terms.insert(*mono, scaled);
            }
        }
        TriPoly {
            degree: self.degree,
            terms,
        }
    }

    pub fn has_symbols(&self) -> bool {
        self.terms.values().any(|c| c.has_symbols())
    }

    /// Map every coefficient, dropping terms that map to zero.
    pub fn map_coeffs<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> Result<D>,
    ) -> Result<TriPoly<D>> {
        let mut out = TriPoly::zero(self.degree);
        for (mono, coef) in &self.terms {
            out.add_term(*mono, f(coef)?)?;
        }
        Ok(out)
    }
}

impl<C: Coefficient> std::fmt::Display for TriPoly<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (idx, (mono, coef)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = match coef.as_factor() {
                Factor::One => (false, mono.to_string()),
                Factor::MinusOne => (true, mono.to_string()),
                Factor::Simple { negative, text } => {
                    if mono.degree() == 0 {
                        (negative, text)
                    } else {
                        (negative, format!("{text}*{mono}"))
                    }
                }
                Factor::Wrapped(text) => {
                    if mono.degree() == 0 {
                        (false, text)
                    } else {
                        (false, format!("({text})*{mono}"))
                    }
                }
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
