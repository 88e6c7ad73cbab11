//! Skew-symmetric matrices of linear forms and their Pfaffians.
//!
//! Entries are linear forms in x, y, z; a matrix of even size 2n then has a
//! Pfaffian that is a homogeneous trivariate polynomial of degree n. Three
//! independent evaluation routes are provided and cross-checked against each
//! other throughout the test suite:
//!
//! - [`pf_laplace`]: recursive expansion along the last row of the current
//!   submatrix. Note the expansion coefficients come from the *last* row of
//!   the submatrix, paired with minors that delete the last row/column and
//!   the pivot column; pairing the minors with first-row coefficients
//!   instead looks plausible but telescopes to zero already on a generic
//!   4 x 4 matrix (there is a regression test pinning this down).
//! - [`pf_matchings`]: the definition as a signed sum over perfect
//!   matchings, with the sign computed by counting inversions of the
//!   flattened pairing. Exponential; guarded by size.
//! - [`pf_structured`]: expansion specialized to block-structured matrices
//!   whose lower-right quarter is zero, as produced by
//!   [`crate::template::build_template`]. Exploits the at-most-three
//!   nonzeros per bottom row, memoizes on the set of consumed columns, and
//!   proves along the way that no product of two unknown-bearing entries is
//!   ever formed — which is exactly why the resulting coefficients are
//!   affine in the unknowns.
//!
//! Only the skew upper triangle is stored; the lower triangle is implied.
//! All row/column indices in the public API are 1-based.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coeff::{Coefficient, Factor};
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::ring::{Ring, RingValue};
use crate::sympoly::{Monomial3, TriPoly};

/// A linear form `a*x + b*y + c*z` with coefficients in `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm<C> {
    pub a: C,
    pub b: C,
    pub c: C,
}

impl<C: Coefficient> LinearForm<C> {
    pub fn new(a: C, b: C, c: C) -> Self {
        LinearForm { a, b, c }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn slot(&self, axis: crate::sympoly::Axis) -> &C {
        match axis {
            crate::sympoly::Axis::A => &self.a,
            crate::sympoly::Axis::B => &self.b,
            crate::sympoly::Axis::C => &self.c,
        }
    }

    pub fn negate(&self) -> Self {
        LinearForm {
            a: self.a.neg(),
            b: self.b.neg(),
            c: self.c.neg(),
        }
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        LinearForm {
            a: self.a.scale_int(k),
            b: self.b.scale_int(k),
            c: self.c.scale_int(k),
        }
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(LinearForm {
            a: self.a.try_add(&rhs.a)?,
            b: self.b.try_add(&rhs.b)?,
            c: self.c.try_add(&rhs.c)?,
        })
    }

    /// True when any coefficient mentions a symbol.
    pub fn has_symbols(&self) -> bool {
        self.a.has_symbols() || self.b.has_symbols() || self.c.has_symbols()
    }

    /// The form as a homogeneous degree-1 polynomial.
    pub fn to_poly(&self) -> TriPoly<C> {
        let mut p = TriPoly::zero(1);
        // degree checks cannot fail for degree-1 monomials
        p.add_term(Monomial3::new(1, 0, 0), self.a.clone()).unwrap();
        p.add_term(Monomial3::new(0, 1, 0), self.b.clone()).unwrap();
        p.add_term(Monomial3::new(0, 0, 1), self.c.clone()).unwrap();
        p
    }

    pub fn map_coeffs<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> Result<D>,
    ) -> Result<LinearForm<D>> {
        Ok(LinearForm {
            a: f(&self.a)?,
            b: f(&self.b)?,
            c: f(&self.c)?,
        })
    }
}

impl<C: Coefficient> std::fmt::Display for LinearForm<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut out = String::new();
        let mut first = true;
        for (coef, var) in [(&self.a, "x"), (&self.b, "y"), (&self.c, "z")] {
            if coef.is_zero() {
                continue;
            }
            let (negative, body) = match coef.as_factor() {
                Factor::One => (false, var.to_string()),
                Factor::MinusOne => (true, var.to_string()),
                Factor::Simple { negative, text } => (negative, format!("{text}*{var}")),
                Factor::Wrapped(text) => (false, format!("({text})*{var}")),
            };
            if first {
                if negative {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if first {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// A skew-symmetric matrix of linear forms, even size, upper triangle stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix<C: Coefficient> {
    size: usize,
    upper: BTreeMap<(usize, usize), LinearForm<C>>,
}

impl<C: Coefficient> SkewMatrix<C> {
    /// An all-zero skew matrix. Size must be even (0 is allowed; it shows up
    /// as the final minor of a 2 x 2 matrix).
    pub fn new(size: usize) -> Result<Self> {
        if !size.is_multiple_of(2) {
            return Err(Error::OddSize(size));
        }
        Ok(SkewMatrix {
            size,
            upper: BTreeMap::new(),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    fn check_pair(&self, row: usize, col: usize) -> Result<()> {
        if !(1 <= row && row < col && col <= self.size) {
            return Err(Error::IndexOutOfRange {
                what: format!(
                    "upper entry ({row},{col}) in a {0}x{0} matrix needs 1 <= row < col <= {0}",
                    self.size
                ),
            });
        }
        Ok(())
    }

    /// Set the upper entry (row, col), row < col; zero forms clear the slot.
    pub fn set_upper(&mut self, row: usize, col: usize, form: LinearForm<C>) -> Result<()> {
        self.check_pair(row, col)?;
        if form.is_zero() {
            self.upper.remove(&(row, col));
        } else {
            self.upper.insert((row, col), form);
        }
        Ok(())
    }

    /// The stored upper entry, `None` when zero.
    pub fn upper(&self, row: usize, col: usize) -> Option<&LinearForm<C>> {
        self.upper.get(&(row, col))
    }

    /// The full signed entry at (row, col): skew symmetry fills in the
    /// diagonal (zero) and the lower triangle (negated mirror).
    pub fn entry(&self, row: usize, col: usize) -> Option<LinearForm<C>> {
        if row == col {
            return None;
        }
        if row < col {
            self.upper.get(&(row, col)).cloned()
        } else {
            self.upper.get(&(col, row)).map(LinearForm::negate)
        }
    }

    /// Stored upper entries in (row, col) order.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, &LinearForm<C>)> {
        self.upper.iter().map(|(&(i, j), f)| (i, j, f))
    }

    pub fn num_stored(&self) -> usize {
        self.upper.len()
    }

    /// Delete rows/columns `p` and `q` (1-based, distinct) and compact the
    /// remaining indices, preserving their order.
    pub fn minor(&self, p: usize, q: usize) -> Result<SkewMatrix<C>> {
        if p == q || p < 1 || q < 1 || p > self.size || q > self.size {
            return Err(Error::IndexOutOfRange {
                what: format!("minor indices ({p},{q}) in a {0}x{0} matrix", self.size),
            });
        }
        let mut out = SkewMatrix::new(self.size - 2)?;
        let remap = |idx: usize| -> Option<usize> {
            if idx == p || idx == q {
                return None;
            }
            let shift = (idx > p) as usize + (idx > q) as usize;
            Some(idx - shift)
        };
        for (&(i, j), form) in &self.upper {
            if let (Some(ni), Some(nj)) = (remap(i), remap(j)) {
                out.upper.insert((ni, nj), form.clone());
            }
        }
        Ok(out)
    }

    pub fn has_symbols(&self) -> bool {
        self.upper.values().any(LinearForm::has_symbols)
    }

    pub fn map_coeffs<D: Coefficient>(
        &self,
        mut f: impl FnMut(&C) -> Result<D>,
    ) -> Result<SkewMatrix<D>> {
        let mut out = SkewMatrix::new(self.size)?;
        for (&(i, j), form) in &self.upper {
            out.set_upper(i, j, form.map_coeffs(&mut f)?)?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SkewRepr<C> {
    size: usize,
    entries: Vec<SkewEntryRepr<C>>,
}

#[derive(Serialize, Deserialize)]
struct SkewEntryRepr<C> {
    row: usize,
    col: usize,
    a: C,
    b: C,
    c: C,
}

impl<C: Coefficient + Serialize> Serialize for SkewMatrix<C> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SkewRepr {
            size: self.size,
            entries: self
                .iter_upper()
                .map(|(row, col, form)| SkewEntryRepr {
                    row,
                    col,
                    a: form.a.clone(),
                    b: form.b.clone(),
                    c: form.c.clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de, C: Coefficient + Deserialize<'de>> Deserialize<'de> for SkewMatrix<C> {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SkewRepr::<C>::deserialize(deserializer)?;
        let mut m = SkewMatrix::new(repr.size).map_err(serde::de::Error::custom)?;
        for e in repr.entries {
            m.set_upper(e.row, e.col, LinearForm::new(e.a, e.b, e.c))
                .map_err(serde::de::Error::custom)?;
        }
        Ok(m)
    }
}

impl<C: Coefficient> std::fmt::Display for SkewMatrix<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "skew {0}x{0}, nonzero upper entries:", self.size)?;
        for (i, j, form) in self.iter_upper() {
            writeln!(f, "  ({i},{j}) = {form}")?;
        }
        Ok(())
    }
}

fn check_pf_input<C: Coefficient>(m: &SkewMatrix<C>) -> Result<()> {
    if m.size() == 0 {
        return Err(Error::DimensionMismatch(
            "Pfaffian of the empty matrix is not exposed; smallest input is 2x2".into(),
        ));
    }
    if !m.size().is_multiple_of(2) {
        return Err(Error::OddSize(m.size()));
    }
    if m.size() > 64 {
        return Err(Error::SizeGuardExceeded {
            size: m.size(),
            guard: 64,
            what: "pfaffian index bitmask",
        });
    }
    Ok(())
}

/// Pfaffian by recursive expansion along the last row.
///
/// For the current index set with largest element r (the last row of the
/// compacted submatrix), sums `(-1)^pos * M[r][j] * Pf(minor)` over the
/// remaining indices j at 1-based compacted position `pos`, where the minor
/// deletes r and j. Base case: the 2 x 2 Pfaffian is the upper entry.
/// Subsets are memoized, which keeps structured matrices polynomial-time;
/// the values are identical to the plain recursion.
pub fn pf_laplace<C: Coefficient>(m: &SkewMatrix<C>) -> Result<TriPoly<C>> {
    check_pf_input(m)?;
    let full: u64 = if m.size() == 64 {
        u64::MAX
    } else {
        (1u64 << m.size()) - 1
    };
    let mut memo: HashMap<u64, TriPoly<C>> = HashMap::new();
    pf_subset(m, full, &mut memo)
}

fn pf_subset<C: Coefficient>(
    m: &SkewMatrix<C>,
    mask: u64,
    memo: &mut HashMap<u64, TriPoly<C>>,
) -> Result<TriPoly<C>> {
    if let Some(hit) = memo.get(&mask) {
        return Ok(hit.clone());
    }
    let count = mask.count_ones() as usize;
    debug_assert!(count >= 2 && count.is_multiple_of(2));
    let last = 63 - mask.leading_zeros() as usize; // 0-based largest index
    let result = if count == 2 {
        let first = mask.trailing_zeros() as usize;
        match m.upper(first + 1, last + 1) {
            Some(form) => form.to_poly(),
            None => TriPoly::zero(1),
        }
    } else {
        let mut acc = TriPoly::zero(count / 2);
        let mut pos = 0usize;
        let mut rest = mask & !(1u64 << last);
        while rest != 0 {
            let j = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            pos += 1;
            // row `last+1`, column `j+1` lies below the diagonal: the entry
            // is the negated mirror of the stored upper form.
            let entry = match m.upper(j + 1, last + 1) {
                Some(form) => form.negate(),
                None => continue,
            };
            let sub = pf_subset(m, mask & !(1u64 << last) & !(1u64 << j), memo)?;
            if sub.is_zero() {
                continue;
            }
            let term = entry.to_poly().mul(&sub)?;
            acc = if pos % 2 == 1 {
                acc.sub(&term)?
            } else {
                acc.add(&term)?
            };
        }
        acc
    };
    memo.insert(mask, result.clone());
    Ok(result)
}

/// Default size guard for the combinatorial evaluators.
pub const MATCHING_GUARD: usize = 12;

/// Pfaffian as the signed sum over perfect matchings (the definition).
///
/// Each matching {(i1,j1),...,(in,jn)} with i_r < j_r and i_1 < i_2 < ...
/// contributes `sign * m[i1,j1] * ... * m[in,jn]`, where `sign` is the sign
/// of the permutation (i1 j1 i2 j2 ... in jn), computed by counting
/// inversions. Exponential in the size; intended as the independent oracle
/// for the other evaluators.
pub fn pf_matchings<C: Coefficient>(m: &SkewMatrix<C>) -> Result<TriPoly<C>> {
    pf_matchings_guarded(m, MATCHING_GUARD)
}

/// [`pf_matchings`] with an explicit size guard.
pub fn pf_matchings_guarded<C: Coefficient>(
    m: &SkewMatrix<C>,
    guard: usize,
) -> Result<TriPoly<C>> {
    check_pf_input(m)?;
    if m.size() > guard {
        return Err(Error::SizeGuardExceeded {
            size: m.size(),
            guard,
            what: "pf_matchings",
        });
    }
    let n = m.size();
    let mut acc = TriPoly::zero(n / 2);
    let mut used = vec![false; n + 1];
    let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(n / 2);
    match_rec(m, &mut used, &mut pairs, None, &mut acc)?;
    Ok(acc)
}

fn match_rec<C: Coefficient>(
    m: &SkewMatrix<C>,
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    product: Option<TriPoly<C>>,
    acc: &mut TriPoly<C>,
) -> Result<()> {
    let n = m.size();
    let i = match (1..=n).find(|&i| !used[i]) {
        Some(i) => i,
        None => {
            // complete matching: flatten, count inversions, accumulate
            let product = product.expect("complete matching over a positive-size matrix");
            let flat: Vec<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
            let mut inversions = 0usize;
            for p in 0..flat.len() {
                for q in p + 1..flat.len() {
                    if flat[p] > flat[q] {
                        inversions += 1;
                    }
                }
            }
            *acc = if inversions % 2 == 1 {
                acc.sub(&product)?
            } else {
                acc.add(&product)?
            };
            return Ok(());
        }
    };
    used[i] = true;
    for j in i + 1..=n {
        if used[j] {
            continue;
        }
        // absent entries contribute zero terms; prune
        let Some(form) = m.upper(i, j) else { continue };
        let next = match &product {
            None => form.to_poly(),
            Some(p) => p.mul(&form.to_poly())?,
        };
        if next.is_zero() {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        match_rec(m, used, pairs, Some(next), acc)?;
        pairs.pop();
        used[j] = false;
    }
    used[i] = false;
    Ok(())
}

/// Pfaffian of a block-structured matrix: size 2d, all entries with both
/// indices >= d+2 zero. Expands along rows 2d down to d+2 (each consumes one
/// column from the left block), memoizing on the consumed-column set, and
/// finishes on the single surviving upper-left entry. Errors with
/// [`Error::StructureViolation`] if the zero block is violated or if a
/// product of two symbol-bearing entries would be required.
pub fn pf_structured<C: Coefficient>(m: &SkewMatrix<C>, degree: usize) -> Result<TriPoly<C>> {
    if m.size() != 2 * degree || degree == 0 {
        return Err(Error::DimensionMismatch(format!(
            "structured Pfaffian of degree {degree} needs a {0}x{0} matrix, got {1}x{1}",
            2 * degree,
            m.size()
        )));
    }
    if degree + 1 > 63 {
        return Err(Error::SizeGuardExceeded {
            size: m.size(),
            guard: 124,
            what: "structured pfaffian column bitmask",
        });
    }
    // Bottom rows indexed by original row number r in d+2..=2d; entries
    // M[r][j] = -upper[(j, r)] for j <= d+1.
    let mut bottom: BTreeMap<usize, Vec<(usize, LinearForm<C>)>> = BTreeMap::new();
    for (i, j, form) in m.iter_upper() {
        if i >= degree + 2 {
            return Err(Error::StructureViolation(format!(
                "entry ({i},{j}) lies in the zero block (rows/cols {}..{})",
                degree + 2,
                2 * degree
            )));
        }
        if j >= degree + 2 {
            bottom.entry(j).or_default().push((i, form.negate()));
        }
    }
    let mut memo: HashMap<u64, TriPoly<C>> = HashMap::new();
    structured_rec(m, degree, &bottom, 0, &mut memo)
}

fn structured_rec<C: Coefficient>(
    m: &SkewMatrix<C>,
    degree: usize,
    bottom: &BTreeMap<usize, Vec<(usize, LinearForm<C>)>>,
    consumed: u64,
    memo: &mut HashMap<u64, TriPoly<C>>,
) -> Result<TriPoly<C>> {
    if let Some(hit) = memo.get(&consumed) {
        return Ok(hit.clone());
    }
    let used = consumed.count_ones() as usize;
    let result = if used == degree - 1 {
        // two survivors among columns 1..=d+1
        let mut survivors = (1..=degree + 1).filter(|&c| consumed & (1u64 << c) == 0);
        let p = survivors.next().expect("two surviving columns");
        let q = survivors.next().expect("two surviving columns");
        match m.upper(p, q) {
            Some(form) => form.to_poly(),
            None => TriPoly::zero(1),
        }
    } else {
        let row = 2 * degree - used;
        let mut acc = TriPoly::zero(degree - used);
        if let Some(entries) = bottom.get(&row) {
            for (j, form) in entries {
                if consumed & (1u64 << j) != 0 {
                    continue;
                }
                // compacted 1-based column position of j among the survivors
                let below = consumed & ((1u64 << j) - 1);
                let pos = j - below.count_ones() as usize;
                let sub = structured_rec(m, degree, bottom, consumed | (1u64 << j), memo)?;
                if sub.is_zero() {
                    continue;
                }
                if form.has_symbols() && sub.has_symbols() {
                    return Err(Error::StructureViolation(format!(
                        "row {row}, column {j}: product of two unknown-bearing entries"
                    )));
                }
                let term = form.to_poly().mul(&sub)?;
                acc = if pos % 2 == 1 {
                    acc.sub(&term)?
                } else {
                    acc.add(&term)?
                };
            }
        }
        acc
    };
    memo.insert(consumed, result.clone());
    Ok(result)
}

/// Default size guard for the cofactor determinant.
pub const DET_GUARD: usize = 12;

/// Exact determinant by cofactor expansion with column-subset memoization.
/// Test infrastructure for the identity Pf(M)^2 = det(M).
pub fn det<C: Coefficient>(m: &SkewMatrix<C>) -> Result<TriPoly<C>> {
    det_guarded(m, DET_GUARD)
}

/// [`det`] with an explicit size guard.
pub fn det_guarded<C: Coefficient>(m: &SkewMatrix<C>, guard: usize) -> Result<TriPoly<C>> {
    if m.size() == 0 {
        return Err(Error::DimensionMismatch(
            "determinant of the empty matrix is not exposed".into(),
        ));
    }
    if m.size() > guard {
        return Err(Error::SizeGuardExceeded {
            size: m.size(),
            guard,
            what: "det",
        });
    }
    let full: u64 = (1u64 << m.size()) - 1;
    let mut memo: HashMap<u64, TriPoly<C>> = HashMap::new();
    det_rec(m, full, &mut memo)
}

fn det_rec<C: Coefficient>(
    m: &SkewMatrix<C>,
    colmask: u64,
    memo: &mut HashMap<u64, TriPoly<C>>,
) -> Result<TriPoly<C>> {
    if let Some(hit) = memo.get(&colmask) {
        return Ok(hit.clone());
    }
    let remaining = colmask.count_ones() as usize;
    let row = m.size() - remaining + 1; // expand along the topmost unused row
    let mut acc = TriPoly::zero(remaining);
    let mut pos = 0usize;
    let mut rest = colmask;
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        pos += 1;
        let Some(entry) = m.entry(row, j + 1) else { continue };
        let term = if remaining == 1 {
            entry.to_poly()
        } else {
            let sub = det_rec(m, colmask & !(1u64 << j), memo)?;
            if sub.is_zero() {
                continue;
            }
            entry.to_poly().mul(&sub)?
        };
        acc = if pos % 2 == 1 {
            acc.add(&term)?
        } else {
            acc.sub(&term)?
        };
    }
    memo.insert(colmask, acc.clone());
    Ok(acc)
}

/// The congruence transform `X M X^t` for an integer matrix X.
///
/// Used by tests of the scaling law Pf(X M X^t) = det(X) Pf(M); row/column
/// swaps are the special case of permutation matrices.
pub fn congruence<C: Coefficient>(m: &SkewMatrix<C>, x: &IntMat) -> Result<SkewMatrix<C>> {
    let n = m.size();
    if x.rows() != n || x.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "congruence of a {n}x{n} matrix by a {}x{} one",
            x.rows(),
            x.cols()
        )));
    }
    let mut out = SkewMatrix::new(n)?;
    for i in 1..=n {
        for j in i + 1..=n {
            // (X M X^t)_{ij} = sum over stored upper (k,l) of
            // (X_{ik} X_{jl} - X_{il} X_{jk}) * M_{kl}
            let mut acc: Option<LinearForm<C>> = None;
            for (k, l, form) in m.iter_upper() {
                let coef = &x[(i - 1, k - 1)] * &x[(j - 1, l - 1)]
                    - &x[(i - 1, l - 1)] * &x[(j - 1, k - 1)];
                if coef.is_zero() {
                    continue;
                }
                let scaled = form.scale_int(&coef);
                acc = Some(match acc {
                    None => scaled,
                    Some(prev) => prev.try_add(&scaled)?,
                });
            }
            if let Some(form) = acc {
                out.set_upper(i, j, form)?;
            }
        }
    }
    Ok(out)
}

/// A dense random skew matrix with small integer linear forms, for
/// randomized identity checks (library tests, the acceptance suite, and the
/// `pfaffian_identities` example all share it).
pub fn random_skew_matrix(
    size: usize,
    ring: &Ring,
    rng: &mut impl Rng,
) -> Result<SkewMatrix<RingValue>> {
    let mut m = SkewMatrix::new(size)?;
    for i in 1..=size {
        for j in i + 1..=size {
            let form = LinearForm::new(
                ring.from_i64(rng.gen_range(-4..=4)),
                ring.from_i64(rng.gen_range(-4..=4)),
                ring.from_i64(rng.gen_range(-4..=4)),
            );
            m.set_upper(i, j, form)?;
        }
    }
    Ok(m)
}
