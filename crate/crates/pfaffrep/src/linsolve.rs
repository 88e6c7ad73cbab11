//! Exact integer linear algebra for the coefficient-matching system.
//!
//! Matching the Pfaffian of the degree-d template against a general form
//! yields one equation per non-pure-power monomial: the affine combination
//! of unknown entry coefficients equals the corresponding distinguished
//! coefficient (plus any distinguished coefficients the Pfaffian itself
//! drags into the equation, which are moved to the right-hand side). That
//! is an integer matrix equation `A * u = T * theta` in which `theta` is a
//! vector of parameters, and we want `u` as an explicit linear function of
//! `theta` — over the integers, so that the answer specializes to every
//! coefficient ring through the canonical homomorphism.
//!
//! [`solve_parametric`] computes a column-style Hermite normal form
//! `A * U = [H | 0]` with unimodular `U`, solves `H * y = t` per
//! distinguished column by forward substitution (exact division, with a
//! divisibility witness when it fails), and returns
//!
//! - `particular`: unknowns x thetas, with `u = particular * theta` a
//!   solution for every theta;
//! - `nullspace`: a basis of the integer kernel of `A` (the trailing
//!   columns of `U`, re-normalized to their own Hermite form), giving the
//!   general solution `u = particular * theta + nullspace * t` over free
//!   integer parameters `t`;
//! - a [`Certificate`] with the rank, the invariant factors of `A`, and —
//!   when some column is not solvable over the integers — the failing
//!   column and the divisibility obstruction.
//!
//! The particular solution is reduced modulo the kernel lattice, so the
//! output is canonical: independent of pivoting choices, identical bytes
//! on every run.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::pfaffian::pf_structured;
use crate::sympoly::{Monomial3, SymbolId, SymbolicCoefficient};
use crate::template::{flat_symbol_name, PfaffianTemplate, FORMAT_VERSION};

/// The integer system `A * u = T * theta` extracted from a template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub degree: usize,
    /// Row monomials in descending graded-lex order (pure powers excluded).
    pub monomials: Vec<Monomial3>,
    /// Column order of `a`: the template's unknowns, by (row, col, axis).
    pub unknown_symbols: Vec<SymbolId>,
    /// Column order of `t`: the distinguished coefficients in flat order.
    pub theta_symbols: Vec<SymbolId>,
    /// equations x unknowns.
    pub a: IntMat,
    /// equations x thetas right-hand side.
    pub t: IntMat,
}

impl LinearSystem {
    pub fn equation_count(&self) -> usize {
        self.monomials.len()
    }

    pub fn unknown_count(&self) -> usize {
        self.unknown_symbols.len()
    }

    pub fn theta_count(&self) -> usize {
        self.theta_symbols.len()
    }

    /// Nonzero left-hand side of equation `row`, in flat naming.
    pub fn lhs_map(&self, row: usize) -> BTreeMap<String, BigInt> {
        let mut out = BTreeMap::new();
        for (j, sym) in self.unknown_symbols.iter().enumerate() {
            let v = &self.a[(row, j)];
            if !v.is_zero() {
                out.insert(flat_symbol_name(self.degree, sym), v.clone());
            }
        }
        out
    }

    /// Nonzero right-hand side of equation `row`, in flat naming.
    pub fn rhs_map(&self, row: usize) -> BTreeMap<String, BigInt> {
        let mut out = BTreeMap::new();
        for (j, sym) in self.theta_symbols.iter().enumerate() {
            let v = &self.t[(row, j)];
            if !v.is_zero() {
                out.insert(flat_symbol_name(self.degree, sym), v.clone());
            }
        }
        out
    }

    /// Equation `row` rendered in flat naming, e.g. `b1 - a13 = Theta4`.
    pub fn equation_text(&self, row: usize) -> String {
        let mut out = String::new();
        let push_terms = |out: &mut String,
                              mat: &IntMat,
                              syms: &[SymbolId],
                              mut first: bool| {
            for (j, sym) in syms.iter().enumerate() {
                let v = &mat[(row, j)];
                if v.is_zero() {
                    continue;
                }
                let neg = v.is_negative();
                if first {
                    if neg {
                        out.push('-');
                    }
                    first = false;
                } else {
                    out.push_str(if neg { " - " } else { " + " });
                }
                let mag = v.magnitude();
                let name = flat_symbol_name(self.degree, sym);
                if *mag == num_bigint::BigUint::from(1u32) {
                    out.push_str(&name);
                } else {
                    out.push_str(&format!("{mag}*{name}"));
                }
            }
            if first {
                out.push('0');
            }
        };
        push_terms(&mut out, &self.a, &self.unknown_symbols, true);
        out.push_str(" = ");
        push_terms(&mut out, &self.t, &self.theta_symbols, true);
        out
    }
}

/// Expand the template Pfaffian and turn coefficient matching into the
/// integer system. Errors if a pure-power coefficient is anything other
/// than its distinguished symbol, or if any coefficient fails to be linear
/// in the symbols with zero constant term.
pub fn extract_system(template: &PfaffianTemplate) -> Result<LinearSystem> {
    let d = template.degree;
    let pf = pf_structured(&template.matrix, d)?;

    let unknown_index: BTreeMap<SymbolId, usize> = template
        .unknowns
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();
    let theta_index: BTreeMap<SymbolId, usize> = template
        .thetas
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, s)| (s, i))
        .collect();

    // the three pure powers must carry exactly their distinguished symbol
    for mono in [
        Monomial3::new(d, 0, 0),
        Monomial3::new(0, d, 0),
        Monomial3::new(0, 0, d),
    ] {
        let expected = SymbolicCoefficient::from_symbol(SymbolId::theta(mono.i, mono.j, mono.k));
        match pf.coefficient(&mono)? {
            Some(c) if *c == expected => {}
            other => {
                return Err(Error::PurePowerViolation {
                    monomial: mono.to_string(),
                    detail: format!(
                        "expected exactly `{expected}`, found `{}`",
                        other.map_or_else(|| "0".to_string(), |c| c.to_string())
                    ),
                });
            }
        }
    }

    let monomials: Vec<Monomial3> = Monomial3::all_of_degree(d)
        .into_iter()
        .filter(|m| !m.is_pure_power())
        .collect();
    let mut a = IntMat::zeros(monomials.len(), template.unknowns.len());
    let mut t = IntMat::zeros(monomials.len(), template.thetas.len());

    for (row, mono) in monomials.iter().enumerate() {
        let own = theta_index[&SymbolId::theta(mono.i, mono.j, mono.k)];
        t[(row, own)] += BigInt::one();
        let Some(coef) = pf.coefficient(mono)? else { continue };
        let view = coef.affine_view().ok_or_else(|| Error::LinearityViolation {
            monomial: mono.to_string(),
            detail: format!("coefficient `{coef}` is not linear in the symbols"),
        })?;
        if !view.constant.is_zero() {
            return Err(Error::LinearityViolation {
                monomial: mono.to_string(),
                detail: format!("coefficient `{coef}` has constant term {}", view.constant),
            });
        }
        for (sym, k) in view.linear {
            match &sym {
                SymbolId::Entry { .. } => {
                    let j = *unknown_index.get(&sym).ok_or_else(|| {
                        Error::StructureViolation(format!(
                            "entry symbol {sym} missing from the unknown ordering"
                        ))
                    })?;
                    a[(row, j)] += k;
                }
                SymbolId::Theta { .. } => {
                    let j = *theta_index.get(&sym).ok_or_else(|| {
                        Error::StructureViolation(format!(
                            "distinguished symbol {sym} missing from the theta ordering"
                        ))
                    })?;
                    // move to the right-hand side
                    t[(row, j)] -= k;
                }
                SymbolId::Free { .. } => {
                    return Err(Error::LinearityViolation {
                        monomial: mono.to_string(),
                        detail: format!("free parameter {sym} appears in the template"),
                    });
                }
            }
        }
    }

    Ok(LinearSystem {
        degree: d,
        monomials,
        unknown_symbols: template.unknowns.clone(),
        theta_symbols: template.thetas.clone(),
        a,
        t,
    })
}

/// Column-style Hermite normal form `A * U = H`.
///
/// `H` has one pivot column per pivot row; pivot rows increase strictly,
/// pivots are positive, every entry above a pivot is zero, entries left of
/// a pivot on its row are reduced into `[0, pivot)`, and columns from
/// `rank` on are zero. `U` is unimodular (a product of elementary column
/// operations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub h: IntMat,
    pub u: IntMat,
    pub rank: usize,
    /// Row of each pivot, strictly increasing; `pivot_rows[i]` is the pivot
    /// row of column `i`.
    pub pivot_rows: Vec<usize>,
}

pub fn hnf(a: &IntMat) -> Hnf {
    let rows = a.rows();
    let cols = a.cols();
    let mut h = a.clone();
    let mut u = IntMat::identity(cols);
    let mut pivot_rows = Vec::new();
    let mut c = 0usize;

    'rows: for r in 0..rows {
        if c == cols {
            break;
        }
        loop {
            // minimal-magnitude nonzero entry on row r among columns c..
            let mut jmin: Option<usize> = None;
            for j in c..cols {
                if h[(r, j)].is_zero() {
                    continue;
                }
                match jmin {
                    None => jmin = Some(j),
                    Some(b) if h[(r, j)].magnitude() < h[(r, b)].magnitude() => jmin = Some(j),
                    _ => {}
                }
            }
            let Some(jm) = jmin else { continue 'rows };
            h.swap_cols(c, jm);
            u.swap_cols(c, jm);
            let pivot = h[(r, c)].clone();
            for j in c + 1..cols {
                if h[(r, j)].is_zero() {
                    continue;
                }
                // truncated division leaves |remainder| < |pivot|
                let q = -(&h[(r, j)] / &pivot);
                h.col_axpy(j, &q, c);
                u.col_axpy(j, &q, c);
            }
            if (c + 1..cols).all(|j| h[(r, j)].is_zero()) {
                break;
            }
            // some remainder survived: repeat with a smaller pivot
        }
        if h[(r, c)].is_negative() {
            h.negate_col(c);
            u.negate_col(c);
        }
        let pivot = h[(r, c)].clone();
        for j in 0..c {
            let q = h[(r, j)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.col_axpy(j, &nq, c);
                u.col_axpy(j, &nq, c);
            }
        }
        pivot_rows.push(r);
        c += 1;
    }

    Hnf {
        h,
        u,
        rank: c,
        pivot_rows,
    }
}

/// Invariant factors of `a` (the diagonal of its Smith normal form),
/// positive, each dividing the next, one per unit of rank.
pub fn snf(a: &IntMat) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.rows();
    let cols = m.cols();
    let dim = rows.min(cols);
    let mut t = 0usize;

    'outer: while t < dim {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[(i, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) if m[(i, j)].magnitude() < m[(bi, bj)].magnitude() => {
                        best = Some((i, j))
                    }
                    _ => {}
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap_rows(t, bi);
        m.swap_cols(t, bj);
        let pivot = m[(t, t)].clone();
        let mut clean = true;
        for i in t + 1..rows {
            if m[(i, t)].is_zero() {
                continue;
            }
            let q = -(&m[(i, t)] / &pivot);
            m.row_axpy(i, &q, t);
            if !m[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..cols {
            if m[(t, j)].is_zero() {
                continue;
            }
            let q = -(&m[(t, j)] / &pivot);
            m.col_axpy(j, &q, t);
            if !m[(t, j)].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue 'outer;
        }
        // pivot must divide the remaining block, or it shrinks further
        for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&m[(i, j)] % &pivot).is_zero() {
                    m.row_axpy(t, &BigInt::one(), i);
                    continue 'outer;
                }
            }
        }
        t += 1;
    }

    (0..t).map(|i| m[(i, i)].abs()).collect()
}

/// Solvability and shape report for a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub solvable_over_integers: bool,
    pub rank: usize,
    pub free_count: usize,
    /// Invariant factors of the coefficient matrix, as decimal strings.
    pub invariant_factors: Vec<String>,
    /// On failure: which distinguished column is obstructed, and how.
    pub failing_column: Option<String>,
}

/// The general integer solution `u = particular * theta + nullspace * t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParametricSolution {
    pub format_version: u32,
    pub degree: usize,
    /// unknowns x thetas.
    pub particular: IntMat,
    /// unknowns x free parameters; Hermite-canonical kernel basis of `A`.
    pub nullspace: IntMat,
    pub certificate: Certificate,
}

impl ParametricSolution {
    pub fn rank(&self) -> usize {
        self.certificate.rank
    }

    pub fn free_count(&self) -> usize {
        self.certificate.free_count
    }
}

/// What [`solve_parametric`] found: an unsolvable system is a result, not
/// an error (errors are reserved for broken inputs and internal
/// inconsistencies).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(ParametricSolution),
    Unsolvable(Certificate),
}

/// Forward substitution in the column Hermite form: solve `H * y = target`
/// exactly over the integers, or explain why no integer solution exists.
fn solve_hnf_column(
    h: &IntMat,
    pivot_rows: &[usize],
    target: &[BigInt],
) -> std::result::Result<Vec<BigInt>, String> {
    let mut residual = target.to_vec();
    let mut y = vec![BigInt::zero(); pivot_rows.len()];
    for (i, &r) in pivot_rows.iter().enumerate() {
        let pivot = &h[(r, i)];
        let (q, rem) = residual[r].div_rem(pivot);
        if !rem.is_zero() {
            return Err(format!(
                "row {}: residue {} is not divisible by pivot {}",
                r + 1,
                residual[r],
                pivot
            ));
        }
        if !q.is_zero() {
            // column i vanishes above its pivot row
            for rr in r..h.rows() {
                let sub = &h[(rr, i)] * &q;
                residual[rr] -= sub;
            }
        }
        y[i] = q;
    }
    if let Some(bad) = residual.iter().position(|v| !v.is_zero()) {
        return Err(format!(
            "row {}: inconsistent residue {}",
            bad + 1,
            residual[bad]
        ));
    }
    Ok(y)
}

/// Solve the system for all distinguished columns at once.
pub fn solve_parametric(system: &LinearSystem) -> Result<SolveOutcome> {
    let unknowns = system.unknown_count();
    let thetas = system.theta_count();
    let decomposition = hnf(&system.a);
    let rank = decomposition.rank;
    let free_count = unknowns - rank;
    let invariant_factors: Vec<String> = snf(&decomposition.h.col_range(0, rank))
        .iter()
        .map(|f| f.to_string())
        .collect();

    let mut particular = IntMat::zeros(unknowns, thetas);
    let u_head = decomposition.u.col_range(0, rank);
    for m in 0..thetas {
        let target = system.t.col(m);
        let y = match solve_hnf_column(&decomposition.h, &decomposition.pivot_rows, &target) {
            Ok(y) => y,
            Err(detail) => {
                return Ok(SolveOutcome::Unsolvable(Certificate {
                    solvable_over_integers: false,
                    rank,
                    free_count,
                    invariant_factors,
                    failing_column: Some(format!(
                        "{}: {detail}",
                        flat_symbol_name(system.degree, &system.theta_symbols[m])
                    )),
                }));
            }
        };
        let col = u_head.mul_vec(&y)?;
        for (r, v) in col.into_iter().enumerate() {
            particular[(r, m)] = v;
        }
    }

    // canonical kernel basis: Hermite form of the trailing columns of U
    let kernel_raw = decomposition.u.col_range(rank, unknowns);
    let kernel_hnf = hnf(&kernel_raw);
    if kernel_hnf.rank != free_count {
        return Err(Error::VerificationFailed(format!(
            "kernel basis rank {} != expected {free_count}",
            kernel_hnf.rank
        )));
    }
    let nullspace = kernel_hnf.h.col_range(0, free_count);

    // reduce the particular solution modulo the kernel lattice so the
    // output does not depend on pivoting choices
    for (i, &r) in kernel_hnf.pivot_rows.iter().enumerate() {
        let pivot = nullspace[(r, i)].clone();
        for m in 0..thetas {
            let q = particular[(r, m)].div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for rr in 0..unknowns {
                let sub = &nullspace[(rr, i)] * &q;
                particular[(rr, m)] -= sub;
            }
        }
    }

    let solution = ParametricSolution {
        format_version: FORMAT_VERSION,
        degree: system.degree,
        particular,
        nullspace,
        certificate: Certificate {
            solvable_over_integers: true,
            rank,
            free_count,
            invariant_factors,
            failing_column: None,
        },
    };
    verify_solution(system, &solution)?;
    Ok(SolveOutcome::Solved(solution))
}

/// Exact re-check that a (possibly deserialized) solution solves the
/// system: `A * particular == T`, `A * nullspace == 0`, and the nullspace
/// has full column rank matching the certificate.
pub fn verify_solution(system: &LinearSystem, solution: &ParametricSolution) -> Result<()> {
    let unknowns = system.unknown_count();
    let cert = &solution.certificate;
    if solution.degree != system.degree {
        return Err(Error::VerificationFailed(format!(
            "solution degree {} does not match system degree {}",
            solution.degree, system.degree
        )));
    }
    if solution.particular.rows() != unknowns
        || solution.particular.cols() != system.theta_count()
        || solution.nullspace.rows() != unknowns
        || solution.nullspace.cols() != cert.free_count
        || cert.rank + cert.free_count != unknowns
    {
        return Err(Error::VerificationFailed(
            "solution dimensions do not match the system".into(),
        ));
    }
    if system.a.mul(&solution.particular)? != system.t {
        return Err(Error::VerificationFailed(
            "A * particular does not reproduce the right-hand side".into(),
        ));
    }
    let annihilated = system.a.mul(&solution.nullspace)?;
    if !annihilated.is_zero() {
        return Err(Error::VerificationFailed(
            "A * nullspace is not zero".into(),
        ));
    }
    if hnf(&solution.nullspace).rank != cert.free_count {
        return Err(Error::VerificationFailed(
            "nullspace columns are not independent".into(),
        ));
    }
    Ok(())
}
