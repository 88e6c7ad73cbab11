//! The symbolic skew-symmetric matrix whose Pfaffian realizes a general
//! ternary form of a given degree.
//!
//! For degree d the matrix has size 2d and three blocks:
//!
//! - an upper-left (d+1) x (d+1) block of generic linear forms
//!   `a[i,j]*x + b[i,j]*y + c[i,j]*z`, except that three slots carry the
//!   distinguished coefficients of the pure powers: entry (1,2) has
//!   `Theta[d,0,0]` on x, entry (2,3) has `Theta[0,d,0]` on y, and entry
//!   (3,4) has `Theta[0,0,d]` on z;
//! - a staircase of +-x, +-y, +-z constants in columns d+2..2d, rows
//!   1..d+1, arranged so that expanding the Pfaffian from the bottom row
//!   upward consumes one left-block column per row;
//! - a zero block in rows/columns d+2..2d.
//!
//! The staircase is what makes every Pfaffian coefficient affine in the
//! unknowns `a[i,j], b[i,j], c[i,j]`: each expansion path crosses exactly
//! one left-block entry (see [`crate::pfaffian::pf_structured`], which
//! verifies that claim while it evaluates).
//!
//! Flat naming: positions in the upper triangle are also numbered row by
//! row (entry (1,2) is 1, (1,3) is 2, ...), and the degree-d monomials are
//! numbered pure powers first, then the xy, xz, yz edges, then the interior;
//! [`flat_symbol_name`] renders symbols in that scheme (`b13`, `Theta19`),
//! which is convenient for eyeballing small systems and is the naming used
//! by the pinned degree-5 data in `testdata/`.

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pfaffian::{LinearForm, SkewMatrix};
use crate::sympoly::{Axis, Monomial3, SymbolId, SymbolicCoefficient};

/// Largest degree the sweep has exercised end to end; larger degrees build
/// only when explicitly un-capped.
pub const DEFAULT_DEGREE_CAP: usize = 25;

/// Serialization format tag for template and solution files.
pub const FORMAT_VERSION: u32 = 1;

/// Size data for the degree-d problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    /// Matrix size 2d.
    pub matrix_size: usize,
    /// Number of unknown entry coefficients: 3*C(d+1,2) - 3.
    pub unknowns: usize,
    /// Number of equations (non-pure-power monomials): C(d+2,2) - 3.
    pub equations: usize,
    /// Number of degree-d monomials: C(d+2,2).
    pub thetas: usize,
}

pub fn counts(degree: usize) -> Counts {
    let d = degree;
    Counts {
        matrix_size: 2 * d,
        unknowns: 3 * (d + 1) * d / 2 - 3,
        equations: (d + 2) * (d + 1) / 2 - 3,
        thetas: (d + 2) * (d + 1) / 2,
    }
}

/// The degree-d monomials in flat order: the three pure powers, then the
/// xy, xz, yz boundary edges (descending in the first variable), then the
/// interior monomials.
pub fn theta_order(degree: usize) -> Vec<Monomial3> {
    let d = degree;
    let mut order = vec![
        Monomial3::new(d, 0, 0),
        Monomial3::new(0, d, 0),
        Monomial3::new(0, 0, d),
    ];
    for i in (1..d).rev() {
        order.push(Monomial3::new(i, d - i, 0));
    }
    for i in (1..d).rev() {
        order.push(Monomial3::new(i, 0, d - i));
    }
    for j in (1..d).rev() {
        order.push(Monomial3::new(0, j, d - j));
    }
    for i in 1..=d.saturating_sub(2) {
        for j in 1..=d - 1 - i {
            order.push(Monomial3::new(i, j, d - i - j));
        }
    }
    order
}

/// 1-based flat position of monomial `m` in [`theta_order`].
pub fn flat_theta_index(degree: usize, m: &Monomial3) -> Option<usize> {
    theta_order(degree).iter().position(|x| x == m).map(|p| p + 1)
}

/// 1-based flat position of upper-triangle entry (row, col) in a
/// size x size matrix, counting row by row.
pub fn flat_entry_index(size: usize, row: usize, col: usize) -> usize {
    debug_assert!(1 <= row && row < col && col <= size);
    (row - 1) * size - row * (row - 1) / 2 + (col - row)
}

/// Render a symbol in flat naming: `Theta4`, `b13`, `t2`.
pub fn flat_symbol_name(degree: usize, sym: &SymbolId) -> String {
    match sym {
        SymbolId::Theta { i, j, k } => {
            let mono = Monomial3::new(*i, *j, *k);
            match flat_theta_index(degree, &mono) {
                Some(n) => format!("Theta{n}"),
                None => format!("Theta[{i},{j},{k}]"),
            }
        }
        SymbolId::Entry { row, col, axis } => {
            format!("{}{}", axis.letter(), flat_entry_index(2 * degree, *row, *col))
        }
        SymbolId::Free { index } => format!("t{index}"),
    }
}

/// Which distinguished monomial, if any, sits on (row, col, axis).
fn theta_slot(degree: usize, row: usize, col: usize, axis: Axis) -> Option<Monomial3> {
    match (row, col, axis) {
        (1, 2, Axis::A) => Some(Monomial3::new(degree, 0, 0)),
        (2, 3, Axis::B) => Some(Monomial3::new(0, degree, 0)),
        (3, 4, Axis::C) => Some(Monomial3::new(0, 0, degree)),
        _ => None,
    }
}

/// The symbolic matrix together with its symbol orderings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfaffianTemplate {
    pub format_version: u32,
    pub degree: usize,
    pub matrix: SkewMatrix<SymbolicCoefficient>,
    /// Unknown entry coefficients ordered by (row, col, axis).
    pub unknowns: Vec<SymbolId>,
    /// Distinguished coefficients in flat order ([`theta_order`]).
    pub thetas: Vec<SymbolId>,
}

/// Build the degree-d template (degrees 5 through [`DEFAULT_DEGREE_CAP`]).
pub fn build_template(degree: usize) -> Result<PfaffianTemplate> {
    build_template_capped(degree, DEFAULT_DEGREE_CAP)
}

/// [`build_template`] with an explicit degree cap, for callers that accept
/// degrees beyond the swept range.
pub fn build_template_capped(degree: usize, cap: usize) -> Result<PfaffianTemplate> {
    if degree < 5 {
        return Err(Error::UnsupportedDegree(degree));
    }
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    let d = degree;
    let mut matrix = SkewMatrix::new(2 * d)?;
    let mut unknowns = Vec::new();

    // upper-left block: generic linear forms, three slots distinguished
    for i in 1..=d + 1 {
        for j in i + 1..=d + 1 {
            let mut slots = Vec::with_capacity(3);
            for axis in Axis::ALL {
                let coef = match theta_slot(d, i, j, axis) {
                    Some(m) => SymbolicCoefficient::from_symbol(SymbolId::theta(m.i, m.j, m.k)),
                    None => {
                        let sym = SymbolId::entry(axis, i, j);
                        unknowns.push(sym.clone());
                        SymbolicCoefficient::from_symbol(sym)
                    }
                };
                slots.push(coef);
            }
            let c = slots.pop().unwrap();
            let b = slots.pop().unwrap();
            let a = slots.pop().unwrap();
            matrix.set_upper(i, j, LinearForm::new(a, b, c))?;
        }
    }

    // staircase: constant single-variable forms in columns d+2..2d
    let constant = |k: i64| SymbolicCoefficient::from_int(BigInt::from(k));
    let form_x = |k: i64| LinearForm::new(constant(k), constant(0), constant(0));
    let form_y = |k: i64| LinearForm::new(constant(0), constant(k), constant(0));
    let form_z = |k: i64| LinearForm::new(constant(0), constant(0), constant(k));

    matrix.set_upper(1, d + 2, form_y(-1))?;
    matrix.set_upper(2, d + 2, form_z(-1))?;
    matrix.set_upper(d + 1, d + 2, form_x(1))?;

    matrix.set_upper(1, d + 3, form_z(-1))?;
    matrix.set_upper(d, d + 3, form_x(1))?;
    matrix.set_upper(d + 1, d + 3, form_y(1))?;

    for k in 2..=d - 2 {
        let col = d + 2 + k;
        matrix.set_upper(d + 1 - k, col, form_x(1))?;
        matrix.set_upper(d + 2 - k, col, form_y(-1))?;
        let zc = if k == 2 && d.is_multiple_of(2) { 1 } else { -1 };
        matrix.set_upper(d + 3 - k, col, form_z(zc))?;
    }

    let thetas = theta_order(d)
        .iter()
        .map(|m| SymbolId::theta(m.i, m.j, m.k))
        .collect();

    Ok(PfaffianTemplate {
        format_version: FORMAT_VERSION,
        degree: d,
        matrix,
        unknowns,
        thetas,
    })
}

impl PfaffianTemplate {
    pub fn counts(&self) -> Counts {
        counts(self.degree)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Plain-text listing: header plus one line per nonzero upper entry.
    pub fn render_text(&self) -> String {
        let c = self.counts();
        let mut out = format!(
            "degree: {}\nmatrix: {}x{}\nunknowns: {}\nequations: {}\nthetas: {}\n",
            self.degree, c.matrix_size, c.matrix_size, c.unknowns, c.equations, c.thetas
        );
        for (i, j, form) in self.matrix.iter_upper() {
            out.push_str(&format!("({i},{j}): {form}\n"));
        }
        out
    }

    /// LaTeX array of the full matrix, entries in flat naming, with the
    /// zero block annotated.
    pub fn render_latex(&self) -> String {
        let n = 2 * self.degree;
        let mut out = String::new();
        out.push_str("\\left[\\begin{array}{");
        out.push_str(&"c".repeat(n));
        out.push_str("}\n");
        for i in 1..=n {
            let mut cells = Vec::with_capacity(n);
            for j in 1..=n {
                cells.push(match self.matrix.entry(i, j) {
                    Some(form) => form_latex(self.degree, &form),
                    None => "0".to_string(),
                });
            }
            out.push_str(&cells.join(" & "));
            out.push_str(" \\\\\n");
        }
        out.push_str("\\end{array}\\right]\n");
        out.push_str(&format!(
            "% rows/columns {}..{} form the zero block \\mathbf 0_{{{}}}\n",
            self.degree + 2,
            n,
            self.degree - 1
        ));
        out
    }
}

fn latex_symbol(degree: usize, sym: &SymbolId) -> String {
    match sym {
        SymbolId::Theta { i, j, k } => {
            let mono = Monomial3::new(*i, *j, *k);
            match flat_theta_index(degree, &mono) {
                Some(n) => format!("\\Theta_{{{n}}}"),
                None => format!("\\Theta_{{{i},{j},{k}}}"),
            }
        }
        SymbolId::Entry { row, col, axis } => format!(
            "{}_{{{}}}",
            axis.letter(),
            flat_entry_index(2 * degree, *row, *col)
        ),
        SymbolId::Free { index } => format!("t_{{{index}}}"),
    }
}

fn slot_latex(degree: usize, coef: &SymbolicCoefficient, var: &str) -> Option<(bool, String)> {
    if coef.is_zero() {
        return None;
    }
    let mut it = coef.terms();
    if let (Some((mono, k)), None) = (it.next(), it.next()) {
        let unit = *k.magnitude() == BigUint::from(1u32);
        match mono.factors() {
            [] => {
                let body = if unit {
                    var.to_string()
                } else {
                    format!("{}{var}", k.magnitude())
                };
                return Some((k.is_negative(), body));
            }
            [(sym, 1)] => {
                let name = latex_symbol(degree, sym);
                if unit {
                    return Some((k.is_negative(), format!("{name}{var}")));
                }
                return Some((k.is_negative(), format!("{}{name}{var}", k.magnitude())));
            }
            _ => {}
        }
    }
    Some((false, format!("({coef}){var}")))
}

fn form_latex(degree: usize, form: &LinearForm<SymbolicCoefficient>) -> String {
    let mut out = String::new();
    for (coef, var) in [(&form.a, "x"), (&form.b, "y"), (&form.c, "z")] {
        let Some((negative, body)) = slot_latex(degree, coef, var) else { continue };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { "-" } else { "+" });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfaffian::pf_structured;
    use crate::sympoly::TriPoly;

    #[test]
    fn pinned_counts() {
        let c5 = counts(5);
        assert_eq!(
            (c5.matrix_size, c5.unknowns, c5.equations, c5.thetas),
            (10, 42, 18, 21)
        );
        let c6 = counts(6);
        assert_eq!(
            (c6.matrix_size, c6.unknowns, c6.equations, c6.thetas),
            (12, 60, 25, 28)
        );
        let c25 = counts(25);
        assert_eq!(
            (c25.matrix_size, c25.unknowns, c25.equations, c25.thetas),
            (50, 972, 348, 351)
        );
    }

    #[test]
    fn degree_bounds() {
        assert!(matches!(build_template(4), Err(Error::UnsupportedDegree(4))));
        assert!(matches!(
            build_template(26),
            Err(Error::DegreeCapExceeded { degree: 26, cap: 25 })
        ));
        assert_eq!(build_template_capped(26, 30).unwrap().matrix.size(), 52);
    }

    #[test]
    fn distinguished_slots_and_display() {
        let tpl = build_template(5).unwrap();
        assert_eq!(
            tpl.matrix.upper(1, 2).unwrap().to_string(),
            "Theta[5,0,0]*x + b[1,2]*y + c[1,2]*z"
        );
        assert_eq!(
            tpl.matrix.upper(2, 3).unwrap().to_string(),
            "a[2,3]*x + Theta[0,5,0]*y + c[2,3]*z"
        );
        assert_eq!(
            tpl.matrix.upper(3, 4).unwrap().to_string(),
            "a[3,4]*x + b[3,4]*y + Theta[0,0,5]*z"
        );
        // a generic slot has no distinguished coefficient
        assert_eq!(
            tpl.matrix.upper(1, 3).unwrap().to_string(),
            "a[1,3]*x + b[1,3]*y + c[1,3]*z"
        );
    }

    #[test]
    fn pinned_degree_5_staircase() {
        let tpl = build_template(5).unwrap();
        let fixed: Vec<(usize, usize, &str)> = vec![
            (1, 7, "-y"),
            (2, 7, "-z"),
            (6, 7, "x"),
            (1, 8, "-z"),
            (5, 8, "x"),
            (6, 8, "y"),
            (4, 9, "x"),
            (5, 9, "-y"),
            (6, 9, "-z"),
            (3, 10, "x"),
            (4, 10, "-y"),
            (5, 10, "-z"),
        ];
        for (i, j, text) in fixed {
            assert_eq!(
                tpl.matrix.upper(i, j).map(|f| f.to_string()).as_deref(),
                Some(text),
                "entry ({i},{j})"
            );
        }
        // holes in the staircase and the zero block stay empty
        for (i, j) in [(3, 7), (4, 7), (5, 7), (2, 8), (3, 8), (4, 8), (1, 9), (2, 9), (3, 9), (1, 10), (2, 10), (6, 10)] {
            assert!(tpl.matrix.upper(i, j).is_none(), "entry ({i},{j})");
        }
        assert!(tpl.matrix.iter_upper().all(|(i, _, _)| i <= 6));
        // 15 left-block + 12 staircase entries stored
        assert_eq!(tpl.matrix.num_stored(), 27);
    }

    #[test]
    fn staircase_parity_flips_with_even_degree() {
        // the z constant next to the y-column of the second staircase step
        // is +z exactly when the degree is even
        let even = build_template(6).unwrap();
        assert_eq!(even.matrix.upper(7, 10).unwrap().to_string(), "z");
        let odd = build_template(7).unwrap();
        assert_eq!(odd.matrix.upper(8, 11).unwrap().to_string(), "-z");
    }

    #[test]
    fn symbol_orderings() {
        let tpl = build_template(5).unwrap();
        assert_eq!(tpl.unknowns.len(), 42);
        assert_eq!(tpl.thetas.len(), 21);
        let names: Vec<String> = tpl.unknowns.iter().take(4).map(|s| s.to_string()).collect();
        assert_eq!(names, ["b[1,2]", "c[1,2]", "a[1,3]", "b[1,3]"]);
        let theta_names: Vec<String> = tpl.thetas.iter().take(4).map(|s| s.to_string()).collect();
        assert_eq!(
            theta_names,
            ["Theta[5,0,0]", "Theta[0,5,0]", "Theta[0,0,5]", "Theta[4,1,0]"]
        );
        assert_eq!(tpl.thetas.last().unwrap().to_string(), "Theta[3,1,1]");
    }

    #[test]
    fn flat_naming() {
        assert_eq!(flat_entry_index(10, 1, 2), 1);
        assert_eq!(flat_entry_index(10, 1, 10), 9);
        assert_eq!(flat_entry_index(10, 2, 3), 10);
        assert_eq!(flat_entry_index(10, 2, 6), 13);
        assert_eq!(flat_entry_index(10, 3, 4), 18);
        assert_eq!(flat_entry_index(10, 4, 6), 26);
        assert_eq!(flat_entry_index(10, 5, 6), 31);

        assert_eq!(flat_theta_index(5, &Monomial3::new(5, 0, 0)), Some(1));
        assert_eq!(flat_theta_index(5, &Monomial3::new(4, 1, 0)), Some(4));
        assert_eq!(flat_theta_index(5, &Monomial3::new(0, 4, 1)), Some(12));
        assert_eq!(flat_theta_index(5, &Monomial3::new(1, 1, 3)), Some(16));
        assert_eq!(flat_theta_index(5, &Monomial3::new(1, 3, 1)), Some(18));
        assert_eq!(flat_theta_index(5, &Monomial3::new(2, 1, 2)), Some(19));
        assert_eq!(flat_theta_index(5, &Monomial3::new(3, 1, 1)), Some(21));
        assert_eq!(theta_order(5).len(), 21);

        let tpl = build_template(5).unwrap();
        assert_eq!(flat_symbol_name(5, &tpl.unknowns[0]), "b1");
        assert_eq!(
            flat_symbol_name(5, &SymbolId::entry(Axis::A, 2, 6)),
            "a13"
        );
        assert_eq!(
            flat_symbol_name(5, &SymbolId::theta(2, 1, 2)),
            "Theta19"
        );
        assert_eq!(flat_symbol_name(5, &SymbolId::free(7)), "t7");
    }

    /// With every unknown set to zero only the distinguished coefficients
    /// survive, and the staircase contributes exactly two cross terms.
    #[test]
    fn pfaffian_with_unknowns_zeroed() {
        let tpl = build_template(5).unwrap();
        let zeroed = tpl
            .matrix
            .map_coeffs(|c| {
                Ok(c.substitute(&mut |sym| match sym {
                    SymbolId::Entry { .. } => Some(SymbolicCoefficient::zero()),
                    _ => None,
                }))
            })
            .unwrap();
        let pf = pf_structured(&zeroed, 5).unwrap();

        let theta = |i, j, k| SymbolicCoefficient::from_symbol(SymbolId::theta(i, j, k));
        let mut expected = TriPoly::zero(5);
        expected.add_term(Monomial3::new(5, 0, 0), theta(5, 0, 0)).unwrap();
        expected.add_term(Monomial3::new(0, 5, 0), theta(0, 5, 0)).unwrap();
        expected.add_term(Monomial3::new(0, 0, 5), theta(0, 0, 5)).unwrap();
        expected
            .add_term(Monomial3::new(1, 3, 1), theta(0, 5, 0).negate())
            .unwrap();
        expected
            .add_term(Monomial3::new(2, 1, 2), theta(0, 5, 0).negate())
            .unwrap();
        assert_eq!(pf, expected);
    }

    #[test]
    fn json_round_trip() {
        let tpl = build_template(5).unwrap();
        let json = tpl.to_json().unwrap();
        let back = PfaffianTemplate::from_json(&json).unwrap();
        assert_eq!(tpl, back);
    }

    #[test]
    fn renders() {
        let tpl = build_template(5).unwrap();
        let text = tpl.render_text();
        assert!(text.contains("matrix: 10x10"));
        assert!(text.contains("(1,2): Theta[5,0,0]*x + b[1,2]*y + c[1,2]*z"));
        assert!(text.contains("(6,7): x"));

        let latex = tpl.render_latex();
        assert!(latex.contains("0_{4}"));
        assert!(latex.contains("\\Theta_{1}x+b_{1}y+c_{1}z"));
        // lower triangle is the negated mirror
        assert!(latex.contains("-\\Theta_{1}x-b_{1}y-c_{1}z"));
    }
}
