//! Expand the template Pfaffian symbolically and show its coefficients.
//!
//! The whole method rests on one structural fact: because of the fixed
//! staircase block, the Pfaffian of the template is *affine* in the unknown
//! entry coefficients — degree at most 1 in each, no products of unknowns.
//! That is what turns "find a matrix with this Pfaffian" into a single
//! exact linear solve.
//!
//! Run with: `cargo run --example expand_pfaffian`

use pfaffrep::{build_template, pf_structured};

fn main() -> pfaffrep::Result<()> {
    let degree = 5;
    let template = build_template(degree)?;

    // Expand along the structured rows; memoized, so this stays cheap
    // even at degree 25.
    let pf = pf_structured(&template.matrix, degree)?;

    println!(
        "Pf(template) at degree {degree}: {} monomials in x, y, z",
        pf.num_terms()
    );
    println!();

    // One line per monomial of f. Pure powers come out as bare Theta
    // symbols; every other coefficient is an integer combination of the
    // unknowns, possibly with a constant offset.
    for (mono, coef) in pf.terms().rev() {
        println!("  [{mono}]  {coef}");
    }
    println!();

    // The affineness claim, checked: no symbolic coefficient may have
    // monomials of symbol-degree 2 or more.
    let affine = pf
        .terms()
        .all(|(_, c)| c.terms().all(|(m, _)| m.degree() <= 1));
    println!("affine in the unknowns: {affine}");
    Ok(())
}
