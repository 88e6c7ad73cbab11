//! Print the symbolic template matrix for a small degree.
//!
//! The template is the starting point of everything else: a 2d x 2d
//! skew-symmetric matrix of linear forms whose entry coefficients are
//! unknowns, arranged so that its Pfaffian is affine in those unknowns.
//!
//! Run with: `cargo run --example inspect_template`

use pfaffrep::{build_template, counts};

fn main() -> pfaffrep::Result<()> {
    let degree = 5;
    let template = build_template(degree)?;

    // How big is the job at this degree?
    let c = counts(degree);
    println!("degree {degree}:");
    println!("  matrix size          {0} x {0}", c.matrix_size);
    println!("  unknown coefficients {}", c.unknowns);
    println!("  matching equations   {}", c.equations);
    println!("  form coefficients    {}", c.thetas);
    println!();

    // The matrix itself. Entries in the left block are generic linear
    // forms (a/b/c unknowns); three slots carry the distinguished Theta
    // symbols; the staircase in the right block is fixed integers; the
    // lower-right block is identically zero.
    println!("{}", template.render_text());

    // The same growth pattern, tabulated across a few degrees.
    println!("degree  size  unknowns  equations  coefficients");
    for d in 5..=10 {
        let c = counts(d);
        println!(
            "{:>6}  {:>4}  {:>8}  {:>9}  {:>12}",
            d, c.matrix_size, c.unknowns, c.equations, c.thetas
        );
    }
    Ok(())
}
