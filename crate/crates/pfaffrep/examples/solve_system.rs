//! Extract the coefficient-matching system and solve it over the integers.
//!
//! Matching Pf(template) against a generic form gives an integer linear
//! system A*u = T*theta, solved once per degree by Hermite normal form.
//! The solution is parametric: it works for *every* form of that degree at
//! once, with a nullspace of free parameters describing the whole family
//! of representations.
//!
//! Run with: `cargo run --example solve_system`

use pfaffrep::{build_template, extract_system, solve_parametric, SolveOutcome};

fn main() -> pfaffrep::Result<()> {
    let degree = 5;
    let template = build_template(degree)?;
    let system = extract_system(&template)?;

    println!(
        "degree {degree}: {} equations, {} unknowns, {} distinguished coefficients",
        system.equation_count(),
        system.unknown_count(),
        system.theta_count()
    );
    println!();

    // A few of the equations, in flat naming (a13 = x-coefficient of the
    // entry at row 1, column 3; Theta<k> = k-th coefficient of the form).
    println!("first equations:");
    for row in 0..4 {
        println!("  [{}]  {}", system.monomials[row], system.equation_text(row));
    }
    println!("  ...");
    println!();

    match solve_parametric(&system)? {
        SolveOutcome::Solved(solution) => {
            let cert = &solution.certificate;
            println!("solved over the integers:");
            println!("  rank            {}", cert.rank);
            println!("  free parameters {}", cert.free_count);
            println!(
                "  invariant factors all 1: {}",
                cert.invariant_factors.iter().all(|f| f == "1")
            );
            // particular: one integer column per distinguished coefficient;
            // nullspace: a basis of the solution family.
            println!(
                "  particular matrix {} x {}, nullspace {} x {}",
                solution.particular.rows(),
                solution.particular.cols(),
                solution.nullspace.rows(),
                solution.nullspace.cols()
            );
        }
        SolveOutcome::Unsolvable(cert) => {
            // Never reached for this template; kept honest anyway.
            println!(
                "no integer solution: {}",
                cert.failing_column.as_deref().unwrap_or("unknown column")
            );
        }
    }
    Ok(())
}
