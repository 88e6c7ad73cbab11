//! One form, many matrices: walking the family of representations.
//!
//! The linear system is underdetermined, and its integer nullspace is part
//! of the solution. Any choice of free parameter values yields a different
//! matrix with the *same* Pfaffian. Solving happens once; instantiating a
//! family member is just integer matrix-vector arithmetic.
//!
//! Run with: `cargo run --example free_parameters`

use pfaffrep::{parse_tripoly, solve_degree, verify_representation, BuildOptions, Ring};
use rand::{Rng, SeedableRng};

fn main() -> pfaffrep::Result<()> {
    let ring = Ring::Integers;
    let f = parse_tripoly("2*x^5 - 3*x^2*y^2*z + y^5 + 7*z^5", 5, &ring)?;

    // Solve the degree once (no cache involved here), reuse for every
    // instantiation below.
    let solved = solve_degree(5, &BuildOptions::in_memory())?;
    let free = solved.solution.free_count();
    println!("degree 5 family: {free} free integer parameters");
    println!();

    // The canonical member: all free parameters zero.
    let canonical = solved.build(&ring, &f, None, true)?;
    println!("canonical member verifies: {:?}", verify_representation(&canonical, &f)?);

    // Three random members of the family.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for trial in 1..=3 {
        let values: Vec<_> = (0..free)
            .map(|_| ring.from_i64(rng.gen_range(-9..=9)))
            .collect();
        let member = solved.build(&ring, &f, Some(&values), true)?;
        let differs = member.matrix != canonical.matrix;
        println!(
            "random member {trial}: verifies {:?}, matrix differs from canonical: {differs}",
            verify_representation(&member, &f)?
        );
    }
    println!();

    // Two entries side by side, to see the family move.
    for (row, col) in [(1, 3), (2, 5)] {
        let a = canonical.matrix.entry(row, col).map(|e| e.to_string());
        println!(
            "entry ({row},{col}): canonical = {}",
            a.unwrap_or_else(|| "0".into())
        );
    }
    Ok(())
}
