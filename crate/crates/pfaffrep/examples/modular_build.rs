//! Representations over residue rings, including composite moduli.
//!
//! Nothing in the pipeline divides, so it works over any Z/n — even n = 6,
//! where zero divisors rule out most classical linear algebra. The integer
//! solution also *reduces* correctly: building over Z and reducing mod n
//! gives the same matrix as building over Z/n directly.
//!
//! Run with: `cargo run --example modular_build`

use pfaffrep::{build_representation, parse_tripoly, verify_representation, Ring};

fn main() -> pfaffrep::Result<()> {
    // A quintic with scrambled coefficients, over Z/6.
    let ring6 = Ring::modulus(6u32)?;
    let f6 = parse_tripoly("x^5 + 4*x^2*y*z^2 + 5*y^5 + 3*x*y^3*z + z^5", 5, &ring6)?;
    let rep6 = build_representation(&ring6, &f6, None)?;
    println!("over Z/6: {:?}", verify_representation(&rep6, &f6)?);
    println!("{}", rep6.matrix);

    // Same form over the prime field Z/97.
    let ring97 = Ring::modulus(97u32)?;
    let f97 = parse_tripoly("x^5 + 4*x^2*y*z^2 + 5*y^5 + 3*x*y^3*z + z^5", 5, &ring97)?;
    let rep97 = build_representation(&ring97, &f97, None)?;
    println!("over Z/97: {:?}", verify_representation(&rep97, &f97)?);

    // Reduction naturality: build over Z, reduce entries mod 6, compare
    // with the direct Z/6 build.
    let fz = parse_tripoly("x^5 + 4*x^2*y*z^2 + 5*y^5 + 3*x*y^3*z + z^5", 5, &Ring::Integers)?;
    let repz = build_representation(&Ring::Integers, &fz, None)?;
    let reduced = repz
        .matrix
        .map_coeffs(&mut |v: &pfaffrep::RingValue| v.map_into(&ring6))?;
    println!(
        "Z-build reduced mod 6 equals the direct Z/6 build: {}",
        reduced == rep6.matrix
    );
    Ok(())
}
