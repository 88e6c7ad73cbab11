//! Randomized cross-checks of the Pfaffian machinery against itself.
//!
//! Three classical identities, tested on random skew-symmetric matrices of
//! linear forms:
//!
//!   1. Pf(M)^2 = det(M)                       (squares to the determinant)
//!   2. row expansion = perfect-matching sum   (two independent evaluators)
//!   3. Pf(X M X^T) = det(X) * Pf(M)           (congruence covariance)
//!
//! The crate's own verification path leans on exactly these facts, so they
//! double as a self-test of the foundations.
//!
//! Run with: `cargo run --example pfaffian_identities`

use num_bigint::BigInt;
use pfaffrep::pfaffian::{congruence, random_skew_matrix};
use pfaffrep::{det, pf_laplace, pf_matchings, IntMat, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> pfaffrep::Result<()> {
    let ring = Ring::Integers;
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    // Identity 1: Pf(M)^2 = det(M).
    let mut checked = 0;
    for size in [2usize, 4, 6, 8] {
        for _ in 0..20 {
            let m = random_skew_matrix(size, &ring, &mut rng)?;
            let pf = pf_laplace(&m)?;
            assert_eq!(pf.mul(&pf)?, det(&m)?);
            checked += 1;
        }
    }
    println!("Pf(M)^2 = det(M): {checked} random matrices, all equal");

    // Identity 2: the row-expansion evaluator agrees with the sign-summed
    // perfect matchings of the complete graph.
    checked = 0;
    for size in [2usize, 4, 6, 8] {
        for _ in 0..20 {
            let m = random_skew_matrix(size, &ring, &mut rng)?;
            assert_eq!(pf_laplace(&m)?, pf_matchings(&m)?);
            checked += 1;
        }
    }
    println!("row expansion = matching sum: {checked} random matrices, all equal");

    // Identity 3: congruence by any integer matrix X scales the Pfaffian
    // by det(X) — the reason Pfaffian representations are well-defined up
    // to coordinate change.
    checked = 0;
    for _ in 0..40 {
        let size = 6;
        let m = random_skew_matrix(size, &ring, &mut rng)?;
        let mut x = IntMat::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                x[(i, j)] = BigInt::from(rng.gen_range(-3i64..=3));
            }
        }
        let lhs = pf_laplace(&congruence(&m, &x)?)?;
        let rhs = pf_laplace(&m)?.scale_int(&x.determinant()?);
        assert_eq!(lhs, rhs);
        checked += 1;
    }
    println!("Pf(X M X^T) = det(X) Pf(M): {checked} random congruences, all equal");
    Ok(())
}
