//! Exact linear Pfaffian representations of homogeneous ternary forms.
//!
//! Given a homogeneous form f(x, y, z) of degree d >= 5 over Z, Q, or Z/n,
//! this crate constructs a 2d x 2d skew-symmetric matrix M of linear forms
//! with Pf(M) = f. The construction is uniform: a fixed template matrix
//! whose Pfaffian is *affine* in the unknown entry coefficients, so matching
//! coefficients against f is one exact integer linear solve — no Groebner
//! bases, no floating point, no divisions.
//!
//! The pipeline, end to end:
//!
//! 1. [`template::build_template`] — the symbolic 2d x 2d skew template.
//! 2. [`pfaffian::pf_structured`] — expand its Pfaffian along the structured
//!    rows; every coefficient comes out affine in the unknowns.
//! 3. [`linsolve::extract_system`] — read off the integer linear system.
//! 4. [`linsolve::solve_parametric`] — Hermite normal form over Z gives a
//!    particular solution and a nullspace basis (the free parameters).
//! 5. [`represent::build_representation`] — specialize to a concrete f over
//!    a chosen ring and instantiate the matrix.
//! 6. [`represent::verify_representation`] — recompute Pf(M) over the ring
//!    through an independent code path and compare against f.
//!
//! # Examples
//!
//! Each major capability has a runnable example; start there:
//!
//! - `cargo run --example inspect_template` — the template matrix, printed.
//! - `cargo run --example expand_pfaffian` — symbolic Pfaffian coefficients.
//! - `cargo run --example solve_system` — the linear system and its rank,
//!   free parameters, and solvability certificate.
//! - `cargo run --example build_fermat_quintic` — a representation of
//!   x^5 + y^5 + z^5 over Z, verified.
//! - `cargo run --example modular_build` — the same machinery over Z/6,
//!   a ring with zero divisors.
//! - `cargo run --example free_parameters` — the solution family: random
//!   free values still verify.
//! - `cargo run --example pfaffian_identities` — randomized cross-checks of
//!   the three Pfaffian evaluators against determinants and matching sums.
//! - `cargo run --example degree_sweep` — the whole pipeline across a
//!   degree range with per-degree statistics.
//!
//! The `pfaffrep` binary exposes the same capabilities as subcommands
//! (`template`, `solve`, `build`, `verify`, `sweep`) for scripting.

pub mod cli;
pub mod coeff;
pub mod error;
pub mod intmat;
pub mod linsolve;
pub mod pfaffian;
pub mod represent;
pub mod ring;
pub mod sympoly;
pub mod template;

pub use coeff::Coefficient;
pub use error::{Error, Result};
pub use intmat::IntMat;
pub use linsolve::{extract_system, hnf, snf, solve_parametric, verify_solution, Certificate, Hnf, LinearSystem, ParametricSolution, SolveOutcome};
pub use pfaffian::{det, pf_laplace, pf_matchings, pf_structured, LinearForm, SkewMatrix};
pub use represent::{
    build_representation, build_representation_with, cache_dir_from_env, cache_file_path,
    cache_load, cache_load_against, cache_store, random_form, solve_degree, sweep,
    verify_representation, BuildOptions, PfaffianCheck, Representation, SolvedDegree,
    SweepOptions, SweepReport, SweepRow, VerifyOutcome, CACHE_ENV_VAR,
};
pub use ring::{Ring, RingValue};
pub use sympoly::{parse_tripoly, Axis, Monomial3, SymbolId, SymbolicCoefficient, TriPoly};
pub use template::{build_template, counts, Counts, PfaffianTemplate};
