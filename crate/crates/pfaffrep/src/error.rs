//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`enum@Error`]. The variants are
//! deliberately fine-grained so that callers (in particular the command-line
//! front end) can map failures onto distinct exit codes: user mistakes,
//! negative mathematical certificates, and internal invariant violations are
//! different things and must not be conflated.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Arithmetic was attempted between elements of different rings
    /// (e.g. an integer and a residue, or residues with different moduli).
    #[error("mismatched rings: {left} vs {right}")]
    MismatchedRing { left: String, right: String },

    /// Two homogeneous polynomials of different degrees were combined, or a
    /// query used a monomial of the wrong total degree.
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },

    /// Text input could not be parsed; `pos` is a byte offset into the input.
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    /// A parsed term has the wrong total degree for the declared form.
    #[error("non-homogeneous input: term `{term}` has degree {got}, expected {expected}")]
    NonHomogeneous {
        term: String,
        got: usize,
        expected: usize,
    },

    /// A row/column index fell outside the matrix, or violated `row < col`.
    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },

    /// Skew matrices in this crate always have even size.
    #[error("matrix size {0} is odd; skew matrices here have even size")]
    OddSize(usize),

    /// A combinatorial fallback (matching sum, cofactor determinant) was
    /// asked to run beyond its configured size guard.
    #[error("matrix size {size} exceeds the size guard {guard} for {what}")]
    SizeGuardExceeded {
        size: usize,
        guard: usize,
        what: &'static str,
    },

    /// The input matrix does not have the block structure the structured
    /// Pfaffian expansion relies on.
    #[error("structure violation: {0}")]
    StructureViolation(String),

    /// The construction is only defined for degrees 5 and up.
    #[error("degree {0} is unsupported; the construction needs degree >= 5")]
    UnsupportedDegree(usize),

    /// The requested degree is above the verified cap and the caller did not
    /// explicitly opt in to unverified territory.
    #[error("degree {degree} exceeds the verified cap {cap}; pass the explicit override to proceed")]
    DegreeCapExceeded { degree: usize, cap: usize },

    /// A Pfaffian coefficient that must be affine in the unknowns is not.
    #[error("linearity violation at monomial {monomial}: {detail}")]
    LinearityViolation { monomial: String, detail: String },

    /// A pure-power coefficient of the template Pfaffian came out different
    /// from the single expected symbol.
    #[error("pure-power violation at monomial {monomial}: {detail}")]
    PurePowerViolation { monomial: String, detail: String },

    /// The linear system has no integer solution for some right-hand column.
    /// `column` names the offending coefficient symbol, `witness` the exact
    /// divisibility or consistency failure.
    #[error("no integer solution for column {column}: {witness}")]
    NotSolvableOverZ { column: String, witness: String },

    /// A built representation failed its own Pfaffian check, or an on-disk
    /// solution failed re-verification. Always a bug or corruption, never a
    /// user mistake.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    /// A cache file exists but its checksum or contents do not verify.
    /// Callers recompute instead of trusting it.
    #[error("corrupt cache file {path}: {reason}")]
    CorruptCache { path: String, reason: String },

    /// Matrix dimensions do not line up for the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
