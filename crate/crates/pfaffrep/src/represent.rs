//! End-to-end construction of concrete Pfaffian representations.
//!
//! The pipeline per degree is: build the symbolic template, extract and
//! solve the integer linear system once, then instantiate the matrix for
//! any concrete form over any supported ring by evaluating the parametric
//! solution. Every built matrix can be (and by default is) re-checked by an
//! independent Pfaffian recomputation. Per-degree solutions are
//! degree-intrinsic and comparatively expensive, so they can be persisted
//! in a checksummed on-disk cache; [`sweep`] runs the whole construction
//! across a degree range and reports per-degree outcomes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linsolve::{
    extract_system, solve_parametric, verify_solution, Certificate, LinearSystem,
    ParametricSolution, SolveOutcome,
};
use crate::pfaffian::{pf_laplace, SkewMatrix};
use crate::ring::{Ring, RingValue};
use crate::sympoly::{Monomial3, SymbolId, TriPoly};
use crate::template::{
    build_template_capped, counts, Counts, PfaffianTemplate, DEFAULT_DEGREE_CAP, FORMAT_VERSION,
};

/// Environment variable naming the solution cache directory.
pub const CACHE_ENV_VAR: &str = "PFAFFREP_CACHE";

/// The cache directory named by [`CACHE_ENV_VAR`], if set and nonempty.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV_VAR)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Knobs for [`build_representation_with`] and [`solve_degree`].
#[derive(Debug, Clone)]
pub struct BuildOptions {
    /// Reject degrees above this cap (default [`DEFAULT_DEGREE_CAP`]).
    pub degree_cap: usize,
    /// Re-check `Pf(matrix) = f` before returning (default `true`).
    pub verify: bool,
    /// Solution cache directory; `None` disables persistence.
    pub cache_dir: Option<PathBuf>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
            verify: true,
            cache_dir: cache_dir_from_env(),
        }
    }
}

impl BuildOptions {
    /// Options with no caching and verification on; used widely in tests.
    pub fn in_memory() -> Self {
        BuildOptions {
            degree_cap: DEFAULT_DEGREE_CAP,
            verify: true,
            cache_dir: None,
        }
    }
}

/// One degree's ready-to-instantiate pipeline: the symbolic template, the
/// extracted integer system, and its solved parametric solution.
#[derive(Debug, Clone)]
pub struct SolvedDegree {
    pub template: PfaffianTemplate,
    pub system: LinearSystem,
    pub solution: ParametricSolution,
    /// Cache key of the solution (degree plus content digest). Identical
    /// whether the solution was computed in-process or loaded from disk.
    pub provenance: String,
}

/// Build the template for `degree`, extract the linear system, and solve it
/// over the integers — loading a previously cached solution when one is
/// present and intact, persisting a freshly computed one when a cache
/// directory is configured.
pub fn solve_degree(degree: usize, options: &BuildOptions) -> Result<SolvedDegree> {
    let template = build_template_capped(degree, options.degree_cap)?;
    let system = extract_system(&template)?;
    let (solution, checksum) = solve_system_cached(&system, options.cache_dir.as_deref())?;
    Ok(SolvedDegree {
        provenance: provenance_string(degree, &checksum),
        template,
        system,
        solution,
    })
}

/// Solve `system`, consulting and maintaining the cache. Returns the
/// solution together with its content digest.
fn solve_system_cached(
    system: &LinearSystem,
    cache_dir: Option<&Path>,
) -> Result<(ParametricSolution, String)> {
    if let Some(dir) = cache_dir {
        // A corrupt or unreadable cache entry must never fail the
        // computation; fall through and recompute (which also repairs it).
        if let Ok(Some(hit)) = cache_load_verified(dir, system.degree, system) {
            return Ok(hit);
        }
    }
    let solution = match solve_parametric(system)? {
        SolveOutcome::Solved(solution) => solution,
        SolveOutcome::Unsolvable(certificate) => return Err(unsolvable_error(&certificate)),
    };
    let (payload, checksum) = solution_digest(&solution)?;
    if let Some(dir) = cache_dir {
        // Best effort: an unwritable cache directory must not fail a
        // correct computation either.
        let _ = cache_store_payload(dir, system.degree, &payload, &checksum);
    }
    Ok((solution, checksum))
}

fn unsolvable_error(certificate: &Certificate) -> Error {
    let detail = certificate
        .failing_column
        .clone()
        .unwrap_or_else(|| "unspecified column".into());
    let (column, witness) = match detail.split_once(": ") {
        Some((column, witness)) => (column.to_string(), witness.to_string()),
        None => (
            detail,
            format!(
                "rank {}, {} free parameters",
                certificate.rank, certificate.free_count
            ),
        ),
    };
    Error::NotSolvableOverZ { column, witness }
}

impl SolvedDegree {
    /// Instantiate the matrix for a concrete form.
    ///
    /// The distinguished symbols take `f`'s coefficients, the unknowns take
    /// `particular * theta + nullspace * t` evaluated in `ring`, and every
    /// entry of the template is then a concrete linear form over `ring`.
    /// `free_values` of `None` means all free parameters zero. The result is
    /// not yet verified (`pfaffian_check` is `skipped`); callers wanting the
    /// re-check use [`build_representation_with`] or call
    /// [`verify_representation`] themselves.
    pub fn instantiate(
        &self,
        ring: &Ring,
        f: &TriPoly<RingValue>,
        free_values: Option<&[RingValue]>,
    ) -> Result<Representation> {
        let degree = self.template.degree;
        if f.degree() != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: f.degree(),
            });
        }
        for (_, value) in f.terms() {
            if &value.ring() != ring {
                return Err(Error::MismatchedRing {
                    left: ring.to_string(),
                    right: value.ring().to_string(),
                });
            }
        }
        let free_count = self.solution.free_count();
        let free_values: Vec<RingValue> = match free_values {
            None => vec![ring.zero(); free_count],
            Some(values) => {
                if values.len() != free_count {
                    return Err(Error::DimensionMismatch(format!(
                        "expected {free_count} free parameter values, got {}",
                        values.len()
                    )));
                }
                for value in values {
                    if &value.ring() != ring {
                        return Err(Error::MismatchedRing {
                            left: ring.to_string(),
                            right: value.ring().to_string(),
                        });
                    }
                }
                values.to_vec()
            }
        };

        // f's coefficients in the system's distinguished-column order
        let mut theta_values = Vec::with_capacity(self.system.theta_symbols.len());
        for symbol in &self.system.theta_symbols {
            let SymbolId::Theta { i, j, k } = symbol else {
                return Err(Error::VerificationFailed(format!(
                    "non-distinguished symbol {symbol} among the distinguished columns"
                )));
            };
            let mono = Monomial3::new(*i, *j, *k);
            let value = f
                .coefficient(&mono)?
                .cloned()
                .unwrap_or_else(|| ring.zero());
            theta_values.push(value);
        }

        // u = particular * theta + nullspace * t, evaluated in the ring
        let particular = &self.solution.particular;
        let nullspace = &self.solution.nullspace;
        let mut assignment: BTreeMap<&SymbolId, RingValue> = BTreeMap::new();
        for (row, symbol) in self.system.unknown_symbols.iter().enumerate() {
            let mut acc = ring.zero();
            for (j, theta) in theta_values.iter().enumerate() {
                let k = &particular[(row, j)];
                if !k.is_zero() {
                    acc = acc.add(&theta.scale_integer(k))?;
                }
            }
            for (r, t) in free_values.iter().enumerate() {
                let k = &nullspace[(row, r)];
                if !k.is_zero() {
                    acc = acc.add(&t.scale_integer(k))?;
                }
            }
            assignment.insert(symbol, acc);
        }
        for (symbol, value) in self.system.theta_symbols.iter().zip(&theta_values) {
            assignment.insert(symbol, value.clone());
        }

        let matrix = self.template.matrix.map_coeffs(|coefficient| {
            coefficient.eval(ring, &mut |symbol| {
                assignment.get(symbol).cloned().ok_or_else(|| {
                    Error::VerificationFailed(format!("symbol {symbol} has no assigned value"))
                })
            })
        })?;

        Ok(Representation {
            format_version: FORMAT_VERSION,
            degree,
            ring: ring.clone(),
            matrix,
            free_values,
            provenance: self.provenance.clone(),
            pfaffian_check: PfaffianCheck::Skipped,
        })
    }

    /// [`instantiate`](Self::instantiate), then — when `verify` is on —
    /// re-check `Pf(matrix) = f` and mark the result accordingly. A
    /// mismatch after a positive solvability certificate is an internal
    /// bug and is reported with the full matrix.
    pub fn build(
        &self,
        ring: &Ring,
        f: &TriPoly<RingValue>,
        free_values: Option<&[RingValue]>,
        verify: bool,
    ) -> Result<Representation> {
        let mut rep = self.instantiate(ring, f, free_values)?;
        if verify {
            match verify_representation(&rep, f)? {
                VerifyOutcome::Verified => rep.pfaffian_check = PfaffianCheck::Passed,
                VerifyOutcome::Mismatch {
                    monomial,
                    expected,
                    got,
                } => {
                    return Err(Error::VerificationFailed(format!(
                        "built matrix disagrees with the target at {monomial}: \
                         expected {expected}, got {got}; full matrix:\n{}",
                        rep.matrix
                    )));
                }
            }
        }
        Ok(rep)
    }
}

/// Whether a representation was re-checked against its target form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PfaffianCheck {
    Passed,
    Skipped,
}

/// A concrete skew-symmetric matrix of linear forms over a ring whose
/// Pfaffian equals a target form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub format_version: u32,
    pub degree: usize,
    pub ring: Ring,
    pub matrix: SkewMatrix<RingValue>,
    /// Values assigned to the solution's free parameters, in column order.
    pub free_values: Vec<RingValue>,
    /// Cache key of the parametric solution the matrix came from.
    pub provenance: String,
    pub pfaffian_check: PfaffianCheck,
}

impl Representation {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Representation> {
        let rep: Representation = serde_json::from_str(text)?;
        if rep.matrix.size() != 2 * rep.degree {
            return Err(Error::DimensionMismatch(format!(
                "matrix size {} does not fit degree {}",
                rep.matrix.size(),
                rep.degree
            )));
        }
        for (i, j, form) in rep.matrix.iter_upper() {
            for value in [&form.a, &form.b, &form.c] {
                if value.ring() != rep.ring {
                    return Err(Error::MismatchedRing {
                        left: rep.ring.to_string(),
                        right: format!("{} in entry ({i},{j})", value.ring()),
                    });
                }
            }
        }
        for value in &rep.free_values {
            if value.ring() != rep.ring {
                return Err(Error::MismatchedRing {
                    left: rep.ring.to_string(),
                    right: format!("{} among the free values", value.ring()),
                });
            }
        }
        Ok(rep)
    }
}

/// Build a representation of `f` over `ring` with default options
/// (verification on, cache directory from the environment).
pub fn build_representation(
    ring: &Ring,
    f: &TriPoly<RingValue>,
    free_values: Option<&[RingValue]>,
) -> Result<Representation> {
    build_representation_with(ring, f, free_values, &BuildOptions::default())
}

/// Build a representation of `f` over `ring`: solve the degree (or load it
/// from cache), instantiate, and — unless `options.verify` is off —
/// re-check `Pf(matrix) = f` before returning.
pub fn build_representation_with(
    ring: &Ring,
    f: &TriPoly<RingValue>,
    free_values: Option<&[RingValue]>,
    options: &BuildOptions,
) -> Result<Representation> {
    let solved = solve_degree(f.degree(), options)?;
    solved.build(ring, f, free_values, options.verify)
}

/// Outcome of re-checking a representation against a target form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerifyOutcome {
    Verified,
    /// The first disagreeing monomial, with both coefficients rendered.
    Mismatch {
        monomial: Monomial3,
        expected: String,
        got: String,
    },
}

impl VerifyOutcome {
    pub fn is_verified(&self) -> bool {
        matches!(self, VerifyOutcome::Verified)
    }
}

/// Recompute the Pfaffian of `rep.matrix` over its ring and compare against
/// `f` coefficient by coefficient.
///
/// The recomputation shares no code with the symbolic extraction pipeline:
/// it runs the dense Laplace recursion directly on the concrete matrix, so
/// it cross-checks the template, the solver, and the instantiation at once.
/// Monomials are scanned in descending graded-lex order and the first
/// disagreement is returned as the witness.
pub fn verify_representation(
    rep: &Representation,
    f: &TriPoly<RingValue>,
) -> Result<VerifyOutcome> {
    if f.degree() != rep.degree {
        return Err(Error::DegreeMismatch {
            expected: rep.degree,
            got: f.degree(),
        });
    }
    for (_, value) in f.terms() {
        if value.ring() != rep.ring {
            return Err(Error::MismatchedRing {
                left: rep.ring.to_string(),
                right: value.ring().to_string(),
            });
        }
    }
    let pfaffian = pf_laplace(&rep.matrix)?;
    for mono in Monomial3::all_of_degree(rep.degree) {
        let expected = f
            .coefficient(&mono)?
            .cloned()
            .unwrap_or_else(|| rep.ring.zero());
        let got = pfaffian
            .coefficient(&mono)?
            .cloned()
            .unwrap_or_else(|| rep.ring.zero());
        if expected != got {
            return Ok(VerifyOutcome::Mismatch {
                monomial: mono,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    }
    Ok(VerifyOutcome::Verified)
}

/// A random homogeneous form of the given degree: every coefficient is an
/// independent small sample from the ring.
pub fn random_form(
    ring: &Ring,
    degree: usize,
    rng: &mut impl Rng,
) -> Result<TriPoly<RingValue>> {
    let mut f = TriPoly::zero(degree);
    for mono in Monomial3::all_of_degree(degree) {
        let value = ring.sample_small(rng);
        if !RingValue::is_zero(&value) {
            f.add_term(mono, value)?;
        }
    }
    Ok(f)
}

/// Knobs for [`sweep`].
#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Random forms built and verified per degree and ring.
    pub samples_per_degree: usize,
    /// Rings the samples are drawn from.
    pub rings: Vec<Ring>,
    /// Master seed; every (degree, ring, sample) triple derives its own
    /// deterministic stream from it.
    pub seed: u64,
    pub degree_cap: usize,
    pub cache_dir: Option<PathBuf>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            samples_per_degree: 5,
            rings: vec![Ring::Integers],
            seed: 0,
            degree_cap: DEFAULT_DEGREE_CAP,
            cache_dir: cache_dir_from_env(),
        }
    }
}

/// One degree's outcomes in a sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub degree: usize,
    pub counts: Counts,
    pub rank: usize,
    pub free_count: usize,
    pub solvable_over_integers: bool,
    /// Every Pfaffian coefficient was affine in the unknowns.
    pub linearity_ok: bool,
    /// The three pure-power coefficients were exactly their distinguished
    /// symbols.
    pub pure_powers_ok: bool,
    pub verify_samples_passed: usize,
    pub verify_samples_total: usize,
    /// Witnesses for anything that failed on this degree.
    pub failures: Vec<String>,
    /// Wall-clock time for the degree; informational, not deterministic.
    pub wall_time_ms: u64,
}

impl SweepRow {
    pub fn passed(&self) -> bool {
        self.solvable_over_integers
            && self.linearity_ok
            && self.pure_powers_ok
            && self.verify_samples_passed == self.verify_samples_total
            && self.failures.is_empty()
    }
}

/// Aggregated sweep outcomes across a degree range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub degree_from: usize,
    pub degree_to: usize,
    pub samples_per_degree: usize,
    pub rings: Vec<Ring>,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(SweepRow::passed)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Human-readable table, one row per degree, witnesses indented below
    /// their row. Deterministic for a fixed seed: wall-clock times are kept
    /// out of it and reported by [`render_timings`](Self::render_timings).
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "sweep degrees {}..={}, {} sample(s) per degree over [{}], seed {}\n",
            self.degree_from,
            self.degree_to,
            self.samples_per_degree,
            self.rings
                .iter()
                .map(Ring::to_string)
                .collect::<Vec<_>>()
                .join(", "),
            self.seed,
        ));
        out.push_str(
            "degree  size  unknowns  equations  rank  free  solvable  linear  pure  verified\n",
        );
        for row in &self.rows {
            let yes_no = |b: bool| if b { "yes" } else { "NO" };
            out.push_str(&format!(
                "{:>6}  {:>4}  {:>8}  {:>9}  {:>4}  {:>4}  {:>8}  {:>6}  {:>4}  {:>8}\n",
                row.degree,
                row.counts.matrix_size,
                row.counts.unknowns,
                row.counts.equations,
                row.rank,
                row.free_count,
                yes_no(row.solvable_over_integers),
                yes_no(row.linearity_ok),
                yes_no(row.pure_powers_ok),
                format!("{}/{}", row.verify_samples_passed, row.verify_samples_total),
            ));
            for witness in &row.failures {
                out.push_str(&format!("        ! {witness}\n"));
            }
        }
        out
    }

    /// Per-degree wall-clock times, one line each. Separate from
    /// [`render_table`](Self::render_table) so deterministic output can
    /// stay free of timings.
    pub fn render_timings(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!("degree {}: {} ms\n", row.degree, row.wall_time_ms));
        }
        out
    }
}

/// Run the full construction for every degree in `degree_from..=degree_to`
/// and report per-degree outcomes.
///
/// Per degree: build the template, extract (which enforces linearity and
/// the pure-power identities), solve over the integers, then build and
/// verify `samples_per_degree` random forms per ring — odd-numbered samples
/// with random free-parameter values, sample 0 with all zeros. Failures are
/// recorded as witnesses in the row and never abort the remaining degrees.
/// Degrees, and samples within a degree, run in parallel.
pub fn sweep(degree_from: usize, degree_to: usize, options: &SweepOptions) -> Result<SweepReport> {
    if degree_from < 5 {
        return Err(Error::UnsupportedDegree(degree_from));
    }
    if degree_to > options.degree_cap {
        return Err(Error::DegreeCapExceeded {
            degree: degree_to,
            cap: options.degree_cap,
        });
    }
    if degree_from > degree_to {
        return Err(Error::DimensionMismatch(format!(
            "empty degree range {degree_from}..={degree_to}"
        )));
    }
    let degrees: Vec<usize> = (degree_from..=degree_to).collect();
    let rows: Vec<SweepRow> = degrees
        .par_iter()
        .map(|&degree| sweep_degree(degree, options))
        .collect();
    Ok(SweepReport {
        degree_from,
        degree_to,
        samples_per_degree: options.samples_per_degree,
        rings: options.rings.clone(),
        seed: options.seed,
        rows,
    })
}

fn sweep_degree(degree: usize, options: &SweepOptions) -> SweepRow {
    let start = Instant::now();
    let mut row = SweepRow {
        degree,
        counts: counts(degree),
        rank: 0,
        free_count: 0,
        solvable_over_integers: false,
        linearity_ok: false,
        pure_powers_ok: false,
        verify_samples_passed: 0,
        verify_samples_total: options.rings.len() * options.samples_per_degree,
        failures: Vec::new(),
        wall_time_ms: 0,
    };

    let solved = (|| -> Result<SolvedDegree> {
        let template = build_template_capped(degree, options.degree_cap)?;
        let system = extract_system(&template)?;
        row.linearity_ok = true;
        row.pure_powers_ok = true;
        let (solution, checksum) = solve_system_cached(&system, options.cache_dir.as_deref())?;
        Ok(SolvedDegree {
            provenance: provenance_string(degree, &checksum),
            template,
            system,
            solution,
        })
    })();
    let solved = match solved {
        Ok(solved) => solved,
        Err(e) => {
            row.failures.push(e.to_string());
            row.wall_time_ms = start.elapsed().as_millis() as u64;
            return row;
        }
    };
    row.rank = solved.solution.rank();
    row.free_count = solved.solution.free_count();
    row.solvable_over_integers = solved.solution.certificate.solvable_over_integers;

    let grid: Vec<(usize, usize)> = (0..options.rings.len())
        .flat_map(|ring_index| {
            (0..options.samples_per_degree).map(move |sample| (ring_index, sample))
        })
        .collect();
    let outcomes: Vec<std::result::Result<(), String>> = grid
        .par_iter()
        .map(|&(ring_index, sample)| {
            let ring = &options.rings[ring_index];
            let label = format!("degree {degree}, ring {ring}, sample {sample}");
            let mut rng =
                ChaCha8Rng::seed_from_u64(sample_seed(options.seed, degree, ring_index, sample));
            let f = random_form(ring, degree, &mut rng).map_err(|e| format!("{label}: {e}"))?;
            let free_values: Option<Vec<RingValue>> = if sample % 2 == 0 {
                None
            } else {
                Some(
                    (0..solved.solution.free_count())
                        .map(|_| ring.sample_small(&mut rng))
                        .collect(),
                )
            };
            let rep = solved
                .instantiate(ring, &f, free_values.as_deref())
                .map_err(|e| format!("{label}: {e}"))?;
            match verify_representation(&rep, &f).map_err(|e| format!("{label}: {e}"))? {
                VerifyOutcome::Verified => Ok(()),
                VerifyOutcome::Mismatch {
                    monomial,
                    expected,
                    got,
                } => Err(format!(
                    "{label}: Pfaffian mismatch at {monomial}: expected {expected}, got {got}"
                )),
            }
        })
        .collect();
    for outcome in outcomes {
        match outcome {
            Ok(()) => row.verify_samples_passed += 1,
            Err(witness) => row.failures.push(witness),
        }
    }
    row.wall_time_ms = start.elapsed().as_millis() as u64;
    row
}

/// Derive a per-sample seed from the master seed. SplitMix64 finalizer over
/// a packed stream id, so distinct (degree, ring, sample) triples get
/// decorrelated streams for any master seed.
fn sample_seed(master: u64, degree: usize, ring_index: usize, sample: usize) -> u64 {
    let mut x = master
        ^ ((degree as u64) << 40)
        ^ ((ring_index as u64) << 20)
        ^ (sample as u64).wrapping_add(1);
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

// ---------------------------------------------------------------------------
// solution cache

/// On-disk shape of a cached solution: the solution's JSON text wrapped
/// with a version tag and its SHA-256, so loads can detect any corruption
/// before trusting the contents.
#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    /// Hex SHA-256 of `payload`.
    checksum: String,
    /// JSON text of the [`ParametricSolution`].
    payload: String,
}

/// The cache file for one degree inside `dir`.
pub fn cache_file_path(dir: &Path, degree: usize) -> PathBuf {
    dir.join(format!("solution_d{degree:02}.json"))
}

fn hex_sha256(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Canonical payload text and digest of a solution.
fn solution_digest(solution: &ParametricSolution) -> Result<(String, String)> {
    let payload = serde_json::to_string(solution)?;
    let checksum = hex_sha256(payload.as_bytes());
    Ok((payload, checksum))
}

fn provenance_string(degree: usize, checksum: &str) -> String {
    format!("solution_d{degree:02}#{}", &checksum[..12.min(checksum.len())])
}

/// Persist a solution into `dir` (created if missing). The write is atomic:
/// a temporary file in the same directory is renamed over the target.
pub fn cache_store(dir: &Path, solution: &ParametricSolution) -> Result<PathBuf> {
    let (payload, checksum) = solution_digest(solution)?;
    cache_store_payload(dir, solution.degree, &payload, &checksum)
}

fn cache_store_payload(
    dir: &Path,
    degree: usize,
    payload: &str,
    checksum: &str,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_file_path(dir, degree);
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        checksum: checksum.to_owned(),
        payload: payload.to_owned(),
    };
    write_atomic(&path, &serde_json::to_vec(&file)?)?;
    Ok(path)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path).inspect_err(|_e| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Load the cached solution for `degree` from `dir`, if present.
///
/// `Ok(None)` means no cache entry exists. A file that exists but fails any
/// check — unparseable wrapper, version or checksum mismatch, wrong degree,
/// or failing re-verification against a freshly extracted system — is
/// reported as [`Error::CorruptCache`]; callers recompute instead of
/// trusting it.
pub fn cache_load(dir: &Path, degree: usize) -> Result<Option<ParametricSolution>> {
    let template = build_template_capped(degree, degree.max(DEFAULT_DEGREE_CAP))?;
    let system = extract_system(&template)?;
    Ok(cache_load_verified(dir, degree, &system)?.map(|(solution, _)| solution))
}

/// [`cache_load`] for callers that already hold the extracted system,
/// sparing the re-extraction that the self-contained variant performs.
pub fn cache_load_against(
    dir: &Path,
    system: &LinearSystem,
) -> Result<Option<ParametricSolution>> {
    Ok(cache_load_verified(dir, system.degree, system)?.map(|(solution, _)| solution))
}

fn cache_load_verified(
    dir: &Path,
    degree: usize,
    system: &LinearSystem,
) -> Result<Option<(ParametricSolution, String)>> {
    let path = cache_file_path(dir, degree);
    let text = match fs::read_to_string(&path) {
        Ok(text) => text,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let corrupt = |reason: String| Error::CorruptCache {
        path: path.display().to_string(),
        reason,
    };
    let file: CacheFile =
        serde_json::from_str(&text).map_err(|e| corrupt(format!("unparseable wrapper: {e}")))?;
    if file.format_version != FORMAT_VERSION {
        return Err(corrupt(format!(
            "format version {} (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    let checksum = hex_sha256(file.payload.as_bytes());
    if checksum != file.checksum {
        return Err(corrupt(format!(
            "checksum mismatch: stored {}, computed {checksum}",
            file.checksum
        )));
    }
    let solution: ParametricSolution = serde_json::from_str(&file.payload)
        .map_err(|e| corrupt(format!("unparseable solution: {e}")))?;
    if solution.degree != degree {
        return Err(corrupt(format!(
            "solution is for degree {}, expected {degree}",
            solution.degree
        )));
    }
    verify_solution(system, &solution)
        .map_err(|e| corrupt(format!("re-verification failed: {e}")))?;
    Ok(Some((solution, checksum)))
}
