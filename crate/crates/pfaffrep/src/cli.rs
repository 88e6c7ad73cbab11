//! Command-line surface over the pipeline: template inspection, solving,
//! building, verifying, and degree sweeps.
//!
//! Exit codes: `0` success (or verification passed), `1` a verification
//! came back negative or a system was certified unsolvable (the witness
//! goes to stderr), `2` usage error, `3` internal invariant failure. All
//! machine output goes to stdout, all diagnostics to stderr, and identical
//! invocations (including seeds) produce byte-identical stdout.

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linsolve::{extract_system, solve_parametric, ParametricSolution, SolveOutcome};
use crate::pfaffian::{LinearForm, SkewMatrix};
use crate::represent::{
    cache_dir_from_env, cache_load_against, cache_store, solve_degree, sweep, BuildOptions,
    Representation, SweepOptions, VerifyOutcome,
};
use crate::ring::{Ring, RingValue};
use crate::sympoly::parse_tripoly;
use crate::template::{build_template_capped, DEFAULT_DEGREE_CAP};

/// Entry point: parse `argv`, run the requested subcommand, and return the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap reports help/version on stdout with code 0 and usage
            // errors on stderr with code 2
            let code = i32::from(e.use_stderr()) * 2;
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Classify an error into the documented exit codes: broken inputs are
/// usage errors (2), a certified negative is a result (1), and anything
/// else is an internal invariant failure (3).
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::NonHomogeneous { .. }
        | Error::UnsupportedDegree(_)
        | Error::DegreeCapExceeded { .. }
        | Error::DegreeMismatch { .. }
        | Error::MismatchedRing { .. }
        | Error::DimensionMismatch(_)
        | Error::Io(_)
        | Error::Json(_) => 2,
        Error::NotSolvableOverZ { .. } => 1,
        _ => 3,
    }
}

#[derive(Parser)]
#[command(
    name = "pfaffrep",
    version,
    about = "Exact linear Pfaffian representations of homogeneous ternary forms",
    long_about = "Constructs, solves, and verifies linear Pfaffian representations of \
                  homogeneous ternary forms of degree 5 and up over the integers, the \
                  rationals, and integers modulo n."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the symbolic matrix template for a degree
    Template(TemplateArgs),
    /// Solve a degree's linear system and print the parametric solution
    Solve(SolveArgs),
    /// Build a verified representation of a concrete form
    Build(BuildArgs),
    /// Recompute the Pfaffian of a stored representation and compare
    Verify(VerifyArgs),
    /// Run the construction across a degree range and report per degree
    Sweep(SweepArgs),
}

/// Output formats for subcommands with a LaTeX rendering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RichFormat {
    Text,
    Json,
    Latex,
}

/// Output formats for subcommands without one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PlainFormat {
    Text,
    Json,
}

#[derive(Args)]
struct TemplateArgs {
    /// Degree of the target forms (5 and up)
    #[arg(long)]
    degree: usize,
    /// Highest degree accepted without explicit opt-in
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
    #[arg(long, value_enum, default_value_t = RichFormat::Text)]
    format: RichFormat,
}

#[derive(Args)]
struct SolveArgs {
    /// Degree of the target forms (5 and up)
    #[arg(long)]
    degree: usize,
    /// Highest degree accepted without explicit opt-in
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
    /// Solution cache directory (defaults to $PFAFFREP_CACHE when set)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PlainFormat::Json)]
    format: PlainFormat,
}

#[derive(Args)]
struct BuildArgs {
    /// Degree of the target form (5 and up)
    #[arg(long)]
    degree: usize,
    /// The form, e.g. "x^5 + 2*x^2*y*z^2 - y^5"
    #[arg(long, conflicts_with = "poly_file")]
    poly: Option<String>,
    /// File holding the form
    #[arg(long)]
    poly_file: Option<PathBuf>,
    /// Coefficient ring: int, rat, or mod:<n>
    #[arg(long, default_value = "int", value_parser = parse_ring)]
    ring: Ring,
    /// Free-parameter policy: zeros, random:<seed>, or file:<path>
    /// (a JSON array of value strings)
    #[arg(long, default_value = "zeros", value_parser = parse_free_policy)]
    free: FreePolicy,
    /// Skip the Pfaffian re-check of the built matrix
    #[arg(long)]
    no_verify: bool,
    /// Highest degree accepted without explicit opt-in
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
    /// Solution cache directory (defaults to $PFAFFREP_CACHE when set)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = RichFormat::Json)]
    format: RichFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Representation JSON file, as emitted by `build`
    #[arg(long)]
    matrix: PathBuf,
    /// The form the matrix is checked against
    #[arg(long, conflicts_with = "poly_file")]
    poly: Option<String>,
    /// File holding the form
    #[arg(long)]
    poly_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PlainFormat::Text)]
    format: PlainFormat,
}

#[derive(Args)]
struct SweepArgs {
    /// First degree of the range
    #[arg(long)]
    from: usize,
    /// Last degree of the range (inclusive)
    #[arg(long)]
    to: usize,
    /// Random forms per degree and ring
    #[arg(long, default_value_t = 5)]
    samples: usize,
    /// Comma-separated rings, e.g. "int,mod:6"
    #[arg(long, value_delimiter = ',', default_value = "int", value_parser = parse_ring)]
    rings: Vec<Ring>,
    /// Master seed for the sample streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Highest degree accepted without explicit opt-in
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
    /// Solution cache directory (defaults to $PFAFFREP_CACHE when set)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PlainFormat::Text)]
    format: PlainFormat,
}

/// How `build` fills the solution's free parameters.
#[derive(Debug, Clone)]
enum FreePolicy {
    Zeros,
    Random(u64),
    File(PathBuf),
}

fn parse_free_policy(text: &str) -> std::result::Result<FreePolicy, String> {
    if text == "zeros" {
        return Ok(FreePolicy::Zeros);
    }
    if let Some(seed) = text.strip_prefix("random:") {
        return seed
            .parse()
            .map(FreePolicy::Random)
            .map_err(|_| format!("invalid seed `{seed}`"));
    }
    if let Some(path) = text.strip_prefix("file:") {
        if path.is_empty() {
            return Err("empty path after `file:`".into());
        }
        return Ok(FreePolicy::File(PathBuf::from(path)));
    }
    Err(format!(
        "invalid free-parameter policy `{text}`: expected zeros, random:<seed>, or file:<path>"
    ))
}

fn parse_ring(text: &str) -> std::result::Result<Ring, String> {
    Ring::parse(text).map_err(|e| e.to_string())
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Template(args) => cmd_template(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Build(args) => cmd_build(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Print `text` to stdout with exactly one trailing newline.
fn emit(text: &str) {
    if text.ends_with('\n') {
        print!("{text}");
    } else {
        println!("{text}");
    }
}

/// The polynomial text from `--poly` or `--poly-file`.
fn poly_source(poly: Option<String>, poly_file: Option<PathBuf>) -> Result<String> {
    match (poly, poly_file) {
        (Some(text), None) => Ok(text),
        (None, Some(path)) => Ok(fs::read_to_string(path)?),
        (None, None) => Err(Error::Syntax {
            pos: 0,
            msg: "a polynomial is required: pass --poly or --poly-file".into(),
        }),
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting polynomial sources"),
    }
}

/// Flag wins over the environment; `None` disables caching.
fn resolve_cache(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(cache_dir_from_env)
}

fn cmd_template(args: TemplateArgs) -> Result<i32> {
    let template = build_template_capped(args.degree, args.degree_cap)?;
    match args.format {
        RichFormat::Text => emit(&template.render_text()),
        RichFormat::Json => emit(&template.to_json()?),
        RichFormat::Latex => emit(&template.render_latex()),
    }
    Ok(0)
}

fn cmd_solve(args: SolveArgs) -> Result<i32> {
    let template = build_template_capped(args.degree, args.degree_cap)?;
    let system = extract_system(&template)?;
    let cache = resolve_cache(args.cache_dir);
    let cached = cache
        .as_deref()
        .and_then(|dir| cache_load_against(dir, &system).ok().flatten());
    let outcome = match cached {
        Some(solution) => SolveOutcome::Solved(solution),
        None => {
            let outcome = solve_parametric(&system)?;
            if let SolveOutcome::Solved(solution) = &outcome {
                if let Some(dir) = &cache {
                    // Best effort: an unwritable cache directory must not
                    // fail a correct computation.
                    let _ = cache_store(dir, solution);
                }
            }
            outcome
        }
    };
    match outcome {
        SolveOutcome::Solved(solution) => {
            match args.format {
                PlainFormat::Json => emit(&serde_json::to_string_pretty(&solution)?),
                PlainFormat::Text => emit(&solve_summary(&system.degree, &solution)),
            }
            Ok(0)
        }
        SolveOutcome::Unsolvable(certificate) => {
            match args.format {
                PlainFormat::Json => emit(&serde_json::to_string_pretty(&certificate)?),
                PlainFormat::Text => emit(&format!(
                    "degree {}: NOT solvable over the integers (rank {}, {} free parameters)",
                    args.degree, certificate.rank, certificate.free_count
                )),
            }
            eprintln!(
                "witness: {}",
                certificate
                    .failing_column
                    .as_deref()
                    .unwrap_or("unspecified column")
            );
            Ok(1)
        }
    }
}

fn solve_summary(degree: &usize, solution: &ParametricSolution) -> String {
    let certificate = &solution.certificate;
    let counts = crate::template::counts(*degree);
    let ones = certificate
        .invariant_factors
        .iter()
        .filter(|f| f.as_str() == "1")
        .count();
    let factors = if ones == certificate.invariant_factors.len() {
        format!("all {ones} equal to 1")
    } else {
        certificate.invariant_factors.join(", ")
    };
    format!(
        "degree {degree}: {0}x{0} matrix, {1} unknowns, {2} equations, {3} coefficients\n\
         rank {4}, free parameters {5}, solvable over the integers: {6}\n\
         invariant factors: {factors}\n",
        counts.matrix_size,
        counts.unknowns,
        counts.equations,
        counts.thetas,
        certificate.rank,
        certificate.free_count,
        if certificate.solvable_over_integers {
            "yes"
        } else {
            "no"
        },
    )
}

fn cmd_build(args: BuildArgs) -> Result<i32> {
    let text = poly_source(args.poly, args.poly_file)?;
    let f = parse_tripoly(&text, args.degree, &args.ring)?;
    let options = BuildOptions {
        degree_cap: args.degree_cap,
        verify: !args.no_verify,
        cache_dir: resolve_cache(args.cache_dir),
    };
    let solved = solve_degree(args.degree, &options)?;
    let free_values = resolve_free_values(&args.free, &args.ring, solved.solution.free_count())?;
    let rep = solved.build(&args.ring, &f, free_values.as_deref(), options.verify)?;
    match args.format {
        RichFormat::Json => emit(&rep.to_json()?),
        RichFormat::Text => emit(&build_summary(&rep)),
        RichFormat::Latex => emit(&latex_matrix(&rep.matrix)),
    }
    Ok(0)
}

fn resolve_free_values(
    policy: &FreePolicy,
    ring: &Ring,
    free_count: usize,
) -> Result<Option<Vec<RingValue>>> {
    match policy {
        FreePolicy::Zeros => Ok(None),
        FreePolicy::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            Ok(Some(
                (0..free_count).map(|_| ring.sample_small(&mut rng)).collect(),
            ))
        }
        FreePolicy::File(path) => {
            let text = fs::read_to_string(path)?;
            let raw: Vec<String> = serde_json::from_str(&text)?;
            if raw.len() != free_count {
                return Err(Error::DimensionMismatch(format!(
                    "{} holds {} free values, the degree needs {free_count}",
                    path.display(),
                    raw.len()
                )));
            }
            let values = raw
                .iter()
                .map(|v| ring.parse_value(v))
                .collect::<Result<Vec<_>>>()?;
            Ok(Some(values))
        }
    }
}

fn build_summary(rep: &Representation) -> String {
    format!(
        "degree {} over {}; pfaffian check: {}\nprovenance: {}\n{}",
        rep.degree,
        rep.ring,
        match rep.pfaffian_check {
            crate::represent::PfaffianCheck::Passed => "passed",
            crate::represent::PfaffianCheck::Skipped => "skipped",
        },
        rep.provenance,
        rep.matrix,
    )
}

fn cmd_verify(args: VerifyArgs) -> Result<i32> {
    let rep = Representation::from_json(&fs::read_to_string(&args.matrix)?)?;
    let text = poly_source(args.poly, args.poly_file)?;
    let f = parse_tripoly(&text, rep.degree, &rep.ring)?;
    match crate::represent::verify_representation(&rep, &f)? {
        VerifyOutcome::Verified => {
            match args.format {
                PlainFormat::Json => emit("{\n  \"verified\": true\n}"),
                PlainFormat::Text => emit(&format!(
                    "verified: the matrix in {} represents the form",
                    args.matrix.display()
                )),
            }
            Ok(0)
        }
        VerifyOutcome::Mismatch {
            monomial,
            expected,
            got,
        } => {
            match args.format {
                PlainFormat::Json => emit(&format!(
                    "{{\n  \"verified\": false,\n  \"monomial\": \"{monomial}\",\n  \
                     \"expected\": \"{expected}\",\n  \"got\": \"{got}\"\n}}"
                )),
                PlainFormat::Text => emit("NOT verified"),
            }
            eprintln!(
                "witness: coefficient of {monomial} is {got}, the form wants {expected}"
            );
            Ok(1)
        }
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<i32> {
    let options = SweepOptions {
        samples_per_degree: args.samples,
        rings: args.rings,
        seed: args.seed,
        degree_cap: args.degree_cap,
        cache_dir: resolve_cache(args.cache_dir),
    };
    let report = sweep(args.from, args.to, &options)?;
    match args.format {
        PlainFormat::Json => {
            // Strip the wall-clock fields so identical invocations print
            // identical bytes; timings go to stderr instead.
            let mut value = serde_json::to_value(&report)?;
            if let Some(rows) = value.get_mut("rows").and_then(|r| r.as_array_mut()) {
                for row in rows {
                    if let Some(object) = row.as_object_mut() {
                        object.remove("wall_time_ms");
                    }
                }
            }
            emit(&serde_json::to_string_pretty(&value)?);
        }
        PlainFormat::Text => emit(&report.render_table()),
    }
    eprint!("{}", report.render_timings());
    if report.all_passed() {
        Ok(0)
    } else {
        for row in &report.rows {
            for witness in &row.failures {
                eprintln!("witness: {witness}");
            }
        }
        Ok(1)
    }
}

/// A concrete matrix as a LaTeX pmatrix of linear forms.
fn latex_matrix(matrix: &SkewMatrix<RingValue>) -> String {
    let n = matrix.size();
    let mut out = String::from("\\begin{pmatrix}\n");
    for row in 1..=n {
        let mut cells = Vec::with_capacity(n);
        for col in 1..=n {
            cells.push(match matrix.entry(row, col) {
                None => "0".to_string(),
                Some(form) => latex_form(&form),
            });
        }
        out.push_str(&cells.join(" & "));
        out.push_str(" \\\\\n");
    }
    out.push_str("\\end{pmatrix}\n");
    out
}

fn latex_form(form: &LinearForm<RingValue>) -> String {
    let mut out = String::new();
    for (value, variable) in [(&form.a, "x"), (&form.b, "y"), (&form.c, "z")] {
        if value.is_zero() {
            continue;
        }
        let rendered = value.to_string();
        let (sign, magnitude) = match rendered.strip_prefix('-') {
            Some(rest) => ("-", rest.to_string()),
            None => ("+", rendered),
        };
        let coefficient = if magnitude == "1" {
            String::new()
        } else if magnitude.contains('/') {
            // keep rationals unambiguous next to the variable
            format!("({magnitude})")
        } else {
            magnitude
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(if sign == "-" { " - " } else { " + " });
        }
        out.push_str(&coefficient);
        out.push_str(variable);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_policy_grammar() {
        assert!(matches!(parse_free_policy("zeros"), Ok(FreePolicy::Zeros)));
        assert!(matches!(
            parse_free_policy("random:42"),
            Ok(FreePolicy::Random(42))
        ));
        assert!(matches!(
            parse_free_policy("file:values.json"),
            Ok(FreePolicy::File(_))
        ));
        assert!(parse_free_policy("random:x").is_err());
        assert!(parse_free_policy("file:").is_err());
        assert!(parse_free_policy("ones").is_err());
    }

    #[test]
    fn error_classification_matches_documented_exit_codes() {
        assert_eq!(exit_code(&Error::UnsupportedDegree(4)), 2);
        assert_eq!(
            exit_code(&Error::DegreeCapExceeded {
                degree: 30,
                cap: 25
            }),
            2
        );
        assert_eq!(
            exit_code(&Error::NotSolvableOverZ {
                column: "Theta1".into(),
                witness: "row 1: residue 1 is not divisible by pivot 2".into(),
            }),
            1
        );
        assert_eq!(exit_code(&Error::VerificationFailed("bug".into())), 3);
        assert_eq!(
            exit_code(&Error::StructureViolation("zero block".into())),
            3
        );
    }

    #[test]
    fn latex_forms_render_signs_and_units() {
        let ring = Ring::Integers;
        let form = LinearForm::new(ring.from_i64(-1), ring.from_i64(3), ring.from_i64(0));
        assert_eq!(latex_form(&form), "-x + 3y");
        let rat = Ring::Rationals;
        let form = LinearForm::new(
            rat.parse_value("1/2").unwrap(),
            rat.parse_value("0").unwrap(),
            rat.parse_value("-5/3").unwrap(),
        );
        assert_eq!(latex_form(&form), "(1/2)x - (5/3)z");
        let zero = LinearForm::new(ring.zero(), ring.zero(), ring.zero());
        assert_eq!(latex_form(&zero), "0");
    }
}
