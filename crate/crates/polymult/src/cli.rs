//! Command-line dispatch, file formats, reports.
//!
//! Subcommands map one-to-one onto the library entry points: mixed volumes,
//! origin multiplicities, Milnor analysis, the trichotomy solver, the
//! extended root-count bound, the four non-degeneracy checkers, the
//! oracle-comparison harness, and a built-in regression corpus.
//!
//! Input is JSON (`{"n", "field", "polynomials" | "supports", ...}`) or,
//! with `--format expr`, plain-text polynomials like `x1^2*x3 + 5*x2 - 1`,
//! one per line. Reports go to standard output as text or JSON (`--output`),
//! newline-terminated, byte-identical for identical inputs and seeds.
//!
//! Exit codes: 0 success (and non-degenerate verdicts), 1 parse error,
//! 2 semantic error or corpus/oracle mismatch, 3 degenerate verdict,
//! 4 oracle budget exceeded.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::affine::{self, AffineCheckOutcome, AffineError, SubsetFamily};
use crate::geometry::{self, LatticePolytope};
use crate::local::{self, CheckOutcome, Finiteness, InnerCheckError, LocalError, Mult,
    StarResult, WitnessKind};
use crate::newton::{self, NewtonDiagram};
use crate::polysys::{self, AlgebraError, Budget, Coef, Field, LocalMult, SparsePolynomial};

#[derive(Parser)]
#[command(name = "polymult", version, about = "Exact Newton-polyhedra invariants of polynomial systems")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice-normalized mixed volume of the Newton polytopes.
    MixedVolume(JobArgs),
    /// Generic intersection multiplicity at the origin, with ledger.
    Mult0(JobArgs),
    /// Milnor non-degeneracy analysis of a polynomial (or the generic
    /// minimal Milnor number of a support).
    Milnor(JobArgs),
    /// Trichotomy for the minimal Milnor number of a support: zero, finite
    /// with value, or infinite.
    Kushnirenko(JobArgs),
    /// Extended root-count bound on the complement of the excluded
    /// coordinate subspaces, with ledger.
    Bkk(JobArgs),
    /// Check a system against the generic origin multiplicity of its own
    /// diagrams.
    CheckLocal(JobArgs),
    /// Check classical Newton non-degeneracy of a single polynomial.
    CheckNewton(JobArgs),
    /// Check inner Newton non-degeneracy against a prescribed diagram.
    CheckInner(JobArgs),
    /// Check attainment of the extended root-count bound.
    CheckAffine(JobArgs),
    /// Compare the polyhedral origin multiplicity with the local
    /// standard-basis oracle on sampled systems.
    OracleCompare(JobArgs),
    /// Run the built-in regression corpus.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct JobArgs {
    /// Input file (JSON by default; see --format).
    input: PathBuf,
    /// Coefficient field: Q or a prime p (overrides the input file).
    #[arg(long, env = "POLYMULT_FIELD")]
    field: Option<String>,
    /// Seed for "generic" coefficients and sampling.
    #[arg(long, env = "POLYMULT_SEED")]
    seed: Option<u64>,
    /// Excluded-subspace family as JSON, e.g. "[[0],[1,2]]" (0-based).
    #[arg(long = "S", env = "POLYMULT_S")]
    s_family: Option<String>,
    #[arg(long, value_enum, default_value_t = OutputMode::Text, env = "POLYMULT_OUTPUT")]
    output: OutputMode,
    #[arg(long, value_enum, default_value_t = InputFormat::Json, env = "POLYMULT_FORMAT")]
    format: InputFormat,
    /// Refuse systems in more than this many variables.
    #[arg(long, default_value_t = 8, env = "POLYMULT_MAX_N")]
    max_n: usize,
    /// Step budget for Groebner/standard-basis oracles.
    #[arg(long, default_value_t = 5_000_000, env = "POLYMULT_ORACLE_BUDGET")]
    oracle_budget: u64,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = OutputMode::Text, env = "POLYMULT_OUTPUT")]
    output: OutputMode,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    Json,
    Expr,
}

/// Errors mapped to process exit codes.
#[derive(Debug)]
enum CliError {
    /// Exit 1.
    Parse { line: usize, column: usize, message: String },
    /// Exit 2.
    Semantic(String),
    /// Exit 4.
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 1,
            CliError::Semantic(_) => 2,
            CliError::Budget(_) => 4,
        }
    }

    fn report(&self) -> String {
        match self {
            CliError::Parse { line, column, message } => {
                format!("parse error at line {line}, column {column}: {message}")
            }
            CliError::Semantic(m) => format!("error: {m}"),
            CliError::Budget(m) => format!("budget exceeded: {m}"),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<LocalError> for CliError {
    fn from(e: LocalError) -> Self {
        match e {
            LocalError::Algebra(a) => a.into(),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<AffineError> for CliError {
    fn from(e: AffineError) -> Self {
        match e {
            AffineError::Algebra(a) => a.into(),
            AffineError::Local(l) => l.into(),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<InnerCheckError> for CliError {
    fn from(e: InnerCheckError) -> Self {
        match e {
            InnerCheckError::Local(l) => l.into(),
            other => CliError::Semantic(other.to_string()),
        }
    }
}

impl From<geometry::GeometryError> for CliError {
    fn from(e: geometry::GeometryError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

impl From<newton::NewtonError> for CliError {
    fn from(e: newton::NewtonError) -> Self {
        CliError::Semantic(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A finished report: machine form, human form, exit code.
struct Report {
    json: Value,
    text: String,
    exit: i32,
}

impl Report {
    fn ok(json: Value, text: String) -> Report {
        Report { json, text, exit: 0 }
    }
}

/// Parse the arguments, run the job, print the report. Returns the process
/// exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let (mode, outcome) = match &cli.command {
        Command::Corpus(args) => (args.output, run_corpus()),
        Command::MixedVolume(a)
        | Command::Mult0(a)
        | Command::Milnor(a)
        | Command::Kushnirenko(a)
        | Command::Bkk(a)
        | Command::CheckLocal(a)
        | Command::CheckNewton(a)
        | Command::CheckInner(a)
        | Command::CheckAffine(a)
        | Command::OracleCompare(a) => (a.output, run_job(&cli.command, a)),
    };
    match outcome {
        Ok(report) => {
            match mode {
                OutputMode::Text => println!("{}", report.text),
                OutputMode::Json => println!("{}", report.json),
            }
            report.exit
        }
        Err(e) => {
            eprintln!("{}", e.report());
            e.exit_code()
        }
    }
}

fn run_job(command: &Command, args: &JobArgs) -> CliResult<Report> {
    let input = parse_input(args)?;
    match command {
        Command::MixedVolume(_) => cmd_mixed_volume(&input),
        Command::Mult0(_) => cmd_mult0(&input),
        Command::Milnor(_) => cmd_milnor(&input, args),
        Command::Kushnirenko(_) => cmd_kushnirenko(&input),
        Command::Bkk(_) => cmd_bkk(&input),
        Command::CheckLocal(_) => cmd_check_local(&input, args),
        Command::CheckNewton(_) => cmd_check_newton(&input, args),
        Command::CheckInner(_) => cmd_check_inner(&input, args),
        Command::CheckAffine(_) => cmd_check_affine(&input, args),
        Command::OracleCompare(_) => cmd_oracle_compare(&input, args),
        Command::Corpus(_) => unreachable!("dispatched separately"),
    }
}

// ---------------------------------------------------------------------------
// Input parsing

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    n: usize,
    #[serde(default)]
    field: Option<FieldSpec>,
    #[serde(default)]
    polynomials: Option<Vec<Vec<TermSpec>>>,
    #[serde(default)]
    supports: Option<Vec<Vec<Vec<i64>>>>,
    /// Prescribed diagram generators (check-inner).
    #[serde(default)]
    diagram: Option<Vec<Vec<i64>>>,
    /// Prescribed Newton polytopes (check-affine); defaults to the hulls of
    /// the polynomial supports.
    #[serde(default)]
    polytopes: Option<Vec<Vec<Vec<i64>>>>,
    /// Excluded-subspace family (0-based); the --S flag overrides it.
    #[serde(default, rename = "S")]
    s_family: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Fp { #[serde(rename = "Fp")] p: u64 },
}

#[derive(Deserialize)]
struct TermSpec {
    exp: Vec<i64>,
    coef: CoefSpec,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoefSpec {
    Int(i64),
    Str(String),
}

struct ParsedInput {
    n: usize,
    field: Field,
    polynomials: Option<Vec<SparsePolynomial>>,
    supports: Vec<Vec<Vec<i64>>>,
    diagram: Option<Vec<Vec<i64>>>,
    polytopes: Option<Vec<Vec<Vec<i64>>>>,
    s_family: Option<Vec<Vec<usize>>>,
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn parse_field_name(s: &str) -> CliResult<Field> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    let p: u64 = s
        .parse()
        .map_err(|_| CliError::Semantic(format!("field must be Q or a prime, got {s:?}")))?;
    if !is_prime(p) {
        return Err(CliError::Semantic(format!("{p} is not prime")));
    }
    Ok(Field::Fp(p))
}

fn resolve_field(args: &JobArgs, file: &Option<FieldSpec>) -> CliResult<Field> {
    if let Some(s) = &args.field {
        return parse_field_name(s);
    }
    match file {
        None => Ok(Field::Q),
        Some(FieldSpec::Name(s)) => parse_field_name(s),
        Some(FieldSpec::Fp { p }) => {
            if !is_prime(*p) {
                return Err(CliError::Semantic(format!("{p} is not prime")));
            }
            Ok(Field::Fp(*p))
        }
    }
}

fn validate_exponent(exp: &[i64], n: usize, poly: usize, term: usize) -> CliResult<()> {
    if exp.len() != n {
        return Err(CliError::Semantic(format!(
            "polynomial {poly}, term {term}: exponent has {} entries, expected {n}",
            exp.len()
        )));
    }
    if exp.iter().any(|&x| x < 0) {
        return Err(CliError::Semantic(format!(
            "polynomial {poly}, term {term}: negative exponent {exp:?}"
        )));
    }
    Ok(())
}

fn parse_coef(field: Field, s: &str) -> CliResult<Coef> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let bad = || CliError::Semantic(format!("bad coefficient {s:?}"));
    let num: i64 = num.trim().parse().map_err(|_| bad())?;
    let den: i64 = den.trim().parse().map_err(|_| bad())?;
    if den == 0 {
        return Err(CliError::Semantic(format!("zero denominator in {s:?}")));
    }
    match field {
        Field::Q => Ok(Coef::Q(BigRational::new(BigInt::from(num), BigInt::from(den)))),
        Field::Fp(_) => field
            .div(&field.from_i64(num), &field.from_i64(den))
            .map_err(|e| CliError::Semantic(e.to_string())),
    }
}

fn sample_coef<R: Rng>(field: Field, rng: &mut R) -> Coef {
    match field {
        Field::Fp(p) => Coef::Fp(rng.gen_range(1..p)),
        Field::Q => {
            let mut v: i64 = 0;
            while v == 0 {
                v = rng.gen_range(-10_000..=10_000);
            }
            Coef::Q(BigRational::from_integer(BigInt::from(v)))
        }
    }
}

fn parse_input(args: &JobArgs) -> CliResult<ParsedInput> {
    let raw = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Semantic(format!("cannot read {}: {e}", args.input.display())))?;
    let mut input = match args.format {
        InputFormat::Json => parse_json_input(args, &raw)?,
        InputFormat::Expr => parse_expr_input(args, &raw)?,
    };
    if input.n == 0 || input.n > args.max_n {
        return Err(CliError::Semantic(format!(
            "n = {} outside the allowed range 1..={}",
            input.n, args.max_n
        )));
    }
    if let Some(s) = &args.s_family {
        let parsed: Vec<Vec<usize>> = serde_json::from_str(s).map_err(|e| {
            CliError::Semantic(format!("--S must be a JSON list of index lists: {e}"))
        })?;
        input.s_family = Some(parsed);
    }
    Ok(input)
}

fn parse_json_input(args: &JobArgs, raw: &str) -> CliResult<ParsedInput> {
    let file: InputFile = serde_json::from_str(raw).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let n = file.n;
    let field = resolve_field(args, &file.field)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.unwrap_or(0));
    let mut polynomials = None;
    let supports: Vec<Vec<Vec<i64>>>;
    match (&file.polynomials, &file.supports) {
        (Some(polys), _) => {
            let mut out = Vec::with_capacity(polys.len());
            for (pi, terms) in polys.iter().enumerate() {
                let mut built = Vec::with_capacity(terms.len());
                for (ti, t) in terms.iter().enumerate() {
                    validate_exponent(&t.exp, n, pi, ti)?;
                    let coef = match &t.coef {
                        CoefSpec::Int(v) => field.from_i64(*v),
                        CoefSpec::Str(s) if s == "generic" => sample_coef(field, &mut rng),
                        CoefSpec::Str(s) => parse_coef(field, s)?,
                    };
                    let exp: Vec<u32> = t.exp.iter().map(|&x| x as u32).collect();
                    built.push((exp, coef));
                }
                out.push(
                    SparsePolynomial::from_terms(n, field, built)
                        .map_err(|e| CliError::Semantic(e.to_string()))?,
                );
            }
            supports = out.iter().map(|f| f.support()).collect();
            polynomials = Some(out);
        }
        (None, Some(sups)) => {
            for (pi, sup) in sups.iter().enumerate() {
                for (ti, pt) in sup.iter().enumerate() {
                    validate_exponent(pt, n, pi, ti)?;
                }
            }
            supports = sups.clone();
        }
        (None, None) => {
            return Err(CliError::Semantic(
                "input must contain \"polynomials\" or \"supports\"".into(),
            ));
        }
    }
    Ok(ParsedInput {
        n,
        field,
        polynomials,
        supports,
        diagram: file.diagram,
        polytopes: file.polytopes,
        s_family: file.s_family,
    })
}

// ---------------------------------------------------------------------------
// Expression format: one polynomial per line, `x1^2*x3 + 5*x2 - 1` style.

struct ExprScanner<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> ExprScanner<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        ExprScanner { chars: s.chars().peekable(), line, column: 1 }
    }

    fn err(&self, message: impl Into<String>) -> CliError {
        CliError::Parse { line: self.line, column: self.column, message: message.into() }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c.is_some() {
            self.column += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn number(&mut self) -> CliResult<i64> {
        let mut s = String::new();
        while matches!(self.chars.peek(), Some(c) if c.is_ascii_digit()) {
            s.push(self.bump().unwrap());
        }
        if s.is_empty() {
            return Err(self.err("expected a number"));
        }
        s.parse().map_err(|_| self.err(format!("number {s} out of range")))
    }
}

/// Parse one polynomial expression over `field` in `n` variables
/// (`x1`..`xn`, 1-based in the surface syntax).
fn parse_expr_poly(
    line: &str,
    line_no: usize,
    n: usize,
    field: Field,
) -> CliResult<SparsePolynomial> {
    let mut sc = ExprScanner::new(line, line_no);
    let mut terms: Vec<(Vec<u32>, Coef)> = Vec::new();
    let mut sign = 1i64;
    if let Some(c) = sc.peek() {
        if c == '+' || c == '-' {
            sc.bump();
            if c == '-' {
                sign = -1;
            }
        }
    }
    loop {
        // One term: product of numeric and variable factors.
        let mut coef = field.from_i64(sign);
        let mut exp = vec![0u32; n];
        let mut saw_factor = false;
        loop {
            match sc.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = sc.number()?;
                    let c = if sc.peek() == Some('/') {
                        sc.bump();
                        sc.skip_ws();
                        let den = sc.number()?;
                        if den == 0 {
                            return Err(sc.err("zero denominator"));
                        }
                        match field {
                            Field::Q => Coef::Q(BigRational::new(
                                BigInt::from(num),
                                BigInt::from(den),
                            )),
                            Field::Fp(_) => field
                                .div(&field.from_i64(num), &field.from_i64(den))
                                .map_err(|e| sc.err(e.to_string()))?,
                        }
                    } else {
                        field.from_i64(num)
                    };
                    coef = field.mul(&coef, &c);
                }
                Some('x') => {
                    sc.bump();
                    let idx = sc.number()?;
                    if idx < 1 || idx as usize > n {
                        return Err(sc.err(format!("variable x{idx} outside x1..x{n}")));
                    }
                    let mut e = 1i64;
                    if sc.peek() == Some('^') {
                        sc.bump();
                        sc.skip_ws();
                        e = sc.number()?;
                    }
                    exp[idx as usize - 1] += e as u32;
                }
                _ => {
                    if !saw_factor {
                        return Err(sc.err("expected a coefficient or variable"));
                    }
                    break;
                }
            }
            saw_factor = true;
            if sc.peek() == Some('*') {
                sc.bump();
            }
        }
        terms.push((exp, coef));
        match sc.peek() {
            None => break,
            Some('+') => {
                sc.bump();
                sign = 1;
            }
            Some('-') => {
                sc.bump();
                sign = -1;
            }
            Some(c) => return Err(sc.err(format!("unexpected character {c:?}"))),
        }
    }
    SparsePolynomial::from_terms(n, field, terms).map_err(|e| CliError::Semantic(e.to_string()))
}

fn parse_expr_input(args: &JobArgs, raw: &str) -> CliResult<ParsedInput> {
    let field = match &args.field {
        Some(s) => parse_field_name(s)?,
        None => Field::Q,
    };
    let lines: Vec<(usize, &str)> = raw
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        return Err(CliError::Parse { line: 1, column: 1, message: "empty input".into() });
    }
    // The variable count is the largest index mentioned anywhere.
    let mut n = 0usize;
    for (line_no, l) in &lines {
        let mut sc = ExprScanner::new(l, *line_no);
        while let Some(c) = sc.peek() {
            if c == 'x' {
                sc.bump();
                n = n.max(sc.number()? as usize);
            } else {
                sc.bump();
            }
        }
    }
    if n == 0 {
        return Err(CliError::Semantic("no variables mentioned in the input".into()));
    }
    let polynomials: Vec<SparsePolynomial> = lines
        .iter()
        .map(|(line_no, l)| parse_expr_poly(l, *line_no, n, field))
        .collect::<CliResult<_>>()?;
    let supports = polynomials.iter().map(|f| f.support()).collect();
    Ok(ParsedInput {
        n,
        field,
        polynomials: Some(polynomials),
        supports,
        diagram: None,
        polytopes: None,
        s_family: None,
    })
}

// ---------------------------------------------------------------------------
// Shared rendering helpers

fn fmt_subset(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn fmt_weight(w: &[i64]) -> String {
    let inner: Vec<String> = w.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(","))
}

fn mult_json(m: &Mult) -> Value {
    match m {
        Mult::Finite(v) => json!(v),
        Mult::Infinite => json!("infinite"),
    }
}

fn star_json(star: &StarResult) -> Value {
    Value::Array(
        star.entries
            .iter()
            .map(|e| {
                json!({
                    "weight": e.weight,
                    "value": e.value,
                    "mixed_volume": e.mixed_volume,
                })
            })
            .collect(),
    )
}

fn star_text(star: &StarResult) -> String {
    if star.entries.is_empty() {
        return "(no contributing weights)".into();
    }
    star.entries
        .iter()
        .map(|e| format!("w={}: {}*{}", fmt_weight(&e.weight), e.value, e.mixed_volume))
        .collect::<Vec<_>>()
        .join("; ")
}

fn kind_label(k: WitnessKind) -> &'static str {
    match k {
        WitnessKind::Origin => "origin",
        WitnessKind::Infinity => "infinity",
        WitnessKind::Centered => "centered",
        WitnessKind::InnerFace => "inner-face",
    }
}

fn witness_json(subset: &[usize], weight: &[i64], kind: WitnessKind, condition: Option<&str>) -> Value {
    let mut v = json!({
        "I": subset,
        "weight": weight,
        "kind": kind_label(kind),
    });
    if let Some(c) = condition {
        v["condition"] = json!(c);
    }
    v
}

fn check_report(outcome: &CheckOutcome, what: &str) -> Report {
    match outcome {
        CheckOutcome::NonDegenerate => Report::ok(
            json!({"check": what, "nondegenerate": true}),
            format!("{what}: nondegenerate"),
        ),
        CheckOutcome::Degenerate(w) => Report {
            json: json!({
                "check": what,
                "nondegenerate": false,
                "witness": witness_json(&w.subset, &w.weight, w.kind, None),
            }),
            text: format!(
                "{what}: DEGENERATE at I={} weight {} ({})",
                fmt_subset(&w.subset),
                fmt_weight(&w.weight),
                kind_label(w.kind)
            ),
            exit: 3,
        },
    }
}

fn finiteness_label(f: Finiteness) -> &'static str {
    match f {
        Finiteness::Zero => "zero",
        Finiteness::Finite => "finite",
        Finiteness::Infinite => "infinite",
    }
}

fn hulls(input: &ParsedInput) -> CliResult<Vec<LatticePolytope>> {
    input
        .supports
        .iter()
        .map(|s| Ok(geometry::convex_hull(s)?))
        .collect()
}

fn diagrams(input: &ParsedInput) -> CliResult<Vec<NewtonDiagram>> {
    input
        .supports
        .iter()
        .map(|s| Ok(NewtonDiagram::from_points(input.n, s)?))
        .collect()
}

fn require_square(input: &ParsedInput) -> CliResult<()> {
    if input.supports.len() != input.n {
        return Err(CliError::Semantic(format!(
            "expected {} polynomials in {} variables, got {}",
            input.n,
            input.n,
            input.supports.len()
        )));
    }
    Ok(())
}

fn subset_family(input: &ParsedInput) -> CliResult<SubsetFamily> {
    match &input.s_family {
        None => Ok(SubsetFamily::empty(input.n)),
        Some(members) => {
            SubsetFamily::new(input.n, members).map_err(|e| CliError::Semantic(e.to_string()))
        }
    }
}

fn require_polynomials(input: &ParsedInput) -> CliResult<&Vec<SparsePolynomial>> {
    input.polynomials.as_ref().ok_or_else(|| {
        CliError::Semantic("this command needs concrete polynomials, not bare supports".into())
    })
}

// ---------------------------------------------------------------------------
// Commands

fn cmd_mixed_volume(input: &ParsedInput) -> CliResult<Report> {
    require_square(input)?;
    let ps = hulls(input)?;
    let v = geometry::mixed_volume(&ps)?;
    Ok(Report::ok(
        json!({"command": "mixed-volume", "value": v}),
        format!("mixed volume = {v}"),
    ))
}

fn cmd_mult0(input: &ParsedInput) -> CliResult<Report> {
    require_square(input)?;
    let ds = diagrams(input)?;
    let m = local::origin_multiplicity(&ds)?;
    let terms_json: Vec<Value> = m
        .terms
        .iter()
        .map(|t| {
            json!({
                "I": t.subset,
                "star": star_json(&t.star),
                "cofactor": mult_json(&t.cofactor),
                "product": mult_json(&t.product),
            })
        })
        .collect();
    let mut text = format!(
        "finiteness: {}\nmult0 = {}",
        finiteness_label(m.finiteness),
        m.total
    );
    for t in &m.terms {
        text.push_str(&format!(
            "\n  I={}: star [{}], cofactor {}, term {}",
            fmt_subset(&t.subset),
            star_text(&t.star),
            t.cofactor,
            t.product
        ));
    }
    Ok(Report::ok(
        json!({
            "command": "mult0",
            "finiteness": finiteness_label(m.finiteness),
            "value": mult_json(&m.total),
            "terms": terms_json,
        }),
        text,
    ))
}

fn cmd_kushnirenko(input: &ParsedInput) -> CliResult<Report> {
    if input.supports.len() != 1 {
        return Err(CliError::Semantic(format!(
            "the trichotomy solver takes exactly one support, got {}",
            input.supports.len()
        )));
    }
    let characteristic = match input.field {
        Field::Q => 0,
        Field::Fp(p) => p,
    };
    let m = local::kushnirenko_solve(&input.supports[0], input.n, characteristic)?;
    Ok(Report::ok(
        json!({
            "command": "kushnirenko",
            "finiteness": finiteness_label(m.finiteness),
            "value": mult_json(&m.total),
        }),
        format!(
            "minimal Milnor number: {} ({})",
            m.total,
            finiteness_label(m.finiteness)
        ),
    ))
}

fn cmd_milnor(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    match &input.polynomials {
        None => cmd_kushnirenko(input),
        Some(polys) => {
            if polys.len() != 1 {
                return Err(CliError::Semantic(format!(
                    "Milnor analysis takes exactly one polynomial, got {}",
                    polys.len()
                )));
            }
            let mut budget = Budget::new(args.oracle_budget);
            let r = local::check_milnor(&polys[0], &mut budget)?;
            let witness = match &r.outcome {
                Some(CheckOutcome::Degenerate(w)) => {
                    Some(witness_json(&w.subset, &w.weight, w.kind, None))
                }
                _ => None,
            };
            let exit = if r.milnor_nondegenerate { 0 } else { 3 };
            let text = format!(
                "partial multiplicity: {}\ngeneric multiplicity: {}\nMilnor nondegenerate: {}\npartially nondegenerate: {}",
                r.partial_multiplicity,
                r.generic_multiplicity,
                r.milnor_nondegenerate,
                r.partially_milnor_nondegenerate
            );
            Ok(Report {
                json: json!({
                    "command": "milnor",
                    "partial_multiplicity": mult_json(&r.partial_multiplicity),
                    "generic_multiplicity": mult_json(&r.generic_multiplicity),
                    "partials_generic": r.partials_generic,
                    "milnor_nondegenerate": r.milnor_nondegenerate,
                    "partially_milnor_nondegenerate": r.partially_milnor_nondegenerate,
                    "witness": witness,
                }),
                text,
                exit,
            })
        }
    }
}

fn cmd_bkk(input: &ParsedInput) -> CliResult<Report> {
    require_square(input)?;
    let ps = hulls(input)?;
    let s = subset_family(input)?;
    let bound = affine::bkk_extended(&ps, &s)?;
    let terms_json: Vec<Value> = bound
        .terms
        .iter()
        .map(|t| {
            json!({
                "I": t.subset,
                "infinity": star_json(&t.infinity),
                "centered": star_json(&t.centered),
                "star_net": t.star_net,
                "cofactor": mult_json(&t.cofactor),
                "product": mult_json(&t.product),
            })
        })
        .collect();
    let cls = &bound.classification;
    let mut text = format!("bkk bound = {}", bound.total);
    for t in &bound.terms {
        text.push_str(&format!(
            "\n  I={}: infinity [{}], centered [{}], net {}, cofactor {}, term {}",
            fmt_subset(&t.subset),
            star_text(&t.infinity),
            star_text(&t.centered),
            t.star_net,
            t.cofactor,
            t.product
        ));
    }
    Ok(Report::ok(
        json!({
            "command": "bkk",
            "value": mult_json(&bound.total),
            "terms": terms_json,
            "families": {
                "excess": cls.excess_family(),
                "exotrivial": cls.t_family(),
                "index": cls.index_family(),
            },
        }),
        text,
    ))
}

fn cmd_check_local(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    let polys = require_polynomials(input)?;
    require_square(input)?;
    let mut budget = Budget::new(args.oracle_budget);
    let outcome = local::check_origin_nondegenerate(polys, &mut budget)?;
    Ok(check_report(&outcome, "origin nondegeneracy"))
}

fn cmd_check_newton(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    let polys = require_polynomials(input)?;
    if polys.len() != 1 {
        return Err(CliError::Semantic(format!(
            "the Newton check takes exactly one polynomial, got {}",
            polys.len()
        )));
    }
    let mut budget = Budget::new(args.oracle_budget);
    let outcome = local::check_newton_nondegenerate(&polys[0], &mut budget)?;
    Ok(check_report(&outcome, "Newton nondegeneracy"))
}

fn cmd_check_inner(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    let polys = require_polynomials(input)?;
    if polys.len() != 1 {
        return Err(CliError::Semantic(format!(
            "the inner check takes exactly one polynomial, got {}",
            polys.len()
        )));
    }
    let generators = match &input.diagram {
        Some(g) => g.clone(),
        None => polys[0].support(),
    };
    let diagram = NewtonDiagram::from_points(input.n, &generators)?;
    let mut budget = Budget::new(args.oracle_budget);
    let outcome = local::check_inner_nondegenerate(&polys[0], &diagram, &mut budget)?;
    Ok(check_report(&outcome, "inner nondegeneracy"))
}

fn cmd_check_affine(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    let polys = require_polynomials(input)?;
    require_square(input)?;
    let ps: Vec<LatticePolytope> = match &input.polytopes {
        Some(vs) => vs
            .iter()
            .map(|v| Ok(geometry::convex_hull(v)?))
            .collect::<CliResult<_>>()?,
        None => hulls(input)?,
    };
    let s = subset_family(input)?;
    let mut budget = Budget::new(args.oracle_budget);
    let outcome = affine::check_p_nondegenerate(polys, &ps, &s, &mut budget)?;
    Ok(match outcome {
        AffineCheckOutcome::NonDegenerate => Report::ok(
            json!({"check": "bound attainment", "nondegenerate": true}),
            "bound attainment: nondegenerate".into(),
        ),
        AffineCheckOutcome::Degenerate(w) => Report {
            json: json!({
                "check": "bound attainment",
                "nondegenerate": false,
                "witness": witness_json(&w.subset, &w.weight, w.kind, Some(w.condition.label())),
            }),
            text: format!(
                "bound attainment: DEGENERATE at I={} weight {} ({}, condition {})",
                fmt_subset(&w.subset),
                fmt_weight(&w.weight),
                kind_label(w.kind),
                w.condition.label()
            ),
            exit: 3,
        },
    })
}

fn cmd_oracle_compare(input: &ParsedInput, args: &JobArgs) -> CliResult<Report> {
    require_square(input)?;
    let field = match input.field {
        // The standard-basis oracle needs exact finite arithmetic at speed;
        // default to a medium prime when the file says Q.
        Field::Q => Field::Fp(32003),
        f => f,
    };
    let ds = diagrams(input)?;
    let expected = local::origin_multiplicity(&ds)?.total;
    let base_seed = args.seed.unwrap_or(1);
    let mut lines = Vec::new();
    let mut results = Vec::new();
    let mut all_agree = true;
    for seed in base_seed..base_seed + 5 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let polys =
            polysys::sample_with_supports(&input.supports, input.n, field, &mut rng)?;
        let mut budget = Budget::new(args.oracle_budget);
        let nondeg = local::check_origin_nondegenerate(&polys, &mut budget)?;
        if !nondeg.is_nondegenerate() {
            lines.push(format!("seed {seed}: degenerate sample, skipped"));
            results.push(json!({"seed": seed, "nondegenerate": false}));
            continue;
        }
        let mora = polysys::local_multiplicity(&polys, &mut budget)?;
        let mora_mult = match mora {
            LocalMult::Finite(v) => Mult::Finite(v as i64),
            LocalMult::Infinite => Mult::Infinite,
        };
        let agree = mora_mult == expected;
        all_agree &= agree;
        lines.push(format!(
            "seed {seed}: {} (formula {}, oracle {})",
            if agree { "AGREE" } else { "DISAGREE" },
            expected,
            mora_mult
        ));
        results.push(json!({
            "seed": seed,
            "nondegenerate": true,
            "formula": mult_json(&expected),
            "oracle": mult_json(&mora_mult),
            "agree": agree,
        }));
    }
    Ok(Report {
        json: json!({"command": "oracle-compare", "results": results, "all_agree": all_agree}),
        text: lines.join("\n"),
        exit: if all_agree { 0 } else { 2 },
    })
}

// ---------------------------------------------------------------------------
// Regression corpus

fn run_corpus() -> CliResult<Report> {
    let mut lines = Vec::new();
    let mut results = Vec::new();
    let mut failures = 0usize;
    let mut check = |name: &str, got: String, want: String| {
        let ok = got == want;
        if !ok {
            failures += 1;
        }
        lines.push(if ok {
            format!("ok {name} = {got}")
        } else {
            format!("FAIL {name}: got {got}, want {want}")
        });
        results.push(json!({"name": name, "ok": ok, "got": got, "want": want}));
    };

    let hull = |pts: &[&[i64]]| {
        geometry::convex_hull(&pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .expect("corpus hull")
    };
    let diag = |n: usize, pts: &[&[i64]]| {
        NewtonDiagram::from_points(n, &pts.iter().map(|p| p.to_vec()).collect::<Vec<_>>())
            .expect("corpus diagram")
    };

    // Three-variable system: a linear form and two cubics with no constant
    // term. Origin multiplicity 6, bound on the whole space 9.
    let sup1: Vec<&[i64]> = vec![&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]];
    let sup2: Vec<&[i64]> = vec![&[3, 0, 0], &[1, 0, 2], &[0, 3, 0], &[0, 1, 2]];
    let sup3: Vec<&[i64]> = vec![&[2, 0, 0], &[1, 0, 2], &[0, 2, 0], &[0, 1, 2]];
    let ds = vec![diag(3, &sup1), diag(3, &sup2), diag(3, &sup3)];
    let m = local::origin_multiplicity(&ds)?;
    check("origin multiplicity (3-variable system)", m.total.to_string(), "6".into());
    let ps = vec![hull(&sup1), hull(&sup2), hull(&sup3)];
    let bound = affine::bkk_extended(&ps, &SubsetFamily::empty(3))
        .map_err(CliError::from)?;
    check("root-count bound (3-variable system)", bound.total.to_string(), "9".into());

    // Tetrahedron with vertices 0, e1+e2, e2+e3, e1+e3.
    let t = hull(&[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1], &[1, 0, 1]]);
    check("tetrahedron lattice volume", geometry::lattice_volume(&t)?.to_string(), "2".into());

    // Two parallel segments and a degree-k slice: the bound is 0 while the
    // 0-hulled mixed volume is k; widening the segments to triangles gives
    // bound k against hulled mixed volume 2k.
    for k in 1..=3i64 {
        let seg = hull(&[&[1, 0, 0], &[0, 1, 0]]);
        let slice = hull(&[&[1, 0, k], &[0, 0, 0]]);
        let sys = vec![seg.clone(), seg, slice.clone()];
        let b = affine::bkk_extended(&sys, &SubsetFamily::empty(3)).map_err(CliError::from)?;
        check(&format!("parallel-segment bound (k={k})"), b.total.to_string(), "0".into());
        let tri = hull(&[&[1, 0, 0], &[0, 1, 0], &[2, 0, 0]]);
        let sys = vec![tri.clone(), tri, slice];
        let b = affine::bkk_extended(&sys, &SubsetFamily::empty(3)).map_err(CliError::from)?;
        check(&format!("widened-segment bound (k={k})"), b.total.to_string(), k.to_string());
    }

    // Trichotomy solver: x1 + (x2+x3)^3 has a unit partial, so the minimal
    // Milnor number is 0; a single-monomial support is never isolated.
    let sup: Vec<Vec<i64>> = vec![
        vec![1, 0, 0],
        vec![0, 3, 0],
        vec![0, 2, 1],
        vec![0, 1, 2],
        vec![0, 0, 3],
    ];
    let m = local::kushnirenko_solve(&sup, 3, 0)?;
    check("trichotomy (unit partial)", m.total.to_string(), "0".into());
    let m = local::kushnirenko_solve(&[vec![2, 2, 2]], 3, 0)?;
    check("trichotomy (single monomial)", m.total.to_string(), "infinite".into());

    // Classification families.
    let cls = affine::classify_subspaces(&ps, &SubsetFamily::empty(3))
        .map_err(CliError::from)?;
    check(
        "index family (3-variable system)",
        format!("{:?}", cls.index_family()),
        "[[2], [0, 1, 2]]".into(),
    );
    let shifted = hull(&[&[0, 0, 1], &[1, 1, 1], &[0, 1, 2], &[1, 0, 2]]);
    let tps = vec![t.clone(), t, shifted];
    let cls = affine::classify_subspaces(&tps, &SubsetFamily::empty(3))
        .map_err(CliError::from)?;
    check(
        "exotrivial family (tetrahedron system)",
        format!("{:?}", cls.t_family()),
        "[[0, 1]]".into(),
    );
    check(
        "root-count bound (tetrahedron system)",
        affine::bkk_extended(&tps, &SubsetFamily::empty(3))
            .map_err(CliError::from)?
            .total
            .to_string(),
        "2".into(),
    );

    let exit = if failures == 0 { 0 } else { 2 };
    lines.push(if failures == 0 {
        "corpus: all checks passed".into()
    } else {
        format!("corpus: {failures} check(s) FAILED")
    });
    Ok(Report {
        json: json!({"command": "corpus", "results": results, "failures": failures}),
        text: lines.join("\n"),
        exit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expr_parser_round_trip() {
        let f = parse_expr_poly("x1^2*x3 + 5*x2 - 1", 1, 3, Field::Q).unwrap();
        let mut support = f.support();
        support.sort();
        assert_eq!(support, vec![vec![0, 0, 0], vec![0, 1, 0], vec![2, 0, 1]]);
    }

    #[test]
    fn expr_parser_reports_position() {
        let err = parse_expr_poly("x1 + @", 4, 2, Field::Q).unwrap_err();
        let CliError::Parse { line, column, .. } = err else {
            panic!("expected a parse error");
        };
        assert_eq!(line, 4);
        assert!(column >= 5);
    }

    #[test]
    fn fraction_coefficients() {
        let f = parse_expr_poly("1/2*x1 + 3/4", 1, 1, Field::Q).unwrap();
        assert_eq!(f.terms.len(), 2);
        let g = parse_expr_poly("1/2*x1", 1, 1, Field::Fp(7)).unwrap();
        // 1/2 = 4 in F_7.
        assert_eq!(g.terms.values().next(), Some(&Coef::Fp(4)));
    }

    #[test]
    fn prime_validation() {
        assert!(parse_field_name("Q").is_ok());
        assert!(parse_field_name("32003").is_ok());
        assert!(parse_field_name("32004").is_err());
        assert!(parse_field_name("1").is_err());
    }

    #[test]
    fn corpus_passes() {
        let report = run_corpus().unwrap();
        assert_eq!(report.exit, 0, "{}", report.text);
    }
}
