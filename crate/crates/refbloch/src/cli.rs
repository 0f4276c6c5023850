//! Command-line front end. Exit codes: 0 all green, 1 refutation or
//! failure, 2 usage error.

use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use refbloch_core::certifier::{
    check_certificate, refute_via_invariants, LocalStore, Proved, Prover, RefuteOutcome,
    SearchConfig, TacticError,
};
use refbloch_core::configurations::{
    boundary, canonicalize, induced_d1, ConfigChain, ConfigTuple, RFModuleElement, ZTuple,
};
use refbloch_core::field::{BackendKind, Rational, TowerElement, DEFAULT_DEPTH_CAP};
use refbloch_core::milnor::{halve_positive_symbol, mod2_reduce, MilnorSymbol, Mod2NormalForm};

use crate::catalog::failure_reason;
use crate::fixtures;
use crate::json::{
    config_chain_to_json, km_element_to_json, proof_to_json, rf_module_element_to_json,
    z_tuple_to_json, JsonError, JsonField, Session,
};
use crate::parse::{eval_point, parse_expr, parse_point, ParseError};
use crate::suite::{run_suite, Format, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Rational,
    Tower,
}

impl From<BackendArg> for BackendKind {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => BackendKind::Rational,
            BackendArg::Tower => BackendKind::Tower,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tactic {
    PsiAdditivity,
    PsiSwap,
    PsiOrder2,
    PsiSquare,
    PsiSquareDouble,
    PsiVanish,
    TrivialAction,
    CConstant,
    CSymmetric,
}

#[derive(Debug, Parser)]
#[command(
    name = "refbloch",
    version,
    about = "Exact refined Bloch group computations with checkable relation certificates"
)]
pub struct Cli {
    /// Arithmetic backend.
    #[arg(
        long,
        env = "BACKEND",
        value_enum,
        default_value = "tower",
        global = true
    )]
    pub backend: BackendArg,
    /// Seed for every random choice.
    #[arg(long, env = "SEED", default_value_t = 1, global = true)]
    pub seed: u64,
    /// Random instances per certified tactic in the suite.
    #[arg(long, env = "SAMPLES", default_value_t = 20, global = true)]
    pub samples: usize,
    /// Rounds of `t -> 1-t`, `t -> 1/t` in the certificate search pool.
    #[arg(
        long = "pool-depth",
        env = "POOL_DEPTH",
        default_value_t = 3,
        global = true
    )]
    pub pool_depth: usize,
    /// Maximum number of adjoined square roots.
    #[arg(long = "tower-depth", env = "TOWER_DEPTH", default_value_t = DEFAULT_DEPTH_CAP, global = true)]
    pub tower_depth: usize,
    #[arg(
        long,
        env = "FORMAT",
        value_enum,
        default_value = "text",
        global = true
    )]
    pub format: FormatArg,
    /// Suite entries run concurrently.
    #[arg(long, env = "WORKERS", default_value_t = 4, global = true)]
    pub workers: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an expression such as "sqrt(2)*sqrt(2)".
    Eval { expr: String },
    /// Certify an identity with a tactic.
    Certify {
        #[arg(value_enum)]
        tactic: Tactic,
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
        /// psi index (1 or 2); both when omitted.
        #[arg(long)]
        index: Option<u8>,
        /// Write the claim JSON here.
        #[arg(long)]
        claim_out: Option<PathBuf>,
        /// Write the certificate JSON here.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Check a certificate against a claim.
    CheckCert { claim: PathBuf, cert: PathBuf },
    /// Try to refute a claim through the lambda invariants.
    Refute { claim: PathBuf },
    /// Canonical form of a tuple of distinct points ("inf" for infinity).
    Canonicalize {
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Alternating face boundary of a tuple.
    Boundary {
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Induced differential on a generator of R_F[Z_n].
    D1 {
        #[arg(required = true, allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Mod-2 normal form of a Milnor symbol.
    KmReduce {
        #[arg(required = true, allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Halve a Milnor symbol with positive entries.
    KmHalve {
        #[arg(required = true, allow_hyphen_values = true)]
        entries: Vec<String>,
    },
    /// Run the full verification suite.
    RunSuite {
        /// Record wall-clock times (reports then differ between runs).
        #[arg(long)]
        timings: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the shipped certificate bundles.
    GenFixtures {
        #[arg(long, default_value = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))]
        dir: PathBuf,
        /// Compare with the files on disk instead of writing.
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<refbloch_core::Error> for CliError {
    fn from(e: refbloch_core::Error) -> Self {
        match e {
            refbloch_core::Error::TowerOnly => CliError::Usage(e.to_string()),
            e => CliError::Failure(e.to_string()),
        }
    }
}

impl From<refbloch_core::field::FieldError> for CliError {
    fn from(e: refbloch_core::field::FieldError) -> Self {
        refbloch_core::Error::from(e).into()
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Core(e) => e.into(),
            e => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult = Result<i32, CliError>;

impl Cli {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            backend: self.backend.into(),
            seed: self.seed,
            samples: self.samples,
            pool_depth: self.pool_depth,
            tower_depth: self.tower_depth,
            format: self.format.into(),
            workers: self.workers,
            timings: false,
        }
    }

    fn search(&self) -> SearchConfig {
        self.run_config().search()
    }
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult {
    match (&cli.command, cli.backend) {
        (Command::RunSuite { timings, out: path }, _) => {
            run_suite_command(cli, *timings, path.as_ref(), out)
        }
        (Command::GenFixtures { dir, check }, _) => gen_fixtures(cli, dir, *check, out),
        (_, BackendArg::Rational) => run_in::<Rational>(cli, out),
        (_, BackendArg::Tower) => run_in::<TowerElement>(cli, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn run_in<F: JsonField>(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let mut session: Session<F> = Session::new(cli.tower_depth);
    let json = cli.format == FormatArg::Json;
    match &cli.command {
        Command::Eval { expr } => {
            let x = session.eval(&parse_expr(expr)?)?;
            emit(
                out,
                &if json {
                    pretty(&x.canonical_json())
                } else {
                    x.to_string()
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::Certify {
            tactic,
            x,
            y,
            index,
            claim_out,
            cert_out,
        } => certify::<F>(
            cli,
            &mut session,
            *tactic,
            x.as_deref(),
            y.as_deref(),
            *index,
            claim_out.as_ref(),
            cert_out.as_ref(),
            out,
        ),
        Command::CheckCert { claim, cert } => {
            let claim = session.claim(&read_json(claim)?)?;
            let cert = session.certificate(&read_json(cert)?)?;
            let ok = check_certificate(&claim, &cert)?;
            let status = if ok { "PROVED" } else { "FAIL" };
            emit(
                out,
                &if json {
                    pretty(&json!({ "status": status, "label": claim.label }))
                } else {
                    format!("{status}: {}", claim.label)
                },
            )?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Refute { claim } => {
            let claim = session.claim(&read_json(claim)?)?;
            let (status, reason, code) = match refute_via_invariants(&claim)? {
                RefuteOutcome::Refuted(reason) => ("REFUTED", reason, EXIT_FAILURE),
                RefuteOutcome::Unknown => (
                    "UNKNOWN",
                    "the invariants vanish on the target".to_string(),
                    EXIT_OK,
                ),
            };
            emit(
                out,
                &if json {
                    pretty(&json!({ "status": status, "reason": reason, "label": claim.label }))
                } else {
                    format!("{status}: {reason}")
                },
            )?;
            Ok(code)
        }
        Command::Canonicalize { points } => {
            let tuple = config_tuple(&mut session, points)?;
            let (class, z) = canonicalize(&tuple)?;
            let text = if json {
                pretty(&json!({ "class": F::class_to_json(&class), "tuple": z_tuple_to_json(&z) }))
            } else {
                format!("{class} {z}")
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::Boundary { points } => {
            let d = boundary(&ConfigChain::from_tuple(config_tuple(
                &mut session,
                points,
            )?))?;
            emit(
                out,
                &if json {
                    pretty(&config_chain_to_json(&d))
                } else {
                    d.to_string()
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::D1 { entries } => {
            let z = ZTuple::new(elements(&mut session, entries)?)?;
            let d = induced_d1(&RFModuleElement::generator(z))?;
            emit(
                out,
                &if json {
                    pretty(&rf_module_element_to_json(&d))
                } else {
                    d.to_string()
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::KmReduce { entries } => {
            let s = MilnorSymbol::new(elements(&mut session, entries)?)?;
            let nf = mod2_reduce(&s)?;
            let text = if json {
                pretty(&match nf {
                    Mod2NormalForm::Zero => json!({ "normal_form": "ZERO" }),
                    Mod2NormalForm::MinusOnes(n) => {
                        json!({ "normal_form": "MINUS_ONES", "degree": n })
                    }
                })
            } else {
                nf.to_string()
            };
            emit(out, &text)?;
            Ok(EXIT_OK)
        }
        Command::KmHalve { entries } => {
            let s = MilnorSymbol::new(elements(&mut session, entries)?)?;
            let h = halve_positive_symbol(&s)?;
            emit(
                out,
                &if json {
                    pretty(&km_element_to_json(&h))
                } else {
                    h.to_string()
                },
            )?;
            Ok(EXIT_OK)
        }
        Command::RunSuite { .. } | Command::GenFixtures { .. } => {
            unreachable!("dispatched before backend selection")
        }
    }
}

fn read_json(path: &PathBuf) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn elements<F: JsonField>(session: &mut Session<F>, args: &[String]) -> Result<Vec<F>, CliError> {
    args.iter()
        .map(|a| Ok(session.eval(&parse_expr(a)?)?))
        .collect()
}

fn config_tuple<F: JsonField>(
    session: &mut Session<F>,
    args: &[String],
) -> Result<ConfigTuple<F>, CliError> {
    let mut points = Vec::new();
    for a in args {
        let p = parse_point(a)?;
        let mut ctx = session.context().clone();
        points.push(eval_point::<F>(p.as_ref(), &mut ctx)?);
        if let Some(e) = p {
            session.eval(&e)?;
        }
    }
    Ok(ConfigTuple::new(points)?)
}

fn required<F: JsonField>(
    session: &mut Session<F>,
    arg: Option<&str>,
    name: &str,
) -> Result<F, CliError> {
    let text = arg.ok_or_else(|| CliError::Usage(format!("this tactic needs --{name}")))?;
    Ok(session.eval(&parse_expr(text)?)?)
}

#[allow(clippy::too_many_arguments)]
fn certify<F: JsonField>(
    cli: &Cli,
    session: &mut Session<F>,
    tactic: Tactic,
    x: Option<&str>,
    y: Option<&str>,
    index: Option<u8>,
    claim_out: Option<&PathBuf>,
    cert_out: Option<&PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    let store = LocalStore::<F>::default();
    let prover = Prover::new(cli.search(), &store);
    let indices: Vec<u8> = match index {
        Some(i @ (1 | 2)) => vec![i],
        Some(i) => return Err(CliError::Usage(format!("psi index {i} is not 1 or 2"))),
        None => vec![1, 2],
    };
    let mut runs: Vec<Result<Proved<F>, TacticError>> = Vec::new();
    match tactic {
        Tactic::PsiAdditivity | Tactic::PsiSwap => {
            let (a, b) = (required(session, x, "x")?, required(session, y, "y")?);
            for &i in &indices {
                runs.push(if tactic == Tactic::PsiSwap {
                    prover.psi_swap(i, &a, &b)
                } else {
                    prover.psi_additivity(i, &a, &b)
                });
            }
        }
        Tactic::PsiOrder2 => runs.extend(indices.iter().map(|&i| prover.psi_order2(i))),
        Tactic::PsiSquare | Tactic::PsiSquareDouble | Tactic::PsiVanish => {
            let a = required(session, x, "x")?;
            for &i in &indices {
                runs.push(match tactic {
                    Tactic::PsiSquare => prover.psi_square(i, &a),
                    Tactic::PsiSquareDouble => prover.psi_square_double(i, &a),
                    _ => prover.psi_vanish_positive(i, &a),
                });
            }
        }
        Tactic::TrivialAction => runs.push(prover.trivial_action(&required(session, x, "x")?)),
        Tactic::CConstant => {
            let (a, b) = (required(session, x, "x")?, required(session, y, "y")?);
            runs.push(prover.c_constant(&a, &b));
        }
        Tactic::CSymmetric => runs.push(prover.c_symmetric(&required(session, x, "x")?)),
    }
    if (claim_out.is_some() || cert_out.is_some()) && runs.len() != 1 {
        return Err(CliError::Usage(
            "writing files needs a single proof; pass --index".into(),
        ));
    }
    let json = cli.format == FormatArg::Json;
    let mut code = EXIT_OK;
    let mut reports = Vec::new();
    for run in runs {
        match run {
            Ok(p) => {
                let (claim, cert) = proof_to_json(&p.claim, &p.certificate)?;
                if let Some(path) = claim_out {
                    std::fs::write(path, pretty(&claim) + "\n")?;
                }
                if let Some(path) = cert_out {
                    std::fs::write(path, pretty(&cert) + "\n")?;
                }
                if json {
                    reports
                        .push(json!({ "status": "PROVED", "claim": claim, "certificate": cert }));
                } else {
                    emit(out, &pretty(&cert))?;
                    emit(out, &format!("PROVED: {}", p.claim.label))?;
                }
            }
            Err(TacticError::Failed(e)) => return Err(e.into()),
            Err(e @ TacticError::NotFound { .. }) => {
                code = EXIT_FAILURE;
                let TacticError::NotFound { label, .. } = &e else {
                    unreachable!()
                };
                if json {
                    reports.push(json!({ "status": "NOT_FOUND", "label": label, "reason": failure_reason(&e) }));
                } else {
                    emit(out, &format!("NOT_FOUND: {label} ({})", failure_reason(&e)))?;
                }
            }
        }
    }
    if json {
        emit(out, &pretty(&Value::Array(reports)))?;
    }
    Ok(code)
}

fn run_suite_command(
    cli: &Cli,
    timings: bool,
    path: Option<&PathBuf>,
    out: &mut dyn Write,
) -> CliResult {
    let config = RunConfig {
        timings,
        ..cli.run_config()
    };
    let report = run_suite(&config);
    let text = report.render(config.format);
    match path {
        Some(p) => std::fs::write(p, &text)?,
        None => emit(out, &text)?,
    }
    Ok(report.exit_code)
}

fn gen_fixtures(cli: &Cli, dir: &std::path::Path, check: bool, out: &mut dyn Write) -> CliResult {
    let search = cli.search();
    let bundles = [
        (
            BackendKind::Tower,
            fixtures::generate::<TowerElement>(&search)?,
        ),
        (
            BackendKind::Rational,
            fixtures::generate::<Rational>(&search)?,
        ),
    ];
    let mut code = EXIT_OK;
    for (kind, bundle) in bundles {
        let path = dir.join(fixtures::bundle_file_name(kind));
        let text = fixtures::render(&bundle);
        let proofs = bundle["proofs"].as_array().map_or(0, Vec::len);
        let missing = bundle["not_found"].as_array().map_or(0, Vec::len);
        if check {
            let same = std::fs::read_to_string(&path)
                .map(|t| t == text)
                .unwrap_or(false);
            emit(
                out,
                &format!(
                    "{} {}",
                    if same { "unchanged" } else { "differs" },
                    path.display()
                ),
            )?;
            if !same {
                code = EXIT_FAILURE;
            }
        } else {
            std::fs::create_dir_all(dir)?;
            std::fs::write(&path, text)?;
            emit(
                out,
                &format!(
                    "wrote {} ({proofs} proofs, {missing} not found)",
                    path.display()
                ),
            )?;
        }
    }
    Ok(code)
}
