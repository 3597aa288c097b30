//! Command-line surface: `generate`, `verify`, `search`, `export`,
//! `selfcheck`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 invalid configuration or
//! unreadable input, 3 construction failure, 4 search budget exhausted.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bent::{
    first_non_bent_direction, search_mubent, verify_mubent, DerivativeHistogram, FunctionTable,
    MubentReport, MubentSet, SearchConfig, SearchMode,
};
use crate::constructions::{
    mubent_from_spread_odd, mubent_from_spread_z2, scalar_spread_set_z2, trace_family_odd,
    trace_spread_set, verify_spread_set, SpreadReport, SpreadSet,
};
use crate::engine::{
    build_basis, build_family, build_real_mub_family, verify_complete_mub, verify_mub_family,
    MubFamily, PhaseMatrix, VerificationReport, VerifyOptions,
};
use crate::error::Error;
use crate::io::{
    from_json, phase_matrix_csv, to_json, to_json_line, Document, FamilyDoc, FamilyKind,
    PhaseMatrixDoc, SpreadSetDoc, SCHEMA,
};
use crate::selfcheck::{run_selfcheck, SelfcheckOptions};
use crate::zmod::{
    find_self_dual_basis_with, is_prime, FieldTable, DEFAULT_SEARCH_BUDGET, DEFAULT_SEARCH_SEED,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CONSTRUCTION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// Largest `n` accepted by `--construction real-z2`, which searches all
/// `2^(2^n)` tables.
pub const REAL_Z2_MAX_N: usize = 4;

#[derive(Debug, Clone, Parser)]
#[command(
    name = "mubforge",
    version,
    about = "Exact constructions and certification of complete sets of mutually unbiased bases"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_SEED)]
    pub seed: u64,
    /// Work budget for searches (default depends on the command).
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Worker threads; 0 uses all cores. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub parallelism: usize,
    /// Stop verification at the first failure.
    #[arg(long, global = true)]
    pub fail_fast: bool,
    /// Modulus polynomial table replacing the builtin one (overrides
    /// MUBFORGE_FIELD_TABLE).
    #[arg(long, global = true, value_name = "PATH")]
    pub field_table: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Build a mubent set and its complete MUB family, and write them as JSON.
    Generate(GenerateArgs),
    /// Certify basis files, a function family, or a spread set.
    Verify(VerifyArgs),
    /// Search for largest families with pairwise bent differences.
    Search(SearchArgs),
    /// Re-emit a phase matrix as JSON, or as lossy CSV with --lossy.
    Export(ExportArgs),
    /// Run the built-in invariant suite and print a pass/fail table.
    Selfcheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    /// `x -> Tr(a x^2)` over GF(p^n), p odd.
    TraceOdd,
    /// Quadratic forms of the trace spread set `Tr(a x_i x_j)`, p odd.
    SpreadSymOdd,
    /// Lifted quadratic forms of `{cI}` in a self-dual basis of GF(2^n).
    SpreadZ2,
    /// A largest pairwise-bent family of Z_2-valued tables (real bases).
    RealZ2,
    /// Spread set read from `--input`.
    FromFile,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[arg(long = "p")]
    pub p: Option<u32>,
    #[arg(long = "n")]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// Spread set JSON for `--construction from-file`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "mubforge-out")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// JSON files, or a directory whose `*.json` files are read in name order.
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Do not require N + 1 bases.
    #[arg(long)]
    pub partial: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long = "p")]
    pub p: u32,
    #[arg(long = "n")]
    pub n: usize,
    #[arg(long)]
    pub codomain: u32,
    /// Sample seeded random tables instead of enumerating all of them.
    #[arg(long)]
    pub randomized: bool,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 16)]
    pub max_results: usize,
    /// JSON-lines file; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    /// Phase matrix or function table JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Numerically evaluated CSV (row,col,re,im) instead of exact JSON.
    #[arg(long)]
    pub lossy: bool,
}

/// An error carrying its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(e: impl ToString) -> Self {
        Self {
            code: EXIT_INVALID,
            message: e.to_string(),
        }
    }

    fn construction(e: impl ToString) -> Self {
        Self {
            code: EXIT_CONSTRUCTION,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

impl RunConfig {
    /// Checks the cross-argument invariants clap cannot express.
    pub fn validate(&self) -> CliResult<()> {
        if self.budget == Some(0) {
            return Err(CliError::invalid("--budget must be positive"));
        }
        match &self.command {
            Command::Generate(g) => {
                let needs_pn = g.construction != Construction::FromFile;
                if needs_pn && (g.p.is_none() || g.n.is_none()) {
                    return Err(CliError::invalid("generate needs --p and --n"));
                }
                if let Some(p) = g.p {
                    if !is_prime(p) {
                        return Err(CliError::invalid(Error::NonPrimeModulus(p)));
                    }
                    match g.construction {
                        Construction::TraceOdd | Construction::SpreadSymOdd if p == 2 => {
                            return Err(CliError::invalid(format!(
                                "construction {} needs an odd prime, got p = 2",
                                construction_name(g.construction)
                            )));
                        }
                        Construction::SpreadZ2 | Construction::RealZ2 if p != 2 => {
                            return Err(CliError::invalid(format!(
                                "construction {} needs p = 2, got p = {p}",
                                construction_name(g.construction)
                            )));
                        }
                        _ => {}
                    }
                }
                if g.n == Some(0) {
                    return Err(CliError::invalid("--n must be positive"));
                }
                if g.construction == Construction::RealZ2 && g.n.is_some_and(|n| n > REAL_Z2_MAX_N)
                {
                    return Err(CliError::invalid(format!(
                        "real-z2 searches all tables and is limited to n <= {REAL_Z2_MAX_N}"
                    )));
                }
                if g.construction == Construction::FromFile && g.input.is_none() {
                    return Err(CliError::invalid("from-file needs --input"));
                }
            }
            Command::Search(s) => {
                if !is_prime(s.p) {
                    return Err(CliError::invalid(Error::NonPrimeModulus(s.p)));
                }
                if s.n == 0 {
                    return Err(CliError::invalid("--n must be positive"));
                }
                if s.codomain != s.p && !(s.p == 2 && s.codomain == 4) {
                    return Err(CliError::invalid(format!(
                        "codomain must be p, or 4 when p = 2; got p = {}, codomain = {}",
                        s.p, s.codomain
                    )));
                }
                if s.max_results == 0 {
                    return Err(CliError::invalid("--max-results must be positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn verify_options(&self) -> VerifyOptions {
        VerifyOptions {
            parallelism: self.parallelism,
            fail_fast: self.fail_fast,
        }
    }

    /// `--field-table`, else `MUBFORGE_FIELD_TABLE`, else the builtin table.
    pub fn field_table(&self) -> CliResult<FieldTable> {
        match &self.field_table {
            Some(path) => FieldTable::load(path),
            None => FieldTable::from_env(),
        }
        .map_err(CliError::invalid)
    }
}

fn construction_name(c: Construction) -> String {
    c.to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default()
}

/// Runs `f` on a pool of `parallelism` threads (the global pool for 0).
fn with_pool<T: Send>(parallelism: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    if parallelism == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(CliError::invalid)?;
    Ok(pool.install(f))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cfg, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    cfg.validate()?;
    match &cfg.command {
        Command::Generate(args) => cmd_generate(cfg, args, out),
        Command::Verify(args) => cmd_verify(cfg, args, out),
        Command::Search(args) => cmd_search(cfg, args, out),
        Command::Export(args) => cmd_export(args, out),
        Command::Selfcheck => cmd_selfcheck(cfg, out),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(CliError::invalid)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn parse_document(name: &str, text: &str) -> CliResult<Document> {
    from_json(text).map_err(|e| CliError::invalid(format!("{name}: {e}")))
}

/// Settings shared by [`generate_files`] callers.
#[derive(Debug, Clone)]
pub struct GenerateContext {
    pub fields: FieldTable,
    pub seed: u64,
    pub budget: Option<u64>,
}

/// A generated family and the files describing it, in write order.
#[derive(Debug, Clone)]
pub struct Generated {
    pub construction: Construction,
    pub p: u32,
    pub n: usize,
    pub kind: FamilyKind,
    pub family: MubFamily,
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

impl Generated {
    pub fn summary(&self) -> String {
        let dim = self.family.dim().unwrap_or(0);
        format!("N={dim}, bases={}", self.family.len())
    }
}

#[derive(Serialize)]
struct GenerateSummary<'a> {
    schema: &'a str,
    #[serde(rename = "type")]
    kind_tag: &'a str,
    construction: Construction,
    p: u32,
    n: usize,
    #[serde(rename = "N")]
    dim: usize,
    bases: usize,
    kind: FamilyKind,
    files: Vec<&'a str>,
}

/// Builds the family for one construction without touching the disk
/// (except to read `--input`).
pub fn generate_files(args: &GenerateArgs, ctx: &GenerateContext) -> CliResult<Generated> {
    let mut spread: Option<SpreadSet> = None;
    let (functions, kind) = match args.construction {
        Construction::TraceOdd => {
            let field = field_for(ctx, args)?;
            let set = trace_family_odd(&field).map_err(CliError::construction)?;
            (set.into_functions(), FamilyKind::Mubent)
        }
        Construction::SpreadSymOdd => {
            let field = field_for(ctx, args)?;
            let s = trace_spread_set(&field).map_err(CliError::construction)?;
            let set = mubent_from_spread_odd(&s).map_err(CliError::construction)?;
            spread = Some(s);
            (set.into_functions(), FamilyKind::Mubent)
        }
        Construction::SpreadZ2 => {
            let field = field_for(ctx, args)?;
            let basis = find_self_dual_basis_with(
                &field,
                ctx.seed,
                ctx.budget.unwrap_or(DEFAULT_SEARCH_BUDGET),
            )
            .map_err(|e| match e {
                Error::BudgetExhausted { .. } => CliError {
                    code: EXIT_BUDGET,
                    message: e.to_string(),
                },
                e => CliError::construction(e),
            })?;
            let s = scalar_spread_set_z2(&field, &basis).map_err(CliError::construction)?;
            let set = mubent_from_spread_z2(&s).map_err(CliError::construction)?;
            spread = Some(s);
            (set.into_functions(), FamilyKind::Mubent)
        }
        Construction::RealZ2 => {
            let n = args.n.expect("validated");
            let mut cfg = SearchConfig::exhaustive(2, n, 2);
            cfg.max_results = 1;
            // families of Z_2-valued tables have at most 2^(n-1) members
            cfg.stop_at = Some(1 << (n - 1));
            if let Some(b) = ctx.budget {
                cfg.budget = b;
            }
            let outcome = search_mubent(&cfg).map_err(CliError::construction)?;
            if outcome.budget_exhausted {
                return Err(CliError {
                    code: EXIT_BUDGET,
                    message: format!("search budget {} exhausted", cfg.budget),
                });
            }
            let family = outcome
                .families
                .into_iter()
                .next()
                .ok_or_else(|| CliError::construction("search found no family"))?;
            (family, FamilyKind::PairwiseBent)
        }
        Construction::FromFile => {
            let path = args.input.as_ref().expect("validated");
            let name = path.display().to_string();
            let Document::SpreadSet(doc) = parse_document(&name, &read_file(path)?)? else {
                return Err(CliError::invalid(format!(
                    "{name}: expected a spread_set document"
                )));
            };
            if args.p.is_some_and(|p| p != doc.p) || args.n.is_some_and(|n| n != doc.n) {
                return Err(CliError::invalid(format!(
                    "{name} holds a spread set over Z_{}^{}, which does not match --p/--n",
                    doc.p, doc.n
                )));
            }
            let matrices = doc.matrices().map_err(CliError::invalid)?;
            let report = verify_spread_set(&matrices).map_err(CliError::construction)?;
            if !report.ok {
                return Err(CliError::construction(format!(
                    "{name} is not a spread set: {}",
                    spread_summary(&report)
                )));
            }
            let s = SpreadSet::new(matrices).map_err(CliError::construction)?;
            let set = if s.p() == 2 {
                mubent_from_spread_z2(&s)
            } else {
                mubent_from_spread_odd(&s)
            }
            .map_err(CliError::construction)?;
            spread = Some(s);
            (set.into_functions(), FamilyKind::Mubent)
        }
    };

    let first = &functions[0];
    let (p, n) = (first.p(), first.n());
    let family = match kind {
        FamilyKind::Mubent => build_family(&functions),
        FamilyKind::PairwiseBent => build_real_mub_family(n, &functions),
    }
    .map_err(CliError::construction)?;

    let mut files = vec![(
        "mubent.json".to_string(),
        to_json(&Document::FunctionFamily(
            FamilyDoc::new(&functions, kind).map_err(CliError::construction)?,
        )),
    )];
    if let Some(s) = &spread {
        files.push((
            "spread.json".into(),
            to_json(&Document::SpreadSet(SpreadSetDoc::from(s))),
        ));
    }
    let width = (family.len() - 1).to_string().len().max(2);
    for (i, basis) in family.bases().iter().enumerate() {
        files.push((
            format!("basis_{i:0width$}.json"),
            to_json(&Document::PhaseMatrix(PhaseMatrixDoc::from(basis))),
        ));
    }
    Ok(Generated {
        construction: args.construction,
        p,
        n,
        kind,
        family,
        files,
    })
}

fn field_for(ctx: &GenerateContext, args: &GenerateArgs) -> CliResult<crate::zmod::GaloisField> {
    let (p, n) = (args.p.expect("validated"), args.n.expect("validated"));
    ctx.fields.field(p, n).map_err(CliError::invalid)
}

pub fn cmd_generate(cfg: &RunConfig, args: &GenerateArgs, out: &mut dyn Write) -> CliResult<i32> {
    let ctx = GenerateContext {
        fields: cfg.field_table()?,
        seed: cfg.seed,
        budget: cfg.budget,
    };
    let generated = with_pool(cfg.parallelism, || generate_files(args, &ctx))??;
    std::fs::create_dir_all(&args.output)
        .map_err(|e| CliError::invalid(format!("{}: {e}", args.output.display())))?;
    for (name, contents) in &generated.files {
        write_file(&args.output.join(name), contents)?;
    }
    if cfg.json {
        let summary = GenerateSummary {
            schema: SCHEMA,
            kind_tag: "generate_summary",
            construction: generated.construction,
            p: generated.p,
            n: generated.n,
            dim: generated.family.dim().unwrap_or(0),
            bases: generated.family.len(),
            kind: generated.kind,
            files: generated.files.iter().map(|(n, _)| n.as_str()).collect(),
        };
        emit(out, &format!("{}\n", to_json_line(&summary)))?;
    } else {
        emit(out, &format!("{}\n", generated.summary()))?;
    }
    Ok(EXIT_OK)
}

/// What a function family claims and whether the claim holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionsCheck {
    pub claim: FamilyKind,
    pub ok: bool,
    pub summary: String,
    pub report: MubentReport,
}

/// Bentness of a single table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BentCheck {
    pub input: String,
    pub bent: bool,
    pub failing_direction: Option<DerivativeHistogram>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadCheck {
    pub ok: bool,
    pub summary: String,
    pub report: SpreadReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOutput {
    pub schema: &'static str,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub ok: bool,
    pub inputs: Vec<String>,
    /// "complete" (N + 1 bases required) or "partial".
    pub claim: &'static str,
    /// True when the bases were rebuilt from function tables rather than read.
    pub reconstructed: bool,
    pub functions: Option<FunctionsCheck>,
    pub spread: Option<SpreadCheck>,
    pub tables: Vec<BentCheck>,
    pub family: Option<VerificationReport>,
}

impl VerifyOutput {
    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        if let Some(f) = &self.functions {
            lines.push(format!("functions: {}", f.summary));
        }
        if let Some(s) = &self.spread {
            lines.push(format!("spread set: {}", s.summary));
        }
        for t in &self.tables {
            lines.push(format!(
                "{}: {}",
                t.input,
                if t.bent { "bent" } else { "not bent" }
            ));
        }
        if let Some(r) = &self.family {
            let mut line = format!(
                "bases: {} checked, {} pairs, {} inner products, {}",
                r.bases_checked,
                r.pairs_checked,
                r.inner_products_checked,
                if r.ok { "ok" } else { "FAILED" }
            );
            if let Some(f) = &r.first_failure {
                line.push_str(&format!(
                    " ({:?} at bases {:?}, vectors {:?}: found {}, expected {})",
                    f.kind, f.bases, f.vectors, f.found, f.expected
                ));
            }
            lines.push(line);
        }
        lines.push(if self.ok {
            "ok".into()
        } else {
            "verification failed".into()
        });
        lines.join("\n") + "\n"
    }
}

/// Verifies parsed documents. Phase matrices are checked as a family in the
/// order given; a function family without phase matrices is expanded into
/// its bases first.
pub fn verify_documents(
    docs: &[(String, Document)],
    partial: bool,
    opts: VerifyOptions,
) -> CliResult<VerifyOutput> {
    if docs.is_empty() {
        return Err(CliError::invalid("no documents to verify"));
    }
    let mut bases: Vec<PhaseMatrix> = Vec::new();
    let mut functions: Option<(FamilyKind, Vec<FunctionTable>)> = None;
    let mut spread = None;
    let mut tables = Vec::new();
    for (name, doc) in docs {
        let bad = |e: Error| CliError::invalid(format!("{name}: {e}"));
        match doc {
            Document::PhaseMatrix(d) => bases.push(PhaseMatrix::try_from(d.clone()).map_err(bad)?),
            Document::FunctionFamily(d) => {
                if functions.is_some() {
                    return Err(CliError::invalid("more than one function family given"));
                }
                functions = Some((d.kind, d.tables().map_err(bad)?));
            }
            Document::SpreadSet(d) => {
                if spread.is_some() {
                    return Err(CliError::invalid("more than one spread set given"));
                }
                let report = verify_spread_set(&d.matrices().map_err(bad)?).map_err(bad)?;
                spread = Some(SpreadCheck {
                    ok: report.ok,
                    summary: spread_summary(&report),
                    report,
                });
            }
            Document::FunctionTable(d) => {
                let f = FunctionTable::try_from(d.clone()).map_err(bad)?;
                let failing_direction = first_non_bent_direction(&f);
                tables.push(BentCheck {
                    input: name.clone(),
                    bent: failing_direction.is_none(),
                    failing_direction,
                });
            }
        }
    }

    let functions_check = match &functions {
        Some((claim, tables)) => {
            let report = verify_mubent(tables).map_err(CliError::invalid)?;
            let ok = match claim {
                FamilyKind::Mubent => report.ok,
                FamilyKind::PairwiseBent => report.first_failure.is_none(),
            };
            let summary = match claim {
                FamilyKind::PairwiseBent if ok => format!(
                    "pairwise-bent family of {} functions, {} pairs bent",
                    report.size, report.pairs_checked
                ),
                _ => report.summary(),
            };
            Some(FunctionsCheck {
                claim: *claim,
                ok,
                summary,
                report,
            })
        }
        None => None,
    };

    let claim_partial = partial || matches!(functions, Some((FamilyKind::PairwiseBent, _)));
    let mut reconstructed = false;
    let family = if !bases.is_empty() {
        Some(MubFamily::from_bases(bases, Vec::new()).map_err(CliError::invalid)?)
    } else if let Some((kind, tables)) = &functions {
        reconstructed = true;
        Some(
            match kind {
                FamilyKind::Mubent => build_family(tables),
                FamilyKind::PairwiseBent => build_real_mub_family(tables[0].n(), tables),
            }
            .map_err(CliError::invalid)?,
        )
    } else {
        None
    };
    let family_report = match &family {
        Some(f) if claim_partial => Some(verify_mub_family(f, opts).map_err(CliError::invalid)?),
        Some(f) => Some(verify_complete_mub(f, opts).map_err(CliError::invalid)?),
        None => None,
    };

    let ok = functions_check.as_ref().is_none_or(|f| f.ok)
        && spread.as_ref().is_none_or(|s| s.ok)
        && tables.iter().all(|t| t.bent)
        && family_report.as_ref().is_none_or(|r| r.ok);
    Ok(VerifyOutput {
        schema: SCHEMA,
        kind: "verification_report",
        ok,
        inputs: docs.iter().map(|(n, _)| n.clone()).collect(),
        claim: if claim_partial { "partial" } else { "complete" },
        reconstructed,
        functions: functions_check,
        spread,
        tables,
        family: family_report,
    })
}

fn spread_summary(r: &SpreadReport) -> String {
    let mut parts = Vec::new();
    if r.size != r.expected_size {
        parts.push(format!("{} matrices, expected {}", r.size, r.expected_size));
    }
    if let Some((i, j)) = r.first_failure {
        parts.push(format!("difference of members {i} and {j} is singular"));
    }
    if parts.is_empty() {
        format!(
            "{} matrices, {} differences nonsingular",
            r.size, r.pairs_checked
        )
    } else {
        parts.join("; ")
    }
}

/// Input files in order; a directory contributes its `*.json` files sorted
/// by name. Names are reported relative to the directory.
fn collect_inputs(paths: &[PathBuf]) -> CliResult<Vec<(String, PathBuf)>> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<(String, PathBuf)> = std::fs::read_dir(path)
                .map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?
                .filter_map(|e| e.ok())
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), p))
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.display().to_string());
            files.push((name, path.clone()));
        }
    }
    Ok(files)
}

pub fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mut docs = Vec::new();
    for (name, path) in collect_inputs(&args.input)? {
        let doc = parse_document(&name, &read_file(&path)?)?;
        docs.push((name, doc));
    }
    let opts = cfg.verify_options();
    let report = with_pool(cfg.parallelism, || {
        verify_documents(&docs, args.partial, opts)
    })??;
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    if let Some(path) = &args.output {
        write_file(path, &json)?;
    }
    if cfg.json {
        emit(out, &json)?;
    } else {
        emit(out, &report.summary())?;
    }
    Ok(if report.ok {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAILED
    })
}

#[derive(Serialize)]
struct SearchFamilyLine<'a> {
    schema: &'a str,
    #[serde(rename = "type")]
    kind: &'a str,
    p: u32,
    n: usize,
    codomain: u32,
    size: usize,
    exhaustive: bool,
    functions: Vec<&'a [u32]>,
}

#[derive(Serialize)]
struct SearchSummaryLine<'a> {
    schema: &'a str,
    #[serde(rename = "type")]
    kind: &'a str,
    p: u32,
    n: usize,
    codomain: u32,
    mode: SearchMode,
    max_family_size: usize,
    families: usize,
    exhaustive: bool,
    budget_exhausted: bool,
    candidates_examined: u64,
    bent_candidates: usize,
    work: u64,
}

pub fn cmd_search(cfg: &RunConfig, args: &SearchArgs, out: &mut dyn Write) -> CliResult<i32> {
    let mode = if args.randomized {
        SearchMode::Randomized {
            seed: cfg.seed,
            samples: args.samples,
        }
    } else {
        SearchMode::Exhaustive
    };
    let mut sc = SearchConfig::exhaustive(args.p, args.n, args.codomain);
    sc.max_results = args.max_results;
    sc.mode = mode;
    if let Some(b) = cfg.budget {
        sc.budget = b;
    }
    let outcome = with_pool(cfg.parallelism, || search_mubent(&sc))?.map_err(CliError::invalid)?;

    let mut lines = String::new();
    for family in &outcome.families {
        let line = SearchFamilyLine {
            schema: SCHEMA,
            kind: "search_family",
            p: args.p,
            n: args.n,
            codomain: args.codomain,
            size: family.len(),
            exhaustive: outcome.exhaustive,
            functions: family.iter().map(FunctionTable::values).collect(),
        };
        lines.push_str(&to_json_line(&line));
        lines.push('\n');
    }
    let summary = SearchSummaryLine {
        schema: SCHEMA,
        kind: "search_summary",
        p: args.p,
        n: args.n,
        codomain: args.codomain,
        mode,
        max_family_size: outcome.max_family_size,
        families: outcome.families.len(),
        exhaustive: outcome.exhaustive,
        budget_exhausted: outcome.budget_exhausted,
        candidates_examined: outcome.candidates_examined,
        bent_candidates: outcome.bent_candidates,
        work: outcome.work,
    };
    let summary_line = to_json_line(&summary) + "\n";
    lines.push_str(&summary_line);

    match &args.output {
        Some(path) => {
            write_file(path, &lines)?;
            if cfg.json {
                emit(out, &summary_line)?;
            } else {
                emit(
                    out,
                    &format!(
                        "max family size {}, {} families, exhaustive={}\n",
                        outcome.max_family_size,
                        outcome.families.len(),
                        outcome.exhaustive
                    ),
                )?;
            }
        }
        None => emit(out, &lines)?,
    }
    if outcome.budget_exhausted && matches!(mode, SearchMode::Exhaustive) {
        return Ok(EXIT_BUDGET);
    }
    Ok(EXIT_OK)
}

pub fn cmd_export(args: &ExportArgs, out: &mut dyn Write) -> CliResult<i32> {
    let name = args.input.display().to_string();
    let matrix = match parse_document(&name, &read_file(&args.input)?)? {
        Document::PhaseMatrix(d) => PhaseMatrix::try_from(d).map_err(CliError::invalid)?,
        Document::FunctionTable(d) => {
            let f = FunctionTable::try_from(d).map_err(CliError::invalid)?;
            build_basis(&f).map_err(CliError::invalid)?
        }
        _ => {
            return Err(CliError::invalid(format!(
                "{name}: export takes a phase_matrix or function_table document"
            )))
        }
    };
    let text = if args.lossy {
        phase_matrix_csv(&matrix)
    } else {
        to_json(&Document::PhaseMatrix(PhaseMatrixDoc::from(&matrix)))
    };
    match &args.output {
        Some(path) => write_file(path, &text)?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

pub fn cmd_selfcheck(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<i32> {
    let opts = SelfcheckOptions {
        fields: cfg.field_table()?,
        seed: cfg.seed,
        parallelism: cfg.parallelism,
    };
    let results = with_pool(cfg.parallelism, || run_selfcheck(&opts))?;
    let ok = results.iter().all(|r| r.ok);
    if cfg.json {
        #[derive(Serialize)]
        struct Table<'a> {
            schema: &'a str,
            #[serde(rename = "type")]
            kind: &'a str,
            ok: bool,
            checks: &'a [crate::selfcheck::CheckResult],
        }
        let table = Table {
            schema: SCHEMA,
            kind: "selfcheck",
            ok,
            checks: &results,
        };
        emit(
            out,
            &(serde_json::to_string_pretty(&table).expect("serializes") + "\n"),
        )?;
    } else {
        let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
        let mut text = String::new();
        for r in &results {
            text.push_str(&format!(
                "{}  {:width$}  {}\n",
                if r.ok { "PASS" } else { "FAIL" },
                r.name,
                r.detail
            ));
        }
        text.push_str(if ok {
            "all checks passed\n"
        } else {
            "some checks failed\n"
        });
        emit(out, &text)?;
    }
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Mubent set of a [`Generated`] family, if it has one.
pub fn mubent_set(g: &Generated) -> Option<MubentSet> {
    match g.kind {
        FamilyKind::Mubent => MubentSet::new(g.family.provenance().to_vec()).ok(),
        FamilyKind::PairwiseBent => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("mubforge").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parity_mismatch_is_invalid() {
        let (code, _, err) = run_args(&[
            "generate",
            "--p",
            "2",
            "--n",
            "3",
            "--construction",
            "trace-odd",
        ]);
        assert_eq!(code, EXIT_INVALID);
        assert!(err.contains("odd prime"), "{err}");
        let (code, _, _) = run_args(&[
            "generate",
            "--p",
            "3",
            "--n",
            "1",
            "--construction",
            "spread-z2",
        ]);
        assert_eq!(code, EXIT_INVALID);
    }

    #[test]
    fn bad_arguments_are_invalid() {
        assert_eq!(
            run_args(&[
                "generate",
                "--p",
                "4",
                "--n",
                "1",
                "--construction",
                "trace-odd"
            ])
            .0,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&["search", "--p", "3", "--n", "1", "--codomain", "4"]).0,
            EXIT_INVALID
        );
        assert_eq!(
            run_args(&[
                "search",
                "--p",
                "3",
                "--n",
                "1",
                "--codomain",
                "3",
                "--budget",
                "0"
            ])
            .0,
            EXIT_INVALID
        );
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_INVALID);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn generate_in_memory() {
        let args = GenerateArgs {
            p: Some(3),
            n: Some(2),
            construction: Construction::TraceOdd,
            input: None,
            output: PathBuf::new(),
        };
        let ctx = GenerateContext {
            fields: FieldTable::builtin(),
            seed: 1,
            budget: None,
        };
        let g = generate_files(&args, &ctx).unwrap();
        assert_eq!(g.summary(), "N=9, bases=10");
        assert_eq!(g.files.len(), 11);
        assert_eq!(g.files[1].0, "basis_00.json");
        assert!(mubent_set(&g).is_some());
    }

    #[test]
    fn search_budget_exit_code() {
        let (code, out, _) = run_args(&[
            "search",
            "--p",
            "2",
            "--n",
            "2",
            "--codomain",
            "4",
            "--budget",
            "10",
        ]);
        assert_eq!(code, EXIT_BUDGET);
        assert!(out.contains("\"budget_exhausted\":true"));
    }

    #[test]
    fn verify_rejects_wrong_size_mubent_claim() {
        let t = |v: &[i64]| FunctionTable::new(3, 1, 3, v.to_vec()).unwrap();
        let doc = FamilyDoc::new(&[t(&[0, 0, 0]), t(&[0, 1, 1])], FamilyKind::Mubent).unwrap();
        let out = verify_documents(
            &[("m.json".into(), Document::FunctionFamily(doc))],
            false,
            VerifyOptions::default(),
        )
        .unwrap();
        assert!(!out.ok);
        assert!(out.summary().contains("not a full mubent set"));
    }
}
