//! Command-line front end: argument parsing and the subcommands.

pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use jacplane::atlas::{
    arrangement_poly, b_plus_curve, binomial_curve, combinatorial_tau, conjecture_harness,
    intersection_lattice, named_example, HarnessReport, LatticePoint,
};
use jacplane::{parse_poly, AnalysisConfig, Arrangement, Error, HomogPoly};

use report::{build_report, AnalysisReport, ReportOptions};

pub const SCHEMA: &str = include_str!("../schema/report.schema.json");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jacplane", version, about = "Graded invariants of reduced plane curves")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one curve given as polynomial text or a file.
    Analyze {
        /// Polynomial in x, y, z, e.g. "y^4 - x*z^3".
        poly: Option<String>,
        /// Read the polynomial from a file instead.
        #[arg(long, conflicts_with = "poly")]
        file: Option<PathBuf>,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print a polynomial from one of the built-in families.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Analyze one polynomial per line, emitting JSON lines in input order.
    Batch {
        file: PathBuf,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Lattice summary and analysis of a line arrangement file.
    Arrangement {
        file: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check that ν and the splitting type are constant on groups of
    /// arrangements with isomorphic intersection lattices.
    Conjecture {
        /// JSON array of arrangement file paths, or an array of such arrays.
        group_file: PathBuf,
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Print the JSON schema of the reports.
    Schema,
}

#[derive(Debug, Subcommand)]
pub enum Family {
    /// y^d + x^k z^(d-k).
    Binomial {
        d: u32,
        k: u32,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// x^2k + y^2k + z^2k - 2(x^k y^k + x^k z^k + y^k z^k), k odd.
    Bplus {
        k: u32,
        #[command(flatten)]
        chain: ChainArgs,
    },
    /// quartic_C, quartic_Cprime or quintic_4cusp.
    Named {
        name: String,
        #[command(flatten)]
        chain: ChainArgs,
    },
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    /// Analyze the generated curve.
    #[arg(long)]
    pub analyze: bool,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AnalysisArgs {
    /// Seed for prime selection.
    #[arg(long, env = "JACPLANE_SEED")]
    pub seed: Option<u64>,
    /// Run both τ and both n(f) algorithms (default for d ≤ 16).
    #[arg(long, overrides_with = "no_verify")]
    pub verify: bool,
    #[arg(long)]
    pub no_verify: bool,
    /// Total Milnor number, compared against τ.
    #[arg(long)]
    pub mu: Option<i64>,
    /// Declare the curve irreducible, enabling the mdr = 1 characterization.
    #[arg(long)]
    pub irreducible: bool,
    /// Analyze even if the curve looks non-reduced.
    #[arg(long)]
    pub allow_nonreduced: bool,
    /// Include wall-clock time in reports.
    #[arg(long)]
    pub timing: bool,
}

impl AnalysisArgs {
    pub fn config(&self) -> AnalysisConfig {
        let mut cfg = AnalysisConfig::default();
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.verify = if self.no_verify {
            Some(false)
        } else if self.verify {
            Some(true)
        } else {
            None
        };
        cfg.allow_nonreduced = self.allow_nonreduced;
        cfg
    }

    pub fn options(&self) -> ReportOptions {
        ReportOptions {
            mu: self.mu,
            irreducible: self.irreducible,
            timing: self.timing,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// JSON output (default).
    #[arg(long, conflicts_with = "table")]
    pub json: bool,
    /// Human-readable table.
    #[arg(long)]
    pub table: bool,
}

/// A failed command: message and exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input_error() { EXIT_INPUT } else { EXIT_INTERNAL },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message,
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

/// Prints the report and turns theorem violations into exit code 2.
fn emit_report(
    report: &AnalysisReport,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if output.table {
        write!(out, "{}", report.to_table())?;
    } else {
        writeln!(out, "{}", to_json(report))?;
    }
    Ok(warn_report(report, err)?)
}

fn warn_report(report: &AnalysisReport, err: &mut dyn Write) -> std::io::Result<i32> {
    if report.analysis.escalations > 0 {
        writeln!(
            err,
            "warning: {} extra prime(s) needed for agreement on {}",
            report.analysis.escalations, report.polynomial
        )?;
    }
    if report.violations == 0 {
        return Ok(EXIT_OK);
    }
    writeln!(err, "THEOREM CHECK VIOLATION on {}", report.polynomial)?;
    for c in report.theorem_checks.iter().filter(|c| !c.passed) {
        writeln!(err, "  {}: {}", c.name, c.detail)?;
    }
    if let Some(rcc) = report.rcc.as_ref().filter(|r| !r.consistent()) {
        writeln!(err, "  rcc: {}", rcc.note)?;
    }
    let a = &report.analysis;
    writeln!(
        err,
        "  raw: d={} mdr={} tau={} ar={:?} n={:?} milnor={:?}",
        a.degree, a.mdr, a.tau, a.ar_dims, a.n_dims, a.milnor_hilbert
    )?;
    Ok(EXIT_INTERNAL)
}

fn cmd_analyze(
    poly: Option<String>,
    file: Option<PathBuf>,
    analysis: &AnalysisArgs,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let text = match (poly, file) {
        (Some(p), None) => p,
        (None, Some(path)) => read_file(&path)?,
        _ => return Err(input_failure("give a polynomial or --file".into())),
    };
    let f = parse_poly(text.trim())?;
    let report = build_report(&f, &analysis.config(), &analysis.options())?;
    emit_report(&report, output, out, err)
}

fn cmd_generate(family: Family, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (f, chain): (HomogPoly, ChainArgs) = match family {
        Family::Binomial { d, k, chain } => (binomial_curve(d, k)?, chain),
        Family::Bplus { k, chain } => (b_plus_curve(k)?, chain),
        Family::Named { name, chain } => (named_example(&name)?, chain),
    };
    if !chain.analyze {
        writeln!(out, "{f}")?;
        return Ok(EXIT_OK);
    }
    let report = build_report(&f, &chain.analysis.config(), &chain.analysis.options())?;
    emit_report(&report, &chain.output, out, err)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemError {
    /// "input" or "internal".
    pub kind: String,
    pub message: String,
}

/// One line of batch output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    /// 1-based line number in the input file.
    pub line: usize,
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<AnalysisReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ItemError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub items: usize,
    pub analyzed: usize,
    pub input_errors: usize,
    pub internal_errors: usize,
    /// Failed theorem checks across all analyzed items.
    pub violations: usize,
    pub escalations: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFooter {
    pub summary: BatchSummary,
}

/// Non-empty, non-comment lines of a batch file with their line numbers.
pub fn batch_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.to_string()))
        .collect()
}

pub fn run_batch(
    lines: &[(usize, String)],
    analysis: &AnalysisArgs,
    jobs: usize,
) -> Result<(Vec<BatchItem>, BatchSummary), Failure> {
    let config = analysis.config();
    let opts = analysis.options();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure {
            code: EXIT_INTERNAL,
            message: format!("thread pool: {e}"),
        })?;
    let items: Vec<BatchItem> = pool.install(|| {
        lines
            .par_iter()
            .map(|(line, input)| {
                let result = parse_poly(input).and_then(|f| build_report(&f, &config, &opts));
                match result {
                    Ok(report) => BatchItem {
                        line: *line,
                        input: input.clone(),
                        report: Some(report),
                        error: None,
                    },
                    Err(e) => BatchItem {
                        line: *line,
                        input: input.clone(),
                        report: None,
                        error: Some(ItemError {
                            kind: if e.is_input_error() { "input" } else { "internal" }.into(),
                            message: e.to_string(),
                        }),
                    },
                }
            })
            .collect()
    });
    let reports = items.iter().filter_map(|i| i.report.as_ref());
    let summary = BatchSummary {
        items: items.len(),
        analyzed: reports.clone().count(),
        input_errors: items
            .iter()
            .filter(|i| i.error.as_ref().is_some_and(|e| e.kind == "input"))
            .count(),
        internal_errors: items
            .iter()
            .filter(|i| i.error.as_ref().is_some_and(|e| e.kind == "internal"))
            .count(),
        violations: reports.clone().map(|r| r.violations).sum(),
        escalations: reports.map(|r| r.analysis.escalations).sum(),
    };
    Ok((items, summary))
}

fn cmd_batch(
    file: &Path,
    jobs: usize,
    analysis: &AnalysisArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let lines = batch_lines(&read_file(file)?);
    let (items, summary) = run_batch(&lines, analysis, jobs)?;
    let mut code = EXIT_OK;
    for item in &items {
        writeln!(out, "{}", serde_json::to_string(item).expect("items serialize"))?;
        if let Some(r) = &item.report {
            if warn_report(r, err)? != EXIT_OK {
                code = EXIT_INTERNAL;
            }
        }
        if let Some(e) = item.error.as_ref().filter(|e| e.kind == "internal") {
            writeln!(err, "internal error on line {}: {}", item.line, e.message)?;
            code = EXIT_INTERNAL;
        }
    }
    if !items.is_empty() {
        let footer = BatchFooter { summary };
        writeln!(out, "{}", serde_json::to_string(&footer).expect("footer serializes"))?;
    }
    Ok(code)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub lines: usize,
    pub points: usize,
    /// `[multiplicity, count]` pairs, ascending.
    pub multiplicity_counts: Vec<[usize; 2]>,
    pub incidences: Vec<LatticePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrangementReport {
    pub lines: Vec<[i64; 3]>,
    pub lattice: LatticeSummary,
    pub tau_combinatorial: i64,
    /// `τ` from linear algebra equals the combinatorial value.
    pub tau_matches: bool,
    pub report: AnalysisReport,
}

pub fn arrangement_report(
    arr: &Arrangement,
    analysis: &AnalysisArgs,
) -> Result<ArrangementReport, Error> {
    let lattice = intersection_lattice(arr)?;
    let f = arrangement_poly(arr)?;
    let report = build_report(&f, &analysis.config(), &analysis.options())?;
    let tau_combinatorial = combinatorial_tau(&lattice);
    Ok(ArrangementReport {
        lines: arr.lines().to_vec(),
        lattice: LatticeSummary {
            lines: lattice.n_lines,
            points: lattice.points.len(),
            multiplicity_counts: lattice
                .multiplicity_counts()
                .into_iter()
                .map(|(m, c)| [m, c])
                .collect(),
            incidences: lattice.points,
        },
        tau_matches: tau_combinatorial == report.analysis.tau,
        tau_combinatorial,
        report,
    })
}

fn cmd_arrangement(
    file: &Path,
    analysis: &AnalysisArgs,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let arr = Arrangement::parse(&read_file(file)?)?;
    let rep = arrangement_report(&arr, analysis)?;
    if output.table {
        let counts: Vec<String> = rep
            .lattice
            .multiplicity_counts
            .iter()
            .map(|[m, c]| format!("{c}×{m}"))
            .collect();
        writeln!(out, "{:<16}{}", "lines", rep.lattice.lines)?;
        writeln!(out, "{:<16}{}", "points", counts.join(" "))?;
        writeln!(out, "{:<16}{}", "tau_comb", rep.tau_combinatorial)?;
        write!(out, "{}", rep.report.to_table())?;
    } else {
        writeln!(out, "{}", to_json(&rep))?;
    }
    let mut code = warn_report(&rep.report, err)?;
    if !rep.tau_matches {
        writeln!(
            err,
            "τ MISMATCH: combinatorial {} vs computed {}",
            rep.tau_combinatorial, rep.report.analysis.tau
        )?;
        code = EXIT_INTERNAL;
    }
    Ok(code)
}

/// Group file contents: one group of paths, or several.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum GroupFile {
    One(Vec<String>),
    Many(Vec<Vec<String>>),
}

pub fn load_groups(group_file: &Path) -> Result<Vec<Vec<Arrangement>>, Failure> {
    let text = read_file(group_file)?;
    let parsed: GroupFile = serde_json::from_str(&text)
        .map_err(|e| input_failure(format!("{}: {e}", group_file.display())))?;
    let groups = match parsed {
        GroupFile::One(g) => vec![g],
        GroupFile::Many(gs) => gs,
    };
    let base = group_file.parent().unwrap_or(Path::new("."));
    groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|p| Ok(Arrangement::from_file(&base.join(p))?))
                .collect::<Result<Vec<_>, Failure>>()
        })
        .collect()
}

fn cmd_conjecture(
    group_file: &Path,
    analysis: &AnalysisArgs,
    output: &OutputArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let groups = load_groups(group_file)?;
    let report: HarnessReport = conjecture_harness(&groups, &analysis.config())?;
    if output.table {
        for (i, g) in report.groups.iter().enumerate() {
            let nus: Vec<String> = g.members.iter().map(|m| m.nu.to_string()).collect();
            let mdrs: Vec<String> = g.members.iter().map(|m| m.mdr.to_string()).collect();
            writeln!(
                out,
                "group {i}: {} members, nu [{}] {}, mdr [{}], splitting {}",
                g.members.len(),
                nus.join(" "),
                if g.nu_constant { "constant" } else { "NOT CONSTANT" },
                mdrs.join(" "),
                if g.splitting_constant { "constant" } else { "varies" },
            )?;
        }
    } else {
        writeln!(out, "{}", to_json(&report))?;
    }
    if report.counterexamples > 0 {
        writeln!(
            err,
            "COUNTEREXAMPLE: {} group(s) with non-constant ν on isomorphic lattices",
            report.counterexamples
        )?;
    }
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Analyze {
            poly,
            file,
            analysis,
            output,
        } => cmd_analyze(poly, file, &analysis, &output, out, err),
        Command::Generate { family } => cmd_generate(family, out, err),
        Command::Batch {
            file,
            jobs,
            analysis,
        } => cmd_batch(&file, jobs, &analysis, out, err),
        Command::Arrangement {
            file,
            analysis,
            output,
        } => cmd_arrangement(&file, &analysis, &output, out, err),
        Command::Conjecture {
            group_file,
            analysis,
            output,
        } => cmd_conjecture(&group_file, &analysis, &output, out, err),
        Command::Schema => {
            write!(out, "{SCHEMA}")?;
            Ok(EXIT_OK)
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return EXIT_INPUT;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
