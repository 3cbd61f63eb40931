//! Command-line front end: argument model, subcommands and the golden corpus
//! runner. `main.rs` only parses arguments and maps failures to exit codes.

use clap::{Args, Parser, Subcommand, ValueEnum};
use frobetti::hk::{hilbert_series_check, hk_direct, SeriesCheck};
use frobetti::invsys::{is_relatively_compressed, seeded_form};
use frobetti::koszul::truncated_degree_ledger;
use frobetti::linkage::{link_inverse_poly, socle_direct, socle_via_link};
use frobetti::pfaffian::certify_pf_of_tail;
use frobetti::resolution::{betti_over_r, compare_tails, detect_periodic_tail, extract_tail_mf};
use frobetti::{parse_poly, BettiTable, Error, HomogPoly, Mode, Prime};
use serde_json::{json, Value};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_GOLDEN: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "frobetti",
    version,
    about = "Links, socles, Betti tables and Hilbert-Kunz functions of Frobenius powers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether (x^q) : f is relatively compressed for each q.
    CheckCompressed {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Quick)]
        mode: ModeArg,
    },
    /// Graded Betti tables of R/m^[q] over R = P/(f), with tail comparison.
    Betti {
        #[command(flatten)]
        job: JobArgs,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        /// Largest internal degree to scan at every step.
        #[arg(long)]
        degree_cap: Option<i64>,
    },
    /// Rerun the golden corpus and byte-compare the tables.
    ReproduceExamples {
        /// Case ids to run (comma separated); all cases when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Socle of P/(x^q, f), directly and through the link.
    Socle {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Hilbert-Kunz function, closed form and Hilbert-series identity.
    Hk {
        #[command(flatten)]
        job: JobArgs,
    },
    /// Extract the tail matrix factorization and test det(A) = unit * f^2.
    PfaffianCheck {
        #[command(flatten)]
        job: JobArgs,
        /// Homological index of the differential lifted to A.
        #[arg(long, default_value_t = 3)]
        at_step: usize,
        /// Print the entries of A.
        #[arg(long)]
        print_matrix: bool,
    },
    /// Generator degrees of truncations of the inverse system of the link,
    /// against the degrees allowed by the strand homology.
    Ledger {
        #[command(flatten)]
        job: JobArgs,
        /// Truncation degrees; a window around the middle when absent.
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    /// Characteristic of the coefficient field.
    #[arg(short = 'p', long = "prime")]
    pub p: u64,
    /// Number of variables.
    #[arg(short = 'n', default_value_t = 3)]
    pub n: usize,
    /// The form f, or "random" together with -d and --seed.
    #[arg(short = 'f', long = "poly")]
    pub f: String,
    /// Degree of the random form.
    #[arg(short = 'd', long = "degree")]
    pub d: Option<u32>,
    /// Seed of the random form.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Frobenius powers q (comma separated).
    #[arg(short = 'q', value_delimiter = ',', required = true)]
    pub q: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long)]
    pub threads: Option<usize>,
    /// Accept q that are not powers of p.
    #[arg(long)]
    pub allow_any_q: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Quick,
    Full,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Quick => Mode::Quick,
            ModeArg::Full => Mode::Full,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Math(Error),
    Golden(Vec<String>),
    Io(String),
    Other(Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Math(_) => EXIT_MATH,
            Failure::Golden(_) => EXIT_GOLDEN,
            Failure::Io(_) | Failure::Other(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Math(e) => write!(f, "{e}"),
            Failure::Golden(cases) => write!(f, "golden mismatch in: {}", cases.join(", ")),
            Failure::Io(m) => write!(f, "{m}"),
            Failure::Other(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::NotPrime(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            Error::Internal(_) => Failure::Other(e),
            _ => Failure::Math(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// The resolved input of a job: the prime, the form and the checked q list.
pub struct Job {
    pub p: Prime,
    pub f: HomogPoly,
    pub qs: Vec<u32>,
    pub format: Format,
}

impl Job {
    pub fn from_args(a: &JobArgs) -> Result<Job, Failure> {
        let p = Prime::new(a.p).map_err(|e| Failure::Usage(e.to_string()))?;
        if a.n == 0 {
            return Err(Failure::Usage("need at least one variable".into()));
        }
        let f = if a.f == "random" {
            let d = a.d.ok_or_else(|| Failure::Usage("-f random needs -d".into()))?;
            seeded_form(p, a.n, d, a.seed)
        } else {
            parse_poly(&a.f, p, a.n)?
        };
        for &q in &a.q {
            if !a.allow_any_q && !p.is_power(q as u64) {
                return Err(Failure::Usage(format!(
                    "q={q} is not a power of p={p}; pass --allow-any-q to run it anyway"
                )));
            }
        }
        Ok(Job { p, f, qs: a.q.clone(), format: a.format })
    }

    fn header(&self, command: &str) -> Value {
        json!({ "command": command, "p": self.p.get(), "n": self.f.n(), "f": self.f.to_string() })
    }
}

fn init_threads(threads: Option<usize>) {
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            log::warn!("thread pool already configured: {e}");
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &Value) -> Outcome {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("values serialize"))?;
    Ok(())
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    match &cli.command {
        Command::CheckCompressed { job, mode } => {
            init_threads(job.threads);
            check_compressed(&Job::from_args(job)?, (*mode).into(), out)
        }
        Command::Betti { job, steps, degree_cap } => {
            init_threads(job.threads);
            betti(&Job::from_args(job)?, *steps, *degree_cap, out)
        }
        Command::ReproduceExamples { only, format, threads } => {
            init_threads(*threads);
            reproduce_examples(&golden_dir(), only, *format, out)
        }
        Command::Socle { job } => {
            init_threads(job.threads);
            socle(&Job::from_args(job)?, out)
        }
        Command::Hk { job } => {
            init_threads(job.threads);
            hk(&Job::from_args(job)?, out)
        }
        Command::PfaffianCheck { job, at_step, print_matrix } => {
            init_threads(job.threads);
            pfaffian_check(&Job::from_args(job)?, *at_step, *print_matrix, out)
        }
        Command::Ledger { job, m } => {
            init_threads(job.threads);
            ledger(&Job::from_args(job)?, m, out)
        }
    }
}

pub fn check_compressed(job: &Job, mode: Mode, out: &mut dyn Write) -> Outcome {
    let reports = job.qs.iter().map(|&q| is_relatively_compressed(&job.f, q, mode)).collect::<Result<Vec<_>, _>>()?;
    if job.format == Format::Json {
        let mut v = job.header("check-compressed");
        v["mode"] = json!(mode);
        v["reports"] = json!(reports);
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    for r in &reports {
        write!(out, "q={} s={} compressed={}", r.q, r.s, r.verdict)?;
        if let Some(&(i, h, t)) = r.checked.iter().find(|&&(_, h, t)| h != t) {
            write!(out, " (degree {i}: H={h}, expected {t})")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn stability_shift(n: usize, q0: u32, q1: u32) -> Option<i64> {
    let twice = n as i64 * (q1 as i64 - q0 as i64);
    (twice % 2 == 0).then_some(twice / 2)
}

pub fn betti(job: &Job, steps: usize, cap: Option<i64>, out: &mut dyn Write) -> Outcome {
    let tables = job.qs.iter().map(|&q| betti_over_r(&job.f, q, steps, cap)).collect::<Result<Vec<BettiTable>, _>>()?;
    let mut comparisons = Vec::new();
    for (k, w) in tables.windows(2).enumerate() {
        let (q0, q1) = (job.qs[k], job.qs[k + 1]);
        let cmp = match stability_shift(job.f.n(), q0, q1) {
            Some(shift) => Some(compare_tails(&w[0], &w[1], shift)?),
            None => None,
        };
        comparisons.push((q0, q1, cmp));
    }
    if job.format == Format::Json {
        let mut v = job.header("betti");
        let mut items = Vec::new();
        for (t, &q) in tables.iter().zip(&job.qs) {
            items.push(json!({ "q": q, "table": t.to_json(), "tail": detect_periodic_tail(t)? }));
        }
        v["tables"] = json!(items);
        v["stability"] = json!(comparisons
            .iter()
            .map(|(q0, q1, c)| json!({ "q0": q0, "q1": q1, "comparison": c }))
            .collect::<Vec<_>>());
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    for (t, &q) in tables.iter().zip(&job.qs) {
        writeln!(out, "\nq={q}")?;
        write!(out, "{}", t.to_grid())?;
    }
    if !comparisons.is_empty() {
        writeln!(out)?;
    }
    for (q0, q1, c) in &comparisons {
        match c {
            Some(c) if c.equal => writeln!(out, "q={q0} -> q={q1}: tails equal after shift {}", c.shift)?,
            Some(c) => writeln!(out, "q={q0} -> q={q1}: tails differ after shift {}", c.shift)?,
            None => writeln!(out, "q={q0} -> q={q1}: no integral shift")?,
        }
    }
    Ok(())
}

pub fn socle(job: &Job, out: &mut dyn Write) -> Outcome {
    let mut items = Vec::new();
    for &q in &job.qs {
        let direct = socle_direct(&job.f, q)?;
        let via = match socle_via_link(&job.f, q) {
            Ok(r) => Some(r),
            Err(Error::LinkDegeneracy(msg)) => {
                log::warn!("q={q}: {msg}");
                None
            }
            Err(e) => return Err(e.into()),
        };
        items.push((q, direct, via));
    }
    if job.format == Format::Json {
        let mut v = job.header("socle");
        v["reports"] = json!(items
            .iter()
            .map(|(q, d, l)| json!({ "q": q, "direct": d, "via_link": l, "agree": l.as_ref().map(|l| l == d) }))
            .collect::<Vec<_>>());
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    for (q, d, l) in &items {
        match l {
            Some(l) => writeln!(out, "q={q} direct={d} via-link={l} agree={}", l == d)?,
            None => writeln!(out, "q={q} direct={d} via-link=n/a")?,
        }
    }
    Ok(())
}

fn series_label(s: &SeriesCheck) -> String {
    match s {
        SeriesCheck::Holds => "holds".into(),
        SeriesCheck::Fails(j) => format!("fails at degree {j}"),
        SeriesCheck::Inapplicable(why) => format!("inapplicable ({why})"),
    }
}

pub fn hk(job: &Job, out: &mut dyn Write) -> Outcome {
    let mut items = Vec::new();
    for &q in &job.qs {
        let report = hk_direct(&job.f, q)?;
        let series = if job.f.n() == 3 { Some(hilbert_series_check(&job.f, q)?) } else { None };
        items.push((report, series));
    }
    if job.format == Format::Json {
        let mut v = job.header("hk");
        v["reports"] = json!(items
            .iter()
            .map(|(r, s)| {
                let mut v = json!(r);
                v["agrees"] = json!(r.agrees());
                v["series"] = json!(s.as_ref().map(series_label));
                v
            })
            .collect::<Vec<_>>());
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    for (r, s) in &items {
        let formula = r.formula.map_or("n/a".to_string(), |v| v.to_string());
        write!(out, "q={} HK={} formula={}", r.q, r.direct, formula)?;
        if let Some(a) = r.agrees() {
            write!(out, " agree={a}")?;
        }
        if let Some(s) = s {
            write!(out, " series={}", series_label(s))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn pfaffian_check(job: &Job, at_step: usize, print_matrix: bool, out: &mut dyn Write) -> Outcome {
    let mut items = Vec::new();
    for &q in &job.qs {
        let mf = extract_tail_mf(&job.f, q, at_step)?;
        let cert = certify_pf_of_tail(&mf.a, &job.f)?;
        items.push((q, mf, cert));
    }
    if job.format == Format::Json {
        let mut v = job.header("pfaffian-check");
        v["reports"] = json!(items
            .iter()
            .map(|(q, mf, c)| {
                let a: Vec<Vec<String>> =
                    (0..mf.a.rows()).map(|i| (0..mf.a.cols()).map(|j| mf.a.get(i, j).to_string()).collect()).collect();
                json!({
                    "q": q,
                    "at_step": mf.at_step,
                    "size": mf.a.rows(),
                    "a_degree": mf.a.max_degree(),
                    "b_degree": mf.b.max_degree(),
                    "factorization_verified": true,
                    "holds": c.holds,
                    "scalar": c.scalar,
                    "a": a,
                })
            })
            .collect::<Vec<_>>());
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    for (q, mf, c) in &items {
        let deg = |d: Option<u32>| d.map_or("-".to_string(), |d| d.to_string());
        write!(
            out,
            "q={q} A: {}x{} of degree {} B: degree {} A*B = B*A = f*I",
            mf.a.rows(),
            mf.a.cols(),
            deg(mf.a.max_degree()),
            deg(mf.b.max_degree())
        )?;
        match c.scalar {
            Some(u) => writeln!(out, " det(A) = {u}*f^2 certificate holds")?,
            None => writeln!(out, " det(A) is not a unit times f^2")?,
        }
        if print_matrix {
            write!(out, "{}", mf.a)?;
        }
    }
    Ok(())
}

pub fn ledger(job: &Job, ms: &[u32], out: &mut dyn Write) -> Outcome {
    let mut items = Vec::new();
    for &q in &job.qs {
        let phi = link_inverse_poly(&job.f, q)?;
        let s = phi.degree();
        let window: Vec<u32> = if ms.is_empty() {
            let mid = s.div_ceil(2);
            (mid.saturating_sub(1).max(1)..=(mid + 1).min(s + 1)).collect()
        } else {
            ms.to_vec()
        };
        let mut rows = Vec::new();
        for m in window {
            rows.push(truncated_degree_ledger(&phi, m)?);
        }
        items.push((q, s, rows));
    }
    if job.format == Format::Json {
        let mut v = job.header("ledger");
        v["reports"] =
            json!(items.iter().map(|(q, s, rows)| json!({ "q": q, "s": s, "truncations": rows })).collect::<Vec<_>>());
        return emit_json(out, &v);
    }
    writeln!(out, "f = {}", job.f)?;
    let set = |v: &std::collections::BTreeSet<u32>| v.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", ");
    for (q, s, rows) in &items {
        for l in rows {
            writeln!(
                out,
                "q={q} s={s} m={} measured={{{}}} allowed={{{}}} contained={}",
                l.m,
                set(&l.measured),
                set(&l.predicted),
                l.contained
            )?;
        }
    }
    Ok(())
}

/// One entry of the golden manifest.
#[derive(Debug, Clone, serde::Deserialize)]
pub struct GoldenCase {
    pub id: String,
    pub p: u64,
    pub f: String,
    pub q: u32,
    pub steps: usize,
}

pub fn golden_dir() -> PathBuf {
    std::env::var_os("FROBETTI_GOLDEN_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("golden"))
}

pub fn load_manifest(dir: &Path) -> Result<Vec<GoldenCase>, Failure> {
    #[derive(serde::Deserialize)]
    struct Manifest {
        cases: Vec<GoldenCase>,
    }
    let path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let m: Manifest = serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(m.cases)
}

/// Outcome of one golden case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub id: String,
    pub grid_match: bool,
    pub json_match: bool,
    pub actual_grid: String,
    pub expected_grid: String,
}

impl CaseResult {
    pub fn pass(&self) -> bool {
        self.grid_match && self.json_match
    }
}

pub fn run_case(dir: &Path, case: &GoldenCase) -> Result<CaseResult, Failure> {
    let p = Prime::new(case.p)?;
    let f = parse_poly(&case.f, p, 3)?;
    let table = betti_over_r(&f, case.q, case.steps, None)?;
    let actual_grid = table.to_grid();
    let read = |ext: &str| {
        let path = dir.join(format!("{}.{ext}", case.id));
        std::fs::read_to_string(&path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
    };
    let expected_grid = read("txt")?;
    let json_match = match serde_json::from_str::<Value>(&read("json")?) {
        Ok(v) => BettiTable::from_json(&v).map(|t| t == table).unwrap_or(false),
        Err(_) => false,
    };
    Ok(CaseResult {
        id: case.id.clone(),
        grid_match: actual_grid == expected_grid,
        json_match,
        actual_grid,
        expected_grid,
    })
}

pub fn reproduce_examples(dir: &Path, only: &[String], format: Format, out: &mut dyn Write) -> Outcome {
    let cases = load_manifest(dir)?;
    if let Some(missing) = only.iter().find(|id| !cases.iter().any(|c| &c.id == *id)) {
        return Err(Failure::Usage(format!("no golden case named {missing}")));
    }
    let selected: Vec<&GoldenCase> = cases.iter().filter(|c| only.is_empty() || only.contains(&c.id)).collect();
    let mut results = Vec::new();
    for case in selected {
        let start = Instant::now();
        let r = run_case(dir, case)?;
        eprintln!("{}: {:.2} s", case.id, start.elapsed().as_secs_f64());
        if format == Format::Table {
            if r.pass() {
                writeln!(out, "{} pass", r.id)?;
            } else {
                let what = match (r.grid_match, r.json_match) {
                    (false, false) => "grid and json",
                    (false, true) => "grid",
                    _ => "json",
                };
                writeln!(out, "{} FAIL ({what})", r.id)?;
                writeln!(out, "expected:\n{}actual:\n{}", r.expected_grid, r.actual_grid)?;
            }
        }
        results.push(r);
    }
    if format == Format::Json {
        let cases: Vec<Value> = results
            .iter()
            .map(|r| json!({ "id": r.id, "pass": r.pass(), "grid_match": r.grid_match, "json_match": r.json_match }))
            .collect();
        emit_json(out, &json!({ "command": "reproduce-examples", "cases": cases }))?;
    }
    let failed: Vec<String> = results.iter().filter(|r| !r.pass()).map(|r| r.id.clone()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Golden(failed))
    }
}
