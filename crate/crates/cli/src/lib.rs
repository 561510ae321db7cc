//! Command-line front end. Every command returns an exit code and its
//! standard output so that it can be driven in-process by tests:
//! `0` for a positive verdict, `1` for a negative one, `2` for usage or data
//! errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use toric_split::error::Error as CoreError;
use toric_split::fan::{builtin, Fan, FanJson};
use toric_split::lattice::{FractionalPoint, LatticeVector};
use toric_split::oracle::{
    verify_diagonal_compatibility, verify_semidiagonal_compatibility, verify_splitting_law, OracleReport, DEFAULT_BOUND,
};
use toric_split::polytope::{anticanonical_polytope, divisor_polytope, polygon_from_points};
use toric_split::sections::normality_check;
use toric_split::splitting::{
    adjacent_semidiagonal_map, diagonal_splitting_from_certificate, is_diagonally_split_with, require_complete,
    semidiagonal_splitting_from_certificate, split_q_scan_with, splitting_basis, CertificateJson, NonSplitWitness,
    SearchOptions, SplitCertificate, SplitVerdict, WitnessJson,
};
use toric_split::svg::plot_splitting_polytope;

#[derive(Debug, Parser)]
#[command(name = "toric-split", version, about = "Diagonal splittings of complete toric varieties")]
pub struct Cli {
    /// Worker threads (default: one per core). Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the variety is diagonally split for one q.
    Check(CheckArgs),
    /// Decide for every q in a range.
    Scan(ScanArgs),
    /// Build the splittings of X × X (and X^n) and run the chart oracles.
    Verify(VerifyArgs),
    /// Draw the diagonal splitting polygon of a surface as SVG.
    Plot(PlotArgs),
    /// List the interior points of the anticanonical polytope in (1/q)M.
    Basis(BasisArgs),
    /// Check that a divisor polytope is normal up to a dilation bound.
    Normality(NormalityArgs),
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct FanChoice {
    /// Fan JSON file: {"dim": .., "rays": [[..]], "max_cones": [[..]]}.
    #[arg(long)]
    pub fan: Option<PathBuf>,
    /// Built-in fan: pn:<n>, hirzebruch:<a>, product:<spec>x<spec>.
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct FanSource {
    #[command(flatten)]
    pub choice: FanChoice,
    /// Accept fans whose completeness is not verified.
    #[arg(long)]
    pub assume_complete: bool,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: FanSource,
    #[arg(long)]
    pub q: u32,
    /// Re-validate a certificate or witness file instead of searching.
    #[arg(long)]
    pub recheck: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub source: FanSource,
    #[arg(long)]
    pub q_min: u32,
    #[arg(long)]
    pub q_max: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: FanSource,
    #[arg(long)]
    pub q: u32,
    /// Number of factors; above 2 the semidiagonal splitting of X^n is checked too.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Degree bound B of the chart grids.
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    pub bound: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub source: FanSource,
    #[arg(long)]
    pub q: u32,
    /// SVG destination (standard output if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BasisArgs {
    #[command(flatten)]
    pub source: FanSource,
    #[arg(long)]
    pub q: u32,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct NormalityArgs {
    /// Fan whose divisor polytope is checked (required unless --random is given).
    #[arg(long, conflicts_with = "random")]
    pub fan: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["fan", "random"])]
    pub builtin: Option<String>,
    /// Divisor coefficients, one per ray, e.g. 0,0,1,1 (default: all ones).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<i64>>,
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Check this many random lattice polygons instead of a divisor polytope.
    #[arg(long)]
    pub random: Option<usize>,
    /// Seed for --random.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses arguments and runs the command. Never panics on bad input.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let mut stderr = String::new();
    let result = match cli.workers {
        Some(0) => Err(anyhow!("--workers must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| anyhow!(e))
            .and_then(|pool| pool.install(|| dispatch(&cli.command, &mut stderr))),
        None => dispatch(&cli.command, &mut stderr),
    };
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            Outcome { code: 2, stdout: String::new(), stderr }
        }
    }
}

fn dispatch(command: &Command, stderr: &mut String) -> Result<(i32, String)> {
    match command {
        Command::Check(a) => cmd_check(a, stderr),
        Command::Scan(a) => cmd_scan(a, stderr),
        Command::Verify(a) => cmd_verify(a, stderr),
        Command::Plot(a) => cmd_plot(a, stderr),
        Command::Basis(a) => cmd_basis(a, stderr),
        Command::Normality(a) => cmd_normality(a, stderr),
    }
}

fn load_fan(fan: Option<&Path>, builtin_spec: Option<&str>, stderr: &mut String) -> Result<(Fan, String)> {
    match (fan, builtin_spec) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let json: FanJson =
                serde_json::from_str(&text).with_context(|| format!("parsing fan file {}", path.display()))?;
            let fan = Fan::from_json(&json)?;
            for &i in fan.primitivized() {
                let _ = writeln!(stderr, "warning: ray {i} was not primitive; replaced by {}", fan.rays()[i]);
            }
            Ok((fan, path.display().to_string()))
        }
        (None, Some(spec)) => Ok((builtin(spec)?, spec.to_string())),
        _ => bail!("exactly one of --fan and --builtin is required"),
    }
}

fn load_source(source: &FanSource, stderr: &mut String) -> Result<(Fan, String)> {
    let (fan, name) = load_fan(source.choice.fan.as_deref(), source.choice.builtin.as_deref(), stderr)?;
    require_complete(&fan, source.assume_complete)?;
    Ok((fan, name))
}

fn options(source: &FanSource) -> SearchOptions {
    SearchOptions { assume_complete: source.assume_complete, ..Default::default() }
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        bail!("q must be at least 2, got {q}");
    }
    Ok(())
}

fn emit(output: &Output, text: String, json: &Value) -> Result<String> {
    let body = if output.json {
        let mut s = serde_json::to_string_pretty(json)?;
        s.push('\n');
        s
    } else {
        text
    };
    match &output.out {
        Some(path) => {
            fs::write(path, &body).with_context(|| format!("writing {}", path.display()))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn point_json(u: &FractionalPoint) -> Value {
    json!({ "num": u.numerators(), "den": u.den() })
}

fn verdict_json(name: &str, verdict: &SplitVerdict) -> Value {
    match verdict {
        SplitVerdict::Split(c) => {
            json!({ "fan": name, "verdict": "split", "certificate": c.to_json() })
        }
        SplitVerdict::NotSplit(w) => {
            json!({ "fan": name, "verdict": "not-split", "witness": w.to_json() })
        }
    }
}

fn box_text(w: &NonSplitWitness) -> String {
    w.search_box().intervals().iter().map(|[l, u]| format!("[{l}, {u}]")).collect::<Vec<_>>().join(" x ")
}

fn verdict_text(name: &str, q: u32, verdict: &SplitVerdict) -> String {
    let mut s = String::new();
    match verdict {
        SplitVerdict::Split(c) => {
            let _ = writeln!(s, "{name} q={q}: diagonally split");
            for (class, rep) in c.entries() {
                let _ = writeln!(s, "  class {} -> {}", class.representative(), rep);
            }
        }
        SplitVerdict::NotSplit(w) => {
            let _ = writeln!(s, "{name} q={q}: not diagonally split");
            let _ = writeln!(s, "  uncovered class {}", w.class().representative());
            let _ = writeln!(s, "  search box {}", box_text(w));
        }
    }
    s
}

pub fn cmd_check(args: &CheckArgs, stderr: &mut String) -> Result<(i32, String)> {
    check_q(args.q)?;
    let (fan, name) = load_source(&args.source, stderr)?;
    let verdict = match &args.recheck {
        Some(path) => recheck(&fan, args.q, path)?,
        None => is_diagonally_split_with(&fan, args.q, &options(&args.source))?,
    };
    let code = if verdict.is_split() { 0 } else { 1 };
    let mut text = verdict_text(&name, args.q, &verdict);
    if args.recheck.is_some() {
        text.insert_str(0, "recheck: valid\n");
    }
    Ok((code, emit(&args.output, text, &verdict_json(&name, &verdict))?))
}

/// Loads a certificate or witness (bare, or wrapped as emitted by `check
/// --json`) and validates it against the fan.
fn recheck(fan: &Fan, q: u32, path: &Path) -> Result<SplitVerdict> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).context("parsing recheck file")?;
    let inner = value.get("certificate").or_else(|| value.get("witness")).unwrap_or(&value).clone();
    let verdict = if inner.get("classes").is_some() {
        let json: CertificateJson = serde_json::from_value(inner)?;
        let cert = SplitCertificate::from_json(&json)?;
        cert.validate(fan)?;
        SplitVerdict::Split(cert)
    } else {
        let json: WitnessJson = serde_json::from_value(inner)?;
        let witness = NonSplitWitness::from_json(&json)?;
        witness.validate(fan)?;
        SplitVerdict::NotSplit(witness)
    };
    let found_q = match &verdict {
        SplitVerdict::Split(c) => c.q(),
        SplitVerdict::NotSplit(w) => w.q(),
    };
    if found_q != q {
        bail!("recheck file is for q={found_q}, not q={q}");
    }
    Ok(verdict)
}

pub fn cmd_scan(args: &ScanArgs, stderr: &mut String) -> Result<(i32, String)> {
    check_q(args.q_min)?;
    let (fan, name) = load_source(&args.source, stderr)?;
    let results = split_q_scan_with(&fan, args.q_min, args.q_max, &options(&args.source))?;
    let mut text = format!("{name}\n{:>4}  {:<10}  uncovered class\n", "q", "verdict");
    let mut rows = Vec::with_capacity(results.len());
    for (q, v) in &results {
        match v {
            SplitVerdict::Split(_) => {
                let _ = writeln!(text, "{q:>4}  split");
                rows.push(json!({ "q": q, "split": true }));
            }
            SplitVerdict::NotSplit(w) => {
                let _ = writeln!(text, "{q:>4}  {:<10}  {}", "not-split", w.class().representative());
                rows.push(json!({ "q": q, "split": false, "witness": w.to_json() }));
            }
        }
    }
    let split: Vec<u32> = results.iter().filter(|(_, v)| v.is_split()).map(|(q, _)| *q).collect();
    let _ = writeln!(text, "split at: {split:?}");
    let json = json!({ "fan": name, "q_min": args.q_min, "q_max": args.q_max, "results": rows });
    Ok((0, emit(&args.output, text, &json)?))
}

#[derive(Serialize)]
struct VerifyJson {
    fan: String,
    q: u32,
    n: usize,
    bound: u32,
    construction: Option<&'static str>,
    passed: bool,
    note: Option<String>,
    reports: Vec<toric_split::oracle::OracleReportJson>,
}

pub fn cmd_verify(args: &VerifyArgs, stderr: &mut String) -> Result<(i32, String)> {
    check_q(args.q)?;
    if args.n < 2 {
        bail!("--n must be at least 2");
    }
    let (fan, name) = load_source(&args.source, stderr)?;
    let mut out = VerifyJson {
        fan: name.clone(),
        q: args.q,
        n: args.n,
        bound: args.bound,
        construction: None,
        passed: false,
        note: None,
        reports: Vec::new(),
    };
    let cert = match is_diagonally_split_with(&fan, args.q, &options(&args.source))? {
        SplitVerdict::Split(c) => c,
        SplitVerdict::NotSplit(w) => {
            let note = format!(
                "not diagonally split at q={}: class {} has no interior representative",
                args.q,
                w.class().representative()
            );
            let text = format!("{name}: {note}\n");
            out.note = Some(note);
            return Ok((1, emit(&args.output, text, &serde_json::to_value(&out)?)?));
        }
    };
    let mut reports: Vec<OracleReport> = Vec::new();
    let diagonal = diagonal_splitting_from_certificate(&fan, &cert)?;
    reports.push(verify_splitting_law(&diagonal, args.bound)?);
    reports.push(verify_diagonal_compatibility(&fan, args.q, &diagonal, args.bound)?);
    out.construction = Some("diagonal");
    if args.n > 2 {
        let map = match semidiagonal_splitting_from_certificate(&fan, &cert, args.n) {
            Ok(m) => {
                out.construction = Some("partial-sum");
                m
            }
            Err(CoreError::NoNarrowRepresentatives(_)) => {
                out.note = Some(format!(
                    "no representative system with ray spread below one at q={}; checking the adjacent-pair map instead",
                    args.q
                ));
                out.construction = Some("adjacent");
                adjacent_semidiagonal_map(&fan, &cert, args.n)?
            }
            Err(e) => return Err(e.into()),
        };
        let mut law = verify_splitting_law(&map, args.bound)?;
        law.check = format!("splitting law on X^{}", args.n);
        reports.push(law);
        for i in 1..args.n {
            reports.push(verify_semidiagonal_compatibility(&fan, args.q, args.n, i, &map, args.bound)?);
        }
    }
    out.passed = reports.iter().all(OracleReport::passed);
    out.reports = reports.iter().map(OracleReport::to_json).collect();
    let mut text = format!(
        "{name} q={} n={} B={}: construction {}\n",
        args.q,
        args.n,
        args.bound,
        out.construction.unwrap_or("none")
    );
    if let Some(note) = &out.note {
        let _ = writeln!(text, "note: {note}");
    }
    for r in &reports {
        let _ = writeln!(text, "  {r}");
    }
    let _ = writeln!(text, "{}", if out.passed { "all checks passed" } else { "some checks FAILED" });
    let code = if out.passed { 0 } else { 1 };
    Ok((code, emit(&args.output, text, &serde_json::to_value(&out)?)?))
}

pub fn cmd_plot(args: &PlotArgs, stderr: &mut String) -> Result<(i32, String)> {
    check_q(args.q)?;
    let (fan, _) = load_source(&args.source, stderr)?;
    let plot = plot_splitting_polytope(&fan, args.q)?;
    match &args.out {
        Some(path) => {
            fs::write(path, &plot.svg).with_context(|| format!("writing {}", path.display()))?;
            Ok((0, format!("wrote {}\n", path.display())))
        }
        None => Ok((0, plot.svg)),
    }
}

pub fn cmd_basis(args: &BasisArgs, stderr: &mut String) -> Result<(i32, String)> {
    check_q(args.q)?;
    let (fan, name) = load_source(&args.source, stderr)?;
    let points = splitting_basis(&fan, args.q)?;
    let mut text = format!("{name} q={}: {} basis points\n", args.q, points.len());
    for p in &points {
        let _ = writeln!(text, "  {p}");
    }
    let json = json!({
        "fan": name,
        "q": args.q,
        "count": points.len(),
        "points": points.iter().map(point_json).collect::<Vec<_>>(),
    });
    Ok((0, emit(&args.output, text, &json)?))
}

/// Random lattice polygon: the hull of 3 to 8 points in `[−4, 4]²`.
pub fn random_polygon(rng: &mut impl Rng) -> toric_split::polytope::HPolytope {
    loop {
        let count = rng.gen_range(3..=8);
        let pts: Vec<LatticeVector> =
            (0..count).map(|_| LatticeVector(vec![rng.gen_range(-4..=4), rng.gen_range(-4..=4)])).collect();
        if let Ok(p) = polygon_from_points(&pts) {
            return p;
        }
    }
}

pub fn cmd_normality(args: &NormalityArgs, stderr: &mut String) -> Result<(i32, String)> {
    if args.kmax < 1 {
        bail!("--kmax must be at least 1");
    }
    let polytopes = match args.random {
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..count).map(|_| random_polygon(&mut rng)).collect()
        }
        None => {
            let (fan, _) = load_fan(args.fan.as_deref(), args.builtin.as_deref(), stderr)?;
            let p = match &args.d {
                Some(d) => {
                    let d: Vec<_> = d.iter().map(|&x| num_rational_int(x)).collect();
                    divisor_polytope(&fan, &d)?
                }
                None => anticanonical_polytope(&fan),
            };
            vec![p]
        }
    };
    let mut text = String::new();
    let mut reports = Vec::with_capacity(polytopes.len());
    let mut all = true;
    for p in &polytopes {
        let r = normality_check(p, args.kmax)?;
        all &= r.passed();
        match &r.counterexample {
            None => {
                let _ = writeln!(text, "{p}: normal up to k={} ({} points)", args.kmax, r.points_checked);
            }
            Some(c) => {
                let _ = writeln!(
                    text,
                    "{p}: NOT normal: {} in {}P is not a sum of {} lattice points of P",
                    LatticeVector(c.point.clone()),
                    c.k,
                    c.k
                );
            }
        }
        reports.push(r.to_json());
    }
    let _ = writeln!(text, "{}", if all { "pass" } else { "fail" });
    let json = json!({ "passed": all, "reports": reports });
    Ok((if all { 0 } else { 1 }, emit(&args.output, text, &json)?))
}

fn num_rational_int(x: i64) -> toric_split::polytope::Rational {
    toric_split::polytope::Rational::from_integer(x.into())
}
