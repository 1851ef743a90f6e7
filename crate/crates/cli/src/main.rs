//! Command-line front end: indices, Dehn fillings, relative indices of
//! layered solid tori, and identity verification suites.
//!
//! Exit codes are stable:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | any other engine error |
//! | 2 | command-line usage error |
//! | 3 | parse or validation error in the input triangulation or arguments |
//! | 4 | the triangulation is not 1-efficient |
//! | 5 | the Dehn-filling sum diverges |
//! | 6 | a verification failed (identity report or path comparison) |
//! | 7 | a truncation could not be certified |

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tetrindex::dehnfill::{gy_filled_report, FillRequest};
use tetrindex::enumeration::{Backend, BoundaryConstraint};
use tetrindex::fixtures;
use tetrindex::identities::{run_suite, IdentityReport, ParamBox, Suite};
use tetrindex::index::{index_edge_weight, index_for};
use tetrindex::lst::{rel_gy_cusp, rel_lst_index_slope, EdgeTriple, Slope};
use tetrindex::triangulation::{parse_gluing, BoundaryClass, GluingData};
use tetrindex::{Error, HalfExp};

const EXIT_ENGINE: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_NOT_ONE_EFFICIENT: u8 = 4;
const EXIT_GY_DIVERGENT: u8 = 5;
const EXIT_VERIFY_FAILED: u8 = 6;
const EXIT_UNCERTIFIED: u8 = 7;

#[derive(Parser, Debug)]
#[command(name = "tetrindex", version, about = "Certified 3D index computations")]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Include wall-clock time in the output (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// The index of a triangulation with a prescribed boundary class.
    Index(IndexArgs),
    /// The Dehn-filled index of one cusp.
    Fill(FillArgs),
    /// Relative index of a layered solid torus by both evaluation paths.
    Lst(LstArgs),
    /// Run identity verification suites.
    Verify(VerifyArgs),
    /// List the built-in fixtures.
    Fixtures,
}

#[derive(Args, Debug)]
struct Source {
    /// Built-in fixture name (see `tetrindex fixtures`).
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    fixture: Option<String>,

    /// Gluing-data JSON file.
    #[arg(long)]
    file: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
struct Truncation {
    /// Truncation cap in half-units: coefficients through q^(cap/2) are exact.
    #[arg(long, conflicts_with = "qdeg")]
    cap: Option<HalfExp>,

    /// Truncation in q-degree D, equivalent to a cap of 2D + 1.
    #[arg(long)]
    qdeg: Option<HalfExp>,
}

impl Truncation {
    fn cap(&self, default: HalfExp) -> HalfExp {
        match (self.cap, self.qdeg) {
            (Some(c), _) => c,
            (None, Some(d)) => 2 * d + 1,
            (None, None) => default,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BackendArg {
    /// Certified enumeration of normal classes.
    Surface,
    /// Uncertified sum over a cube of edge-weight coefficients.
    EdgeWeight,
}

#[derive(Args, Debug)]
struct IndexArgs {
    #[command(flatten)]
    source: Source,

    /// Boundary class per cusp, `x,y[;x,y...]` meaning x μ + y λ; zero when
    /// omitted.
    #[arg(long, allow_hyphen_values = true)]
    boundary: Option<String>,

    #[command(flatten)]
    trunc: Truncation,

    #[arg(long, value_enum, default_value = "surface")]
    backend: BackendArg,

    /// Cube radius of the edge-weight backend.
    #[arg(long, default_value_t = 6)]
    radius: i64,
}

#[derive(Args, Debug)]
struct FillArgs {
    #[command(flatten)]
    source: Source,

    /// Cusp to fill.
    #[arg(long, default_value_t = 0)]
    cusp: usize,

    /// Filling slope `p/q`, meaning p μ + q λ.
    #[arg(long, allow_hyphen_values = true)]
    slope: String,

    /// Boundary classes on the other cusps, as for `index --boundary`; the
    /// entry of the filled cusp is ignored.
    #[arg(long, allow_hyphen_values = true)]
    boundary: Option<String>,

    #[command(flatten)]
    trunc: Truncation,

    /// Drop divergent directions and report them instead of failing.
    #[arg(long)]
    allow_divergent: bool,
}

#[derive(Args, Debug)]
struct LstArgs {
    /// Slope `p/q` of the filling curve `p λ + q μ` on the standard cusp.
    #[arg(long, allow_hyphen_values = true)]
    slope: String,

    /// Half boundary-edge coefficients `b1,b2,b3`.
    #[arg(long = "b", allow_hyphen_values = true, default_value = "0,0,0")]
    b: String,

    #[command(flatten)]
    trunc: Truncation,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Suite name, or `all` for every suite.
    #[arg(long, default_value = "all")]
    suite: String,

    /// Parameter box overriding the suite default, e.g. `m=-4..4,c=-4..4`.
    #[arg(long = "box", allow_hyphen_values = true)]
    bx: Option<String>,

    /// Cap in half-units overriding the suite default.
    #[arg(long)]
    cap: Option<HalfExp>,

    /// Print every report, not only failures.
    #[arg(long)]
    verbose: bool,
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Validation(_) | Error::InvalidArgument(_) | Error::UnknownFixture(_) => {
                EXIT_PARSE
            }
            Error::NotOneEfficient { .. } => EXIT_NOT_ONE_EFFICIENT,
            Error::GyDivergent { .. } => EXIT_GY_DIVERGENT,
            Error::Uncertified(_) | Error::UncoveredTable(_) => EXIT_UNCERTIFIED,
            Error::Io(_) | Error::Internal(_) => EXIT_ENGINE,
        };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn load(source: &Source) -> Result<(String, GluingData), Error> {
    match (&source.fixture, &source.file) {
        (Some(name), _) => Ok((name.clone(), fixtures::load(name)?)),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Ok((path.display().to_string(), parse_gluing(&text)?))
        }
        (None, None) => Err(Error::InvalidArgument("one of --fixture or --file is required".into())),
    }
}

fn parse_ints(s: &str, what: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| Error::InvalidArgument(format!("cannot parse {what} `{s}`"))))
        .collect()
}

fn parse_boundary(spec: Option<&str>, r: usize) -> Result<BoundaryClass, Error> {
    let Some(spec) = spec else {
        return Ok(BoundaryClass::zero(r));
    };
    let pairs = spec
        .split(';')
        .map(|p| match parse_ints(p, "boundary")?.as_slice() {
            &[x, y] => Ok((x, y)),
            _ => Err(Error::InvalidArgument(format!("boundary entry `{p}` must be x,y"))),
        })
        .collect::<Result<Vec<_>, Error>>()?;
    if pairs.len() != r {
        return Err(Error::InvalidArgument(format!("boundary has {} entries but the triangulation has {r} cusps", pairs.len())));
    }
    Ok(BoundaryClass(pairs))
}

fn boundary_text(b: &BoundaryClass) -> String {
    b.0.iter().map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(";")
}

fn print_value(cli: &Cli, mut value: Value, text: String, started: Instant) {
    if cli.timing {
        value["wall_time_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&value).expect("JSON values serialize"));
    } else {
        println!("{text}");
        if cli.timing {
            eprintln!("wall time: {:?}", started.elapsed());
        }
    }
}

fn cmd_index(cli: &Cli, a: &IndexArgs) -> CmdResult {
    let started = Instant::now();
    let (name, g) = load(&a.source)?;
    let gamma = parse_boundary(a.boundary.as_deref(), g.r())?;
    let cap = a.trunc.cap(20);
    let (report, backend) = match a.backend {
        BackendArg::Surface => (index_for(&g, &BoundaryConstraint::Fixed(gamma.clone()), cap, Backend::Cone)?, "surface"),
        BackendArg::EdgeWeight => (index_edge_weight(&g, &gamma, cap, a.radius)?, "edge-weight"),
    };
    let value = json!({
        "fixture": name,
        "boundary": boundary_text(&gamma),
        "cap": cap,
        "backend": backend,
        "certified": report.certified,
        "class_count": report.class_count,
        "series": report.series,
        "text": report.series.to_string(),
    });
    print_value(cli, value, report.series.to_string(), started);
    Ok(())
}

fn cmd_fill(cli: &Cli, a: &FillArgs) -> CmdResult {
    let started = Instant::now();
    let (name, g) = load(&a.source)?;
    let slope: Slope = a.slope.parse()?;
    let cap = a.trunc.cap(20);
    let mut req = FillRequest::new(&g, a.cusp, slope, cap);
    if a.boundary.is_some() {
        req.others = parse_boundary(a.boundary.as_deref(), g.r())?;
    }
    let report = gy_filled_report(&g, &req, Backend::Cone, a.allow_divergent)?;
    let mut value = json!({
        "fixture": name,
        "cusp": a.cusp,
        "slope": slope.to_string(),
        "boundary": boundary_text(&req.others),
        "cap": cap,
        "backend": "surface",
        "certified": report.certified,
        "class_count": report.class_count,
        "series": report.series,
        "text": report.series.to_string(),
    });
    let mut text = report.series.to_string();
    if !report.divergent_witnesses.is_empty() {
        value["divergent_witness"] = json!(report.divergent_witnesses);
        text.push_str(&format!("\nnot certified; dropped divergent directions {:?}", report.divergent_witnesses));
    }
    print_value(cli, value, text, started);
    Ok(())
}

fn cmd_lst(cli: &Cli, a: &LstArgs) -> CmdResult {
    let started = Instant::now();
    let slope: Slope = a.slope.parse()?;
    let b: EdgeTriple = match parse_ints(&a.b, "edge triple")?.as_slice() {
        &[b1, b2, b3] => [b1, b2, b3],
        _ => return Err(Error::InvalidArgument(format!("--b `{}` must be b1,b2,b3", a.b)).into()),
    };
    let cap = a.trunc.cap(12);
    let layered = rel_lst_index_slope(slope, b, cap)?;
    let filled = rel_gy_cusp(slope, b, cap)?;
    let equal = layered == filled;
    let verdict = if equal { "EQUAL" } else { "DIFFERENT" };
    let value = json!({
        "slope": slope.to_string(),
        "b": b,
        "cap": cap,
        "layered": layered,
        "layered_text": layered.to_string(),
        "cusp_filling": filled,
        "cusp_filling_text": filled.to_string(),
        "verdict": verdict,
    });
    let text = format!("layered solid torus: {layered}\ncusp filling sum:    {filled}\nverdict: {verdict}");
    print_value(cli, value, text, started);
    if equal {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY_FAILED, message: "the two evaluation paths differ".into() })
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let started = Instant::now();
    let suites = if a.suite == "all" {
        Suite::all()
    } else {
        vec![Suite::from_name(&a.suite).ok_or_else(|| {
            let names: Vec<&str> = Suite::all().iter().map(|s| s.name()).collect();
            Error::InvalidArgument(format!("unknown suite `{}` (known: all, {})", a.suite, names.join(", ")))
        })?]
    };
    if a.bx.is_some() && suites.len() != 1 {
        return Err(Error::InvalidArgument("--box needs a single --suite".into()).into());
    }
    let bx: ParamBox = a.bx.as_deref().map(str::parse).transpose()?.unwrap_or_default();
    let mut all: Vec<(Suite, Vec<IdentityReport>)> = Vec::new();
    for s in suites {
        all.push((s, run_suite(s, a.cap, &bx)?));
    }
    // Failures of suites outside the blocking set are informative only.
    let blocking_failures: usize = all
        .iter()
        .filter(|(s, _)| Suite::BLOCKING.contains(s))
        .map(|(_, r)| r.iter().filter(|x| !x.passed()).count())
        .sum();
    let value = json!(all
        .iter()
        .map(|(s, r)| json!({ "suite": s.name(), "blocking": Suite::BLOCKING.contains(s), "reports": r }))
        .collect::<Vec<_>>());
    let mut text = String::new();
    for (s, reports) in &all {
        let failed = reports.iter().filter(|r| !r.passed()).count();
        let note = if Suite::BLOCKING.contains(s) { "" } else { " (informative)" };
        text.push_str(&format!("{:<20} {:>5} checks {:>4} failed{note}\n", s.name(), reports.len(), failed));
        for r in reports.iter().filter(|r| a.verbose || !r.passed()) {
            text.push_str(&format!("    {r}\n"));
        }
    }
    print_value(cli, value, text.trim_end().to_string(), started);
    if blocking_failures == 0 {
        Ok(())
    } else {
        Err(Failure { code: EXIT_VERIFY_FAILED, message: format!("{blocking_failures} identity checks failed") })
    }
}

fn cmd_fixtures(cli: &Cli) -> CmdResult {
    let started = Instant::now();
    let names = fixtures::builtin_names();
    print_value(cli, json!(names), names.join("\n"), started);
    Ok(())
}

fn run(cli: &Cli) -> CmdResult {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure { code: EXIT_ENGINE, message: format!("cannot configure threads: {e}") })?;
    }
    match &cli.command {
        Command::Index(a) => cmd_index(cli, a),
        Command::Fill(a) => cmd_fill(cli, a),
        Command::Lst(a) => cmd_lst(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::Fixtures => cmd_fixtures(cli),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
