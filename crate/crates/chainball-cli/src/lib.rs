//! Argument handling and output formatting for the `chainlink` binary.
//!
//! `run` never exits the process; it returns the exit code and the text
//! for stdout and stderr so the commands can be tested in-process.

use std::path::PathBuf;

use chainball::algebra::{format_rational, parse_rational, Rational, DEFAULT_TOL};
use chainball::chainlink::{
    is_fibered_class, is_fibered_link, is_hyperbolic, mirror_params, seifert_counts, sign_changes,
    ChainLinkParams, Orientation,
};
use chainball::fixtures::{self, FixtureTable, Report, Status};
use chainball::teichmuller::{
    specialize_fiber_all_ones, stretch_factor, stretch_factor_exact, teich_poly_closed,
    teich_poly_det, TeichPolynomial,
};
use chainball::thurston::{in_fibered_cone, norm_ball, topological_type};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const FIXTURE_ENV: &str = "CHAINLINK_FIXTURES";

#[derive(Parser, Debug)]
#[command(name = "chainlink", version, about = "Thurston norm balls and fibered faces of chained links C(n,p)")]
pub struct Cli {
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Det,
    Closed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// unit norm ball of C(n,p)
    Ball {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// also report the canonical (n,p) and whether the mirror was applied
        #[arg(long)]
        mirror: bool,
    },
    /// norm, boundary and surface type of a class
    Class {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// comma-separated rationals
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// fiberedness of the link, or of the class given by an orientation
    Fibered {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        /// comma-separated ±1
        #[arg(long, allow_hyphen_values = true)]
        orientation: Option<String>,
    },
    /// Seifert circle and crossing counts of the standard diagram
    Seifert {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        orientation: Option<String>,
    },
    /// Teichmüller polynomial of the C(n,-2) face
    Teich {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// compute both ways and compare
        #[arg(long)]
        check: bool,
    },
    /// stretch factor of the all-ones fiber
    Stretch {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// check the tabulated p < 0 balls
    VerifyTables {
        /// fixture file or directory (default: bundled tables, or $CHAINLINK_FIXTURES)
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// mirror partner and canonical form of (n,p)
    Mirror {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn usage(msg: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(text)
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let fmt = cli.format;
    match &cli.command {
        Command::Ball { n, p, mirror } => cmd_ball(*n, *p, *mirror, fmt),
        Command::Class { n, p, x } => cmd_class(*n, *p, x, fmt),
        Command::Fibered { n, p, orientation } => cmd_fibered(*n, *p, orientation.as_deref(), fmt),
        Command::Seifert { n, p, orientation } => cmd_seifert(*n, *p, orientation.as_deref(), fmt),
        Command::Teich { n, method, check } => cmd_teich(*n, *method, *check, fmt),
        Command::Stretch { n, tol } => cmd_stretch(*n, *tol, fmt),
        Command::VerifyTables { fixture } => cmd_verify_tables(fixture.clone(), fmt),
        Command::Mirror { n, p } => cmd_mirror(*n, *p, fmt),
    }
}

fn params(n: usize, p: i64) -> Result<ChainLinkParams, Outcome> {
    ChainLinkParams::new(n, p).map_err(Outcome::usage)
}

fn parse_vector(s: &str) -> Result<Vec<Rational>, Outcome> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|_| Outcome::usage(format!("bad rational {t:?}"))))
        .collect()
}

fn parse_orientation(s: Option<&str>, n: usize) -> Result<Orientation, Outcome> {
    let Some(s) = s else { return Ok(Orientation::all_positive(n)) };
    let signs: Result<Vec<i8>, _> = s.split(',').map(|t| t.trim().parse::<i8>()).collect();
    let signs = signs.map_err(|_| Outcome::usage(format!("bad orientation {s:?}")))?;
    if signs.len() != n {
        return Err(Outcome::usage(format!("orientation has {} entries, expected {n}", signs.len())));
    }
    Orientation::new(signs).map_err(Outcome::usage)
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn emit(value: &Value, fmt: Format) -> String {
    match fmt {
        Format::Json => serde_json::to_string_pretty(value).expect("json") + "\n",
        Format::Tsv => tsv(value),
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// key/value lines for objects, one line per element for arrays of objects
fn tsv(value: &Value) -> String {
    let mut out = String::new();
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                out.push_str(&format!("{k}\t{}\n", cell(v)));
            }
        }
        Value::Array(items) => {
            if let Some(Value::Object(first)) = items.first() {
                out.push_str(&first.keys().cloned().collect::<Vec<_>>().join("\t"));
                out.push('\n');
            }
            for item in items {
                match item {
                    Value::Object(m) => {
                        out.push_str(&m.values().map(cell).collect::<Vec<_>>().join("\t"));
                    }
                    other => out.push_str(&cell(other)),
                }
                out.push('\n');
            }
        }
        other => {
            out.push_str(&cell(other));
            out.push('\n');
        }
    }
    out
}

fn cmd_ball(n: usize, p: i64, mirror: bool, fmt: Format) -> Outcome {
    let pr = match params(n, p) {
        Ok(x) => x,
        Err(o) => return o,
    };
    let ball = match norm_ball(pr) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e),
    };
    let j = ball.to_json();
    let (canon, mirrored) = pr.canonical();
    let text = match fmt {
        Format::Json => {
            let mut v = serde_json::to_value(&j).expect("json");
            if mirror {
                v["canonical"] = json!({ "n": canon.n, "p": canon.p, "mirrored": mirrored });
            }
            emit(&v, fmt)
        }
        Format::Tsv => {
            let status = serde_json::to_value(j.status).expect("json");
            let mut out = format!("# C({},{})\tstatus\t{}\n", j.n, j.p, cell(&status));
            if mirror {
                out.push_str(&format!("# canonical\tC({},{})\tmirrored\t{mirrored}\n", canon.n, canon.p));
            }
            for v in &j.vertices {
                out.push_str(&format!("vertex\t{}\n", v.join("\t")));
            }
            for f in &j.facets {
                let idx: Vec<String> = f.vertices.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("facet\t{}\t{}\n", f.normal.join("\t"), idx.join(",")));
            }
            out
        }
    };
    Outcome::ok(text)
}

fn cmd_class(n: usize, p: i64, x: &str, fmt: Format) -> Outcome {
    let pr = match params(n, p) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let xs = match parse_vector(x) {
        Ok(v) => v,
        Err(o) => return o,
    };
    if xs.len() != n {
        return Outcome::usage(format!("class has {} entries, expected {n}", xs.len()));
    }
    let ball = match norm_ball(pr) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e),
    };
    let norm = ball.norm(&xs);
    let fibered = in_fibered_cone(&ball, &xs).unwrap_or(false);
    let ints: Option<Vec<i64>> =
        xs.iter().map(|q| q.is_integer().then(|| q.to_integer().try_into().ok()).flatten()).collect();
    let surface = ints.as_ref().and_then(|v| topological_type(pr, v).ok());
    let v = json!({
        "n": n,
        "p": p,
        "x": strings(&xs),
        "status": ball.status,
        "norm": format_rational(&norm),
        "boundary": surface.as_ref().map(|s| s.boundary),
        "euler_char": surface.as_ref().map(|s| s.euler_char),
        "genus": surface.as_ref().and_then(|s| s.genus),
        "surface": surface.as_ref().map(|s| s.to_string()),
        "fibered_face": fibered,
    });
    Outcome::ok(emit(&v, fmt))
}

fn cmd_fibered(n: usize, p: i64, orientation: Option<&str>, fmt: Format) -> Outcome {
    let pr = match params(n, p) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let mut v = json!({
        "n": n,
        "p": p,
        "hyperbolic": is_hyperbolic(pr),
        "fibered_link": is_fibered_link(pr),
    });
    if orientation.is_some() {
        let o = match parse_orientation(orientation, n) {
            Ok(o) => o,
            Err(e) => return e,
        };
        let class = match is_fibered_class(pr, &o) {
            Ok(b) => b,
            Err(e) => return Outcome::usage(e),
        };
        v["orientation"] = json!(o.signs());
        v["sign_changes"] = json!(sign_changes(&o));
        v["fibered_class"] = json!(class);
    }
    Outcome::ok(emit(&v, fmt))
}

fn cmd_seifert(n: usize, p: i64, orientation: Option<&str>, fmt: Format) -> Outcome {
    let pr = match params(n, p) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let o = match parse_orientation(orientation, n) {
        Ok(o) => o,
        Err(e) => return e,
    };
    let data = match seifert_counts(pr, &o) {
        Ok(d) => d,
        Err(e) => return Outcome::usage(e),
    };
    let mut v = serde_json::to_value(&data).expect("json");
    v["n"] = json!(n);
    v["p"] = json!(p);
    v["orientation"] = json!(o.signs());
    v["sign_changes"] = json!(sign_changes(&o));
    v["alternating"] = json!(p >= 0);
    Outcome::ok(emit(&v, fmt))
}

fn teich(n: usize, method: Method) -> Result<TeichPolynomial, Outcome> {
    match method {
        Method::Det => teich_poly_det(n),
        Method::Closed => teich_poly_closed(n),
    }
    .map_err(Outcome::usage)
}

fn cmd_teich(n: usize, method: Method, check: bool, fmt: Format) -> Outcome {
    let poly = match teich(n, method) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut v = serde_json::to_value(poly.to_json()).expect("json");
    let mut code = EXIT_OK;
    if check {
        let other = match teich(n, if method == Method::Det { Method::Closed } else { Method::Det }) {
            Ok(p) => p,
            Err(o) => return o,
        };
        let diff = &poly.poly - &other.poly;
        let pass = diff.is_zero();
        v["check"] = json!(if pass { "pass" } else { "fail" });
        if !pass {
            v["difference"] = json!(TeichPolynomial { n, poly: diff }.render());
            code = EXIT_VERIFY;
        }
    }
    if fmt == Format::Tsv {
        v.as_object_mut().expect("object").remove("terms");
    }
    Outcome { code, stdout: emit(&v, fmt), stderr: String::new() }
}

fn cmd_stretch(n: usize, tol: f64, fmt: Format) -> Outcome {
    if !(tol > 0.0) {
        return Outcome::usage("tolerance must be positive");
    }
    let f = match specialize_fiber_all_ones(n) {
        Ok(f) => f,
        Err(e) => return Outcome::usage(e),
    };
    let root = match stretch_factor(n, tol) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(e),
    };
    let exact = stretch_factor_exact(n);
    let v = json!({
        "n": n,
        "polynomial": f.render("t"),
        "stretch_factor": format!("{root:.10}"),
        "closed_form": format!("{exact:.10}"),
    });
    let text = match fmt {
        Format::Json => emit(&v, fmt),
        Format::Tsv => format!("{n}\t{root:.10}\n"),
    };
    Outcome::ok(text)
}

fn load_tables(fixture: Option<PathBuf>) -> Result<Vec<FixtureTable>, Outcome> {
    let path = fixture.or_else(|| std::env::var_os(FIXTURE_ENV).map(PathBuf::from));
    let Some(path) = path else { return Ok(fixtures::bundled()) };
    if path.is_dir() {
        return fixtures::load_dir(&path).map_err(Outcome::usage);
    }
    let text = std::fs::read_to_string(&path)
        .map_err(|e| Outcome::usage(format!("cannot read {}: {e}", path.display())))?;
    FixtureTable::parse(&path.display().to_string(), &text).map(|t| vec![t]).map_err(Outcome::usage)
}

pub fn verify_reports(tables: &[FixtureTable]) -> Vec<Report> {
    tables.iter().map(fixtures::verify_table).collect()
}

fn cmd_verify_tables(fixture: Option<PathBuf>, fmt: Format) -> Outcome {
    let tables = match load_tables(fixture) {
        Ok(t) => t,
        Err(o) => return o,
    };
    if tables.is_empty() {
        return Outcome::usage("no fixture tables found");
    }
    let reports = verify_reports(&tables);
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let text = match fmt {
        Format::Json => emit(&serde_json::to_value(&reports).expect("json"), fmt),
        Format::Tsv => {
            let mut out = String::from("case\tstatus\texpected\tactual\twitness\n");
            for r in &reports {
                let status = if r.status == Status::Pass { "pass" } else { "fail" };
                let witness = r.witness.as_ref().map(|w| w.join(",")).unwrap_or_else(|| "-".into());
                out.push_str(&format!("{}\t{status}\t{}\t{}\t{witness}\n", r.case, r.expected, r.actual));
            }
            out
        }
    };
    Outcome { code: if failed { EXIT_VERIFY } else { EXIT_OK }, stdout: text, stderr: String::new() }
}

fn cmd_mirror(n: usize, p: i64, fmt: Format) -> Outcome {
    let pr = match params(n, p) {
        Ok(v) => v,
        Err(o) => return o,
    };
    let m = mirror_params(pr);
    let (canon, mirrored) = pr.canonical();
    let v = json!({
        "n": n,
        "p": p,
        "mirror_p": m.p,
        "canonical_p": canon.p,
        "mirrored": mirrored,
    });
    Outcome::ok(emit(&v, fmt))
}
