//! Command-line front end.
//!
//! Every report is one JSON document per line on the report stream. Each
//! carries the command, the full configuration echo and the PRNG identifier,
//! so identical invocations produce identical output apart from timing
//! fields. Exit codes: 0 success, 1 mathematical failure, 2 usage error.

mod bench;
mod sets;

use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use bench::{bench, BenchRow, BenchTable};
pub use sets::{build_sets, default_ap_len, parse_slots, SetSpec};

use crate::bounds::{sweep, Check, SweepConfig};
use crate::counting::{
    count_degenerate_rhom, count_par_all, count_par_t, count_rhom_t, count_unit_distances, par_t_fourier, Method, Quantity,
};
use crate::error::Error;
use crate::field::FieldElement;
use crate::fourier::{check_circle_decay, transform_set};
use crate::geometry::{to_json, to_text, Plane, PointSet};
use crate::rng::PRNG_ID;
use crate::vc::{build_system, certified_shattered, find_witness, vc_search, verify_witness, WitnessOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ffplane", version, about = "Counting, Fourier checks and VC search on the plane over F_q")]
pub struct Cli {
    /// Report format (csv is only available for bench tables)
    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    pub output: Output,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Count a configuration quantity
    Count(CountArgs),
    /// Run bound checks on random instances
    Bounds(BoundsArgs),
    /// Dump a spectrum or check circle decay
    Fourier(FourierArgs),
    /// VC dimension of the distance set system
    Vc(VcArgs),
    /// Construct and verify a three-point shattering witness
    Witness(WitnessArgs),
    /// Time counting methods against each other
    Bench(BenchArgs),
    /// Write a point-set file
    Gen(GenArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Count(_) => "count",
            Command::Bounds(_) => "bounds",
            Command::Fourier(_) => "fourier",
            Command::Vc(_) => "vc",
            Command::Witness(_) => "witness",
            Command::Bench(_) => "bench",
            Command::Gen(_) => "gen",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SetArgs {
    /// Comma-separated set slots: full, empty, random[:d:seed], line-ap[:start:step:len], file:PATH
    #[arg(long, default_value = "full")]
    pub set: String,
    /// Density for `random` slots without an explicit density
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, default_value = "par_t")]
    pub quantity: Quantity,
    #[arg(long, default_value = "fast")]
    pub method: Method,
    /// Drop degenerate rhombi (v = u + x) from rhom_t
    #[arg(long)]
    pub exclude_degenerate: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub q: u64,
    /// Fixed radius; by default trials cycle through all nonzero t
    #[arg(long)]
    pub t: Option<u64>,
    /// unit-distance, par-t, par-pair, rhom-relation, rhom-lower or all
    #[arg(long, default_value = "all")]
    #[serde(serialize_with = "ser_check")]
    pub check: Check,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0.5)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn ser_check<S: serde::Serializer>(c: &Check, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(c.name())
}

#[derive(Debug, Args, Serialize)]
pub struct FourierArgs {
    #[arg(long)]
    pub q: u64,
    /// Transform the circle S_j instead of a set slot
    #[arg(long)]
    pub circle: Option<u64>,
    /// Check coefficient decay of the circles (all j, or only --circle)
    #[arg(long)]
    pub decay: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct VcArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[arg(long, default_value_t = 4)]
    pub cap: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub t: u64,
    /// par_t or rhom_t
    #[arg(long, default_value = "par_t")]
    pub quantity: Quantity,
    #[arg(long, value_delimiter = ',', default_value = "oracle,fast")]
    pub methods: Vec<Method>,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Text,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct GenArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, default_value_t = FileFormat::Text)]
    pub format: FileFormat,
    /// Destination file (report stream when absent)
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub sets: SetArgs,
}

enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ToleranceExceeded { .. } => Failure::Math(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            } else {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            };
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Math(msg)) => {
            let _ = writeln!(err, "failure: {msg}");
            EXIT_FAILURE
        }
    }
}

/// Sizes the global rayon pool from `FFPLANE_THREADS` (0 = auto). Only the
/// first call in a process takes effect.
fn configure_threads() -> std::result::Result<(), String> {
    let threads = match std::env::var("FFPLANE_THREADS") {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| format!("FFPLANE_THREADS must be a non-negative integer, got {v:?}"))?,
        Err(_) => 0,
    };
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if cli.output == Output::Csv && !matches!(cli.command, Command::Bench(_)) {
        return Err(Failure::Usage("csv output is only available for bench".into()));
    }
    let mut emit = Emitter { cli, out };
    match &cli.command {
        Command::Count(a) => cmd_count(a, &mut emit),
        Command::Bounds(a) => cmd_bounds(a, &mut emit),
        Command::Fourier(a) => cmd_fourier(a, &mut emit),
        Command::Vc(a) => cmd_vc(a, &mut emit),
        Command::Witness(a) => cmd_witness(a, &mut emit),
        Command::Bench(a) => cmd_bench(a, &mut emit, err),
        Command::Gen(a) => cmd_gen(a, &mut emit),
    }
}

struct Emitter<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
}

impl Emitter<'_> {
    /// Writes one report: the body's fields, then the config echo.
    fn report(&mut self, body: impl Serialize) -> std::io::Result<()> {
        let mut doc = serde_json::to_value(body).map_err(std::io::Error::other)?;
        if let Value::Object(map) = &mut doc {
            map.insert("command".into(), json!(self.cli.command.name()));
            let mut config = serde_json::to_value(&self.cli.command).map_err(std::io::Error::other)?;
            if let Value::Object(c) = &mut config {
                c.insert("output".into(), json!(self.cli.output));
            }
            map.insert("config".into(), config);
            map.insert("prng".into(), json!(PRNG_ID));
        }
        match self.cli.output {
            Output::Human => {
                if let Value::Object(map) = &doc {
                    for (k, v) in map {
                        if k != "config" {
                            writeln!(self.out, "{k}: {v}")?;
                        }
                    }
                    writeln!(self.out)?;
                }
                Ok(())
            }
            _ => writeln!(self.out, "{doc}"),
        }
    }
}

fn plane(q: u64) -> std::result::Result<Plane, Failure> {
    Ok(Plane::new(q)?)
}

fn radius(plane: &Plane, t: u64) -> std::result::Result<FieldElement, Failure> {
    let t = plane.field().element(t);
    if t.is_zero() {
        return Err(Error::InvalidRadius.into());
    }
    Ok(t)
}

fn load_sets(plane: &Plane, a: &SetArgs, count: usize) -> std::result::Result<Vec<PointSet>, Failure> {
    let slots = parse_slots(&a.set).map_err(Failure::Usage)?;
    Ok(build_sets(plane, &slots, count, a.density, a.seed)?)
}

fn four(sets: &[PointSet]) -> [&PointSet; 4] {
    [&sets[0], &sets[1], &sets[2], &sets[3]]
}

fn cmd_count(a: &CountArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let t = radius(&plane, a.t)?;
    let slots = if a.quantity == Quantity::UnitDistances { 2 } else { 4 };
    let sets = load_sets(&plane, &a.sets, slots)?;
    let start = Instant::now();
    let mut extra = None;
    let result = match a.quantity {
        Quantity::UnitDistances => count_unit_distances(&plane, &sets[0], &sets[1], t, a.method)?,
        Quantity::ParT => {
            if a.method == Method::Fourier {
                let split = par_t_fourier(&plane, four(&sets), t)?;
                extra = Some(json!({ "term_i": split.term_i, "term_ii": split.term_ii }));
            }
            count_par_t(&plane, four(&sets), t, a.method)?
        }
        Quantity::Par => count_par_all(&plane, four(&sets), a.method)?,
        Quantity::RhomT => count_rhom_t(&plane, four(&sets), t, a.exclude_degenerate, a.method)?,
        Quantity::Degenerate => count_degenerate_rhom(&plane, four(&sets), t, a.method)?,
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut body = serde_json::to_value(&result).map_err(|e| Failure::Usage(e.to_string()))?;
    body["elapsed_ms"] = json!(elapsed_ms);
    if let Some(extra) = extra {
        body["fourier"] = extra;
    }
    emit.report(body)?;
    Ok(EXIT_OK)
}

fn cmd_bounds(a: &BoundsArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let t = a.t.map(|t| radius(&plane, t)).transpose()?;
    let cfg = SweepConfig { check: a.check, trials: a.trials, density: a.density, seed: a.seed, t };
    let (reports, summary) = sweep(&plane, &cfg)?;
    for r in &reports {
        emit.report(json!({ "report": r }))?;
    }
    emit.report(json!({ "summary": summary }))?;
    Ok(if summary.violations > 0 { EXIT_FAILURE } else { EXIT_OK })
}

fn cmd_fourier(a: &FourierArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let circle = a.circle.map(|j| plane.field().element(j));
    if a.decay {
        let radii: Vec<FieldElement> = match circle {
            Some(j) => vec![j],
            None => plane.field().elements().collect(),
        };
        let mut violated = false;
        for j in radii {
            let d = check_circle_decay(&plane, j);
            violated |= d.doubled_constant.violated();
            emit.report(json!({ "decay": d }))?;
        }
        return Ok(if violated { EXIT_FAILURE } else { EXIT_OK });
    }
    let set = match circle {
        Some(j) => plane.circle(j),
        None => load_sets(&plane, &a.sets, 1)?.remove(0),
    };
    let spectrum = transform_set(&plane, &set);
    let coeffs: Vec<[f64; 4]> = plane
        .points()
        .zip(spectrum.coeffs())
        .map(|(m, c)| [m.x1.value() as f64, m.x2.value() as f64, c.re, c.im])
        .collect();
    emit.report(json!({ "q": plane.q(), "coeffs": coeffs }))?;
    Ok(EXIT_OK)
}

fn cmd_vc(a: &VcArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let t = radius(&plane, a.t)?;
    let e = load_sets(&plane, &a.sets, 1)?.remove(0);
    let sys = build_system(&plane, &e, t)?;
    let found = vc_search(&plane, &sys, a.cap);
    emit.report(json!({
        "vc_dim": found.vc_dim,
        "shattered_example": found.shattered_example,
        "q": plane.q(),
        "t": t.value(),
        "ground_size": e.len(),
    }))?;
    Ok(EXIT_OK)
}

fn cmd_witness(a: &WitnessArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let t = radius(&plane, a.t)?;
    let e = load_sets(&plane, &a.sets, 1)?.remove(0);
    let search = find_witness(&plane, &e, t, a.sets.seed)?;
    let (points, verification, code) = match &search.outcome {
        WitnessOutcome::Found(w) => {
            let v = verify_witness(&plane, &e, t, w);
            let sys = build_system(&plane, &e, t)?;
            let shattered = certified_shattered(&plane, &sys, w)?;
            let labeled: serde_json::Map<String, Value> = w.labeled().iter().map(|(k, p)| (k.to_string(), json!(p))).collect();
            let code = if v.ok && shattered { EXIT_OK } else { EXIT_FAILURE };
            (Some(labeled), Some(json!({ "ok": v.ok, "shattered": shattered, "clauses": v.clauses })), code)
        }
        WitnessOutcome::Failed(_) => (None, None, EXIT_OK),
    };
    emit.report(json!({
        "found": points.is_some(),
        "points": points,
        "direction": search.direction,
        "verification": verification,
        "search": search,
    }))?;
    Ok(code)
}

fn cmd_bench(a: &BenchArgs, emit: &mut Emitter, err: &mut dyn Write) -> Outcome {
    let plane = plane(a.q)?;
    let t = radius(&plane, a.t)?;
    let sets = load_sets(&plane, &a.sets, 4)?;
    let table = bench(&plane, four(&sets), t, a.quantity, &a.methods, a.runs)?;
    if emit.cli.output == Output::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["quantity", "q", "t", "method", "value", "median_ms", "runs"]).map_err(csv_err)?;
        for r in &table.rows {
            w.write_record([
                table.quantity.name().to_string(),
                table.q.to_string(),
                table.t.to_string(),
                r.method.name().to_string(),
                r.value.to_string(),
                format!("{:.3}", r.median_ms),
                table.runs.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
        emit.out.write_all(&bytes)?;
    } else {
        emit.report(&table)?;
    }
    if !table.agree {
        let values: Vec<String> = table.rows.iter().map(|r| format!("{}={}", r.method.name(), r.value)).collect();
        writeln!(err, "failure: methods disagree: {}", values.join(", "))?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

fn csv_err(e: csv::Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn cmd_gen(a: &GenArgs, emit: &mut Emitter) -> Outcome {
    let plane = plane(a.q)?;
    let set = load_sets(&plane, &a.sets, 1)?.remove(0);
    let mut text = match a.format {
        FileFormat::Text => to_text(&set),
        FileFormat::Json => to_json(&set),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &a.out {
        Some(path) => {
            std::fs::write(path, &text)?;
            emit.report(json!({ "q": plane.q(), "size": set.len(), "path": path }))?;
        }
        None => emit.out.write_all(text.as_bytes())?,
    }
    Ok(EXIT_OK)
}
