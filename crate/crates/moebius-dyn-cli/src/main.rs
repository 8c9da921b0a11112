//! Command-line front end: classification reports, orbit and histogram
//! exports, K_q tables, and p-adic analyses.
//!
//! Exit codes: 0 success, 2 invalid parameters, 3 pole at the starting
//! point, 4 command/verdict mismatch.

mod report;

use clap::{Args, Parser, Subcommand};
use moebius_dyn::{
    classify_real, density_histogram, limit_of_orbit, padic_val, MoebiusMap, OrbitLimit,
    PadicContext, ParseRationalError, Rational, RealVerdict, Scalar,
};
use report::{
    classify_document, map_value, padic_block, padic_distance_target, rational_value, SCHEMA,
};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "moebius-dyn",
    version,
    about = "Dynamics of f(x) = (x + a)/(bx + c) over the reals and p-adic fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MapArgs {
    /// Parameter a, an integer or "n/m" (decimals are rejected)
    #[arg(short, long, allow_hyphen_values = true)]
    a: String,
    /// Parameter b (nonzero)
    #[arg(short, long, allow_hyphen_values = true)]
    b: String,
    /// Parameter c (c = a*b is rejected: the map would be constant)
    #[arg(short, long, allow_hyphen_values = true)]
    c: String,
}

#[derive(Args)]
struct OutputArgs {
    /// Write to this path instead of stdout
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the real dynamics (and the p-adic dynamics when -p is given)
    Classify {
        #[command(flatten)]
        map: MapArgs,
        /// Prime for an additional p-adic verdict block
        #[arg(short, long)]
        p: Option<u64>,
        /// Periodicity scan bound
        #[arg(short, long, default_value_t = 64)]
        qmax: u32,
        /// Start for the numeric confirmation of a convergence verdict
        #[arg(short = 'x', long, allow_hyphen_values = true, default_value = "1/2")]
        x0: String,
        /// Tolerance for the numeric confirmation
        #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
        tol: f64,
        #[arg(long, default_value = "json", value_parser = ["json", "text"])]
        format: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Export the orbit of a point as CSV
    Iterate {
        #[command(flatten)]
        map: MapArgs,
        /// Starting point: "n/m" or integer runs exactly, a decimal runs in floats
        #[arg(short = 'x', long, allow_hyphen_values = true)]
        x0: String,
        /// Number of steps
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        /// Prime: adds a p-adic exponent column (exact starts only)
        #[arg(short, long)]
        p: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Table of the periodicity scalars K_q
    Periods {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long, default_value_t = 64)]
        qmax: u32,
        #[arg(long, default_value = "text", value_parser = ["text", "json", "csv"])]
        format: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Full p-adic analysis: classification, characters, Siegel disks, basins
    Padic {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        p: u64,
        #[arg(short, long, default_value_t = 64)]
        qmax: u32,
        #[arg(long, default_value = "json", value_parser = ["json", "text"])]
        format: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Histogram of a dense orbit as CSV (refused for non-dense verdicts)
    Density {
        #[command(flatten)]
        map: MapArgs,
        /// Float starting point
        #[arg(short = 'x', long, default_value_t = 0.3, allow_hyphen_values = true)]
        x0: f64,
        /// Number of orbit points
        #[arg(short, long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        lo: f64,
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        hi: f64,
        /// Scan bound used for the dense-verdict gate
        #[arg(short, long, default_value_t = 64)]
        qmax: u32,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Combined report: classification, K_q table, and p-adic block
    Report {
        #[command(flatten)]
        map: MapArgs,
        #[arg(short, long)]
        p: Option<u64>,
        #[arg(short, long, default_value_t = 64)]
        qmax: u32,
        #[arg(long, default_value = "json", value_parser = ["json", "text"])]
        format: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

enum CliError {
    /// Bad parameters: exit 2.
    Usage(String),
    /// The starting point is the pole: exit 3.
    PoleAtStart(String),
    /// The command does not apply to this map's verdict: exit 4.
    VerdictMismatch(String),
    /// I/O failure: exit 1.
    Io(std::io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::PoleAtStart(_) => 3,
            CliError::VerdictMismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::PoleAtStart(m) | CliError::VerdictMismatch(m) => {
                write!(f, "{m}")
            }
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    Rational::from_str(s).map_err(|e| CliError::Usage(format!("parameter {what}: {e}")))
}

fn build_map(args: &MapArgs) -> Result<MoebiusMap<Rational>, CliError> {
    let a = parse_rational(&args.a, "a")?;
    let b = parse_rational(&args.b, "b")?;
    let c = parse_rational(&args.c, "c")?;
    MoebiusMap::new(a, b, c).map_err(|e| CliError::Usage(e.to_string()))
}

fn build_context(map: &MoebiusMap<Rational>, p: u64) -> Result<PadicContext, CliError> {
    PadicContext::new(map.clone(), p).map_err(|e| CliError::Usage(e.to_string()))
}

fn emit(out: &OutputArgs, content: &str) -> Result<(), CliError> {
    match &out.output {
        None => {
            println!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, format!("{content}\n")).map_err(CliError::Io),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Classify {
            map,
            p,
            qmax,
            x0,
            tol,
            format,
            out,
        } => cmd_classify(&map, p, qmax, &x0, tol, &format, &out),
        Command::Iterate { map, x0, n, p, out } => cmd_iterate(&map, &x0, n, p, &out),
        Command::Periods {
            map,
            qmax,
            format,
            out,
        } => cmd_periods(&map, qmax, &format, &out),
        Command::Padic {
            map,
            p,
            qmax,
            format,
            out,
        } => cmd_padic(&map, p, qmax, &format, &out),
        Command::Density {
            map,
            x0,
            n,
            bins,
            lo,
            hi,
            qmax,
            out,
        } => cmd_density(&map, x0, n, bins, lo, hi, qmax, &out),
        Command::Report {
            map,
            p,
            qmax,
            format,
            out,
        } => cmd_report(&map, p, qmax, &format, &out),
    }
}

/// Start for the numeric confirmation: exact strings and decimals both work.
fn parse_float_start(s: &str) -> Result<f64, CliError> {
    match Rational::from_str(s) {
        Ok(r) => Ok(r.to_f64()),
        Err(ParseRationalError::DecimalRejected(_)) => s
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("invalid start {s:?}"))),
        Err(e) => Err(CliError::Usage(format!("invalid start {s:?}: {e}"))),
    }
}

fn confirmation_value(map: &MoebiusMap<Rational>, qmax: u32, x0: f64, tol: f64) -> Value {
    if tol <= 0.0 {
        return Value::Null;
    }
    let cls = classify_real(map, qmax);
    let RealVerdict::ConvergesTo { point, .. } = &cls.verdict else {
        return Value::Null;
    };
    let target = point.to_f64().expect("convergence targets are real");
    match limit_of_orbit(map, x0, tol, moebius_dyn::real::DEFAULT_NMAX) {
        OrbitLimit::Converged { value, steps } => json!({
            "from": x0,
            "tol": tol,
            "status": "converged",
            "value": value,
            "steps": steps,
            "distance_to_verdict": (value - target).abs(),
        }),
        OrbitLimit::NotConverged { reason } => json!({
            "from": x0,
            "tol": tol,
            "status": "not_converged",
            "reason": format!("{reason:?}"),
        }),
    }
}

fn cmd_classify(
    map_args: &MapArgs,
    p: Option<u64>,
    qmax: u32,
    x0: &str,
    tol: f64,
    format: &str,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let map = build_map(map_args)?;
    let ctx = p.map(|p| build_context(&map, p)).transpose()?;
    let confirmation = confirmation_value(&map, qmax, parse_float_start(x0)?, tol);
    let doc = classify_document(&map, qmax, ctx.as_ref(), Some(confirmation));
    let rendered = match format {
        "json" => serde_json::to_string_pretty(&doc).expect("serializable"),
        _ => text_summary(&doc),
    };
    emit(out, &rendered)
}

fn cmd_iterate(
    map_args: &MapArgs,
    x0: &str,
    n: usize,
    p: Option<u64>,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let map = build_map(map_args)?;
    match Rational::from_str(x0) {
        Ok(start) => {
            if start == map.pole() {
                return Err(CliError::PoleAtStart(format!(
                    "x0 = {start} is the pole of the map"
                )));
            }
            let ctx = p.map(|p| build_context(&map, p)).transpose()?;
            let target = ctx.as_ref().and_then(|c| padic_distance_target(c, 64));
            let mut csv = String::new();
            let header = if ctx.is_some() {
                "n,value_exact,value_decimal,padic_exponent"
            } else {
                "n,value_exact,value_decimal"
            };
            csv.push_str(header);
            let mut x = start;
            for step in 0..=n {
                let padic_col = match &ctx {
                    None => String::new(),
                    Some(c) => {
                        let measured = match &target {
                            Some(t) => &x - t,
                            None => x.clone(),
                        };
                        let v = padic_val(&measured, c.p()).expect("prime validated");
                        let exp = v
                            .finite_exponent()
                            .map(|e| e.to_string())
                            .unwrap_or_else(|| "inf".into());
                        format!(",{exp}")
                    }
                };
                let _ = write!(csv, "\n{step},{x},{}{padic_col}", x.to_f64());
                if step == n {
                    break;
                }
                match map.apply(&x) {
                    Ok(next) => x = next,
                    Err(_) => {
                        let _ = write!(
                            csv,
                            "\n{},POLE,{}",
                            step + 1,
                            if ctx.is_some() { "," } else { "" }
                        );
                        break;
                    }
                }
            }
            emit(out, &csv)
        }
        Err(ParseRationalError::DecimalRejected(_)) => {
            if p.is_some() {
                return Err(CliError::Usage(
                    "the p-adic exponent column needs an exact (rational) start".into(),
                ));
            }
            let start: f64 = x0
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("invalid start {x0:?}")))?;
            let fmap = map.to_float();
            if (fmap.b() * start + fmap.c()).is_pole_denominator() {
                return Err(CliError::PoleAtStart(format!(
                    "x0 = {start} is inside the pole guard band"
                )));
            }
            let mut csv = String::from("n,value_exact,value_decimal");
            let mut x = start;
            for step in 0..=n {
                let _ = write!(csv, "\n{step},,{x}");
                if step == n {
                    break;
                }
                match fmap.apply(&x) {
                    Ok(next) => x = next,
                    Err(_) => {
                        let _ = write!(csv, "\n{},NEAR_POLE,", step + 1);
                        break;
                    }
                }
            }
            emit(out, &csv)
        }
        Err(e) => Err(CliError::Usage(format!("invalid start {x0:?}: {e}"))),
    }
}

fn cmd_periods(
    map_args: &MapArgs,
    qmax: u32,
    format: &str,
    out: &OutputArgs,
) -> Result<(), CliError> {
    if qmax < 2 {
        return Err(CliError::Usage("qmax must be at least 2".into()));
    }
    let map = build_map(map_args)?;
    let ks = map.k_values(qmax);
    let min_period = map.min_period(qmax);
    let rendered = match format {
        "csv" => {
            let mut s = String::from("q,k_q,is_zero");
            for (i, k) in ks.iter().enumerate() {
                let _ = write!(s, "\n{},{},{}", i + 1, k, k.is_zero());
            }
            s
        }
        "json" => {
            let table: Vec<Value> = ks
                .iter()
                .enumerate()
                .map(|(i, k)| json!({ "q": i + 1, "k": k.to_string(), "zero": k.is_zero() }))
                .collect();
            let doc = json!({
                "schema": SCHEMA,
                "command": "periods",
                "map": map_value(&map),
                "qmax": qmax,
                "table": table,
                "min_period": min_period,
            });
            serde_json::to_string_pretty(&doc).expect("serializable")
        }
        _ => {
            let mut s = format!(
                "K_q table for f(x) = (x + {})/({} x + {}), q <= {qmax}\n",
                map.a(),
                map.b(),
                map.c()
            );
            for (i, k) in ks.iter().enumerate() {
                let marker = if k.is_zero() { "   <-- zero" } else { "" };
                let _ = writeln!(s, "{:>4}  {}{}", i + 1, k, marker);
            }
            match min_period {
                Some(q) => {
                    let _ = write!(
                        s,
                        "min period: {q} (every point outside the bad set is {q}-periodic)"
                    );
                }
                None => {
                    let _ = write!(s, "no K_q zero up to q = {qmax}");
                }
            }
            s
        }
    };
    emit(out, &rendered)
}

fn cmd_padic(
    map_args: &MapArgs,
    p: u64,
    qmax: u32,
    format: &str,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let map = build_map(map_args)?;
    let ctx = build_context(&map, p)?;
    let doc = json!({
        "schema": SCHEMA,
        "command": "padic",
        "map": map_value(&map),
        "discriminant": rational_value(&map.discriminant()),
        "padic": padic_block(&ctx, qmax),
    });
    let rendered = match format {
        "json" => serde_json::to_string_pretty(&doc).expect("serializable"),
        _ => text_summary(&doc),
    };
    emit(out, &rendered)
}

#[allow(clippy::too_many_arguments)]
fn cmd_density(
    map_args: &MapArgs,
    x0: f64,
    n: usize,
    bins: usize,
    lo: f64,
    hi: f64,
    qmax: u32,
    out: &OutputArgs,
) -> Result<(), CliError> {
    if bins == 0 || lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(CliError::Usage("need bins >= 1 and lo < hi".into()));
    }
    let map = build_map(map_args)?;
    let cls = classify_real(&map, qmax);
    match &cls.verdict {
        RealVerdict::Dense { .. } => {}
        RealVerdict::GloballyPeriodic { q } => {
            return Err(CliError::VerdictMismatch(format!(
                "density needs a dense verdict, but this map is globally {q}-periodic"
            )))
        }
        RealVerdict::ConvergesTo { .. } => {
            return Err(CliError::VerdictMismatch(
                "density needs a dense verdict, but orbits of this map converge".into(),
            ))
        }
    }
    let hist = density_histogram(&map, x0, n, bins, lo, hi);
    let mut csv = String::from("bin_lo,bin_hi,count");
    for (i, count) in hist.counts.iter().enumerate() {
        let (lo_i, hi_i) = hist.bin_edges(i);
        let _ = write!(csv, "\n{lo_i},{hi_i},{count}");
    }
    eprintln!(
        "binned {} of {} points ({} below, {} above, {} skipped near the pole)",
        hist.total_binned(),
        hist.samples,
        hist.below,
        hist.above,
        hist.skips
    );
    emit(out, &csv)
}

fn cmd_report(
    map_args: &MapArgs,
    p: Option<u64>,
    qmax: u32,
    format: &str,
    out: &OutputArgs,
) -> Result<(), CliError> {
    let map = build_map(map_args)?;
    let ctx = p.map(|p| build_context(&map, p)).transpose()?;
    let mut doc = classify_document(&map, qmax, ctx.as_ref(), None);
    let obj = doc.as_object_mut().expect("document object");
    obj.insert("command".into(), json!("report"));
    let table: Vec<Value> = map
        .k_values(qmax)
        .iter()
        .enumerate()
        .map(|(i, k)| json!({ "q": i + 1, "k": k.to_string(), "zero": k.is_zero() }))
        .collect();
    obj.insert("k_table".into(), json!(table));
    let rendered = match format {
        "json" => serde_json::to_string_pretty(&doc).expect("serializable"),
        _ => text_summary(&doc),
    };
    emit(out, &rendered)
}

/// Compact human-readable rendering of a report document.
fn text_summary(doc: &Value) -> String {
    let mut s = String::new();
    let map = &doc["map"];
    let _ = writeln!(
        s,
        "f(x) = (x + {})/({} x + {}), pole at {}",
        map["a"]["exact"].as_str().unwrap_or("?"),
        map["b"]["exact"].as_str().unwrap_or("?"),
        map["c"]["exact"].as_str().unwrap_or("?"),
        map["pole"]["exact"].as_str().unwrap_or("?"),
    );
    if let Some(d) = doc["discriminant"]["exact"].as_str() {
        let _ = writeln!(s, "discriminant D = {d}");
    }
    if doc["alpha"].is_object() {
        let _ = writeln!(
            s,
            "alpha = {}, beta = {}",
            doc["alpha"]["exact"].as_str().unwrap_or("?"),
            doc["beta"]["exact"].as_str().unwrap_or("?"),
        );
    }
    let real = &doc["real"];
    if real.is_object() {
        let line = match real["verdict"].as_str() {
            Some("globally_periodic") => {
                format!("real verdict: globally periodic with period {}", real["q"])
            }
            Some("converges_to") => format!(
                "real verdict: every orbit converges to {} = {}",
                real["which"].as_str().unwrap_or("?"),
                real["point"]["exact"].as_str().unwrap_or("?"),
            ),
            Some("dense") => format!(
                "real verdict: dense orbits (no K_q zero up to {})",
                real["qmax_scanned"]
            ),
            _ => "real verdict: ?".into(),
        };
        let _ = writeln!(s, "{line}");
        if let Some(theta) = real["theta"].as_f64() {
            let _ = writeln!(s, "rotation angle theta = {theta}");
        }
    }
    let padic = &doc["padic"];
    if padic.is_object() {
        let cls = &padic["classification"];
        let line = match cls["verdict"].as_str() {
            Some("globally_periodic") => {
                format!(
                    "p-adic verdict (p = {}): globally periodic, q = {}",
                    padic["p"], cls["q"]
                )
            }
            Some("converges_to") => format!(
                "p-adic verdict (p = {}): orbits converge to {}",
                padic["p"],
                cls["point"].as_str().unwrap_or("?"),
            ),
            Some("indifferent_siegel") => format!(
                "p-adic verdict (p = {}): indifferent/Siegel regime",
                padic["p"]
            ),
            _ => format!("p-adic verdict (p = {}): ?", padic["p"]),
        };
        let _ = writeln!(s, "{line}");
    }
    s.truncate(s.trim_end().len());
    s
}
