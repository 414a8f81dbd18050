use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use fracmax::cantor;
use fracmax::covering::{self, OpenInterval};
use fracmax::gaps;
use fracmax::maximal::{self, ContactVerdict, Restriction};
use fracmax::rational::{self, fmt_decimal, fmt_rational, int};
use fracmax::verify::{self, Suite, VerifyConfig};
use fracmax::{parse_measure, parse_rational, sum_measures, Error, IFSMeasure, MeasureSum, Rational};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "fracmax", version, about = "Certified maximal functions of self-similar distribution functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Measure spec (JSON path, or `cantor` / `quarter-cantor`); repeat for sums.
    #[arg(long = "measure", global = true)]
    measures: Vec<String>,
    #[arg(long, global = true)]
    x: Option<String>,
    /// Left end; `-inf` allowed for `maximal`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    a: Option<String>,
    /// Right end; `inf` allowed for `maximal`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    delta: Option<String>,
    #[arg(long, global = true)]
    eps: Option<String>,
    #[arg(long, global = true, default_value = "1/1000000")]
    tol: String,
    /// Evaluation depth (default 12; 8 for `verify`).
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true)]
    levels: Option<usize>,
    /// Gap generations examined beyond an interval's own generation.
    #[arg(long, global = true, default_value_t = gaps::DEFAULT_WINDOW)]
    window: usize,
    /// `start,stop,count`
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distribution function and its integral at `--x`.
    Eval,
    /// Integral of the distribution function over `(--a, --b)` and its average.
    Integral,
    /// Maximal function at `--x`: local with `--delta`, or restricted with `--a/--b`.
    Maximal,
    /// Gaps of the support inside `(--a, --b)` discovered by `--depth`.
    Gaps,
    /// Rows `x, f, M, verdict` over `--grid`.
    ContactScan,
    /// Gap-removal recursion on `(--a, --b)` for `--levels` rounds.
    ImageBound,
    /// Seeded verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Binary pattern of `--x` (window `--levels`), or the excluded cover up to `--levels`.
    CantorPattern,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    Usage(anyhow::Error),
    Verification(String),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Budget { .. } => Failure::Runtime(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(anyhow::anyhow!("{msg}"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn load_measure(spec: &str) -> Result<IFSMeasure, Failure> {
    let path = Path::new(spec);
    if !path.exists() {
        match spec {
            "cantor" => return Ok(IFSMeasure::cantor()),
            "quarter-cantor" => return Ok(IFSMeasure::quarter_cantor()),
            _ => {}
        }
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {spec}")).map_err(Failure::Usage)?;
    let m = parse_measure(&text).map_err(|e| usage(format!("{spec}: {e}")))?;
    if m.name() == "measure" {
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok(m.with_name(stem));
    }
    Ok(m)
}

fn rational_arg(name: &str, value: &Option<String>) -> Result<Rational, Failure> {
    let text = value.as_deref().ok_or_else(|| usage(format!("--{name} is required")))?;
    Ok(parse_rational(text)?)
}

fn optional_rational(value: &Option<String>, default: Rational) -> Result<Rational, Failure> {
    match value {
        Some(text) => Ok(parse_rational(text)?),
        None => Ok(default),
    }
}

/// Parses an endpoint that may be infinite.
fn endpoint(value: &Option<String>, infinite: &[&str]) -> Result<Option<Rational>, Failure> {
    match value.as_deref() {
        None => Ok(None),
        Some(t) if infinite.contains(&t) => Ok(None),
        Some(t) => Ok(Some(parse_rational(t)?)),
    }
}

fn interval_args(cli: &Cli) -> Result<OpenInterval, Failure> {
    let a = optional_rational(&cli.a, int(0))?;
    let b = optional_rational(&cli.b, int(1))?;
    if a >= b {
        return Err(usage(format!("empty interval ({a}, {b})")));
    }
    Ok(OpenInterval::new(a, b))
}

struct Ctx<'a> {
    cli: &'a Cli,
    measures: Vec<IFSMeasure>,
}

impl Ctx<'_> {
    fn sum(&self) -> Result<MeasureSum, Failure> {
        if self.measures.is_empty() {
            return Err(usage("at least one --measure is required"));
        }
        Ok(sum_measures(self.measures.clone())?)
    }

    fn single(&self) -> Result<&IFSMeasure, Failure> {
        match self.measures.as_slice() {
            [m] => Ok(m),
            _ => Err(usage("this command takes exactly one --measure")),
        }
    }

    fn depth(&self) -> usize {
        self.cli.depth.unwrap_or(12)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.cli.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())).map_err(Failure::Runtime),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes()).map_err(|e| Failure::Runtime(e.into()))
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.into()))?;
        text.push('\n');
        self.emit(&text)
    }

    fn emit_csv(&self, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let rt = |e: csv::Error| Failure::Runtime(e.into());
        w.write_record(header).map_err(rt)?;
        for row in rows {
            w.write_record(row).map_err(rt)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Runtime(anyhow::anyhow!("{e}")))?;
        self.emit(&String::from_utf8_lossy(&bytes))
    }
}

fn dec(q: &Rational) -> String {
    fmt_decimal(q, 12)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let measures = cli.measures.iter().map(|s| load_measure(s)).collect::<Result<Vec<_>, _>>()?;
    let ctx = Ctx { cli, measures };
    let tol = parse_rational(&cli.tol)?;
    if tol <= int(0) {
        return Err(usage("--tol must be positive"));
    }
    match &cli.command {
        Command::Eval => eval(&ctx),
        Command::Integral => integral(&ctx),
        Command::Maximal => maximal_cmd(&ctx, &tol),
        Command::Gaps => gaps_cmd(&ctx),
        Command::ContactScan => contact_scan(&ctx, &tol),
        Command::ImageBound => image_bound(&ctx),
        Command::Verify { suite } => verify_cmd(&ctx, suite),
        Command::CantorPattern => cantor_pattern(&ctx),
    }
}

fn eval(ctx: &Ctx) -> Result<(), Failure> {
    let f = ctx.sum()?;
    let x = rational_arg("x", &ctx.cli.x)?;
    let p = f.eval_point(&x, ctx.depth());
    if ctx.cli.format == Format::Csv {
        let row = vec![
            fmt_rational(&x),
            fmt_rational(&p.cdf.lo),
            fmt_rational(&p.cdf.hi),
            dec(&p.cdf.lo),
            dec(&p.cdf.hi),
            fmt_rational(&p.integral.lo),
            fmt_rational(&p.integral.hi),
        ];
        return ctx.emit_csv(&["x", "f_lo", "f_hi", "f_lo_dec", "f_hi_dec", "g_lo", "g_hi"], &[row]);
    }
    let value = if p.cdf.is_exact() { fmt_rational(&p.cdf.lo) } else { p.cdf.to_string() };
    ctx.emit_json(&json!({
        "x": fmt_rational(&x),
        "depth": ctx.depth(),
        "value": value,
        "exact": p.cdf.is_exact(),
        "cdf": p.cdf,
        "integral": p.integral,
    }))
}

fn integral(ctx: &Ctx) -> Result<(), Failure> {
    let f = ctx.sum()?;
    let j = interval_args(ctx.cli)?;
    let g = f.cdf_integral(&j.lo, &j.hi, ctx.depth());
    let avg = g.scale(&(int(1) / j.length()));
    if ctx.cli.format == Format::Csv {
        let row = vec![
            fmt_rational(&j.lo),
            fmt_rational(&j.hi),
            fmt_rational(&g.lo),
            fmt_rational(&g.hi),
            fmt_rational(&avg.lo),
            fmt_rational(&avg.hi),
            dec(&avg.lo),
            dec(&avg.hi),
        ];
        return ctx.emit_csv(&["a", "b", "int_lo", "int_hi", "avg_lo", "avg_hi", "avg_lo_dec", "avg_hi_dec"], &[row]);
    }
    ctx.emit_json(&json!({
        "a": fmt_rational(&j.lo),
        "b": fmt_rational(&j.hi),
        "depth": ctx.depth(),
        "integral": g,
        "average": avg,
    }))
}

fn maximal_cmd(ctx: &Ctx, tol: &Rational) -> Result<(), Failure> {
    let f = ctx.sum()?;
    let x = rational_arg("x", &ctx.cli.x)?;
    let depth = ctx.depth();
    let (result, mode) = if ctx.cli.a.is_some() || ctx.cli.b.is_some() {
        if ctx.cli.delta.is_some() {
            return Err(usage("--delta and --a/--b are exclusive"));
        }
        let lo = endpoint(&ctx.cli.a, &["-inf", "-infinity"])?;
        let hi = endpoint(&ctx.cli.b, &["inf", "+inf", "infinity"])?;
        let restriction = Restriction::new(lo, hi);
        let mode = json!({ "restriction": restriction.to_string() });
        (maximal::maximal_restricted(&f, &x, &restriction, tol, depth)?, mode)
    } else {
        let delta = optional_rational(&ctx.cli.delta, int(1))?;
        if delta <= int(0) {
            return Err(usage("--delta must be positive"));
        }
        let mode = json!({ "delta": fmt_rational(&delta) });
        (maximal::maximal_local(&f, &x, &delta, tol, depth), mode)
    };
    let fx = f.cdf_eval(&x, depth);
    let verdict = maximal::verdict(&result, &fx);
    if ctx.cli.format == Format::Csv {
        let row = scan_row(&x, &fx, &result, &verdict);
        return ctx.emit_csv(&SCAN_HEADER, &[row]);
    }
    ctx.emit_json(&json!({
        "x": fmt_rational(&x),
        "mode": mode,
        "tol": fmt_rational(tol),
        "depth": depth,
        "f": fx,
        "maximal": result,
        "contact": verdict,
    }))
}

fn gaps_cmd(ctx: &Ctx) -> Result<(), Failure> {
    let mu = ctx.single()?;
    let j = interval_args(ctx.cli)?;
    let list = covering::gap_enumerate(mu, &j, ctx.depth())?;
    if ctx.cli.format == Format::Csv {
        let rows: Vec<_> = list
            .iter()
            .map(|g| vec![g.index.to_string(), fmt_rational(&g.a), fmt_rational(&g.b), g.depth_discovered.to_string(), dec(&g.a), dec(&g.b)])
            .collect();
        return ctx.emit_csv(&["index", "a", "b", "generation", "a_dec", "b_dec"], &rows);
    }
    ctx.emit_json(&json!({ "interval": j, "depth": ctx.depth(), "gaps": list }))
}

const SCAN_HEADER: [&str; 10] = ["x", "f_lo", "f_hi", "M_lo", "M_hi", "verdict", "f_lo_dec", "f_hi_dec", "M_lo_dec", "M_hi_dec"];

fn scan_row(x: &Rational, fx: &fracmax::Enclosure, m: &maximal::MaximalResult, v: &ContactVerdict) -> Vec<String> {
    let verdict = match v {
        ContactVerdict::Detached { .. } => "detached",
        ContactVerdict::Undetermined => "undetermined",
    };
    vec![
        fmt_rational(x),
        fmt_rational(&fx.lo),
        fmt_rational(&fx.hi),
        fmt_rational(&m.value.lo),
        fmt_rational(&m.value.hi),
        verdict.to_string(),
        dec(&fx.lo),
        dec(&fx.hi),
        dec(&m.value.lo),
        dec(&m.value.hi),
    ]
}

fn parse_grid(text: &str) -> Result<Vec<Rational>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(usage("--grid expects start,stop,count"));
    };
    let start = parse_rational(start)?;
    let stop = parse_rational(stop)?;
    let count: usize = count.parse().map_err(|_| usage(format!("bad grid count `{count}`")))?;
    if count == 0 || start > stop {
        return Err(usage("--grid needs count >= 1 and start <= stop"));
    }
    let step = (&stop - &start) / int(count as i64);
    Ok((0..count).map(|k| &start + &step * int(k as i64)).collect())
}

fn contact_scan(ctx: &Ctx, tol: &Rational) -> Result<(), Failure> {
    let f = ctx.sum()?;
    let grid = parse_grid(ctx.cli.grid.as_deref().ok_or_else(|| usage("--grid is required"))?)?;
    let delta = optional_rational(&ctx.cli.delta, int(1))?;
    let depth = ctx.depth();
    let rows: Vec<_> = grid
        .par_iter()
        .map(|x| {
            let fx = f.cdf_eval(x, depth);
            let m = maximal::maximal_local(&f, x, &delta, tol, depth);
            let v = maximal::verdict(&m, &fx);
            (x.clone(), fx, m, v)
        })
        .collect();
    if ctx.cli.format == Format::Csv {
        let table: Vec<_> = rows.iter().map(|(x, fx, m, v)| scan_row(x, fx, m, v)).collect();
        return ctx.emit_csv(&SCAN_HEADER, &table);
    }
    let items: Vec<_> = rows
        .iter()
        .map(|(x, fx, m, v)| json!({ "x": fmt_rational(x), "f": fx, "maximal": m, "contact": v }))
        .collect();
    ctx.emit_json(&json!({ "delta": fmt_rational(&delta), "tol": fmt_rational(tol), "depth": depth, "rows": items }))
}

fn image_bound(ctx: &Ctx) -> Result<(), Failure> {
    let mu = ctx.single()?;
    let f = MeasureSum::single(mu.clone());
    let i = interval_args(ctx.cli)?;
    let delta = optional_rational(&ctx.cli.delta, i.length())?;
    let levels = ctx.cli.levels.unwrap_or(3);
    let report = gaps::image_measure_bound(&f, &i, &delta, levels, ctx.cli.window, ctx.depth())?;
    if ctx.cli.format == Format::Csv {
        let rows: Vec<_> = report
            .levels
            .iter()
            .map(|l| {
                vec![
                    l.level.to_string(),
                    l.survivors.len().to_string(),
                    fmt_rational(&l.removed_mass.lo),
                    fmt_rational(&l.surviving_mass.hi),
                    fmt_rational(&l.bound.hi),
                    dec(&l.surviving_mass.hi),
                    dec(&l.bound.hi),
                    l.holds.to_string(),
                ]
            })
            .collect();
        ctx.emit_csv(&["level", "survivors", "removed", "surviving_hi", "bound_hi", "surviving_dec", "bound_dec", "holds"], &rows)?;
    } else {
        ctx.emit_json(&report)?;
    }
    if report.holds {
        Ok(())
    } else {
        Err(Failure::Verification("recursion bound violated".into()))
    }
}

fn verify_cmd(ctx: &Ctx, suite: &str) -> Result<(), Failure> {
    let suites = Suite::parse(suite)?;
    let mut config = VerifyConfig { seed: ctx.cli.seed, window: ctx.cli.window, ..VerifyConfig::default() };
    if let Some(d) = ctx.cli.depth {
        config.depth = d;
    }
    if let Some(l) = ctx.cli.levels {
        config.levels = l;
    }
    if let Some(e) = &ctx.cli.eps {
        config.epsilon = parse_rational(e)?;
    }
    let report = verify::run(&suites, &ctx.measures, &config)?;
    if ctx.cli.format == Format::Csv {
        let rows: Vec<_> = report
            .suites
            .iter()
            .flat_map(|s| {
                s.checks.iter().map(move |c| {
                    vec![format!("{:?}", s.suite).to_lowercase(), c.name.clone(), c.passed.to_string(), c.detail.clone()]
                })
            })
            .collect();
        ctx.emit_csv(&["suite", "check", "passed", "detail"], &rows)?;
    } else {
        ctx.emit_json(&report)?;
    }
    if report.passed {
        Ok(())
    } else {
        let failed: Vec<_> =
            report.suites.iter().flat_map(|s| s.checks.iter()).filter(|c| !c.passed).map(|c| c.name.clone()).collect();
        Err(Failure::Verification(failed.join("; ")))
    }
}

fn cantor_pattern(ctx: &Ctx) -> Result<(), Failure> {
    let levels = ctx.cli.levels.unwrap_or(12);
    if let Some(y) = &ctx.cli.x {
        let y = parse_rational(y)?;
        let scan = cantor::pattern_scan(&y, levels)?;
        return ctx.emit_json(&scan);
    }
    let cover = cantor::excluded_interval_cover(levels)?;
    let brute = rational::rat(cantor::count_pattern_free(levels) as i64, 1i64 << (levels + 2));
    if ctx.cli.format == Format::Csv {
        let rows: Vec<_> = cover
            .gaps
            .iter()
            .map(|g| {
                let prefix: String = g.prefix.iter().map(|d| char::from(b'0' + d)).collect();
                vec![
                    g.k.to_string(),
                    prefix,
                    fmt_rational(&g.image_gap.0),
                    fmt_rational(&g.image_gap.1),
                    fmt_rational(&g.average),
                    g.certified.to_string(),
                ]
            })
            .collect();
        ctx.emit_csv(&["k", "prefix", "gap_lo", "gap_hi", "average", "certified"], &rows)?;
    } else {
        ctx.emit_json(&json!({ "cover": cover, "pattern_free_fraction": fmt_rational(&brute) }))?;
    }
    if cover.all_certified && cover.disjoint && cover.prefixes_match && cover.residual == brute {
        Ok(())
    } else {
        Err(Failure::Verification("excluded cover check failed".into()))
    }
}
