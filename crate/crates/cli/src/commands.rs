//! Command definitions and their JSON, CSV and text renderings.

use std::fmt::Write as _;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use meanlab_core::analysis::{self, ProbeSide};
use meanlab_core::axioms::{self, GeneratorConfig, PropertyId, PropertyReport, Source};
use meanlab_core::means::{self, transform_kf, LimitEstimate, LimitSchedule, MonotoneFunc};
use meanlab_core::rational::{self, Rational};
use meanlab_core::{json as enc, Execution, Mean, MeanValue, RealSet};
use serde_json::{json, Value};

use crate::number::parse_number;
use crate::{dsl, CliError};

#[derive(Parser, Debug)]
#[command(
    name = "meanlab",
    version,
    about = "Exact generalized means of subsets of the real line"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Value of a mean on a set
    Eval(Flags),
    /// Limit mean along the 2^j schedule, with its trace
    Limit(Flags),
    /// Symmetry derivative at --at x, or the append probe with --at sup|inf
    Derive(Flags),
    /// Accumulation points by a mean (union law with --set2)
    Accpoints(Flags),
    /// Mean-liminf and mean-limsup
    Bounds(Flags),
    /// Randomized property checks
    Props(Flags),
    /// Value, bounds, accumulation points and property checks in one report
    Report(Flags),
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// avg1, amean, macc, iso, eds, avgfat, lavg, meds, miso or avgf; `iso(5)` style arguments are accepted
    #[arg(long)]
    pub mean: Option<String>,
    /// Set expression, or `-` to read it from stdin
    #[arg(long)]
    pub set: Option<String>,
    #[arg(long)]
    pub set2: Option<String>,
    /// Monotone transform such as `square` or `affine(2,1)`
    #[arg(long = "f")]
    pub f: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long = "n")]
    pub n: Option<u64>,
    /// A rational point, or `sup` / `inf` for the append probe
    #[arg(long)]
    pub at: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    /// Largest schedule index (rounded down to a power of two)
    #[arg(long)]
    pub max_n: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated property names, or `all`
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub json: bool,
    #[arg(long, conflicts_with = "json")]
    pub csv: bool,
    /// Run trials on the calling thread
    #[arg(long)]
    pub sequential: bool,
}

/// A command result in all its renderings.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub csv: Option<String>,
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<String, CliError> {
    let (flags, out) = match &cli.command {
        Command::Eval(f) => (f, eval(f, stdin)?),
        Command::Limit(f) => (f, limit(f, stdin)?),
        Command::Derive(f) => (f, derive(f, stdin)?),
        Command::Accpoints(f) => (f, accpoints(f, stdin)?),
        Command::Bounds(f) => (f, bounds(f, stdin)?),
        Command::Props(f) => (f, props(f)?),
        Command::Report(f) => (f, report(f, stdin)?),
    };
    if flags.json {
        Ok(format!(
            "{}\n",
            serde_json::to_string_pretty(&out.json).expect("values serialize")
        ))
    } else if flags.csv {
        out.csv
            .ok_or_else(|| CliError::Usage("this command has no CSV form".into()))
    } else {
        Ok(out.text)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_number(text).ok_or_else(|| usage(format!("--{flag}: `{text}` is not a number")))
}

fn read_set(flag: &str, source: Option<&str>, stdin: &mut dyn Read) -> Result<RealSet, CliError> {
    let source = source.ok_or_else(|| usage(format!("--{flag} is required")))?;
    if source == "-" {
        let mut text = String::new();
        stdin
            .read_to_string(&mut text)
            .map_err(|e| CliError::Io(e.to_string()))?;
        dsl::eval_str(&text)
    } else {
        dsl::eval_str(source)
    }
}

fn schedule(flags: &Flags, base: LimitSchedule) -> Result<LimitSchedule, CliError> {
    let mut s = base;
    if let Some(t) = &flags.tol {
        s = s.with_tolerance(number("tol", t)?);
    }
    if let Some(m) = flags.max_n {
        if m < 2 {
            return Err(usage("--max-n must be at least 2"));
        }
        s = s.with_last(m.ilog2());
    }
    s.validate()?;
    Ok(s)
}

/// Splits `name(arg)` into its parts.
fn split_call(text: &str) -> Result<(&str, Option<&str>), CliError> {
    match text.split_once('(') {
        Some((name, rest)) => {
            let arg = rest
                .strip_suffix(')')
                .ok_or_else(|| usage(format!("--mean: unbalanced `{text}`")))?;
            Ok((name.trim(), Some(arg.trim())))
        }
        None => Ok((text.trim(), None)),
    }
}

fn mean_name(flags: &Flags) -> Result<&str, CliError> {
    flags
        .mean
        .as_deref()
        .ok_or_else(|| usage("--mean is required"))
}

fn transform(flags: &Flags) -> Result<Option<MonotoneFunc>, CliError> {
    flags
        .f
        .as_deref()
        .map(|f| f.parse::<MonotoneFunc>().map_err(CliError::from))
        .transpose()
}

pub fn parse_mean(flags: &Flags) -> Result<Mean, CliError> {
    let (name, arg) = split_call(mean_name(flags)?)?;
    let index = || -> Result<u64, CliError> {
        match arg {
            Some(a) => a
                .parse()
                .map_err(|_| usage(format!("--mean: `{a}` is not an index"))),
            None => flags
                .n
                .ok_or_else(|| usage(format!("--mean {name} needs --n"))),
        }
    };
    let f = transform(flags)?;
    let k = match name {
        "avg1" => Mean::Avg1,
        "amean" => Mean::Amean,
        "macc" => Mean::MAcc,
        "iso" => Mean::Iso(index()?),
        "eds" => Mean::Eds(index()?),
        "avgfat" => Mean::AvgFat(match (arg, &flags.delta) {
            (Some(a), _) => number("mean", a)?,
            (None, Some(d)) => number("delta", d)?,
            (None, None) => return Err(usage("--mean avgfat needs --delta")),
        }),
        "lavg" => Mean::LAvg(schedule(flags, LimitSchedule::default())?),
        "meds" => Mean::MEds(schedule(flags, LimitSchedule::default())?),
        "miso" => Mean::MIso(schedule(flags, LimitSchedule::default())?),
        "avgf" => {
            let f = match arg {
                Some(a) => a.parse::<MonotoneFunc>()?,
                None => f.ok_or_else(|| usage("--mean avgf needs --f"))?,
            };
            return Ok(Mean::AvgF(f));
        }
        _ => return Err(usage(format!("unknown mean `{name}`"))),
    };
    Ok(match f {
        Some(f) => transform_kf(k, f),
        None => k,
    })
}

fn execution(flags: &Flags) -> Execution {
    if flags.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

/// `2 (exact 2/1)` and the like.
pub fn describe(v: &MeanValue) -> String {
    match v {
        MeanValue::Exact(x) => format!(
            "{} (exact {}/{})",
            rational::to_decimal(x, 12),
            x.numer(),
            x.denom()
        ),
        MeanValue::Preimage { func, image } => format!(
            "{} (exact preimage of {} under {func})",
            rational::to_decimal(&v.enclosure().mid(), 12),
            rational::fmt(image)
        ),
        MeanValue::Approx(e) => format!(
            "{} (enclosure [{}, {}])",
            rational::to_decimal(&e.mid(), 12),
            rational::to_decimal(&e.lo, 15),
            rational::to_decimal(&e.hi, 15)
        ),
    }
}

fn exact_json(x: &Rational) -> Value {
    json!({"exact": enc::rational(x), "decimal": rational::to_decimal(x, 12)})
}

fn sci(x: &Rational) -> String {
    format!("{:.1e}", rational::to_f64(x)).replace(".0e", "e")
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn eval(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let h = read_set("set", flags.set.as_deref(), stdin)?;
    let v = k.evaluate(&h)?;
    Ok(Output {
        json: json!({"command": "eval", "mean": k.id(), "set": h.to_string(), "value": enc::mean_value(&v)}),
        text: format!("{}\n", describe(&v)),
        csv: None,
    })
}

fn trace_output(
    command: &str,
    k: &str,
    h: &RealSet,
    est: &LimitEstimate,
    tol: &Rational,
) -> Output {
    let rows: Vec<Vec<String>> = est
        .trace
        .iter()
        .map(|r| vec![r.n.to_string(), r.value.to_string(), opt_f64(r.accelerated)])
        .collect();
    let mut text = format!("{:>10}  {:<24}  {}\n", "n", "value", "accelerated");
    for r in &est.trace {
        let acc = r
            .accelerated
            .map(|a| format!("{a:.15}"))
            .unwrap_or_default();
        let _ = writeln!(text, "{:>10}  {:<24.15}  {acc}", r.n, r.value);
    }
    let last = est.trace.last().map_or(0, |r| r.n);
    let _ = writeln!(
        text,
        "estimate {} ± {} (spread {}, {} up to n = {last})",
        rational::to_decimal(&est.estimate, 12),
        sci(tol),
        sci(&est.error_bound),
        if est.converged {
            "converged"
        } else {
            "not converged"
        }
    );
    Output {
        json: json!({
            "command": command,
            "mean": k,
            "set": h.to_string(),
            "estimate": exact_json(&est.estimate),
            "error_bound": exact_json(&est.error_bound),
            "tolerance": exact_json(tol),
            "converged": est.converged,
            "trace": serde_json::to_value(&est.trace).expect("trace serializes"),
        }),
        text,
        csv: Some(csv_text(&["n", "value", "accelerated"], rows)),
    }
}

fn limit(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let (name, _) = split_call(mean_name(flags)?)?;
    if flags.f.is_some() {
        return Err(usage("limit does not take --f"));
    }
    let s = schedule(flags, LimitSchedule::default())?;
    let h = read_set("set", flags.set.as_deref(), stdin)?;
    let (id, est) = match name {
        "lavg" | "avgfat" => ("lavg", means::lavg(&h, &s)?),
        "meds" | "eds" => ("meds", means::m_eds(&h, &s)?),
        "miso" | "iso" => ("miso", means::m_iso(&h, &s)?),
        _ => {
            return Err(usage(format!(
                "limit needs lavg, meds or miso, not `{name}`"
            )))
        }
    };
    let est = est.into_result()?;
    Ok(trace_output("limit", id, &h, &est, &s.tolerance))
}

fn derive(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let h = read_set("set", flags.set.as_deref(), stdin)?;
    let at = flags
        .at
        .as_deref()
        .ok_or_else(|| usage("--at is required"))?;
    let side = match at {
        "sup" => Some(ProbeSide::SupAppend),
        "inf" => Some(ProbeSide::InfAppend),
        _ => None,
    };
    if let Some(side) = side {
        let s = schedule(flags, LimitSchedule::default())?;
        let p = analysis::d_probe(&k, &h, side, &s)?;
        let mut out = trace_output("derive", &k.id(), &h, &p.limit, &s.tolerance);
        out.json["probe"] = json!(at);
        out.json["exact"] = p.exact_hint.as_ref().map_or(Value::Null, exact_json);
        if let Some(x) = &p.exact_hint {
            let _ = writeln!(out.text, "exact {}", rational::fmt(x));
        }
        return Ok(out);
    }
    let x = number("at", at)?;
    let s = schedule(flags, analysis::derivative_schedule())?;
    let d = analysis::d_mean(&k, &h, &x, &s)?;
    let rows = d
        .trace
        .iter()
        .map(|(delta, q)| vec![rational::fmt(delta), rational::to_decimal(q, 15)])
        .collect();
    let mut text = format!(
        "lower {}\nupper {}\n",
        rational::to_decimal(&d.lower, 12),
        rational::to_decimal(&d.upper, 12)
    );
    if let Some(e) = &d.exact_hint {
        let _ = writeln!(text, "exact {}", rational::fmt(e));
    }
    Ok(Output {
        json: json!({
            "command": "derive",
            "mean": k.id(),
            "set": h.to_string(),
            "at": enc::rational(&x),
            "lower": exact_json(&d.lower),
            "upper": exact_json(&d.upper),
            "exact": d.exact_hint.as_ref().map_or(Value::Null, exact_json),
            "trace": d.trace.iter().map(|(delta, q)| json!({"delta": enc::rational(delta), "quotient": rational::to_decimal(q, 15)})).collect::<Vec<_>>(),
        }),
        text,
        csv: Some(csv_text(&["delta", "quotient"], rows)),
    })
}

fn acc_summary(k: &Mean, h: &RealSet) -> Result<(Value, String), CliError> {
    let acc = analysis::acc_points_by_mean(k, h)?;
    let closed = acc.is_subset(h)?;
    let selfacc = analysis::self_accumulated_at(k, h).ok();
    let mut text = format!("accumulation points: {acc}\nclosed: {closed}\n");
    if let Some(s) = selfacc {
        let _ = writeln!(text, "self-accumulated: {s}");
    }
    Ok((
        json!({"set": h.to_string(), "points": acc.to_string(), "closed": closed, "self_accumulated": selfacc}),
        text,
    ))
}

fn accpoints(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let h = read_set("set", flags.set.as_deref(), stdin)?;
    let (first, mut text) = acc_summary(&k, &h)?;
    let mut json = json!({"command": "accpoints", "mean": k.id(), "result": first});
    if flags.set2.is_some() {
        let h2 = read_set("set2", flags.set2.as_deref(), stdin)?;
        let a1 = analysis::acc_points_by_mean(&k, &h)?;
        let a2 = analysis::acc_points_by_mean(&k, &h2)?;
        let u = h.union(&h2);
        let au = analysis::acc_points_by_mean(&k, &u)?;
        let law = au == a1.union(&a2);
        let _ = writeln!(
            text,
            "second set accumulation points: {a2}\nunion accumulation points: {au}\nunion law: {}",
            if law { "holds" } else { "fails" }
        );
        json["second"] = json!({"set": h2.to_string(), "points": a2.to_string()});
        json["union"] = json!({"set": u.to_string(), "points": au.to_string(), "law_holds": law});
    }
    Ok(Output {
        json,
        text,
        csv: None,
    })
}

fn bounds_summary(k: &Mean, h: &RealSet) -> Result<(Value, String), CliError> {
    let lo = analysis::liminf_by_mean(k, h)?;
    let hi = analysis::limsup_by_mean(k, h)?;
    let lo_b = analysis::liminf_bisect(k, h).ok();
    let hi_b = analysis::limsup_bisect(k, h).ok();
    let strict = analysis::strict_strong_internal(k, h).ok();
    let core = analysis::core_restriction_check(k, h).ok();
    let mut text = format!("liminf {}\nlimsup {}\n", describe(&lo), describe(&hi));
    if let (Some(a), Some(b)) = (&lo_b, &hi_b) {
        let _ = writeln!(text, "bisection {} .. {}", describe(a), describe(b));
    }
    if let Some(s) = strict {
        let _ = writeln!(text, "strict strong internal: {s}");
    }
    if let Some(c) = core {
        let _ = writeln!(text, "core restriction: {c}");
    }
    let opt = |v: &Option<MeanValue>| v.as_ref().map_or(Value::Null, enc::mean_value);
    Ok((
        json!({
            "liminf": enc::mean_value(&lo),
            "limsup": enc::mean_value(&hi),
            "liminf_bisect": opt(&lo_b),
            "limsup_bisect": opt(&hi_b),
            "strict_strong_internal": strict,
            "core_restriction": core,
        }),
        text,
    ))
}

fn bounds(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let h = read_set("set", flags.set.as_deref(), stdin)?;
    let (mut json, text) = bounds_summary(&k, &h)?;
    json["command"] = json!("bounds");
    json["mean"] = json!(k.id());
    json["set"] = json!(h.to_string());
    Ok(Output {
        json,
        text,
        csv: None,
    })
}

fn suite(flags: &Flags) -> Result<Vec<PropertyId>, CliError> {
    if flags.suite.trim() == "all" {
        return Ok(PropertyId::ALL.to_vec());
    }
    flags
        .suite
        .split(',')
        .map(|p| p.parse::<PropertyId>().map_err(CliError::from))
        .collect()
}

fn run_props(
    flags: &Flags,
    k: &Mean,
    props: &[PropertyId],
) -> Result<Vec<PropertyReport>, CliError> {
    let cfg = GeneratorConfig::default();
    let exec = execution(flags);
    props
        .iter()
        .map(|&p| {
            Ok(axioms::check_with(
                p,
                k,
                &cfg,
                flags.trials,
                flags.seed,
                exec,
            )?)
        })
        .collect()
}

fn report_text(r: &PropertyReport) -> String {
    let mut text = format!(
        "{}: {} (holds {}, vacuous {}, trials {}, seed {}{})\n",
        r.property,
        r.verdict.id(),
        r.holds,
        r.vacuous,
        r.trials,
        r.seed,
        if r.reconstructed {
            ", reconstructed"
        } else {
            ""
        }
    );
    if let Some(w) = &r.witness {
        let from = match w.source {
            Source::Anchor => "anchor".to_string(),
            Source::Random => format!("trial {}", w.trial.unwrap_or_default()),
        };
        let mut parts: Vec<String> = w
            .case
            .sets
            .iter()
            .map(|(n, h)| format!("{n} = {h}"))
            .collect();
        parts.extend(
            w.case
                .scalars
                .iter()
                .map(|(n, x)| format!("{n} = {}", rational::fmt(x))),
        );
        let _ = writeln!(text, "  witness ({from}): {}", parts.join(", "));
        for (n, v) in &w.values {
            let _ = writeln!(text, "  {n} = {}", describe(v));
        }
        let _ = writeln!(text, "  {}", w.detail);
    }
    if let Some(n) = &r.note {
        let _ = writeln!(text, "  note: {n}");
    }
    text
}

fn props_csv(reports: &[PropertyReport]) -> String {
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.property.id().to_string(),
                r.mean.clone(),
                r.verdict.id().to_string(),
                r.trials.to_string(),
                r.seed.to_string(),
                r.holds.to_string(),
                r.vacuous.to_string(),
                r.reconstructed.to_string(),
                r.witness
                    .as_ref()
                    .map_or(String::new(), |w| w.detail.clone()),
            ]
        })
        .collect();
    csv_text(
        &[
            "property",
            "mean",
            "verdict",
            "trials",
            "seed",
            "holds",
            "vacuous",
            "reconstructed",
            "witness",
        ],
        rows,
    )
}

fn props(flags: &Flags) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let reports = run_props(flags, &k, &suite(flags)?)?;
    Ok(Output {
        json: json!({"command": "props", "mean": k.id(), "reports": reports.iter().map(PropertyReport::to_json).collect::<Vec<_>>()}),
        text: reports.iter().map(report_text).collect(),
        csv: Some(props_csv(&reports)),
    })
}

fn report(flags: &Flags, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let k = parse_mean(flags)?;
    let mut json = json!({"command": "report", "mean": k.id()});
    let mut text = format!("mean {}\n", k.id());
    if flags.set.is_some() {
        let h = read_set("set", flags.set.as_deref(), stdin)?;
        let _ = writeln!(text, "set {h}");
        json["set"] = json!(h.to_string());
        let engine = |r: Result<(Value, String), CliError>| match r {
            Ok(x) => Ok(x),
            Err(CliError::Engine(e)) => {
                let e = CliError::Engine(e);
                Ok((e.to_json(), format!("{e}\n")))
            }
            Err(e) => Err(e),
        };
        let value = engine(
            k.evaluate(&h)
                .map_err(CliError::from)
                .map(|v| (enc::mean_value(&v), format!("value {}\n", describe(&v)))),
        )?;
        let b = engine(bounds_summary(&k, &h))?;
        let a = engine(acc_summary(&k, &h))?;
        for (key, (j, t)) in [("value", value), ("bounds", b), ("accumulation", a)] {
            json[key] = j;
            text.push_str(&t);
        }
    }
    let reports = run_props(flags, &k, &suite(flags)?)?;
    json["properties"] = json!(reports
        .iter()
        .map(PropertyReport::to_json)
        .collect::<Vec<_>>());
    text.extend(reports.iter().map(report_text));
    Ok(Output {
        json,
        text,
        csv: Some(props_csv(&reports)),
    })
}
