//! Command dispatch: mode resolution, sweep orchestration, payload assembly.

use rayon::prelude::*;
use serde_json::{json, Value};

use seqcert::asymptotics;
use seqcert::diff;
use seqcert::kernel::NumericMode;
use seqcert::pairwise::{self, FigureId};
use seqcert::report::VerificationReport;
use seqcert::threshold;

use crate::output::{fmt_f64, fmt_fixed, RunOutput, Table};
use crate::{AsymptoticsArgs, Cli, Command, ModeArg, ScanKind, VerifySuite, USAGE_ERROR};

/// Largest l the convexity and threshold sweeps run exactly by default;
/// beyond it the auto mode switches to tracked floats with the ladder.
const EXACT_L_LIMIT: i64 = 2048;
/// Sweeps past this l and ratio points past this a need --slow.
const SLOW_L_LIMIT: i64 = 2500;
const SLOW_A_LIMIT: i64 = 2500;

pub fn run(cli: Cli) -> i32 {
    let bits = match resolve_bits(&cli) {
        Ok(bits) => bits,
        Err(msg) => {
            eprintln!("{msg}");
            return USAGE_ERROR;
        }
    };
    if cli.parallel > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.parallel)
            .build();
        match pool {
            Ok(pool) => pool.install(|| execute(&cli, bits)),
            Err(e) => {
                eprintln!("cannot build thread pool: {e}");
                1
            }
        }
    } else {
        execute(&cli, bits)
    }
}

fn resolve_bits(cli: &Cli) -> Result<u32, String> {
    let bits = match cli.precision {
        Some(b) => b,
        None => match std::env::var("SEQCERT_PRECISION_BITS") {
            Ok(s) => s
                .parse()
                .map_err(|e| format!("bad SEQCERT_PRECISION_BITS: {e}"))?,
            Err(_) => 53,
        },
    };
    if bits < 53 {
        return Err(format!("precision must be at least 53 bits, got {bits}"));
    }
    Ok(bits)
}

fn execute(cli: &Cli, bits: u32) -> i32 {
    let outcome = match &cli.command {
        Command::Verify(v) => run_verify(cli, bits, &v.suite),
        Command::Table41(args) => run_table(cli, bits, args.max_a),
        Command::Scan(s) => match &s.scan {
            ScanKind::Property41(args) => run_scan(cli, bits, args.max_a),
        },
        Command::Figure(f) => run_figure(cli, &f.id),
        Command::Asymptotics(a) => run_asymptotics(cli, bits, a),
    };
    match outcome {
        Ok(out) => out.emit(cli),
        Err(Problem::Usage(msg)) => {
            eprintln!("{msg}");
            USAGE_ERROR
        }
        Err(Problem::Eval(e)) => {
            eprintln!("{e}");
            1
        }
    }
}

enum Problem {
    Usage(String),
    Eval(seqcert::Error),
}

impl From<seqcert::Error> for Problem {
    fn from(e: seqcert::Error) -> Self {
        Problem::Eval(e)
    }
}

fn mode_label(cli: &Cli, bits: u32) -> String {
    match cli.mode {
        ModeArg::Auto => format!("auto(exact<=l={EXACT_L_LIMIT}, log({bits}) above)"),
        ModeArg::Exact => "exact".into(),
        ModeArg::Log => format!("log({bits})"),
    }
}

/// Mode used for one l in a sweep under the auto policy.
fn mode_for_l(cli: &Cli, bits: u32, l: i64) -> NumericMode {
    match cli.mode {
        ModeArg::Exact => NumericMode::Exact,
        ModeArg::Log => NumericMode::Log { bits },
        ModeArg::Auto => {
            if l <= EXACT_L_LIMIT {
                NumericMode::Exact
            } else {
                NumericMode::Log { bits }
            }
        }
    }
}

fn base_config(cli: &Cli, bits: u32) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert(
        "format".into(),
        json!(match cli.format {
            crate::Format::Csv => "csv",
            crate::Format::Json => "json",
        }),
    );
    m.insert("precision_bits".into(), json!(bits));
    // the worker count is scheduling, not content: output must be
    // byte-identical across worker counts, so it is not echoed
    m.insert("slow".into(), json!(cli.slow));
    m
}

fn check_range(cli: &Cli, lo: i64, hi: i64) -> Result<(), Problem> {
    if lo < 6 {
        return Err(Problem::Usage(format!(
            "l ranges start at 6 (got {lo})"
        )));
    }
    if hi > SLOW_L_LIMIT && !cli.slow {
        return Err(Problem::Usage(format!(
            "sweeps past l = {SLOW_L_LIMIT} require --slow (got {hi})"
        )));
    }
    Ok(())
}

/// Aggregates per-l reports item-by-item so a sweep reads as one suite.
fn aggregate(
    out: &mut RunOutput,
    reports: Vec<VerificationReport>,
) {
    use seqcert::report::{CheckItem, Outcome};
    let mut order: Vec<(String, String)> = Vec::new();
    let mut merged: std::collections::HashMap<(String, String), CheckItem> =
        std::collections::HashMap::new();
    for report in reports {
        for item in report.items {
            let key = (report.check.clone(), item.name.clone());
            match merged.get_mut(&key) {
                None => {
                    order.push(key.clone());
                    merged.insert(key, item);
                }
                Some(existing) => {
                    existing.outcome = match (existing.outcome, item.outcome) {
                        (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
                        (Outcome::Indeterminate, _) | (_, Outcome::Indeterminate) => {
                            Outcome::Indeterminate
                        }
                        _ => Outcome::Pass,
                    };
                    existing.witnesses.extend(item.witnesses);
                }
            }
        }
    }
    for key in order {
        let item = merged.remove(&key).unwrap();
        let mut report = VerificationReport::new(key.0, NumericMode::Exact);
        report.push(item);
        out.absorb_report(&report);
    }
}

fn run_verify(cli: &Cli, bits: u32, suite: &VerifySuite) -> Result<RunOutput, Problem> {
    match suite {
        VerifySuite::Theorem1(range) => {
            let (lo, hi) = range.l;
            check_range(cli, lo, hi)?;
            let mut out = RunOutput::new("verify theorem1", mode_label(cli, bits));
            out.config = base_config(cli, bits);
            out.config.insert("l".into(), json!(format!("{lo}..{hi}")));
            let reports: Vec<VerificationReport> = (lo..=hi)
                .into_par_iter()
                .map(|l| diff::verify_convexity(l, mode_for_l(cli, bits, l)))
                .collect::<seqcert::Result<_>>()?;
            aggregate(&mut out, reports);
            Ok(out)
        }
        VerifySuite::Threshold(range) => {
            let (lo, hi) = range.l;
            check_range(cli, lo, hi)?;
            let mut out = RunOutput::new("verify threshold", mode_label(cli, bits));
            out.config = base_config(cli, bits);
            out.config.insert("l".into(), json!(format!("{lo}..{hi}")));
            // the sweep is split at the exact/log auto boundary
            let mut reports = Vec::new();
            match cli.mode {
                ModeArg::Auto if hi > EXACT_L_LIMIT && lo <= EXACT_L_LIMIT => {
                    reports.push(threshold::verify_threshold(
                        lo,
                        EXACT_L_LIMIT,
                        NumericMode::Exact,
                    )?);
                    reports.push(threshold::verify_threshold(
                        EXACT_L_LIMIT + 1,
                        hi,
                        NumericMode::Log { bits },
                    )?);
                }
                _ => reports.push(threshold::verify_threshold(
                    lo,
                    hi,
                    mode_for_l(cli, bits, hi),
                )?),
            }
            aggregate(&mut out, reports);
            Ok(out)
        }
        VerifySuite::Pairwise(range) => {
            let (lo, hi) = range.l;
            check_range(cli, lo, hi)?;
            let mode = match cli.mode {
                ModeArg::Log => NumericMode::Log { bits },
                _ => NumericMode::Exact,
            };
            let mut out = RunOutput::new("verify pairwise", mode.describe());
            out.config = base_config(cli, bits);
            out.config.insert("l".into(), json!(format!("{lo}..{hi}")));
            let reports: Vec<VerificationReport> = (lo..=hi)
                .into_par_iter()
                .map(|l| {
                    if l <= 8 {
                        pairwise::verify_small_l(l)
                    } else {
                        pairwise::verify_pairwise(l, mode)
                    }
                })
                .collect::<seqcert::Result<_>>()?;
            aggregate(&mut out, reports);
            Ok(out)
        }
    }
}

fn run_table(cli: &Cli, bits: u32, max_a: i64) -> Result<RunOutput, Problem> {
    let mode = match cli.mode {
        ModeArg::Log => NumericMode::Log { bits },
        _ => NumericMode::Exact, // six-decimal reproduction demands exactness
    };
    let mut out = RunOutput::new("table41", mode.describe());
    out.config = base_config(cli, bits);
    out.config.insert("max_a".into(), json!(max_a));
    let table = pairwise::gap_table(max_a, mode)?;
    let mut t = Table::new(&["a", "j", "l", "gap", "rounding_tie"]);
    for row in &table.rows {
        for e in row {
            t.push(vec![
                e.a.to_string(),
                e.j.to_string(),
                e.l.to_string(),
                e.formatted.clone(),
                if e.rounding_tie { "1" } else { "0" }.into(),
            ]);
        }
    }
    out.table = Some(t);
    Ok(out)
}

fn run_scan(cli: &Cli, bits: u32, max_a: i64) -> Result<RunOutput, Problem> {
    let mode = match cli.mode {
        ModeArg::Log => NumericMode::Log { bits },
        _ => NumericMode::Exact,
    };
    let mut out = RunOutput::new("scan property41", mode.describe());
    out.config = base_config(cli, bits);
    out.config.insert("max_a".into(), json!(max_a));
    let report = pairwise::monotonicity_scan(max_a, mode)?;
    out.absorb_report(&report);
    Ok(out)
}

fn run_figure(cli: &Cli, id: &str) -> Result<RunOutput, Problem> {
    let fid = FigureId::parse(id)
        .map_err(|e| Problem::Usage(format!("{e} (expected 4.1 .. 4.6)")))?;
    let mut out = RunOutput::new("figure", "exact".into());
    out.config = base_config(cli, 53);
    out.config.insert("id".into(), json!(fid.label()));
    let data = pairwise::figure_data(fid)?;
    let cols: Vec<&str> = data.columns.iter().map(String::as_str).collect();
    let mut t = Table::new(&cols);
    for row in &data.rows {
        t.push(row.iter().map(|v| fmt_f64(*v)).collect());
    }
    out.table = Some(t);
    Ok(out)
}

fn run_asymptotics(cli: &Cli, bits: u32, args: &AsymptoticsArgs) -> Result<RunOutput, Problem> {
    let suite = args.suite.as_str();
    let default_a: Vec<i64> = match suite {
        "lemma4.1" | "lemma4.2" => vec![50, 100, 200, 400],
        "claimD1" => vec![500, 1000, 2000],
        "remarkD1" => {
            if cli.slow {
                vec![10, 100, 1000, 5000]
            } else {
                vec![10, 100, 1000]
            }
        }
        other => {
            return Err(Problem::Usage(format!(
                "unknown suite {other} (expected lemma4.1, lemma4.2, claimD1 or remarkD1)"
            )))
        }
    };
    let a_values = match &args.a {
        Some(list) => crate::parse_a_list(list).map_err(Problem::Usage)?,
        None => default_a,
    };
    if a_values.iter().any(|&a| a > SLOW_A_LIMIT) && !cli.slow {
        return Err(Problem::Usage(format!(
            "a beyond {SLOW_A_LIMIT} requires --slow"
        )));
    }
    let mode = NumericMode::Log { bits };
    let mut out = RunOutput::new("asymptotics", mode.describe());
    out.config = base_config(cli, bits);
    out.config.insert("suite".into(), json!(suite));
    out.config.insert("a".into(), json!(a_values));

    match suite {
        "remarkD1" => {
            let mut t = Table::new(&["a", "value", "value_4dp", "abs_error", "reference", "matches"]);
            for &a in &a_values {
                let v = match asymptotics::product_ratio(a, mode)? {
                    seqcert::funcs::Value::Tracked(t) => t,
                    seqcert::funcs::Value::Exact(r) => {
                        seqcert::kernel::TrackedReal::exact(seqcert::kernel::ratio_to_f64(&r))
                    }
                };
                let reference = asymptotics::RATIO_REFERENCE
                    .iter()
                    .find(|(ra, _)| *ra == a)
                    .map(|(_, rv)| *rv);
                let matches = reference.map(|rv| (v.value() - rv).abs() <= 5e-5);
                if matches == Some(false) {
                    out.exit = out.exit.max(1);
                }
                t.push(vec![
                    a.to_string(),
                    fmt_f64(v.value()),
                    fmt_fixed(v.value(), 4),
                    format!("{:.2e}", v.abs_error()),
                    reference.map_or(String::new(), fmt_f64),
                    matches.map_or(String::new(), |m| m.to_string()),
                ]);
            }
            out.table = Some(t);
        }
        "claimD1" => {
            let rows = asymptotics::term_limit_rows(&a_values)?;
            out.table = Some(limit_rows_table(&rows, &mut out.exit));
        }
        "lemma4.1" | "lemma4.2" => {
            let rows = asymptotics::limit_suite(&a_values, mode)?;
            let keep: &[&str] = if suite == "lemma4.1" {
                &["a2-lhs", "a3-lhs-correction", "gap-over-alpha2"]
            } else {
                &["a3-rhs"]
            };
            let rows: Vec<asymptotics::LimitRow> = rows
                .into_iter()
                .filter(|r| keep.contains(&r.metric.as_str()))
                .collect();
            out.table = Some(limit_rows_table(&rows, &mut out.exit));
        }
        _ => unreachable!(),
    }
    Ok(out)
}

fn limit_rows_table(rows: &[asymptotics::LimitRow], exit: &mut i32) -> Table {
    let mut t = Table::new(&["a", "metric", "value", "target", "converged"]);
    for r in rows {
        if !r.converged {
            *exit = (*exit).max(1);
        }
        t.push(vec![
            r.a.to_string(),
            r.metric.clone(),
            fmt_f64(r.value),
            fmt_f64(r.target),
            r.converged.to_string(),
        ]);
    }
    t
}
