use std::path::Path;

use serde::Serialize;

use refclass::dsl::parse_query;
use refclass::inference::{explain, FormTrace, RowStatus, Trace};
use refclass::interval::format_decimal;
use refclass::{sanity_check, Interval, Mode, ProbResult};

use crate::style::Style;
use crate::{load, status};

#[derive(Serialize)]
struct Record<'a> {
    query: &'a str,
    mode: Mode,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<&'a Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference_class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a Trace>,
}

fn decimal_interval(iv: &Interval) -> String {
    format!("[{}, {}]", format_decimal(iv.lo()), format_decimal(iv.hi()))
}

fn value(iv: &Interval, mode: Mode) -> String {
    if mode == Mode::Point && iv.is_point() {
        format!("= {}", format_decimal(iv.lo()))
    } else {
        format!("in {}", decimal_interval(iv))
    }
}

fn print_form(form: &FormTrace, style: &Style) {
    println!("  form {}({})", form.property, form.individual);
    if form.rows.is_empty() {
        println!("    {}", style.dim("(no candidate rows)"));
    }
    let width = form
        .rows
        .iter()
        .map(|r| r.class.to_string().chars().count())
        .max()
        .unwrap_or(0);
    for row in &form.rows {
        let class = row.class.to_string();
        let status = match &row.status {
            RowStatus::Live => style.good("live"),
            RowStatus::Deleted {
                witness,
                witness_interval,
            } => style.bad(&format!(
                "deleted by {witness} {}",
                decimal_interval(witness_interval)
            )),
        };
        println!(
            "    {class:<width$}  {:<14}  {status}",
            decimal_interval(&row.interval)
        );
    }
}

fn print_text(label: &str, trace: &Trace, mode: Mode, with_trace: bool, style: &Style) {
    match &trace.outcome {
        ProbResult::Defined {
            interval, selected, ..
        } => println!(
            "{label} {} {}",
            style.good(&value(interval, mode)),
            style.dim(&format!("(reference class {selected})"))
        ),
        ProbResult::Undefined { reason } => {
            println!("{label} {}", style.bad(&format!("undefined: {reason}")))
        }
    }
    if with_trace {
        for form in &trace.forms {
            print_form(form, style);
        }
    }
}

pub fn run(path: &Path, query: Option<&str>, mode: Mode, json: bool, with_trace: bool) -> u8 {
    let mut builder = match load::builder(path) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let labels: Vec<String> = match query {
        Some(text) => match parse_query(text).and_then(|q| q.resolve(&mut builder)) {
            Ok(label) => vec![label],
            Err(d) => {
                eprintln!("query:{d}");
                return status::INPUT;
            }
        },
        None => builder
            .sentences()
            .filter(|l| !builder.is_anonymous(l))
            .map(String::from)
            .collect(),
    };
    let ckb = match load::closed(&builder) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = sanity_check(&ckb);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !report.passed() {
        for v in &report.violations {
            eprintln!("error: {v}");
        }
        return status::INCONSISTENT;
    }

    let style = Style::stdout();
    let mut code = status::OK;
    for label in &labels {
        let trace = explain(&ckb, label, mode);
        if !trace.outcome.is_defined() {
            code = status::UNDEFINED;
        }
        if json {
            let record = Record {
                query: label,
                mode,
                status: if trace.outcome.is_defined() {
                    "defined"
                } else {
                    "undefined"
                },
                interval: trace.outcome.interval(),
                reference_class: trace.outcome.selected().map(ToString::to_string),
                reason: trace.outcome.reason().map(|r| r.as_str()),
                trace: with_trace.then_some(&trace),
            };
            println!("{}", serde_json::to_string(&record).expect("serializable"));
        } else {
            print_text(label, &trace, mode, with_trace, &style);
        }
    }
    code
}
