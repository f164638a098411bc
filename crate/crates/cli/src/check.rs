use std::path::Path;

use serde_json::json;

use refclass::consistency::SanityReport;
use refclass::{close, find_model, sanity_check, FiniteModel};

use crate::style::Style;
use crate::{load, status};

fn print_model(model: &FiniteModel) {
    println!("model with {} element(s)", model.elements.len());
    for (k, e) in model.elements.iter().enumerate() {
        let names: Vec<&str> = model
            .individuals
            .iter()
            .filter(|(_, &at)| at == k)
            .map(|(name, _)| name.as_str())
            .collect();
        let join = |set: &std::collections::BTreeSet<String>| {
            if set.is_empty() {
                "-".to_string()
            } else {
                set.iter().cloned().collect::<Vec<_>>().join(" ")
            }
        };
        let named = if names.is_empty() {
            String::new()
        } else {
            format!("  = {}", names.join(", "))
        };
        println!(
            "  e{k}: classes {}; properties {}{named}",
            join(&e.classes),
            join(&e.properties)
        );
    }
}

pub fn run(path: &Path, bound: Option<usize>, json: bool) -> u8 {
    let builder = match load::builder(path) {
        Ok(b) => b,
        Err(code) => return code,
    };
    let (report, ckb) = match close(&builder) {
        Ok(ckb) => (sanity_check(&ckb), Some(ckb)),
        Err(e) => match SanityReport::from_close_error(&e) {
            Some(report) => (report, None),
            None => {
                eprintln!("error: {e}");
                return status::INCONSISTENT;
            }
        },
    };
    let style = Style::stdout();

    let search = match (&ckb, bound) {
        (Some(ckb), Some(n)) if report.passed() => match find_model(ckb, n) {
            Ok(found) => Some(found),
            Err(e) => {
                eprintln!("error: {e}");
                return status::INPUT;
            }
        },
        _ => None,
    };

    if json {
        let mut out = json!({ "sanity": report, "passed": report.passed() });
        if let (Some(n), true) = (bound, report.passed()) {
            out["bound"] = json!(n);
            out["model"] = json!(search.as_ref().and_then(|m| m.as_ref()));
        }
        println!("{out}");
    } else {
        for v in &report.violations {
            println!("{} {v}", style.bad("violation:"));
        }
        for w in &report.warnings {
            println!("{} {w}", style.dim("warning:"));
        }
        if report.passed() {
            println!("{}", style.good("sanity check passed"));
        }
        match (&search, bound) {
            (Some(Some(model)), _) => print_model(model),
            (Some(None), Some(n)) => println!("no model within bound {n}"),
            _ => {}
        }
    }

    if !report.passed() {
        status::INCONSISTENT
    } else if matches!(search, Some(None)) {
        status::NO_MODEL
    } else {
        status::OK
    }
}
