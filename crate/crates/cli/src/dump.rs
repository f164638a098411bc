use std::path::Path;

use serde_json::json;

use refclass::dsl::render;
use refclass::interval::format_decimal;
use refclass::ClosedKB;

use crate::{load, status};

fn closed_json(ckb: &ClosedKB) -> serde_json::Value {
    let stats: Vec<_> = ckb
        .stats()
        .iter()
        .map(|((class, prop), iv)| json!({ "class": class, "property": prop, "interval": iv }))
        .collect();
    let subsets: Vec<_> = ckb
        .subset_pairs()
        .map(|(sub, sup)| json!({ "sub": sub, "sup": sup }))
        .collect();
    let sentences: Vec<_> = ckb
        .sentence_classes()
        .iter()
        .map(|g| {
            let forms: Vec<_> = g
                .forms
                .iter()
                .map(|(p, i)| json!({ "property": p, "individual": i }))
                .collect();
            json!({ "labels": g.labels, "forms": forms })
        })
        .collect();
    json!({
        "memberships": ckb.memberships(),
        "subsets": subsets,
        "cyclic": ckb.cyclic_classes(),
        "stats": stats,
        "sentences": sentences,
    })
}

fn print_closed(ckb: &ClosedKB) {
    println!("memberships");
    for (individual, classes) in ckb.memberships() {
        let names: Vec<String> = classes.iter().map(ToString::to_string).collect();
        println!("  {individual}: {}", names.join(", "));
    }
    println!("subsets");
    for (sub, sup) in ckb.subset_pairs() {
        println!("  {sub} < {sup}");
    }
    for class in ckb.cyclic_classes() {
        println!("  {class} (cyclic)");
    }
    println!("statistics");
    for ((class, prop), iv) in ckb.stats() {
        println!(
            "  %({class}, {prop}) in [{}, {}]",
            format_decimal(iv.lo()),
            format_decimal(iv.hi())
        );
    }
    println!("sentences");
    for group in ckb.sentence_classes() {
        let labels: Vec<&str> = group.labels.iter().map(String::as_str).collect();
        let forms: Vec<String> = group
            .forms
            .iter()
            .map(|(p, i)| format!("{p}({i})"))
            .collect();
        println!("  {}: {}", labels.join(", "), forms.join(" | "));
    }
}

pub fn run(path: &Path, source: bool, json: bool) -> u8 {
    let builder = match load::builder(path) {
        Ok(b) => b,
        Err(code) => return code,
    };
    if source {
        let text = render(&builder);
        if json {
            println!("{}", json!({ "source": text }));
        } else {
            print!("{text}");
        }
        return status::OK;
    }
    let ckb = match load::closed(&builder) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if json {
        println!("{}", closed_json(&ckb));
    } else {
        print_closed(&ckb);
    }
    status::OK
}
