use std::fmt::Write;

use crate::interval::{format_decimal, Interval};
use crate::kb::{KbBuilder, Statement};
use crate::property::CanonicalProperty;

// used to spell ⊤ and ⊥ when no property atom is declared
const SPARE_PROPERTY: &str = "_unit";

fn interval_source(iv: &Interval) -> String {
    if iv.is_point() {
        format!("= {}", format_decimal(iv.lo()))
    } else {
        format!("in [{}, {}]", format_decimal(iv.lo()), format_decimal(iv.hi()))
    }
}

/// Renders a knowledge base in canonical order: declarations, sentences,
/// then statements sorted. Anonymous query sentences are omitted.
pub fn render(kb: &KbBuilder) -> String {
    let needs_spare = kb.properties().is_empty()
        && kb.statements().iter().any(|s| match s {
            Statement::Stat { prop, .. } | Statement::SentenceForm { prop, .. } => {
                prop.atoms().is_empty()
            }
            _ => false,
        });
    let spare = kb
        .properties()
        .iter()
        .next()
        .map_or(SPARE_PROPERTY, String::as_str);
    let prop_source = |p: &CanonicalProperty| p.to_source(spare);

    let mut sections: Vec<String> = Vec::new();
    let mut decls = String::new();
    for c in kb.classes() {
        writeln!(decls, "class {c}").unwrap();
    }
    for p in kb.properties() {
        writeln!(decls, "property {p}").unwrap();
    }
    if needs_spare {
        writeln!(decls, "property {SPARE_PROPERTY}").unwrap();
    }
    for i in kb.individuals() {
        writeln!(decls, "individual {i}").unwrap();
    }
    sections.push(decls);

    let mut sentences = String::new();
    for label in kb.sentences().filter(|l| !kb.is_anonymous(l)) {
        let (prop, individual) = kb.form_of(label).unwrap();
        writeln!(sentences, "sentence {label} iff {}({individual})", prop_source(prop)).unwrap();
    }
    sections.push(sentences);

    let mut stmts = String::new();
    for s in kb.statements() {
        match s {
            Statement::Stat {
                class,
                prop,
                interval,
            } => writeln!(
                stmts,
                "stat %({class}, {}) {}",
                prop_source(prop),
                interval_source(interval)
            ),
            Statement::Member { individual, class } => {
                writeln!(stmts, "member {individual} in {class}")
            }
            Statement::Subset { sub, sup } => writeln!(stmts, "subset {sub} < {sup}"),
            Statement::SentenceForm { .. } => Ok(()),
            Statement::SentenceEquiv { a, b } => {
                if kb.is_anonymous(a) || kb.is_anonymous(b) {
                    Ok(())
                } else {
                    writeln!(stmts, "equiv {a} {b}")
                }
            }
        }
        .unwrap();
    }
    sections.push(stmts);

    sections
        .into_iter()
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::close;
    use crate::dsl::parse_kb;
    use proptest::prelude::*;

    #[test]
    fn empty_kb_renders_empty() {
        assert_eq!(render(&KbBuilder::new()), "");
    }

    #[test]
    fn intersections_sorted() {
        let kb = parse_kb("class z\nclass a\nindividual i\nmember i in z & a & z").unwrap();
        assert_eq!(
            render(&kb),
            "class a\nclass z\nindividual i\n\nmember i in a & z\n"
        );
    }

    #[test]
    fn tautology_without_property_atoms() {
        let mut kb = KbBuilder::new();
        kb.declare_individual("i").unwrap();
        kb.assert(Statement::form("T", CanonicalProperty::top(), "i")).unwrap();
        let text = render(&kb);
        let back = parse_kb(&text).unwrap();
        assert_eq!(back.form_of("T").unwrap().0, &CanonicalProperty::top());
        assert_eq!(render(&back), text);
    }

    #[test]
    fn anonymous_sentences_omitted() {
        let mut kb = parse_kb("property p\nindividual i").unwrap();
        kb.anonymous_sentence(CanonicalProperty::atom("p"), "i").unwrap();
        assert_eq!(render(&kb), "property p\nindividual i\n");
    }

    // Grammar-driven generator of valid documents over a fixed vocabulary.
    const CLASSES: [&str; 3] = ["a", "b", "c"];
    const PROPS: [&str; 2] = ["p", "q"];
    const INDS: [&str; 2] = ["i", "j"];
    const SENTS: [&str; 3] = ["S", "T", "V"];
    const NUMS: [&str; 8] = ["0", "1", "0.5", ".25", "0.10", "1/3", "2/7", "0.999"];

    fn class_src() -> impl Strategy<Value = String> {
        prop::collection::vec(prop::sample::select(CLASSES.to_vec()), 1..4)
            .prop_map(|atoms| atoms.join(" & "))
    }

    fn prop_src() -> impl Strategy<Value = String> {
        let leaf = prop::sample::select(PROPS.to_vec()).prop_map(String::from);
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| format!("!{e}")),
                inner.clone().prop_map(|e| format!("({e})")),
                (inner.clone(), inner).prop_map(|(l, r)| format!("{l} & {r}")),
            ]
        })
    }

    fn stmt_src() -> impl Strategy<Value = String> {
        let num = || prop::sample::select(NUMS.to_vec());
        prop_oneof![
            (class_src(), prop_src(), num())
                .prop_map(|(c, p, x)| format!("stat %({c}, {p}) = {x}")),
            (class_src(), prop_src(), num(), num()).prop_map(|(c, p, x, y)| {
                let (x, y) = if value(x) <= value(y) { (x, y) } else { (y, x) };
                format!("stat %({c},{p}) in [{x},{y}]")
            }),
            (prop::sample::select(INDS.to_vec()), class_src())
                .prop_map(|(i, c)| format!("member {i} in {c}")),
            (class_src(), class_src()).prop_map(|(a, b)| format!("subset {a} < {b}")),
            (prop::sample::select(SENTS.to_vec()), prop::sample::select(SENTS.to_vec()))
                .prop_map(|(a, b)| format!("equiv {a} {b}")),
            Just("# comment".to_string()),
            Just(String::new()),
        ]
    }

    fn value(x: &str) -> crate::interval::Rational {
        match x.split_once('/') {
            Some((n, d)) => crate::interval::rational(n.parse().unwrap(), d.parse().unwrap()),
            None => crate::interval::parse_decimal(x).unwrap(),
        }
    }

    prop_compose! {
        fn document()(
            sentences in prop::collection::vec((prop_src(), prop::sample::select(INDS.to_vec())), 3),
            stmts in prop::collection::vec(stmt_src(), 0..12),
        ) -> String {
            let mut lines: Vec<String> = Vec::new();
            lines.extend(CLASSES.iter().map(|c| format!("class {c}")));
            lines.extend(PROPS.iter().map(|p| format!("  property {p}  # atom")));
            lines.extend(INDS.iter().map(|i| format!("individual {i}")));
            for (name, (p, i)) in SENTS.iter().zip(sentences) {
                lines.push(format!("sentence {name} iff {p}({i})"));
            }
            lines.extend(stmts);
            lines.join("\n")
        }
    }

    proptest! {
        #[test]
        fn parse_render_round_trip(text in document()) {
            // subset a < a style lines are rejected; keep only valid documents
            let Ok(kb) = parse_kb(&text) else { return Ok(()); };
            let rendered = render(&kb);
            let back = parse_kb(&rendered).unwrap();
            prop_assert_eq!(&back, &kb);
            prop_assert_eq!(render(&back), rendered);
            if let Ok(closed) = close(&kb) {
                prop_assert_eq!(close(&back).unwrap(), closed);
            }
        }
    }
}
