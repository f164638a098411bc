//! Deductive closure of a knowledge base.
//!
//! Closing a [`KbBuilder`] computes:
//! - per-individual memberships closed under intersection, plus the universal class;
//! - the known proper-subclass relation: transitive closure of asserted and
//!   structural (more atoms ⇒ smaller class) pairs;
//! - the partition of sentence labels into known-equivalent groups;
//! - fused statistics: all asserted intervals for a pair intersected with the
//!   reflections of those asserted for the negated property.

use std::collections::{BTreeMap, BTreeSet};

use crate::class::CanonicalClass;
use crate::error::KbError;
use crate::interval::{rational, Interval};
use crate::kb::{KbBuilder, Statement};
use crate::property::CanonicalProperty;

/// A sentence form `prop(individual)`.
pub type Form = (CanonicalProperty, String);

/// Sentences known to share a truth value, with every form any of them has.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceClass {
    pub labels: BTreeSet<String>,
    pub forms: BTreeSet<Form>,
}

/// Immutable closed knowledge base. All queries run against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedKB {
    builder: KbBuilder,
    memberships: BTreeMap<String, BTreeSet<CanonicalClass>>,
    universe: BTreeSet<CanonicalClass>,
    supersets: BTreeMap<CanonicalClass, BTreeSet<CanonicalClass>>,
    cyclic: BTreeSet<CanonicalClass>,
    sentence_classes: Vec<SentenceClass>,
    sentence_index: BTreeMap<String, usize>,
    stats: BTreeMap<(CanonicalClass, CanonicalProperty), Interval>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index as root keeps grouping deterministic
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn close(builder: &KbBuilder) -> Result<ClosedKB, KbError> {
    let stats = fuse_stats(builder)?;
    let memberships = close_memberships(builder);

    let mut universe: BTreeSet<CanonicalClass> = BTreeSet::from([CanonicalClass::universal()]);
    for s in builder.statements() {
        universe.extend(s.classes().into_iter().cloned());
    }
    for classes in memberships.values() {
        universe.extend(classes.iter().cloned());
    }
    let (supersets, cyclic) = close_subsets(builder, &universe);
    let (sentence_classes, sentence_index) = partition_sentences(builder);

    Ok(ClosedKB {
        builder: builder.clone(),
        memberships,
        universe,
        supersets,
        cyclic,
        sentence_classes,
        sentence_index,
        stats,
    })
}

fn fuse_stats(
    builder: &KbBuilder,
) -> Result<BTreeMap<(CanonicalClass, CanonicalProperty), Interval>, KbError> {
    let mut stats: BTreeMap<(CanonicalClass, CanonicalProperty), Interval> = BTreeMap::new();
    let mut empty: Option<(CanonicalClass, CanonicalProperty)> = None;
    let mut meet = |key: (CanonicalClass, CanonicalProperty), iv: Interval| {
        let current = stats.get(&key).cloned().unwrap_or_else(Interval::unit);
        match current.intersect(&iv) {
            Some(fused) => {
                stats.insert(key, fused);
            }
            None => {
                if empty.as_ref().is_none_or(|e| &key < e) {
                    empty = Some(key);
                }
            }
        }
    };
    for s in builder.statements() {
        if let Statement::Stat {
            class,
            prop,
            interval,
        } = s
        {
            meet((class.clone(), prop.clone()), interval.clone());
            meet((class.clone(), prop.negate()), interval.reflect());
            for p in [prop.clone(), prop.negate()] {
                if let Some(pinned) = pinned_interval(&p) {
                    meet((class.clone(), p), pinned);
                }
            }
        }
    }
    match empty {
        Some((class, prop)) => Err(KbError::Inconsistent {
            class: class.to_string(),
            property: prop.to_string(),
        }),
        None => Ok(stats),
    }
}

/// Tautologies hold of everything, contradictions of nothing.
fn pinned_interval(prop: &CanonicalProperty) -> Option<Interval> {
    if prop.is_tautology() {
        Some(Interval::point(rational(1, 1)).unwrap())
    } else if prop.is_contradiction() {
        Some(Interval::point(rational(0, 1)).unwrap())
    } else {
        None
    }
}

fn close_memberships(builder: &KbBuilder) -> BTreeMap<String, BTreeSet<CanonicalClass>> {
    let mut asserted: BTreeMap<&str, Vec<&CanonicalClass>> = builder
        .individuals()
        .iter()
        .map(|i| (i.as_str(), Vec::new()))
        .collect();
    for s in builder.statements() {
        if let Statement::Member { individual, class } = s {
            asserted.entry(individual).or_default().push(class);
        }
    }
    asserted
        .into_iter()
        .map(|(individual, classes)| {
            let mut closed = BTreeSet::from([CanonicalClass::universal()]);
            for c in classes {
                let meets: Vec<CanonicalClass> = closed.iter().map(|x| x.intersect(c)).collect();
                closed.extend(meets);
            }
            (individual.to_string(), closed)
        })
        .collect()
}

fn close_subsets(
    builder: &KbBuilder,
    universe: &BTreeSet<CanonicalClass>,
) -> (
    BTreeMap<CanonicalClass, BTreeSet<CanonicalClass>>,
    BTreeSet<CanonicalClass>,
) {
    let classes: Vec<&CanonicalClass> = universe.iter().collect();
    let n = classes.len();
    let index: BTreeMap<&CanonicalClass, usize> =
        classes.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let mut reach = vec![vec![false; n]; n];
    for (a, ca) in classes.iter().enumerate() {
        for (b, cb) in classes.iter().enumerate() {
            reach[a][b] = ca.structurally_below(cb);
        }
    }
    for s in builder.statements() {
        if let Statement::Subset { sub, sup } = s {
            reach[index[sub]][index[sup]] = true;
        }
    }
    for k in 0..n {
        for a in 0..n {
            if reach[a][k] {
                let via = reach[k].clone();
                for (b, &r) in via.iter().enumerate() {
                    if r {
                        reach[a][b] = true;
                    }
                }
            }
        }
    }
    let mut supersets = BTreeMap::new();
    let mut cyclic = BTreeSet::new();
    for a in 0..n {
        if reach[a][a] {
            cyclic.insert(classes[a].clone());
        }
        let ups: BTreeSet<CanonicalClass> = (0..n)
            .filter(|&b| b != a && reach[a][b])
            .map(|b| classes[b].clone())
            .collect();
        if !ups.is_empty() {
            supersets.insert(classes[a].clone(), ups);
        }
    }
    (supersets, cyclic)
}

fn partition_sentences(builder: &KbBuilder) -> (Vec<SentenceClass>, BTreeMap<String, usize>) {
    let labels: Vec<&str> = builder.sentences().collect();
    let index: BTreeMap<&str, usize> = labels.iter().enumerate().map(|(k, l)| (*l, k)).collect();
    let mut uf = UnionFind::new(labels.len());
    let mut by_form: BTreeMap<(&CanonicalProperty, &str), usize> = BTreeMap::new();
    for (k, label) in labels.iter().enumerate() {
        let form = builder.form_of(label).expect("declared sentence has a form");
        match by_form.get(&form) {
            // same biconditional target: known equivalent
            Some(&j) => uf.union(j, k),
            None => {
                by_form.insert(form, k);
            }
        }
    }
    for s in builder.statements() {
        if let Statement::SentenceEquiv { a, b } = s {
            uf.union(index[a.as_str()], index[b.as_str()]);
        }
    }
    let mut groups: BTreeMap<usize, SentenceClass> = BTreeMap::new();
    for (k, label) in labels.iter().enumerate() {
        let root = uf.find(k);
        let (prop, individual) = builder.form_of(label).unwrap();
        let group = groups.entry(root).or_insert_with(|| SentenceClass {
            labels: BTreeSet::new(),
            forms: BTreeSet::new(),
        });
        group.labels.insert(label.to_string());
        group.forms.insert((prop.clone(), individual.to_string()));
    }
    let classes: Vec<SentenceClass> = groups.into_values().collect();
    let mut sentence_index = BTreeMap::new();
    for (k, class) in classes.iter().enumerate() {
        for label in &class.labels {
            sentence_index.insert(label.clone(), k);
        }
    }
    (classes, sentence_index)
}

impl ClosedKB {
    /// The declarations and asserted statements this closure was built from.
    pub fn builder(&self) -> &KbBuilder {
        &self.builder
    }

    pub fn statements(&self) -> &BTreeSet<Statement> {
        self.builder.statements()
    }

    /// Closes the underlying statements again.
    pub fn reclose(&self) -> Result<ClosedKB, KbError> {
        close(&self.builder)
    }

    /// Intersection-closed memberships of `individual`, always containing `U`.
    pub fn known_memberships(&self, individual: &str) -> BTreeSet<CanonicalClass> {
        self.memberships
            .get(individual)
            .cloned()
            .unwrap_or_else(|| BTreeSet::from([CanonicalClass::universal()]))
    }

    pub fn memberships(&self) -> &BTreeMap<String, BTreeSet<CanonicalClass>> {
        &self.memberships
    }

    /// Classes mentioned by statements, membership closure and `U`.
    pub fn universe(&self) -> &BTreeSet<CanonicalClass> {
        &self.universe
    }

    /// Known proper supersets of a class in the universe.
    pub fn supersets_of(&self, class: &CanonicalClass) -> Option<&BTreeSet<CanonicalClass>> {
        self.supersets.get(class)
    }

    /// All known subset pairs over the universe, `(sub, sup)`.
    pub fn subset_pairs(&self) -> impl Iterator<Item = (&CanonicalClass, &CanonicalClass)> {
        self.supersets
            .iter()
            .flat_map(|(sub, sups)| sups.iter().map(move |sup| (sub, sup)))
    }

    /// Classes lying on a cycle of asserted inclusions.
    pub fn cyclic_classes(&self) -> &BTreeSet<CanonicalClass> {
        &self.cyclic
    }

    /// Whether `sub ⊂ sup` is in the closed knowledge base. Never true for
    /// `sub == sup`. Classes outside the universe are related through
    /// structural steps to and from it.
    pub fn subset_known(&self, sub: &CanonicalClass, sup: &CanonicalClass) -> bool {
        if sub == sup {
            return false;
        }
        if sub.structurally_below(sup) {
            return true;
        }
        let starts: Vec<&CanonicalClass> = if self.universe.contains(sub) {
            vec![sub]
        } else {
            self.universe
                .iter()
                .filter(|u| sub.structurally_below(u))
                .collect()
        };
        starts.into_iter().any(|start| {
            self.supersets.get(start).is_some_and(|ups| {
                ups.contains(sup) || ups.iter().any(|u| u.structurally_below(sup))
            })
        })
    }

    pub fn sentence_classes(&self) -> &[SentenceClass] {
        &self.sentence_classes
    }

    /// The equivalence group of a sentence label, if it has a form.
    pub fn sentence_class(&self, sentence: &str) -> Option<&SentenceClass> {
        self.sentence_index
            .get(sentence)
            .map(|&k| &self.sentence_classes[k])
    }

    /// Fused statistics, keyed by class and property.
    pub fn stats(&self) -> &BTreeMap<(CanonicalClass, CanonicalProperty), Interval> {
        &self.stats
    }

    /// Whether anything beyond the `[0, 1]` default is known for the pair.
    pub fn has_knowledge(&self, class: &CanonicalClass, prop: &CanonicalProperty) -> bool {
        pinned_interval(prop).is_some() || self.stats.contains_key(&(class.clone(), prop.clone()))
    }

    /// Fused interval for `%(class, prop)`, `[0, 1]` when nothing is known.
    pub fn effective_interval(&self, class: &CanonicalClass, prop: &CanonicalProperty) -> Interval {
        if let Some(pinned) = pinned_interval(prop) {
            return pinned;
        }
        self.stats
            .get(&(class.clone(), prop.clone()))
            .cloned()
            .unwrap_or_else(Interval::unit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Rational;
    use proptest::prelude::*;

    fn c(atoms: &[&str]) -> CanonicalClass {
        CanonicalClass::from_atoms(atoms.iter().copied())
    }

    fn p(atom: &str) -> CanonicalProperty {
        CanonicalProperty::atom(atom)
    }

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(rational(lo, 10), rational(hi, 10)).unwrap()
    }

    fn base() -> KbBuilder {
        let mut kb = KbBuilder::new();
        for x in ["a", "b", "r", "tosses", "by_sam"] {
            kb.declare_class(x).unwrap();
        }
        for x in ["p", "heads"] {
            kb.declare_property(x).unwrap();
        }
        for x in ["t14", "i", "j"] {
            kb.declare_individual(x).unwrap();
        }
        kb
    }

    #[test]
    fn intersection_closure_of_memberships() {
        let mut kb = base();
        kb.assert(Statement::member("t14", c(&["tosses"]))).unwrap();
        kb.assert(Statement::member("t14", c(&["by_sam"]))).unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(
            ckb.known_memberships("t14"),
            BTreeSet::from([
                CanonicalClass::universal(),
                c(&["tosses"]),
                c(&["by_sam"]),
                c(&["by_sam", "tosses"])
            ])
        );
    }

    #[test]
    fn membership_examples() {
        let mut kb = base();
        kb.assert(Statement::member("i", c(&["a"]))).unwrap();
        kb.assert(Statement::member("i", c(&["a"]))).unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(
            ckb.known_memberships("j"),
            BTreeSet::from([CanonicalClass::universal()])
        );
        assert_eq!(
            ckb.known_memberships("i"),
            BTreeSet::from([CanonicalClass::universal(), c(&["a"])])
        );
    }

    #[test]
    fn complement_fusion() {
        let mut kb = base();
        kb.assert(Statement::stat(c(&["r"]), p("p"), iv(2, 6))).unwrap();
        kb.assert(Statement::stat(c(&["r"]), p("p").negate(), iv(5, 9)))
            .unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(ckb.effective_interval(&c(&["r"]), &p("p")), iv(2, 5));
        assert_eq!(ckb.effective_interval(&c(&["r"]), &p("p").negate()), iv(5, 8));
    }

    #[test]
    fn empty_fusion_is_inconsistent() {
        let mut kb = base();
        kb.assert(Statement::stat(c(&["r"]), p("p"), iv(0, 3))).unwrap();
        kb.assert(Statement::stat(c(&["r"]), p("p"), iv(6, 10))).unwrap();
        assert_eq!(
            close(&kb),
            Err(KbError::Inconsistent {
                class: "r".into(),
                property: "p".into()
            })
        );
    }

    #[test]
    fn effective_interval_examples() {
        let mut kb = base();
        kb.assert(Statement::stat(c(&["tosses"]), p("heads"), iv(5, 5)))
            .unwrap();
        kb.assert(Statement::stat(c(&["a"]), p("p").negate(), iv(1, 4)))
            .unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(ckb.effective_interval(&c(&["b"]), &p("p")), Interval::unit());
        assert!(!ckb.has_knowledge(&c(&["b"]), &p("p")));
        assert_eq!(ckb.effective_interval(&c(&["tosses"]), &p("heads")), iv(5, 5));
        assert_eq!(ckb.effective_interval(&c(&["a"]), &p("p")), iv(6, 9));
        assert!(ckb.has_knowledge(&c(&["a"]), &p("p")));
    }

    #[test]
    fn tautology_and_contradiction_are_pinned() {
        let ckb = close(&base()).unwrap();
        let one = Interval::point(Rational::from_integer(1.into())).unwrap();
        assert_eq!(
            ckb.effective_interval(&CanonicalClass::universal(), &CanonicalProperty::top()),
            one
        );
        assert_eq!(
            ckb.effective_interval(&c(&["a"]), &CanonicalProperty::bottom()),
            one.reflect()
        );
        let mut kb = base();
        kb.assert(Statement::stat(c(&["a"]), CanonicalProperty::top(), iv(0, 5)))
            .unwrap();
        assert!(matches!(close(&kb), Err(KbError::Inconsistent { .. })));
    }

    #[test]
    fn subset_examples() {
        let mut kb = base();
        kb.assert(Statement::subset(c(&["a"]), c(&["b"]))).unwrap();
        let ckb = close(&kb).unwrap();
        assert!(ckb.subset_known(&c(&["a", "b"]), &c(&["a"])));
        assert!(ckb.subset_known(&c(&["a"]), &c(&["b"])));
        assert!(!ckb.subset_known(&c(&["b"]), &c(&["a"])));
        assert!(!ckb.subset_known(&c(&["a"]), &c(&["a"])));
        // structural step, then asserted edge, through classes outside the universe
        assert!(ckb.subset_known(&c(&["a", "r"]), &c(&["b"])));
        assert!(ckb.subset_known(&c(&["a", "r"]), &CanonicalClass::universal()));
        assert!(!close(&base()).unwrap().subset_known(&c(&["a"]), &c(&["b"])));
    }

    #[test]
    fn subset_cycles_are_recorded_not_reflexive() {
        let mut kb = base();
        kb.assert(Statement::subset(c(&["a"]), c(&["b"]))).unwrap();
        kb.assert(Statement::subset(c(&["b"]), c(&["a"]))).unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(ckb.cyclic_classes(), &BTreeSet::from([c(&["a"]), c(&["b"])]));
        assert!(ckb.subset_pairs().all(|(x, y)| x != y));
    }

    #[test]
    fn sentences_partitioned() {
        let mut kb = base();
        kb.assert(Statement::form("S1", p("heads"), "t14")).unwrap();
        kb.assert(Statement::form("S2", p("heads"), "t14")).unwrap();
        kb.assert(Statement::form("S3", p("p"), "i")).unwrap();
        kb.assert(Statement::form("S4", p("p"), "j")).unwrap();
        kb.assert(Statement::equiv("S3", "S4")).unwrap();
        let ckb = close(&kb).unwrap();
        assert_eq!(ckb.sentence_classes().len(), 2);
        let g = ckb.sentence_class("S2").unwrap();
        assert_eq!(g.labels, BTreeSet::from(["S1".to_string(), "S2".to_string()]));
        assert_eq!(g.forms.len(), 1);
        assert_eq!(ckb.sentence_class("S4").unwrap().forms.len(), 2);
        assert!(ckb.sentence_class("S9").is_none());
    }

    // Random KBs over a tiny vocabulary for the closure invariants.
    fn arb_statements() -> impl Strategy<Value = Vec<Statement>> {
        let class = prop::sample::subsequence(vec!["a", "b", "r"], 1..=2)
            .prop_map(CanonicalClass::from_atoms);
        let prop_ = prop_oneof![Just(p("p")), Just(p("p").negate()), Just(p("heads"))];
        let tenth = 0i64..=10;
        let stat = (class.clone(), prop_, tenth.clone(), tenth).prop_map(|(c, p, x, y)| {
            Statement::stat(c, p, iv(x.min(y), x.max(y)))
        });
        let member = (prop::sample::select(vec!["i", "j", "t14"]), class.clone())
            .prop_map(|(i, c)| Statement::member(i, c));
        let subset = (class.clone(), class).prop_map(|(a, b)| Statement::subset(a, b));
        let form = (
            prop::sample::select(vec!["S1", "S2", "S3"]),
            prop::sample::select(vec!["i", "j"]),
        )
            .prop_map(|(s, i)| Statement::form(s, p("p"), i));
        let equiv = (
            prop::sample::select(vec!["S1", "S2", "S3"]),
            prop::sample::select(vec!["S1", "S2", "S3"]),
        )
            .prop_map(|(a, b)| Statement::equiv(a, b));
        prop::collection::vec(prop_oneof![stat, member, subset, form, equiv], 0..12)
    }

    fn build(stmts: &[Statement]) -> KbBuilder {
        let mut kb = base();
        for s in stmts {
            let _ = kb.assert(s.clone());
        }
        kb
    }

    proptest! {
        #[test]
        fn closure_invariants(stmts in arb_statements()) {
            let kb = build(&stmts);
            let Ok(ckb) = close(&kb) else { return Ok(()); };

            prop_assert_eq!(ckb.reclose().unwrap(), ckb.clone());

            for classes in ckb.memberships().values() {
                prop_assert!(classes.contains(&CanonicalClass::universal()));
                for x in classes {
                    for y in classes {
                        prop_assert!(classes.contains(&x.intersect(y)));
                    }
                }
            }

            let pairs: BTreeSet<(CanonicalClass, CanonicalClass)> =
                ckb.subset_pairs().map(|(a, b)| (a.clone(), b.clone())).collect();
            for x in ckb.universe() {
                for y in ckb.universe() {
                    if x.structurally_below(y) {
                        prop_assert!(pairs.contains(&(x.clone(), y.clone())));
                    }
                }
            }
            for (a, b) in &pairs {
                prop_assert!(a != b);
                for (b2, c2) in &pairs {
                    if b == b2 && a != c2 {
                        prop_assert!(pairs.contains(&(a.clone(), c2.clone())));
                    }
                }
            }

            for x in ckb.universe() {
                for q in [p("p"), p("heads")] {
                    prop_assert_eq!(
                        ckb.effective_interval(x, &q.negate()),
                        ckb.effective_interval(x, &q).reflect()
                    );
                }
            }

            let mut seen = BTreeSet::new();
            for group in ckb.sentence_classes() {
                for label in &group.labels {
                    prop_assert!(seen.insert(label.clone()));
                }
            }
            let all: BTreeSet<String> = kb.sentences().map(String::from).collect();
            prop_assert_eq!(seen, all);
        }

        #[test]
        fn closure_is_monotone(stmts in arb_statements(), extra in arb_statements()) {
            let small = build(&stmts);
            let mut large = small.clone();
            for s in extra {
                let _ = large.assert(s);
            }
            let (Ok(a), Ok(b)) = (close(&small), close(&large)) else { return Ok(()); };
            for (i, classes) in a.memberships() {
                prop_assert!(classes.is_subset(&b.memberships()[i]));
            }
            for (x, y) in a.subset_pairs() {
                prop_assert!(b.subset_known(x, y));
            }
            for ((c, q), iv) in a.stats() {
                prop_assert!(b.effective_interval(c, q).is_within(iv));
            }
            for group in a.sentence_classes() {
                let first = group.labels.iter().next().unwrap();
                let target = b.sentence_class(first).unwrap();
                prop_assert!(group.labels.is_subset(&target.labels));
            }
        }
    }
}
