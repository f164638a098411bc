//! Consistency of a knowledge base: fast structural sanity checks and a
//! bounded search for a finite model in which `%(X, Y)` is the literal
//! proportion of X's that are Y's.
//!
//! The finder treats population elements with identical atom valuations
//! ("types") as interchangeable, so it enumerates multisets of types in
//! non-decreasing order. Statistics, subsets and distinctness depend only on
//! the multiset and are checked before individuals are placed.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::class::CanonicalClass;
use crate::closure::{ClosedKB, SentenceClass};
use crate::error::KbError;
use crate::interval::{Interval, Rational};
use crate::kb::Statement;
use crate::property::CanonicalProperty;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    InvalidInterval { class: String, property: String },
    EmptyStats { class: String, property: String },
    SubsetCycle { classes: Vec<CanonicalClass> },
    MissingSentenceForm { sentence: String },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::InvalidInterval { class, property } => {
                write!(f, "invalid interval for %({class}, {property})")
            }
            Violation::EmptyStats { class, property } => {
                write!(f, "no proportion satisfies every statement about %({class}, {property})")
            }
            Violation::SubsetCycle { classes } => {
                let names: Vec<String> = classes.iter().map(ToString::to_string).collect();
                write!(f, "cyclic proper inclusion among {{{}}}", names.join("; "))
            }
            Violation::MissingSentenceForm { sentence } => {
                write!(f, "sentence `{sentence}` has no form")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Warning {
    /// `individual ∈ class` follows from a membership and an asserted subset
    /// but is not itself in the knowledge base.
    UnrecordedMembership {
        individual: String,
        class: CanonicalClass,
        via: CanonicalClass,
    },
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Warning::UnrecordedMembership {
                individual,
                class,
                via,
            } => write!(
                f,
                "{individual} ∈ {class} follows from {individual} ∈ {via} but is not asserted"
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SanityReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<Warning>,
}

impl SanityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Report for a knowledge base whose closure was rejected.
    pub fn from_close_error(err: &KbError) -> Option<Self> {
        match err {
            KbError::Inconsistent { class, property } => Some(SanityReport {
                violations: vec![Violation::EmptyStats {
                    class: class.clone(),
                    property: property.clone(),
                }],
                warnings: Vec::new(),
            }),
            _ => None,
        }
    }
}

/// Necessary conditions for a model. An empty violation list is a pass.
pub fn sanity_check(ckb: &ClosedKB) -> SanityReport {
    let mut report = SanityReport::default();
    for s in ckb.statements() {
        if let Statement::Stat {
            class,
            prop,
            interval,
        } = s
        {
            if Interval::new(interval.lo().clone(), interval.hi().clone()).is_err() {
                report.violations.push(Violation::InvalidInterval {
                    class: class.to_string(),
                    property: prop.to_string(),
                });
            }
        }
    }
    for ((class, prop), iv) in ckb.stats() {
        if iv.lo() > iv.hi() {
            report.violations.push(Violation::EmptyStats {
                class: class.to_string(),
                property: prop.to_string(),
            });
        }
    }
    if !ckb.cyclic_classes().is_empty() {
        report.violations.push(Violation::SubsetCycle {
            classes: ckb.cyclic_classes().iter().cloned().collect(),
        });
    }
    for s in ckb.statements() {
        if let Statement::SentenceEquiv { a, b } = s {
            for label in [a, b] {
                if ckb.sentence_class(label).is_none() {
                    report.violations.push(Violation::MissingSentenceForm {
                        sentence: label.clone(),
                    });
                }
            }
        }
    }
    for (individual, classes) in ckb.memberships() {
        for s in ckb.statements() {
            if let Statement::Subset { sub, sup } = s {
                if classes.contains(sub) && !classes.contains(sup) {
                    report.warnings.push(Warning::UnrecordedMembership {
                        individual: individual.clone(),
                        class: sup.clone(),
                        via: sub.clone(),
                    });
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    /// Class atoms the element falls under.
    pub classes: BTreeSet<String>,
    /// Property atoms true of the element.
    pub properties: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteModel {
    pub class_atoms: Vec<String>,
    pub property_atoms: Vec<String>,
    pub elements: Vec<Element>,
    pub individuals: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("model search over {atoms} atoms is beyond the supported {max}")]
    TooManyAtoms { atoms: usize, max: usize },
    #[error("population bound {0} exceeds the supported 64")]
    BoundTooLarge(usize),
}

/// Atom valuations are packed in a `u32` index; beyond this the search is
/// hopeless anyway.
pub const MAX_SEARCH_ATOMS: usize = 12;

/// Everything the search needs, indexed.
struct Problem {
    class_atoms: Vec<String>,
    property_atoms: Vec<String>,
    individuals: Vec<String>,
    /// per mentioned class, per type
    in_class: Vec<Vec<bool>>,
    /// per mentioned property, per type
    holds: Vec<Vec<bool>>,
    stats: Vec<(usize, usize, Interval)>,
    subsets: Vec<(usize, usize)>,
    members: Vec<Vec<usize>>,
    groups: Vec<Vec<(usize, usize)>>,
    types: usize,
}

impl Problem {
    fn new(statements: &BTreeSet<Statement>, groups: &[SentenceClass]) -> Result<Self, SearchError> {
        let mut classes: BTreeSet<&CanonicalClass> = BTreeSet::new();
        let mut props: BTreeSet<&CanonicalProperty> = BTreeSet::new();
        let mut individuals: BTreeSet<&str> = BTreeSet::new();
        for s in statements {
            classes.extend(s.classes());
            match s {
                Statement::Stat { prop, .. } => {
                    props.insert(prop);
                }
                Statement::SentenceForm {
                    prop, individual, ..
                } => {
                    props.insert(prop);
                    individuals.insert(individual);
                }
                Statement::Member { individual, .. } => {
                    individuals.insert(individual);
                }
                _ => {}
            }
        }
        let class_atoms: Vec<String> = classes
            .iter()
            .flat_map(|c| c.atoms().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let property_atoms: Vec<String> = props
            .iter()
            .flat_map(|p| p.atoms().iter().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let width = class_atoms.len() + property_atoms.len();
        if width > MAX_SEARCH_ATOMS {
            return Err(SearchError::TooManyAtoms {
                atoms: width,
                max: MAX_SEARCH_ATOMS,
            });
        }
        let types = 1usize << width;
        let nc = class_atoms.len();

        let classes: Vec<&CanonicalClass> = classes.into_iter().collect();
        let props: Vec<&CanonicalProperty> = props.into_iter().collect();
        let individuals: Vec<String> = individuals.into_iter().map(String::from).collect();
        let class_idx = |c: &CanonicalClass| classes.iter().position(|x| *x == c).unwrap();
        let prop_idx = |p: &CanonicalProperty| props.iter().position(|x| *x == p).unwrap();
        let ind_idx = |i: &str| individuals.iter().position(|x| x == i).unwrap();

        let in_class = classes
            .iter()
            .map(|c| {
                (0..types)
                    .map(|t| {
                        c.atoms().iter().all(|a| {
                            let j = class_atoms.iter().position(|x| x == a).unwrap();
                            t >> j & 1 == 1
                        })
                    })
                    .collect()
            })
            .collect();
        let holds = props
            .iter()
            .map(|p| {
                (0..types)
                    .map(|t| {
                        p.eval(|a| {
                            let j = property_atoms.iter().position(|x| x == a).unwrap();
                            t >> (nc + j) & 1 == 1
                        })
                    })
                    .collect()
            })
            .collect();

        let mut stats = Vec::new();
        let mut subsets = Vec::new();
        let mut members = vec![Vec::new(); individuals.len()];
        for s in statements {
            match s {
                Statement::Stat {
                    class,
                    prop,
                    interval,
                } => stats.push((class_idx(class), prop_idx(prop), interval.clone())),
                Statement::Subset { sub, sup } => subsets.push((class_idx(sub), class_idx(sup))),
                Statement::Member { individual, class } => {
                    members[ind_idx(individual)].push(class_idx(class))
                }
                _ => {}
            }
        }
        let groups = groups
            .iter()
            .map(|g| {
                g.forms
                    .iter()
                    .map(|(p, i)| (prop_idx(p), ind_idx(i)))
                    .collect()
            })
            .collect();

        Ok(Problem {
            class_atoms,
            property_atoms,
            individuals,
            in_class,
            holds,
            stats,
            subsets,
            members,
            groups,
            types,
        })
    }

    /// `ok[den][num]`: whether `num/den` lies in the interval, for `den <= n`.
    fn proportion_table(iv: &Interval, n: usize) -> Vec<Vec<bool>> {
        (0..=n)
            .map(|den| {
                (0..=den)
                    .map(|num| {
                        den > 0
                            && iv.contains(&Rational::new(BigInt::from(num), BigInt::from(den)))
                    })
                    .collect()
            })
            .collect()
    }

    fn population_ok(&self, counts: &[usize], tables: &[Vec<Vec<bool>>]) -> bool {
        let present = |t: usize| counts[t] > 0;
        let size = |k: usize| -> usize {
            (0..self.types)
                .filter(|&t| self.in_class[k][t])
                .map(|t| counts[t])
                .sum()
        };
        if (0..self.in_class.len()).any(|k| size(k) == 0) {
            return false;
        }
        for ((class, prop, _), table) in self.stats.iter().zip(tables) {
            let den = size(*class);
            let num: usize = (0..self.types)
                .filter(|&t| self.in_class[*class][t] && self.holds[*prop][t])
                .map(|t| counts[t])
                .sum();
            if !table[den][num] {
                return false;
            }
        }
        for &(sub, sup) in &self.subsets {
            let included = (0..self.types)
                .filter(|&t| present(t) && self.in_class[sub][t])
                .all(|t| self.in_class[sup][t]);
            let strict = (0..self.types)
                .any(|t| present(t) && self.in_class[sup][t] && !self.in_class[sub][t]);
            if !included || !strict {
                return false;
            }
        }
        let distinct = |rows: &[Vec<bool>]| {
            rows.iter().enumerate().all(|(k, a)| {
                rows[k + 1..]
                    .iter()
                    .all(|b| (0..self.types).any(|t| present(t) && a[t] != b[t]))
            })
        };
        distinct(&self.in_class) && distinct(&self.holds)
    }

    fn place_individuals(&self, counts: &[usize]) -> Option<Vec<usize>> {
        let mut assignment = Vec::with_capacity(self.individuals.len());
        let mut used = vec![0usize; self.types];
        self.place(0, counts, &mut used, &mut assignment)
            .then_some(assignment)
    }

    fn place(
        &self,
        k: usize,
        counts: &[usize],
        used: &mut [usize],
        assignment: &mut Vec<usize>,
    ) -> bool {
        if k == self.individuals.len() {
            return self.groups.iter().all(|forms| {
                let mut truth = forms.iter().map(|&(p, i)| self.holds[p][assignment[i]]);
                match truth.next() {
                    Some(first) => truth.all(|v| v == first),
                    None => true,
                }
            });
        }
        for t in 0..self.types {
            if used[t] < counts[t] && self.members[k].iter().all(|&c| self.in_class[c][t]) {
                used[t] += 1;
                assignment.push(t);
                if self.place(k + 1, counts, used, assignment) {
                    return true;
                }
                assignment.pop();
                used[t] -= 1;
            }
        }
        false
    }

    fn model(&self, counts: &[usize], assignment: &[usize]) -> FiniteModel {
        let nc = self.class_atoms.len();
        let mut elements = Vec::new();
        let mut first_of_type = vec![0usize; self.types];
        for (t, &count) in counts.iter().enumerate() {
            first_of_type[t] = elements.len();
            for _ in 0..count {
                elements.push(Element {
                    classes: (0..nc)
                        .filter(|j| t >> j & 1 == 1)
                        .map(|j| self.class_atoms[j].clone())
                        .collect(),
                    properties: (0..self.property_atoms.len())
                        .filter(|j| t >> (nc + j) & 1 == 1)
                        .map(|j| self.property_atoms[j].clone())
                        .collect(),
                });
            }
        }
        let mut next = first_of_type;
        let individuals = self
            .individuals
            .iter()
            .zip(assignment)
            .map(|(name, &t)| {
                let e = next[t];
                next[t] += 1;
                (name.clone(), e)
            })
            .collect();
        FiniteModel {
            class_atoms: self.class_atoms.clone(),
            property_atoms: self.property_atoms.clone(),
            elements,
            individuals,
        }
    }

    fn search(&self, n_max: usize) -> Option<FiniteModel> {
        let tables: Vec<Vec<Vec<bool>>> = self
            .stats
            .iter()
            .map(|(_, _, iv)| Self::proportion_table(iv, n_max))
            .collect();
        for n in 1..=n_max {
            if n < self.individuals.len() {
                continue;
            }
            // non-decreasing sequence of n types
            let mut seq = vec![0usize; n];
            loop {
                let mut counts = vec![0usize; self.types];
                for &t in &seq {
                    counts[t] += 1;
                }
                if self.population_ok(&counts, &tables) {
                    if let Some(assignment) = self.place_individuals(&counts) {
                        return Some(self.model(&counts, &assignment));
                    }
                }
                let Some(k) = (0..n).rev().find(|&k| seq[k] + 1 < self.types) else {
                    break;
                };
                let v = seq[k] + 1;
                seq[k..].iter_mut().for_each(|x| *x = v);
            }
        }
        None
    }
}

/// Searches populations of size `1..=n_max` for a model of the knowledge
/// base; the first one in canonical order is returned. `Ok(None)` only means
/// no model exists within the bound.
pub fn find_model(ckb: &ClosedKB, n_max: usize) -> Result<Option<FiniteModel>, SearchError> {
    if n_max > 64 {
        return Err(SearchError::BoundTooLarge(n_max));
    }
    let problem = Problem::new(ckb.statements(), ckb.sentence_classes())?;
    Ok(problem.search(n_max))
}

/// Re-checks every statement of the knowledge base against a model.
pub fn verify_model(ckb: &ClosedKB, model: &FiniteModel) -> bool {
    let n = model.elements.len();
    if n == 0 {
        return false;
    }
    let mut targets = BTreeSet::new();
    if !model
        .individuals
        .values()
        .all(|&e| e < n && targets.insert(e))
    {
        return false;
    }
    let known_class = |a: &String| model.class_atoms.contains(a);
    let known_prop = |a: &String| model.property_atoms.contains(a);
    let ext_class = |c: &CanonicalClass| -> Vec<bool> {
        model
            .elements
            .iter()
            .map(|e| c.atoms().iter().all(|a| e.classes.contains(a)))
            .collect()
    };
    let ext_prop = |p: &CanonicalProperty| -> Vec<bool> {
        model
            .elements
            .iter()
            .map(|e| p.eval(|a| e.properties.contains(a)))
            .collect()
    };
    let element_of = |i: &str| model.individuals.get(i).copied();

    let mut classes: BTreeSet<&CanonicalClass> = BTreeSet::new();
    let mut props: BTreeSet<&CanonicalProperty> = BTreeSet::new();
    for s in ckb.statements() {
        for c in s.classes() {
            if !c.atoms().iter().all(known_class) {
                return false;
            }
            classes.insert(c);
        }
        match s {
            Statement::Stat {
                class,
                prop,
                interval,
            } => {
                if !prop.atoms().iter().all(known_prop) {
                    return false;
                }
                props.insert(prop);
                let in_class = ext_class(class);
                let holds = ext_prop(prop);
                let den = in_class.iter().filter(|&&b| b).count();
                let num = (0..n).filter(|&e| in_class[e] && holds[e]).count();
                if den == 0
                    || !interval.contains(&Rational::new(BigInt::from(num), BigInt::from(den)))
                {
                    return false;
                }
            }
            Statement::Member { individual, class } => match element_of(individual) {
                Some(e) if ext_class(class)[e] => {}
                _ => return false,
            },
            Statement::Subset { sub, sup } => {
                let (a, b) = (ext_class(sub), ext_class(sup));
                let included = (0..n).all(|e| !a[e] || b[e]);
                let strict = (0..n).any(|e| b[e] && !a[e]);
                if !included || !strict {
                    return false;
                }
            }
            Statement::SentenceForm {
                prop, individual, ..
            } => {
                if !prop.atoms().iter().all(known_prop) || element_of(individual).is_none() {
                    return false;
                }
                props.insert(prop);
            }
            Statement::SentenceEquiv { .. } => {}
        }
    }
    if classes.iter().any(|c| !ext_class(c).contains(&true)) {
        return false;
    }
    let class_exts: Vec<Vec<bool>> = classes.iter().map(|c| ext_class(c)).collect();
    let prop_exts: Vec<Vec<bool>> = props.iter().map(|p| ext_prop(p)).collect();
    let all_distinct = |exts: &[Vec<bool>]| {
        exts.iter()
            .enumerate()
            .all(|(k, a)| exts[k + 1..].iter().all(|b| a != b))
    };
    if !all_distinct(&class_exts) || !all_distinct(&prop_exts) {
        return false;
    }
    ckb.sentence_classes().iter().all(|group| {
        let truths: BTreeSet<bool> = group
            .forms
            .iter()
            .map(|(p, i)| ext_prop(p)[element_of(i).unwrap()])
            .collect();
        truths.len() <= 1
    })
}
