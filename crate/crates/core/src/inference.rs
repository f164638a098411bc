//! Probability of a sentence by reference-class selection.
//!
//! For each form `P(i)` of the sentence, the candidate table lists every class
//! `i` is known to belong to together with the interval known for `%(class, P)`.
//! A row survives iff every row whose interval differs from its own belongs to
//! a known proper superset of its class. Survivors are resolved to the
//! inclusion-minimal interval.
//!
//! Point mode keeps only rows with point-valued knowledge and can come out
//! undefined; interval mode always has the universal class row to fall back on.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::class::CanonicalClass;
use crate::closure::{ClosedKB, Form};
use crate::interval::Interval;
use crate::property::CanonicalProperty;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Point,
    Interval,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Point => "point",
            Mode::Interval => "interval",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RowStatus {
    Live,
    /// `witness` has an interval differing from this row's and is not a known
    /// superset of this row's class.
    Deleted {
        witness: CanonicalClass,
        witness_interval: Interval,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub class: CanonicalClass,
    pub interval: Interval,
    #[serde(flatten)]
    pub status: RowStatus,
}

impl TableRow {
    pub fn is_live(&self) -> bool {
        self.status == RowStatus::Live
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndefinedReason {
    NoSentenceForm,
    NoMembership,
    AllRowsDeleted,
    ConflictingEquivalentForms,
    /// Survivors carry intervals with no common minimum; only possible when
    /// the subset relation is cyclic.
    IncoherentSurvivors,
}

impl UndefinedReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            UndefinedReason::NoSentenceForm => "no-sentence-form",
            UndefinedReason::NoMembership => "no-membership",
            UndefinedReason::AllRowsDeleted => "all-rows-deleted",
            UndefinedReason::ConflictingEquivalentForms => "conflicting-equivalent-forms",
            UndefinedReason::IncoherentSurvivors => "incoherent-survivors",
        }
    }

    // when every form is undefined, report the most severe reason
    fn severity(&self) -> u8 {
        match self {
            UndefinedReason::NoSentenceForm => 0,
            UndefinedReason::NoMembership => 1,
            UndefinedReason::AllRowsDeleted => 2,
            UndefinedReason::ConflictingEquivalentForms => 3,
            UndefinedReason::IncoherentSurvivors => 4,
        }
    }
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ProbResult {
    Defined {
        interval: Interval,
        selected: CanonicalClass,
        form: Form,
    },
    Undefined {
        reason: UndefinedReason,
    },
}

impl ProbResult {
    pub fn interval(&self) -> Option<&Interval> {
        match self {
            ProbResult::Defined { interval, .. } => Some(interval),
            ProbResult::Undefined { .. } => None,
        }
    }

    pub fn selected(&self) -> Option<&CanonicalClass> {
        match self {
            ProbResult::Defined { selected, .. } => Some(selected),
            ProbResult::Undefined { .. } => None,
        }
    }

    pub fn reason(&self) -> Option<UndefinedReason> {
        match self {
            ProbResult::Defined { .. } => None,
            ProbResult::Undefined { reason } => Some(*reason),
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, ProbResult::Defined { .. })
    }

    fn undefined(reason: UndefinedReason) -> Self {
        ProbResult::Undefined { reason }
    }
}

/// One candidate row per known membership of `individual`, in class order.
pub fn build_table(ckb: &ClosedKB, individual: &str, prop: &CanonicalProperty) -> Vec<TableRow> {
    ckb.known_memberships(individual)
        .into_iter()
        .map(|class| {
            let interval = ckb.effective_interval(&class, prop);
            TableRow {
                class,
                interval,
                status: RowStatus::Live,
            }
        })
        .collect()
}

/// Rows with point-valued knowledge only; the `[0, 1]` default never qualifies.
fn build_point_table(ckb: &ClosedKB, individual: &str, prop: &CanonicalProperty) -> Vec<TableRow> {
    build_table(ckb, individual, prop)
        .into_iter()
        .filter(|row| row.interval.is_point() && ckb.has_knowledge(&row.class, prop))
        .collect()
}

/// Marks every row that fails the subset-excuse condition. Deletion is
/// simultaneous: witnesses are drawn from the whole table.
pub fn filter_rows(ckb: &ClosedKB, rows: &[TableRow]) -> Vec<TableRow> {
    rows.iter()
        .map(|row| {
            let witness = rows.iter().find(|other| {
                other.interval.differs(&row.interval) && !ckb.subset_known(&row.class, &other.class)
            });
            TableRow {
                class: row.class.clone(),
                interval: row.interval.clone(),
                status: match witness {
                    None => RowStatus::Live,
                    Some(w) => RowStatus::Deleted {
                        witness: w.class.clone(),
                        witness_interval: w.interval.clone(),
                    },
                },
            }
        })
        .collect()
}

/// The survivor whose interval is included in every other survivor's, ties
/// going to the most specific class. `None` when no such interval exists.
pub fn resolve(survivors: &[TableRow]) -> Option<(Interval, CanonicalClass)> {
    survivors
        .iter()
        .filter(|row| survivors.iter().all(|other| row.interval.is_within(&other.interval)))
        .min_by(|a, b| a.class.specificity_cmp(&b.class))
        .map(|row| (row.interval.clone(), row.class.clone()))
}

/// Table and outcome for one sentence form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormTrace {
    pub property: CanonicalProperty,
    pub individual: String,
    pub rows: Vec<TableRow>,
    pub survivors: Vec<CanonicalClass>,
    pub outcome: ProbResult,
}

/// Structured account of a query: every form tried, its table with deletion
/// witnesses, the survivors and the resolution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub sentence: String,
    pub mode: Mode,
    pub forms: Vec<FormTrace>,
    pub outcome: ProbResult,
}

fn form_outcome(
    mode: Mode,
    prop: &CanonicalProperty,
    individual: &str,
    rows: &[TableRow],
) -> ProbResult {
    if mode == Mode::Point && rows.is_empty() {
        return ProbResult::undefined(UndefinedReason::NoMembership);
    }
    let survivors: Vec<TableRow> = rows.iter().filter(|r| r.is_live()).cloned().collect();
    if survivors.is_empty() {
        return ProbResult::undefined(UndefinedReason::AllRowsDeleted);
    }
    match resolve(&survivors) {
        Some((interval, selected)) => ProbResult::Defined {
            interval,
            selected,
            form: (prop.clone(), individual.to_string()),
        },
        None => ProbResult::undefined(UndefinedReason::IncoherentSurvivors),
    }
}

fn explain_form(ckb: &ClosedKB, prop: &CanonicalProperty, individual: &str, mode: Mode) -> FormTrace {
    let table = match mode {
        Mode::Point => build_point_table(ckb, individual, prop),
        Mode::Interval => build_table(ckb, individual, prop),
    };
    let rows = filter_rows(ckb, &table);
    let survivors = rows.iter().filter(|r| r.is_live()).map(|r| r.class.clone()).collect();
    let outcome = form_outcome(mode, prop, individual, &rows);
    FormTrace {
        property: prop.clone(),
        individual: individual.to_string(),
        rows,
        survivors,
        outcome,
    }
}

/// Combines per-form outcomes of known-equivalent forms. Defined results must
/// not differ; the inclusion-minimal one is reported.
fn combine(outcomes: &[&ProbResult]) -> ProbResult {
    let defined: Vec<&ProbResult> = outcomes.iter().copied().filter(|r| r.is_defined()).collect();
    if defined.is_empty() {
        return outcomes
            .iter()
            .filter_map(|r| r.reason())
            .max_by_key(UndefinedReason::severity)
            .map(ProbResult::undefined)
            .unwrap_or(ProbResult::undefined(UndefinedReason::NoSentenceForm));
    }
    let intervals: Vec<&Interval> = defined.iter().filter_map(|r| r.interval()).collect();
    let conflict = intervals
        .iter()
        .enumerate()
        .any(|(k, a)| intervals[k + 1..].iter().any(|b| a.differs(b)));
    if conflict {
        return ProbResult::undefined(UndefinedReason::ConflictingEquivalentForms);
    }
    defined
        .into_iter()
        .filter(|r| {
            let iv = r.interval().unwrap();
            intervals.iter().all(|other| iv.is_within(other))
        })
        .min_by(|a, b| tie_break(a, b))
        .cloned()
        .expect("pairwise nested intervals have a minimum")
}

fn tie_break(a: &ProbResult, b: &ProbResult) -> Ordering {
    match (a, b) {
        (
            ProbResult::Defined {
                selected: ca,
                form: fa,
                ..
            },
            ProbResult::Defined {
                selected: cb,
                form: fb,
                ..
            },
        ) => ca
            .specificity_cmp(cb)
            .then_with(|| fa.1.cmp(&fb.1))
            .then_with(|| fa.0.cmp(&fb.0)),
        _ => Ordering::Equal,
    }
}

/// Evaluates an explicit set of known-equivalent forms.
pub fn explain_forms<'a>(
    ckb: &ClosedKB,
    label: &str,
    forms: impl IntoIterator<Item = &'a Form>,
    mode: Mode,
) -> Trace {
    let forms: Vec<FormTrace> = forms
        .into_iter()
        .map(|(prop, individual)| explain_form(ckb, prop, individual, mode))
        .collect();
    let outcome = combine(&forms.iter().map(|f| &f.outcome).collect::<Vec<_>>());
    Trace {
        sentence: label.to_string(),
        mode,
        forms,
        outcome,
    }
}

/// Full trace for a sentence label, trying every form of its equivalence group.
pub fn explain(ckb: &ClosedKB, sentence: &str, mode: Mode) -> Trace {
    match ckb.sentence_class(sentence) {
        Some(group) => explain_forms(ckb, sentence, &group.forms, mode),
        None => Trace {
            sentence: sentence.to_string(),
            mode,
            forms: Vec::new(),
            outcome: ProbResult::undefined(UndefinedReason::NoSentenceForm),
        },
    }
}

pub fn prob(ckb: &ClosedKB, sentence: &str, mode: Mode) -> ProbResult {
    explain(ckb, sentence, mode).outcome
}

/// Point-valued statistics only; undefined when the candidates disagree
/// without a subset excuse.
pub fn prob_point(ckb: &ClosedKB, sentence: &str) -> ProbResult {
    prob(ckb, sentence, Mode::Point)
}

/// Interval-valued statistics with the `[0, 1]` default everywhere.
pub fn prob_interval(ckb: &ClosedKB, sentence: &str) -> ProbResult {
    prob(ckb, sentence, Mode::Interval)
}

pub fn prob_forms<'a>(
    ckb: &ClosedKB,
    forms: impl IntoIterator<Item = &'a Form>,
    mode: Mode,
) -> ProbResult {
    explain_forms(ckb, "", forms, mode).outcome
}

impl Trace {
    /// Recomputes the outcome from the recorded rows alone.
    pub fn replay(&self) -> ProbResult {
        if self.forms.is_empty() {
            return ProbResult::undefined(UndefinedReason::NoSentenceForm);
        }
        let outcomes: Vec<ProbResult> = self
            .forms
            .iter()
            .map(|f| form_outcome(self.mode, &f.property, &f.individual, &f.rows))
            .collect();
        combine(&outcomes.iter().collect::<Vec<_>>())
    }

    pub fn deletions(&self) -> usize {
        self.forms
            .iter()
            .flat_map(|f| &f.rows)
            .filter(|r| !r.is_live())
            .count()
    }
}
