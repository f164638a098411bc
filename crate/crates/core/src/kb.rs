//! Statements of a knowledge base and the builder that collects them.

use std::collections::{BTreeMap, BTreeSet};

use crate::class::{CanonicalClass, ClassExpr, UNIVERSAL_NAME};
use crate::error::{KbError, Namespace};
use crate::interval::{Interval, Rational};
use crate::property::{CanonicalProperty, PropExpr};

/// One assertion of the knowledge base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Statement {
    /// `%(class, prop) ∈ interval`
    Stat {
        class: CanonicalClass,
        prop: CanonicalProperty,
        interval: Interval,
    },
    /// `individual ∈ class`
    Member {
        individual: String,
        class: CanonicalClass,
    },
    /// `sub ⊂ sup`, proper inclusion.
    Subset {
        sub: CanonicalClass,
        sup: CanonicalClass,
    },
    /// `sentence ↔ prop(individual)`
    SentenceForm {
        sentence: String,
        prop: CanonicalProperty,
        individual: String,
    },
    /// `a ↔ b`, stored with `a <= b`.
    SentenceEquiv { a: String, b: String },
}

impl Statement {
    pub fn stat(class: CanonicalClass, prop: CanonicalProperty, interval: Interval) -> Self {
        Statement::Stat {
            class,
            prop,
            interval,
        }
    }

    pub fn member(individual: impl Into<String>, class: CanonicalClass) -> Self {
        Statement::Member {
            individual: individual.into(),
            class,
        }
    }

    pub fn subset(sub: CanonicalClass, sup: CanonicalClass) -> Self {
        Statement::Subset { sub, sup }
    }

    pub fn form(
        sentence: impl Into<String>,
        prop: CanonicalProperty,
        individual: impl Into<String>,
    ) -> Self {
        Statement::SentenceForm {
            sentence: sentence.into(),
            prop,
            individual: individual.into(),
        }
    }

    pub fn equiv(a: impl Into<String>, b: impl Into<String>) -> Self {
        let (a, b) = (a.into(), b.into());
        if a <= b {
            Statement::SentenceEquiv { a, b }
        } else {
            Statement::SentenceEquiv { a: b, b: a }
        }
    }

    /// Classes this statement mentions.
    pub fn classes(&self) -> Vec<&CanonicalClass> {
        match self {
            Statement::Stat { class, .. } | Statement::Member { class, .. } => vec![class],
            Statement::Subset { sub, sup } => vec![sub, sup],
            _ => Vec::new(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "class",
    "property",
    "individual",
    "sentence",
    "iff",
    "stat",
    "member",
    "in",
    "subset",
    "equiv",
];

/// `[A-Za-z_][A-Za-z0-9_]*`, excluding keywords.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&s)
}

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Single-writer collector of declarations and statements.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KbBuilder {
    classes: BTreeSet<String>,
    properties: BTreeSet<String>,
    individuals: BTreeSet<String>,
    forms: BTreeMap<String, (CanonicalProperty, String)>,
    anonymous: BTreeSet<String>,
    statements: BTreeSet<Statement>,
}

impl KbBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn declare(&mut self, namespace: Namespace, name: &str) -> Result<(), KbError> {
        if namespace == Namespace::Class && name == UNIVERSAL_NAME {
            return Err(KbError::ReservedName(name.to_string()));
        }
        if !is_identifier(name) {
            return Err(KbError::InvalidName {
                namespace,
                name: name.to_string(),
            });
        }
        let set = match namespace {
            Namespace::Class => &mut self.classes,
            Namespace::Property => &mut self.properties,
            Namespace::Individual => &mut self.individuals,
            Namespace::Sentence => unreachable!("sentences are declared by their form"),
        };
        if !set.insert(name.to_string()) {
            return Err(KbError::Duplicate {
                namespace,
                name: name.to_string(),
            });
        }
        Ok(())
    }

    pub fn declare_class(&mut self, name: &str) -> Result<&mut Self, KbError> {
        self.declare(Namespace::Class, name)?;
        Ok(self)
    }

    pub fn declare_property(&mut self, name: &str) -> Result<&mut Self, KbError> {
        self.declare(Namespace::Property, name)?;
        Ok(self)
    }

    pub fn declare_individual(&mut self, name: &str) -> Result<&mut Self, KbError> {
        self.declare(Namespace::Individual, name)?;
        Ok(self)
    }

    pub fn class(&self, expr: &ClassExpr) -> Result<CanonicalClass, KbError> {
        CanonicalClass::canonicalize(expr, |a| self.classes.contains(a)).map_err(|name| {
            KbError::Undeclared {
                namespace: Namespace::Class,
                name,
            }
        })
    }

    pub fn property(&self, expr: &PropExpr) -> Result<CanonicalProperty, KbError> {
        Ok(CanonicalProperty::canonicalize(expr, |a| {
            self.properties.contains(a)
        })?)
    }

    fn check_class(&self, class: &CanonicalClass) -> Result<(), KbError> {
        if class.is_universal() {
            return Err(KbError::UniversalClass);
        }
        match class.atoms().iter().find(|a| !self.classes.contains(*a)) {
            Some(a) => Err(KbError::Undeclared {
                namespace: Namespace::Class,
                name: a.clone(),
            }),
            None => Ok(()),
        }
    }

    fn check_property(&self, prop: &CanonicalProperty) -> Result<(), KbError> {
        match prop.atoms().iter().find(|a| !self.properties.contains(*a)) {
            Some(a) => Err(KbError::Undeclared {
                namespace: Namespace::Property,
                name: a.clone(),
            }),
            None => Ok(()),
        }
    }

    fn check_individual(&self, name: &str) -> Result<(), KbError> {
        if self.individuals.contains(name) {
            Ok(())
        } else {
            Err(KbError::Undeclared {
                namespace: Namespace::Individual,
                name: name.to_string(),
            })
        }
    }

    fn check_sentence(&self, name: &str) -> Result<(), KbError> {
        if self.forms.contains_key(name) {
            Ok(())
        } else {
            Err(KbError::Undeclared {
                namespace: Namespace::Sentence,
                name: name.to_string(),
            })
        }
    }

    /// Records a statement. Re-asserting an existing statement is a no-op.
    pub fn assert(&mut self, statement: Statement) -> Result<&mut Self, KbError> {
        match &statement {
            Statement::Stat { class, prop, .. } => {
                self.check_class(class)?;
                self.check_property(prop)?;
            }
            Statement::Member { individual, class } => {
                self.check_individual(individual)?;
                self.check_class(class)?;
            }
            Statement::Subset { sub, sup } => {
                self.check_class(sub)?;
                self.check_class(sup)?;
                if sub == sup {
                    return Err(KbError::ReflexiveSubset(sub.to_string()));
                }
            }
            Statement::SentenceForm {
                sentence,
                prop,
                individual,
            } => {
                if !is_identifier(sentence) && !self.anonymous.contains(sentence) {
                    return Err(KbError::InvalidName {
                        namespace: Namespace::Sentence,
                        name: sentence.clone(),
                    });
                }
                self.check_property(prop)?;
                self.check_individual(individual)?;
                match self.forms.get(sentence) {
                    Some((p, i)) if p == prop && i == individual => {}
                    Some((p, i)) => {
                        return Err(KbError::ConflictingForm {
                            sentence: sentence.clone(),
                            existing: format!("{p}({i})"),
                        })
                    }
                    None => {
                        self.forms
                            .insert(sentence.clone(), (prop.clone(), individual.clone()));
                    }
                }
            }
            Statement::SentenceEquiv { a, b } => {
                self.check_sentence(a)?;
                self.check_sentence(b)?;
            }
        }
        let statement = match statement {
            Statement::SentenceEquiv { a, b } => Statement::equiv(a, b),
            other => other,
        };
        self.statements.insert(statement);
        Ok(self)
    }

    /// Convenience for statistical items given as bounds.
    pub fn assert_stat(
        &mut self,
        class: CanonicalClass,
        prop: CanonicalProperty,
        lo: Rational,
        hi: Rational,
    ) -> Result<&mut Self, KbError> {
        let interval = Interval::new(lo, hi)?;
        self.assert(Statement::stat(class, prop, interval))
    }

    /// Returns the label of the anonymous sentence `prop(individual)`,
    /// creating it on first use.
    pub fn anonymous_sentence(
        &mut self,
        prop: CanonicalProperty,
        individual: &str,
    ) -> Result<String, KbError> {
        let label = format!("{prop}({individual})");
        if self.forms.contains_key(&label) {
            return Ok(label);
        }
        self.anonymous.insert(label.clone());
        if let Err(e) = self.assert(Statement::form(label.clone(), prop, individual)) {
            self.anonymous.remove(&label);
            return Err(e);
        }
        Ok(label)
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn properties(&self) -> &BTreeSet<String> {
        &self.properties
    }

    pub fn individuals(&self) -> &BTreeSet<String> {
        &self.individuals
    }

    pub fn statements(&self) -> &BTreeSet<Statement> {
        &self.statements
    }

    pub fn is_anonymous(&self, sentence: &str) -> bool {
        self.anonymous.contains(sentence)
    }

    pub fn form_of(&self, sentence: &str) -> Option<(&CanonicalProperty, &str)> {
        self.forms.get(sentence).map(|(p, i)| (p, i.as_str()))
    }

    pub fn sentences(&self) -> impl Iterator<Item = &str> {
        self.forms.keys().map(String::as_str)
    }
}
