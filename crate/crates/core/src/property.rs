//! Properties as canonical boolean functions over property atoms.
//!
//! A property is stored as its truth table over the atoms it actually depends
//! on, so two formulas canonicalize identically iff they are logically
//! equivalent.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::KbError;

/// Upper bound on the essential atoms of a single property.
pub const MAX_PROPERTY_ATOMS: usize = 16;

/// Boolean expression over property atoms using negation and conjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PropExpr {
    Atom(String),
    Not(Box<PropExpr>),
    And(Box<PropExpr>, Box<PropExpr>),
}

impl PropExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        PropExpr::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        PropExpr::Not(Box::new(self))
    }

    pub fn and(self, other: PropExpr) -> Self {
        PropExpr::And(Box::new(self), Box::new(other))
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            PropExpr::Atom(a) => {
                out.insert(a);
            }
            PropExpr::Not(e) => e.collect_atoms(out),
            PropExpr::And(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    fn eval(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            PropExpr::Atom(a) => value(a),
            PropExpr::Not(e) => !e.eval(value),
            PropExpr::And(l, r) => l.eval(value) && r.eval(value),
        }
    }
}

/// Canonical property: essential atoms (sorted) and the truth table indexed by
/// assignments, bit `j` of the index giving the value of `atoms[j]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalProperty {
    atoms: Vec<String>,
    table: Vec<bool>,
}

#[derive(Debug, PartialEq, Eq)]
pub enum PropertyError {
    Undeclared(String),
    TooWide(usize),
}

impl From<PropertyError> for KbError {
    fn from(e: PropertyError) -> Self {
        match e {
            PropertyError::Undeclared(name) => KbError::Undeclared {
                namespace: crate::error::Namespace::Property,
                name,
            },
            PropertyError::TooWide(atoms) => KbError::PropertyTooWide {
                atoms,
                max: MAX_PROPERTY_ATOMS,
            },
        }
    }
}

impl CanonicalProperty {
    pub fn atom(name: impl Into<String>) -> Self {
        CanonicalProperty {
            atoms: vec![name.into()],
            table: vec![false, true],
        }
    }

    /// The tautology `⊤`.
    pub fn top() -> Self {
        CanonicalProperty {
            atoms: Vec::new(),
            table: vec![true],
        }
    }

    /// The contradiction `⊥`.
    pub fn bottom() -> Self {
        CanonicalProperty {
            atoms: Vec::new(),
            table: vec![false],
        }
    }

    pub fn canonicalize(
        expr: &PropExpr,
        declared: impl Fn(&str) -> bool,
    ) -> Result<Self, PropertyError> {
        let mut atoms = BTreeSet::new();
        expr.collect_atoms(&mut atoms);
        if let Some(bad) = atoms.iter().find(|a| !declared(a)) {
            return Err(PropertyError::Undeclared(bad.to_string()));
        }
        if atoms.len() > MAX_PROPERTY_ATOMS {
            return Err(PropertyError::TooWide(atoms.len()));
        }
        let atoms: Vec<String> = atoms.into_iter().map(String::from).collect();
        let table = (0..1usize << atoms.len())
            .map(|idx| {
                expr.eval(&|a: &str| {
                    let j = atoms.iter().position(|x| x == a).unwrap();
                    idx >> j & 1 == 1
                })
            })
            .collect();
        Ok(CanonicalProperty { atoms, table }.reduced())
    }

    /// Drops atoms the truth table does not depend on.
    fn reduced(mut self) -> Self {
        let mut j = self.atoms.len();
        while j > 0 {
            j -= 1;
            let bit = 1usize << j;
            let inessential = (0..self.table.len())
                .filter(|x| x & bit == 0)
                .all(|x| self.table[x] == self.table[x | bit]);
            if inessential {
                self.atoms.remove(j);
                let low = bit - 1;
                self.table = (0..self.table.len() / 2)
                    .map(|y| self.table[(y & low) | ((y & !low) << 1)])
                    .collect();
            }
        }
        self
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn is_tautology(&self) -> bool {
        self.atoms.is_empty() && self.table[0]
    }

    pub fn is_contradiction(&self) -> bool {
        self.atoms.is_empty() && !self.table[0]
    }

    pub fn negate(&self) -> Self {
        CanonicalProperty {
            atoms: self.atoms.clone(),
            table: self.table.iter().map(|b| !b).collect(),
        }
    }

    /// Conjunction. Panics if the result would exceed [`MAX_PROPERTY_ATOMS`]
    /// essential atoms before reduction; use [`Self::try_conjoin`] to check.
    pub fn conjoin(&self, other: &CanonicalProperty) -> Self {
        self.try_conjoin(other).expect("property too wide")
    }

    pub fn try_conjoin(&self, other: &CanonicalProperty) -> Result<Self, PropertyError> {
        let atoms: Vec<String> = self
            .atoms
            .iter()
            .chain(&other.atoms)
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if atoms.len() > MAX_PROPERTY_ATOMS {
            return Err(PropertyError::TooWide(atoms.len()));
        }
        let table = (0..1usize << atoms.len())
            .map(|idx| {
                let value = |a: &str| {
                    let j = atoms.iter().position(|x| x == a).unwrap();
                    idx >> j & 1 == 1
                };
                self.eval(value) && other.eval(value)
            })
            .collect();
        Ok(CanonicalProperty { atoms, table }.reduced())
    }

    /// Evaluates under an assignment of truth values to atoms.
    pub fn eval(&self, value: impl Fn(&str) -> bool) -> bool {
        let idx = self
            .atoms
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, a)| if value(a) { acc | 1 << j } else { acc });
        self.table[idx]
    }

    /// Source text in the `!`/`&` surface syntax. Tautology and contradiction
    /// have no atoms, so they are spelled with `spare_atom`.
    pub fn to_source(&self, spare_atom: &str) -> String {
        if self.atoms.is_empty() {
            return if self.table[0] {
                format!("!({spare_atom} & !{spare_atom})")
            } else {
                format!("{spare_atom} & !{spare_atom}")
            };
        }
        let minterms: Vec<usize> = (0..self.table.len()).filter(|&x| self.table[x]).collect();
        let maxterms: Vec<usize> = (0..self.table.len()).filter(|&x| !self.table[x]).collect();
        if minterms.len() <= maxterms.len() {
            // f = m1 | m2 | ... = !(!m1 & !m2 & ...)
            if minterms.len() == 1 {
                return self.minterm_source(minterms[0]);
            }
            let parts: Vec<String> = minterms.iter().map(|&m| self.negated_minterm(m)).collect();
            format!("!({})", parts.join(" & "))
        } else {
            // f = !(n1 | n2 | ...) = !n1 & !n2 & ...
            let parts: Vec<String> = maxterms.iter().map(|&m| self.negated_minterm(m)).collect();
            parts.join(" & ")
        }
    }

    fn literals(&self, m: usize) -> Vec<String> {
        self.atoms
            .iter()
            .enumerate()
            .map(|(j, a)| if m >> j & 1 == 1 { a.clone() } else { format!("!{a}") })
            .collect()
    }

    fn minterm_source(&self, m: usize) -> String {
        self.literals(m).join(" & ")
    }

    fn negated_minterm(&self, m: usize) -> String {
        let lits = self.literals(m);
        if lits.len() == 1 {
            match lits[0].strip_prefix('!') {
                Some(a) => a.to_string(),
                None => format!("!{}", lits[0]),
            }
        } else {
            format!("!({})", lits.join(" & "))
        }
    }
}

impl fmt::Display for CanonicalProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_tautology() {
            f.write_str("⊤")
        } else if self.is_contradiction() {
            f.write_str("⊥")
        } else {
            f.write_str(&self.to_source(""))
        }
    }
}

impl serde::Serialize for CanonicalProperty {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for CanonicalProperty {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let s = String::deserialize(deserializer)?;
        match s.as_str() {
            "⊤" => Ok(CanonicalProperty::top()),
            "⊥" => Ok(CanonicalProperty::bottom()),
            text => {
                let expr = crate::dsl::parse_prop_expr(text).map_err(D::Error::custom)?;
                CanonicalProperty::canonicalize(&expr, |_| true)
                    .map_err(|e| D::Error::custom(format!("{e:?}")))
            }
        }
    }
}
