//! Reference classes in canonical intersection form.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Display name of the built-in class containing every individual.
pub const UNIVERSAL_NAME: &str = "U";

/// Intersection expression over class atoms, before canonicalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassExpr {
    Atom(String),
    And(Box<ClassExpr>, Box<ClassExpr>),
}

impl ClassExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        ClassExpr::Atom(name.into())
    }

    pub fn and(self, other: ClassExpr) -> Self {
        ClassExpr::And(Box::new(self), Box::new(other))
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            ClassExpr::Atom(a) => out.push(a),
            ClassExpr::And(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }
}

/// A reference class as the sorted set of its atoms.
///
/// The empty atom set is the universal class `U`: intersecting with it is the
/// identity and every other class is a structural proper subclass of it.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalClass {
    atoms: BTreeSet<String>,
}

impl CanonicalClass {
    pub fn universal() -> Self {
        CanonicalClass::default()
    }

    pub fn atom(name: impl Into<String>) -> Self {
        CanonicalClass {
            atoms: BTreeSet::from([name.into()]),
        }
    }

    pub fn from_atoms<I, S>(atoms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        CanonicalClass {
            atoms: atoms.into_iter().map(Into::into).collect(),
        }
    }

    /// Canonicalizes an expression, checking every atom with `declared`.
    /// Returns the first undeclared atom on failure.
    pub fn canonicalize(
        expr: &ClassExpr,
        declared: impl Fn(&str) -> bool,
    ) -> Result<Self, String> {
        let mut atoms = Vec::new();
        expr.collect_atoms(&mut atoms);
        if let Some(bad) = atoms.iter().find(|a| !declared(a)) {
            return Err(bad.to_string());
        }
        Ok(CanonicalClass::from_atoms(atoms))
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn is_universal(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn intersect(&self, other: &CanonicalClass) -> CanonicalClass {
        CanonicalClass {
            atoms: self.atoms.union(&other.atoms).cloned().collect(),
        }
    }

    /// `self` is a structural proper subclass of `other`: it has strictly more atoms.
    pub fn structurally_below(&self, other: &CanonicalClass) -> bool {
        self.atoms.len() > other.atoms.len() && self.atoms.is_superset(&other.atoms)
    }

    /// Ordering used for tie-breaks: "smallest" class first, meaning the one
    /// with most atoms, then lexicographic on atoms.
    pub fn specificity_cmp(&self, other: &CanonicalClass) -> std::cmp::Ordering {
        other
            .atoms
            .len()
            .cmp(&self.atoms.len())
            .then_with(|| self.atoms.cmp(&other.atoms))
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str(UNIVERSAL_NAME);
        }
        let mut first = true;
        for a in &self.atoms {
            if !first {
                f.write_str(" & ")?;
            }
            f.write_str(a)?;
            first = false;
        }
        Ok(())
    }
}

impl std::str::FromStr for CanonicalClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == UNIVERSAL_NAME {
            return Ok(CanonicalClass::universal());
        }
        let atoms: Vec<&str> = s.split('&').map(str::trim).collect();
        if atoms.iter().any(|a| a.is_empty() || *a == UNIVERSAL_NAME) {
            return Err(format!("malformed class `{s}`"));
        }
        Ok(CanonicalClass::from_atoms(atoms))
    }
}

impl Serialize for CanonicalClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
