use thiserror::Error;

/// Symbol namespaces of a knowledge base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Class,
    Property,
    Individual,
    Sentence,
}

impl std::fmt::Display for Namespace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Namespace::Class => "class",
            Namespace::Property => "property",
            Namespace::Individual => "individual",
            Namespace::Sentence => "sentence",
        })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum KbError {
    #[error("undeclared {namespace} `{name}`")]
    Undeclared { namespace: Namespace, name: String },

    #[error("duplicate {namespace} declaration `{name}`")]
    Duplicate { namespace: Namespace, name: String },

    #[error("invalid {namespace} identifier `{name}`")]
    InvalidName { namespace: Namespace, name: String },

    #[error("`{0}` is reserved for the universal class")]
    ReservedName(String),

    #[error("statements may not mention the universal class")]
    UniversalClass,

    #[error("invalid interval [{lo}, {hi}]: need 0 <= lo <= hi <= 1")]
    InvalidInterval { lo: String, hi: String },

    #[error("subset statement relates `{0}` to itself")]
    ReflexiveSubset(String),

    #[error("sentence `{sentence}` already has the form {existing}; link a new form with an equivalence instead")]
    ConflictingForm { sentence: String, existing: String },

    #[error("property mentions {atoms} atoms; at most {max} are supported")]
    PropertyTooWide { atoms: usize, max: usize },

    #[error("inconsistent statistics for %({class}, {property}): asserted intervals have empty intersection")]
    Inconsistent { class: String, property: String },
}
