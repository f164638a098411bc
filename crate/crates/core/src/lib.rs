//! Direct inference from statistical knowledge by reference-class selection.
//!
//! A knowledge base holds interval-valued statistics `%(class, property)`,
//! memberships, subset assertions and sentences with one or more logical
//! forms `property(individual)`. [`close`] derives the closed view;
//! [`prob`] evaluates a sentence in point or interval mode.

pub mod class;
pub mod closure;
pub mod consistency;
pub mod dsl;
pub mod error;
pub mod inference;
pub mod interval;
pub mod kb;
pub mod property;

pub use class::{CanonicalClass, ClassExpr, UNIVERSAL_NAME};
pub use closure::{close, ClosedKB, SentenceClass};
pub use consistency::{
    find_model, sanity_check, verify_model, FiniteModel, SanityReport, SearchError,
};
pub use error::{KbError, Namespace};
pub use inference::{
    explain, prob, prob_interval, prob_point, Mode, ProbResult, RowStatus, TableRow, Trace,
    UndefinedReason,
};
pub use interval::{rational, Interval, Rational};
pub use kb::{KbBuilder, Statement};
pub use property::{CanonicalProperty, PropExpr};
