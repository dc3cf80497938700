//! Probability answer set optimization.
//!
//! A program consists of probability-annotated generator rules, whose
//! probability answer sets are enumerated by [`engine`], and probability
//! preference rules, which rank those answer sets ([`prefrank`]) under the
//! Pareto or Maximal preference relation. All arithmetic is exact.

// Exact rationals make errors and AST leaves large; boxing them buys nothing here.
#![allow(clippy::result_large_err, clippy::large_enum_variant)]

pub mod aggregates;
pub mod answer_set;
pub mod engine;
pub mod format;
pub mod grounder;
pub mod interval;
pub mod parser;
pub mod prefrank;
pub mod rational;
pub mod strategy;
pub mod syntax;

pub use answer_set::AnswerSet;
pub use engine::{check_answer_set, enumerate_answer_sets, satisfies_rule};
pub use format::format_program;
pub use grounder::{ground_program, GroundError, GroundOptions};
pub use interval::{interval_product, interval_scale, truth_leq, Annotation, Interval};
pub use parser::{parse_program, ParseDiagnostic, Severity, SourceSpan};
pub use prefrank::{EvaluationContext, Mode, Ordering, SatisfactionDegree};
pub use rational::Rational;
pub use strategy::PStrategy;
pub use syntax::Program;
