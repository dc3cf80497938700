//! The fixed library of p-strategies used to combine probability intervals.

use std::fmt;

use crate::interval::Annotation;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    Conjunctive,
    Disjunctive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PStrategy {
    /// Independence: `[a1*b1, a2*b2]`.
    ConjInd,
    /// Ignorance lower bound: `[min(a1,b1), min(a2,b2)]`.
    ConjMin,
    /// Independence: `[a1+b1-a1*b1, a2+b2-a2*b2]`.
    DisjInd,
    /// Ignorance upper bound: `[max(a1,b1), max(a2,b2)]`.
    DisjMax,
}

impl PStrategy {
    pub fn kind(self) -> StrategyKind {
        match self {
            PStrategy::ConjInd | PStrategy::ConjMin => StrategyKind::Conjunctive,
            PStrategy::DisjInd | PStrategy::DisjMax => StrategyKind::Disjunctive,
        }
    }

    /// The name used after the connective in source text (`^ind`, `vmax`).
    pub fn name(self) -> &'static str {
        match self {
            PStrategy::ConjInd | PStrategy::DisjInd => "ind",
            PStrategy::ConjMin => "min",
            PStrategy::DisjMax => "max",
        }
    }

    pub fn lookup(kind: StrategyKind, name: &str) -> Option<PStrategy> {
        match (kind, name) {
            (StrategyKind::Conjunctive, "ind") => Some(PStrategy::ConjInd),
            (StrategyKind::Conjunctive, "min") => Some(PStrategy::ConjMin),
            (StrategyKind::Disjunctive, "ind") => Some(PStrategy::DisjInd),
            (StrategyKind::Disjunctive, "max") => Some(PStrategy::DisjMax),
            _ => None,
        }
    }

    pub fn combine(self, a: &Annotation, b: &Annotation) -> Annotation {
        let pick = |x: &Rational, y: &Rational| -> Rational {
            match self {
                PStrategy::ConjInd => x * y,
                PStrategy::ConjMin => x.clone().min(y.clone()),
                PStrategy::DisjInd => &(x + y) - &(x * y),
                PStrategy::DisjMax => x.clone().max(y.clone()),
            }
        };
        Annotation::from_bounds_unchecked(pick(a.lo(), b.lo()), pick(a.hi(), b.hi()))
    }

    /// Folds a non-empty sequence; `None` for an empty one.
    pub fn combine_all<'a, I>(self, items: I) -> Option<Annotation>
    where
        I: IntoIterator<Item = &'a Annotation>,
    {
        let mut iter = items.into_iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, next| self.combine(&acc, next)))
    }
}

impl Default for PStrategy {
    /// The strategy assigned to every predicate without a `#strategy` directive.
    fn default() -> Self {
        PStrategy::DisjInd
    }
}

impl fmt::Display for PStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
