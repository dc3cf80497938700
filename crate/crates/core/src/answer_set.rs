//! Probability answer sets: partial maps from ground atoms to annotations.

use std::collections::BTreeMap;
use std::fmt;

use crate::interval::Annotation;
use crate::syntax::{AnnotatedLiteral, Atom, HybridLiteral, Literal};

/// A partial valuation. Atoms missing from the map are undefined.
///
/// Equality and ordering only look at the valuation; `index` is the stable
/// identity assigned by the enumerator (1-based, in canonical order).
#[derive(Debug, Clone, Default)]
pub struct AnswerSet {
    pub index: usize,
    valuation: BTreeMap<Atom, Annotation>,
}

impl PartialEq for AnswerSet {
    fn eq(&self, other: &Self) -> bool {
        self.valuation == other.valuation
    }
}

impl Eq for AnswerSet {}

impl PartialOrd for AnswerSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AnswerSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.valuation.cmp(&other.valuation)
    }
}

impl FromIterator<(Atom, Annotation)> for AnswerSet {
    fn from_iter<I: IntoIterator<Item = (Atom, Annotation)>>(iter: I) -> Self {
        AnswerSet { index: 0, valuation: iter.into_iter().collect() }
    }
}

impl AnswerSet {
    pub fn new(valuation: BTreeMap<Atom, Annotation>) -> Self {
        AnswerSet { index: 0, valuation }
    }

    pub fn with_index(mut self, index: usize) -> Self {
        self.index = index;
        self
    }

    pub fn get(&self, atom: &Atom) -> Option<&Annotation> {
        self.valuation.get(atom)
    }

    pub fn is_defined(&self, atom: &Atom) -> bool {
        self.valuation.contains_key(atom)
    }

    pub fn len(&self) -> usize {
        self.valuation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.valuation.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &Annotation)> {
        self.valuation.iter()
    }

    pub fn valuation(&self) -> &BTreeMap<Atom, Annotation> {
        &self.valuation
    }

    /// Value of a ground literal; `None` when undefined or not ground.
    pub fn literal_value(&self, lit: &Literal) -> Option<&Annotation> {
        self.valuation.get(&lit.to_atom()?)
    }

    /// Value of a ground hybrid literal: its members combined under the
    /// literal's p-strategy, undefined when any member is.
    pub fn hybrid_value(&self, lit: &HybridLiteral) -> Option<Annotation> {
        match lit {
            HybridLiteral::Simple(l) => self.literal_value(l).cloned(),
            HybridLiteral::Conj(ls, s) | HybridLiteral::Disj(ls, s) => {
                let values = ls.iter().map(|l| self.literal_value(l)).collect::<Option<Vec<_>>>()?;
                s.combine_all(values)
            }
        }
    }

    /// `L:mu` holds iff `mu <= h(L)`; `not L:mu` holds iff it does not.
    pub fn satisfies(&self, lit: &AnnotatedLiteral, naf: bool) -> bool {
        let positive = match (self.hybrid_value(&lit.literal), lit.annotation.constant()) {
            (Some(value), Some(mu)) => mu.truth_leq(&value),
            _ => false,
        };
        positive != naf
    }
}

impl fmt::Display for AnswerSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (atom, ann)) in self.valuation.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if ann.is_certain() {
                write!(f, "{atom}")?;
            } else if ann.lo() == ann.hi() {
                write!(f, "{atom}:{}", ann.lo())?;
            } else {
                write!(f, "{atom}:{ann}")?;
            }
        }
        f.write_str("}")
    }
}
