//! Probability aggregates.
//!
//! Expectation aggregates (`#vale`, `#sume`, ...) map a multiset of
//! `x : [p1,p2]` pairs to a real interval; pair aggregates (`#sump`, ...)
//! map it to a value together with the product of the annotations.

use std::fmt;

use crate::answer_set::AnswerSet;
use crate::interval::{interval_product, interval_scale, Annotation, Interval};
use crate::rational::Rational;
use crate::syntax::{AggregateAtom, AggregateFamily, AggregateFunction, ProbabilitySet, Relation, Value};

/// `S_h`: the values and annotations of the elements whose condition holds.
/// Duplicates are kept.
pub type EvaluatedMultiset = Vec<(Value, Annotation)>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AggregateResult {
    Interval(Interval),
    Pair(Rational, Annotation),
    Undefined,
}

impl AggregateResult {
    pub fn is_defined(&self) -> bool {
        !matches!(self, AggregateResult::Undefined)
    }
}

impl fmt::Display for AggregateResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AggregateResult::Interval(i) => write!(f, "{i}"),
            AggregateResult::Pair(x, a) => write!(f, "({x}, {a})"),
            AggregateResult::Undefined => f.write_str("undefined"),
        }
    }
}

/// Builds `S_h` from a ground probability set.
pub fn build_multiset(set: &ProbabilitySet, h: &AnswerSet) -> EvaluatedMultiset {
    set.elements
        .iter()
        .filter(|e| e.condition.iter().all(|c| h.satisfies(c, false)))
        .filter_map(|e| Some((e.value.ground_value().ok()?, e.annotation.constant()?)))
        .collect()
}

fn annotation_product(m: &EvaluatedMultiset) -> Annotation {
    m.iter().fold(Annotation::certain(), |acc, (_, a)| interval_product(&acc, a))
}

fn numbers(m: &EvaluatedMultiset) -> Option<Vec<&Rational>> {
    m.iter().map(|(x, _)| x.as_num()).collect()
}

/// The value part shared by both families; `None` is undefined.
fn combine_values(function: AggregateFunction, m: &EvaluatedMultiset) -> Option<Rational> {
    use AggregateFunction::*;
    if matches!(function, CountE | CountP) {
        return Some(Rational::from(m.len()));
    }
    let xs = numbers(m)?;
    match function {
        SumE | SumP | ValE => Some(xs.into_iter().cloned().sum()),
        TimesE | TimesP => Some(xs.into_iter().cloned().product()),
        MinE | MinP => xs.into_iter().min().cloned(),
        MaxE | MaxP => xs.into_iter().max().cloned(),
        CountE | CountP => unreachable!(),
    }
}

/// Evaluates an expectation-family function.
///
/// # Panics
///
/// Panics when given a pair-family function.
pub fn eval_expectation_aggregate(function: AggregateFunction, m: &EvaluatedMultiset) -> AggregateResult {
    assert_eq!(function.family(), AggregateFamily::Expectation, "{function:?} is not an expectation aggregate");
    if function == AggregateFunction::ValE {
        let Some(xs) = numbers(m) else {
            return AggregateResult::Undefined;
        };
        let zero = Interval::point(Rational::zero());
        let total = xs.iter().zip(m).fold(zero, |acc, (x, (_, a))| acc.add(&interval_scale(x, a)));
        return AggregateResult::Interval(total);
    }
    match combine_values(function, m) {
        Some(x) => AggregateResult::Interval(interval_scale(&x, &annotation_product(m))),
        None => AggregateResult::Undefined,
    }
}

/// Evaluates a pair-family function.
///
/// # Panics
///
/// Panics when given an expectation-family function.
pub fn eval_pair_aggregate(function: AggregateFunction, m: &EvaluatedMultiset) -> AggregateResult {
    assert_eq!(function.family(), AggregateFamily::Pair, "{function:?} is not a pair aggregate");
    match combine_values(function, m) {
        Some(x) => AggregateResult::Pair(x, annotation_product(m)),
        None => AggregateResult::Undefined,
    }
}

pub fn eval_aggregate(function: AggregateFunction, m: &EvaluatedMultiset) -> AggregateResult {
    match function.family() {
        AggregateFamily::Expectation => eval_expectation_aggregate(function, m),
        AggregateFamily::Pair => eval_pair_aggregate(function, m),
    }
}

/// `value rel guard` with intervals ordered pointwise; `=` is equality.
pub fn compare_with_guard(value: &Interval, rel: Relation, guard: &Interval) -> bool {
    match rel {
        Relation::Eq => value == guard,
        Relation::Ne => value != guard,
        Relation::Le => value.truth_leq(guard),
        Relation::Lt => value.truth_lt(guard),
        Relation::Ge => guard.truth_leq(value),
        Relation::Gt => guard.truth_lt(value),
    }
}

fn guard_interval(atom: &AggregateAtom) -> Option<Interval> {
    let lo = atom.guard_lo.ground_value().ok()?.as_num()?.clone();
    let hi = atom.guard_hi.ground_value().ok()?.as_num()?.clone();
    Interval::new(lo, hi).ok()
}

/// Truth of a ground aggregate atom given the aggregate's value in `h`.
pub fn atom_holds(atom: &AggregateAtom, result: &AggregateResult) -> bool {
    let Some(guard) = guard_interval(atom) else {
        return false;
    };
    match result {
        AggregateResult::Interval(value) => compare_with_guard(value, atom.relation, &guard),
        AggregateResult::Pair(x, nu) => {
            compare_with_guard(&Interval::point(x.clone()), atom.relation, &guard)
                && atom.annotation.constant().is_some_and(|mu| mu.truth_leq(nu))
        }
        AggregateResult::Undefined => false,
    }
}

/// Whether `h` satisfies the (non-negated) ground aggregate atom.
pub fn eval_aggregate_atom(atom: &AggregateAtom, h: &AnswerSet) -> bool {
    let m = build_multiset(&atom.aggregate.set, h);
    atom_holds(atom, &eval_aggregate(atom.aggregate.function, &m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;
    use crate::syntax::{Atom, BodyElement};
    use proptest::prelude::*;
    use AggregateFunction::*;

    fn q(text: &str) -> Rational {
        text.parse().unwrap()
    }

    fn ann(lo: &str, hi: &str) -> Annotation {
        Annotation::new(q(lo), q(hi)).unwrap()
    }

    fn iv(lo: &str, hi: &str) -> AggregateResult {
        AggregateResult::Interval(Interval::new(q(lo), q(hi)).unwrap())
    }

    fn ms(items: &[(&str, &str, &str)]) -> EvaluatedMultiset {
        items.iter().map(|(x, lo, hi)| (Value::Num(q(x)), ann(lo, hi))).collect()
    }

    #[test]
    fn expectation_examples() {
        let m = ms(&[("0", "0.6", "0.6"), ("200", "0.4", "0.4")]);
        assert_eq!(eval_expectation_aggregate(ValE, &m), iv("80", "80"));
        assert_eq!(eval_expectation_aggregate(ValE, &ms(&[("1240", "1", "1")])), iv("1240", "1240"));
        let m = ms(&[("100", "0.5", "0.5"), ("200", "0.2", "0.3")]);
        assert_eq!(eval_expectation_aggregate(MinE, &m), iv("10", "15"));
    }

    #[test]
    fn pair_examples() {
        let m = ms(&[("100", "0.6", "0.6"), ("200", "0.4", "0.4")]);
        assert_eq!(eval_pair_aggregate(SumP, &m), AggregateResult::Pair(q("300"), ann("0.24", "0.24")));
        assert_eq!(eval_pair_aggregate(MinP, &ms(&[("1240", "1", "1")])), AggregateResult::Pair(q("1240"), ann("1", "1")));
    }

    #[test]
    fn empty_multiset_defaults() {
        let empty = EvaluatedMultiset::new();
        assert_eq!(eval_aggregate(ValE, &empty), iv("0", "0"));
        assert_eq!(eval_aggregate(SumE, &empty), iv("0", "0"));
        assert_eq!(eval_aggregate(CountE, &empty), iv("0", "0"));
        assert_eq!(eval_aggregate(TimesE, &empty), iv("1", "1"));
        assert_eq!(eval_aggregate(SumP, &empty), AggregateResult::Pair(q("0"), Annotation::certain()));
        assert_eq!(eval_aggregate(TimesP, &empty), AggregateResult::Pair(q("1"), Annotation::certain()));
        assert_eq!(eval_aggregate(CountP, &empty), AggregateResult::Pair(q("0"), Annotation::certain()));
        for f in [MinE, MaxE, MinP, MaxP] {
            assert_eq!(eval_aggregate(f, &empty), AggregateResult::Undefined);
        }
    }

    #[test]
    fn symbolic_values_only_count() {
        let m: EvaluatedMultiset = vec![(Value::sym("a"), Annotation::certain()), (Value::sym("a"), Annotation::certain())];
        assert_eq!(eval_aggregate(CountE, &m), iv("2", "2"));
        assert_eq!(eval_aggregate(SumP, &m), AggregateResult::Undefined);
    }

    fn atom_in(src: &str) -> AggregateAtom {
        let p = parse_program(src).unwrap();
        match &p.preferences[0].body[0] {
            BodyElement::Aggregate { atom, .. } => atom.clone(),
            _ => panic!("expected an aggregate"),
        }
    }

    fn h(atoms: &[(&str, Annotation)]) -> AnswerSet {
        atoms.iter().map(|(name, a)| (Atom::new(name, vec![]), a.clone())).collect()
    }

    #[test]
    fn atom_examples() {
        let atom = atom_in("p >> :- #sump{ 100 : 0.6 | a; 200 : 0.4 | b } = 300 : 0.2.");
        let both = h(&[("a", Annotation::certain()), ("b", Annotation::certain())]);
        assert!(eval_aggregate_atom(&atom, &both));
        let atom = atom_in("p >> :- #sump{ 100 : 0.6 | a; 200 : 0.4 | b } = 300 : 0.3.");
        assert!(!eval_aggregate_atom(&atom, &both));

        let atom = atom_in("p >> :- #maxe{ 1 : 1 | a } >= 0.");
        assert!(!eval_aggregate_atom(&atom, &h(&[])));

        let atom = atom_in("p >> :- #counte{ 1 : 1 | a; 2 : 1 | b } = [2,2].");
        assert!(eval_aggregate_atom(&atom, &both));
    }

    #[test]
    fn multiset_keeps_duplicates() {
        let atom = atom_in("p >> :- #countp{ 5 : 1 | a; 5 : 1 | b } = 2.");
        let m = build_multiset(&atom.aggregate.set, &h(&[("a", Annotation::certain()), ("b", Annotation::certain())]));
        assert_eq!(m.len(), 2);
        assert!(build_multiset(&atom.aggregate.set, &h(&[])).is_empty());
    }

    proptest! {
        #[test]
        fn singleton_laws(x in -1000i64..1000, den in 1i64..50, a in 0i64..=20, b in 0i64..=20) {
            let x = Rational::new(x, den);
            let mu = Annotation::new(Rational::new(a.min(b), 20), Rational::new(a.max(b), 20)).unwrap();
            let m = vec![(Value::Num(x.clone()), mu.clone())];
            for f in [ValE, SumE, TimesE, MinE, MaxE] {
                prop_assert_eq!(eval_aggregate(f, &m), AggregateResult::Interval(interval_scale(&x, &mu)));
            }
            for f in [SumP, TimesP, MinP, MaxP] {
                prop_assert_eq!(eval_aggregate(f, &m), AggregateResult::Pair(x.clone(), mu.clone()));
            }
        }

        #[test]
        fn certain_value_sum_matches_classical(xs in proptest::collection::vec(-100i64..100, 0..8)) {
            let m: EvaluatedMultiset = xs.iter().map(|x| (Value::from(*x), Annotation::certain())).collect();
            let total = Rational::from_integer(xs.iter().sum());
            let expected = AggregateResult::Interval(Interval::point(total));
            prop_assert_eq!(eval_aggregate(ValE, &m), expected.clone());
            prop_assert_eq!(eval_aggregate(SumE, &m), expected);
        }
    }
}
