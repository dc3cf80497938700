//! Ground instantiation.
//!
//! Grounding is typed: variables range only over values that occur in the
//! matching argument position of some atom that might be derived. Those
//! atoms are computed first as the least fixpoint of the generator rules
//! with negation and annotations ignored; each rule is then instantiated by
//! joining its positive body literals against them.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use rayon::prelude::*;
use thiserror::Error;

use crate::syntax::{
    Aggregate, AggregateAtom, AnnotatedLiteral, AnnotationError, AnnotationSpec, Atom, BodyElement, Combination,
    EvalError, GeneratorRule, HeadAtom, HybridLiteral, Leaf, Literal, OptAggregate, PreferenceRule, ProbabilitySet,
    Program, RuleRef, SetElement, Term, Value,
};

pub const DEFAULT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroundOptions {
    /// Maximum number of ground rules (and of possibly derivable atoms).
    pub cap: usize,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { cap: DEFAULT_CAP }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("grounding exceeds the cap of {cap} ground rules")]
    CapExceeded { cap: usize },
    #[error("in rule `{rule}`: {source}")]
    Annotation { rule: String, source: Box<AnnotationError> },
    #[error("in rule `{rule}`: {source}")]
    Term { rule: String, source: Box<EvalError> },
}

pub type Substitution = BTreeMap<String, Value>;

/// Global and per-set local variables of a rule.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VariableClasses {
    pub global: BTreeSet<String>,
    /// One entry per probability set, in [`RuleRef::sets`] order.
    pub local: Vec<BTreeSet<String>>,
}

/// A variable is local to a probability set when it occurs in that set and
/// nowhere else in the rule; every other variable is global.
pub fn classify_variables(rule: RuleRef<'_>) -> VariableClasses {
    let outside = rule.vars_outside_sets();
    let set_vars: Vec<BTreeSet<String>> = rule
        .sets()
        .into_iter()
        .map(|s| {
            let mut vars = BTreeSet::new();
            s.collect_vars(&mut vars);
            vars
        })
        .collect();
    let mut classes = VariableClasses { global: outside.clone(), local: Vec::new() };
    for (i, vars) in set_vars.iter().enumerate() {
        let local: BTreeSet<String> = vars
            .iter()
            .filter(|v| !outside.contains(*v) && set_vars.iter().enumerate().all(|(j, o)| j == i || !o.contains(*v)))
            .cloned()
            .collect();
        classes.global.extend(vars.difference(&local).cloned());
        classes.local.push(local);
    }
    classes
}

fn binding_vars(term: &Term, out: &mut BTreeSet<String>) {
    match term {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Func(_, args) => args.iter().for_each(|a| binding_vars(a, out)),
        Term::Num(_) | Term::Arith(..) => {}
    }
}

/// Variables that a join over `lits` binds: those in argument positions
/// outside arithmetic.
pub fn literal_binding_vars<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for lit in lits {
        lit.args.iter().for_each(|a| binding_vars(a, &mut out));
    }
    out
}

fn positive_literals(body: &[BodyElement]) -> Vec<&Literal> {
    body.iter()
        .filter_map(|b| match b {
            BodyElement::Literal { naf: false, lit } => Some(lit.literal.literals()),
            _ => None,
        })
        .flatten()
        .collect()
}

/// Variables bound by the positive body literals of a rule.
pub fn positive_body_vars(body: &[BodyElement]) -> BTreeSet<String> {
    literal_binding_vars(positive_literals(body))
}

/// The atoms that may be derived, indexed by predicate signature.
#[derive(Debug, Clone, Default)]
pub struct Domain {
    atoms: HashSet<Atom>,
    index: HashMap<(String, bool, usize), Vec<Atom>>,
}

impl Domain {
    pub fn insert(&mut self, atom: Atom) -> bool {
        if self.atoms.contains(&atom) {
            return false;
        }
        self.index
            .entry((atom.predicate.clone(), atom.negated, atom.args.len()))
            .or_default()
            .push(atom.clone());
        self.atoms.insert(atom);
        true
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn candidates(&self, lit: &Literal) -> &[Atom] {
        self.index
            .get(&(lit.predicate.clone(), lit.negated, lit.args.len()))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Possibly derivable atoms of the generator rules of `program`.
    pub fn from_program(program: &Program, cap: usize) -> Result<Domain, GroundError> {
        let mut domain = Domain::default();
        loop {
            let mut changed = false;
            for rule in &program.generator {
                let lits = positive_literals(&rule.body);
                let mut fresh = Vec::new();
                for binding in join(&lits, &domain, Substitution::new()) {
                    let lookup = |v: &str| binding.get(v).cloned();
                    if !comparisons_hold(&rule.body, &lookup) {
                        continue;
                    }
                    for head in &rule.head {
                        let atom = head.literal.eval(&lookup).map_err(|source| term_error(rule, source))?;
                        fresh.push(atom);
                    }
                }
                for atom in fresh {
                    changed |= domain.insert(atom);
                }
                if domain.len() > cap {
                    return Err(GroundError::CapExceeded { cap });
                }
            }
            if !changed {
                return Ok(domain);
            }
        }
    }
}

fn term_error(rule: &impl std::fmt::Display, source: EvalError) -> GroundError {
    GroundError::Term { rule: rule.to_string(), source: Box::new(source) }
}

fn annotation_error(rule: &impl std::fmt::Display, source: AnnotationError) -> GroundError {
    GroundError::Annotation { rule: rule.to_string(), source: Box::new(source) }
}

/// True unless some comparison of the body is false under `lookup`. A
/// comparison that cannot be evaluated counts as holding; instantiation
/// reports it later.
fn comparisons_hold(body: &[BodyElement], lookup: &dyn Fn(&str) -> Option<Value>) -> bool {
    body.iter().all(|b| match b {
        BodyElement::Compare { left, rel, right } => match (left.eval(lookup), right.eval(lookup)) {
            (Ok(l), Ok(r)) => rel.holds(&l, &r),
            _ => true,
        },
        _ => true,
    })
}

fn match_term(term: &Term, value: &Value, binding: &mut Substitution) -> bool {
    match (term, value) {
        (Term::Num(q), Value::Num(v)) => q == v,
        (Term::Var(x), v) => match binding.get(x) {
            Some(bound) => bound == v,
            None => {
                binding.insert(x.clone(), v.clone());
                true
            }
        },
        (Term::Func(name, args), Value::Func(vname, vals)) => {
            name == vname && args.len() == vals.len() && args.iter().zip(vals).all(|(a, v)| match_term(a, v, binding))
        }
        // Arithmetic with unbound variables is checked once the join completes.
        (Term::Arith(..), v) => match term.eval(&|x| binding.get(x).cloned()) {
            Ok(result) => &result == v,
            Err(_) => true,
        },
        _ => false,
    }
}

/// All extensions of `seed` under which every literal of `lits` denotes an
/// atom of `domain`.
fn join(lits: &[&Literal], domain: &Domain, seed: Substitution) -> Vec<Substitution> {
    let mut partial = vec![seed];
    for lit in lits {
        let mut next = Vec::new();
        for binding in &partial {
            for atom in domain.candidates(lit) {
                let mut b = binding.clone();
                if lit.args.iter().zip(&atom.args).all(|(t, v)| match_term(t, v, &mut b)) {
                    next.push(b);
                }
            }
        }
        partial = next;
        if partial.is_empty() {
            break;
        }
    }
    partial.retain(|b| {
        lits.iter().all(|lit| match lit.eval(&|x| b.get(x).cloned()) {
            Ok(atom) => domain.contains(&atom),
            Err(_) => true,
        })
    });
    partial.sort();
    partial.dedup();
    partial
}

/// Instantiates rules under one substitution of their global variables.
struct Instantiator<'a, R> {
    domain: &'a Domain,
    binding: &'a Substitution,
    rule: &'a R,
}

impl<R: std::fmt::Display> Instantiator<'_, R> {
    fn lookup(&self) -> impl Fn(&str) -> Option<Value> + '_ {
        move |v: &str| self.binding.get(v).cloned()
    }

    fn term(&self, t: &Term) -> Result<Term, GroundError> {
        t.eval(&self.lookup()).map(|v| v.to_term()).map_err(|e| term_error(self.rule, e))
    }

    fn literal(&self, lit: &Literal) -> Result<Literal, GroundError> {
        lit.eval(&self.lookup()).map(|a| Literal::from_atom(&a)).map_err(|e| term_error(self.rule, e))
    }

    fn annotation(&self, ann: &AnnotationSpec) -> Result<AnnotationSpec, GroundError> {
        ann.eval(&self.lookup())
            .map(|a| AnnotationSpec::from_annotation(&a))
            .map_err(|e| annotation_error(self.rule, e))
    }

    fn annotated(&self, lit: &AnnotatedLiteral) -> Result<AnnotatedLiteral, GroundError> {
        let literal = match &lit.literal {
            HybridLiteral::Simple(l) => HybridLiteral::Simple(self.literal(l)?),
            HybridLiteral::Conj(ls, s) => HybridLiteral::Conj(self.literals(ls)?, *s),
            HybridLiteral::Disj(ls, s) => HybridLiteral::Disj(self.literals(ls)?, *s),
        };
        Ok(AnnotatedLiteral { literal, annotation: self.annotation(&lit.annotation)? })
    }

    fn literals(&self, ls: &[Literal]) -> Result<Vec<Literal>, GroundError> {
        ls.iter().map(|l| self.literal(l)).collect()
    }

    fn set(&self, set: &ProbabilitySet) -> Result<ProbabilitySet, GroundError> {
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        for element in set.elements.iter() {
            for ground in ground_element(element, self.domain, self.binding, self.rule)? {
                if seen.insert(ground.clone()) {
                    elements.push(ground);
                }
            }
        }
        Ok(ProbabilitySet { elements })
    }

    fn aggregate(&self, agg: &Aggregate) -> Result<Aggregate, GroundError> {
        Ok(Aggregate { function: agg.function, set: self.set(&agg.set)? })
    }

    fn aggregate_atom(&self, atom: &AggregateAtom) -> Result<AggregateAtom, GroundError> {
        Ok(AggregateAtom {
            aggregate: self.aggregate(&atom.aggregate)?,
            relation: atom.relation,
            guard_lo: self.term(&atom.guard_lo)?,
            guard_hi: self.term(&atom.guard_hi)?,
            annotation: self.annotation(&atom.annotation)?,
        })
    }

    fn body(&self, body: &[BodyElement]) -> Result<Vec<BodyElement>, GroundError> {
        body.iter()
            .map(|b| {
                Ok(match b {
                    BodyElement::Literal { naf, lit } => BodyElement::Literal { naf: *naf, lit: self.annotated(lit)? },
                    BodyElement::Aggregate { naf, atom } => {
                        BodyElement::Aggregate { naf: *naf, atom: self.aggregate_atom(atom)? }
                    }
                    BodyElement::Compare { left, rel, right } => {
                        BodyElement::Compare { left: self.term(left)?, rel: *rel, right: self.term(right)? }
                    }
                })
            })
            .collect()
    }

    fn combination(&self, c: &Combination) -> Result<Combination, GroundError> {
        Ok(match c {
            Combination::Leaf(leaf) => Combination::Leaf(match leaf {
                Leaf::Literal { naf, lit } => Leaf::Literal { naf: *naf, lit: self.annotated(lit)? },
                Leaf::Aggregate { naf, atom } => Leaf::Aggregate { naf: *naf, atom: self.aggregate_atom(atom)? },
                Leaf::Optimize(opt) => {
                    Leaf::Optimize(OptAggregate { kind: opt.kind, aggregate: self.aggregate(&opt.aggregate)? })
                }
            }),
            Combination::And(l, r) => Combination::and(self.combination(l)?, self.combination(r)?),
            Combination::Or(l, r) => Combination::or(self.combination(l)?, self.combination(r)?),
        })
    }
}

fn ground_element(
    element: &SetElement,
    domain: &Domain,
    global: &Substitution,
    rule: &impl std::fmt::Display,
) -> Result<Vec<SetElement>, GroundError> {
    let lits: Vec<&Literal> = element.condition.iter().flat_map(|c| c.literal.literals()).collect();
    let mut vars = BTreeSet::new();
    element.collect_vars(&mut vars);
    let bindings =
        if vars.iter().all(|v| global.contains_key(v)) { vec![global.clone()] } else { join(&lits, domain, global.clone()) };
    let mut out = BTreeSet::new();
    for binding in &bindings {
        let inst = Instantiator { domain, binding, rule };
        out.insert(SetElement {
            value: inst.term(&element.value)?,
            annotation: inst.annotation(&element.annotation)?,
            condition: element.condition.iter().map(|c| inst.annotated(c)).collect::<Result<_, _>>()?,
        });
    }
    Ok(out.into_iter().collect())
}

/// Expands a symbolic probability set under a substitution of the rule's
/// global variables; local variables range over `domain`.
pub fn ground_symbolic_set(
    set: &ProbabilitySet,
    domain: &Domain,
    global: &Substitution,
) -> Result<ProbabilitySet, GroundError> {
    let inst = Instantiator { domain, binding: global, rule: set };
    inst.set(set)
}

fn is_ground(rule: RuleRef<'_>) -> bool {
    classify_variables(rule).global.is_empty() && classify_variables(rule).local.iter().all(BTreeSet::is_empty)
}

fn instantiate_generator(
    rule: &GeneratorRule,
    domain: &Domain,
    counter: &AtomicUsize,
    cap: usize,
) -> Result<Vec<GeneratorRule>, GroundError> {
    let bindings = if is_ground(RuleRef::Generator(rule)) {
        vec![Substitution::new()]
    } else {
        join(&positive_literals(&rule.body), domain, Substitution::new())
    };
    if counter.fetch_add(bindings.len(), AtomicOrdering::Relaxed) + bindings.len() > cap {
        return Err(GroundError::CapExceeded { cap });
    }
    let mut out = BTreeSet::new();
    for binding in &bindings {
        let inst = Instantiator { domain, binding, rule };
        let head = rule
            .head
            .iter()
            .map(|h| Ok(HeadAtom { literal: inst.literal(&h.literal)?, annotation: inst.annotation(&h.annotation)? }))
            .collect::<Result<_, GroundError>>()?;
        out.insert(GeneratorRule { head, body: inst.body(&rule.body)? });
    }
    Ok(out.into_iter().collect())
}

fn instantiate_preference(
    rule: &PreferenceRule,
    domain: &Domain,
    counter: &AtomicUsize,
    cap: usize,
) -> Result<Vec<PreferenceRule>, GroundError> {
    let classes = classify_variables(RuleRef::Preference(rule));
    let bindings = if classes.global.is_empty() {
        vec![Substitution::new()]
    } else {
        join(&positive_literals(&rule.body), domain, Substitution::new())
    };
    if counter.fetch_add(bindings.len(), AtomicOrdering::Relaxed) + bindings.len() > cap {
        return Err(GroundError::CapExceeded { cap });
    }
    let mut out = BTreeSet::new();
    for binding in &bindings {
        let inst = Instantiator { domain, binding, rule };
        let head = rule.head.iter().map(|c| inst.combination(c)).collect::<Result<_, _>>()?;
        out.insert(PreferenceRule { head, body: inst.body(&rule.body)? });
    }
    Ok(out.into_iter().collect())
}

fn dedup_in_order<T: Clone + Eq + std::hash::Hash>(groups: Vec<Vec<T>>) -> Vec<T> {
    let mut seen = HashSet::new();
    groups.into_iter().flatten().filter(|r| seen.insert(r.clone())).collect()
}

/// Grounds with the default cap.
pub fn ground_program(program: &Program) -> Result<Program, GroundError> {
    ground_program_with(program, &GroundOptions::default())
}

/// Replaces every rule by its ground instances. Rules keep their source
/// order; the instances of one rule are sorted and exact duplicates removed.
pub fn ground_program_with(program: &Program, options: &GroundOptions) -> Result<Program, GroundError> {
    let domain = Domain::from_program(program, options.cap)?;
    let counter = AtomicUsize::new(0);
    let generator = program
        .generator
        .par_iter()
        .map(|r| instantiate_generator(r, &domain, &counter, options.cap))
        .collect::<Result<Vec<_>, _>>()?;
    let preferences = program
        .preferences
        .par_iter()
        .map(|r| instantiate_preference(r, &domain, &counter, options.cap))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Program {
        generator: dedup_in_order(generator),
        preferences: dedup_in_order(preferences),
        strategies: program.strategies.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_program;

    fn parse(src: &str) -> Program {
        parse_program(src).unwrap()
    }

    fn classes(src: &str) -> VariableClasses {
        let p = parse(src);
        match (p.generator.first(), p.preferences.first()) {
            (_, Some(r)) => classify_variables(RuleRef::Preference(r)),
            (Some(r), None) => classify_variables(RuleRef::Generator(r)),
            _ => panic!("no rule"),
        }
    }

    fn set(vars: &[&str]) -> BTreeSet<String> {
        vars.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn classification_examples() {
        let c = classes("#minx { Cost : 1 | objective(X,Y1,Y2,Cost) } >> .");
        assert!(c.global.is_empty());
        assert_eq!(c.local, vec![set(&["Cost", "X", "Y1", "Y2"])]);

        let c = classes("p(X) :- q(X).");
        assert_eq!(c.global, set(&["X"]));

        let c = classes("#sume{ V : [P,P] | r(V,P) } >= 3 >> :- s(V).");
        assert_eq!(c.global, set(&["V"]));
        assert_eq!(c.local, vec![set(&["P"])]);
    }

    #[test]
    fn symbolic_set_over_domain() {
        let p = parse("d(1,0.5). d(2,0.5). #maxx { X : P | d(X,P) } >> .");
        let domain = Domain::from_program(&p, DEFAULT_CAP).unwrap();
        let Combination::Leaf(Leaf::Optimize(opt)) = &p.preferences[0].head[0] else { panic!() };
        let ground = ground_symbolic_set(&opt.aggregate.set, &domain, &Substitution::new()).unwrap();
        assert_eq!(ground.elements.len(), 2);
        assert_eq!(ground.elements[0].to_string(), "1 : 0.5 | d(1,0.5)");
    }

    #[test]
    fn set_without_locals_is_a_singleton() {
        let p = parse("s(3). #sume { 3 : 1 | s(3) } >= 1 >> .");
        let g = ground_program(&p).unwrap();
        assert_eq!(g.preferences[0].to_string(), "#sume{ 3 : 1 | s(3) } >= 1 >>.");
    }

    #[test]
    fn ground_input_is_unchanged() {
        let src = "a | b:0.5.\nc :- a, not b, 1 < 2.\n:- c, b.\n";
        let p = parse(src);
        assert_eq!(ground_program(&p).unwrap(), p);
    }

    #[test]
    fn false_comparisons_are_kept_and_evaluated() {
        let p = parse("n(1). n(2). big(X) :- n(X), X + 1 > 2.");
        let g = ground_program(&p).unwrap();
        let text: Vec<String> = g.generator.iter().map(|r| r.to_string()).collect();
        assert_eq!(text, vec!["n(1).", "n(2).", "big(1) :- n(1), 2 > 2.", "big(2) :- n(2), 3 > 2."]);
    }

    #[test]
    fn arithmetic_is_folded_in_heads() {
        let p = parse("x(500). y(0). o(X,Y,2*X + 3*0.6*Y) :- x(X), y(Y).");
        let g = ground_program(&p).unwrap();
        assert_eq!(g.generator[2].to_string(), "o(500,0,1000) :- x(500), y(0).");
    }

    #[test]
    fn cap_is_enforced() {
        let p = parse("n(1). n(2). n(3). p(X,Y) :- n(X), n(Y).");
        let err = ground_program_with(&p, &GroundOptions { cap: 5 }).unwrap_err();
        assert_eq!(err, GroundError::CapExceeded { cap: 5 });
    }

    #[test]
    fn grounding_is_idempotent() {
        let p = parse("n(1). n(2). m(X):0.5 | k(X) :- n(X). #minx { X : 1 | m(X) } >> k(1) :- n(1).");
        let once = ground_program(&p).unwrap();
        assert_eq!(ground_program(&once).unwrap(), once);
    }
}
