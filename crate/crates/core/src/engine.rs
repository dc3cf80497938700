//! Enumeration of probability answer sets of a ground generator program.
//!
//! For an interpretation `h`, the reduct `P^h` drops every rule with a
//! negated element or comparison that is false in `h` and deletes the
//! remaining negated elements and comparisons. A selection picks a nonempty
//! subset of every head. `D(Q, sel)` is the least fixpoint in which an atom
//! takes the combination, under its disjunctive p-strategy, of the
//! annotations of its selected head occurrences in rules whose body holds.
//!
//! `h` is a probability answer set iff `h = D(P^h, sel)` for some selection,
//! `h` is consistent, satisfies every rule, and no model `h' = D(P^h, sel')`
//! is smaller: defined on a strict subset of atoms, or on the same atoms
//! with pointwise lower or equal annotations and different from `h`. With
//! all annotations `[1,1]` these are exactly the classical answer sets.
//!
//! The search propagates the fixpoint incrementally and branches lazily on
//! head selections of rules that fire and on the truth of negated elements.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::answer_set::AnswerSet;
use crate::interval::Annotation;
use crate::strategy::PStrategy;
use crate::syntax::{Atom, BodyElement, GeneratorRule, HybridLiteral, Literal, Program};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("rule `{0}` is not ground")]
    NotGround(String),
    #[error("rule `{0}` uses an aggregate; generator rules support literals and comparisons only")]
    Aggregate(String),
    #[error("rule `{0}` has more than 63 head disjuncts")]
    HeadTooWide(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum HybridRef {
    Atom(usize),
    Combined(Vec<usize>, PStrategy),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Condition {
    lit: HybridRef,
    ann: Annotation,
}

#[derive(Debug, Clone)]
struct CompiledRule {
    head: Vec<(usize, Annotation)>,
    positive: Vec<Condition>,
    /// Indices into the interned negated conditions.
    negative: Vec<usize>,
    /// Some comparison of the body is false.
    blocked: bool,
}

type Interp = Vec<Option<Annotation>>;

/// A ground generator program compiled for the search.
#[derive(Debug, Clone)]
pub struct GroundGeneratorProgram {
    atoms: Vec<Atom>,
    strategies: Vec<PStrategy>,
    complements: Vec<Option<usize>>,
    rules: Vec<CompiledRule>,
    negated: Vec<Condition>,
}

struct Interner<'a> {
    program: &'a Program,
    ids: HashMap<Atom, usize>,
    atoms: Vec<Atom>,
}

impl Interner<'_> {
    fn atom(&mut self, atom: Atom) -> usize {
        if let Some(&id) = self.ids.get(&atom) {
            return id;
        }
        self.atoms.push(atom.clone());
        self.ids.insert(atom, self.atoms.len() - 1);
        self.atoms.len() - 1
    }

    fn literal(&mut self, lit: &Literal, rule: &GeneratorRule) -> Result<usize, EngineError> {
        let atom = lit.to_atom().ok_or_else(|| EngineError::NotGround(rule.to_string()))?;
        Ok(self.atom(atom))
    }

    fn hybrid(&mut self, lit: &HybridLiteral, rule: &GeneratorRule) -> Result<HybridRef, EngineError> {
        Ok(match lit {
            HybridLiteral::Simple(l) => HybridRef::Atom(self.literal(l, rule)?),
            HybridLiteral::Conj(ls, s) | HybridLiteral::Disj(ls, s) => {
                let ids = ls.iter().map(|l| self.literal(l, rule)).collect::<Result<_, _>>()?;
                HybridRef::Combined(ids, *s)
            }
        })
    }
}

impl GroundGeneratorProgram {
    pub fn new(program: &Program) -> Result<Self, EngineError> {
        let mut interner = Interner { program, ids: HashMap::new(), atoms: Vec::new() };
        let mut negated_ids: HashMap<Condition, usize> = HashMap::new();
        let mut negated = Vec::new();
        let mut rules = Vec::new();
        for rule in &program.generator {
            let not_ground = || EngineError::NotGround(rule.to_string());
            if rule.head.len() > 63 {
                return Err(EngineError::HeadTooWide(rule.to_string()));
            }
            let mut compiled =
                CompiledRule { head: Vec::new(), positive: Vec::new(), negative: Vec::new(), blocked: false };
            for h in &rule.head {
                let id = interner.literal(&h.literal, rule)?;
                compiled.head.push((id, h.annotation.constant().ok_or_else(not_ground)?));
            }
            for element in &rule.body {
                match element {
                    BodyElement::Literal { naf, lit } => {
                        let cond = Condition {
                            lit: interner.hybrid(&lit.literal, rule)?,
                            ann: lit.annotation.constant().ok_or_else(not_ground)?,
                        };
                        if *naf {
                            let next = negated.len();
                            let id = *negated_ids.entry(cond.clone()).or_insert(next);
                            if id == next {
                                negated.push(cond);
                            }
                            compiled.negative.push(id);
                        } else {
                            compiled.positive.push(cond);
                        }
                    }
                    BodyElement::Compare { left, rel, right } => {
                        let l = left.ground_value().map_err(|_| not_ground())?;
                        let r = right.ground_value().map_err(|_| not_ground())?;
                        compiled.blocked |= !rel.holds(&l, &r);
                    }
                    BodyElement::Aggregate { .. } => return Err(EngineError::Aggregate(rule.to_string())),
                }
            }
            rules.push(compiled);
        }
        let atoms = interner.atoms;
        let strategies = atoms.iter().map(|a| interner.program.strategy_for(a)).collect();
        let complements = atoms.iter().map(|a| interner.ids.get(&a.complement()).copied()).collect();
        Ok(GroundGeneratorProgram { atoms, strategies, complements, rules, negated })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    fn value(&self, lit: &HybridRef, interp: &Interp) -> Option<Annotation> {
        match lit {
            HybridRef::Atom(id) => interp[*id].clone(),
            HybridRef::Combined(ids, s) => {
                let values = ids.iter().map(|id| interp[*id].as_ref()).collect::<Option<Vec<_>>>()?;
                s.combine_all(values)
            }
        }
    }

    fn holds(&self, cond: &Condition, interp: &Interp) -> bool {
        match &cond.lit {
            HybridRef::Atom(id) => interp[*id].as_ref().is_some_and(|v| cond.ann.truth_leq(v)),
            lit => self.value(lit, interp).is_some_and(|v| cond.ann.truth_leq(&v)),
        }
    }

    fn body_holds(&self, rule: &CompiledRule, interp: &Interp) -> bool {
        rule.positive.iter().all(|c| self.holds(c, interp))
    }

    fn consistent(&self, interp: &Interp) -> bool {
        self.complements.iter().enumerate().all(|(id, comp)| match comp {
            Some(c) => interp[id].is_none() || interp[*c].is_none(),
            None => true,
        })
    }

    /// Every rule whose body holds in `interp`, negation and comparisons
    /// included, has a head disjunct `a:mu` with `mu <= interp(a)`;
    /// constraints never have a true body.
    fn is_model(&self, interp: &Interp) -> bool {
        self.rules.iter().all(|rule| {
            let fires = !rule.blocked
                && self.body_holds(rule, interp)
                && rule.negative.iter().all(|&n| !self.holds(&self.negated[n], interp));
            !fires || rule.head.iter().any(|(id, mu)| interp[*id].as_ref().is_some_and(|v| mu.truth_leq(v)))
        })
    }

    /// Rules kept by the reduct with respect to `h`.
    fn reduct(&self, h: &Interp) -> Vec<bool> {
        self.rules
            .iter()
            .map(|r| !r.blocked && r.negative.iter().all(|&n| !self.holds(&self.negated[n], h)))
            .collect()
    }

    fn to_interp(&self, h: &AnswerSet) -> Option<Interp> {
        let ids: HashMap<&Atom, usize> = self.atoms.iter().enumerate().map(|(i, a)| (a, i)).collect();
        let mut interp = vec![None; self.atoms.len()];
        for (atom, ann) in h.iter() {
            interp[*ids.get(atom)?] = Some(ann.clone());
        }
        Some(interp)
    }

    fn to_answer_set(&self, interp: &Interp) -> AnswerSet {
        interp
            .iter()
            .enumerate()
            .filter_map(|(id, v)| v.as_ref().map(|v| (self.atoms[id].clone(), v.clone())))
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Decisions {
    negated: Vec<Option<bool>>,
    selection: Vec<Option<u64>>,
}

enum Fire {
    No,
    Yes,
    Pending(usize),
}

enum Branch {
    Negated(usize),
    Select(usize, Vec<u64>),
}

/// What the search is looking for.
enum Mode<'a> {
    /// Candidates of the whole program; branches on negated elements.
    Candidates,
    /// Fixpoints of the reduct whose atoms all lie in `allowed`.
    Reduct { active: &'a [bool], allowed: &'a [bool] },
}

struct Search<'a> {
    program: &'a GroundGeneratorProgram,
    mode: Mode<'a>,
}

fn nonempty_masks(occurrences: &[usize]) -> Vec<u64> {
    let n = occurrences.len();
    (1u64..(1u64 << n))
        .map(|bits| (0..n).filter(|i| bits & (1 << i) != 0).fold(0u64, |m, i| m | (1 << occurrences[i])))
        .collect()
}

impl<'a> Search<'a> {
    fn fire(&self, r: usize, interp: &Interp, decisions: &Decisions) -> Fire {
        let rule = &self.program.rules[r];
        match self.mode {
            Mode::Reduct { active, .. } => {
                if active[r] && self.program.body_holds(rule, interp) {
                    Fire::Yes
                } else {
                    Fire::No
                }
            }
            Mode::Candidates => {
                if rule.blocked || rule.negative.iter().any(|&n| decisions.negated[n] == Some(false)) {
                    return Fire::No;
                }
                if !self.program.body_holds(rule, interp) {
                    return Fire::No;
                }
                match rule.negative.iter().find(|&&n| decisions.negated[n].is_none()) {
                    Some(&n) => Fire::Pending(n),
                    None => Fire::Yes,
                }
            }
        }
    }

    fn selected(&self, r: usize, decisions: &Decisions) -> Option<u64> {
        let rule = &self.program.rules[r];
        if rule.head.len() == 1 {
            Some(1)
        } else {
            decisions.selection[r]
        }
    }

    fn step(&self, interp: &Interp, decisions: &Decisions) -> Interp {
        let mut contributions: Vec<Vec<&Annotation>> = vec![Vec::new(); interp.len()];
        for (r, rule) in self.program.rules.iter().enumerate() {
            if rule.head.is_empty() || !matches!(self.fire(r, interp, decisions), Fire::Yes) {
                continue;
            }
            let Some(mask) = self.selected(r, decisions) else { continue };
            for (i, (id, ann)) in rule.head.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    contributions[*id].push(ann);
                }
            }
        }
        contributions
            .into_iter()
            .enumerate()
            .map(|(id, c)| self.program.strategies[id].combine_all(c))
            .collect()
    }

    fn fixpoint(&self, mut interp: Interp, decisions: &Decisions) -> Interp {
        loop {
            let next = self.step(&interp, decisions);
            if next == interp {
                return interp;
            }
            interp = next;
        }
    }

    fn pruned(&self, interp: &Interp, decisions: &Decisions) -> bool {
        if !self.program.consistent(interp) {
            return true;
        }
        if let Mode::Reduct { allowed, .. } = self.mode {
            if interp.iter().zip(allowed).any(|(v, ok)| v.is_some() && !ok) {
                return true;
            }
        }
        if let Mode::Candidates = self.mode {
            let violated = decisions
                .negated
                .iter()
                .enumerate()
                .any(|(n, d)| *d == Some(true) && self.program.holds(&self.program.negated[n], interp));
            if violated {
                return true;
            }
        }
        self.program
            .rules
            .iter()
            .enumerate()
            .any(|(r, rule)| rule.head.is_empty() && matches!(self.fire(r, interp, decisions), Fire::Yes))
    }

    fn branch_point(&self, interp: &Interp, decisions: &Decisions) -> Option<Branch> {
        let mut selection = None;
        for (r, rule) in self.program.rules.iter().enumerate() {
            match self.fire(r, interp, decisions) {
                Fire::Pending(n) => return Some(Branch::Negated(n)),
                Fire::Yes if selection.is_none() && rule.head.len() > 1 && decisions.selection[r].is_none() => {
                    let occurrences: Vec<usize> = match self.mode {
                        Mode::Reduct { allowed, .. } => {
                            (0..rule.head.len()).filter(|&i| allowed[rule.head[i].0]).collect()
                        }
                        Mode::Candidates => (0..rule.head.len()).collect(),
                    };
                    selection = Some(Branch::Select(r, nonempty_masks(&occurrences)));
                }
                _ => {}
            }
        }
        selection
    }

    /// Depth-first search; `leaf` returns `true` to stop early. Returns
    /// `true` when stopped.
    fn run(&self, interp: Interp, decisions: Decisions, leaf: &mut dyn FnMut(&Interp, &Decisions) -> bool) -> bool {
        let interp = self.fixpoint(interp, &decisions);
        if self.pruned(&interp, &decisions) {
            return false;
        }
        match self.branch_point(&interp, &decisions) {
            None => leaf(&interp, &decisions),
            Some(branch) => self.children(&decisions, branch).into_iter().any(|d| self.run(interp.clone(), d, leaf)),
        }
    }

    fn children(&self, decisions: &Decisions, branch: Branch) -> Vec<Decisions> {
        match branch {
            Branch::Negated(n) => [true, false]
                .into_iter()
                .map(|value| {
                    let mut d = decisions.clone();
                    d.negated[n] = Some(value);
                    d
                })
                .collect(),
            Branch::Select(r, masks) => masks
                .into_iter()
                .map(|mask| {
                    let mut d = decisions.clone();
                    d.selection[r] = Some(mask);
                    d
                })
                .collect(),
        }
    }

    /// Collects leaves, splitting the first levels of the tree across threads.
    fn collect(&self, interp: Interp, decisions: Decisions, depth: usize) -> Vec<(Interp, Decisions)> {
        let interp = self.fixpoint(interp, &decisions);
        if self.pruned(&interp, &decisions) {
            return Vec::new();
        }
        match self.branch_point(&interp, &decisions) {
            None => vec![(interp, decisions)],
            Some(branch) if depth < 2 => self
                .children(&decisions, branch)
                .into_par_iter()
                .flat_map_iter(|d| self.collect(interp.clone(), d, depth + 1))
                .collect(),
            Some(branch) => {
                let mut out = Vec::new();
                for d in self.children(&decisions, branch) {
                    self.run(interp.clone(), d, &mut |i, d| {
                        out.push((i.clone(), d.clone()));
                        false
                    });
                }
                out
            }
        }
    }
}

impl GroundGeneratorProgram {
    fn empty_decisions(&self) -> Decisions {
        Decisions { negated: vec![None; self.negated.len()], selection: vec![None; self.rules.len()] }
    }

    fn empty_interp(&self) -> Interp {
        vec![None; self.atoms.len()]
    }

    /// Leaves of the candidate search whose negation guesses agree with the
    /// fixpoint, i.e. interpretations with `h = D(P^h, sel)`.
    fn candidates(&self) -> Vec<Interp> {
        let search = Search { program: self, mode: Mode::Candidates };
        let mut found: Vec<Interp> = search
            .collect(self.empty_interp(), self.empty_decisions(), 0)
            .into_iter()
            .filter(|(interp, decisions)| {
                decisions.negated.iter().enumerate().all(|(n, d)| match d {
                    Some(guess) => *guess != self.holds(&self.negated[n], interp),
                    None => true,
                })
            })
            .map(|(interp, _)| interp)
            .collect();
        found.sort();
        found.dedup();
        found
    }

    /// Searches the fixpoints `D(P^h, sel)` over atoms defined in `h`.
    fn reduct_search(&self, h: &Interp, leaf: &mut dyn FnMut(&Interp) -> bool) -> bool {
        let active = self.reduct(h);
        let allowed: Vec<bool> = h.iter().map(Option::is_some).collect();
        let search = Search { program: self, mode: Mode::Reduct { active: &active, allowed: &allowed } };
        search.run(self.empty_interp(), self.empty_decisions(), &mut |i, _| leaf(i))
    }

    /// True when some model of the reduct derived by a selection is
    /// strictly smaller than `h`.
    fn has_smaller_model(&self, h: &Interp) -> bool {
        self.reduct_search(h, &mut |candidate| smaller(candidate, h))
    }

    fn is_derivable(&self, h: &Interp) -> bool {
        self.reduct_search(h, &mut |candidate| candidate == h)
    }
}

/// `a < b`: defined on a strict subset of `b`'s atoms, or on the same atoms
/// with pointwise lower or equal annotations and not equal.
fn smaller(a: &Interp, b: &Interp) -> bool {
    let subset = a.iter().zip(b).all(|(x, y)| x.is_none() || y.is_some());
    if !subset {
        return false;
    }
    let same_domain = a.iter().zip(b).all(|(x, y)| x.is_some() == y.is_some());
    if !same_domain {
        return true;
    }
    a != b && a.iter().zip(b).all(|(x, y)| match (x, y) {
        (Some(x), Some(y)) => x.truth_leq(y),
        _ => true,
    })
}

/// All probability answer sets, in canonical order with indices `1..=n`.
pub fn enumerate_answer_sets(program: &GroundGeneratorProgram) -> Vec<AnswerSet> {
    let mut answer_sets: Vec<AnswerSet> = program
        .candidates()
        .into_par_iter()
        .filter(|h| program.is_model(h) && !program.has_smaller_model(h))
        .map(|h| program.to_answer_set(&h))
        .collect();
    answer_sets.sort();
    answer_sets.into_iter().enumerate().map(|(i, h)| h.with_index(i + 1)).collect()
}

/// Number of interpretations passing the fixpoint, consistency and
/// constraint conditions before the minimality check.
pub fn candidate_count(program: &GroundGeneratorProgram) -> usize {
    program.candidates().len()
}

/// `true` iff the body of `rule` is false in `h` or some head disjunct
/// `a:mu` has `mu <= h(a)`. Constraints hold iff their body is false.
pub fn satisfies_rule(h: &AnswerSet, rule: &GeneratorRule) -> bool {
    let body = rule.body.iter().all(|element| match element {
        BodyElement::Literal { naf, lit } => h.satisfies(lit, *naf),
        BodyElement::Compare { left, rel, right } => match (left.ground_value(), right.ground_value()) {
            (Ok(l), Ok(r)) => rel.holds(&l, &r),
            _ => false,
        },
        BodyElement::Aggregate { .. } => false,
    });
    !body
        || rule.head.iter().any(|head| match (h.literal_value(&head.literal), head.annotation.constant()) {
            (Some(value), Some(mu)) => mu.truth_leq(value),
            _ => false,
        })
}

/// Candidate annotations of each atom: the combinations, under the atom's
/// strategy, of nonempty sub-multisets of its head annotations.
fn candidate_annotations(program: &GroundGeneratorProgram) -> Vec<Vec<Annotation>> {
    let mut occurrences: Vec<Vec<Annotation>> = vec![Vec::new(); program.atoms.len()];
    for rule in &program.rules {
        for (id, ann) in &rule.head {
            occurrences[*id].push(ann.clone());
        }
    }
    occurrences
        .iter()
        .enumerate()
        .map(|(id, anns)| {
            let n = anns.len().min(16);
            let mut values: Vec<Annotation> = (1u32..(1 << n))
                .filter_map(|bits| {
                    program.strategies[id].combine_all((0..n).filter(|i| bits & (1 << i) != 0).map(|i| &anns[i]))
                })
                .collect();
            values.sort();
            values.dedup();
            values
        })
        .collect()
}

/// Independent check of the answer set conditions. Minimality is verified
/// by brute force over every smaller interpretation built from candidate
/// annotations.
pub fn check_answer_set(h: &AnswerSet, program: &GroundGeneratorProgram) -> bool {
    let Some(interp) = program.to_interp(h) else {
        return false;
    };
    if !program.consistent(&interp) || !program.is_model(&interp) || !program.is_derivable(&interp) {
        return false;
    }
    let candidates = candidate_annotations(program);
    let defined: Vec<usize> = (0..interp.len()).filter(|&i| interp[i].is_some()).collect();
    let active = program.reduct(&interp);
    let mut smaller_found = false;
    let mut current = program.empty_interp();
    enumerate_sub(&defined, &candidates, &mut current, &mut |candidate| {
        if smaller(candidate, &interp)
            && program.rules.iter().zip(&active).all(|(rule, keep)| {
                !keep
                    || !program.body_holds(rule, candidate)
                    || rule.head.iter().any(|(id, mu)| candidate[*id].as_ref().is_some_and(|v| mu.truth_leq(v)))
            })
            && program.is_derivable_for(&interp, candidate)
        {
            smaller_found = true;
        }
        smaller_found
    });
    !smaller_found
}

fn enumerate_sub(
    atoms: &[usize],
    candidates: &[Vec<Annotation>],
    current: &mut Interp,
    visit: &mut dyn FnMut(&Interp) -> bool,
) -> bool {
    let Some((&first, rest)) = atoms.split_first() else {
        return visit(current);
    };
    current[first] = None;
    if enumerate_sub(rest, candidates, current, visit) {
        return true;
    }
    for value in &candidates[first] {
        current[first] = Some(value.clone());
        if enumerate_sub(rest, candidates, current, visit) {
            return true;
        }
    }
    current[first] = None;
    false
}

impl GroundGeneratorProgram {
    /// Whether `candidate = D(P^h, sel)` for some selection.
    fn is_derivable_for(&self, h: &Interp, candidate: &Interp) -> bool {
        let active = self.reduct(h);
        let allowed: Vec<bool> = candidate.iter().map(Option::is_some).collect();
        let search = Search { program: self, mode: Mode::Reduct { active: &active, allowed: &allowed } };
        search.run(self.empty_interp(), self.empty_decisions(), &mut |i, _| i == candidate)
    }
}

/// Convenience wrapper: compile and enumerate.
pub fn solve(program: &Program) -> Result<Vec<AnswerSet>, EngineError> {
    Ok(enumerate_answer_sets(&GroundGeneratorProgram::new(program)?))
}
