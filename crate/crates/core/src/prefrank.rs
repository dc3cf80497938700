//! Preference ranking of answer sets.
//!
//! Satisfaction of preference rule heads and bodies, satisfaction degrees,
//! and the comparisons per combination, per rule, and over a rule set
//! (Pareto or Maximal).

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::aggregates::{atom_holds, build_multiset, eval_aggregate, AggregateResult};
use crate::answer_set::AnswerSet;
use crate::syntax::{
    Aggregate, AggregateAtom, AggregateFamily, AnnotatedLiteral, BodyElement, Combination, HybridLiteral, Leaf,
    OptAggregate, OptKind, PreferenceRule,
};

/// Outcome of comparing `h1` with `h2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ordering {
    Better,
    Equal,
    Worse,
    Incomparable,
}

impl Ordering {
    pub fn reverse(self) -> Ordering {
        match self {
            Ordering::Better => Ordering::Worse,
            Ordering::Worse => Ordering::Better,
            other => other,
        }
    }

    /// `h1` is at least as preferred as `h2`.
    pub fn at_least(self) -> bool {
        matches!(self, Ordering::Better | Ordering::Equal)
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Better => "better",
            Ordering::Equal => "equal",
            Ordering::Worse => "worse",
            Ordering::Incomparable => "incomparable",
        })
    }
}

/// How well an answer set satisfies a preference rule: the 1-based position
/// of the first satisfied head combination, or irrelevant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SatisfactionDegree {
    Index(usize),
    Irrelevant,
}

impl fmt::Display for SatisfactionDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatisfactionDegree::Index(i) => write!(f, "{i}"),
            SatisfactionDegree::Irrelevant => f.write_str("irr"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Pareto,
    Maximal,
}

impl Mode {
    pub fn compare(self, h1: &AnswerSet, h2: &AnswerSet, rules: &[PreferenceRule], ctx: &EvaluationContext) -> Ordering {
        match self {
            Mode::Pareto => pareto_compare(h1, h2, rules, ctx),
            Mode::Maximal => maximal_compare(h1, h2, rules, ctx),
        }
    }
}

fn key<T>(item: &T) -> usize {
    item as *const T as usize
}

/// The answer-set pool plus per-member caches of aggregate results,
/// optimization-aggregate satisfaction and rule degrees.
///
/// Caches are keyed by the address of the ground aggregate or rule, so they
/// only apply to the rule slice passed to [`EvaluationContext::new`]; anything
/// else is evaluated on demand with the same result.
pub struct EvaluationContext<'a> {
    pool: &'a [AnswerSet],
    positions: HashMap<usize, usize>,
    aggregates: HashMap<usize, Vec<AggregateResult>>,
    optimum: HashMap<usize, Vec<bool>>,
    degrees: HashMap<usize, Vec<SatisfactionDegree>>,
}

impl<'a> EvaluationContext<'a> {
    pub fn new(pool: &'a [AnswerSet], rules: &[PreferenceRule]) -> Self {
        let mut ctx = EvaluationContext {
            pool,
            positions: pool.iter().enumerate().map(|(pos, h)| (h.index, pos)).collect(),
            aggregates: HashMap::new(),
            optimum: HashMap::new(),
            degrees: HashMap::new(),
        };
        let mut aggregates: Vec<&Aggregate> = Vec::new();
        let mut opts: Vec<&OptAggregate> = Vec::new();
        for rule in rules {
            for b in &rule.body {
                if let BodyElement::Aggregate { atom, .. } = b {
                    aggregates.push(&atom.aggregate);
                }
            }
            for leaf in rule.head.iter().flat_map(Combination::leaves) {
                match leaf {
                    Leaf::Aggregate { atom, .. } => aggregates.push(&atom.aggregate),
                    Leaf::Optimize(opt) => {
                        aggregates.push(&opt.aggregate);
                        opts.push(opt);
                    }
                    Leaf::Literal { .. } => {}
                }
            }
        }
        let results: Vec<(usize, Vec<AggregateResult>)> = aggregates
            .par_iter()
            .map(|agg| (key(*agg), pool.iter().map(|h| fresh_result(agg, h)).collect()))
            .collect();
        ctx.aggregates.extend(results);
        let optimum: Vec<(usize, Vec<bool>)> = opts
            .iter()
            .map(|opt| {
                let values = &ctx.aggregates[&key(&opt.aggregate)];
                let holds = values.iter().map(|mine| opt_holds(opt.kind, mine, values.iter())).collect();
                (key(*opt), holds)
            })
            .collect();
        ctx.optimum.extend(optimum);
        let degrees: Vec<(usize, Vec<SatisfactionDegree>)> = rules
            .par_iter()
            .map(|rule| (key(rule), pool.iter().map(|h| satisfaction_degree(h, rule, &ctx)).collect()))
            .collect();
        ctx.degrees.extend(degrees);
        ctx
    }

    pub fn pool(&self) -> &'a [AnswerSet] {
        self.pool
    }

    fn position(&self, h: &AnswerSet) -> Option<usize> {
        let pos = *self.positions.get(&h.index)?;
        (std::ptr::eq(&self.pool[pos], h) || self.pool[pos] == *h).then_some(pos)
    }

    /// The value of `agg` in `h`.
    pub fn aggregate_result(&self, h: &AnswerSet, agg: &Aggregate) -> AggregateResult {
        if let (Some(pos), Some(values)) = (self.position(h), self.aggregates.get(&key(agg))) {
            return values[pos].clone();
        }
        fresh_result(agg, h)
    }

    fn opt_satisfied(&self, h: &AnswerSet, opt: &OptAggregate) -> bool {
        if let (Some(pos), Some(holds)) = (self.position(h), self.optimum.get(&key(opt))) {
            return holds[pos];
        }
        let mine = self.aggregate_result(h, &opt.aggregate);
        let others: Vec<AggregateResult> = self.pool.iter().map(|o| self.aggregate_result(o, &opt.aggregate)).collect();
        opt_holds(opt.kind, &mine, others.iter())
    }

    fn cached_degree(&self, h: &AnswerSet, rule: &PreferenceRule) -> Option<SatisfactionDegree> {
        Some(self.degrees.get(&key(rule))?[self.position(h)?])
    }
}

fn fresh_result(agg: &Aggregate, h: &AnswerSet) -> AggregateResult {
    eval_aggregate(agg.function, &build_multiset(&agg.set, h))
}

/// `mine` is defined and no defined value in the pool improves on it.
fn opt_holds<'b>(kind: OptKind, mine: &AggregateResult, pool: impl Iterator<Item = &'b AggregateResult>) -> bool {
    if !mine.is_defined() {
        return false;
    }
    pool.filter(|other| other.is_defined()).all(|other| {
        let (low, high) = if kind.maximizes() { (other, mine) } else { (mine, other) };
        match (kind, low, high) {
            (OptKind::Max | OptKind::Min, AggregateResult::Interval(l), AggregateResult::Interval(h)) => l.truth_leq(h),
            (OptKind::MaxMu | OptKind::MinMu, AggregateResult::Pair(_, l), AggregateResult::Pair(_, h)) => l.truth_leq(h),
            (OptKind::MaxX | OptKind::MinX, AggregateResult::Pair(l, _), AggregateResult::Pair(h, _)) => l <= h,
            (OptKind::MaxXMu | OptKind::MinXMu, AggregateResult::Pair(lx, lm), AggregateResult::Pair(hx, hm)) => {
                lx <= hx && lm.truth_leq(hm)
            }
            _ => false,
        }
    })
}

/// `L:mu` (or `not L:mu` when `negated`) in `h`.
pub fn satisfies_annotated_literal(h: &AnswerSet, lit: &AnnotatedLiteral, negated: bool) -> bool {
    h.satisfies(lit, negated)
}

fn satisfies_aggregate_atom(h: &AnswerSet, atom: &AggregateAtom, naf: bool, ctx: &EvaluationContext) -> bool {
    atom_holds(atom, &ctx.aggregate_result(h, &atom.aggregate)) != naf
}

/// Whether `h` is optimal for `opt` among the context's pool.
pub fn satisfies_opt_aggregate(h: &AnswerSet, opt: &OptAggregate, ctx: &EvaluationContext) -> bool {
    ctx.opt_satisfied(h, opt)
}

fn satisfies_leaf(h: &AnswerSet, leaf: &Leaf, ctx: &EvaluationContext) -> bool {
    match leaf {
        Leaf::Literal { naf, lit } => satisfies_annotated_literal(h, lit, *naf),
        Leaf::Aggregate { naf, atom } => satisfies_aggregate_atom(h, atom, *naf, ctx),
        Leaf::Optimize(opt) => satisfies_opt_aggregate(h, opt, ctx),
    }
}

pub fn satisfies_combination(h: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    match c {
        Combination::Leaf(leaf) => satisfies_leaf(h, leaf, ctx),
        Combination::And(a, b) => satisfies_combination(h, a, ctx) && satisfies_combination(h, b, ctx),
        Combination::Or(a, b) => satisfies_combination(h, a, ctx) || satisfies_combination(h, b, ctx),
    }
}

pub fn satisfies_body(h: &AnswerSet, body: &[BodyElement], ctx: &EvaluationContext) -> bool {
    body.iter().all(|b| match b {
        BodyElement::Literal { naf, lit } => satisfies_annotated_literal(h, lit, *naf),
        BodyElement::Aggregate { naf, atom } => satisfies_aggregate_atom(h, atom, *naf, ctx),
        BodyElement::Compare { left, rel, right } => match (left.ground_value(), right.ground_value()) {
            (Ok(l), Ok(r)) => rel.holds(&l, &r),
            _ => false,
        },
    })
}

pub fn satisfaction_degree(h: &AnswerSet, rule: &PreferenceRule, ctx: &EvaluationContext) -> SatisfactionDegree {
    if let Some(d) = ctx.cached_degree(h, rule) {
        return d;
    }
    if !satisfies_body(h, &rule.body, ctx) {
        return SatisfactionDegree::Irrelevant;
    }
    rule.head
        .iter()
        .position(|c| satisfies_combination(h, c, ctx))
        .map_or(SatisfactionDegree::Irrelevant, |i| SatisfactionDegree::Index(i + 1))
}

fn literal_value(h: &AnswerSet, lit: &HybridLiteral) -> Option<crate::interval::Annotation> {
    h.hybrid_value(lit)
}

/// The strict-preference clause for two answer sets that both satisfy `c`.
fn better_when_both_hold(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    match c {
        Combination::Leaf(Leaf::Literal { naf, lit }) => {
            let (v1, v2) = (literal_value(h1, &lit.literal), literal_value(h2, &lit.literal));
            match (v1, v2, naf) {
                (Some(v1), Some(v2), false) => v2.truth_lt(&v1),
                (Some(v1), Some(v2), true) => v1.truth_lt(&v2),
                (None, Some(_), true) => true,
                _ => false,
            }
        }
        Combination::Leaf(Leaf::Aggregate { naf, atom }) => {
            let r1 = ctx.aggregate_result(h1, &atom.aggregate);
            let r2 = ctx.aggregate_result(h2, &atom.aggregate);
            match (r1, r2, naf) {
                (AggregateResult::Interval(x1), AggregateResult::Interval(x2), false) => x2.truth_lt(&x1),
                (AggregateResult::Interval(x1), AggregateResult::Interval(x2), true) => x1.truth_lt(&x2),
                (AggregateResult::Pair(_, n1), AggregateResult::Pair(_, n2), false) => n2.truth_lt(&n1),
                (AggregateResult::Pair(_, n1), AggregateResult::Pair(_, n2), true) => n1.truth_lt(&n2),
                (AggregateResult::Undefined, r2, true) => r2.is_defined(),
                _ => false,
            }
        }
        Combination::Leaf(Leaf::Optimize(_)) => false,
        Combination::And(a, b) | Combination::Or(a, b) => {
            let parts = [a.as_ref(), b.as_ref()];
            (0..parts.len()).any(|t| {
                better(h1, h2, parts[t], ctx)
                    && parts.iter().enumerate().filter(|(u, _)| *u != t).all(|(_, p)| at_least(h1, h2, p, ctx))
            })
        }
    }
}

/// The equal-preference clause for two answer sets that both satisfy `c`.
fn equal_when_both_hold(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    match c {
        Combination::Leaf(Leaf::Literal { naf, lit }) => {
            let (v1, v2) = (literal_value(h1, &lit.literal), literal_value(h2, &lit.literal));
            match (v1, v2) {
                (Some(v1), Some(v2)) => v1 == v2,
                (None, None) => *naf,
                _ => false,
            }
        }
        Combination::Leaf(Leaf::Aggregate { naf, atom }) => {
            let r1 = ctx.aggregate_result(h1, &atom.aggregate);
            let r2 = ctx.aggregate_result(h2, &atom.aggregate);
            let family = atom.aggregate.function.family();
            match (r1, r2) {
                (AggregateResult::Undefined, AggregateResult::Undefined) => *naf,
                (AggregateResult::Interval(x1), AggregateResult::Interval(x2)) => {
                    family == AggregateFamily::Expectation && x1 == x2
                }
                (AggregateResult::Pair(_, n1), AggregateResult::Pair(_, n2)) => family == AggregateFamily::Pair && n1 == n2,
                _ => false,
            }
        }
        Combination::Leaf(Leaf::Optimize(_)) => true,
        Combination::And(a, b) => equal(h1, h2, a, ctx) && equal(h1, h2, b, ctx),
        Combination::Or(a, b) => {
            let forward = [a, b].iter().filter(|p| at_least(h1, h2, p, ctx)).count();
            let backward = [a, b].iter().filter(|p| at_least(h2, h1, p, ctx)).count();
            forward == backward
        }
    }
}

fn better(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    match (satisfies_combination(h1, c, ctx), satisfies_combination(h2, c, ctx)) {
        (true, false) => true,
        (true, true) => better_when_both_hold(h1, h2, c, ctx),
        _ => false,
    }
}

fn equal(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    match (satisfies_combination(h1, c, ctx), satisfies_combination(h2, c, ctx)) {
        (false, false) => true,
        (true, true) => equal_when_both_hold(h1, h2, c, ctx),
        _ => false,
    }
}

fn at_least(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> bool {
    better(h1, h2, c, ctx) || equal(h1, h2, c, ctx)
}

pub fn compare_combination(h1: &AnswerSet, h2: &AnswerSet, c: &Combination, ctx: &EvaluationContext) -> Ordering {
    if better(h1, h2, c, ctx) {
        Ordering::Better
    } else if better(h2, h1, c, ctx) {
        Ordering::Worse
    } else if equal(h1, h2, c, ctx) {
        Ordering::Equal
    } else {
        Ordering::Incomparable
    }
}

pub fn compare_rule(h1: &AnswerSet, h2: &AnswerSet, rule: &PreferenceRule, ctx: &EvaluationContext) -> Ordering {
    use SatisfactionDegree::*;
    match (satisfaction_degree(h1, rule, ctx), satisfaction_degree(h2, rule, ctx)) {
        (Index(i), Index(j)) if i < j => Ordering::Better,
        (Index(i), Index(j)) if i > j => Ordering::Worse,
        (Index(i), Index(_)) => compare_combination(h1, h2, &rule.head[i - 1], ctx),
        (Index(_), Irrelevant) => Ordering::Better,
        (Irrelevant, Index(_)) => Ordering::Worse,
        (Irrelevant, Irrelevant) => Ordering::Equal,
    }
}

pub fn pareto_compare(h1: &AnswerSet, h2: &AnswerSet, rules: &[PreferenceRule], ctx: &EvaluationContext) -> Ordering {
    let per_rule: Vec<Ordering> = rules.iter().map(|r| compare_rule(h1, h2, r, ctx)).collect();
    if per_rule.iter().all(|o| *o == Ordering::Equal) {
        Ordering::Equal
    } else if per_rule.iter().all(|o| o.at_least()) {
        Ordering::Better
    } else if per_rule.iter().all(|o| o.reverse().at_least()) {
        Ordering::Worse
    } else {
        Ordering::Incomparable
    }
}

pub fn maximal_compare(h1: &AnswerSet, h2: &AnswerSet, rules: &[PreferenceRule], ctx: &EvaluationContext) -> Ordering {
    let per_rule: Vec<Ordering> = rules.iter().map(|r| compare_rule(h1, h2, r, ctx)).collect();
    let forward = per_rule.iter().filter(|o| o.at_least()).count();
    let backward = per_rule.iter().filter(|o| o.reverse().at_least()).count();
    match forward.cmp(&backward) {
        std::cmp::Ordering::Greater => Ordering::Better,
        std::cmp::Ordering::Equal => Ordering::Equal,
        std::cmp::Ordering::Less => Ordering::Worse,
    }
}

/// One layer of the ranking. Each group holds mutually equal answer sets,
/// identified by their indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Front {
    pub groups: Vec<Vec<usize>>,
}

impl Front {
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.groups.iter().flatten().copied()
    }
}

/// Full comparison matrix over the pool, by pool position.
pub fn comparison_matrix(rules: &[PreferenceRule], mode: Mode, ctx: &EvaluationContext) -> Vec<Vec<Ordering>> {
    let pool = ctx.pool();
    let n = pool.len();
    let upper: Vec<Vec<Ordering>> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| mode.compare(&pool[i], &pool[j], rules, ctx)).collect())
        .collect();
    let mut matrix = vec![vec![Ordering::Equal; n]; n];
    for (i, row) in upper.into_iter().enumerate() {
        for (offset, o) in row.into_iter().enumerate() {
            let j = i + 1 + offset;
            matrix[i][j] = o;
            matrix[j][i] = o.reverse();
        }
    }
    matrix
}

/// Stratifies the pool into fronts: each front holds the remaining answer
/// sets that are not worse than any other remaining one.
pub fn rank_with(rules: &[PreferenceRule], mode: Mode, ctx: &EvaluationContext) -> Vec<Front> {
    let pool = ctx.pool();
    let matrix = comparison_matrix(rules, mode, ctx);
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by_key(|&p| pool[p].index);
    let mut remaining = order;
    let mut fronts = Vec::new();
    while !remaining.is_empty() {
        let dominators =
            |p: usize| remaining.iter().filter(|&&q| matrix[p][q] == Ordering::Worse).count();
        let counts: Vec<usize> = remaining.iter().map(|&p| dominators(p)).collect();
        let fewest = *counts.iter().min().expect("nonempty");
        let pick = |keep: bool| -> Vec<usize> {
            remaining.iter().zip(&counts).filter(|(_, &c)| (c == fewest) == keep).map(|(&p, _)| p).collect()
        };
        let (front, rest) = (pick(true), pick(false));
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for p in front {
            match groups.iter_mut().find(|g| matrix[g[0]][p] == Ordering::Equal) {
                Some(g) => g.push(p),
                None => groups.push(vec![p]),
            }
        }
        fronts.push(Front { groups: groups.into_iter().map(|g| g.into_iter().map(|p| pool[p].index).collect()).collect() });
        remaining = rest;
    }
    fronts
}

pub fn rank(pool: &[AnswerSet], rules: &[PreferenceRule], mode: Mode) -> Vec<Front> {
    let ctx = EvaluationContext::new(pool, rules);
    rank_with(rules, mode, &ctx)
}
