//! Abstract syntax of probability answer set optimization programs.
//!
//! The same tree is used before and after grounding; a ground program simply
//! has no variables left and only constant annotation items.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::interval::Annotation;
use crate::rational::Rational;
use crate::strategy::PStrategy;

/// A ground value of the Herbrand universe.
///
/// Symbolic constants are function values with no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Num(Rational),
    Func(String, Vec<Value>),
}

impl Value {
    pub fn sym(name: &str) -> Value {
        Value::Func(name.to_string(), Vec::new())
    }

    pub fn as_num(&self) -> Option<&Rational> {
        match self {
            Value::Num(q) => Some(q),
            Value::Func(..) => None,
        }
    }

    pub fn to_term(&self) -> Term {
        match self {
            Value::Num(q) => Term::Num(q.clone()),
            Value::Func(name, args) => Term::Func(name.clone(), args.iter().map(Value::to_term).collect()),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Num(Rational::from_integer(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Num(Rational),
    Var(String),
    Func(String, Vec<Term>),
    Arith(ArithOp, Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is not bound")]
    Unbound(String),
    #[error("arithmetic on non-numeric value {0}")]
    NotNumeric(String),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn sym(name: &str) -> Term {
        Term::Func(name.to_string(), Vec::new())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Num(_) => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Func(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            Term::Arith(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn is_ground(&self) -> bool {
        let mut vars = BTreeSet::new();
        self.collect_vars(&mut vars);
        vars.is_empty()
    }

    /// Evaluates the term under `lookup`, folding arithmetic.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Value>) -> Result<Value, EvalError> {
        match self {
            Term::Num(q) => Ok(Value::Num(q.clone())),
            Term::Var(v) => lookup(v).ok_or_else(|| EvalError::Unbound(v.clone())),
            Term::Func(name, args) => {
                let args = args.iter().map(|a| a.eval(lookup)).collect::<Result<_, _>>()?;
                Ok(Value::Func(name.clone(), args))
            }
            Term::Arith(op, l, r) => {
                let num = |v: Value| match v {
                    Value::Num(q) => Ok(q),
                    other => Err(EvalError::NotNumeric(other.to_string())),
                };
                let l = num(l.eval(lookup)?)?;
                let r = num(r.eval(lookup)?)?;
                Ok(Value::Num(match op {
                    ArithOp::Add => l + r,
                    ArithOp::Sub => l - r,
                    ArithOp::Mul => l * r,
                }))
            }
        }
    }

    /// Value of a ground term.
    pub fn ground_value(&self) -> Result<Value, EvalError> {
        self.eval(&|_| None)
    }
}

/// A ground classical literal: a predicate applied to values, possibly
/// classically negated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: String,
    pub negated: bool,
    pub args: Vec<Value>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Value>) -> Atom {
        Atom { predicate: predicate.to_string(), negated: false, args }
    }

    pub fn complement(&self) -> Atom {
        Atom { negated: !self.negated, ..self.clone() }
    }

    /// Key used by `#strategy` directives: the predicate name, prefixed
    /// with `-` for classically negated literals.
    pub fn strategy_key(&self) -> String {
        strategy_key(self.negated, &self.predicate)
    }
}

pub fn strategy_key(negated: bool, predicate: &str) -> String {
    if negated {
        format!("-{predicate}")
    } else {
        predicate.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub negated: bool,
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Literal {
    pub fn new(predicate: &str, args: Vec<Term>) -> Literal {
        Literal { negated: false, predicate: predicate.to_string(), args }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Value>) -> Result<Atom, EvalError> {
        Ok(Atom {
            predicate: self.predicate.clone(),
            negated: self.negated,
            args: self.args.iter().map(|a| a.eval(lookup)).collect::<Result<_, _>>()?,
        })
    }

    /// The atom denoted by a ground literal.
    pub fn to_atom(&self) -> Option<Atom> {
        self.eval(&|_| None).ok()
    }

    pub fn from_atom(atom: &Atom) -> Literal {
        Literal {
            negated: atom.negated,
            predicate: atom.predicate.clone(),
            args: atom.args.iter().map(Value::to_term).collect(),
        }
    }
}

/// A literal, or a conjunction/disjunction of distinct literals combined
/// under a p-strategy.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HybridLiteral {
    Simple(Literal),
    Conj(Vec<Literal>, PStrategy),
    Disj(Vec<Literal>, PStrategy),
}

impl HybridLiteral {
    pub fn literals(&self) -> &[Literal] {
        match self {
            HybridLiteral::Simple(l) => std::slice::from_ref(l),
            HybridLiteral::Conj(ls, _) | HybridLiteral::Disj(ls, _) => ls,
        }
    }

    pub fn strategy(&self) -> Option<PStrategy> {
        match self {
            HybridLiteral::Simple(_) => None,
            HybridLiteral::Conj(_, s) | HybridLiteral::Disj(_, s) => Some(*s),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.literals().iter().for_each(|l| l.collect_vars(out));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnotationFn {
    Add,
    Sub,
    Mul,
    Min,
    Max,
}

impl AnnotationFn {
    pub fn name(self) -> &'static str {
        match self {
            AnnotationFn::Add => "add",
            AnnotationFn::Sub => "sub",
            AnnotationFn::Mul => "mul",
            AnnotationFn::Min => "min",
            AnnotationFn::Max => "max",
        }
    }

    pub fn from_name(name: &str) -> Option<AnnotationFn> {
        Some(match name {
            "add" => AnnotationFn::Add,
            "sub" => AnnotationFn::Sub,
            "mul" => AnnotationFn::Mul,
            "min" => AnnotationFn::Min,
            "max" => AnnotationFn::Max,
            _ => return None,
        })
    }

    /// `sub` is binary; the others take two or more arguments.
    pub fn arity_ok(self, n: usize) -> bool {
        match self {
            AnnotationFn::Sub => n == 2,
            _ => n >= 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AnnotationItem {
    Const(Rational),
    Var(String),
    Apply(AnnotationFn, Vec<AnnotationItem>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnnotationError {
    #[error("annotation value {0} is outside [0, 1]")]
    OutOfRange(Rational),
    #[error("annotation variable {0} is not bound")]
    UnboundVariable(String),
    #[error("annotation variable {0} is bound to non-numeric value")]
    NotNumeric(String),
    #[error("annotation lower bound {0} exceeds upper bound {1}")]
    Inverted(Rational, Rational),
}

impl AnnotationItem {
    pub fn constant(&self) -> Option<&Rational> {
        match self {
            AnnotationItem::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            AnnotationItem::Const(_) => {}
            AnnotationItem::Var(v) => {
                out.insert(v.clone());
            }
            AnnotationItem::Apply(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Evaluates the item; every intermediate application must stay in `[0,1]`.
    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Value>) -> Result<Rational, AnnotationError> {
        let value = match self {
            AnnotationItem::Const(q) => q.clone(),
            AnnotationItem::Var(v) => match lookup(v) {
                Some(Value::Num(q)) => q,
                Some(_) => return Err(AnnotationError::NotNumeric(v.clone())),
                None => return Err(AnnotationError::UnboundVariable(v.clone())),
            },
            AnnotationItem::Apply(f, args) => {
                let args = args.iter().map(|a| a.eval(lookup)).collect::<Result<Vec<_>, _>>()?;
                let mut iter = args.into_iter();
                let first = iter.next().unwrap_or_else(Rational::zero);
                iter.fold(first, |acc, x| match f {
                    AnnotationFn::Add => acc + x,
                    AnnotationFn::Sub => acc - x,
                    AnnotationFn::Mul => acc * x,
                    AnnotationFn::Min => acc.min(x),
                    AnnotationFn::Max => acc.max(x),
                })
            }
        };
        if value.is_probability() {
            Ok(value)
        } else {
            Err(AnnotationError::OutOfRange(value))
        }
    }
}

/// Evaluates an annotation item under a variable assignment.
pub fn eval_annotation_item(
    item: &AnnotationItem,
    bindings: &BTreeMap<String, Rational>,
) -> Result<Rational, AnnotationError> {
    item.eval(&|v| bindings.get(v).cloned().map(Value::Num))
}

/// The `[lo, hi]` annotation as written, possibly with variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotationSpec {
    pub lo: AnnotationItem,
    pub hi: AnnotationItem,
}

impl AnnotationSpec {
    pub fn certain() -> Self {
        AnnotationSpec::scalar(AnnotationItem::Const(Rational::one()))
    }

    pub fn scalar(item: AnnotationItem) -> Self {
        AnnotationSpec { lo: item.clone(), hi: item }
    }

    pub fn from_annotation(a: &Annotation) -> Self {
        AnnotationSpec { lo: AnnotationItem::Const(a.lo().clone()), hi: AnnotationItem::Const(a.hi().clone()) }
    }

    pub fn is_certain(&self) -> bool {
        self.constant().is_some_and(|a| a.is_certain())
    }

    /// The annotation when both items are constants forming a valid interval.
    pub fn constant(&self) -> Option<Annotation> {
        Annotation::new(self.lo.constant()?.clone(), self.hi.constant()?.clone()).ok()
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.lo.collect_vars(out);
        self.hi.collect_vars(out);
    }

    pub fn eval(&self, lookup: &dyn Fn(&str) -> Option<Value>) -> Result<Annotation, AnnotationError> {
        let lo = self.lo.eval(lookup)?;
        let hi = self.hi.eval(lookup)?;
        if lo > hi {
            return Err(AnnotationError::Inverted(lo, hi));
        }
        Ok(Annotation::from_bounds_unchecked(lo, hi))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnnotatedLiteral {
    pub literal: HybridLiteral,
    pub annotation: AnnotationSpec,
}

impl AnnotatedLiteral {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.literal.collect_vars(out);
        self.annotation.collect_vars(out);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "!=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    /// Total-order comparison, used for ground term comparisons.
    pub fn holds<T: Ord>(self, left: &T, right: &T) -> bool {
        match self {
            Relation::Lt => left < right,
            Relation::Le => left <= right,
            Relation::Eq => left == right,
            Relation::Ne => left != right,
            Relation::Ge => left >= right,
            Relation::Gt => left > right,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BodyElement {
    Literal { naf: bool, lit: AnnotatedLiteral },
    Aggregate { naf: bool, atom: AggregateAtom },
    Compare { left: Term, rel: Relation, right: Term },
}

impl BodyElement {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            BodyElement::Literal { lit, .. } => lit.collect_vars(out),
            BodyElement::Aggregate { atom, .. } => atom.collect_vars(out),
            BodyElement::Compare { left, right, .. } => {
                left.collect_vars(out);
                right.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeadAtom {
    pub literal: Literal,
    pub annotation: AnnotationSpec,
}

/// A generator rule; an empty head makes it a constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorRule {
    pub head: Vec<HeadAtom>,
    pub body: Vec<BodyElement>,
}

impl GeneratorRule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        for h in &self.head {
            h.literal.collect_vars(out);
            h.annotation.collect_vars(out);
        }
        self.body.iter().for_each(|b| b.collect_vars(out));
    }
}

/// One `x : [p1,p2] | C` element of a probability set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetElement {
    pub value: Term,
    pub annotation: AnnotationSpec,
    pub condition: Vec<AnnotatedLiteral>,
}

impl SetElement {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.value.collect_vars(out);
        self.annotation.collect_vars(out);
        self.condition.iter().for_each(|c| c.collect_vars(out));
    }
}

/// A probability set term. Symbolic sets usually have one element with
/// variables; ground sets list their pairs explicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProbabilitySet {
    pub elements: Vec<SetElement>,
}

impl ProbabilitySet {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.elements.iter().for_each(|e| e.collect_vars(out));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregateFamily {
    /// Results are real intervals.
    Expectation,
    /// Results are `(value, annotation)` pairs.
    Pair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregateFunction {
    ValE,
    SumE,
    TimesE,
    MinE,
    MaxE,
    CountE,
    SumP,
    TimesP,
    MinP,
    MaxP,
    CountP,
}

impl AggregateFunction {
    pub const ALL: [AggregateFunction; 11] = [
        AggregateFunction::ValE,
        AggregateFunction::SumE,
        AggregateFunction::TimesE,
        AggregateFunction::MinE,
        AggregateFunction::MaxE,
        AggregateFunction::CountE,
        AggregateFunction::SumP,
        AggregateFunction::TimesP,
        AggregateFunction::MinP,
        AggregateFunction::MaxP,
        AggregateFunction::CountP,
    ];

    pub fn family(self) -> AggregateFamily {
        use AggregateFunction::*;
        match self {
            ValE | SumE | TimesE | MinE | MaxE | CountE => AggregateFamily::Expectation,
            SumP | TimesP | MinP | MaxP | CountP => AggregateFamily::Pair,
        }
    }

    /// Source keyword without the leading `#`.
    pub fn keyword(self) -> &'static str {
        use AggregateFunction::*;
        match self {
            ValE => "vale",
            SumE => "sume",
            TimesE => "timese",
            MinE => "mine",
            MaxE => "maxe",
            CountE => "counte",
            SumP => "sump",
            TimesP => "timesp",
            MinP => "minp",
            MaxP => "maxp",
            CountP => "countp",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.keyword() == word)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Aggregate {
    pub function: AggregateFunction,
    pub set: ProbabilitySet,
}

/// `f(S) rel [lo, hi] : annotation`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AggregateAtom {
    pub aggregate: Aggregate,
    pub relation: Relation,
    pub guard_lo: Term,
    pub guard_hi: Term,
    pub annotation: AnnotationSpec,
}

impl AggregateAtom {
    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        self.aggregate.set.collect_vars(out);
        self.guard_lo.collect_vars(out);
        self.guard_hi.collect_vars(out);
        self.annotation.collect_vars(out);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OptKind {
    Max,
    Min,
    MaxMu,
    MinMu,
    MaxX,
    MinX,
    MaxXMu,
    MinXMu,
}

impl OptKind {
    pub const ALL: [OptKind; 8] = [
        OptKind::Max,
        OptKind::Min,
        OptKind::MaxMu,
        OptKind::MinMu,
        OptKind::MaxX,
        OptKind::MinX,
        OptKind::MaxXMu,
        OptKind::MinXMu,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            OptKind::Max => "max",
            OptKind::Min => "min",
            OptKind::MaxMu => "maxmu",
            OptKind::MinMu => "minmu",
            OptKind::MaxX => "maxx",
            OptKind::MinX => "minx",
            OptKind::MaxXMu => "maxxmu",
            OptKind::MinXMu => "minxmu",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.keyword() == word)
    }

    /// `max`/`min` work on expectation aggregates, the subscripted kinds on
    /// pair aggregates.
    pub fn family(self) -> AggregateFamily {
        match self {
            OptKind::Max | OptKind::Min => AggregateFamily::Expectation,
            _ => AggregateFamily::Pair,
        }
    }

    pub fn maximizes(self) -> bool {
        matches!(self, OptKind::Max | OptKind::MaxMu | OptKind::MaxX | OptKind::MaxXMu)
    }

    /// Aggregate function implied by the abbreviated form `#minx{...}`.
    ///
    /// All functions of a family agree on singleton multisets; the extremum
    /// matching the direction is used otherwise, and undefined on an empty one.
    pub fn default_function(self) -> AggregateFunction {
        match (self.family(), self.maximizes()) {
            (AggregateFamily::Expectation, true) => AggregateFunction::MaxE,
            (AggregateFamily::Expectation, false) => AggregateFunction::MinE,
            (AggregateFamily::Pair, true) => AggregateFunction::MaxP,
            (AggregateFamily::Pair, false) => AggregateFunction::MinP,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OptAggregate {
    pub kind: OptKind,
    pub aggregate: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leaf {
    Literal { naf: bool, lit: AnnotatedLiteral },
    Aggregate { naf: bool, atom: AggregateAtom },
    Optimize(OptAggregate),
}

/// A boolean combination in a preference rule head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Combination {
    Leaf(Leaf),
    And(Box<Combination>, Box<Combination>),
    Or(Box<Combination>, Box<Combination>),
}

impl Combination {
    pub fn and(l: Combination, r: Combination) -> Combination {
        Combination::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Combination, r: Combination) -> Combination {
        Combination::Or(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> Vec<&Leaf> {
        let mut out = Vec::new();
        fn walk<'a>(c: &'a Combination, out: &mut Vec<&'a Leaf>) {
            match c {
                Combination::Leaf(l) => out.push(l),
                Combination::And(a, b) | Combination::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceRule {
    pub head: Vec<Combination>,
    pub body: Vec<BodyElement>,
}

#[derive(Debug, Clone, Copy)]
pub enum RuleRef<'a> {
    Generator(&'a GeneratorRule),
    Preference(&'a PreferenceRule),
}

impl<'a> RuleRef<'a> {
    pub fn body(self) -> &'a [BodyElement] {
        match self {
            RuleRef::Generator(r) => &r.body,
            RuleRef::Preference(r) => &r.body,
        }
    }

    /// Every probability set of the rule: body aggregates first, then head
    /// aggregates in left-to-right order.
    pub fn sets(self) -> Vec<&'a ProbabilitySet> {
        let mut out: Vec<&ProbabilitySet> = self
            .body()
            .iter()
            .filter_map(|b| match b {
                BodyElement::Aggregate { atom, .. } => Some(&atom.aggregate.set),
                _ => None,
            })
            .collect();
        if let RuleRef::Preference(r) = self {
            for leaf in r.head.iter().flat_map(Combination::leaves) {
                match leaf {
                    Leaf::Aggregate { atom, .. } => out.push(&atom.aggregate.set),
                    Leaf::Optimize(opt) => out.push(&opt.aggregate.set),
                    Leaf::Literal { .. } => {}
                }
            }
        }
        out
    }

    /// Variables occurring outside every probability set.
    pub fn vars_outside_sets(self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let element_vars = |b: &BodyElement, out: &mut BTreeSet<String>| match b {
            BodyElement::Aggregate { atom, .. } => {
                atom.guard_lo.collect_vars(out);
                atom.guard_hi.collect_vars(out);
                atom.annotation.collect_vars(out);
            }
            other => other.collect_vars(out),
        };
        for b in self.body() {
            element_vars(b, &mut out);
        }
        match self {
            RuleRef::Generator(r) => {
                for h in &r.head {
                    h.literal.collect_vars(&mut out);
                    h.annotation.collect_vars(&mut out);
                }
            }
            RuleRef::Preference(r) => {
                for leaf in r.head.iter().flat_map(Combination::leaves) {
                    match leaf {
                        Leaf::Literal { lit, .. } => lit.collect_vars(&mut out),
                        Leaf::Aggregate { atom, .. } => {
                            atom.guard_lo.collect_vars(&mut out);
                            atom.guard_hi.collect_vars(&mut out);
                            atom.annotation.collect_vars(&mut out);
                        }
                        Leaf::Optimize(_) => {}
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub generator: Vec<GeneratorRule>,
    pub preferences: Vec<PreferenceRule>,
    /// Disjunctive strategy per predicate key (see [`strategy_key`]).
    pub strategies: BTreeMap<String, PStrategy>,
}

impl Program {
    pub fn strategy_for(&self, atom: &Atom) -> PStrategy {
        self.strategies.get(&atom.strategy_key()).copied().unwrap_or_default()
    }

    pub fn is_empty(&self) -> bool {
        self.generator.is_empty() && self.preferences.is_empty() && self.strategies.is_empty()
    }
}
