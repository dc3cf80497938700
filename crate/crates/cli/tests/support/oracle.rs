//! Brute-force reference implementations, written directly from the
//! definitions and sharing nothing with the solver beyond the AST and
//! exact rationals.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use paso::syntax::{
    Aggregate, AggregateAtom, AggregateFunction, AnnotatedLiteral, Atom, BodyElement, Combination, HybridLiteral, Leaf,
    OptKind, PreferenceRule, Relation, Value,
};
use paso::{PStrategy, Program, Rational};

pub type Iv = (Rational, Rational);
pub type Interp = BTreeMap<Atom, Iv>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn leq(a: &Iv, b: &Iv) -> bool {
    a.0 <= b.0 && a.1 <= b.1
}

pub fn lt(a: &Iv, b: &Iv) -> bool {
    leq(a, b) && a != b
}

fn combine(s: PStrategy, a: &Iv, b: &Iv) -> Iv {
    let or = |x: &Rational, y: &Rational| x + y - x * y;
    match s {
        PStrategy::ConjInd => (&a.0 * &b.0, &a.1 * &b.1),
        PStrategy::ConjMin => (a.0.clone().min(b.0.clone()), a.1.clone().min(b.1.clone())),
        PStrategy::DisjInd => (or(&a.0, &b.0), or(&a.1, &b.1)),
        PStrategy::DisjMax => (a.0.clone().max(b.0.clone()), a.1.clone().max(b.1.clone())),
    }
}

fn iv_of(spec: &paso::syntax::AnnotationSpec) -> Iv {
    let a = spec.constant().expect("ground annotation");
    (a.lo().clone(), a.hi().clone())
}

fn value(h: &Interp, lit: &HybridLiteral) -> Option<Iv> {
    let atom = |l: &paso::syntax::Literal| h.get(&l.to_atom().expect("ground literal")).cloned();
    match lit {
        HybridLiteral::Simple(l) => atom(l),
        HybridLiteral::Conj(ls, s) | HybridLiteral::Disj(ls, s) => {
            let values: Option<Vec<Iv>> = ls.iter().map(atom).collect();
            let values = values?;
            let (first, rest) = values.split_first()?;
            Some(rest.iter().fold(first.clone(), |acc, v| combine(*s, &acc, v)))
        }
    }
}

fn holds(h: &Interp, lit: &AnnotatedLiteral) -> bool {
    value(h, &lit.literal).is_some_and(|v| leq(&iv_of(&lit.annotation), &v))
}

fn compare_holds(left: &paso::syntax::Term, rel: Relation, right: &paso::syntax::Term) -> bool {
    match (left.ground_value(), right.ground_value()) {
        (Ok(l), Ok(r)) => rel.holds(&l, &r),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Generator rules

#[derive(Debug, Clone)]
struct Rule {
    head: Vec<(Atom, Iv)>,
    pos: Vec<AnnotatedLiteral>,
    neg: Vec<AnnotatedLiteral>,
}

pub struct AnswerSetOracle {
    rules: Vec<Rule>,
    strategy: HashMap<Atom, PStrategy>,
    candidates: Vec<(Atom, Vec<Iv>)>,
}

impl AnswerSetOracle {
    pub fn new(program: &Program) -> Self {
        let mut rules = Vec::new();
        for r in &program.generator {
            let mut rule = Rule {
                head: r.head.iter().map(|h| (h.literal.to_atom().unwrap(), iv_of(&h.annotation))).collect(),
                pos: Vec::new(),
                neg: Vec::new(),
            };
            let mut blocked = false;
            for b in &r.body {
                match b {
                    BodyElement::Literal { naf: false, lit } => rule.pos.push(lit.clone()),
                    BodyElement::Literal { naf: true, lit } => rule.neg.push(lit.clone()),
                    BodyElement::Compare { left, rel, right } => blocked |= !compare_holds(left, *rel, right),
                    BodyElement::Aggregate { .. } => panic!("aggregates in generator rules"),
                }
            }
            if !blocked {
                rules.push(rule);
            }
        }
        let mut occurrences: BTreeMap<Atom, Vec<Iv>> = BTreeMap::new();
        for r in &rules {
            for (a, mu) in &r.head {
                occurrences.entry(a.clone()).or_default().push(mu.clone());
            }
        }
        let strategy: HashMap<Atom, PStrategy> =
            occurrences.keys().map(|a| (a.clone(), program.strategy_for(a))).collect();
        let candidates = occurrences
            .into_iter()
            .map(|(a, occ)| {
                let s = strategy[&a];
                let mut values = BTreeSet::new();
                for bits in 1u32..(1 << occ.len()) {
                    let chosen: Vec<&Iv> = (0..occ.len()).filter(|i| bits & (1 << i) != 0).map(|i| &occ[i]).collect();
                    let v = chosen[1..].iter().fold(chosen[0].clone(), |acc, x| combine(s, &acc, x));
                    values.insert(v);
                }
                (a, values.into_iter().collect())
            })
            .collect();
        AnswerSetOracle { rules, strategy, candidates }
    }

    /// Number of interpretations over candidate annotations.
    pub fn interpretation_count(&self) -> u128 {
        self.candidates.iter().map(|(_, c)| c.len() as u128 + 1).product()
    }

    fn body(&self, h: &Interp, r: &Rule) -> bool {
        r.pos.iter().all(|l| holds(h, l)) && r.neg.iter().all(|l| !holds(h, l))
    }

    fn is_model(&self, h: &Interp) -> bool {
        self.rules.iter().all(|r| !self.body(h, r) || r.head.iter().any(|(a, mu)| h.get(a).is_some_and(|v| leq(mu, v))))
    }

    fn consistent(h: &Interp) -> bool {
        h.keys().all(|a| !h.contains_key(&a.complement()))
    }

    fn reduct(&self, h: &Interp) -> Vec<usize> {
        (0..self.rules.len()).filter(|&i| self.rules[i].neg.iter().all(|l| !holds(h, l))).collect()
    }

    fn reduct_model(&self, reduct: &[usize], h: &Interp) -> bool {
        reduct.iter().map(|&i| &self.rules[i]).all(|r| {
            !r.pos.iter().all(|l| holds(h, l)) || r.head.iter().any(|(a, mu)| h.get(a).is_some_and(|v| leq(mu, v)))
        })
    }

    fn build(&self, reduct: &[usize], selection: &[Option<u32>]) -> Interp {
        let mut out = Interp::new();
        for (k, &i) in reduct.iter().enumerate() {
            let Some(mask) = selection[k] else { continue };
            for (j, (a, mu)) in self.rules[i].head.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    let next = match out.get(a) {
                        Some(v) => combine(self.strategy[a], v, mu),
                        None => mu.clone(),
                    };
                    out.insert(a.clone(), next);
                }
            }
        }
        out
    }

    /// Every `D(P^h, sel)` for the reduct given by rule positions.
    fn derivable(&self, reduct: &[usize]) -> BTreeSet<Interp> {
        let mut out = BTreeSet::new();
        let mut selection = vec![None; reduct.len()];
        self.derive(reduct, &mut selection, &mut out);
        out
    }

    fn derive(&self, reduct: &[usize], selection: &mut Vec<Option<u32>>, out: &mut BTreeSet<Interp>) {
        let current = self.build(reduct, selection);
        let next = (0..reduct.len()).find(|&k| {
            let r = &self.rules[reduct[k]];
            selection[k].is_none() && !r.head.is_empty() && r.pos.iter().all(|l| holds(&current, l))
        });
        match next {
            None => {
                out.insert(current);
            }
            Some(k) => {
                for mask in 1..(1u32 << self.rules[reduct[k]].head.len()) {
                    selection[k] = Some(mask);
                    self.derive(reduct, selection, out);
                }
                selection[k] = None;
            }
        }
    }

    fn all_interpretations(&self) -> Vec<Interp> {
        let mut out = vec![Interp::new()];
        for (a, values) in &self.candidates {
            let mut next = Vec::with_capacity(out.len() * (values.len() + 1));
            for h in &out {
                next.push(h.clone());
                for v in values {
                    let mut g = h.clone();
                    g.insert(a.clone(), v.clone());
                    next.push(g);
                }
            }
            out = next;
        }
        out
    }

    pub fn answer_sets(&self) -> Vec<Interp> {
        let mut cache: HashMap<Vec<usize>, BTreeSet<Interp>> = HashMap::new();
        let mut out = Vec::new();
        for h in self.all_interpretations() {
            if !Self::consistent(&h) || !self.is_model(&h) {
                continue;
            }
            let reduct = self.reduct(&h);
            let derivable = cache.entry(reduct.clone()).or_insert_with(|| self.derivable(&reduct));
            if !derivable.contains(&h) {
                continue;
            }
            let beaten = derivable.iter().any(|g| smaller(g, &h) && self.reduct_model(&reduct, g));
            if !beaten {
                out.push(h);
            }
        }
        out.sort();
        out
    }
}

fn smaller(g: &Interp, h: &Interp) -> bool {
    let gk: BTreeSet<&Atom> = g.keys().collect();
    let hk: BTreeSet<&Atom> = h.keys().collect();
    if gk != hk {
        return gk.is_subset(&hk);
    }
    g != h && g.iter().all(|(a, v)| leq(v, &h[a]))
}

// ---------------------------------------------------------------------------
// Aggregates

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AggValue {
    Interval(Iv),
    Pair(Rational, Iv),
    Bottom,
}

fn scale(x: &Rational, a: &Iv) -> Iv {
    if *x >= q(0) {
        (x * &a.0, x * &a.1)
    } else {
        (x * &a.1, x * &a.0)
    }
}

pub fn apply(function: AggregateFunction, items: &[(Value, Iv)]) -> AggValue {
    use AggregateFunction::*;
    let weight = items.iter().fold((q(1), q(1)), |acc, (_, a)| (&acc.0 * &a.0, &acc.1 * &a.1));
    let count = q(items.len() as i64);
    let numbers: Option<Vec<Rational>> = items
        .iter()
        .map(|(v, _)| match v {
            Value::Num(x) => Some(x.clone()),
            _ => None,
        })
        .collect();
    let expectation = |x: Option<Rational>| x.map_or(AggValue::Bottom, |x| AggValue::Interval(scale(&x, &weight)));
    let pair = |x: Option<Rational>| x.map_or(AggValue::Bottom, |x| AggValue::Pair(x, weight.clone()));
    let sum = || numbers.clone().map(|xs| xs.into_iter().fold(q(0), |a, b| a + b));
    let product = || numbers.clone().map(|xs| xs.into_iter().fold(q(1), |a, b| a * b));
    let least = || numbers.clone().and_then(|xs| xs.into_iter().min());
    let most = || numbers.clone().and_then(|xs| xs.into_iter().max());
    match function {
        ValE => match &numbers {
            Some(xs) => AggValue::Interval(xs.iter().zip(items).fold((q(0), q(0)), |acc, (x, (_, a))| {
                let s = scale(x, a);
                (acc.0 + s.0, acc.1 + s.1)
            })),
            None => AggValue::Bottom,
        },
        SumE => expectation(sum()),
        TimesE => expectation(product()),
        MinE => expectation(least()),
        MaxE => expectation(most()),
        CountE => expectation(Some(count)),
        SumP => pair(sum()),
        TimesP => pair(product()),
        MinP => pair(least()),
        MaxP => pair(most()),
        CountP => pair(Some(count)),
    }
}

fn guard_compare(v: &Iv, rel: Relation, t: &Iv) -> bool {
    match rel {
        Relation::Eq => v == t,
        Relation::Ne => v != t,
        Relation::Le => leq(v, t),
        Relation::Lt => lt(v, t),
        Relation::Ge => leq(t, v),
        Relation::Gt => lt(t, v),
    }
}

// ---------------------------------------------------------------------------
// Preferences

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Better,
    Equal,
    Worse,
    Incomparable,
}

pub struct PreferenceOracle<'a> {
    pool: &'a [Interp],
    rules: &'a [PreferenceRule],
}

impl<'a> PreferenceOracle<'a> {
    pub fn new(pool: &'a [Interp], rules: &'a [PreferenceRule]) -> Self {
        PreferenceOracle { pool, rules }
    }

    fn agg(&self, h: usize, a: &Aggregate) -> AggValue {
        let items: Vec<(Value, Iv)> = a
            .set
            .elements
            .iter()
            .filter(|e| e.condition.iter().all(|c| holds(&self.pool[h], c)))
            .map(|e| (e.value.ground_value().unwrap(), iv_of(&e.annotation)))
            .collect();
        apply(a.function, &items)
    }

    fn atom_holds(&self, h: usize, atom: &AggregateAtom) -> bool {
        let num = |t: &paso::syntax::Term| match t.ground_value() {
            Ok(Value::Num(x)) => x,
            other => panic!("non-numeric guard {other:?}"),
        };
        let t = (num(&atom.guard_lo), num(&atom.guard_hi));
        match self.agg(h, &atom.aggregate) {
            AggValue::Interval(v) => guard_compare(&v, atom.relation, &t),
            AggValue::Pair(x, nu) => guard_compare(&(x.clone(), x), atom.relation, &t) && leq(&iv_of(&atom.annotation), &nu),
            AggValue::Bottom => false,
        }
    }

    fn optimal(&self, h: usize, kind: OptKind, a: &Aggregate) -> bool {
        let mine = self.agg(h, a);
        if mine == AggValue::Bottom {
            return false;
        }
        (0..self.pool.len()).all(|o| {
            let other = self.agg(o, a);
            match (&mine, &other) {
                (_, AggValue::Bottom) => true,
                (AggValue::Interval(x), AggValue::Interval(y)) => match kind {
                    OptKind::Max => leq(y, x),
                    OptKind::Min => leq(x, y),
                    _ => panic!("family mismatch"),
                },
                (AggValue::Pair(x, nu), AggValue::Pair(y, nv)) => match kind {
                    OptKind::MaxMu => leq(nv, nu),
                    OptKind::MinMu => leq(nu, nv),
                    OptKind::MaxX => y <= x,
                    OptKind::MinX => x <= y,
                    OptKind::MaxXMu => y <= x && leq(nv, nu),
                    OptKind::MinXMu => x <= y && leq(nu, nv),
                    _ => panic!("family mismatch"),
                },
                _ => panic!("family mismatch"),
            }
        })
    }

    fn sat(&self, h: usize, c: &Combination) -> bool {
        match c {
            Combination::Leaf(Leaf::Literal { naf, lit }) => holds(&self.pool[h], lit) != *naf,
            Combination::Leaf(Leaf::Aggregate { naf, atom }) => self.atom_holds(h, atom) != *naf,
            Combination::Leaf(Leaf::Optimize(o)) => self.optimal(h, o.kind, &o.aggregate),
            Combination::And(a, b) => self.sat(h, a) && self.sat(h, b),
            Combination::Or(a, b) => self.sat(h, a) || self.sat(h, b),
        }
    }

    fn body(&self, h: usize, body: &[BodyElement]) -> bool {
        body.iter().all(|b| match b {
            BodyElement::Literal { naf, lit } => holds(&self.pool[h], lit) != *naf,
            BodyElement::Aggregate { naf, atom } => self.atom_holds(h, atom) != *naf,
            BodyElement::Compare { left, rel, right } => compare_holds(left, *rel, right),
        })
    }

    /// `Some(i)` for `h |=_i r`, `None` for irrelevant.
    pub fn degree(&self, h: usize, r: &PreferenceRule) -> Option<usize> {
        if !self.body(h, &r.body) {
            return None;
        }
        r.head.iter().position(|c| self.sat(h, c)).map(|i| i + 1)
    }

    fn strictly(&self, h1: usize, h2: usize, c: &Combination) -> bool {
        let (s1, s2) = (self.sat(h1, c), self.sat(h2, c));
        if s1 && !s2 {
            return true;
        }
        if !(s1 && s2) {
            return false;
        }
        match c {
            Combination::Leaf(Leaf::Literal { naf, lit }) => {
                let v1 = value(&self.pool[h1], &lit.literal);
                let v2 = value(&self.pool[h2], &lit.literal);
                if *naf {
                    match (&v1, &v2) {
                        (Some(a), Some(b)) => lt(a, b),
                        (None, Some(_)) => true,
                        _ => false,
                    }
                } else {
                    matches!((&v1, &v2), (Some(a), Some(b)) if lt(b, a))
                }
            }
            Combination::Leaf(Leaf::Aggregate { naf, atom }) => {
                let r1 = self.agg(h1, &atom.aggregate);
                let r2 = self.agg(h2, &atom.aggregate);
                match (r1, r2, *naf) {
                    (AggValue::Interval(x), AggValue::Interval(y), false) => lt(&y, &x),
                    (AggValue::Pair(_, nu), AggValue::Pair(_, nv), false) => lt(&nv, &nu),
                    (AggValue::Bottom, AggValue::Interval(_) | AggValue::Pair(..), true) => true,
                    (AggValue::Interval(x), AggValue::Interval(y), true) => lt(&x, &y),
                    (AggValue::Pair(_, nu), AggValue::Pair(_, nv), true) => lt(&nu, &nv),
                    _ => false,
                }
            }
            Combination::Leaf(Leaf::Optimize(_)) => false,
            Combination::And(a, b) | Combination::Or(a, b) => {
                (self.strictly(h1, h2, a) && self.at_least(h1, h2, b))
                    || (self.strictly(h1, h2, b) && self.at_least(h1, h2, a))
            }
        }
    }

    fn equally(&self, h1: usize, h2: usize, c: &Combination) -> bool {
        let (s1, s2) = (self.sat(h1, c), self.sat(h2, c));
        if !s1 && !s2 {
            return true;
        }
        if !(s1 && s2) {
            return false;
        }
        match c {
            Combination::Leaf(Leaf::Literal { naf, lit }) => {
                let v1 = value(&self.pool[h1], &lit.literal);
                let v2 = value(&self.pool[h2], &lit.literal);
                match (v1, v2) {
                    (Some(a), Some(b)) => a == b,
                    (None, None) => *naf,
                    _ => false,
                }
            }
            Combination::Leaf(Leaf::Aggregate { naf, atom }) => {
                match (self.agg(h1, &atom.aggregate), self.agg(h2, &atom.aggregate)) {
                    (AggValue::Interval(x), AggValue::Interval(y)) => x == y,
                    (AggValue::Pair(_, nu), AggValue::Pair(_, nv)) => nu == nv,
                    (AggValue::Bottom, AggValue::Bottom) => *naf,
                    _ => false,
                }
            }
            Combination::Leaf(Leaf::Optimize(_)) => true,
            Combination::And(a, b) => self.equally(h1, h2, a) && self.equally(h1, h2, b),
            Combination::Or(a, b) => {
                let forward = [a, b].iter().filter(|t| self.at_least(h1, h2, t)).count();
                let backward = [a, b].iter().filter(|t| self.at_least(h2, h1, t)).count();
                forward == backward
            }
        }
    }

    fn at_least(&self, h1: usize, h2: usize, c: &Combination) -> bool {
        self.strictly(h1, h2, c) || self.equally(h1, h2, c)
    }

    fn rule_strictly(&self, h1: usize, h2: usize, r: &PreferenceRule) -> bool {
        match (self.degree(h1, r), self.degree(h2, r)) {
            (Some(i), Some(j)) if i < j => true,
            (Some(i), Some(j)) if i == j => self.strictly(h1, h2, &r.head[i - 1]),
            (Some(_), None) => true,
            _ => false,
        }
    }

    fn rule_equally(&self, h1: usize, h2: usize, r: &PreferenceRule) -> bool {
        match (self.degree(h1, r), self.degree(h2, r)) {
            (Some(i), Some(j)) if i == j => self.equally(h1, h2, &r.head[i - 1]),
            (None, None) => true,
            _ => false,
        }
    }

    fn rule_at_least(&self, h1: usize, h2: usize, r: &PreferenceRule) -> bool {
        self.rule_strictly(h1, h2, r) || self.rule_equally(h1, h2, r)
    }

    fn pareto_strictly(&self, h1: usize, h2: usize) -> bool {
        (0..self.rules.len()).any(|k| {
            self.rule_strictly(h1, h2, &self.rules[k])
                && (0..self.rules.len()).filter(|&o| o != k).all(|o| self.rule_at_least(h1, h2, &self.rules[o]))
        })
    }

    pub fn pareto(&self, h1: usize, h2: usize) -> Verdict {
        if self.pareto_strictly(h1, h2) {
            Verdict::Better
        } else if self.pareto_strictly(h2, h1) {
            Verdict::Worse
        } else if self.rules.iter().all(|r| self.rule_equally(h1, h2, r)) {
            Verdict::Equal
        } else {
            Verdict::Incomparable
        }
    }

    pub fn maximal(&self, h1: usize, h2: usize) -> Verdict {
        let forward = self.rules.iter().filter(|r| self.rule_at_least(h1, h2, r)).count();
        let backward = self.rules.iter().filter(|r| self.rule_at_least(h2, h1, r)).count();
        match forward.cmp(&backward) {
            std::cmp::Ordering::Greater => Verdict::Better,
            std::cmp::Ordering::Less => Verdict::Worse,
            std::cmp::Ordering::Equal => Verdict::Equal,
        }
    }

    /// Pairs where a strict and an equal clause both hold, which the
    /// definitions are expected to rule out.
    pub fn overlapping_clauses(&self) -> usize {
        let mut n = 0;
        for r in self.rules {
            for c in &r.head {
                for h1 in 0..self.pool.len() {
                    for h2 in 0..self.pool.len() {
                        if self.strictly(h1, h2, c) && self.equally(h1, h2, c) {
                            n += 1;
                        }
                    }
                }
            }
        }
        n
    }
}

// ---------------------------------------------------------------------------
// Classical answer sets and answer set optimization

pub struct ClassicalOracle {
    rules: Vec<(Vec<Atom>, Vec<Atom>, Vec<Atom>)>,
    atoms: Vec<Atom>,
}

fn plain_atom(lit: &AnnotatedLiteral) -> Atom {
    match &lit.literal {
        HybridLiteral::Simple(l) => l.to_atom().unwrap(),
        other => panic!("classical programs use plain literals, found {other:?}"),
    }
}

impl ClassicalOracle {
    pub fn new(program: &Program) -> Self {
        let mut rules = Vec::new();
        let mut atoms = BTreeSet::new();
        for r in &program.generator {
            let head: Vec<Atom> = r.head.iter().map(|h| h.literal.to_atom().unwrap()).collect();
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for b in &r.body {
                match b {
                    BodyElement::Literal { naf: false, lit } => pos.push(plain_atom(lit)),
                    BodyElement::Literal { naf: true, lit } => neg.push(plain_atom(lit)),
                    other => panic!("unexpected body element {other:?}"),
                }
            }
            atoms.extend(head.iter().cloned());
            rules.push((head, pos, neg));
        }
        ClassicalOracle { rules, atoms: atoms.into_iter().collect() }
    }

    fn reduct_model(&self, m: &BTreeSet<Atom>, reduct_of: &BTreeSet<Atom>) -> bool {
        self.rules.iter().all(|(head, pos, neg)| {
            neg.iter().any(|a| reduct_of.contains(a))
                || !pos.iter().all(|a| m.contains(a))
                || head.iter().any(|a| m.contains(a))
        })
    }

    /// Answer sets: consistent `M` that are minimal models of the reduct `P^M`.
    pub fn answer_sets(&self) -> Vec<BTreeSet<Atom>> {
        let n = self.atoms.len();
        let set = |bits: u32| -> BTreeSet<Atom> { (0..n).filter(|i| bits & (1 << i) != 0).map(|i| self.atoms[i].clone()).collect() };
        let mut out = Vec::new();
        for bits in 0u32..(1 << n) {
            let m = set(bits);
            if m.iter().any(|a| m.contains(&a.complement())) || !self.reduct_model(&m, &m) {
                continue;
            }
            let mut sub = bits;
            let mut minimal = true;
            while sub != 0 {
                sub = (sub - 1) & bits;
                if self.reduct_model(&set(sub), &m) {
                    minimal = false;
                    break;
                }
            }
            if minimal {
                out.push(m);
            }
        }
        out.sort();
        out
    }
}

fn classical_sat(m: &BTreeSet<Atom>, c: &Combination) -> bool {
    match c {
        Combination::Leaf(Leaf::Literal { naf, lit }) => m.contains(&plain_atom(lit)) != *naf,
        Combination::And(a, b) => classical_sat(m, a) && classical_sat(m, b),
        Combination::Or(a, b) => classical_sat(m, a) || classical_sat(m, b),
        other => panic!("classical heads use literals, found {other:?}"),
    }
}

/// Degree of `r` in `m`, with irrelevant answer sets ranked last (`k + 1`).
pub fn classical_degree(m: &BTreeSet<Atom>, r: &PreferenceRule) -> usize {
    let body = r.body.iter().all(|b| match b {
        BodyElement::Literal { naf, lit } => m.contains(&plain_atom(lit)) != *naf,
        other => panic!("unexpected body element {other:?}"),
    });
    let k = r.head.len();
    if !body {
        return k + 1;
    }
    r.head.iter().position(|c| classical_sat(m, c)).map_or(k + 1, |i| i + 1)
}

pub fn classical_pareto(m1: &BTreeSet<Atom>, m2: &BTreeSet<Atom>, rules: &[PreferenceRule]) -> Verdict {
    let d: Vec<(usize, usize)> = rules.iter().map(|r| (classical_degree(m1, r), classical_degree(m2, r))).collect();
    if d.iter().all(|(a, b)| a == b) {
        Verdict::Equal
    } else if d.iter().all(|(a, b)| a <= b) {
        Verdict::Better
    } else if d.iter().all(|(a, b)| a >= b) {
        Verdict::Worse
    } else {
        Verdict::Incomparable
    }
}

pub fn classical_maximal(m1: &BTreeSet<Atom>, m2: &BTreeSet<Atom>, rules: &[PreferenceRule]) -> Verdict {
    let d: Vec<(usize, usize)> = rules.iter().map(|r| (classical_degree(m1, r), classical_degree(m2, r))).collect();
    let forward = d.iter().filter(|(a, b)| a <= b).count();
    let backward = d.iter().filter(|(a, b)| b <= a).count();
    match forward.cmp(&backward) {
        std::cmp::Ordering::Greater => Verdict::Better,
        std::cmp::Ordering::Less => Verdict::Worse,
        std::cmp::Ordering::Equal => Verdict::Equal,
    }
}
