//! Recursive-descent parser over the token stream.
//!
//! Backtracking is used in two places: a body element is first tried as an
//! arithmetic comparison, and a parenthesized head item is first tried as a
//! hybrid literal.

use std::collections::{BTreeMap, HashMap};

use super::lexer::{Tok, Token};
use super::validate::{self, Rule};
use super::{ParseDiagnostic, SourceSpan};
use crate::rational::Rational;
use crate::strategy::{PStrategy, StrategyKind};
use crate::syntax::{
    Aggregate, AggregateAtom, AggregateFamily, AggregateFunction, AnnotatedLiteral, AnnotationFn,
    AnnotationItem, AnnotationSpec, ArithOp, BodyElement, Combination, HybridLiteral, Leaf, Literal,
    OptAggregate, OptKind, ProbabilitySet, Program, Relation, SetElement, Term,
};

type PResult<T> = Result<T, ParseDiagnostic>;

#[derive(Debug, Clone)]
pub(super) struct Spanned<T> {
    pub node: T,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum HeadSep {
    Bar,
    Prefer,
}

/// A rule before classification into generator or preference rule.
#[derive(Debug, Clone)]
pub(super) struct RawRule {
    pub head: Vec<Spanned<Combination>>,
    pub separators: Vec<Spanned<HeadSep>>,
    pub body: Vec<Spanned<BodyElement>>,
    pub span: SourceSpan,
}

/// Side effects recorded while parsing a statement; discarded when a
/// backtracking attempt is abandoned.
#[derive(Debug, Clone)]
enum Note {
    Literal { predicate: String, negated: bool, arity: usize, span: SourceSpan },
    Diag(ParseDiagnostic),
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    notes: Vec<Note>,
}

#[derive(Clone, Copy)]
struct Mark {
    pos: usize,
    notes: usize,
}

fn relation(tok: &Tok) -> Option<Relation> {
    Some(match tok {
        Tok::Lt => Relation::Lt,
        Tok::Le => Relation::Le,
        Tok::Eq => Relation::Eq,
        Tok::Ne => Relation::Ne,
        Tok::Ge => Relation::Ge,
        Tok::Gt => Relation::Gt,
        _ => return None,
    })
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.tokens[self.pos].span.clone()
    }

    fn prev_span(&self) -> SourceSpan {
        self.tokens[self.pos.saturating_sub(1)].span.clone()
    }

    fn since(&self, start: &SourceSpan) -> SourceSpan {
        start.to(&self.prev_span())
    }

    fn bump(&mut self) -> &'a Token {
        let token = &self.tokens[self.pos];
        if token.tok != Tok::Eof {
            self.pos += 1;
        }
        token
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, word: &str) -> bool {
        matches!(self.peek(), Tok::Ident(w) if w == word)
    }

    fn unexpected(&self, expected: &str) -> ParseDiagnostic {
        ParseDiagnostic::error(format!("expected {expected}, found {}", self.peek().describe()), self.span())
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> PResult<SourceSpan> {
        if self.peek() == &tok {
            Ok(self.bump().span.clone())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn mark(&self) -> Mark {
        Mark { pos: self.pos, notes: self.notes.len() }
    }

    fn reset(&mut self, mark: Mark) {
        self.pos = mark.pos;
        self.notes.truncate(mark.notes);
    }

    fn note_error(&mut self, message: impl Into<String>, span: SourceSpan) {
        self.notes.push(Note::Diag(ParseDiagnostic::error(message, span)));
    }

    fn recover(&mut self) {
        while !matches!(self.peek(), Tok::Dot | Tok::Eof) {
            self.bump();
        }
        self.eat(&Tok::Dot);
    }

    // ---- statements ----

    fn parse_directive(&mut self) -> PResult<(String, PStrategy)> {
        self.bump();
        let negated = self.eat(&Tok::Minus);
        let predicate = match self.peek() {
            Tok::Ident(name) => name.clone(),
            _ => return Err(self.unexpected("a predicate name")),
        };
        self.bump();
        let strategy = match self.peek() {
            Tok::Ident(name) => PStrategy::lookup(StrategyKind::Disjunctive, name),
            _ => None,
        };
        let Some(strategy) = strategy else {
            return Err(self.unexpected("a disjunctive strategy (`ind` or `max`)"));
        };
        self.bump();
        self.expect(Tok::Dot, "`.`")?;
        Ok((crate::syntax::strategy_key(negated, &predicate), strategy))
    }

    fn parse_rule(&mut self) -> PResult<RawRule> {
        let start = self.span();
        let mut head = Vec::new();
        let mut separators = Vec::new();
        if self.eat(&Tok::If) {
            let body = self.parse_body()?;
            self.expect(Tok::Dot, "`,` or `.`")?;
            return Ok(RawRule { head, separators, body, span: self.since(&start) });
        }
        loop {
            head.push(self.parse_or()?);
            let sep = match self.peek() {
                Tok::Bar => HeadSep::Bar,
                Tok::Prefer => HeadSep::Prefer,
                _ => break,
            };
            let span = self.bump().span.clone();
            separators.push(Spanned { node: sep, span });
            if sep == HeadSep::Prefer && matches!(self.peek(), Tok::Dot | Tok::If) {
                break;
            }
        }
        let body = if self.eat(&Tok::If) { self.parse_body()? } else { Vec::new() };
        self.expect(Tok::Dot, "`.`")?;
        Ok(RawRule { head, separators, body, span: self.since(&start) })
    }

    // ---- preference heads ----

    fn parse_or(&mut self) -> PResult<Spanned<Combination>> {
        let start = self.span();
        let mut left = self.parse_and()?;
        while self.eat(&Tok::OrOr) {
            let right = self.parse_and()?;
            left = Combination::or(left, right);
        }
        Ok(Spanned { node: left, span: self.since(&start) })
    }

    fn parse_and(&mut self) -> PResult<Combination> {
        let mut left = self.parse_primary()?;
        while self.eat(&Tok::AndAnd) {
            let right = self.parse_primary()?;
            left = Combination::and(left, right);
        }
        Ok(left)
    }

    fn parse_primary(&mut self) -> PResult<Combination> {
        if self.peek() != &Tok::LParen {
            return self.parse_leaf().map(Combination::Leaf);
        }
        let mark = self.mark();
        let leaf_err = match self.parse_leaf() {
            Ok(leaf) => return Ok(Combination::Leaf(leaf)),
            Err(e) => e,
        };
        let leaf_reached = self.pos;
        self.reset(mark);
        self.bump();
        let grouped = self.parse_or().and_then(|inner| {
            self.expect(Tok::RParen, "`)`")?;
            Ok(inner.node)
        });
        match grouped {
            Ok(c) => Ok(c),
            Err(_) if leaf_reached > self.pos => Err(leaf_err),
            Err(e) => Err(e),
        }
    }

    fn parse_leaf(&mut self) -> PResult<Leaf> {
        let start = self.span();
        let naf = self.is_keyword("not");
        if naf {
            self.bump();
        }
        if let Tok::Hash(name) = self.peek() {
            if OptKind::from_keyword(name).is_some() {
                let opt = self.parse_opt()?;
                if naf {
                    self.note_error("optimization aggregates cannot be negated", self.since(&start));
                }
                return Ok(Leaf::Optimize(opt));
            }
            let atom = self.parse_aggregate_atom()?;
            return Ok(Leaf::Aggregate { naf, atom });
        }
        Ok(Leaf::Literal { naf, lit: self.parse_annotated_literal()? })
    }

    // ---- bodies ----

    fn parse_body(&mut self) -> PResult<Vec<Spanned<BodyElement>>> {
        let mut body = vec![self.parse_body_element()?];
        while self.eat(&Tok::Comma) {
            body.push(self.parse_body_element()?);
        }
        Ok(body)
    }

    fn parse_body_element(&mut self) -> PResult<Spanned<BodyElement>> {
        let start = self.span();
        let naf = self.is_keyword("not");
        if naf {
            self.bump();
        }
        let node = if let Tok::Hash(name) = self.peek() {
            if OptKind::from_keyword(name).is_some() {
                return Err(ParseDiagnostic::error(
                    "optimization aggregates are only allowed in preference rule heads",
                    self.span(),
                ));
            }
            BodyElement::Aggregate { naf, atom: self.parse_aggregate_atom()? }
        } else if naf {
            BodyElement::Literal { naf, lit: self.parse_annotated_literal()? }
        } else {
            let mark = self.mark();
            let comparison = self.parse_term().ok().zip(relation(self.peek()));
            match comparison {
                Some((left, rel)) => {
                    self.bump();
                    let right = self.parse_term()?;
                    BodyElement::Compare { left, rel, right }
                }
                None => {
                    self.reset(mark);
                    BodyElement::Literal { naf, lit: self.parse_annotated_literal()? }
                }
            }
        };
        Ok(Spanned { node, span: self.since(&start) })
    }

    // ---- literals ----

    fn parse_annotated_literal(&mut self) -> PResult<AnnotatedLiteral> {
        let literal = self.parse_hybrid()?;
        let annotation = if self.eat(&Tok::Colon) { self.parse_annotation()? } else { AnnotationSpec::certain() };
        Ok(AnnotatedLiteral { literal, annotation })
    }

    fn parse_hybrid(&mut self) -> PResult<HybridLiteral> {
        if self.peek() != &Tok::LParen {
            return self.parse_literal().map(HybridLiteral::Simple);
        }
        let start = self.span();
        self.bump();
        let mut lits = vec![self.parse_literal()?];
        let strategy = self.parse_connective()?;
        loop {
            lits.push(self.parse_literal()?);
            if self.peek() == &Tok::RParen {
                break;
            }
            let span = self.span();
            if self.parse_connective()? != strategy {
                return Err(ParseDiagnostic::error("a hybrid literal must use a single connective", span));
            }
        }
        self.bump();
        let span = self.since(&start);
        for (i, l) in lits.iter().enumerate() {
            if lits[..i].contains(l) {
                self.note_error(format!("hybrid literal repeats `{l}`"), span.clone());
            }
        }
        Ok(match strategy.kind() {
            StrategyKind::Conjunctive => HybridLiteral::Conj(lits, strategy),
            StrategyKind::Disjunctive => HybridLiteral::Disj(lits, strategy),
        })
    }

    fn parse_connective(&mut self) -> PResult<PStrategy> {
        let found = match (self.peek(), self.peek_at(1)) {
            (Tok::Caret, Tok::Ident(name)) => PStrategy::lookup(StrategyKind::Conjunctive, name).map(|s| (s, 2)),
            (Tok::Ident(word), _) => word
                .strip_prefix('v')
                .and_then(|name| PStrategy::lookup(StrategyKind::Disjunctive, name))
                .map(|s| (s, 1)),
            _ => None,
        };
        match found {
            Some((strategy, width)) => {
                for _ in 0..width {
                    self.bump();
                }
                Ok(strategy)
            }
            None => Err(self.unexpected("a connective (`^ind`, `^min`, `vind` or `vmax`)")),
        }
    }

    fn parse_literal(&mut self) -> PResult<Literal> {
        let start = self.span();
        let negated = self.eat(&Tok::Minus);
        let predicate = match self.peek() {
            Tok::Ident(name) if name != "not" => name.clone(),
            _ => return Err(self.unexpected("a literal")),
        };
        self.bump();
        let args = if self.eat(&Tok::LParen) { self.parse_term_list(Tok::RParen)? } else { Vec::new() };
        let span = self.since(&start);
        self.notes.push(Note::Literal { predicate: predicate.clone(), negated, arity: args.len(), span });
        Ok(Literal { negated, predicate, args })
    }

    fn parse_term_list(&mut self, close: Tok) -> PResult<Vec<Term>> {
        let mut args = vec![self.parse_term()?];
        while self.eat(&Tok::Comma) {
            args.push(self.parse_term()?);
        }
        self.expect(close, "`,` or `)`")?;
        Ok(args)
    }

    // ---- terms ----

    fn parse_term(&mut self) -> PResult<Term> {
        let mut left = self.parse_product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.parse_product()?;
            left = Term::Arith(op, Box::new(left), Box::new(right));
        }
    }

    fn parse_product(&mut self) -> PResult<Term> {
        let mut left = self.parse_unary()?;
        while self.eat(&Tok::Star) {
            let right = self.parse_unary()?;
            left = Term::Arith(ArithOp::Mul, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> PResult<Term> {
        if !self.eat(&Tok::Minus) {
            return self.parse_term_primary();
        }
        Ok(match self.parse_unary()? {
            Term::Num(q) => Term::Num(-q),
            other => Term::Arith(ArithOp::Sub, Box::new(Term::Num(Rational::zero())), Box::new(other)),
        })
    }

    fn parse_term_primary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Number(text) => {
                let span = self.bump().span.clone();
                text.parse().map(Term::Num).map_err(|e| ParseDiagnostic::error(e.to_string(), span))
            }
            Tok::Var(name) => {
                self.bump();
                Ok(Term::Var(name))
            }
            Tok::Ident(name) if name != "not" => {
                self.bump();
                let args = if self.eat(&Tok::LParen) { self.parse_term_list(Tok::RParen)? } else { Vec::new() };
                Ok(Term::Func(name, args))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.parse_term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    // ---- annotations ----

    fn parse_annotation(&mut self) -> PResult<AnnotationSpec> {
        let start = self.span();
        if !self.eat(&Tok::LBracket) {
            return self.parse_annotation_item().map(AnnotationSpec::scalar);
        }
        let lo = self.parse_annotation_item()?;
        self.expect(Tok::Comma, "`,`")?;
        let hi = self.parse_annotation_item()?;
        self.expect(Tok::RBracket, "`]`")?;
        if let (Some(a), Some(b)) = (lo.constant(), hi.constant()) {
            if a > b {
                self.note_error(
                    format!("annotation lower bound {a} exceeds upper bound {b}"),
                    self.since(&start),
                );
            }
        }
        Ok(AnnotationSpec { lo, hi })
    }

    fn parse_annotation_item(&mut self) -> PResult<AnnotationItem> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Number(_) | Tok::Minus => {
                let Term::Num(q) = self.parse_unary()? else {
                    return Err(ParseDiagnostic::error("expected an annotation", self.since(&start)));
                };
                if !q.is_probability() {
                    self.note_error(format!("annotation {q} is outside [0,1]"), self.since(&start));
                }
                Ok(AnnotationItem::Const(q))
            }
            Tok::Var(name) => {
                self.bump();
                Ok(AnnotationItem::Var(name))
            }
            Tok::Ident(name) => {
                let Some(func) = AnnotationFn::from_name(&name) else {
                    return Err(ParseDiagnostic::error(
                        format!("unknown annotation function `{name}` (expected add, sub, mul, min or max)"),
                        self.span(),
                    ));
                };
                self.bump();
                self.expect(Tok::LParen, "`(`")?;
                let mut args = vec![self.parse_annotation_item()?];
                while self.eat(&Tok::Comma) {
                    args.push(self.parse_annotation_item()?);
                }
                self.expect(Tok::RParen, "`,` or `)`")?;
                if !func.arity_ok(args.len()) {
                    self.note_error(
                        format!("`{}` does not take {} arguments", func.name(), args.len()),
                        self.since(&start),
                    );
                }
                Ok(AnnotationItem::Apply(func, args))
            }
            _ => Err(self.unexpected("an annotation")),
        }
    }

    // ---- aggregates ----

    fn parse_set(&mut self) -> PResult<ProbabilitySet> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut elements = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(ProbabilitySet { elements });
        }
        loop {
            let value = self.parse_term()?;
            let annotation = if self.eat(&Tok::Colon) { self.parse_annotation()? } else { AnnotationSpec::certain() };
            let mut condition = Vec::new();
            if self.eat(&Tok::Bar) {
                condition.push(self.parse_annotated_literal()?);
                while self.eat(&Tok::Comma) {
                    condition.push(self.parse_annotated_literal()?);
                }
            }
            elements.push(SetElement { value, annotation, condition });
            if !self.eat(&Tok::Semicolon) {
                break;
            }
        }
        self.expect(Tok::RBrace, "`;` or `}`")?;
        Ok(ProbabilitySet { elements })
    }

    fn parse_aggregate(&mut self) -> PResult<Aggregate> {
        let function = match self.peek() {
            Tok::Hash(name) => AggregateFunction::from_keyword(name),
            _ => None,
        };
        let Some(function) = function else {
            return Err(self.unexpected("an aggregate function such as `#sume` or `#sump`"));
        };
        self.bump();
        Ok(Aggregate { function, set: self.parse_set()? })
    }

    fn parse_aggregate_atom(&mut self) -> PResult<AggregateAtom> {
        let start = self.span();
        let aggregate = self.parse_aggregate()?;
        let Some(rel) = relation(self.peek()) else {
            return Err(self.unexpected("a comparison after the aggregate"));
        };
        self.bump();
        let (guard_lo, guard_hi) = if self.eat(&Tok::LBracket) {
            let lo = self.parse_term()?;
            self.expect(Tok::Comma, "`,`")?;
            let hi = self.parse_term()?;
            self.expect(Tok::RBracket, "`]`")?;
            (lo, hi)
        } else {
            let t = self.parse_term()?;
            (t.clone(), t)
        };
        let annotation = if self.eat(&Tok::Colon) { self.parse_annotation()? } else { AnnotationSpec::certain() };
        if aggregate.function.family() == AggregateFamily::Expectation && annotation != AnnotationSpec::certain() {
            self.note_error(
                format!("`#{}` atoms carry the annotation [1,1]", aggregate.function.keyword()),
                self.since(&start),
            );
        }
        Ok(AggregateAtom { aggregate, relation: rel, guard_lo, guard_hi, annotation })
    }

    fn parse_opt(&mut self) -> PResult<OptAggregate> {
        let start = self.span();
        let Tok::Hash(name) = self.peek() else {
            return Err(self.unexpected("an optimization aggregate"));
        };
        let kind = OptKind::from_keyword(name).expect("caller checked the keyword");
        self.bump();
        if self.peek() == &Tok::LBrace {
            let set = self.parse_set()?;
            return Ok(OptAggregate { kind, aggregate: Aggregate { function: kind.default_function(), set } });
        }
        self.expect(Tok::LParen, "`{` or `(`")?;
        let aggregate = self.parse_aggregate()?;
        self.expect(Tok::RParen, "`)`")?;
        if aggregate.function.family() != kind.family() {
            let expected = match kind.family() {
                AggregateFamily::Expectation => "an expectation aggregate (#vale, #sume, #timese, #mine, #maxe, #counte)",
                AggregateFamily::Pair => "a pair aggregate (#sump, #timesp, #minp, #maxp, #countp)",
            };
            self.note_error(format!("`#{}` expects {expected}", kind.keyword()), self.since(&start));
        }
        Ok(OptAggregate { kind, aggregate })
    }
}

/// Parses every statement, recovering at the next `.` after a syntax error.
pub(super) fn parse_tokens(tokens: &[Token]) -> (Program, Vec<ParseDiagnostic>) {
    let mut parser = Parser { tokens, pos: 0, notes: Vec::new() };
    let mut program = Program::default();
    let mut diagnostics = Vec::new();
    let mut arities: HashMap<String, (usize, SourceSpan)> = HashMap::new();
    let mut used_keys = std::collections::BTreeSet::new();
    let mut directives: BTreeMap<String, SourceSpan> = BTreeMap::new();

    while parser.peek() != &Tok::Eof {
        parser.notes.clear();
        let start = parser.span();
        if matches!(parser.peek(), Tok::Hash(name) if name == "strategy") {
            match parser.parse_directive() {
                Ok((key, strategy)) => {
                    let span = parser.since(&start);
                    if program.strategies.insert(key.clone(), strategy).is_some() {
                        diagnostics.push(ParseDiagnostic::warning(
                            format!("`#strategy` for `{key}` overrides an earlier directive"),
                            span.clone(),
                        ));
                    }
                    directives.insert(key, span);
                }
                Err(e) => {
                    diagnostics.push(e);
                    parser.recover();
                }
            }
            continue;
        }
        let raw = match parser.parse_rule() {
            Ok(raw) => raw,
            Err(e) => {
                diagnostics.push(e);
                parser.recover();
                continue;
            }
        };
        for note in parser.notes.drain(..) {
            match note {
                Note::Diag(d) => diagnostics.push(d),
                Note::Literal { predicate, negated, arity, span } => {
                    used_keys.insert(crate::syntax::strategy_key(negated, &predicate));
                    match arities.get(&predicate) {
                        Some((expected, first)) if *expected != arity => diagnostics.push(ParseDiagnostic::error(
                            format!(
                                "predicate `{predicate}` used with {arity} arguments but with {expected} at {}:{}",
                                first.start.line, first.start.col
                            ),
                            span,
                        )),
                        Some(_) => {}
                        None => {
                            arities.insert(predicate, (arity, span));
                        }
                    }
                }
            }
        }
        match validate::classify(raw) {
            Ok(Rule::Generator(rule)) => program.generator.push(rule),
            Ok(Rule::Preference(rule)) => program.preferences.push(rule),
            Err(errors) => diagnostics.extend(errors),
        }
    }
    for (key, span) in directives {
        if !used_keys.contains(&key) {
            diagnostics.push(ParseDiagnostic::warning(
                format!("`#strategy` names `{key}`, which does not occur in any rule"),
                span,
            ));
        }
    }
    (program, diagnostics)
}
