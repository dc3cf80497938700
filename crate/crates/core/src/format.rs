//! Canonical text rendering of programs.
//!
//! The output re-parses to a structurally identical program. Scalar
//! annotations print as `:p`, `[1,1]` is omitted, and single-combination
//! preference heads keep a trailing `>>`.

use std::fmt::{self, Display, Formatter, Write};

use crate::syntax::{
    Aggregate, AggregateAtom, AnnotatedLiteral, AnnotationItem, AnnotationSpec, ArithOp, Atom,
    BodyElement, Combination, GeneratorRule, HeadAtom, HybridLiteral, Leaf, Literal, OptAggregate,
    PreferenceRule, ProbabilitySet, Program, SetElement, Term, Value,
};

fn write_args<T: Display>(f: &mut Formatter<'_>, name: &str, args: &[T]) -> fmt::Result {
    f.write_str(name)?;
    if args.is_empty() {
        return Ok(());
    }
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

impl Display for Value {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(q) => write!(f, "{q}"),
            Value::Func(name, args) => write_args(f, name, args),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_char('-')?;
        }
        write_args(f, &self.predicate, &self.args)
    }
}

fn precedence(op: ArithOp) -> u8 {
    match op {
        ArithOp::Add | ArithOp::Sub => 1,
        ArithOp::Mul => 2,
    }
}

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Num(q) => write!(f, "{q}"),
            Term::Var(v) => f.write_str(v),
            Term::Func(name, args) => write_args(f, name, args),
            Term::Arith(op, l, r) => {
                let p = precedence(*op);
                let wrap_left = matches!(**l, Term::Arith(lop, ..) if precedence(lop) < p);
                let wrap_right = matches!(**r, Term::Arith(rop, ..) if precedence(rop) <= p)
                    || matches!(**r, Term::Num(ref q) if q.is_negative());
                let symbol = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                };
                if wrap_left {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " {symbol} ")?;
                if wrap_right {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_char('-')?;
        }
        write_args(f, &self.predicate, &self.args)
    }
}

impl Display for HybridLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let (lits, connective) = match self {
            HybridLiteral::Simple(l) => return write!(f, "{l}"),
            HybridLiteral::Conj(ls, s) => (ls, format!(" ^{s} ")),
            HybridLiteral::Disj(ls, s) => (ls, format!(" v{s} ")),
        };
        f.write_char('(')?;
        for (i, l) in lits.iter().enumerate() {
            if i > 0 {
                f.write_str(&connective)?;
            }
            write!(f, "{l}")?;
        }
        f.write_char(')')
    }
}

impl Display for AnnotationItem {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            AnnotationItem::Const(q) => write!(f, "{q}"),
            AnnotationItem::Var(v) => f.write_str(v),
            AnnotationItem::Apply(func, args) => write_args(f, func.name(), args),
        }
    }
}

impl Display for AnnotationSpec {
    /// The annotation body without the leading colon.
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{},{}]", self.lo, self.hi)
        }
    }
}

/// Writes `:ann` unless the annotation is the implicit `[1,1]`.
fn write_suffix(f: &mut Formatter<'_>, ann: &AnnotationSpec) -> fmt::Result {
    if ann.is_certain() {
        Ok(())
    } else {
        write!(f, ":{ann}")
    }
}

impl Display for AnnotatedLiteral {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal)?;
        write_suffix(f, &self.annotation)
    }
}

impl Display for HeadAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.literal)?;
        write_suffix(f, &self.annotation)
    }
}

impl Display for SetElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.value, self.annotation)?;
        if !self.condition.is_empty() {
            f.write_str(" | ")?;
            write_joined(f, &self.condition, ", ")?;
        }
        Ok(())
    }
}

impl Display for ProbabilitySet {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.elements.is_empty() {
            return f.write_str("{ }");
        }
        f.write_str("{ ")?;
        write_joined(f, &self.elements, "; ")?;
        f.write_str(" }")
    }
}

impl Display for Aggregate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.function.keyword(), self.set)
    }
}

impl Display for AggregateAtom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ", self.aggregate, self.relation.symbol())?;
        if self.guard_lo == self.guard_hi {
            write!(f, "{}", self.guard_lo)?;
        } else {
            write!(f, "[{},{}]", self.guard_lo, self.guard_hi)?;
        }
        if !self.annotation.is_certain() {
            write!(f, " : {}", self.annotation)?;
        }
        Ok(())
    }
}

impl Display for OptAggregate {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.aggregate.function == self.kind.default_function() {
            write!(f, "#{}{}", self.kind.keyword(), self.aggregate.set)
        } else {
            write!(f, "#{}({})", self.kind.keyword(), self.aggregate)
        }
    }
}

fn write_naf(f: &mut Formatter<'_>, naf: bool) -> fmt::Result {
    if naf {
        f.write_str("not ")?;
    }
    Ok(())
}

impl Display for BodyElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            BodyElement::Literal { naf, lit } => {
                write_naf(f, *naf)?;
                write!(f, "{lit}")
            }
            BodyElement::Aggregate { naf, atom } => {
                write_naf(f, *naf)?;
                write!(f, "{atom}")
            }
            BodyElement::Compare { left, rel, right } => write!(f, "{left} {} {right}", rel.symbol()),
        }
    }
}

impl Display for Leaf {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Leaf::Literal { naf, lit } => {
                write_naf(f, *naf)?;
                write!(f, "{lit}")
            }
            Leaf::Aggregate { naf, atom } => {
                write_naf(f, *naf)?;
                write!(f, "{atom}")
            }
            Leaf::Optimize(opt) => write!(f, "{opt}"),
        }
    }
}

impl Display for Combination {
    /// `&&` binds tighter than `||`; both associate to the left.
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        let (l, r, symbol, wrap_left, wrap_right) = match self {
            Combination::Leaf(leaf) => return write!(f, "{leaf}"),
            Combination::And(l, r) => (
                l,
                r,
                "&&",
                matches!(**l, Combination::Or(..)),
                !matches!(**r, Combination::Leaf(_)),
            ),
            Combination::Or(l, r) => (l, r, "||", false, matches!(**r, Combination::Or(..))),
        };
        if wrap_left {
            write!(f, "({l})")?;
        } else {
            write!(f, "{l}")?;
        }
        write!(f, " {symbol} ")?;
        if wrap_right {
            write!(f, "({r})")
        } else {
            write!(f, "{r}")
        }
    }
}

fn write_joined<T: Display>(f: &mut Formatter<'_>, items: &[T], sep: &str) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

fn write_body(f: &mut Formatter<'_>, body: &[BodyElement]) -> fmt::Result {
    if !body.is_empty() {
        f.write_str(" :- ")?;
        write_joined(f, body, ", ")?;
    }
    f.write_char('.')
}

impl Display for GeneratorRule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.head.is_empty() {
            f.write_str(":- ")?;
            write_joined(f, &self.body, ", ")?;
            return f.write_char('.');
        }
        write_joined(f, &self.head, " | ")?;
        write_body(f, &self.body)
    }
}

impl Display for PreferenceRule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.head, " >> ")?;
        if self.head.len() == 1 {
            f.write_str(" >>")?;
        }
        write_body(f, &self.body)
    }
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&format_program(self))
    }
}

/// Canonical text: strategy directives, then generator rules, then
/// preference rules, one per line.
pub fn format_program(program: &Program) -> String {
    let mut out = String::new();
    for (key, strategy) in &program.strategies {
        let _ = writeln!(out, "#strategy {key} {strategy}.");
    }
    for rule in &program.generator {
        let _ = writeln!(out, "{rule}");
    }
    for rule in &program.preferences {
        let _ = writeln!(out, "{rule}");
    }
    out
}
