//! Rule classification and static checks that need the whole rule.

use std::collections::BTreeSet;

use super::grammar::{HeadSep, RawRule, Spanned};
use super::ParseDiagnostic;
use crate::grounder::{classify_variables, positive_body_vars};
use crate::syntax::{
    BodyElement, Combination, GeneratorRule, HeadAtom, HybridLiteral, Leaf, PreferenceRule, RuleRef,
};

pub(super) enum Rule {
    Generator(GeneratorRule),
    Preference(PreferenceRule),
}

fn has_optimization(c: &Combination) -> bool {
    c.leaves().iter().any(|l| matches!(l, Leaf::Optimize(_)))
}

pub(super) fn classify(raw: RawRule) -> Result<Rule, Vec<ParseDiagnostic>> {
    let preference = raw.separators.iter().any(|s| s.node == HeadSep::Prefer)
        || raw.head.iter().any(|h| has_optimization(&h.node));
    let mut errors = Vec::new();
    let body: Vec<BodyElement> = raw.body.iter().map(|b| b.node.clone()).collect();

    let rule = if preference {
        for sep in raw.separators.iter().filter(|s| s.node == HeadSep::Bar) {
            errors.push(ParseDiagnostic::error("`|` is not allowed in preference rule heads", sep.span.clone()));
        }
        Rule::Preference(PreferenceRule { head: raw.head.into_iter().map(|h| h.node).collect(), body })
    } else {
        let head = raw.head.into_iter().filter_map(|h| head_atom(h, &mut errors)).collect();
        for element in &raw.body {
            if matches!(element.node, BodyElement::Aggregate { .. }) {
                errors.push(ParseDiagnostic::error(
                    "aggregates are only supported in preference rules",
                    element.span.clone(),
                ));
            }
        }
        Rule::Generator(GeneratorRule { head, body })
    };

    let rule_ref = match &rule {
        Rule::Generator(r) => RuleRef::Generator(r),
        Rule::Preference(r) => RuleRef::Preference(r),
    };
    check_safety(rule_ref, &raw.span, &mut errors);

    if errors.is_empty() {
        Ok(rule)
    } else {
        Err(errors)
    }
}

fn head_atom(item: Spanned<Combination>, errors: &mut Vec<ParseDiagnostic>) -> Option<HeadAtom> {
    let message = match item.node {
        Combination::Leaf(Leaf::Literal { naf: false, lit }) => match lit.literal {
            HybridLiteral::Simple(literal) => return Some(HeadAtom { literal, annotation: lit.annotation }),
            _ => "hybrid literals are not allowed in rule heads",
        },
        Combination::Leaf(Leaf::Literal { naf: true, .. }) => "negation as failure is not allowed in rule heads",
        Combination::Leaf(Leaf::Aggregate { .. }) => "aggregate atoms are only allowed in preference rules",
        Combination::Leaf(Leaf::Optimize(_)) => unreachable!("optimization aggregates make a preference rule"),
        Combination::And(..) | Combination::Or(..) => {
            "`&&` and `||` are only allowed in preference rule heads (add `>>` to make one)"
        }
    };
    errors.push(ParseDiagnostic::error(message, item.span));
    None
}

/// Every global variable must occur in a positive body literal, and every
/// local variable of a probability set must occur in its element's condition.
fn check_safety(rule: RuleRef<'_>, span: &super::SourceSpan, errors: &mut Vec<ParseDiagnostic>) {
    let classes = classify_variables(rule);
    let bound = positive_body_vars(rule.body());
    let head_annotation_vars: BTreeSet<String> = match rule {
        RuleRef::Generator(r) => {
            let mut vars = BTreeSet::new();
            r.head.iter().for_each(|h| h.annotation.collect_vars(&mut vars));
            vars
        }
        RuleRef::Preference(_) => BTreeSet::new(),
    };
    for var in classes.global.difference(&bound) {
        let message = if head_annotation_vars.contains(var) {
            format!("annotation variable {var} in the head is not bound by the body")
        } else {
            format!("unsafe variable {var}: it must occur in a positive body literal")
        };
        errors.push(ParseDiagnostic::error(message, span.clone()));
    }
    for (set, locals) in rule.sets().into_iter().zip(&classes.local) {
        for element in &set.elements {
            let mut condition_vars = BTreeSet::new();
            for lit in &element.condition {
                lit.literal.collect_vars(&mut condition_vars);
            }
            let mut element_vars = BTreeSet::new();
            element.collect_vars(&mut element_vars);
            for var in element_vars.intersection(locals) {
                if !condition_vars.contains(var) {
                    errors.push(ParseDiagnostic::error(
                        format!("variable {var} of a probability set must occur in the element's condition"),
                        span.clone(),
                    ));
                }
            }
        }
    }
}
