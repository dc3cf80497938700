//! Seeded random program text.

use rand::seq::SliceRandom;
use rand::Rng;

const HEAD_ANNOTATIONS: [&str; 6] = ["", "", ":0.5", ":[0.2,0.6]", ":0.8", ":[0.5,1]"];
const THRESHOLDS: [&str; 5] = ["", "", ":0.3", ":[0.1,0.5]", ":0.6"];
const FUNCTIONS: [&str; 11] =
    ["vale", "sume", "timese", "mine", "maxe", "counte", "sump", "timesp", "minp", "maxp", "countp"];
const RELATIONS: [&str; 6] = ["=", "!=", "<", "<=", ">", ">="];
const GUARDS: [&str; 5] = ["0", "1", "0.5", "[0.2,1]", "[1,2]"];
const ELEMENT_VALUES: [&str; 5] = ["1", "2", "3", "-1", "0.5"];
const ELEMENT_ANNOTATIONS: [&str; 4] = ["1", "0.5", "[0.2,0.6]", "0.9"];

pub struct Shape {
    pub atoms: usize,
    pub negated: usize,
}

fn literals(shape: &Shape) -> Vec<String> {
    let mut out: Vec<String> = (0..shape.atoms).map(|i| format!("p{i}")).collect();
    out.extend((0..shape.negated).map(|i| format!("-p{i}")));
    out
}

fn pick<'a, R: Rng>(rng: &mut R, xs: &'a [&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

fn distinct<R: Rng>(rng: &mut R, pool: &[String], n: usize) -> Vec<String> {
    pool.choose_multiple(rng, n.min(pool.len())).cloned().collect()
}

fn body_literal<R: Rng>(rng: &mut R, lits: &[String], annotated: bool) -> String {
    let threshold = if annotated { pick(rng, &THRESHOLDS) } else { "" };
    if annotated && rng.gen_bool(0.1) {
        let pair = distinct(rng, lits, 2);
        let op = pick(rng, &["^ind", "^min", "vind", "vmax"]);
        return format!("({} {op} {}){}", pair[0], pair[1], pick(rng, &[":0.2", ":0.5", ""]));
    }
    format!("{}{threshold}", lits.choose(rng).unwrap())
}

fn body<R: Rng>(rng: &mut R, lits: &[String], len: usize, annotated: bool) -> Vec<String> {
    (0..len)
        .map(|_| {
            let lit = body_literal(rng, lits, annotated);
            if rng.gen_bool(0.3) {
                format!("not {lit}")
            } else {
                lit
            }
        })
        .collect()
}

fn rule(head: &[String], body: &[String]) -> String {
    let head = head.join(" | ");
    match (head.is_empty(), body.is_empty()) {
        (_, true) => format!("{head}.\n"),
        (true, false) => format!(":- {}.\n", body.join(", ")),
        (false, false) => format!("{head} :- {}.\n", body.join(", ")),
    }
}

fn set<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    let n = rng.gen_range(1..=3);
    let elements: Vec<String> = (0..n)
        .map(|_| {
            format!(
                "{} : {} | {}",
                pick(rng, &ELEMENT_VALUES),
                pick(rng, &ELEMENT_ANNOTATIONS),
                body_literal(rng, lits, true)
            )
        })
        .collect();
    format!("{{ {} }}", elements.join("; "))
}

fn aggregate_atom<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    let function = pick(rng, &FUNCTIONS);
    let set = set(rng, lits);
    let guard = pick(rng, &GUARDS);
    let rel = pick(rng, &RELATIONS);
    let annotation = if function.ends_with('p') { pick(rng, &["", " : 0.2", " : [0.1,0.5]"]) } else { "" };
    let naf = if rng.gen_bool(0.2) { "not " } else { "" };
    format!("{naf}#{function}{set} {rel} {guard}{annotation}")
}

fn optimization<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    let set = set(rng, lits);
    let (kind, functions): (&str, &[&str]) = match rng.gen_range(0..4) {
        0 => (pick(rng, &["max", "min"]), &FUNCTIONS[..6]),
        1 => (pick(rng, &["maxmu", "minmu"]), &FUNCTIONS[6..]),
        2 => (pick(rng, &["maxx", "minx"]), &FUNCTIONS[6..]),
        _ => (pick(rng, &["maxxmu", "minxmu"]), &FUNCTIONS[6..]),
    };
    if rng.gen_bool(0.5) {
        format!("#{kind}{set}")
    } else {
        format!("#{kind}(#{}{set})", pick(rng, functions))
    }
}

fn leaf<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    match rng.gen_range(0..10) {
        0..=4 => {
            let lit = body_literal(rng, lits, true);
            if rng.gen_bool(0.3) {
                format!("not {lit}")
            } else {
                lit
            }
        }
        5..=7 => aggregate_atom(rng, lits),
        _ => optimization(rng, lits),
    }
}

fn combination<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    match rng.gen_range(0..4) {
        0 => format!("{} && {}", leaf(rng, lits), leaf(rng, lits)),
        1 => format!("({} || {})", leaf(rng, lits), leaf(rng, lits)),
        _ => leaf(rng, lits),
    }
}

/// A ground program over at most twelve literals, four disjunctive rules
/// and two preference rules.
pub fn random_program<R: Rng>(rng: &mut R) -> String {
    let shape = Shape { atoms: rng.gen_range(3..=7), negated: rng.gen_range(0..=2) };
    let lits = literals(&shape);
    let mut out = String::new();
    for lit in lits.iter().filter(|l| !l.starts_with('-')) {
        if rng.gen_bool(0.2) {
            out.push_str(&format!("#strategy {lit} {}.\n", pick(rng, &["max", "ind"])));
        }
    }
    let head = |rng: &mut R, n: usize| -> Vec<String> {
        distinct(rng, &lits, n).into_iter().map(|l| format!("{l}{}", pick(rng, &HEAD_ANNOTATIONS))).collect()
    };
    for _ in 0..rng.gen_range(1..=4) {
        let n = rng.gen_range(2..=3);
        let h = head(rng, n);
        let len = if rng.gen_bool(0.6) { 0 } else { rng.gen_range(1..=2) };
        out.push_str(&rule(&h, &body(rng, &lits, len, true)));
    }
    for _ in 0..rng.gen_range(1..=3) {
        let h = head(rng, 1);
        let len = rng.gen_range(0..=2);
        out.push_str(&rule(&h, &body(rng, &lits, len, true)));
    }
    if rng.gen_bool(0.25) {
        let len = rng.gen_range(1..=2);
        out.push_str(&rule(&[], &body(rng, &lits, len, true)));
    }
    for _ in 0..rng.gen_range(1..=2) {
        let n = rng.gen_range(1..=3);
        let heads: Vec<String> = (0..n).map(|_| combination(rng, &lits)).collect();
        let guard = if rng.gen_bool(0.4) { format!(" :- {}", body(rng, &lits, 1, true)[0]) } else { String::new() };
        out.push_str(&format!("{} >>{guard}.\n", heads.join(" >> ")));
    }
    out
}

fn classical_combination<R: Rng>(rng: &mut R, lits: &[String]) -> String {
    let leaf = |rng: &mut R| {
        let lit = lits.choose(rng).unwrap().clone();
        if rng.gen_bool(0.3) {
            format!("not {lit}")
        } else {
            lit
        }
    };
    if rng.gen_bool(0.25) {
        format!("{} && {}", leaf(rng), leaf(rng))
    } else {
        leaf(rng)
    }
}

/// A program whose annotations are all `[1,1]` and whose preference heads
/// use only literals, negated literals and conjunction.
pub fn random_classical_program<R: Rng>(rng: &mut R) -> String {
    let shape = Shape { atoms: rng.gen_range(3..=6), negated: rng.gen_range(0..=2) };
    let lits = literals(&shape);
    let mut out = String::new();
    for _ in 0..rng.gen_range(1..=3) {
        let n = rng.gen_range(2..=3);
        let h = distinct(rng, &lits, n);
        let len = rng.gen_range(0..=1);
        out.push_str(&rule(&h, &body(rng, &lits, len, false)));
    }
    for _ in 0..rng.gen_range(1..=4) {
        let h = distinct(rng, &lits, 1);
        let len = rng.gen_range(1..=2);
        out.push_str(&rule(&h, &body(rng, &lits, len, false)));
    }
    if rng.gen_bool(0.3) {
        let len = rng.gen_range(1..=2);
        out.push_str(&rule(&[], &body(rng, &lits, len, false)));
    }
    for _ in 0..rng.gen_range(1..=2) {
        let n = rng.gen_range(1..=3);
        let heads: Vec<String> = (0..n).map(|_| classical_combination(rng, &lits)).collect();
        let guard = if rng.gen_bool(0.3) { format!(" :- {}", lits.choose(rng).unwrap()) } else { String::new() };
        out.push_str(&format!("{} >>{guard}.\n", heads.join(" >> ")));
    }
    out
}
