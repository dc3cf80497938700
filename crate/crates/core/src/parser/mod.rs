//! Text format of `.paso` programs.
//!
//! ```text
//! #strategy p max.
//! domX(500) | domX(550).
//! domY1(0):0.6 | domY1(50):0.6.
//! :- domX(X), domY2(Y2):0.4, X + Y2 < 700.
//! #minx { Cost : 1 | objective(X,Y1,Y2,Cost) } >> .
//! ```
//!
//! Rules whose head contains `>>` or an optimization aggregate are
//! preference rules; all others are generator rules.

mod grammar;
mod lexer;
mod validate;

use std::fmt;

use crate::syntax::Program;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub col: usize,
}

/// A source range; `end` is exclusive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: String,
    pub start: Position,
    pub end: Position,
}

impl SourceSpan {
    pub fn to(&self, other: &SourceSpan) -> SourceSpan {
        SourceSpan { file: self.file.clone(), start: self.start, end: other.end.max(self.end) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl ParseDiagnostic {
    pub fn error(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Error, message: message.into(), span }
    }

    pub fn warning(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseDiagnostic { severity: Severity::Warning, message: message.into(), span }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.span.file, self.span.start.line, self.span.start.col, self.severity, self.message
        )
    }
}

/// A successfully parsed program with any warnings.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub program: Program,
    pub warnings: Vec<ParseDiagnostic>,
}

/// Parses and validates a program; on failure returns every diagnostic,
/// errors and warnings, in source order.
pub fn parse_named(file: &str, source: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let tokens = match lexer::tokenize(file, source) {
        Ok(tokens) => tokens,
        Err(e) => return Err(vec![ParseDiagnostic::error(e.message, e.span)]),
    };
    let (program, mut diagnostics) = grammar::parse_tokens(&tokens);
    diagnostics.sort_by_key(|d| (d.span.start, d.severity));
    if diagnostics.iter().any(ParseDiagnostic::is_error) {
        Err(diagnostics)
    } else {
        Ok(Parsed { program, warnings: diagnostics })
    }
}

pub fn parse_program(source: &str) -> Result<Program, Vec<ParseDiagnostic>> {
    parse_named("<input>", source).map(|parsed| parsed.program)
}
