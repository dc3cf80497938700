use super::{Position, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    /// Lowercase-initial identifier, including keywords such as `not`.
    Ident(String),
    /// Uppercase- or underscore-initial variable.
    Var(String),
    /// Unsigned numeric literal: `12`, `0.6` or `1/3`.
    Number(String),
    /// `#name`.
    Hash(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Dot,
    Colon,
    If,
    Bar,
    OrOr,
    AndAnd,
    Prefer,
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
    Plus,
    Minus,
    Star,
    Caret,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Hash(s) => format!("`#{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Semicolon => ";",
            Tok::Dot => ".",
            Tok::Colon => ":",
            Tok::If => ":-",
            Tok::Bar => "|",
            Tok::OrOr => "||",
            Tok::AndAnd => "&&",
            Tok::Prefer => ">>",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Ge => ">=",
            Tok::Gt => ">",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub message: String,
    pub span: SourceSpan,
}

struct Cursor<'a> {
    chars: Vec<char>,
    index: usize,
    line: usize,
    col: usize,
    file: &'a str,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.index).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.index + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.index += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn position(&self) -> Position {
        Position { line: self.line, col: self.col }
    }

    fn span_from(&self, start: Position) -> SourceSpan {
        SourceSpan { file: self.file.to_string(), start, end: self.position() }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek().filter(|&c| pred(c)) {
            out.push(c);
            self.bump();
        }
        out
    }
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

pub fn tokenize(file: &str, source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { chars: source.chars().collect(), index: 0, line: 1, col: 1, file };
    let mut tokens = Vec::new();
    loop {
        while let Some(c) = cur.peek() {
            if c.is_whitespace() {
                cur.bump();
            } else if c == '%' {
                cur.take_while(|c| c != '\n');
            } else {
                break;
            }
        }
        let start = cur.position();
        let Some(c) = cur.peek() else {
            tokens.push(Token { tok: Tok::Eof, span: cur.span_from(start) });
            return Ok(tokens);
        };
        let tok = if c.is_ascii_lowercase() {
            Tok::Ident(cur.take_while(is_word))
        } else if c.is_ascii_uppercase() || c == '_' {
            Tok::Var(cur.take_while(is_word))
        } else if c.is_ascii_digit() {
            let mut text = cur.take_while(|c| c.is_ascii_digit());
            for sep in ['.', '/'] {
                if cur.peek() == Some(sep) && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit()) {
                    cur.bump();
                    text.push(sep);
                    text.push_str(&cur.take_while(|c| c.is_ascii_digit()));
                    break;
                }
            }
            Tok::Number(text)
        } else if c == '#' {
            cur.bump();
            let name = cur.take_while(is_word);
            if name.is_empty() {
                return Err(LexError { message: "expected a name after `#`".into(), span: cur.span_from(start) });
            }
            Tok::Hash(name)
        } else {
            cur.bump();
            let next = cur.peek();
            let two = |tok: Tok, cur: &mut Cursor| {
                cur.bump();
                tok
            };
            match (c, next) {
                (':', Some('-')) => two(Tok::If, &mut cur),
                ('|', Some('|')) => two(Tok::OrOr, &mut cur),
                ('&', Some('&')) => two(Tok::AndAnd, &mut cur),
                ('>', Some('>')) => two(Tok::Prefer, &mut cur),
                ('>', Some('=')) => two(Tok::Ge, &mut cur),
                ('<', Some('=')) => two(Tok::Le, &mut cur),
                ('!', Some('=')) => two(Tok::Ne, &mut cur),
                ('(', _) => Tok::LParen,
                (')', _) => Tok::RParen,
                ('[', _) => Tok::LBracket,
                (']', _) => Tok::RBracket,
                ('{', _) => Tok::LBrace,
                ('}', _) => Tok::RBrace,
                (',', _) => Tok::Comma,
                (';', _) => Tok::Semicolon,
                ('.', _) => Tok::Dot,
                (':', _) => Tok::Colon,
                ('|', _) => Tok::Bar,
                ('<', _) => Tok::Lt,
                ('>', _) => Tok::Gt,
                ('=', _) => Tok::Eq,
                ('+', _) => Tok::Plus,
                ('-', _) => Tok::Minus,
                ('*', _) => Tok::Star,
                ('^', _) => Tok::Caret,
                _ => {
                    return Err(LexError {
                        message: format!("unexpected character `{c}`"),
                        span: cur.span_from(start),
                    })
                }
            }
        };
        tokens.push(Token { tok, span: cur.span_from(start) });
    }
}
