//! S-expression scaffolding shared by the domain/problem/goal readers.

use super::PddlError;

/// A source position (1-based line and column).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Debug, Clone)]
pub enum Sexp {
    /// `text` is the canonical lower-case spelling, `raw` the original one.
    Symbol { text: String, raw: String, span: Span },
    List { items: Vec<Sexp>, span: Span },
}

impl Sexp {
    pub fn span(&self) -> Span {
        match self {
            Sexp::Symbol { span, .. } | Sexp::List { span, .. } => *span,
        }
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Sexp::Symbol { text, .. } => Some(text),
            Sexp::List { .. } => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List { items, .. } => Some(items),
            Sexp::Symbol { .. } => None,
        }
    }

    /// Symbol text, or a parse error pointing at this node.
    pub fn expect_symbol(&self, what: &str) -> Result<&str, PddlError> {
        self.as_symbol()
            .ok_or_else(|| PddlError::parse(self.span(), format!("expected {what}, found a list")))
    }

    /// List items, or a parse error pointing at this node.
    pub fn expect_list(&self, what: &str) -> Result<&[Sexp], PddlError> {
        self.as_list().ok_or_else(|| {
            PddlError::parse(self.span(), format!("expected {what}, found a symbol"))
        })
    }
}

struct Lexer<'a> {
    src: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.col,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.src.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    /// Skip whitespace and `;` line comments; report whether input remains.
    fn skip_trivia(&mut self) -> bool {
        loop {
            match self.src.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(_) => return true,
                None => return false,
            }
        }
    }
}

/// Parse every top-level form in `src`.
pub fn parse_forms(src: &str) -> Result<Vec<Sexp>, PddlError> {
    let mut lx = Lexer::new(src);
    let mut forms = Vec::new();
    while lx.skip_trivia() {
        forms.push(parse_one(&mut lx)?);
    }
    Ok(forms)
}

fn parse_one(lx: &mut Lexer) -> Result<Sexp, PddlError> {
    let span = lx.span();
    match lx.src.peek() {
        Some('(') => {
            lx.bump();
            let mut items = Vec::new();
            loop {
                if !lx.skip_trivia() {
                    return Err(PddlError::parse(span, "unbalanced parentheses: `(` never closed"));
                }
                if lx.src.peek() == Some(&')') {
                    lx.bump();
                    return Ok(Sexp::List { items, span });
                }
                items.push(parse_one(lx)?);
            }
        }
        Some(')') => Err(PddlError::parse(lx.span(), "unbalanced parentheses: unexpected `)`")),
        Some(_) => {
            let mut raw = String::new();
            while let Some(c) = lx.src.peek() {
                if c.is_whitespace() || *c == '(' || *c == ')' || *c == ';' {
                    break;
                }
                raw.push(*c);
                lx.bump();
            }
            Ok(Sexp::Symbol {
                text: raw.to_lowercase(),
                raw,
                span,
            })
        }
        None => Err(PddlError::parse(span, "unexpected end of input")),
    }
}
