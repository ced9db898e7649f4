//! Concrete text syntax for theories: lexer, parser, and printers.
//!
//! The format is line-comment (`%`) and whitespace insensitive. Each
//! statement ends with a period:
//!
//! ```text
//! theory  := stmt*
//! stmt    := "fact" literal "." | rule | suprel
//! rule    := label ":" [ body ] arrow literal "."
//! arrow   := "->" | "=>" | "~>"
//! body    := bexpr { "," bexpr }
//! bexpr   := [ "fail" ] [ "[" tagname "]" ] literal
//! tagname := "pa" | "pa*" | "de" | "de*" | "free"
//! literal := [ "~" ] ident
//! suprel  := label ">" label "."
//! ```
//!
//! `fact` and `fail` are reserved words; tag names are contextual (they are
//! ordinary identifiers outside brackets). An omitted tag means `free`.
//! Strict rules (`->`) accept neither tags nor fail-expressions; the parser
//! rejects them before they reach the theory.
//!
//! Parsing recovers at statement granularity: within one statement the
//! first error wins and the parser skips to the next period, so one bad
//! statement yields exactly one error and later statements are still
//! checked. Well-formedness violations (duplicate labels, cyclic
//! superiority, ...) are reported as `semantic` errors with a span pointing
//! at the offending statement.

use std::collections::BTreeSet;
use std::fmt;

use crate::conclusions::Conclusion;
use crate::theory::{
    BodyExpr, DefeasibleTheory, Label, Literal, ProofTag, Rule, RuleKind, Tag, Violation,
};

/// A half-open region of the source text, 1-based line and column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SourceSpan {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub length: u32,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ErrorCategory {
    Lexical,
    Syntactic,
    Semantic,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Lexical => "lexical",
            ErrorCategory::Syntactic => "syntactic",
            ErrorCategory::Semantic => "semantic",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
#[error("{span}: {category} error: {message}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub category: ErrorCategory,
    pub message: String,
}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Ident(String),
    KwFact,
    KwFail,
    Colon,
    Dot,
    Comma,
    Gt,
    Tilde,
    LBracket,
    RBracket,
    Star,
    Strict,
    Defeasible,
    Defeater,
    Unknown(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::KwFact => "keyword `fact`".into(),
            Tok::KwFail => "keyword `fail`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Star => "`*`".into(),
            Tok::Strict => "`->`".into(),
            Tok::Defeasible => "`=>`".into(),
            Tok::Defeater => "`~>`".into(),
            Tok::Unknown(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(src: &str, file: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = src.chars().peekable();
    let mut line: u32 = 1;
    let mut column: u32 = 1;

    macro_rules! push {
        ($tok:expr, $line:expr, $col:expr, $len:expr) => {
            tokens.push(Token {
                tok: $tok,
                span: SourceSpan { file: file.into(), line: $line, column: $col, length: $len },
            })
        };
    }

    while let Some(c) = chars.next() {
        let (tok_line, tok_col) = (line, column);
        column += 1;
        match c {
            '\n' => {
                line += 1;
                column = 1;
            }
            c if c.is_whitespace() => {}
            '%' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        line += 1;
                        column = 1;
                        break;
                    }
                }
            }
            ':' => push!(Tok::Colon, tok_line, tok_col, 1),
            '.' => push!(Tok::Dot, tok_line, tok_col, 1),
            ',' => push!(Tok::Comma, tok_line, tok_col, 1),
            '>' => push!(Tok::Gt, tok_line, tok_col, 1),
            '[' => push!(Tok::LBracket, tok_line, tok_col, 1),
            ']' => push!(Tok::RBracket, tok_line, tok_col, 1),
            '*' => push!(Tok::Star, tok_line, tok_col, 1),
            '~' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    push!(Tok::Defeater, tok_line, tok_col, 2);
                } else {
                    push!(Tok::Tilde, tok_line, tok_col, 1);
                }
            }
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    push!(Tok::Strict, tok_line, tok_col, 2);
                } else {
                    push!(Tok::Unknown('-'), tok_line, tok_col, 1);
                }
            }
            '=' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    column += 1;
                    push!(Tok::Defeasible, tok_line, tok_col, 2);
                } else {
                    push!(Tok::Unknown('='), tok_line, tok_col, 1);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut name = String::from(c);
                while let Some(&next) = chars.peek() {
                    if next.is_ascii_alphanumeric() || next == '_' {
                        name.push(next);
                        chars.next();
                        column += 1;
                    } else {
                        break;
                    }
                }
                let len = name.len() as u32;
                let tok = match name.as_str() {
                    "fact" => Tok::KwFact,
                    "fail" => Tok::KwFail,
                    _ => Tok::Ident(name),
                };
                push!(tok, tok_line, tok_col, len);
            }
            other => push!(Tok::Unknown(other), tok_line, tok_col, 1),
        }
    }
    push!(Tok::Eof, line, column, 0);
    tokens
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    errors: Vec<ParseError>,
    facts: BTreeSet<Literal>,
    rules: Vec<Rule>,
    sup: Vec<((Label, Label), SourceSpan)>,
    label_spans: Vec<(Label, SourceSpan)>,
}

impl Parser {
    fn cur(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek(&self) -> &Tok {
        self.peek_at(1)
    }

    fn peek_at(&self, n: usize) -> &Tok {
        &self.tokens[(self.pos + n).min(self.tokens.len() - 1)].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, span: SourceSpan, category: ErrorCategory, message: String) -> ParseError {
        ParseError { span, category, message }
    }

    fn expect(&mut self, want: &Tok, what: &str) -> Result<Token, ParseError> {
        if &self.cur().tok == want {
            Ok(self.advance())
        } else {
            let cur = self.cur();
            Err(self.error_at(
                cur.span.clone(),
                if matches!(cur.tok, Tok::Unknown(_)) {
                    ErrorCategory::Lexical
                } else {
                    ErrorCategory::Syntactic
                },
                format!("expected {what}, found {}", cur.tok.describe()),
            ))
        }
    }

    /// Skip past the next `.` (or to end of input) after an error.
    fn sync(&mut self) {
        loop {
            match self.cur().tok {
                Tok::Dot => {
                    self.advance();
                    return;
                }
                Tok::Eof => return,
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        let cur = self.cur().clone();
        match cur.tok {
            Tok::Ident(name) => {
                self.advance();
                Ok((name, cur.span))
            }
            Tok::KwFact | Tok::KwFail => Err(self.error_at(
                cur.span.clone(),
                ErrorCategory::Syntactic,
                format!("expected {what}, found reserved {}", cur.tok.describe()),
            )),
            Tok::Unknown(c) => Err(self.error_at(
                cur.span.clone(),
                ErrorCategory::Lexical,
                format!("unexpected character `{c}`"),
            )),
            _ => Err(self.error_at(
                cur.span.clone(),
                ErrorCategory::Syntactic,
                format!("expected {what}, found {}", cur.tok.describe()),
            )),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let positive = if self.cur().tok == Tok::Tilde {
            self.advance();
            false
        } else {
            true
        };
        let (name, _) = self.ident("an atom name")?;
        Ok(if positive { Literal::positive(&name) } else { Literal::negative(&name) })
    }

    fn tag_name(&mut self) -> Result<Tag, ParseError> {
        let (name, span) = self.ident("a tag name")?;
        let starred = if self.cur().tok == Tok::Star {
            self.advance();
            true
        } else {
            false
        };
        match (name.as_str(), starred) {
            ("pa", false) => Ok(Tag::Proof(ProofTag::Pa)),
            ("pa", true) => Ok(Tag::Proof(ProofTag::PaStar)),
            ("de", false) => Ok(Tag::Proof(ProofTag::De)),
            ("de", true) => Ok(Tag::Proof(ProofTag::DeStar)),
            ("free", false) => Ok(Tag::Free),
            _ => Err(self.error_at(
                span,
                ErrorCategory::Syntactic,
                format!(
                    "unknown tag `{}{}` (expected pa, pa*, de, de*, or free)",
                    name,
                    if starred { "*" } else { "" }
                ),
            )),
        }
    }

    fn body_expr(&mut self) -> Result<(BodyExpr, SourceSpan), ParseError> {
        let start = self.cur().span.clone();
        let failed = if self.cur().tok == Tok::KwFail {
            self.advance();
            true
        } else {
            false
        };
        let tag = if self.cur().tok == Tok::LBracket {
            self.advance();
            let tag = self.tag_name()?;
            self.expect(&Tok::RBracket, "`]`")?;
            tag
        } else {
            Tag::Free
        };
        let literal = self.literal()?;
        Ok((BodyExpr { failed, tag, literal }, start))
    }

    /// Like [`Parser::body_expr`], but also accepts a bare tag name before
    /// the literal (`free ~guilty`, `pa* q`) as query shorthand. The
    /// lookahead keeps `free` alone usable as an atom name, so theory files
    /// and queries over them stay compatible.
    fn query_expr(&mut self) -> Result<BodyExpr, ParseError> {
        if self.cur().tok != Tok::LBracket && self.at_bare_tag() {
            let failed = if self.cur().tok == Tok::KwFail {
                self.advance();
                true
            } else {
                false
            };
            let tag = self.tag_name()?;
            let literal = self.literal()?;
            return Ok(BodyExpr { failed, tag, literal });
        }
        self.body_expr().map(|(e, _)| e)
    }

    fn at_bare_tag(&self) -> bool {
        let mut n = 0;
        if self.cur().tok == Tok::KwFail {
            n = 1;
        }
        let Tok::Ident(name) = self.peek_at(n) else { return false };
        if !matches!(name.as_str(), "pa" | "de" | "free") {
            return false;
        }
        match self.peek_at(n + 1) {
            Tok::Tilde | Tok::Ident(_) => true,
            Tok::Star => matches!(self.peek_at(n + 2), Tok::Tilde | Tok::Ident(_)),
            _ => false,
        }
    }

    fn at_arrow(&self) -> Option<RuleKind> {
        match self.cur().tok {
            Tok::Strict => Some(RuleKind::Strict),
            Tok::Defeasible => Some(RuleKind::Defeasible),
            Tok::Defeater => Some(RuleKind::Defeater),
            _ => None,
        }
    }

    fn fact_stmt(&mut self) -> Result<(), ParseError> {
        self.advance(); // `fact`
        let literal = self.literal()?;
        self.expect(&Tok::Dot, "`.`")?;
        self.facts.insert(literal);
        Ok(())
    }

    fn rule_stmt(&mut self) -> Result<(), ParseError> {
        let (name, label_span) = self.ident("a rule label")?;
        let label = Label::new(&name);
        self.expect(&Tok::Colon, "`:`")?;

        let mut body = Vec::new();
        if self.at_arrow().is_none() {
            loop {
                body.push(self.body_expr()?);
                if self.cur().tok == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }

        let kind = match self.at_arrow() {
            Some(kind) => {
                self.advance();
                kind
            }
            None => {
                let cur = self.cur();
                return Err(self.error_at(
                    cur.span.clone(),
                    ErrorCategory::Syntactic,
                    format!("expected `->`, `=>`, or `~>`, found {}", cur.tok.describe()),
                ));
            }
        };

        if kind == RuleKind::Strict {
            for (e, span) in &body {
                if e.failed {
                    return Err(self.error_at(
                        span.clone(),
                        ErrorCategory::Syntactic,
                        "strict rule bodies cannot contain fail-expressions".into(),
                    ));
                }
                if !e.tag.is_free() {
                    return Err(self.error_at(
                        span.clone(),
                        ErrorCategory::Syntactic,
                        "strict rule bodies cannot carry tag annotations".into(),
                    ));
                }
            }
        }

        let head = self.literal()?;
        self.expect(&Tok::Dot, "`.`")?;
        self.label_spans.push((label, label_span));
        self.rules.push(Rule { label, kind, body: body.into_iter().map(|(e, _)| e).collect(), head });
        Ok(())
    }

    fn sup_stmt(&mut self) -> Result<(), ParseError> {
        let (a, span) = self.ident("a rule label")?;
        self.expect(&Tok::Gt, "`>`")?;
        let (b, _) = self.ident("a rule label")?;
        self.expect(&Tok::Dot, "`.`")?;
        self.sup.push(((Label::new(&a), Label::new(&b)), span));
        Ok(())
    }

    fn statement(&mut self) {
        let result = match &self.cur().tok {
            Tok::KwFact => self.fact_stmt(),
            Tok::Ident(_) => match self.peek() {
                Tok::Colon => self.rule_stmt(),
                Tok::Gt => self.sup_stmt(),
                _ => {
                    let cur = self.cur();
                    Err(self.error_at(
                        cur.span.clone(),
                        ErrorCategory::Syntactic,
                        "expected `:` (rule) or `>` (superiority) after identifier".into(),
                    ))
                }
            },
            Tok::Unknown(c) => {
                let (c, cur) = (*c, self.cur());
                Err(self.error_at(
                    cur.span.clone(),
                    ErrorCategory::Lexical,
                    format!("unexpected character `{c}`"),
                ))
            }
            _ => {
                let cur = self.cur();
                Err(self.error_at(
                    cur.span.clone(),
                    ErrorCategory::Syntactic,
                    format!("expected a statement, found {}", cur.tok.describe()),
                ))
            }
        };
        if let Err(e) = result {
            self.errors.push(e);
            self.sync();
        }
    }

    /// Attach a source span to a well-formedness violation: the offending
    /// label occurrence for label problems, the offending superiority
    /// statement otherwise.
    fn violation_span(&self, v: &Violation) -> SourceSpan {
        let fallback = || self.tokens.last().unwrap().span.clone();
        match v {
            Violation::DuplicateLabel { label } => self
                .label_spans
                .iter()
                .filter(|(l, _)| l == label)
                .nth(1)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(fallback),
            Violation::UnknownSupLabel { pair, .. } => self
                .sup
                .iter()
                .find(|(p, _)| p == pair)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(fallback),
            Violation::CyclicSuperiority { cycle } => self
                .sup
                .iter()
                .find(|((a, b), _)| cycle.contains(a) && cycle.contains(b))
                .map(|(_, s)| s.clone())
                .unwrap_or_else(fallback),
            Violation::AnnotatedStrictBody { rule } | Violation::FailInStrictBody { rule } => self
                .label_spans
                .iter()
                .find(|(l, _)| l == rule)
                .map(|(_, s)| s.clone())
                .unwrap_or_else(fallback),
        }
    }

    fn finish(mut self) -> Result<DefeasibleTheory, Vec<ParseError>> {
        let theory = DefeasibleTheory {
            facts: self.facts,
            rules: self.rules,
            sup: self.sup.iter().map(|(p, _)| *p).collect(),
        };
        let parser = Parser {
            tokens: self.tokens,
            pos: 0,
            errors: Vec::new(),
            facts: BTreeSet::new(),
            rules: Vec::new(),
            sup: self.sup,
            label_spans: self.label_spans,
        };
        for v in theory.validate() {
            let span = parser.violation_span(&v);
            self.errors.push(ParseError {
                span,
                category: ErrorCategory::Semantic,
                message: v.to_string(),
            });
        }
        if self.errors.is_empty() {
            Ok(theory)
        } else {
            Err(self.errors)
        }
    }
}

/// Parse a complete theory. On failure, returns one error per bad
/// statement plus one per well-formedness violation.
pub fn parse_theory(src: &str) -> Result<DefeasibleTheory, Vec<ParseError>> {
    parse_theory_named(src, "<input>")
}

/// [`parse_theory`] with an explicit file name for error spans.
pub fn parse_theory_named(src: &str, file: &str) -> Result<DefeasibleTheory, Vec<ParseError>> {
    let mut parser = Parser {
        tokens: lex(src, file),
        pos: 0,
        errors: Vec::new(),
        facts: BTreeSet::new(),
        rules: Vec::new(),
        sup: Vec::new(),
        label_spans: Vec::new(),
    };
    while parser.cur().tok != Tok::Eof {
        parser.statement();
    }
    parser.finish()
}

/// Parse a single body expression, e.g. for a query: `fail [de] ~guilty`.
pub fn parse_body_expr(src: &str) -> Result<BodyExpr, Vec<ParseError>> {
    let mut parser = Parser {
        tokens: lex(src, "<expr>"),
        pos: 0,
        errors: Vec::new(),
        facts: BTreeSet::new(),
        rules: Vec::new(),
        sup: Vec::new(),
        label_spans: Vec::new(),
    };
    let expr = match parser.query_expr() {
        Ok(e) => e,
        Err(e) => return Err(vec![e]),
    };
    if parser.cur().tok != Tok::Eof {
        let cur = parser.cur();
        return Err(vec![ParseError {
            span: cur.span.clone(),
            category: ErrorCategory::Syntactic,
            message: format!("expected end of expression, found {}", cur.tok.describe()),
        }]);
    }
    Ok(expr)
}

/// Render a theory in canonical form: facts, then rules in declaration
/// order, then superiority pairs, one statement per line. `free` tags are
/// omitted. The output parses back to an equal theory.
pub fn print_theory(t: &DefeasibleTheory) -> String {
    let mut out = String::new();
    for q in &t.facts {
        out.push_str(&format!("fact {q}.\n"));
    }
    for r in &t.rules {
        out.push_str(&format!("{r}.\n"));
    }
    for (a, b) in &t.sup {
        out.push_str(&format!("{a} > {b}.\n"));
    }
    out
}

/// Render a conclusion as `<sign><tag> <literal>`, e.g. `+pa ~compensation`
/// or `-D p`.
pub fn print_conclusion(c: &Conclusion) -> String {
    format!("{}{} {}", c.sign, c.tag, c.literal)
}
