//! Lexer and recursive-descent parser for the concrete syntax.
//!
//! ```text
//! ty     := "N" | ty "->" ty | "(" ty ")"
//! ctx    := "[]" | "[" ty ("," ty)* "]"
//! term   := "#" | term "^" | "\" term | term term | "zero" | "suc" term
//!         | "(" term ":" ty ")" | "(" term ")"
//! subst  := "id" | subst "^" | subst "," term | "(" subst ")"
//! chain  := subst (";" subst)*
//! ```
//!
//! Postfix `^` binds tightest, then application and `suc`, then lambda
//! bodies, then `,`. Unicode aliases: `●` `↑` `ƛ` `·` `▷` `⨾` `⇒` `ℕ` `∅`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Ctx, Subst, Term, Ty};
use crate::typeck::{Path, PathStep};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: expected {}, found {found}", display_expected(.expected))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

fn display_expected(expected: &[String]) -> String {
    match expected {
        [] => "nothing".to_owned(),
        [one] => one.clone(),
        many => format!("one of {}", many.join(", ")),
    }
}

/// A type ascription `(M : T)` found while parsing, located by its path
/// from the root of the parsed term or substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ascription {
    pub path: Path,
    pub ty: Ty,
}

/// A parsed value together with the ascriptions stripped from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotated<T> {
    pub value: T,
    pub ascriptions: Vec<Ascription>,
}

impl<T> Annotated<T> {
    pub fn bare(value: T) -> Annotated<T> {
        Annotated {
            value,
            ascriptions: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Hash,
    Caret,
    Lambda,
    Dot,
    AppDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Semi,
    Arrow,
    EmptyCtx,
    Zero,
    Suc,
    Id,
    Nat,
    Int(usize),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Hash => "`#`",
            Tok::Caret => "`^`",
            Tok::Lambda => "`\\`",
            Tok::Dot => "`.`",
            Tok::AppDot => "`·`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBracket => "`[`",
            Tok::RBracket => "`]`",
            Tok::Colon => "`:`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Arrow => "`->`",
            Tok::EmptyCtx => "`∅`",
            Tok::Zero => "`zero`",
            Tok::Suc => "`suc`",
            Tok::Id => "`id`",
            Tok::Nat => "`N`",
            Tok::Int(n) => return write!(f, "`{n}`"),
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Pos {
    line: usize,
    column: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        let err = |found: String| SyntaxError {
            line: pos.line,
            column: pos.column,
            expected: vec!["a token".to_owned()],
            found,
        };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c == 'ƛ' || c == 'λ' {
            chars.next();
            column += 1;
            toks.push((Tok::Lambda, pos));
            continue;
        }
        if c.is_alphabetic() || c == '`' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || c == '`' || c == '_' {
                    word.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let tok = match word.as_str() {
                "zero" => Tok::Zero,
                "suc" => Tok::Suc,
                "id" => Tok::Id,
                "N" | "Nat" | "ℕ" | "`ℕ" => Tok::Nat,
                _ => return Err(err(format!("`{word}`"))),
            };
            toks.push((tok, pos));
            continue;
        }
        if c.is_ascii_digit() {
            let mut n: usize = 0;
            while let Some(&d) = chars.peek() {
                let Some(v) = d.to_digit(10) else { break };
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(v as usize))
                    .ok_or_else(|| err("an index that is too large".to_owned()))?;
                chars.next();
                column += 1;
            }
            toks.push((Tok::Int(n), pos));
            continue;
        }
        chars.next();
        column += 1;
        let tok = match c {
            '#' | '●' => Tok::Hash,
            '^' | '↑' => Tok::Caret,
            '\\' => Tok::Lambda,
            '.' => Tok::Dot,
            '·' => Tok::AppDot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ':' => Tok::Colon,
            ',' | '▷' => Tok::Comma,
            ';' | '⨾' | '⨟' => Tok::Semi,
            '⇒' | '→' => Tok::Arrow,
            '∅' => Tok::EmptyCtx,
            '-' if chars.peek() == Some(&'>') => {
                chars.next();
                column += 1;
                Tok::Arrow
            }
            other => return Err(err(format!("`{other}`"))),
        };
        toks.push((tok, pos));
    }
    toks.push((Tok::Eof, Pos { line, column }));
    Ok(toks)
}

/// Parse tree before ascriptions are stripped.
enum Surface {
    Var,
    Weaken(Box<Surface>),
    Lam(Box<Surface>),
    App(Box<Surface>, Box<Surface>),
    Zero,
    Suc(Box<Surface>),
    Ann(Box<Surface>, Ty),
}

enum SurfaceSubst {
    Id,
    Weaken(Box<SurfaceSubst>),
    Cons(Box<SurfaceSubst>, Surface),
}

fn strip(s: Surface, path: &mut Vec<PathStep>, out: &mut Vec<Ascription>) -> Term {
    let under = |step, body: Surface, path: &mut Vec<PathStep>, out: &mut Vec<Ascription>| {
        path.push(step);
        let t = strip(body, path, out);
        path.pop();
        t
    };
    match s {
        Surface::Var => Term::Var,
        Surface::Zero => Term::Zero,
        Surface::Weaken(b) => Term::weaken(under(PathStep::WeakenBody, *b, path, out)),
        Surface::Lam(b) => Term::lam(under(PathStep::LamBody, *b, path, out)),
        Surface::Suc(b) => Term::suc(under(PathStep::SucBody, *b, path, out)),
        Surface::App(l, m) => {
            let l = under(PathStep::AppFun, *l, path, out);
            let m = under(PathStep::AppArg, *m, path, out);
            Term::app(l, m)
        }
        Surface::Ann(b, ty) => {
            out.push(Ascription {
                path: Path::from(path.clone()),
                ty,
            });
            strip(*b, path, out)
        }
    }
}

fn strip_subst(s: SurfaceSubst, path: &mut Vec<PathStep>, out: &mut Vec<Ascription>) -> Subst {
    match s {
        SurfaceSubst::Id => Subst::Id,
        SurfaceSubst::Weaken(b) => {
            path.push(PathStep::SubstWeaken);
            let b = strip_subst(*b, path, out);
            path.pop();
            Subst::weaken(b)
        }
        SurfaceSubst::Cons(tail, head) => {
            path.push(PathStep::ConsTail);
            let tail = strip_subst(*tail, path, out);
            path.pop();
            path.push(PathStep::ConsHead);
            let head = strip(head, path, out);
            path.pop();
            Subst::cons(tail, head)
        }
    }
}

pub(crate) struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    expected: BTreeSet<String>,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, SyntaxError> {
        Ok(Parser {
            toks: lex(text)?,
            at: 0,
            expected: BTreeSet::new(),
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let tok = self.toks[self.at].0.clone();
        if tok != Tok::Eof {
            self.at += 1;
        }
        self.expected.clear();
        tok
    }

    /// Consumes `tok` if it is next; otherwise records it as expected.
    pub(crate) fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            self.expected.insert(tok.to_string());
            false
        }
    }

    pub(crate) fn expect_desc(&mut self, what: &str) {
        self.expected.insert(what.to_owned());
    }

    pub(crate) fn error(&self) -> SyntaxError {
        let (tok, pos) = &self.toks[self.at];
        SyntaxError {
            line: pos.line,
            column: pos.column,
            expected: self.expected.iter().cloned().collect(),
            found: tok.to_string(),
        }
    }

    pub(crate) fn expect(&mut self, tok: &Tok) -> Result<(), SyntaxError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error())
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), SyntaxError> {
        self.expect(&Tok::Eof)
    }

    fn ty(&mut self) -> Result<Ty, SyntaxError> {
        let dom = if self.eat(&Tok::Nat) {
            Ty::Nat
        } else if self.eat(&Tok::LParen) {
            let t = self.ty()?;
            self.expect(&Tok::RParen)?;
            t
        } else {
            return Err(self.error());
        };
        if self.eat(&Tok::Arrow) {
            Ok(Ty::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn ctx(&mut self) -> Result<Ctx, SyntaxError> {
        let mut entries = Vec::new();
        if self.eat(&Tok::EmptyCtx) {
            while self.eat(&Tok::Comma) {
                entries.push(self.ty()?);
            }
            return Ok(Ctx::new(entries));
        }
        self.expect(&Tok::LBracket)?;
        if self.eat(&Tok::RBracket) {
            return Ok(Ctx::new(entries));
        }
        loop {
            entries.push(self.ty()?);
            if self.eat(&Tok::RBracket) {
                return Ok(Ctx::new(entries));
            }
            self.expect(&Tok::Comma)?;
        }
    }

    fn term(&mut self) -> Result<Surface, SyntaxError> {
        if self.eat(&Tok::Lambda) {
            return Ok(Surface::Lam(Box::new(self.term()?)));
        }
        let mut fun = if self.eat(&Tok::Suc) {
            Surface::Suc(Box::new(self.arg()?))
        } else {
            self.arg()?
        };
        loop {
            let dotted = self.eat(&Tok::AppDot);
            if self.eat(&Tok::Lambda) {
                let body = self.term()?;
                return Ok(Surface::App(Box::new(fun), Box::new(Surface::Lam(Box::new(body)))));
            }
            match self.try_arg()? {
                Some(arg) => fun = Surface::App(Box::new(fun), Box::new(arg)),
                None if dotted => return Err(self.error()),
                None => return Ok(fun),
            }
        }
    }

    fn arg(&mut self) -> Result<Surface, SyntaxError> {
        match self.try_arg()? {
            Some(a) => Ok(a),
            None => Err(self.error()),
        }
    }

    fn try_arg(&mut self) -> Result<Option<Surface>, SyntaxError> {
        let mut atom = if self.eat(&Tok::Hash) {
            Surface::Var
        } else if self.eat(&Tok::Zero) {
            Surface::Zero
        } else if self.eat(&Tok::LParen) {
            let inner = self.term()?;
            let inner = if self.eat(&Tok::Colon) {
                Surface::Ann(Box::new(inner), self.ty()?)
            } else {
                inner
            };
            self.expect(&Tok::RParen)?;
            inner
        } else {
            return Ok(None);
        };
        while self.eat(&Tok::Caret) {
            atom = Surface::Weaken(Box::new(atom));
        }
        Ok(Some(atom))
    }

    fn subst(&mut self) -> Result<SurfaceSubst, SyntaxError> {
        let mut s = if self.eat(&Tok::Id) {
            SurfaceSubst::Id
        } else if self.eat(&Tok::LParen) {
            let s = self.subst()?;
            self.expect(&Tok::RParen)?;
            s
        } else {
            return Err(self.error());
        };
        while self.eat(&Tok::Caret) {
            s = SurfaceSubst::Weaken(Box::new(s));
        }
        while self.eat(&Tok::Comma) {
            let head = self.term()?;
            s = SurfaceSubst::Cons(Box::new(s), head);
        }
        Ok(s)
    }
}

fn annotated_term(p: &mut Parser) -> Result<Annotated<Term>, SyntaxError> {
    let surface = p.term()?;
    let mut ascriptions = Vec::new();
    let value = strip(surface, &mut Vec::new(), &mut ascriptions);
    Ok(Annotated { value, ascriptions })
}

fn annotated_subst(p: &mut Parser) -> Result<Annotated<Subst>, SyntaxError> {
    let surface = p.subst()?;
    let mut ascriptions = Vec::new();
    let value = strip_subst(surface, &mut Vec::new(), &mut ascriptions);
    Ok(Annotated { value, ascriptions })
}

pub fn parse_ty(text: &str) -> Result<Ty, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ty = p.ty()?;
    p.finish()?;
    Ok(ty)
}

pub fn parse_ctx(text: &str) -> Result<Ctx, SyntaxError> {
    let mut p = Parser::new(text)?;
    let ctx = p.ctx()?;
    p.finish()?;
    Ok(ctx)
}

/// Parses a term, discarding any ascriptions.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    parse_term_annotated(text).map(|a| a.value)
}

pub fn parse_term_annotated(text: &str) -> Result<Annotated<Term>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let t = annotated_term(&mut p)?;
    p.finish()?;
    Ok(t)
}

/// Parses a substitution, discarding any ascriptions.
pub fn parse_subst(text: &str) -> Result<Subst, SyntaxError> {
    parse_subst_annotated(text).map(|a| a.value)
}

pub fn parse_subst_annotated(text: &str) -> Result<Annotated<Subst>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let s = annotated_subst(&mut p)?;
    p.finish()?;
    Ok(s)
}

/// Parses `σ ; τ ; …`, outermost (first applied) substitution first.
pub fn parse_subst_chain(text: &str) -> Result<Vec<Annotated<Subst>>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut chain = vec![annotated_subst(&mut p)?];
    while p.eat(&Tok::Semi) {
        chain.push(annotated_subst(&mut p)?);
    }
    p.finish()?;
    Ok(chain)
}
