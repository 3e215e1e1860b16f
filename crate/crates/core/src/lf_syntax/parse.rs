//! Recursive-descent parser for the term and signature surface syntax.
//!
//! Grammar (see README for the full description):
//!
//! ```text
//! term   := "(" binders ")" "->" term         dependent product
//!         | eq ("->" term)?                   non-dependent arrow sugar
//! eq     := app ("=" app "in" app)?
//! app    := atom+                             left-associative application
//! atom   := "Box" | "Rep" | "refl" atom
//!         | "app" "(" term "," name "." term "," term "," term ")"
//!         | name "(" term,* ")" | name | "(" term ")"
//!         | "\" "(" binders ")" "." term
//! binders := name+ ":" term ("," binders)?
//! ```
//!
//! Signature files hold one `name : (binders) => SORT` entry per logical
//! line with `SORT` one of `Box`, `Rep` or a type term; `#` starts a
//! comment; an entry continues onto the next physical line while its
//! parentheses are unbalanced, it ends in a connective, or the next line
//! is indented.

use super::{EntrySort, PreContext, PreSignature, PreTerm, SignatureEntry};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
#[error("syntax error at {line}:{col}: {msg}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    FatArrow,
    Lambda,
    Dot,
    Equals,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Colon => write!(f, "':'"),
            Tok::Arrow => write!(f, "'->'"),
            Tok::FatArrow => write!(f, "'=>'"),
            Tok::Lambda => write!(f, "'\\'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::Equals => write!(f, "'='"),
        }
    }
}

struct Lexed {
    toks: Vec<(Tok, usize, usize, usize)>,
}

fn lex(text: &str, start_line: usize) -> Result<Lexed, SyntaxError> {
    let mut toks: Vec<(Tok, usize, usize, usize)> = Vec::new();
    let mut line = start_line;
    let mut col = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |chars: &mut std::iter::Peekable<std::str::Chars>, col: &mut usize| {
            chars.next();
            *col += 1;
        };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => bump(&mut chars, &mut col),
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    col += 1;
                }
            }
            '(' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::LParen, tline, tcol, 1));
            }
            ')' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::RParen, tline, tcol, 1));
            }
            ',' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::Comma, tline, tcol, 1));
            }
            ':' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::Colon, tline, tcol, 1));
            }
            '\\' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::Lambda, tline, tcol, 1));
            }
            '.' => {
                bump(&mut chars, &mut col);
                toks.push((Tok::Dot, tline, tcol, 1));
            }
            '-' => {
                bump(&mut chars, &mut col);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars, &mut col);
                    toks.push((Tok::Arrow, tline, tcol, 2));
                } else {
                    return Err(SyntaxError {
                        line: tline,
                        col: tcol,
                        msg: "expected '->'".into(),
                    });
                }
            }
            '=' => {
                bump(&mut chars, &mut col);
                if chars.peek() == Some(&'>') {
                    bump(&mut chars, &mut col);
                    toks.push((Tok::FatArrow, tline, tcol, 2));
                } else {
                    toks.push((Tok::Equals, tline, tcol, 1));
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_alphanumeric() || c == '_' || c == '\'' {
                        s.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let w = s.chars().count();
                toks.push((Tok::Ident(s), tline, tcol, w));
            }
            other => {
                return Err(SyntaxError {
                    line: tline,
                    col: tcol,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        }
    }
    Ok(Lexed { toks })
}

struct Parser {
    toks: Vec<(Tok, usize, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _, _)| t)
    }

    fn peek_at(&self, n: usize) -> Option<&Tok> {
        self.toks.get(self.pos + n).map(|(t, _, _, _)| t)
    }

    /// True when the current token starts immediately after the previous
    /// one, with no intervening whitespace. Distinguishes the symbol
    /// application `f(a)` from the juxtaposition `f (a)`.
    fn adjacent(&self) -> bool {
        if self.pos == 0 {
            return false;
        }
        match (self.toks.get(self.pos - 1), self.toks.get(self.pos)) {
            (Some((_, l1, c1, w)), Some((_, l2, c2, _))) => l1 == l2 && c1 + w == *c2,
            _ => false,
        }
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c, _)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn err(&self, msg: impl Into<String>) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            Some(t) => Err(self.err(format!("expected {tok}, found {t}"))),
            None => Err(self.err(format!("expected {tok}, found end of input"))),
        }
    }

    fn expect_ident(&mut self) -> Result<String, SyntaxError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(self.err(format!("expected identifier, found {t}"))),
            None => Err(self.err("expected identifier, found end of input")),
        }
    }

    /// True when the upcoming tokens are `ident+ :`, i.e. a binder group.
    fn at_binder_group(&self) -> bool {
        let mut n = 0;
        loop {
            match self.peek_at(n) {
                Some(Tok::Ident(_)) => n += 1,
                Some(Tok::Colon) => return n > 0,
                _ => return false,
            }
        }
    }

    /// `name+ : term (, name+ : term)*`
    fn parse_binders(&mut self) -> Result<Vec<(String, PreTerm)>, SyntaxError> {
        let mut out = Vec::new();
        loop {
            let mut names = vec![self.expect_ident()?];
            while let Some(Tok::Ident(_)) = self.peek() {
                names.push(self.expect_ident()?);
            }
            self.expect(Tok::Colon)?;
            let ty = self.parse_term()?;
            for n in names {
                out.push((n, ty.clone()));
            }
            if self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn parse_term(&mut self) -> Result<PreTerm, SyntaxError> {
        // Dependent product: "(" binders ")" "->" term
        if self.peek() == Some(&Tok::LParen) {
            let save = self.pos;
            self.pos += 1;
            if self.at_binder_group() {
                let binders = self.parse_binders()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Arrow)?;
                let mut body = self.parse_term()?;
                for (x, ty) in binders.into_iter().rev() {
                    body = PreTerm::Pi(Box::new(ty), x, Box::new(body));
                }
                return Ok(body);
            }
            self.pos = save;
        }
        let lhs = self.parse_eq()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.parse_term()?;
            let taken: HashSet<String> = rhs.all_names();
            let fresh = super::fresh_name("_x", &taken);
            return Ok(PreTerm::Pi(Box::new(lhs), fresh, Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn parse_eq(&mut self) -> Result<PreTerm, SyntaxError> {
        let lhs = self.parse_app()?;
        if self.peek() == Some(&Tok::Equals) {
            self.pos += 1;
            let rhs = self.parse_app()?;
            match self.peek() {
                Some(Tok::Ident(kw)) if kw == "in" => {
                    self.pos += 1;
                }
                _ => return Err(self.err("expected 'in' after equation sides")),
            }
            let ty = self.parse_app()?;
            return Ok(PreTerm::eq(ty, lhs, rhs));
        }
        Ok(lhs)
    }

    fn at_atom_start(&self) -> bool {
        match self.peek() {
            Some(Tok::Ident(s)) => s != "in",
            Some(Tok::LParen) | Some(Tok::Lambda) => true,
            _ => false,
        }
    }

    fn parse_app(&mut self) -> Result<PreTerm, SyntaxError> {
        let mut t = self.parse_atom()?;
        while self.at_atom_start() {
            let arg = self.parse_atom()?;
            t = PreTerm::apply(t, arg);
        }
        Ok(t)
    }

    fn parse_atom(&mut self) -> Result<PreTerm, SyntaxError> {
        match self.peek().cloned() {
            Some(Tok::Lambda) => {
                self.pos += 1;
                self.expect(Tok::LParen)?;
                let binders = self.parse_binders()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                let mut body = self.parse_term()?;
                for (x, ty) in binders.into_iter().rev() {
                    body = PreTerm::Abs(Box::new(ty), x, Box::new(body));
                }
                Ok(body)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                if self.at_binder_group() {
                    // A parenthesized binder group can only start a product.
                    let binders = self.parse_binders()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Arrow)?;
                    let mut body = self.parse_term()?;
                    for (x, ty) in binders.into_iter().rev() {
                        body = PreTerm::Pi(Box::new(ty), x, Box::new(body));
                    }
                    return Ok(body);
                }
                let t = self.parse_term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "Box" => Ok(PreTerm::SortBox),
                    "Rep" => Ok(PreTerm::SortRep),
                    "refl" => {
                        let subject = self.parse_atom()?;
                        Ok(PreTerm::refl(subject))
                    }
                    "app" if self.peek() == Some(&Tok::LParen) && self.adjacent() => {
                        // app(A, x. B, f, a) — fully annotated application
                        self.pos += 1;
                        let domain = self.parse_term()?;
                        self.expect(Tok::Comma)?;
                        let var = self.expect_ident()?;
                        self.expect(Tok::Dot)?;
                        let codomain = self.parse_term()?;
                        self.expect(Tok::Comma)?;
                        let fun = self.parse_term()?;
                        self.expect(Tok::Comma)?;
                        let arg = self.parse_term()?;
                        self.expect(Tok::RParen)?;
                        Ok(PreTerm::apply_ann(
                            super::AppAnn {
                                domain,
                                var,
                                codomain,
                            },
                            fun,
                            arg,
                        ))
                    }
                    _ => {
                        if self.peek() == Some(&Tok::LParen) && self.adjacent() {
                            self.pos += 1;
                            let mut args = Vec::new();
                            if self.peek() != Some(&Tok::RParen) {
                                loop {
                                    args.push(self.parse_term()?);
                                    if self.peek() == Some(&Tok::Comma) {
                                        self.pos += 1;
                                    } else {
                                        break;
                                    }
                                }
                            }
                            self.expect(Tok::RParen)?;
                            Ok(PreTerm::Sym(name, args))
                        } else {
                            Ok(PreTerm::Var(name))
                        }
                    }
                }
            }
            Some(t) => Err(self.err(format!("expected a term, found {t}"))),
            None => Err(self.err("expected a term, found end of input")),
        }
    }
}

/// Parse a single term.
pub fn parse_term(text: &str) -> Result<PreTerm, SyntaxError> {
    let lexed = lex(text, 1)?;
    let mut p = Parser {
        toks: lexed.toks,
        pos: 0,
    };
    let t = p.parse_term()?;
    if p.peek().is_some() {
        return Err(p.err(format!(
            "trailing input after term: {}",
            p.peek().unwrap()
        )));
    }
    Ok(t)
}

/// Split signature text into logical lines (entry per line, with
/// continuations) and remember the physical line each starts on.
fn logical_lines(text: &str) -> Vec<(usize, String)> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut open = 0isize;
    for (i, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        if line.trim().is_empty() {
            continue;
        }
        let continuation = !out.is_empty()
            && (open > 0
                || line.starts_with(char::is_whitespace)
                || out
                    .last()
                    .map(|(_, prev)| ends_open(prev.trim_end()))
                    .unwrap_or(false));
        open += line.matches('(').count() as isize - line.matches(')').count() as isize;
        if continuation {
            let last = out.last_mut().unwrap();
            last.1.push(' ');
            last.1.push_str(line.trim());
        } else {
            out.push((i + 1, line.trim().to_string()));
        }
    }
    out
}

fn ends_open(s: &str) -> bool {
    s.ends_with(',') || s.ends_with("=>") || s.ends_with("->") || s.ends_with('=')
}

/// Parse a `.lfsig` signature file. Anonymous `_` entries are renamed to
/// fresh `_eqN` symbols in order of appearance, and bare identifiers that
/// name previously declared symbols are resolved to symbol applications.
pub fn parse_signature(text: &str) -> Result<PreSignature, SyntaxError> {
    let mut entries: Vec<SignatureEntry> = Vec::new();
    let mut declared: HashSet<String> = HashSet::new();
    let mut anon = 0usize;
    for (lineno, line) in logical_lines(text) {
        let lexed = lex(&line, lineno)?;
        let mut p = Parser {
            toks: lexed.toks,
            pos: 0,
        };
        let mut name = p.expect_ident()?;
        if name == "_" {
            anon += 1;
            name = format!("_eq{anon}");
        }
        p.expect(Tok::Colon)?;
        p.expect(Tok::LParen)?;
        let binders = if p.peek() == Some(&Tok::RParen) {
            Vec::new()
        } else {
            p.parse_binders()?
        };
        p.expect(Tok::RParen)?;
        p.expect(Tok::FatArrow)?;
        let sort = match p.peek() {
            Some(Tok::Ident(s)) if s == "Box" && p.peek_at(1).is_none() => {
                p.pos += 1;
                EntrySort::Box_
            }
            Some(Tok::Ident(s)) if s == "Rep" && p.peek_at(1).is_none() => {
                p.pos += 1;
                EntrySort::Rep
            }
            _ => EntrySort::Type(p.parse_term()?),
        };
        if p.peek().is_some() {
            return Err(p.err(format!("trailing input: {}", p.peek().unwrap())));
        }
        let mut scoped: Vec<(String, PreTerm)> = Vec::new();
        for (x, ty) in binders {
            let bound: Vec<String> = scoped.iter().map(|(n, _)| n.clone()).collect();
            let ty = ty.resolve_nullary_scoped(&declared, &bound);
            scoped.push((x, ty));
        }
        let sort = match sort {
            EntrySort::Type(t) => {
                let bound: Vec<String> = scoped.iter().map(|(n, _)| n.clone()).collect();
                EntrySort::Type(t.resolve_nullary_scoped(&declared, &bound))
            }
            s => s,
        };
        declared.insert(name.clone());
        entries.push(SignatureEntry {
            name,
            context: PreContext::new(scoped),
            sort,
        });
    }
    Ok(PreSignature { entries })
}
