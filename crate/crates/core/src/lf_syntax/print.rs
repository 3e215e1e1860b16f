//! Canonical pretty-printer; `parse_term` of the output is α-equivalent
//! to the input.

use super::PreTerm;
use std::fmt;

// Precedence levels, loosest first.
const PI: u8 = 0;
const EQ: u8 = 1;
const APP: u8 = 2;
const ATOM: u8 = 3;

pub(super) fn fmt_term(t: &PreTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    go(t, PI, f)
}

fn level(t: &PreTerm) -> u8 {
    match t {
        PreTerm::Pi(..) | PreTerm::Abs(..) => PI,
        PreTerm::Eq(..) => EQ,
        PreTerm::App { ann: None, .. } | PreTerm::Refl(_) => APP,
        PreTerm::App { ann: Some(_), .. }
        | PreTerm::SortBox
        | PreTerm::SortRep
        | PreTerm::Sym(..)
        | PreTerm::Var(_) => ATOM,
    }
}

fn go(t: &PreTerm, min: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let parens = level(t) < min;
    if parens {
        write!(f, "(")?;
    }
    match t {
        PreTerm::SortBox => write!(f, "Box")?,
        PreTerm::SortRep => write!(f, "Rep")?,
        PreTerm::Var(x) => write!(f, "{x}")?,
        PreTerm::Sym(name, args) => {
            write!(f, "{name}")?;
            if !args.is_empty() {
                write!(f, "(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    go(a, PI, f)?;
                }
                write!(f, ")")?;
            }
        }
        PreTerm::Pi(dom, x, cod) => {
            if cod.free_vars().contains(x) {
                write!(f, "({x} : ")?;
                go(dom, PI, f)?;
                write!(f, ") -> ")?;
                go(cod, PI, f)?;
            } else {
                go(dom, EQ, f)?;
                write!(f, " -> ")?;
                go(cod, PI, f)?;
            }
        }
        PreTerm::Abs(dom, x, body) => {
            write!(f, "\\({x} : ")?;
            go(dom, PI, f)?;
            write!(f, "). ")?;
            go(body, PI, f)?;
        }
        PreTerm::App { ann, fun, arg } => match ann {
            None => {
                go(fun, APP, f)?;
                write!(f, " ")?;
                go(arg, ATOM, f)?;
            }
            Some(ann) => {
                write!(f, "app(")?;
                go(&ann.domain, PI, f)?;
                write!(f, ", {}. ", ann.var)?;
                go(&ann.codomain, PI, f)?;
                write!(f, ", ")?;
                go(fun, PI, f)?;
                write!(f, ", ")?;
                go(arg, PI, f)?;
                write!(f, ")")?;
            }
        },
        PreTerm::Eq(ty, l, r) => {
            go(l, APP, f)?;
            write!(f, " = ")?;
            go(r, APP, f)?;
            write!(f, " in ")?;
            go(ty, APP, f)?;
        }
        PreTerm::Refl(a) => {
            write!(f, "refl ")?;
            go(a, ATOM, f)?;
        }
    }
    if parens {
        write!(f, ")")?;
    }
    Ok(())
}
