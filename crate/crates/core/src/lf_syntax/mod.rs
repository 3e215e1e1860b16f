//! Abstract syntax for the logical framework: pre-terms, pre-contexts,
//! pre-signatures, α-equivalence and capture-avoiding substitution.
//!
//! Terms carry variable names externally; equality of `PreTerm` values is
//! α-equivalence, so two terms differing only in bound names are
//! indistinguishable by every observer (including hashing).

mod parse;
mod print;

pub use parse::{parse_signature, parse_term, SyntaxError};

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

pub type VarName = String;
pub type SymName = String;

/// Annotation on a fully elaborated application node: the Π-type
/// `(var : domain) -> codomain` of the applied function.
#[derive(Clone, Debug)]
pub struct AppAnn {
    pub domain: PreTerm,
    pub var: VarName,
    pub codomain: PreTerm,
}

/// Pre-terms of the framework.
///
/// `App` carries its annotation optionally: the surface form `b a` parses
/// with `ann: None` and the checker fills it in by inferring the Π-type of
/// `b`. The explicit surface form `app(A, x. B, b, a)` parses annotated.
#[derive(Clone, Debug)]
pub enum PreTerm {
    /// The sort of types.
    SortBox,
    /// The sort of representable types.
    SortRep,
    /// Application of a declared symbol to arguments.
    Sym(SymName, Vec<PreTerm>),
    Var(VarName),
    /// Dependent product `(x : A) -> B`.
    Pi(Box<PreTerm>, VarName, Box<PreTerm>),
    /// Abstraction `\(x : A). b`.
    Abs(Box<PreTerm>, VarName, Box<PreTerm>),
    /// Application, optionally annotated with the Π-type of the function.
    App {
        ann: Option<Box<AppAnn>>,
        fun: Box<PreTerm>,
        arg: Box<PreTerm>,
    },
    /// Propositional equality `a = b in A`.
    Eq(Box<PreTerm>, Box<PreTerm>, Box<PreTerm>),
    /// Reflexivity proof `refl a`.
    Refl(Box<PreTerm>),
}

impl PreTerm {
    pub fn var(name: &str) -> PreTerm {
        PreTerm::Var(name.to_string())
    }

    pub fn sym(name: &str, args: Vec<PreTerm>) -> PreTerm {
        PreTerm::Sym(name.to_string(), args)
    }

    pub fn pi(x: &str, dom: PreTerm, cod: PreTerm) -> PreTerm {
        PreTerm::Pi(Box::new(dom), x.to_string(), Box::new(cod))
    }

    pub fn abs(x: &str, dom: PreTerm, body: PreTerm) -> PreTerm {
        PreTerm::Abs(Box::new(dom), x.to_string(), Box::new(body))
    }

    pub fn apply(fun: PreTerm, arg: PreTerm) -> PreTerm {
        PreTerm::App {
            ann: None,
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }

    pub fn apply_ann(ann: AppAnn, fun: PreTerm, arg: PreTerm) -> PreTerm {
        PreTerm::App {
            ann: Some(Box::new(ann)),
            fun: Box::new(fun),
            arg: Box::new(arg),
        }
    }

    pub fn eq(ty: PreTerm, lhs: PreTerm, rhs: PreTerm) -> PreTerm {
        PreTerm::Eq(Box::new(ty), Box::new(lhs), Box::new(rhs))
    }

    pub fn refl(subject: PreTerm) -> PreTerm {
        PreTerm::Refl(Box::new(subject))
    }

    pub fn is_sort(&self) -> bool {
        matches!(self, PreTerm::SortBox | PreTerm::SortRep)
    }

    /// Free variables of the term.
    pub fn free_vars(&self) -> HashSet<VarName> {
        let mut out = HashSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<VarName>, out: &mut HashSet<VarName>) {
        match self {
            PreTerm::SortBox | PreTerm::SortRep => {}
            PreTerm::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            PreTerm::Sym(_, args) => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            PreTerm::Pi(dom, x, cod) | PreTerm::Abs(dom, x, cod) => {
                dom.collect_free(bound, out);
                bound.push(x.clone());
                cod.collect_free(bound, out);
                bound.pop();
            }
            PreTerm::App { ann, fun, arg } => {
                if let Some(ann) = ann {
                    ann.domain.collect_free(bound, out);
                    bound.push(ann.var.clone());
                    ann.codomain.collect_free(bound, out);
                    bound.pop();
                }
                fun.collect_free(bound, out);
                arg.collect_free(bound, out);
            }
            PreTerm::Eq(ty, l, r) => {
                ty.collect_free(bound, out);
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            PreTerm::Refl(a) => a.collect_free(bound, out),
        }
    }

    /// Capture-avoiding substitution `self[replacement/var]`.
    pub fn substitute(&self, replacement: &PreTerm, var: &str) -> PreTerm {
        let avoid = replacement.free_vars();
        self.subst_in(replacement, var, &avoid)
    }

    fn subst_in(&self, repl: &PreTerm, var: &str, avoid: &HashSet<VarName>) -> PreTerm {
        match self {
            PreTerm::SortBox | PreTerm::SortRep => self.clone(),
            PreTerm::Var(x) => {
                if x == var {
                    repl.clone()
                } else {
                    self.clone()
                }
            }
            PreTerm::Sym(f, args) => PreTerm::Sym(
                f.clone(),
                args.iter().map(|a| a.subst_in(repl, var, avoid)).collect(),
            ),
            PreTerm::Pi(dom, x, cod) => {
                let (x, cod) = subst_under_binder(x, cod, repl, var, avoid);
                PreTerm::Pi(Box::new(dom.subst_in(repl, var, avoid)), x, Box::new(cod))
            }
            PreTerm::Abs(dom, x, body) => {
                let (x, body) = subst_under_binder(x, body, repl, var, avoid);
                PreTerm::Abs(Box::new(dom.subst_in(repl, var, avoid)), x, Box::new(body))
            }
            PreTerm::App { ann, fun, arg } => {
                let ann = ann.as_ref().map(|a| {
                    let (var2, cod) = subst_under_binder(&a.var, &a.codomain, repl, var, avoid);
                    Box::new(AppAnn {
                        domain: a.domain.subst_in(repl, var, avoid),
                        var: var2,
                        codomain: cod,
                    })
                });
                PreTerm::App {
                    ann,
                    fun: Box::new(fun.subst_in(repl, var, avoid)),
                    arg: Box::new(arg.subst_in(repl, var, avoid)),
                }
            }
            PreTerm::Eq(ty, l, r) => PreTerm::Eq(
                Box::new(ty.subst_in(repl, var, avoid)),
                Box::new(l.subst_in(repl, var, avoid)),
                Box::new(r.subst_in(repl, var, avoid)),
            ),
            PreTerm::Refl(a) => PreTerm::Refl(Box::new(a.subst_in(repl, var, avoid))),
        }
    }

    /// Simultaneous renaming of a free variable (capture-avoiding via
    /// `substitute` with a variable replacement).
    pub fn rename(&self, from: &str, to: &str) -> PreTerm {
        self.substitute(&PreTerm::var(to), from)
    }

    /// Every variable name (free or bound) occurring in the term; used to
    /// pick fresh names.
    pub fn all_names(&self) -> HashSet<VarName> {
        let mut out = HashSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut HashSet<VarName>) {
        match self {
            PreTerm::SortBox | PreTerm::SortRep => {}
            PreTerm::Var(x) => {
                out.insert(x.clone());
            }
            PreTerm::Sym(_, args) => {
                for a in args {
                    a.collect_names(out);
                }
            }
            PreTerm::Pi(dom, x, cod) | PreTerm::Abs(dom, x, cod) => {
                out.insert(x.clone());
                dom.collect_names(out);
                cod.collect_names(out);
            }
            PreTerm::App { ann, fun, arg } => {
                if let Some(a) = ann {
                    out.insert(a.var.clone());
                    a.domain.collect_names(out);
                    a.codomain.collect_names(out);
                }
                fun.collect_names(out);
                arg.collect_names(out);
            }
            PreTerm::Eq(ty, l, r) => {
                ty.collect_names(out);
                l.collect_names(out);
                r.collect_names(out);
            }
            PreTerm::Refl(a) => a.collect_names(out),
        }
    }

    /// Size of the term measured in tokens of its canonical printed form.
    pub fn size(&self) -> usize {
        self.to_string().split_whitespace().map(token_count).sum()
    }

    /// Rewrite free occurrences of declared nullary symbols from bare
    /// variables into symbol applications. The parser cannot tell `Type`
    /// (a symbol) from a variable; binders shadow symbols.
    pub fn resolve_nullary(&self, symbols: &HashSet<SymName>) -> PreTerm {
        self.resolve_in(symbols, &mut Vec::new())
    }

    /// As `resolve_nullary` but with variables from `bound` already in scope.
    pub fn resolve_nullary_scoped(&self, symbols: &HashSet<SymName>, bound: &[VarName]) -> PreTerm {
        let mut b = bound.to_vec();
        self.resolve_in(symbols, &mut b)
    }

    fn resolve_in(&self, symbols: &HashSet<SymName>, bound: &mut Vec<VarName>) -> PreTerm {
        match self {
            PreTerm::SortBox | PreTerm::SortRep => self.clone(),
            PreTerm::Var(x) => {
                if !bound.iter().any(|b| b == x) && symbols.contains(x) {
                    PreTerm::Sym(x.clone(), Vec::new())
                } else {
                    self.clone()
                }
            }
            PreTerm::Sym(f, args) => PreTerm::Sym(
                f.clone(),
                args.iter().map(|a| a.resolve_in(symbols, bound)).collect(),
            ),
            PreTerm::Pi(dom, x, cod) => {
                let dom = dom.resolve_in(symbols, bound);
                bound.push(x.clone());
                let cod = cod.resolve_in(symbols, bound);
                bound.pop();
                PreTerm::Pi(Box::new(dom), x.clone(), Box::new(cod))
            }
            PreTerm::Abs(dom, x, body) => {
                let dom = dom.resolve_in(symbols, bound);
                bound.push(x.clone());
                let body = body.resolve_in(symbols, bound);
                bound.pop();
                PreTerm::Abs(Box::new(dom), x.clone(), Box::new(body))
            }
            PreTerm::App { ann, fun, arg } => {
                let ann = ann.as_ref().map(|a| {
                    let domain = a.domain.resolve_in(symbols, bound);
                    bound.push(a.var.clone());
                    let codomain = a.codomain.resolve_in(symbols, bound);
                    bound.pop();
                    Box::new(AppAnn {
                        domain,
                        var: a.var.clone(),
                        codomain,
                    })
                });
                PreTerm::App {
                    ann,
                    fun: Box::new(fun.resolve_in(symbols, bound)),
                    arg: Box::new(arg.resolve_in(symbols, bound)),
                }
            }
            PreTerm::Eq(ty, l, r) => PreTerm::Eq(
                Box::new(ty.resolve_in(symbols, bound)),
                Box::new(l.resolve_in(symbols, bound)),
                Box::new(r.resolve_in(symbols, bound)),
            ),
            PreTerm::Refl(a) => PreTerm::Refl(Box::new(a.resolve_in(symbols, bound))),
        }
    }
}

fn token_count(word: &str) -> usize {
    // Punctuation glued to identifiers still counts token by token.
    let mut n = 0;
    let mut in_ident = false;
    for c in word.chars() {
        if c.is_alphanumeric() || c == '_' || c == '\'' {
            if !in_ident {
                n += 1;
                in_ident = true;
            }
        } else {
            n += 1;
            in_ident = false;
        }
    }
    n
}

fn subst_under_binder(
    x: &str,
    body: &PreTerm,
    repl: &PreTerm,
    var: &str,
    avoid: &HashSet<VarName>,
) -> (VarName, PreTerm) {
    if x == var {
        // Shadowed: substitution stops here.
        return (x.to_string(), body.clone());
    }
    if avoid.contains(x) && body.free_vars().contains(var) {
        // The binder would capture a free variable of the replacement.
        let mut taken: HashSet<VarName> = avoid.clone();
        taken.extend(body.all_names());
        taken.insert(var.to_string());
        let fresh = fresh_name(x, &taken);
        let body = body.rename(x, &fresh);
        (fresh.clone(), body.subst_in(repl, var, avoid))
    } else {
        (x.to_string(), body.subst_in(repl, var, avoid))
    }
}

/// First name of the form `base`, `base'`, `base''`, ... not in `taken`.
pub fn fresh_name(base: &str, taken: &HashSet<VarName>) -> VarName {
    let mut candidate = base.to_string();
    while taken.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// α-equivalence. `PartialEq` on `PreTerm` delegates here.
pub fn alpha_eq(a: &PreTerm, b: &PreTerm) -> bool {
    alpha_eq_in(a, b, &mut Vec::new())
}

fn alpha_eq_in(a: &PreTerm, b: &PreTerm, scope: &mut Vec<(VarName, VarName)>) -> bool {
    match (a, b) {
        (PreTerm::SortBox, PreTerm::SortBox) | (PreTerm::SortRep, PreTerm::SortRep) => true,
        (PreTerm::Var(x), PreTerm::Var(y)) => {
            for (l, r) in scope.iter().rev() {
                if l == x || r == y {
                    return l == x && r == y;
                }
            }
            x == y
        }
        (PreTerm::Sym(f, fa), PreTerm::Sym(g, ga)) => {
            f == g
                && fa.len() == ga.len()
                && fa.iter().zip(ga).all(|(x, y)| alpha_eq_in(x, y, scope))
        }
        (PreTerm::Pi(d1, x, c1), PreTerm::Pi(d2, y, c2))
        | (PreTerm::Abs(d1, x, c1), PreTerm::Abs(d2, y, c2)) => {
            if !alpha_eq_in(d1, d2, scope) {
                return false;
            }
            scope.push((x.clone(), y.clone()));
            let ok = alpha_eq_in(c1, c2, scope);
            scope.pop();
            ok
        }
        (
            PreTerm::App {
                ann: n1,
                fun: f1,
                arg: a1,
            },
            PreTerm::App {
                ann: n2,
                fun: f2,
                arg: a2,
            },
        ) => {
            let anns = match (n1, n2) {
                (None, None) => true,
                (Some(m1), Some(m2)) => {
                    alpha_eq_in(&m1.domain, &m2.domain, scope) && {
                        scope.push((m1.var.clone(), m2.var.clone()));
                        let ok = alpha_eq_in(&m1.codomain, &m2.codomain, scope);
                        scope.pop();
                        ok
                    }
                }
                _ => false,
            };
            anns && alpha_eq_in(f1, f2, scope) && alpha_eq_in(a1, a2, scope)
        }
        (PreTerm::Eq(t1, l1, r1), PreTerm::Eq(t2, l2, r2)) => {
            alpha_eq_in(t1, t2, scope) && alpha_eq_in(l1, l2, scope) && alpha_eq_in(r1, r2, scope)
        }
        (PreTerm::Refl(x), PreTerm::Refl(y)) => alpha_eq_in(x, y, scope),
        _ => false,
    }
}

impl PartialEq for PreTerm {
    fn eq(&self, other: &Self) -> bool {
        alpha_eq(self, other)
    }
}

impl Eq for PreTerm {}

impl Hash for PreTerm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        hash_in(self, &mut Vec::new(), state);
    }
}

fn hash_in<H: Hasher>(t: &PreTerm, scope: &mut Vec<VarName>, state: &mut H) {
    match t {
        PreTerm::SortBox => 0u8.hash(state),
        PreTerm::SortRep => 1u8.hash(state),
        PreTerm::Var(x) => {
            2u8.hash(state);
            match scope.iter().rev().position(|b| b == x) {
                Some(i) => (true, i).hash(state),
                None => (false, x).hash(state),
            }
        }
        PreTerm::Sym(f, args) => {
            3u8.hash(state);
            f.hash(state);
            args.len().hash(state);
            for a in args {
                hash_in(a, scope, state);
            }
        }
        PreTerm::Pi(d, x, c) | PreTerm::Abs(d, x, c) => {
            if matches!(t, PreTerm::Pi(..)) { 4u8 } else { 5u8 }.hash(state);
            hash_in(d, scope, state);
            scope.push(x.clone());
            hash_in(c, scope, state);
            scope.pop();
        }
        PreTerm::App { ann, fun, arg } => {
            6u8.hash(state);
            match ann {
                None => 0u8.hash(state),
                Some(a) => {
                    1u8.hash(state);
                    hash_in(&a.domain, scope, state);
                    scope.push(a.var.clone());
                    hash_in(&a.codomain, scope, state);
                    scope.pop();
                }
            }
            hash_in(fun, scope, state);
            hash_in(arg, scope, state);
        }
        PreTerm::Eq(ty, l, r) => {
            7u8.hash(state);
            hash_in(ty, scope, state);
            hash_in(l, scope, state);
            hash_in(r, scope, state);
        }
        PreTerm::Refl(a) => {
            8u8.hash(state);
            hash_in(a, scope, state);
        }
    }
}

impl fmt::Display for PreTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print::fmt_term(self, f)
    }
}

/// An ordered telescope `(x1 : A1, ..., xn : An)` with distinct names.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PreContext {
    pub entries: Vec<(VarName, PreTerm)>,
}

impl PreContext {
    pub fn new(entries: Vec<(VarName, PreTerm)>) -> Self {
        PreContext { entries }
    }

    pub fn empty() -> Self {
        PreContext::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, x: &str) -> Option<&PreTerm> {
        self.entries
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty)
    }

    pub fn names_distinct(&self) -> bool {
        let mut seen = HashSet::new();
        self.entries.iter().all(|(x, _)| seen.insert(x.clone()))
    }

    pub fn extended(&self, x: &str, ty: PreTerm) -> PreContext {
        let mut entries = self.entries.clone();
        entries.push((x.to_string(), ty));
        PreContext { entries }
    }
}

impl fmt::Display for PreContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (x, ty)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x} : {ty}")?;
        }
        write!(f, ")")
    }
}

/// Sort of a signature entry: `Box`, `Rep` or a type over the entry context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EntrySort {
    Box_,
    Rep,
    Type(PreTerm),
}

impl fmt::Display for EntrySort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntrySort::Box_ => write!(f, "Box"),
            EntrySort::Rep => write!(f, "Rep"),
            EntrySort::Type(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignatureEntry {
    pub name: SymName,
    pub context: PreContext,
    pub sort: EntrySort,
}

/// A finite pre-signature; the list order is the well-order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PreSignature {
    pub entries: Vec<SignatureEntry>,
}

impl PreSignature {
    pub fn lookup(&self, name: &str) -> Option<&SignatureEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn names_distinct(&self) -> bool {
        let mut seen = HashSet::new();
        self.entries.iter().all(|e| seen.insert(e.name.clone()))
    }

    /// Restriction to the entries strictly before `name`.
    pub fn prefix_before(&self, name: &str) -> PreSignature {
        let entries = self
            .entries
            .iter()
            .take_while(|e| e.name != name)
            .cloned()
            .collect();
        PreSignature { entries }
    }
}

impl fmt::Display for PreSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            writeln!(f, "{} : {} => {}", e.name, e.context, e.sort)?;
        }
        Ok(())
    }
}
