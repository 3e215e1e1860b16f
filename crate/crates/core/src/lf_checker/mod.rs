//! Judgment checker for the logical framework: signature formation,
//! context formation, typing, and definitional equality with equality
//! reflection.
//!
//! Definitional equality with reflection is undecidable, so the algorithm
//! here is sound but incomplete: it combines β-normalization, ground
//! congruence closure over the equational hypotheses of the context,
//! function extensionality at Π-types, and proof irrelevance at Eq-types.
//! A failed comparison is a rejection; running out of reduction fuel is a
//! distinct `FuelExhausted` diagnostic, never a silent rejection.

mod cc;

use crate::lf_syntax::{
    fresh_name, EntrySort, PreContext, PreSignature, PreTerm, SignatureEntry, SymName, VarName,
};
use cc::Cc;
use std::cell::Cell;
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

/// Reduction-step budget for one judgment check. `RMK_MAX_STEPS`
/// overrides the default through the CLI.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub max_steps: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_steps: 10_000 }
    }
}

/// What a term is checked against: a sort or a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classifier {
    Box_,
    Rep,
    Ty(PreTerm),
}

impl fmt::Display for Classifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classifier::Box_ => write!(f, "Box"),
            Classifier::Rep => write!(f, "Rep"),
            Classifier::Ty(t) => write!(f, "{t}"),
        }
    }
}

/// One of the four judgment forms (the signature is carried by the
/// checker, not the judgment).
#[derive(Clone, Debug)]
pub enum Judgment {
    SigOk,
    CtxOk(PreContext),
    HasType(PreContext, PreTerm, Classifier),
    DefEq(PreContext, PreTerm, PreTerm, PreTerm),
}

#[derive(Debug, Clone, Error)]
pub enum CheckError {
    #[error("unbound identifier '{0}': neither a context variable nor a declared symbol (rule var/symbol-app)")]
    UnboundSymbol(SymName),
    #[error("duplicate symbol '{0}' (rule sig-extend)")]
    DuplicateSymbol(SymName),
    #[error("ill-formed context: {0} (rule ctx-extend)")]
    IllFormedContext(String),
    #[error("sort error: {0} (rule box-rep-sorting)")]
    SortError(String),
    #[error("type mismatch at {location}: expected {expected}, inferred {inferred} (rule conv)")]
    TypeMismatch {
        expected: String,
        inferred: String,
        location: String,
    },
    #[error("domain '{0}' is not representable (rule pi-domain-rep: a product domain must have sort Rep)")]
    NotRepresentable(String),
    #[error("symbol '{symbol}' applied to {got} arguments, declared with {expected} (rule symbol-app)")]
    ArityMismatch {
        symbol: SymName,
        expected: usize,
        got: usize,
    },
    #[error("reduction fuel exhausted after {0} steps; raise RMK_MAX_STEPS")]
    FuelExhausted(u64),
    #[error("equality undecided ({0}); rejecting, the algorithm is incomplete here")]
    Unknown(String),
}

/// Rejection of a signature, carrying the failing entry and rule.
#[derive(Debug, Clone, Error)]
#[error("signature rejected at entry '{entry}': {source}")]
pub struct SigError {
    pub entry: SymName,
    #[source]
    pub source: CheckError,
}

/// Per-entry validation certificate: the signature rule that admitted it.
#[derive(Debug, Clone)]
pub struct EntryCert {
    pub name: SymName,
    pub rule: &'static str,
}

/// A pre-signature together with validation certificates; every entry
/// context and sort is elaborated (application annotations filled in).
#[derive(Debug, Clone)]
pub struct CheckedSignature {
    pub sig: PreSignature,
    pub certificates: Vec<EntryCert>,
}

impl CheckedSignature {
    pub fn symbol_names(&self) -> HashSet<SymName> {
        self.sig.entries.iter().map(|e| e.name.clone()).collect()
    }
}

pub(crate) struct Fuel {
    remaining: Cell<u64>,
    initial: u64,
}

impl Fuel {
    fn new(n: u64) -> Self {
        Fuel {
            remaining: Cell::new(n),
            initial: n,
        }
    }

    fn spend(&self) -> Result<(), CheckError> {
        let r = self.remaining.get();
        if r == 0 {
            return Err(CheckError::FuelExhausted(self.initial));
        }
        self.remaining.set(r - 1);
        Ok(())
    }
}

/// An elaborated, validated context: types carry full application
/// annotations and have been checked at sort Box.
pub type Telescope = Vec<(VarName, PreTerm)>;

/// Check a whole pre-signature. Entry order is the well-order; each entry
/// is validated against the prefix before it.
pub fn check_signature(
    sig: &PreSignature,
    cfg: &CheckConfig,
) -> Result<CheckedSignature, SigError> {
    let mut checked = CheckedSignature {
        sig: PreSignature::default(),
        certificates: Vec::new(),
    };
    for entry in &sig.entries {
        let err = |source| SigError {
            entry: entry.name.clone(),
            source,
        };
        if checked.sig.lookup(&entry.name).is_some() {
            return Err(err(CheckError::DuplicateSymbol(entry.name.clone())));
        }
        let checker = Checker::new(&checked, cfg.clone());
        let telescope = checker.check_context(&entry.context).map_err(err)?;
        let (sort, rule) = match &entry.sort {
            EntrySort::Box_ => (EntrySort::Box_, "sig-symbol-sort"),
            EntrySort::Rep => (EntrySort::Rep, "sig-symbol-sort"),
            EntrySort::Type(a) => {
                let a = checker
                    .check_term_in(&telescope, a, &Classifier::Box_)
                    .map_err(err)?;
                (EntrySort::Type(a), "sig-symbol-type")
            }
        };
        checked.sig.entries.push(SignatureEntry {
            name: entry.name.clone(),
            context: PreContext::new(telescope),
            sort,
        });
        checked.certificates.push(EntryCert {
            name: entry.name.clone(),
            rule,
        });
    }
    Ok(checked)
}

/// Weakening on signatures: if `Σ, Σ' ⊢ sig` and `Σ, Σ'' ⊢ J` then
/// `Σ, Σ', Σ'' ⊢ J`. Realized by re-checking under the merged signature.
pub fn weaken_signature(
    base: &PreSignature,
    extension: &PreSignature,
    tail: &PreSignature,
    judgment: &Judgment,
    cfg: &CheckConfig,
) -> Result<(), SigError> {
    let mut merged = PreSignature::default();
    for e in base
        .entries
        .iter()
        .chain(&extension.entries)
        .chain(&tail.entries)
    {
        if merged.lookup(&e.name).is_some() {
            return Err(SigError {
                entry: e.name.clone(),
                source: CheckError::DuplicateSymbol(e.name.clone()),
            });
        }
        merged.entries.push(e.clone());
    }
    let checked = check_signature(&merged, cfg)?;
    let checker = Checker::new(&checked, cfg.clone());
    checker.check_judgment(judgment).map_err(|source| SigError {
        entry: "<judgment>".into(),
        source,
    })
}

/// Checker for judgments over a fixed checked signature.
pub struct Checker<'a> {
    sig: &'a CheckedSignature,
    cfg: CheckConfig,
}

impl<'a> Checker<'a> {
    pub fn new(sig: &'a CheckedSignature, cfg: CheckConfig) -> Self {
        Checker { sig, cfg }
    }

    pub fn signature(&self) -> &CheckedSignature {
        self.sig
    }

    fn fuel(&self) -> Fuel {
        Fuel::new(self.cfg.max_steps)
    }

    /// Resolve bare identifiers that name nullary symbols against this
    /// signature, with the context variables in scope.
    pub fn resolve(&self, ctx: &PreContext, t: &PreTerm) -> PreTerm {
        let symbols = self.sig.symbol_names();
        let bound: Vec<VarName> = ctx.entries.iter().map(|(x, _)| x.clone()).collect();
        t.resolve_nullary_scoped(&symbols, &bound)
    }

    /// `Σ | Γ ⊢ ctx`: names distinct, every type well-sorted in its prefix.
    pub fn check_context(&self, ctx: &PreContext) -> Result<Telescope, CheckError> {
        if !ctx.names_distinct() {
            return Err(CheckError::IllFormedContext(format!(
                "duplicate variable in {ctx}"
            )));
        }
        let mut telescope: Telescope = Vec::new();
        for (x, ty) in &ctx.entries {
            let ty = self.check_term_in(&telescope, ty, &Classifier::Box_)?;
            telescope.push((x.clone(), ty));
        }
        Ok(telescope)
    }

    /// `Σ | Γ ⊢ term : expected`, returning the elaborated term.
    pub fn check_term(
        &self,
        ctx: &PreContext,
        term: &PreTerm,
        expected: &Classifier,
    ) -> Result<PreTerm, CheckError> {
        let telescope = self.check_context(ctx)?;
        let expected = match expected {
            Classifier::Ty(t) => {
                Classifier::Ty(self.check_term_in(&telescope, t, &Classifier::Box_)?)
            }
            c => c.clone(),
        };
        self.check_term_in(&telescope, term, &expected)
    }

    /// Check an entire judgment.
    pub fn check_judgment(&self, j: &Judgment) -> Result<(), CheckError> {
        match j {
            Judgment::SigOk => Ok(()),
            Judgment::CtxOk(ctx) => self.check_context(ctx).map(|_| ()),
            Judgment::HasType(ctx, a, cl) => self.check_term(ctx, a, cl).map(|_| ()),
            Judgment::DefEq(ctx, a, b, ty) => {
                if self.check_equal(ctx, a, b, ty)? {
                    Ok(())
                } else {
                    Err(CheckError::Unknown(format!("{a} ≢ {b}")))
                }
            }
        }
    }

    /// `Σ | Γ ⊢ a ≡ b : A` (algorithmic, sound, incomplete).
    pub fn check_equal(
        &self,
        ctx: &PreContext,
        a: &PreTerm,
        b: &PreTerm,
        ty: &PreTerm,
    ) -> Result<bool, CheckError> {
        let telescope = self.check_context(ctx)?;
        let ty = self.check_term_in(&telescope, ty, &Classifier::Box_)?;
        let a = self.check_term_in(&telescope, a, &Classifier::Ty(ty.clone()))?;
        let b = self.check_term_in(&telescope, b, &Classifier::Ty(ty.clone()))?;
        let fuel = self.fuel();
        self.eq_at(&telescope, &a, &b, &Classifier::Ty(ty), &fuel)
    }

    /// Componentwise typing of `f : Γ → Δ` against the telescoped target.
    pub fn check_context_morphism(
        &self,
        f: &[PreTerm],
        from: &PreContext,
        to: &PreContext,
    ) -> Result<Vec<PreTerm>, CheckError> {
        let from_t = self.check_context(from)?;
        let to_t = self.check_context(to)?;
        self.check_morphism_in(&from_t, f, &to_t)
    }

    /// `f ≡ g` as context morphisms `Γ → Δ`: componentwise equality at
    /// the telescope-substituted types.
    pub fn morphisms_equal(
        &self,
        f: &[PreTerm],
        g: &[PreTerm],
        from: &PreContext,
        to: &PreContext,
    ) -> Result<bool, CheckError> {
        let from_t = self.check_context(from)?;
        let to_t = self.check_context(to)?;
        let f = self.check_morphism_in(&from_t, f, &to_t)?;
        let g = self.check_morphism_in(&from_t, g, &to_t)?;
        let fuel = self.fuel();
        for (i, (_, ty)) in to_t.iter().enumerate() {
            let names: Vec<VarName> = to_t.iter().map(|(x, _)| x.clone()).collect();
            let ty_f = subst_simultaneous(ty, &names[..i], &f[..i]);
            if !self.eq_at(&from_t, &f[i], &g[i], &Classifier::Ty(ty_f), &fuel)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Apply a context morphism `f : Γ → Δ` to a term over `Δ`.
    pub fn apply_morphism(&self, term: &PreTerm, f: &[PreTerm], to: &PreContext) -> PreTerm {
        let names: Vec<VarName> = to.entries.iter().map(|(x, _)| x.clone()).collect();
        subst_simultaneous(term, &names, f)
    }

    // ------------------------------------------------------------------
    // Internals
    // ------------------------------------------------------------------

    fn check_morphism_in(
        &self,
        from: &Telescope,
        f: &[PreTerm],
        to: &Telescope,
    ) -> Result<Vec<PreTerm>, CheckError> {
        if f.len() != to.len() {
            return Err(CheckError::ArityMismatch {
                symbol: "<context morphism>".into(),
                expected: to.len(),
                got: f.len(),
            });
        }
        let names: Vec<VarName> = to.iter().map(|(x, _)| x.clone()).collect();
        let mut out: Vec<PreTerm> = Vec::new();
        for (i, (_, ty)) in to.iter().enumerate() {
            let ty_inst = subst_simultaneous(ty, &names[..i], &out);
            let fi = self.check_term_in(from, &f[i], &Classifier::Ty(ty_inst))?;
            out.push(fi);
        }
        Ok(out)
    }

    pub fn check_term_in(
        &self,
        ctx: &Telescope,
        term: &PreTerm,
        expected: &Classifier,
    ) -> Result<PreTerm, CheckError> {
        let fuel = self.fuel();
        self.check_in(ctx, term, expected, &fuel)
    }

    /// Infer the classifier of a term over an elaborated telescope.
    pub fn infer_in(&self, ctx: &Telescope, term: &PreTerm) -> Result<(PreTerm, Classifier), CheckError> {
        let fuel = self.fuel();
        self.infer(ctx, term, &fuel)
    }

    /// Equality of two well-sorted types over an elaborated telescope.
    pub fn types_equal_in(
        &self,
        ctx: &Telescope,
        a: &PreTerm,
        b: &PreTerm,
    ) -> Result<bool, CheckError> {
        let fuel = self.fuel();
        self.types_equal(ctx, a, b, &fuel)
    }

    /// β-normal form under the configured fuel.
    pub fn normalize(&self, term: &PreTerm) -> Result<PreTerm, CheckError> {
        let fuel = self.fuel();
        self.nf(term, &fuel)
    }

    fn check_in(
        &self,
        ctx: &Telescope,
        term: &PreTerm,
        expected: &Classifier,
        fuel: &Fuel,
    ) -> Result<PreTerm, CheckError> {
        let (elab, got) = self.infer(ctx, term, fuel)?;
        match (expected, &got) {
            (Classifier::Box_, Classifier::Box_) | (Classifier::Box_, Classifier::Rep) => Ok(elab),
            (Classifier::Rep, Classifier::Rep) => Ok(elab),
            (Classifier::Rep, Classifier::Box_) => {
                Err(CheckError::NotRepresentable(term.to_string()))
            }
            (Classifier::Ty(want), Classifier::Ty(have)) => {
                if self.types_equal(ctx, want, have, fuel)? {
                    Ok(elab)
                } else {
                    Err(CheckError::TypeMismatch {
                        expected: want.to_string(),
                        inferred: have.to_string(),
                        location: term.to_string(),
                    })
                }
            }
            (Classifier::Ty(want), _) => Err(CheckError::SortError(format!(
                "expected a term of type {want}, found the type {term}"
            ))),
            (_, Classifier::Ty(have)) => Err(CheckError::SortError(format!(
                "expected a type, found {term} : {have}"
            ))),
        }
    }

    fn infer(
        &self,
        ctx: &Telescope,
        term: &PreTerm,
        fuel: &Fuel,
    ) -> Result<(PreTerm, Classifier), CheckError> {
        match term {
            PreTerm::SortBox | PreTerm::SortRep => Err(CheckError::SortError(
                "sorts Box/Rep cannot appear in term position".into(),
            )),
            PreTerm::Var(x) => match ctx.iter().rev().find(|(y, _)| y == x) {
                Some((_, ty)) => Ok((term.clone(), Classifier::Ty(ty.clone()))),
                None => match self.sig.sig.lookup(x) {
                    Some(e) if e.context.is_empty() => {
                        self.infer(ctx, &PreTerm::Sym(x.clone(), vec![]), fuel)
                    }
                    Some(_) => Err(CheckError::SortError(format!(
                        "symbol '{x}' used without its arguments"
                    ))),
                    None => Err(CheckError::UnboundSymbol(x.clone())),
                },
            },
            PreTerm::Sym(name, args) => {
                let entry = self
                    .sig
                    .sig
                    .lookup(name)
                    .ok_or_else(|| CheckError::UnboundSymbol(name.clone()))?
                    .clone();
                if args.len() != entry.context.len() {
                    return Err(CheckError::ArityMismatch {
                        symbol: name.clone(),
                        expected: entry.context.len(),
                        got: args.len(),
                    });
                }
                let declared: Telescope = entry.context.entries.clone();
                let args = self.check_morphism_in(ctx, args, &declared)?;
                let names: Vec<VarName> = declared.iter().map(|(x, _)| x.clone()).collect();
                let cl = match &entry.sort {
                    EntrySort::Box_ => Classifier::Box_,
                    EntrySort::Rep => Classifier::Rep,
                    EntrySort::Type(a) => Classifier::Ty(subst_simultaneous(a, &names, &args)),
                };
                Ok((PreTerm::Sym(name.clone(), args), cl))
            }
            PreTerm::Pi(dom, x, cod) => {
                let dom = self.check_in(ctx, dom, &Classifier::Rep, fuel)?;
                let mut ctx2 = ctx.clone();
                ctx2.push((x.clone(), dom.clone()));
                let cod = self.check_in(&ctx2, cod, &Classifier::Box_, fuel)?;
                Ok((
                    PreTerm::Pi(Box::new(dom), x.clone(), Box::new(cod)),
                    Classifier::Box_,
                ))
            }
            PreTerm::Abs(dom, x, body) => {
                let dom = self.check_in(ctx, dom, &Classifier::Rep, fuel)?;
                let mut ctx2 = ctx.clone();
                ctx2.push((x.clone(), dom.clone()));
                let (body, cl) = self.infer(&ctx2, body, fuel)?;
                match cl {
                    Classifier::Ty(b) => Ok((
                        PreTerm::Abs(Box::new(dom.clone()), x.clone(), Box::new(body)),
                        Classifier::Ty(PreTerm::Pi(Box::new(dom), x.clone(), Box::new(b))),
                    )),
                    _ => Err(CheckError::SortError(format!(
                        "abstraction body {body} is a type, not a term"
                    ))),
                }
            }
            PreTerm::App { ann, fun, arg } => match ann {
                Some(ann) => {
                    let dom = self.check_in(ctx, &ann.domain, &Classifier::Rep, fuel)?;
                    let mut ctx2 = ctx.clone();
                    ctx2.push((ann.var.clone(), dom.clone()));
                    let cod = self.check_in(&ctx2, &ann.codomain, &Classifier::Box_, fuel)?;
                    let pi = PreTerm::Pi(
                        Box::new(dom.clone()),
                        ann.var.clone(),
                        Box::new(cod.clone()),
                    );
                    let fun = self.check_in(ctx, fun, &Classifier::Ty(pi), fuel)?;
                    let arg = self.check_in(ctx, arg, &Classifier::Ty(dom.clone()), fuel)?;
                    let result = cod.substitute(&arg, &ann.var);
                    Ok((
                        PreTerm::apply_ann(
                            crate::lf_syntax::AppAnn {
                                domain: dom,
                                var: ann.var.clone(),
                                codomain: cod,
                            },
                            fun,
                            arg,
                        ),
                        Classifier::Ty(result),
                    ))
                }
                None => {
                    let (fun, fcl) = self.infer(ctx, fun, fuel)?;
                    let fty = match fcl {
                        Classifier::Ty(t) => t,
                        _ => {
                            return Err(CheckError::SortError(format!(
                                "cannot apply the type {fun}"
                            )))
                        }
                    };
                    let fty = self.whnf(&fty, fuel)?;
                    match fty {
                        PreTerm::Pi(dom, x, cod) => {
                            let arg =
                                self.check_in(ctx, arg, &Classifier::Ty((*dom).clone()), fuel)?;
                            let result = cod.substitute(&arg, &x);
                            Ok((
                                PreTerm::apply_ann(
                                    crate::lf_syntax::AppAnn {
                                        domain: *dom,
                                        var: x,
                                        codomain: *cod,
                                    },
                                    fun,
                                    arg,
                                ),
                                Classifier::Ty(result),
                            ))
                        }
                        other => Err(CheckError::TypeMismatch {
                            expected: "(x : _) -> _".into(),
                            inferred: other.to_string(),
                            location: term.to_string(),
                        }),
                    }
                }
            },
            PreTerm::Eq(ty, l, r) => {
                let ty = self.check_in(ctx, ty, &Classifier::Box_, fuel)?;
                let l = self.check_in(ctx, l, &Classifier::Ty(ty.clone()), fuel)?;
                let r = self.check_in(ctx, r, &Classifier::Ty(ty.clone()), fuel)?;
                Ok((
                    PreTerm::Eq(Box::new(ty), Box::new(l), Box::new(r)),
                    Classifier::Box_,
                ))
            }
            PreTerm::Refl(a) => {
                let (a, cl) = self.infer(ctx, a, fuel)?;
                match cl {
                    Classifier::Ty(ty) => {
                        let eq = PreTerm::Eq(
                            Box::new(ty),
                            Box::new(a.clone()),
                            Box::new(a.clone()),
                        );
                        Ok((PreTerm::Refl(Box::new(a)), Classifier::Ty(eq)))
                    }
                    _ => Err(CheckError::SortError(format!(
                        "refl applies to a term, not the type {a}"
                    ))),
                }
            }
        }
    }

    /// Equality of types (both already well-sorted).
    fn types_equal(
        &self,
        ctx: &Telescope,
        want: &PreTerm,
        have: &PreTerm,
        fuel: &Fuel,
    ) -> Result<bool, CheckError> {
        self.eq_at(ctx, want, have, &Classifier::Box_, fuel)
    }

    /// Type-directed equality. Both terms are assumed well-classified.
    fn eq_at(
        &self,
        ctx: &Telescope,
        a: &PreTerm,
        b: &PreTerm,
        at: &Classifier,
        fuel: &Fuel,
    ) -> Result<bool, CheckError> {
        match at {
            Classifier::Ty(ty) => {
                let ty = self.whnf(ty, fuel)?;
                match ty {
                    // Proof irrelevance: reflection plus refl-uniqueness
                    // make any two proofs of an equation equal.
                    PreTerm::Eq(..) => Ok(true),
                    // Function extensionality: compare applications to a
                    // fresh variable.
                    PreTerm::Pi(dom, x, cod) => {
                        let mut taken: HashSet<VarName> =
                            ctx.iter().map(|(v, _)| v.clone()).collect();
                        taken.extend(a.all_names());
                        taken.extend(b.all_names());
                        taken.extend(cod.all_names());
                        let z = fresh_name(&x, &taken);
                        let mut ctx2 = ctx.to_vec();
                        ctx2.push((z.clone(), (*dom).clone()));
                        let az = PreTerm::apply(a.clone(), PreTerm::var(&z));
                        let bz = PreTerm::apply(b.clone(), PreTerm::var(&z));
                        let cod = cod.substitute(&PreTerm::var(&z), &x);
                        self.eq_at(&ctx2, &az, &bz, &Classifier::Ty(cod), fuel)
                    }
                    _ => self.eq_untyped(ctx, a, b, fuel),
                }
            }
            _ => self.eq_untyped(ctx, a, b, fuel),
        }
    }

    /// β-normalize both sides and compare structurally modulo the ground
    /// congruence closure of the context's equational hypotheses.
    fn eq_untyped(
        &self,
        ctx: &Telescope,
        a: &PreTerm,
        b: &PreTerm,
        fuel: &Fuel,
    ) -> Result<bool, CheckError> {
        let a = erase_anns(&self.nf(a, fuel)?);
        let b = erase_anns(&self.nf(b, fuel)?);
        let mut cc = self.eq_env(ctx, fuel)?;
        Ok(self.nf_eq(&a, &b, &mut cc))
    }

    /// Congruence closure over the ground equations harvested from
    /// context hypotheses of Eq type.
    fn eq_env(&self, ctx: &Telescope, fuel: &Fuel) -> Result<Cc, CheckError> {
        let mut cc = Cc::new();
        for (_, ty) in ctx {
            if let PreTerm::Eq(_, l, r) = self.whnf(ty, fuel)? {
                let l = erase_anns(&self.nf(&l, fuel)?);
                let r = erase_anns(&self.nf(&r, fuel)?);
                cc.merge(&l, &r);
            }
        }
        Ok(cc)
    }

    fn nf_eq(&self, a: &PreTerm, b: &PreTerm, cc: &mut Cc) -> bool {
        if a == b || cc.same(a, b) {
            return true;
        }
        match (a, b) {
            (PreTerm::Sym(f, fa), PreTerm::Sym(g, ga)) => {
                f == g
                    && fa.len() == ga.len()
                    && fa.iter().zip(ga).all(|(x, y)| self.nf_eq(x, y, cc))
            }
            (
                PreTerm::App {
                    fun: f1, arg: a1, ..
                },
                PreTerm::App {
                    fun: f2, arg: a2, ..
                },
            ) => self.nf_eq(f1, f2, cc) && self.nf_eq(a1, a2, cc),
            (PreTerm::Eq(t1, l1, r1), PreTerm::Eq(t2, l2, r2)) => {
                self.nf_eq(t1, t2, cc) && self.nf_eq(l1, l2, cc) && self.nf_eq(r1, r2, cc)
            }
            (PreTerm::Refl(x), PreTerm::Refl(y)) => self.nf_eq(x, y, cc),
            (PreTerm::Pi(d1, x, c1), PreTerm::Pi(d2, y, c2))
            | (PreTerm::Abs(d1, x, c1), PreTerm::Abs(d2, y, c2)) => {
                if !self.nf_eq(d1, d2, cc) {
                    return false;
                }
                let mut taken = c1.all_names();
                taken.extend(c2.all_names());
                let z = fresh_name(x, &taken);
                let c1 = c1.rename(x, &z);
                let c2 = c2.rename(y, &z);
                self.nf_eq(&c1, &c2, cc)
            }
            _ => false,
        }
    }

    /// Weak-head normal form: β-reduction at the head.
    pub(crate) fn whnf(&self, t: &PreTerm, fuel: &Fuel) -> Result<PreTerm, CheckError> {
        let mut t = t.clone();
        loop {
            match t {
                PreTerm::App { ann, fun, arg } => {
                    let fun_w = self.whnf(&fun, fuel)?;
                    if let PreTerm::Abs(_, x, body) = fun_w {
                        fuel.spend()?;
                        t = body.substitute(&arg, &x);
                    } else {
                        return Ok(PreTerm::App {
                            ann,
                            fun: Box::new(fun_w),
                            arg,
                        });
                    }
                }
                other => return Ok(other),
            }
        }
    }

    /// Full β-normal form.
    pub(crate) fn nf(&self, t: &PreTerm, fuel: &Fuel) -> Result<PreTerm, CheckError> {
        let t = self.whnf(t, fuel)?;
        Ok(match t {
            PreTerm::SortBox | PreTerm::SortRep | PreTerm::Var(_) => t,
            PreTerm::Sym(f, args) => {
                let args = args
                    .iter()
                    .map(|a| self.nf(a, fuel))
                    .collect::<Result<_, _>>()?;
                PreTerm::Sym(f, args)
            }
            PreTerm::Pi(d, x, c) => PreTerm::Pi(
                Box::new(self.nf(&d, fuel)?),
                x,
                Box::new(self.nf(&c, fuel)?),
            ),
            PreTerm::Abs(d, x, b) => PreTerm::Abs(
                Box::new(self.nf(&d, fuel)?),
                x,
                Box::new(self.nf(&b, fuel)?),
            ),
            PreTerm::App { ann, fun, arg } => {
                // Head is neutral after whnf.
                let ann = match ann {
                    Some(a) => Some(Box::new(crate::lf_syntax::AppAnn {
                        domain: self.nf(&a.domain, fuel)?,
                        var: a.var.clone(),
                        codomain: self.nf(&a.codomain, fuel)?,
                    })),
                    None => None,
                };
                PreTerm::App {
                    ann,
                    fun: Box::new(self.nf(&fun, fuel)?),
                    arg: Box::new(self.nf(&arg, fuel)?),
                }
            }
            PreTerm::Eq(ty, l, r) => PreTerm::Eq(
                Box::new(self.nf(&ty, fuel)?),
                Box::new(self.nf(&l, fuel)?),
                Box::new(self.nf(&r, fuel)?),
            ),
            PreTerm::Refl(a) => PreTerm::Refl(Box::new(self.nf(&a, fuel)?)),
        })
    }
}

/// Simultaneous substitution of `terms` for `names` (a context morphism
/// application). Target variables are freshened first so overlapping
/// names between source and target contexts cannot interfere.
pub fn subst_simultaneous(t: &PreTerm, names: &[VarName], terms: &[PreTerm]) -> PreTerm {
    assert_eq!(names.len(), terms.len());
    let mut taken: HashSet<VarName> = t.all_names();
    for tm in terms {
        taken.extend(tm.all_names());
    }
    for n in names {
        taken.insert(n.clone());
    }
    let mut renamed = t.clone();
    let mut fresh_names = Vec::new();
    for n in names {
        let z = fresh_name(&format!("{n}_sub"), &taken);
        taken.insert(z.clone());
        renamed = renamed.rename(n, &z);
        fresh_names.push(z);
    }
    for (z, tm) in fresh_names.iter().zip(terms) {
        renamed = renamed.substitute(tm, z);
    }
    renamed
}

/// Drop application annotations; used before untyped comparison.
pub fn erase_anns(t: &PreTerm) -> PreTerm {
    match t {
        PreTerm::SortBox | PreTerm::SortRep | PreTerm::Var(_) => t.clone(),
        PreTerm::Sym(f, args) => PreTerm::Sym(f.clone(), args.iter().map(erase_anns).collect()),
        PreTerm::Pi(d, x, c) => {
            PreTerm::Pi(Box::new(erase_anns(d)), x.clone(), Box::new(erase_anns(c)))
        }
        PreTerm::Abs(d, x, c) => {
            PreTerm::Abs(Box::new(erase_anns(d)), x.clone(), Box::new(erase_anns(c)))
        }
        PreTerm::App { fun, arg, .. } => PreTerm::App {
            ann: None,
            fun: Box::new(erase_anns(fun)),
            arg: Box::new(erase_anns(arg)),
        },
        PreTerm::Eq(ty, l, r) => PreTerm::Eq(
            Box::new(erase_anns(ty)),
            Box::new(erase_anns(l)),
            Box::new(erase_anns(r)),
        ),
        PreTerm::Refl(a) => PreTerm::Refl(Box::new(erase_anns(a))),
    }
}

#[cfg(test)]
mod tests;
