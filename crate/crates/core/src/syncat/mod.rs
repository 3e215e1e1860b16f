//! Bounded construction of the syntactic category of a checked
//! signature: objects are the well-formed contexts up to a declared
//! depth, morphisms are equivalence classes of tuples of size-bounded
//! normal terms under the checker's algorithmic equality, composition is
//! substitution.
//!
//! Term size is measured in tokens of the canonical printed form. The
//! checker's equality is incomplete, so hom-set quotients may over-count
//! classes; any undecided comparison sets the `equality_incomplete`
//! caveat on the result.

use crate::lf_checker::{CheckConfig, CheckError, CheckedSignature, Checker, Classifier};
use crate::lf_syntax::{PreContext, PreTerm, VarName};
use std::collections::HashSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SynCatError {
    #[error("enumeration overflow: more than {0} candidates (partial result)")]
    Overflow(usize),
    #[error(transparent)]
    Check(#[from] CheckError),
}

/// Enumeration bounds; positive and reported in all outputs.
#[derive(Debug, Clone, Copy)]
pub struct Bounds {
    pub max_context_len: usize,
    pub max_term_size: usize,
    pub max_enumeration: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_context_len: 2,
            max_term_size: 4,
            max_enumeration: 20_000,
        }
    }
}

/// One hom-set: equivalence classes of context morphisms, each kept as
/// its list of enumerated representatives (first one canonical).
#[derive(Debug, Clone, Default)]
pub struct HomClasses {
    pub classes: Vec<Vec<Vec<PreTerm>>>,
}

impl HomClasses {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    pub fn representative(&self, class: usize) -> &[PreTerm] {
        &self.classes[class][0]
    }
}

/// The bounded syntactic category.
pub struct SynCatApprox {
    pub bounds: Bounds,
    pub contexts: Vec<PreContext>,
    pub homs: Vec<Vec<HomClasses>>, // homs[from][to]
    pub equality_incomplete: bool,
    pub overflowed: bool,
}

/// A generating representable morphism: the projection from an extended
/// context to its parent, for a representable extension type.
#[derive(Debug, Clone)]
pub struct Generator {
    pub extended: usize,
    pub parent: usize,
    pub projection_class: usize,
}

/// Status of a pullback verification for a generator against a morphism.
#[derive(Debug, Clone)]
pub enum PullbackStatus {
    Verified { apex: usize },
    BoundLimited { reason: String },
}

pub struct Workbench<'a> {
    pub checker: Checker<'a>,
    pub bounds: Bounds,
    budget_used: std::cell::Cell<usize>,
}

impl<'a> Workbench<'a> {
    pub fn new(sig: &'a CheckedSignature, cfg: CheckConfig, bounds: Bounds) -> Self {
        Workbench {
            checker: Checker::new(sig, cfg),
            bounds,
            budget_used: std::cell::Cell::new(0),
        }
    }

    fn spend(&self, n: usize) -> Result<(), SynCatError> {
        let used = self.budget_used.get() + n;
        self.budget_used.set(used);
        if used > self.bounds.max_enumeration {
            Err(SynCatError::Overflow(self.bounds.max_enumeration))
        } else {
            Ok(())
        }
    }

    /// All neutral terms over the context with size within budget,
    /// together with their classifiers. Neutrals are variables, symbol
    /// applications of normal arguments, and applications of Π-typed
    /// neutrals to normal arguments.
    fn neutrals(&self, ctx: &PreContext) -> Result<Vec<(PreTerm, Classifier)>, SynCatError> {
        let mut out: Vec<(PreTerm, Classifier)> = Vec::new();
        let mut seen: HashSet<PreTerm> = HashSet::new();
        // variables
        for (x, ty) in &ctx.entries {
            let t = PreTerm::var(x);
            if seen.insert(t.clone()) {
                out.push((t, Classifier::Ty(ty.clone())));
            }
        }
        // symbol applications, smallest signatures first
        let entries = self.checker.signature().sig.entries.clone();
        for entry in &entries {
            // enumerate argument tuples against the declared telescope
            let mut tuples: Vec<Vec<PreTerm>> = vec![vec![]];
            for i in 0..entry.context.len() {
                let mut next = Vec::new();
                for tuple in &tuples {
                    let names: Vec<VarName> = entry
                        .context
                        .entries
                        .iter()
                        .map(|(x, _)| x.clone())
                        .collect();
                    let want = crate::lf_checker::subst_simultaneous(
                        &entry.context.entries[i].1,
                        &names[..i],
                        tuple,
                    );
                    for arg in self.terms_of(ctx, &want)? {
                        let mut t2 = tuple.clone();
                        t2.push(arg);
                        // prune by partial size
                        let sz: usize = t2.iter().map(|t| t.size()).sum::<usize>() + 3;
                        if sz <= self.bounds.max_term_size {
                            next.push(t2);
                        }
                    }
                }
                tuples = next;
                self.spend(tuples.len())?;
            }
            for args in tuples {
                let t = PreTerm::Sym(entry.name.clone(), args);
                if t.size() > self.bounds.max_term_size || !seen.insert(t.clone()) {
                    continue;
                }
                match self.checker.check_term_in(&ctx_telescope(ctx), &t, &Classifier::Box_) {
                    Ok(elab) => out.push((elab.clone(), Classifier::Box_)),
                    Err(_) => {
                        // not a type; infer its classifier as a term
                        if let Ok((elab, cl)) = self.infer(ctx, &t) {
                            out.push((elab, cl));
                        }
                    }
                }
            }
        }
        // applications of Π-typed neutrals
        let mut frontier = out.clone();
        while !frontier.is_empty() {
            let mut added = Vec::new();
            for (head, cl) in &frontier {
                if let Classifier::Ty(ty) = cl {
                    if let PreTerm::Pi(dom, _, _) = ty {
                        for arg in self.terms_of(ctx, dom)? {
                            let t = PreTerm::apply(head.clone(), arg);
                            if t.size() > self.bounds.max_term_size {
                                continue;
                            }
                            if let Ok((elab, cl2)) = self.infer(ctx, &t) {
                                let key = crate::lf_checker::erase_anns(&elab);
                                if seen.insert(key) {
                                    added.push((elab, cl2));
                                }
                            }
                        }
                    }
                }
            }
            self.spend(added.len().max(1))?;
            out.extend(added.iter().cloned());
            frontier = added;
        }
        Ok(out)
    }

    fn infer(&self, ctx: &PreContext, t: &PreTerm) -> Result<(PreTerm, Classifier), CheckError> {
        // typecheck against Box first (types), then fall back to inference
        let telescope = ctx_telescope(ctx);
        match self.checker.check_term_in(&telescope, t, &Classifier::Box_) {
            Ok(elab) => Ok((elab, Classifier::Box_)),
            Err(_) => {
                // infer via a dummy: check against nothing is not exposed,
                // so probe all context-derived types is wasteful; use the
                // checker's inference through check_equal machinery:
                self.checker.infer_in(&telescope, t)
            }
        }
    }

    /// All normal terms of the given type (which must be well-sorted).
    pub fn terms_of(&self, ctx: &PreContext, ty: &PreTerm) -> Result<Vec<PreTerm>, SynCatError> {
        let telescope = ctx_telescope(ctx);
        let mut out = Vec::new();
        let mut seen: HashSet<PreTerm> = HashSet::new();
        // variables of convertible type (cheap neutral subset: variables
        // and symbol applications of variables, recursively bounded)
        for (t, cl) in self.shallow_neutrals(ctx)? {
            if let Classifier::Ty(have) = cl {
                if self
                    .checker
                    .types_equal_in(&telescope, ty, &have)
                    .unwrap_or(false)
                    && seen.insert(t.clone())
                {
                    out.push(t);
                }
            }
        }
        self.spend(out.len().max(1))?;
        Ok(out)
    }

    /// Variables and symbol applications whose arguments are again
    /// shallow neutrals; sufficient for size-bounded morphism components.
    fn shallow_neutrals(&self, ctx: &PreContext) -> Result<Vec<(PreTerm, Classifier)>, SynCatError> {
        let telescope = ctx_telescope(ctx);
        let mut out: Vec<(PreTerm, Classifier)> = Vec::new();
        for (x, ty) in &ctx.entries {
            out.push((PreTerm::var(x), Classifier::Ty(ty.clone())));
        }
        let entries = self.checker.signature().sig.entries.clone();
        // iterate to a fixpoint so symbol applications can nest within
        // the size budget
        loop {
            let before = out.len();
            for entry in &entries {
                let mut tuples: Vec<Vec<PreTerm>> = vec![vec![]];
                for i in 0..entry.context.len() {
                    let names: Vec<VarName> = entry
                        .context
                        .entries
                        .iter()
                        .map(|(x, _)| x.clone())
                        .collect();
                    let mut next = Vec::new();
                    for tuple in &tuples {
                        let want = crate::lf_checker::subst_simultaneous(
                            &entry.context.entries[i].1,
                            &names[..i],
                            tuple,
                        );
                        for (cand, cl) in &out {
                            if let Classifier::Ty(have) = cl {
                                if self
                                    .checker
                                    .types_equal_in(&telescope, &want, have)
                                    .unwrap_or(false)
                                {
                                    let mut t2 = tuple.clone();
                                    t2.push(cand.clone());
                                    let sz: usize =
                                        t2.iter().map(|t| t.size()).sum::<usize>() + 3;
                                    if sz <= self.bounds.max_term_size {
                                        next.push(t2);
                                    }
                                }
                            }
                        }
                    }
                    tuples = next;
                    self.spend(tuples.len().max(1))?;
                }
                for args in tuples {
                    if args.is_empty() && !entry.context.is_empty() {
                        continue;
                    }
                    let t = PreTerm::Sym(entry.name.clone(), args);
                    if t.size() > self.bounds.max_term_size {
                        continue;
                    }
                    if out.iter().any(|(u, _)| u == &t) {
                        continue;
                    }
                    if let Ok((elab, cl)) = self.checker.infer_in(&telescope, &t) {
                        if matches!(cl, Classifier::Ty(_)) {
                            out.push((elab, cl));
                        }
                    }
                }
            }
            if out.len() == before {
                break;
            }
        }
        Ok(out)
    }

    /// All types over the context within the size bound (for context
    /// extension and generator detection). Returns (type, representable).
    pub fn types_over(&self, ctx: &PreContext) -> Result<Vec<(PreTerm, bool)>, SynCatError> {
        let telescope = ctx_telescope(ctx);
        let mut out: Vec<(PreTerm, bool)> = Vec::new();
        let mut seen: HashSet<PreTerm> = HashSet::new();
        for (t, cl) in self.neutrals(ctx)? {
            if matches!(cl, Classifier::Box_ | Classifier::Rep) && seen.insert(t.clone()) {
                let rep = self
                    .checker
                    .check_term_in(&telescope, &t, &Classifier::Rep)
                    .is_ok();
                out.push((t, rep));
            }
        }
        // dependent products and equations within the size budget
        let base: Vec<(PreTerm, bool)> = out.clone();
        for (dom, rep) in &base {
            if !rep {
                continue;
            }
            let fresh = crate::lf_syntax::fresh_name(
                "v",
                &ctx.entries.iter().map(|(x, _)| x.clone()).collect(),
            );
            let inner = ctx.extended(&fresh, dom.clone());
            for (cod, _) in self.types_over_shallow(&inner)? {
                let t = PreTerm::pi(&fresh, dom.clone(), cod);
                if t.size() <= self.bounds.max_term_size && seen.insert(t.clone()) {
                    out.push((t, false));
                }
            }
        }
        for (ty, _) in &base {
            for a in self.terms_of(ctx, ty)? {
                for b in self.terms_of(ctx, ty)? {
                    let t = PreTerm::eq(ty.clone(), a.clone(), b);
                    if t.size() <= self.bounds.max_term_size && seen.insert(t.clone()) {
                        out.push((t, false));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Non-recursive layer of `types_over` (no nested Π/Eq), to keep the
    /// Π-codomain enumeration bounded.
    fn types_over_shallow(&self, ctx: &PreContext) -> Result<Vec<(PreTerm, bool)>, SynCatError> {
        let mut out = Vec::new();
        let mut seen: HashSet<PreTerm> = HashSet::new();
        for (t, cl) in self.neutrals(ctx)? {
            if matches!(cl, Classifier::Box_ | Classifier::Rep) && seen.insert(t.clone()) {
                out.push((t, matches!(cl, Classifier::Rep)));
            }
        }
        Ok(out)
    }
}

fn ctx_telescope(ctx: &PreContext) -> Vec<(VarName, PreTerm)> {
    ctx.entries.clone()
}

/// Context names in canonical printed form.
pub fn context_name(ctx: &PreContext) -> String {
    ctx.to_string()
}

pub fn morphism_name(f: &[PreTerm]) -> String {
    let mut s = String::from("(");
    for (i, t) in f.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&t.to_string());
    }
    s.push(')');
    s
}

/// Build the bounded syntactic category. Exceeding the enumeration cap
/// returns whatever was built so far with the `overflowed` flag set
/// instead of an error; hom rows are padded empty past the cut.
pub fn build_syncat(
    sig: &CheckedSignature,
    cfg: CheckConfig,
    bounds: Bounds,
) -> Result<SynCatApprox, SynCatError> {
    let wb = Workbench::new(sig, cfg, bounds);
    let mut overflowed = false;
    // contexts by breadth-first extension with canonical variable names
    let mut contexts: Vec<PreContext> = vec![PreContext::empty()];
    let mut frontier = vec![PreContext::empty()];
    'grow: while !frontier.is_empty() {
        let mut next = Vec::new();
        for ctx in &frontier {
            if ctx.len() >= bounds.max_context_len {
                continue;
            }
            let types = match wb.types_over(ctx) {
                Ok(t) => t,
                Err(SynCatError::Overflow(_)) => {
                    overflowed = true;
                    break 'grow;
                }
                Err(e) => return Err(e),
            };
            for (ty, _rep) in types {
                let var = format!("v{}", ctx.len() + 1);
                let extended = ctx.extended(&var, ty);
                if !contexts.contains(&extended) {
                    contexts.push(extended.clone());
                    next.push(extended);
                }
            }
        }
        if wb.spend(next.len().max(1)).is_err() {
            overflowed = true;
            break;
        }
        frontier = next;
    }
    // morphisms: tuples of terms against telescoped targets, quotiented
    let mut equality_incomplete = false;
    let mut homs: Vec<Vec<HomClasses>> = Vec::new();
    'rows: for from in &contexts {
        let mut row = Vec::new();
        for to in &contexts {
            if overflowed {
                row.push(HomClasses::default());
                continue;
            }
            let mut tuples: Vec<Vec<PreTerm>> = vec![vec![]];
            for i in 0..to.len() {
                let names: Vec<VarName> = to.entries.iter().map(|(x, _)| x.clone()).collect();
                let mut next = Vec::new();
                for tuple in &tuples {
                    let want = crate::lf_checker::subst_simultaneous(
                        &to.entries[i].1,
                        &names[..i],
                        tuple,
                    );
                    let cands = match wb.terms_of(from, &want) {
                        Ok(c) => c,
                        Err(SynCatError::Overflow(_)) => {
                            overflowed = true;
                            row.push(HomClasses::default());
                            while row.len() < contexts.len() {
                                row.push(HomClasses::default());
                            }
                            homs.push(row);
                            continue 'rows;
                        }
                        Err(e) => return Err(e),
                    };
                    for cand in cands {
                        let mut t2 = tuple.clone();
                        t2.push(cand);
                        next.push(t2);
                    }
                }
                tuples = next;
                if wb.spend(tuples.len().max(1)).is_err() {
                    overflowed = true;
                    tuples.clear();
                    break;
                }
            }
            // quotient by the checker's morphism equality
            let mut classes: Vec<Vec<Vec<PreTerm>>> = Vec::new();
            'tuple: for tuple in tuples {
                for class in classes.iter_mut() {
                    match wb.checker.morphisms_equal(&class[0], &tuple, from, to) {
                        Ok(true) => {
                            class.push(tuple);
                            continue 'tuple;
                        }
                        Ok(false) => {}
                        Err(_) => {
                            equality_incomplete = true;
                        }
                    }
                }
                classes.push(vec![tuple]);
            }
            row.push(HomClasses { classes });
        }
        homs.push(row);
    }
    while homs.len() < contexts.len() {
        homs.push(vec![HomClasses::default(); contexts.len()]);
    }
    Ok(SynCatApprox {
        bounds,
        contexts,
        homs,
        equality_incomplete,
        overflowed,
    })
}

impl SynCatApprox {
    pub fn context_index(&self, ctx: &PreContext) -> Option<usize> {
        self.contexts.iter().position(|c| c == ctx)
    }

    /// The empty context is terminal within bounds: exactly one morphism
    /// class from every context.
    pub fn check_terminal(&self) -> bool {
        let empty = self
            .context_index(&PreContext::empty())
            .expect("empty context enumerated");
        (0..self.contexts.len()).all(|i| self.homs[i][empty].count() == 1)
    }

    /// Generating representable morphisms: projections `(Γ, x : A) → Γ`
    /// with `A` representable over `Γ`.
    pub fn generating_representables(
        &self,
        sig: &CheckedSignature,
        cfg: &CheckConfig,
    ) -> Vec<Generator> {
        let checker = Checker::new(sig, cfg.clone());
        let mut out = Vec::new();
        for (i, ctx) in self.contexts.iter().enumerate() {
            if ctx.is_empty() {
                continue;
            }
            let parent = PreContext::new(ctx.entries[..ctx.len() - 1].to_vec());
            let Some(j) = self.context_index(&parent) else {
                continue;
            };
            let last_ty = &ctx.entries[ctx.len() - 1].1;
            let telescope = parent.entries.clone();
            if checker
                .check_term_in(&telescope, last_ty, &Classifier::Rep)
                .is_err()
            {
                continue;
            }
            // projection: the variable sequence of the parent
            let proj: Vec<PreTerm> = parent
                .entries
                .iter()
                .map(|(x, _)| PreTerm::var(x))
                .collect();
            let class = self.homs[i][j]
                .classes
                .iter()
                .position(|c| {
                    checker
                        .morphisms_equal(&c[0], &proj, ctx, &parent)
                        .unwrap_or(false)
                })
                .expect("projection is an enumerated morphism");
            out.push(Generator {
                extended: i,
                parent: j,
                projection_class: class,
            });
        }
        out
    }

    /// For each generator and each morphism into its codomain, the
    /// substituted extension is a pullback, verified by its universal
    /// property within bounds.
    pub fn check_representable_pullbacks(
        &self,
        sig: &CheckedSignature,
        cfg: &CheckConfig,
    ) -> Vec<(usize, usize, usize, PullbackStatus)> {
        let checker = Checker::new(sig, cfg.clone());
        let mut out = Vec::new();
        for (gi, gen) in self
            .generating_representables(sig, cfg)
            .iter()
            .enumerate()
        {
            let gamma = &self.contexts[gen.parent];
            let ext = &self.contexts[gen.extended];
            let a_ty = &ext.entries[ext.len() - 1].1;
            for (di, delta) in self.contexts.iter().enumerate() {
                for (ci, class) in self.homs[di][gen.parent].classes.iter().enumerate() {
                    let f = &class[0];
                    // substituted extension type A[f]
                    let names: Vec<VarName> =
                        gamma.entries.iter().map(|(x, _)| x.clone()).collect();
                    let a_f = crate::lf_checker::subst_simultaneous(a_ty, &names, f);
                    let a_f = match checker.normalize(&a_f) {
                        Ok(t) => t,
                        Err(e) => {
                            out.push((
                                gi,
                                di,
                                ci,
                                PullbackStatus::BoundLimited {
                                    reason: e.to_string(),
                                },
                            ));
                            continue;
                        }
                    };
                    if a_f.size() > self.bounds.max_term_size
                        || delta.len() + 1 > self.bounds.max_context_len
                    {
                        out.push((
                            gi,
                            di,
                            ci,
                            PullbackStatus::BoundLimited {
                                reason: format!(
                                    "extension type {a_f} or context length exceeds bounds"
                                ),
                            },
                        ));
                        continue;
                    }
                    let var = format!("v{}", delta.len() + 1);
                    let apex_ctx = delta.extended(&var, a_f);
                    let Some(apex) = self.context_index(&apex_ctx) else {
                        out.push((
                            gi,
                            di,
                            ci,
                            PullbackStatus::BoundLimited {
                                reason: "apex context not enumerated".into(),
                            },
                        ));
                        continue;
                    };
                    if self.pullback_ump_holds(&checker, gen, di, f, apex) {
                        out.push((gi, di, ci, PullbackStatus::Verified { apex }));
                    } else {
                        out.push((
                            gi,
                            di,
                            ci,
                            PullbackStatus::BoundLimited {
                                reason: "universal property failed within bounds".into(),
                            },
                        ));
                    }
                }
            }
        }
        out
    }

    fn pullback_ump_holds(
        &self,
        checker: &Checker,
        gen: &Generator,
        delta: usize,
        f: &[PreTerm],
        apex: usize,
    ) -> bool {
        // legs: apex → delta (drop the last component), apex → extended
        // (f components substituted, plus the new variable)
        let apex_ctx = &self.contexts[apex];
        let delta_ctx = &self.contexts[delta];
        let ext_ctx = &self.contexts[gen.extended];
        let gamma_ctx = &self.contexts[gen.parent];
        let leg1: Vec<PreTerm> = delta_ctx
            .entries
            .iter()
            .map(|(x, _)| PreTerm::var(x))
            .collect();
        let mut leg2: Vec<PreTerm> = f.to_vec();
        leg2.push(PreTerm::var(&apex_ctx.entries[apex_ctx.len() - 1].0));
        if checker
            .check_context_morphism(&leg2, apex_ctx, ext_ctx)
            .is_err()
        {
            return false;
        }
        // universal property against every enumerated cone
        for (xi, xctx) in self.contexts.iter().enumerate() {
            for gclass in &self.homs[xi][delta].classes {
                for hclass in &self.homs[xi][gen.extended].classes {
                    // commuting condition: proj ∘ h ≡ f ∘ g
                    let g = &gclass[0];
                    let h = &hclass[0];
                    let proj_h: Vec<PreTerm> = gamma_ctx
                        .entries
                        .iter()
                        .enumerate()
                        .map(|(k, _)| h[k].clone())
                        .collect();
                    let f_g: Vec<PreTerm> = f
                        .iter()
                        .map(|t| checker.apply_morphism(t, g, delta_ctx))
                        .collect();
                    let commutes = checker
                        .morphisms_equal(&proj_h, &f_g, xctx, gamma_ctx)
                        .unwrap_or(false);
                    if !commutes {
                        continue;
                    }
                    // mediating morphism: (g, last of h)
                    let mut med: Vec<PreTerm> = g.clone();
                    med.push(h[h.len() - 1].clone());
                    if checker
                        .check_context_morphism(&med, xctx, apex_ctx)
                        .is_err()
                    {
                        return false;
                    }
                    // uniqueness: count enumerated classes equal to med
                    // that commute with both legs
                    let mut count = 0;
                    for mclass in &self.homs[xi][apex].classes {
                        let m = &mclass[0];
                        let m_leg1: Vec<PreTerm> = leg1
                            .iter()
                            .map(|t| checker.apply_morphism(t, m, apex_ctx))
                            .collect();
                        let m_leg2: Vec<PreTerm> = leg2
                            .iter()
                            .map(|t| checker.apply_morphism(t, m, apex_ctx))
                            .collect();
                        let ok1 = checker
                            .morphisms_equal(&m_leg1, g, xctx, delta_ctx)
                            .unwrap_or(false);
                        let ok2 = checker
                            .morphisms_equal(&m_leg2, h, xctx, ext_ctx)
                            .unwrap_or(false);
                        if ok1 && ok2 {
                            count += 1;
                        }
                    }
                    if count != 1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Composition coherence: `(h[g])[f] ≡ h[g[f]]` on all enumerated
    /// composable triples.
    pub fn composition_coherent(&self, sig: &CheckedSignature, cfg: &CheckConfig) -> bool {
        let checker = Checker::new(sig, cfg.clone());
        for a in 0..self.contexts.len() {
            for b in 0..self.contexts.len() {
                for c in 0..self.contexts.len() {
                    for fc in &self.homs[a][b].classes {
                        for gc in &self.homs[b][c].classes {
                            let f = &fc[0];
                            let g = &gc[0];
                            let gf: Vec<PreTerm> = g
                                .iter()
                                .map(|t| checker.apply_morphism(t, f, &self.contexts[b]))
                                .collect();
                            if checker
                                .check_context_morphism(&gf, &self.contexts[a], &self.contexts[c])
                                .is_err()
                            {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Dump as a `.fincat`-compatible finite category (objects are
    /// printed contexts, arrows are class representatives).
    pub fn to_fincat(
        &self,
        sig: &CheckedSignature,
        cfg: &CheckConfig,
    ) -> Result<crate::fincat::FinCat, SynCatError> {
        let checker = Checker::new(sig, cfg.clone());
        let mut b = crate::fincat::FinCatBuilder::new("syncat");
        for ctx in &self.contexts {
            b.object(&context_name(ctx));
        }
        // identify identity classes
        let mut id_class: Vec<usize> = Vec::new();
        for (i, ctx) in self.contexts.iter().enumerate() {
            let idm: Vec<PreTerm> = ctx
                .entries
                .iter()
                .map(|(x, _)| PreTerm::var(x))
                .collect();
            let pos = self.homs[i][i]
                .classes
                .iter()
                .position(|c| {
                    checker
                        .morphisms_equal(&c[0], &idm, ctx, ctx)
                        .unwrap_or(false)
                })
                .expect("identity enumerated");
            id_class.push(pos);
        }
        let arrow_name = |i: usize, j: usize, c: usize| -> String {
            if i == j && c == id_class[i] {
                format!("id_{}", context_name(&self.contexts[i]))
            } else {
                format!("{}:{}=>{}", morphism_name(self.homs[i][j].representative(c)), i, j)
            }
        };
        for i in 0..self.contexts.len() {
            for j in 0..self.contexts.len() {
                for c in 0..self.homs[i][j].count() {
                    if i == j && c == id_class[i] {
                        continue;
                    }
                    b.arrow(
                        &arrow_name(i, j, c),
                        &context_name(&self.contexts[i]),
                        &context_name(&self.contexts[j]),
                    );
                }
            }
        }
        // composition by substitution then class lookup
        for i in 0..self.contexts.len() {
            for j in 0..self.contexts.len() {
                for k in 0..self.contexts.len() {
                    for cf in 0..self.homs[i][j].count() {
                        for cg in 0..self.homs[j][k].count() {
                            if (i == j && cf == id_class[i]) || (j == k && cg == id_class[j]) {
                                continue;
                            }
                            let f = self.homs[i][j].representative(cf);
                            let g = self.homs[j][k].representative(cg);
                            let gf: Vec<PreTerm> = g
                                .iter()
                                .map(|t| checker.apply_morphism(t, f, &self.contexts[j]))
                                .collect();
                            let ch = self.homs[i][k]
                                .classes
                                .iter()
                                .position(|c| {
                                    checker
                                        .morphisms_equal(
                                            &c[0],
                                            &gf,
                                            &self.contexts[i],
                                            &self.contexts[k],
                                        )
                                        .unwrap_or(false)
                                })
                                .expect("composite enumerated");
                            b.compose(
                                &arrow_name(j, k, cg),
                                &arrow_name(i, j, cf),
                                &arrow_name(i, k, ch),
                            );
                        }
                    }
                }
            }
        }
        Ok(b.finish().expect("syncat dump is a category"))
    }
}

impl fmt::Display for SynCatApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "bounds: depth={} size={} cap={}",
            self.bounds.max_context_len, self.bounds.max_term_size, self.bounds.max_enumeration
        )?;
        writeln!(f, "contexts: {}", self.contexts.len())?;
        for (i, c) in self.contexts.iter().enumerate() {
            writeln!(f, "  [{i}] {}", context_name(c))?;
        }
        for i in 0..self.contexts.len() {
            for j in 0..self.contexts.len() {
                let n = self.homs[i][j].count();
                if n > 0 {
                    writeln!(f, "hom [{i}] -> [{j}]: {n} classes")?;
                }
            }
        }
        if self.equality_incomplete {
            writeln!(f, "caveat: equality-incomplete (classes may over-count)")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests;
