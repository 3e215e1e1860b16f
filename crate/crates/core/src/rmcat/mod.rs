//! Representable map categories: finite cartesian categories equipped
//! with a stable class of exponentiable arrows and explicit pushforward
//! witnesses. Validation re-derives every axiom exhaustively; stable
//! classes can be generated to a fixpoint from exponentiable generators;
//! slices inherit the structure; set-valued cartesian functors (theories)
//! are checked two independent ways.

mod parse;

pub use parse::{parse_rmcat, parse_theory};

use crate::dfib::{self, DFib, DFibError, DFibMap};
use crate::fincat::{ArrId, CatError, FinCat, Functor, ObjId};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum RMCatError {
    #[error("category is not cartesian: {0}")]
    NotCartesian(String),
    #[error("designated {0} fails its universal property: {1}")]
    BadDesignation(&'static str, String),
    #[error("representable class not closed under {0}: {1}")]
    ClassNotClosed(&'static str, String),
    #[error("representable class not stable under pullback: {0}")]
    NotStable(String),
    #[error("pushforward witness for ({0}, {1}) fails its universal property")]
    PushforwardUmpFails(String, String),
    #[error("arrow '{0}' is not exponentiable (no pushforward of '{1}' exists)")]
    NotExponentiable(String, String),
    #[error("functor is not a representable map functor: {0}")]
    NotRMFunctor(String),
    #[error("set-valued functor is not functorial at {0}")]
    NotFunctorial(String),
    #[error("enumeration overflow: {0}")]
    Overflow(String),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    DFib(#[from] DFibError),
}

/// The designated data of a pullback: apex and the two projections, in
/// the order of the cospan `(f : X → Z, g : Y → Z)`.
pub type PullbackData = (ObjId, ArrId, ArrId);

/// Pushforward witness: the object `f_* g` of the slice over `cod f` and
/// the evaluation arrow from the designated pullback `f^*(f_* g)` to the
/// domain of `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushforwardWitness {
    pub object: ArrId, // h : W → cod f
    pub eval: ArrId,   // e : apex(pullback of h along f) → dom g
}

#[derive(Debug, Clone)]
pub struct RMCat {
    pub name: String,
    pub cat: Arc<FinCat>,
    pub terminal: ObjId,
    pub pullbacks: HashMap<(ArrId, ArrId), PullbackData>,
    pub representable: Vec<bool>,
    pub pushforwards: HashMap<(ArrId, ArrId), PushforwardWitness>,
    /// Cospans or pushforwards whose designation was skipped because it
    /// falls outside declared bounds (bounded materializations only).
    pub caveats: Vec<String>,
}

impl RMCat {
    pub fn is_representable(&self, f: ArrId) -> bool {
        self.representable[f]
    }

    pub fn representable_arrows(&self) -> Vec<ArrId> {
        self.cat
            .arrows()
            .filter(|&f| self.representable[f])
            .collect()
    }

    /// The unique arrow to the designated terminal object.
    pub fn bang(&self, x: ObjId) -> ArrId {
        self.cat
            .arrow_to_terminal(x, self.terminal)
            .expect("terminal designation validated")
    }

    pub fn designated_pullback(&self, f: ArrId, g: ArrId) -> Option<PullbackData> {
        self.pullbacks.get(&(f, g)).copied()
    }

    /// Designated binary product via the pullback over the terminal.
    pub fn product(&self, x: ObjId, y: ObjId) -> Option<PullbackData> {
        self.designated_pullback(self.bang(x), self.bang(y))
    }
}

/// Check one pullback square's universal property directly.
fn is_pullback_square(
    cat: &FinCat,
    f: ArrId,
    g: ArrId,
    apex: ObjId,
    p1: ArrId,
    p2: ArrId,
) -> bool {
    if cat.src(p1) != apex
        || cat.src(p2) != apex
        || cat.tgt(p1) != cat.src(f)
        || cat.tgt(p2) != cat.src(g)
        || cat.comp(f, p1) != cat.comp(g, p2)
    {
        return false;
    }
    for w in cat.objects() {
        for w1 in cat.hom(w, cat.src(f)) {
            for w2 in cat.hom(w, cat.src(g)) {
                if cat.comp(f, w1) != cat.comp(g, w2) {
                    continue;
                }
                let mediators = cat
                    .hom(w, apex)
                    .into_iter()
                    .filter(|&m| cat.comp(p1, m) == w1 && cat.comp(p2, m) == w2)
                    .count();
                if mediators != 1 {
                    return false;
                }
            }
        }
    }
    true
}

/// Search for some pullback of the cospan `(f, g)`, deterministically.
pub fn find_pullback(cat: &FinCat, f: ArrId, g: ArrId) -> Option<PullbackData> {
    for apex in cat.objects() {
        for p1 in cat.hom(apex, cat.src(f)) {
            for p2 in cat.hom(apex, cat.src(g)) {
                if is_pullback_square(cat, f, g, apex, p1, p2) {
                    return Some((apex, p1, p2));
                }
            }
        }
    }
    None
}

/// Check one pushforward witness's universal property by hom-set
/// enumeration.
fn pushforward_ump(
    rm: &RMCat,
    f: ArrId, // representable, X → Y
    g: ArrId, // Z → X
    witness: PushforwardWitness,
) -> bool {
    let cat = &rm.cat;
    let h = witness.object; // W → Y
    if cat.tgt(h) != cat.tgt(f) || cat.tgt(g) != cat.src(f) {
        return false;
    }
    // designated pullback f^* h
    let Some((p, p_to_x, p_to_w)) = rm.designated_pullback(f, h) else {
        return false;
    };
    // eval : P → Z with g ∘ eval = p_to_x
    let e = witness.eval;
    if cat.src(e) != p || cat.tgt(e) != cat.src(g) || cat.comp(g, e) != p_to_x {
        return false;
    }
    // for every object w' : V → Y of the slice over Y:
    for v in cat.objects() {
        for wp in cat.hom(v, cat.tgt(f)) {
            // Hom_{/Y}(w', h)
            let lhs: Vec<ArrId> = cat
                .hom(v, cat.src(h))
                .into_iter()
                .filter(|&m| cat.comp(h, m) == wp)
                .collect();
            // f^* w' designated
            let Some((q, q_to_x, q_to_v)) = rm.designated_pullback(f, wp) else {
                return false;
            };
            // Hom_{/X}(f^* w', g)
            let rhs: Vec<ArrId> = cat
                .hom(q, cat.src(g))
                .into_iter()
                .filter(|&n| cat.comp(g, n) == q_to_x)
                .collect();
            // canonical map: m ↦ eval ∘ f^*(m)
            let mut images = Vec::new();
            for &m in &lhs {
                // f^*(m) : Q → P unique with p_to_x ∘ _ = q_to_x and
                // p_to_w ∘ _ = m ∘ q_to_v
                let mediators: Vec<ArrId> = cat
                    .hom(q, p)
                    .into_iter()
                    .filter(|&t| {
                        cat.comp(p_to_x, t) == q_to_x
                            && cat.comp(p_to_w, t) == cat.comp(m, q_to_v)
                    })
                    .collect();
                if mediators.len() != 1 {
                    return false;
                }
                let image = cat.comp(e, mediators[0]);
                if images.contains(&image) {
                    return false; // not injective
                }
                images.push(image);
            }
            if images.len() != rhs.len() || rhs.iter().any(|r| !images.contains(r)) {
                return false; // not surjective onto the slice hom-set
            }
        }
    }
    true
}

/// Search for a pushforward witness of `g` along representable `f`.
pub fn search_pushforward(rm: &RMCat, f: ArrId, g: ArrId) -> Option<PushforwardWitness> {
    let cat = &rm.cat;
    for h in cat.arrows() {
        if cat.tgt(h) != cat.tgt(f) {
            continue;
        }
        let Some((p, _p_to_x, _p_to_w)) = rm.designated_pullback(f, h) else {
            continue;
        };
        for e in cat.hom(p, cat.src(g)) {
            let w = PushforwardWitness { object: h, eval: e };
            if pushforward_ump(rm, f, g, w) {
                return Some(w);
            }
        }
    }
    None
}

/// Assemble and validate a representable map category. Designated
/// pullbacks and pushforward witnesses are searched for any cospans or
/// pairs not supplied.
pub fn validate_rmcat(
    name: &str,
    cat: Arc<FinCat>,
    representable: Vec<bool>,
    given_pullbacks: HashMap<(ArrId, ArrId), PullbackData>,
    given_pushforwards: HashMap<(ArrId, ArrId), PushforwardWitness>,
) -> Result<RMCat, RMCatError> {
    let terminal = cat
        .terminal_object()
        .ok_or_else(|| RMCatError::NotCartesian("no terminal object".into()))?;
    // designate pullbacks for every cospan
    let mut pullbacks = HashMap::new();
    for f in cat.arrows() {
        for g in cat.arrows() {
            if cat.tgt(f) != cat.tgt(g) {
                continue;
            }
            let data = match given_pullbacks.get(&(f, g)) {
                Some(&d) => {
                    if !is_pullback_square(&cat, f, g, d.0, d.1, d.2) {
                        return Err(RMCatError::BadDesignation(
                            "pullback",
                            format!("({}, {})", cat.arrow_name(f), cat.arrow_name(g)),
                        ));
                    }
                    d
                }
                None => find_pullback(&cat, f, g).ok_or_else(|| {
                    RMCatError::NotCartesian(format!(
                        "cospan ({}, {}) has no pullback",
                        cat.arrow_name(f),
                        cat.arrow_name(g)
                    ))
                })?,
            };
            pullbacks.insert((f, g), data);
        }
    }
    let mut rm = RMCat {
        name: name.to_string(),
        cat: cat.clone(),
        terminal,
        pullbacks,
        representable,
        pushforwards: HashMap::new(),
        caveats: Vec::new(),
    };
    validate_class_axioms(&rm)?;
    // pushforward witnesses for every representable f and every g into dom f
    let mut pushforwards = HashMap::new();
    for f in cat.arrows() {
        if !rm.representable[f] {
            continue;
        }
        for g in cat.arrows() {
            if cat.tgt(g) != cat.src(f) {
                continue;
            }
            let w = match given_pushforwards.get(&(f, g)) {
                Some(&w) => {
                    if !pushforward_ump(&rm, f, g, w) {
                        return Err(RMCatError::PushforwardUmpFails(
                            cat.arrow_name(f).to_string(),
                            cat.arrow_name(g).to_string(),
                        ));
                    }
                    w
                }
                None => search_pushforward(&rm, f, g).ok_or_else(|| {
                    RMCatError::NotExponentiable(
                        cat.arrow_name(f).to_string(),
                        cat.arrow_name(g).to_string(),
                    )
                })?,
            };
            pushforwards.insert((f, g), w);
        }
    }
    rm.pushforwards = pushforwards;
    Ok(rm)
}

/// Identity, composition-closure, and pullback-stability of the class.
fn validate_class_axioms(rm: &RMCat) -> Result<(), RMCatError> {
    let cat = &rm.cat;
    for o in cat.objects() {
        if !rm.representable[cat.identity(o)] {
            return Err(RMCatError::ClassNotClosed(
                "identities",
                cat.object_name(o).to_string(),
            ));
        }
    }
    for f in cat.arrows() {
        for g in cat.arrows() {
            if cat.tgt(f) == cat.src(g) && rm.representable[f] && rm.representable[g] {
                let h = cat.comp(g, f);
                if !rm.representable[h] {
                    return Err(RMCatError::ClassNotClosed(
                        "composition",
                        format!("{} ∘ {}", cat.arrow_name(g), cat.arrow_name(f)),
                    ));
                }
            }
        }
    }
    // stability: every pullback square (not only designated ones) with a
    // representable right leg has a representable left leg
    for f in cat.arrows() {
        if !rm.representable[f] {
            continue;
        }
        for g in cat.arrows() {
            if cat.tgt(g) != cat.tgt(f) {
                continue;
            }
            for apex in cat.objects() {
                for p1 in cat.hom(apex, cat.src(f)) {
                    for p2 in cat.hom(apex, cat.src(g)) {
                        if is_pullback_square(cat, f, g, apex, p1, p2)
                            && !rm.representable[p2]
                        {
                            return Err(RMCatError::NotStable(format!(
                                "pullback of {} along {} is {}",
                                cat.arrow_name(f),
                                cat.arrow_name(g),
                                cat.arrow_name(p2)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Least stable class of exponentiable arrows containing the generators:
/// identities, closed under composition and under taking pullbacks along
/// arbitrary arrows, computed to a fixpoint. Errors if a generator has
/// no pushforwards.
pub fn generate_stable_class(
    name: &str,
    cat: Arc<FinCat>,
    generators: &[ArrId],
) -> Result<RMCat, RMCatError> {
    // start from a fully designated cartesian skeleton with an empty class
    let all_ids: Vec<bool> = cat.arrows().map(|f| cat.is_identity(f)).collect();
    let base = validate_rmcat(
        name,
        cat.clone(),
        all_ids.clone(),
        HashMap::new(),
        HashMap::new(),
    )
    .map_err(|e| match e {
        RMCatError::NotExponentiable(f, g) => RMCatError::NotExponentiable(f, g),
        e => e,
    })?;
    // each generator must be exponentiable
    let mut class = all_ids;
    for &f in generators {
        for g in cat.arrows() {
            if cat.tgt(g) == cat.src(f) && search_pushforward(&base, f, g).is_none() {
                return Err(RMCatError::NotExponentiable(
                    cat.arrow_name(f).to_string(),
                    cat.arrow_name(g).to_string(),
                ));
            }
        }
        class[f] = true;
    }
    // fixpoint closure
    loop {
        let mut grew = false;
        for f in cat.arrows() {
            for g in cat.arrows() {
                if cat.tgt(f) == cat.src(g) && class[f] && class[g] {
                    let h = cat.comp(g, f);
                    if !class[h] {
                        class[h] = true;
                        grew = true;
                    }
                }
            }
        }
        for f in cat.arrows() {
            if !class[f] {
                continue;
            }
            for g in cat.arrows() {
                if cat.tgt(g) != cat.tgt(f) {
                    continue;
                }
                for apex in cat.objects() {
                    for p1 in cat.hom(apex, cat.src(f)) {
                        for p2 in cat.hom(apex, cat.src(g)) {
                            if is_pullback_square(&cat, f, g, apex, p1, p2) && !class[p2] {
                                class[p2] = true;
                                grew = true;
                            }
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    validate_rmcat(name, cat, class, HashMap::new(), HashMap::new())
}

/// Slice representable map category `C/X`: an arrow is representable iff
/// it is representable in `C`. Designations are re-searched and the
/// axioms re-validated.
pub fn slice_rmcat(rm: &RMCat, x: ObjId) -> Result<(RMCat, Functor), RMCatError> {
    let (slice, proj) = rm.cat.slice(x);
    let representable: Vec<bool> = slice
        .arrows()
        .map(|f| rm.representable[proj.on_arr(f)])
        .collect();
    let sliced = validate_rmcat(
        &format!("{}/{}", rm.name, rm.cat.object_name(x)),
        slice,
        representable,
        HashMap::new(),
        HashMap::new(),
    )?;
    Ok((sliced, proj))
}

// ----------------------------------------------------------------------
// Representable map functors between finite representable map categories
// ----------------------------------------------------------------------

/// A functor between representable map categories, validated to preserve
/// finite limits (on designated cones), representable arrows, and
/// pushforwards (up to the universal property in the target).
#[derive(Debug, Clone)]
pub struct RMFunctor {
    pub functor: Functor,
}

impl RMFunctor {
    pub fn new(functor: Functor, dom: &RMCat, cod: &RMCat) -> Result<RMFunctor, RMCatError> {
        let f = RMFunctor { functor };
        f.validate(dom, cod)?;
        Ok(f)
    }

    pub fn validate(&self, dom: &RMCat, cod: &RMCat) -> Result<(), RMCatError> {
        let fun = &self.functor;
        fun.validate()?;
        // terminal preservation
        let t_img = fun.on_obj(dom.terminal);
        for o in cod.cat.objects() {
            if cod.cat.hom(o, t_img).len() != 1 {
                return Err(RMCatError::NotRMFunctor(format!(
                    "image of the terminal is not terminal (at {})",
                    cod.cat.object_name(o)
                )));
            }
        }
        // designated pullbacks map to pullback squares
        for (&(f, g), &(apex, p1, p2)) in &dom.pullbacks {
            if !is_pullback_square(
                &cod.cat,
                fun.on_arr(f),
                fun.on_arr(g),
                fun.on_obj(apex),
                fun.on_arr(p1),
                fun.on_arr(p2),
            ) {
                return Err(RMCatError::NotRMFunctor(format!(
                    "pullback of ({}, {}) not preserved",
                    dom.cat.arrow_name(f),
                    dom.cat.arrow_name(g)
                )));
            }
        }
        // representable arrows map to representable arrows
        for f in dom.cat.arrows() {
            if dom.representable[f] && !cod.representable[fun.on_arr(f)] {
                return Err(RMCatError::NotRMFunctor(format!(
                    "representable {} maps to non-representable {}",
                    dom.cat.arrow_name(f),
                    cod.cat.arrow_name(fun.on_arr(f))
                )));
            }
        }
        // pushforwards preserved up to isomorphism: the image of the
        // witness again satisfies the universal property
        for (&(f, g), &w) in &dom.pushforwards {
            let fw = PushforwardWitness {
                object: fun.on_arr(w.object),
                eval: self.transported_eval(dom, cod, f, w),
            };
            if !pushforward_ump(cod, fun.on_arr(f), fun.on_arr(g), fw) {
                return Err(RMCatError::NotRMFunctor(format!(
                    "pushforward of {} along {} not preserved",
                    dom.cat.arrow_name(g),
                    dom.cat.arrow_name(f)
                )));
            }
        }
        Ok(())
    }

    /// The image of an eval arrow lives over the image pullback, which
    /// differs from the target's designated pullback by the canonical
    /// isomorphism; compose with it.
    fn transported_eval(&self, dom: &RMCat, cod: &RMCat, f: ArrId, w: PushforwardWitness) -> ArrId {
        let fun = &self.functor;
        let (p, p1, p2) = dom.designated_pullback(f, w.object).expect("designated");
        let (q, q1, q2) = cod
            .designated_pullback(fun.on_arr(f), fun.on_arr(w.object))
            .expect("designated in target");
        // mediator q → F(p)
        let med = cod
            .cat
            .hom(q, fun.on_obj(p))
            .into_iter()
            .find(|&m| {
                cod.cat.comp(fun.on_arr(p1), m) == q1 && cod.cat.comp(fun.on_arr(p2), m) == q2
            })
            .expect("image square is a pullback when the functor preserves them");
        cod.cat.comp(fun.on_arr(w.eval), med)
    }
}

/// All functors between two finite categories (used for desk-scale
/// uniqueness searches). Backtracks over object then arrow assignments.
pub fn enumerate_functors(dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Vec<Functor> {
    let mut out = Vec::new();
    let nonid: Vec<ArrId> = dom.arrows().filter(|&f| !dom.is_identity(f)).collect();
    let mut obj_choice: Vec<ObjId> = Vec::new();

    fn assign_arrows(
        dom: &Arc<FinCat>,
        cod: &Arc<FinCat>,
        nonid: &[ArrId],
        obj_choice: &[ObjId],
        k: usize,
        arr_choice: &mut Vec<ArrId>,
        out: &mut Vec<Functor>,
    ) {
        if k == nonid.len() {
            if let Ok(f) = Functor::new(
                &format!("F{}", out.len()),
                dom.clone(),
                cod.clone(),
                obj_choice.to_vec(),
                arr_choice.clone(),
            ) {
                out.push(f);
            }
            return;
        }
        let f = nonid[k];
        for cand in cod.hom(obj_choice[dom.src(f)], obj_choice[dom.tgt(f)]) {
            arr_choice.push(cand);
            assign_arrows(dom, cod, nonid, obj_choice, k + 1, arr_choice, out);
            arr_choice.pop();
        }
    }

    fn assign_objects(
        dom: &Arc<FinCat>,
        cod: &Arc<FinCat>,
        nonid: &[ArrId],
        k: usize,
        obj_choice: &mut Vec<ObjId>,
        out: &mut Vec<Functor>,
    ) {
        if k == dom.object_count() {
            assign_arrows(dom, cod, nonid, obj_choice, 0, &mut Vec::new(), out);
            return;
        }
        for o in cod.objects() {
            obj_choice.push(o);
            assign_objects(dom, cod, nonid, k + 1, obj_choice, out);
            obj_choice.pop();
        }
    }

    assign_objects(dom, cod, &nonid, 0, &mut obj_choice, &mut out);
    out
}

/// Extension of a representable map functor along a freely adjoined
/// global section: given `F : C → D` and `s : 1 → F X`, build
/// `G : C/X → D` sending `(a : A → X)` to the designated pullback of
/// `F a` along `s`, verify it is an RM functor, and verify the extension
/// is unique up to unique isomorphism by exhaustive search.
pub struct SectionExtension {
    pub functor: RMFunctor,
    pub alternatives: usize,
    pub unique_up_to_unique_iso: bool,
}

pub fn adjoin_section_check(
    c: &RMCat,
    x: ObjId,
    d: &RMCat,
    f: &RMFunctor,
    s: ArrId,
) -> Result<SectionExtension, RMCatError> {
    let (cx, proj) = slice_rmcat(c, x)?;
    let dcat = &d.cat;
    let fx = f.functor.on_obj(x);
    if dcat.src(s) != d.terminal || dcat.tgt(s) != fx {
        return Err(RMCatError::NotRMFunctor(
            "section must be a global element of F X".into(),
        ));
    }
    // object assignment: slice object (a : A → X) ↦ pullback of F a along
    // s; slice objects are the arrows into x in declaration order
    let into_x: Vec<ArrId> = c.cat.arrows().filter(|&a| c.cat.tgt(a) == x).collect();
    let mut obj_map: Vec<ObjId> = Vec::new();
    let mut proj_to_fa: Vec<ArrId> = Vec::new(); // pullback leg into F A
    for &a in &into_x {
        let fa = f.functor.on_arr(a);
        let (apex, p1, _p2) = d
            .designated_pullback(fa, s)
            .expect("validated RM categories designate all pullbacks");
        obj_map.push(apex);
        proj_to_fa.push(p1);
    }
    // arrow assignment: slice arrow (h : a → b) ↦ unique mediator between
    // the pullbacks
    let mut nonid_arr_map: Vec<ArrId> = Vec::new();
    for sf in cx.cat.arrows() {
        if cx.cat.is_identity(sf) {
            continue;
        }
        let h = proj.on_arr(sf);
        let (ai, bi) = (cx.cat.src(sf), cx.cat.tgt(sf));
        let fh = f.functor.on_arr(h);
        let (apex_b, p1_b, p2_b) = d
            .designated_pullback(f.functor.on_arr(into_x[bi]), s)
            .unwrap();
        let mediator = dcat
            .hom(obj_map[ai], apex_b)
            .into_iter()
            .find(|&m| {
                dcat.comp(p1_b, m) == dcat.comp(fh, proj_to_fa[ai]) && {
                    // second leg: both land in the terminal-side corner
                    let (_, _, p2_a) = d
                        .designated_pullback(f.functor.on_arr(into_x[ai]), s)
                        .unwrap();
                    dcat.comp(p2_b, m) == p2_a
                }
            })
            .ok_or_else(|| {
                RMCatError::NotRMFunctor(format!(
                    "no mediator for slice arrow {}",
                    cx.cat.arrow_name(sf)
                ))
            })?;
        nonid_arr_map.push(mediator);
    }
    let g = Functor::new(
        "sec-ext",
        cx.cat.clone(),
        d.cat.clone(),
        obj_map,
        nonid_arr_map,
    )?;
    let g = RMFunctor::new(g, &cx, d)?;

    // uniqueness up to unique isomorphism: search all RM functors C/X → D
    // that agree with F after X^* and send the diagonal section to s
    let candidates = enumerate_functors(&cx.cat, &d.cat);
    let mut extensions: Vec<Functor> = Vec::new();
    for cand in candidates {
        if RMFunctor::new(cand.clone(), &cx, d).is_err() {
            continue;
        }
        if extension_condition(c, x, d, f, s, &cx, &proj, &into_x, &cand) {
            extensions.push(cand);
        }
    }
    let mut unique = !extensions.is_empty();
    for a in &extensions {
        for b in &extensions {
            let isos = natural_isos(&d.cat, a, b);
            if isos != 1 {
                unique = false;
            }
        }
    }
    Ok(SectionExtension {
        functor: g,
        alternatives: extensions.len(),
        unique_up_to_unique_iso: unique,
    })
}

/// The extension condition: G composed with `X^* : C → C/X` is
/// isomorphic to F, and G applied to the diagonal section corresponds to
/// s. At desk scale we verify the object part: `G(X × A → X) ≅ F A` for
/// every A, and `G(id_X) ≅ 1` with the induced global element equal to s
/// under the canonical pullback isomorphisms.
#[allow(clippy::too_many_arguments)]
fn extension_condition(
    c: &RMCat,
    x: ObjId,
    d: &RMCat,
    f: &RMFunctor,
    s: ArrId,
    _cx: &RMCat,
    _proj: &Functor,
    into_x: &[ArrId],
    g: &Functor,
) -> bool {
    let dcat = &d.cat;
    // G(id_X) must be terminal in D
    let idx_pos = into_x
        .iter()
        .position(|&a| c.cat.is_identity(a))
        .expect("id_X is an object of the slice");
    let g_id = g.on_obj(idx_pos);
    if dcat.objects().any(|o| dcat.hom(o, g_id).len() != 1) {
        return false;
    }
    // for each object A of C: the slice object X×A → X (projection of the
    // designated product) must map to an object isomorphic to F(A)
    for a in c.cat.objects() {
        let Some((_, pr_x, _pr_a)) = c.product(x, a) else {
            return false;
        };
        let pos = into_x.iter().position(|&k| k == pr_x).expect("projection");
        let img = g.on_obj(pos);
        if !dcat.isomorphic_objects(img, f.functor.on_obj(a)) {
            return false;
        }
    }
    // the diagonal δ : (id_X) → (X×X → X) must map to an arrow that picks
    // out s up to the canonical isomorphisms: check that the composite
    // G(id_X) → G(X×X→X) ≅ F X equals s ∘ (G(id_X) ≅ 1).
    let (_, pr_x, pr_a) = c.product(x, x).expect("product exists");
    let pos_xx = into_x.iter().position(|&k| k == pr_x).expect("projection");
    // δ in the slice: the arrow id_X → (X×X→X) whose underlying arrow is
    // the mediator ⟨id, id⟩
    let diag = c
        .cat
        .hom(x, c.cat.src(pr_x))
        .into_iter()
        .find(|&m| {
            c.cat.comp(pr_x, m) == c.cat.identity(x) && c.cat.comp(pr_a, m) == c.cat.identity(x)
        })
        .expect("diagonal exists");
    // find the slice arrow with this underlying arrow
    let sf = {
        let mut found = None;
        for cand in _cx.cat.arrows() {
            if _proj.on_arr(cand) == diag
                && _cx.cat.src(cand) == idx_pos
                && _cx.cat.tgt(cand) == pos_xx
            {
                found = Some(cand);
                break;
            }
        }
        match found {
            Some(s) => s,
            None => return false,
        }
    };
    let g_diag = g.on_arr(sf);
    // isos G(id_X) ≅ 1 and G(X×X→X) ≅ F X: pick the canonical ones by
    // terminality / any iso; the composite must equal s ∘ !.
    let to_one = dcat
        .hom(g.on_obj(idx_pos), d.terminal)
        .first()
        .copied()
        .expect("terminal");
    for iso in dcat.hom(g.on_obj(pos_xx), f.functor.on_obj(x)) {
        if !dcat.is_iso(iso) {
            continue;
        }
        if dcat.comp(iso, g_diag) == dcat.comp(s, to_one) {
            return true;
        }
    }
    false
}

/// Number of natural isomorphisms between two parallel functors.
fn natural_isos(cod: &Arc<FinCat>, a: &Functor, b: &Functor) -> usize {
    crate::fincat::NatTrans::enumerate(a, b)
        .into_iter()
        .filter(|n| n.components.iter().all(|&c| cod.is_iso(c)))
        .count()
}

// ----------------------------------------------------------------------
// Theories: cartesian set-valued functors
// ----------------------------------------------------------------------

/// A set-valued functor on a finite representable map category, checked
/// cartesian two independent ways: designated-cone preservation and
/// cofilteredness of its category of elements.
#[derive(Debug, Clone)]
pub struct Theory {
    pub name: String,
    pub sets: Vec<Vec<String>>,
    pub maps: Vec<Vec<usize>>, // per arrow f : X→Y, function Θ(X) → Θ(Y)
}

impl Theory {
    pub fn set(&self, o: ObjId) -> &[String] {
        &self.sets[o]
    }

    pub fn apply(&self, f: ArrId, elem: usize) -> usize {
        self.maps[f][elem]
    }
}

/// Validate functoriality and cartesianness (both routes must agree, and
/// must be positive).
pub fn validate_theory(rm: &RMCat, theory: Theory) -> Result<Theory, RMCatError> {
    let cat = &rm.cat;
    if theory.sets.len() != cat.object_count() || theory.maps.len() != cat.arrow_count() {
        return Err(RMCatError::NotFunctorial("table sizes".into()));
    }
    for f in cat.arrows() {
        if theory.maps[f].len() != theory.sets[cat.src(f)].len()
            || theory.maps[f]
                .iter()
                .any(|&i| i >= theory.sets[cat.tgt(f)].len())
        {
            return Err(RMCatError::NotFunctorial(format!(
                "map along {}",
                cat.arrow_name(f)
            )));
        }
    }
    for o in cat.objects() {
        let id = cat.identity(o);
        if (0..theory.sets[o].len()).any(|i| theory.maps[id][i] != i) {
            return Err(RMCatError::NotFunctorial(format!(
                "identity at {}",
                cat.object_name(o)
            )));
        }
    }
    for f in cat.arrows() {
        for g in cat.arrows() {
            if cat.tgt(f) == cat.src(g) {
                let h = cat.comp(g, f);
                for i in 0..theory.sets[cat.src(f)].len() {
                    if theory.maps[g][theory.maps[f][i]] != theory.maps[h][i] {
                        return Err(RMCatError::NotFunctorial(format!(
                            "composition ({}, {})",
                            cat.arrow_name(f),
                            cat.arrow_name(g)
                        )));
                    }
                }
            }
        }
    }
    let by_cones = theory_cartesian_by_cones(rm, &theory);
    let by_elements = elements_cofiltered(rm, &theory);
    if by_cones != by_elements {
        return Err(RMCatError::NotRMFunctor(format!(
            "cartesianness checkers disagree: cones={by_cones}, cofiltered={by_elements}"
        )));
    }
    if !by_cones {
        return Err(RMCatError::NotCartesian(
            "theory does not preserve the designated cones".into(),
        ));
    }
    Ok(theory)
}

/// Route 1: designated terminal and pullback cones map to limit cones in
/// sets.
pub fn theory_cartesian_by_cones(rm: &RMCat, theory: &Theory) -> bool {
    if theory.sets[rm.terminal].len() != 1 {
        return false;
    }
    for (&(f, g), &(apex, p1, p2)) in &rm.pullbacks {
        let cat = &rm.cat;
        // Θ(apex) → {(a, b) ∈ Θ(src f) × Θ(src g) : Θf(a) = Θg(b)}
        let mut images = Vec::new();
        for i in 0..theory.sets[apex].len() {
            let pair = (theory.maps[p1][i], theory.maps[p2][i]);
            if images.contains(&pair) {
                return false;
            }
            images.push(pair);
        }
        let mut count = 0;
        for a in 0..theory.sets[cat.src(f)].len() {
            for b in 0..theory.sets[cat.src(g)].len() {
                if theory.maps[f][a] == theory.maps[g][b] {
                    count += 1;
                    if !images.contains(&(a, b)) {
                        return false;
                    }
                }
            }
        }
        if images.len() != count {
            return false;
        }
    }
    true
}

/// Route 2: the category of elements is cofiltered — nonempty, every two
/// objects admit a common cone, every parallel pair is equalized by some
/// arrow into the pair's source.
pub fn elements_cofiltered(rm: &RMCat, theory: &Theory) -> bool {
    let cat = &rm.cat;
    // objects of ∫Θ
    let mut objs: Vec<(ObjId, usize)> = Vec::new();
    for o in cat.objects() {
        for i in 0..theory.sets[o].len() {
            objs.push((o, i));
        }
    }
    if objs.is_empty() {
        return false;
    }
    let arrows_between = |a: (ObjId, usize), b: (ObjId, usize)| -> Vec<ArrId> {
        cat.hom(a.0, b.0)
            .into_iter()
            .filter(|&f| theory.maps[f][a.1] == b.1)
            .collect()
    };
    // pairwise cones
    for &a in &objs {
        for &b in &objs {
            let has_cone = objs.iter().any(|&w| {
                !arrows_between(w, a).is_empty() && !arrows_between(w, b).is_empty()
            });
            if !has_cone {
                return false;
            }
        }
    }
    // equalization of parallel pairs
    for &a in &objs {
        for &b in &objs {
            let par = arrows_between(a, b);
            for &f in &par {
                for &g in &par {
                    if f == g {
                        continue;
                    }
                    let equalized = objs.iter().any(|&w| {
                        arrows_between(w, a)
                            .into_iter()
                            .any(|h| cat.comp(f, h) == cat.comp(g, h))
                    });
                    if !equalized {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ----------------------------------------------------------------------
// DFib_B materialized as a representable map category
// ----------------------------------------------------------------------

/// Bounds for the materialization of `DFib_B`.
#[derive(Debug, Clone, Copy)]
pub struct DFibRmcatBounds {
    pub max_fiber: usize,
    pub max_objects: usize,
}

impl Default for DFibRmcatBounds {
    fn default() -> Self {
        DFibRmcatBounds {
            max_fiber: 1,
            max_objects: 64,
        }
    }
}

/// The materialized category: the RM structure plus the fibrations and
/// maps behind each object and arrow.
pub struct DFibRmcat {
    pub rm: RMCat,
    pub objects: Vec<Arc<DFib>>,
    pub arrows: Vec<DFibMap>,
    pub bounds: DFibRmcatBounds,
}

/// Enumerate all fibrations over `base` with fibers of size at most
/// `max_fiber` (all restriction tables), all maps between them, find the
/// representable ones by right-adjoint search, and assemble the
/// representable map category. Limits whose fiberwise computation leaves
/// the bound are recorded as caveats rather than designated.
pub fn dfib_rmcat(base: &Arc<FinCat>, bounds: DFibRmcatBounds) -> Result<DFibRmcat, RMCatError> {
    // enumerate fiber-size vectors
    let nobj = base.object_count();
    let mut size_vectors: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..nobj {
        let mut next = Vec::new();
        for v in &size_vectors {
            for s in 0..=bounds.max_fiber {
                let mut v2 = v.clone();
                v2.push(s);
                next.push(v2);
            }
        }
        size_vectors = next;
    }
    let mut objects: Vec<Arc<DFib>> = Vec::new();
    for sizes in size_vectors {
        // enumerate restriction tables arrow by arrow
        let mut tables: Vec<Vec<Vec<usize>>> = vec![vec![]];
        let mut possible = true;
        for f in base.arrows() {
            let (src, tgt) = (base.src(f), base.tgt(f));
            let rows: Vec<Vec<usize>> = if base.is_identity(f) {
                vec![(0..sizes[tgt]).collect()]
            } else {
                // all functions sizes[tgt] -> sizes[src]
                let mut fns: Vec<Vec<usize>> = vec![vec![]];
                for _ in 0..sizes[tgt] {
                    let mut next = Vec::new();
                    for t in &fns {
                        for v in 0..sizes[src] {
                            let mut t2 = t.clone();
                            t2.push(v);
                            next.push(t2);
                        }
                    }
                    fns = next;
                }
                if fns.is_empty() {
                    possible = false;
                }
                fns
            };
            let mut next = Vec::new();
            for t in &tables {
                for r in &rows {
                    let mut t2 = t.clone();
                    t2.push(r.clone());
                    next.push(t2);
                }
            }
            tables = next;
            if !possible {
                break;
            }
        }
        if !possible {
            continue;
        }
        for table in tables {
            let fibers: Vec<Vec<String>> = sizes
                .iter()
                .map(|&n| (0..n).map(|i| format!("e{i}")).collect())
                .collect();
            if let Ok(d) = DFib::new(
                &format!("D{}", objects.len()),
                base.clone(),
                fibers,
                table,
            ) {
                objects.push(Arc::new(d));
                if objects.len() > bounds.max_objects {
                    return Err(RMCatError::Overflow(format!(
                        "more than {} fibrations within fiber bound {}",
                        bounds.max_objects, bounds.max_fiber
                    )));
                }
            }
        }
    }
    // arrows: all maps between each pair
    let mut arrows: Vec<DFibMap> = Vec::new();
    let mut arrow_of: HashMap<(usize, usize, Vec<Vec<usize>>), usize> = HashMap::new();
    let mut builder = crate::fincat::FinCatBuilder::new(&format!("DFib[{}]", base.name));
    for (i, _) in objects.iter().enumerate() {
        builder.object(&format!("D{i}"));
    }
    let mut arrow_meta: Vec<(usize, usize)> = Vec::new();
    for (i, di) in objects.iter().enumerate() {
        for (j, dj) in objects.iter().enumerate() {
            for m in DFibMap::enumerate_over(di, dj, None) {
                let maps_table: Vec<Vec<usize>> = base
                    .objects()
                    .map(|o| {
                        (0..di.fiber_size(o))
                            .map(|idx| m.apply(dfib::Elem { obj: o, idx }).idx)
                            .collect()
                    })
                    .collect();
                let is_id = i == j
                    && maps_table
                        .iter()
                        .all(|row| row.iter().enumerate().all(|(k, &v)| k == v));
                if is_id {
                    arrow_of.insert((i, j, maps_table), usize::MAX); // resolved later
                    continue;
                }
                let name = format!("m{}:D{i}->D{j}", arrows.len());
                builder.arrow(&name, &format!("D{i}"), &format!("D{j}"));
                arrow_of.insert((i, j, maps_table), arrows.len());
                arrow_meta.push((i, j));
                arrows.push(m);
            }
        }
    }
    // compositions
    let table_of = |m: &DFibMap| -> Vec<Vec<usize>> {
        base.objects()
            .map(|o| {
                (0..m.dom.fiber_size(o))
                    .map(|idx| m.apply(dfib::Elem { obj: o, idx }).idx)
                    .collect()
            })
            .collect()
    };
    let name_of = |slot: usize, i: usize, j: usize| -> String {
        if slot == usize::MAX {
            format!("id_D{i}")
        } else {
            format!("m{slot}:D{i}->D{j}")
        }
    };
    for (fi, fmap) in arrows.iter().enumerate() {
        for (gi, gmap) in arrows.iter().enumerate() {
            let (fa, fb) = arrow_meta[fi];
            let (ga, gb) = arrow_meta[gi];
            if fb != ga {
                continue;
            }
            let comp = fmap.then(gmap);
            let slot = arrow_of[&(fa, gb, table_of(&comp))];
            builder.compose(
                &name_of(gi, ga, gb),
                &name_of(fi, fa, fb),
                &name_of(slot, fa, gb),
            );
        }
    }
    let cat = Arc::new(builder.finish()?);
    // representables by right-adjoint search; identities are representable
    let mut representable = vec![false; cat.arrow_count()];
    for o in cat.objects() {
        representable[cat.identity(o)] = true;
    }
    for (k, m) in arrows.iter().enumerate() {
        let name = name_of(k, arrow_meta[k].0, arrow_meta[k].1);
        let id = cat.arrow_id(&name).expect("declared");
        representable[id] = dfib::right_adjoint(m).is_some();
    }
    let rm = validate_rmcat("dfib-rmcat", cat, representable, HashMap::new(), HashMap::new())?;
    Ok(DFibRmcat {
        rm,
        objects,
        arrows,
        bounds,
    })
}
