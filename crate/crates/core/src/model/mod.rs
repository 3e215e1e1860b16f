//! Models of a finite type theory: representable map functors into
//! discrete fibrations over a base with a terminal object, presented
//! concretely as a fibration per theory object and a fibered map per
//! theory arrow, with all certificates re-verified. Morphisms,
//! 2-morphisms, natural models, democratic models, hearts, the
//! bi-initial model and internal languages all live here.

mod parse;

pub use parse::{parse_model, ModelResolver, ParsedModel};

use crate::dfib::{
    self, base_change, canonical_mate, right_adjoint, yoneda, DFib, DFibError, DFibMap, Elem,
    RightAdjointWitness, Square,
};
use crate::fincat::{ArrId, CatError, FinCat, FinCatBuilder, Functor, NatTrans, ObjId};
use crate::rmcat::{RMCat, RMCatError, Theory};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ModelError {
    #[error("base category has no terminal object")]
    NoTerminal,
    #[error("not a representable map functor: {0}")]
    NotRMFunctor(String),
    #[error("morphism fails naturality at {0}")]
    NotNatural(String),
    #[error("Beck-Chevalley fails at the representable arrow '{0}'")]
    BcFails(String),
    #[error("no overlay transformation exists at object '{0}'")]
    NoOverlay(String),
    #[error("the map '{0}' is not representable; witness element: {1}")]
    NotRepresentable(String, String),
    #[error("enumeration overflow: {0}")]
    Overflow(String),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    DFib(#[from] DFibError),
    #[error(transparent)]
    RMCat(#[from] RMCatError),
}

/// A model of the finite type theory `theory`: a fibration per theory
/// object and a fibered map per theory arrow, functorial, preserving the
/// designated limits, representable arrows (witnessed) and pushforwards.
#[derive(Clone, Debug)]
pub struct Model {
    pub name: String,
    pub theory: Arc<RMCat>,
    pub base: Arc<FinCat>,
    pub terminal: ObjId,
    pub obj_fibs: Vec<Arc<DFib>>,
    pub arr_maps: Vec<DFibMap>,
    pub adjoints: Vec<Option<RightAdjointWitness>>,
}

impl Model {
    pub fn fib(&self, a: ObjId) -> &Arc<DFib> {
        &self.obj_fibs[a]
    }

    pub fn map(&self, f: ArrId) -> &DFibMap {
        &self.arr_maps[f]
    }

    pub fn witness(&self, f: ArrId) -> &RightAdjointWitness {
        self.adjoints[f]
            .as_ref()
            .expect("witness present for representable arrows")
    }
}

/// Validate all certificates of a model.
pub fn validate_model(
    name: &str,
    theory: Arc<RMCat>,
    base: Arc<FinCat>,
    obj_fibs: Vec<Arc<DFib>>,
    arr_maps: Vec<DFibMap>,
) -> Result<Model, ModelError> {
    let terminal = base.terminal_object().ok_or(ModelError::NoTerminal)?;
    let tcat = &theory.cat;
    if obj_fibs.len() != tcat.object_count() || arr_maps.len() != tcat.arrow_count() {
        return Err(ModelError::NotRMFunctor("table sizes".into()));
    }
    // functoriality
    for f in tcat.arrows() {
        let m = &arr_maps[f];
        if !Arc::ptr_eq(&m.dom, &obj_fibs[tcat.src(f)]) && m.dom.name != obj_fibs[tcat.src(f)].name
        {
            return Err(ModelError::NotRMFunctor(format!(
                "map of '{}' has wrong domain",
                tcat.arrow_name(f)
            )));
        }
        if tcat.is_identity(f) {
            let ok = base.objects().all(|b| {
                (0..obj_fibs[tcat.src(f)].fiber_size(b)).all(|i| {
                    m.apply(Elem { obj: b, idx: i }) == Elem { obj: b, idx: i }
                })
            });
            if !ok {
                return Err(ModelError::NotRMFunctor(format!(
                    "identity of {} not mapped to the identity",
                    tcat.object_name(tcat.src(f))
                )));
            }
        }
    }
    for f in tcat.arrows() {
        for g in tcat.arrows() {
            if tcat.tgt(f) == tcat.src(g) {
                let h = tcat.comp(g, f);
                let lhs = arr_maps[f].then(&arr_maps[g]);
                if !lhs.same_maps(&arr_maps[h]) {
                    return Err(ModelError::NotRMFunctor(format!(
                        "composition ({}, {}) not preserved",
                        tcat.arrow_name(f),
                        tcat.arrow_name(g)
                    )));
                }
            }
        }
    }
    // terminal preservation: the fibration of the designated terminal has
    // singleton fibers
    let t_fib = &obj_fibs[theory.terminal];
    if base.objects().any(|b| t_fib.fiber_size(b) != 1) {
        return Err(ModelError::NotRMFunctor(
            "image of the terminal object is not the terminal fibration".into(),
        ));
    }
    // designated pullbacks map to fiberwise pullbacks
    for (&(f, g), &(apex, p1, p2)) in &theory.pullbacks {
        let sq = Square {
            top: arr_maps[p1].clone(),
            left: arr_maps[p2].clone(),
            right: arr_maps[f].clone(),
            bottom: arr_maps[g].clone(),
        };
        let _ = apex;
        if !sq.commutes() || !dfib::square_is_pullback(&sq) {
            return Err(ModelError::NotRMFunctor(format!(
                "designated pullback of ({}, {}) not preserved",
                tcat.arrow_name(f),
                tcat.arrow_name(g)
            )));
        }
    }
    // representable arrows have right adjoints
    let mut adjoints: Vec<Option<RightAdjointWitness>> = Vec::new();
    for f in tcat.arrows() {
        if theory.representable[f] {
            match right_adjoint(&arr_maps[f]) {
                Some(w) => adjoints.push(Some(w)),
                None => {
                    return Err(ModelError::NotRMFunctor(format!(
                        "representable arrow '{}' maps to a non-representable map",
                        tcat.arrow_name(f)
                    )))
                }
            }
        } else {
            adjoints.push(None);
        }
    }
    // pushforwards preserved up to the canonical comparison isomorphism
    for (&(f, g), &w) in &theory.pushforwards {
        let wf = adjoints[f].as_ref().expect("f is representable");
        // theory-side data: f : X→Y, g : Z→X, w.object = h : W→Y
        let z_to_x = &arr_maps[g];
        let (push, push_to_y) = dfib::pushforward(&arr_maps[f], wf, z_to_x)?;
        let h_map = &arr_maps[w.object];
        let iso_found = DFibMap::enumerate_over(&h_map.dom, &push, None)
            .into_iter()
            .any(|m| m.is_iso() && m.then(&push_to_y).same_maps(h_map));
        if !iso_found {
            return Err(ModelError::NotRMFunctor(format!(
                "pushforward of {} along {} not preserved",
                tcat.arrow_name(g),
                tcat.arrow_name(f)
            )));
        }
    }
    Ok(Model {
        name: name.to_string(),
        theory,
        base,
        terminal,
        obj_fibs,
        arr_maps,
        adjoints,
    })
}

/// The Yoneda self-model `(T, T/−)` of a finite type theory.
pub fn yoneda_self_model(theory: &Arc<RMCat>) -> Result<Model, ModelError> {
    let base = theory.cat.clone();
    let obj_fibs: Vec<Arc<DFib>> = base.objects().map(|a| Arc::new(yoneda(&base, a))).collect();
    let arr_maps: Vec<DFibMap> = base
        .arrows()
        .map(|f| {
            let m = dfib::yoneda_map(&base, f);
            // re-point at the shared fibrations
            DFibMap::over_id(
                &format!("y[{}]", base.arrow_name(f)),
                obj_fibs[base.src(f)].clone(),
                obj_fibs[base.tgt(f)].clone(),
                base.objects()
                    .map(|a| {
                        (0..obj_fibs[base.src(f)].fiber_size(a))
                            .map(|i| m.apply(Elem { obj: a, idx: i }).idx)
                            .collect()
                    })
                    .collect(),
            )
            .expect("yoneda maps are fibered")
        })
        .collect();
    validate_model(
        &format!("yoneda[{}]", theory.name),
        theory.clone(),
        base,
        obj_fibs,
        arr_maps,
    )
}

// ----------------------------------------------------------------------
// Contextual objects, democracy, hearts
// ----------------------------------------------------------------------

/// The least isomorphism-closed set of base objects containing the
/// terminal objects and closed under context extension along the
/// representable arrows of the theory.
pub fn contextual_closure(m: &Model) -> Vec<bool> {
    let base = &m.base;
    let mut in_closure = vec![false; base.object_count()];
    for o in base.objects() {
        if base.isomorphic_objects(o, m.terminal) {
            in_closure[o] = true;
        }
    }
    loop {
        let mut grew = false;
        for f in m.theory.cat.arrows() {
            if !m.theory.representable[f] {
                continue;
            }
            let w = m.witness(f);
            let b_fib = &m.obj_fibs[m.theory.cat.tgt(f)];
            for b in base.objects() {
                if !in_closure[b] {
                    continue;
                }
                for yidx in 0..b_fib.fiber_size(b) {
                    let y = Elem { obj: b, idx: yidx };
                    let (ext, _, _) = dfib::context_extension(&m.arr_maps[f], w, y);
                    for o in base.objects() {
                        if !in_closure[o] && base.isomorphic_objects(o, ext) {
                            in_closure[o] = true;
                            grew = true;
                        }
                    }
                    if !in_closure[ext] {
                        in_closure[ext] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return in_closure;
        }
    }
}

pub fn is_democratic(m: &Model) -> bool {
    contextual_closure(m).into_iter().all(|b| b)
}

/// The heart: restrict to the full subcategory of contextual objects and
/// pull every fibration back; revalidated as a model, returned with the
/// inclusion morphism.
pub fn heart(m: &Model) -> Result<(Model, ModelMorphism), ModelError> {
    let closure = contextual_closure(m);
    let base = &m.base;
    let kept: Vec<ObjId> = base.objects().filter(|&o| closure[o]).collect();
    let mut b = FinCatBuilder::new(&format!("{}♥", base.name));
    for &o in &kept {
        b.object(base.object_name(o));
    }
    for f in base.arrows() {
        if base.is_identity(f) {
            continue;
        }
        if closure[base.src(f)] && closure[base.tgt(f)] {
            b.arrow(
                base.arrow_name(f),
                base.object_name(base.src(f)),
                base.object_name(base.tgt(f)),
            );
        }
    }
    for f in base.arrows() {
        for g in base.arrows() {
            if base.tgt(f) == base.src(g)
                && !base.is_identity(f)
                && !base.is_identity(g)
                && closure[base.src(f)]
                && closure[base.tgt(f)]
                && closure[base.tgt(g)]
            {
                let h = base.comp(g, f);
                let nm = |a: ArrId| {
                    if base.is_identity(a) {
                        format!("id_{}", base.object_name(base.src(a)))
                    } else {
                        base.arrow_name(a).to_string()
                    }
                };
                b.compose(&nm(g), &nm(f), &nm(h));
            }
        }
    }
    let hbase = Arc::new(b.finish()?);
    // inclusion functor
    let obj_map: Vec<ObjId> = kept.clone();
    let arr_map: Vec<ArrId> = hbase
        .arrows()
        .map(|f| {
            if hbase.is_identity(f) {
                base.identity(kept[hbase.src(f)])
            } else {
                base.arrow_id(hbase.arrow_name(f)).expect("kept arrow")
            }
        })
        .collect();
    let inclusion = Functor::from_maps("incl", hbase.clone(), base.clone(), obj_map, arr_map)?;
    // pull back the fibrations
    let mut obj_fibs = Vec::new();
    for fib in &m.obj_fibs {
        let (pulled, _) = base_change(fib, &inclusion);
        obj_fibs.push(Arc::new(
            DFib::new(
                &format!("{}♥", fib.name),
                hbase.clone(),
                hbase.objects().map(|o| pulled.fiber(o).to_vec()).collect(),
                hbase
                    .arrows()
                    .map(|f| {
                        (0..pulled.fiber_size(hbase.tgt(f)))
                            .map(|i| {
                                pulled
                                    .act(
                                        Elem {
                                            obj: hbase.tgt(f),
                                            idx: i,
                                        },
                                        f,
                                    )
                                    .idx
                            })
                            .collect()
                    })
                    .collect(),
            )
            .expect("pulled fibration valid"),
        ));
    }
    let tcat = &m.theory.cat;
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|f| {
            DFibMap::over_id(
                &format!("{}♥", m.arr_maps[f].name),
                obj_fibs[tcat.src(f)].clone(),
                obj_fibs[tcat.tgt(f)].clone(),
                hbase
                    .objects()
                    .map(|o| {
                        (0..obj_fibs[tcat.src(f)].fiber_size(o))
                            .map(|i| {
                                m.arr_maps[f]
                                    .apply(Elem {
                                        obj: kept[o],
                                        idx: i,
                                    })
                                    .idx
                            })
                            .collect()
                    })
                    .collect(),
            )
            .expect("restricted maps fibered")
        })
        .collect();
    let hmodel = validate_model(
        &format!("{}♥", m.name),
        m.theory.clone(),
        hbase.clone(),
        obj_fibs,
        arr_maps,
    )?;
    // inclusion morphism
    let components: Vec<DFibMap> = tcat
        .objects()
        .map(|a| {
            DFibMap::new(
                &format!("incl[{}]", tcat.object_name(a)),
                hmodel.obj_fibs[a].clone(),
                m.obj_fibs[a].clone(),
                inclusion.clone(),
                hbase
                    .objects()
                    .map(|o| (0..hmodel.obj_fibs[a].fiber_size(o)).collect())
                    .collect(),
            )
            .expect("inclusion components fibered")
        })
        .collect();
    let incl = validate_morphism("heart-incl", &hmodel, m, inclusion, components)?;
    Ok((hmodel, incl))
}

// ----------------------------------------------------------------------
// Morphisms and 2-morphisms
// ----------------------------------------------------------------------

/// A morphism of models: a terminal-preserving base functor with one
/// fibered component per theory object, natural and satisfying the
/// Beck-Chevalley condition at representable arrows.
#[derive(Clone, Debug)]
pub struct ModelMorphism {
    pub name: String,
    pub base_functor: Functor,
    pub components: Vec<DFibMap>,
}

pub fn validate_morphism(
    name: &str,
    m: &Model,
    n: &Model,
    base_functor: Functor,
    components: Vec<DFibMap>,
) -> Result<ModelMorphism, ModelError> {
    base_functor.validate()?;
    // terminal preservation
    let t_img = base_functor.on_obj(m.terminal);
    if n.base.objects().any(|o| n.base.hom(o, t_img).len() != 1) {
        return Err(ModelError::NotRMFunctor(
            "base functor does not preserve the terminal object".into(),
        ));
    }
    let tcat = &m.theory.cat;
    if components.len() != tcat.object_count() {
        return Err(ModelError::NotRMFunctor("component count".into()));
    }
    // naturality
    for f in tcat.arrows() {
        let lhs = components[tcat.src(f)].then(&n.arr_maps[f]);
        let rhs = m.arr_maps[f].then(&components[tcat.tgt(f)]);
        if !lhs.same_maps(&rhs) {
            return Err(ModelError::NotNatural(tcat.arrow_name(f).to_string()));
        }
    }
    // Beck-Chevalley at representable arrows (mixed-base mate)
    for f in tcat.arrows() {
        if !m.theory.representable[f] {
            continue;
        }
        let sq = Square {
            top: components[tcat.src(f)].clone(),
            bottom: components[tcat.tgt(f)].clone(),
            left: m.arr_maps[f].clone(),
            right: n.arr_maps[f].clone(),
        };
        let mate = canonical_mate(&sq, m.witness(f), n.witness(f))
            .map_err(|e| ModelError::NotRMFunctor(e.to_string()))?;
        if !mate.iter().all(|c| n.base.is_iso(c.arrow)) {
            return Err(ModelError::BcFails(tcat.arrow_name(f).to_string()));
        }
    }
    Ok(ModelMorphism {
        name: name.to_string(),
        base_functor,
        components,
    })
}

impl ModelMorphism {
    pub fn compose(&self, after: &ModelMorphism) -> (Functor, Vec<DFibMap>) {
        let base = self.base_functor.then(&after.base_functor);
        let comps = self
            .components
            .iter()
            .zip(&after.components)
            .map(|(a, b)| a.then(b))
            .collect();
        (base, comps)
    }

    pub fn identity(m: &Model) -> ModelMorphism {
        ModelMorphism {
            name: format!("id[{}]", m.name),
            base_functor: Functor::identity(m.base.clone()),
            components: m
                .theory
                .cat
                .objects()
                .map(|a| DFibMap::identity(m.obj_fibs[a].clone()))
                .collect(),
        }
    }

    pub fn same_as(&self, other: &ModelMorphism) -> bool {
        self.base_functor.same_maps(&other.base_functor)
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.same_maps(b))
    }
}

/// A 2-morphism between parallel model morphisms: a natural
/// transformation of base functors such that every component family
/// lifts to an overlay over it (the lift is unique when it exists).
pub struct TwoMorphism {
    pub base: NatTrans,
}

pub fn validate_2morphism(
    m: &Model,
    n: &Model,
    from: &ModelMorphism,
    to: &ModelMorphism,
    sigma: NatTrans,
) -> Result<TwoMorphism, ModelError> {
    sigma.validate(&from.base_functor, &to.base_functor)?;
    for a in m.theory.cat.objects() {
        let fib_m = &m.obj_fibs[a];
        let fib_n = &n.obj_fibs[a];
        for b in m.base.objects() {
            for idx in 0..fib_m.fiber_size(b) {
                let e = Elem { obj: b, idx };
                let lhs = from.components[a].apply(e);
                let rhs = fib_n.act(to.components[a].apply(e), sigma.components[b]);
                if lhs != rhs {
                    return Err(ModelError::NoOverlay(
                        m.theory.cat.object_name(a).to_string(),
                    ));
                }
            }
        }
    }
    Ok(TwoMorphism { base: sigma })
}

/// All morphisms `M → N`, by exhausting terminal-preserving base
/// functors and fibered component families.
pub fn enumerate_model_morphisms(m: &Model, n: &Model) -> Vec<ModelMorphism> {
    let mut out = Vec::new();
    for f in crate::rmcat::enumerate_functors(&m.base, &n.base) {
        // must preserve the terminal object
        let t_img = f.on_obj(m.terminal);
        if n.base.objects().any(|o| n.base.hom(o, t_img).len() != 1) {
            continue;
        }
        // per theory object, all fibered components over f
        let per_obj: Vec<Vec<DFibMap>> = m
            .theory
            .cat
            .objects()
            .map(|a| DFibMap::enumerate_over(&m.obj_fibs[a], &n.obj_fibs[a], Some(&f)))
            .collect();
        if per_obj.iter().any(|v| v.is_empty()) {
            continue;
        }
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for v in &per_obj {
            let mut next = Vec::new();
            for t in &tuples {
                for i in 0..v.len() {
                    let mut t2 = t.clone();
                    t2.push(i);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        for t in tuples {
            let components: Vec<DFibMap> = t
                .iter()
                .enumerate()
                .map(|(a, &i)| per_obj[a][i].clone())
                .collect();
            if let Ok(mm) = validate_morphism(
                &format!("mor{}", out.len()),
                m,
                n,
                f.clone(),
                components,
            ) {
                out.push(mm);
            }
        }
    }
    out
}

/// All 2-morphisms between two parallel morphisms.
pub fn enumerate_2morphisms(
    m: &Model,
    n: &Model,
    from: &ModelMorphism,
    to: &ModelMorphism,
) -> Vec<TwoMorphism> {
    NatTrans::enumerate(&from.base_functor, &to.base_functor)
        .into_iter()
        .filter_map(|sigma| validate_2morphism(m, n, from, to, sigma).ok())
        .collect()
}

/// The hom-category `Mod(M, N)` is contractible: nonempty, and between
/// any ordered pair of morphisms there is exactly one 2-morphism.
pub fn hom_category_contractible(m: &Model, n: &Model) -> bool {
    let morphisms = enumerate_model_morphisms(m, n);
    if morphisms.is_empty() {
        return false;
    }
    for a in &morphisms {
        for b in &morphisms {
            if enumerate_2morphisms(m, n, a, b).len() != 1 {
                return false;
            }
        }
    }
    true
}

/// Strict isomorphism of models: morphisms composing to the identities
/// both ways, found by exhaustive search.
pub fn models_isomorphic(m: &Model, n: &Model) -> bool {
    let forward = enumerate_model_morphisms(m, n);
    let backward = enumerate_model_morphisms(n, m);
    let id_m = ModelMorphism::identity(m);
    let id_n = ModelMorphism::identity(n);
    for i in &forward {
        for j in &backward {
            let (b1, c1) = i.compose(j);
            let (b2, c2) = j.compose(i);
            let ij = ModelMorphism {
                name: "ij".into(),
                base_functor: b1,
                components: c1,
            };
            let ji = ModelMorphism {
                name: "ji".into(),
                base_functor: b2,
                components: c2,
            };
            if ij.same_as(&id_m) && ji.same_as(&id_n) {
                return true;
            }
        }
    }
    false
}

// ----------------------------------------------------------------------
// Bi-initial model
// ----------------------------------------------------------------------

/// The bi-initial model of a finite type theory: base is the full
/// subcategory of objects whose map to the terminal is representable;
/// fibrations are the comma fibrations `iM(T)/A`.
pub fn bi_initial_model(theory: &Arc<RMCat>) -> Result<Model, ModelError> {
    let tcat = &theory.cat;
    let kept: Vec<ObjId> = tcat
        .objects()
        .filter(|&x| theory.representable[theory.bang(x)])
        .collect();
    let mut b = FinCatBuilder::new(&format!("iM[{}]", theory.name));
    for &o in &kept {
        b.object(tcat.object_name(o));
    }
    let in_kept = |o: ObjId| kept.contains(&o);
    for f in tcat.arrows() {
        if !tcat.is_identity(f) && in_kept(tcat.src(f)) && in_kept(tcat.tgt(f)) {
            b.arrow(
                tcat.arrow_name(f),
                tcat.object_name(tcat.src(f)),
                tcat.object_name(tcat.tgt(f)),
            );
        }
    }
    let nm = |a: ArrId| {
        if tcat.is_identity(a) {
            format!("id_{}", tcat.object_name(tcat.src(a)))
        } else {
            tcat.arrow_name(a).to_string()
        }
    };
    for f in tcat.arrows() {
        for g in tcat.arrows() {
            if tcat.tgt(f) == tcat.src(g)
                && !tcat.is_identity(f)
                && !tcat.is_identity(g)
                && in_kept(tcat.src(f))
                && in_kept(tcat.tgt(f))
                && in_kept(tcat.tgt(g))
            {
                b.compose(&nm(g), &nm(f), &nm(tcat.comp(g, f)));
            }
        }
    }
    let base = Arc::new(b.finish()?);
    // comma fibrations: fiber of A over X = Hom_T(X, A)
    let obj_fibs: Vec<Arc<DFib>> = tcat
        .objects()
        .map(|a| {
            let fibers: Vec<Vec<String>> = kept
                .iter()
                .map(|&x| {
                    tcat.hom(x, a)
                        .into_iter()
                        .map(|f| tcat.arrow_name(f).to_string())
                        .collect()
                })
                .collect();
            let homs: Vec<Vec<ArrId>> = kept.iter().map(|&x| tcat.hom(x, a)).collect();
            let restrict: Vec<Vec<usize>> = base
                .arrows()
                .map(|f| {
                    let underlying = if base.is_identity(f) {
                        tcat.identity(kept[base.src(f)])
                    } else {
                        tcat.arrow_id(base.arrow_name(f)).unwrap()
                    };
                    let (s, t) = (base.src(f), base.tgt(f));
                    homs[t]
                        .iter()
                        .map(|&g| {
                            let gf = tcat.comp(g, underlying);
                            homs[s].iter().position(|&h| h == gf).unwrap()
                        })
                        .collect()
                })
                .collect();
            Arc::new(
                DFib::new(
                    &format!("iM/{}", tcat.object_name(a)),
                    base.clone(),
                    fibers,
                    restrict,
                )
                .expect("comma fibration valid"),
            )
        })
        .collect();
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|f| {
            let (a, a2) = (tcat.src(f), tcat.tgt(f));
            let maps: Vec<Vec<usize>> = kept
                .iter()
                .map(|&x| {
                    tcat.hom(x, a)
                        .into_iter()
                        .map(|g| {
                            let fg = tcat.comp(f, g);
                            tcat.hom(x, a2).iter().position(|&h| h == fg).unwrap()
                        })
                        .collect()
                })
                .collect();
            DFibMap::over_id(
                &format!("iM[{}]", tcat.arrow_name(f)),
                obj_fibs[a].clone(),
                obj_fibs[a2].clone(),
                maps,
            )
            .expect("postcomposition is fibered")
        })
        .collect();
    validate_model(
        &format!("iM[{}]", theory.name),
        theory.clone(),
        base,
        obj_fibs,
        arr_maps,
    )
}

// ----------------------------------------------------------------------
// Internal language
// ----------------------------------------------------------------------

/// The internal language of a model: the theory `A ↦ A^M(1)`, validated
/// cartesian by the two independent checkers.
pub fn internal_language(m: &Model) -> Result<Theory, ModelError> {
    let tcat = &m.theory.cat;
    let sets: Vec<Vec<String>> = tcat
        .objects()
        .map(|a| m.obj_fibs[a].fiber(m.terminal).to_vec())
        .collect();
    let maps: Vec<Vec<usize>> = tcat
        .arrows()
        .map(|f| {
            (0..m.obj_fibs[tcat.src(f)].fiber_size(m.terminal))
                .map(|i| {
                    m.arr_maps[f]
                        .apply(Elem {
                            obj: m.terminal,
                            idx: i,
                        })
                        .idx
                })
                .collect()
        })
        .collect();
    let theory = Theory {
        name: format!("L[{}]", m.name),
        sets,
        maps,
    };
    Ok(crate::rmcat::validate_theory(&m.theory, theory)?)
}

// ----------------------------------------------------------------------
// Natural models
// ----------------------------------------------------------------------

/// A natural model: a representable map of fibrations `p : E → U` over a
/// base with a terminal object, with the context-extension data of every
/// type element.
#[derive(Debug)]
pub struct NaturalModel {
    pub base: Arc<FinCat>,
    pub terminal: ObjId,
    pub types: Arc<DFib>,
    pub terms: Arc<DFib>,
    pub p: DFibMap,
    pub witness: RightAdjointWitness,
}

/// One row of the CwF report: a type element with its context extension,
/// projection and generic element.
pub struct CwfEntry {
    pub over: ObjId,
    pub ty: String,
    pub extension: ObjId,
    pub projection: ArrId,
    pub generic: String,
}

pub fn natural_model_check(
    base: Arc<FinCat>,
    types: Arc<DFib>,
    terms: Arc<DFib>,
    p: DFibMap,
) -> Result<NaturalModel, ModelError> {
    let terminal = base.terminal_object().ok_or(ModelError::NoTerminal)?;
    let witness = match right_adjoint(&p) {
        Some(w) => w,
        None => {
            // find the failing element for the diagnostic
            let bad = types
                .elements()
                .find(|&y| dfib::universal_arrow_public(&p, y).is_none())
                .map(|y| {
                    format!(
                        "{} over {}",
                        types.elem_name(y),
                        base.object_name(y.obj)
                    )
                })
                .unwrap_or_else(|| "<unknown>".into());
            return Err(ModelError::NotRepresentable(p.name.clone(), bad));
        }
    };
    // verify the defining pullback for every element
    for y in types.elements() {
        if !dfib::extension_is_pullback(&p, &witness, y) {
            return Err(ModelError::NotRepresentable(
                p.name.clone(),
                types.elem_name(y).to_string(),
            ));
        }
    }
    Ok(NaturalModel {
        base,
        terminal,
        types,
        terms,
        p,
        witness,
    })
}

impl NaturalModel {
    /// The CwF data for every (object, type) pair.
    pub fn cwf_report(&self) -> Vec<CwfEntry> {
        let mut out = Vec::new();
        for y in self.types.elements() {
            let (ext, proj, q) = dfib::context_extension(&self.p, &self.witness, y);
            out.push(CwfEntry {
                over: y.obj,
                ty: self.types.elem_name(y).to_string(),
                extension: ext,
                projection: proj,
                generic: self.terms.elem_name(q).to_string(),
            });
        }
        out
    }

    /// Contextual closure generated by context extensions along `p`.
    pub fn contextual_closure(&self) -> Vec<bool> {
        let base = &self.base;
        let mut in_closure = vec![false; base.object_count()];
        for o in base.objects() {
            if base.isomorphic_objects(o, self.terminal) {
                in_closure[o] = true;
            }
        }
        loop {
            let mut grew = false;
            for b in base.objects() {
                if !in_closure[b] {
                    continue;
                }
                for yidx in 0..self.types.fiber_size(b) {
                    let y = Elem { obj: b, idx: yidx };
                    let (ext, _, _) = dfib::context_extension(&self.p, &self.witness, y);
                    for o in base.objects() {
                        if !in_closure[o]
                            && (o == ext || base.isomorphic_objects(o, ext))
                        {
                            in_closure[o] = true;
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                return in_closure;
            }
        }
    }

    pub fn is_democratic(&self) -> bool {
        self.contextual_closure().into_iter().all(|b| b)
    }

    /// Internal language fragment: closed types and closed terms.
    pub fn language(&self) -> (Vec<String>, Vec<String>) {
        (
            self.types.fiber(self.terminal).to_vec(),
            self.terms.fiber(self.terminal).to_vec(),
        )
    }

    /// Elements of the n-fold polynomial iterate `P_p^n(U)` over the
    /// terminal object.
    pub fn polynomial_iterate_count(&self, n: usize) -> Result<usize, ModelError> {
        let mut fib = self.types.clone();
        for _ in 0..n {
            fib = dfib::polynomial(&self.p, &self.witness, &fib)?;
        }
        Ok(fib.fiber_size(self.terminal))
    }

    /// Telescopes of length `n+1`: iterated context extensions starting
    /// from the terminal object.
    pub fn telescope_count(&self, n: usize) -> usize {
        fn go(nm: &NaturalModel, at: ObjId, remaining: usize) -> usize {
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for yidx in 0..nm.types.fiber_size(at) {
                let y = Elem { obj: at, idx: yidx };
                let (ext, _, _) = dfib::context_extension(&nm.p, &nm.witness, y);
                total += go(nm, ext, remaining - 1);
            }
            total
        }
        go(self, self.terminal, n + 1)
    }
}

#[cfg(test)]
mod tests;
