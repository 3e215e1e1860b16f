//! Discrete fibrations over finite categories, stored fiberwise: a fiber
//! per base object and a restriction map per base arrow. The total
//! category is derived on demand.
//!
//! Everything from the fibration toolbox lives here: the Yoneda
//! embedding and its bijection, base change, transport along natural
//! transformations, representable maps via right-adjoint search,
//! pushforwards computed as base change along the right adjoint,
//! polynomial functors, context extensions, canonical mates and the
//! Beck-Chevalley condition.

mod parse;

pub use parse::parse_dfib;

use crate::fincat::{ArrId, CatError, FinCat, FinCatBuilder, Functor, NatTrans, ObjId};
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DFibError {
    #[error("fiber restriction along '{0}' is not a function into the source fiber")]
    BadRestriction(String),
    #[error("restriction along identity at '{0}' is not the identity")]
    IdentityRestriction(String),
    #[error("restriction fails to respect composition on ('{0}', '{1}')")]
    CompositionRestriction(String, String),
    #[error("map is not fibered: element {0} of '{1}' along '{2}'")]
    NotFibered(String, String, String),
    #[error("maps are not composable / bases mismatch: {0}")]
    Mismatch(String),
    #[error("pushforward needs a representable map: '{0}' has no right adjoint")]
    MissingAdjoint(String),
    #[error("enumeration overflow: {0}")]
    Overflow(String),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// An element of a discrete fibration: fiber object plus index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem {
    pub obj: ObjId,
    pub idx: usize,
}

/// A discrete fibration presented fiberwise. The restriction along an
/// arrow `f : a → b` maps the fiber over `b` into the fiber over `a`.
#[derive(Debug, Clone)]
pub struct DFib {
    pub name: String,
    pub base: Arc<FinCat>,
    fibers: Vec<Vec<String>>,
    restrict: Vec<Vec<usize>>, // per arrow f: index map D(tgt f) -> D(src f)
}

impl DFib {
    pub fn new(
        name: &str,
        base: Arc<FinCat>,
        fibers: Vec<Vec<String>>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<DFib, DFibError> {
        let d = DFib {
            name: name.to_string(),
            base,
            fibers,
            restrict,
        };
        d.validate()?;
        Ok(d)
    }

    /// The fibration with a single element over every object.
    pub fn terminal(base: Arc<FinCat>) -> DFib {
        let fibers = base.objects().map(|_| vec!["*".to_string()]).collect();
        let restrict = base.arrows().map(|_| vec![0]).collect();
        DFib {
            name: "1".into(),
            base,
            fibers,
            restrict,
        }
    }

    pub fn fiber(&self, o: ObjId) -> &[String] {
        &self.fibers[o]
    }

    pub fn fiber_size(&self, o: ObjId) -> usize {
        self.fibers[o].len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        self.base
            .objects()
            .flat_map(move |o| (0..self.fibers[o].len()).map(move |idx| Elem { obj: o, idx }))
    }

    pub fn elem_name(&self, e: Elem) -> &str {
        &self.fibers[e.obj][e.idx]
    }

    /// `e · f`: restriction of an element along an arrow into its object.
    pub fn act(&self, e: Elem, f: ArrId) -> Elem {
        assert_eq!(self.base.tgt(f), e.obj, "arrow does not target the fiber");
        Elem {
            obj: self.base.src(f),
            idx: self.restrict[f][e.idx],
        }
    }

    fn validate(&self) -> Result<(), DFibError> {
        let base = &self.base;
        if self.fibers.len() != base.object_count() || self.restrict.len() != base.arrow_count() {
            return Err(DFibError::Mismatch(format!(
                "fibration '{}' has wrong table sizes",
                self.name
            )));
        }
        for f in base.arrows() {
            let (a, b) = (base.src(f), base.tgt(f));
            if self.restrict[f].len() != self.fibers[b].len()
                || self.restrict[f].iter().any(|&i| i >= self.fibers[a].len())
            {
                return Err(DFibError::BadRestriction(base.arrow_name(f).to_string()));
            }
        }
        for o in base.objects() {
            let id = base.identity(o);
            if (0..self.fibers[o].len()).any(|i| self.restrict[id][i] != i) {
                return Err(DFibError::IdentityRestriction(
                    base.object_name(o).to_string(),
                ));
            }
        }
        for f in base.arrows() {
            for g in base.arrows() {
                if base.tgt(f) == base.src(g) {
                    let h = base.comp(g, f);
                    for e in 0..self.fibers[base.tgt(g)].len() {
                        if self.restrict[f][self.restrict[g][e]] != self.restrict[h][e] {
                            return Err(DFibError::CompositionRestriction(
                                base.arrow_name(f).to_string(),
                                base.arrow_name(g).to_string(),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Unique-lift reading of the definition: for every element and every
    /// arrow into its projection, exactly one lift exists. True by
    /// construction in the fiberwise encoding; checked literally against
    /// the derived total category.
    pub fn unique_lift_holds(&self) -> bool {
        let (total, proj, elems) = self.total_category();
        for (ti, &e) in elems.iter().enumerate() {
            for f in self.base.arrows() {
                if self.base.tgt(f) != e.obj {
                    continue;
                }
                let count = total
                    .arrows()
                    .filter(|&l| total.tgt(l) == ti && proj.on_arr(l) == f)
                    .count();
                if count != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// Derive the total category with its projection functor; returns the
    /// element corresponding to each total object.
    pub fn total_category(&self) -> (Arc<FinCat>, Functor, Vec<Elem>) {
        let elems: Vec<Elem> = self.elements().collect();
        let ename = |e: Elem| {
            format!(
                "{}.{}",
                self.base.object_name(e.obj),
                self.elem_name(e)
            )
        };
        let mut b = FinCatBuilder::new(&format!("tot[{}]", self.name));
        for &e in &elems {
            b.object(&ename(e));
        }
        // an arrow of the total category is (f, y): (src f, y·f) → (tgt f, y)
        let mut arrs: Vec<(ArrId, Elem)> = Vec::new();
        for &y in &elems {
            for f in self.base.arrows() {
                if self.base.tgt(f) == y.obj && !self.base.is_identity(f) {
                    b.arrow(
                        &format!("{}@{}", self.base.arrow_name(f), ename(y)),
                        &ename(self.act(y, f)),
                        &ename(y),
                    );
                    arrs.push((f, y));
                }
            }
        }
        let lift_name = |f: ArrId, y: Elem| -> String {
            if self.base.is_identity(f) {
                format!("id_{}", ename(y))
            } else {
                format!("{}@{}", self.base.arrow_name(f), ename(y))
            }
        };
        for &(f, y) in &arrs {
            for &(g, z) in &arrs {
                // (g, z) ∘ (f, y) needs y = z·g
                if self.base.src(g) == y.obj && self.act(z, g) == y {
                    let h = self.base.comp(g, f);
                    b.compose(&lift_name(g, z), &lift_name(f, y), &lift_name(h, z));
                }
            }
        }
        let total = Arc::new(b.finish().expect("total category is valid"));
        let obj_map: Vec<ObjId> = elems.iter().map(|e| e.obj).collect();
        let mut arr_map = vec![0; total.arrow_count()];
        for (i, &e) in elems.iter().enumerate() {
            arr_map[total.identity(i)] = self.base.identity(e.obj);
        }
        for &(f, y) in &arrs {
            let id = total
                .arrow_id(&lift_name(f, y))
                .expect("total arrow exists");
            arr_map[id] = f;
        }
        let proj = Functor::from_maps(
            &format!("p[{}]", self.name),
            total.clone(),
            self.base.clone(),
            obj_map,
            arr_map,
        )
        .expect("total projection is a functor");
        (total, proj, elems)
    }

    /// Search for an isomorphism over the identity base functor.
    pub fn iso_over_id(&self, other: &DFib) -> Option<DFibMap> {
        if self.base.object_count() != other.base.object_count() {
            return None;
        }
        for o in self.base.objects() {
            if self.fiber_size(o) != other.fiber_size(o) {
                return None;
            }
        }
        DFibMap::enumerate_over(self, other, None)
            .into_iter()
            .find(|m| m.is_iso())
    }
}

impl fmt::Display for DFib {
    /// Serializes in the `.dfib` format (base reference left abstract).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dfib {} over {}", self.name, self.base.name)?;
        for o in self.base.objects() {
            writeln!(
                f,
                "fiber {} : {{{}}}",
                self.base.object_name(o),
                self.fibers[o].join(", ")
            )?;
        }
        for a in self.base.arrows() {
            if self.base.is_identity(a) {
                continue;
            }
            let (src, tgt) = (self.base.src(a), self.base.tgt(a));
            let entries: Vec<String> = (0..self.fibers[tgt].len())
                .map(|i| {
                    format!(
                        "{} -> {}",
                        self.fibers[tgt][i], self.fibers[src][self.restrict[a][i]]
                    )
                })
                .collect();
            writeln!(
                f,
                "restrict {} : {}",
                self.base.arrow_name(a),
                entries.join(", ")
            )?;
        }
        Ok(())
    }
}

/// A map of discrete fibrations over a base functor.
#[derive(Debug, Clone)]
pub struct DFibMap {
    pub name: String,
    pub dom: Arc<DFib>,
    pub cod: Arc<DFib>,
    pub over: Functor,
    maps: Vec<Vec<usize>>, // per dom base object a: D(a) -> E(F a)
}

impl DFibMap {
    pub fn new(
        name: &str,
        dom: Arc<DFib>,
        cod: Arc<DFib>,
        over: Functor,
        maps: Vec<Vec<usize>>,
    ) -> Result<DFibMap, DFibError> {
        let m = DFibMap {
            name: name.to_string(),
            dom,
            cod,
            over,
            maps,
        };
        m.validate()?;
        Ok(m)
    }

    /// Map over the identity base functor.
    pub fn over_id(
        name: &str,
        dom: Arc<DFib>,
        cod: Arc<DFib>,
        maps: Vec<Vec<usize>>,
    ) -> Result<DFibMap, DFibError> {
        let over = Functor::identity(dom.base.clone());
        DFibMap::new(name, dom, cod, over, maps)
    }

    pub fn identity(d: Arc<DFib>) -> DFibMap {
        let maps = d
            .base
            .objects()
            .map(|o| (0..d.fiber_size(o)).collect())
            .collect();
        DFibMap {
            name: format!("id[{}]", d.name),
            dom: d.clone(),
            cod: d,
            over: Functor::identity(Arc::new(FinCat::terminal_category())),
            maps,
        }
        .fix_identity_over()
    }

    fn fix_identity_over(mut self) -> DFibMap {
        self.over = Functor::identity(self.dom.base.clone());
        self
    }

    /// The unique map into the terminal fibration over the same base.
    pub fn to_terminal(d: Arc<DFib>, one: Arc<DFib>) -> DFibMap {
        let maps = d
            .base
            .objects()
            .map(|o| vec![0; d.fiber_size(o)])
            .collect();
        DFibMap {
            name: format!("!{}", d.name),
            dom: d.clone(),
            cod: one,
            over: Functor::identity(d.base.clone()),
            maps,
        }
    }

    pub fn apply(&self, e: Elem) -> Elem {
        Elem {
            obj: self.over.on_obj(e.obj),
            idx: self.maps[e.obj][e.idx],
        }
    }

    fn validate(&self) -> Result<(), DFibError> {
        if !Arc::ptr_eq(&self.over.dom, &self.dom.base) && self.over.dom.name != self.dom.base.name
        {
            return Err(DFibError::Mismatch(format!(
                "map '{}' base functor domain mismatch",
                self.name
            )));
        }
        if self.maps.len() != self.dom.base.object_count() {
            return Err(DFibError::Mismatch(format!(
                "map '{}' has wrong table size",
                self.name
            )));
        }
        for o in self.dom.base.objects() {
            if self.maps[o].len() != self.dom.fiber_size(o) {
                return Err(DFibError::Mismatch(format!(
                    "map '{}' fiber table at {} has wrong length",
                    self.name,
                    self.dom.base.object_name(o)
                )));
            }
            let fo = self.over.on_obj(o);
            if self.maps[o].iter().any(|&i| i >= self.cod.fiber_size(fo)) {
                return Err(DFibError::Mismatch(format!(
                    "map '{}' image out of range at {}",
                    self.name,
                    self.dom.base.object_name(o)
                )));
            }
        }
        // fiberedness: map(e · f) = map(e) · F(f)
        for f in self.dom.base.arrows() {
            let b = self.dom.base.tgt(f);
            for idx in 0..self.dom.fiber_size(b) {
                let e = Elem { obj: b, idx };
                let lhs = self.apply(self.dom.act(e, f));
                let rhs = self.cod.act(self.apply(e), self.over.on_arr(f));
                if lhs != rhs {
                    return Err(DFibError::NotFibered(
                        self.dom.elem_name(e).to_string(),
                        self.dom.name.clone(),
                        self.dom.base.arrow_name(f).to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Compose `self` then `after` (bases compose accordingly).
    pub fn then(&self, after: &DFibMap) -> DFibMap {
        let maps = self
            .dom
            .base
            .objects()
            .map(|o| {
                (0..self.dom.fiber_size(o))
                    .map(|idx| after.apply(self.apply(Elem { obj: o, idx })).idx)
                    .collect()
            })
            .collect();
        DFibMap {
            name: format!("{};{}", self.name, after.name),
            dom: self.dom.clone(),
            cod: after.cod.clone(),
            over: self.over.then(&after.over),
            maps,
        }
    }

    pub fn same_maps(&self, other: &DFibMap) -> bool {
        self.maps == other.maps && self.over.same_maps(&other.over)
    }

    pub fn is_iso(&self) -> bool {
        self.dom.base.objects().all(|o| {
            let mut seen = vec![false; self.cod.fiber_size(self.over.on_obj(o))];
            self.maps[o].iter().for_each(|&i| seen[i] = true);
            self.maps[o].len() == seen.len() && seen.iter().all(|&s| s)
        })
    }

    /// All maps `dom → cod` over the given base functor (identity when
    /// `over` is `None`), by backtracking over fiber assignments.
    pub fn enumerate_over(dom: &DFib, cod: &DFib, over: Option<&Functor>) -> Vec<DFibMap> {
        let over = match over {
            Some(f) => f.clone(),
            None => Functor::identity(dom.base.clone()),
        };
        let dom = Arc::new(dom.clone());
        let cod = Arc::new(cod.clone());
        let elems: Vec<Elem> = dom.elements().collect();
        let mut out = Vec::new();
        let mut assignment: HashMap<Elem, usize> = HashMap::new();

        fn consistent(
            dom: &DFib,
            cod: &DFib,
            over: &Functor,
            assignment: &HashMap<Elem, usize>,
        ) -> bool {
            for f in dom.base.arrows() {
                let b = dom.base.tgt(f);
                for idx in 0..dom.fiber_size(b) {
                    let e = Elem { obj: b, idx };
                    let e2 = dom.act(e, f);
                    if let (Some(&ie), Some(&ie2)) = (assignment.get(&e), assignment.get(&e2)) {
                        let img = Elem {
                            obj: over.on_obj(b),
                            idx: ie,
                        };
                        let down = cod.act(img, over.on_arr(f));
                        if down.idx != ie2 {
                            return false;
                        }
                    }
                }
            }
            true
        }

        fn go(
            dom: &Arc<DFib>,
            cod: &Arc<DFib>,
            over: &Functor,
            elems: &[Elem],
            k: usize,
            assignment: &mut HashMap<Elem, usize>,
            out: &mut Vec<DFibMap>,
        ) {
            if k == elems.len() {
                let maps: Vec<Vec<usize>> = dom
                    .base
                    .objects()
                    .map(|o| {
                        (0..dom.fiber_size(o))
                            .map(|idx| assignment[&Elem { obj: o, idx }])
                            .collect()
                    })
                    .collect();
                let m = DFibMap {
                    name: format!("m{}", out.len()),
                    dom: dom.clone(),
                    cod: cod.clone(),
                    over: over.clone(),
                    maps,
                };
                debug_assert!(m.validate().is_ok());
                out.push(m);
                return;
            }
            let e = elems[k];
            let fo = over.on_obj(e.obj);
            for cand in 0..cod.fiber_size(fo) {
                assignment.insert(e, cand);
                if consistent(dom, cod, over, assignment) {
                    go(dom, cod, over, elems, k + 1, assignment, out);
                }
            }
            assignment.remove(&e);
        }

        go(&dom, &cod, &over, &elems, 0, &mut assignment, &mut out);
        out
    }
}

// ----------------------------------------------------------------------
// Yoneda
// ----------------------------------------------------------------------

/// The representable fibration `B/b`: fiber over `a` is `Hom(a, b)`,
/// restriction is precomposition.
pub fn yoneda(base: &Arc<FinCat>, b: ObjId) -> DFib {
    let fibers: Vec<Vec<String>> = base
        .objects()
        .map(|a| {
            base.hom(a, b)
                .into_iter()
                .map(|f| base.arrow_name(f).to_string())
                .collect()
        })
        .collect();
    let homs: Vec<Vec<ArrId>> = base.objects().map(|a| base.hom(a, b)).collect();
    let restrict: Vec<Vec<usize>> = base
        .arrows()
        .map(|f| {
            let (a, a2) = (base.src(f), base.tgt(f));
            homs[a2]
                .iter()
                .map(|&g| {
                    let gf = base.comp(g, f);
                    homs[a].iter().position(|&h| h == gf).unwrap()
                })
                .collect()
        })
        .collect();
    DFib {
        name: format!("{}/{}", base.name, base.object_name(b)),
        base: base.clone(),
        fibers,
        restrict,
    }
}

/// The element of `yoneda(base, b)` corresponding to `id_b`.
pub fn yoneda_unit(base: &FinCat, b: ObjId) -> Elem {
    let idx = base
        .hom(b, b)
        .iter()
        .position(|&f| f == base.identity(b))
        .unwrap();
    Elem { obj: b, idx }
}

/// Postcomposition `B/b → B/b'` induced by `f : b → b'`.
pub fn yoneda_map(base: &Arc<FinCat>, f: ArrId) -> DFibMap {
    let (b, b2) = (base.src(f), base.tgt(f));
    let dom = Arc::new(yoneda(base, b));
    let cod = Arc::new(yoneda(base, b2));
    let maps: Vec<Vec<usize>> = base
        .objects()
        .map(|a| {
            base.hom(a, b)
                .into_iter()
                .map(|g| {
                    let fg = base.comp(f, g);
                    base.hom(a, b2).iter().position(|&h| h == fg).unwrap()
                })
                .collect()
        })
        .collect();
    DFibMap {
        name: format!("y[{}]", base.arrow_name(f)),
        dom,
        cod,
        over: Functor::identity(base.clone()),
        maps,
    }
}

/// Witness for the Yoneda Lemma at `(b, D)`: the evaluation taking a map
/// `B/b → D` to its value on `id_b` is bijective. Returns the maps and
/// the corresponding elements of `D(b)`, in matching order.
pub fn yoneda_bijection(base: &Arc<FinCat>, b: ObjId, d: &DFib) -> (Vec<DFibMap>, Vec<Elem>) {
    let yb = yoneda(base, b);
    let maps = DFibMap::enumerate_over(&yb, d, None);
    let unit = yoneda_unit(base, b);
    let elems: Vec<Elem> = maps.iter().map(|m| m.apply(unit)).collect();
    (maps, elems)
}

// ----------------------------------------------------------------------
// Base change and transport
// ----------------------------------------------------------------------

/// Base change `F*D` of `D` along `F : B' → B`, with the projection map
/// `F*D → D` over `F`.
pub fn base_change(d: &Arc<DFib>, f: &Functor) -> (Arc<DFib>, DFibMap) {
    let base2 = f.dom.clone();
    let fibers: Vec<Vec<String>> = base2
        .objects()
        .map(|a| d.fibers[f.on_obj(a)].clone())
        .collect();
    let restrict: Vec<Vec<usize>> = base2
        .arrows()
        .map(|g| d.restrict[f.on_arr(g)].clone())
        .collect();
    let pulled = Arc::new(DFib {
        name: format!("{}^*[{}]", f.name, d.name),
        base: base2.clone(),
        fibers,
        restrict,
    });
    let maps: Vec<Vec<usize>> = base2
        .objects()
        .map(|a| (0..pulled.fiber_size(a)).collect())
        .collect();
    let proj = DFibMap {
        name: format!("pr[{}]", pulled.name),
        dom: pulled.clone(),
        cod: d.clone(),
        over: f.clone(),
        maps,
    };
    (pulled, proj)
}

/// Transport along a natural transformation `σ : F ⇒ G : B' → B`: the
/// unique map `σ* : G*D → F*D` over the identity such that the overlay
/// transformation projects onto σ. Also verifies uniqueness by
/// exhausting all candidate maps.
pub struct Transport {
    pub map: DFibMap,
    pub unique: bool,
}

pub fn transport_along_nat(
    sigma: &NatTrans,
    f: &Functor,
    g: &Functor,
    d: &Arc<DFib>,
) -> Transport {
    let (fd, _) = base_change(d, f);
    let (gd, _) = base_change(d, g);
    let base2 = &f.dom;
    let maps: Vec<Vec<usize>> = base2
        .objects()
        .map(|a| {
            (0..gd.fiber_size(a))
                .map(|idx| {
                    // element of D(G a); restrict along σ_a : F a → G a
                    let e = Elem {
                        obj: g.on_obj(a),
                        idx,
                    };
                    d.act(e, sigma.components[a]).idx
                })
                .collect()
        })
        .collect();
    let map = DFibMap {
        name: format!("{}^*", sigma.name),
        dom: gd.clone(),
        cod: fd.clone(),
        over: Functor::identity(base2.clone()),
        maps,
    };
    map.validate().expect("transport map is fibered");

    // Uniqueness: a candidate map m admits an overlay with the right
    // projection iff m(e) = e · σ_a for every element; exhaust and count.
    let candidates = DFibMap::enumerate_over(&gd, &fd, None);
    let mut valid = 0;
    for m in &candidates {
        let ok = base2.objects().all(|a| {
            (0..gd.fiber_size(a)).all(|idx| {
                let e = Elem {
                    obj: g.on_obj(a),
                    idx,
                };
                m.maps[a][idx] == d.act(e, sigma.components[a]).idx
            })
        });
        if ok {
            valid += 1;
        }
    }
    Transport {
        map,
        unique: valid == 1,
    }
}

// ----------------------------------------------------------------------
// Representable maps
// ----------------------------------------------------------------------

/// The universal arrow from a map `u` to a codomain element `y`: the
/// context extension object, its generic element, and the projection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniversalArrow {
    pub ext: ObjId,
    pub generic: usize, // index into dom fiber over ext
    pub proj: ArrId,    // ext → obj(y)
}

/// Right-adjoint witness for a representable map over an identity base
/// functor: one universal arrow per codomain element, found by
/// deterministic search in declaration order.
#[derive(Debug, Clone)]
pub struct RightAdjointWitness {
    pub per_elem: Vec<Vec<UniversalArrow>>, // indexed like cod fibers
}

impl RightAdjointWitness {
    pub fn universal(&self, y: Elem) -> UniversalArrow {
        self.per_elem[y.obj][y.idx]
    }
}

/// Predicate (1): the fibration is representable, i.e. isomorphic to
/// some `B/b`; returns the representing object. Distinct from predicate
/// (2) below on bases without a terminal object.
pub fn representing_object(d: &DFib) -> Option<ObjId> {
    d.base
        .objects()
        .find(|&b| d.iso_over_id(&yoneda(&d.base, b)).is_some())
}

/// Predicate (2): the unique map into the terminal fibration is a
/// representable map.
pub fn bang_is_representable(d: &Arc<DFib>) -> bool {
    let one = Arc::new(DFib::terminal(d.base.clone()));
    let bang = DFibMap::to_terminal(d.clone(), one);
    right_adjoint(&bang).is_some()
}

/// Search for a right adjoint of `u : D → E` over the identity. For each
/// element `y` of `E` we look for a terminal object of the comma
/// category `(u ↓ y)`; all must exist.
pub fn right_adjoint(u: &DFibMap) -> Option<RightAdjointWitness> {
    let base = &u.dom.base;
    let mut per_elem: Vec<Vec<UniversalArrow>> = Vec::new();
    for b in base.objects() {
        let mut row = Vec::new();
        for yidx in 0..u.cod.fiber_size(b) {
            let y = Elem { obj: b, idx: yidx };
            row.push(universal_arrow(u, y)?);
        }
        per_elem.push(row);
    }
    Some(RightAdjointWitness { per_elem })
}

/// Public probe: the universal arrow from `u` to a single element, if
/// any (used to report which element breaks representability).
pub fn universal_arrow_public(u: &DFibMap, y: Elem) -> Option<UniversalArrow> {
    universal_arrow(u, y)
}

fn universal_arrow(u: &DFibMap, y: Elem) -> Option<UniversalArrow> {
    let base = &u.dom.base;
    // candidates: (x over a, g : a → obj(y)) with u(x) = y·g
    let mut candidates: Vec<(Elem, ArrId)> = Vec::new();
    for a in base.objects() {
        for g in base.hom(a, y.obj) {
            for xidx in 0..u.dom.fiber_size(a) {
                let x = Elem { obj: a, idx: xidx };
                if u.apply(x) == u.cod.act(y, g) {
                    candidates.push((x, g));
                }
            }
        }
    }
    'cand: for &(x0, g0) in &candidates {
        for &(x, g) in &candidates {
            // mediating arrows h : obj(x) → obj(x0) with g0∘h = g, x0·h = x
            let found = base
                .hom(x.obj, x0.obj)
                .into_iter()
                .filter(|&h| base.comp(g0, h) == g && u.dom.act(x0, h) == x)
                .count();
            if found != 1 {
                continue 'cand;
            }
        }
        return Some(UniversalArrow {
            ext: x0.obj,
            generic: x0.idx,
            proj: g0,
        });
    }
    None
}

/// Functorial action of the right adjoint on a total-category arrow of
/// the codomain: for `f : b' → b` and `y` over `b`, the unique base arrow
/// `{y·f} → {y}` compatible with projections and generic elements.
pub fn adjoint_on_arrow(
    u: &DFibMap,
    w: &RightAdjointWitness,
    f: ArrId,
    y: Elem,
) -> ArrId {
    let base = &u.dom.base;
    let uy = w.universal(y);
    let yf = u.cod.act(y, f);
    let uyf = w.universal(yf);
    let want_src = Elem {
        obj: uyf.ext,
        idx: uyf.generic,
    };
    for h in base.hom(uyf.ext, uy.ext) {
        if base.comp(uy.proj, h) == base.comp(f, uyf.proj)
            && u.dom.act(
                Elem {
                    obj: uy.ext,
                    idx: uy.generic,
                },
                h,
            ) == want_src
        {
            return h;
        }
    }
    unreachable!("universality provides the mediating arrow");
}

/// Context extension data for an element `y` under a representable map:
/// `({y}, π_y, q_y)` with the defining pullback verified fiberwise.
pub fn context_extension(
    _u: &DFibMap,
    w: &RightAdjointWitness,
    y: Elem,
) -> (ObjId, ArrId, Elem) {
    let ua = w.universal(y);
    (
        ua.ext,
        ua.proj,
        Elem {
            obj: ua.ext,
            idx: ua.generic,
        },
    )
}

/// Check that `(B/{y} → D, π_y, y)` is a pullback of `u` along `y`:
/// over every object `a`, `Hom(a, {y}) ≅ {(g : a → obj(y), x ∈ D(a)) :
/// u(x) = y · g}` via `h ↦ (π_y ∘ h, q_y · h)`.
pub fn extension_is_pullback(u: &DFibMap, w: &RightAdjointWitness, y: Elem) -> bool {
    let base = &u.dom.base;
    let (ext, proj, q) = context_extension(u, w, y);
    for a in base.objects() {
        let mut images = Vec::new();
        for h in base.hom(a, ext) {
            let pair = (base.comp(proj, h), u.dom.act(q, h));
            if images.contains(&pair) {
                return false; // not injective
            }
            images.push(pair);
        }
        let mut expected = 0;
        for g in base.hom(a, y.obj) {
            for xidx in 0..u.dom.fiber_size(a) {
                let x = Elem { obj: a, idx: xidx };
                if u.apply(x) == u.cod.act(y, g) {
                    expected += 1;
                    if !images.contains(&(g, x)) {
                        return false; // not surjective
                    }
                }
            }
        }
        if images.len() != expected {
            return false;
        }
    }
    true
}

// ----------------------------------------------------------------------
// Pushforward and polynomial functors
// ----------------------------------------------------------------------

/// Pushforward of `z : Z → X` along a representable `u : X → Y`,
/// computed as base change along the right adjoint: the fiber over `b`
/// consists of pairs `(y ∈ Y(b), w ∈ Z({y}) with z(w) = q_y)`.
pub fn pushforward(
    u: &DFibMap,
    w: &RightAdjointWitness,
    z: &DFibMap,
) -> Result<(Arc<DFib>, DFibMap), DFibError> {
    let base = &u.dom.base;
    let y_fib = &u.cod;
    let z_fib = &z.dom;
    // enumerate fibers
    let mut fibers: Vec<Vec<String>> = Vec::new();
    let mut index: Vec<Vec<(usize, usize)>> = Vec::new(); // (y idx, w Elem idx in Z({y}))
    for b in base.objects() {
        let mut names = Vec::new();
        let mut idxs = Vec::new();
        for yidx in 0..y_fib.fiber_size(b) {
            let y = Elem { obj: b, idx: yidx };
            let (ext, _, q) = context_extension(u, w, y);
            for widx in 0..z_fib.fiber_size(ext) {
                let we = Elem {
                    obj: ext,
                    idx: widx,
                };
                if z.apply(we) == q {
                    names.push(format!(
                        "<{},{}>",
                        y_fib.elem_name(y),
                        z_fib.elem_name(we)
                    ));
                    idxs.push((yidx, widx));
                }
            }
        }
        fibers.push(names);
        index.push(idxs);
    }
    // restrictions: (y, w) · f = (y·f, w · G(f̄))
    let mut restrict: Vec<Vec<usize>> = Vec::new();
    for f in base.arrows() {
        let (a, b) = (base.src(f), base.tgt(f));
        let mut row = Vec::new();
        for &(yidx, widx) in &index[b] {
            let y = Elem { obj: b, idx: yidx };
            let (ext, _, _) = context_extension(u, w, y);
            let h = adjoint_on_arrow(u, w, f, y);
            let yf = y_fib.act(y, f);
            let wf = z_fib.act(
                Elem {
                    obj: ext,
                    idx: widx,
                },
                h,
            );
            let pos = index[a]
                .iter()
                .position(|&(yi, wi)| yi == yf.idx && wi == wf.idx)
                .expect("restriction lands in the pushforward fiber");
            row.push(pos);
        }
        restrict.push(row);
    }
    let push = Arc::new(DFib {
        name: format!("{}_*[{}]", u.name, z_fib.name),
        base: base.clone(),
        fibers,
        restrict,
    });
    push.validate()?;
    let maps: Vec<Vec<usize>> = base
        .objects()
        .map(|b| index[b].iter().map(|&(yidx, _)| yidx).collect())
        .collect();
    let to_y = DFibMap::new(
        &format!("pr[{}]", push.name),
        push.clone(),
        y_fib.clone(),
        Functor::identity(base.clone()),
        maps,
    )?;
    Ok((push, to_y))
}

/// |Hom_{/X}(u*W, Z)| = |Hom_{/Y}(W, u_*Z)| by exhaustive enumeration.
pub fn pushforward_ump_holds(
    u: &DFibMap,
    w: &RightAdjointWitness,
    z: &DFibMap,
    w_to_y: &DFibMap,
) -> bool {
    let (push, push_to_y) = pushforward(u, w, z).unwrap();
    // u*W: pullback of W → Y along u
    let (uw, _uw_to_w, uw_to_x) = fiber_product(w_to_y, u);
    // slice homs over X: maps u*W → Z with z ∘ m = uw_to_x
    let lhs = DFibMap::enumerate_over(&uw, &z.dom, None)
        .into_iter()
        .filter(|m| m.then(z).same_maps(&uw_to_x))
        .count();
    // slice homs over Y: maps W → u_*Z with projection commuting
    let rhs = DFibMap::enumerate_over(&w_to_y.dom, &push, None)
        .into_iter()
        .filter(|m| m.then(&push_to_y).same_maps(w_to_y))
        .count();
    lhs == rhs
}

/// Fiber product of `m : W → T ← Z : n` over the identity base functor,
/// with its two projections.
pub fn fiber_product(m: &DFibMap, n: &DFibMap) -> (Arc<DFib>, DFibMap, DFibMap) {
    let base = &m.dom.base;
    let mut fibers = Vec::new();
    let mut index: Vec<Vec<(usize, usize)>> = Vec::new();
    for b in base.objects() {
        let mut names = Vec::new();
        let mut idxs = Vec::new();
        for i in 0..m.dom.fiber_size(b) {
            for j in 0..n.dom.fiber_size(b) {
                if m.apply(Elem { obj: b, idx: i }) == n.apply(Elem { obj: b, idx: j }) {
                    names.push(format!(
                        "({},{})",
                        m.dom.elem_name(Elem { obj: b, idx: i }),
                        n.dom.elem_name(Elem { obj: b, idx: j })
                    ));
                    idxs.push((i, j));
                }
            }
        }
        fibers.push(names);
        index.push(idxs);
    }
    let restrict: Vec<Vec<usize>> = base
        .arrows()
        .map(|f| {
            let (a, b) = (base.src(f), base.tgt(f));
            index[b]
                .iter()
                .map(|&(i, j)| {
                    let i2 = m.dom.act(Elem { obj: b, idx: i }, f).idx;
                    let j2 = n.dom.act(Elem { obj: b, idx: j }, f).idx;
                    index[a]
                        .iter()
                        .position(|&(x, y)| x == i2 && y == j2)
                        .expect("restriction closed")
                })
                .collect()
        })
        .collect();
    let prod = Arc::new(DFib {
        name: format!("({}x{})", m.dom.name, n.dom.name),
        base: base.clone(),
        fibers,
        restrict,
    });
    let proj = |which: usize, target: &Arc<DFib>| -> DFibMap {
        let maps: Vec<Vec<usize>> = base
            .objects()
            .map(|b| {
                index[b]
                    .iter()
                    .map(|&(i, j)| if which == 0 { i } else { j })
                    .collect()
            })
            .collect();
        DFibMap {
            name: format!("pr{}[{}]", which + 1, prod.name),
            dom: prod.clone(),
            cod: target.clone(),
            over: Functor::identity(base.clone()),
            maps,
        }
    };
    let p1 = proj(0, &m.dom);
    let p2 = proj(1, &n.dom);
    (prod, p1, p2)
}

/// The polynomial functor `P_u(A) = Y_! u_* X^* A` for a representable
/// `u : X → Y`. Elements over `b` are pairs `(y ∈ Y(b), a ∈ A({y}))`.
pub fn polynomial(
    u: &DFibMap,
    w: &RightAdjointWitness,
    a: &Arc<DFib>,
) -> Result<Arc<DFib>, DFibError> {
    // X^*A = A ×_B X with its projection to X
    let one = Arc::new(DFib::terminal(u.dom.base.clone()));
    let a_to_one = DFibMap::to_terminal(a.clone(), one.clone());
    let x_to_one = DFibMap::to_terminal(u.dom.clone(), one.clone());
    let (_xa, _p_a, p_x) = fiber_product(&a_to_one, &x_to_one);
    let (push, _to_y) = pushforward(u, w, &p_x)?;
    Ok(push)
}

// ----------------------------------------------------------------------
// Squares, mates, Beck-Chevalley
// ----------------------------------------------------------------------

/// A commuting square of maps of discrete fibrations with designated
/// vertical maps (the verticals are over identity base functors; the
/// horizontals may live over a base functor F).
#[derive(Debug, Clone)]
pub struct Square {
    pub top: DFibMap,    // D' → D over F
    pub bottom: DFibMap, // E' → E over F
    pub left: DFibMap,   // u' : D' → E' over id
    pub right: DFibMap,  // u : D → E over id
}

impl Square {
    pub fn commutes(&self) -> bool {
        let lhs = self.top.then(&self.right);
        let rhs = self.left.then(&self.bottom);
        lhs.same_maps(&rhs)
    }
}

/// One component of the canonical mate `top ∘ G' ⇒ G ∘ bottom` per
/// element `y'` of the source codomain: a base arrow
/// `F({y'}^{u'}) → {bottom(y')}^{u}`.
#[derive(Debug, Clone)]
pub struct MateComponent {
    pub at: Elem,
    pub arrow: ArrId,
}

/// Build the canonical mate from the units/counits of the two adjoints.
/// In the discrete setting each component is the unique universal
/// factorization.
pub fn canonical_mate(
    sq: &Square,
    w_left: &RightAdjointWitness,
    w_right: &RightAdjointWitness,
) -> Result<Vec<MateComponent>, DFibError> {
    if !sq.commutes() {
        return Err(DFibError::Mismatch("square does not commute".into()));
    }
    let f = &sq.top.over;
    let base = &sq.right.dom.base; // B
    let mut out = Vec::new();
    for yp in sq.left.cod.elements() {
        let (ext_l, proj_l, q_l) = context_extension(&sq.left, w_left, yp);
        let y = sq.bottom.apply(yp);
        let (ext_r, proj_r, q_r) = context_extension(&sq.right, w_right, y);
        let want_elem = sq.top.apply(q_l);
        let src = f.on_obj(ext_l);
        let mut found = None;
        for h in base.hom(src, ext_r) {
            let cond_proj = base.comp(proj_r, h) == f.on_arr(proj_l);
            let cond_elem = sq.right.dom.act(
                Elem {
                    obj: ext_r,
                    idx: q_r.idx,
                },
                h,
            ) == want_elem;
            if cond_proj && cond_elem {
                found = Some(h);
                break;
            }
        }
        match found {
            Some(h) => out.push(MateComponent { at: yp, arrow: h }),
            None => {
                return Err(DFibError::Mismatch(format!(
                    "no mate component at {}",
                    sq.left.cod.elem_name(yp)
                )))
            }
        }
    }
    Ok(out)
}

/// The Beck-Chevalley condition: the canonical mate is an isomorphism
/// componentwise.
pub fn beck_chevalley(
    sq: &Square,
    w_left: &RightAdjointWitness,
    w_right: &RightAdjointWitness,
) -> Result<bool, DFibError> {
    let base = &sq.right.dom.base;
    let mate = canonical_mate(sq, w_left, w_right)?;
    Ok(mate.iter().all(|c| base.is_iso(c.arrow)))
}

/// Independent pullback check for a same-base square: fiberwise, the map
/// `D'(b) → {(x, y') : u(x) = bottom(y')}` is a bijection.
pub fn square_is_pullback(sq: &Square) -> bool {
    let base = &sq.left.dom.base;
    for b in base.objects() {
        let mut images = Vec::new();
        for i in 0..sq.left.dom.fiber_size(b) {
            let e = Elem { obj: b, idx: i };
            let pair = (sq.top.apply(e), sq.left.apply(e));
            if images.contains(&pair) {
                return false;
            }
            images.push(pair);
        }
        let mut count = 0;
        for x in 0..sq.right.dom.fiber_size(b) {
            for yp in 0..sq.bottom.dom.fiber_size(b) {
                let xe = Elem { obj: b, idx: x };
                let ye = Elem { obj: b, idx: yp };
                if sq.right.apply(xe) == sq.bottom.apply(ye) {
                    count += 1;
                    if !images.contains(&(xe, ye)) {
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

/// Compute both sides of the pullback ⇔ Beck-Chevalley equivalence
/// independently and report agreement.
pub fn pullback_iff_bc(
    sq: &Square,
    w_left: &RightAdjointWitness,
    w_right: &RightAdjointWitness,
) -> Result<(bool, bool, bool), DFibError> {
    let pb = square_is_pullback(sq);
    let bc = beck_chevalley(sq, w_left, w_right)?;
    Ok((pb, bc, pb == bc))
}

#[cfg(test)]
pub(crate) mod tests;
