//! Finite categories given by explicit composition tables, functors and
//! natural transformations between them, terminal objects, finite limits
//! by cone enumeration, and slice categories. All laws are verified
//! exhaustively on load.

mod parse;

pub use parse::parse_fincat;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub type ObjId = usize;
pub type ArrId = usize;

#[derive(Debug, Clone, Error)]
pub enum CatError {
    #[error("unknown object '{0}'")]
    UnknownObject(String),
    #[error("unknown arrow '{0}'")]
    UnknownArrow(String),
    #[error("duplicate name '{0}'")]
    DuplicateName(String),
    #[error("arrows '{0}' and '{1}' are composable but no composite is declared")]
    MissingComposite(String, String),
    #[error("composite of '{0}' then '{1}' has wrong endpoints")]
    BadEndpoints(String, String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NonAssociative(String, String, String),
    #[error("identity law fails at '{0}'")]
    IdentityLaw(String),
    #[error("functor does not preserve structure at ({0}, {1})")]
    NotFunctorial(String, String),
    #[error("naturality square fails at '{0}'")]
    NotNatural(String),
    #[error("enumeration overflow: {0}")]
    Overflow(String),
    #[error("parse error at line {0}: {1}")]
    Parse(usize, String),
}

#[derive(Debug, Clone)]
struct ArrowData {
    name: String,
    src: ObjId,
    tgt: ObjId,
}

/// A finite category. Object and arrow identity is by declared name;
/// the composition table is total on composable pairs and validated
/// associative with neutral identities.
#[derive(Debug, Clone)]
pub struct FinCat {
    pub name: String,
    objects: Vec<String>,
    arrows: Vec<ArrowData>,
    identity: Vec<ArrId>,
    compose: HashMap<(ArrId, ArrId), ArrId>, // (after g, first f) -> g∘f
}

impl FinCat {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjId> {
        0..self.objects.len()
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrId> {
        0..self.arrows.len()
    }

    pub fn object_name(&self, o: ObjId) -> &str {
        &self.objects[o]
    }

    pub fn arrow_name(&self, f: ArrId) -> &str {
        &self.arrows[f].name
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_id(&self, name: &str) -> Option<ArrId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn src(&self, f: ArrId) -> ObjId {
        self.arrows[f].src
    }

    pub fn tgt(&self, f: ArrId) -> ObjId {
        self.arrows[f].tgt
    }

    pub fn identity(&self, o: ObjId) -> ArrId {
        self.identity[o]
    }

    pub fn is_identity(&self, f: ArrId) -> bool {
        self.identity[self.src(f)] == f
    }

    /// `g ∘ f` (f first). Panics if not composable; validation guarantees
    /// totality on composable pairs.
    pub fn comp(&self, g: ArrId, f: ArrId) -> ArrId {
        assert_eq!(self.tgt(f), self.src(g), "arrows not composable");
        self.compose[&(g, f)]
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> Vec<ArrId> {
        self.arrows()
            .filter(|&f| self.src(f) == a && self.tgt(f) == b)
            .collect()
    }

    /// Two arrows are inverse to each other.
    pub fn is_iso(&self, f: ArrId) -> bool {
        let (a, b) = (self.src(f), self.tgt(f));
        self.hom(b, a).iter().any(|&g| {
            self.comp(g, f) == self.identity(a) && self.comp(f, g) == self.identity(b)
        })
    }

    pub fn isomorphic_objects(&self, a: ObjId, b: ObjId) -> bool {
        self.hom(a, b).iter().any(|&f| self.is_iso(f))
    }

    /// The object with exactly one arrow from every object, if any;
    /// deterministic tie-break by object-list order.
    pub fn terminal_object(&self) -> Option<ObjId> {
        self.objects()
            .find(|&t| self.objects().all(|a| self.hom(a, t).len() == 1))
    }

    /// Unique arrow `a → t` when `t` is terminal.
    pub fn arrow_to_terminal(&self, a: ObjId, t: ObjId) -> Option<ArrId> {
        let hom = self.hom(a, t);
        if hom.len() == 1 {
            Some(hom[0])
        } else {
            None
        }
    }

    fn validate(&self) -> Result<(), CatError> {
        // distinct names
        for (i, o) in self.objects.iter().enumerate() {
            if self.objects[..i].contains(o) {
                return Err(CatError::DuplicateName(o.clone()));
            }
        }
        for (i, a) in self.arrows.iter().enumerate() {
            if self.arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(CatError::DuplicateName(a.name.clone()));
            }
        }
        // identities are endo-arrows
        for o in self.objects() {
            let id = self.identity[o];
            if self.src(id) != o || self.tgt(id) != o {
                return Err(CatError::IdentityLaw(self.objects[o].clone()));
            }
        }
        // totality and endpoints
        for g in self.arrows() {
            for f in self.arrows() {
                if self.tgt(f) == self.src(g) {
                    match self.compose.get(&(g, f)) {
                        None => {
                            return Err(CatError::MissingComposite(
                                self.arrows[f].name.clone(),
                                self.arrows[g].name.clone(),
                            ))
                        }
                        Some(&h) => {
                            if self.src(h) != self.src(f) || self.tgt(h) != self.tgt(g) {
                                return Err(CatError::BadEndpoints(
                                    self.arrows[f].name.clone(),
                                    self.arrows[g].name.clone(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        // identity laws
        for f in self.arrows() {
            if self.comp(f, self.identity(self.src(f))) != f
                || self.comp(self.identity(self.tgt(f)), f) != f
            {
                return Err(CatError::IdentityLaw(self.arrows[f].name.clone()));
            }
        }
        // associativity
        for f in self.arrows() {
            for g in self.arrows() {
                if self.tgt(f) != self.src(g) {
                    continue;
                }
                for h in self.arrows() {
                    if self.tgt(g) != self.src(h) {
                        continue;
                    }
                    if self.comp(h, self.comp(g, f)) != self.comp(self.comp(h, g), f) {
                        return Err(CatError::NonAssociative(
                            self.arrows[f].name.clone(),
                            self.arrows[g].name.clone(),
                            self.arrows[h].name.clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    // ------------------------------------------------------------------
    // Stock categories
    // ------------------------------------------------------------------

    pub fn terminal_category() -> FinCat {
        let mut b = FinCatBuilder::new("1");
        b.object("*");
        b.finish().unwrap()
    }

    pub fn walking_arrow() -> FinCat {
        let mut b = FinCatBuilder::new("2");
        b.object("0");
        b.object("1");
        b.arrow("a", "0", "1");
        b.finish().unwrap()
    }

    /// A finite poset as a category: one arrow `x<=y` per related pair.
    /// `leq` must contain the reflexive pairs or they are added.
    pub fn poset(name: &str, objects: &[&str], leq: &[(&str, &str)]) -> Result<FinCat, CatError> {
        let mut b = FinCatBuilder::new(name);
        for o in objects {
            b.object(o);
        }
        let mut rel: Vec<(String, String)> = Vec::new();
        for (x, y) in leq {
            if x != y && !rel.contains(&(x.to_string(), y.to_string())) {
                rel.push((x.to_string(), y.to_string()));
            }
        }
        // transitive closure
        loop {
            let mut grew = false;
            let snapshot = rel.clone();
            for (x, y) in &snapshot {
                for (y2, z) in &snapshot {
                    if y == y2 && x != z && !rel.contains(&(x.clone(), z.clone())) {
                        rel.push((x.clone(), z.clone()));
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        for (x, y) in &rel {
            b.arrow(&format!("{x}<={y}"), x, y);
        }
        // compositions are determined: unique arrow per hom-set
        b.complete_poset_compositions();
        b.finish()
    }

    /// The free category on a finite acyclic quiver: arrows are paths,
    /// composition is concatenation.
    pub fn free_on_quiver(
        name: &str,
        objects: &[String],
        edges: &[(String, usize, usize)],
    ) -> Result<FinCat, CatError> {
        // Enumerate all paths by breadth-first extension; acyclicity of
        // the edge set guarantees termination.
        #[derive(Clone, PartialEq)]
        struct Path {
            src: usize,
            tgt: usize,
            edges: Vec<usize>,
        }
        let mut paths: Vec<Path> = Vec::new();
        for (i, _) in objects.iter().enumerate() {
            paths.push(Path {
                src: i,
                tgt: i,
                edges: vec![],
            });
        }
        let mut frontier: Vec<Path> = paths.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in &frontier {
                for (ei, e) in edges.iter().enumerate() {
                    if e.1 == p.tgt {
                        let mut q = p.clone();
                        q.edges.push(ei);
                        q.tgt = e.2;
                        next.push(q);
                    }
                }
            }
            if paths.len() + next.len() > 100_000 {
                return Err(CatError::Overflow(
                    "free category has too many paths (cyclic quiver?)".into(),
                ));
            }
            paths.extend(next.iter().cloned());
            frontier = next;
        }
        let path_name = |p: &Path| -> String {
            if p.edges.is_empty() {
                format!("id_{}", objects[p.src])
            } else {
                p.edges
                    .iter()
                    .rev()
                    .map(|&e| edges[e].0.clone())
                    .collect::<Vec<_>>()
                    .join(".")
            }
        };
        let mut b = FinCatBuilder::new(name);
        for o in objects {
            b.object(o);
        }
        for p in paths.iter().filter(|p| !p.edges.is_empty()) {
            b.arrow(&path_name(p), &objects[p.src], &objects[p.tgt]);
        }
        for f in &paths {
            for g in &paths {
                if f.tgt == g.src && !(f.edges.is_empty() && g.edges.is_empty()) {
                    let mut comp = f.clone();
                    comp.edges.extend(g.edges.iter().cloned());
                    comp.tgt = g.tgt;
                    b.compose(&path_name(g), &path_name(f), &path_name(&comp));
                }
            }
        }
        b.finish()
    }

    // ------------------------------------------------------------------
    // Limits
    // ------------------------------------------------------------------

    /// All cones over a diagram, capped.
    fn cones(&self, diagram: &Functor, cap: usize) -> Result<Vec<Cone>, CatError> {
        let shape = &diagram.dom;
        let mut out = Vec::new();
        for apex in self.objects() {
            let mut legs_per_obj: Vec<Vec<ArrId>> = Vec::new();
            for j in shape.objects() {
                legs_per_obj.push(self.hom(apex, diagram.on_obj(j)));
            }
            let mut tuples: Vec<Vec<ArrId>> = vec![vec![]];
            for legs in &legs_per_obj {
                let mut next = Vec::new();
                for t in &tuples {
                    for &l in legs {
                        let mut t2 = t.clone();
                        t2.push(l);
                        next.push(t2);
                    }
                }
                tuples = next;
                if tuples.len() > cap {
                    return Err(CatError::Overflow(format!(
                        "cone enumeration exceeded {cap} candidates"
                    )));
                }
            }
            'tuple: for t in tuples {
                for m in shape.arrows() {
                    let (j, j2) = (shape.src(m), shape.tgt(m));
                    if self.comp(diagram.on_arr(m), t[j]) != t[j2] {
                        continue 'tuple;
                    }
                }
                out.push(Cone {
                    apex,
                    legs: t.clone(),
                });
                if out.len() > cap {
                    return Err(CatError::Overflow(format!(
                        "more than {cap} cones over the diagram"
                    )));
                }
            }
        }
        Ok(out)
    }

    /// Terminal cone over a finite diagram: every cone factors through it
    /// uniquely. `None` when the limit does not exist.
    pub fn finite_limit(&self, diagram: &Functor) -> Result<Option<Cone>, CatError> {
        let cones = self.cones(diagram, 1_000_000)?;
        'candidate: for c in &cones {
            for k in &cones {
                let mut mediators = 0;
                for h in self.hom(k.apex, c.apex) {
                    if c.legs
                        .iter()
                        .zip(&k.legs)
                        .all(|(&cl, &kl)| self.comp(cl, h) == kl)
                    {
                        mediators += 1;
                    }
                }
                if mediators != 1 {
                    continue 'candidate;
                }
            }
            return Ok(Some(c.clone()));
        }
        Ok(None)
    }

    /// Binary product as a limit over the discrete two-object shape.
    /// Returns (apex, proj_a, proj_b).
    pub fn product(&self, a: ObjId, b: ObjId) -> Result<Option<(ObjId, ArrId, ArrId)>, CatError> {
        let shape = discrete2();
        let diagram = Functor::new(
            "prod-diagram",
            Arc::new(shape),
            Arc::new(self.clone()),
            vec![a, b],
            vec![],
        )?;
        Ok(self
            .finite_limit(&diagram)?
            .map(|c| (c.apex, c.legs[0], c.legs[1])))
    }

    /// Pullback of the cospan `f : A → C ← B : g`.
    /// Returns (apex, proj_to_A, proj_to_B).
    pub fn pullback(&self, f: ArrId, g: ArrId) -> Result<Option<(ObjId, ArrId, ArrId)>, CatError> {
        assert_eq!(self.tgt(f), self.tgt(g));
        let shape = walking_cospan();
        let diagram = Functor::new(
            "pb-diagram",
            Arc::new(shape),
            Arc::new(self.clone()),
            vec![self.src(f), self.src(g), self.tgt(f)],
            vec![f, g],
        )?;
        Ok(self
            .finite_limit(&diagram)?
            .map(|c| (c.apex, c.legs[0], c.legs[1])))
    }

    /// Slice category over `x`, with the domain projection functor.
    pub fn slice(self: &Arc<FinCat>, x: ObjId) -> (Arc<FinCat>, Functor) {
        let into_x: Vec<ArrId> = self
            .arrows()
            .filter(|&f| self.tgt(f) == x)
            .collect();
        let mut b = FinCatBuilder::new(&format!("{}/{}", self.name, self.objects[x]));
        for &f in &into_x {
            b.object(&self.arrows[f].name);
        }
        // arrows (f : a→x) → (g : b→x) are h : a→b with g∘h = f
        let mut arr_map: Vec<ArrId> = Vec::new(); // slice arrow -> underlying
        for (i, &f) in into_x.iter().enumerate() {
            for (j, &g) in into_x.iter().enumerate() {
                for h in self.hom(self.src(f), self.src(g)) {
                    if self.comp(g, h) == f {
                        if self.is_identity(h) && i == j {
                            continue; // identity of the slice object, implicit
                        }
                        b.arrow(
                            &format!("{}[{}=>{}]", self.arrows[h].name, i, j),
                            &self.arrows[f].name,
                            &self.arrows[g].name,
                        );
                        arr_map.push(h);
                    }
                }
            }
        }
        // compositions inherited from the base category
        let names: Vec<(String, ArrId, usize, usize)> = {
            let mut v = Vec::new();
            let mut k = 0;
            for (i, &f) in into_x.iter().enumerate() {
                for (j, &g) in into_x.iter().enumerate() {
                    for h in self.hom(self.src(f), self.src(g)) {
                        if self.comp(g, h) == f {
                            if self.is_identity(h) && i == j {
                                continue;
                            }
                            v.push((
                                format!("{}[{}=>{}]", self.arrows[h].name, i, j),
                                h,
                                i,
                                j,
                            ));
                            k += 1;
                        }
                    }
                }
            }
            let _ = k;
            v
        };
        for (fname, fh, fi, fj) in &names {
            for (gname, gh, gi, gj) in &names {
                if fj == gi {
                    let comp = self.comp(*gh, *fh);
                    let comp_name = if self.is_identity(comp) && fi == gj {
                        format!("id_{}", self.arrows[into_x[*fi]].name)
                    } else {
                        format!("{}[{}=>{}]", self.arrows[comp].name, fi, gj)
                    };
                    b.compose(gname, fname, &comp_name);
                }
            }
        }
        let slice = Arc::new(b.finish().expect("slice category is valid"));
        let obj_map: Vec<ObjId> = into_x.iter().map(|&f| self.src(f)).collect();
        let functor = Functor {
            name: format!("dom[{}]", slice.name),
            dom: slice.clone(),
            cod: self.clone(),
            obj_map,
            arr_map: {
                // identities map to identities; declared arrows in order
                let mut m = vec![0; slice.arrow_count()];
                for o in slice.objects() {
                    m[slice.identity(o)] = self.identity(self.src(into_x[o]));
                }
                let mut k = 0;
                for f in slice.arrows() {
                    if !slice.is_identity(f) {
                        m[f] = arr_map[k];
                        k += 1;
                    }
                }
                m
            },
        };
        functor.validate().expect("slice projection is a functor");
        (slice, functor)
    }
}

impl fmt::Display for FinCat {
    /// Serializes in the `.fincat` format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "objects: {}", self.objects.join(", "))?;
        for a in self.arrows() {
            if !self.is_identity(a) {
                writeln!(
                    f,
                    "arrow {} : {} -> {}",
                    self.arrow_name(a),
                    self.object_name(self.src(a)),
                    self.object_name(self.tgt(a))
                )?;
            }
        }
        for g in self.arrows() {
            for fa in self.arrows() {
                if self.tgt(fa) == self.src(g) && !self.is_identity(g) && !self.is_identity(fa) {
                    writeln!(
                        f,
                        "compose {} . {} = {}",
                        self.arrow_name(g),
                        self.arrow_name(fa),
                        self.arrow_name(self.comp(g, fa))
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// A cone over a diagram: apex plus one leg per shape object.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<ArrId>,
}

pub(crate) fn discrete2() -> FinCat {
    let mut b = FinCatBuilder::new("discrete2");
    b.object("j0");
    b.object("j1");
    b.finish().unwrap()
}

pub(crate) fn walking_cospan() -> FinCat {
    let mut b = FinCatBuilder::new("cospan");
    b.object("l");
    b.object("r");
    b.object("m");
    b.arrow("lm", "l", "m");
    b.arrow("rm", "r", "m");
    b.finish().unwrap()
}

/// Incremental construction of a `FinCat`; identities are implicit.
pub struct FinCatBuilder {
    name: String,
    objects: Vec<String>,
    arrows: Vec<(String, String, String)>,
    compositions: Vec<(String, String, String)>, // (g, f, g∘f)
}

impl FinCatBuilder {
    pub fn new(name: &str) -> Self {
        FinCatBuilder {
            name: name.to_string(),
            objects: Vec::new(),
            arrows: Vec::new(),
            compositions: Vec::new(),
        }
    }

    pub fn object(&mut self, name: &str) -> &mut Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(&mut self, name: &str, src: &str, tgt: &str) -> &mut Self {
        self.arrows
            .push((name.to_string(), src.to_string(), tgt.to_string()));
        self
    }

    pub fn compose(&mut self, g: &str, f: &str, h: &str) -> &mut Self {
        self.compositions
            .push((g.to_string(), f.to_string(), h.to_string()));
        self
    }

    /// For posets: every composable pair composes to the unique arrow of
    /// its hom-set.
    pub fn complete_poset_compositions(&mut self) {
        let arrows = self.arrows.clone();
        for (f, fs, ft) in &arrows {
            for (g, gs, gt) in &arrows {
                if ft == gs {
                    let h = arrows
                        .iter()
                        .find(|(_, hs, ht)| hs == fs && ht == gt)
                        .map(|(h, _, _)| h.clone())
                        .unwrap_or_else(|| panic!("poset closure missing {fs} -> {gt}"));
                    self.compositions.push((g.clone(), f.clone(), h));
                }
            }
        }
    }

    pub fn finish(&self) -> Result<FinCat, CatError> {
        let mut objects = Vec::new();
        for o in &self.objects {
            objects.push(o.clone());
        }
        let obj_id = |name: &str| -> Result<ObjId, CatError> {
            objects
                .iter()
                .position(|o| o == name)
                .ok_or_else(|| CatError::UnknownObject(name.to_string()))
        };
        let mut arrows: Vec<ArrowData> = Vec::new();
        let mut identity = Vec::new();
        for (i, o) in objects.iter().enumerate() {
            identity.push(arrows.len());
            arrows.push(ArrowData {
                name: format!("id_{o}"),
                src: i,
                tgt: i,
            });
        }
        for (name, src, tgt) in &self.arrows {
            arrows.push(ArrowData {
                name: name.clone(),
                src: obj_id(src)?,
                tgt: obj_id(tgt)?,
            });
        }
        let arr_id = |name: &str| -> Result<ArrId, CatError> {
            arrows
                .iter()
                .position(|a| a.name == name)
                .ok_or_else(|| CatError::UnknownArrow(name.to_string()))
        };
        let mut compose = HashMap::new();
        // identity compositions are implicit
        for (i, a) in arrows.iter().enumerate() {
            compose.insert((i, identity[a.src]), i);
            compose.insert((identity[a.tgt], i), i);
        }
        for (g, f, h) in &self.compositions {
            let (g, f, h) = (arr_id(g)?, arr_id(f)?, arr_id(h)?);
            compose.insert((g, f), h);
        }
        let cat = FinCat {
            name: self.name.clone(),
            objects,
            arrows,
            identity,
            compose,
        };
        cat.validate()?;
        Ok(cat)
    }
}

/// A functor between finite categories: object map and arrow map,
/// validated to preserve endpoints, identities and composition.
#[derive(Debug, Clone)]
pub struct Functor {
    pub name: String,
    pub dom: Arc<FinCat>,
    pub cod: Arc<FinCat>,
    obj_map: Vec<ObjId>,
    arr_map: Vec<ArrId>,
}

impl Functor {
    /// Build from the object map and the map of non-identity arrows (in
    /// the order produced by `dom.arrows()` skipping identities);
    /// identities map to identities.
    pub fn new(
        name: &str,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        nonid_arr_map: Vec<ArrId>,
    ) -> Result<Functor, CatError> {
        let mut arr_map = vec![0; dom.arrow_count()];
        let mut k = 0;
        for f in dom.arrows() {
            if dom.is_identity(f) {
                arr_map[f] = cod.identity(obj_map[dom.src(f)]);
            } else {
                arr_map[f] = *nonid_arr_map
                    .get(k)
                    .ok_or_else(|| CatError::UnknownArrow(format!("arrow map too short: {name}")))?;
                k += 1;
            }
        }
        let f = Functor {
            name: name.to_string(),
            dom,
            cod,
            obj_map,
            arr_map,
        };
        f.validate()?;
        Ok(f)
    }

    /// Identity-on-objects-and-arrows functor.
    pub fn identity(cat: Arc<FinCat>) -> Functor {
        Functor {
            name: format!("id[{}]", cat.name),
            dom: cat.clone(),
            cod: cat.clone(),
            obj_map: cat.objects().collect(),
            arr_map: cat.arrows().collect(),
        }
    }

    /// Constant functor at an object.
    pub fn constant(dom: Arc<FinCat>, cod: Arc<FinCat>, at: ObjId) -> Functor {
        Functor {
            name: format!("const[{}]", cod.object_name(at)),
            dom: dom.clone(),
            cod: cod.clone(),
            obj_map: dom.objects().map(|_| at).collect(),
            arr_map: dom.arrows().map(|_| cod.identity(at)).collect(),
        }
    }

    pub fn from_maps(
        name: &str,
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrId>,
    ) -> Result<Functor, CatError> {
        let f = Functor {
            name: name.to_string(),
            dom,
            cod,
            obj_map,
            arr_map,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn on_obj(&self, o: ObjId) -> ObjId {
        self.obj_map[o]
    }

    pub fn on_arr(&self, f: ArrId) -> ArrId {
        self.arr_map[f]
    }

    pub fn validate(&self) -> Result<(), CatError> {
        if self.obj_map.len() != self.dom.object_count()
            || self.arr_map.len() != self.dom.arrow_count()
        {
            return Err(CatError::NotFunctorial(self.name.clone(), "size".into()));
        }
        for f in self.dom.arrows() {
            let img = self.arr_map[f];
            if self.cod.src(img) != self.obj_map[self.dom.src(f)]
                || self.cod.tgt(img) != self.obj_map[self.dom.tgt(f)]
            {
                return Err(CatError::NotFunctorial(
                    self.name.clone(),
                    self.dom.arrow_name(f).to_string(),
                ));
            }
        }
        for o in self.dom.objects() {
            if self.arr_map[self.dom.identity(o)] != self.cod.identity(self.obj_map[o]) {
                return Err(CatError::NotFunctorial(
                    self.name.clone(),
                    format!("id_{}", self.dom.object_name(o)),
                ));
            }
        }
        for f in self.dom.arrows() {
            for g in self.dom.arrows() {
                if self.dom.tgt(f) == self.dom.src(g) {
                    let lhs = self.arr_map[self.dom.comp(g, f)];
                    let rhs = self.cod.comp(self.arr_map[g], self.arr_map[f]);
                    if lhs != rhs {
                        return Err(CatError::NotFunctorial(
                            self.dom.arrow_name(f).to_string(),
                            self.dom.arrow_name(g).to_string(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Composite `self` then `after`.
    pub fn then(&self, after: &Functor) -> Functor {
        Functor {
            name: format!("{};{}", self.name, after.name),
            dom: self.dom.clone(),
            cod: after.cod.clone(),
            obj_map: self.obj_map.iter().map(|&o| after.on_obj(o)).collect(),
            arr_map: self.arr_map.iter().map(|&f| after.on_arr(f)).collect(),
        }
    }

    pub fn same_maps(&self, other: &Functor) -> bool {
        self.obj_map == other.obj_map && self.arr_map == other.arr_map
    }
}

/// A natural transformation between parallel functors, one component
/// arrow per source object; naturality checked exhaustively.
#[derive(Debug, Clone)]
pub struct NatTrans {
    pub name: String,
    pub components: Vec<ArrId>,
}

impl NatTrans {
    pub fn new(
        name: &str,
        from: &Functor,
        to: &Functor,
        components: Vec<ArrId>,
    ) -> Result<NatTrans, CatError> {
        let n = NatTrans {
            name: name.to_string(),
            components,
        };
        n.validate(from, to)?;
        Ok(n)
    }

    pub fn validate(&self, from: &Functor, to: &Functor) -> Result<(), CatError> {
        let cod = &from.cod;
        if self.components.len() != from.dom.object_count() {
            return Err(CatError::NotNatural(self.name.clone()));
        }
        for o in from.dom.objects() {
            let c = self.components[o];
            if cod.src(c) != from.on_obj(o) || cod.tgt(c) != to.on_obj(o) {
                return Err(CatError::NotNatural(format!(
                    "{}: component at {}",
                    self.name,
                    from.dom.object_name(o)
                )));
            }
        }
        for f in from.dom.arrows() {
            let (a, b) = (from.dom.src(f), from.dom.tgt(f));
            let lhs = cod.comp(self.components[b], from.on_arr(f));
            let rhs = cod.comp(to.on_arr(f), self.components[a]);
            if lhs != rhs {
                return Err(CatError::NotNatural(format!(
                    "{}: square at {}",
                    self.name,
                    from.dom.arrow_name(f)
                )));
            }
        }
        Ok(())
    }

    /// All natural transformations between two parallel functors.
    pub fn enumerate(from: &Functor, to: &Functor) -> Vec<NatTrans> {
        let cod = &from.cod;
        let mut partial: Vec<Vec<ArrId>> = vec![vec![]];
        for o in from.dom.objects() {
            let candidates = cod.hom(from.on_obj(o), to.on_obj(o));
            let mut next = Vec::new();
            for p in &partial {
                for &c in &candidates {
                    let mut p2 = p.clone();
                    p2.push(c);
                    next.push(p2);
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .enumerate()
            .filter_map(|(i, components)| {
                NatTrans::new(&format!("nt{i}"), from, to, components).ok()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests;
