//! Seeded property suites over randomized finite instances. Each suite
//! is deterministic in its seed and returns one outcome per case, so
//! identical invocations produce identical reports.

use crate::dfib::{
    self, fiber_product, pushforward_ump_holds, right_adjoint, yoneda, yoneda_bijection,
    yoneda_map, DFib, DFibMap, RightAdjointWitness, Square,
};
use crate::fincat::{ArrId, FinCat, ObjId};
use crate::lf_checker::{
    check_signature, weaken_signature, CheckConfig, CheckedSignature, Checker, Classifier,
    Judgment,
};
use crate::lf_syntax::{PreContext, PreSignature, PreTerm};
use crate::model::{
    bi_initial_model, contextual_closure, enumerate_model_morphisms, heart,
    hom_category_contractible, internal_language, is_democratic,
};
use crate::stock;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Outcome of one suite run.
#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: String,
    pub seed: u64,
    pub size: usize,
    pub cases: usize,
    pub passed: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteOutcome {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

pub const SUITE_NAMES: [&str; 7] = [
    "dfib-laws",
    "yoneda",
    "pushforward-ump",
    "bc-pullback",
    "model-laws",
    "democratic",
    "contractibility",
];

/// Dispatch by suite name (`lf-substitution` needs the corpus and has
/// its own entry point).
pub fn run_suite(name: &str, seed: u64, size: usize, cases: usize) -> Option<SuiteOutcome> {
    match name {
        "dfib-laws" => Some(dfib_laws_suite(seed, size, cases)),
        "yoneda" => Some(yoneda_suite(seed, size, cases)),
        "pushforward-ump" => Some(pushforward_ump_suite(seed, size, cases)),
        "bc-pullback" => Some(bc_pullback_suite(seed, size, cases)),
        "model-laws" => Some(model_laws_suite(seed, size, cases)),
        "democratic" => Some(democratic_suite(seed, size, cases)),
        "contractibility" => Some(contractibility_suite(seed, size, cases)),
        _ => None,
    }
}

// ----------------------------------------------------------------------
// Instance generators
// ----------------------------------------------------------------------

/// Free category on a random acyclic quiver with at most `max_objects`
/// objects.
pub fn gen_free_base(rng: &mut ChaCha8Rng, max_objects: usize) -> Arc<FinCat> {
    let n = rng.gen_range(1..=max_objects.max(1));
    let objects: Vec<String> = (0..n).map(|i| format!("o{i}")).collect();
    let max_edges = (n + 2).min(6);
    let e = rng.gen_range(0..=max_edges);
    let mut edges = Vec::new();
    for k in 0..e {
        if n < 2 {
            break;
        }
        let src = rng.gen_range(0..n - 1);
        let tgt = rng.gen_range(src + 1..n);
        edges.push((format!("g{k}"), src, tgt));
    }
    Arc::new(FinCat::free_on_quiver("rnd", &objects, &edges).expect("acyclic quiver"))
}

/// Random presheaf over a free base: assign each generating edge an
/// arbitrary function and extend along paths.
pub fn gen_free_presheaf(rng: &mut ChaCha8Rng, base: &Arc<FinCat>, max_fiber: usize) -> Arc<DFib> {
    for _ in 0..50 {
        let sizes: Vec<usize> = base
            .objects()
            .map(|_| rng.gen_range(0..=max_fiber))
            .collect();
        // a generating edge g : a → b needs a function sizes[b] → sizes[a]
        let mut edge_tables: std::collections::HashMap<String, Vec<usize>> =
            std::collections::HashMap::new();
        let mut possible = true;
        for f in base.arrows() {
            let name = base.arrow_name(f).to_string();
            if base.is_identity(f) || name.contains('.') {
                continue;
            }
            let (src, tgt) = (base.src(f), base.tgt(f));
            if sizes[tgt] > 0 && sizes[src] == 0 {
                possible = false;
                break;
            }
            let table: Vec<usize> = (0..sizes[tgt])
                .map(|_| rng.gen_range(0..sizes[src].max(1)))
                .collect();
            edge_tables.insert(name, table);
        }
        if !possible {
            continue;
        }
        let fibers: Vec<Vec<String>> = sizes
            .iter()
            .map(|&s| (0..s).map(|i| format!("e{i}")).collect())
            .collect();
        let restrict: Vec<Vec<usize>> = base
            .arrows()
            .map(|f| {
                if base.is_identity(f) {
                    return (0..sizes[base.tgt(f)]).collect();
                }
                // name "g2.g1" means the path g1 then g2; the restriction
                // composes D(tgt) → D(mid) → D(src)
                let name = base.arrow_name(f);
                let parts: Vec<&str> = name.split('.').collect();
                (0..sizes[base.tgt(f)])
                    .map(|mut v| {
                        for part in &parts {
                            v = edge_tables[*part][v];
                        }
                        v
                    })
                    .collect()
            })
            .collect();
        return Arc::new(
            DFib::new("rndD", base.clone(), fibers, restrict)
                .expect("edge-generated presheaf is functorial"),
        );
    }
    Arc::new(DFib::terminal(base.clone()))
}

/// A small library of lattice bases (all have finite limits).
pub fn gen_lattice_base(rng: &mut ChaCha8Rng) -> Arc<FinCat> {
    match rng.gen_range(0..4) {
        0 => Arc::new(FinCat::poset("C2", &["0", "1"], &[("0", "1")]).unwrap()),
        1 => Arc::new(FinCat::poset("C3", &["0", "1", "2"], &[("0", "1"), ("1", "2")]).unwrap()),
        2 => Arc::new(
            FinCat::poset(
                "B4",
                &["bot", "x", "y", "top"],
                &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
            )
            .unwrap(),
        ),
        _ => Arc::new(
            FinCat::poset(
                "N5",
                &["bot", "a", "c", "b", "top"],
                &[
                    ("bot", "a"),
                    ("a", "c"),
                    ("c", "top"),
                    ("bot", "b"),
                    ("b", "top"),
                ],
            )
            .unwrap(),
        ),
    }
}

/// Random presheaf over a poset base: random tables with validation
/// retry, falling back to a coproduct of representables. With
/// `support_below`, fibers outside the downset of that object are empty.
pub fn gen_poset_presheaf(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCat>,
    max_fiber: usize,
    support_below: Option<ObjId>,
) -> Arc<DFib> {
    let allowed = |o: ObjId| match support_below {
        None => true,
        Some(top) => !base.hom(o, top).is_empty(),
    };
    for _ in 0..40 {
        let sizes: Vec<usize> = base
            .objects()
            .map(|o| {
                if allowed(o) {
                    rng.gen_range(0..=max_fiber)
                } else {
                    0
                }
            })
            .collect();
        let fibers: Vec<Vec<String>> = sizes
            .iter()
            .map(|&s| (0..s).map(|i| format!("e{i}")).collect())
            .collect();
        let mut possible = true;
        let restrict: Vec<Vec<usize>> = base
            .arrows()
            .map(|f| {
                let (src, tgt) = (base.src(f), base.tgt(f));
                if base.is_identity(f) {
                    (0..sizes[tgt]).collect()
                } else {
                    (0..sizes[tgt])
                        .map(|_| {
                            if sizes[src] == 0 {
                                possible = false;
                                0
                            } else {
                                rng.gen_range(0..sizes[src])
                            }
                        })
                        .collect()
                }
            })
            .collect();
        if !possible {
            continue;
        }
        if let Ok(d) = DFib::new("rndP", base.clone(), fibers, restrict) {
            return Arc::new(d);
        }
    }
    // fallback: a coproduct of representables within the support
    let candidates: Vec<ObjId> = base.objects().filter(|&o| allowed(o)).collect();
    let mut summands: Vec<Arc<DFib>> = Vec::new();
    if !candidates.is_empty() {
        for _ in 0..rng.gen_range(0..=2) {
            let b = candidates[rng.gen_range(0..candidates.len())];
            summands.push(Arc::new(yoneda(base, b)));
        }
    }
    let mut fibers: Vec<Vec<String>> = base.objects().map(|_| Vec::new()).collect();
    let mut restrict: Vec<Vec<usize>> = base.arrows().map(|_| Vec::new()).collect();
    for o in base.objects() {
        for (k, s) in summands.iter().enumerate() {
            for e in s.fiber(o) {
                fibers[o].push(format!("{k}{e}"));
            }
        }
    }
    for f in base.arrows() {
        let (src, tgt) = (base.src(f), base.tgt(f));
        let mut src_offset = vec![0usize; summands.len()];
        let mut acc = 0;
        for (k, s) in summands.iter().enumerate() {
            src_offset[k] = acc;
            acc += s.fiber_size(src);
        }
        let mut row = Vec::new();
        for (k, s) in summands.iter().enumerate() {
            for i in 0..s.fiber_size(tgt) {
                let v = s.act(dfib::Elem { obj: tgt, idx: i }, f).idx;
                row.push(src_offset[k] + v);
            }
        }
        restrict[f] = row;
    }
    Arc::new(DFib::new("sumY", base.clone(), fibers, restrict).expect("coproduct of yonedas"))
}

/// A representable map over a lattice base: either a Yoneda arrow or a
/// pullback of one along a random map, both with verified witnesses.
pub fn gen_representable(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCat>,
    max_fiber: usize,
) -> (DFibMap, RightAdjointWitness) {
    let arrows: Vec<ArrId> = base.arrows().collect();
    loop {
        let f = arrows[rng.gen_range(0..arrows.len())];
        let u0 = yoneda_map(base, f);
        if rng.gen_bool(0.4) {
            let w = right_adjoint(&u0).expect("yoneda arrows over lattices are representable");
            return (u0, w);
        }
        // pull back along a random map D → B/tgt(f)
        let d = gen_poset_presheaf(rng, base, max_fiber, Some(base.tgt(f)));
        let yc = Arc::new(yoneda(base, base.tgt(f)));
        let candidates = DFibMap::enumerate_over(&d, &yc, None);
        if candidates.is_empty() {
            continue;
        }
        let m = candidates[rng.gen_range(0..candidates.len())].clone();
        let (_pb, _to_u0_dom, left) = fiber_product(&u0, &m);
        match right_adjoint(&left) {
            Some(w) => return (left, w),
            None => continue,
        }
    }
}

fn random_map_into(
    rng: &mut ChaCha8Rng,
    base: &Arc<FinCat>,
    target: &Arc<DFib>,
    max_fiber: usize,
) -> DFibMap {
    for _ in 0..20 {
        let z = gen_poset_presheaf(rng, base, max_fiber, None);
        let maps = DFibMap::enumerate_over(&z, target, None);
        if !maps.is_empty() {
            return maps[rng.gen_range(0..maps.len())].clone();
        }
    }
    // the empty presheaf always maps in
    let empty = Arc::new(
        DFib::new(
            "0",
            base.clone(),
            base.objects().map(|_| Vec::new()).collect(),
            base.arrows().map(|_| Vec::new()).collect(),
        )
        .unwrap(),
    );
    DFibMap::over_id(
        "0!",
        empty,
        target.clone(),
        base.objects().map(|_| Vec::new()).collect(),
    )
    .unwrap()
}

// ----------------------------------------------------------------------
// Suites
// ----------------------------------------------------------------------

/// Unique lifting, faithfulness and isomorphism reflection of
/// projections over random fibrations.
pub fn dfib_laws_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteOutcome {
        suite: "dfib-laws".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    for case in 0..cases {
        let base = gen_free_base(&mut rng, size.max(2));
        let d = gen_free_presheaf(&mut rng, &base, 3);
        let mut ok = d.unique_lift_holds();
        if ok {
            let (total, proj, _) = d.total_category();
            'outer: for f in total.arrows() {
                for g in total.arrows() {
                    if f != g
                        && total.src(f) == total.src(g)
                        && total.tgt(f) == total.tgt(g)
                        && proj.on_arr(f) == proj.on_arr(g)
                    {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            for f in total.arrows() {
                if base.is_iso(proj.on_arr(f)) && !total.is_iso(f) {
                    ok = false;
                }
            }
        }
        if ok {
            out.passed += 1;
        } else {
            out.failures.push(format!("case {case}: fibration laws"));
        }
    }
    // closure of representables: identities, composition with
    // identities, and stability under pullback along random maps
    let mut rng2 = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    for case in 0..cases.min(25) {
        let base = gen_lattice_base(&mut rng2);
        let (u, _w) = gen_representable(&mut rng2, &base, 2);
        let mut ok = right_adjoint(&DFibMap::identity(u.dom.clone())).is_some();
        ok &= right_adjoint(&u.then(&DFibMap::identity(u.cod.clone()))).is_some();
        let l = random_map_into(&mut rng2, &base, &u.cod, 2);
        let (_p, _top, left) = fiber_product(&u, &l);
        ok &= right_adjoint(&left).is_some();
        if !ok {
            out.failures
                .push(format!("closure case {case}: representables not closed"));
            out.cases += 1;
        } else {
            out.cases += 1;
            out.passed += 1;
        }
    }
    out
}

/// The Yoneda bijection `|DFib(B/b, D)| = |D(b)|` on random instances.
pub fn yoneda_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteOutcome {
        suite: "yoneda".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    for case in 0..cases {
        let base = gen_free_base(&mut rng, size.max(2));
        let d = gen_free_presheaf(&mut rng, &base, 3);
        let b = rng.gen_range(0..base.object_count());
        let (maps, elems) = yoneda_bijection(&base, b, &d);
        let mut distinct = elems.clone();
        distinct.sort();
        distinct.dedup();
        if maps.len() == d.fiber_size(b) && distinct.len() == maps.len() {
            out.passed += 1;
        } else {
            out.failures.push(format!(
                "case {case}: |maps| = {}, |D(b)| = {}",
                maps.len(),
                d.fiber_size(b)
            ));
        }
    }
    out
}

/// Pushforward universal property: `|Hom_{/X}(u*W, Z)| =
/// |Hom_{/Y}(W, u_*Z)|` with `u_*` computed via the right adjoint.
pub fn pushforward_ump_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_fiber = size.clamp(1, 3);
    let mut out = SuiteOutcome {
        suite: "pushforward-ump".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    for case in 0..cases {
        let base = gen_lattice_base(&mut rng);
        let (u, w) = gen_representable(&mut rng, &base, max_fiber);
        let z = random_map_into(&mut rng, &base, &u.dom, max_fiber);
        let wy = random_map_into(&mut rng, &base, &u.cod, max_fiber);
        if pushforward_ump_holds(&u, &w, &z, &wy) {
            out.passed += 1;
        } else {
            out.failures.push(format!(
                "case {case}: hom-set bijection failed over {}",
                base.name
            ));
        }
    }
    out
}

/// The differential test: a commuting square with representable
/// verticals is a pullback iff its canonical mate is an isomorphism.
pub fn bc_pullback_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_fiber = size.clamp(1, 3);
    let mut out = SuiteOutcome {
        suite: "bc-pullback".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    let mut pullback_count = 0usize;
    for case in 0..cases {
        let base = gen_lattice_base(&mut rng);
        let (u, wu) = gen_representable(&mut rng, &base, max_fiber);
        let square: Option<(Square, RightAdjointWitness)> = if rng.gen_bool(0.5) {
            // genuine pullback square of u along a random map
            let l = random_map_into(&mut rng, &base, &u.cod, max_fiber);
            let (_pb, top, left) = fiber_product(&u, &l);
            right_adjoint(&left).map(|wl| {
                (
                    Square {
                        top,
                        bottom: l,
                        left,
                        right: u.clone(),
                    },
                    wl,
                )
            })
        } else {
            // independent representable with a searched completion
            let (u2, wl) = gen_representable(&mut rng, &base, max_fiber);
            let mut found = None;
            'search: for l in DFibMap::enumerate_over(&u2.cod, &u.cod, None) {
                for k in DFibMap::enumerate_over(&u2.dom, &u.dom, None) {
                    if k.then(&u).same_maps(&u2.then(&l)) {
                        found = Some((
                            Square {
                                top: k,
                                bottom: l,
                                left: u2.clone(),
                                right: u.clone(),
                            },
                            wl.clone(),
                        ));
                        break 'search;
                    }
                }
            }
            found
        };
        let (sq, wl) = match square {
            Some(pair) => pair,
            None => (
                Square {
                    top: DFibMap::identity(u.dom.clone()),
                    bottom: DFibMap::identity(u.cod.clone()),
                    left: u.clone(),
                    right: u.clone(),
                },
                wu.clone(),
            ),
        };
        match dfib::pullback_iff_bc(&sq, &wl, &wu) {
            Ok((pb, _bc, true)) => {
                out.passed += 1;
                if pb {
                    pullback_count += 1;
                }
            }
            Ok((pb, bc, _)) => out.failures.push(format!(
                "case {case}: checkers disagree (pullback={pb}, bc={bc})"
            )),
            Err(e) => out.failures.push(format!("case {case}: {e}")),
        }
    }
    out.notes
        .push(format!("pullback squares seen: {pullback_count}/{cases}"));
    out
}

/// Certificate re-validation and internal-language validity over the
/// stock models; also checks morphisms preserve contextual objects.
pub fn model_laws_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let _ = size;
    let mut out = SuiteOutcome {
        suite: "model-laws".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    let names = ["T1", "T2", "T3"];
    for case in 0..cases {
        let tname = names[rng.gen_range(0..names.len())];
        let models = stock::bundled_models(tname);
        let m = &models[rng.gen_range(0..models.len())];
        let mut ok = internal_language(m).is_ok();
        if ok {
            let closure = contextual_closure(m);
            for mor in enumerate_model_morphisms(m, m) {
                for o in m.base.objects() {
                    if closure[o] && !closure[mor.base_functor.on_obj(o)] {
                        ok = false;
                    }
                }
            }
        }
        if ok {
            out.passed += 1;
        } else {
            out.failures
                .push(format!("case {case}: model laws over {tname}"));
        }
    }
    out
}

/// Democracy and heart invariants over the stock models.
pub fn democratic_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let _ = size;
    let mut out = SuiteOutcome {
        suite: "democratic".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    let names = ["T1", "T2", "T3"];
    for case in 0..cases {
        let tname = names[rng.gen_range(0..names.len())];
        let models = stock::bundled_models(tname);
        let m = &models[rng.gen_range(0..models.len())];
        let check = (|| -> Result<bool, crate::model::ModelError> {
            let (h, _incl) = heart(m)?;
            let mut ok = is_democratic(&h);
            let (hh, _) = heart(&h)?;
            ok &= hh.base.object_count() == h.base.object_count();
            // hom-categories out of the democratic heart are codiscrete
            let morphisms = enumerate_model_morphisms(&h, m);
            for a in &morphisms {
                for b in &morphisms {
                    let twos = crate::model::enumerate_2morphisms(&h, m, a, b);
                    ok &= twos.len() <= 1;
                    ok &= twos
                        .iter()
                        .all(|t| t.base.components.iter().all(|&c| m.base.is_iso(c)));
                }
            }
            Ok(ok)
        })();
        match check {
            Ok(true) => out.passed += 1,
            Ok(false) => out
                .failures
                .push(format!("case {case}: democracy laws over {tname}")),
            Err(e) => out.failures.push(format!("case {case}: {e}")),
        }
    }
    out
}

/// Contractibility of the hom-category out of the bi-initial model.
pub fn contractibility_suite(seed: u64, size: usize, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let _ = size;
    let mut out = SuiteOutcome {
        suite: "contractibility".into(),
        seed,
        size,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    let theories = [stock::t_one(), stock::t_chain(), stock::t_square()];
    let names = ["T1", "T2", "T3"];
    for case in 0..cases {
        let k = rng.gen_range(0..theories.len());
        let im = match bi_initial_model(&theories[k]) {
            Ok(m) => m,
            Err(e) => {
                out.failures.push(format!("case {case}: {e}"));
                continue;
            }
        };
        let models = stock::bundled_models(names[k]);
        let m = &models[rng.gen_range(0..models.len())];
        if hom_category_contractible(&im, m) {
            out.passed += 1;
        } else {
            out.failures.push(format!(
                "case {case}: hom-category iM({}) → {} not contractible",
                names[k], m.name
            ));
        }
    }
    out
}

// ----------------------------------------------------------------------
// LF metatheory suite (substitution stability + signature weakening)
// ----------------------------------------------------------------------

/// Substitution stability and signature weakening over corpus-derived
/// instances; `corpus` maps file names to `.lfsig` contents. Cases
/// alternate between the two properties.
pub fn lf_substitution_suite(corpus: &[(String, String)], seed: u64, cases: usize) -> SuiteOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = CheckConfig::default();
    let mut out = SuiteOutcome {
        suite: "lf-substitution".into(),
        seed,
        size: 0,
        cases,
        passed: 0,
        failures: vec![],
        notes: vec![],
    };
    let parsed: Vec<(String, PreSignature, CheckedSignature)> = corpus
        .iter()
        .map(|(name, text)| {
            let sig = crate::lf_syntax::parse_signature(text).expect("corpus parses");
            let checked = check_signature(&sig, &cfg).expect("corpus checks");
            (name.clone(), sig, checked)
        })
        .collect();
    for case in 0..cases {
        let outcome = if case % 2 == 0 {
            substitution_stability_case(&mut rng, &parsed, &cfg)
        } else {
            weakening_case(&mut rng, &parsed, &cfg)
        };
        match outcome {
            Ok(()) => out.passed += 1,
            Err(msg) => out.failures.push(format!("case {case}: {msg}")),
        }
    }
    out
}

fn substitution_stability_case(
    rng: &mut ChaCha8Rng,
    parsed: &[(String, PreSignature, CheckedSignature)],
    cfg: &CheckConfig,
) -> Result<(), String> {
    for _ in 0..200 {
        let (name, _, checked) = &parsed[rng.gen_range(0..parsed.len())];
        let candidates: Vec<usize> = checked
            .sig
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| {
                !e.context.is_empty() && matches!(e.sort, crate::lf_syntax::EntrySort::Type(_))
            })
            .map(|(i, _)| i)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let entry = &checked.sig.entries[candidates[rng.gen_range(0..candidates.len())]];
        let gamma = entry.context.clone();
        // the symbol applied to its own context variables, at the
        // declared sort type
        let term = PreTerm::Sym(
            entry.name.clone(),
            gamma
                .entries
                .iter()
                .map(|(x, _)| PreTerm::var(x))
                .collect(),
        );
        let ty = match &entry.sort {
            crate::lf_syntax::EntrySort::Type(t) => t.clone(),
            _ => unreachable!(),
        };
        let checker = Checker::new(checked, cfg.clone());
        let (delta, f) = pick_morphism(rng, &gamma);
        let f = checker
            .check_context_morphism(&f, &delta, &gamma)
            .map_err(|e| format!("{name}/{}: morphism invalid: {e}", entry.name))?;
        checker
            .check_term(&gamma, &term, &Classifier::Ty(ty.clone()))
            .map_err(|e| format!("{name}/{}: base judgment: {e}", entry.name))?;
        let term_f = checker.apply_morphism(&term, &f, &gamma);
        let ty_f = checker.apply_morphism(&ty, &f, &gamma);
        checker
            .check_term(&delta, &term_f, &Classifier::Ty(ty_f))
            .map_err(|e| format!("{name}/{}: substituted judgment: {e}", entry.name))?;
        return Ok(());
    }
    Err("no instance found".into())
}

/// A context morphism into `gamma`: identity, a weakened source, or a
/// variable duplication when two entries share a type.
fn pick_morphism(rng: &mut ChaCha8Rng, gamma: &PreContext) -> (PreContext, Vec<PreTerm>) {
    let identity: Vec<PreTerm> = gamma
        .entries
        .iter()
        .map(|(x, _)| PreTerm::var(x))
        .collect();
    match rng.gen_range(0..3) {
        0 => (gamma.clone(), identity),
        1 => {
            let extra_ty = gamma.entries[0].1.clone();
            (gamma.extended("wfresh", extra_ty), identity)
        }
        _ => {
            // duplication is valid only when no later entry's type
            // mentions the duplicated variable
            let mut pair = None;
            'scan: for j in 1..gamma.len() {
                let var_j = &gamma.entries[j].0;
                let mentioned = gamma.entries[j + 1..]
                    .iter()
                    .any(|(_, ty)| ty.free_vars().contains(var_j));
                if mentioned {
                    continue;
                }
                for i in 0..j {
                    if gamma.entries[i].1 == gamma.entries[j].1 {
                        pair = Some((i, j));
                        break 'scan;
                    }
                }
            }
            match pair {
                None => (gamma.clone(), identity),
                Some((i, j)) => {
                    let f = gamma
                        .entries
                        .iter()
                        .enumerate()
                        .map(|(k, (x, _))| {
                            if k == j {
                                PreTerm::var(&gamma.entries[i].0)
                            } else {
                                PreTerm::var(x)
                            }
                        })
                        .collect();
                    (gamma.clone(), f)
                }
            }
        }
    }
}

fn weakening_case(
    rng: &mut ChaCha8Rng,
    parsed: &[(String, PreSignature, CheckedSignature)],
    cfg: &CheckConfig,
) -> Result<(), String> {
    let i1 = rng.gen_range(0..parsed.len());
    let mut i2 = rng.gen_range(0..parsed.len());
    if i2 == i1 {
        i2 = (i2 + 1) % parsed.len();
    }
    let (n1, s1, c1) = &parsed[i1];
    let (_, s2, _) = &parsed[i2];
    let split = rng.gen_range(1..=s1.entries.len());
    let sigma = PreSignature {
        entries: s1.entries[..split].to_vec(),
    };
    let tail = PreSignature {
        entries: s1.entries[split..].to_vec(),
    };
    let extension = rename_signature(s2, "wk_");
    let entry = &c1.sig.entries[rng.gen_range(0..c1.sig.entries.len())];
    let judgment = match &entry.sort {
        crate::lf_syntax::EntrySort::Type(t) => {
            Judgment::HasType(entry.context.clone(), t.clone(), Classifier::Box_)
        }
        _ => Judgment::CtxOk(entry.context.clone()),
    };
    weaken_signature(&sigma, &extension, &tail, &judgment, cfg)
        .map_err(|e| format!("{n1} split {split}: {e}"))
}

/// Rename every symbol of a signature with a prefix, consistently in
/// declarations and uses.
pub fn rename_signature(sig: &PreSignature, prefix: &str) -> PreSignature {
    let names: std::collections::HashSet<String> =
        sig.entries.iter().map(|e| e.name.clone()).collect();
    let rename = move |n: &str| format!("{prefix}{n}");
    fn walk(
        t: &PreTerm,
        names: &std::collections::HashSet<String>,
        rename: &dyn Fn(&str) -> String,
    ) -> PreTerm {
        match t {
            PreTerm::SortBox | PreTerm::SortRep | PreTerm::Var(_) => t.clone(),
            PreTerm::Sym(f, args) => {
                let f2 = if names.contains(f) {
                    rename(f)
                } else {
                    f.clone()
                };
                PreTerm::Sym(f2, args.iter().map(|a| walk(a, names, rename)).collect())
            }
            PreTerm::Pi(d, x, c) => PreTerm::Pi(
                Box::new(walk(d, names, rename)),
                x.clone(),
                Box::new(walk(c, names, rename)),
            ),
            PreTerm::Abs(d, x, c) => PreTerm::Abs(
                Box::new(walk(d, names, rename)),
                x.clone(),
                Box::new(walk(c, names, rename)),
            ),
            PreTerm::App { ann, fun, arg } => PreTerm::App {
                ann: ann.as_ref().map(|a| {
                    Box::new(crate::lf_syntax::AppAnn {
                        domain: walk(&a.domain, names, rename),
                        var: a.var.clone(),
                        codomain: walk(&a.codomain, names, rename),
                    })
                }),
                fun: Box::new(walk(fun, names, rename)),
                arg: Box::new(walk(arg, names, rename)),
            },
            PreTerm::Eq(ty, l, r) => PreTerm::Eq(
                Box::new(walk(ty, names, rename)),
                Box::new(walk(l, names, rename)),
                Box::new(walk(r, names, rename)),
            ),
            PreTerm::Refl(a) => PreTerm::Refl(Box::new(walk(a, names, rename))),
        }
    }
    PreSignature {
        entries: sig
            .entries
            .iter()
            .map(|e| crate::lf_syntax::SignatureEntry {
                name: rename(&e.name),
                context: PreContext::new(
                    e.context
                        .entries
                        .iter()
                        .map(|(x, ty)| (x.clone(), walk(ty, &names, &rename)))
                        .collect(),
                ),
                sort: match &e.sort {
                    crate::lf_syntax::EntrySort::Type(t) => {
                        crate::lf_syntax::EntrySort::Type(walk(t, &names, &rename))
                    }
                    s => s.clone(),
                },
            })
            .collect(),
    }
}
