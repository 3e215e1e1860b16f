use super::*;
use crate::stock::{chain_model, chain_model_padded, subsingleton_base, subsingleton_e, subsingleton_p, subsingleton_u, t_chain, t_one, t_square};
use crate::fincat::FinCat;
use crate::rmcat::validate_rmcat;
use std::collections::HashMap;

#[test]
fn subsingleton_natural_model() {
    let base = subsingleton_base();
    let nm = natural_model_check(
        base.clone(),
        subsingleton_u(&base),
        subsingleton_e(&base),
        subsingleton_p(&base),
    )
    .unwrap();
    // CwF report: {A0} = empty, {A1} = point
    let report = nm.cwf_report();
    let empty = base.object_id("empty").unwrap();
    let point = base.object_id("point").unwrap();
    let find = |ty: &str| report.iter().find(|e| e.ty == ty).unwrap();
    assert_eq!(find("A0").extension, empty);
    assert_eq!(find("A1").extension, point);
    // internal language: two closed types, one closed term
    let (types, terms) = nm.language();
    assert_eq!(types.len(), 2);
    assert_eq!(terms.len(), 1);
    // democratic
    assert!(nm.is_democratic());
}

#[test]
fn identity_natural_model() {
    // U = E, p = id: extension is the identity everywhere
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let nm = natural_model_check(base.clone(), u.clone(), u.clone(), DFibMap::identity(u.clone()))
        .unwrap();
    for e in nm.cwf_report() {
        assert_eq!(e.extension, e.over);
        assert!(base.is_identity(e.projection));
    }
}

#[test]
fn broken_natural_model_rejected() {
    // two terms of A1 with no terminal comma object
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let i = base.arrow_id("i").unwrap();
    let mut fibers = vec![Vec::new(); 2];
    fibers[base.object_id("empty").unwrap()] = vec!["q0".into(), "ve".into(), "we".into()];
    fibers[base.object_id("point").unwrap()] = vec!["v".into(), "w".into()];
    let mut restrict = vec![Vec::new(); base.arrow_count()];
    for o in base.objects() {
        restrict[base.identity(o)] = (0..fibers[o].len()).collect();
    }
    restrict[i] = vec![1, 2];
    let e2 = Arc::new(DFib::new("E2", base.clone(), fibers, restrict).unwrap());
    let mut maps = vec![Vec::new(); 2];
    maps[base.object_id("empty").unwrap()] = vec![0, 1, 1];
    maps[base.object_id("point").unwrap()] = vec![1, 1];
    let p2 = DFibMap::over_id("p2", e2, u.clone(), maps).unwrap();
    let err = natural_model_check(base, u, subsingleton_e(&subsingleton_base()), p2).unwrap_err();
    assert!(matches!(err, ModelError::NotRepresentable(..)), "{err}");
}

#[test]
fn polynomial_iterates_count_telescopes() {
    let base = subsingleton_base();
    let nm = natural_model_check(
        base.clone(),
        subsingleton_u(&base),
        subsingleton_e(&base),
        subsingleton_p(&base),
    )
    .unwrap();
    for n in 0..=2 {
        assert_eq!(
            nm.polynomial_iterate_count(n).unwrap(),
            nm.telescope_count(n),
            "iterate {n}"
        );
    }
}

#[test]
fn yoneda_self_models_validate() {
    for t in [t_one(), t_chain(), t_square()] {
        let m = yoneda_self_model(&t);
        assert!(m.is_ok(), "{}: {:?}", t.name, m.err());
    }
}

#[test]
fn broken_model_rejected() {
    // chain theory interpreted with a non-representable 0 → 1
    let t = t_chain();
    let base = subsingleton_base();
    let zero_fib = {
        // two elements over `point` collapsing to one over `empty`: the
        // unique map to the terminal fibration has no universal arrow at
        // the point fiber
        let fibers: Vec<Vec<String>> = vec![vec!["z1".into()], vec!["u".into(), "v".into()]];
        let restrict: Vec<Vec<usize>> = base
            .arrows()
            .map(|f| {
                if base.is_identity(f) {
                    (0..fibers[base.tgt(f)].len()).collect()
                } else {
                    vec![0, 0]
                }
            })
            .collect();
        Arc::new(DFib::new("bad", base.clone(), fibers, restrict).unwrap())
    };
    let one_fib = Arc::new(DFib::terminal(base.clone()));
    let tcat = &t.cat;
    let mk_map = |dom: &Arc<DFib>, cod: &Arc<DFib>, name: &str| {
        let maps = base
            .objects()
            .map(|o| (0..dom.fiber_size(o)).map(|_| 0).collect())
            .collect();
        DFibMap::over_id(name, dom.clone(), cod.clone(), maps).unwrap()
    };
    let zero = tcat.object_id("0").unwrap();
    let obj_fibs: Vec<Arc<DFib>> = tcat
        .objects()
        .map(|o| if o == zero { zero_fib.clone() } else { one_fib.clone() })
        .collect();
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|f| {
            let dom = &obj_fibs[tcat.src(f)];
            let cod = &obj_fibs[tcat.tgt(f)];
            if tcat.is_identity(f) {
                DFibMap::identity(dom.clone())
            } else {
                mk_map(dom, cod, tcat.arrow_name(f))
            }
        })
        .collect();
    let err = validate_model("bad", t, base, obj_fibs, arr_maps).unwrap_err();
    assert!(matches!(err, ModelError::NotRMFunctor(_)), "{err}");
}

#[test]
fn contextual_closure_and_heart() {
    // the padded model is not democratic; its heart drops the extra object
    let m = chain_model_padded();
    let closure = contextual_closure(&m);
    let z = m.base.object_id("z").unwrap();
    assert!(!closure[z]);
    assert!(closure[m.base.object_id("o").unwrap()]);
    assert!(closure[m.base.object_id("t").unwrap()]);
    assert!(!is_democratic(&m));

    let (h, incl) = heart(&m).unwrap();
    assert_eq!(h.base.object_count(), 2);
    assert!(is_democratic(&h));
    let _ = incl; // validated by construction

    // idempotence
    let (hh, _) = heart(&h).unwrap();
    assert_eq!(hh.base.object_count(), h.base.object_count());
    assert!(models_isomorphic(&h, &hh));
}

#[test]
fn identity_morphism_and_bc_failure() {
    let m = chain_model();
    let id = ModelMorphism::identity(&m);
    validate_morphism("id", &m, &m, id.base_functor.clone(), id.components.clone()).unwrap();

    // naturality-commuting morphism candidate that fails Beck-Chevalley:
    // target interprets 0 by the terminal fibration, so the context
    // extension of the unique closed type moves from 0 to 1.
    let t = t_chain();
    let base = m.base.clone();
    let one_fib = Arc::new(DFib::terminal(base.clone()));
    let tcat = &t.cat;
    let obj_fibs: Vec<Arc<DFib>> = tcat.objects().map(|_| one_fib.clone()).collect();
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|_| DFibMap::identity(one_fib.clone()))
        .collect();
    let n = validate_model("collapse", t.clone(), base.clone(), obj_fibs, arr_maps).unwrap();

    let f = Functor::identity(base.clone());
    let components: Vec<DFibMap> = tcat
        .objects()
        .map(|a| {
            let dom = m.obj_fibs[a].clone();
            let maps = base
                .objects()
                .map(|o| (0..dom.fiber_size(o)).map(|_| 0).collect())
                .collect();
            DFibMap::new(
                &format!("c{}", a),
                dom,
                n.obj_fibs[a].clone(),
                f.clone(),
                maps,
            )
            .unwrap()
        })
        .collect();
    let err = validate_morphism("bad", &m, &n, f, components).unwrap_err();
    assert!(matches!(err, ModelError::BcFails(_)), "{err}");
}

#[test]
fn bi_initial_models() {
    // representables = isos: the base is the objects isomorphic to 1
    let cat = Arc::new(FinCat::poset("C2", &["0", "1"], &[("0", "1")]).unwrap());
    let ids = cat.arrows().map(|f| cat.is_identity(f)).collect();
    let t_iso = Arc::new(validate_rmcat("Tiso", cat, ids, HashMap::new(), HashMap::new()).unwrap());
    let im = bi_initial_model(&t_iso).unwrap();
    assert_eq!(im.base.object_count(), 1);

    // fully representable theories: the base is the whole category
    for t in [t_one(), t_chain(), t_square()] {
        let im = bi_initial_model(&t).unwrap();
        assert_eq!(im.base.object_count(), t.cat.object_count(), "{}", t.name);
        // internal language: Θ(A) ≅ Hom_T(1, A)
        let lang = internal_language(&im).unwrap();
        for a in t.cat.objects() {
            assert_eq!(
                lang.set(a).len(),
                t.cat.hom(t.terminal, a).len(),
                "{}: object {}",
                t.name,
                t.cat.object_name(a)
            );
        }
    }
}

#[test]
fn bi_initial_is_heart_of_yoneda() {
    for t in [t_one(), t_chain(), t_square()] {
        let im = bi_initial_model(&t).unwrap();
        let y = yoneda_self_model(&t).unwrap();
        let (hy, _) = heart(&y).unwrap();
        assert!(models_isomorphic(&im, &hy), "{}", t.name);
    }
}

#[test]
fn bi_initial_contractibility_desk_scale() {
    let t = t_chain();
    let im = bi_initial_model(&t).unwrap();
    for m in [chain_model(), chain_model_padded()] {
        assert!(hom_category_contractible(&im, &m), "target {}", m.name);
    }
}

#[test]
fn democratic_hom_categories_are_codiscrete() {
    // between morphisms out of a democratic model: at most one
    // 2-morphism, and every one is invertible (checked as: its base
    // components are isomorphisms)
    let t = t_chain();
    let im = bi_initial_model(&t).unwrap();
    let m = chain_model_padded();
    let morphisms = enumerate_model_morphisms(&im, &m);
    assert!(!morphisms.is_empty());
    for a in &morphisms {
        for b in &morphisms {
            let twos = enumerate_2morphisms(&im, &m, a, b);
            assert!(twos.len() <= 1);
            for t2 in &twos {
                assert!(t2.base.components.iter().all(|&c| m.base.is_iso(c)));
            }
        }
    }
}

#[test]
fn heart_inclusion_bijection_on_morphisms_from_democratic() {
    let m = chain_model_padded();
    let (h, _) = heart(&m).unwrap();
    let dem = chain_model(); // democratic
    assert!(is_democratic(&dem));
    let to_heart = enumerate_model_morphisms(&dem, &h).len();
    let to_model = enumerate_model_morphisms(&dem, &m).len();
    assert_eq!(to_heart, to_model);
    assert!(to_heart > 0);
}

#[test]
fn morphisms_preserve_contextual_objects() {
    let t = t_chain();
    let im = bi_initial_model(&t).unwrap();
    let m = chain_model_padded();
    let closure_m = contextual_closure(&m);
    for mor in enumerate_model_morphisms(&im, &m) {
        let closure_im = contextual_closure(&im);
        for o in im.base.objects() {
            if closure_im[o] {
                assert!(closure_m[mor.base_functor.on_obj(o)]);
            }
        }
    }
}

#[test]
fn empty_hom_category_is_not_contractible() {
    // With representables = identities, the empty fibration is a valid
    // interpretation of the non-terminal object; no morphism exists
    // from a model with a nonempty interpretation.
    let cat = Arc::new(FinCat::poset("C2", &["0", "1"], &[("0", "1")]).unwrap());
    let ids = cat.arrows().map(|f| cat.is_identity(f)).collect();
    let t_iso =
        Arc::new(validate_rmcat("Tiso", cat, ids, HashMap::new(), HashMap::new()).unwrap());
    let base = Arc::new(FinCat::poset("B", &["0", "1"], &[("0", "1")]).unwrap());
    let one_fib = Arc::new(DFib::terminal(base.clone()));
    let empty_fib = Arc::new(
        DFib::new(
            "0",
            base.clone(),
            base.objects().map(|_| Vec::new()).collect(),
            base.arrows().map(|_| Vec::new()).collect(),
        )
        .unwrap(),
    );
    let zero = t_iso.cat.object_id("0").unwrap();
    let mk = |zero_fib: &Arc<DFib>, name: &str| -> Model {
        let obj_fibs: Vec<Arc<DFib>> = t_iso
            .cat
            .objects()
            .map(|o| {
                if o == zero {
                    zero_fib.clone()
                } else {
                    one_fib.clone()
                }
            })
            .collect();
        let arr_maps = t_iso
            .cat
            .arrows()
            .map(|f| {
                let dom = obj_fibs[t_iso.cat.src(f)].clone();
                let cod = obj_fibs[t_iso.cat.tgt(f)].clone();
                let maps = base
                    .objects()
                    .map(|o| (0..dom.fiber_size(o)).map(|_| 0).collect())
                    .collect();
                DFibMap::over_id(t_iso.cat.arrow_name(f), dom, cod, maps).unwrap()
            })
            .collect();
        validate_model(name, t_iso.clone(), base.clone(), obj_fibs, arr_maps).unwrap()
    };
    let m = mk(&one_fib, "full");
    let n = mk(&empty_fib, "empty");
    assert!(enumerate_model_morphisms(&m, &n).is_empty());
    assert!(!hom_category_contractible(&m, &n));
    // the other direction is inhabited
    assert!(!enumerate_model_morphisms(&n, &m).is_empty());
}

#[test]
fn constant_singleton_model_has_singleton_language() {
    let t = t_chain();
    let base = Arc::new(FinCat::poset("B", &["0", "1"], &[("0", "1")]).unwrap());
    let one_fib = Arc::new(DFib::terminal(base.clone()));
    let obj_fibs: Vec<Arc<DFib>> = t.cat.objects().map(|_| one_fib.clone()).collect();
    let arr_maps = t
        .cat
        .arrows()
        .map(|_| DFibMap::identity(one_fib.clone()))
        .collect();
    let m = validate_model("const1", t.clone(), base, obj_fibs, arr_maps).unwrap();
    let lang = internal_language(&m).unwrap();
    for a in t.cat.objects() {
        assert_eq!(lang.set(a).len(), 1);
    }
}
