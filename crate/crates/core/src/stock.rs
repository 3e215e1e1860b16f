//! Stock instances used across tests, property suites and bundled data:
//! the subsingleton natural model, the three tiny representable map
//! categories, and reference models of them.

use crate::dfib::{DFib, DFibMap};
use crate::fincat::{FinCat, FinCatBuilder};
use crate::model::{validate_model, yoneda_self_model, Model};
use crate::rmcat::{validate_rmcat, RMCat};
use std::collections::HashMap;
use std::sync::Arc;

/// The two-object base of the subsingleton example: `empty -> point`,
/// with `point` terminal.
pub fn subsingleton_base() -> Arc<FinCat> {
    let mut b = FinCatBuilder::new("ss-base");
    b.object("empty");
    b.object("point");
    b.arrow("i", "empty", "point");
    Arc::new(b.finish().unwrap())
}

/// Types fibration U: two types over the terminal object.
pub fn subsingleton_u(base: &Arc<FinCat>) -> Arc<DFib> {
    let i = base.arrow_id("i").unwrap();
    let mut fibers = vec![Vec::new(); 2];
    fibers[base.object_id("empty").unwrap()] = vec!["a0".into(), "a1".into()];
    fibers[base.object_id("point").unwrap()] = vec!["A0".into(), "A1".into()];
    let mut restrict = vec![Vec::new(); base.arrow_count()];
    for o in base.objects() {
        restrict[base.identity(o)] = (0..fibers[o].len()).collect();
    }
    restrict[i] = vec![0, 1];
    Arc::new(DFib::new("U", base.clone(), fibers, restrict).unwrap())
}

/// Terms fibration E: one global term of A1, plus the generic term of A0
/// over the extension object `empty`.
pub fn subsingleton_e(base: &Arc<FinCat>) -> Arc<DFib> {
    let i = base.arrow_id("i").unwrap();
    let mut fibers = vec![Vec::new(); 2];
    fibers[base.object_id("empty").unwrap()] = vec!["q0".into(), "ve".into()];
    fibers[base.object_id("point").unwrap()] = vec!["v".into()];
    let mut restrict = vec![Vec::new(); base.arrow_count()];
    for o in base.objects() {
        restrict[base.identity(o)] = (0..fibers[o].len()).collect();
    }
    restrict[i] = vec![1]; // v · i = ve
    Arc::new(DFib::new("E", base.clone(), fibers, restrict).unwrap())
}

/// The representable map p : E → U (v ↦ A1, ve ↦ a1, q0 ↦ a0).
pub fn subsingleton_p(base: &Arc<FinCat>) -> DFibMap {
    let u = subsingleton_u(base);
    let e = subsingleton_e(base);
    let mut maps = vec![Vec::new(); 2];
    maps[base.object_id("empty").unwrap()] = vec![0, 1];
    maps[base.object_id("point").unwrap()] = vec![1];
    DFibMap::over_id("p", e, u, maps).unwrap()
}

/// Terminal theory: one object, identity representable.
pub fn t_one() -> Arc<RMCat> {
    let cat = Arc::new(FinCat::terminal_category());
    Arc::new(
        validate_rmcat("T1", cat.clone(), vec![true], HashMap::new(), HashMap::new()).unwrap(),
    )
}

/// Chain theory: the two-element lattice with every arrow representable.
pub fn t_chain() -> Arc<RMCat> {
    let cat = Arc::new(FinCat::poset("C2", &["0", "1"], &[("0", "1")]).unwrap());
    let all = cat.arrows().map(|_| true).collect();
    Arc::new(validate_rmcat("T2", cat.clone(), all, HashMap::new(), HashMap::new()).unwrap())
}

/// Square theory: the Boolean four-element lattice, fully representable.
pub fn t_square() -> Arc<RMCat> {
    let cat = Arc::new(
        FinCat::poset(
            "B4",
            &["bot", "x", "y", "top"],
            &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
        )
        .unwrap(),
    );
    let all = cat.arrows().map(|_| true).collect();
    Arc::new(validate_rmcat("T3", cat.clone(), all, HashMap::new(), HashMap::new()).unwrap())
}

/// The chain-theory model over its own base: `0 ↦ B/0`, `1 ↦ 1`.
pub fn chain_model() -> Model {
    yoneda_self_model(&t_chain()).unwrap()
}

/// A chain-theory model over a three-object chain base `z ≤ o ≤ t` whose
/// contextual closure misses `z`.
pub fn chain_model_padded() -> Model {
    let t = t_chain();
    let base = Arc::new(FinCat::poset("C3", &["z", "o", "t"], &[("z", "o"), ("o", "t")]).unwrap());
    let zero_fib = {
        let fibers: Vec<Vec<String>> = vec![vec!["ez".into()], vec!["e".into()], vec![]];
        let restrict: Vec<Vec<usize>> = base
            .arrows()
            .map(|f| {
                let tgt = base.tgt(f);
                (0..fibers[tgt].len())
                    .map(|i| if base.is_identity(f) { i } else { 0 })
                    .collect()
            })
            .collect();
        Arc::new(DFib::new("Z", base.clone(), fibers, restrict).unwrap())
    };
    let one_fib = Arc::new(DFib::terminal(base.clone()));
    let tcat = &t.cat;
    let zero = tcat.object_id("0").unwrap();
    let obj_fibs: Vec<Arc<DFib>> = tcat
        .objects()
        .map(|o| {
            if o == zero {
                zero_fib.clone()
            } else {
                one_fib.clone()
            }
        })
        .collect();
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|f| {
            let dom = obj_fibs[tcat.src(f)].clone();
            let cod = obj_fibs[tcat.tgt(f)].clone();
            let maps = base
                .objects()
                .map(|o| (0..dom.fiber_size(o)).map(|_| 0).collect())
                .collect();
            DFibMap::over_id(tcat.arrow_name(f), dom, cod, maps).unwrap()
        })
        .collect();
    validate_model("padded", t, base, obj_fibs, arr_maps).unwrap()
}

/// The square-theory model over the two-chain base induced by the
/// lattice map sending an object to `1` when `x ≤ A` and to `0`
/// otherwise; every object lands on a principal downset, so every arrow
/// image is representable.
pub fn square_model_ultrafilter() -> Model {
    let t = t_square();
    let base = Arc::new(FinCat::poset("C2b", &["0", "1"], &[("0", "1")]).unwrap());
    let tcat = &t.cat;
    let x = tcat.object_id("x").unwrap();
    let phi = |a: usize| -> usize {
        if !tcat.hom(x, a).is_empty() {
            base.object_id("1").unwrap()
        } else {
            base.object_id("0").unwrap()
        }
    };
    let obj_fibs: Vec<Arc<DFib>> = tcat
        .objects()
        .map(|a| Arc::new(crate::dfib::yoneda(&base, phi(a))))
        .collect();
    let arr_maps: Vec<DFibMap> = tcat
        .arrows()
        .map(|f| {
            let (a, b) = (tcat.src(f), tcat.tgt(f));
            let dom = obj_fibs[a].clone();
            let cod = obj_fibs[b].clone();
            // at most one map between principal downsets; fibers are
            // subsingletons so the table is all zeroes
            let maps = base
                .objects()
                .map(|o| (0..dom.fiber_size(o)).map(|_| 0).collect())
                .collect();
            DFibMap::over_id(tcat.arrow_name(f), dom, cod, maps).unwrap()
        })
        .collect();
    validate_model("ultrafilter-x", t, base, obj_fibs, arr_maps).unwrap()
}

/// Reference models bundled per tiny theory, used by the contractibility
/// suites.
pub fn bundled_models(theory_name: &str) -> Vec<Model> {
    match theory_name {
        "T1" => {
            let t = t_one();
            let y = yoneda_self_model(&t).unwrap();
            // a T1-model over the square-lattice base: the terminal fibration
            let base = Arc::new(
                FinCat::poset(
                    "B4b",
                    &["bot", "x", "y", "top"],
                    &[("bot", "x"), ("bot", "y"), ("x", "top"), ("y", "top")],
                )
                .unwrap(),
            );
            let one_fib = Arc::new(DFib::terminal(base.clone()));
            let m = validate_model(
                "one-over-b4",
                t,
                base,
                vec![one_fib.clone()],
                vec![DFibMap::identity(one_fib)],
            )
            .unwrap();
            vec![y, m]
        }
        "T2" => vec![chain_model(), chain_model_padded()],
        "T3" => {
            let t = t_square();
            vec![
                yoneda_self_model(&t).unwrap(),
                square_model_ultrafilter(),
            ]
        }
        other => panic!("unknown bundled theory '{other}'"),
    }
}
