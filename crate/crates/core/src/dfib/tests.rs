use super::*;
use crate::fincat::FinCat;
pub(crate) use crate::stock::{subsingleton_base, subsingleton_e, subsingleton_p, subsingleton_u};

fn elem(d: &DFib, obj: &str, name: &str) -> Elem {
    let o = d.base.object_id(obj).unwrap();
    let idx = d.fiber(o).iter().position(|e| e == name).unwrap();
    Elem { obj: o, idx }
}

#[test]
fn yoneda_fibers_are_homs() {
    let one = Arc::new(FinCat::terminal_category());
    let y = yoneda(&one, 0);
    assert_eq!(y.fiber_size(0), 1);

    let two = Arc::new(FinCat::walking_arrow());
    let y1 = yoneda(&two, two.object_id("1").unwrap());
    assert_eq!(y1.fiber(two.object_id("0").unwrap()), ["a"]);
    assert_eq!(y1.fiber(two.object_id("1").unwrap()), ["id_1"]);
    assert!(y1.unique_lift_holds());
}

#[test]
fn yoneda_bijection_examples() {
    let two = Arc::new(FinCat::walking_arrow());
    let b1 = two.object_id("1").unwrap();

    // D = yoneda(b): as many maps as endomorphisms of b
    let y1 = yoneda(&two, b1);
    let (maps, elems) = yoneda_bijection(&two, b1, &y1);
    assert_eq!(maps.len(), two.hom(b1, b1).len());
    assert_eq!(maps.len(), y1.fiber_size(b1));
    let mut seen = elems.clone();
    seen.dedup();
    assert_eq!(seen.len(), elems.len(), "evaluation is injective");

    // D with empty fiber over b: no maps
    let d = DFib::new(
        "D",
        two.clone(),
        vec![vec!["x".into()], vec![]],
        vec![vec![0], vec![1, 0].into_iter().take(0).collect(), vec![]]
            .into_iter()
            .enumerate()
            .map(|(i, _v)| {
                if i == two.identity(0) {
                    vec![0]
                } else if i == two.identity(1) {
                    vec![]
                } else {
                    vec![]
                }
            })
            .collect(),
    )
    .unwrap();
    let (maps, _) = yoneda_bijection(&two, b1, &d);
    assert!(maps.is_empty());
}

#[test]
fn base_change_examples() {
    let base = subsingleton_base();
    let u = subsingleton_u(&base);

    // identity base change
    let (pulled, proj) = base_change(&u, &Functor::identity(base.clone()));
    assert!(pulled.iso_over_id(&u).is_some());
    assert!(proj.is_iso());

    // constant functor at `point`: constant fibration with fiber U(point)
    let one = Arc::new(FinCat::terminal_category());
    let point = base.object_id("point").unwrap();
    let c = Functor::constant(one.clone(), base.clone(), point);
    let (pulled, _) = base_change(&u, &c);
    assert_eq!(pulled.fiber_size(0), u.fiber_size(point));
}

#[test]
fn base_change_of_yoneda_is_comma() {
    // base change of B/b along F has fiber Hom(F a', b)
    let base = subsingleton_base();
    let two = Arc::new(FinCat::walking_arrow());
    let point = base.object_id("point").unwrap();
    let f = Functor::new(
        "F",
        two.clone(),
        base.clone(),
        vec![base.object_id("empty").unwrap(), point],
        vec![base.arrow_id("i").unwrap()],
    )
    .unwrap();
    let y = Arc::new(yoneda(&base, point));
    let (pulled, _) = base_change(&y, &f);
    for a in two.objects() {
        assert_eq!(
            pulled.fiber_size(a),
            base.hom(f.on_obj(a), point).len(),
            "comma fiber at {}",
            two.object_name(a)
        );
    }
}

#[test]
fn transport_along_identity_and_uniqueness() {
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let id = Functor::identity(base.clone());
    let sigma = NatTrans::new(
        "id",
        &id,
        &id,
        base.objects().map(|o| base.identity(o)).collect(),
    )
    .unwrap();
    let t = transport_along_nat(&sigma, &id, &id, &u);
    assert!(t.unique);
    assert!(t.map.is_iso());

    // B' terminal, σ the single arrow i : σ* is restriction along i
    let one = Arc::new(FinCat::terminal_category());
    let f = Functor::constant(one.clone(), base.clone(), base.object_id("empty").unwrap());
    let g = Functor::constant(one.clone(), base.clone(), base.object_id("point").unwrap());
    let sigma = NatTrans::new("s", &f, &g, vec![base.arrow_id("i").unwrap()]).unwrap();
    let t = transport_along_nat(&sigma, &f, &g, &u);
    assert!(t.unique);
    // G*U has fiber U(point); σ* sends A_k to its restriction a_k
    assert_eq!(
        t.map.apply(Elem { obj: 0, idx: 0 }),
        Elem { obj: 0, idx: 0 }
    );
}

#[test]
fn right_adjoint_of_identity() {
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let id = DFibMap::identity(u.clone());
    let w = right_adjoint(&id).expect("identity is representable");
    for y in u.elements() {
        let ua = w.universal(y);
        assert_eq!(ua.ext, y.obj);
        assert!(base.is_identity(ua.proj));
        assert_eq!(ua.generic, y.idx);
    }
}

#[test]
fn terminal_base_representable_iff_bijective() {
    let one = Arc::new(FinCat::terminal_category());
    let mk = |n: usize, tag: &str| -> Arc<DFib> {
        Arc::new(
            DFib::new(
                tag,
                one.clone(),
                vec![(0..n).map(|i| format!("{tag}{i}")).collect()],
                vec![(0..n).collect()],
            )
            .unwrap(),
        )
    };
    let two_set = mk(2, "s");
    let one_set = mk(1, "t");
    // collapse is not representable
    let collapse = DFibMap::over_id("c", two_set.clone(), one_set.clone(), vec![vec![0, 0]]).unwrap();
    assert!(right_adjoint(&collapse).is_none());
    // a bijection is representable
    let swap = DFibMap::over_id("sw", two_set.clone(), two_set.clone(), vec![vec![1, 0]]).unwrap();
    assert!(right_adjoint(&swap).is_some());
    // the empty-into-singleton map is not representable
    let empty = mk(0, "e");
    let inc = DFibMap::over_id("i", empty, one_set, vec![vec![]]).unwrap();
    assert!(right_adjoint(&inc).is_none());
}

#[test]
fn subsingleton_p_is_representable() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w = right_adjoint(&p).expect("p is representable");
    // {A1} = point with identity projection; {A0} = empty
    let u = &p.cod;
    let a1 = elem(u, "point", "A1");
    let a0 = elem(u, "point", "A0");
    let (ext1, proj1, _) = context_extension(&p, &w, a1);
    assert_eq!(ext1, base.object_id("point").unwrap());
    assert!(base.is_identity(proj1));
    let (ext0, proj0, _) = context_extension(&p, &w, a0);
    assert_eq!(ext0, base.object_id("empty").unwrap());
    assert_eq!(proj0, base.arrow_id("i").unwrap());
    // the defining square is a pullback at every element
    for y in u.elements() {
        assert!(extension_is_pullback(&p, &w, y));
    }
}

#[test]
fn pushforward_along_identity_is_the_argument() {
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let e = subsingleton_e(&base);
    let id = DFibMap::identity(u.clone());
    let w = right_adjoint(&id).unwrap();
    let z = DFibMap::over_id(
        "z",
        e.clone(),
        u.clone(),
        vec![vec![0, 1], vec![1]],
    )
    .unwrap();
    let (push, _) = pushforward(&id, &w, &z).unwrap();
    assert!(push.iso_over_id(&e).is_some());
}

#[test]
fn pushforward_ump_on_subsingleton() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w = right_adjoint(&p).unwrap();
    // Z → E: take Z = E with identity
    let z = DFibMap::identity(p.dom.clone());
    // W → U: take W = U with identity, and W = yoneda(point) → U
    let wu = DFibMap::identity(p.cod.clone());
    assert!(pushforward_ump_holds(&p, &w, &z, &wu));
    let ypt = Arc::new(yoneda(&base, base.object_id("point").unwrap()));
    for m in DFibMap::enumerate_over(&ypt, &p.cod, None) {
        assert!(pushforward_ump_holds(&p, &w, &z, &m));
    }
}

#[test]
fn polynomial_examples() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w = right_adjoint(&p).unwrap();
    let u_fib = p.cod.clone();

    // all-singleton family: P_u(1) ≅ Y
    let one = Arc::new(DFib::terminal(base.clone()));
    let poly1 = polynomial(&p, &w, &one).unwrap();
    assert!(poly1.iso_over_id(&u_fib).is_some());

    // natural-model reading: elements of P_p(U) over the terminal are
    // pairs (type, type over its extension)
    let poly_u = polynomial(&p, &w, &u_fib).unwrap();
    let point = base.object_id("point").unwrap();
    let mut expected = 0;
    for yidx in 0..u_fib.fiber_size(point) {
        let y = Elem {
            obj: point,
            idx: yidx,
        };
        let (ext, _, _) = context_extension(&p, &w, y);
        expected += u_fib.fiber_size(ext);
    }
    assert_eq!(poly_u.fiber_size(point), expected);
    assert_eq!(expected, 4);

    // identity map: P_id(A) ≅ Y ×_B A
    let idm = DFibMap::identity(u_fib.clone());
    let wid = right_adjoint(&idm).unwrap();
    let poly_id = polynomial(&idm, &wid, &u_fib).unwrap();
    for o in base.objects() {
        assert_eq!(
            poly_id.fiber_size(o),
            u_fib.fiber_size(o) * u_fib.fiber_size(o)
        );
    }
}

#[test]
fn identity_square_mate_is_identity() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w = right_adjoint(&p).unwrap();
    let sq = Square {
        top: DFibMap::identity(p.dom.clone()),
        bottom: DFibMap::identity(p.cod.clone()),
        left: p.clone(),
        right: p.clone(),
    };
    let mate = canonical_mate(&sq, &w, &w).unwrap();
    assert!(mate.iter().all(|c| base.is_identity(c.arrow)));
    assert!(beck_chevalley(&sq, &w, &w).unwrap());
    let (pb, bc, agree) = pullback_iff_bc(&sq, &w, &w).unwrap();
    assert!(pb && bc && agree);
}

#[test]
fn pullback_square_satisfies_bc_and_broken_square_fails() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w = right_adjoint(&p).unwrap();

    // pull back p along the map yoneda(point) → U picking A1
    let ypt = Arc::new(yoneda(&base, base.object_id("point").unwrap()));
    let pick = DFibMap::enumerate_over(&ypt, &p.cod, None)
        .into_iter()
        .find(|m| {
            m.apply(yoneda_unit(&base, base.object_id("point").unwrap()))
                == elem(&p.cod, "point", "A1")
        })
        .unwrap();
    let (pb, to_e, to_y) = fiber_product(&p, &pick);
    let left = DFibMap::over_id("u'", pb.clone(), ypt.clone(), {
        let mut maps = Vec::new();
        for o in base.objects() {
            maps.push((0..pb.fiber_size(o)).map(|i| to_y.apply(Elem { obj: o, idx: i }).idx).collect());
        }
        maps
    })
    .unwrap();
    let w_left = right_adjoint(&left).expect("pullback of representable is representable");
    let sq = Square {
        top: to_e.clone(),
        bottom: pick.clone(),
        left: left.clone(),
        right: p.clone(),
    };
    assert!(sq.commutes());
    assert!(square_is_pullback(&sq));
    assert!(beck_chevalley(&sq, &w_left, &w).unwrap());

    // broken square: left = right = p, the top collapses q0 onto ve and
    // the bottom collapses everything onto A1. Commutes, both verticals
    // representable, yet the top-left corner misses the pair (v, A0) of
    // the fiber product — not a pullback, and the mate at A0 is the
    // non-invertible arrow i.
    let empty = base.object_id("empty").unwrap();
    let point = base.object_id("point").unwrap();
    let mut top_maps = vec![Vec::new(); 2];
    top_maps[empty] = vec![1, 1]; // q0 ↦ ve, ve ↦ ve
    top_maps[point] = vec![0]; // v ↦ v
    let top = DFibMap::over_id("collapse_e", p.dom.clone(), p.dom.clone(), top_maps).unwrap();
    let mut bot_maps = vec![Vec::new(); 2];
    bot_maps[empty] = vec![1, 1]; // a0, a1 ↦ a1
    bot_maps[point] = vec![1, 1]; // A0, A1 ↦ A1
    let bottom = DFibMap::over_id("const_a1", p.cod.clone(), p.cod.clone(), bot_maps).unwrap();
    let sq_broken = Square {
        top,
        bottom,
        left: p.clone(),
        right: p.clone(),
    };
    assert!(sq_broken.commutes());
    let (pb, bc, agree) = pullback_iff_bc(&sq_broken, &w, &w).unwrap();
    assert!(!pb, "collapsing square is not a pullback");
    assert!(!bc, "its mate at A0 is the non-invertible projection");
    assert!(agree);
}

#[test]
fn representables_closed_under_composition() {
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    let w_p = right_adjoint(&p).unwrap();
    let id = DFibMap::identity(p.cod.clone());
    let w_id = right_adjoint(&id).unwrap();
    let _ = (w_p, w_id);
    let comp = p.then(&id);
    assert!(right_adjoint(&comp).is_some());
}

#[test]
fn maps_between_fibrations_are_fibrations() {
    // Cancellation: any map of fibrations over the base is itself a
    // discrete fibration as a functor of total categories — unique lifts
    // along the map.
    let base = subsingleton_base();
    let p = subsingleton_p(&base);
    for z in p.dom.elements() {
        for f in base.arrows() {
            if base.tgt(f) != z.obj {
                continue;
            }
            // lifts of the total-codomain arrow (f, p(z)) with target z
            let mut lifts = 0;
            for g in base.arrows() {
                if base.tgt(g) == z.obj && g == f {
                    lifts += 1;
                }
            }
            assert_eq!(lifts, 1);
        }
    }
}

#[test]
fn projection_faithful_reflects_isos() {
    let base = subsingleton_base();
    let e = subsingleton_e(&base);
    let (total, proj, _) = e.total_category();
    // faithfulness: two parallel total arrows with equal projection agree
    for f in total.arrows() {
        for g in total.arrows() {
            if total.src(f) == total.src(g)
                && total.tgt(f) == total.tgt(g)
                && proj.on_arr(f) == proj.on_arr(g)
            {
                assert_eq!(f, g);
            }
        }
    }
    // iso reflection
    for f in total.arrows() {
        if base.is_iso(proj.on_arr(f)) {
            assert!(total.is_iso(f));
        }
    }
}

#[test]
fn dfib_parse_roundtrip() {
    let base = subsingleton_base();
    let e = subsingleton_e(&base);
    let text = e.to_string();
    let resolver = move |_: &str| -> Result<Arc<FinCat>, DFibError> { Ok(base.clone()) };
    let parsed = parse_dfib(&text, &resolver).unwrap();
    assert!(parsed.iso_over_id(&e).is_some());
}

#[test]
fn representable_fibration_vs_representable_bang() {
    // On a base without a terminal object the two notions differ: over
    // the discrete two-object category, B/a is a representable fibration
    // but its unique map to the terminal fibration has no universal
    // arrow at the other object.
    let mut b = FinCatBuilder::new("disc2");
    b.object("a");
    b.object("b");
    let disc = Arc::new(b.finish().unwrap());
    assert_eq!(disc.terminal_object(), None);
    let ya = Arc::new(yoneda(&disc, disc.object_id("a").unwrap()));
    assert_eq!(representing_object(&ya), disc.object_id("a"));
    assert!(!bang_is_representable(&ya));

    // With a terminal object present, a representable unique map forces
    // a representable fibration.
    let base = subsingleton_base();
    let ypt = Arc::new(yoneda(&base, base.object_id("point").unwrap()));
    assert!(bang_is_representable(&ypt));
    assert!(representing_object(&ypt).is_some());
}

#[test]
fn pushforward_along_a_bijection_reindexes() {
    // over the terminal base a bijection u has pushforward = reindexing
    let one = Arc::new(FinCat::terminal_category());
    let mk = |names: &[&str], tag: &str| -> Arc<DFib> {
        Arc::new(
            DFib::new(
                tag,
                one.clone(),
                vec![names.iter().map(|s| s.to_string()).collect()],
                vec![(0..names.len()).collect()],
            )
            .unwrap(),
        )
    };
    let x = mk(&["x0", "x1"], "X");
    let y = mk(&["y0", "y1"], "Y");
    let z = mk(&["z0", "z1", "z2"], "Z");
    let swap = DFibMap::over_id("u", x.clone(), y.clone(), vec![vec![1, 0]]).unwrap();
    let w = right_adjoint(&swap).unwrap();
    // z over x: z0, z1 ↦ x0; z2 ↦ x1
    let zm = DFibMap::over_id("z", z.clone(), x.clone(), vec![vec![0, 0, 1]]).unwrap();
    let (push, to_y) = pushforward(&swap, &w, &zm).unwrap();
    assert_eq!(push.fiber_size(0), z.fiber_size(0));
    // fibers over y are the z-fibers over the swapped x
    for i in 0..push.fiber_size(0) {
        let e = Elem { obj: 0, idx: i };
        let yv = to_y.apply(e);
        let _ = yv;
    }
    assert!(push.iso_over_id(&z).is_some());
}

#[test]
fn yoneda_is_representable_with_representing_object() {
    let base = subsingleton_base();
    for b in base.objects() {
        let yb = yoneda(&base, b);
        assert_eq!(representing_object(&yb), Some(b));
    }
}
