use super::*;
use crate::dfib::{self, DFibMap};
use crate::lf_checker::check_signature;
use crate::lf_syntax::parse_signature;
use std::sync::Arc;

fn dtt() -> CheckedSignature {
    let text = std::fs::read_to_string(format!(
        "{}/../../corpus/dtt.lfsig",
        env!("CARGO_MANIFEST_DIR")
    ))
    .unwrap();
    check_signature(&parse_signature(&text).unwrap(), &CheckConfig::default()).unwrap()
}

fn build_dtt(depth: usize, size: usize) -> (CheckedSignature, SynCatApprox) {
    let sig = dtt();
    let sc = build_syncat(
        &sig,
        CheckConfig::default(),
        Bounds {
            max_context_len: depth,
            max_term_size: size,
            max_enumeration: 50_000,
        },
    )
    .unwrap();
    (sig, sc)
}

#[test]
fn dtt_depth2_size4_contexts() {
    let (_, sc) = build_dtt(2, 4);
    let names: Vec<String> = sc.contexts.iter().map(context_name).collect();
    assert_eq!(
        names,
        vec![
            "()",
            "(v1 : Type)",
            "(v1 : Type, v2 : Type)",
            "(v1 : Type, v2 : el(v1))",
        ]
    );
}

#[test]
fn dtt_hom_classes() {
    let (_, sc) = build_dtt(2, 4);
    let one_ty = sc
        .context_index(&sc.contexts[1].clone())
        .unwrap();
    // Hom((A : Type), (B : Type)) has exactly one class: B ↦ A
    assert_eq!(sc.homs[one_ty][one_ty].count(), 1);
    // empty context is terminal
    assert!(sc.check_terminal());
    // no closed types in the basic signature
    let empty = sc.context_index(&crate::lf_syntax::PreContext::empty()).unwrap();
    assert_eq!(sc.homs[empty][one_ty].count(), 0);
    // two-type context has four endomorphism classes
    assert_eq!(sc.homs[2][2].count(), 4);
    // (A:Type, x:el(A)) → (A:Type): only the projection
    assert_eq!(sc.homs[3][one_ty].count(), 1);
}

#[test]
fn empty_signature_syncat() {
    let sig = check_signature(&parse_signature("").unwrap(), &CheckConfig::default()).unwrap();
    let sc = build_syncat(&sig, CheckConfig::default(), Bounds::default()).unwrap();
    assert_eq!(sc.contexts.len(), 1);
    assert_eq!(sc.homs[0][0].count(), 1); // identity only
}

#[test]
fn generators_and_pullbacks() {
    let (sig, sc) = build_dtt(2, 4);
    let cfg = CheckConfig::default();
    let gens = sc.generating_representables(&sig, &cfg);
    // exactly one generator: (A : Type, x : el(A)) → (A : Type)
    assert_eq!(gens.len(), 1);
    assert_eq!(context_name(&sc.contexts[gens[0].extended]), "(v1 : Type, v2 : el(v1))");
    // (A : Type, B : Type) → (A : Type) is not a generator (Type : Box)
    for g in &gens {
        assert_ne!(
            context_name(&sc.contexts[g.extended]),
            "(v1 : Type, v2 : Type)"
        );
    }
    // the pullback of the el-projection along (B ↦ A) : (A : Type) →
    // (A : Type) verifies with apex (A : Type, x : el(A)); pullbacks over
    // longer contexts exceed the depth bound and are flagged as such
    let report = sc.check_representable_pullbacks(&sig, &cfg);
    assert_eq!(report.len(), 4);
    let one_ty = 1; // (v1 : Type)
    for (g, d, _c, status) in &report {
        assert_eq!(*g, 0);
        if *d == one_ty {
            match status {
                PullbackStatus::Verified { apex } => {
                    assert_eq!(
                        context_name(&sc.contexts[*apex]),
                        "(v1 : Type, v2 : el(v1))"
                    );
                }
                other => panic!("expected verified pullback, got {other:?}"),
            }
        } else {
            assert!(
                matches!(status, PullbackStatus::BoundLimited { .. }),
                "apex context exceeds the depth bound"
            );
        }
    }
}

#[test]
fn composition_coherent_and_dump() {
    let (sig, sc) = build_dtt(2, 4);
    let cfg = CheckConfig::default();
    assert!(sc.composition_coherent(&sig, &cfg));
    let cat = sc.to_fincat(&sig, &cfg).unwrap();
    assert_eq!(cat.object_count(), 4);
    // the dump validates as a finite category (checked on finish) and its
    // terminal object is the empty context
    assert_eq!(
        cat.terminal_object()
            .map(|t| cat.object_name(t).to_string()),
        Some("()".to_string())
    );
}

#[test]
fn bounds_are_functorial() {
    let (_, small) = build_dtt(2, 4);
    let (_, big) = build_dtt(2, 6);
    // every small context appears in the big build
    for c in &small.contexts {
        assert!(big.contexts.contains(c), "{} missing", context_name(c));
    }
    // hom classes between small contexts agree once restricted to small
    // component sizes
    for (i, ci) in small.contexts.iter().enumerate() {
        for (j, cj) in small.contexts.iter().enumerate() {
            let bi = big.contexts.iter().position(|c| c == ci).unwrap();
            let bj = big.contexts.iter().position(|c| c == cj).unwrap();
            let big_restricted = big.homs[bi][bj]
                .classes
                .iter()
                .filter(|class| {
                    class
                        .iter()
                        .any(|tuple| tuple.iter().all(|t| t.size() <= 4))
                })
                .count();
            assert_eq!(
                small.homs[i][j].count(),
                big_restricted,
                "hom ({i}, {j})"
            );
        }
    }
}

#[test]
fn embeds_into_the_subsingleton_model() {
    // Type ↦ U, el ↦ E extends to the enumerated fragment functorially:
    // interpret contexts as fibrations over the model base and morphisms
    // as fibered maps, then check composition is preserved.
    use crate::stock::{subsingleton_base, subsingleton_p, subsingleton_u};
    let base = subsingleton_base();
    let u = subsingleton_u(&base);
    let p = subsingleton_p(&base);
    let w = dfib::right_adjoint(&p).unwrap();
    let (sig, sc) = build_dtt(2, 4);
    let cfg = CheckConfig::default();
    let _ = sig;

    // interpretation of a context: fibration + per-variable projections
    struct Interp {
        fib: Arc<dfib::DFib>,
        vars: Vec<DFibMap>, // into U for Type entries, into E for el entries
    }
    let one = Arc::new(dfib::DFib::terminal(base.clone()));
    let interp_ctx = |ctx: &crate::lf_syntax::PreContext| -> Interp {
        let mut cur = Interp {
            fib: one.clone(),
            vars: vec![],
        };
        for (_, ty) in &ctx.entries {
            match ty {
                crate::lf_syntax::PreTerm::Sym(s, args) if s == "Type" && args.is_empty() => {
                    // extend by U: product with U
                    let a = DFibMap::to_terminal(cur.fib.clone(), one.clone());
                    let b = DFibMap::to_terminal(u.clone(), one.clone());
                    let (prod, pr1, pr2) = dfib::fiber_product(&a, &b);
                    cur = Interp {
                        vars: cur
                            .vars
                            .iter()
                            .map(|v| pr1.then(v))
                            .chain(std::iter::once(pr2.clone()))
                            .collect(),
                        fib: prod,
                    };
                }
                crate::lf_syntax::PreTerm::Sym(s, args) if s == "el" && args.len() == 1 => {
                    // the argument is a variable of Type kind
                    let t_map = match &args[0] {
                        crate::lf_syntax::PreTerm::Var(x) => {
                            let idx = ctx
                                .entries
                                .iter()
                                .position(|(y, _)| y == x)
                                .expect("bound var");
                            cur.vars[idx].clone()
                        }
                        other => panic!("fragment interpreter: unexpected type arg {other}"),
                    };
                    // pullback of p along t_map
                    let (pb, _to_e, to_cur) = dfib::fiber_product(&p, &t_map);
                    // reorient: fiber_product(p: E→U, t: Γ→U) gives pairs
                    // (e, γ); projections to E and Γ
                    let (pb2, pr_e, pr_g) = (pb, _to_e, to_cur);
                    cur = Interp {
                        vars: cur
                            .vars
                            .iter()
                            .map(|v| pr_g.then(v))
                            .chain(std::iter::once(pr_e.clone()))
                            .collect(),
                        fib: pb2,
                    };
                }
                other => panic!("fragment interpreter: unsupported context type {other}"),
            }
        }
        cur
    };

    // interpret a morphism as a fibered map
    let interp_mor = |from: &Interp,
                      to_ctx: &crate::lf_syntax::PreContext,
                      from_ctx: &crate::lf_syntax::PreContext,
                      f: &[crate::lf_syntax::PreTerm]|
     -> DFibMap {
        // each component is a variable; build the target interp by
        // pairing the interpreted components
        let to = interp_ctx(to_ctx);
        // target fibration elements are built by structural recursion:
        // enumerate all maps from.fib → to.fib over id and pick the one
        // whose variable projections match the components
        let comps: Vec<DFibMap> = f
            .iter()
            .map(|t| match t {
                crate::lf_syntax::PreTerm::Var(x) => {
                    let idx = from_ctx
                        .entries
                        .iter()
                        .position(|(y, _)| y == x)
                        .expect("component var");
                    from.vars[idx].clone()
                }
                other => panic!("fragment interpreter: unsupported component {other}"),
            })
            .collect();
        DFibMap::enumerate_over(&from.fib, &to.fib, None)
            .into_iter()
            .find(|m| {
                to.vars
                    .iter()
                    .zip(&comps)
                    .all(|(tv, cv)| m.then(tv).same_maps(cv))
            })
            .expect("interpreted morphism exists and is unique")
    };

    let _ = w;
    // functoriality on all enumerated composable pairs
    for i in 0..sc.contexts.len() {
        let interp_i = interp_ctx(&sc.contexts[i]);
        for j in 0..sc.contexts.len() {
            for fc in &sc.homs[i][j].classes {
                let f = &fc[0];
                let m_f = interp_mor(&interp_i, &sc.contexts[j], &sc.contexts[i], f);
                let interp_j = interp_ctx(&sc.contexts[j]);
                for k in 0..sc.contexts.len() {
                    for gc in &sc.homs[j][k].classes {
                        let g = &gc[0];
                        let m_g = interp_mor(&interp_j, &sc.contexts[k], &sc.contexts[j], g);
                        let checker = crate::lf_checker::Checker::new(&sig, cfg.clone());
                        let gf: Vec<crate::lf_syntax::PreTerm> = g
                            .iter()
                            .map(|t| checker.apply_morphism(t, f, &sc.contexts[j]))
                            .collect();
                        let m_gf = interp_mor(&interp_i, &sc.contexts[k], &sc.contexts[i], &gf);
                        assert!(
                            m_f.then(&m_g).same_maps(&m_gf),
                            "functoriality at hom({i},{j}) ∘ hom({j},{k})"
                        );
                    }
                }
            }
        }
    }
}
