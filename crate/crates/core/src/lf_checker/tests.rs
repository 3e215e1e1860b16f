use super::*;
use crate::lf_syntax::{parse_signature, parse_term};

fn sig(text: &str) -> CheckedSignature {
    check_signature(&parse_signature(text).unwrap(), &CheckConfig::default()).unwrap()
}

fn dtt() -> CheckedSignature {
    sig("Type : () => Box\nel : (A : Type) => Rep\n")
}

fn corpus(name: &str) -> String {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

/// Parse a context like "(A : Type, x : el(A))" against a signature.
fn ctx(checked: &CheckedSignature, text: &str) -> PreContext {
    let sig_entry = format!("dummy_ : {text} => Box");
    let parsed = parse_signature(&sig_entry).unwrap();
    let mut c = parsed.entries[0].context.clone();
    // resolve symbols from the real signature
    let symbols = checked.symbol_names();
    let mut seen: Vec<VarName> = Vec::new();
    for (x, ty) in c.entries.iter_mut() {
        *ty = ty.resolve_nullary_scoped(&symbols, &seen);
        seen.push(x.clone());
    }
    c
}

fn term(checked: &CheckedSignature, c: &PreContext, text: &str) -> PreTerm {
    let ch = Checker::new(checked, CheckConfig::default());
    ch.resolve(c, &parse_term(text).unwrap())
}

#[test]
fn sigma_dtt_accepted() {
    let s = dtt();
    assert_eq!(s.certificates.len(), 2);
    assert_eq!(s.certificates[0].rule, "sig-symbol-sort");
}

#[test]
fn pi_extension_accepted() {
    let s = check_signature(
        &parse_signature(&corpus("pi.lfsig")).unwrap(),
        &CheckConfig::default(),
    );
    assert!(s.is_ok(), "{:?}", s.err());
}

#[test]
fn el_alone_unbound() {
    let parsed = parse_signature("el : (A : Type) => Rep\n").unwrap();
    let err = check_signature(&parsed, &CheckConfig::default()).unwrap_err();
    assert_eq!(err.entry, "el");
    assert!(matches!(err.source, CheckError::UnboundSymbol(ref s) if s == "Type"));
}

#[test]
fn pi_formation_requires_representable_domain() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type)");

    let good = term(&s, &c, "(x : el(A)) -> Type");
    assert!(checker.check_term(&c, &good, &Classifier::Box_).is_ok());

    let bad = term(&s, &c, "(B : Type) -> Type");
    let err = checker.check_term(&c, &bad, &Classifier::Box_).unwrap_err();
    assert!(matches!(err, CheckError::NotRepresentable(_)), "{err}");
}

#[test]
fn refl_has_identity_type() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, a : el(A))");
    let refl = term(&s, &c, "refl a");
    let expected = Classifier::Ty(term(&s, &c, "a = a in el(A)"));
    assert!(checker.check_term(&c, &refl, &expected).is_ok());
}

#[test]
fn beta_equality() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, a : el(A), b : el(A))");
    let lhs = term(&s, &c, "(\\(x : el(A)). x) a");
    let rhs = term(&s, &c, "a");
    let ty = term(&s, &c, "el(A)");
    assert!(checker.check_equal(&c, &lhs, &rhs, &ty).unwrap());
}

#[test]
fn reflection_uses_hypotheses() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, a : el(A), b : el(A), p : a = b in el(A))");
    let ty = term(&s, &c, "el(A)");
    assert!(checker
        .check_equal(&c, &PreTerm::var("a"), &PreTerm::var("b"), &ty)
        .unwrap());

    // without the hypothesis the variables stay distinct
    let c2 = ctx(&s, "(A : Type, a : el(A), b : el(A))");
    assert!(!checker
        .check_equal(&c2, &PreTerm::var("a"), &PreTerm::var("b"), &ty)
        .unwrap());
}

#[test]
fn reflection_is_congruent() {
    let s = sig(
        "Type : () => Box\nel : (A : Type) => Rep\n\
         f : (A : Type, x : el(A)) => el(A)\n",
    );
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, a : el(A), b : el(A), p : a = b in el(A))");
    let lhs = term(&s, &c, "f(A, a)");
    let rhs = term(&s, &c, "f(A, b)");
    let ty = term(&s, &c, "el(A)");
    assert!(checker.check_equal(&c, &lhs, &rhs, &ty).unwrap());
}

#[test]
fn proof_irrelevance_at_eq_types() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(
        &s,
        "(A : Type, a : el(A), p : a = a in el(A), q : a = a in el(A))",
    );
    let ty = term(&s, &c, "a = a in el(A)");
    assert!(checker
        .check_equal(&c, &PreTerm::var("p"), &PreTerm::var("q"), &ty)
        .unwrap());
    // and p is equal to refl a
    let refl = term(&s, &c, "refl a");
    assert!(checker
        .check_equal(&c, &PreTerm::var("p"), &refl, &ty)
        .unwrap());
}

#[test]
fn function_extensionality() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, g : (x : el(A)) -> el(A))");
    let lhs = term(&s, &c, "\\(y : el(A)). g y");
    let rhs = term(&s, &c, "g");
    let ty = term(&s, &c, "(x : el(A)) -> el(A)");
    assert!(checker.check_equal(&c, &lhs, &rhs, &ty).unwrap());
}

#[test]
fn subsumption_rep_into_box() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type)");
    let t = term(&s, &c, "el(A)");
    assert!(checker.check_term(&c, &t, &Classifier::Rep).is_ok());
    assert!(checker.check_term(&c, &t, &Classifier::Box_).is_ok());
}

#[test]
fn context_morphisms() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig::default());
    let gamma = ctx(&s, "(A : Type, x : el(A))");

    // identity sequence
    let f = vec![PreTerm::var("A"), PreTerm::var("x")];
    assert!(checker.check_context_morphism(&f, &gamma, &gamma).is_ok());

    // empty target always reachable
    assert!(checker
        .check_context_morphism(&[], &gamma, &PreContext::empty())
        .is_ok());

    // arity mismatch
    let err = checker
        .check_context_morphism(&[PreTerm::var("A")], &gamma, &gamma)
        .unwrap_err();
    assert!(matches!(err, CheckError::ArityMismatch { .. }));

    // (A, A) vs (A, B) into (X : Type, Y : Type) over (A : Type, B : Type)
    let delta = ctx(&s, "(X : Type, Y : Type)");
    let from = ctx(&s, "(A : Type, B : Type)");
    let fa = vec![PreTerm::var("A"), PreTerm::var("A")];
    let fb = vec![PreTerm::var("A"), PreTerm::var("B")];
    assert!(!checker.morphisms_equal(&fa, &fb, &from, &delta).unwrap());
    assert!(checker.morphisms_equal(&fa, &fa, &from, &delta).unwrap());
}

#[test]
fn weakening_on_signatures() {
    let base = parse_signature(&corpus("dtt.lfsig")).unwrap();
    let pi_full = parse_signature(&corpus("pi.lfsig")).unwrap();
    let extension = PreSignature {
        entries: pi_full.entries[2..].to_vec(),
    };
    let judgment = Judgment::CtxOk(PreContext::new(vec![(
        "A".into(),
        PreTerm::sym("Type", vec![]),
    )]));
    // Σ = dtt, Σ' = Π-extension, Σ'' = ()
    weaken_signature(
        &base,
        &extension,
        &PreSignature::default(),
        &judgment,
        &CheckConfig::default(),
    )
    .unwrap();

    // overlapping domains are rejected
    let err = weaken_signature(&base, &base, &PreSignature::default(), &judgment, &CheckConfig::default())
        .unwrap_err();
    assert!(matches!(err.source, CheckError::DuplicateSymbol(_)));
}

#[test]
fn fuel_exhaustion_is_distinct() {
    let s = dtt();
    let checker = Checker::new(&s, CheckConfig { max_steps: 2 });
    let c = ctx(&s, "(A : Type, a : el(A))");
    // three nested redexes > 2 steps of fuel
    let lhs = term(
        &s,
        &c,
        "(\\(x : el(A)). x) ((\\(y : el(A)). y) ((\\(z : el(A)). z) a))",
    );
    let ty = term(&s, &c, "el(A)");
    let err = checker
        .check_equal(&c, &lhs, &PreTerm::var("a"), &ty)
        .unwrap_err();
    assert!(matches!(err, CheckError::FuelExhausted(_)), "{err}");
}

#[test]
fn surface_application_elaborates_annotation() {
    let s = sig(&corpus("pi.lfsig"));
    let checker = Checker::new(&s, CheckConfig::default());
    let c = ctx(&s, "(A : Type, B : el(A) -> Type, g : (x : el(A)) -> el(B x), a : el(A))");
    let t = term(&s, &c, "g a");
    let elab = checker
        .check_term(&c, &t, &Classifier::Ty(term(&s, &c, "el(B a)")))
        .unwrap();
    match elab {
        PreTerm::App { ann: Some(ann), .. } => {
            assert_eq!(ann.domain, term(&s, &c, "el(A)"));
        }
        other => panic!("expected elaborated application, got {other:?}"),
    }
}

#[test]
fn substitution_stability_on_an_instance() {
    // If Γ ⊢ a : A and f : Δ → Γ then Δ ⊢ a[f] : A[f].
    let s = sig(&corpus("pi.lfsig"));
    let checker = Checker::new(&s, CheckConfig::default());
    let gamma = ctx(&s, "(X : Type, x : el(X))");
    let delta = ctx(&s, "(Y : Type, Z : Type, y : el(Y))");
    let f = vec![PreTerm::var("Y"), PreTerm::var("y")];
    let f = checker.check_context_morphism(&f, &delta, &gamma).unwrap();

    let a = term(&s, &gamma, "\\(w : el(X)). x");
    let ty = term(&s, &gamma, "(w : el(X)) -> el(X)");
    checker
        .check_term(&gamma, &a, &Classifier::Ty(ty.clone()))
        .unwrap();

    let a_f = checker.apply_morphism(&a, &f, &gamma);
    let ty_f = checker.apply_morphism(&ty, &f, &gamma);
    checker
        .check_term(&delta, &a_f, &Classifier::Ty(ty_f))
        .unwrap();
}

#[test]
fn whole_corpus_accepted() {
    for name in [
        "dtt.lfsig",
        "pi.lfsig",
        "id.lfsig",
        "universes.lfsig",
        "twolevel.lfsig",
        "prop.lfsig",
        "predicate.lfsig",
        "cubical.lfsig",
    ] {
        let parsed = parse_signature(&corpus(name)).unwrap();
        let res = check_signature(&parsed, &CheckConfig::default());
        assert!(res.is_ok(), "{name}: {}", res.err().unwrap());
    }
}

#[test]
fn all_mutants_rejected() {
    let dir = format!("{}/../../corpus/mutants", env!("CARGO_MANIFEST_DIR"));
    let mut count = 0;
    let mut names: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    for path in names {
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_signature(&text).unwrap();
        let res = check_signature(&parsed, &CheckConfig::default());
        assert!(res.is_err(), "mutant accepted: {path:?}");
        count += 1;
    }
    assert_eq!(count, 20);
}
