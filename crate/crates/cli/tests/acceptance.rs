//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line and enforcing its runtime budget. Run with `--nocapture` to see
//! the lines.

use rmk_core::loader::Loader;
use rmk_core::model::{
    bi_initial_model, heart, hom_category_contractible, internal_language, models_isomorphic,
    yoneda_self_model, Model, ParsedModel,
};
use rmk_core::rmcat::RMCat;
use rmk_core::suites;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn rmk() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rmk"))
}

fn verdict(criterion: &str, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion}: {detail}");
}

fn within(budget: Duration, elapsed: Duration) -> bool {
    elapsed <= budget
}

const CORPUS: [&str; 8] = [
    "dtt.lfsig",
    "pi.lfsig",
    "id.lfsig",
    "universes.lfsig",
    "twolevel.lfsig",
    "prop.lfsig",
    "predicate.lfsig",
    "cubical.lfsig",
];

#[test]
fn criterion_1_corpus_acceptance() {
    let start = Instant::now();
    let corpus_dir = root().join("corpus");
    let mut ok = true;
    let mut detail = String::new();
    for name in CORPUS {
        let out = rmk()
            .arg("check-sig")
            .arg(corpus_dir.join(name))
            .output()
            .expect("spawn rmk");
        if !out.status.success() {
            ok = false;
            detail.push_str(&format!("{name} rejected; "));
        }
    }
    let mut mutants: Vec<PathBuf> = std::fs::read_dir(corpus_dir.join("mutants"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    mutants.sort();
    assert_eq!(mutants.len(), 20, "twenty curated mutants");
    for m in &mutants {
        let out = rmk().arg("check-sig").arg(m).output().expect("spawn rmk");
        let stdout = String::from_utf8_lossy(&out.stdout);
        if out.status.code() != Some(1) {
            ok = false;
            detail.push_str(&format!("{} not rejected; ", m.display()));
        }
        if !stdout.contains("rule") {
            ok = false;
            detail.push_str(&format!("{} rejection cites no rule; ", m.display()));
        }
    }
    let elapsed = start.elapsed();
    let in_time = within(Duration::from_secs(10), elapsed);
    verdict(
        "1 (corpus acceptance)",
        ok && in_time,
        &format!(
            "8 signatures accepted, 20 mutants rejected with cited rules in {elapsed:.2?}{}",
            if detail.is_empty() { "" } else { &detail }
        ),
    );
}

#[test]
fn criterion_2_yoneda_suite() {
    let start = Instant::now();
    let out = suites::yoneda_suite(20260810, 4, 500);
    let elapsed = start.elapsed();
    let ok = out.ok() && within(Duration::from_secs(60), elapsed);
    verdict(
        "2 (Yoneda bijection)",
        ok,
        &format!(
            "{}/{} seeded instances with |DFib(B/b, D)| = |D(b)| in {elapsed:.2?}; failures: {:?}",
            out.passed, out.cases, out.failures
        ),
    );
}

#[test]
fn criterion_3_pushforward_ump() {
    let start = Instant::now();
    let out = suites::pushforward_ump_suite(20260810, 3, 200);
    let elapsed = start.elapsed();
    let ok = out.ok() && within(Duration::from_secs(120), elapsed);
    verdict(
        "3 (pushforward UMP)",
        ok,
        &format!(
            "{}/{} hom-set bijections Hom(u*W, Z) = Hom(W, u_*Z) in {elapsed:.2?}; failures: {:?}",
            out.passed, out.cases, out.failures
        ),
    );
}

#[test]
fn criterion_4_bc_pullback_differential() {
    let start = Instant::now();
    let out = suites::bc_pullback_suite(20260810, 3, 200);
    let elapsed = start.elapsed();
    let ok = out.ok() && within(Duration::from_secs(60), elapsed);
    verdict(
        "4 (BC ⇔ pullback)",
        ok,
        &format!(
            "{}/{} squares where the two checkers agree in {elapsed:.2?} ({}); failures: {:?}",
            out.passed,
            out.cases,
            out.notes.join("; "),
            out.failures
        ),
    );
}

#[test]
fn criterion_5_subsingleton_natural_model() {
    let path = root().join("data/subsingleton.model");
    let loader = Loader::for_file(&path);
    let parsed = loader.model(&path).expect("subsingleton validates");
    let ParsedModel::Natural(nm) = parsed else {
        panic!("subsingleton.model is a natural model");
    };
    let (types, terms) = nm.language();
    let ok = types.len() == 2 && terms.len() == 1 && nm.is_democratic();
    verdict(
        "5 (natural model / CwF)",
        ok,
        &format!(
            "Theta(Type) = {{{}}} (size 2), Theta(el) = {{{}}} (size 1), democratic = {}",
            types.join(", "),
            terms.join(", "),
            nm.is_democratic()
        ),
    );
}

fn load_theory(name: &str) -> Arc<RMCat> {
    let path = root().join("data").join(name);
    Loader::for_file(&path).rmcat(&path).expect("theory loads")
}

fn load_model(name: &str) -> Model {
    let path = root().join("data").join(name);
    match Loader::for_file(&path).model(&path).expect("model loads") {
        ParsedModel::Full(m) => m,
        ParsedModel::Natural(_) => panic!("{name} is a full model"),
    }
}

fn bundled(theory: &str) -> Vec<Model> {
    match theory {
        "t_one.rmcat" => vec![
            load_model("one_yoneda.model"),
            load_model("one_over_b4.model"),
        ],
        "t_chain.rmcat" => vec![
            load_model("chain_yoneda.model"),
            load_model("chain_padded.model"),
        ],
        "t_square.rmcat" => vec![
            load_model("square_yoneda.model"),
            load_model("square_ultrafilter.model"),
        ],
        _ => unreachable!(),
    }
}

#[test]
fn criterion_6_bi_initiality() {
    for tname in ["t_one.rmcat", "t_chain.rmcat", "t_square.rmcat"] {
        let start = Instant::now();
        let theory = load_theory(tname);
        let im = bi_initial_model(&theory).expect("bi-initial model validates");
        let mut ok = true;
        let mut detail = String::new();
        for m in bundled(tname) {
            // targets were parsed against their own theory copy; rebase
            // onto the shared one for enumeration
            let m = Model {
                theory: theory.clone(),
                ..m
            };
            let contractible = hom_category_contractible(&im, &m);
            ok &= contractible;
            detail.push_str(&format!("→{} contractible={contractible}; ", m.name));
        }
        let y = yoneda_self_model(&theory).expect("yoneda self-model");
        let (hy, _) = heart(&y).expect("heart of the self-model");
        let iso = models_isomorphic(&im, &hy);
        ok &= iso;
        let elapsed = start.elapsed();
        ok &= within(Duration::from_secs(120), elapsed);
        verdict(
            &format!("6 (bi-initiality, {tname})"),
            ok,
            &format!("{detail}heart-of-yoneda iso={iso}, in {elapsed:.2?}"),
        );
    }
}

#[test]
fn criterion_7_internal_language_hom_agreement() {
    for tname in ["t_one.rmcat", "t_chain.rmcat", "t_square.rmcat"] {
        let theory = load_theory(tname);
        let im = bi_initial_model(&theory).expect("bi-initial model");
        let lang = internal_language(&im).expect("internal language is cartesian");
        let mut ok = true;
        let mut detail = String::new();
        for a in theory.cat.objects() {
            let hom = theory.cat.hom(theory.terminal, a);
            let theta = lang.set(a);
            // exact bijection: the fibration over the terminal is the
            // hom-set itself, element names included
            let same = theta.len() == hom.len()
                && hom
                    .iter()
                    .all(|&f| theta.contains(&theory.cat.arrow_name(f).to_string()));
            ok &= same;
            detail.push_str(&format!(
                "Theta({}) = {} = |Hom(1, {})|; ",
                theory.cat.object_name(a),
                theta.len(),
                theory.cat.object_name(a)
            ));
        }
        verdict(&format!("7 (internal language, {tname})"), ok, &detail);
    }
}

#[test]
fn criterion_8_syntactic_category() {
    use rmk_core::lf_checker::{check_signature, CheckConfig};
    use rmk_core::lf_syntax::parse_signature;
    use rmk_core::syncat::{build_syncat, context_name, Bounds, PullbackStatus};
    let start = Instant::now();
    let text = std::fs::read_to_string(root().join("corpus/dtt.lfsig")).unwrap();
    let cfg = CheckConfig::default();
    let checked = check_signature(&parse_signature(&text).unwrap(), &cfg).unwrap();
    let sc = build_syncat(
        &checked,
        cfg.clone(),
        Bounds {
            max_context_len: 2,
            max_term_size: 4,
            max_enumeration: 50_000,
        },
    )
    .unwrap();
    let names: Vec<String> = sc.contexts.iter().map(context_name).collect();
    let mut ok = names
        == vec![
            "()",
            "(v1 : Type)",
            "(v1 : Type, v2 : Type)",
            "(v1 : Type, v2 : el(v1))",
        ];
    // exact hom-class table
    let expected = [
        [1, 0, 0, 0],
        [1, 1, 1, 0],
        [1, 2, 4, 0],
        [1, 1, 1, 1],
    ];
    for i in 0..4 {
        for j in 0..4 {
            ok &= sc.homs[i][j].count() == expected[i][j];
        }
    }
    ok &= sc.check_terminal();
    let gens = sc.generating_representables(&checked, &cfg);
    ok &= gens.len() == 1 && context_name(&sc.contexts[gens[0].extended]) == "(v1 : Type, v2 : el(v1))";
    // the pullback of the el-projection along (B ↦ A) verifies
    let report = sc.check_representable_pullbacks(&checked, &cfg);
    let verified_along_b_to_a = report.iter().any(|(_, d, _, s)| {
        *d == 1
            && matches!(s, PullbackStatus::Verified { apex }
                if context_name(&sc.contexts[*apex]) == "(v1 : Type, v2 : el(v1))")
    });
    ok &= verified_along_b_to_a;
    ok &= !sc.equality_incomplete;
    let elapsed = start.elapsed();
    ok &= within(Duration::from_secs(30), elapsed);
    verdict(
        "8 (syntactic category)",
        ok,
        &format!(
            "contexts {names:?}, hom table exact, el-projection generating with verified pullback, in {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_9_lf_metatheory() {
    let corpus_dir = root().join("corpus");
    let corpus: Vec<(String, String)> = CORPUS
        .iter()
        .map(|n| {
            (
                n.to_string(),
                std::fs::read_to_string(corpus_dir.join(n)).unwrap(),
            )
        })
        .collect();
    let out = suites::lf_substitution_suite(&corpus, 20260810, 300);
    verdict(
        "9 (LF metatheory)",
        out.ok(),
        &format!(
            "{}/{} substitution-stability and weakening instances; failures: {:?}",
            out.passed, out.cases, out.failures
        ),
    );
}

/// The CLI exit-code contract: 0 success, 1 verdict failure, 2 input
/// error, 3 bound overflow.
#[test]
fn exit_code_contract() {
    let ok = rmk()
        .arg("check-sig")
        .arg(root().join("corpus/dtt.lfsig"))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let rejected = rmk()
        .arg("check-sig")
        .arg(root().join("corpus/mutants/dtt_duplicate.lfsig"))
        .output()
        .unwrap();
    assert_eq!(rejected.status.code(), Some(1));
    let missing = rmk()
        .arg("check-sig")
        .arg(root().join("corpus/does_not_exist.lfsig"))
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
    let overflow = rmk()
        .args(["syncat"])
        .arg(root().join("corpus/pi.lfsig"))
        .args(["--depth", "3", "--size", "9", "--bounds", "50"])
        .output()
        .unwrap();
    assert_eq!(overflow.status.code(), Some(3));
}

/// Identical inputs and seed produce byte-identical report bodies.
#[test]
fn report_determinism() {
    let run = || {
        rmk()
            .args([
                "props",
                "--suite",
                "dfib-laws",
                "--seed",
                "11",
                "--size",
                "3",
                "--cases",
                "40",
            ])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

/// RMK_MAX_STEPS overrides the reduction fuel; exhaustion is a distinct
/// overflow diagnostic, not a rejection.
#[test]
fn fuel_override_is_distinct_from_rejection() {
    let out = rmk()
        .env("RMK_MAX_STEPS", "1")
        .arg("check-sig")
        .arg(root().join("corpus/cubical.lfsig"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("overflow"), "{stdout}");
    // with the default fuel the same file is accepted
    let ok = rmk()
        .arg("check-sig")
        .arg(root().join("corpus/cubical.lfsig"))
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
}
