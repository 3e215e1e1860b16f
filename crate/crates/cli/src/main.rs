//! `rmk`: check logical-framework signatures, validate finite categorical
//! structures, build bounded syntactic categories, read off internal
//! languages, and run the seeded property suites.
//!
//! Exit codes: 0 success, 1 verdict failure, 2 input error, 3 bound
//! overflow.

mod report;

use clap::{Parser, Subcommand, ValueEnum};
use rmk_core::loader::Loader;
use report::{Format, Report};
use rmk_core::lf_checker::{check_signature, CheckConfig};
use rmk_core::lf_syntax::parse_signature;
use rmk_core::model::ParsedModel;
use rmk_core::suites;
use rmk_core::syncat::{self, Bounds};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "rmk", version, about = "workbench for signatures and finite fibration semantics")]
struct Cli {
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    JsonLike,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::JsonLike => Format::JsonLike,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a `.lfsig` signature file
    CheckSig { path: PathBuf },
    /// Validate `.fincat`, `.dfib`, `.rmcat`, `.theory` or `.model` files
    Check { paths: Vec<PathBuf> },
    /// Build the bounded syntactic category of a signature
    Syncat {
        path: PathBuf,
        /// Maximum context length
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Maximum term size in tokens
        #[arg(long, default_value_t = 4)]
        size: usize,
        /// Enumeration cap
        #[arg(long, default_value_t = 20_000)]
        bounds: usize,
    },
    /// Print the internal language of a model
    Lang { path: PathBuf },
    /// Run a named property suite with a fixed seed
    Props {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        size: usize,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Corpus directory for the lf-substitution suite
        #[arg(long, default_value = "corpus")]
        corpus: PathBuf,
    },
}

fn check_config() -> CheckConfig {
    let mut cfg = CheckConfig::default();
    if let Ok(v) = std::env::var("RMK_MAX_STEPS") {
        if let Ok(n) = v.parse::<u64>() {
            cfg.max_steps = n;
        }
    }
    cfg
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = cli.format.into();
    let start = Instant::now();
    let code = match cli.command {
        Command::CheckSig { path } => cmd_check_sig(&path, format),
        Command::Check { paths } => cmd_check(&paths, format),
        Command::Syncat {
            path,
            depth,
            size,
            bounds,
        } => cmd_syncat(&path, depth, size, bounds, format),
        Command::Lang { path } => cmd_lang(&path, format),
        Command::Props {
            suite,
            seed,
            size,
            cases,
            corpus,
        } => cmd_props(&suite, seed, size, cases, &corpus, format),
    };
    eprintln!("elapsed: {:.3?}", start.elapsed());
    code
}

fn cmd_check_sig(path: &Path, format: Format) -> ExitCode {
    let mut report = Report::new("check-sig", format);
    report.field("input", path.display());
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            report.field("verdict", "input-error").field("error", e);
            print!("{}", report.render());
            return ExitCode::from(2);
        }
    };
    let parsed = match parse_signature(&text) {
        Ok(p) => p,
        Err(e) => {
            report.field("verdict", "input-error").field("error", e);
            print!("{}", report.render());
            return ExitCode::from(2);
        }
    };
    report.field("entries", parsed.entries.len());
    match check_signature(&parsed, &check_config()) {
        Ok(checked) => {
            report.field("verdict", "accepted");
            for cert in &checked.certificates {
                report.line(format!("{} admitted by rule {}", cert.name, cert.rule));
            }
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let fuel = matches!(
                e.source,
                rmk_core::lf_checker::CheckError::FuelExhausted(_)
            );
            report
                .field("verdict", if fuel { "overflow" } else { "rejected" })
                .field("entry", &e.entry)
                .field("reason", &e.source);
            print!("{}", report.render());
            ExitCode::from(if fuel { 3 } else { 1 })
        }
    }
}

fn cmd_check(paths: &[PathBuf], format: Format) -> ExitCode {
    let mut report = Report::new("check", format);
    let mut failed = false;
    let mut input_error = false;
    for path in paths {
        let loader = Loader::for_file(path);
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().into_owned())
            .unwrap_or_default();
        let verdict: Result<String, String> = match ext.as_str() {
            "lfsig" => std::fs::read_to_string(path)
                .map_err(|e| e.to_string())
                .and_then(|t| parse_signature(&t).map_err(|e| e.to_string()))
                .and_then(|p| {
                    check_signature(&p, &check_config())
                        .map(|c| format!("signature with {} entries", c.sig.entries.len()))
                        .map_err(|e| e.to_string())
                }),
            "fincat" => loader.fincat(path).map(|c| {
                format!(
                    "category with {} objects, {} arrows",
                    c.object_count(),
                    c.arrow_count()
                )
            }),
            "dfib" => loader.dfib(path).map(|d| {
                let total: usize = d.base.objects().map(|o| d.fiber_size(o)).sum();
                format!("discrete fibration with {total} elements")
            }),
            "rmcat" => loader.rmcat(path).map(|r| {
                format!(
                    "representable map category with {} representable arrows",
                    r.representable_arrows().len()
                )
            }),
            "theory" => loader.theory(path).map(|(_rm, th)| {
                format!(
                    "cartesian theory with {} elements",
                    th.sets.iter().map(|s| s.len()).sum::<usize>()
                )
            }),
            "model" => loader.model(path).map(|m| match m {
                ParsedModel::Full(m) => format!(
                    "model of {} over a {}-object base",
                    m.theory.name,
                    m.base.object_count()
                ),
                ParsedModel::Natural(nm) => format!(
                    "natural model with {} types, {} terms",
                    nm.types
                        .base
                        .objects()
                        .map(|o| nm.types.fiber_size(o))
                        .sum::<usize>(),
                    nm.terms
                        .base
                        .objects()
                        .map(|o| nm.terms.fiber_size(o))
                        .sum::<usize>(),
                ),
            }),
            other => Err(format!("unknown extension '{other}'")),
        };
        match verdict {
            Ok(desc) => {
                report.line(format!("{}: valid — {desc}", path.display()));
            }
            Err(e) => {
                if e.contains("No such file") || e.contains("unknown extension") {
                    input_error = true;
                } else {
                    failed = true;
                }
                report.line(format!("{}: INVALID — {e}", path.display()));
            }
        }
    }
    report.field(
        "verdict",
        if input_error {
            "input-error"
        } else if failed {
            "rejected"
        } else {
            "accepted"
        },
    );
    print!("{}", report.render());
    if input_error {
        ExitCode::from(2)
    } else if failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_syncat(path: &Path, depth: usize, size: usize, cap: usize, format: Format) -> ExitCode {
    let mut report = Report::new("syncat", format);
    report
        .field("input", path.display())
        .field("depth", depth)
        .field("size", size)
        .field("cap", cap);
    let cfg = check_config();
    let checked = match std::fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|t| parse_signature(&t).map_err(|e| e.to_string()))
        .and_then(|p| check_signature(&p, &cfg).map_err(|e| e.to_string()))
    {
        Ok(c) => c,
        Err(e) => {
            report.field("verdict", "input-error").field("error", e);
            print!("{}", report.render());
            return ExitCode::from(2);
        }
    };
    let bounds = Bounds {
        max_context_len: depth,
        max_term_size: size,
        max_enumeration: cap,
    };
    match syncat::build_syncat(&checked, cfg.clone(), bounds) {
        Ok(sc) => {
            report.field("contexts", sc.contexts.len());
            if sc.equality_incomplete {
                report.field("caveat", "equality-incomplete");
            }
            for (i, ctx) in sc.contexts.iter().enumerate() {
                report.line(format!("context [{i}] {}", syncat::context_name(ctx)));
            }
            for i in 0..sc.contexts.len() {
                for j in 0..sc.contexts.len() {
                    let n = sc.homs[i][j].count();
                    if n > 0 {
                        report.line(format!("hom [{i}] -> [{j}]: {n} classes"));
                    }
                }
            }
            if sc.overflowed {
                report
                    .field("verdict", "overflow")
                    .field("note", "partial result: enumeration cap reached");
                print!("{}", report.render());
                return ExitCode::from(3);
            }
            report.field("terminal", sc.check_terminal());
            let gens = sc.generating_representables(&checked, &cfg);
            report.field("generating-representables", gens.len());
            for g in &gens {
                report.line(format!(
                    "generator: [{}] -> [{}] (projection)",
                    g.extended, g.parent
                ));
            }
            let pullbacks = sc.check_representable_pullbacks(&checked, &cfg);
            let verified = pullbacks
                .iter()
                .filter(|(_, _, _, s)| matches!(s, syncat::PullbackStatus::Verified { .. }))
                .count();
            report.field("pullbacks-verified", verified);
            report.field("pullbacks-bound-limited", pullbacks.len() - verified);
            report.field("verdict", "accepted");
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err(syncat::SynCatError::Overflow(n)) => {
            report
                .field("verdict", "overflow")
                .field("cap", n)
                .field("note", "partial result discarded");
            print!("{}", report.render());
            ExitCode::from(3)
        }
        Err(e) => {
            report.field("verdict", "rejected").field("error", e);
            print!("{}", report.render());
            ExitCode::from(1)
        }
    }
}

fn cmd_lang(path: &Path, format: Format) -> ExitCode {
    let mut report = Report::new("lang", format);
    report.field("input", path.display());
    let loader = Loader::for_file(path);
    match loader.model(path) {
        Ok(ParsedModel::Full(m)) => match rmk_core::model::internal_language(&m) {
            Ok(theory) => {
                report.field("verdict", "accepted");
                for a in m.theory.cat.objects() {
                    report.line(format!(
                        "Theta({}) = {{{}}}",
                        m.theory.cat.object_name(a),
                        theory.set(a).join(", ")
                    ));
                }
                print!("{}", report.render());
                ExitCode::SUCCESS
            }
            Err(e) => {
                report.field("verdict", "rejected").field("error", e);
                print!("{}", report.render());
                ExitCode::from(1)
            }
        },
        Ok(ParsedModel::Natural(nm)) => {
            let (types, terms) = nm.language();
            report.field("verdict", "accepted");
            report.line(format!("Theta(Type) = {{{}}}", types.join(", ")));
            report.line(format!("Theta(el) = {{{}}}", terms.join(", ")));
            report.line(format!("democratic: {}", nm.is_democratic()));
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = if e.contains("No such file") { 2 } else { 1 };
            report.field("verdict", "rejected").field("error", e);
            print!("{}", report.render());
            ExitCode::from(code)
        }
    }
}

fn cmd_props(
    suite: &str,
    seed: u64,
    size: usize,
    cases: usize,
    corpus: &Path,
    format: Format,
) -> ExitCode {
    let mut report = Report::new("props", format);
    report
        .field("suite", suite)
        .field("seed", seed)
        .field("size", size)
        .field("cases", cases);
    let outcome = if suite == "lf-substitution" {
        let mut files: Vec<(String, String)> = Vec::new();
        let entries = match std::fs::read_dir(corpus) {
            Ok(e) => e,
            Err(e) => {
                report
                    .field("verdict", "input-error")
                    .field("error", format!("{}: {e}", corpus.display()));
                print!("{}", report.render());
                return ExitCode::from(2);
            }
        };
        let mut paths: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().map(|e| e == "lfsig").unwrap_or(false))
            .collect();
        paths.sort();
        for p in paths {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            match std::fs::read_to_string(&p) {
                Ok(t) => files.push((name, t)),
                Err(e) => {
                    report
                        .field("verdict", "input-error")
                        .field("error", format!("{}: {e}", p.display()));
                    print!("{}", report.render());
                    return ExitCode::from(2);
                }
            }
        }
        Some(suites::lf_substitution_suite(&files, seed, cases))
    } else {
        suites::run_suite(suite, seed, size, cases)
    };
    match outcome {
        Some(out) => {
            report.field("passed", format!("{}/{}", out.passed, out.cases));
            for n in &out.notes {
                report.line(format!("note: {n}"));
            }
            for f in &out.failures {
                report.line(format!("failure: {f}"));
            }
            report.field("verdict", if out.ok() { "accepted" } else { "rejected" });
            print!("{}", report.render());
            if out.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        None => {
            report
                .field("verdict", "input-error")
                .field(
                    "error",
                    format!(
                        "unknown suite '{suite}'; available: {}, lf-substitution",
                        suites::SUITE_NAMES.join(", ")
                    ),
                );
            print!("{}", report.render());
            ExitCode::from(2)
        }
    }
}
