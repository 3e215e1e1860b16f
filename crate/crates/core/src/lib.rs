//! Workbench for finite instances of representable-map semantics: a
//! logical-framework checker, finite categories, discrete fibrations,
//! representable map categories, their models, and a bounded syntactic
//! category construction. Every law carries an exhaustive finite check.

pub mod dfib;
pub mod fincat;
pub mod lf_checker;
pub mod rmcat;
pub mod stock;
pub mod suites;
pub mod syncat;
pub mod lf_syntax;
pub mod loader;
pub mod model;
