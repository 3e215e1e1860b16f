//! `.dfib` file format:
//!
//! ```text
//! dfib D over base.fincat
//! fiber a : {x1, x2}
//! fiber b : {y}
//! restrict f : y -> x1
//! ```
//!
//! A `restrict` line for an arrow `f : a -> b` sends each element of the
//! fiber over `b` to an element of the fiber over `a`. Identities are
//! implicit; fibers default to empty.

use super::{DFib, DFibError};
use crate::fincat::FinCat;
use std::sync::Arc;

/// Parse a `.dfib` file. The base category is obtained from `resolve`,
/// called with the reference after `over`.
pub fn parse_dfib(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<Arc<FinCat>, DFibError>,
) -> Result<DFib, DFibError> {
    let mut name = String::new();
    let mut base: Option<Arc<FinCat>> = None;
    let mut fibers: Vec<Vec<String>> = Vec::new();
    let mut restrict: Vec<Vec<Option<usize>>> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| DFibError::Parse(lineno + 1, msg);
        if let Some(rest) = line.strip_prefix("dfib ") {
            let (n, base_ref) = rest
                .split_once(" over ")
                .ok_or_else(|| err("expected 'dfib <name> over <base>'".into()))?;
            name = n.trim().to_string();
            let b = resolve(base_ref.trim())?;
            fibers = vec![Vec::new(); b.object_count()];
            restrict = b
                .arrows()
                .map(|_| Vec::new())
                .collect::<Vec<Vec<Option<usize>>>>();
            base = Some(b);
        } else if let Some(rest) = line.strip_prefix("fiber ") {
            let b = base
                .as_ref()
                .ok_or_else(|| err("'fiber' before 'dfib' header".into()))?;
            let (obj, elems) = rest
                .split_once(':')
                .ok_or_else(|| err("expected 'fiber <obj> : {..}'".into()))?;
            let o = b
                .object_id(obj.trim())
                .ok_or_else(|| err(format!("unknown object '{}'", obj.trim())))?;
            let elems = elems.trim();
            let inner = elems
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| err("fiber elements must be wrapped in { }".into()))?;
            fibers[o] = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
        } else if let Some(rest) = line.strip_prefix("restrict ") {
            let b = base
                .as_ref()
                .ok_or_else(|| err("'restrict' before 'dfib' header".into()))?;
            let (arrow, entries) = rest
                .split_once(':')
                .ok_or_else(|| err("expected 'restrict <arrow> : e -> e, ..'".into()))?;
            let f = b
                .arrow_id(arrow.trim())
                .ok_or_else(|| err(format!("unknown arrow '{}'", arrow.trim())))?;
            let (src, tgt) = (b.src(f), b.tgt(f));
            let mut row = vec![None; fibers[tgt].len()];
            for entry in entries.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (from, to) = entry
                    .split_once("->")
                    .ok_or_else(|| err(format!("expected 'e -> e' in '{entry}'")))?;
                let i = fibers[tgt]
                    .iter()
                    .position(|e| e == from.trim())
                    .ok_or_else(|| err(format!("unknown element '{}'", from.trim())))?;
                let j = fibers[src]
                    .iter()
                    .position(|e| e == to.trim())
                    .ok_or_else(|| err(format!("unknown element '{}'", to.trim())))?;
                row[i] = Some(j);
            }
            restrict[f] = row;
        } else {
            return Err(err(format!("unrecognized line: {line}")));
        }
    }
    let base = base.ok_or(DFibError::Parse(0, "missing 'dfib' header".into()))?;
    let mut table: Vec<Vec<usize>> = Vec::new();
    for f in base.arrows() {
        let (src, tgt) = (base.src(f), base.tgt(f));
        if base.is_identity(f) {
            table.push((0..fibers[tgt].len()).collect());
            continue;
        }
        let row = &restrict[f];
        if row.len() != fibers[tgt].len() {
            return Err(DFibError::BadRestriction(format!(
                "{} (expected {} entries)",
                base.arrow_name(f),
                fibers[tgt].len()
            )));
        }
        let mut out = Vec::new();
        for (i, entry) in row.iter().enumerate() {
            match entry {
                Some(j) => out.push(*j),
                None => {
                    return Err(DFibError::BadRestriction(format!(
                        "{}: element '{}' has no image",
                        base.arrow_name(f),
                        fibers[tgt][i]
                    )))
                }
            }
        }
        let _ = src;
        table.push(out);
    }
    DFib::new(&name, base, fibers, table)
}
