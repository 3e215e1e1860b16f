//! `.rmcat` and `.theory` file formats:
//!
//! ```text
//! rmcat L over lattice.fincat
//! representable: f, g
//! pullback f g = P with legs p1, p2       # optional designation
//! pushforward f g = h with eval e         # optional witness
//! ```
//!
//! ```text
//! theory T over l.rmcat
//! set A : {t1, t2}
//! map f : t1 -> s1, t2 -> s1
//! ```
//!
//! Undesignated pullbacks and pushforwards are searched at load;
//! identities are always representable.

use super::{validate_rmcat, PushforwardWitness, RMCat, RMCatError, Theory};
use crate::fincat::FinCat;
use std::collections::HashMap;
use std::sync::Arc;

pub fn parse_rmcat(
    name: &str,
    text: &str,
    resolve: &dyn Fn(&str) -> Result<Arc<FinCat>, RMCatError>,
) -> Result<RMCat, RMCatError> {
    let mut cat: Option<Arc<FinCat>> = None;
    let mut rep_names: Vec<String> = Vec::new();
    let mut pullbacks: Vec<(String, String, String, String, String)> = Vec::new();
    let mut pushforwards: Vec<(String, String, String, String)> = Vec::new();
    let mut rm_name = name.to_string();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| RMCatError::Parse(lineno + 1, msg);
        if let Some(rest) = line.strip_prefix("rmcat ") {
            let (n, cref) = rest
                .split_once(" over ")
                .ok_or_else(|| err("expected 'rmcat <name> over <fincat>'".into()))?;
            rm_name = n.trim().to_string();
            cat = Some(resolve(cref.trim())?);
        } else if let Some(rest) = line.strip_prefix("representable:") {
            for f in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                rep_names.push(f.to_string());
            }
        } else if let Some(rest) = line.strip_prefix("pullback ") {
            // f g = P with legs p1, p2
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| err("expected '='".into()))?;
            let mut fg = lhs.split_whitespace();
            let (f, g) = (
                fg.next().ok_or_else(|| err("missing cospan".into()))?,
                fg.next().ok_or_else(|| err("missing cospan".into()))?,
            );
            let (apex, legs) = rhs
                .split_once("with legs")
                .ok_or_else(|| err("expected 'with legs'".into()))?;
            let (p1, p2) = legs
                .split_once(',')
                .ok_or_else(|| err("expected two legs".into()))?;
            pullbacks.push((
                f.to_string(),
                g.to_string(),
                apex.trim().to_string(),
                p1.trim().to_string(),
                p2.trim().to_string(),
            ));
        } else if let Some(rest) = line.strip_prefix("pushforward ") {
            // f g = h with eval e
            let (lhs, rhs) = rest
                .split_once('=')
                .ok_or_else(|| err("expected '='".into()))?;
            let mut fg = lhs.split_whitespace();
            let (f, g) = (
                fg.next().ok_or_else(|| err("missing pair".into()))?,
                fg.next().ok_or_else(|| err("missing pair".into()))?,
            );
            let (h, e) = rhs
                .split_once("with eval")
                .ok_or_else(|| err("expected 'with eval'".into()))?;
            pushforwards.push((
                f.to_string(),
                g.to_string(),
                h.trim().to_string(),
                e.trim().to_string(),
            ));
        } else {
            return Err(err(format!("unrecognized line: {line}")));
        }
    }
    let cat = cat.ok_or(RMCatError::Parse(0, "missing 'rmcat' header".into()))?;
    let arr = |n: &str| -> Result<usize, RMCatError> {
        cat.arrow_id(n)
            .ok_or_else(|| RMCatError::Parse(0, format!("unknown arrow '{n}'")))
    };
    let obj = |n: &str| -> Result<usize, RMCatError> {
        cat.object_id(n)
            .ok_or_else(|| RMCatError::Parse(0, format!("unknown object '{n}'")))
    };
    let mut representable = vec![false; cat.arrow_count()];
    for o in cat.objects() {
        representable[cat.identity(o)] = true;
    }
    for n in &rep_names {
        representable[arr(n)?] = true;
    }
    let mut pb = HashMap::new();
    for (f, g, apex, p1, p2) in &pullbacks {
        pb.insert((arr(f)?, arr(g)?), (obj(apex)?, arr(p1)?, arr(p2)?));
    }
    let mut pf = HashMap::new();
    for (f, g, h, e) in &pushforwards {
        pf.insert(
            (arr(f)?, arr(g)?),
            PushforwardWitness {
                object: arr(h)?,
                eval: arr(e)?,
            },
        );
    }
    validate_rmcat(&rm_name, cat, representable, pb, pf)
}

pub fn parse_theory(
    text: &str,
    resolve: &dyn Fn(&str) -> Result<Arc<RMCat>, RMCatError>,
) -> Result<(Arc<RMCat>, Theory), RMCatError> {
    let mut rm: Option<Arc<RMCat>> = None;
    let mut name = String::new();
    let mut sets: Vec<Vec<String>> = Vec::new();
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let mut map_given: Vec<bool> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| RMCatError::Parse(lineno + 1, msg);
        if let Some(rest) = line.strip_prefix("theory ") {
            let (n, rref) = rest
                .split_once(" over ")
                .ok_or_else(|| err("expected 'theory <name> over <rmcat>'".into()))?;
            name = n.trim().to_string();
            let r = resolve(rref.trim())?;
            sets = vec![Vec::new(); r.cat.object_count()];
            maps = vec![Vec::new(); r.cat.arrow_count()];
            map_given = vec![false; r.cat.arrow_count()];
            rm = Some(r);
        } else if let Some(rest) = line.strip_prefix("set ") {
            let r = rm.as_ref().ok_or_else(|| err("'set' before header".into()))?;
            let (oname, elems) = rest
                .split_once(':')
                .ok_or_else(|| err("expected 'set <obj> : {..}'".into()))?;
            let o = r
                .cat
                .object_id(oname.trim())
                .ok_or_else(|| err(format!("unknown object '{}'", oname.trim())))?;
            let inner = elems
                .trim()
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| err("elements must be wrapped in { }".into()))?;
            sets[o] = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect();
        } else if let Some(rest) = line.strip_prefix("map ") {
            let r = rm.as_ref().ok_or_else(|| err("'map' before header".into()))?;
            let (fname, entries) = rest
                .split_once(':')
                .ok_or_else(|| err("expected 'map <arrow> : e -> e, ..'".into()))?;
            let f = r
                .cat
                .arrow_id(fname.trim())
                .ok_or_else(|| err(format!("unknown arrow '{}'", fname.trim())))?;
            let (src, tgt) = (r.cat.src(f), r.cat.tgt(f));
            let mut row = vec![usize::MAX; sets[src].len()];
            for entry in entries.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (from, to) = entry
                    .split_once("->")
                    .ok_or_else(|| err(format!("expected 'e -> e' in '{entry}'")))?;
                let i = sets[src]
                    .iter()
                    .position(|e| e == from.trim())
                    .ok_or_else(|| err(format!("unknown element '{}'", from.trim())))?;
                let j = sets[tgt]
                    .iter()
                    .position(|e| e == to.trim())
                    .ok_or_else(|| err(format!("unknown element '{}'", to.trim())))?;
                row[i] = j;
            }
            if row.iter().any(|&v| v == usize::MAX) {
                return Err(err(format!("map {} is partial", fname.trim())));
            }
            maps[f] = row;
            map_given[f] = true;
        } else {
            return Err(err(format!("unrecognized line: {line}")));
        }
    }
    let rm = rm.ok_or(RMCatError::Parse(0, "missing 'theory' header".into()))?;
    // identities implicit
    for o in rm.cat.objects() {
        let id = rm.cat.identity(o);
        if !map_given[id] {
            maps[id] = (0..sets[o].len()).collect();
        }
    }
    let theory = Theory { name, sets, maps };
    let validated = super::validate_theory(&rm, theory)?;
    Ok((rm, validated))
}
