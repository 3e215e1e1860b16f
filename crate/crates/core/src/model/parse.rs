//! `.model` file format.
//!
//! Full mode (a model of a finite type theory):
//!
//! ```text
//! model M over t.rmcat
//! base b.fincat
//! object A from a.dfib
//! map f at <base-obj> : x -> y, ...
//! ```
//!
//! Natural mode (just a representable map of fibrations):
//!
//! ```text
//! model M natural
//! base b.fincat
//! object U from u.dfib
//! object E from e.dfib
//! map p at <base-obj> : term -> type, ...
//! ```

use super::{natural_model_check, validate_model, Model, ModelError, NaturalModel};
use crate::dfib::{DFib, DFibMap};
use crate::fincat::FinCat;
use crate::rmcat::RMCat;
use std::collections::HashMap;
use std::sync::Arc;

pub trait ModelResolver {
    fn fincat(&self, reference: &str) -> Result<Arc<FinCat>, ModelError>;
    fn dfib(&self, reference: &str, base: &Arc<FinCat>) -> Result<Arc<DFib>, ModelError>;
    fn rmcat(&self, reference: &str) -> Result<Arc<RMCat>, ModelError>;
}

pub enum ParsedModel {
    Full(Model),
    Natural(NaturalModel),
}

pub fn parse_model(text: &str, io: &dyn ModelResolver) -> Result<ParsedModel, ModelError> {
    let mut name = String::new();
    let mut natural = false;
    let mut theory: Option<Arc<RMCat>> = None;
    let mut base: Option<Arc<FinCat>> = None;
    let mut objects: Vec<(String, String)> = Vec::new(); // (T-obj name, dfib ref)
    let mut map_lines: Vec<(usize, String, String, String)> = Vec::new(); // (line, arrow, base obj, entries)
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ModelError::Parse(lineno + 1, msg);
        if let Some(rest) = line.strip_prefix("model ") {
            if let Some(n) = rest.strip_suffix(" natural") {
                name = n.trim().to_string();
                natural = true;
            } else {
                let (n, tref) = rest
                    .split_once(" over ")
                    .ok_or_else(|| err("expected 'model <name> over <rmcat>' or 'model <name> natural'".into()))?;
                name = n.trim().to_string();
                theory = Some(io.rmcat(tref.trim())?);
            }
        } else if let Some(rest) = line.strip_prefix("base ") {
            base = Some(io.fincat(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("object ") {
            let (oname, dref) = rest
                .split_once(" from ")
                .ok_or_else(|| err("expected 'object <name> from <dfib>'".into()))?;
            objects.push((oname.trim().to_string(), dref.trim().to_string()));
        } else if let Some(rest) = line.strip_prefix("map ") {
            let (head, entries) = rest
                .split_once(':')
                .ok_or_else(|| err("expected 'map <arrow> at <obj> : ...'".into()))?;
            let (arrow, at) = head
                .split_once(" at ")
                .ok_or_else(|| err("expected 'map <arrow> at <obj>'".into()))?;
            map_lines.push((
                lineno + 1,
                arrow.trim().to_string(),
                at.trim().to_string(),
                entries.to_string(),
            ));
        } else {
            return Err(err(format!("unrecognized line: {line}")));
        }
    }
    let base = base.ok_or(ModelError::Parse(0, "missing 'base' line".into()))?;
    let fibs: Vec<(String, Arc<DFib>)> = objects
        .iter()
        .map(|(n, r)| Ok((n.clone(), io.dfib(r, &base)?)))
        .collect::<Result<_, ModelError>>()?;
    let fib_of = |n: &str| -> Option<&Arc<DFib>> {
        fibs.iter().find(|(m, _)| m == n).map(|(_, d)| d)
    };

    // assemble fiber maps per named arrow
    let mut tables: HashMap<String, HashMap<String, Vec<(String, String)>>> = HashMap::new();
    for (lineno, arrow, at, entries) in &map_lines {
        let row = tables
            .entry(arrow.clone())
            .or_default()
            .entry(at.clone())
            .or_default();
        for entry in entries.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (from, to) = entry.split_once("->").ok_or_else(|| {
                ModelError::Parse(*lineno, format!("expected 'e -> e' in '{entry}'"))
            })?;
            row.push((from.trim().to_string(), to.trim().to_string()));
        }
    }
    let build_map = |arrow: &str, dom: &Arc<DFib>, cod: &Arc<DFib>| -> Result<DFibMap, ModelError> {
        let empty = HashMap::new();
        let rows = tables.get(arrow).unwrap_or(&empty);
        let mut maps: Vec<Vec<usize>> = Vec::new();
        for o in base.objects() {
            let oname = base.object_name(o);
            let mut row = vec![usize::MAX; dom.fiber_size(o)];
            if let Some(entries) = rows.get(oname) {
                for (from, to) in entries {
                    let i = dom
                        .fiber(o)
                        .iter()
                        .position(|e| e == from)
                        .ok_or_else(|| {
                            ModelError::Parse(0, format!("unknown element '{from}' at {oname}"))
                        })?;
                    let j = cod.fiber(o).iter().position(|e| e == to).ok_or_else(|| {
                        ModelError::Parse(0, format!("unknown element '{to}' at {oname}"))
                    })?;
                    row[i] = j;
                }
            }
            if row.iter().any(|&v| v == usize::MAX) {
                return Err(ModelError::Parse(
                    0,
                    format!("map '{arrow}' is partial at {oname}"),
                ));
            }
            maps.push(row);
        }
        Ok(DFibMap::over_id(arrow, dom.clone(), cod.clone(), maps)?)
    };

    if natural {
        let types = fib_of("U")
            .ok_or(ModelError::Parse(0, "natural mode needs 'object U'".into()))?
            .clone();
        let terms = fib_of("E")
            .ok_or(ModelError::Parse(0, "natural mode needs 'object E'".into()))?
            .clone();
        let p = build_map("p", &terms, &types)?;
        Ok(ParsedModel::Natural(natural_model_check(
            base, types, terms, p,
        )?))
    } else {
        let theory = theory.ok_or(ModelError::Parse(0, "missing theory reference".into()))?;
        let tcat = &theory.cat;
        let mut obj_fibs: Vec<Arc<DFib>> = Vec::new();
        for o in tcat.objects() {
            let oname = tcat.object_name(o);
            let fib = fib_of(oname).ok_or_else(|| {
                ModelError::Parse(0, format!("missing 'object {oname} from ...'"))
            })?;
            obj_fibs.push(fib.clone());
        }
        let mut arr_maps: Vec<DFibMap> = Vec::new();
        for f in tcat.arrows() {
            let (s, t) = (tcat.src(f), tcat.tgt(f));
            if tcat.is_identity(f) {
                arr_maps.push(DFibMap::identity(obj_fibs[s].clone()));
            } else {
                arr_maps.push(build_map(tcat.arrow_name(f), &obj_fibs[s], &obj_fibs[t])?);
            }
        }
        Ok(ParsedModel::Full(validate_model(
            &name, theory, base, obj_fibs, arr_maps,
        )?))
    }
}
