//! `.fincat` file format:
//!
//! ```text
//! objects: a, b, c
//! arrow f : a -> b
//! compose g . f = h
//! # identities are implicit and named id_<object>
//! ```

use super::{CatError, FinCat, FinCatBuilder};

pub fn parse_fincat(name: &str, text: &str) -> Result<FinCat, CatError> {
    let mut b = FinCatBuilder::new(name);
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| CatError::Parse(lineno + 1, msg.to_string());
        if let Some(rest) = line.strip_prefix("objects:") {
            for o in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                b.object(o);
            }
        } else if let Some(rest) = line.strip_prefix("arrow ") {
            // f : a -> b  (separators are space-delimited so names may
            // contain punctuation)
            let (fname, sig) = rest.split_once(" : ").ok_or_else(|| err("expected ' : '"))?;
            let (src, tgt) = sig.split_once(" -> ").ok_or_else(|| err("expected ' -> '"))?;
            b.arrow(fname.trim(), src.trim(), tgt.trim());
        } else if let Some(rest) = line.strip_prefix("compose ") {
            // g . f = h
            let (lhs, h) = rest.split_once(" = ").ok_or_else(|| err("expected ' = '"))?;
            let (g, f) = lhs.split_once(" . ").ok_or_else(|| err("expected ' . '"))?;
            b.compose(g.trim(), f.trim(), h.trim());
        } else {
            return Err(err(&format!("unrecognized line: {line}")));
        }
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_through_display() {
        let cat = parse_fincat(
            "m",
            "objects: x, y\narrow f : x -> y\narrow e : x -> x\ncompose e . e = e\ncompose f . e = f\n",
        )
        .unwrap();
        let text = cat.to_string();
        let again = parse_fincat("m", &text).unwrap();
        assert_eq!(cat.arrow_count(), again.arrow_count());
        assert_eq!(cat.object_count(), again.object_count());
    }

    #[test]
    fn missing_composite_rejected() {
        let res = parse_fincat("m", "objects: x\narrow e : x -> x\n");
        assert!(matches!(res, Err(CatError::MissingComposite(..))));
    }
}
