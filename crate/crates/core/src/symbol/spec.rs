//! JSON symbol specification files.

use serde_json::Value;

use super::{builtin, parse_rational, Entry, HomogeneousSymbol};
use crate::error::{Error, Result};

/// Parses `{ "dim": N, "mu": μ, "r": r, "entries": [[...]] }` or `{ "builtin": name }`.
pub fn parse_symbol_spec(text: &str) -> Result<HomogeneousSymbol> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidSymbol("symbol spec must be a JSON object".into()))?;
    if let Some(name) = obj.get("builtin") {
        let name = name
            .as_str()
            .ok_or_else(|| Error::InvalidSymbol("'builtin' must be a string".into()))?;
        return builtin(name);
    }
    let dim = obj
        .get("dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidSymbol("missing positive integer 'dim'".into()))? as usize;
    let mu = obj.get("mu").and_then(Value::as_f64).unwrap_or(0.0);
    let r = obj.get("r").and_then(Value::as_u64).unwrap_or(2) as usize;
    let name = obj.get("name").and_then(Value::as_str).unwrap_or("custom").to_string();
    let rows = obj
        .get("entries")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidSymbol("missing 'entries' array".into()))?;
    if rows.len() != dim {
        return Err(Error::InvalidSymbol(format!(
            "dimension mismatch: dim = {dim} but {} rows",
            rows.len()
        )));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (j, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::InvalidSymbol(format!("row {j} is not an array")))?;
        if row.len() != dim {
            return Err(Error::InvalidSymbol(format!(
                "dimension mismatch: row {j} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for (k, cell) in row.iter().enumerate() {
            let src = cell
                .as_str()
                .ok_or_else(|| Error::InvalidSymbol(format!("entry [{j}][{k}] is not a string")))?;
            let f = parse_rational(src).map_err(|e| match e {
                Error::Parse { line, column, message } => Error::Parse {
                    line,
                    column,
                    message: format!("entry [{j}][{k}]: {message}"),
                },
                other => other,
            })?;
            entries.push(Entry::Rational(f));
        }
    }
    HomogeneousSymbol::new(name, dim, mu, r, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, CMat, C64};
    use crate::tolerances::Tolerances;

    #[test]
    fn explicit_spec_round_trip() {
        let s = parse_symbol_spec(
            r#"{"dim": 2, "mu": 1, "r": 2,
            "entries": [["t + 2i", "0"], ["1", "t - 3i"]]}"#,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        let (ep, em) = s.limits_epm(&Tolerances::default()).unwrap();
        assert!((ep - CMat::identity(2, 2)).norm() < 1e-15);
        assert!((em + CMat::identity(2, 2)).norm() < 1e-15);
        let a = s.eval_slice(&[1.0, 0.0], 0.0).unwrap();
        assert!((a[(0, 0)] - C64::new(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(
            parse_symbol_spec(r#"{"dim": 2, "entries": [["1"]]}"#),
            Err(Error::InvalidSymbol(_))
        ));
        match parse_symbol_spec(r#"{"dim": 1, "entries": [["(t + 1))"]]}"#) {
            Err(Error::Parse { column: 8, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        match parse_symbol_spec("{\n  \"dim\": 1,,\n}") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jordan2_limits() {
        let s = parse_symbol_spec(r#"{"builtin": "jordan2"}"#).unwrap();
        let (ep, em) = s.limits_epm(&Tolerances::default()).unwrap();
        let e = ep.try_inverse().unwrap() * em;
        let want = CMat::from_row_slice(
            2,
            2,
            &[
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
            ],
        );
        assert!(max_abs(&(e - want)) < 1e-15);
    }
}
