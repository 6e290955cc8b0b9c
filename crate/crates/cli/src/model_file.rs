//! Plain-text model files.
//!
//! ```text
//! # comments and blank lines are ignored
//! label = family A (n=1)
//! field = prime 2147483647
//! weights = 0 0 0 0 0
//! seed = 0
//! m01 = t1
//! m02 = x0
//! ...
//! m34 = x0^2 - 3*x1*x4
//! ```
//!
//! `field` (`rational` or `prime p`), `weights` and all ten entries `mij`
//! (`i < j`) are required; `label` and `seed` are optional. `write` emits the
//! keys in the order above, so reading and writing a written file is the
//! identity on its bytes.

use std::collections::BTreeMap;

use thiserror::Error;
use trigon_core::pfaffian::{ModelError, PfaffianModel, UPPER};
use trigon_core::poly::{parse, ParseError};
use trigon_core::scalar::ScalarError;
use trigon_core::{AmbientWeights, FieldMode};

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given twice")]
    Duplicate { line: usize, key: String },
    #[error("missing `{0}`")]
    Missing(String),
    #[error("line {line}: bad field `{value}` (use `rational` or `prime <p>`)")]
    BadField { line: usize, value: String },
    #[error("line {line}: {source}")]
    Prime { line: usize, source: ScalarError },
    #[error("line {line}: weights must be five nonnegative integers")]
    BadWeights { line: usize },
    #[error("line {line}: seed must be a nonnegative integer")]
    BadSeed { line: usize },
    #[error("line {line} ({key}): {source}")]
    Entry {
        line: usize,
        key: String,
        source: ParseError,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn entry_key((i, j): (usize, usize)) -> String {
    format!("m{}{}", i, j)
}

pub fn parse_field(value: &str) -> Option<Result<FieldMode, ScalarError>> {
    let mut words = value.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("rational"), None, None) => Some(Ok(FieldMode::Rational)),
        (Some("prime"), Some(p), None) => p.parse().ok().map(FieldMode::prime),
        _ => None,
    }
}

pub fn read(text: &str) -> Result<PfaffianModel, ModelFileError> {
    let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let entry_keys: Vec<String> = UPPER.iter().map(|&p| entry_key(p)).collect();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or(ModelFileError::Syntax { line })?;
        let key = key.trim().to_string();
        let known = ["label", "field", "weights", "seed"].contains(&key.as_str())
            || entry_keys.contains(&key);
        if !known {
            return Err(ModelFileError::UnknownKey { line, key });
        }
        if values.contains_key(&key) {
            return Err(ModelFileError::Duplicate { line, key });
        }
        values.insert(key, (line, value.trim().to_string()));
    }
    let get = |k: &str| values.get(k).ok_or_else(|| ModelFileError::Missing(k.to_string()));

    let (line, field) = get("field")?;
    let mode = parse_field(field)
        .ok_or_else(|| ModelFileError::BadField {
            line: *line,
            value: field.clone(),
        })?
        .map_err(|source| ModelFileError::Prime { line: *line, source })?;

    let (line, w) = get("weights")?;
    let parsed: Option<Vec<i64>> = w.split_whitespace().map(|s| s.parse().ok()).collect();
    let weights = parsed
        .and_then(|v| <[i64; 5]>::try_from(v).ok())
        .and_then(|a| AmbientWeights::new(a).ok())
        .ok_or(ModelFileError::BadWeights { line: *line })?;

    let seed = match values.get("seed") {
        None => None,
        Some((line, s)) => Some(s.parse().map_err(|_| ModelFileError::BadSeed { line: *line })?),
    };

    let mut upper = Vec::with_capacity(10);
    for key in &entry_keys {
        let (line, src) = get(key)?;
        let p = parse(src, mode).map_err(|source| ModelFileError::Entry {
            line: *line,
            key: key.clone(),
            source,
        })?;
        upper.push(p);
    }
    let label = values.get("label").map_or("model", |(_, l)| l.as_str());
    let mut model = PfaffianModel::new(label, weights, upper.try_into().expect("ten entries"))?;
    model.seed = seed;
    Ok(model)
}

/// Canonical text of a model; `mode` is used when every entry is zero.
pub fn write(model: &PfaffianModel, mode: FieldMode) -> String {
    let mode = model.mode().unwrap_or(mode);
    let mut out = String::new();
    out.push_str(&format!("label = {}\n", model.label));
    out.push_str(&format!("field = {}\n", mode));
    let w: Vec<String> = model.weights.0.iter().map(|a| a.to_string()).collect();
    out.push_str(&format!("weights = {}\n", w.join(" ")));
    if let Some(s) = model.seed {
        out.push_str(&format!("seed = {}\n", s));
    }
    for (&pos, p) in UPPER.iter().zip(model.upper()) {
        out.push_str(&format!("{} = {}\n", entry_key(pos), p));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use trigon_core::pfaffian::{family_a, random_quadrics};

    #[test]
    fn round_trip() {
        for mode in [FieldMode::Rational, FieldMode::default_prime()] {
            let m = family_a(2, random_quadrics(4, mode)).unwrap().with_seed(4);
            let text = write(&m, mode);
            let back = read(&text).unwrap();
            assert_eq!(back, m);
            assert_eq!(write(&back, mode), text);
        }
    }

    #[test]
    fn errors_name_the_line() {
        let text = "field = rational\nweights = 0 0 0 0 0\nm01 = t1 +\n";
        match read(text).unwrap_err() {
            ModelFileError::Entry { line, key, .. } => assert_eq!((line, key.as_str()), (3, "m01")),
            e => panic!("{}", e),
        }
        assert!(matches!(read("field = prime 10\n"), Err(ModelFileError::Prime { line: 1, .. })));
        assert!(matches!(read("colour = red\n"), Err(ModelFileError::UnknownKey { line: 1, .. })));
        assert!(matches!(
            read("field = rational\nweights = 0 0 0 0\n"),
            Err(ModelFileError::BadWeights { line: 2 })
        ));
        assert!(matches!(
            read("field = rational\nweights = 0 0 0 0 0\n"),
            Err(ModelFileError::Missing(k)) if k == "m01"
        ));
    }
}
